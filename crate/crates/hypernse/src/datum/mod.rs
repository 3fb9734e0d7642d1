//! Construction and verification of the lattice-block initial condition.
//!
//! The datum is `U = Σ_j (U_{q_j} + U_{q_j−1})` with, on the Fourier side,
//!
//! ```text
//! Û_{q_j}(ξ)   = m λ_{q_j}^{2α−4} ( ê₂(ξ) χ_{A∪A*} + i(ê₂−ê₁)(ξ) χ_C − i(ê₂−ê₁)(ξ) χ_{C*} )
//! Û_{q_j−1}(ξ) = m λ_{q_j}^{2α−4} ê₁(ξ) χ_{B∪B*}
//! ```
//!
//! where `ê_k(ξ) = p(ξ) e_k` and `m` is an optional global amplitude
//! multiplier (default 1, recorded in all outputs). Both components share
//! the amplitude `λ_{q_j}^{2α−4}`; the B-block component is deliberately
//! not rescaled by `λ_{q_j−1}`.

pub mod blocks;
pub mod dirichlet;

use crate::spectral::frequency::{shell_of, wavenumber, Frequency};
use crate::spectral::leray::projected_basis;
use crate::spectral::sparse::SparseSpectralField;
use crate::{Error, Result};
use blocks::{build_blocks, BlockFamily};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use blocks::IntBox;

/// Dissipation exponent and shell sequence for one datum.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SequenceSpec {
    pub alpha: f64,
    /// Strictly increasing shell indices `q_1 < q_2 < …`, each ≥ 2.
    pub qs: Vec<u32>,
    /// When set, the far-apart admissibility condition is not enforced;
    /// the flag is recorded in every output that derives from the datum.
    pub relaxed: bool,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PairCheck {
    pub i: usize,
    pub qi: u32,
    pub qi1: u32,
    /// `λ_{q_i}^{2α} λ_{q_{i+1}}^{4α−5}`; admissible iff < 1 strictly.
    pub value: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub alpha: f64,
    pub qs: Vec<u32>,
    pub pairs: Vec<PairCheck>,
    pub all_pass: bool,
}

/// Check `α ∈ [1, 5/4)`, monotonicity, `q_1 ≥ 2`, and the far-apart
/// condition `λ_{q_i}^{2α} λ_{q_{i+1}}^{4α−5} < 1` for consecutive pairs.
pub fn validate_sequence(alpha: f64, qs: &[u32]) -> Result<AdmissibilityReport> {
    if !(1.0..1.25).contains(&alpha) {
        return Err(Error::ExponentOutOfRange(alpha));
    }
    if qs.is_empty() || qs[0] < 2 || qs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidSequence(qs.to_vec()));
    }
    let mut pairs = Vec::new();
    for (i, w) in qs.windows(2).enumerate() {
        let (qi, qi1) = (w[0], w[1]);
        // log2 of the product: 2α q_i + (4α−5) q_{i+1}; < 0 iff admissible.
        let exponent = 2.0 * alpha * qi as f64 + (4.0 * alpha - 5.0) * qi1 as f64;
        let value = exponent.exp2();
        pairs.push(PairCheck {
            i: i + 1,
            qi,
            qi1,
            value,
            pass: exponent < 0.0,
        });
    }
    let all_pass = pairs.iter().all(|p| p.pass);
    Ok(AdmissibilityReport {
        alpha,
        qs: qs.to_vec(),
        pairs,
        all_pass,
    })
}

/// Datum parameters: the sequence plus the optional amplitude multiplier.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DatumConfig {
    pub sequence: SequenceSpec,
    #[serde(default = "default_multiplier")]
    pub multiplier: f64,
}

fn default_multiplier() -> f64 {
    1.0
}

impl DatumConfig {
    pub fn new(alpha: f64, qs: &[u32]) -> Self {
        DatumConfig {
            sequence: SequenceSpec {
                alpha,
                qs: qs.to_vec(),
                relaxed: false,
            },
            multiplier: 1.0,
        }
    }

    pub fn relaxed(mut self) -> Self {
        self.sequence.relaxed = true;
        self
    }

    pub fn with_multiplier(mut self, m: f64) -> Self {
        self.multiplier = m;
        self
    }
}

/// One component pair `(U_{q_j}, U_{q_j−1})` with its blocks.
#[derive(Clone, Debug)]
pub struct ComponentPair {
    /// 1-based component index `j`.
    pub j: usize,
    pub q: u32,
    pub blocks: BlockFamily,
    /// `U_{q_j}` (shell `q_j`: blocks A, C and conjugates).
    pub hi: SparseSpectralField,
    /// `U_{q_j−1}` (shell `q_j − 1`: block B and conjugate).
    pub lo: SparseSpectralField,
}

/// The assembled datum.
#[derive(Clone, Debug)]
pub struct Datum {
    pub config: DatumConfig,
    pub components: Vec<ComponentPair>,
    /// `U = Σ_j (U_{q_j} + U_{q_j−1})` (disjoint supports).
    pub field: SparseSpectralField,
}

fn cplx(v: [f64; 3]) -> [Complex64; 3] {
    [
        Complex64::new(v[0], 0.0),
        Complex64::new(v[1], 0.0),
        Complex64::new(v[2], 0.0),
    ]
}

fn cplx_i(v: [f64; 3], sign: f64) -> [Complex64; 3] {
    [
        Complex64::new(0.0, sign * v[0]),
        Complex64::new(0.0, sign * v[1]),
        Complex64::new(0.0, sign * v[2]),
    ]
}

/// Build `(U_{q_j}, U_{q_j−1})` for a single shell index.
pub fn build_component_pair(q: u32, alpha: f64, multiplier: f64) -> (SparseSpectralField, SparseSpectralField, BlockFamily) {
    let blocks = build_blocks(q);
    let amp = multiplier * wavenumber(q).powf(2.0 * alpha - 4.0);
    let mut hi = SparseSpectralField::new();
    for xi in blocks.a.enumerate() {
        let e2 = projected_basis(xi, 1);
        // ê₂(ξ) = 0 would need ξ ∥ e₂, impossible on A (x-coordinate ≥ 0.9λ).
        debug_assert!(e2.iter().any(|c| c.abs() > 0.0));
        hi.insert(xi, cplx([amp * e2[0], amp * e2[1], amp * e2[2]]));
        let e2m = projected_basis(-xi, 1);
        hi.insert(-xi, cplx([amp * e2m[0], amp * e2m[1], amp * e2m[2]]));
    }
    for xi in blocks.c.enumerate() {
        let d = diff_basis(xi);
        hi.insert(xi, cplx_i([amp * d[0], amp * d[1], amp * d[2]], 1.0));
        let dm = diff_basis(-xi);
        hi.insert(-xi, cplx_i([amp * dm[0], amp * dm[1], amp * dm[2]], -1.0));
    }
    let mut lo = SparseSpectralField::new();
    for xi in blocks.b.enumerate() {
        let e1 = projected_basis(xi, 0);
        lo.insert(xi, cplx([amp * e1[0], amp * e1[1], amp * e1[2]]));
        let e1m = projected_basis(-xi, 0);
        lo.insert(-xi, cplx([amp * e1m[0], amp * e1m[1], amp * e1m[2]]));
    }
    (hi, lo, blocks)
}

/// `(ê₂ − ê₁)(ξ)`.
fn diff_basis(xi: Frequency) -> [f64; 3] {
    let e2 = projected_basis(xi, 1);
    let e1 = projected_basis(xi, 0);
    [e2[0] - e1[0], e2[1] - e1[1], e2[2] - e1[2]]
}

/// Assemble the datum. Requires an admissible sequence unless `relaxed`;
/// consecutive shells must still differ by at least 2 so that the
/// component families `{q_j − 1, q_j}` stay disjoint.
pub fn assemble_datum(config: &DatumConfig) -> Result<Datum> {
    let seq = &config.sequence;
    let report = validate_sequence(seq.alpha, &seq.qs)?;
    if !seq.relaxed {
        if let Some(bad) = report.pairs.iter().find(|p| !p.pass) {
            return Err(Error::InadmissibleSequence {
                i: bad.i,
                i1: bad.i + 1,
                qi: bad.qi,
                qi1: bad.qi1,
                value: bad.value,
            });
        }
    }
    if config.multiplier <= 0.0 {
        return Err(Error::InvalidMultiplier(config.multiplier));
    }
    for w in seq.qs.windows(2) {
        if w[1] - w[0] < 2 {
            return Err(Error::OverlappingSupports(w[0]));
        }
    }
    let mut components = Vec::new();
    let mut field = SparseSpectralField::new();
    for (idx, &q) in seq.qs.iter().enumerate() {
        let (hi, lo, blocks) = build_component_pair(q, seq.alpha, config.multiplier);
        field.merge_disjoint(&hi);
        field.merge_disjoint(&lo);
        components.push(ComponentPair {
            j: idx + 1,
            q,
            blocks,
            hi,
            lo,
        });
    }
    Ok(Datum {
        config: config.clone(),
        components,
        field,
    })
}

impl Datum {
    pub fn alpha(&self) -> f64 {
        self.config.sequence.alpha
    }

    pub fn component(&self, j: usize) -> Result<&ComponentPair> {
        self.components
            .get(j.checked_sub(1).ok_or(Error::IndexOutOfRange(j, self.components.len()))?)
            .ok_or(Error::IndexOutOfRange(j, self.components.len()))
    }

    /// `Ũ_{q_j} = U_{q_j−1} + U_{q_j}` (the datum has no modes in shell
    /// `q_j + 1`, so the extended projection collapses to two terms).
    pub fn extended_component(&self, j: usize) -> Result<SparseSpectralField> {
        let c = self.component(j)?;
        let mut f = c.hi.clone();
        f.merge_disjoint(&c.lo);
        Ok(f)
    }

    /// `U_{≤ q_{j−1}}`: every component with shells at or below `q_{j−1}`,
    /// i.e. the full families for indices `< j` (empty for `j = 1`).
    pub fn ball_below(&self, j: usize) -> Result<SparseSpectralField> {
        self.component(j)?;
        let mut f = SparseSpectralField::new();
        for c in &self.components[..j - 1] {
            f.merge_disjoint(&c.hi);
            f.merge_disjoint(&c.lo);
        }
        Ok(f)
    }

    /// Plancherel `|U_{q_j}|₂` with the companion ratio against the
    /// predicted scale `λ_{q_j}^{2α−5/2}`.
    pub fn shell_l2(&self, j: usize) -> Result<ShellL2Row> {
        let c = self.component(j)?;
        let l2 = c.hi.l2_sq().sqrt();
        let scale = wavenumber(c.q).powf(2.0 * self.alpha() - 2.5);
        Ok(ShellL2Row {
            j,
            q: c.q,
            l2,
            ratio: l2 / (self.config.multiplier * scale),
        })
    }

    pub fn metadata(&self) -> DatumMetadata {
        DatumMetadata {
            alpha: self.alpha(),
            qs: self.config.sequence.qs.clone(),
            relaxed: self.config.sequence.relaxed,
            multiplier: self.config.multiplier,
            mode_count: self.field.len(),
            shell_l2: (1..=self.components.len())
                .map(|j| self.shell_l2(j).expect("component index in range"))
                .collect(),
        }
    }

    /// Structural checks backing `hypernse verify`.
    pub fn verify_structure(field: &SparseSpectralField, qs: &[u32]) -> StructuralReport {
        let hermitian = field.is_hermitian(1e-12);
        let divergence_free = field.is_divergence_free(1e-12);
        let shells = field.shells();
        let allowed: Vec<u32> = qs.iter().flat_map(|&q| [q - 1, q]).collect();
        let shell_placement = shells.iter().all(|s| allowed.contains(s));
        // "U has no modes in the (q_j + 1)-st shell" for each j.
        let no_upper_leak = qs.iter().all(|&q| !shells.contains(&(q + 1)));
        StructuralReport {
            mode_count: field.len(),
            shells,
            hermitian,
            divergence_free,
            shell_placement,
            no_upper_leak,
            pass: hermitian && divergence_free && shell_placement && no_upper_leak,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ShellL2Row {
    pub j: usize,
    pub q: u32,
    pub l2: f64,
    /// `|U_{q_j}|₂ / λ_{q_j}^{2α−5/2}` (per unit multiplier).
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DatumMetadata {
    pub alpha: f64,
    pub qs: Vec<u32>,
    pub relaxed: bool,
    pub multiplier: f64,
    pub mode_count: usize,
    pub shell_l2: Vec<ShellL2Row>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StructuralReport {
    pub mode_count: usize,
    pub shells: Vec<u32>,
    pub hermitian: bool,
    pub divergence_free: bool,
    pub shell_placement: bool,
    pub no_upper_leak: bool,
    pub pass: bool,
}

/// `(|U_{q}|₂², |U_{q−1}|₂²)` for a standalone pair, computed by streaming
/// over the blocks without materializing the fields. Conjugate blocks
/// contribute the same sums, hence the factors of two.
pub fn pair_l2_sq_streaming(q: u32, alpha: f64, multiplier: f64) -> (f64, f64) {
    let blocks = build_blocks(q);
    let amp = multiplier * wavenumber(q).powf(2.0 * alpha - 4.0);
    let amp_sq = amp * amp;
    let mut hi = 0.0;
    for xi in blocks.a.enumerate() {
        let e2 = projected_basis(xi, 1);
        hi += e2.iter().map(|c| c * c).sum::<f64>();
    }
    for xi in blocks.c.enumerate() {
        let d = diff_basis(xi);
        hi += d.iter().map(|c| c * c).sum::<f64>();
    }
    let mut lo = 0.0;
    for xi in blocks.b.enumerate() {
        let e1 = projected_basis(xi, 0);
        lo += e1.iter().map(|c| c * c).sum::<f64>();
    }
    (2.0 * amp_sq * hi, 2.0 * amp_sq * lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::{min_grid, DenseGridField};

    #[test]
    fn admissibility_examples() {
        // α = 1, (2,5): 2^{4-5} = 0.5 < 1, pass.
        let r = validate_sequence(1.0, &[2, 5]).unwrap();
        assert!(r.all_pass);
        assert!((r.pairs[0].value - 0.5).abs() < 1e-15);
        // α = 1, (2,4): value exactly 1, strict inequality fails.
        let r = validate_sequence(1.0, &[2, 4]).unwrap();
        assert!(!r.all_pass);
        assert!((r.pairs[0].value - 1.0).abs() < 1e-15);
        // α = 1.2, (2,25): exponent 4.8 − 5.0 < 0, pass.
        let r = validate_sequence(1.2, &[2, 25]).unwrap();
        assert!(r.all_pass);

        assert!(matches!(
            validate_sequence(1.3, &[2, 5]),
            Err(Error::ExponentOutOfRange(_))
        ));
        assert!(matches!(
            validate_sequence(1.25, &[2, 5]),
            Err(Error::ExponentOutOfRange(_))
        ));
        assert!(validate_sequence(1.0, &[1, 5]).is_err());
        assert!(validate_sequence(1.0, &[5, 5]).is_err());
    }

    #[test]
    fn j1_q4_datum_has_110_modes_and_clean_structure() {
        let datum = assemble_datum(&DatumConfig::new(1.0, &[4]).relaxed()).unwrap();
        assert_eq!(datum.field.len(), 110); // 54 + 54 + 2
        assert!(datum.field.is_hermitian(0.0));
        assert!(datum.field.is_divergence_free(1e-12));
        let rep = Datum::verify_structure(&datum.field, &[4]);
        assert!(rep.pass);
        // ball projection at q_1 recovers the whole (single-pair) datum
        let ball = datum.field.ball_project(4);
        assert_eq!(ball.len(), datum.field.len());
    }

    #[test]
    fn coefficient_at_16_0_1_is_exactly_e2_scaled() {
        // ξ = (16,0,1) ∈ A₄, α = 1: ξ·e₂ = 0 so p(ξ)e₂ = e₂ and the
        // coefficient is 2^{−8} e₂ exactly.
        let (hi, _, _) = build_component_pair(4, 1.0, 1.0);
        let v = hi.get(&Frequency::new(16, 0, 1)).unwrap();
        assert_eq!(v[0], Complex64::new(0.0, 0.0));
        assert_eq!(v[1], Complex64::new(2f64.powi(-8), 0.0));
        assert_eq!(v[2], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn shell_l2_matches_direct_sum_over_modes() {
        // |U_4|₂² = 2^{-16} ( Σ_{A∪A*} |p(ξ)e₂|² + 2 Σ_C |p(ξ)(e₂−e₁)|² ).
        let datum = assemble_datum(&DatumConfig::new(1.0, &[4]).relaxed()).unwrap();
        let blocks = build_blocks(4);
        let mut expect = 0.0;
        for xi in blocks.a.enumerate() {
            for s in [1.0, -1.0] {
                let xi = Frequency::new(
                    (s as i64) * xi.0[0],
                    (s as i64) * xi.0[1],
                    (s as i64) * xi.0[2],
                );
                let e2 = projected_basis(xi, 1);
                expect += e2.iter().map(|c| c * c).sum::<f64>();
            }
        }
        for xi in blocks.c.enumerate() {
            let e2 = projected_basis(xi, 1);
            let e1 = projected_basis(xi, 0);
            let d = [e2[0] - e1[0], e2[1] - e1[1], e2[2] - e1[2]];
            expect += 2.0 * d.iter().map(|c| c * c).sum::<f64>();
        }
        expect *= 2f64.powi(-16);
        let got = datum.component(1).unwrap().hi.l2_sq();
        assert!((got - expect).abs() < 1e-15 * expect.max(1.0));
        // streaming path agrees
        let (hi_sq, lo_sq) = pair_l2_sq_streaming(4, 1.0, 1.0);
        assert!((hi_sq - expect).abs() < 1e-15 * expect);
        assert!((lo_sq - datum.component(1).unwrap().lo.l2_sq()).abs() < 1e-18);
    }

    #[test]
    fn datum_is_real_on_the_grid() {
        let datum = assemble_datum(&DatumConfig::new(1.0, &[4]).relaxed()).unwrap();
        let n = min_grid(datum.field.max_linf());
        let g = DenseGridField::from_sparse(&datum.field, n).unwrap();
        assert!(g.reality_defect < 1e-12, "defect {}", g.reality_defect);
    }

    #[test]
    fn two_component_datum_keeps_supports_disjoint() {
        let datum = assemble_datum(&DatumConfig::new(1.0, &[2, 5])).unwrap();
        let total: usize = datum
            .components
            .iter()
            .map(|c| c.hi.len() + c.lo.len())
            .sum();
        assert_eq!(total, datum.field.len());
        assert_eq!(datum.field.shells(), vec![1, 2, 4, 5]);
        // |U|₂² = Σ_j (|U_{q_j}|₂² + |U_{q_j−1}|₂²) by disjointness.
        let sum: f64 = datum
            .components
            .iter()
            .map(|c| c.hi.l2_sq() + c.lo.l2_sq())
            .sum();
        assert!((datum.field.l2_sq() - sum).abs() < 1e-15 * sum);
        // extended projection of the j-th component is U_{q_j−1} + U_{q_j}
        let ext = datum.extended_component(2).unwrap();
        let direct = datum.field.lp_project_extended(5);
        assert_eq!(ext.len(), direct.len());
        // adjacent sequences are rejected even when relaxed
        assert!(matches!(
            assemble_datum(&DatumConfig::new(1.0, &[2, 3]).relaxed()),
            Err(Error::OverlappingSupports(_))
        ));
        // inadmissible without relax: exit path
        assert!(matches!(
            assemble_datum(&DatumConfig::new(1.0, &[2, 4])),
            Err(Error::InadmissibleSequence { .. })
        ));
    }
}
