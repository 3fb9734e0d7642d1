//! Sparse frequency-space representation of real vector fields.

use super::frequency::{shell_of, Frequency};
use super::leray::apply_leray;
use crate::{Error, Result};
use num_complex::Complex64;
use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hasher};

/// Complex Fourier coefficient of a 3-component field.
pub type Coeff = [Complex64; 3];

/// Fixed-key 64-bit mixer so map iteration order is a pure function of the
/// insertion sequence. Outputs must be reproducible across runs: several
/// reductions iterate the table directly and float addition does not
/// commute with reordering.
#[derive(Default)]
pub struct FreqHasher(u64);

impl Hasher for FreqHasher {
    fn finish(&self) -> u64 {
        self.0
    }
    fn write(&mut self, bytes: &[u8]) {
        // fxhash-style multiply-rotate fold over 8-byte words.
        const SEED: u64 = 0x51_7c_c1_b7_27_22_0a_95;
        let mut chunks = bytes.chunks_exact(8);
        for chunk in &mut chunks {
            let w = u64::from_le_bytes(chunk.try_into().unwrap());
            self.0 = (self.0.rotate_left(5) ^ w).wrapping_mul(SEED);
        }
        let rem = chunks.remainder();
        if !rem.is_empty() {
            let mut buf = [0u8; 8];
            buf[..rem.len()].copy_from_slice(rem);
            let w = u64::from_le_bytes(buf);
            self.0 = (self.0.rotate_left(5) ^ w).wrapping_mul(SEED);
        }
    }
    fn write_u64(&mut self, v: u64) {
        self.0 = (self.0.rotate_left(5) ^ v).wrapping_mul(0x51_7c_c1_b7_27_22_0a_95);
    }
    fn write_i64(&mut self, v: i64) {
        self.write_u64(v as u64);
    }
}

type FreqMap = HashMap<Frequency, Coeff, BuildHasherDefault<FreqHasher>>;

/// A finite map `ξ ↦ û(ξ)` holding the nonzero Fourier coefficients of a
/// real vector field `u(x) = Σ_ξ û(ξ) e^{iξ·x}` on `[0, 2π]³`.
///
/// Invariants maintained by construction and checkable on demand:
/// Hermitian symmetry `û(−ξ) = conj(û(ξ))` with both partners stored,
/// no explicit zero coefficients, and (where flagged) `ξ·û(ξ) = 0`.
#[derive(Clone, Debug, Default)]
pub struct SparseSpectralField {
    coeffs: FreqMap,
}

pub fn coeff_norm_sq(v: &Coeff) -> f64 {
    v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr()
}

pub fn coeff_conj(v: &Coeff) -> Coeff {
    [v[0].conj(), v[1].conj(), v[2].conj()]
}

impl SparseSpectralField {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Insert a single coefficient, dropping exact zeros. Does not insert
    /// the Hermitian partner; see [`insert_pair`](Self::insert_pair).
    pub fn insert(&mut self, xi: Frequency, v: Coeff) {
        if coeff_norm_sq(&v) > 0.0 {
            self.coeffs.insert(xi, v);
        } else {
            self.coeffs.remove(&xi);
        }
    }

    /// Insert `û(ξ) = v` together with `û(−ξ) = conj(v)`.
    pub fn insert_pair(&mut self, xi: Frequency, v: Coeff) {
        self.insert(xi, v);
        self.insert(-xi, coeff_conj(&v));
    }

    /// Add into an existing coefficient (used by accumulation paths).
    pub fn add_to(&mut self, xi: Frequency, v: Coeff) {
        let entry = self.coeffs.entry(xi).or_insert([Complex64::default(); 3]);
        for d in 0..3 {
            entry[d] += v[d];
        }
        if coeff_norm_sq(self.coeffs.get(&xi).unwrap()) == 0.0 {
            self.coeffs.remove(&xi);
        }
    }

    pub fn get(&self, xi: &Frequency) -> Option<&Coeff> {
        self.coeffs.get(xi)
    }

    pub fn contains(&self, xi: &Frequency) -> bool {
        self.coeffs.contains_key(xi)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Frequency, &Coeff)> {
        self.coeffs.iter()
    }

    /// Entries sorted lexicographically by frequency. All order-sensitive
    /// reductions and every serialization path go through this.
    pub fn sorted_entries(&self) -> Vec<(Frequency, Coeff)> {
        let mut v: Vec<_> = self.coeffs.iter().map(|(k, c)| (*k, *c)).collect();
        v.sort_unstable_by_key(|(k, _)| k.0);
        v
    }

    pub fn support(&self) -> Vec<Frequency> {
        let mut v: Vec<_> = self.coeffs.keys().copied().collect();
        v.sort_unstable_by_key(|k| k.0);
        v
    }

    /// Largest `|ξ_d|` over the support (0 for the empty field).
    pub fn max_linf(&self) -> i64 {
        self.coeffs.keys().map(|k| k.linf()).max().unwrap_or(0)
    }

    /// `|u|₂² = Σ_ξ |û(ξ)|²` (Plancherel under the normalized measure).
    pub fn l2_sq(&self) -> f64 {
        let mut entries = self.sorted_entries();
        entries.drain(..).map(|(_, v)| coeff_norm_sq(&v)).sum()
    }

    /// L² inner product `∫ u·v dx = Σ_ξ û(ξ)·conj(v̂(ξ))` (real part;
    /// the imaginary part vanishes for Hermitian fields).
    pub fn inner(&self, other: &SparseSpectralField) -> f64 {
        let (small, big) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = 0.0;
        for (xi, v) in small.sorted_entries() {
            if let Some(w) = big.get(&xi) {
                for d in 0..3 {
                    acc += (v[d] * w[d].conj()).re;
                }
            }
        }
        acc
    }

    /// Verify `û(−ξ) = conj(û(ξ))` for every stored mode.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|(xi, v)| match self.get(&-*xi) {
            Some(w) => {
                let c = coeff_conj(v);
                (0..3).all(|d| (w[d] - c[d]).norm() <= tol * (1.0 + v[d].norm()))
            }
            None => false,
        })
    }

    /// Verify `|ξ·û(ξ)| ≤ tol·|û(ξ)|` for all `ξ ≠ 0`.
    pub fn is_divergence_free(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|(xi, v)| {
            if xi.is_zero() {
                return true;
            }
            let x = xi.as_f64();
            let dot = v[0] * x[0] + v[1] * x[1] + v[2] * x[2];
            dot.norm() <= tol * coeff_norm_sq(v).sqrt() * xi.norm()
        })
    }

    /// Leray projection: every coefficient replaced by `p(ξ) û(ξ)`.
    pub fn project_leray(&self) -> SparseSpectralField {
        let mut out = SparseSpectralField::new();
        for (xi, v) in self.coeffs.iter() {
            out.insert(*xi, apply_leray(*xi, *v));
        }
        out
    }

    /// Littlewood-Paley projection `u_q`: keep shells equal to `q`.
    pub fn lp_project(&self, q: u32) -> SparseSpectralField {
        self.filter(|xi| shell_of(xi) == q)
    }

    /// Extended projection `ũ_q = u_{q−1} + u_q + u_{q+1}` (`u_{−1} = 0`).
    pub fn lp_project_extended(&self, q: u32) -> SparseSpectralField {
        let lo = q.saturating_sub(1);
        self.filter(|xi| {
            let s = shell_of(xi);
            s >= lo && s <= q + 1
        })
    }

    /// Dyadic-ball projection `u_{≤q}`.
    pub fn ball_project(&self, q: u32) -> SparseSpectralField {
        self.filter(|xi| shell_of(xi) <= q)
    }

    fn filter(&self, keep: impl Fn(Frequency) -> bool) -> SparseSpectralField {
        let mut out = SparseSpectralField::new();
        for (xi, v) in self.coeffs.iter() {
            if keep(*xi) {
                out.insert(*xi, *v);
            }
        }
        out
    }

    /// Shell indices present in the support, ascending.
    pub fn shells(&self) -> Vec<u32> {
        let mut qs: Vec<u32> = self.coeffs.keys().map(|xi| shell_of(*xi)).collect();
        qs.sort_unstable();
        qs.dedup();
        qs
    }

    /// Fourier multiplier `û(ξ) ↦ |ξ|^β û(ξ)`.
    ///
    /// Fails for `β < 0` when the mean mode is present (the symbol is
    /// singular at zero frequency).
    pub fn fractional_multiplier(&self, beta: f64) -> Result<SparseSpectralField> {
        if beta < 0.0 && self.coeffs.contains_key(&Frequency::ZERO) {
            return Err(Error::SingularAtZeroFrequency);
        }
        let mut out = SparseSpectralField::new();
        for (xi, v) in self.coeffs.iter() {
            let factor = if xi.is_zero() {
                if beta == 0.0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                (xi.norm_sq() as f64).powf(0.5 * beta)
            };
            out.insert(*xi, [v[0] * factor, v[1] * factor, v[2] * factor]);
        }
        Ok(out)
    }

    /// Pointwise linear combination `self + scale · other`.
    pub fn add_scaled(&self, other: &SparseSpectralField, scale: f64) -> SparseSpectralField {
        let mut out = self.clone();
        for (xi, v) in other.coeffs.iter() {
            out.add_to(*xi, [v[0] * scale, v[1] * scale, v[2] * scale]);
        }
        out
    }

    /// Merge a field with disjoint support; errors would be silent
    /// coefficient addition, so collisions panic.
    pub fn merge_disjoint(&mut self, other: &SparseSpectralField) {
        for (xi, v) in other.coeffs.iter() {
            let prev = self.coeffs.insert(*xi, *v);
            assert!(prev.is_none(), "support collision at {xi:?}");
        }
    }
}
