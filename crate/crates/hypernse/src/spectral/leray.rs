//! Symbol of the Leray-Hopf projection onto divergence-free fields.

use super::frequency::Frequency;
use num_complex::Complex64;

/// The 3×3 real symmetric matrix `p(ξ) = id − |ξ|^{-2} ξ⊗ξ` (`p(0) = id`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LerayMatrix(pub [[f64; 3]; 3]);

/// Build `p(ξ)` explicitly. Most callers want [`apply_leray`], which skips
/// materializing the matrix.
pub fn leray_symbol(xi: Frequency) -> LerayMatrix {
    let mut m = [[0.0; 3]; 3];
    if xi.is_zero() {
        for (d, row) in m.iter_mut().enumerate() {
            row[d] = 1.0;
        }
        return LerayMatrix(m);
    }
    let x = xi.as_f64();
    let inv_nsq = 1.0 / xi.norm_sq() as f64;
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = if i == j { 1.0 } else { 0.0 } - x[i] * x[j] * inv_nsq;
        }
    }
    LerayMatrix(m)
}

impl LerayMatrix {
    pub fn apply_real(&self, v: [f64; 3]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for i in 0..3 {
            out[i] = self.0[i][0] * v[0] + self.0[i][1] * v[1] + self.0[i][2] * v[2];
        }
        out
    }
}

/// `p(ξ) v` for a complex coefficient vector: `v − (ξ·v / |ξ|²) ξ`.
pub fn apply_leray(xi: Frequency, v: [Complex64; 3]) -> [Complex64; 3] {
    if xi.is_zero() {
        return v;
    }
    let x = xi.as_f64();
    let dot = v[0] * x[0] + v[1] * x[1] + v[2] * x[2];
    let scale = dot / (xi.norm_sq() as f64);
    [v[0] - scale * x[0], v[1] - scale * x[1], v[2] - scale * x[2]]
}

/// `p(ξ) e_k` for a standard basis vector, as a real 3-vector.
pub fn projected_basis(xi: Frequency, k: usize) -> [f64; 3] {
    let mut e = [0.0; 3];
    e[k] = 1.0;
    if xi.is_zero() {
        return e;
    }
    let x = xi.as_f64();
    let scale = x[k] / xi.norm_sq() as f64;
    [e[0] - scale * x[0], e[1] - scale * x[1], e[2] - scale * x[2]]
}
