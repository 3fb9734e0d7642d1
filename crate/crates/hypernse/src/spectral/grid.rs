//! Dense grid realizations of spectral fields and L^r quadrature.

use super::fft3::{freq_of, index_of, Fft3};
use super::frequency::Frequency;
use super::sparse::SparseSpectralField;
use crate::{Error, Result};
use num_complex::Complex64;

/// Smallest power of two `≥ x`.
pub fn next_pow2(x: usize) -> usize {
    x.next_power_of_two()
}

/// Smallest grid that represents support `|ξ|_∞ ≤ m` without Nyquist
/// folding: `n ≥ 2m + 2`.
pub fn min_grid(max_linf: i64) -> usize {
    next_pow2((2 * max_linf.max(0) + 2) as usize)
}

/// A 3-component field realized on the uniform `n³` grid of `[0, 2π]³`,
/// together with its spectral mirror.
pub struct DenseGridField {
    n: usize,
    pub samples: [Vec<f64>; 3],
    pub spectral: [Vec<Complex64>; 3],
    /// Largest `|Im u_c(x)|` observed when synthesizing, relative to the
    /// largest sample magnitude; a reality/Hermitian-symmetry defect gauge.
    pub reality_defect: f64,
}

impl DenseGridField {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Materialize a sparse field. Requires `n ≥ 2·max|ξ|_∞ + 2`.
    pub fn from_sparse(field: &SparseSpectralField, n: usize) -> Result<Self> {
        let max_linf = field.max_linf();
        if (n as i64) < 2 * max_linf + 2 {
            return Err(Error::GridTooSmall { n, max_linf });
        }
        let mut fft = Fft3::new(n);
        let vol = n * n * n;
        let mut samples = [vec![0.0; vol], vec![0.0; vol], vec![0.0; vol]];
        let mut spectral = [
            vec![Complex64::default(); vol],
            vec![Complex64::default(); vol],
            vec![Complex64::default(); vol],
        ];
        let mut defect = 0.0f64;
        let mut amp = 0.0f64;
        let support_h = max_linf.max(0) as usize;
        let mut cube = vec![Complex64::default(); vol];
        for c in 0..3 {
            cube.iter_mut().for_each(|v| *v = Complex64::default());
            for (xi, v) in field.iter() {
                let i = cube_index(*xi, n);
                cube[i] = v[c];
                spectral[c][i] = v[c];
            }
            fft.inverse(&mut cube, support_h);
            for (s, z) in samples[c].iter_mut().zip(cube.iter()) {
                *s = z.re;
                amp = amp.max(z.re.abs());
                defect = defect.max(z.im.abs());
            }
        }
        let reality_defect = if amp > 0.0 { defect / amp } else { defect };
        Ok(DenseGridField {
            n,
            samples,
            spectral,
            reality_defect,
        })
    }

    /// Recompute the spectral mirror from the samples (round-trip check).
    pub fn forward_resync(&mut self) {
        let n = self.n;
        let vol = n * n * n;
        let scale = 1.0 / vol as f64;
        let mut fft = Fft3::new(n);
        let mut cube = vec![Complex64::default(); vol];
        for c in 0..3 {
            for (z, &s) in cube.iter_mut().zip(self.samples[c].iter()) {
                *z = Complex64::new(s, 0.0);
            }
            fft.forward(&mut cube, n / 2);
            for (dst, &z) in self.spectral[c].iter_mut().zip(cube.iter()) {
                *dst = z * scale;
            }
        }
    }

    /// Normalized-measure L^r norm of the pointwise Euclidean magnitude;
    /// `r = ∞` (any non-finite `r > 1`) gives the grid maximum.
    pub fn lr_norm(&self, r: f64) -> Result<f64> {
        if r < 1.0 {
            return Err(Error::InvalidNormOrder(r));
        }
        let vol = self.n * self.n * self.n;
        if r.is_finite() {
            let mut acc = 0.0;
            for i in 0..vol {
                let m2 = self.samples[0][i] * self.samples[0][i]
                    + self.samples[1][i] * self.samples[1][i]
                    + self.samples[2][i] * self.samples[2][i];
                acc += m2.powf(0.5 * r);
            }
            Ok((acc / vol as f64).powf(1.0 / r))
        } else {
            let mut best = 0.0f64;
            for i in 0..vol {
                let m2 = self.samples[0][i] * self.samples[0][i]
                    + self.samples[1][i] * self.samples[1][i]
                    + self.samples[2][i] * self.samples[2][i];
                best = best.max(m2);
            }
            Ok(best.sqrt())
        }
    }

    /// `Σ_ξ |û(ξ)|²` over the spectral mirror.
    pub fn l2_sq_spectral(&self) -> f64 {
        let mut acc = 0.0;
        for c in 0..3 {
            for z in &self.spectral[c] {
                acc += z.norm_sqr();
            }
        }
        acc
    }
}

fn cube_index(xi: Frequency, n: usize) -> usize {
    (index_of(xi.0[2], n) * n + index_of(xi.0[1], n)) * n + index_of(xi.0[0], n)
}

/// `|u(x)|²` on the `n³` grid, memory-lean: one complex cube reused across
/// a packed (u₁ + i·u₂) synthesis and a plain u₃ synthesis. Returns the
/// squared-magnitude grid and the u₃ reality defect.
pub fn magnitude_sq_grid(field: &SparseSpectralField, n: usize) -> Result<(Vec<f64>, f64)> {
    let max_linf = field.max_linf();
    if (n as i64) < 2 * max_linf + 2 {
        return Err(Error::GridTooSmall { n, max_linf });
    }
    let vol = n * n * n;
    let support_h = max_linf.max(0) as usize;
    let mut fft = Fft3::new(n);
    let mut cube = vec![Complex64::default(); vol];
    let mut out = vec![0.0f64; vol];

    // u1 + i u2 in one transform: both are real, so they separate as re/im.
    for (xi, v) in field.iter() {
        cube[cube_index(*xi, n)] = v[0] + Complex64::new(0.0, 1.0) * v[1];
    }
    fft.inverse(&mut cube, support_h);
    for (o, z) in out.iter_mut().zip(cube.iter()) {
        *o = z.re * z.re + z.im * z.im;
    }

    cube.iter_mut().for_each(|v| *v = Complex64::default());
    for (xi, v) in field.iter() {
        cube[cube_index(*xi, n)] = v[2];
    }
    fft.inverse(&mut cube, support_h);
    let mut defect = 0.0f64;
    let mut amp = 0.0f64;
    for (o, z) in out.iter_mut().zip(cube.iter()) {
        *o += z.re * z.re;
        amp = amp.max(z.re.abs());
        defect = defect.max(z.im.abs());
    }
    let defect = if amp > 0.0 { defect / amp } else { defect };
    Ok((out, defect))
}

/// L^r norm computed from a squared-magnitude grid.
pub fn lr_norm_of_magnitude_sq(mag_sq: &[f64], r: f64) -> Result<f64> {
    if r < 1.0 {
        return Err(Error::InvalidNormOrder(r));
    }
    if r.is_finite() {
        let acc: f64 = mag_sq.iter().map(|&m2| m2.powf(0.5 * r)).sum();
        Ok((acc / mag_sq.len() as f64).powf(1.0 / r))
    } else {
        Ok(mag_sq.iter().cloned().fold(0.0f64, f64::max).sqrt())
    }
}

/// One-call L^r norm of a sparse field on an `n³` grid.
pub fn lr_norm_sparse(field: &SparseSpectralField, r: f64, n: usize) -> Result<f64> {
    let (mag, _) = magnitude_sq_grid(field, n)?;
    lr_norm_of_magnitude_sq(&mag, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_field_has_norm_c_for_every_r() {
        let mut f = SparseSpectralField::new();
        f.insert(Frequency::ZERO, [c(-2.5, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let g = DenseGridField::from_sparse(&f, 8).unwrap();
        for r in [1.0, 2.0, 3.0, 7.5, f64::INFINITY] {
            assert!((g.lr_norm(r).unwrap() - 2.5).abs() < 1e-12);
        }
        assert!(g.lr_norm(0.5).is_err());
    }

    #[test]
    fn cosine_l2_is_inverse_sqrt2() {
        // u = (cos x₁, 0, 0): û(±e₁) = e₁/2.
        let mut f = SparseSpectralField::new();
        f.insert_pair(Frequency::new(1, 0, 0), [c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let g = DenseGridField::from_sparse(&f, 8).unwrap();
        assert!((g.lr_norm(2.0).unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((g.lr_norm(f64::INFINITY).unwrap() - 1.0).abs() < 1e-12);
        assert!(g.reality_defect < 1e-13);
    }

    #[test]
    fn quadrature_l2_matches_plancherel() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = sampling::random_hermitian_field(&mut rng, 7, 60);
        let n = min_grid(f.max_linf());
        let g = DenseGridField::from_sparse(&f, n).unwrap();
        let quad = g.lr_norm(2.0).unwrap().powi(2);
        let plan = f.l2_sq();
        assert!((quad - plan).abs() <= 1e-10 * plan);
        // lean path agrees with the dense path
        let lean = lr_norm_sparse(&f, 2.0, n).unwrap().powi(2);
        assert!((lean - plan).abs() <= 1e-10 * plan);
        let sup_dense = g.lr_norm(f64::INFINITY).unwrap();
        let sup_lean = lr_norm_sparse(&f, f64::INFINITY, n).unwrap();
        assert!((sup_dense - sup_lean).abs() <= 1e-12 * sup_dense);
    }

    #[test]
    fn round_trip_reproduces_spectral_mirror() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let f = sampling::random_hermitian_field(&mut rng, 5, 40);
        let mut g = DenseGridField::from_sparse(&f, 16).unwrap();
        let before = g.spectral[0].clone();
        g.forward_resync();
        for (a, b) in g.spectral[0].iter().zip(before.iter()) {
            assert!((a - b).norm() < 1e-12);
        }
        // and the mirror matches the sparse source coefficientwise
        for (xi, v) in f.iter() {
            let i = cube_index(*xi, 16);
            for cdim in 0..3 {
                assert!((g.spectral[cdim][i] - v[cdim]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn grid_too_small_is_rejected() {
        let mut f = SparseSpectralField::new();
        f.insert_pair(Frequency::new(9, 0, 0), [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(
            DenseGridField::from_sparse(&f, 16),
            Err(Error::GridTooSmall { .. })
        ));
    }
}
