//! Seeded random field generators for tests, calibration, and examples.

use crate::spectral::frequency::{shell_of, wavenumber, Frequency};
use crate::spectral::sparse::SparseSpectralField;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

fn gaussian_coeff<R: Rng>(rng: &mut R) -> [Complex64; 3] {
    let mut v = [Complex64::default(); 3];
    for comp in v.iter_mut() {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        *comp = Complex64::new(re, im);
    }
    v
}

/// Hermitian field with `pairs` random modes in `0 < |ξ|_∞ ≤ max_linf`.
pub fn random_hermitian_field<R: Rng>(
    rng: &mut R,
    max_linf: i64,
    pairs: usize,
) -> SparseSpectralField {
    let mut field = SparseSpectralField::new();
    let mut placed = 0;
    while placed < pairs {
        let xi = Frequency::new(
            rng.gen_range(-max_linf..=max_linf),
            rng.gen_range(-max_linf..=max_linf),
            rng.gen_range(-max_linf..=max_linf),
        );
        if xi.is_zero() || field.contains(&xi) {
            continue;
        }
        field.insert_pair(xi, gaussian_coeff(rng));
        placed += 1;
    }
    field
}

/// Divergence-free Hermitian field (Leray projection of a random field;
/// modes whose coefficient projects to zero are simply dropped).
pub fn random_divergence_free_field<R: Rng>(
    rng: &mut R,
    max_linf: i64,
    pairs: usize,
) -> SparseSpectralField {
    random_hermitian_field(rng, max_linf, pairs).project_leray()
}

/// Hermitian field supported in dyadic shell `q`, optionally projected
/// divergence-free. Modes are rejection-sampled from the shell annulus.
pub fn random_shell_field<R: Rng>(
    rng: &mut R,
    q: u32,
    pairs: usize,
    divergence_free: bool,
) -> SparseSpectralField {
    let r_max = (1.5 * wavenumber(q)).floor() as i64;
    let mut field = SparseSpectralField::new();
    let mut placed = 0;
    while placed < pairs {
        let xi = Frequency::new(
            rng.gen_range(-r_max..=r_max),
            rng.gen_range(-r_max..=r_max),
            rng.gen_range(-r_max..=r_max),
        );
        if xi.is_zero() || shell_of(xi) != q || field.contains(&xi) {
            continue;
        }
        field.insert_pair(xi, gaussian_coeff(rng));
        placed += 1;
    }
    if divergence_free {
        field.project_leray()
    } else {
        field
    }
}
