//! In-place 3-D complex FFTs on `n³` cubes, with pass pruning for fields
//! whose spectral support is a small centered cube.
//!
//! Layout: index `(iz·n + iy)·n + ix` with `ix` contiguous. Slot `i` along
//! an axis carries frequency `i` for `i ≤ n/2` and `i − n` otherwise.
//!
//! The forward direction computes the plain DFT sum (caller divides by
//! `n³`); the inverse computes `Σ û e^{+iξ·x}` so coefficients can be
//! scattered directly.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// Cube slot for a signed frequency component.
pub fn index_of(k: i64, n: usize) -> usize {
    let n = n as i64;
    debug_assert!(2 * k.abs() < n, "frequency {k} unrepresentable on grid {n}");
    if k >= 0 {
        k as usize
    } else {
        (n + k) as usize
    }
}

/// Signed frequency component for a cube slot.
pub fn freq_of(i: usize, n: usize) -> i64 {
    if i <= n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// Columns processed per strided tile; 32 complexes = 512 bytes keeps the
/// gather reads cache-line dense without blowing the L1 budget.
const TILE_W: usize = 32;

/// Up to two index ranges along one axis (the wrapped set `|ξ| ≤ h`).
#[derive(Clone, Copy)]
struct Active {
    ranges: [(usize, usize); 2], // (start, len)
    count: usize,
}

impl Active {
    fn full(n: usize) -> Self {
        Active {
            ranges: [(0, n), (0, 0)],
            count: 1,
        }
    }

    fn wrapped(n: usize, h: usize) -> Self {
        if 2 * h + 1 >= n {
            return Active::full(n);
        }
        Active {
            ranges: [(0, h + 1), (n - h, h)],
            count: 2,
        }
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.ranges[..self.count]
            .iter()
            .flat_map(|&(s, l)| s..s + l)
    }
}

pub struct Fft3 {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    tile: Vec<Complex64>,
}

impl Fft3 {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2);
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let scratch_len = fwd
            .get_inplace_scratch_len()
            .max(inv.get_inplace_scratch_len());
        Fft3 {
            n,
            fwd,
            inv,
            scratch: vec![Complex64::default(); scratch_len],
            tile: vec![Complex64::default(); TILE_W * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Spectral → physical. `support_h` bounds `|ξ_d|` over the nonzero
    /// input; lines that are identically zero are skipped.
    pub fn inverse(&mut self, data: &mut [Complex64], support_h: usize) {
        let n = self.n;
        assert_eq!(data.len(), n * n * n);
        let act = Active::wrapped(n, support_h);
        let plan = self.inv.clone();
        self.pass_z(data, &plan, &act, &act);
        self.pass_y(data, &plan, &act);
        self.pass_x(data, &plan);
    }

    /// Physical → spectral (unnormalized). Only modes with `|ξ_d| ≤ keep_h`
    /// are produced correctly; passes that feed discarded modes are skipped.
    pub fn forward(&mut self, data: &mut [Complex64], keep_h: usize) {
        let n = self.n;
        assert_eq!(data.len(), n * n * n);
        let act = Active::wrapped(n, keep_h);
        let plan = self.fwd.clone();
        self.pass_x(data, &plan);
        self.pass_y(data, &plan, &act);
        self.pass_z(data, &plan, &act, &act);
    }

    /// Contiguous rows along x; every (iz, iy) line.
    fn pass_x(&mut self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let n = self.n;
        for row in data.chunks_exact_mut(n) {
            plan.process_with_scratch(row, &mut self.scratch);
        }
    }

    /// Lines along y (stride n) within each z-slab, tiled over active x.
    fn pass_y(&mut self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>, x_act: &Active) {
        let n = self.n;
        for slab in data.chunks_exact_mut(n * n) {
            for &(start, len) in &x_act.ranges[..x_act.count] {
                let mut ix0 = start;
                while ix0 < start + len {
                    let w = TILE_W.min(start + len - ix0);
                    // gather: tile[t*n + iy] = slab[iy*n + ix0 + t]
                    for iy in 0..n {
                        let src = &slab[iy * n + ix0..iy * n + ix0 + w];
                        for (t, &v) in src.iter().enumerate() {
                            self.tile[t * n + iy] = v;
                        }
                    }
                    for line in self.tile[..w * n].chunks_exact_mut(n) {
                        plan.process_with_scratch(line, &mut self.scratch);
                    }
                    for iy in 0..n {
                        let dst = &mut slab[iy * n + ix0..iy * n + ix0 + w];
                        for (t, v) in dst.iter_mut().enumerate() {
                            *v = self.tile[t * n + iy];
                        }
                    }
                    ix0 += w;
                }
            }
        }
    }

    /// Lines along z (stride n²), tiled over active x, for active y.
    fn pass_z(
        &mut self,
        data: &mut [Complex64],
        plan: &Arc<dyn Fft<f64>>,
        y_act: &Active,
        x_act: &Active,
    ) {
        let n = self.n;
        for iy in y_act.iter() {
            for &(start, len) in &x_act.ranges[..x_act.count] {
                let mut ix0 = start;
                while ix0 < start + len {
                    let w = TILE_W.min(start + len - ix0);
                    for iz in 0..n {
                        let base = (iz * n + iy) * n + ix0;
                        let src = &data[base..base + w];
                        for (t, &v) in src.iter().enumerate() {
                            self.tile[t * n + iz] = v;
                        }
                    }
                    for line in self.tile[..w * n].chunks_exact_mut(n) {
                        plan.process_with_scratch(line, &mut self.scratch);
                    }
                    for iz in 0..n {
                        let base = (iz * n + iy) * n + ix0;
                        let dst = &mut data[base..base + w];
                        for (t, v) in dst.iter_mut().enumerate() {
                            *v = self.tile[t * n + iz];
                        }
                    }
                    ix0 += w;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Brute-force DFT oracle: X(k) = Σ_x x(x) e^{-2πi k·x/n}.
    fn naive_forward(data: &[Complex64], n: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::default(); n * n * n];
        let w = -2.0 * std::f64::consts::PI / n as f64;
        for kz in 0..n {
            for ky in 0..n {
                for kx in 0..n {
                    let mut acc = Complex64::default();
                    for z in 0..n {
                        for y in 0..n {
                            for x in 0..n {
                                let phase =
                                    w * (kx * x + ky * y + kz * z) as f64;
                                acc += data[(z * n + y) * n + x]
                                    * Complex64::new(phase.cos(), phase.sin());
                            }
                        }
                    }
                    out[(kz * n + ky) * n + kx] = acc;
                }
            }
        }
        out
    }

    #[test]
    fn forward_matches_naive_dft() {
        let n = 6;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let data: Vec<Complex64> = (0..n * n * n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let expected = naive_forward(&data, n);
        let mut got = data.clone();
        Fft3::new(n).forward(&mut got, n / 2);
        for (a, b) in got.iter().zip(expected.iter()) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn round_trip_identity() {
        let n = 12;
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let data: Vec<Complex64> = (0..n * n * n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let mut work = data.clone();
        let mut fft = Fft3::new(n);
        fft.forward(&mut work, n / 2);
        fft.inverse(&mut work, n / 2);
        let scale = (n * n * n) as f64;
        for (a, b) in work.iter().zip(data.iter()) {
            assert!((a / scale - b).norm() < 1e-12);
        }
    }

    #[test]
    fn pruned_inverse_equals_full_inverse() {
        let n = 16;
        let h = 3;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut data = vec![Complex64::default(); n * n * n];
        for kz in 0..n {
            for ky in 0..n {
                for kx in 0..n {
                    let ok = [kx, ky, kz]
                        .iter()
                        .all(|&k| freq_of(k, n).unsigned_abs() as usize <= h);
                    if ok {
                        data[(kz * n + ky) * n + kx] =
                            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    }
                }
            }
        }
        let mut full = data.clone();
        let mut pruned = data;
        let mut fft = Fft3::new(n);
        fft.inverse(&mut full, n / 2);
        fft.inverse(&mut pruned, h);
        for (a, b) in pruned.iter().zip(full.iter()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn pruned_forward_agrees_on_kept_modes() {
        let n = 18;
        let keep = 4;
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let data: Vec<Complex64> = (0..n * n * n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), 0.0))
            .collect();
        let mut full = data.clone();
        let mut pruned = data;
        let mut fft = Fft3::new(n);
        fft.forward(&mut full, n / 2);
        fft.forward(&mut pruned, keep);
        for kz in 0..n {
            for ky in 0..n {
                for kx in 0..n {
                    let kept = [kx, ky, kz]
                        .iter()
                        .all(|&k| freq_of(k, n).unsigned_abs() as usize <= keep);
                    if kept {
                        let i = (kz * n + ky) * n + kx;
                        assert!((full[i] - pruned[i]).norm() < 1e-10);
                    }
                }
            }
        }
    }
}
