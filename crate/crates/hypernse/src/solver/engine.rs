//! Dealiased pseudospectral evaluation of the convective term.
//!
//! State lives on the compact cube `|ξ_d| ≤ K` with `3K < n` (two-thirds
//! truncation), stored as three `(2K+1)³` arrays in lexicographic (z,y,x)
//! order. Products are formed on the `n³` grid, so every kept product
//! coefficient is alias-free and the Galerkin energy identities hold to
//! rounding.
//!
//! Transform budget per evaluation: two inverse FFTs (u₁+iu₂ packed, u₃)
//! and three forward FFTs (the six products u_iu_j packed pairwise into
//! real/imaginary parts and separated by the Hermitian split).

use crate::spectral::fft3::{index_of, Fft3};
use crate::spectral::frequency::Frequency;
use crate::spectral::leray::apply_leray;
use crate::spectral::sparse::SparseSpectralField;
use crate::{Error, Result};
use num_complex::Complex64;

/// Three compact spectral component arrays.
pub type Compact = [Vec<Complex64>; 3];

/// Largest `K` with `3K < n`: products of modes `≤ K` alias only onto
/// discarded modes.
pub fn dealias_keep(n: usize) -> usize {
    (n - 1) / 3
}

pub struct SpectralEngine {
    n: usize,
    k: usize,
    m: usize,
    fft: Fft3,
    cube: Vec<Complex64>,
    u_grid: [Vec<f64>; 3],
    /// Cube slot for each compact coordinate.
    wrap: Vec<usize>,
}

impl SpectralEngine {
    pub fn new(n: usize) -> Self {
        let k = dealias_keep(n);
        let m = 2 * k + 1;
        let wrap = (0..m)
            .map(|c| index_of(c as i64 - k as i64, n))
            .collect();
        SpectralEngine {
            n,
            k,
            m,
            fft: Fft3::new(n),
            cube: vec![Complex64::default(); n * n * n],
            u_grid: [vec![0.0; n * n * n], vec![0.0; n * n * n], vec![0.0; n * n * n]],
            wrap,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn keep(&self) -> usize {
        self.k
    }

    pub fn compact_len(&self) -> usize {
        self.m * self.m * self.m
    }

    pub fn zero_compact(&self) -> Compact {
        let len = self.compact_len();
        [
            vec![Complex64::default(); len],
            vec![Complex64::default(); len],
            vec![Complex64::default(); len],
        ]
    }

    /// Frequency of a compact index.
    pub fn freq_at(&self, idx: usize) -> Frequency {
        let m = self.m;
        let k = self.k as i64;
        let x = (idx % m) as i64 - k;
        let y = ((idx / m) % m) as i64 - k;
        let z = (idx / (m * m)) as i64 - k;
        Frequency::new(x, y, z)
    }

    pub fn compact_index(&self, xi: Frequency) -> Option<usize> {
        let k = self.k as i64;
        if xi.0.iter().any(|&c| c.abs() > k) {
            return None;
        }
        let m = self.m;
        let cx = (xi.0[0] + k) as usize;
        let cy = (xi.0[1] + k) as usize;
        let cz = (xi.0[2] + k) as usize;
        Some((cz * m + cy) * m + cx)
    }

    /// Load a sparse field into compact form. Every mode must satisfy the
    /// dealias bound `|ξ|_∞ ≤ K` (the config invariant `n/3 > max|ξ|_∞`).
    pub fn scatter_sparse(&self, field: &SparseSpectralField) -> Result<Compact> {
        let max_linf = field.max_linf();
        if max_linf > self.k as i64 {
            return Err(Error::AliasedProduct {
                n: self.n,
                max_linf,
            });
        }
        let mut out = self.zero_compact();
        for (xi, v) in field.iter() {
            let idx = self.compact_index(*xi).expect("bound checked above");
            for c in 0..3 {
                out[c][idx] = v[c];
            }
        }
        Ok(out)
    }

    pub fn compact_to_sparse(&self, x: &Compact) -> SparseSpectralField {
        let mut out = SparseSpectralField::new();
        for idx in 0..self.compact_len() {
            let v = [x[0][idx], x[1][idx], x[2][idx]];
            if v.iter().any(|z| z.norm_sqr() > 0.0) {
                out.insert(self.freq_at(idx), v);
            }
        }
        out
    }

    /// Scatter one compact array (or a pair packed as re + i·im) into the
    /// full cube, zero elsewhere.
    fn scatter_to_cube(&mut self, first: &[Complex64], second: Option<&[Complex64]>) {
        let (n, m, k) = (self.n, self.m, self.k);
        self.cube.iter_mut().for_each(|v| *v = Complex64::default());
        for cz in 0..m {
            let zi = self.wrap[cz];
            for cy in 0..m {
                let yi = self.wrap[cy];
                let cube_base = (zi * n + yi) * n;
                let comp_base = (cz * m + cy) * m;
                match second {
                    None => {
                        // negative x half → wrapped tail, nonnegative → head
                        for cx in 0..k {
                            self.cube[cube_base + n - k + cx] = first[comp_base + cx];
                        }
                        for cx in k..m {
                            self.cube[cube_base + cx - k] = first[comp_base + cx];
                        }
                    }
                    Some(snd) => {
                        let i = Complex64::new(0.0, 1.0);
                        for cx in 0..k {
                            self.cube[cube_base + n - k + cx] =
                                first[comp_base + cx] + i * snd[comp_base + cx];
                        }
                        for cx in k..m {
                            self.cube[cube_base + cx - k] =
                                first[comp_base + cx] + i * snd[comp_base + cx];
                        }
                    }
                }
            }
        }
    }

    /// Realize the three velocity components on the grid. Returns the
    /// maximum pointwise squared magnitude when `track_max` is set.
    pub fn synthesize(&mut self, x: &Compact, track_max: bool) -> Option<f64> {
        let (x0, rest) = x.split_first().expect("three components");
        self.scatter_to_cube(&x0[..], Some(&rest[0][..]));
        self.fft.inverse(&mut self.cube, self.k);
        for (i, z) in self.cube.iter().enumerate() {
            self.u_grid[0][i] = z.re;
            self.u_grid[1][i] = z.im;
        }
        self.scatter_to_cube(&x[2][..], None);
        self.fft.inverse(&mut self.cube, self.k);
        for (i, z) in self.cube.iter().enumerate() {
            self.u_grid[2][i] = z.re;
        }
        if track_max {
            let mut best = 0.0f64;
            for i in 0..self.cube.len() {
                let mag = self.u_grid[0][i] * self.u_grid[0][i]
                    + self.u_grid[1][i] * self.u_grid[1][i]
                    + self.u_grid[2][i] * self.u_grid[2][i];
                best = if mag > best { mag } else { best };
            }
            Some(best)
        } else {
            None
        }
    }

    /// Transform two product grids packed as re/im, split the spectra by
    /// Hermitian symmetry, and accumulate `i ξ_i ŵ_{ij}` into `out`.
    fn product_pass(&mut self, pair1: (usize, usize), pair2: (usize, usize), out: &mut Compact) {
        let n = self.n;
        for i in 0..n * n * n {
            self.cube[i] = Complex64::new(
                self.u_grid[pair1.0][i] * self.u_grid[pair1.1][i],
                self.u_grid[pair2.0][i] * self.u_grid[pair2.1][i],
            );
        }
        self.fft.forward(&mut self.cube, self.k);
        let scale = 1.0 / (n * n * n) as f64;
        let (m, k) = (self.m, self.k);
        for cz in 0..m {
            let zi = self.wrap[cz];
            let zi_m = self.wrap[m - 1 - cz];
            for cy in 0..m {
                let yi = self.wrap[cy];
                let yi_m = self.wrap[m - 1 - cy];
                let cube_base = (zi * n + yi) * n;
                let cube_base_m = (zi_m * n + yi_m) * n;
                let comp_base = (cz * m + cy) * m;
                for cx in 0..m {
                    let x = cx as i64 - k as i64;
                    let xi_cube = if x >= 0 {
                        cube_base + x as usize
                    } else {
                        cube_base + (n as i64 + x) as usize
                    };
                    let xi_cube_m = if x <= 0 {
                        cube_base_m + (-x) as usize
                    } else {
                        cube_base_m + n - x as usize
                    };
                    let f = self.cube[xi_cube];
                    let g = self.cube[xi_cube_m].conj();
                    let w1 = (f + g) * (0.5 * scale);
                    let w2 = Complex64::new(0.0, -0.5 * scale) * (f - g);
                    let idx = comp_base + cx;
                    let y = (cy as i64 - k as i64) as f64;
                    let z = (cz as i64 - k as i64) as f64;
                    let coords = [x as f64, y, z];
                    accumulate_product(out, idx, pair1, w1, &coords);
                    accumulate_product(out, idx, pair2, w2, &coords);
                }
            }
        }
    }

    /// The dealiased convective term with Leray projection:
    /// `out = −P[(u·∇)u]`, computed in divergence form `∂_i(u_i u_j)`
    /// (identical for exactly divergence-free input). Returns the maximum
    /// squared grid velocity when `track_max` is set.
    pub fn rhs(&mut self, x: &Compact, out: &mut Compact, track_max: bool) -> Option<f64> {
        let max_sq = self.synthesize(x, track_max);
        for c in out.iter_mut() {
            c.iter_mut().for_each(|v| *v = Complex64::default());
        }
        self.product_pass((0, 0), (0, 1), out);
        self.product_pass((0, 2), (1, 1), out);
        self.product_pass((1, 2), (2, 2), out);
        for idx in 0..self.compact_len() {
            let xi = self.freq_at(idx);
            let v = apply_leray(xi, [out[0][idx], out[1][idx], out[2][idx]]);
            out[0][idx] = -v[0];
            out[1][idx] = -v[1];
            out[2][idx] = -v[2];
        }
        max_sq
    }
}

/// Scatter one product spectrum `ŵ_{ab}` into the convective components:
/// `(u·∇u)_b += i ξ_a ŵ`, and symmetrically for `a ≠ b`.
#[inline]
fn accumulate_product(
    out: &mut Compact,
    idx: usize,
    (a, b): (usize, usize),
    w: Complex64,
    coords: &[f64; 3],
) {
    let i = Complex64::new(0.0, 1.0);
    out[b][idx] += i * coords[a] * w;
    if a != b {
        out[a][idx] += i * coords[b] * w;
    }
}

/// Standalone dealiased convective right-hand side of a sparse field:
/// transform to the grid, multiply, transform back, two-thirds truncate,
/// Leray project. The field must satisfy `max|ξ|_∞ ≤ K(n)`.
pub fn nonlinear_rhs(field: &SparseSpectralField, n: usize) -> Result<SparseSpectralField> {
    let mut engine = SpectralEngine::new(n);
    let x = engine.scatter_sparse(field)?;
    let mut out = engine.zero_compact();
    let max_sq = engine.rhs(&x, &mut out, true);
    if let Some(m) = max_sq {
        if !m.is_finite() {
            return Err(Error::Instability { t: 0.0 });
        }
    }
    Ok(engine.compact_to_sparse(&out))
}
