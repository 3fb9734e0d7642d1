//! Integer frequency vectors on `Z³` and the dyadic shell convention.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// A lattice frequency vector `ξ ∈ Z³`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Frequency(pub [i64; 3]);

impl Frequency {
    pub const ZERO: Frequency = Frequency([0, 0, 0]);

    pub fn new(x: i64, y: i64, z: i64) -> Self {
        Frequency([x, y, z])
    }

    /// `|ξ|²` as an exact integer.
    pub fn norm_sq(&self) -> i64 {
        let [x, y, z] = self.0;
        x * x + y * y + z * z
    }

    pub fn norm(&self) -> f64 {
        (self.norm_sq() as f64).sqrt()
    }

    /// `max_d |ξ_d|`.
    pub fn linf(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).max().unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0, 0, 0]
    }

    pub fn as_f64(&self) -> [f64; 3] {
        [self.0[0] as f64, self.0[1] as f64, self.0[2] as f64]
    }
}

impl Add for Frequency {
    type Output = Frequency;
    fn add(self, o: Frequency) -> Frequency {
        Frequency([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for Frequency {
    type Output = Frequency;
    fn sub(self, o: Frequency) -> Frequency {
        Frequency([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Neg for Frequency {
    type Output = Frequency;
    fn neg(self) -> Frequency {
        Frequency([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl fmt::Debug for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

/// Dyadic wavenumber `λ_q = 2^q`.
pub fn wavenumber(q: u32) -> f64 {
    (1u64 << q) as f64
}

/// Shell index of `ξ` under the sharp shifted partition: the unique
/// `q ≥ 1` with `(3/2)λ_{q-1} < |ξ| ≤ (3/2)λ_q`, or 0 when `|ξ| ≤ 3/2`.
///
/// Equivalent integer form: the smallest `q` with `4|ξ|² ≤ 9·4^q`, so the
/// boundary is decided exactly. Every `ξ` lies in exactly one shell, and
/// shell `q ≥ 1` sits inside the open annulus `λ_{q-1} < |ξ| < λ_{q+1}`.
pub fn shell_of(xi: Frequency) -> u32 {
    let four_nsq = 4 * xi.norm_sq();
    let mut q = 0u32;
    let mut bound = 9i64; // 9·4⁰
    while four_nsq > bound {
        q += 1;
        bound *= 4;
    }
    q
}

/// Whether shell `q`'s annulus is wholly inside the truncation ball
/// `|ξ|_∞ ≤ k` fails; what callers actually need is the converse check,
/// so this returns the largest `|ξ|` a shell-`q` mode can have.
pub fn shell_radius_max(q: u32) -> f64 {
    1.5 * wavenumber(q)
}

/// Marker for the crate-wide shell convention; carried in file headers.
pub const SHELL_CONVENTION: &str = "sharp-1.5";

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shell_of_examples() {
        assert_eq!(shell_of(Frequency::new(1, 0, 0)), 0);
        assert_eq!(shell_of(Frequency::new(2, 0, 0)), 1);
        assert_eq!(shell_of(Frequency::new(15, 0, 0)), 4); // 12 < 15 <= 24
        assert_eq!(shell_of(Frequency::ZERO), 0);
        assert_eq!(shell_of(Frequency::new(1, 1, 0)), 0); // |xi| = sqrt(2) <= 3/2
        assert_eq!(shell_of(Frequency::new(1, 1, 1)), 1); // sqrt(3) > 3/2
    }

    #[test]
    fn shells_partition_and_respect_support_condition() {
        // Every lattice point up to |xi| = 40 belongs to exactly one shell,
        // and that shell's annulus contains it strictly inside
        // (lambda_{q-1}, lambda_{q+1}).
        for x in -40i64..=40 {
            for y in -10i64..=10 {
                for z in -10i64..=10 {
                    let xi = Frequency::new(x, y, z);
                    let q = shell_of(xi);
                    let nn = xi.norm();
                    if q == 0 {
                        assert!(nn <= 1.5);
                    } else {
                        assert!(nn > 1.5 * wavenumber(q - 1) && nn <= 1.5 * wavenumber(q));
                        assert!(nn > wavenumber(q - 1) && nn < wavenumber(q + 1));
                    }
                }
            }
        }
    }

    #[test]
    fn shell_boundary_is_exact() {
        // |xi| = (3/2)*2^q exactly: xi = (3*2^(q-1), 0, 0) must land in shell q.
        for q in 1..10u32 {
            let xi = Frequency::new(3 * (1 << (q - 1)), 0, 0);
            assert_eq!(shell_of(xi), q);
        }
    }
}
