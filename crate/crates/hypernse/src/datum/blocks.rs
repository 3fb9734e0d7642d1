//! The lattice blocks A_j, B_j, C_j carrying the datum's Fourier support.

use crate::spectral::frequency::{shell_of, Frequency};
use serde::{Deserialize, Serialize};

/// Closed integer interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntRange {
    pub lo: i64,
    pub hi: i64,
}

impl IntRange {
    fn len(&self) -> usize {
        (self.hi - self.lo + 1).max(0) as usize
    }
}

/// Axis-aligned integer box; blocks are products of three ranges, and the
/// Minkowski sum of two boxes is the box of componentwise range sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntBox {
    pub ranges: [IntRange; 3],
}

impl IntBox {
    pub fn count(&self) -> usize {
        self.ranges.iter().map(IntRange::len).product()
    }

    /// Lexicographically ordered enumeration.
    pub fn enumerate(&self) -> Vec<Frequency> {
        let mut out = Vec::with_capacity(self.count());
        for x in self.ranges[0].lo..=self.ranges[0].hi {
            for y in self.ranges[1].lo..=self.ranges[1].hi {
                for z in self.ranges[2].lo..=self.ranges[2].hi {
                    out.push(Frequency::new(x, y, z));
                }
            }
        }
        out
    }

    pub fn contains(&self, xi: Frequency) -> bool {
        (0..3).all(|d| self.ranges[d].lo <= xi.0[d] && xi.0[d] <= self.ranges[d].hi)
    }

    pub fn minkowski_sum(&self, other: &IntBox) -> IntBox {
        let mut ranges = self.ranges;
        for d in 0..3 {
            ranges[d].lo += other.ranges[d].lo;
            ranges[d].hi += other.ranges[d].hi;
        }
        IntBox { ranges }
    }

    pub fn negate(&self) -> IntBox {
        let mut ranges = self.ranges;
        for r in ranges.iter_mut() {
            *r = IntRange {
                lo: -r.hi,
                hi: -r.lo,
            };
        }
        IntBox { ranges }
    }

    pub fn max_linf(&self) -> i64 {
        self.ranges
            .iter()
            .map(|r| r.lo.abs().max(r.hi.abs()))
            .max()
            .unwrap()
    }
}

/// The six lattice sets for one component index: `A`, `B`, `C = A + B`
/// and their negations. `A` and `C` live in shell `q_j`, `B` in `q_j − 1`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlockFamily {
    /// Shell index `q_j`.
    pub q: u32,
    pub a: IntBox,
    pub b: IntBox,
    pub c: IntBox,
    pub astar: IntBox,
    pub bstar: IntBox,
    pub cstar: IntBox,
}

/// Integers in `[num·2^q / 10, ...]` bounds, computed exactly. Neither
/// `9·2^q/10` nor `11·2^q/10` nor `2^q/10` is ever an integer, so the
/// closed/open endpoint choice is immaterial; the debug assertions pin
/// that down.
fn scaled_range(q: u32, num_lo: i64, num_hi: i64) -> IntRange {
    let lam = 1i64 << q;
    debug_assert!(num_lo == 0 || (num_lo * lam) % 10 != 0);
    debug_assert!((num_hi * lam) % 10 != 0);
    let lo = if num_lo >= 0 {
        (num_lo * lam + 9) / 10 // ceil for positive bound
    } else {
        -((-num_lo * lam) / 10) // = -floor(|num_lo|·λ/10)
    };
    let hi = if num_hi >= 0 {
        (num_hi * lam) / 10
    } else {
        -((-num_hi * lam + 9) / 10)
    };
    IntRange { lo, hi }
}

/// Build the block family for shell `q_j ≥ 2`:
/// `A = [0.9λ, 1.1λ] × [−0.1λ, 0.1λ]² ∩ Z³` with `λ = λ_{q_j}`,
/// `B = [−0.1μ, 0.1μ]² × [0.9μ, 1.1μ] ∩ Z³` with `μ = λ_{q_j−1}`,
/// `C = A + B`.
pub fn build_blocks(q: u32) -> BlockFamily {
    assert!(q >= 2, "blocks need q_j >= 2 to avoid the zero frequency");
    let wide = scaled_range(q, 9, 11);
    let flat = scaled_range(q, -1, 1);
    let wide_b = scaled_range(q - 1, 9, 11);
    let flat_b = scaled_range(q - 1, -1, 1);
    let a = IntBox {
        ranges: [wide, flat, flat],
    };
    let b = IntBox {
        ranges: [flat_b, flat_b, wide_b],
    };
    let c = a.minkowski_sum(&b);
    BlockFamily {
        q,
        astar: a.negate(),
        bstar: b.negate(),
        cstar: c.negate(),
        a,
        b,
        c,
    }
}

impl BlockFamily {
    /// Check shell placement: `A ∪ C` in shell `q_j`, `B` in `q_j − 1`,
    /// and no self-conjugate points.
    pub fn verify_shells(&self) -> bool {
        self.a.enumerate().iter().all(|&xi| shell_of(xi) == self.q)
            && self.c.enumerate().iter().all(|&xi| shell_of(xi) == self.q)
            && self
                .b
                .enumerate()
                .iter()
                .all(|&xi| shell_of(xi) == self.q - 1)
            && self.a.ranges[0].lo > 0
            && self.b.ranges[2].lo > 0
    }
}
