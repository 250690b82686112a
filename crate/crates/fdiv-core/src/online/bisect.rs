//! Exact arithmetic for the Rademacher bisection sequence.
//!
//! The hard adversary plays contexts x̄_t = ½ + Σ_{s<t} ε_s·2^{−s−1} for iid
//! sign bits ε_s, and labels everything by the limiting threshold θ* = x̄_∞.
//! These points are exact dyadics that fall between grid points, so all
//! comparisons here run on integers: no f64 rounding can ever flip an order
//! or produce a label inconsistent with θ*.
//!
//! Conventions. A "prefix" of length L represents the point
//! x̄_{L+1} = ½ + Σ_{j<L} bits[j]·2^{−j−2}. The threshold satisfies
//! θ* ∈ (sup over +1 rounds of x̄_t, inf over −1 rounds of x̄_t], i.e. labels
//! are +1 exactly on [θ*, 1]; the half-open convention makes every finite
//! label stream realizable by some threshold.

use crate::seeds::Rng;
use rand::Rng as _;
use std::cmp::Ordering;

/// The adversary's bit source: pregenerated up front so context positions are
/// fixed per game, extended on demand when a grid-point label needs deeper
/// resolution than the pregenerated range.
pub struct BisectionStream {
    bits: Vec<i8>,
    rng: Rng,
}

impl BisectionStream {
    pub fn new(mut rng: Rng, pregenerate: usize) -> Self {
        let bits = (0..pregenerate)
            .map(|_| if rng.gen::<bool>() { 1i8 } else { -1 })
            .collect();
        BisectionStream { bits, rng }
    }

    /// Bit ε_{i+1} (0-based index), drawing more from the stream as needed.
    pub fn bit(&mut self, i: usize) -> i8 {
        while self.bits.len() <= i {
            let b = if self.rng.gen::<bool>() { 1i8 } else { -1 };
            self.bits.push(b);
        }
        self.bits[i]
    }

    /// Bits materialized so far.
    pub fn prefix(&self, len: usize) -> &[i8] {
        &self.bits[..len]
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// f64 rendering of a prefix point, for reports only (exact up to the f64
/// mantissa, approximate beyond; all decisions use the integer paths below).
pub fn prefix_value(prefix: &[i8]) -> f64 {
    let mut v = 0.5;
    let mut scale = 0.25;
    for &b in prefix {
        v += f64::from(b) * scale;
        scale *= 0.5;
    }
    v
}

/// Orders the points represented by two prefixes. Distinct prefixes of equal
/// length differ at some bit, whose sign decides (the remaining tails are
/// strictly smaller); when one prefix exhausts the other, the first extra bit
/// decides; identical prefixes are the same point.
pub fn compare_prefixes(a: &[i8], b: &[i8]) -> Ordering {
    let common = a.len().min(b.len());
    for j in 0..common {
        if a[j] != b[j] {
            return a[j].cmp(&b[j]);
        }
    }
    match a.len().cmp(&b.len()) {
        Ordering::Equal => Ordering::Equal,
        Ordering::Less => {
            // b continues below/above a depending on its next bit.
            if b[common] > 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
        Ordering::Greater => {
            if a[common] > 0 {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        }
    }
}

/// Orders the grid point k/g against the prefix point.
///
/// Walks the scaled residual num_s = (k/g − x̄_s)·g·2^{s+1}, which obeys
/// num_{s+1} = 2·num_s − 2·ε_s·g and starts at 4k − 2g. Once |num| ≥ 2g the
/// remaining prefix tail (strictly below 2^{−s}) cannot flip the sign; if the
/// prefix ends first the residual is exact and zero means the grid point and
/// the atom coincide.
pub fn compare_grid_prefix(k: u32, g: u32, prefix: &[i8]) -> Ordering {
    let g = i64::from(g);
    let mut num = 4 * i64::from(k) - 2 * g;
    for &b in prefix {
        if num.abs() >= 2 * g {
            return num.cmp(&0);
        }
        num = 2 * num - 2 * i64::from(b) * g;
    }
    num.cmp(&0)
}

/// Side of the limiting threshold θ* the grid point k/g falls on: +1 when
/// k/g ≥ θ*, −1 otherwise. Consumes bits from the stream (extending it) until
/// the sign is certain.
///
/// The walk exits upward at num ≥ 2g since θ* ≤ x̄_s + 2^{−s} always holds
/// (with equality only for an all-+1 tail, where the grid point equals θ*
/// and +1 is still correct under the closed-above label convention), and
/// downward only strictly, at num < −2g; the boundary num = −2g keeps
/// walking because an all-−1 tail would make θ* equal the grid point.
pub fn grid_side_of_theta(k: u32, g: u32, stream: &mut BisectionStream) -> i8 {
    let g = i64::from(g);
    let mut num = 4 * i64::from(k) - 2 * g;
    for step in 0..100_000usize {
        if num >= 2 * g {
            return 1;
        }
        if num < -2 * g {
            return -1;
        }
        num = 2 * num - 2 * i64::from(stream.bit(step)) * g;
    }
    unreachable!("bisection walk failed to separate after 100000 random bits");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeds::stream_rng;

    #[test]
    fn prefix_order_matches_values() {
        // Prefixes up to length 3 sorted by exact comparison must agree with
        // their (exactly representable) f64 values.
        let mut prefixes: Vec<Vec<i8>> = vec![vec![]];
        for len in 1..=3 {
            for mask in 0..(1u32 << len) {
                prefixes.push(
                    (0..len)
                        .map(|j| if mask >> j & 1 == 1 { 1 } else { -1 })
                        .collect(),
                );
            }
        }
        for a in &prefixes {
            for b in &prefixes {
                let by_value = prefix_value(a).partial_cmp(&prefix_value(b)).unwrap();
                assert_eq!(compare_prefixes(a, b), by_value, "{a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn grid_comparisons_match_values() {
        let g = 16u32;
        let prefixes: Vec<Vec<i8>> = vec![
            vec![],
            vec![1],
            vec![-1],
            vec![1, -1, 1],
            vec![-1, -1, -1, 1, 1],
        ];
        for k in 0..g {
            for p in &prefixes {
                let by_value = (f64::from(k) / f64::from(g))
                    .partial_cmp(&prefix_value(p))
                    .unwrap();
                assert_eq!(compare_grid_prefix(k, g, p), by_value, "k={k} p={p:?}");
            }
        }
        // Exact coincidence: prefix [+1] is 3/4 = 12/16.
        assert_eq!(compare_grid_prefix(12, 16, &[1]), std::cmp::Ordering::Equal);
    }

    #[test]
    fn theta_labels_are_consistent_with_deep_prefixes() {
        let mut stream = BisectionStream::new(stream_rng(7, "bits", 0), 64);
        let g = 32u32;
        for k in 0..=g {
            let side = grid_side_of_theta(k.min(g - 1), g, &mut stream);
            // The label must agree with comparing against a long prefix,
            // which brackets θ* to within 2^-60.
            let deep = stream.prefix(60.min(stream.len()));
            let vs_prefix = compare_grid_prefix(k.min(g - 1), g, deep);
            if vs_prefix == std::cmp::Ordering::Greater {
                assert_eq!(side, 1);
            }
            if vs_prefix == std::cmp::Ordering::Less {
                assert_eq!(side, -1);
            }
        }
    }
}
