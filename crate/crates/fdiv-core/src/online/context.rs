//! Interned context positions for threshold learning.
//!
//! A game's contexts live on a finite ordered set: the uniform grid cells
//! k/G for k in 0..G, plus (for the bisection adversary) one off-grid atom
//! per round. Thresholds and ERM sweeps work on the positions' ranks, so a
//! single u32 comparison implements g_θ(x) exactly; all ordering between
//! grid points and atoms is decided by the integer comparators in `bisect`.

use super::bisect::{compare_grid_prefix, compare_prefixes, prefix_value};
use std::cmp::Ordering;

/// A point the adversary can play.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Position {
    /// Grid cell k, at value k/G.
    Grid(u32),
    /// Bisection atom for round t (1-based), at x̄_t; its position is fixed
    /// by the first t−1 adversary bits.
    Atom(u32),
}

/// The ordered universe of positions for one game.
///
/// Ranks are dense indices into the sorted position list. A threshold is a
/// rank r in 0..=universe(): the hypothesis predicting +1 exactly on ranks
/// ≥ r. Rank 0 is the grid point 0, so threshold 0 predicts +1 everywhere;
/// threshold universe() predicts −1 everywhere (the grid's "1+" entry).
pub struct ContextSpace {
    grid_size: u32,
    sorted: Vec<Position>,
    values: Vec<f64>,
    grid_rank: Vec<u32>,
    atom_rank: Vec<u32>,
}

impl ContextSpace {
    /// Builds the universe from the grid and the first `n_atoms` bisection
    /// atoms (atom t needs bits[0..t-1]). Early atoms can coincide exactly
    /// with grid points; coinciding positions share one rank so hypotheses
    /// remain functions of the context value.
    pub fn build(grid_size: u32, bits: &[i8], n_atoms: u32) -> Self {
        assert!(grid_size >= 2, "grid must have at least two cells");
        assert!(
            bits.len() + 1 >= n_atoms as usize,
            "atom t requires t-1 bits"
        );
        let mut entries: Vec<Position> = (0..grid_size).map(Position::Grid).collect();
        entries.extend((1..=n_atoms).map(Position::Atom));

        let cmp = |a: &Position, b: &Position| -> Ordering {
            match (*a, *b) {
                (Position::Grid(i), Position::Grid(j)) => i.cmp(&j),
                (Position::Atom(s), Position::Atom(t)) => {
                    compare_prefixes(&bits[..(s - 1) as usize], &bits[..(t - 1) as usize])
                }
                (Position::Grid(k), Position::Atom(t)) => {
                    compare_grid_prefix(k, grid_size, &bits[..(t - 1) as usize])
                }
                (Position::Atom(t), Position::Grid(k)) => {
                    compare_grid_prefix(k, grid_size, &bits[..(t - 1) as usize]).reverse()
                }
            }
        };
        entries.sort_by(cmp);

        let mut sorted: Vec<Position> = Vec::with_capacity(entries.len());
        let mut values: Vec<f64> = Vec::new();
        let mut grid_rank = vec![u32::MAX; grid_size as usize];
        let mut atom_rank = vec![u32::MAX; n_atoms as usize];
        for pos in entries {
            let duplicate = sorted
                .last()
                .is_some_and(|last| cmp(last, &pos) == Ordering::Equal);
            if !duplicate {
                sorted.push(pos);
                values.push(match pos {
                    Position::Grid(k) => f64::from(k) / f64::from(grid_size),
                    Position::Atom(t) => prefix_value(&bits[..(t - 1) as usize]),
                });
            }
            let rank = (sorted.len() - 1) as u32;
            match pos {
                Position::Grid(k) => grid_rank[k as usize] = rank,
                Position::Atom(t) => atom_rank[(t - 1) as usize] = rank,
            }
        }
        ContextSpace {
            grid_size,
            sorted,
            values,
            grid_rank,
            atom_rank,
        }
    }

    /// Grid-only universe (iid and greedy adversaries).
    pub fn grid_only(grid_size: u32) -> Self {
        Self::build(grid_size, &[], 0)
    }

    pub fn grid_size(&self) -> u32 {
        self.grid_size
    }

    /// Number of distinct positions; valid thresholds are 0..=universe().
    pub fn universe(&self) -> u32 {
        self.sorted.len() as u32
    }

    pub fn rank_of_grid(&self, cell: u32) -> u32 {
        self.grid_rank[cell as usize]
    }

    pub fn rank_of_atom(&self, t: u32) -> u32 {
        self.atom_rank[(t - 1) as usize]
    }

    /// The context value at a rank, for reporting.
    pub fn value(&self, rank: u32) -> f64 {
        self.values[rank as usize]
    }

    /// The threshold value a rank denotes; universe() is the above-all
    /// sentinel, reported as the first value past the grid.
    pub fn threshold_value(&self, rank: u32) -> f64 {
        if rank == self.universe() {
            1.0 + 1.0 / f64::from(self.grid_size)
        } else {
            self.values[rank as usize]
        }
    }

    pub fn position(&self, rank: u32) -> Position {
        self.sorted[rank as usize]
    }
}
