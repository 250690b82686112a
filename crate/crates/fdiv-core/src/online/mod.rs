//! Smoothed online threshold learning.
//!
//! A T-round game between a learner and a constrained adversary: each round
//! the adversary picks a context law p_t whose f-divergence from the uniform
//! grid law stays within 1/σ, a context x_t ~ p_t and a label y_t are
//! revealed, and the learner pays the linear loss (1 − ŷ·y)/2. Hypotheses
//! are thresholds on [0, 1]. The learners only touch the data through an
//! exact weighted ERM oracle, so their oracle budgets are part of the
//! contract: one call per round for FTL and FTPL, two for the relaxation
//! forecaster, plus one hindsight call at the end.
//!
//! Everything is deterministic per seed. Contexts are interned into a
//! per-game rank table (`context`), which lets the bisection adversary play
//! exact off-grid dyadic atoms while the ERM sweep stays a counting pass.

mod adversary;
mod bisect;
mod context;
mod erm;
mod game;
mod learner;

pub use adversary::{
    smoothness_check, uniform_grid_dist, AdversaryKind, AdversaryState, RoundEmission,
};
pub use bisect::{compare_grid_prefix, compare_prefixes, prefix_value, BisectionStream};
pub use context::{ContextSpace, Position};
pub use erm::{
    erm_on_values, erm_sweep, hypothesis_loss, ErmOutcome, RankedExample, WeightedExample,
};
pub use game::{
    coupling_demo, run_game, run_games, summarize, CouplingReport, GameConfig, RegretSummary,
    RegretTrace, RoundRecord,
};
pub use learner::{
    best_in_hindsight, ftl_step, ftpl_schedule, ftpl_step, relaxation_branches, relaxation_playout,
    relaxation_step, LearnerSpec,
};
