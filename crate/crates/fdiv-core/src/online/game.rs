//! The repeated threshold game: protocol loop, regret accounting, and the
//! sampler-side coupling demonstration.

use super::adversary::{AdversaryKind, AdversaryState};
use super::bisect::BisectionStream;
use super::context::ContextSpace;
use super::erm::{erm_sweep, RankedExample};
use super::learner::{best_in_hindsight, ftl_step, ftpl_step, relaxation_step, LearnerSpec};
use crate::complexity::coupling_n;
use crate::dist::DiscreteDist;
use crate::divergence::divergence;
use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::sampler::{exact_output_law, make_plan};
use crate::seeds::stream_rng;
use rayon::prelude::*;
use serde::Serialize;

/// Everything a game needs besides its seed.
#[derive(Debug, Clone, Copy)]
pub struct GameConfig {
    pub rounds: u32,
    pub grid: u32,
    pub generator: Generator,
    /// Smoothness parameter in (0, 1]; the adversary's budget is 1/sigma.
    pub sigma: f64,
    /// Label flip rate for the iid and greedy adversaries.
    pub noise: f64,
    pub adversary: AdversaryKind,
    pub learner: LearnerSpec,
}

impl GameConfig {
    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(Error::Domain("game needs at least one round".into()));
        }
        if self.grid < 2 {
            return Err(Error::Domain("grid needs at least two cells".into()));
        }
        if !(self.sigma > 0.0 && self.sigma <= 1.0) {
            return Err(Error::Domain("sigma must be in (0, 1]".into()));
        }
        if !(0.0..0.5).contains(&self.noise) {
            return Err(Error::Domain("label noise must be in [0, 0.5)".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RoundRecord {
    pub x: f64,
    pub y: f64,
    pub prediction: f64,
    pub loss: f64,
}

/// Outcome of one seeded game.
#[derive(Debug, Clone, Serialize)]
pub struct RegretTrace {
    pub seed: u64,
    pub records: Vec<RoundRecord>,
    pub cumulative_loss: f64,
    pub best_in_hindsight: f64,
    pub regret: f64,
    /// ERM calls the learner spent during play (1/round for FTL and FTPL,
    /// 2/round for the relaxation).
    pub oracle_calls_rounds: u64,
    /// Rounds plus the single hindsight call.
    pub oracle_calls_total: u64,
    /// Largest per-round divergence the adversary actually used.
    pub max_round_divergence: f64,
}

/// Plays one game to completion. Proper learners commit their threshold
/// before the round's context exists; the relaxation forecaster sees x_t.
pub fn run_game(config: &GameConfig, seed: u64) -> Result<RegretTrace> {
    config.validate()?;
    let rounds = config.rounds;
    let mut adv_rng = stream_rng(seed, "adversary", 0);
    let mut learner_rng = stream_rng(seed, "learner", 0);

    let (space, stream) = if config.adversary == AdversaryKind::AtomMixture {
        let stream = BisectionStream::new(stream_rng(seed, "bisection", 0), rounds as usize + 64);
        let space = ContextSpace::build(config.grid, stream.prefix(rounds as usize), rounds);
        (space, Some(stream))
    } else {
        (ContextSpace::grid_only(config.grid), None)
    };
    let mut adversary = AdversaryState::new(
        config.adversary,
        config.generator,
        config.grid,
        config.sigma,
        config.noise,
        stream,
        &mut adv_rng,
    )?;

    let mut history: Vec<RankedExample> = Vec::with_capacity(rounds as usize);
    let mut records: Vec<RoundRecord> = Vec::with_capacity(rounds as usize);
    let mut calls: u64 = 0;
    let mut cumulative = 0.0;
    let mut max_div = 0.0f64;

    for t in 1..=rounds {
        let committed: Option<u32> = match config.learner {
            LearnerSpec::Ftl => Some(ftl_step(&space, &history, &mut calls)),
            LearnerSpec::Ftpl { eta, m } => Some(ftpl_step(
                &space,
                &history,
                eta,
                m,
                &mut learner_rng,
                &mut calls,
            )),
            LearnerSpec::Relaxation { .. } => None,
        };
        // The greedy adversary probes the committed hypothesis; for the
        // improper learner it falls back to an ERM fit of the revealed
        // prefix (its own computation, not charged to the learner).
        let probe = match config.adversary {
            AdversaryKind::AdaptiveGreedy { .. } => {
                committed.unwrap_or_else(|| erm_sweep(space.universe(), &history).threshold)
            }
            _ => 0,
        };
        let emission = adversary.step(t, &space, probe, &mut adv_rng)?;
        max_div = max_div.max(emission.divergence);

        let prediction = match (committed, config.learner) {
            (Some(theta), _) => {
                if emission.x_rank >= theta {
                    1.0
                } else {
                    -1.0
                }
            }
            (None, LearnerSpec::Relaxation { n, c }) => relaxation_step(
                &space,
                &history,
                emission.x_rank,
                rounds - t,
                n,
                c,
                &mut learner_rng,
                &mut calls,
            ),
            (None, _) => unreachable!("proper learners always commit"),
        };
        let loss = (1.0 - prediction * emission.y) / 2.0;
        cumulative += loss;
        records.push(RoundRecord {
            x: space.value(emission.x_rank),
            y: emission.y,
            prediction,
            loss,
        });
        history.push(RankedExample {
            rank: emission.x_rank,
            y: emission.y,
            w: 1.0,
        });
    }

    let round_calls = calls;
    let bih = best_in_hindsight(&space, &history, &mut calls);
    Ok(RegretTrace {
        seed,
        records,
        cumulative_loss: cumulative,
        best_in_hindsight: bih.value,
        regret: cumulative - bih.value,
        oracle_calls_rounds: round_calls,
        oracle_calls_total: calls,
        max_round_divergence: max_div,
    })
}

/// Plays the same configuration under many seeds, in parallel.
pub fn run_games(config: &GameConfig, seeds: &[u64]) -> Result<Vec<RegretTrace>> {
    seeds.par_iter().map(|&s| run_game(config, s)).collect()
}

/// Cross-seed aggregate of a batch of games.
#[derive(Debug, Clone, Serialize)]
pub struct RegretSummary {
    pub games: u32,
    pub mean_loss: f64,
    pub mean_best_in_hindsight: f64,
    pub mean_regret: f64,
    pub std_regret: f64,
    pub mean_regret_per_round: f64,
    pub mean_calls_per_round: f64,
}

pub fn summarize(rounds: u32, traces: &[RegretTrace]) -> RegretSummary {
    assert!(!traces.is_empty(), "cannot summarize zero games");
    let n = traces.len() as f64;
    let mean = |f: &dyn Fn(&RegretTrace) -> f64| traces.iter().map(|t| f(t)).sum::<f64>() / n;
    let mean_regret = mean(&|t| t.regret);
    let var = if traces.len() > 1 {
        traces
            .iter()
            .map(|t| (t.regret - mean_regret).powi(2))
            .sum::<f64>()
            / (n - 1.0)
    } else {
        0.0
    };
    RegretSummary {
        games: traces.len() as u32,
        mean_loss: mean(&|t| t.cumulative_loss),
        mean_best_in_hindsight: mean(&|t| t.best_in_hindsight),
        mean_regret,
        std_regret: var.sqrt(),
        mean_regret_per_round: mean_regret / f64::from(rounds),
        mean_calls_per_round: mean(&|t| t.oracle_calls_rounds as f64 / f64::from(rounds)),
    }
}

/// How the sampler couples a smooth context law to its reference law.
#[derive(Debug, Clone, Serialize)]
pub struct CouplingReport {
    pub divergence: f64,
    pub sigma: f64,
    pub eps: f64,
    pub delta: f64,
    pub rounds: u64,
    /// Per-round sample budget from the coupling bound.
    pub samples_per_round: f64,
    /// The truncation plan realizing total variation ≤ eps.
    pub plan_m_cap: f64,
    pub plan_n: u64,
    pub tv_achieved: f64,
}

/// Instantiates the coupling argument for a concrete pair of laws: measures
/// the divergence, budgets per-round samples for a T-round simulation, and
/// verifies on the exact output law that the truncated rejection plan meets
/// its total-variation target.
pub fn coupling_demo(
    generator: Generator,
    p: &DiscreteDist,
    mu: &DiscreteDist,
    eps: f64,
    delta: f64,
    rounds: u64,
) -> Result<CouplingReport> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("eps must lie in (0,1), got {eps}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!(
            "delta must lie in (0,1), got {delta}"
        )));
    }
    if rounds == 0 {
        return Err(Error::Domain("horizon must be at least one round".into()));
    }
    let d = divergence(generator, p, mu);
    if !d.is_finite() {
        return Err(Error::UnboundedTruncation(
            "context law has infinite divergence from the reference".into(),
        ));
    }
    let sigma = (1.0 / d).min(1.0);
    let samples = coupling_n(generator, sigma, eps, delta, rounds);
    let plan = make_plan(generator, d, eps)?;
    let (_, tv) = exact_output_law(p, mu, plan.m_cap, plan.n)?;
    assert!(
        tv <= eps + 1e-9,
        "plan promised tv <= {eps} but achieved {tv}"
    );
    Ok(CouplingReport {
        divergence: d,
        sigma,
        eps,
        delta,
        rounds,
        samples_per_round: samples,
        plan_m_cap: plan.m_cap,
        plan_n: plan.n,
        tv_achieved: tv,
    })
}
