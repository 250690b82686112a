//! Oracle-efficient learners for the smoothed threshold game.
//!
//! All three strategies reduce to calls into `erm_sweep`, so oracle budgets
//! can be counted exactly: follow-the-leader and follow-the-perturbed-leader
//! spend one call per round, the relaxation-based forecaster two.

use super::context::ContextSpace;
use super::erm::{erm_sweep, ErmOutcome, RankedExample};
use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::seeds::Rng;
use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};

/// Strategy and tuning for one game.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LearnerSpec {
    /// Unperturbed ERM on the history. Proper.
    Ftl,
    /// ERM on the history plus m Gaussian-weighted synthetic examples drawn
    /// from the uniform grid law, at perturbation scale eta. Proper.
    Ftpl { eta: f64, m: u32 },
    /// Random-playout relaxation: n playout draws per future round, scaled
    /// by c, with the prediction equalizing the two label potentials.
    /// Improper (its forecast is a real number and may depend on x_t).
    Relaxation { n: u32, c: f64 },
}

impl LearnerSpec {
    pub const FTPL_DEFAULT_M: u32 = 64;
    pub const RELAXATION_DEFAULT_N: u32 = 1;
    pub const RELAXATION_DEFAULT_C: f64 = 2.0;

    /// Parses "ftl", "ftpl", "ftpl:<eta>:<m>", "relaxation",
    /// "relaxation:<n>:<c>", or "ftpl-schedule" (which resolves the
    /// divergence-matched tuning for the game at hand).
    pub fn parse(s: &str, rounds: u32, sigma: f64, generator: Generator) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["ftl"] => Ok(LearnerSpec::Ftl),
            ["ftpl"] => {
                let m = Self::FTPL_DEFAULT_M;
                Ok(LearnerSpec::Ftpl {
                    eta: f64::from(m).sqrt(),
                    m,
                })
            }
            ["ftpl", eta, m] => {
                let eta: f64 = eta
                    .parse()
                    .map_err(|_| Error::Domain(format!("bad ftpl eta {eta:?}")))?;
                let m: u32 = m
                    .parse()
                    .map_err(|_| Error::Domain(format!("bad ftpl m {m:?}")))?;
                if !(eta >= 0.0) || m == 0 {
                    return Err(Error::Domain("ftpl needs eta >= 0 and m >= 1".into()));
                }
                Ok(LearnerSpec::Ftpl { eta, m })
            }
            ["ftpl-schedule"] => {
                let (eta, m) = ftpl_schedule(rounds, sigma, generator)?;
                Ok(LearnerSpec::Ftpl { eta, m })
            }
            ["relaxation"] => Ok(LearnerSpec::Relaxation {
                n: Self::RELAXATION_DEFAULT_N,
                c: Self::RELAXATION_DEFAULT_C,
            }),
            ["relaxation", n, c] => {
                let n: u32 = n
                    .parse()
                    .map_err(|_| Error::Domain(format!("bad relaxation n {n:?}")))?;
                let c: f64 = c
                    .parse()
                    .map_err(|_| Error::Domain(format!("bad relaxation c {c:?}")))?;
                if n == 0 || !(c > 0.0) {
                    return Err(Error::Domain("relaxation needs n >= 1 and c > 0".into()));
                }
                Ok(LearnerSpec::Relaxation { n, c })
            }
            _ => Err(Error::Domain(format!("unknown learner {s:?}"))),
        }
    }

    /// Proper learners commit a hypothesis before seeing the round's context.
    pub fn is_proper(&self) -> bool {
        !matches!(self, LearnerSpec::Relaxation { .. })
    }

    pub fn label(&self) -> String {
        match self {
            LearnerSpec::Ftl => "ftl".into(),
            LearnerSpec::Ftpl { eta, m } => format!("ftpl:{eta}:{m}"),
            LearnerSpec::Relaxation { n, c } => format!("relaxation:{n}:{c}"),
        }
    }
}

/// The tuning the regret theorem's proof assigns FTPL against a Rényi-smooth
/// adversary: target rate eps = T^{-(6λ-6)/(4λ-1)}·σ^{-3/(4λ-1)}, repetition
/// k = eps^{-2/3}, and m = ceil(k·ln T·(eps·σ)^{-1/(λ-1)}) draws at scale
/// eta = sqrt(m). The draw count grows so fast that anything past m = 10^6
/// is refused rather than silently truncated.
pub fn ftpl_schedule(rounds: u32, sigma: f64, generator: Generator) -> Result<(f64, u32)> {
    let lambda = match generator {
        Generator::Renyi { lambda } => lambda,
        _ => {
            return Err(Error::Unsupported(
                "ftpl-schedule is tuned for renyi generators only".into(),
            ))
        }
    };
    if rounds < 2 || !(sigma > 0.0 && sigma <= 1.0) {
        return Err(Error::Domain(
            "ftpl-schedule needs rounds >= 2 and sigma in (0,1]".into(),
        ));
    }
    let t = f64::from(rounds);
    let eps = t.powf(-(6.0 * lambda - 6.0) / (4.0 * lambda - 1.0))
        * sigma.powf(-3.0 / (4.0 * lambda - 1.0));
    let eps = eps.min(0.5);
    let k = eps.powf(-2.0 / 3.0);
    let m = (k * t.ln() * (eps * sigma).powf(-1.0 / (lambda - 1.0))).ceil();
    if !(m >= 1.0) || m > 1e6 {
        return Err(Error::Unsupported(format!(
            "ftpl-schedule asks for m = {m:.3e} synthetic draws per round; refusing past 1e6"
        )));
    }
    Ok((m.sqrt(), m as u32))
}

/// One follow-the-perturbed-leader commit: minimizes the historical loss
/// plus eta·(1/sqrt(m))·Σ γ_i·g(Z_i) over thresholds, with γ_i standard
/// normal and Z_i uniform on the grid. Since g(Z) = 1 − 2ℓ(g(Z), +1), the
/// perturbation enters the ERM as m synthetic examples with label +1 and
/// weight −2·eta·γ_i/√m. Exactly one oracle call. eta = 0 recovers FTL.
pub fn ftpl_step(
    space: &ContextSpace,
    history: &[RankedExample],
    eta: f64,
    m: u32,
    rng: &mut Rng,
    calls: &mut u64,
) -> u32 {
    let mut data = Vec::with_capacity(history.len() + m as usize);
    data.extend_from_slice(history);
    let scale = 2.0 * eta / f64::from(m).sqrt();
    for _ in 0..m {
        let gamma: f64 = StandardNormal.sample(rng);
        let cell = rng.gen_range(0..space.grid_size());
        data.push(RankedExample {
            rank: space.rank_of_grid(cell),
            y: 1.0,
            w: -scale * gamma,
        });
    }
    *calls += 1;
    erm_sweep(space.universe(), &data).threshold
}

/// Follow-the-leader commit: ERM on the bare history, one oracle call.
pub fn ftl_step(space: &ContextSpace, history: &[RankedExample], calls: &mut u64) -> u32 {
    *calls += 1;
    erm_sweep(space.universe(), history).threshold
}

/// The two branch minima behind the relaxation forecast: ERM over the
/// history, the current context forced to label +1 (resp. −1), and the given
/// playout examples. Two oracle calls.
pub fn relaxation_branches(
    space: &ContextSpace,
    history: &[RankedExample],
    x_rank: u32,
    playout: &[RankedExample],
    calls: &mut u64,
) -> (f64, f64) {
    let mut run = |y: f64| -> f64 {
        let mut data = Vec::with_capacity(history.len() + playout.len() + 1);
        data.extend_from_slice(history);
        data.push(RankedExample {
            rank: x_rank,
            y,
            w: 1.0,
        });
        data.extend_from_slice(playout);
        *calls += 1;
        erm_sweep(space.universe(), &data).value
    };
    (run(1.0), run(-1.0))
}

/// Draws the playout set for one relaxation round: for each of the
/// `remaining` future rounds and each of the n repetitions, a Rademacher
/// sign ε and a uniform grid cell Z. The term c·ε·g(Z) in the potential is
/// encoded as a label-+1 example of weight 2·c·ε (its constant part cancels
/// between the two branches).
pub fn relaxation_playout(
    space: &ContextSpace,
    remaining: u32,
    n: u32,
    c: f64,
    rng: &mut Rng,
) -> Vec<RankedExample> {
    let mut playout = Vec::with_capacity(remaining as usize * n as usize);
    for _ in 0..remaining {
        for _ in 0..n {
            let eps: f64 = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            let cell = rng.gen_range(0..space.grid_size());
            playout.push(RankedExample {
                rank: space.rank_of_grid(cell),
                y: 1.0,
                w: 2.0 * c * eps,
            });
        }
    }
    playout
}

/// The relaxation forecast for context x_t with `remaining = T − t` rounds
/// to go: draws a playout, evaluates both label branches, and plays the
/// clipped potential gap. On the last round (remaining = 0) with an empty
/// history the branches tie and the forecast is 0.
pub fn relaxation_step(
    space: &ContextSpace,
    history: &[RankedExample],
    x_rank: u32,
    remaining: u32,
    n: u32,
    c: f64,
    rng: &mut Rng,
    calls: &mut u64,
) -> f64 {
    let playout = relaxation_playout(space, remaining, n, c, rng);
    let (v_plus, v_minus) = relaxation_branches(space, history, x_rank, &playout, calls);
    (v_minus - v_plus).clamp(-1.0, 1.0)
}

/// The hindsight benchmark: one ERM call on the full unweighted stream.
pub fn best_in_hindsight(
    space: &ContextSpace,
    stream: &[RankedExample],
    calls: &mut u64,
) -> ErmOutcome {
    *calls += 1;
    erm_sweep(space.universe(), stream)
}
