//! Smoothness-constrained adversaries for the threshold game.
//!
//! Every round the adversary must play a context law p_t whose f-divergence
//! from the uniform grid law is at most 1/σ. Three constructions live here:
//! an iid mixture concentrated near the hidden threshold, the Rademacher
//! bisection mixture that realizes the lower-bound regime, and a greedy
//! pool player that picks, per round, the smooth law maximizing the
//! learner's expected instantaneous loss.

use super::bisect::{grid_side_of_theta, BisectionStream};
use super::context::{ContextSpace, Position};
use crate::dist::DiscreteDist;
use crate::divergence::divergence;
use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::seeds::Rng;
use rand::Rng as _;
use std::sync::Arc;

/// Which adversary plays the game.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdversaryKind {
    /// One fixed smooth mixture, iid contexts, noisy threshold labels.
    SmoothIid,
    /// Per-round mixture (1−δ)·uniform + δ·atom at the bisection point
    /// x̄_t, labeled exactly by the limiting threshold; δ is the largest
    /// singular mass the smoothness budget allows.
    AtomMixture,
    /// A pool of `pool` fixed smooth laws; each round plays the one with
    /// the highest expected loss for the learner's current hypothesis.
    AdaptiveGreedy { pool: u32 },
}

impl AdversaryKind {
    /// Parses "smooth_iid", "atom_mixture", "adaptive_greedy", or
    /// "adaptive_greedy:<pool>".
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["smooth_iid"] => Ok(AdversaryKind::SmoothIid),
            ["atom_mixture"] => Ok(AdversaryKind::AtomMixture),
            ["adaptive_greedy"] => Ok(AdversaryKind::AdaptiveGreedy { pool: 4 }),
            ["adaptive_greedy", k] => {
                let pool: u32 = k
                    .parse()
                    .map_err(|_| Error::Domain(format!("bad adversary pool size {k:?}")))?;
                if pool == 0 {
                    return Err(Error::Domain("adversary pool must be nonempty".into()));
                }
                Ok(AdversaryKind::AdaptiveGreedy { pool })
            }
            _ => Err(Error::Domain(format!("unknown adversary {s:?}"))),
        }
    }

    pub fn label(&self) -> String {
        match self {
            AdversaryKind::SmoothIid => "smooth_iid".into(),
            AdversaryKind::AtomMixture => "atom_mixture".into(),
            AdversaryKind::AdaptiveGreedy { pool } => format!("adaptive_greedy:{pool}"),
        }
    }
}

/// The uniform law on grid cells, with labels "g0".."g{G-1}".
pub fn uniform_grid_dist(grid: u32) -> DiscreteDist {
    let w = 1.0 / f64::from(grid);
    DiscreteDist::from_pairs((0..grid).map(|k| (format!("g{k}"), w))).expect("uniform grid law")
}

/// Verifies the smoothness contract D_f(p ‖ mu) ≤ 1/sigma, returning the
/// exact divergence. Violations are construction errors: an adversary that
/// emits such a law is outside the game.
pub fn smoothness_check(
    generator: Generator,
    p: &DiscreteDist,
    mu: &DiscreteDist,
    sigma: f64,
) -> Result<f64> {
    assert!(sigma > 0.0 && sigma <= 1.0, "sigma must be in (0, 1]");
    let d = divergence(generator, p, mu);
    if d <= 1.0 / sigma + 1e-9 {
        Ok(d)
    } else {
        Err(Error::ConstructionInvalid(format!(
            "context law has divergence {d:.6e} > 1/sigma = {:.6e}",
            1.0 / sigma
        )))
    }
}

/// What one adversary round hands the protocol.
pub struct RoundEmission {
    pub x_rank: u32,
    pub y: f64,
    /// The context law the round was drawn from.
    pub law: Arc<DiscreteDist>,
    /// Its exact divergence from the uniform grid law.
    pub divergence: f64,
}

/// A fixed grid mixture: uniform background plus a window bump, with the
/// bump weight pushed as high as the smoothness budget allows.
struct GridLaw {
    weights: Vec<f64>,
    cumulative: Vec<f64>,
    divergence: f64,
    dist: Arc<DiscreteDist>,
}

impl GridLaw {
    /// Mixture (1−w)·uniform + w·uniform(window) with the window of half
    /// width grid/16 centered at `center`, and w maximal in [0, 0.95]
    /// subject to D_f ≤ 1/sigma (the divergence is 0 at w = 0 and increases
    /// with w, so a bisection finds the knee).
    fn build(generator: Generator, grid: u32, sigma: f64, center: u32) -> GridLaw {
        let g = f64::from(grid);
        let half = (grid / 16).max(1);
        let lo_cell = center.saturating_sub(half);
        let hi_cell = (center + half).min(grid - 1);
        let width = f64::from(hi_cell - lo_cell + 1);
        let weights_at = |w: f64| -> Vec<f64> {
            (0..grid)
                .map(|k| {
                    let bump = if (lo_cell..=hi_cell).contains(&k) {
                        w / width
                    } else {
                        0.0
                    };
                    (1.0 - w) / g + bump
                })
                .collect()
        };
        let div_at = |w: f64| -> f64 {
            weights_at(w)
                .iter()
                .map(|&p| generator.f(p * g) / g)
                .sum::<f64>()
        };
        let budget = 1.0 / sigma;
        let mut w = 0.95;
        if div_at(w) > budget {
            let (mut lo, mut hi) = (0.0f64, w);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if div_at(mid) <= budget {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            w = lo;
        }
        let weights = weights_at(w);
        let mut cumulative = Vec::with_capacity(weights.len());
        let mut acc = 0.0;
        for &p in &weights {
            acc += p;
            cumulative.push(acc);
        }
        let dist = Arc::new(
            DiscreteDist::from_pairs(
                weights
                    .iter()
                    .enumerate()
                    .map(|(k, &p)| (format!("g{k}"), p)),
            )
            .expect("grid mixture law"),
        );
        GridLaw {
            divergence: div_at(w),
            weights,
            cumulative,
            dist,
        }
    }

    fn draw_cell(&self, rng: &mut Rng) -> u32 {
        let u: f64 = rng.gen();
        match self
            .cumulative
            .binary_search_by(|c| c.partial_cmp(&u).unwrap())
        {
            Ok(i) | Err(i) => (i.min(self.cumulative.len() - 1)) as u32,
        }
    }
}

/// Per-game adversary state; owns its randomness so learner and adversary
/// streams cannot interleave.
pub struct AdversaryState {
    inner: Inner,
    bound: f64,
}

enum Inner {
    Iid {
        law: GridLaw,
        theta_cell: u32,
        noise: f64,
    },
    Atom {
        stream: BisectionStream,
        delta: f64,
        generator: Generator,
        mu: Arc<DiscreteDist>,
    },
    Greedy {
        pool: Vec<GridLaw>,
        theta_cell: u32,
        noise: f64,
    },
}

impl AdversaryState {
    pub fn new(
        kind: AdversaryKind,
        generator: Generator,
        grid: u32,
        sigma: f64,
        noise: f64,
        stream: Option<BisectionStream>,
        rng: &mut Rng,
    ) -> Result<AdversaryState> {
        if !(sigma > 0.0 && sigma <= 1.0) {
            return Err(Error::Domain("sigma must be in (0, 1]".into()));
        }
        if !(0.0..0.5).contains(&noise) {
            return Err(Error::Domain("label noise must be in [0, 0.5)".into()));
        }
        let bound = 1.0 / sigma;
        let inner = match kind {
            AdversaryKind::SmoothIid => {
                let theta_cell = rng.gen_range(grid / 3..2 * grid / 3);
                Inner::Iid {
                    law: GridLaw::build(generator, grid, sigma, theta_cell),
                    theta_cell,
                    noise,
                }
            }
            AdversaryKind::AtomMixture => {
                let fpinf = generator.fprime_inf();
                let delta = (1.0 / (sigma * fpinf)).min(1.0);
                // Worst-case round: the atom sits off-grid and carries
                // singular mass delta.
                if delta > 0.0 {
                    let worst = generator.f(1.0 - delta)
                        + if fpinf.is_finite() {
                            fpinf * delta
                        } else {
                            0.0
                        };
                    if worst > bound + 1e-9 {
                        return Err(Error::ConstructionInvalid(format!(
                            "bisection mixture needs divergence {worst:.6e} > 1/sigma"
                        )));
                    }
                }
                Inner::Atom {
                    stream: stream.expect("atom adversary needs a bisection stream"),
                    delta,
                    generator,
                    mu: Arc::new(uniform_grid_dist(grid)),
                }
            }
            AdversaryKind::AdaptiveGreedy { pool } => {
                let theta_cell = rng.gen_range(grid / 3..2 * grid / 3);
                let laws = (0..pool)
                    .map(|k| {
                        let center = ((u64::from(theta_cell)
                            + u64::from(k) * u64::from(grid) / u64::from(pool))
                            % u64::from(grid)) as u32;
                        GridLaw::build(generator, grid, sigma, center)
                    })
                    .collect();
                Inner::Greedy {
                    pool: laws,
                    theta_cell,
                    noise,
                }
            }
        };
        Ok(AdversaryState { inner, bound })
    }

    /// The largest singular mass the bisection adversary may play, or None
    /// for the other kinds.
    pub fn atom_mass(&self) -> Option<f64> {
        match &self.inner {
            Inner::Atom { delta, .. } => Some(*delta),
            _ => None,
        }
    }

    /// Plays round t (1-based). `probe` is the hypothesis the greedy
    /// adversary evaluates candidates against: the learner's committed
    /// threshold when it has one, otherwise a stand-in chosen by the caller.
    pub fn step(
        &mut self,
        t: u32,
        space: &ContextSpace,
        probe: u32,
        rng: &mut Rng,
    ) -> Result<RoundEmission> {
        let bound = self.bound;
        let emission = match &mut self.inner {
            Inner::Iid {
                law,
                theta_cell,
                noise,
            } => emit_from_grid_law(law, *theta_cell, *noise, space, rng),
            Inner::Greedy {
                pool,
                theta_cell,
                noise,
            } => {
                let mut best = 0usize;
                let mut best_loss = f64::NEG_INFINITY;
                for (k, law) in pool.iter().enumerate() {
                    let l = expected_probe_loss(law, *theta_cell, *noise, space, probe);
                    if l > best_loss + 1e-15 {
                        best = k;
                        best_loss = l;
                    }
                }
                emit_from_grid_law(&pool[best], *theta_cell, *noise, space, rng)
            }
            Inner::Atom {
                stream,
                delta,
                generator,
                mu,
            } => {
                let delta = *delta;
                let atom_rank = space.rank_of_atom(t);
                let grid = space.grid_size();
                let u: f64 = rng.gen();
                let (x_rank, y) = if u < delta {
                    (atom_rank, -f64::from(stream.bit(t as usize - 1)))
                } else {
                    let cell = rng.gen_range(0..grid);
                    (
                        space.rank_of_grid(cell),
                        f64::from(grid_side_of_theta(cell, grid, stream)),
                    )
                };
                let law = Arc::new(atom_round_law(space, t, delta, grid));
                let d = divergence(*generator, &law, mu);
                RoundEmission {
                    x_rank,
                    y,
                    law,
                    divergence: d,
                }
            }
        };
        if emission.divergence > bound + 1e-9 {
            return Err(Error::ConstructionInvalid(format!(
                "round {t} law has divergence {:.6e} > 1/sigma",
                emission.divergence
            )));
        }
        Ok(emission)
    }
}

/// The bisection round's context law: (1−δ) uniform over the grid plus δ on
/// the round's atom. Early atoms can coincide with a grid point, in which
/// case the mass merges onto that cell so the law stays a function of
/// context values.
fn atom_round_law(space: &ContextSpace, t: u32, delta: f64, grid: u32) -> DiscreteDist {
    let base = (1.0 - delta) / f64::from(grid);
    let on_grid = match space.position(space.rank_of_atom(t)) {
        Position::Grid(k) => Some(k),
        Position::Atom(_) => None,
    };
    let mut pairs: Vec<(String, f64)> = Vec::with_capacity(grid as usize + 1);
    if delta < 1.0 || on_grid.is_some() {
        pairs.extend((0..grid).map(|k| {
            let extra = if on_grid == Some(k) { delta } else { 0.0 };
            (format!("g{k}"), base + extra)
        }));
    }
    if on_grid.is_none() && delta > 0.0 {
        pairs.push((format!("a{t}"), delta));
    }
    DiscreteDist::from_pairs(pairs).expect("bisection round law")
}

fn emit_from_grid_law(
    law: &GridLaw,
    theta_cell: u32,
    noise: f64,
    space: &ContextSpace,
    rng: &mut Rng,
) -> RoundEmission {
    let cell = law.draw_cell(rng);
    let clean = if cell >= theta_cell { 1.0 } else { -1.0 };
    let flip: f64 = rng.gen();
    let y = if flip < noise { -clean } else { clean };
    RoundEmission {
        x_rank: space.rank_of_grid(cell),
        y,
        law: Arc::clone(&law.dist),
        divergence: law.divergence,
    }
}

/// Expected instantaneous loss of the threshold-`probe` hypothesis when the
/// context is drawn from `law` and labeled by theta_cell with flip rate
/// `noise`. The greedy adversary ranks its pool by this quantity.
fn expected_probe_loss(
    law: &GridLaw,
    theta_cell: u32,
    noise: f64,
    space: &ContextSpace,
    probe: u32,
) -> f64 {
    let mut total = 0.0;
    for (k, &p) in law.weights.iter().enumerate() {
        let clean = if (k as u32) >= theta_cell { 1.0 } else { -1.0 };
        let pred = if space.rank_of_grid(k as u32) >= probe {
            1.0
        } else {
            -1.0
        };
        let loss_clean = (1.0 - pred * clean) / 2.0;
        let loss_flip = (1.0 + pred * clean) / 2.0;
        total += p * ((1.0 - noise) * loss_clean + noise * loss_flip);
    }
    total
}
