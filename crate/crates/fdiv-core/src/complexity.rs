//! Sample-size and regret-bound formulas.
//!
//! These are direct numeric evaluations of the closed-form bounds that govern
//! the truncated rejection sampler and the smoothed online learners. Sample
//! counts are returned as ceilings (`f64` so that +∞ can signal "no finite
//! budget works", e.g. a bounded-slope generator asked for a nontrivial
//! guarantee). The regret curves suppress universal constants to 1 and are
//! labeled "order bound" wherever they are reported.

use crate::error::{Error, Result};
use crate::generator::Generator;

/// Inputs shared by the bound evaluators; one struct so the CLI can echo a
/// complete query next to every emitted row.
#[derive(Debug, Clone, Copy)]
pub struct BoundQuery {
    pub generator: Generator,
    /// Divergence budget D_f(ν‖μ).
    pub d: f64,
    /// Total-variation target.
    pub eps: f64,
    /// Failure probability (coupling bound).
    pub delta: f64,
    /// Smoothness: per-round divergence budget is 1/σ.
    pub sigma: f64,
    /// Horizon.
    pub t: u64,
    /// VC dimension of the hypothesis class.
    pub vc: u64,
    /// Growth exponent of the superlinear lower bound.
    pub zeta: f64,
    /// Rényi order used by the oracle-efficient regret curve.
    pub lambda: f64,
    /// Sample budget for the per-ratio lower bound.
    pub n: u64,
}

impl BoundQuery {
    pub fn validate(&self) -> Result<()> {
        let want = |ok: bool, msg: &str| -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::Domain(msg.to_string()))
            }
        };
        want(
            self.d >= 0.0 && self.d.is_finite(),
            "D must be finite and ≥ 0",
        )?;
        want(self.eps > 0.0 && self.eps < 1.0, "eps must lie in (0,1)")?;
        want(
            self.delta > 0.0 && self.delta < 1.0,
            "delta must lie in (0,1)",
        )?;
        want(
            self.sigma > 0.0 && self.sigma <= 1.0,
            "sigma must lie in (0,1]",
        )?;
        want(self.t >= 1, "T must be ≥ 1")?;
        want(self.vc >= 1, "d must be ≥ 1")?;
        want(
            self.zeta > 0.0 && self.zeta.is_finite(),
            "zeta must be finite and > 0",
        )?;
        want(
            self.lambda > 1.0 && self.lambda.is_finite(),
            "lambda must be finite and > 1",
        )?;
        want(self.n >= 1, "n must be ≥ 1")?;
        Ok(())
    }
}

/// Draws sufficient for a TV-ε approximate sampler at divergence budget D:
/// `max(2, ceil((2/(1−ε)) · ln(2/ε) · (f′)⁻¹(4D/ε)))`, or +∞ when the
/// generator's slope is too flat to ever certify the budget.
pub fn upper_bound_n(g: Generator, d: f64, eps: f64) -> f64 {
    assert!(d >= 0.0, "divergence budget must be ≥ 0, got {d}");
    assert!(eps > 0.0 && eps < 1.0, "eps must lie in (0,1), got {eps}");
    let inv = g.inv_fprime(4.0 * d / eps);
    if !inv.is_finite() {
        return f64::INFINITY;
    }
    let raw = (2.0 / (1.0 - eps)) * (2.0 / eps).ln() * inv;
    raw.ceil().max(2.0)
}

/// Draws necessary against the two-point witness family:
/// `½ · (f′)⁻¹(δ/(2ε))`, valid in the regime ε ≤ 1/4, δ > 2·f(1/2).
///
/// The infinite-inverse case short-circuits before the regime check: a
/// bounded-slope generator forces +∞ draws regardless of δ.
pub fn lower_bound_n(g: Generator, delta: f64, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps <= 0.25) {
        return Err(Error::Domain(format!(
            "eps must lie in (0, 1/4], got {eps}"
        )));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::Domain(format!(
            "delta must be finite and > 0, got {delta}"
        )));
    }
    let inv = g.inv_fprime(delta / (2.0 * eps));
    if !inv.is_finite() {
        return Ok(f64::INFINITY);
    }
    let floor = 2.0 * g.f(0.5);
    if delta <= floor {
        return Err(Error::Domain(format!(
            "delta {delta} must exceed 2·f(1/2) = {floor} for this bound's regime"
        )));
    }
    Ok(0.5 * inv)
}

/// TV floor forced on any n-draw selection rule by a superlinear generator:
/// `(ζ^{1+ζ}/8) · (D/f′(n))^{1+ζ}`.
pub fn lower_bound_tv(g: Generator, d: f64, n: f64, zeta: f64) -> Result<f64> {
    if !g.is_superlinear() {
        return Err(Error::Unsupported(format!(
            "tv lower bound needs a strictly convex generator with unbounded slope, got {g}"
        )));
    }
    assert!(d >= 0.0, "divergence budget must be ≥ 0, got {d}");
    assert!(n >= 1.0, "sample budget must be ≥ 1, got {n}");
    assert!(zeta > 0.0, "growth exponent must be > 0, got {zeta}");
    let slope = g.fprime(n);
    let value = zeta.powf(1.0 + zeta) / 8.0 * (d / slope).powf(1.0 + zeta);
    let regrouped = 0.125 * (zeta * d / slope).powf(1.0 + zeta);
    if value.is_finite() || regrouped.is_finite() {
        let scale = 1.0 + value.abs().max(regrouped.abs());
        assert!(
            (value - regrouped).abs() <= 1e-12 * scale,
            "the two groupings of the tv lower bound disagree: {value} vs {regrouped}"
        );
    }
    Ok(value)
}

/// Per-round draws sufficient to couple T smoothed contexts with iid base
/// draws at failure probability δ: `ceil((1/(1−ε)) · ln(T/δ) · (f′)⁻¹(1/(εσ)))`.
pub fn coupling_n(g: Generator, sigma: f64, eps: f64, delta: f64, t: u64) -> f64 {
    assert!(eps > 0.0 && eps < 1.0, "eps must lie in (0,1), got {eps}");
    assert!(
        delta > 0.0 && delta < 1.0,
        "delta must lie in (0,1), got {delta}"
    );
    assert!(
        sigma > 0.0 && sigma <= 1.0,
        "sigma must lie in (0,1], got {sigma}"
    );
    assert!(t >= 1, "horizon must be ≥ 1");
    let inv = g.inv_fprime(1.0 / (eps * sigma));
    if !inv.is_finite() {
        return f64::INFINITY;
    }
    ((1.0 / (1.0 - eps)) * (t as f64 / delta).ln() * inv).ceil()
}

/// Order-of-magnitude regret curves for the three smoothed-learning results.
#[derive(Debug, Clone, Copy)]
pub struct RegretBounds {
    /// Information-theoretic minimax rate (ε optimized on a grid).
    pub minimax: f64,
    /// Improper two-oracle-calls-per-round learner (α optimized on a grid).
    pub improper: f64,
    /// Proper one-oracle-call FTPL rate, Rényi-λ smoothness.
    pub ftpl: f64,
}

/// 200 log-spaced points spanning [1e−6, 1).
fn optimization_grid() -> impl Iterator<Item = f64> {
    (0..200).map(|i| 1e-6 * 1e6f64.powf(i as f64 / 200.0))
}

fn cap_at_horizon(value: f64, t: f64) -> f64 {
    if value.is_nan() {
        t
    } else {
        value.min(t)
    }
}

/// Evaluates all three regret curves at `q`, each capped at the trivial
/// bound T. Constants are suppressed to 1; treat the outputs as shapes, not
/// certified counts.
pub fn regret_bounds(q: &BoundQuery) -> Result<RegretBounds> {
    q.validate()?;
    let t = q.t as f64;
    let d = q.vc as f64;
    let g = q.generator;

    let base = (t * t.ln().max(0.0) * d).sqrt();
    let minimax_best = optimization_grid()
        .map(|eps| {
            let inv = g.inv_fprime(1.0 / (eps * q.sigma));
            eps * t + (t * d * (t * inv).ln()).sqrt()
        })
        .fold(f64::INFINITY, f64::min);
    let minimax = cap_at_horizon(base + minimax_best, t);

    let improper_best = optimization_grid()
        .map(|alpha| {
            let inv = g.inv_fprime(1.0 / (alpha * q.sigma));
            alpha * t + (d * t * t.ln().max(0.0) * inv).sqrt()
        })
        .fold(f64::INFINITY, f64::min);
    let improper = cap_at_horizon(improper_best, t);

    let exponent = (2.0 * q.lambda + 1.0) / (4.0 * q.lambda - 1.0);
    let ftpl_raw = d.sqrt() * t.powf(exponent) * q.sigma.powf(-1.0 / (4.0 * q.lambda - 1.0));
    let ftpl = cap_at_horizon(ftpl_raw, t);

    Ok(RegretBounds {
        minimax,
        improper,
        ftpl,
    })
}
