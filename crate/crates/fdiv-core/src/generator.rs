//! Convex generators for f-divergences.
//!
//! A generator is a convex f: [0,∞) → ℝ with f(1) = 0. Four families are
//! supported, normalized so that f also satisfies f′(1) = 0 (which changes no
//! divergence value but keeps the calculus tidy):
//!
//! | kind        | f(t)                  | f′(t)                | f′(∞) |
//! |-------------|-----------------------|----------------------|-------|
//! | `Tv`        | \|t−1\| − (t−1)       | −2 (t<1), 0 (t≥1)    | 0     |
//! | `Kl`        | t ln t − t + 1        | ln t                 | +∞    |
//! | `Renyi(λ)`  | t^λ − λt + λ − 1      | λt^{λ−1} − λ         | +∞    |
//! | `EGamma(γ)` | (t − γ)₊              | 0 (t<γ), 1 (t≥γ)     | 1     |
//!
//! At kinks the derivative is the right derivative (the maximal subgradient
//! choice), so f′ is right-continuous and nondecreasing. The generalized
//! inverse [`Generator::inv_fprime`] is `inf { t > 0 : f′(t) ≥ u }`, which is
//! what truncation-level and sample-complexity formulas consume; it returns
//! `+∞` when the level set is empty (bounded derivative) and 1 at u = 0.

use crate::error::{Error, Result};
use std::fmt;

/// λ for `Renyi` must be > 1; γ for `EGamma` must be ≥ 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Generator {
    Tv,
    Kl,
    Renyi { lambda: f64 },
    EGamma { gamma: f64 },
}

impl Generator {
    pub fn renyi(lambda: f64) -> Result<Self> {
        if !(lambda > 1.0) || !lambda.is_finite() {
            return Err(Error::Domain(format!(
                "renyi order must be finite and > 1, got {lambda}"
            )));
        }
        Ok(Generator::Renyi { lambda })
    }

    pub fn egamma(gamma: f64) -> Result<Self> {
        if !(gamma >= 1.0) || !gamma.is_finite() {
            return Err(Error::Domain(format!(
                "egamma level must be finite and ≥ 1, got {gamma}"
            )));
        }
        Ok(Generator::EGamma { gamma })
    }

    /// Parses `"tv"`, `"kl"`, `"renyi:<λ>"`, `"egamma:<γ>"`.
    pub fn parse(s: &str) -> Result<Self> {
        let (kind, param) = match s.split_once(':') {
            Some((k, p)) => (k, Some(p)),
            None => (s, None),
        };
        let need = |p: Option<&str>, kind: &str| -> Result<f64> {
            let raw =
                p.ok_or_else(|| Error::Domain(format!("{kind} needs a parameter, e.g. {kind}:2")))?;
            raw.parse::<f64>()
                .map_err(|_| Error::Domain(format!("bad {kind} parameter {raw:?}")))
        };
        match kind {
            "tv" => Ok(Generator::Tv),
            "kl" => Ok(Generator::Kl),
            "renyi" => Generator::renyi(need(param, "renyi")?),
            "egamma" => Generator::egamma(need(param, "egamma")?),
            other => Err(Error::Domain(format!("unknown generator kind {other:?}"))),
        }
    }

    /// f(t) for t ≥ 0. The t = 0 value is the continuous extension
    /// (KL: 1, Rényi-λ: λ−1, TV: 2, E_γ: 0).
    pub fn f(&self, t: f64) -> f64 {
        assert!(t >= 0.0, "generator argument must be ≥ 0, got {t}");
        match *self {
            Generator::Tv => (t - 1.0).abs() - (t - 1.0),
            Generator::Kl => {
                if t == 0.0 {
                    1.0
                } else {
                    t * t.ln() - t + 1.0
                }
            }
            Generator::Renyi { lambda } => t.powf(lambda) - lambda * t + lambda - 1.0,
            Generator::EGamma { gamma } => (t - gamma).max(0.0),
        }
    }

    /// Right derivative of f at t ≥ 0; `-∞` at the KL origin, `+∞` never.
    pub fn fprime(&self, t: f64) -> f64 {
        assert!(t >= 0.0, "generator argument must be ≥ 0, got {t}");
        match *self {
            Generator::Tv => {
                if t < 1.0 {
                    -2.0
                } else {
                    0.0
                }
            }
            Generator::Kl => t.ln(),
            Generator::Renyi { lambda } => lambda * t.powf(lambda - 1.0) - lambda,
            Generator::EGamma { gamma } => {
                if t < gamma {
                    0.0
                } else {
                    1.0
                }
            }
        }
    }

    /// f″(t) where it exists (t > 0 for KL/Rényi; almost everywhere 0 for the
    /// piecewise-linear kinds).
    pub fn f_second(&self, t: f64) -> f64 {
        assert!(t >= 0.0, "generator argument must be ≥ 0, got {t}");
        match *self {
            Generator::Tv | Generator::EGamma { .. } => 0.0,
            Generator::Kl => 1.0 / t,
            Generator::Renyi { lambda } => lambda * (lambda - 1.0) * t.powf(lambda - 2.0),
        }
    }

    /// lim_{t→∞} f(t)/t: the price per unit of mass that ν puts outside
    /// supp(μ). Zero for TV, one for E_γ, infinite for KL and Rényi.
    pub fn fprime_inf(&self) -> f64 {
        match *self {
            Generator::Tv => 0.0,
            Generator::Kl | Generator::Renyi { .. } => f64::INFINITY,
            Generator::EGamma { .. } => 1.0,
        }
    }

    /// Generalized inverse `inf { t > 0 : f′(t) ≥ u }` for u ≥ 0.
    ///
    /// Returns `+∞` when no t qualifies. At u = 0 the literal infimum is
    /// degenerate for the kinds whose derivative vanishes on an initial
    /// segment, so u = 0 returns 1 by convention: a ratio cap of 1 is the
    /// smallest that leaves the target itself admissible, and it agrees with
    /// the closed forms e^u and (1 + u/λ)^{1/(λ−1)} at u = 0.
    pub fn inv_fprime(&self, u: f64) -> f64 {
        assert!(u >= 0.0, "inverse-derivative argument must be ≥ 0, got {u}");
        if u == 0.0 {
            return 1.0;
        }
        match *self {
            Generator::Tv => f64::INFINITY,
            Generator::Kl => u.exp(),
            Generator::Renyi { lambda } => (1.0 + u / lambda).powf(1.0 / (lambda - 1.0)),
            Generator::EGamma { gamma } => {
                if u <= 1.0 {
                    gamma
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// True for the strictly convex, twice-differentiable kinds (KL, Rényi),
    /// the only ones the superlinear tail construction accepts.
    pub fn is_superlinear(&self) -> bool {
        matches!(self, Generator::Kl | Generator::Renyi { .. })
    }

    /// Canonical textual form, reparseable by [`Generator::parse`].
    pub fn label(&self) -> String {
        match *self {
            Generator::Tv => "tv".to_string(),
            Generator::Kl => "kl".to_string(),
            Generator::Renyi { lambda } => format!("renyi:{lambda}"),
            Generator::EGamma { gamma } => format!("egamma:{gamma}"),
        }
    }

    /// Numeric parameter for report columns; 0 for the parameterless kinds.
    pub fn param(&self) -> f64 {
        match *self {
            Generator::Tv | Generator::Kl => 0.0,
            Generator::Renyi { lambda } => lambda,
            Generator::EGamma { gamma } => gamma,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}
