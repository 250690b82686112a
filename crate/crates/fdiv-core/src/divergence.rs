//! Exact f-divergence evaluation on finite discrete distributions.
//!
//! For a generator f and distributions ν, μ,
//!
//! ```text
//! D_f(ν‖μ) = Σ_{x : μ(x)>0} μ(x) · f(ν(x)/μ(x))  +  f′(∞) · ν({x : μ(x)=0})
//! ```
//!
//! with the convention 0·∞ := 0, so a generator with unbounded slope only
//! blows up when ν actually charges points outside supp(μ). Everything here
//! is a finite sum; the only sources of error are f64 rounding.

use crate::dist::DiscreteDist;
use crate::generator::Generator;

/// D_f(ν‖μ); `+∞` exactly when f′(∞) = ∞ and ν puts mass off supp(μ).
pub fn divergence(g: Generator, nu: &DiscreteDist, mu: &DiscreteDist) -> f64 {
    let mut on_support = 0.0;
    let mut singular = 0.0;
    for label in nu.union_labels(mu) {
        let m = mu.mass(label);
        let n = nu.mass(label);
        if m > 0.0 {
            on_support += m * g.f(n / m);
        } else {
            singular += n;
        }
    }
    if singular > 0.0 {
        on_support + g.fprime_inf() * singular
    } else {
        on_support
    }
}

/// E_γ(ν‖μ) = Σ_x (ν(x) − γμ(x))₊ for γ ≥ 1.
///
/// Mass off supp(μ) enters at full weight, matching `divergence` with the
/// E_γ generator (whose slope at infinity is 1). This quantity is exactly the
/// smallest total variation distance to ν achievable by any distribution
/// whose ratio to μ stays ≤ γ, which is what makes it the currency of the
/// sampler's lower bounds.
pub fn egamma_divergence(nu: &DiscreteDist, mu: &DiscreteDist, gamma: f64) -> f64 {
    assert!(gamma >= 1.0, "egamma level must be ≥ 1, got {gamma}");
    nu.union_labels(mu)
        .iter()
        .map(|label| (nu.mass(label) - gamma * mu.mass(label)).max(0.0))
        .sum()
}

/// ν-mass of the ratio tail { x : ν(x)/μ(x) > m_cap }, counting all of ν's
/// mass off supp(μ) (ratio +∞ there).
pub fn ratio_tail_mass(nu: &DiscreteDist, mu: &DiscreteDist, m_cap: f64) -> f64 {
    assert!(m_cap > 0.0, "ratio cap must be > 0, got {m_cap}");
    nu.union_labels(mu)
        .iter()
        .map(|label| {
            let n = nu.mass(label);
            let m = mu.mass(label);
            if n > 0.0 && (m == 0.0 || n / m > m_cap) {
                n
            } else {
                0.0
            }
        })
        .sum()
}

/// Ratio-tail mass together with its divergence certificate 2·D_f(ν‖μ)/f′(M/2).
#[derive(Debug, Clone, Copy)]
pub struct TailMassCheck {
    pub tail: f64,
    /// `+∞` when the certificate gives no information (M < 2, f′(M/2) ≤ 0,
    /// or infinite divergence).
    pub bound: f64,
}

/// Evaluates the tail mass and, whenever the certificate is finite, asserts
/// the inequality tail ≤ 2·D_f(ν‖μ)/f′(M/2). The inequality is a theorem for
/// M ≥ 2, so a failure here means an arithmetic bug, not bad input.
pub fn tail_mass_check(
    g: Generator,
    nu: &DiscreteDist,
    mu: &DiscreteDist,
    m_cap: f64,
) -> TailMassCheck {
    let tail = ratio_tail_mass(nu, mu, m_cap);
    let bound = if m_cap >= 2.0 {
        let slope = g.fprime(m_cap / 2.0);
        let d = divergence(g, nu, mu);
        if slope > 0.0 && d.is_finite() {
            2.0 * d / slope
        } else {
            f64::INFINITY
        }
    } else {
        f64::INFINITY
    };
    if bound.is_finite() {
        assert!(
            tail <= bound + 1e-12,
            "ratio tail {tail} exceeds divergence certificate {bound} at cap {m_cap}"
        );
    }
    TailMassCheck { tail, bound }
}
