//! Truncated rejection sampling with an exactly computable output law.
//!
//! The sampler draws n iid labels from a base distribution μ, accepts draw j
//! with probability ratio(X_j)/M when the target-to-base ratio is at most the
//! truncation level M (never otherwise), and emits the first accepted draw.
//! When nothing is accepted, the `uniform_index` fallback picks a uniformly
//! random slot and re-draws it fresh from μ; the emitted value is then an
//! unconditional μ sample, which is what makes the closed-form output law
//!
//! ```text
//! law = q·ν_M + (1−q)·μ,   a = ν(ratio ≤ M)/M,   q = 1 − (1−a)^n
//! ```
//!
//! exact rather than approximate (`exact_output_law` returns it without any
//! Monte Carlo). A `fixed_first` fallback that literally emits draw 0 is kept
//! for brute-force enumeration tests of arbitrary selection rules.

use crate::dist::{Atom, DiscreteDist};
use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::seeds::stream_rng;
use rand::Rng as _;
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fallback {
    /// Uniform slot, re-drawn fresh from μ; matches `exact_output_law`.
    UniformIndex,
    /// Emit draw 0 as-is; for enumeration tests only.
    FixedFirst,
}

/// Truncation level and sample budget for one sampler run.
#[derive(Debug, Clone, Copy)]
pub struct SamplerPlan {
    /// Ratio cap M ≥ 1.
    pub m_cap: f64,
    /// Number of base draws, n ≥ 1.
    pub n: u64,
    pub fallback: Fallback,
}

/// Everything a sampler run produced: the base draws, which slot was
/// emitted, and whether it was an acceptance or a fallback.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplerOutcome {
    pub draws: Vec<String>,
    /// Slot of the emitted sample (0-based).
    pub chosen_index: usize,
    pub accepted: bool,
}

impl SamplerOutcome {
    /// Label the run emitted.
    pub fn sample(&self) -> &str {
        &self.draws[self.chosen_index]
    }
}

/// Plan sufficient for TV distance ε at divergence budget D:
/// M = 2·(f′)⁻¹(4D/ε) and n from the sample-complexity bound.
///
/// Errors with `UnboundedTruncation` when the generator's slope is bounded
/// below 4D/ε, in which case no truncation level can certify the budget.
pub fn make_plan(g: Generator, d: f64, eps: f64) -> Result<SamplerPlan> {
    assert!(d >= 0.0, "divergence budget must be ≥ 0, got {d}");
    assert!(eps > 0.0 && eps < 1.0, "eps must lie in (0,1), got {eps}");
    let inv = g.inv_fprime(4.0 * d / eps);
    if !inv.is_finite() {
        return Err(Error::UnboundedTruncation(format!(
            "f′ of {g} never reaches {} so no finite ratio cap works",
            4.0 * d / eps
        )));
    }
    let n = crate::complexity::upper_bound_n(g, d, eps);
    if n > u64::MAX as f64 {
        return Err(Error::Unsupported(format!(
            "sample budget {n} exceeds u64 range"
        )));
    }
    Ok(SamplerPlan {
        m_cap: 2.0 * inv,
        n: n as u64,
        fallback: Fallback::UniformIndex,
    })
}

fn draw_label<'d>(mu: &'d DiscreteDist, rng: &mut crate::seeds::Rng) -> &'d str {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (label, mass) in mu.iter() {
        acc += mass;
        if u < acc {
            return label;
        }
    }
    // Mass sums to 1 up to rounding; attribute the sliver to the last atom.
    mu.atoms()
        .last()
        .expect("validated dists are nonempty")
        .label
        .as_str()
}

/// Runs the truncated rejection sampler once. Deterministic given `seed`.
///
/// `ratio` must cover supp(μ); per-draw randomness is consumed in the fixed
/// order label, acceptance coin, label, coin, …, then (on total rejection
/// with `UniformIndex`) fallback slot and one fresh label.
pub fn rejection_select(
    mu: &DiscreteDist,
    ratio: &HashMap<String, f64>,
    plan: &SamplerPlan,
    seed: u64,
) -> Result<SamplerOutcome> {
    assert!(
        plan.m_cap >= 1.0,
        "ratio cap must be ≥ 1, got {}",
        plan.m_cap
    );
    assert!(plan.n >= 1, "sample budget must be ≥ 1");
    let n = usize::try_from(plan.n)
        .map_err(|_| Error::Unsupported(format!("cannot materialize {} draws", plan.n)))?;
    let mut rng = stream_rng(seed, "rejection_select", 0);
    let mut draws = Vec::with_capacity(n);
    let mut first_accept = None;
    for j in 0..n {
        let label = draw_label(mu, &mut rng);
        let r = *ratio
            .get(label)
            .ok_or_else(|| Error::Domain(format!("ratio missing for drawn label {label:?}")))?;
        if !(r >= 0.0) {
            return Err(Error::Domain(format!(
                "ratio for {label:?} is {r}, want ≥ 0"
            )));
        }
        let coin: f64 = rng.gen();
        if first_accept.is_none() && r <= plan.m_cap && coin < r / plan.m_cap {
            first_accept = Some(j);
        }
        draws.push(label.to_string());
    }
    match first_accept {
        Some(j) => Ok(SamplerOutcome {
            draws,
            chosen_index: j,
            accepted: true,
        }),
        None => match plan.fallback {
            Fallback::FixedFirst => Ok(SamplerOutcome {
                draws,
                chosen_index: 0,
                accepted: false,
            }),
            Fallback::UniformIndex => {
                let j = rng.gen_range(0..n);
                draws[j] = draw_label(mu, &mut rng).to_string();
                Ok(SamplerOutcome {
                    draws,
                    chosen_index: j,
                    accepted: false,
                })
            }
        },
    }
}

/// The sampler's exact output law under the `UniformIndex` fallback, plus its
/// TV distance to the target ν. Pure arithmetic, no sampling.
pub fn exact_output_law(
    nu: &DiscreteDist,
    mu: &DiscreteDist,
    m_cap: f64,
    n: u64,
) -> Result<(DiscreteDist, f64)> {
    assert!(m_cap >= 1.0, "ratio cap must be ≥ 1, got {m_cap}");
    assert!(n >= 1, "sample budget must be ≥ 1");
    let labels = nu.union_labels(mu);
    let kept_mass: f64 = labels
        .iter()
        .map(|label| {
            let nv = nu.mass(label);
            let mv = mu.mass(label);
            if nv > 0.0 && mv > 0.0 && nv / mv <= m_cap {
                nv
            } else {
                0.0
            }
        })
        .sum();
    if kept_mass <= 0.0 {
        return Err(Error::DegenerateTruncation(format!(
            "no target mass has ratio ≤ {m_cap}; the conditioned measure is undefined"
        )));
    }
    let accept = kept_mass / m_cap;
    // (1 − a)^n through expm1/ln_1p: for huge caps a sits far below machine
    // epsilon and the direct power would round to 1 even when n·a is large.
    let miss = (n as f64 * (-accept).ln_1p()).exp();
    let q = -(n as f64 * (-accept).ln_1p()).exp_m1();
    let atoms = labels
        .iter()
        .map(|label| {
            let nv = nu.mass(label);
            let mv = mu.mass(label);
            let conditioned = if nv > 0.0 && mv > 0.0 && nv / mv <= m_cap {
                nv / kept_mass
            } else {
                0.0
            };
            Atom {
                label: label.to_string(),
                mass: q * conditioned + miss * mv,
            }
        })
        .collect();
    let law = DiscreteDist::new(atoms)?;
    let tv = law.tv_distance(nu);
    Ok((law, tv))
}

/// Clamps ν to the ratio cap γ and redistributes the removed mass onto slack
/// atoms in ascending label order. The resulting ν̃ attains the smallest
/// possible TV distance to ν among laws with dν̃/dμ ≤ γ, and that distance
/// equals the E_γ divergence (asserted to 1e−12).
pub fn clamp_projection(
    nu: &DiscreteDist,
    mu: &DiscreteDist,
    gamma: f64,
) -> Result<(DiscreteDist, f64)> {
    if !(gamma >= 1.0) {
        return Err(Error::Domain(format!(
            "clamp level must be ≥ 1 for feasibility, got {gamma}"
        )));
    }
    let mut labels = nu.union_labels(mu);
    labels.sort_unstable();
    let mut masses: Vec<f64> = labels
        .iter()
        .map(|label| nu.mass(label).min(gamma * mu.mass(label)))
        .collect();
    let mut deficit = 1.0 - masses.iter().sum::<f64>();
    for (i, label) in labels.iter().enumerate() {
        if deficit <= 0.0 {
            break;
        }
        let slack = (gamma * mu.mass(label) - masses[i]).max(0.0);
        let add = slack.min(deficit);
        masses[i] += add;
        deficit -= add;
    }
    let tilde = DiscreteDist::new(
        labels
            .iter()
            .zip(&masses)
            .map(|(label, &mass)| Atom {
                label: label.to_string(),
                mass,
            })
            .collect(),
    )?;
    let tv = tilde.tv_distance(nu);
    let certified = crate::divergence::egamma_divergence(nu, mu, gamma);
    assert!(
        (tv - certified).abs() <= 1e-12,
        "clamp projection tv {tv} does not match the E_γ value {certified}"
    );
    for (label, &mass) in labels.iter().zip(&masses) {
        assert!(
            mass <= gamma * mu.mass(label) + 1e-12,
            "clamped mass at {label:?} exceeds the ratio cap"
        );
    }
    Ok((tilde, tv))
}

/// Exact output law of an arbitrary deterministic selection rule, by full
/// enumeration of all |supp(μ)|^n draw tuples. Checks the universal ratio
/// bound law(x)/μ(x) ≤ n on the way out.
pub fn brute_force_output_law<F>(mu: &DiscreteDist, rule: F, n: u32) -> Result<DiscreteDist>
where
    F: Fn(&[&str]) -> usize,
{
    let support: Vec<(&str, f64)> = mu.iter().collect();
    let tuples = (support.len() as f64).powi(n as i32);
    if !(tuples <= 1e6) {
        return Err(Error::Unsupported(format!(
            "enumeration of {tuples} tuples exceeds the 1e6 budget"
        )));
    }
    let n = n as usize;
    let mut law: HashMap<&str, f64> = HashMap::new();
    let mut counters = vec![0usize; n];
    loop {
        let tuple: Vec<&str> = counters.iter().map(|&c| support[c].0).collect();
        let prob: f64 = counters.iter().map(|&c| support[c].1).product();
        let idx = rule(&tuple);
        assert!(idx < n, "selection rule returned index {idx} for {n} draws");
        *law.entry(tuple[idx]).or_insert(0.0) += prob;
        // Odometer increment over the tuple space.
        let mut pos = 0;
        loop {
            if pos == n {
                let atoms = support
                    .iter()
                    .map(|(label, _)| Atom {
                        label: label.to_string(),
                        mass: law.get(label).copied().unwrap_or(0.0),
                    })
                    .collect();
                let dist = DiscreteDist::new(atoms)?;
                for (label, mass) in mu.iter() {
                    if mass > 0.0 {
                        assert!(
                            dist.mass(label) / mass <= n as f64 + 1e-12,
                            "selection-rule law exceeds the ratio bound n at {label:?}"
                        );
                    }
                }
                return Ok(dist);
            }
            counters[pos] += 1;
            if counters[pos] < support.len() {
                break;
            }
            counters[pos] = 0;
            pos += 1;
        }
    }
}
