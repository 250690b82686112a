//! Mean estimation under a change of measure: importance sampling against
//! truncated-rejection sampling, with exact uniform-error evaluation over
//! thresholds and the matching order-level bound curves.
//!
//! Both estimators are linear in the test function h, so one batch of draws
//! yields the estimate for every threshold at once; `uniform_error` then
//! takes an exact sup because estimate and truth are both step functions
//! whose breakpoints lie in the task's support.

use crate::dist::DiscreteDist;
use crate::divergence::divergence;
use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::quad::integrate;
use crate::sampler::{exact_output_law, make_plan, SamplerPlan};
use crate::seeds::{stream_rng, Rng};
use rand::Rng as _;
use rayon::prelude::*;
use serde::Serialize;

/// One estimation problem: approximate E_ν[h] from draws out of μ.
#[derive(Debug, Clone)]
pub struct EstimationTask {
    pub nu: DiscreteDist,
    pub mu: DiscreteDist,
    /// Generator used to budget the rejection plan.
    pub generator: Generator,
    /// Total-variation target for the rejection path.
    pub eps: f64,
    /// Total sample budget.
    pub n: u64,
    /// Per-block budget for the rejection estimator; must divide n.
    pub m: u64,
}

impl EstimationTask {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m == 0 {
            return Err(Error::Domain("sample budgets must be at least 1".into()));
        }
        if self.n % self.m != 0 {
            return Err(Error::Domain(format!(
                "per-block budget m = {} must divide n = {}",
                self.m, self.n
            )));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::Domain(format!(
                "eps must lie in (0,1), got {}",
                self.eps
            )));
        }
        Ok(())
    }

    /// The truncation plan the configured generator and eps ask for. Its n
    /// is the per-block budget that makes the 2·eps bias contract kick in;
    /// running with task.m below it weakens the guarantee.
    pub fn plan(&self) -> Result<SamplerPlan> {
        let d = divergence(self.generator, &self.nu, &self.mu);
        if !d.is_finite() {
            return Err(Error::UnboundedTruncation(
                "divergence of nu from mu is infinite; no rejection plan exists".into(),
            ));
        }
        make_plan(self.generator, d, self.eps)
    }
}

/// Draw table over μ's atoms with the likelihood ratios dν/dμ.
struct MuTable {
    cumulative: Vec<f64>,
    ratios: Vec<f64>,
}

impl MuTable {
    fn build(nu: &DiscreteDist, mu: &DiscreteDist) -> MuTable {
        let mut cumulative = Vec::with_capacity(mu.len());
        let mut ratios = Vec::with_capacity(mu.len());
        let mut acc = 0.0;
        for atom in mu.atoms() {
            acc += atom.mass;
            cumulative.push(acc);
            ratios.push(if atom.mass > 0.0 {
                nu.mass(&atom.label) / atom.mass
            } else {
                0.0
            });
        }
        MuTable { cumulative, ratios }
    }

    fn draw(&self, rng: &mut Rng) -> u32 {
        let u: f64 = rng.gen();
        let i = match self
            .cumulative
            .binary_search_by(|c| c.partial_cmp(&u).unwrap())
        {
            Ok(i) | Err(i) => i,
        };
        i.min(self.cumulative.len() - 1) as u32
    }
}

fn check_nu_dominated(nu: &DiscreteDist, mu: &DiscreteDist) -> Result<()> {
    for atom in nu.atoms() {
        if atom.mass > 0.0 && mu.mass(&atom.label) == 0.0 {
            return Err(Error::Domain(format!(
                "importance ratio undefined: nu puts mass {} on {:?} outside supp(mu)",
                atom.mass, atom.label
            )));
        }
    }
    Ok(())
}

/// A batch of draws reduced to (atom index into μ, coefficient) pairs, so
/// any h can be evaluated after the fact: estimate(h) = Σ coef_i·h(x_i).
pub struct SampleBatch<'a> {
    mu: &'a DiscreteDist,
    draws: Vec<u32>,
    coefficients: Vec<f64>,
}

impl SampleBatch<'_> {
    pub fn estimate<H: Fn(&str) -> f64>(&self, h: H) -> f64 {
        self.draws
            .iter()
            .zip(&self.coefficients)
            .map(|(&i, &c)| c * h(&self.mu.atoms()[i as usize].label))
            .sum()
    }

    /// The batch as (position, coefficient) points; requires numeric labels.
    pub fn points(&self) -> Result<Vec<(f64, f64)>> {
        self.draws
            .iter()
            .zip(&self.coefficients)
            .map(|(&i, &c)| Ok((label_position(&self.mu.atoms()[i as usize].label)?, c)))
            .collect()
    }
}

/// The importance batch: n iid draws from μ, coefficient r(X_i)/n. The
/// resulting estimator (1/n)·Σ r(X_i)·h(X_i) is unbiased for E_ν[h]
/// whenever ν is dominated by μ.
pub fn importance_batch<'a>(task: &'a EstimationTask, rng: &mut Rng) -> Result<SampleBatch<'a>> {
    task.validate()?;
    check_nu_dominated(&task.nu, &task.mu)?;
    let table = MuTable::build(&task.nu, &task.mu);
    let inv_n = 1.0 / task.n as f64;
    let mut draws = Vec::with_capacity(task.n as usize);
    let mut coefficients = Vec::with_capacity(task.n as usize);
    for _ in 0..task.n {
        let i = table.draw(rng);
        draws.push(i);
        coefficients.push(table.ratios[i as usize] * inv_n);
    }
    Ok(SampleBatch {
        mu: &task.mu,
        draws,
        coefficients,
    })
}

pub fn importance_estimate<H: Fn(&str) -> f64>(
    task: &EstimationTask,
    h: H,
    rng: &mut Rng,
) -> Result<f64> {
    Ok(importance_batch(task, rng)?.estimate(h))
}

/// One truncated-rejection sample: up to `budget` proposals from μ, each
/// accepted with probability min(r/m_cap, 1[r ≤ m_cap]); if all miss, a
/// fresh draw from μ stands in. The output law is exactly
/// `exact_output_law(nu, mu, m_cap, budget)`.
fn rejection_draw(table: &MuTable, m_cap: f64, budget: u64, rng: &mut Rng) -> u32 {
    for _ in 0..budget {
        let i = table.draw(rng);
        let r = table.ratios[i as usize];
        let coin: f64 = rng.gen();
        if r <= m_cap && coin < r / m_cap {
            return i;
        }
    }
    table.draw(rng)
}

/// Rejection batch with an explicit ratio cap: n/m blocks, one truncated
/// rejection sample each, coefficient m/n.
pub fn rejection_batch_with<'a>(
    task: &'a EstimationTask,
    m_cap: f64,
    rng: &mut Rng,
) -> Result<SampleBatch<'a>> {
    task.validate()?;
    if m_cap < 1.0 {
        return Err(Error::Domain(format!(
            "ratio cap must be >= 1, got {m_cap}"
        )));
    }
    let table = MuTable::build(&task.nu, &task.mu);
    let blocks = task.n / task.m;
    let coef = task.m as f64 / task.n as f64;
    let mut draws = Vec::with_capacity(blocks as usize);
    for _ in 0..blocks {
        draws.push(rejection_draw(&table, m_cap, task.m, rng));
    }
    Ok(SampleBatch {
        mu: &task.mu,
        coefficients: vec![coef; draws.len()],
        draws,
    })
}

/// Rejection batch with the cap taken from the task's own plan.
pub fn rejection_batch<'a>(task: &'a EstimationTask, rng: &mut Rng) -> Result<SampleBatch<'a>> {
    let plan = task.plan()?;
    rejection_batch_with(task, plan.m_cap, rng)
}

pub fn rejection_estimate<H: Fn(&str) -> f64>(
    task: &EstimationTask,
    h: H,
    rng: &mut Rng,
) -> Result<f64> {
    Ok(rejection_batch(task, rng)?.estimate(h))
}

/// Parses an atom label as a position in [0, 1].
pub fn label_position(label: &str) -> Result<f64> {
    let x: f64 = label
        .parse()
        .map_err(|_| Error::Domain(format!("label {label:?} is not a numeric position")))?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!(
            "label {label:?} lies outside [0, 1]"
        )));
    }
    Ok(x)
}

/// E_ν[g_θ] for the threshold g_θ(x) = +1 iff x ≥ θ, computed exactly.
pub fn threshold_truth(nu: &DiscreteDist, theta: f64) -> Result<f64> {
    let mut total = 0.0;
    for atom in nu.atoms() {
        let x = label_position(&atom.label)?;
        total += atom.mass * if x >= theta { 1.0 } else { -1.0 };
    }
    Ok(total)
}

/// The thresholds where either the truth or any batch estimate can change:
/// 0, every support point of ν or μ, and one value above them all.
pub fn threshold_candidates(nu: &DiscreteDist, mu: &DiscreteDist) -> Result<Vec<f64>> {
    let mut cand = vec![0.0];
    for atom in nu.atoms().iter().chain(mu.atoms()) {
        cand.push(label_position(&atom.label)?);
    }
    cand.push(2.0);
    cand.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cand.dedup();
    Ok(cand)
}

/// sup over thresholds of |Σ coef·g_θ(x) − E_ν[g_θ]|, exact: both sides are
/// right-continuous steps with breakpoints among the candidates.
pub fn uniform_error(nu: &DiscreteDist, mu: &DiscreteDist, points: &[(f64, f64)]) -> Result<f64> {
    let mut sorted: Vec<(f64, f64)> = points.to_vec();
    sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let total: f64 = sorted.iter().map(|p| p.1).sum();
    // suffix[i] = sum of coefficients with position >= sorted[i].0
    let mut suffix = vec![0.0; sorted.len() + 1];
    for i in (0..sorted.len()).rev() {
        suffix[i] = suffix[i + 1] + sorted[i].1;
    }
    let mut worst = 0.0f64;
    for &theta in &threshold_candidates(nu, mu)? {
        let idx = sorted.partition_point(|p| p.0 < theta);
        let estimate = 2.0 * suffix[idx] - total;
        let err = (estimate - threshold_truth(nu, theta)?).abs();
        worst = worst.max(err);
    }
    Ok(worst)
}

/// Bracketing-entropy default for thresholds: N(α) = ceil(2/α²), recorded
/// as a configuration constant (α ≥ √2 needs a single bracket).
pub fn default_bracketing_entropy(alpha: f64) -> f64 {
    (2.0 / (alpha * alpha)).ceil().max(1.0)
}

/// ∫₀² sqrt(ln N(α)) dα by adaptive quadrature. The integrand is clipped at
/// α = 1e-9; for the default entropy the discarded head is below 1e-8.
pub fn bracketing_integral<N: Fn(f64) -> f64>(entropy: N) -> f64 {
    integrate(|a| entropy(a).ln().max(0.0).sqrt(), 1e-9, 2.0, 1e-8)
}

/// Importance-sampling uniform-error order bound:
/// sqrt(1+χ²)·max(n^{−1/3}, sqrt((1+χ²)/n)·∫sqrt(ln N)).
pub fn importance_bound(chi2: f64, integral: f64, n: f64) -> f64 {
    (1.0 + chi2).sqrt() * (n.powf(-1.0 / 3.0)).max(((1.0 + chi2) / n).sqrt() * integral)
}

/// Rejection-sampling order bound: ∫sqrt(ln N)·sqrt(m/n) + 2ε.
pub fn rejection_bound(integral: f64, m: f64, n: f64, eps: f64) -> f64 {
    integral * (m / n).sqrt() + 2.0 * eps
}

/// One row of an estimator-comparison or knee report.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentRow {
    pub estimator: String,
    pub n: u64,
    pub m: u64,
    pub eps: f64,
    pub mean_err: f64,
    pub std_err: f64,
    pub bound_value: f64,
}

fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Head-to-head uniform-error comparison on an n-grid with the ε = n^{−1/3}
/// schedule: for each n the rejection plan fixes (M, m), blocks fill the
/// budget, and both estimators are replicated under split seeds. The n
/// column reports the budget actually used (blocks·m).
pub fn compare_experiment(
    nu: &DiscreteDist,
    mu: &DiscreteDist,
    generator: Generator,
    n_grid: &[u64],
    replicates: u32,
    seed: u64,
) -> Result<Vec<ExperimentRow>> {
    check_nu_dominated(nu, mu)?;
    let chi2 = divergence(Generator::renyi(2.0)?, nu, mu);
    let integral = bracketing_integral(default_bracketing_entropy);
    let mut rows = Vec::new();
    for (gi, &n_raw) in n_grid.iter().enumerate() {
        if n_raw == 0 {
            return Err(Error::Domain("n grid entries must be at least 1".into()));
        }
        let eps = (n_raw as f64).powf(-1.0 / 3.0).min(0.5);
        let d = divergence(generator, nu, mu);
        if !d.is_finite() {
            return Err(Error::UnboundedTruncation(
                "divergence of nu from mu is infinite; no rejection plan exists".into(),
            ));
        }
        let plan = make_plan(generator, d, eps)?;
        let m = plan.n;
        let blocks = (n_raw / m).max(1);
        let n = blocks * m;
        let task = EstimationTask {
            nu: nu.clone(),
            mu: mu.clone(),
            generator,
            eps,
            n,
            m,
        };
        task.validate()?;

        let run = |tag: &'static str, rejection: bool| -> Result<Vec<f64>> {
            (0..replicates)
                .into_par_iter()
                .map(|rep| {
                    let idx = (gi as u64) << 32 | u64::from(rep);
                    let mut rng = stream_rng(seed, tag, idx);
                    let batch = if rejection {
                        rejection_batch_with(&task, plan.m_cap, &mut rng)?
                    } else {
                        importance_batch(&task, &mut rng)?
                    };
                    uniform_error(nu, mu, &batch.points()?)
                })
                .collect()
        };
        let (imp_mean, imp_se) = mean_and_se(&run("compare_importance", false)?);
        let (rej_mean, rej_se) = mean_and_se(&run("compare_rejection", true)?);
        rows.push(ExperimentRow {
            estimator: "importance".into(),
            n,
            m: n,
            eps,
            mean_err: imp_mean,
            std_err: imp_se,
            bound_value: importance_bound(chi2, integral, n as f64),
        });
        rows.push(ExperimentRow {
            estimator: "rejection".into(),
            n,
            m,
            eps,
            mean_err: rej_mean,
            std_err: rej_se,
            bound_value: rejection_bound(integral, m as f64, n as f64, eps),
        });
    }
    Ok(rows)
}

/// The sample-complexity knee for plain importance sampling: mean |I_n(1) − 1|
/// across an n-grid straddling e^{KL(ν‖μ)}. Rows carry the marker in
/// bound_value so the knee is visible next to the errors.
pub struct KneeReport {
    pub kl: f64,
    pub threshold: f64,
    pub rows: Vec<ExperimentRow>,
}

pub fn kl_threshold_experiment(
    nu: &DiscreteDist,
    mu: &DiscreteDist,
    n_grid: &[u64],
    replicates: u32,
    seed: u64,
) -> Result<KneeReport> {
    check_nu_dominated(nu, mu)?;
    let kl = divergence(Generator::Kl, nu, mu);
    if !kl.is_finite() {
        return Err(Error::Domain(
            "KL divergence must be finite for the knee experiment".into(),
        ));
    }
    let threshold = kl.exp();
    let table = MuTable::build(nu, mu);
    let mut rows = Vec::new();
    for (gi, &n) in n_grid.iter().enumerate() {
        if n == 0 {
            return Err(Error::Domain("n grid entries must be at least 1".into()));
        }
        let errs: Vec<f64> = (0..replicates)
            .into_par_iter()
            .map(|rep| {
                let idx = (gi as u64) << 32 | u64::from(rep);
                let mut rng = stream_rng(seed, "kl_knee", idx);
                let mut sum = 0.0;
                for _ in 0..n {
                    sum += table.ratios[table.draw(&mut rng) as usize];
                }
                (sum / n as f64 - 1.0).abs()
            })
            .collect();
        let (mean_err, std_err) = mean_and_se(&errs);
        rows.push(ExperimentRow {
            estimator: "importance".into(),
            n,
            m: n,
            eps: 0.0,
            mean_err,
            std_err,
            bound_value: threshold,
        });
    }
    Ok(KneeReport {
        kl,
        threshold,
        rows,
    })
}

/// Exact bias ceiling for the rejection estimator: 2·TV(output law, ν).
/// |E[J(h)] − E_ν[h]| ≤ this for every |h| ≤ 1, since E[J] integrates h
/// against the exact output law.
pub fn rejection_bias_bound(task: &EstimationTask, m_cap: f64) -> Result<f64> {
    let (_, tv) = exact_output_law(&task.nu, &task.mu, m_cap, task.m)?;
    Ok(2.0 * tv)
}
