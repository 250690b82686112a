//! One function per subcommand. Each validates its inputs, runs the
//! corresponding library operation, writes any CSV artifact, and prints a
//! JSON report with the full config echo on stdout.

use crate::report::{fmt_float, json_float, load_dist, print_report, write_csv, CliError};
use clap::Args;
use fdiv_core::complexity::{
    coupling_n, lower_bound_n, lower_bound_tv, regret_bounds, upper_bound_n, BoundQuery,
};
use fdiv_core::divergence::divergence;
use fdiv_core::estimate::{compare_experiment, kl_threshold_experiment};
use fdiv_core::online::{
    coupling_demo, run_games, summarize, AdversaryKind, GameConfig, LearnerSpec,
};
use fdiv_core::sampler::{clamp_projection, exact_output_law, make_plan};
use fdiv_core::witness::{bernoulli_witness, linear_witness, superlinear_witness};
use fdiv_core::Generator;
use serde_json::json;

fn parse_generator(spec: &str) -> Result<Generator, CliError> {
    Ok(Generator::parse(spec)?)
}

fn generator_columns(g: Generator) -> (String, String) {
    let label = g.label();
    let kind = label.split(':').next().unwrap_or(&label).to_string();
    let param = if g.param() == 0.0 {
        String::new()
    } else {
        fmt_float(g.param())
    };
    (kind, param)
}

#[derive(Args)]
pub struct DivArgs {
    /// Generator spec: tv, kl, renyi:<lambda>, egamma:<gamma>
    #[arg(long = "gen")]
    pub gen: String,
    /// Target distribution ν as a JSON atom array
    #[arg(long)]
    pub nu: String,
    /// Base distribution μ as a JSON atom array
    #[arg(long)]
    pub mu: String,
}

pub fn div(args: &DivArgs) -> Result<(), CliError> {
    let g = parse_generator(&args.gen)?;
    let nu = load_dist(&args.nu)?;
    let mu = load_dist(&args.mu)?;
    let d = divergence(g, &nu, &mu);
    print_report(
        "div",
        json!({"gen": g.label(), "nu": args.nu, "mu": args.mu}),
        json!({"divergence": json_float(d)}),
    )
}

#[derive(Args)]
pub struct ComplexityArgs {
    #[arg(long = "gen")]
    pub gen: String,
    /// Divergence budget D
    #[arg(long, default_value_t = 1.0)]
    pub d: f64,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.01)]
    pub delta: f64,
    #[arg(long, default_value_t = 0.1)]
    pub sigma: f64,
    /// Horizon T for the coupling and regret bounds
    #[arg(long = "T", default_value_t = 1000)]
    pub rounds: u64,
    /// VC dimension of the hypothesis class
    #[arg(long, default_value_t = 1)]
    pub vc: u64,
    /// Growth exponent for the superlinear TV lower bound
    #[arg(long, default_value_t = 1.0)]
    pub zeta: f64,
    /// Rényi order for the oracle-efficient regret curve; defaults to the
    /// generator's own order, or 2
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Sample budget for the TV lower bound
    #[arg(long, default_value_t = 100)]
    pub n: u64,
    /// CSV output path
    #[arg(long)]
    pub out: String,
}

pub fn complexity(args: &ComplexityArgs) -> Result<(), CliError> {
    let g = parse_generator(&args.gen)?;
    let lambda = args
        .lambda
        .unwrap_or(if g.param() > 1.0 { g.param() } else { 2.0 });
    let q = BoundQuery {
        generator: g,
        d: args.d,
        eps: args.eps,
        delta: args.delta,
        sigma: args.sigma,
        t: args.rounds,
        vc: args.vc,
        zeta: args.zeta,
        lambda,
        n: args.n,
    };
    q.validate()?;

    let mut rows: Vec<(&str, f64)> = vec![("upper_n", upper_bound_n(g, q.d, q.eps))];
    let mut skipped: Vec<String> = Vec::new();
    let mut push = |name: &'static str, value: Result<f64, fdiv_core::Error>| match value {
        Ok(v) => rows.push((name, v)),
        Err(e) => skipped.push(format!("{name}: {e}")),
    };
    push("lower_n", lower_bound_n(g, q.delta, q.eps));
    push("lower_tv", lower_bound_tv(g, q.d, q.n as f64, q.zeta));
    rows.push(("coupling_n", coupling_n(g, q.sigma, q.eps, q.delta, q.t)));
    match regret_bounds(&q) {
        Ok(r) => {
            rows.push(("regret_minimax", r.minimax));
            rows.push(("regret_improper", r.improper));
            rows.push(("regret_ftpl", r.ftpl));
        }
        Err(e) => skipped.push(format!("regret: {e}")),
    }

    let (kind, param) = generator_columns(g);
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|(name, value)| {
            vec![
                kind.clone(),
                param.clone(),
                fmt_float(q.d),
                fmt_float(q.eps),
                fmt_float(q.delta),
                fmt_float(q.sigma),
                q.t.to_string(),
                q.vc.to_string(),
                (*name).to_string(),
                fmt_float(*value),
            ]
        })
        .collect();
    write_csv(
        &args.out,
        &[
            "kind",
            "param",
            "D",
            "eps",
            "delta",
            "sigma",
            "T",
            "d",
            "bound_name",
            "value",
        ],
        &csv_rows,
    )?;
    print_report(
        "complexity",
        json!({
            "gen": g.label(), "d": args.d, "eps": args.eps, "delta": args.delta,
            "sigma": args.sigma, "T": args.rounds, "vc": args.vc, "zeta": args.zeta,
            "lambda": lambda, "n": args.n, "out": args.out,
        }),
        json!({"rows": csv_rows.len(), "skipped": skipped}),
    )
}

#[derive(Args)]
pub struct SampleVerifyArgs {
    #[arg(long = "gen")]
    pub gen: String,
    #[arg(long)]
    pub nu: String,
    #[arg(long)]
    pub mu: String,
    /// Comma-separated total-variation targets
    #[arg(long, value_delimiter = ',', required = true)]
    pub eps: Vec<f64>,
    #[arg(long)]
    pub out: String,
}

pub fn sample_verify(args: &SampleVerifyArgs) -> Result<(), CliError> {
    let g = parse_generator(&args.gen)?;
    let nu = load_dist(&args.nu)?;
    let mu = load_dist(&args.mu)?;
    let d = divergence(g, &nu, &mu);
    if !d.is_finite() {
        return Err(CliError::validation(
            "unbounded_truncation",
            format!(
                "divergence of nu from mu under {} is infinite; no plan exists",
                g.label()
            ),
        ));
    }
    let mut rows = Vec::new();
    let mut all_ok = true;
    for &eps in &args.eps {
        let plan = make_plan(g, d, eps)?;
        let (_, tv) = exact_output_law(&nu, &mu, plan.m_cap, plan.n)?;
        let ok = tv <= eps + 1e-12;
        all_ok &= ok;
        rows.push(vec![
            fmt_float(eps),
            fmt_float(d),
            fmt_float(plan.m_cap),
            plan.n.to_string(),
            fmt_float(tv),
            ok.to_string(),
        ]);
    }
    write_csv(
        &args.out,
        &["eps", "D", "M", "n", "tv_exact", "tv_bound_ok"],
        &rows,
    )?;
    print_report(
        "sample verify",
        json!({"gen": g.label(), "nu": args.nu, "mu": args.mu, "eps": args.eps, "out": args.out}),
        json!({"rows": rows.len(), "divergence": json_float(d), "all_bounds_ok": all_ok}),
    )
}

#[derive(Args)]
pub struct WitnessArgs {
    /// bernoulli, linear, or superlinear
    #[arg(long)]
    pub construction: String,
    #[arg(long = "gen")]
    pub gen: String,
    /// ε grid for the bernoulli and linear constructions
    #[arg(long, value_delimiter = ',', default_value = "0.1")]
    pub eps: Vec<f64>,
    /// n grid: witness index for bernoulli, probe budget for superlinear
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16,32,64")]
    pub n: Vec<u64>,
    /// ζ grid for the superlinear construction
    #[arg(long, value_delimiter = ',', default_value = "0.5,1")]
    pub zeta: Vec<f64>,
    /// Divergence scale δ for the superlinear construction
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
    #[arg(long)]
    pub out: String,
}

pub fn witness(args: &WitnessArgs) -> Result<(), CliError> {
    let g = parse_generator(&args.gen)?;
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut row = |eps: &str, n: &str, zeta: &str, quantity: &str, value: f64| {
        rows.push(vec![
            args.construction.clone(),
            g.label(),
            eps.to_string(),
            n.to_string(),
            zeta.to_string(),
            fmt_float(args.delta),
            quantity.to_string(),
            fmt_float(value),
        ]);
    };
    match args.construction.as_str() {
        "bernoulli" => {
            for &eps in &args.eps {
                for &n in &args.n {
                    let w = bernoulli_witness(g, eps, n)?;
                    let (_, clamp_tv) = clamp_projection(&w.nu, &w.mu, n as f64)?;
                    let e = fmt_float(eps);
                    let ns = n.to_string();
                    row(&e, &ns, "", "e_n", w.e_n);
                    row(&e, &ns, "", "df_upper", w.df_bound);
                    row(&e, &ns, "", "clamp_tv", clamp_tv);
                }
            }
        }
        "linear" => {
            for &eps in &args.eps {
                let w = linear_witness(g, eps)?;
                let e = fmt_float(eps);
                row(&e, "", "", "df_value", w.df_value);
                row(&e, "", "", "tv_floor", w.tv_floor);
            }
        }
        "superlinear" => {
            for &zeta in &args.zeta {
                let w = superlinear_witness(g, zeta, args.delta)?;
                let z = fmt_float(zeta);
                row("", "", &z, "df_upper", w.df_upper);
                row("", "", &z, "ratio_mean", w.law.tail_mean_quadrature());
                for &n in &args.n {
                    let nf = n as f64;
                    if nf <= w.law.t0 {
                        continue;
                    }
                    row("", &n.to_string(), &z, "e_n_lower", w.e_n_lower(nf));
                    row(
                        "",
                        &n.to_string(),
                        &z,
                        "packaged_bound",
                        w.packaged_bound(nf),
                    );
                }
            }
        }
        other => {
            return Err(CliError::validation(
                "domain",
                format!("unknown construction {other:?}; want bernoulli, linear, or superlinear"),
            ))
        }
    }
    write_csv(
        &args.out,
        &[
            "construction",
            "generator",
            "eps",
            "n",
            "zeta",
            "delta",
            "certified_quantity",
            "value",
        ],
        &rows,
    )?;
    print_report(
        "witness",
        json!({
            "construction": args.construction, "gen": g.label(), "eps": args.eps,
            "n": args.n, "zeta": args.zeta, "delta": args.delta, "out": args.out,
        }),
        json!({"rows": rows.len()}),
    )
}

#[derive(Args)]
pub struct OnlineRunArgs {
    /// Horizon (rounds per game)
    #[arg(long = "T")]
    pub rounds: u32,
    /// ftl, ftpl, ftpl:<eta>:<m>, ftpl-schedule, relaxation, relaxation:<n>:<c>
    #[arg(long)]
    pub learner: String,
    /// smooth_iid, atom_mixture, or adaptive_greedy[:<pool>]
    #[arg(long)]
    pub adversary: String,
    #[arg(long)]
    pub generator: String,
    #[arg(long)]
    pub sigma: f64,
    /// Either a count N (runs seeds 0..N) or an explicit comma list
    #[arg(long)]
    pub seeds: String,
    #[arg(long, default_value_t = 64)]
    pub grid: u32,
    /// Label flip probability for the iid and greedy adversaries
    #[arg(long, default_value_t = 0.1)]
    pub noise: f64,
    /// Per-seed CSV output path
    #[arg(long)]
    pub out: String,
}

fn parse_seeds(spec: &str) -> Result<Vec<u64>, CliError> {
    let bad = |_| CliError::validation("domain", format!("bad seed spec {spec:?}"));
    if spec.contains(',') {
        spec.split(',')
            .map(|s| s.trim().parse::<u64>().map_err(bad))
            .collect()
    } else {
        let count: u64 = spec.trim().parse().map_err(bad)?;
        if count == 0 {
            return Err(CliError::validation("domain", "need at least one seed"));
        }
        Ok((0..count).collect())
    }
}

pub fn online_run(args: &OnlineRunArgs) -> Result<(), CliError> {
    let generator = parse_generator(&args.generator)?;
    let learner = LearnerSpec::parse(&args.learner, args.rounds, args.sigma, generator)?;
    let adversary = AdversaryKind::parse(&args.adversary)?;
    let seeds = parse_seeds(&args.seeds)?;
    let config = GameConfig {
        rounds: args.rounds,
        grid: args.grid,
        generator,
        sigma: args.sigma,
        noise: args.noise,
        adversary,
        learner,
    };
    config.validate()?;
    let traces = run_games(&config, &seeds)?;
    let rows: Vec<Vec<String>> = traces
        .iter()
        .map(|t| {
            vec![
                t.seed.to_string(),
                fmt_float(t.regret),
                fmt_float(t.cumulative_loss),
                fmt_float(t.best_in_hindsight),
                t.oracle_calls_rounds.to_string(),
                t.oracle_calls_total.to_string(),
                fmt_float(t.max_round_divergence),
            ]
        })
        .collect();
    write_csv(
        &args.out,
        &[
            "seed",
            "regret",
            "cumulative_loss",
            "best_in_hindsight",
            "oracle_calls_rounds",
            "oracle_calls_total",
            "max_round_divergence",
        ],
        &rows,
    )?;
    let s = summarize(args.rounds, &traces);
    print_report(
        "online run",
        json!({
            "T": args.rounds, "learner": learner.label(), "adversary": adversary.label(),
            "generator": generator.label(), "sigma": args.sigma, "seeds": seeds,
            "grid": args.grid, "noise": args.noise, "out": args.out,
        }),
        json!({
            "mean_regret": s.mean_regret,
            "std": s.std_regret,
            "calls_per_round": s.mean_calls_per_round,
            "games": s.games,
            "mean_regret_per_round": s.mean_regret_per_round,
        }),
    )
}

#[derive(Args)]
pub struct CouplingArgs {
    #[arg(long = "gen")]
    pub gen: String,
    /// Per-round target law p as a JSON atom array
    #[arg(long)]
    pub p: String,
    #[arg(long)]
    pub mu: String,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.01)]
    pub delta: f64,
    #[arg(long = "T", default_value_t = 1000)]
    pub rounds: u64,
}

pub fn coupling(args: &CouplingArgs) -> Result<(), CliError> {
    let g = parse_generator(&args.gen)?;
    let p = load_dist(&args.p)?;
    let mu = load_dist(&args.mu)?;
    let report = coupling_demo(g, &p, &mu, args.eps, args.delta, args.rounds)?;
    print_report(
        "coupling",
        json!({
            "gen": g.label(), "p": args.p, "mu": args.mu,
            "eps": args.eps, "delta": args.delta, "T": args.rounds,
        }),
        report,
    )
}

#[derive(Args)]
pub struct EstimateCompareArgs {
    #[arg(long = "gen")]
    pub gen: String,
    #[arg(long)]
    pub nu: String,
    #[arg(long)]
    pub mu: String,
    /// Comma-separated total sample budgets
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<u64>,
    #[arg(long, default_value_t = 50)]
    pub replicates: u32,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: String,
}

fn experiment_csv(rows: &[fdiv_core::estimate::ExperimentRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| {
            vec![
                r.estimator.clone(),
                r.n.to_string(),
                r.m.to_string(),
                fmt_float(r.eps),
                fmt_float(r.mean_err),
                fmt_float(r.std_err),
                fmt_float(r.bound_value),
            ]
        })
        .collect()
}

const EXPERIMENT_HEADER: [&str; 7] = [
    "estimator",
    "n",
    "m",
    "eps",
    "mean_err",
    "std_err",
    "bound_value",
];

pub fn estimate_compare(args: &EstimateCompareArgs) -> Result<(), CliError> {
    let g = parse_generator(&args.gen)?;
    let nu = load_dist(&args.nu)?;
    let mu = load_dist(&args.mu)?;
    if args.replicates < 2 {
        return Err(CliError::validation("domain", "need at least 2 replicates"));
    }
    let rows = compare_experiment(&nu, &mu, g, &args.n, args.replicates, args.seed)?;
    write_csv(&args.out, &EXPERIMENT_HEADER, &experiment_csv(&rows))?;
    print_report(
        "estimate compare",
        json!({
            "gen": g.label(), "nu": args.nu, "mu": args.mu, "n": args.n,
            "replicates": args.replicates, "seed": args.seed, "out": args.out,
        }),
        json!({"rows": rows.len()}),
    )
}

#[derive(Args)]
pub struct EstimateKlKneeArgs {
    #[arg(long)]
    pub nu: String,
    #[arg(long)]
    pub mu: String,
    /// Sample budgets; defaults to a grid spanning [e^KL/10, 10·e^KL]
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<u64>>,
    #[arg(long, default_value_t = 50)]
    pub replicates: u32,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: String,
}

pub fn estimate_kl_knee(args: &EstimateKlKneeArgs) -> Result<(), CliError> {
    let nu = load_dist(&args.nu)?;
    let mu = load_dist(&args.mu)?;
    if args.replicates < 2 {
        return Err(CliError::validation("domain", "need at least 2 replicates"));
    }
    let n_grid = match &args.n {
        Some(grid) => grid.clone(),
        None => {
            let kl = divergence(Generator::Kl, &nu, &mu);
            if !kl.is_finite() {
                return Err(CliError::validation(
                    "domain",
                    "KL divergence is infinite; pass --n explicitly",
                ));
            }
            let threshold = kl.exp();
            let mut grid: Vec<u64> = [0.1, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0]
                .iter()
                .map(|f| ((f * threshold).ceil() as u64).max(1))
                .collect();
            grid.dedup();
            grid
        }
    };
    let report = kl_threshold_experiment(&nu, &mu, &n_grid, args.replicates, args.seed)?;
    write_csv(&args.out, &EXPERIMENT_HEADER, &experiment_csv(&report.rows))?;
    print_report(
        "estimate kl-knee",
        json!({
            "nu": args.nu, "mu": args.mu, "n": n_grid,
            "replicates": args.replicates, "seed": args.seed, "out": args.out,
        }),
        json!({
            "rows": report.rows.len(),
            "kl": report.kl,
            "threshold": report.threshold,
        }),
    )
}
