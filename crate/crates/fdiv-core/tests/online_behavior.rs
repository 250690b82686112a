//! End-to-end behavior of the threshold game: oracle accounting, reference
//! regret values, equivalence oracles for the learners, and determinism.

use fdiv_core::online::{
    best_in_hindsight, coupling_demo, erm_sweep, ftl_step, ftpl_step, hypothesis_loss,
    relaxation_branches, relaxation_playout, run_game, run_games, summarize, AdversaryKind,
    ContextSpace, GameConfig, LearnerSpec, RankedExample,
};
use fdiv_core::seeds::stream_rng;
use fdiv_core::{DiscreteDist, Generator};
use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};

fn config(adversary: AdversaryKind, learner: LearnerSpec, rounds: u32) -> GameConfig {
    GameConfig {
        rounds,
        grid: 64,
        generator: Generator::renyi(2.0).unwrap(),
        sigma: 0.25,
        noise: 0.1,
        adversary,
        learner,
    }
}

#[test]
fn ftl_pays_at_most_one_mistake_on_a_constant_stream() {
    // The same context with the same label every round: after the first
    // mistake the leader is consistent, so cumulative loss is at most 1 and
    // the hindsight benchmark is 0.
    let space = ContextSpace::grid_only(32);
    for y in [1.0, -1.0] {
        let mut history = Vec::new();
        let mut calls = 0;
        let mut cumulative = 0.0;
        for _ in 0..40 {
            let theta = ftl_step(&space, &history, &mut calls);
            let pred = if 17 >= theta { 1.0 } else { -1.0 };
            cumulative += (1.0 - pred * y) / 2.0;
            history.push(RankedExample {
                rank: 17,
                y,
                w: 1.0,
            });
        }
        let bih = best_in_hindsight(&space, &history, &mut calls);
        assert_eq!(bih.value, 0.0);
        assert!(
            cumulative <= 1.0,
            "constant stream cost {cumulative} with label {y}"
        );
    }
}

#[test]
fn single_round_games_have_regret_at_most_one() {
    for learner in [
        LearnerSpec::Ftl,
        LearnerSpec::Ftpl { eta: 8.0, m: 64 },
        LearnerSpec::Relaxation { n: 1, c: 2.0 },
    ] {
        let trace = run_game(&config(AdversaryKind::SmoothIid, learner, 1), 7).unwrap();
        assert!(trace.regret <= 1.0 + 1e-12);
        assert!(trace.cumulative_loss >= 0.0);
    }
}

#[test]
fn oracle_accounting_is_exact() {
    let rounds = 50;
    for (learner, per_round) in [
        (LearnerSpec::Ftl, 1),
        (LearnerSpec::Ftpl { eta: 8.0, m: 64 }, 1),
        (LearnerSpec::Relaxation { n: 1, c: 2.0 }, 2),
    ] {
        let trace = run_game(&config(AdversaryKind::SmoothIid, learner, rounds), 3).unwrap();
        assert_eq!(trace.oracle_calls_rounds, u64::from(rounds) * per_round);
        assert_eq!(trace.oracle_calls_total, trace.oracle_calls_rounds + 1);
    }
}

#[test]
fn ftpl_commit_matches_a_brute_force_oracle() {
    // Reproduce the perturbation stream and minimize the perturbed loss by
    // exhaustive search; the committed threshold must match exactly.
    let space = ContextSpace::grid_only(48);
    let (eta, m) = (3.0, 16u32);
    for seed in 0..100u64 {
        let mut hist_rng = stream_rng(seed, "hist", 0);
        let history: Vec<RankedExample> = (0..30)
            .map(|_| RankedExample {
                rank: hist_rng.gen_range(0..space.universe()),
                y: if hist_rng.gen::<bool>() { 1.0 } else { -1.0 },
                w: 1.0,
            })
            .collect();

        let mut rng = stream_rng(seed, "ftpl_oracle", 0);
        let mut replay = rng.clone();
        let mut calls = 0;
        let committed = ftpl_step(&space, &history, eta, m, &mut rng, &mut calls);

        let mut data = history.clone();
        let scale = 2.0 * eta / f64::from(m).sqrt();
        for _ in 0..m {
            let gamma: f64 = StandardNormal.sample(&mut replay);
            let cell = replay.gen_range(0..space.grid_size());
            data.push(RankedExample {
                rank: space.rank_of_grid(cell),
                y: 1.0,
                w: -scale * gamma,
            });
        }
        let mut best: Option<(u32, f64)> = None;
        for theta in (0..=space.universe()).rev() {
            let v: f64 = data.iter().map(|ex| hypothesis_loss(theta, ex)).sum();
            match best {
                Some((_, bv)) if v > bv => {}
                _ => best = Some((theta, v)),
            }
        }
        let (brute_theta, brute_value) = best.unwrap();
        let swept = erm_sweep(space.universe(), &data);
        assert_eq!(committed, brute_theta, "seed {seed}");
        assert!((swept.value - brute_value).abs() < 1e-9, "seed {seed}");
    }
}

#[test]
fn relaxation_forecast_equalizes_the_branch_potentials() {
    // The forecast should minimize max_y [loss(yhat, y) − V_y] over
    // yhat ∈ [−1, 1]; check it beats a 101-point grid.
    let space = ContextSpace::grid_only(32);
    for seed in 0..25u64 {
        let mut rng = stream_rng(seed, "relax_oracle", 0);
        let history: Vec<RankedExample> = (0..20)
            .map(|_| RankedExample {
                rank: rng.gen_range(0..space.universe()),
                y: if rng.gen::<bool>() { 1.0 } else { -1.0 },
                w: 1.0,
            })
            .collect();
        let x_rank = rng.gen_range(0..space.universe());
        let playout = relaxation_playout(&space, 10, 1, 2.0, &mut rng);
        let mut calls = 0;
        let (v_plus, v_minus) = relaxation_branches(&space, &history, x_rank, &playout, &mut calls);
        let y_hat = (v_minus - v_plus).clamp(-1.0, 1.0);
        let objective = |z: f64| {
            let plus = (1.0 - z) / 2.0 - v_plus;
            let minus = (1.0 + z) / 2.0 - v_minus;
            plus.max(minus)
        };
        let grid_best = (0..=100)
            .map(|i| objective(-1.0 + 0.02 * f64::from(i)))
            .fold(f64::INFINITY, f64::min);
        assert!(
            objective(y_hat) <= grid_best + 1e-12,
            "seed {seed}: {} vs grid {grid_best}",
            objective(y_hat)
        );
    }
}

#[test]
fn greedy_pool_of_one_replays_the_iid_adversary() {
    for learner in [LearnerSpec::Ftl, LearnerSpec::Relaxation { n: 1, c: 2.0 }] {
        let iid = run_game(&config(AdversaryKind::SmoothIid, learner, 80), 21).unwrap();
        let greedy = run_game(
            &config(AdversaryKind::AdaptiveGreedy { pool: 1 }, learner, 80),
            21,
        )
        .unwrap();
        assert_eq!(
            serde_json::to_string(&iid.records).unwrap(),
            serde_json::to_string(&greedy.records).unwrap()
        );
        assert_eq!(iid.regret, greedy.regret);
    }
}

#[test]
fn every_round_respects_the_smoothness_budget() {
    for adversary in [
        AdversaryKind::SmoothIid,
        AdversaryKind::AtomMixture,
        AdversaryKind::AdaptiveGreedy { pool: 4 },
    ] {
        let mut cfg = config(adversary, LearnerSpec::Ftl, 64);
        cfg.generator = Generator::egamma(2.0).unwrap();
        cfg.sigma = 0.5;
        let trace = run_game(&cfg, 9).unwrap();
        assert!(
            trace.max_round_divergence <= 1.0 / cfg.sigma + 1e-9,
            "{adversary:?} overshoots: {}",
            trace.max_round_divergence
        );
    }
}

#[test]
fn atom_mixture_streams_are_realizable() {
    // Labels on atom rounds point at the bisection limit and grid rounds are
    // labeled by the same threshold, so hindsight loss is exactly zero.
    let mut cfg = config(AdversaryKind::AtomMixture, LearnerSpec::Ftl, 96);
    cfg.generator = Generator::egamma(2.0).unwrap();
    cfg.sigma = 0.5;
    for seed in [1, 2, 3] {
        let trace = run_game(&cfg, seed).unwrap();
        assert_eq!(trace.best_in_hindsight, 0.0, "seed {seed}");
        assert_eq!(trace.regret, trace.cumulative_loss);
    }
}

#[test]
fn proper_learners_emit_hard_labels() {
    for learner in [LearnerSpec::Ftl, LearnerSpec::Ftpl { eta: 8.0, m: 64 }] {
        let trace = run_game(&config(AdversaryKind::SmoothIid, learner, 60), 5).unwrap();
        for rec in &trace.records {
            assert!(rec.prediction == 1.0 || rec.prediction == -1.0);
        }
    }
    let trace = run_game(
        &config(
            AdversaryKind::SmoothIid,
            LearnerSpec::Relaxation { n: 1, c: 2.0 },
            60,
        ),
        5,
    )
    .unwrap();
    for rec in &trace.records {
        assert!((-1.0..=1.0).contains(&rec.prediction));
        assert!((0.0..=1.0).contains(&rec.loss));
    }
}

#[test]
fn games_are_deterministic_in_the_seed() {
    let cfg = config(
        AdversaryKind::AtomMixture,
        LearnerSpec::Ftpl { eta: 8.0, m: 64 },
        48,
    );
    let a = run_game(&cfg, 1234).unwrap();
    let b = run_game(&cfg, 1234).unwrap();
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
    let c = run_game(&cfg, 1235).unwrap();
    assert_ne!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&c).unwrap()
    );
}

#[test]
fn parallel_games_match_serial_games() {
    let cfg = config(AdversaryKind::SmoothIid, LearnerSpec::Ftl, 32);
    let seeds: Vec<u64> = (0..8).collect();
    let par = run_games(&cfg, &seeds).unwrap();
    for (seed, trace) in seeds.iter().zip(&par) {
        let solo = run_game(&cfg, *seed).unwrap();
        assert_eq!(
            serde_json::to_string(&solo).unwrap(),
            serde_json::to_string(trace).unwrap()
        );
    }
    let summary = summarize(cfg.rounds, &par);
    assert_eq!(summary.games, 8);
    assert!((summary.mean_calls_per_round - 1.0).abs() < 0.05);
    assert!(summary.mean_regret_per_round.is_finite());
}

#[test]
fn coupling_demo_meets_its_tv_target() {
    let p = DiscreteDist::from_pairs(vec![("0", 0.75), ("1", 0.25)]).unwrap();
    let mu = DiscreteDist::from_pairs(vec![("0", 0.5), ("1", 0.5)]).unwrap();
    let report = coupling_demo(Generator::Kl, &p, &mu, 0.1, 0.01, 1000).unwrap();
    assert!(report.tv_achieved <= report.eps + 1e-12);
    assert!(report.samples_per_round >= 1.0);
    assert!(report.plan_n >= 2);
    // Identical laws couple for free.
    let same = coupling_demo(Generator::Kl, &mu, &mu, 0.1, 0.01, 10).unwrap();
    assert_eq!(same.divergence, 0.0);
    assert_eq!(same.tv_achieved, 0.0);
}
