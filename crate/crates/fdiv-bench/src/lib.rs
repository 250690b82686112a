//! Shared fixtures for the criterion benches.

use fdiv_core::seeds::stream_rng;
use fdiv_core::DiscreteDist;
use rand::Rng as _;

/// A full-support pair with `k` atoms; ν is a bounded tilt of μ, so every
/// generator assigns the pair a small finite divergence.
pub fn tilted_pair(k: usize, seed: u64) -> (DiscreteDist, DiscreteDist) {
    let mut rng = stream_rng(seed, "bench_pair", 0);
    let mut mu_w = Vec::with_capacity(k);
    let mut nu_w = Vec::with_capacity(k);
    for j in 0..k {
        let base = 0.5 + rng.gen::<f64>();
        let tilt = 1.0 + 0.4 * (2.0 * rng.gen::<f64>() - 1.0);
        mu_w.push((format!("x{j:03}"), base));
        nu_w.push((format!("x{j:03}"), base * tilt));
    }
    let norm = |w: Vec<(String, f64)>| {
        let total: f64 = w.iter().map(|p| p.1).sum();
        DiscreteDist::from_pairs(w.into_iter().map(|(l, m)| (l, m / total))).unwrap()
    };
    (norm(nu_w), norm(mu_w))
}
