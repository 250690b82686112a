//! Exact weighted empirical risk minimization over threshold hypotheses.
//!
//! Hypotheses are g_θ(x) = +1 iff x ≥ θ with θ ranging over every context
//! position plus an above-all sentinel (the class has VC dimension 1). The
//! loss is linear, ℓ(ŷ, y) = (1 − ŷ·y)/2, so for signed weights w_i the
//! objective Σ_i w_i·ℓ(g_θ(x_i), y_i) equals ½Σw − ½(2·S(θ) − C) with
//! c_i = w_i·y_i, C = Σc_i, and S(θ) = Σ_{x_i ≥ θ} c_i. Maximizing S by a
//! single suffix scan over ranks gives the exact minimizer in O(N + U).

/// An example already resolved to its rank in the game's context space.
#[derive(Debug, Clone, Copy)]
pub struct RankedExample {
    pub rank: u32,
    /// Label in [−1, 1].
    pub y: f64,
    /// Signed weight.
    pub w: f64,
}

/// Minimizer of the weighted linear loss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErmOutcome {
    /// Threshold as a rank in 0..=universe; `universe` is the above-all
    /// sentinel (predict −1 everywhere), 0 predicts +1 everywhere.
    pub threshold: u32,
    /// The minimum objective value.
    pub value: f64,
}

/// Exact minimizer; ties break toward the smallest threshold. Empty data
/// (or all-zero weights) leaves every hypothesis at value 0, so the
/// threshold comes back as rank 0.
pub fn erm_sweep(universe: u32, data: &[RankedExample]) -> ErmOutcome {
    let u = universe as usize;
    let mut bucket = vec![0.0f64; u];
    let mut total_w = 0.0;
    let mut total_c = 0.0;
    for ex in data {
        debug_assert!(ex.rank < universe, "example rank out of universe");
        debug_assert!((-1.0..=1.0).contains(&ex.y), "label outside [-1, 1]");
        let c = ex.w * ex.y;
        bucket[ex.rank as usize] += c;
        total_w += ex.w;
        total_c += c;
    }
    // suffix[r] = S(threshold r); the sentinel r = universe has S = 0.
    let mut best_rank = universe;
    let mut best_s = 0.0;
    let mut running = 0.0;
    for r in (0..u).rev() {
        running += bucket[r];
        // ">=" keeps the lowest rank among ties as the scan moves downward.
        if running >= best_s {
            best_rank = r as u32;
            best_s = running;
        }
    }
    ErmOutcome {
        threshold: best_rank,
        value: 0.5 * total_w - 0.5 * (2.0 * best_s - total_c),
    }
}

/// Loss of the hypothesis `threshold` (a rank) on one ranked example.
pub fn hypothesis_loss(threshold: u32, ex: &RankedExample) -> f64 {
    let pred = if ex.rank >= threshold { 1.0 } else { -1.0 };
    ex.w * (1.0 - pred * ex.y) / 2.0
}

/// An example carried by context value rather than rank, for callers outside
/// a running game.
#[derive(Debug, Clone, Copy)]
pub struct WeightedExample {
    pub x: f64,
    pub y: f64,
    pub w: f64,
}

/// ERM over a universe built from the data's own x values plus the point 0,
/// returning the threshold as a value (+∞ for the above-all sentinel).
pub fn erm_on_values(data: &[WeightedExample]) -> (f64, f64) {
    let mut points: Vec<f64> = data.iter().map(|e| e.x).collect();
    points.push(0.0);
    points.sort_by(|a, b| a.partial_cmp(b).unwrap());
    points.dedup();
    let rank_of = |x: f64| {
        points
            .binary_search_by(|p| p.partial_cmp(&x).unwrap())
            .unwrap() as u32
    };
    let ranked: Vec<RankedExample> = data
        .iter()
        .map(|e| RankedExample {
            rank: rank_of(e.x),
            y: e.y,
            w: e.w,
        })
        .collect();
    let out = erm_sweep(points.len() as u32, &ranked);
    let theta = if out.threshold as usize == points.len() {
        f64::INFINITY
    } else {
        points[out.threshold as usize]
    };
    (theta, out.value)
}
