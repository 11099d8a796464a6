//! Timing random pairs and fitting growth exponents.

use std::time::{Duration, Instant};

use crate::engine::{hausdorff_distance_with, Parallelism};
use crate::generate::gen_random_tree;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n1: usize,
    pub n2: usize,
    pub rep: usize,
    pub elapsed: Duration,
    pub distance: u32,
}

/// One row per `(size, rep)`: two fresh random trees of that size.
pub fn run_bench(sizes: &[usize], seed: u64, reps: usize, mode: Parallelism) -> Vec<BenchRow> {
    let mut rows = Vec::with_capacity(sizes.len() * reps);
    for (si, &n) in sizes.iter().enumerate() {
        for rep in 0..reps {
            let base = seed
                .wrapping_add((si as u64) << 32)
                .wrapping_add((rep as u64) << 1);
            let a = gen_random_tree(n, base).expect("sizes are positive");
            let b = gen_random_tree(n, base ^ 0x9e37_79b9_7f4a_7c15).expect("sizes are positive");
            let start = Instant::now();
            let r = hausdorff_distance_with(&a, &b, mode);
            rows.push(BenchRow {
                n1: n,
                n2: n,
                rep,
                elapsed: start.elapsed(),
                distance: r.distance,
            });
        }
    }
    rows
}

/// Least-squares slope of `ln(time)` against `ln(n)`, using the median time
/// per size. `None` with fewer than two distinct sizes.
pub fn log_log_slope(rows: &[BenchRow]) -> Option<f64> {
    let mut sizes: Vec<usize> = rows.iter().map(|r| r.n1).collect();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.len() < 2 {
        return None;
    }
    let points: Vec<(f64, f64)> = sizes
        .iter()
        .map(|&n| {
            let mut t: Vec<f64> = rows
                .iter()
                .filter(|r| r.n1 == n)
                .map(|r| r.elapsed.as_secs_f64().max(1e-9))
                .collect();
            t.sort_by(f64::total_cmp);
            ((n as f64).ln(), t[t.len() / 2].ln())
        })
        .collect();
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}
