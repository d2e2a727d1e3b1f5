//! Timing harness for the empirical growth rate of [`min_partition`].

use std::time::Instant;

use thiserror::Error;

use crate::driver::{min_partition_with_stats, DriverError};
use crate::generate::{generate, random_graph, GenError, GraphKind};
use crate::graph::LabeledGraph;

/// How to build the graph for one size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Workload {
    /// Random graph with `sigma = n / 2` and edge probability one half, so
    /// about `n² / 4` edges.
    DenseRandom,
    /// Any generator with a fixed alphabet size.
    Kind { kind: GraphKind, sigma: u32 },
}

impl Workload {
    pub fn build(&self, n: usize, seed: u64) -> Result<LabeledGraph, GenError> {
        match *self {
            Workload::DenseRandom => random_graph(n, (n as u32 / 2).max(1), 0.5, seed),
            Workload::Kind { kind, sigma } => generate(kind, n, sigma, seed),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    /// Median over the timed repeats.
    pub nanos: u128,
    /// Largest predecessor scan of a single exploration, any level.
    pub max_edge_work: usize,
    /// Number of levels, the top one included.
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub records: Vec<BenchRecord>,
    /// Least-squares slope of log time against log n.
    pub slope: f64,
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("need at least 3 sizes, got {0}")]
    TooFewSizes(usize),
    #[error("sizes must be strictly increasing")]
    NotIncreasing,
    #[error("repeats must be at least 1")]
    NoRepeats,
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Driver(#[from] DriverError),
}

/// Times `min_partition` on one graph per size. Each size gets one
/// discarded warm-up run, then `repeats` timed runs whose median is kept.
/// Graph construction is not timed.
pub fn bench_scaling(workload: Workload, sizes: &[usize], repeats: usize, seed: u64) -> Result<BenchReport, BenchError> {
    if sizes.len() < 3 {
        return Err(BenchError::TooFewSizes(sizes.len()));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(BenchError::NotIncreasing);
    }
    if repeats == 0 {
        return Err(BenchError::NoRepeats);
    }
    let mut records = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let g = workload.build(n, seed)?;
        let (_, stats) = min_partition_with_stats(&g)?;
        let mut times = Vec::with_capacity(repeats);
        for _ in 0..repeats {
            let start = Instant::now();
            let out = min_partition_with_stats(&g)?;
            times.push(start.elapsed().as_nanos());
            drop(out);
        }
        times.sort_unstable();
        records.push(BenchRecord {
            n,
            m: g.edge_count(),
            seed,
            nanos: times[times.len() / 2],
            max_edge_work: stats.iter().map(|s| s.max_type3_work.max(s.max_type1_work)).max().unwrap_or(0),
            depth: stats.len(),
        });
    }
    let points: Vec<(f64, f64)> = records.iter().map(|r| (r.n as f64, r.nanos.max(1) as f64)).collect();
    let slope = fit_loglog_slope(&points);
    Ok(BenchReport { records, slope })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fit_loglog_slope(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_exact_powers() {
        let quad: Vec<_> = [10.0, 20.0, 40.0].iter().map(|&x: &f64| (x, 3.0 * x * x)).collect();
        assert!((fit_loglog_slope(&quad) - 2.0).abs() < 1e-9);
        let lin: Vec<_> = [1.0, 5.0, 9.0, 100.0].iter().map(|&x: &f64| (x, x)).collect();
        assert!((fit_loglog_slope(&lin) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_sizes() {
        let w = Workload::Kind { kind: GraphKind::Cycle, sigma: 1 };
        assert!(matches!(bench_scaling(w, &[10], 1, 0), Err(BenchError::TooFewSizes(1))));
        assert!(matches!(bench_scaling(w, &[10, 10, 20], 1, 0), Err(BenchError::NotIncreasing)));
    }

    #[test]
    fn small_cycle_run() {
        let w = Workload::Kind { kind: GraphKind::Cycle, sigma: 2 };
        let report = bench_scaling(w, &[16, 32, 64], 1, 0).unwrap();
        assert_eq!(report.records.len(), 3);
        assert!(report.records.iter().all(|r| r.m == r.n));
        assert!(report.slope.is_finite());
    }
}
