//! Brute-force ground truth for small graphs.
//!
//! Nothing here shares code with the fast algorithm beyond [`LabeledGraph`].
//! Partitions come from ranking bounded prefixes: the length-`s+1` prefix of
//! `min_u` is `label(u)` followed by the least length-`s` prefix among the
//! predecessors, so dense ranks of `(label, best predecessor rank)` pairs
//! give the ordered partition by length-`s+1` prefixes. The rank vector is a
//! function of the previous one, so once two consecutive vectors agree they
//! agree for every longer length, and that fixpoint is the partition by the
//! infinite strings.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::classify::{Tau, TauVector};
use crate::driver::{MinMaxKey, MinMaxPartition};
use crate::graph::{LabeledGraph, NodeId, Symbol, ValidationReport};
use crate::merge::{Extremum, Partition};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("invalid graph:\n{0}")]
    Invalid(ValidationReport),
    #[error("prefix ranks still changing after {0} characters")]
    NotStabilized(usize),
}

/// The first `len` characters of every node's minimum or maximum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixTable {
    len: usize,
    rows: Vec<Symbol>,
}

impl PrefixTable {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn row(&self, u: NodeId) -> &[Symbol] {
        &self.rows[u as usize * self.len..(u as usize + 1) * self.len]
    }
}

/// Direct string recurrence; quadratic in `len` per node.
pub fn oracle_prefixes(g: &LabeledGraph, kind: Extremum, len: usize) -> PrefixTable {
    let n = g.n();
    let mut rows: Vec<Vec<Symbol>> = g.nodes().map(|u| vec![g.label(u)]).collect();
    for _ in 1..len {
        let next = g
            .nodes()
            .map(|u| {
                let candidates = g.preds(u).iter().map(|&p| &rows[p as usize]);
                let best = match kind {
                    Extremum::Min => candidates.min(),
                    Extremum::Max => candidates.max(),
                };
                let mut row = vec![g.label(u)];
                row.extend_from_slice(best.map_or(&[][..], |b| b.as_slice()));
                row
            })
            .collect();
        rows = next;
    }
    let len = if n == 0 { len } else { rows[0].len() };
    PrefixTable { len, rows: rows.concat() }
}

/// Stable dense ranks for keys `(node, role)`; `roles[i]` lists the role of
/// key block `i`, each block covering all nodes.
fn stable_ranks(g: &LabeledGraph, roles: &[Extremum]) -> Result<Vec<u32>, OracleError> {
    let report = g.validate();
    if !report.is_ok() {
        return Err(OracleError::Invalid(report));
    }
    let n = g.n();
    let keys = n * roles.len();
    let label = |k: usize| g.label((k % n) as NodeId);
    let mut rank: Vec<u32> = (0..keys).map(label).collect();
    let limit = 8 * (n * n + n);
    for _ in 0..=limit {
        let pairs: Vec<(Symbol, u32)> = (0..keys)
            .map(|k| {
                let (block, u) = (k / n, k % n);
                let preds = g.preds(u as NodeId).iter().map(|&p| rank[block * n + p as usize]);
                let best = match roles[block] {
                    Extremum::Min => preds.min(),
                    Extremum::Max => preds.max(),
                };
                (label(k), best.expect("validated graphs have predecessors"))
            })
            .collect();
        let next = dense_ranks(&pairs);
        if next == rank {
            return Ok(rank);
        }
        rank = next;
    }
    Err(OracleError::NotStabilized(limit))
}

fn dense_ranks<T: Ord + Clone>(items: &[T]) -> Vec<u32> {
    let mut sorted: Vec<T> = items.to_vec();
    sorted.sort();
    sorted.dedup();
    items.iter().map(|x| sorted.binary_search(x).expect("present") as u32).collect()
}

fn group_by_rank(rank: &[u32]) -> Vec<Vec<usize>> {
    let groups = rank.iter().max().map_or(0, |&r| r as usize + 1);
    let mut out = vec![Vec::new(); groups];
    for (k, &r) in rank.iter().enumerate() {
        out[r as usize].push(k);
    }
    out
}

pub fn oracle_partition(g: &LabeledGraph, kind: Extremum) -> Result<Partition, OracleError> {
    let rank = stable_ranks(g, &[kind])?;
    let groups = group_by_rank(&rank).into_iter().map(|grp| grp.into_iter().map(|k| k as NodeId).collect()).collect();
    Ok(Partition::new(g.n(), groups).expect("rank classes are disjoint"))
}

pub fn oracle_minmax(g: &LabeledGraph) -> Result<MinMaxPartition, OracleError> {
    let n = g.n();
    let rank = stable_ranks(g, &[Extremum::Min, Extremum::Max])?;
    let key = |k: usize| MinMaxKey {
        node: (k % n) as NodeId,
        kind: if k < n { Extremum::Min } else { Extremum::Max },
    };
    let groups = group_by_rank(&rank).into_iter().map(|grp| grp.into_iter().map(key).collect()).collect();
    Ok(MinMaxPartition::new(groups))
}

/// Classes read off the stable ranks: `min_u = label(u) · min_p` for the
/// best predecessor `p`, so the class compares the rank of `p` with that of
/// `u`.
pub fn oracle_tau(g: &LabeledGraph) -> Result<TauVector, OracleError> {
    let rank = stable_ranks(g, &[Extremum::Min])?;
    let tau = g
        .nodes()
        .map(|u| {
            let best = g.preds(u).iter().map(|&p| rank[p as usize]).min().expect("validated");
            match best.cmp(&rank[u as usize]) {
                std::cmp::Ordering::Less => Tau::One,
                std::cmp::Ordering::Equal => Tau::Two,
                std::cmp::Ordering::Greater => Tau::Three,
            }
        })
        .collect();
    Ok(TauVector::new(tau))
}

/// Every valid graph with `1..=n_max` nodes and `1..=sigma` symbols, all
/// symbols used. No isomorphism reduction.
pub fn enumerate_small_graphs(n_max: usize, sigma: u32) -> impl Iterator<Item = LabeledGraph> {
    (1..=n_max).flat_map(move |n| {
        (1..=sigma.min(n as u32)).flat_map(move |s| surjections(n, s).into_iter().flat_map(move |labels| GraphsWithLabels::new(s, labels)))
    })
}

fn surjections(n: usize, s: u32) -> Vec<Vec<Symbol>> {
    let mut out = Vec::new();
    let mut labels = vec![0; n];
    loop {
        let mut used = vec![false; s as usize];
        labels.iter().for_each(|&c| used[c as usize] = true);
        if used.iter().all(|&b| b) {
            out.push(labels.clone());
        }
        // odometer over [0, s)^n
        let mut i = 0;
        while i < n && labels[i] + 1 == s {
            labels[i] = 0;
            i += 1;
        }
        if i == n {
            return out;
        }
        labels[i] += 1;
    }
}

/// All deterministic successor choices for one labeling. Slot `(u, c)` holds
/// either nothing or one node labeled `c`, which makes determinism automatic;
/// choices leaving a node without predecessors are skipped.
struct GraphsWithLabels {
    sigma: u32,
    labels: Vec<Symbol>,
    by_label: Vec<Vec<NodeId>>,
    choice: Vec<usize>,
    done: bool,
}

impl GraphsWithLabels {
    fn new(sigma: u32, labels: Vec<Symbol>) -> Self {
        let mut by_label = vec![Vec::new(); sigma as usize];
        for (u, &c) in labels.iter().enumerate() {
            by_label[c as usize].push(u as NodeId);
        }
        let choice = vec![0; labels.len() * sigma as usize];
        GraphsWithLabels { sigma, labels, by_label, choice, done: false }
    }

    fn advance(&mut self) {
        let s = self.sigma as usize;
        for (slot, digit) in self.choice.iter_mut().enumerate() {
            if *digit < self.by_label[slot % s].len() {
                *digit += 1;
                return;
            }
            *digit = 0;
        }
        self.done = true;
    }
}

impl Iterator for GraphsWithLabels {
    type Item = LabeledGraph;

    fn next(&mut self) -> Option<LabeledGraph> {
        let n = self.labels.len();
        let s = self.sigma as usize;
        while !self.done {
            let mut edges = Vec::new();
            let mut indegree = vec![0usize; n];
            for (slot, &digit) in self.choice.iter().enumerate() {
                if digit > 0 {
                    let v = self.by_label[slot % s][digit - 1];
                    edges.push(((slot / s) as NodeId, v));
                    indegree[v as usize] += 1;
                }
            }
            self.advance();
            if indegree.iter().all(|&d| d > 0) {
                let g = LabeledGraph::from_edges(self.sigma, self.labels.clone(), &edges).expect("enumerated edges are in range");
                return Some(g);
            }
        }
        None
    }
}

/// Closed-form size of [`enumerate_small_graphs`]. For a labeling with `k_c`
/// nodes of label `c`, each of the `n` nodes picks at most one successor
/// among them and every one of them must be picked:
/// `N(n, k) = Σ_j (-1)^j C(k, j) (k + 1 - j)^n` by inclusion-exclusion.
pub fn count_small_graphs(n_max: usize, sigma: u32) -> u128 {
    let mut total = 0u128;
    for n in 1..=n_max {
        for s in 1..=sigma.min(n as u32) {
            for labels in surjections(n, s) {
                let mut product = 1u128;
                for c in 0..s {
                    let k = labels.iter().filter(|&&x| x == c).count();
                    product *= covering_choices(n, k);
                }
                total += product;
            }
        }
    }
    total
}

fn covering_choices(n: usize, k: usize) -> u128 {
    let mut sum = 0i128;
    for j in 0..=k {
        let term = binomial(k, j) as i128 * ((k + 1 - j) as i128).pow(n as u32);
        sum += if j % 2 == 0 { term } else { -term };
    }
    sum as u128
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// A seeded uniform sample of `count` graphs from the enumeration.
pub fn sample_small_graphs(n: usize, sigma: u32, count: usize, seed: u64) -> Vec<LabeledGraph> {
    let mut all: Vec<LabeledGraph> = enumerate_small_graphs(n, sigma).filter(|g| g.n() == n).collect();
    all.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    all.truncate(count);
    all
}
