#![allow(dead_code)]

use gsa::generate::random_graph;
use gsa::oracle::{enumerate_small_graphs, oracle_partition, sample_small_graphs};
use gsa::{Extremum, LabeledGraph, NodeId, Partition};

/// Every valid graph with at most three nodes over at most two symbols.
pub fn exhaustive() -> Vec<LabeledGraph> {
    enumerate_small_graphs(3, 2).collect()
}

/// A fixed sample of four-node graphs over at most two symbols.
pub fn sampled_four(count: usize) -> Vec<LabeledGraph> {
    sample_small_graphs(4, 2, count, 0x5eed)
}

pub const RANDOM_SIZES: [usize; 3] = [10, 50, 200];
pub const RANDOM_SIGMAS: [u32; 3] = [2, 4, 16];
const DENSITIES: [f64; 4] = [0.05, 0.15, 0.4, 0.8];

/// `per_size` seeded random graphs for each size; alphabet sizes and
/// densities cycle with the seed. Alphabets larger than `n` are capped at
/// `n`, since every symbol must label some node.
pub fn random_corpus(per_size: usize) -> Vec<LabeledGraph> {
    let mut out = Vec::new();
    for &n in &RANDOM_SIZES {
        for i in 0..per_size {
            let sigma = RANDOM_SIGMAS[i % RANDOM_SIGMAS.len()].min(n as u32);
            let density = DENSITIES[(i / RANDOM_SIGMAS.len()) % DENSITIES.len()];
            out.push(random_graph(n, sigma, density, (n * 1000 + i) as u64).unwrap());
        }
    }
    out
}

/// Disjoint union; nodes of `h` are shifted by `g.n()`.
pub fn union(g: &LabeledGraph, h: &LabeledGraph) -> LabeledGraph {
    assert_eq!(g.sigma(), h.sigma());
    let shift = g.n() as NodeId;
    let labels: Vec<_> = g.labels().iter().chain(h.labels()).copied().collect();
    let edges: Vec<_> = g.edges().chain(h.edges().map(|(u, v)| (u + shift, v + shift))).collect();
    LabeledGraph::from_edges(g.sigma(), labels, &edges).unwrap()
}

/// `true` when node `u` of `g` and node `u` of `h` have equal minima for
/// every `u`.
pub fn same_minima(g: &LabeledGraph, h: &LabeledGraph) -> bool {
    let p = oracle_partition(&union(g, h), Extremum::Min).unwrap();
    let n = g.n() as NodeId;
    g.nodes().all(|u| p.rank(u) == p.rank(u + n))
}

/// Groups of `p` cut down to `keep`, empty groups dropped.
pub fn restrict(p: &Partition, keep: impl Fn(NodeId) -> bool) -> Vec<Vec<NodeId>> {
    p.groups()
        .iter()
        .map(|g| g.iter().copied().filter(|&u| keep(u)).collect::<Vec<_>>())
        .filter(|g| !g.is_empty())
        .collect()
}

use gsa::driver::{min_partition_with_stats, minmax_partition_with_stats};
use gsa::reduce::{build_reduced_graph, Direction, ExplorationRecord, Explorer};
use gsa::{compute_psi, compute_tau, Symbol, Tau, TauVector};

/// First `len` characters of `min_u`, following at each step the
/// predecessor with the smallest oracle rank.
pub fn min_prefix(g: &LabeledGraph, oracle: &Partition, u: NodeId, len: usize) -> Vec<Symbol> {
    let mut out = Vec::with_capacity(len);
    let mut cur = u;
    for _ in 0..len {
        out.push(g.label(cur));
        cur = *g.preds(cur).iter().min_by_key(|&&p| oracle.rank(p)).unwrap();
    }
    out
}

fn explore_all(g: &LabeledGraph, tau: &TauVector, direction: Direction) -> Vec<ExplorationRecord> {
    let trimmed = g.trim(tau);
    let mut explorer = Explorer::new(g.n());
    tau.nodes_of(direction.recursed())
        .into_iter()
        .map(|u| match direction {
            Direction::Type3 => explorer.explore_type3(&trimmed, tau, u).unwrap(),
            Direction::Type1 => explorer.explore_type1(g, tau, u).unwrap(),
        })
        .collect()
}

pub fn check_tau(g: &LabeledGraph) -> Result<(), String> {
    let expected = gsa::oracle::oracle_tau(g).unwrap();
    let got = compute_tau(g);
    (got == expected).then_some(()).ok_or_else(|| format!("tau {:?} != oracle {:?} on {g:?}", got.as_slice(), expected.as_slice()))
}

pub fn check_trimming(g: &LabeledGraph) -> Result<(), String> {
    let t = g.trim(&compute_tau(g));
    same_minima(g, &t).then_some(()).ok_or_else(|| format!("trimming changed a minimum on {g:?}"))
}

/// Prefix soundness and shape of every exploration, both directions.
pub fn check_gamma(g: &LabeledGraph) -> Result<(), String> {
    let tau = compute_tau(g);
    let oracle = oracle_partition(g, Extremum::Min).unwrap();
    for direction in [Direction::Type3, Direction::Type1] {
        for r in explore_all(g, &tau, direction) {
            let len = r.gamma.len();
            if !(2..=g.n() + 1).contains(&len) {
                return Err(format!("length {len} for node {} on {g:?}", r.node));
            }
            if r.gamma != min_prefix(g, &oracle, r.node, len) {
                return Err(format!("gamma {:?} of node {} is not a prefix of its minimum on {g:?}", r.gamma, r.node));
            }
            let tail = &r.gamma[1..];
            let monotone = match direction {
                Direction::Type3 => tail.windows(2).all(|w| w[1] <= w[0]),
                Direction::Type1 => tail.windows(2).all(|w| w[1] >= w[0]),
            };
            let frontier_ok = r.frontier.iter().all(|&f| g.label(f) == r.gamma[len - 1] && tau[f] == r.t);
            if !monotone || !frontier_ok {
                return Err(format!("record {r:?} is malformed on {g:?}"));
            }
        }
    }
    Ok(())
}

/// The oracle order of the recursed class equals the oracle order of the
/// reduced graph, in both directions.
pub fn check_reduced_order(g: &LabeledGraph) -> Result<(), String> {
    let tau = compute_tau(g);
    let oracle = oracle_partition(g, Extremum::Min).unwrap();
    for direction in [Direction::Type3, Direction::Type1] {
        let records = explore_all(g, &tau, direction);
        if records.is_empty() {
            continue;
        }
        let red = build_reduced_graph(g, &records, direction).map_err(|e| e.to_string())?;
        if !red.graph.validate().is_ok() {
            return Err(format!("{direction:?} reduced graph invalid: {} on {g:?}", red.graph.validate()));
        }
        for (i, r) in records.iter().enumerate() {
            if r.t == Tau::Two && red.graph.preds(i as NodeId) != [i as NodeId] {
                return Err(format!("reduced node {i} should only have its self-loop on {g:?}"));
            }
        }
        let reduced = oracle_partition(&red.graph, Extremum::Min).unwrap();
        let lifted: Vec<Vec<NodeId>> = reduced
            .groups()
            .iter()
            .map(|grp| {
                let mut v: Vec<NodeId> = grp.iter().map(|&x| red.to_parent[x as usize]).collect();
                v.sort_unstable();
                v
            })
            .collect();
        let expected = restrict(&oracle, |u| tau[u] == direction.recursed());
        if lifted != expected {
            return Err(format!("{direction:?} reduction reorders minima: {lifted:?} vs {expected:?} on {g:?}"));
        }
    }
    Ok(())
}

pub fn check_halving(g: &LabeledGraph) -> Result<(), String> {
    let (_, a) = min_partition_with_stats(g).unwrap();
    let (_, b) = minmax_partition_with_stats(g).unwrap();
    match a.iter().chain(&b).find(|s| 2 * s.recursed > s.nodes) {
        Some(s) => Err(format!("level {s:?} recursed on more than half on {g:?}")),
        None => Ok(()),
    }
}

/// No class-one node carries the smallest label and no class-three node
/// the largest, so the first class-one and last class-three buckets stay
/// empty.
pub fn check_extreme_buckets(g: &LabeledGraph) -> Result<(), String> {
    let tau = compute_tau(g);
    let top = g.sigma() - 1;
    match g.nodes().find(|&u| (g.label(u) == 0 && tau[u] == Tau::One) || (g.label(u) == top && tau[u] == Tau::Three)) {
        Some(u) => Err(format!("node {u} sits in an extreme bucket on {g:?}")),
        None => Ok(()),
    }
}

/// Equal-label class-three nodes with different heights are ordered by
/// decreasing height.
pub fn check_psi_order(g: &LabeledGraph) -> Result<(), String> {
    let tau = compute_tau(g);
    let psi = compute_psi(g, &tau);
    let oracle = oracle_partition(g, Extremum::Min).unwrap();
    let threes = tau.nodes_of(Tau::Three);
    for &u in &threes {
        for &v in &threes {
            let (pu, pv) = (psi.get(u).unwrap(), psi.get(v).unwrap());
            if g.label(u) != g.label(v) || pu == pv {
                continue;
            }
            if (oracle.rank(u) < oracle.rank(v)) != (pv < pu) {
                return Err(format!("heights {pu}, {pv} of nodes {u}, {v} disagree with their order on {g:?}"));
            }
        }
    }
    Ok(())
}

/// Largest edge work of class-three explorations on the trimmed graph and of
/// class-one explorations, each divided by `n`.
pub fn edge_work_ratios(g: &LabeledGraph) -> (f64, f64) {
    let tau = compute_tau(g);
    let n = g.n() as f64;
    let worst = |d| explore_all(g, &tau, d).iter().map(|r| r.edge_work as f64 / n).fold(0.0, f64::max);
    (worst(Direction::Type3), worst(Direction::Type1))
}
