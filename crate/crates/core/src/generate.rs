//! Seeded generators of valid graphs.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{LabeledGraph, NodeId, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphKind {
    Random,
    Cycle,
    DeBruijn,
    ChainFeedingSink,
}

impl GraphKind {
    pub const ALL: [GraphKind; 4] = [GraphKind::Random, GraphKind::Cycle, GraphKind::DeBruijn, GraphKind::ChainFeedingSink];

    pub fn name(self) -> &'static str {
        match self {
            GraphKind::Random => "random",
            GraphKind::Cycle => "cycle",
            GraphKind::DeBruijn => "debruijn",
            GraphKind::ChainFeedingSink => "chain-feeding-sink",
        }
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GraphKind {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, GenError> {
        GraphKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| GenError::UnknownKind(s.to_string()))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("unknown graph kind {0:?}")]
    UnknownKind(String),
    #[error("{n} nodes cannot use all {sigma} symbols")]
    TooFewNodes { n: usize, sigma: u32 },
    #[error("sigma must be at least 1")]
    EmptyAlphabet,
    #[error("{n} is not a power of {sigma}")]
    NotAPower { n: usize, sigma: u32 },
    #[error("chain-feeding-sink needs sigma = 2 and n >= 3, got n = {n}, sigma = {sigma}")]
    ChainShape { n: usize, sigma: u32 },
    #[error("density {0} outside [0, 1]")]
    Density(f64),
}

/// Edge probability used by [`generate`] for random graphs.
pub const DEFAULT_DENSITY: f64 = 0.5;

pub fn generate(kind: GraphKind, n: usize, sigma: u32, seed: u64) -> Result<LabeledGraph, GenError> {
    match kind {
        GraphKind::Random => random_graph(n, sigma, DEFAULT_DENSITY, seed),
        GraphKind::Cycle => cycle(n, sigma),
        GraphKind::DeBruijn => de_bruijn(n, sigma),
        GraphKind::ChainFeedingSink => chain_feeding_sink(n, sigma),
    }
}

/// Uniform labels using every symbol, one incoming edge per node, then each
/// empty `(node, symbol)` successor slot filled with probability `density`.
/// With `sigma = n / 2` and `density = 0.5` there are about `n² / 4` edges.
pub fn random_graph(n: usize, sigma: u32, density: f64, seed: u64) -> Result<LabeledGraph, GenError> {
    check_alphabet(n, sigma)?;
    if !(0.0..=1.0).contains(&density) {
        return Err(GenError::Density(density));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels: Vec<Symbol> = (0..sigma).chain((sigma as usize..n).map(|_| rng.random_range(0..sigma))).collect();
    labels.shuffle(&mut rng);

    let s = sigma as usize;
    let mut by_label: Vec<Vec<NodeId>> = vec![Vec::new(); s];
    for (u, &c) in labels.iter().enumerate() {
        by_label[c as usize].push(u as NodeId);
    }
    // successor[u * s + c] is the c-labeled successor of u
    let mut successor = vec![NodeId::MAX; n * s];
    let mut sources: Vec<NodeId> = (0..n as NodeId).collect();
    for (c, targets) in by_label.iter().enumerate() {
        // distinct sources per label keep the graph deterministic
        sources.shuffle(&mut rng);
        for (&v, &u) in targets.iter().zip(&sources) {
            successor[u as usize * s + c] = v;
        }
    }
    for (slot, succ) in successor.iter_mut().enumerate() {
        if *succ == NodeId::MAX && rng.random_bool(density) {
            let targets = &by_label[slot % s];
            *succ = targets[rng.random_range(0..targets.len())];
        }
    }
    let edges: Vec<(NodeId, NodeId)> = successor
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != NodeId::MAX)
        .map(|(slot, &v)| ((slot / s) as NodeId, v))
        .collect();
    Ok(LabeledGraph::from_edges(sigma, labels, &edges).expect("generated edges are in range"))
}

/// Node `i` labeled `i mod sigma`, edges `i -> i + 1 (mod n)`.
pub fn cycle(n: usize, sigma: u32) -> Result<LabeledGraph, GenError> {
    check_alphabet(n, sigma)?;
    let labels = (0..n).map(|i| (i % sigma as usize) as Symbol).collect();
    let edges: Vec<_> = (0..n).map(|i| (i as NodeId, ((i + 1) % n) as NodeId)).collect();
    Ok(LabeledGraph::from_edges(sigma, labels, &edges).expect("cycle edges are in range"))
}

/// Words of length `k` with `n = sigma^k`; word `w` is labeled by its last
/// character and has an edge to `w[1..] c` for every `c`.
pub fn de_bruijn(n: usize, sigma: u32) -> Result<LabeledGraph, GenError> {
    check_alphabet(n.max(sigma as usize), sigma)?;
    let s = sigma as usize;
    let mut size = 1usize;
    while size < n {
        size *= s;
        if s == 1 {
            break;
        }
    }
    if size != n || (s == 1 && n != 1) {
        return Err(GenError::NotAPower { n, sigma });
    }
    // word value in base sigma, last character least significant
    let labels = (0..n).map(|w| (w % s) as Symbol).collect();
    let edges: Vec<_> = (0..n)
        .flat_map(|w| (0..s).map(move |c| (w as NodeId, ((w * s) % n + c) as NodeId)))
        .collect();
    Ok(LabeledGraph::from_edges(sigma, labels, &edges).expect("word edges are in range"))
}

/// Node 0 is a source with a self-loop labeled 1 that starts a chain of
/// nodes labeled 0; the chain ends in node `n - 1`, a label-0 sink with a
/// self-loop.
pub fn chain_feeding_sink(n: usize, sigma: u32) -> Result<LabeledGraph, GenError> {
    if sigma != 2 || n < 3 {
        return Err(GenError::ChainShape { n, sigma });
    }
    let mut labels = vec![0; n];
    labels[0] = 1;
    let last = (n - 1) as NodeId;
    let mut edges = vec![(0, 0), (last, last)];
    edges.extend((0..last).map(|i| (i, i + 1)));
    Ok(LabeledGraph::from_edges(sigma, labels, &edges).expect("chain edges are in range"))
}

fn check_alphabet(n: usize, sigma: u32) -> Result<(), GenError> {
    if sigma == 0 {
        return Err(GenError::EmptyAlphabet);
    }
    if n < sigma as usize {
        return Err(GenError::TooFewNodes { n, sigma });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_of_one_label() {
        let g = generate(GraphKind::Cycle, 5, 1, 0).unwrap();
        assert_eq!(g.labels(), &[0; 5]);
        assert_eq!(g.edge_count(), 5);
        assert!(g.validate().is_ok());
        assert_eq!(cycle(2, 3), Err(GenError::TooFewNodes { n: 2, sigma: 3 }));
    }

    #[test]
    fn random_is_valid_and_seeded() {
        let a = generate(GraphKind::Random, 50, 4, 7).unwrap();
        let b = generate(GraphKind::Random, 50, 4, 7).unwrap();
        assert!(a.validate().is_ok());
        assert_eq!(a.labels(), b.labels());
        assert!(a.edges().eq(b.edges()));
        let c = generate(GraphKind::Random, 50, 4, 8).unwrap();
        assert!(!c.edges().eq(a.edges()) || c.labels() != a.labels());
    }

    #[test]
    fn dense_random_has_quarter_square_edges() {
        let n = 400;
        let g = random_graph(n, n as u32 / 2, 0.5, 1).unwrap();
        let m = g.edge_count() as f64;
        let target = (n * n) as f64 / 4.0;
        assert!((m - target).abs() < 0.05 * target, "m = {m}");
    }

    #[test]
    fn de_bruijn_order_three() {
        let g = generate(GraphKind::DeBruijn, 8, 2, 0).unwrap();
        assert!(g.validate().is_ok());
        assert!(g.nodes().all(|u| g.preds(u).len() == 2));
        assert_eq!(de_bruijn(6, 2), Err(GenError::NotAPower { n: 6, sigma: 2 }));
        assert!(de_bruijn(1, 1).unwrap().validate().is_ok());
    }

    #[test]
    fn chain_feeding_sink_shape() {
        let g = generate(GraphKind::ChainFeedingSink, 5, 2, 0).unwrap();
        assert!(g.validate().is_ok());
        assert_eq!(g.labels(), &[1, 0, 0, 0, 0]);
        assert!(chain_feeding_sink(5, 1).is_err());
    }

    #[test]
    fn kind_names_round_trip() {
        for k in GraphKind::ALL {
            assert_eq!(k.name().parse::<GraphKind>().unwrap(), k);
        }
        assert!("tree".parse::<GraphKind>().is_err());
    }
}
