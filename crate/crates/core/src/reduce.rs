//! Reduction to a graph on one class of nodes.
//!
//! For every node of the recursed class, a backward exploration pins down
//! the prefix of its minimum up to the first position whose class leaves the
//! intermediate class. Each `(prefix, stop class)` pair becomes one letter of
//! a new alphabet, and the explored frontiers become the edges of the
//! reduced graph. Minima in the reduced graph are ordered exactly like the
//! minima of the corresponding nodes in the parent graph.

use std::cmp::Ordering;

use thiserror::Error;

use crate::classify::{Tau, TauVector};
use crate::graph::{GraphError, LabeledGraph, NodeId, Symbol, NO_NODE};

/// Which class of nodes a recursion step keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Keep class-three nodes; intermediate nodes are class one.
    Type3,
    /// Keep class-one nodes; intermediate nodes are class three.
    Type1,
}

impl Direction {
    pub fn recursed(self) -> Tau {
        match self {
            Direction::Type3 => Tau::Three,
            Direction::Type1 => Tau::One,
        }
    }

    /// The class rebuilt by merging once the recursed class is sorted.
    pub fn rebuilt(self) -> Tau {
        self.recursed().flip()
    }

    fn stops_at(self, t: Tau) -> bool {
        match self {
            Direction::Type3 => t >= Tau::Two,
            Direction::Type1 => t <= Tau::Two,
        }
    }

    /// Rank of a stop class among the letters sharing the same prefix.
    fn stop_rank(self, t: Tau) -> u32 {
        match (self, t) {
            (Direction::Type3, Tau::Two) | (Direction::Type1, Tau::One) => 0,
            _ => 1,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReduceError {
    #[error("exploration from node {0} found an empty frontier")]
    EmptyFrontier(NodeId),
    #[error("exploration from node {node} ran past {limit} characters")]
    Unterminated { node: NodeId, limit: usize },
    #[error("node {node} has class {tau:?}, which the {direction:?} exploration does not start from")]
    WrongStartClass { node: NodeId, tau: Tau, direction: Direction },
    #[error("record for node {node} has prefix length {len}, outside 2..={max}")]
    PrefixLength { node: NodeId, len: usize, max: usize },
    #[error("record for node {node} stops at class {t:?}, invalid for {direction:?}")]
    StopClass { node: NodeId, t: Tau, direction: Direction },
    #[error("node {0} has two records")]
    DuplicateRecord(NodeId),
    #[error("frontier node {frontier} of node {node} is not a reduced node")]
    FrontierOutsideClass { node: NodeId, frontier: NodeId },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Outcome of exploring the minimum of one node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplorationRecord {
    pub node: NodeId,
    /// First characters of the minimum, up to and including the stop position.
    pub gamma: Vec<Symbol>,
    /// Class of the nodes at the stop position.
    pub t: Tau,
    /// Nodes reached at the stop position.
    pub frontier: Vec<NodeId>,
    /// Predecessor entries scanned during the exploration.
    pub edge_work: usize,
}

/// Reusable scratch space for explorations over one graph.
///
/// Epoch stamps avoid clearing per-node arrays between explorations.
pub struct Explorer {
    seen: Vec<u32>,
    visited: Vec<u32>,
    step: u32,
    run: u32,
    candidates: Vec<NodeId>,
}

impl Explorer {
    pub fn new(n: usize) -> Self {
        Explorer { seen: vec![0; n], visited: vec![0; n], step: 0, run: 0, candidates: Vec::new() }
    }

    fn next_step(&mut self) -> u32 {
        if self.step == u32::MAX {
            self.seen.iter_mut().for_each(|s| *s = 0);
            self.step = 0;
        }
        self.step += 1;
        self.step
    }

    fn next_run(&mut self) -> u32 {
        if self.run == u32::MAX {
            self.visited.iter_mut().for_each(|s| *s = 0);
            self.run = 0;
        }
        self.run += 1;
        self.run
    }

    /// Exploration from a class-three node. `g` should be trimmed for the
    /// linear bound on `edge_work`; nodes already seen at positions `2..`
    /// are skipped.
    pub fn explore_type3(&mut self, g: &LabeledGraph, tau: &TauVector, u: NodeId) -> Result<ExplorationRecord, ReduceError> {
        self.explore(g, tau, u, Direction::Type3)
    }

    /// Exploration from a class-one node; works on untrimmed graphs.
    pub fn explore_type1(&mut self, g: &LabeledGraph, tau: &TauVector, u: NodeId) -> Result<ExplorationRecord, ReduceError> {
        self.explore(g, tau, u, Direction::Type1)
    }

    fn explore(&mut self, g: &LabeledGraph, tau: &TauVector, u: NodeId, direction: Direction) -> Result<ExplorationRecord, ReduceError> {
        if tau[u] != direction.recursed() {
            return Err(ReduceError::WrongStartClass { node: u, tau: tau[u], direction });
        }
        let subtract = direction == Direction::Type3;
        let limit = g.n() + 1;
        let run = self.next_run();
        let mut gamma = vec![g.label(u)];
        let mut frontier = vec![u];
        let mut edge_work = 0;
        loop {
            if gamma.len() >= limit {
                return Err(ReduceError::Unterminated { node: u, limit });
            }
            let step = self.next_step();
            self.candidates.clear();
            let mut best: Option<(Symbol, Tau)> = None;
            for &x in &frontier {
                let preds = g.preds(x);
                edge_work += preds.len();
                for &p in preds {
                    if self.seen[p as usize] == step {
                        continue;
                    }
                    self.seen[p as usize] = step;
                    self.candidates.push(p);
                    let key = (g.label(p), tau[p]);
                    if best.is_none_or(|b| key < b) {
                        best = Some(key);
                    }
                }
            }
            let (c, t) = best.ok_or(ReduceError::EmptyFrontier(u))?;
            let mut next = Vec::new();
            for &p in &self.candidates {
                if g.label(p) == c && tau[p] == t && !(subtract && self.visited[p as usize] == run) {
                    next.push(p);
                }
            }
            if next.is_empty() {
                return Err(ReduceError::EmptyFrontier(u));
            }
            if subtract {
                for &p in &next {
                    self.visited[p as usize] = run;
                }
            }
            gamma.push(c);
            if direction.stops_at(t) {
                next.sort_unstable();
                return Ok(ExplorationRecord { node: u, gamma, t, frontier: next, edge_work });
            }
            frontier = next;
        }
    }
}

pub fn explore_minimum_type3(g: &LabeledGraph, tau: &TauVector, u: NodeId) -> Result<ExplorationRecord, ReduceError> {
    Explorer::new(g.n()).explore_type3(g, tau, u)
}

pub fn explore_minimum_type1(g: &LabeledGraph, tau: &TauVector, u: NodeId) -> Result<ExplorationRecord, ReduceError> {
    Explorer::new(g.n()).explore_type1(g, tau, u)
}

#[derive(Debug, Clone)]
pub struct ReducedGraph {
    pub graph: LabeledGraph,
    /// Reduced node id to parent node id.
    pub to_parent: Vec<NodeId>,
    /// Parent node id to reduced node id, [`NO_NODE`] outside the class.
    pub from_parent: Vec<NodeId>,
    /// The `(prefix, stop class)` pair behind each reduced symbol.
    pub letter_key: Vec<(Vec<Symbol>, Tau)>,
}

/// Sorts the records' `(gamma, t)` letters with a padded LSD radix sort.
///
/// For [`Direction::Type3`] a string sorts before each of its strict
/// prefixes and stop class two before three. For [`Direction::Type1`] a
/// strict prefix sorts first and stop class one before two. Returns record
/// indices in sorted order; equal letters are adjacent.
pub fn sort_letters(records: &[ExplorationRecord], direction: Direction, sigma: u32) -> Vec<usize> {
    let width = records.iter().map(|r| r.gamma.len()).max().unwrap_or(0);
    // real characters shift up by one so the low pad can be zero
    let pad = match direction {
        Direction::Type3 => sigma + 1,
        Direction::Type1 => 0,
    };
    let key = |r: &ExplorationRecord, pos: usize| -> u32 {
        if pos == width {
            direction.stop_rank(r.t)
        } else {
            r.gamma.get(pos).map_or(pad, |&c| c + 1)
        }
    };
    let buckets = sigma as usize + 2;
    let mut order: Vec<usize> = (0..records.len()).collect();
    let mut scratch = vec![0usize; records.len()];
    let mut counts = vec![0usize; buckets + 1];
    for pos in (0..=width).rev() {
        counts.iter_mut().for_each(|c| *c = 0);
        for &i in &order {
            counts[key(&records[i], pos) as usize + 1] += 1;
        }
        for b in 0..buckets {
            counts[b + 1] += counts[b];
        }
        for &i in &order {
            let k = key(&records[i], pos) as usize;
            scratch[counts[k]] = i;
            counts[k] += 1;
        }
        std::mem::swap(&mut order, &mut scratch);
    }
    order
}

/// Builds the reduced graph from the records of every node in the
/// recursed class of `direction`.
pub fn build_reduced_graph(parent: &LabeledGraph, records: &[ExplorationRecord], direction: Direction) -> Result<ReducedGraph, ReduceError> {
    let n = parent.n();
    let mut from_parent = vec![NO_NODE; n];
    for (j, r) in records.iter().enumerate() {
        if !(2..=n + 1).contains(&r.gamma.len()) {
            return Err(ReduceError::PrefixLength { node: r.node, len: r.gamma.len(), max: n + 1 });
        }
        if !(r.t == Tau::Two || r.t == direction.recursed()) {
            return Err(ReduceError::StopClass { node: r.node, t: r.t, direction });
        }
        if from_parent[r.node as usize] != NO_NODE {
            return Err(ReduceError::DuplicateRecord(r.node));
        }
        from_parent[r.node as usize] = j as NodeId;
    }

    let order = sort_letters(records, direction, parent.sigma());
    let mut labels = vec![0; records.len()];
    let mut letter_key: Vec<(Vec<Symbol>, Tau)> = Vec::new();
    let mut prev: Option<usize> = None;
    for &i in &order {
        let r = &records[i];
        let same = prev.is_some_and(|p| records[p].gamma == r.gamma && records[p].t == r.t);
        if !same {
            letter_key.push((r.gamma.clone(), r.t));
        }
        labels[i] = (letter_key.len() - 1) as Symbol;
        prev = Some(i);
    }

    let mut edges = Vec::new();
    for (j, r) in records.iter().enumerate() {
        let j = j as NodeId;
        if r.t == Tau::Two {
            edges.push((j, j));
            continue;
        }
        for &f in &r.frontier {
            let from = from_parent[f as usize];
            if from == NO_NODE {
                return Err(ReduceError::FrontierOutsideClass { node: r.node, frontier: f });
            }
            edges.push((from, j));
        }
    }
    let graph = LabeledGraph::from_edges(letter_key.len() as u32, labels, &edges)?;
    let to_parent = records.iter().map(|r| r.node).collect();
    Ok(ReducedGraph { graph, to_parent, from_parent, letter_key })
}

/// Letter order written out clause by clause; used to cross-check the
/// radix sort.
pub fn compare_letters(a: (&[Symbol], Tau), b: (&[Symbol], Tau), direction: Direction) -> Ordering {
    let (alpha, x) = a;
    let (beta, y) = b;
    if alpha == beta {
        return direction.stop_rank(x).cmp(&direction.stop_rank(y));
    }
    let prefix_first = match direction {
        Direction::Type3 => Ordering::Greater,
        Direction::Type1 => Ordering::Less,
    };
    if beta.starts_with(alpha) {
        prefix_first
    } else if alpha.starts_with(beta) {
        prefix_first.reverse()
    } else {
        alpha.cmp(beta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::compute_tau;
    use crate::graph::tests::example_graph;
    use proptest::prelude::*;

    fn record(gamma: &[Symbol], t: Tau) -> ExplorationRecord {
        ExplorationRecord { node: 0, gamma: gamma.to_vec(), t, frontier: vec![], edge_work: 0 }
    }

    #[test]
    fn example_graph_type3_exploration() {
        let g = example_graph();
        let tau = compute_tau(&g);
        let r = explore_minimum_type3(&g.trim(&tau), &tau, 5).unwrap();
        assert_eq!(r.gamma, vec![1, 2, 0]);
        assert_eq!(r.t, Tau::Two);
        assert_eq!(r.frontier, vec![0]);
    }

    #[test]
    fn two_cycle_type3_exploration_revisits_start() {
        let g = LabeledGraph::from_edges(2, vec![0, 1], &[(0, 1), (1, 0)]).unwrap();
        let tau = compute_tau(&g);
        let r = explore_minimum_type3(&g.trim(&tau), &tau, 0).unwrap();
        assert_eq!(r.gamma, vec![0, 1, 0]);
        assert_eq!(r.t, Tau::Three);
        assert_eq!(r.frontier, vec![0]);
    }

    #[test]
    fn shortest_type3_exploration() {
        // node 0 has predecessors 1 (label 1, loop) and 2 (label 2, loop)
        let g = LabeledGraph::from_edges(3, vec![0, 1, 2], &[(1, 1), (2, 2), (1, 0), (2, 0)]).unwrap();
        let tau = compute_tau(&g);
        assert_eq!(tau[0], Tau::Three);
        let r = explore_minimum_type3(&g, &tau, 0).unwrap();
        assert_eq!((r.gamma.clone(), r.t, r.frontier.clone()), (vec![0, 1], Tau::Two, vec![1]));
    }

    #[test]
    fn example_graph_type1_explorations() {
        let g = example_graph();
        let tau = compute_tau(&g);
        let r = explore_minimum_type1(&g, &tau, 4).unwrap();
        assert_eq!((r.gamma, r.t, r.frontier), (vec![3, 1], Tau::One, vec![1]));
        let r = explore_minimum_type1(&g, &tau, 1).unwrap();
        assert_eq!((r.gamma, r.t, r.frontier), (vec![1, 0], Tau::Two, vec![0]));
    }

    #[test]
    fn type1_exploration_through_increasing_chain() {
        // 0: label 1 loop. 1: label 0, pred 0 -> min 0 1^ω (class 3).
        // 2: label 0, pred 1 -> 0 0 1^ω (class 3).
        // 3: label 2 loop; 4: label 1, preds 2 and 3 -> 1 0 0 1^ω (class 1).
        let labels = vec![1, 0, 0, 2, 1];
        let edges = [(0, 0), (0, 1), (1, 2), (3, 3), (2, 4), (3, 4)];
        let g = LabeledGraph::from_edges(3, labels, &edges).unwrap();
        assert!(g.validate().is_ok());
        let tau = compute_tau(&g);
        assert_eq!(tau.iter().map(Tau::value).collect::<Vec<_>>(), vec![2, 3, 3, 2, 1]);
        let r = explore_minimum_type1(&g, &tau, 4).unwrap();
        assert_eq!((r.gamma, r.t, r.frontier), (vec![1, 0, 0, 1], Tau::Two, vec![0]));
    }

    #[test]
    fn wrong_start_class_is_rejected() {
        let g = example_graph();
        let tau = compute_tau(&g);
        assert!(matches!(explore_minimum_type3(&g, &tau, 0), Err(ReduceError::WrongStartClass { .. })));
        assert!(matches!(explore_minimum_type1(&g, &tau, 5), Err(ReduceError::WrongStartClass { .. })));
    }

    #[test]
    fn example_graph_reduced_graph() {
        let g = example_graph();
        let tau = compute_tau(&g);
        let r = explore_minimum_type3(&g.trim(&tau), &tau, 5).unwrap();
        let red = build_reduced_graph(&g, &[r], Direction::Type3).unwrap();
        assert_eq!(red.graph.n(), 1);
        assert_eq!(red.graph.sigma(), 1);
        assert_eq!(red.graph.edges().collect::<Vec<_>>(), vec![(0, 0)]);
        assert_eq!(red.letter_key, vec![(vec![1, 2, 0], Tau::Two)]);
        assert_eq!(red.to_parent, vec![5]);
        assert_eq!(red.from_parent[5], 0);
        assert!(red.graph.validate().is_ok());
    }

    #[test]
    fn stop_class_breaks_ties() {
        let recs = [record(&[0, 1], Tau::Three), record(&[0, 1], Tau::Two)];
        assert_eq!(sort_letters(&recs, Direction::Type3, 2), vec![1, 0]);
        let recs = [record(&[1, 0], Tau::Two), record(&[1, 0], Tau::One)];
        assert_eq!(sort_letters(&recs, Direction::Type1, 2), vec![1, 0]);
    }

    #[test]
    fn extension_sorts_before_prefix_in_type3() {
        let recs = [record(&[0, 1], Tau::Two), record(&[0, 1, 0], Tau::Two)];
        assert_eq!(sort_letters(&recs, Direction::Type3, 2), vec![1, 0]);
        assert_eq!(sort_letters(&recs, Direction::Type1, 2), vec![0, 1]);
    }

    #[test]
    fn reduced_graph_rejects_bad_records() {
        let g = example_graph();
        let mut r = record(&[1], Tau::Two);
        r.node = 5;
        assert!(matches!(build_reduced_graph(&g, &[r.clone()], Direction::Type3), Err(ReduceError::PrefixLength { .. })));
        r.gamma = vec![1; 9];
        assert!(matches!(build_reduced_graph(&g, &[r.clone()], Direction::Type3), Err(ReduceError::PrefixLength { .. })));
        r.gamma = vec![1, 2];
        r.t = Tau::One;
        assert!(matches!(build_reduced_graph(&g, &[r], Direction::Type3), Err(ReduceError::StopClass { .. })));
    }

    fn letter() -> impl Strategy<Value = (Vec<Symbol>, bool)> {
        (prop::collection::vec(0u32..3, 1..5), prop::bool::ANY)
    }

    proptest! {
        #[test]
        fn radix_sort_matches_clause_order(letters in prop::collection::vec(letter(), 0..30), type3 in prop::bool::ANY) {
            let direction = if type3 { Direction::Type3 } else { Direction::Type1 };
            let stop = |b: bool| match (direction, b) {
                (Direction::Type3, true) => Tau::Three,
                (Direction::Type1, true) => Tau::One,
                _ => Tau::Two,
            };
            let recs: Vec<_> = letters.iter().map(|(g, b)| record(g, stop(*b))).collect();
            let order = sort_letters(&recs, direction, 3);
            for w in order.windows(2) {
                let (a, b) = (&recs[w[0]], &recs[w[1]]);
                prop_assert_ne!(compare_letters((&a.gamma, a.t), (&b.gamma, b.t), direction), Ordering::Greater);
            }
            let mut sorted = order.clone();
            sorted.sort_unstable();
            prop_assert_eq!(sorted, (0..recs.len()).collect::<Vec<_>>());
        }
    }
}
