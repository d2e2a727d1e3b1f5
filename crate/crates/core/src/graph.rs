//! Deterministic, input-consistent labeled graphs.
//!
//! Every edge entering a node carries the same label, so the label is stored
//! on the node. Edges are kept twice, as predecessor and successor lists in
//! compressed sparse row form, both sorted by node id.

use std::fmt;

use thiserror::Error;

use crate::classify::{Tau, TauVector};

/// Node identifier, dense in `0..n`.
pub type NodeId = u32;
/// Alphabet character, dense in `0..sigma` and ordered by integer value.
pub type Symbol = u32;

/// Sentinel used in flat node maps for "no node".
pub const NO_NODE: NodeId = NodeId::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("node id {node} out of range for a graph with {n} nodes")]
    NodeOutOfRange { node: NodeId, n: usize },
    #[error("label {label} of node {node} out of range for alphabet size {sigma}")]
    LabelOutOfRange { node: NodeId, label: Symbol, sigma: u32 },
    #[error("graph has {0} nodes, more than the supported maximum")]
    TooManyNodes(usize),
}

#[derive(Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    sigma: u32,
    labels: Vec<Symbol>,
    pred_offsets: Vec<usize>,
    preds: Vec<NodeId>,
    succ_offsets: Vec<usize>,
    succs: Vec<NodeId>,
}

impl fmt::Debug for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LabeledGraph")
            .field("n", &self.n())
            .field("sigma", &self.sigma)
            .field("labels", &self.labels)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

fn csr(n: usize, edges: &[(NodeId, NodeId)], key: impl Fn(&(NodeId, NodeId)) -> (NodeId, NodeId)) -> (Vec<usize>, Vec<NodeId>) {
    let mut offsets = vec![0usize; n + 1];
    for e in edges {
        offsets[key(e).0 as usize + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    let mut fill = offsets.clone();
    let mut flat = vec![0; edges.len()];
    for e in edges {
        let (a, b) = key(e);
        flat[fill[a as usize]] = b;
        fill[a as usize] += 1;
    }
    for i in 0..n {
        flat[offsets[i]..offsets[i + 1]].sort_unstable();
    }
    (offsets, flat)
}

impl LabeledGraph {
    /// Builds a graph from node labels and `(from, to)` edges.
    ///
    /// Duplicate edges are collapsed. Only range checks happen here; the
    /// structural assumptions are checked by [`LabeledGraph::validate`].
    pub fn from_edges(sigma: u32, labels: Vec<Symbol>, edges: &[(NodeId, NodeId)]) -> Result<Self, GraphError> {
        let n = labels.len();
        if n >= NO_NODE as usize {
            return Err(GraphError::TooManyNodes(n));
        }
        for (u, &c) in labels.iter().enumerate() {
            if c >= sigma {
                return Err(GraphError::LabelOutOfRange { node: u as NodeId, label: c, sigma });
            }
        }
        for &(u, v) in edges {
            for x in [u, v] {
                if x as usize >= n {
                    return Err(GraphError::NodeOutOfRange { node: x, n });
                }
            }
        }
        let mut edges = edges.to_vec();
        edges.sort_unstable();
        edges.dedup();
        let (pred_offsets, preds) = csr(n, &edges, |&(u, v)| (v, u));
        let (succ_offsets, succs) = csr(n, &edges, |&(u, v)| (u, v));
        Ok(LabeledGraph { sigma, labels, pred_offsets, preds, succ_offsets, succs })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn sigma(&self) -> u32 {
        self.sigma
    }

    pub fn edge_count(&self) -> usize {
        self.preds.len()
    }

    #[inline]
    pub fn label(&self, u: NodeId) -> Symbol {
        self.labels[u as usize]
    }

    pub fn labels(&self) -> &[Symbol] {
        &self.labels
    }

    #[inline]
    pub fn preds(&self, u: NodeId) -> &[NodeId] {
        let u = u as usize;
        &self.preds[self.pred_offsets[u]..self.pred_offsets[u + 1]]
    }

    #[inline]
    pub fn succs(&self, u: NodeId) -> &[NodeId] {
        let u = u as usize;
        &self.succs[self.succ_offsets[u]..self.succ_offsets[u + 1]]
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        0..self.n() as NodeId
    }

    /// All edges as `(from, to)`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.nodes().flat_map(move |u| self.succs(u).iter().map(move |&v| (u, v)))
    }

    /// Reports every violated structural assumption. Never fails.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let mut used = vec![false; self.sigma as usize];
        for u in self.nodes() {
            used[self.label(u) as usize] = true;
            if self.preds(u).is_empty() {
                violations.push(Violation {
                    rule: Rule::MissingPredecessor,
                    subject: Subject::Node(u),
                    message: format!("node {u} has no incoming edge"),
                });
            }
        }
        // successor lists are sorted by id, not label, so use a stamped table
        let mut seen = vec![NO_NODE; self.sigma as usize];
        for u in self.nodes() {
            for &v in self.succs(u) {
                let c = self.label(v) as usize;
                if seen[c] == u {
                    violations.push(Violation {
                        rule: Rule::NonDeterministic,
                        subject: Subject::Edge(u, v),
                        message: format!("node {u} has two successors labeled {c}"),
                    });
                }
                seen[c] = u;
            }
        }
        for (c, _) in used.iter().enumerate().filter(|(_, &b)| !b) {
            violations.push(Violation {
                rule: Rule::UnusedSymbol,
                subject: Subject::Symbol(c as Symbol),
                message: format!("symbol {c} labels no node"),
            });
        }
        ValidationReport { violations }
    }

    /// Same graph with every label `c` replaced by `sigma - 1 - c`.
    pub fn transpose_alphabet(&self) -> LabeledGraph {
        let top = self.sigma.saturating_sub(1);
        LabeledGraph {
            sigma: self.sigma,
            labels: self.labels.iter().map(|&c| top - c).collect(),
            ..self.clone()
        }
    }

    /// Copy of the graph without the edges `(u, v)` such that `tau(v) = 1`
    /// and `label(v) < label(u)`. Minima are unchanged.
    pub fn trim(&self, tau: &TauVector) -> LabeledGraph {
        self.retain_edges(|u, v| !(tau[v] == Tau::One && self.label(v) < self.label(u)))
    }

    pub(crate) fn retain_edges(&self, mut keep: impl FnMut(NodeId, NodeId) -> bool) -> LabeledGraph {
        let edges: Vec<_> = self.edges().filter(|&(u, v)| keep(u, v)).collect();
        let (pred_offsets, preds) = csr(self.n(), &edges, |&(u, v)| (v, u));
        let (succ_offsets, succs) = csr(self.n(), &edges, |&(u, v)| (u, v));
        LabeledGraph { sigma: self.sigma, labels: self.labels.clone(), pred_offsets, preds, succ_offsets, succs }
    }

    /// Two disjoint copies of `self`; nodes of the second copy are shifted by `n`.
    pub fn doubled(&self) -> LabeledGraph {
        let n = self.n() as NodeId;
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&self.labels);
        let edges: Vec<_> = self.edges().chain(self.edges().map(|(u, v)| (u + n, v + n))).collect();
        LabeledGraph::from_edges(self.sigma, labels, &edges).expect("copy of a well-formed graph")
    }

    /// Same edges with labels replaced node by node.
    pub(crate) fn relabeled(&self, labels: Vec<Symbol>) -> LabeledGraph {
        debug_assert_eq!(labels.len(), self.n());
        LabeledGraph { labels, ..self.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    MissingPredecessor,
    NonDeterministic,
    UnusedSymbol,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subject {
    Node(NodeId),
    Edge(NodeId, NodeId),
    Symbol(Symbol),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub rule: Rule,
    pub subject: Subject,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, rule: Rule) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{:?}: {}", v.rule, v.message)?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DfaError {
    #[error("state {0} is out of range")]
    StateOutOfRange(usize),
    #[error("state {state} is entered by edges labeled {first} and {second}")]
    NotInputConsistent { state: usize, first: u32, second: u32 },
    #[error("state {state} has two transitions labeled {label}")]
    NotDeterministic { state: usize, label: u32 },
    #[error("initial state {0} has incoming edges")]
    InitialHasIncoming(usize),
    #[error("state {0} has no incoming edge")]
    Unreachable(usize),
}

/// A DFA whose acceptance information is irrelevant here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    pub states: usize,
    pub initial: usize,
    /// `(from, to, label)`; labels are arbitrary integers ordered by value.
    pub transitions: Vec<(usize, usize, u32)>,
}

/// Result of [`from_dfa`]: the graph and the meaning of each of its symbols.
#[derive(Debug, Clone)]
pub struct DfaGraph {
    pub graph: LabeledGraph,
    /// `symbols[c]` is the DFA label behind graph symbol `c`; `None` is the
    /// fresh minimum symbol labeling the initial state.
    pub symbols: Vec<Option<u32>>,
}

/// Turns a DFA into a graph: the initial state gets a self-loop with a fresh
/// symbol smaller than all others, and DFA labels are compacted to `1..`.
pub fn from_dfa(dfa: &Dfa) -> Result<DfaGraph, DfaError> {
    let n = dfa.states;
    if dfa.initial >= n {
        return Err(DfaError::StateOutOfRange(dfa.initial));
    }
    let mut entering: Vec<Option<u32>> = vec![None; n];
    for &(u, v, c) in &dfa.transitions {
        if u >= n {
            return Err(DfaError::StateOutOfRange(u));
        }
        if v >= n {
            return Err(DfaError::StateOutOfRange(v));
        }
        if v == dfa.initial {
            return Err(DfaError::InitialHasIncoming(v));
        }
        match entering[v] {
            Some(prev) if prev != c => {
                return Err(DfaError::NotInputConsistent { state: v, first: prev, second: c });
            }
            _ => entering[v] = Some(c),
        }
    }
    let mut dedup: Vec<_> = dfa.transitions.iter().map(|&(u, v, c)| (u, c, v)).collect();
    dedup.sort_unstable();
    dedup.dedup();
    for w in dedup.windows(2) {
        if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
            return Err(DfaError::NotDeterministic { state: w[0].0, label: w[0].1 });
        }
    }
    if let Some(v) = (0..n).find(|&v| v != dfa.initial && entering[v].is_none()) {
        return Err(DfaError::Unreachable(v));
    }

    let mut used: Vec<u32> = entering.iter().flatten().copied().collect();
    used.sort_unstable();
    used.dedup();
    let mut symbols = vec![None];
    symbols.extend(used.iter().map(|&c| Some(c)));
    let remap = |c: u32| used.binary_search(&c).expect("label collected above") as Symbol + 1;

    let labels: Vec<Symbol> = (0..n).map(|v| entering[v].map_or(0, remap)).collect();
    let mut edges: Vec<(NodeId, NodeId)> = dfa.transitions.iter().map(|&(u, v, _)| (u as NodeId, v as NodeId)).collect();
    edges.push((dfa.initial as NodeId, dfa.initial as NodeId));
    let graph = LabeledGraph::from_edges(symbols.len() as u32, labels, &edges).map_err(|_| DfaError::StateOutOfRange(n))?;
    Ok(DfaGraph { graph, symbols })
}
