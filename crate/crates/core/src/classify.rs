//! Classification of node minima.
//!
//! Writing `min_u = a·rest`, a node is [`Tau::One`] when `rest < min_u`,
//! [`Tau::Two`] when `min_u = a^ω` and [`Tau::Three`] when `rest > min_u`.
//! All three classes are found in `O(|E|)` time.

use std::collections::VecDeque;
use std::ops::Index;

use crate::graph::{LabeledGraph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tau {
    One = 1,
    Two = 2,
    Three = 3,
}

impl Tau {
    pub fn value(self) -> u8 {
        self as u8
    }

    /// The class of the same string under the reversed alphabet order.
    pub fn flip(self) -> Tau {
        match self {
            Tau::One => Tau::Three,
            Tau::Two => Tau::Two,
            Tau::Three => Tau::One,
        }
    }

    pub fn from_value(v: u8) -> Option<Tau> {
        match v {
            1 => Some(Tau::One),
            2 => Some(Tau::Two),
            3 => Some(Tau::Three),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauVector {
    tau: Vec<Tau>,
}

impl TauVector {
    pub fn new(tau: Vec<Tau>) -> Self {
        TauVector { tau }
    }

    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Tau> + '_ {
        self.tau.iter().copied()
    }

    pub fn as_slice(&self) -> &[Tau] {
        &self.tau
    }

    pub fn count(&self, t: Tau) -> usize {
        self.tau.iter().filter(|&&x| x == t).count()
    }

    /// Nodes of class `t`, in increasing id order.
    pub fn nodes_of(&self, t: Tau) -> Vec<NodeId> {
        (0..self.tau.len() as NodeId).filter(|&u| self[u] == t).collect()
    }
}

impl Index<NodeId> for TauVector {
    type Output = Tau;

    #[inline]
    fn index(&self, u: NodeId) -> &Tau {
        &self.tau[u as usize]
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Search {
    Unknown,
    OnPath,
    Constant,
    Increasing,
}

/// Computes the class of every node's minimum.
pub fn compute_tau(g: &LabeledGraph) -> TauVector {
    let n = g.n();
    let mut decreasing = vec![false; n];

    // Seed: an edge into a strictly larger label forces class one; then the
    // class spreads forward along equally labeled edges.
    let mut queue = VecDeque::new();
    for (u, v) in g.edges() {
        if g.label(u) < g.label(v) && !decreasing[v as usize] {
            decreasing[v as usize] = true;
            queue.push_back(v);
        }
    }
    while let Some(u) = queue.pop_front() {
        // determinism: at most one successor carries the same label
        if let Some(&v) = g.succs(u).iter().find(|&&v| g.label(v) == g.label(u)) {
            if !decreasing[v as usize] {
                decreasing[v as usize] = true;
                queue.push_back(v);
            }
        }
    }

    // Among the rest, class two means an equally labeled backward walk
    // reaches a cycle. Depth-first search with memoized verdicts; a node is
    // settled as soon as one of its equal-label predecessors is.
    let mut state: Vec<Search> = decreasing.iter().map(|&d| if d { Search::Increasing } else { Search::Unknown }).collect();
    let mut stack: Vec<(NodeId, usize)> = Vec::new();
    for root in g.nodes() {
        if state[root as usize] != Search::Unknown {
            continue;
        }
        state[root as usize] = Search::OnPath;
        stack.push((root, 0));
        let mut found = false;
        while let Some(&mut (u, ref mut next)) = stack.last_mut() {
            if found {
                state[u as usize] = Search::Constant;
                stack.pop();
                continue;
            }
            let preds = g.preds(u);
            let mut descend = None;
            while *next < preds.len() {
                let p = preds[*next];
                *next += 1;
                if g.label(p) != g.label(u) || decreasing[p as usize] {
                    continue;
                }
                match state[p as usize] {
                    Search::OnPath | Search::Constant => {
                        found = true;
                        break;
                    }
                    Search::Increasing => {}
                    Search::Unknown => {
                        descend = Some(p);
                        break;
                    }
                }
            }
            if found {
                continue;
            }
            match descend {
                Some(p) => {
                    state[p as usize] = Search::OnPath;
                    stack.push((p, 0));
                }
                None => {
                    state[u as usize] = Search::Increasing;
                    stack.pop();
                }
            }
        }
    }

    let tau = (0..n)
        .map(|u| {
            if decreasing[u] {
                Tau::One
            } else if state[u] == Search::Constant {
                Tau::Two
            } else {
                Tau::Three
            }
        })
        .collect();
    TauVector { tau }
}
