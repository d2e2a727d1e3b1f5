//! Lifting a partition of one class back to the whole node set.
//!
//! Nodes are bucketed by `(label, class)`. Buckets holding the recursed
//! class and class two are known up front; the remaining class is built by
//! walking the buckets in order and pushing each group's successors into new
//! groups. Walking upward builds class one, walking downward builds class
//! three.
//!
//! The engine is written over "keys" with an [`Extremum`] role each, so that
//! minima and maxima can be merged in one pass. For one role the order of
//! the walk lets the first hit settle a key; for the other role a key can be
//! hit several times, and the leading-run height `ψ` decides which hit is
//! provisional.

use thiserror::Error;

use crate::classify::{Tau, TauVector};
use crate::graph::{LabeledGraph, NodeId, Symbol, NO_NODE};
use crate::reduce::Direction;

/// Whether a key stands for the minimum or the maximum of its node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Extremum {
    Min,
    Max,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("node {0} is outside the universe")]
    OutOfRange(NodeId),
    #[error("node {0} appears twice")]
    Duplicate(NodeId),
    #[error("group {0} is empty")]
    EmptyGroup(usize),
}

/// An ordered partition of a subset of `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    groups: Vec<Vec<NodeId>>,
    rank: Vec<u32>,
}

impl Partition {
    /// Groups must be non-empty and disjoint; each is stored sorted.
    pub fn new(n: usize, mut groups: Vec<Vec<NodeId>>) -> Result<Self, PartitionError> {
        let mut rank = vec![NO_NODE; n];
        for (i, group) in groups.iter_mut().enumerate() {
            if group.is_empty() {
                return Err(PartitionError::EmptyGroup(i));
            }
            group.sort_unstable();
            for &u in group.iter() {
                let slot = rank.get_mut(u as usize).ok_or(PartitionError::OutOfRange(u))?;
                if *slot != NO_NODE {
                    return Err(PartitionError::Duplicate(u));
                }
                *slot = i as u32;
            }
        }
        Ok(Partition { groups, rank })
    }

    pub fn empty(n: usize) -> Self {
        Partition { groups: Vec::new(), rank: vec![NO_NODE; n] }
    }

    pub fn groups(&self) -> &[Vec<NodeId>] {
        &self.groups
    }

    pub fn into_groups(self) -> Vec<Vec<NodeId>> {
        self.groups
    }

    /// Number of groups.
    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Size of the universe the partition lives in.
    pub fn universe(&self) -> usize {
        self.rank.len()
    }

    /// Index of the group holding `u`, if any.
    pub fn rank(&self, u: NodeId) -> Option<usize> {
        self.rank.get(u as usize).filter(|&&r| r != NO_NODE).map(|&r| r as usize)
    }

    pub fn node_count(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    /// The same groups in the opposite order.
    pub fn reversed(&self) -> Partition {
        let groups: Vec<_> = self.groups.iter().rev().cloned().collect();
        let len = groups.len() as u32;
        let rank = self.rank.iter().map(|&r| if r == NO_NODE { r } else { len - 1 - r }).collect();
        Partition { groups, rank }
    }
}

/// Leading-run heights, zero where undefined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiVector {
    psi: Vec<u32>,
}

impl PsiVector {
    pub fn get(&self, u: NodeId) -> Option<u32> {
        match self.psi[u as usize] {
            0 => None,
            h => Some(h),
        }
    }

    pub fn len(&self) -> usize {
        self.psi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.psi.is_empty()
    }

    fn raw(&self, u: NodeId) -> u32 {
        self.psi[u as usize]
    }
}

/// Counters collected while merging.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MergeStats {
    /// Groups created while walking the buckets.
    pub created: usize,
    /// Keys moved out of a provisional group.
    pub moved: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MergeError {
    #[error("input of length {got} does not match {expected} nodes")]
    LengthMismatch { expected: usize, got: usize },
    #[error("node {node} in the sub-partition is not of class {expected:?}")]
    WrongClass { node: NodeId, expected: Tau },
    #[error("sub-partition group {0} mixes labels")]
    MixedLabels(usize),
    #[error("sub-partition misses {0} node(s) of the recursed class")]
    Incomplete(usize),
    #[error("node {0} left a group that was already emitted")]
    Reopened(NodeId),
    #[error("node {0} was never placed")]
    Unplaced(NodeId),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

/// Groups class-two nodes by label, in label order.
pub fn seed_type2_partition(g: &LabeledGraph, tau: &TauVector) -> Partition {
    let mut by_label: Vec<Vec<NodeId>> = vec![Vec::new(); g.sigma() as usize];
    for u in g.nodes() {
        if tau[u] == Tau::Two {
            by_label[g.label(u) as usize].push(u);
        }
    }
    let groups = by_label.into_iter().filter(|b| !b.is_empty()).collect();
    Partition::new(g.n(), groups).expect("label buckets are disjoint")
}

/// Leading-run height of every class-three node.
pub fn compute_psi(g: &LabeledGraph, tau: &TauVector) -> PsiVector {
    compute_psi_where(g, |u| tau[u] == Tau::Three)
}

/// `ψ(v) = 1 + max ψ(p)` over equally labeled predecessors `p` inside the
/// class, or 1 when there are none. Within a valid class the equal-label
/// backward edges form a forest, so this is a height computation.
pub(crate) fn compute_psi_where(g: &LabeledGraph, in_class: impl Fn(NodeId) -> bool) -> PsiVector {
    const PENDING: u32 = u32::MAX;
    let mut psi = vec![0u32; g.n()];
    let mut stack: Vec<(NodeId, usize)> = Vec::new();
    let chained = |v: NodeId, p: NodeId| g.label(p) == g.label(v) && in_class(p);
    for root in g.nodes() {
        if !in_class(root) || psi[root as usize] != 0 {
            continue;
        }
        psi[root as usize] = PENDING;
        stack.push((root, 0));
        while let Some(top) = stack.last_mut() {
            let (v, next) = (top.0, top.1);
            let preds = g.preds(v);
            if let Some(&p) = preds.get(next) {
                top.1 += 1;
                if chained(v, p) && psi[p as usize] == 0 {
                    psi[p as usize] = PENDING;
                    stack.push((p, 0));
                }
                continue;
            }
            // a pending predecessor means a cycle, impossible in a valid class
            let below = preds
                .iter()
                .filter(|&&p| chained(v, p) && psi[p as usize] != PENDING)
                .map(|&p| psi[p as usize])
                .max()
                .unwrap_or(0);
            psi[v as usize] = below + 1;
            stack.pop();
        }
    }
    PsiVector { psi }
}

/// Min-partition of all nodes from the min-partition of the class-three
/// nodes.
pub fn merge_forward(g: &LabeledGraph, tau: &TauVector, b3: &Partition) -> Result<Partition, MergeError> {
    let roles = vec![Extremum::Min; g.n()];
    let psi = PsiVector { psi: vec![0; g.n()] };
    let input = MergeInput { g, roles: &roles, tau: tau.as_slice(), psi: &psi, sub: b3.groups(), direction: Direction::Type3 };
    let (groups, _) = merge(&input)?;
    Ok(Partition::new(g.n(), groups)?)
}

/// Min-partition of all nodes from the min-partition of the class-one
/// nodes.
pub fn merge_backward(g: &LabeledGraph, tau: &TauVector, psi: &PsiVector, b1: &Partition) -> Result<Partition, MergeError> {
    merge_backward_with_stats(g, tau, psi, b1).map(|(p, _)| p)
}

pub fn merge_backward_with_stats(g: &LabeledGraph, tau: &TauVector, psi: &PsiVector, b1: &Partition) -> Result<(Partition, MergeStats), MergeError> {
    let roles = vec![Extremum::Min; g.n()];
    let input = MergeInput { g, roles: &roles, tau: tau.as_slice(), psi, sub: b1.groups(), direction: Direction::Type1 };
    let (groups, stats) = merge(&input)?;
    Ok((Partition::new(g.n(), groups)?, stats))
}

/// Everything the engine reads. Keys are the nodes of `g`.
pub(crate) struct MergeInput<'a> {
    pub g: &'a LabeledGraph,
    pub roles: &'a [Extremum],
    /// Class of each key's string under the original order.
    pub tau: &'a [Tau],
    /// Heights of the keys rebuilt under the hit-several-times role.
    pub psi: &'a PsiVector,
    /// Ordered groups of the recursed class, smallest first.
    pub sub: &'a [Vec<NodeId>],
    pub direction: Direction,
}

/// Groups created so far; `current` tombstones stale memberships.
struct Workspace {
    members: Vec<Vec<NodeId>>,
    group_psi: Vec<u32>,
    emitted: Vec<bool>,
    current: Vec<u32>,
    buckets: Vec<Vec<u32>>,
}

impl Workspace {
    fn place(&mut self, group: Vec<NodeId>, psi: u32, bucket: usize) {
        let gid = self.members.len() as u32;
        for &u in &group {
            self.current[u as usize] = gid;
        }
        self.buckets[bucket].push(gid);
        self.members.push(group);
        self.group_psi.push(psi);
        self.emitted.push(false);
    }
}

/// Runs the bucket walk and returns the ordered groups, smallest first.
pub(crate) fn merge(input: &MergeInput<'_>) -> Result<(Vec<Vec<NodeId>>, MergeStats), MergeError> {
    let g = input.g;
    let n = g.n();
    for len in [input.roles.len(), input.tau.len(), input.psi.len()] {
        if len != n {
            return Err(MergeError::LengthMismatch { expected: n, got: len });
        }
    }
    let forward = input.direction == Direction::Type3;
    let recursed = input.direction.recursed();
    let built = input.direction.rebuilt();
    // walking upward settles minima on first hit, walking downward maxima
    let settles_first = if forward { Extremum::Min } else { Extremum::Max };
    let bucket = |c: Symbol, t: Tau| c as usize * 3 + (t.value() as usize - 1);

    let mut ws = Workspace {
        members: Vec::new(),
        group_psi: Vec::new(),
        emitted: Vec::new(),
        current: vec![NO_NODE; n],
        buckets: vec![Vec::new(); g.sigma() as usize * 3],
    };

    // the walk visits each bucket in its own direction
    let mut sub_order: Vec<usize> = (0..input.sub.len()).collect();
    if !forward {
        sub_order.reverse();
    }
    let mut placed = 0;
    for i in sub_order {
        let group = &input.sub[i];
        for &u in group {
            if u as usize >= n || input.tau[u as usize] != recursed {
                return Err(MergeError::WrongClass { node: u, expected: recursed });
            }
            if ws.current[u as usize] != NO_NODE {
                return Err(PartitionError::Duplicate(u).into());
            }
        }
        let Some(&first) = group.first() else {
            return Err(PartitionError::EmptyGroup(i).into());
        };
        if group.iter().any(|&u| g.label(u) != g.label(first)) {
            return Err(MergeError::MixedLabels(i));
        }
        placed += group.len();
        ws.place(group.clone(), 0, bucket(g.label(first), recursed));
    }
    let expected = input.tau.iter().filter(|&&t| t == recursed).count();
    if placed != expected {
        return Err(MergeError::Incomplete(expected - placed));
    }
    let mut constant: Vec<Vec<NodeId>> = vec![Vec::new(); g.sigma() as usize];
    for u in g.nodes() {
        if input.tau[u as usize] == Tau::Two {
            constant[g.label(u) as usize].push(u);
        }
    }
    for (c, group) in constant.into_iter().enumerate() {
        if !group.is_empty() {
            ws.place(group, 0, bucket(c as Symbol, Tau::Two));
        }
    }

    let labels: Vec<Symbol> = if forward { (0..g.sigma()).collect() } else { (0..g.sigma()).rev().collect() };
    let classes = if forward { [Tau::One, Tau::Two, Tau::Three] } else { [Tau::Three, Tau::Two, Tau::One] };
    let mut settled = vec![false; n];
    let mut stamp = vec![0u32; n];
    let mut epoch = 0u32;
    let mut pending: Vec<Vec<NodeId>> = vec![Vec::new(); g.sigma() as usize];
    let mut touched: Vec<Symbol> = Vec::new();
    let mut stats = MergeStats::default();
    let mut out: Vec<Vec<NodeId>> = Vec::new();

    for &c in &labels {
        for &t in &classes {
            let b = bucket(c, t);
            let mut idx = 0;
            while idx < ws.buckets[b].len() {
                let gid = ws.buckets[b][idx];
                idx += 1;
                let live: Vec<NodeId> = ws.members[gid as usize].iter().copied().filter(|&u| ws.current[u as usize] == gid).collect();
                if live.is_empty() {
                    continue;
                }
                ws.emitted[gid as usize] = true;
                epoch += 1;
                let here_psi = ws.group_psi[gid as usize];
                for &u in &live {
                    for &v in g.succs(u) {
                        let vi = v as usize;
                        if input.tau[vi] != built || stamp[vi] == epoch {
                            continue;
                        }
                        let accept = if input.roles[vi] == settles_first {
                            !settled[vi]
                        } else {
                            let target = if g.label(v) == c { here_psi + 1 } else { 1 };
                            input.psi.raw(v) == target
                        };
                        if !accept {
                            continue;
                        }
                        stamp[vi] = epoch;
                        settled[vi] = true;
                        let k = g.label(v);
                        if pending[k as usize].is_empty() {
                            touched.push(k);
                        }
                        pending[k as usize].push(v);
                    }
                }
                for k in touched.drain(..) {
                    let group = std::mem::take(&mut pending[k as usize]);
                    for &v in &group {
                        let old = ws.current[v as usize];
                        if old != NO_NODE {
                            if ws.emitted[old as usize] {
                                return Err(MergeError::Reopened(v));
                            }
                            stats.moved += 1;
                        }
                    }
                    let psi = if k == c { here_psi + 1 } else { 1 };
                    stats.created += 1;
                    ws.place(group, psi, bucket(k, built));
                }
                out.push(live);
            }
        }
    }

    let covered: usize = out.iter().map(Vec::len).sum();
    if covered != n {
        let missing = (0..n).find(|&u| ws.current[u] == NO_NODE || !ws.emitted[ws.current[u] as usize]).unwrap_or(0);
        return Err(MergeError::Unplaced(missing as NodeId));
    }
    if !forward {
        out.reverse();
    }
    Ok((out, stats))
}
