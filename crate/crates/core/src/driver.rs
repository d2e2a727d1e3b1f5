//! The recursive algorithm: classify, reduce the smaller class, recurse,
//! merge back.
//!
//! Every level works on "keys": nodes of the level's graph, each asking for
//! its minimum or its maximum. A maximum is a minimum under the reversed
//! alphabet, so each level builds an effective graph in which the labels of
//! maximum keys are flipped. Edges never join keys of different roles, so
//! the flipped graph stays deterministic.

use std::borrow::Cow;

use thiserror::Error;

use crate::classify::{compute_tau, Tau};
use crate::graph::{LabeledGraph, NodeId, ValidationReport};
use crate::merge::{compute_psi_where, merge, Extremum, MergeError, MergeInput, Partition, PsiVector};
use crate::reduce::{build_reduced_graph, Direction, Explorer, ReduceError, ReducedGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DriverError {
    #[error("invalid graph:\n{0}")]
    Invalid(ValidationReport),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error(transparent)]
    Merge(#[from] MergeError),
}

/// One `(node, role)` entry of a min/max-partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MinMaxKey {
    pub node: NodeId,
    pub kind: Extremum,
}

/// Ordered groups of keys with equal strings, smallest first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinMaxPartition {
    groups: Vec<Vec<MinMaxKey>>,
}

impl MinMaxPartition {
    /// Groups are stored sorted; no other checks.
    pub fn new(mut groups: Vec<Vec<MinMaxKey>>) -> Self {
        groups.iter_mut().for_each(|g| g.sort_unstable());
        MinMaxPartition { groups }
    }

    pub fn groups(&self) -> &[Vec<MinMaxKey>] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// The partition induced on keys of one kind.
    pub fn restrict(&self, n: usize, kind: Extremum) -> Partition {
        let groups = self
            .groups
            .iter()
            .map(|g| g.iter().filter(|k| k.kind == kind).map(|k| k.node).collect::<Vec<_>>())
            .filter(|g| !g.is_empty())
            .collect();
        Partition::new(n, groups).expect("keys of one kind are distinct nodes")
    }
}

/// What happened at one recursion level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelStats {
    pub nodes: usize,
    pub edges: usize,
    /// Key counts per class under the original order.
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
    pub direction: Direction,
    /// Keys passed down to the next level.
    pub recursed: usize,
    /// Largest predecessor scan of one class-three exploration on the
    /// trimmed graph.
    pub max_type3_work: usize,
    /// Largest predecessor scan of one class-one exploration.
    pub max_type1_work: usize,
}

pub fn min_partition(g: &LabeledGraph) -> Result<Partition, DriverError> {
    min_partition_with_stats(g).map(|(p, _)| p)
}

pub fn min_partition_with_stats(g: &LabeledGraph) -> Result<(Partition, Vec<LevelStats>), DriverError> {
    check(g)?;
    let roles = vec![Extremum::Min; g.n()];
    let (groups, stats) = solve(Cow::Borrowed(g), roles)?;
    Ok((Partition::new(g.n(), groups).map_err(MergeError::from)?, stats))
}

/// Groups by maximum, smallest maximum first.
pub fn max_partition(g: &LabeledGraph) -> Result<Partition, DriverError> {
    // the maximum order is the minimum order under the reversed alphabet, read backward
    Ok(min_partition(&g.transpose_alphabet())?.reversed())
}

pub fn minmax_partition(g: &LabeledGraph) -> Result<MinMaxPartition, DriverError> {
    minmax_partition_with_stats(g).map(|(p, _)| p)
}

pub fn minmax_partition_with_stats(g: &LabeledGraph) -> Result<(MinMaxPartition, Vec<LevelStats>), DriverError> {
    check(g)?;
    let n = g.n();
    let mut roles = vec![Extremum::Min; n];
    roles.resize(2 * n, Extremum::Max);
    let (groups, stats) = solve(Cow::Owned(g.doubled()), roles)?;
    let key = |k: NodeId| {
        if (k as usize) < n {
            MinMaxKey { node: k, kind: Extremum::Min }
        } else {
            MinMaxKey { node: k - n as NodeId, kind: Extremum::Max }
        }
    };
    let groups = groups.into_iter().map(|g| g.into_iter().map(key).collect()).collect();
    Ok((MinMaxPartition::new(groups), stats))
}

/// The first reduction step of [`min_partition`], or `None` when the graph
/// is handled without recursing.
pub fn first_reduction(g: &LabeledGraph) -> Result<Option<(Direction, ReducedGraph)>, DriverError> {
    check(g)?;
    let level = prepare(g, &vec![Extremum::Min; g.n()])?;
    Ok(level.reduced.map(|r| (level.direction, r)))
}

fn check(g: &LabeledGraph) -> Result<(), DriverError> {
    let report = g.validate();
    if report.is_ok() {
        Ok(())
    } else {
        Err(DriverError::Invalid(report))
    }
}

/// A level waiting for the partition of its recursed keys.
struct Frame<'a> {
    graph: Cow<'a, LabeledGraph>,
    roles: Vec<Extremum>,
    tau: Vec<Tau>,
    psi: PsiVector,
    direction: Direction,
    to_parent: Vec<NodeId>,
}

/// Descends level by level, then merges on the way back up. Returns the
/// ordered groups of keys of `graph`.
fn solve<'a>(graph: Cow<'a, LabeledGraph>, roles: Vec<Extremum>) -> Result<(Vec<Vec<NodeId>>, Vec<LevelStats>), DriverError> {
    let mut frames: Vec<Frame<'a>> = Vec::new();
    let mut stats = Vec::new();
    let (mut graph, mut roles) = (graph, roles);
    loop {
        let level = prepare(&graph, &roles)?;
        stats.push(level.stats);
        let next = level.reduced.map(|red| {
            let child_roles: Vec<Extremum> = red.to_parent.iter().map(|&p| roles[p as usize]).collect();
            (red.graph, child_roles, red.to_parent)
        });
        let (child, to_parent) = match next {
            Some((g, r, map)) => (Some((g, r)), map),
            None => (None, Vec::new()),
        };
        frames.push(Frame { graph, roles, tau: level.tau, psi: level.psi, direction: level.direction, to_parent });
        match child {
            Some((g, r)) => {
                graph = Cow::Owned(g);
                roles = r;
            }
            None => break,
        }
    }

    let mut sub: Vec<Vec<NodeId>> = Vec::new();
    while let Some(frame) = frames.pop() {
        let lifted: Vec<Vec<NodeId>> = sub.iter().map(|grp| grp.iter().map(|&x| frame.to_parent[x as usize]).collect()).collect();
        let input = MergeInput {
            g: &frame.graph,
            roles: &frame.roles,
            tau: &frame.tau,
            psi: &frame.psi,
            sub: &lifted,
            direction: frame.direction,
        };
        sub = merge(&input)?.0;
    }
    Ok((sub, stats))
}

struct Prepared {
    tau: Vec<Tau>,
    psi: PsiVector,
    direction: Direction,
    reduced: Option<ReducedGraph>,
    stats: LevelStats,
}

fn prepare(g: &LabeledGraph, roles: &[Extremum]) -> Result<Prepared, DriverError> {
    let n = g.n();
    let top = g.sigma().saturating_sub(1);
    let eff: Cow<'_, LabeledGraph> = if roles.contains(&Extremum::Max) {
        let labels = g.nodes().map(|u| if roles[u as usize] == Extremum::Max { top - g.label(u) } else { g.label(u) }).collect();
        Cow::Owned(g.relabeled(labels))
    } else {
        Cow::Borrowed(g)
    };
    let eff_tau = compute_tau(&eff);
    let tau: Vec<Tau> = eff_tau.iter().zip(roles).map(|(t, &r)| if r == Extremum::Max { t.flip() } else { t }).collect();
    let count = |c: Tau| tau.iter().filter(|&&t| t == c).count();
    let (n1, n2, n3) = (count(Tau::One), count(Tau::Two), count(Tau::Three));
    let direction = if n3 <= n1 { Direction::Type3 } else { Direction::Type1 };

    let built = direction.rebuilt();
    let psi_role = match direction {
        Direction::Type3 => Extremum::Max,
        Direction::Type1 => Extremum::Min,
    };
    let psi = compute_psi_where(g, |k| roles[k as usize] == psi_role && tau[k as usize] == built);

    let recursed: Vec<NodeId> = g.nodes().filter(|&k| tau[k as usize] == direction.recursed()).collect();
    let mut stats = LevelStats {
        nodes: n,
        edges: g.edge_count(),
        n1,
        n2,
        n3,
        direction,
        recursed: recursed.len(),
        max_type3_work: 0,
        max_type1_work: 0,
    };
    if recursed.is_empty() {
        return Ok(Prepared { tau, psi, direction, reduced: None, stats });
    }

    let trimmed = recursed.iter().any(|&k| eff_tau[k] == Tau::Three).then(|| eff.trim(&eff_tau));
    let mut explorer = Explorer::new(n);
    let mut records = Vec::with_capacity(recursed.len());
    for &k in &recursed {
        let mut record = match (eff_tau[k], &trimmed) {
            (Tau::Three, Some(t)) => {
                let r = explorer.explore_type3(t, &eff_tau, k)?;
                stats.max_type3_work = stats.max_type3_work.max(r.edge_work);
                r
            }
            _ => {
                let r = explorer.explore_type1(&eff, &eff_tau, k)?;
                stats.max_type1_work = stats.max_type1_work.max(r.edge_work);
                r
            }
        };
        if roles[k as usize] == Extremum::Max {
            record.gamma.iter_mut().for_each(|c| *c = top - *c);
            record.t = record.t.flip();
        }
        records.push(record);
    }
    drop(trimmed);
    let reduced = build_reduced_graph(g, &records, direction)?;
    Ok(Prepared { tau, psi, direction, reduced: Some(reduced), stats })
}
