//! Plain-text graph files.
//!
//! ```text
//! gsa-graph v1 <n> <sigma>
//! # comment
//! <u>\t<v>\t<c>
//! ```
//!
//! One edge per line. `c` is the label of `v`; since labels live on nodes,
//! every edge into `v` must repeat the same `c`, and every node needs at
//! least one incoming edge to receive a label. Fields may be separated by
//! any whitespace. Lines starting with `#` are ignored, as are blank lines.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{GraphError, LabeledGraph, NodeId, Symbol};

pub const HEADER: &str = "gsa-graph v1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("missing header line `{HEADER} <n> <sigma>`")]
    MissingHeader,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: node {node} labeled {got}, earlier edges say {expected}")]
    InconsistentLabel { line: usize, node: NodeId, expected: Symbol, got: Symbol },
    #[error("node {0} has no incoming edge, so it has no label")]
    Unlabeled(NodeId),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, message: message.into() }
}

pub fn parse_graph(text: &str) -> Result<LabeledGraph, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| !l.starts_with('#') && !l.trim().is_empty());
    let (line, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let rest = header.strip_prefix(HEADER).ok_or(ParseError::MissingHeader)?;
    let fields: Vec<&str> = rest.split_whitespace().collect();
    let [n, sigma] = fields[..] else {
        return Err(syntax(line, "header needs <n> and <sigma>"));
    };
    let n: usize = n.parse().map_err(|_| syntax(line, format!("bad node count {n:?}")))?;
    let sigma: u32 = sigma.parse().map_err(|_| syntax(line, format!("bad alphabet size {sigma:?}")))?;

    let mut labels: Vec<Option<Symbol>> = vec![None; n];
    let mut edges = Vec::new();
    for (line, text) in lines {
        let fields: Vec<&str> = text.split_whitespace().collect();
        let [u, v, c] = fields[..] else {
            return Err(syntax(line, "expected `<u> <v> <c>`"));
        };
        let number = |s: &str| s.parse::<u32>().map_err(|_| syntax(line, format!("bad number {s:?}")));
        let (u, v, c) = (number(u)?, number(v)?, number(c)?);
        if u as usize >= n || v as usize >= n {
            return Err(GraphError::NodeOutOfRange { node: u.max(v), n }.into());
        }
        if c >= sigma {
            return Err(GraphError::LabelOutOfRange { node: v, label: c, sigma }.into());
        }
        match labels[v as usize] {
            Some(expected) if expected != c => return Err(ParseError::InconsistentLabel { line, node: v, expected, got: c }),
            _ => labels[v as usize] = Some(c),
        }
        edges.push((u, v));
    }
    let labels = labels
        .into_iter()
        .enumerate()
        .map(|(u, l)| l.ok_or(ParseError::Unlabeled(u as NodeId)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LabeledGraph::from_edges(sigma, labels, &edges)?)
}

pub fn write_graph(g: &LabeledGraph) -> String {
    let mut out = format!("{HEADER} {} {}\n", g.n(), g.sigma());
    for (u, v) in g.edges() {
        writeln!(out, "{u}\t{v}\t{}", g.label(v)).expect("writing to a String");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::example_graph;

    #[test]
    fn round_trip() {
        let g = example_graph();
        let text = write_graph(&g);
        assert!(text.starts_with("gsa-graph v1 7 4\n"));
        let h = parse_graph(&text).unwrap();
        assert_eq!(h.labels(), g.labels());
        assert!(h.edges().eq(g.edges()));
    }

    #[test]
    fn comments_and_spaces() {
        let g = parse_graph("# two-cycle\ngsa-graph v1 2 2\n# edges\n0 1 1\n\n1\t0\t0\n").unwrap();
        assert_eq!(g.labels(), &[0, 1]);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn rejects_bad_files() {
        assert_eq!(parse_graph(""), Err(ParseError::MissingHeader));
        assert_eq!(parse_graph("graph 2 2\n"), Err(ParseError::MissingHeader));
        assert!(matches!(parse_graph("gsa-graph v1 2\n"), Err(ParseError::Syntax { line: 1, .. })));
        assert!(matches!(parse_graph("gsa-graph v1 2 2\n0 1\n"), Err(ParseError::Syntax { line: 2, .. })));
        assert!(matches!(parse_graph("gsa-graph v1 2 2\n0 x 1\n"), Err(ParseError::Syntax { line: 2, .. })));
        assert_eq!(
            parse_graph("gsa-graph v1 2 2\n0 1 1\n1 1 0\n"),
            Err(ParseError::InconsistentLabel { line: 3, node: 1, expected: 1, got: 0 })
        );
        assert_eq!(parse_graph("gsa-graph v1 2 2\n0 1 1\n"), Err(ParseError::Unlabeled(0)));
        assert!(matches!(parse_graph("gsa-graph v1 2 2\n0 2 1\n"), Err(ParseError::Graph(GraphError::NodeOutOfRange { .. }))));
        assert!(matches!(parse_graph("gsa-graph v1 2 2\n0 1 5\n"), Err(ParseError::Graph(GraphError::LabelOutOfRange { .. }))));
    }
}
