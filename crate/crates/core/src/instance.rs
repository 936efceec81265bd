//! Plain-text instance format.
//!
//! ```text
//! c any comment
//! p pmf <n> <m>
//! a <tail> <head> <capacity>     (m lines)
//! r <node> <neighbor>...         (clockwise, one line per node)
//! s <node>
//! t <node>
//! ```
//!
//! Nodes are 1-indexed in the file and 0-indexed in memory.

use std::fmt::Write as _;

use thiserror::Error;

use crate::planar::{Arc, Capacity, DartGraph, GraphError, PlanarGraph, TerminalSets};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    SyntaxError { line: usize, message: String },
    #[error("invalid embedding: {0}")]
    EmbeddingInvalid(GraphError),
    #[error("node {} is both a source and a sink", node + 1)]
    TerminalOverlap { node: usize },
}

/// A graph with its terminals.
#[derive(Clone, Debug)]
pub struct Instance {
    pub graph: PlanarGraph,
    pub terminals: TerminalSets,
}

/// The contents of an instance file before any embedding validation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawInstance {
    pub node_count: usize,
    pub arcs: Vec<(usize, usize, Capacity)>,
    pub neighbors: Vec<Vec<usize>>,
    pub sources: Vec<usize>,
    pub sinks: Vec<usize>,
}

/// One connected component of a raw instance.
#[derive(Clone, Debug)]
pub struct Component {
    pub instance: Instance,
    /// Component node -> node of the full instance.
    pub nodes: Vec<usize>,
    /// Component arc -> arc of the full instance.
    pub arcs: Vec<usize>,
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    parse_raw(text)?.into_instance()
}

pub fn parse_raw(text: &str) -> Result<RawInstance, ParseError> {
    let mut raw: Option<RawInstance> = None;
    let mut declared_arcs = 0;
    let mut seen_rotation = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let err = |message: String| ParseError::SyntaxError { line: lineno, message };
        let mut fields = line.split_whitespace();
        let Some(tag) = fields.next() else { continue };
        if tag == "c" {
            continue;
        }
        let numbers: Vec<&str> = fields.collect();
        if tag == "p" {
            if raw.is_some() {
                return Err(err("duplicate problem line".into()));
            }
            if numbers.len() != 3 || numbers[0] != "pmf" {
                return Err(err("expected `p pmf <n> <m>`".into()));
            }
            let n = parse_count(numbers[1]).ok_or_else(|| err(format!("bad node count {:?}", numbers[1])))?;
            declared_arcs = parse_count(numbers[2]).ok_or_else(|| err(format!("bad arc count {:?}", numbers[2])))?;
            if n == 0 {
                return Err(err("instance needs at least one node".into()));
            }
            raw = Some(RawInstance { node_count: n, neighbors: vec![Vec::new(); n], ..Default::default() });
            seen_rotation = vec![false; n];
            continue;
        }
        let inst = raw.as_mut().ok_or_else(|| err("problem line must come first".into()))?;
        let n = inst.node_count;
        let node = |s: &str| -> Result<usize, ParseError> {
            let v: usize = s.parse().map_err(|_| err(format!("bad node id {s:?}")))?;
            if v == 0 || v > n {
                return Err(err(format!("node {v} out of range 1..={n}")));
            }
            Ok(v - 1)
        };
        match tag {
            "a" => {
                if numbers.len() != 3 {
                    return Err(err("expected `a <tail> <head> <capacity>`".into()));
                }
                let (u, v) = (node(numbers[0])?, node(numbers[1])?);
                let c: Capacity = numbers[2].parse().map_err(|_| err(format!("bad capacity {:?}", numbers[2])))?;
                if c < 0 {
                    return Err(err("capacity must be non-negative".into()));
                }
                if inst.arcs.len() == declared_arcs {
                    return Err(err(format!("more than {declared_arcs} arcs")));
                }
                inst.arcs.push((u, v, c));
            }
            "r" => {
                let (&first, rest) = numbers.split_first().ok_or_else(|| err("expected `r <node> <neighbors>`".into()))?;
                let v = node(first)?;
                if seen_rotation[v] {
                    return Err(err(format!("second rotation line for node {}", v + 1)));
                }
                seen_rotation[v] = true;
                inst.neighbors[v] = rest.iter().map(|s| node(s)).collect::<Result<_, _>>()?;
            }
            "s" | "t" => {
                if numbers.len() != 1 {
                    return Err(err(format!("expected `{tag} <node>`")));
                }
                let v = node(numbers[0])?;
                if tag == "s" {
                    inst.sources.push(v);
                } else {
                    inst.sinks.push(v);
                }
            }
            _ => return Err(err(format!("unknown line type {tag:?}"))),
        }
    }
    let raw = raw.ok_or(ParseError::SyntaxError { line: 0, message: "missing problem line".into() })?;
    if raw.arcs.len() != declared_arcs {
        return Err(ParseError::SyntaxError {
            line: text.lines().count(),
            message: format!("declared {declared_arcs} arcs, found {}", raw.arcs.len()),
        });
    }
    Ok(raw)
}

fn parse_count(s: &str) -> Option<usize> {
    s.parse().ok()
}

impl RawInstance {
    pub fn into_instance(self) -> Result<Instance, ParseError> {
        let terminals = terminal_sets(self.node_count, self.sources, self.sinks)?;
        let arcs = self.arcs.iter().map(|&(u, v, c)| Arc::new(u, v, c)).collect();
        let graph = PlanarGraph::from_neighbor_lists(self.node_count, arcs, &self.neighbors).map_err(ParseError::EmbeddingInvalid)?;
        Ok(Instance { graph, terminals })
    }

    /// Splits the instance into connected components, each validated on its
    /// own. Components are ordered by their smallest node.
    pub fn components(&self) -> Result<Vec<Component>, ParseError> {
        let n = self.node_count;
        terminal_sets(n, self.sources.clone(), self.sinks.clone())?;
        let mut label = vec![usize::MAX; n];
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v, _) in &self.arcs {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let mut count = 0;
        for root in 0..n {
            if label[root] != usize::MAX {
                continue;
            }
            label[root] = count;
            let mut stack = vec![root];
            while let Some(v) = stack.pop() {
                for &w in &adjacency[v] {
                    if label[w] == usize::MAX {
                        label[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        let mut out = Vec::with_capacity(count);
        for c in 0..count {
            let nodes: Vec<usize> = (0..n).filter(|&v| label[v] == c).collect();
            let mut local = vec![usize::MAX; n];
            for (i, &v) in nodes.iter().enumerate() {
                local[v] = i;
            }
            let arc_ids: Vec<usize> = (0..self.arcs.len()).filter(|&a| label[self.arcs[a].0] == c).collect();
            let sub = RawInstance {
                node_count: nodes.len(),
                arcs: arc_ids.iter().map(|&a| (local[self.arcs[a].0], local[self.arcs[a].1], self.arcs[a].2)).collect(),
                neighbors: nodes.iter().map(|&v| self.neighbors[v].iter().map(|&w| local[w]).collect()).collect(),
                sources: self.sources.iter().filter(|&&v| label[v] == c).map(|&v| local[v]).collect(),
                sinks: self.sinks.iter().filter(|&&v| label[v] == c).map(|&v| local[v]).collect(),
            };
            if sub.neighbors.iter().flatten().any(|&w| w == usize::MAX) {
                return Err(ParseError::EmbeddingInvalid(GraphError::InvalidRotation("rotation lists a node of another component".into())));
            }
            out.push(Component { instance: sub.into_instance()?, nodes, arcs: arc_ids });
        }
        Ok(out)
    }
}

fn terminal_sets(n: usize, sources: Vec<usize>, sinks: Vec<usize>) -> Result<TerminalSets, ParseError> {
    TerminalSets::new(n, sources, sinks).map_err(|e| match e {
        GraphError::TerminalOverlap { node } => ParseError::TerminalOverlap { node },
        other => ParseError::EmbeddingInvalid(other),
    })
}

/// Canonical text form: problem line, arcs in id order, one rotation line
/// per node, then sorted sources and sinks.
pub fn serialize_instance(instance: &Instance) -> String {
    let g = &instance.graph;
    let mut out = String::new();
    writeln!(out, "p pmf {} {}", g.node_count(), g.arc_count()).unwrap();
    for a in g.arcs() {
        writeln!(out, "a {} {} {}", a.tail + 1, a.head + 1, a.capacity).unwrap();
    }
    for v in 0..g.node_count() {
        out.push_str(&format!("r {}", v + 1));
        for &d in g.rotation(v) {
            write!(out, " {}", g.head(d) + 1).unwrap();
        }
        out.push('\n');
    }
    for &s in instance.terminals.sources() {
        writeln!(out, "s {}", s + 1).unwrap();
    }
    for &t in instance.terminals.sinks() {
        writeln!(out, "t {}", t + 1).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "p pmf 2 1\na 1 2 7\nr 1 2\nr 2 1\ns 1\nt 2\n";

    #[test]
    fn minimal_file() {
        let inst = parse_instance(MINIMAL).unwrap();
        assert_eq!(inst.graph.node_count(), 2);
        assert_eq!(inst.terminals.sources(), &[0]);
        assert_eq!(serialize_instance(&inst), MINIMAL);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "c hello\n\np pmf 2 1\nc mid\na 1 2 7\nr 1 2\nr 2 1\ns 1\nt 2\n";
        assert_eq!(serialize_instance(&parse_instance(text).unwrap()), MINIMAL);
    }

    #[test]
    fn overlap() {
        let text = "p pmf 2 1\na 1 2 7\nr 1 2\nr 2 1\ns 1\nt 1\n";
        assert_eq!(parse_instance(text).unwrap_err(), ParseError::TerminalOverlap { node: 0 });
    }

    #[test]
    fn rotation_with_non_neighbor() {
        let text = "p pmf 3 2\na 1 2 1\na 2 3 1\nr 1 3\nr 2 1 3\nr 3 2\n";
        assert!(matches!(parse_instance(text), Err(ParseError::EmbeddingInvalid(_))));
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let cases = [
            ("a 1 2 3\n", 1),
            ("p pmf 2 1\na 1 2 x\n", 2),
            ("p pmf 2 1\na 1 3 1\n", 2),
            ("p pmf 2 1\nq\n", 2),
            ("p pmf 2 1\na 1 2 -1\n", 2),
            ("p pmf 2 2\na 1 2 1\nr 1 2\nr 2 1\n", 4),
        ];
        for (text, line) in cases {
            match parse_instance(text) {
                Err(ParseError::SyntaxError { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn disconnected_is_rejected_but_splits() {
        let text = "p pmf 4 2\na 1 2 3\na 3 4 5\nr 1 2\nr 2 1\nr 3 4\nr 4 3\ns 1\ns 3\nt 2\nt 4\n";
        assert_eq!(parse_instance(text).unwrap_err(), ParseError::EmbeddingInvalid(GraphError::Disconnected));
        let parts = parse_raw(text).unwrap().components().unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[1].nodes, vec![2, 3]);
        assert_eq!(parts[1].arcs, vec![1]);
        assert_eq!(parts[1].instance.terminals.sinks(), &[1]);
    }
}
