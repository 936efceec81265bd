//! Import of single-source single-sink DIMACS max-flow files whose arcs all
//! join neighbours of a row-major grid.
//!
//! DIMACS files carry no embedding, so one is synthesized from the grid
//! layout. Repeated arcs in the same direction are merged; an arc running
//! against an earlier one is subdivided by a new node so the graph stays
//! simple.

use std::collections::HashMap;

use thiserror::Error;

use crate::instance::Instance;
use crate::planar::{Arc, Capacity, GraphError, PlanarGraph, TerminalSets};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimacsError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("expected exactly one source and one sink")]
    Terminals,
    #[error("arcs do not fit any row-major grid layout")]
    NotGrid,
    #[error("invalid graph: {0}")]
    Graph(#[from] GraphError),
}

pub fn import_dimacs(text: &str) -> Result<Instance, DimacsError> {
    let mut n = None;
    let mut arcs: Vec<(usize, usize, Capacity)> = Vec::new();
    let (mut sources, mut sinks) = (Vec::new(), Vec::new());
    for (i, line) in text.lines().enumerate() {
        let err = |message: &str| DimacsError::Syntax { line: i + 1, message: message.to_string() };
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.first().copied() {
            None | Some("c") => {}
            Some("p") => {
                if fields.len() != 4 || fields[1] != "max" {
                    return Err(err("expected `p max <nodes> <arcs>`"));
                }
                n = Some(fields[2].parse::<usize>().map_err(|_| err("bad node count"))?);
            }
            Some(tag @ ("n" | "a")) => {
                let count = n.ok_or_else(|| err("problem line must come first"))?;
                let node = |s: &str| -> Result<usize, DimacsError> {
                    match s.parse::<usize>() {
                        Ok(v) if (1..=count).contains(&v) => Ok(v - 1),
                        _ => Err(err("bad node id")),
                    }
                };
                if tag == "n" {
                    if fields.len() != 3 {
                        return Err(err("expected `n <node> s|t`"));
                    }
                    match fields[2] {
                        "s" => sources.push(node(fields[1])?),
                        "t" => sinks.push(node(fields[1])?),
                        _ => return Err(err("node designator must be s or t")),
                    }
                } else {
                    if fields.len() != 4 {
                        return Err(err("expected `a <tail> <head> <capacity>`"));
                    }
                    let cap: Capacity = fields[3].parse().map_err(|_| err("bad capacity"))?;
                    if cap < 0 {
                        return Err(err("negative capacity"));
                    }
                    arcs.push((node(fields[1])?, node(fields[2])?, cap));
                }
            }
            Some(_) => return Err(err("unknown line type")),
        }
    }
    let n = n.ok_or(DimacsError::Syntax { line: 0, message: "missing problem line".into() })?;
    if sources.len() != 1 || sinks.len() != 1 {
        return Err(DimacsError::Terminals);
    }
    let width = (1..=n).find(|&w| arcs.iter().all(|&(u, v, _)| grid_neighbors(u, v, w))).ok_or(DimacsError::NotGrid)?;
    build(n, width, &arcs, sources, sinks)
}

fn grid_neighbors(u: usize, v: usize, w: usize) -> bool {
    let (a, b) = (u.min(v), u.max(v));
    (b == a + 1 && a / w == b / w) || b == a + w
}

fn build(n: usize, w: usize, input: &[(usize, usize, Capacity)], sources: Vec<usize>, sinks: Vec<usize>) -> Result<Instance, DimacsError> {
    // Merge parallel arcs; remember the first direction seen per pair.
    let mut by_pair: HashMap<(usize, usize), usize> = HashMap::new();
    let mut direct: Vec<(usize, usize, Capacity)> = Vec::new();
    let mut against: Vec<Option<Capacity>> = Vec::new();
    for &(u, v, c) in input {
        if u == v {
            continue;
        }
        let key = (u.min(v), u.max(v));
        match by_pair.get(&key) {
            None => {
                by_pair.insert(key, direct.len());
                direct.push((u, v, c));
                against.push(None);
            }
            Some(&i) if direct[i].0 == u => direct[i].2 += c,
            Some(&i) => *against[i].get_or_insert(0) += c,
        }
    }

    let position = |v: usize| (v / w, v % w);
    let mut neighbors: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            let (r, c) = position(v);
            let up = (r > 0).then(|| v - w);
            let right = (c + 1 < w && v + 1 < n).then_some(v + 1);
            let down = (v + w < n).then_some(v + w);
            let left = (c > 0).then(|| v - 1);
            [up, right, down, left].into_iter().flatten().filter(|&x| by_pair.contains_key(&(v.min(x), v.max(x)))).collect()
        })
        .collect();

    let mut arcs: Vec<Arc> = direct.iter().map(|&(u, v, c)| Arc::new(u, v, c)).collect();
    for (i, extra) in against.iter().enumerate() {
        let Some(c) = *extra else { continue };
        // direct arc u -> v; the opposing arc v -> u becomes v -> x -> u
        let (u, v, _) = direct[i];
        let x = neighbors.len();
        arcs.push(Arc::new(v, x, c));
        arcs.push(Arc::new(x, u, c));
        let at_u = neighbors[u].iter().position(|&y| y == v).unwrap();
        neighbors[u].insert(at_u + 1, x);
        let at_v = neighbors[v].iter().position(|&y| y == u).unwrap();
        neighbors[v].insert(at_v, x);
        neighbors.push(vec![u, v]);
    }
    let total = neighbors.len();
    let graph = PlanarGraph::from_neighbor_lists(total, arcs, &neighbors)?;
    let terminals = TerminalSets::new(total, sources, sinks)?;
    Ok(Instance { graph, terminals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::DartGraph;
    use crate::solvers::oracle_max_flow;

    #[test]
    fn square_grid() {
        let text = "c 2x2\np max 4 4\nn 1 s\nn 4 t\na 1 2 3\na 1 3 2\na 2 4 4\na 3 4 5\n";
        let inst = import_dimacs(text).unwrap();
        assert_eq!(inst.graph.node_count(), 4);
        assert_eq!(inst.graph.face_count(), 2);
    }

    #[test]
    fn anti_parallel_arcs_are_subdivided() {
        let text = "p max 4 5\nn 1 s\nn 4 t\na 1 2 3\na 2 1 6\na 1 3 2\na 2 4 4\na 3 4 5\n";
        let inst = import_dimacs(text).unwrap();
        assert_eq!(inst.graph.node_count(), 5);
        let arcs: Vec<(usize, usize, Capacity)> = text
            .lines()
            .filter(|l| l.starts_with('a'))
            .map(|l| {
                let f: Vec<usize> = l.split_whitespace().skip(1).map(|x| x.parse().unwrap()).collect();
                (f[0] - 1, f[1] - 1, f[2] as Capacity)
            })
            .collect();
        let expected = oracle_max_flow(4, &arcs, &[0], &[3]).value;
        let expanded: Vec<(usize, usize, Capacity)> = inst.graph.arcs().iter().map(|a| (a.tail, a.head, a.capacity)).collect();
        assert_eq!(oracle_max_flow(5, &expanded, &[0], &[3]).value, expected);
    }

    #[test]
    fn rejects_non_grid_and_bad_terminals() {
        assert_eq!(import_dimacs("p max 4 2\nn 1 s\nn 4 t\na 1 4 1\na 1 3 1\n").unwrap_err(), DimacsError::NotGrid);
        assert_eq!(import_dimacs("p max 2 1\nn 1 s\na 1 2 1\n").unwrap_err(), DimacsError::Terminals);
    }
}
