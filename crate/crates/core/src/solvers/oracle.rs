//! Reference max-flow used only to check results. It shares no code with the
//! backends and works on any directed graph.

use std::collections::VecDeque;

use crate::flow::FlowAssignment;
use crate::planar::{Capacity, DartGraph};

#[derive(Clone, Copy)]
struct Edge {
    to: usize,
    rev: usize,
    cap: Capacity,
}

struct Network {
    adj: Vec<Vec<Edge>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Network {
    fn new(n: usize) -> Self {
        Network { adj: vec![Vec::new(); n], level: vec![0; n], iter: vec![0; n] }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: Capacity) -> (usize, usize) {
        let fi = self.adj[from].len();
        let ti = self.adj[to].len() + usize::from(from == to);
        self.adj[from].push(Edge { to, rev: ti, cap });
        self.adj[to].push(Edge { to: from, rev: fi, cap: 0 });
        (from, fi)
    }

    fn bfs(&mut self, s: usize) {
        self.level.fill(-1);
        self.level[s] = 0;
        let mut q = VecDeque::new();
        q.push_back(s);
        while let Some(v) = q.pop_front() {
            for e in &self.adj[v] {
                if e.cap > 0 && self.level[e.to] < 0 {
                    self.level[e.to] = self.level[v] + 1;
                    q.push_back(e.to);
                }
            }
        }
    }

    fn dfs(&mut self, v: usize, t: usize, f: Capacity) -> Capacity {
        if v == t {
            return f;
        }
        while self.iter[v] < self.adj[v].len() {
            let e = self.adj[v][self.iter[v]];
            if e.cap > 0 && self.level[v] < self.level[e.to] {
                let d = self.dfs(e.to, t, f.min(e.cap));
                if d > 0 {
                    self.adj[v][self.iter[v]].cap -= d;
                    self.adj[e.to][e.rev].cap += d;
                    return d;
                }
            }
            self.iter[v] += 1;
        }
        0
    }

    fn run(&mut self, s: usize, t: usize) -> Capacity {
        let mut flow = 0;
        loop {
            self.bfs(s);
            if self.level[t] < 0 {
                return flow;
            }
            self.iter.fill(0);
            loop {
                let f = self.dfs(s, t, Capacity::MAX);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
    }
}

/// Max-flow value with a witness flow and a minimum cut.
#[derive(Clone, Debug)]
pub struct OracleResult {
    pub value: Capacity,
    /// Flow on each input arc, `0 <= flow <= capacity`.
    pub flow: Vec<Capacity>,
    /// Nodes on the source side of a minimum cut.
    pub source_side: Vec<bool>,
}

impl OracleResult {
    /// Total capacity of arcs leaving the source side.
    pub fn cut_capacity(&self, arcs: &[(usize, usize, Capacity)]) -> Capacity {
        arcs.iter()
            .filter(|&&(u, v, _)| self.source_side[u] && !self.source_side[v])
            .map(|&(_, _, c)| c)
            .sum()
    }

    /// Checks that the witness flow is feasible with the reported value and
    /// that the cut separates the terminals with capacity equal to the value.
    pub fn certify(&self, node_count: usize, arcs: &[(usize, usize, Capacity)], sources: &[usize], sinks: &[usize]) -> bool {
        let mut net = vec![0 as Capacity; node_count];
        for (&(u, v, c), &x) in arcs.iter().zip(&self.flow) {
            if x < 0 || x > c {
                return false;
            }
            net[v] += x;
            net[u] -= x;
        }
        let mut terminal = vec![false; node_count];
        for &v in sources.iter().chain(sinks) {
            terminal[v] = true;
        }
        let conserving = (0..node_count).all(|v| terminal[v] || net[v] == 0);
        let value: Capacity = sinks.iter().map(|&t| net[t]).sum();
        let separates = sources.iter().all(|&s| self.source_side[s]) && sinks.iter().all(|&t| !self.source_side[t]);
        conserving && separates && value == self.value && self.cut_capacity(arcs) == self.value
    }
}

/// Exact multiple-source multiple-sink max flow on an arbitrary directed graph
/// via a super source and super sink.
pub fn oracle_max_flow(node_count: usize, arcs: &[(usize, usize, Capacity)], sources: &[usize], sinks: &[usize]) -> OracleResult {
    let s = node_count;
    let t = node_count + 1;
    let mut net = Network::new(node_count + 2);
    let big = arcs.iter().fold(1 as Capacity, |acc, &(_, _, c)| acc.saturating_add(c));
    let handles: Vec<(usize, usize)> = arcs.iter().map(|&(u, v, c)| net.add_edge(u, v, c)).collect();
    for &x in sources {
        net.add_edge(s, x, big);
    }
    for &x in sinks {
        net.add_edge(x, t, big);
    }
    let value = net.run(s, t);
    let flow = handles.iter().zip(arcs).map(|(&(v, i), &(_, _, c))| c - net.adj[v][i].cap).collect();
    net.bfs(s);
    let source_side = (0..node_count).map(|v| net.level[v] >= 0).collect();
    OracleResult { value, flow, source_side }
}

/// Oracle on a dart graph: each dart with positive capacity becomes an arc.
/// Returns the result over that expanded arc list and the witness folded back
/// into a flow assignment on `g`.
pub fn oracle_for_graph<G: DartGraph + ?Sized>(g: &G, sources: &[usize], sinks: &[usize]) -> (OracleResult, FlowAssignment) {
    let mut arcs = Vec::with_capacity(g.arc_count());
    let mut owner = Vec::with_capacity(g.arc_count());
    for (i, a) in g.arcs().iter().enumerate() {
        arcs.push((a.tail, a.head, a.capacity));
        owner.push((i, 1));
        if a.reverse_capacity > 0 {
            arcs.push((a.head, a.tail, a.reverse_capacity));
            owner.push((i, -1));
        }
    }
    let result = oracle_max_flow(g.node_count(), &arcs, sources, sinks);
    let mut values = vec![0; g.arc_count()];
    for (&(i, sign), &x) in owner.iter().zip(&result.flow) {
        values[i] += sign * x;
    }
    (result, FlowAssignment::from_arc_values(values))
}
