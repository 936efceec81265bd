//! Max-flow subroutines used by the recursion, behind a pluggable backend
//! trait, plus an independent oracle for verification.
//!
//! Every backend reads residual capacities from a [`ResidualNetwork`] and
//! returns the flow it would push as a [`FlowAssignment`] over the network's
//! arcs. Backends never see or modify the global flow.

mod augment;
mod dinic;
mod oracle;

use std::fmt;

pub use augment::ShortestAugmenting;
pub use dinic::Dinic;
pub use oracle::{oracle_for_graph, oracle_max_flow, OracleResult};

use crate::flow::FlowAssignment;
use crate::planar::{Capacity, DartGraph};

/// Arc list with a residual capacity on each of the two darts of every arc.
#[derive(Clone, Debug, Default)]
pub struct ResidualNetwork {
    node_count: usize,
    tails: Vec<usize>,
    heads: Vec<usize>,
    forward: Vec<Capacity>,
    backward: Vec<Capacity>,
}

impl ResidualNetwork {
    pub fn new(node_count: usize) -> ResidualNetwork {
        ResidualNetwork { node_count, ..Default::default() }
    }

    /// Residual network of `g` under flow `f`.
    pub fn from_graph<G: DartGraph + ?Sized>(g: &G, f: &FlowAssignment) -> ResidualNetwork {
        let mut net = ResidualNetwork::new(g.node_count());
        for (a, &x) in g.arcs().iter().zip(f.arc_values()) {
            net.add_arc(a.tail, a.head, a.capacity - x, a.reverse_capacity + x);
        }
        net
    }

    pub fn add_node(&mut self) -> usize {
        self.node_count += 1;
        self.node_count - 1
    }

    pub fn add_arc(&mut self, tail: usize, head: usize, forward: Capacity, backward: Capacity) -> usize {
        debug_assert!(tail < self.node_count && head < self.node_count);
        debug_assert!(forward >= 0 && backward >= 0, "negative residual capacity");
        self.tails.push(tail);
        self.heads.push(head);
        self.forward.push(forward);
        self.backward.push(backward);
        self.tails.len() - 1
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn arc_count(&self) -> usize {
        self.tails.len()
    }

    pub fn arc(&self, a: usize) -> (usize, usize, Capacity, Capacity) {
        (self.tails[a], self.heads[a], self.forward[a], self.backward[a])
    }

    /// The network with every dart's capacity swapped with its reverse's.
    pub fn reversed(&self) -> ResidualNetwork {
        ResidualNetwork { forward: self.backward.clone(), backward: self.forward.clone(), ..self.clone() }
    }

    fn total_capacity(&self) -> Capacity {
        self.forward.iter().chain(&self.backward).fold(1, |s: Capacity, &c| s.saturating_add(c))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Capabilities {
    pub multiple_sources: bool,
    pub flow_limit: bool,
    /// Limited flow needs source and sink on a common face.
    pub requires_cofacial: bool,
}

/// A max-flow engine. `max_flow` is the only required algorithm; the three
/// subroutine contracts are expressed on top of it.
pub trait Backend: fmt::Debug + Send + Sync {
    fn name(&self) -> &'static str;

    fn capabilities(&self) -> Capabilities;

    /// Maximum flow from `sources` to `sinks` in `net`, stopping once
    /// `limit` units have been routed.
    fn max_flow(&self, net: &ResidualNetwork, sources: &[usize], sinks: &[usize], limit: Option<Capacity>) -> FlowAssignment;

    /// Multiple sources, single sink.
    fn msss(&self, net: &ResidualNetwork, sources: &[usize], sink: usize) -> FlowAssignment {
        self.max_flow(net, sources, &[sink], None)
    }

    /// Single source, multiple sinks: a multiple-source flow into `source` on
    /// the reversed network, negated.
    fn ssms(&self, net: &ResidualNetwork, source: usize, sinks: &[usize]) -> FlowAssignment {
        let reversed = self.msss(&net.reversed(), sinks, source);
        FlowAssignment::from_arc_values(reversed.arc_values().iter().map(|x| -x).collect())
    }

    /// A flow of value `min(delta, maxflow(s, t))`.
    fn limited(&self, net: &ResidualNetwork, source: usize, sink: usize, delta: Capacity) -> FlowAssignment {
        self.max_flow(net, &[source], &[sink], Some(delta))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum BackendKind {
    #[default]
    Dinic,
    ShortestAugmenting,
}

impl BackendKind {
    pub fn by_name(name: &str) -> Option<BackendKind> {
        match name {
            "dinic" => Some(BackendKind::Dinic),
            "augment" | "edmonds-karp" => Some(BackendKind::ShortestAugmenting),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        self.backend().name()
    }

    pub fn backend(self) -> &'static dyn Backend {
        match self {
            BackendKind::Dinic => &Dinic,
            BackendKind::ShortestAugmenting => &ShortestAugmenting,
        }
    }
}

/// Maximum flow from `sources` to `sink` in the residual graph of `(g, f)`.
pub fn msss_max_flow<G: DartGraph + ?Sized>(backend: &dyn Backend, g: &G, f: &FlowAssignment, sources: &[usize], sink: usize) -> FlowAssignment {
    backend.msss(&ResidualNetwork::from_graph(g, f), sources, sink)
}

/// Maximum flow from `source` to `sinks` in the residual graph of `(g, f)`.
pub fn ssms_max_flow<G: DartGraph + ?Sized>(backend: &dyn Backend, g: &G, f: &FlowAssignment, source: usize, sinks: &[usize]) -> FlowAssignment {
    backend.ssms(&ResidualNetwork::from_graph(g, f), source, sinks)
}

/// Flow of value `min(delta, maxflow)` from `source` to `sink` in the
/// residual graph of `(g, f)`.
pub fn limited_max_flow<G: DartGraph + ?Sized>(
    backend: &dyn Backend,
    g: &G,
    f: &FlowAssignment,
    source: usize,
    sink: usize,
    delta: Capacity,
) -> FlowAssignment {
    backend.limited(&ResidualNetwork::from_graph(g, f), source, sink, delta)
}

/// Multiple-source multiple-sink maximum flow in the residual graph of `(g, f)`.
pub fn msms_direct<G: DartGraph + ?Sized>(backend: &dyn Backend, g: &G, f: &FlowAssignment, sources: &[usize], sinks: &[usize]) -> FlowAssignment {
    backend.max_flow(&ResidualNetwork::from_graph(g, f), sources, sinks, None)
}

/// Dart-indexed residual graph with a super source and super sink, shared by
/// the backends. Dart `2a` is arc `a` forward, `2a + 1` backward.
struct Workspace {
    first: Vec<usize>,
    darts: Vec<u32>,
    head: Vec<u32>,
    cap: Vec<Capacity>,
    arc_count: usize,
    source: usize,
    sink: usize,
}

impl Workspace {
    fn build(net: &ResidualNetwork, sources: &[usize], sinks: &[usize]) -> Workspace {
        let n = net.node_count();
        let (source, sink) = (n, n + 1);
        let big = net.total_capacity();
        let mut tails: Vec<usize> = net.tails.clone();
        let mut heads: Vec<usize> = net.heads.clone();
        let mut fwd = net.forward.clone();
        let mut bwd = net.backward.clone();
        for &s in sources {
            tails.push(source);
            heads.push(s);
            fwd.push(big);
            bwd.push(0);
        }
        for &t in sinks {
            tails.push(t);
            heads.push(sink);
            fwd.push(big);
            bwd.push(0);
        }
        let total = n + 2;
        let mut degree = vec![0usize; total + 1];
        for (&t, &h) in tails.iter().zip(&heads) {
            degree[t] += 1;
            degree[h] += 1;
        }
        let mut first = vec![0usize; total + 1];
        for v in 0..total {
            first[v + 1] = first[v] + degree[v];
        }
        let mut fill = first.clone();
        let mut darts = vec![0u32; first[total]];
        let mut head = vec![0u32; 2 * tails.len()];
        let mut cap = vec![0; 2 * tails.len()];
        for a in 0..tails.len() {
            let (t, h) = (tails[a], heads[a]);
            head[2 * a] = h as u32;
            head[2 * a + 1] = t as u32;
            cap[2 * a] = fwd[a];
            cap[2 * a + 1] = bwd[a];
            darts[fill[t]] = (2 * a) as u32;
            fill[t] += 1;
            darts[fill[h]] = (2 * a + 1) as u32;
            fill[h] += 1;
        }
        Workspace { first, darts, head, cap, arc_count: net.arc_count(), source, sink }
    }

    fn node_count(&self) -> usize {
        self.first.len() - 1
    }

    fn out(&self, v: usize) -> &[u32] {
        &self.darts[self.first[v]..self.first[v + 1]]
    }

    fn push(&mut self, d: usize, x: Capacity) {
        self.cap[d] -= x;
        self.cap[d ^ 1] += x;
    }

    /// Flow routed on the original arcs.
    fn flow(&self, net: &ResidualNetwork) -> FlowAssignment {
        FlowAssignment::from_arc_values((0..self.arc_count).map(|a| net.forward[a] - self.cap[2 * a]).collect())
    }
}
