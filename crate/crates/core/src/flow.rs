//! Flow assignments on darts, residual capacities, and the predicates the
//! recursion's correctness rests on.

use std::collections::VecDeque;

use thiserror::Error;

use crate::planar::{Arc, Capacity, Dart, DartGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlowError {
    #[error("pushing {amount} on dart {dart:?} exceeds its residual capacity {residual}")]
    CapacityViolation { dart: Dart, amount: Capacity, residual: Capacity },
    #[error("flow is defined on {got} arcs but the graph has {expected}")]
    SizeMismatch { expected: usize, got: usize },
}

/// Flow on every dart of one graph.
///
/// Only the forward dart of each arc is stored, so `f(rev d) = -f(d)` holds
/// by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowAssignment {
    values: Vec<Capacity>,
}

impl FlowAssignment {
    pub fn zeros(arc_count: usize) -> FlowAssignment {
        FlowAssignment { values: vec![0; arc_count] }
    }

    pub fn from_arc_values(values: Vec<Capacity>) -> FlowAssignment {
        FlowAssignment { values }
    }

    pub fn arc_values(&self) -> &[Capacity] {
        &self.values
    }

    pub fn arc_count(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, d: Dart) -> Capacity {
        let v = self.values[d.arc()];
        if d.is_forward() {
            v
        } else {
            -v
        }
    }

    pub fn set(&mut self, d: Dart, x: Capacity) {
        self.values[d.arc()] = if d.is_forward() { x } else { -x };
    }

    pub fn add(&mut self, d: Dart, x: Capacity) {
        if d.is_forward() {
            self.values[d.arc()] += x;
        } else {
            self.values[d.arc()] -= x;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Grows or shrinks to `arc_count` arcs; new arcs carry no flow.
    pub fn resize(&mut self, arc_count: usize) {
        self.values.resize(arc_count, 0);
    }

    /// Dart-wise difference `self - other`.
    pub fn minus(&self, other: &FlowAssignment) -> FlowAssignment {
        FlowAssignment { values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect() }
    }

    /// Dart-wise sum `self + other`.
    pub fn plus(&self, other: &FlowAssignment) -> FlowAssignment {
        FlowAssignment { values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect() }
    }
}

/// `c_f(d) = c(d) - f(d)`.
pub fn residual_capacity<G: DartGraph + ?Sized>(g: &G, f: &FlowAssignment, d: Dart) -> Capacity {
    g.capacity(d) - f.get(d)
}

/// Net inflow: flow on arcs entering `v` minus flow on arcs leaving it.
pub fn inflow<G: DartGraph + ?Sized>(g: &G, f: &FlowAssignment, v: usize) -> Capacity {
    -g.out_darts(v).iter().map(|&d| f.get(d)).sum::<Capacity>()
}

/// True iff `f(d) <= c(d)` for every dart.
pub fn is_pseudoflow<G: DartGraph + ?Sized>(g: &G, f: &FlowAssignment) -> bool {
    f.arc_count() == g.arc_count()
        && g.arcs().iter().zip(f.arc_values()).all(|(a, &x)| x <= a.capacity && -x <= a.reverse_capacity)
}

/// A pseudoflow with zero inflow at every node outside `sources ∪ sinks`.
pub fn is_feasible<G: DartGraph + ?Sized>(g: &G, f: &FlowAssignment, sources: &[usize], sinks: &[usize]) -> bool {
    if !is_pseudoflow(g, f) {
        return false;
    }
    let mut terminal = vec![false; g.node_count()];
    for &v in sources.iter().chain(sinks) {
        terminal[v] = true;
    }
    (0..g.node_count()).all(|v| terminal[v] || inflow(g, f, v) == 0)
}

/// Sum of inflows at the sinks.
pub fn flow_value<G: DartGraph + ?Sized>(g: &G, f: &FlowAssignment, sinks: &[usize]) -> Capacity {
    sinks.iter().map(|&t| inflow(g, f, t)).sum()
}

/// Nodes reachable from `from` along darts with positive residual capacity.
pub fn residual_reachable<G, I>(g: &G, f: &FlowAssignment, from: I) -> Vec<bool>
where
    G: DartGraph + ?Sized,
    I: IntoIterator<Item = usize>,
{
    residual_search(g, f, from, false)
}

/// Nodes from which some node of `to` is reachable along residual darts.
pub fn residual_reaching<G, I>(g: &G, f: &FlowAssignment, to: I) -> Vec<bool>
where
    G: DartGraph + ?Sized,
    I: IntoIterator<Item = usize>,
{
    residual_search(g, f, to, true)
}

fn residual_search<G, I>(g: &G, f: &FlowAssignment, start: I, backwards: bool) -> Vec<bool>
where
    G: DartGraph + ?Sized,
    I: IntoIterator<Item = usize>,
{
    let mut seen = vec![false; g.node_count()];
    let mut queue = VecDeque::new();
    for v in start {
        if !seen[v] {
            seen[v] = true;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &d in g.out_darts(v) {
            // Walking backwards, the dart that matters is the one entering v.
            let step = if backwards { d.rev() } else { d };
            if residual_capacity(g, f, step) > 0 {
                let w = g.head(d);
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    seen
}

/// Whether some node of `to` is residually reachable from some node of `from`.
pub fn has_residual_path<G: DartGraph + ?Sized>(g: &G, f: &FlowAssignment, from: &[usize], to: &[usize]) -> bool {
    let seen = residual_reachable(g, f, from.iter().copied());
    to.iter().any(|&v| seen[v])
}

/// Splits `f` into a circulation and an acyclic remainder, `f = circ + acyclic`.
///
/// Cycles of positive-flow darts are found by depth-first search and
/// cancelled by their bottleneck; the search unwinds only to the first dart
/// the cancellation zeroed, so each dart is scanned a bounded number of
/// times between cancellations.
pub fn decompose_acyclic<G: DartGraph + ?Sized>(g: &G, f: &FlowAssignment) -> (FlowAssignment, FlowAssignment) {
    let n = g.node_count();
    let mut acyclic = f.clone();
    let mut circulation = FlowAssignment::zeros(f.arc_count());
    // 0 = unvisited, 1 = on the stack, 2 = finished
    let mut state = vec![0u8; n];
    let mut cursor = vec![0usize; n];

    for root in 0..n {
        if state[root] != 0 {
            continue;
        }
        let mut nodes = vec![root];
        let mut path: Vec<Dart> = Vec::new();
        state[root] = 1;
        while let Some(&v) = nodes.last() {
            let out = g.out_darts(v);
            while cursor[v] < out.len() && (acyclic.get(out[cursor[v]]) <= 0 || state[g.head(out[cursor[v]])] == 2) {
                cursor[v] += 1;
            }
            if cursor[v] == out.len() {
                state[v] = 2;
                nodes.pop();
                path.pop();
                continue;
            }
            let d = out[cursor[v]];
            let w = g.head(d);
            if state[w] == 0 {
                state[w] = 1;
                nodes.push(w);
                path.push(d);
                continue;
            }
            // w is on the stack: nodes[j..] plus d close a cycle.
            let j = nodes.iter().rposition(|&x| x == w).expect("node on stack");
            let mut cycle: Vec<Dart> = path[j..].to_vec();
            cycle.push(d);
            let delta = cycle.iter().map(|&e| acyclic.get(e)).min().expect("nonempty cycle");
            for &e in &cycle {
                acyclic.add(e, -delta);
                circulation.add(e, delta);
            }
            let first_zero = cycle.iter().position(|&e| acyclic.get(e) == 0).expect("bottleneck dart");
            let keep = j + first_zero;
            for &x in &nodes[keep + 1..] {
                state[x] = 0;
            }
            nodes.truncate(keep + 1);
            path.truncate(keep);
        }
    }
    (circulation, acyclic)
}

/// Nodes in topological order of the positive-flow dart subgraph, or `None`
/// if that subgraph has a cycle. Ties are broken by node id.
pub fn positive_flow_topological_order<G: DartGraph + ?Sized>(g: &G, f: &FlowAssignment) -> Option<Vec<usize>> {
    let n = g.node_count();
    let mut indegree = vec![0usize; n];
    for (a, &x) in g.arcs().iter().zip(f.arc_values()) {
        if x > 0 {
            indegree[a.head] += 1;
        } else if x < 0 {
            indegree[a.tail] += 1;
        }
    }
    let mut ready: std::collections::BinaryHeap<std::cmp::Reverse<usize>> =
        (0..n).filter(|&v| indegree[v] == 0).map(std::cmp::Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(std::cmp::Reverse(v)) = ready.pop() {
        order.push(v);
        for &d in g.out_darts(v) {
            if f.get(d) > 0 {
                let w = g.head(d);
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    ready.push(std::cmp::Reverse(w));
                }
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// Maps the arcs of a piece to arcs of some larger graph, preserving
/// orientation. Arcs that exist only in the piece map to `None`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DartMap {
    arcs: Vec<Option<usize>>,
}

impl DartMap {
    pub fn new(arcs: Vec<Option<usize>>) -> DartMap {
        DartMap { arcs }
    }

    pub fn identity(arc_count: usize) -> DartMap {
        DartMap { arcs: (0..arc_count).map(Some).collect() }
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn arc(&self, a: usize) -> Option<usize> {
        self.arcs.get(a).copied().flatten()
    }

    pub fn dart(&self, d: Dart) -> Option<Dart> {
        self.arc(d.arc()).map(|a| Dart::new(a, d.is_forward()))
    }

    pub fn push(&mut self, target: Option<usize>) {
        self.arcs.push(target);
    }

    pub fn resize(&mut self, len: usize) {
        self.arcs.resize(len, None);
    }

    /// `outer ∘ self`: piece arcs straight to the outer map's targets.
    pub fn then(&self, outer: &DartMap) -> DartMap {
        DartMap { arcs: self.arcs.iter().map(|a| a.and_then(|a| outer.arc(a))).collect() }
    }

    /// Pulls the global flow back onto the piece; unmapped arcs get zero.
    pub fn pull(&self, global: &FlowAssignment) -> FlowAssignment {
        FlowAssignment { values: self.arcs.iter().map(|a| a.map_or(0, |a| global.values[a])).collect() }
    }
}

/// `f(d) := f(d) + f_hat(d)` on every mapped dart.
///
/// The whole update is checked against the capacities of `global_arcs`
/// before anything is written, so on error `global` is untouched. Flow on
/// unmapped piece arcs is dropped.
pub fn accumulate(global: &mut FlowAssignment, global_arcs: &[Arc], f_hat: &FlowAssignment, map: &DartMap) -> Result<(), FlowError> {
    if global.arc_count() != global_arcs.len() {
        return Err(FlowError::SizeMismatch { expected: global_arcs.len(), got: global.arc_count() });
    }
    if map.len() < f_hat.arc_count() {
        return Err(FlowError::SizeMismatch { expected: f_hat.arc_count(), got: map.len() });
    }
    for (a, &x) in f_hat.arc_values().iter().enumerate() {
        if x == 0 {
            continue;
        }
        let Some(target) = map.arc(a) else { continue };
        let arc = &global_arcs[target];
        let cur = global.values[target];
        if x > 0 && x > arc.capacity - cur {
            return Err(FlowError::CapacityViolation { dart: Dart::forward(target), amount: x, residual: arc.capacity - cur });
        }
        if x < 0 && -x > arc.reverse_capacity + cur {
            return Err(FlowError::CapacityViolation { dart: Dart::backward(target), amount: -x, residual: arc.reverse_capacity + cur });
        }
    }
    for (a, &x) in f_hat.arc_values().iter().enumerate() {
        if let (true, Some(target)) = (x != 0, map.arc(a)) {
            global.values[target] += x;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::PlanarGraph;

    fn single_arc(cap: Capacity) -> PlanarGraph {
        PlanarGraph::from_neighbor_lists(2, vec![Arc::new(0, 1, cap)], &[vec![1], vec![0]]).unwrap()
    }

    fn triangle() -> PlanarGraph {
        let arcs = vec![Arc::new(0, 1, 4), Arc::new(1, 2, 4), Arc::new(2, 0, 4)];
        PlanarGraph::from_neighbor_lists(3, arcs, &[vec![1, 2], vec![2, 0], vec![0, 1]]).unwrap()
    }

    #[test]
    fn inflow_of_single_arc() {
        let g = single_arc(5);
        let f = FlowAssignment::from_arc_values(vec![3]);
        assert_eq!(inflow(&g, &f, 1), 3);
        assert_eq!(inflow(&g, &f, 0), -3);
        let z = FlowAssignment::zeros(1);
        assert_eq!(inflow(&g, &z, 0), 0);
        assert_eq!(inflow(&g, &z, 1), 0);
    }

    #[test]
    fn circulation_has_zero_inflow() {
        let g = triangle();
        let f = FlowAssignment::from_arc_values(vec![1, 1, 1]);
        assert!((0..3).all(|v| inflow(&g, &f, v) == 0));
        assert!(is_feasible(&g, &f, &[], &[]));
    }

    #[test]
    fn antisymmetry_of_storage() {
        let mut f = FlowAssignment::zeros(2);
        f.add(Dart::backward(1), 4);
        assert_eq!(f.get(Dart::forward(1)), -4);
        assert_eq!(f.get(Dart::backward(1)), 4);
    }

    #[test]
    fn accumulate_arithmetic() {
        let g = single_arc(5);
        let map = DartMap::identity(1);
        let mut f = FlowAssignment::from_arc_values(vec![3]);
        accumulate(&mut f, g.arcs(), &FlowAssignment::zeros(1), &map).unwrap();
        assert_eq!(f.arc_values(), &[3]);
        accumulate(&mut f, g.arcs(), &FlowAssignment::from_arc_values(vec![2]), &map).unwrap();
        assert_eq!(f.get(Dart::forward(0)), 5);
        assert_eq!(residual_capacity(&g, &f, Dart::forward(0)), 0);
        assert_eq!(residual_capacity(&g, &f, Dart::backward(0)), 5);
    }

    #[test]
    fn accumulate_rejects_overflowing_push() {
        let g = single_arc(5);
        let map = DartMap::identity(1);
        let mut f = FlowAssignment::from_arc_values(vec![3]);
        let err = accumulate(&mut f, g.arcs(), &FlowAssignment::from_arc_values(vec![3]), &map).unwrap_err();
        assert_eq!(err, FlowError::CapacityViolation { dart: Dart::forward(0), amount: 3, residual: 2 });
        assert_eq!(f.arc_values(), &[3]);
        let err = accumulate(&mut f, g.arcs(), &FlowAssignment::from_arc_values(vec![-4]), &map).unwrap_err();
        assert!(matches!(err, FlowError::CapacityViolation { .. }));
    }

    #[test]
    fn accumulate_through_map() {
        let g = triangle();
        let mut global = FlowAssignment::zeros(3);
        let map = DartMap::new(vec![Some(2), None]);
        accumulate(&mut global, g.arcs(), &FlowAssignment::from_arc_values(vec![-0, 9]), &map).unwrap();
        assert!(global.is_zero());
        accumulate(&mut global, g.arcs(), &FlowAssignment::from_arc_values(vec![4, 0]), &map).unwrap();
        assert_eq!(global.arc_values(), &[0, 0, 4]);
    }

    #[test]
    fn feasibility() {
        let arcs = vec![Arc::new(0, 1, 2), Arc::new(1, 2, 2)];
        let g = PlanarGraph::from_neighbor_lists(3, arcs, &[vec![1], vec![0, 2], vec![1]]).unwrap();
        assert!(is_feasible(&g, &FlowAssignment::zeros(2), &[0], &[2]));
        let path = FlowAssignment::from_arc_values(vec![2, 2]);
        assert!(is_feasible(&g, &path, &[0], &[2]));
        assert_eq!(inflow(&g, &path, 1), 0);
        assert_eq!(flow_value(&g, &path, &[2]), 2);
        let dangling = FlowAssignment::from_arc_values(vec![2, 1]);
        assert!(!is_feasible(&g, &dangling, &[0], &[2]));
        let over = FlowAssignment::from_arc_values(vec![3, 3]);
        assert!(!is_feasible(&g, &over, &[0], &[2]));
    }

    #[test]
    fn value_with_two_sinks() {
        let arcs = vec![Arc::new(0, 1, 5), Arc::new(0, 2, 5)];
        let g = PlanarGraph::from_neighbor_lists(3, arcs, &[vec![1, 2], vec![0], vec![0]]).unwrap();
        let f = FlowAssignment::from_arc_values(vec![3, 4]);
        assert_eq!(flow_value(&g, &f, &[1, 2]), 7);
        assert_eq!(flow_value(&g, &FlowAssignment::zeros(2), &[1, 2]), 0);
    }

    #[test]
    fn reachability_respects_saturation() {
        let g = single_arc(5);
        let zero = FlowAssignment::zeros(1);
        assert!(residual_reachable(&g, &zero, [0])[1]);
        let sat = FlowAssignment::from_arc_values(vec![5]);
        assert!(!residual_reachable(&g, &sat, [0])[1]);
        assert!(residual_reachable(&g, &sat, [1])[0]);
        assert!(residual_reaching(&g, &sat, [0])[1]);
        assert!(!residual_reaching(&g, &zero, [0])[1]);
    }

    #[test]
    fn decompose_pure_cases() {
        let g = triangle();
        let circ = FlowAssignment::from_arc_values(vec![2, 2, 2]);
        let (c, a) = decompose_acyclic(&g, &circ);
        assert_eq!(c, circ);
        assert!(a.is_zero());

        let path = FlowAssignment::from_arc_values(vec![3, 3, 0]);
        let (c, a) = decompose_acyclic(&g, &path);
        assert!(c.is_zero());
        assert_eq!(a, path);
    }

    #[test]
    fn decompose_mixed() {
        let g = triangle();
        // 0->1->2 carries 3, plus a unit circulation 0->1->2->0.
        let f = FlowAssignment::from_arc_values(vec![4, 4, 1]);
        let (c, a) = decompose_acyclic(&g, &f);
        assert_eq!(c.arc_values(), &[1, 1, 1]);
        assert_eq!(a.arc_values(), &[3, 3, 0]);
        assert!(positive_flow_topological_order(&g, &a).is_some());
        assert!(positive_flow_topological_order(&g, &f).is_none());
    }
}
