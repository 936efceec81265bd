//! The three non-recursive phases of a level: pushing between terminals and
//! the boundary through an apex, redistributing boundary imbalance along the
//! cycle, and settling the remaining pseudoflow into a feasible flow.

use crate::flow::{decompose_acyclic, inflow, positive_flow_topological_order, FlowAssignment};
use crate::planar::{attach_apex, Capacity, Dart, DartGraph, GraphError, PlanarGraph};
use crate::solvers::{Backend, ResidualNetwork};

use super::EngineError;

/// Flows on a piece after each half of the boundary phase.
#[derive(Clone, Debug)]
pub struct BoundaryPush {
    pub after_sources: FlowAssignment,
    pub after_sinks: FlowAssignment,
    pub to_boundary: Capacity,
    pub from_boundary: Capacity,
}

/// Attaches an apex joined to every boundary node, pushes a maximum flow
/// from `sources` into the apex, then a maximum flow from the apex into
/// `sinks`, and detaches the apex again.
///
/// `flow` is the piece's current flow. Both returned flows are over the arcs
/// of `piece`; the apex arcs and the flow they carried are discarded, which
/// leaves the pushed amounts as imbalance on the boundary nodes.
pub fn push_boundary_phase(
    backend: &dyn Backend,
    piece: &PlanarGraph,
    flow: &FlowAssignment,
    sources: &[usize],
    sinks: &[usize],
    boundary: &[usize],
    infinite: Capacity,
) -> Result<BoundaryPush, GraphError> {
    let m = piece.arc_count();
    if sources.is_empty() && sinks.is_empty() {
        return Ok(BoundaryPush { after_sources: flow.clone(), after_sinks: flow.clone(), to_boundary: 0, from_boundary: 0 });
    }
    let (with_apex, apex) = attach_apex(piece, boundary, infinite)?;
    let mut current = flow.clone();
    current.resize(with_apex.arc_count());

    let mut to_boundary = 0;
    if !sources.is_empty() {
        let pushed = backend.msss(&ResidualNetwork::from_graph(&with_apex, &current), sources, apex);
        current = current.plus(&pushed);
        to_boundary = inflow(&with_apex, &pushed, apex);
    }
    let mut after_sources = current.clone();
    after_sources.resize(m);

    let mut from_boundary = 0;
    if !sinks.is_empty() {
        let pushed = backend.ssms(&ResidualNetwork::from_graph(&with_apex, &current), apex, sinks);
        current = current.plus(&pushed);
        from_boundary = -inflow(&with_apex, &pushed, apex);
    }
    current.resize(m);
    Ok(BoundaryPush { after_sources, after_sinks: current, to_boundary, from_boundary })
}

/// Walks the boundary in cycle order. At node `p_i` every later pair
/// `p_j p_{j+1}` (`j > i`) is joined by a temporary arc of infinite capacity
/// in both directions; positive inflow at `p_i` is then pushed to `p_{i+1}`,
/// or a deficit at `p_i` is filled from `p_{i+1}`, by a flow limited to the
/// imbalance. The last node has no successor and is left as is.
///
/// `after_each(i, flow, pushed)` runs after every iteration, the last one
/// included.
pub fn redistribute_boundary(
    backend: &dyn Backend,
    g: &PlanarGraph,
    flow: &mut FlowAssignment,
    boundary: &[usize],
    infinite: Capacity,
    mut after_each: impl FnMut(usize, &FlowAssignment, Capacity),
) {
    let k = boundary.len();
    let m = g.arc_count();
    for i in 0..k {
        let mut pushed = 0;
        let excess = inflow(g, flow, boundary[i]);
        if i + 1 < k && excess != 0 {
            let mut net = ResidualNetwork::from_graph(g, flow);
            for j in i + 1..k - 1 {
                net.add_arc(boundary[j], boundary[j + 1], infinite, infinite);
            }
            let (from, to) = if excess > 0 { (boundary[i], boundary[i + 1]) } else { (boundary[i + 1], boundary[i]) };
            let mut delta = backend.limited(&net, from, to, excess.abs());
            delta.resize(m);
            pushed = inflow(g, &delta, boundary[i]).abs();
            *flow = flow.plus(&delta);
        }
        after_each(i, flow, pushed);
    }
}

/// Result of converting a pseudoflow into a feasible flow.
#[derive(Clone, Debug)]
pub struct Settlement {
    pub flow: FlowAssignment,
    /// Excess sent back towards the sources.
    pub returned_excess: Capacity,
    /// Deficit filled back from the sinks.
    pub returned_deficit: Capacity,
    /// Every non-terminal had inflow at most zero after the excess pass.
    pub excess_cleared: bool,
}

/// Cancels flow cycles, then removes excess at non-terminals by lowering
/// incoming flow in reverse topological order, then removes deficits by
/// lowering outgoing flow in topological order. Darts are lowered in index
/// order.
pub fn settle_pseudoflow<G: DartGraph + ?Sized>(g: &G, flow: &FlowAssignment, terminal: &[bool]) -> Result<Settlement, EngineError> {
    let (_, mut acyclic) = decompose_acyclic(g, flow);
    let order = positive_flow_topological_order(g, &acyclic).expect("cycle cancelling leaves a dag");
    let darts_by_index = |v: usize, incoming: bool| {
        let mut ds: Vec<Dart> = g.out_darts(v).iter().map(|&d| if incoming { d.rev() } else { d }).collect();
        ds.sort_unstable();
        ds
    };

    let mut returned_excess = 0;
    for &v in order.iter().rev() {
        if terminal[v] {
            continue;
        }
        let mut excess = inflow(g, &acyclic, v);
        if excess <= 0 {
            continue;
        }
        returned_excess += excess;
        for d in darts_by_index(v, true) {
            let x = acyclic.get(d);
            if x > 0 {
                let cut = x.min(excess);
                acyclic.add(d, -cut);
                excess -= cut;
                if excess == 0 {
                    break;
                }
            }
        }
        if excess > 0 {
            return Err(EngineError::SettlementStuck { node: v, remaining: excess });
        }
    }
    let excess_cleared = (0..g.node_count()).all(|v| terminal[v] || inflow(g, &acyclic, v) <= 0);

    let mut returned_deficit = 0;
    for &v in &order {
        if terminal[v] {
            continue;
        }
        let mut deficit = -inflow(g, &acyclic, v);
        if deficit <= 0 {
            continue;
        }
        returned_deficit += deficit;
        for d in darts_by_index(v, false) {
            let x = acyclic.get(d);
            if x > 0 {
                let cut = x.min(deficit);
                acyclic.add(d, -cut);
                deficit -= cut;
                if deficit == 0 {
                    break;
                }
            }
        }
        if deficit > 0 {
            return Err(EngineError::SettlementStuck { node: v, remaining: -deficit });
        }
    }
    Ok(Settlement { flow: acyclic, returned_excess, returned_deficit, excess_cleared })
}
