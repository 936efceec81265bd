//! Multiple-source multiple-sink maximum flow by recursion on cycle
//! separators.
//!
//! A level triangulates its graph, finds a balanced separating cycle, moves
//! any terminal off the cycle onto a fresh pendant node, and recurses into
//! the two pieces. Each piece then pushes flow from its sources into the
//! boundary and from the boundary into its sinks through a temporary apex.
//! Imbalance left on the boundary is pushed along the cycle node by node,
//! and whatever remains is returned to the terminals it came from.
//!
//! Every level works on its own graph and returns a flow over that graph's
//! arcs; a child's flow reaches its parent through the piece's [`DartMap`].
//!
//! [`DartMap`]: crate::flow::DartMap

pub mod audit;
mod boundary;

use std::collections::BTreeMap;

use thiserror::Error;

pub use audit::{
    no_residual_path, prefix_property, suffix_property, AuditFailure, Check, Instrumentation, PropertyOutcome, RecursionRecord, Step, TraceRecord,
};
pub use boundary::{push_boundary_phase, redistribute_boundary, settle_pseudoflow, BoundaryPush, Settlement};

use crate::flow::{accumulate, flow_value, inflow, is_feasible, FlowAssignment, FlowError};
use crate::planar::{detach_terminal_from_cycle, triangulate_and_biconnect, Capacity, DartGraph, GraphError, PlanarGraph, TerminalRole, TerminalSets};
use crate::separator::{find_cycle_separator_avoiding, split_into_pieces, Piece, Separator, SeparatorError, SEPARATOR_CONSTANT};
use crate::solvers::{msms_direct, Backend, BackendKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Separator(#[from] SeparatorError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error("settlement stuck at node {node} with {remaining} units left")]
    SettlementStuck { node: usize, remaining: Capacity },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("config line {line}: {message}")]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub backend: BackendKind,
    /// Levels with at most this many nodes are solved directly.
    pub base_case: usize,
    /// Run the reachability audits at every level.
    pub audit: bool,
    /// Keep a record of every executed step.
    pub trace: bool,
    /// Seed for instance generation; the solver itself is deterministic.
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Config {
        Config { backend: BackendKind::Dinic, base_case: 32, audit: false, trace: false, seed: 0 }
    }
}

impl Config {
    pub const MIN_BASE_CASE: usize = 3;

    /// Reads `key = value` lines. Blank lines and lines starting with `#`
    /// are ignored. Keys: `backend`, `base_case`, `audit`, `trace`, `seed`.
    pub fn parse(text: &str) -> Result<Config, ConfigError> {
        let mut config = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| ConfigError { line: i + 1, message };
            let (key, value) = line.split_once('=').ok_or_else(|| err("expected key = value".into()))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "backend" => config.backend = BackendKind::by_name(value).ok_or_else(|| err(format!("unknown backend {value:?}")))?,
                "base_case" => config.base_case = value.parse().map_err(|_| err(format!("bad base_case {value:?}")))?,
                "audit" => config.audit = parse_flag(value).ok_or_else(|| err(format!("bad audit {value:?}")))?,
                "trace" => config.trace = parse_flag(value).ok_or_else(|| err(format!("bad trace {value:?}")))?,
                "seed" => config.seed = value.parse().map_err(|_| err(format!("bad seed {value:?}")))?,
                _ => return Err(err(format!("unknown key {key:?}"))),
            }
        }
        Ok(config)
    }
}

fn parse_flag(value: &str) -> Option<bool> {
    match value {
        "1" | "true" | "on" | "full" | "yes" => Some(true),
        "0" | "false" | "off" | "none" | "no" => Some(false),
        _ => None,
    }
}

/// Output of [`msms_max_flow`].
#[derive(Clone, Debug)]
pub struct MaxFlowRun {
    pub flow: FlowAssignment,
    pub value: Capacity,
    pub levels: Vec<RecursionRecord>,
    pub failures: Vec<AuditFailure>,
    pub passed: BTreeMap<Check, usize>,
    pub trace: Vec<TraceRecord>,
}

impl MaxFlowRun {
    pub fn depth(&self) -> usize {
        self.levels.iter().map(|l| l.depth).max().unwrap_or(0)
    }

    pub fn audits_passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Maximum flow from the sources to the sinks of `terminals` in `g`.
pub fn msms_max_flow(g: &PlanarGraph, terminals: &TerminalSets, config: &Config) -> Result<MaxFlowRun, EngineError> {
    let mut solver = Solver {
        backend: config.backend.backend(),
        base_case: config.base_case.max(Config::MIN_BASE_CASE),
        infinite: g.infinite_capacity(),
        inst: Instrumentation::new(config.audit, config.trace),
        levels: Vec::new(),
    };
    let flow = solver.solve(g, terminals.sources(), terminals.sinks(), 0, None)?;
    if solver.inst.audit {
        let ok = is_feasible(g, &flow, terminals.sources(), terminals.sinks());
        solver.inst.verify(Check::Final, 1, 0, ok, || "result infeasible on the input graph".into());
        let ok = no_residual_path(g, &flow, terminals.sources(), terminals.sinks());
        solver.inst.verify(Check::Final, 2, 0, ok, || "residual source-to-sink path on the input graph".into());
    }
    let value = flow_value(g, &flow, terminals.sinks());
    Ok(MaxFlowRun { flow, value, levels: solver.levels, failures: solver.inst.failures, passed: solver.inst.passed, trace: solver.inst.records })
}

struct Solver {
    backend: &'static dyn Backend,
    base_case: usize,
    infinite: Capacity,
    inst: Instrumentation,
    levels: Vec<RecursionRecord>,
}

/// A level graph after terminals were moved off the separator.
struct Level {
    graph: PlanarGraph,
    sep: Separator,
    sources: Vec<usize>,
    sinks: Vec<usize>,
    detached: usize,
}

impl Solver {
    fn solve(&mut self, h: &PlanarGraph, sources: &[usize], sinks: &[usize], depth: usize, parent: Option<usize>) -> Result<FlowAssignment, EngineError> {
        let id = self.levels.len();
        let n = h.node_count();
        self.levels.push(RecursionRecord { id, parent, depth, nodes: n, ..Default::default() });
        if sources.is_empty() || sinks.is_empty() {
            self.levels[id].base_case = true;
            self.inst.record(|| TraceRecord { step: Step::BaseCase, level: id, piece: None, pushed: 0, boundary_inflow: Vec::new() });
            return Ok(FlowAssignment::zeros(h.arc_count()));
        }
        if n <= self.base_case {
            return Ok(self.direct(h, sources, sinks, id));
        }

        let tri = triangulate_and_biconnect(h);
        let mut avoid = vec![false; n];
        for &v in sources.iter().chain(sinks) {
            avoid[v] = true;
        }
        let sep = match find_cycle_separator_avoiding(&tri, &avoid) {
            Ok(sep) => sep,
            Err(SeparatorError::Unbalanced) => return Ok(self.direct(h, sources, sinks, id)),
            Err(e) => return Err(e.into()),
        };
        if self.inst.audit {
            let k = sep.len();
            self.inst.verify(Check::Shape, 1, id, sep.is_balanced(n), || {
                format!("sides {} and {} exceed 2n/3 for n = {n}", sep.inside.len(), sep.outside.len())
            });
            let bound = SEPARATOR_CONSTANT * (n as f64).sqrt();
            self.inst.verify(Check::Shape, 2, id, k as f64 <= bound, || format!("boundary {k} exceeds {bound:.2}"));
        }

        let level = self.detach(tri, sep, sources, sinks)?;
        let (first, second) = split_into_pieces(&level.graph, &level.sep)?;
        if first.node_count() >= n || second.node_count() >= n {
            return Ok(self.direct(h, sources, sinks, id));
        }
        {
            let rec = &mut self.levels[id];
            rec.boundary = level.sep.len();
            rec.detached = level.detached;
            rec.inside = level.sep.inside.len();
            rec.outside = level.sep.outside.len();
            rec.child_sizes = vec![first.node_count(), second.node_count()];
        }
        if self.inst.audit {
            let bound = 2.0 * n as f64 / 3.0 + SEPARATOR_CONSTANT * (n as f64).sqrt();
            for p in [&first, &second] {
                let size = p.node_count();
                self.inst.verify(Check::Shape, 3, id, size as f64 <= bound, || format!("piece of {size} nodes exceeds {bound:.2}"));
            }
        }

        let g = &level.graph;
        let is_source = membership(g.node_count(), &level.sources);
        let is_sink = membership(g.node_count(), &level.sinks);
        let pieces: Vec<(Piece, Vec<usize>, Vec<usize>)> = [first, second]
            .into_iter()
            .map(|p| {
                let s = (0..p.node_count()).filter(|&v| is_source[p.nodes[v]]).collect();
                let t = (0..p.node_count()).filter(|&v| is_sink[p.nodes[v]]).collect();
                (p, s, t)
            })
            .collect();

        let mut flow = FlowAssignment::zeros(g.arc_count());
        for (piece, s, t) in &pieces {
            let child = self.levels.len();
            let f = self.solve(&piece.graph, s, t, depth + 1, Some(id))?;
            self.levels[id].children.push(child);
            if self.inst.audit {
                let ok = no_residual_path(&piece.graph, &f, s, t);
                self.inst.verify(Check::PieceMaximal, 1, id, ok, || format!("piece {child} keeps a source-to-sink path"));
            }
            accumulate(&mut flow, g.arcs(), &f, &piece.darts)?;
            let boundary = &level.sep.boundary;
            self.inst.record(|| TraceRecord {
                step: Step::Recurse,
                level: id,
                piece: Some(child),
                pushed: flow_value(&piece.graph, &f, t),
                boundary_inflow: boundary_inflows(g, &flow, boundary),
            });
        }

        for (index, (piece, s, t)) in pieces.iter().enumerate() {
            self.boundary_phase(g, &mut flow, &level.sep.boundary, piece, s, t, id, index)?;
        }

        let boundary = &level.sep.boundary;
        if self.inst.audit {
            self.audit_cut_conditions(g, &flow, &level.sources, &level.sinks, boundary, Check::AfterBoundaryPushes, id);
        }

        let inst = &mut self.inst;
        let (sources, sinks) = (&level.sources, &level.sinks);
        redistribute_boundary(self.backend, g, &mut flow, boundary, self.infinite, |i, f, pushed| {
            inst.record(|| TraceRecord { step: Step::Redistribute, level: id, piece: None, pushed, boundary_inflow: boundary_inflows(g, f, boundary) });
            if inst.audit {
                audit_redistribution(inst, g, f, sources, sinks, boundary, i, id);
            }
        });

        let terminal: Vec<bool> = is_source.iter().zip(&is_sink).map(|(a, b)| *a || *b).collect();
        let settled = settle_pseudoflow(g, &flow, &terminal)?;
        let flow = settled.flow;
        self.inst.record(|| TraceRecord {
            step: Step::Settle,
            level: id,
            piece: None,
            pushed: settled.returned_excess + settled.returned_deficit,
            boundary_inflow: boundary_inflows(g, &flow, boundary),
        });
        if self.inst.audit {
            self.inst.verify(Check::Settlement, 1, id, settled.excess_cleared, || "excess remains after the excess pass".into());
            let ok = is_feasible(g, &flow, sources, sinks);
            self.inst.verify(Check::Settlement, 2, id, ok, || "imbalance remains after the deficit pass".into());
            let ok = no_residual_path(g, &flow, sources, sinks);
            self.inst.verify(Check::Final, 2, id, ok, || "residual source-to-sink path after settlement".into());
        }

        let mut flow = flow;
        flow.resize(h.arc_count());
        Ok(flow)
    }

    fn direct(&mut self, h: &PlanarGraph, sources: &[usize], sinks: &[usize], id: usize) -> FlowAssignment {
        self.levels[id].base_case = true;
        let flow = msms_direct(self.backend, h, &FlowAssignment::zeros(h.arc_count()), sources, sinks);
        self.inst.record(|| TraceRecord { step: Step::BaseCase, level: id, piece: None, pushed: flow_value(h, &flow, sinks), boundary_inflow: Vec::new() });
        if self.inst.audit {
            let ok = is_feasible(h, &flow, sources, sinks);
            self.inst.verify(Check::Final, 1, id, ok, || "direct solve returned an infeasible flow".into());
            let ok = no_residual_path(h, &flow, sources, sinks);
            self.inst.verify(Check::Final, 2, id, ok, || "direct solve left a source-to-sink path".into());
        }
        flow
    }

    /// Replaces every terminal on the separator by a pendant node placed on
    /// whichever side currently has fewer strict nodes. The pendant arc
    /// carries the terminal's total outgoing (source) or incoming (sink)
    /// capacity.
    fn detach(&self, mut graph: PlanarGraph, mut sep: Separator, sources: &[usize], sinks: &[usize]) -> Result<Level, EngineError> {
        let mut sources = sources.to_vec();
        let mut sinks = sinks.to_vec();
        let is_source = membership(graph.node_count(), &sources);
        let is_sink = membership(graph.node_count(), &sinks);
        let k = sep.boundary.len();
        let mut detached = 0;
        for i in 0..k {
            let p = sep.boundary[i];
            let role = if is_source[p] {
                TerminalRole::Source
            } else if is_sink[p] {
                TerminalRole::Sink
            } else {
                continue;
            };
            let prev = graph.dart_between(p, sep.boundary[(i + k - 1) % k]).expect("cycle arc");
            let next = graph.dart_between(p, sep.boundary[(i + 1) % k]).expect("cycle arc");
            let inside = sep.inside.len() <= sep.outside.len();
            let face = if inside { graph.succ(prev) } else { graph.succ(next) };
            // The node can never pass on more than this, and unlike an
            // unbounded arc the pendant arc can be saturated.
            let through: Capacity = graph
                .rotation(p)
                .iter()
                .map(|&d| if role == TerminalRole::Source { graph.capacity(d) } else { graph.capacity(d.rev()) })
                .fold(0 as Capacity, |acc, c| acc.saturating_add(c))
                .min(self.infinite);
            let (g2, fresh) = detach_terminal_from_cycle(&graph, p, face, role, through)?;
            graph = g2;
            if inside {
                sep.inside.push(fresh);
            } else {
                sep.outside.push(fresh);
            }
            let list = if role == TerminalRole::Source { &mut sources } else { &mut sinks };
            let at = list.iter().position(|&v| v == p).expect("terminal listed");
            list[at] = fresh;
            detached += 1;
        }
        Ok(Level { graph, sep, sources, sinks, detached })
    }

    #[allow(clippy::too_many_arguments)]
    fn boundary_phase(
        &mut self,
        g: &PlanarGraph,
        flow: &mut FlowAssignment,
        boundary: &[usize],
        piece: &Piece,
        sources: &[usize],
        sinks: &[usize],
        id: usize,
        index: usize,
    ) -> Result<(), EngineError> {
        let child = self.levels[id].children[index];
        let local = piece.darts.pull(flow);
        let push = push_boundary_phase(self.backend, &piece.graph, &local, sources, sinks, &piece.boundary, self.infinite)?;
        let pg = &piece.graph;
        if self.inst.audit {
            let ok = no_residual_path(pg, &push.after_sources, sources, sinks);
            self.inst.verify(Check::SourcesToBoundary, 1, id, ok, || format!("piece {child}: source-to-sink path"));
            let ok = no_residual_path(pg, &push.after_sources, sources, &piece.boundary);
            self.inst.verify(Check::SourcesToBoundary, 2, id, ok, || format!("piece {child}: source-to-boundary path"));
            self.audit_cut_conditions(pg, &push.after_sinks, sources, sinks, &piece.boundary, Check::BoundaryToSinks, id);
        }
        accumulate(flow, g.arcs(), &push.after_sources.minus(&local), &piece.darts)?;
        self.inst.record(|| TraceRecord {
            step: Step::SourcesToBoundary,
            level: id,
            piece: Some(child),
            pushed: push.to_boundary,
            boundary_inflow: boundary_inflows(g, flow, boundary),
        });
        accumulate(flow, g.arcs(), &push.after_sinks.minus(&push.after_sources), &piece.darts)?;
        self.inst.record(|| TraceRecord {
            step: Step::BoundaryToSinks,
            level: id,
            piece: Some(child),
            pushed: push.from_boundary,
            boundary_inflow: boundary_inflows(g, flow, boundary),
        });
        Ok(())
    }

    /// No source-to-sink, source-to-boundary or boundary-to-sink residual path.
    #[allow(clippy::too_many_arguments)]
    fn audit_cut_conditions(
        &mut self,
        g: &PlanarGraph,
        flow: &FlowAssignment,
        sources: &[usize],
        sinks: &[usize],
        boundary: &[usize],
        check: Check,
        id: usize,
    ) {
        let ok = no_residual_path(g, flow, sources, sinks);
        self.inst.verify(check, 1, id, ok, || "source-to-sink path".into());
        let ok = no_residual_path(g, flow, sources, boundary);
        self.inst.verify(check, 2, id, ok, || "source-to-boundary path".into());
        let ok = no_residual_path(g, flow, boundary, sinks);
        self.inst.verify(check, 3, id, ok, || "boundary-to-sink path".into());
    }
}

/// Checks after boundary iteration `i`, with `p_0..=p_i` processed.
#[allow(clippy::too_many_arguments)]
fn audit_redistribution(
    inst: &mut Instrumentation,
    g: &PlanarGraph,
    f: &FlowAssignment,
    sources: &[usize],
    sinks: &[usize],
    boundary: &[usize],
    i: usize,
    id: usize,
) {
    let ok = no_residual_path(g, f, sources, sinks);
    inst.verify(Check::Redistribution, 1, id, ok, || format!("iteration {i}: source-to-sink path"));
    let ok = no_residual_path(g, f, sources, boundary) && no_residual_path(g, f, boundary, sinks);
    inst.verify(Check::Redistribution, 2, id, ok, || format!("iteration {i}: path between terminals and boundary"));
    let processed = &boundary[..=i];
    let pending = &boundary[i + 1..];
    let positive: Vec<usize> = processed.iter().copied().filter(|&p| inflow(g, f, p) > 0).collect();
    let negative: Vec<usize> = processed.iter().copied().filter(|&p| inflow(g, f, p) < 0).collect();
    let ok = no_residual_path(g, f, &positive, pending) && no_residual_path(g, f, pending, &negative);
    inst.verify(Check::Redistribution, 3, id, ok, || format!("iteration {i}: processed imbalance reaches pending nodes"));
    let ok = no_residual_path(g, f, &positive, &negative);
    inst.verify(Check::Redistribution, 4, id, ok, || format!("iteration {i}: excess reaches deficit"));
}

fn membership(n: usize, nodes: &[usize]) -> Vec<bool> {
    let mut flags = vec![false; n];
    for &v in nodes {
        flags[v] = true;
    }
    flags
}

fn boundary_inflows(g: &PlanarGraph, f: &FlowAssignment, boundary: &[usize]) -> Vec<Capacity> {
    boundary.iter().map(|&p| inflow(g, f, p)).collect()
}
