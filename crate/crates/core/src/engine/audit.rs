//! Reachability audits, trace records and recursion statistics collected
//! while the engine runs.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::flow::{residual_reachable, FlowAssignment};
use crate::planar::{Capacity, DartGraph};

/// The audited stages of a recursion level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    /// A piece's recursive flow leaves no source-to-sink residual path.
    PieceMaximal,
    /// After pushing from the sources to the boundary of a piece.
    SourcesToBoundary,
    /// After pushing from the boundary to the sinks of a piece.
    BoundaryToSinks,
    /// After both pieces have pushed, across the whole level.
    AfterBoundaryPushes,
    /// After every iteration of the boundary redistribution.
    Redistribution,
    /// Excess and deficit passes of the settlement.
    Settlement,
    /// The level's final flow is feasible and maximum.
    Final,
    /// Separator balance and child piece sizes.
    Shape,
}

impl Check {
    pub const ALL: [Check; 8] = [
        Check::PieceMaximal,
        Check::SourcesToBoundary,
        Check::BoundaryToSinks,
        Check::AfterBoundaryPushes,
        Check::Redistribution,
        Check::Settlement,
        Check::Final,
        Check::Shape,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::PieceMaximal => "piece-maximal",
            Check::SourcesToBoundary => "sources-to-boundary",
            Check::BoundaryToSinks => "boundary-to-sinks",
            Check::AfterBoundaryPushes => "after-boundary-pushes",
            Check::Redistribution => "redistribution",
            Check::Settlement => "settlement",
            Check::Final => "final",
            Check::Shape => "shape",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditFailure {
    pub check: Check,
    /// Which condition of the check failed, counted from 1.
    pub item: u8,
    pub level: usize,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Step {
    BaseCase,
    Recurse,
    SourcesToBoundary,
    BoundaryToSinks,
    Redistribute,
    Settle,
}

/// One executed step of a level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceRecord {
    pub step: Step,
    pub level: usize,
    pub piece: Option<usize>,
    pub pushed: Capacity,
    pub boundary_inflow: Vec<Capacity>,
}

/// Shape of one recursion level.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RecursionRecord {
    pub id: usize,
    pub parent: Option<usize>,
    pub depth: usize,
    pub nodes: usize,
    pub boundary: usize,
    pub detached: usize,
    pub inside: usize,
    pub outside: usize,
    pub children: Vec<usize>,
    pub child_sizes: Vec<usize>,
    pub base_case: bool,
}

#[derive(Clone, Debug, Default)]
pub struct Instrumentation {
    pub audit: bool,
    pub trace: bool,
    pub failures: Vec<AuditFailure>,
    pub passed: BTreeMap<Check, usize>,
    pub records: Vec<TraceRecord>,
}

impl Instrumentation {
    pub fn new(audit: bool, trace: bool) -> Instrumentation {
        Instrumentation { audit, trace, ..Default::default() }
    }

    pub fn verify(&mut self, check: Check, item: u8, level: usize, ok: bool, detail: impl FnOnce() -> String) {
        if ok {
            *self.passed.entry(check).or_default() += 1;
        } else {
            self.failures.push(AuditFailure { check, item, level, detail: detail() });
        }
    }

    pub fn record(&mut self, make: impl FnOnce() -> TraceRecord) {
        if self.trace {
            self.records.push(make());
        }
    }
}

/// No node of `to` is residually reachable from `from`.
pub fn no_residual_path<G: DartGraph + ?Sized>(g: &G, f: &FlowAssignment, from: &[usize], to: &[usize]) -> bool {
    if from.is_empty() || to.is_empty() {
        return true;
    }
    let seen = residual_reachable(g, f, from.iter().copied());
    !to.iter().any(|&v| seen[v])
}

/// Outcome of checking a path-preservation property for one push.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PropertyOutcome {
    /// The premises did not hold, so nothing was checked.
    Vacuous,
    Holds,
    Violated,
}

/// Pushing `pushed`, a flow whose only sources lie in `x`, on top of `before`:
/// if neither `a` nor `x` reaches `b` beforehand, `a` does not reach `b`
/// afterwards.
pub fn suffix_property<G: DartGraph + ?Sized>(
    g: &G,
    before: &FlowAssignment,
    pushed: &FlowAssignment,
    a: &[usize],
    b: &[usize],
    x: &[usize],
) -> PropertyOutcome {
    if !no_residual_path(g, before, a, b) || !no_residual_path(g, before, x, b) {
        return PropertyOutcome::Vacuous;
    }
    outcome(no_residual_path(g, &before.plus(pushed), a, b))
}

/// Pushing `pushed`, a flow whose only sinks lie in `x`, on top of `before`:
/// if `a` reaches neither `b` nor `x` beforehand, `a` does not reach `b`
/// afterwards.
pub fn prefix_property<G: DartGraph + ?Sized>(
    g: &G,
    before: &FlowAssignment,
    pushed: &FlowAssignment,
    a: &[usize],
    b: &[usize],
    x: &[usize],
) -> PropertyOutcome {
    if !no_residual_path(g, before, a, b) || !no_residual_path(g, before, a, x) {
        return PropertyOutcome::Vacuous;
    }
    outcome(no_residual_path(g, &before.plus(pushed), a, b))
}

fn outcome(ok: bool) -> PropertyOutcome {
    if ok {
        PropertyOutcome::Holds
    } else {
        PropertyOutcome::Violated
    }
}
