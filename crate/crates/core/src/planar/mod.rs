//! Embedded directed planar graphs and the embedding surgery used by the
//! max-flow recursion.

mod graph;
mod surgery;

pub use graph::{Arc, ArcKind, Capacity, Dart, DartGraph, PlanarGraph, TerminalSets};
pub use surgery::{attach_apex, detach_terminal_from_cycle, triangulate_and_biconnect, TerminalRole};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no nodes")]
    Empty,
    #[error("node {node} out of range (graph has {node_count} nodes)")]
    NodeOutOfRange { node: usize, node_count: usize },
    #[error("arc {arc} ({tail} -> {head}) is a self-loop or parallels another arc")]
    ParallelArcOrLoop { arc: usize, tail: usize, head: usize },
    #[error("arc {arc} has a negative capacity")]
    NegativeCapacity { arc: usize },
    #[error("invalid rotation system: {0}")]
    InvalidRotation(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("embedding is not planar: {nodes} nodes, {arcs} arcs, {faces} faces violates Euler's formula")]
    NonPlanarEmbedding { nodes: usize, arcs: usize, faces: usize },
    #[error("node {node} is both a source and a sink")]
    TerminalOverlap { node: usize },
    #[error("face does not touch node {node}")]
    FaceNotIncident { node: usize },
    #[error("boundary nodes do not share a face")]
    BoundaryNotOnCommonFace,
}
