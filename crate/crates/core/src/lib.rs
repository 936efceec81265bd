//! Maximum flow with multiple sources and sinks in directed planar graphs,
//! by recursion on cycle separators, with reachability audits of every
//! intermediate state and an independent oracle for checking results.

pub mod dimacs;
pub mod engine;
pub mod flow;
pub mod generate;
pub mod instance;
pub mod planar;
pub mod report;
pub mod separator;
pub mod solvers;
