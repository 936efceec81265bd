use std::collections::VecDeque;

use super::{Backend, Capabilities, ResidualNetwork, Workspace};
use crate::flow::FlowAssignment;
use crate::planar::Capacity;

/// Blocking-flow max flow. Admissible darts are tried in index order.
#[derive(Clone, Copy, Debug, Default)]
pub struct Dinic;

const UNSEEN: u32 = u32::MAX;

fn levels(ws: &Workspace, level: &mut [u32]) -> bool {
    level.fill(UNSEEN);
    level[ws.source] = 0;
    let mut queue = VecDeque::from([ws.source]);
    while let Some(v) = queue.pop_front() {
        for &d in ws.out(v) {
            let w = ws.head[d as usize] as usize;
            if ws.cap[d as usize] > 0 && level[w] == UNSEEN {
                level[w] = level[v] + 1;
                queue.push_back(w);
            }
        }
    }
    level[ws.sink] != UNSEEN
}

/// Pushes a blocking flow of at most `budget` units; returns the amount.
fn blocking_flow(ws: &mut Workspace, level: &mut [u32], cursor: &mut [usize], budget: Capacity) -> Capacity {
    let mut pushed = 0;
    let mut path: Vec<usize> = Vec::new();
    let mut v = ws.source;
    while pushed < budget {
        if v == ws.sink {
            let mut delta = budget - pushed;
            for &d in &path {
                delta = delta.min(ws.cap[d]);
            }
            for &d in &path {
                ws.push(d, delta);
            }
            pushed += delta;
            // Retreat to the tail of the first saturated dart.
            let cut = path.iter().position(|&d| ws.cap[d] == 0).unwrap_or(path.len());
            path.truncate(cut);
            v = path.last().map_or(ws.source, |&d| ws.head[d] as usize);
            continue;
        }
        let out_start = ws.first[v];
        let out_len = ws.first[v + 1] - out_start;
        let mut advanced = false;
        while cursor[v] < out_len {
            let d = ws.darts[out_start + cursor[v]] as usize;
            let w = ws.head[d] as usize;
            if ws.cap[d] > 0 && level[w] == level[v] + 1 {
                path.push(d);
                v = w;
                advanced = true;
                break;
            }
            cursor[v] += 1;
        }
        if advanced {
            continue;
        }
        // Dead end: never enter v again in this phase.
        level[v] = UNSEEN;
        match path.pop() {
            Some(d) => {
                v = ws.head[d ^ 1] as usize;
                cursor[v] += 1;
            }
            None => break,
        }
    }
    pushed
}

impl Backend for Dinic {
    fn name(&self) -> &'static str {
        "dinic"
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities { multiple_sources: true, flow_limit: true, requires_cofacial: false }
    }

    fn max_flow(&self, net: &ResidualNetwork, sources: &[usize], sinks: &[usize], limit: Option<Capacity>) -> FlowAssignment {
        let mut ws = Workspace::build(net, sources, sinks);
        let mut budget = limit.unwrap_or(Capacity::MAX);
        let n = ws.node_count();
        let mut level = vec![UNSEEN; n];
        let mut cursor = vec![0usize; n];
        while budget > 0 && levels(&ws, &mut level) {
            cursor.fill(0);
            let pushed = blocking_flow(&mut ws, &mut level, &mut cursor, budget);
            if pushed == 0 {
                break;
            }
            budget -= pushed;
        }
        ws.flow(net)
    }
}
