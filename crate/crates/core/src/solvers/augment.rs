use std::collections::VecDeque;

use super::{Backend, Capabilities, ResidualNetwork, Workspace};
use crate::flow::FlowAssignment;
use crate::planar::Capacity;

/// Shortest augmenting paths (Edmonds–Karp). Slower than [`Dinic`](super::Dinic);
/// kept as a second backend to cross-check the first.
#[derive(Clone, Copy, Debug, Default)]
pub struct ShortestAugmenting;

impl Backend for ShortestAugmenting {
    fn name(&self) -> &'static str {
        "augment"
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities { multiple_sources: true, flow_limit: true, requires_cofacial: false }
    }

    fn max_flow(&self, net: &ResidualNetwork, sources: &[usize], sinks: &[usize], limit: Option<Capacity>) -> FlowAssignment {
        let mut ws = Workspace::build(net, sources, sinks);
        let mut budget = limit.unwrap_or(Capacity::MAX);
        let n = ws.node_count();
        let mut via = vec![usize::MAX; n];
        while budget > 0 {
            via.fill(usize::MAX);
            let mut queue = VecDeque::from([ws.source]);
            let mut found = false;
            'bfs: while let Some(v) = queue.pop_front() {
                for &d in ws.out(v) {
                    let d = d as usize;
                    let w = ws.head[d] as usize;
                    if w != ws.source && via[w] == usize::MAX && ws.cap[d] > 0 {
                        via[w] = d;
                        if w == ws.sink {
                            found = true;
                            break 'bfs;
                        }
                        queue.push_back(w);
                    }
                }
            }
            if !found {
                break;
            }
            let mut delta = budget;
            let mut v = ws.sink;
            while v != ws.source {
                let d = via[v];
                delta = delta.min(ws.cap[d]);
                v = ws.head[d ^ 1] as usize;
            }
            let mut v = ws.sink;
            while v != ws.source {
                let d = via[v];
                ws.push(d, delta);
                v = ws.head[d ^ 1] as usize;
            }
            budget -= delta;
        }
        ws.flow(net)
    }
}
