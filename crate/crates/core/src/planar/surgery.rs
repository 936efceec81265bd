use std::collections::HashSet;

use super::graph::{Arc, ArcKind, Capacity, Dart, DartGraph, PlanarGraph};
use super::GraphError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TerminalRole {
    Source,
    Sink,
}

fn dart_tail(arcs: &[Arc], d: Dart) -> usize {
    if d.is_forward() {
        arcs[d.arc()].tail
    } else {
        arcs[d.arc()].head
    }
}

fn insert_before(list: &mut Vec<Dart>, anchor: Dart, d: Dart) {
    let at = list.iter().position(|&x| x == anchor).expect("anchor dart in rotation");
    list.insert(at, d);
}

fn insert_after(list: &mut Vec<Dart>, anchor: Dart, d: Dart) {
    let at = list.iter().position(|&x| x == anchor).expect("anchor dart in rotation");
    list.insert(at + 1, d);
}

/// Adds zero-capacity arcs until every face is a triangle.
///
/// Each face walk of length `L > 3` is cut by a chord `w_i w_{i+2}` between
/// two corners that are distinct and not yet adjacent; such a pair always
/// exists in a simple plane graph. Added arcs are flagged
/// [`ArcKind::ZeroFill`] and appended after the existing arcs, so arc ids of
/// `g` remain valid in the result. Graphs with fewer than three nodes are
/// returned unchanged.
pub fn triangulate_and_biconnect(g: &PlanarGraph) -> PlanarGraph {
    let n = g.node_count();
    if n < 3 {
        return g.clone();
    }
    let faces = g.faces();
    if faces.iter().all(|f| f.len() == 3) {
        return g.clone();
    }
    let (mut arcs, mut rotation) = g.clone().into_parts();
    let mut adjacent: HashSet<(usize, usize)> = arcs.iter().map(|a| (a.tail.min(a.head), a.tail.max(a.head))).collect();

    for mut walk in faces {
        while walk.len() > 3 {
            let len = walk.len();
            let i = (0..len)
                .find(|&i| {
                    let a = dart_tail(&arcs, walk[i]);
                    let c = dart_tail(&arcs, walk[(i + 1) % len].rev());
                    a != c && !adjacent.contains(&(a.min(c), a.max(c)))
                })
                .expect("a face of length > 3 in a simple plane graph admits a chord");
            walk.rotate_left(i);
            let (di, dj) = (walk[0], walk[1]);
            let a = dart_tail(&arcs, di);
            let c = dart_tail(&arcs, dj.rev());
            let id = arcs.len();
            arcs.push(Arc::artificial(c, a, 0, 0, ArcKind::ZeroFill));
            adjacent.insert((a.min(c), a.max(c)));
            let x = Dart::forward(id);
            insert_after(&mut rotation[c], dj.rev(), x);
            insert_before(&mut rotation[a], di, x.rev());
            walk[0] = x.rev();
            walk.remove(1);
        }
    }
    PlanarGraph::new(n, arcs, rotation).expect("triangulation preserves a valid embedding")
}

/// Replaces terminal `v` by a fresh node embedded in the face containing
/// dart `face`, joined to `v` by an infinite-capacity arc (`v' -> v` for a
/// source, `v -> v'` for a sink). Returns the new graph and `v'`.
pub fn detach_terminal_from_cycle(
    g: &PlanarGraph,
    v: usize,
    face: Dart,
    role: TerminalRole,
    infinite: Capacity,
) -> Result<(PlanarGraph, usize), GraphError> {
    let corner = g
        .face_walk(face)
        .into_iter()
        .find(|&d| g.tail(d) == v)
        .ok_or(GraphError::FaceNotIncident { node: v })?;
    let fresh = g.node_count();
    let (mut arcs, mut rotation) = g.clone().into_parts();
    let id = arcs.len();
    let at_v = match role {
        TerminalRole::Source => {
            arcs.push(Arc::artificial(fresh, v, infinite, 0, ArcKind::Terminal));
            Dart::backward(id)
        }
        TerminalRole::Sink => {
            arcs.push(Arc::artificial(v, fresh, infinite, 0, ArcKind::Terminal));
            Dart::forward(id)
        }
    };
    insert_before(&mut rotation[v], corner, at_v);
    rotation.push(vec![at_v.rev()]);
    let g2 = PlanarGraph::new(fresh + 1, arcs, rotation)?;
    Ok((g2, fresh))
}

/// Embeds an apex node in a face touching every boundary node and joins it
/// to each of them by an arc of infinite capacity in both directions.
///
/// Among the qualifying faces the shortest one is used (ties broken by face
/// order). Returns the new graph and the apex id; apex arcs are appended
/// after the arcs of `g`.
pub fn attach_apex(g: &PlanarGraph, boundary: &[usize], infinite: Capacity) -> Result<(PlanarGraph, usize), GraphError> {
    if boundary.is_empty() {
        return Err(GraphError::BoundaryNotOnCommonFace);
    }
    let n = g.node_count();
    let mut wanted = vec![false; n];
    for &b in boundary {
        if b >= n {
            return Err(GraphError::NodeOutOfRange { node: b, node_count: n });
        }
        wanted[b] = true;
    }
    let distinct = wanted.iter().filter(|&&w| w).count();

    // A lone node has no darts and therefore no face walk.
    if g.arc_count() == 0 {
        let arcs = vec![Arc::artificial(0, 1, infinite, infinite, ArcKind::Apex)];
        let g2 = PlanarGraph::new(2, arcs, vec![vec![Dart::forward(0)], vec![Dart::backward(0)]])?;
        return Ok((g2, 1));
    }

    let mut best: Option<Vec<Dart>> = None;
    for walk in g.faces() {
        if best.as_ref().is_some_and(|b| b.len() <= walk.len()) {
            continue;
        }
        let mut hit = vec![false; n];
        let mut count = 0;
        for &d in &walk {
            let t = g.tail(d);
            if wanted[t] && !hit[t] {
                hit[t] = true;
                count += 1;
            }
        }
        if count == distinct {
            best = Some(walk);
        }
    }
    let walk = best.ok_or(GraphError::BoundaryNotOnCommonFace)?;

    let apex = n;
    let (mut arcs, mut rotation) = g.clone().into_parts();
    let mut done = vec![false; n];
    let mut at_apex = Vec::with_capacity(distinct);
    for &corner in &walk {
        let b = g.tail(corner);
        if !wanted[b] || done[b] {
            continue;
        }
        done[b] = true;
        let id = arcs.len();
        arcs.push(Arc::artificial(b, apex, infinite, infinite, ArcKind::Apex));
        insert_before(&mut rotation[b], corner, Dart::forward(id));
        at_apex.push(Dart::backward(id));
    }
    at_apex.reverse();
    rotation.push(at_apex);
    let g2 = PlanarGraph::new(n + 1, arcs, rotation)?;
    Ok((g2, apex))
}
