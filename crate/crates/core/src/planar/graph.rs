use std::collections::HashMap;
use std::fmt;

use super::GraphError;

/// Integer capacity / flow amount. All arithmetic in the crate is exact.
pub type Capacity = i64;

/// One of the two directed halves of an arc.
///
/// Dart `2a` runs along arc `a`, dart `2a + 1` runs against it.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart(u32);

impl Dart {
    pub fn new(arc: usize, forward: bool) -> Dart {
        Dart((arc as u32) << 1 | u32::from(!forward))
    }

    pub fn forward(arc: usize) -> Dart {
        Dart::new(arc, true)
    }

    pub fn backward(arc: usize) -> Dart {
        Dart::new(arc, false)
    }

    pub fn from_index(index: usize) -> Dart {
        Dart(index as u32)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn arc(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_forward(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn rev(self) -> Dart {
        Dart(self.0 ^ 1)
    }
}

impl fmt::Debug for Dart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.arc(), if self.is_forward() { "+" } else { "-" })
    }
}

/// Where an arc came from. Everything except `Original` is artificial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArcKind {
    Original,
    /// Zero capacity in both directions; added to triangulate.
    ZeroFill,
    /// Infinite capacity link between a detached terminal and its old node.
    Terminal,
    /// Infinite capacity in both directions; joins a boundary node to the apex.
    Apex,
}

impl ArcKind {
    pub fn is_artificial(self) -> bool {
        self != ArcKind::Original
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
    /// Capacity of the dart running tail -> head.
    pub capacity: Capacity,
    /// Capacity of the dart running head -> tail. Zero for ordinary arcs.
    pub reverse_capacity: Capacity,
    pub kind: ArcKind,
}

impl Arc {
    pub fn new(tail: usize, head: usize, capacity: Capacity) -> Arc {
        Arc { tail, head, capacity, reverse_capacity: 0, kind: ArcKind::Original }
    }

    pub fn artificial(tail: usize, head: usize, capacity: Capacity, reverse_capacity: Capacity, kind: ArcKind) -> Arc {
        Arc { tail, head, capacity, reverse_capacity, kind }
    }
}

/// Read access to a graph at dart granularity. Flow routines are written
/// against this so they work on embedded graphs and plain arc stores alike.
pub trait DartGraph {
    fn node_count(&self) -> usize;
    fn arcs(&self) -> &[Arc];
    /// Darts whose tail is `v`.
    fn out_darts(&self, v: usize) -> &[Dart];

    fn arc_count(&self) -> usize {
        self.arcs().len()
    }

    fn tail(&self, d: Dart) -> usize {
        let a = &self.arcs()[d.arc()];
        if d.is_forward() {
            a.tail
        } else {
            a.head
        }
    }

    fn head(&self, d: Dart) -> usize {
        self.tail(d.rev())
    }

    fn capacity(&self, d: Dart) -> Capacity {
        let a = &self.arcs()[d.arc()];
        if d.is_forward() {
            a.capacity
        } else {
            a.reverse_capacity
        }
    }
}

/// A connected, simple, directed graph together with a combinatorial
/// embedding given by a clockwise rotation of darts around every node.
///
/// Faces are never stored; they are orbits of [`PlanarGraph::next_in_face`].
/// The graph is immutable once built and every surgery returns a new graph.
#[derive(Clone, Debug)]
pub struct PlanarGraph {
    arcs: Vec<Arc>,
    rotation: Vec<Vec<Dart>>,
    /// Position of each dart inside its tail's rotation.
    position: Vec<u32>,
    faces: usize,
}

impl PlanarGraph {
    /// Validates and builds a graph from arcs and a rotation system.
    ///
    /// `rotation[v]` must list every dart with tail `v` exactly once, in
    /// clockwise order.
    pub fn new(node_count: usize, arcs: Vec<Arc>, rotation: Vec<Vec<Dart>>) -> Result<PlanarGraph, GraphError> {
        if node_count == 0 {
            return Err(GraphError::Empty);
        }
        if rotation.len() != node_count {
            return Err(GraphError::InvalidRotation(format!(
                "expected {} rotation lists, got {}",
                node_count,
                rotation.len()
            )));
        }
        let mut pairs = HashMap::with_capacity(arcs.len());
        for (i, a) in arcs.iter().enumerate() {
            for node in [a.tail, a.head] {
                if node >= node_count {
                    return Err(GraphError::NodeOutOfRange { node, node_count });
                }
            }
            if a.tail == a.head {
                return Err(GraphError::ParallelArcOrLoop { arc: i, tail: a.tail, head: a.head });
            }
            if a.capacity < 0 || a.reverse_capacity < 0 {
                return Err(GraphError::NegativeCapacity { arc: i });
            }
            let key = (a.tail.min(a.head), a.tail.max(a.head));
            if pairs.insert(key, i).is_some() {
                return Err(GraphError::ParallelArcOrLoop { arc: i, tail: a.tail, head: a.head });
            }
        }

        let mut position = vec![u32::MAX; 2 * arcs.len()];
        for (v, darts) in rotation.iter().enumerate() {
            for (i, &d) in darts.iter().enumerate() {
                if d.arc() >= arcs.len() {
                    return Err(GraphError::InvalidRotation(format!("node {v} lists unknown dart {d:?}")));
                }
                let tail = if d.is_forward() { arcs[d.arc()].tail } else { arcs[d.arc()].head };
                if tail != v {
                    return Err(GraphError::InvalidRotation(format!("dart {d:?} listed at node {v} but leaves {tail}")));
                }
                if position[d.index()] != u32::MAX {
                    return Err(GraphError::InvalidRotation(format!("dart {d:?} listed twice")));
                }
                position[d.index()] = i as u32;
            }
        }
        if let Some(missing) = position.iter().position(|&p| p == u32::MAX) {
            return Err(GraphError::InvalidRotation(format!(
                "dart {:?} missing from its tail's rotation",
                Dart::from_index(missing)
            )));
        }

        let mut g = PlanarGraph { arcs, rotation, position, faces: 0 };
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        g.faces = if g.arcs.is_empty() { 1 } else { g.count_faces() };
        let (n, m, f) = (node_count as i64, g.arcs.len() as i64, g.faces as i64);
        if n - m + f != 2 {
            return Err(GraphError::NonPlanarEmbedding { nodes: node_count, arcs: g.arcs.len(), faces: g.faces });
        }
        Ok(g)
    }

    /// Builds a graph whose rotation is given as clockwise neighbour lists,
    /// which is unambiguous because the graph is simple.
    pub fn from_neighbor_lists(node_count: usize, arcs: Vec<Arc>, neighbors: &[Vec<usize>]) -> Result<PlanarGraph, GraphError> {
        let mut lookup = HashMap::with_capacity(2 * arcs.len());
        for (i, a) in arcs.iter().enumerate() {
            lookup.insert((a.tail, a.head), Dart::forward(i));
            lookup.insert((a.head, a.tail), Dart::backward(i));
        }
        let mut rotation = Vec::with_capacity(node_count);
        for (v, list) in neighbors.iter().enumerate() {
            let mut darts = Vec::with_capacity(list.len());
            for &w in list {
                match lookup.get(&(v, w)) {
                    Some(&d) => darts.push(d),
                    None => return Err(GraphError::InvalidRotation(format!("node {v} lists non-neighbour {w}"))),
                }
            }
            rotation.push(darts);
        }
        PlanarGraph::new(node_count, arcs, rotation)
    }

    pub fn rotation(&self, v: usize) -> &[Dart] {
        &self.rotation[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    pub fn face_count(&self) -> usize {
        self.faces
    }

    /// Next dart clockwise around the tail of `d`.
    pub fn succ(&self, d: Dart) -> Dart {
        let rot = &self.rotation[self.tail(d)];
        rot[(self.position[d.index()] as usize + 1) % rot.len()]
    }

    /// Previous dart clockwise around the tail of `d`.
    pub fn pred(&self, d: Dart) -> Dart {
        let rot = &self.rotation[self.tail(d)];
        let p = self.position[d.index()] as usize;
        rot[(p + rot.len() - 1) % rot.len()]
    }

    /// The dart following `d` along the boundary of its face.
    pub fn next_in_face(&self, d: Dart) -> Dart {
        self.succ(d.rev())
    }

    /// Dart from `u` to `v`, if they are adjacent.
    pub fn dart_between(&self, u: usize, v: usize) -> Option<Dart> {
        self.rotation[u].iter().copied().find(|&d| self.head(d) == v)
    }

    /// All faces as closed dart walks. Face `i` is the orbit starting at the
    /// lowest-indexed dart not in faces `0..i`.
    pub fn faces(&self) -> Vec<Vec<Dart>> {
        let mut seen = vec![false; 2 * self.arcs.len()];
        let mut out = Vec::with_capacity(self.faces);
        for start in 0..seen.len() {
            if seen[start] {
                continue;
            }
            let mut walk = Vec::new();
            let mut d = Dart::from_index(start);
            while !seen[d.index()] {
                seen[d.index()] = true;
                walk.push(d);
                d = self.next_in_face(d);
            }
            out.push(walk);
        }
        out
    }

    /// Face id of every dart, indexed by dart index, numbered as in [`faces`](Self::faces).
    pub fn face_of_darts(&self) -> Vec<usize> {
        let mut face = vec![usize::MAX; 2 * self.arcs.len()];
        let mut next_id = 0;
        for start in 0..face.len() {
            if face[start] != usize::MAX {
                continue;
            }
            let mut d = Dart::from_index(start);
            while face[d.index()] == usize::MAX {
                face[d.index()] = next_id;
                d = self.next_in_face(d);
            }
            next_id += 1;
        }
        face
    }

    /// Walk of the face containing `d`, starting at `d`.
    pub fn face_walk(&self, d: Dart) -> Vec<Dart> {
        let mut walk = vec![d];
        let mut e = self.next_in_face(d);
        while e != d {
            walk.push(e);
            e = self.next_in_face(e);
        }
        walk
    }

    /// Sum of all finite capacities plus one; larger than any cut.
    pub fn infinite_capacity(&self) -> Capacity {
        1 + self
            .arcs
            .iter()
            .map(|a| a.capacity.saturating_add(a.reverse_capacity))
            .fold(0i64, |s, c| s.saturating_add(c))
    }

    pub(crate) fn into_parts(self) -> (Vec<Arc>, Vec<Vec<Dart>>) {
        (self.arcs, self.rotation)
    }

    fn is_connected(&self) -> bool {
        let n = self.rotation.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &d in &self.rotation[v] {
                let w = self.head(d);
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }

    fn count_faces(&self) -> usize {
        let mut seen = vec![false; 2 * self.arcs.len()];
        let mut faces = 0;
        for start in 0..seen.len() {
            if seen[start] {
                continue;
            }
            faces += 1;
            let mut d = Dart::from_index(start);
            while !seen[d.index()] {
                seen[d.index()] = true;
                d = self.next_in_face(d);
            }
        }
        faces
    }
}

impl DartGraph for PlanarGraph {
    fn node_count(&self) -> usize {
        self.rotation.len()
    }

    fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    fn out_darts(&self, v: usize) -> &[Dart] {
        &self.rotation[v]
    }
}

/// Source and sink node sets. Disjoint by construction.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TerminalSets {
    sources: Vec<usize>,
    sinks: Vec<usize>,
}

impl TerminalSets {
    pub fn new(node_count: usize, mut sources: Vec<usize>, mut sinks: Vec<usize>) -> Result<TerminalSets, GraphError> {
        sources.sort_unstable();
        sources.dedup();
        sinks.sort_unstable();
        sinks.dedup();
        for &v in sources.iter().chain(&sinks) {
            if v >= node_count {
                return Err(GraphError::NodeOutOfRange { node: v, node_count });
            }
        }
        if let Some(&v) = sources.iter().find(|v| sinks.binary_search(v).is_ok()) {
            return Err(GraphError::TerminalOverlap { node: v });
        }
        Ok(TerminalSets { sources, sinks })
    }

    pub fn sources(&self) -> &[usize] {
        &self.sources
    }

    pub fn sinks(&self) -> &[usize] {
        &self.sinks
    }

    pub fn is_source(&self, v: usize) -> bool {
        self.sources.binary_search(&v).is_ok()
    }

    pub fn is_sink(&self, v: usize) -> bool {
        self.sinks.binary_search(&v).is_ok()
    }

    pub fn is_terminal(&self, v: usize) -> bool {
        self.is_source(v) || self.is_sink(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> PlanarGraph {
        let arcs = vec![Arc::new(0, 1, 1), Arc::new(1, 2, 1), Arc::new(2, 0, 1)];
        PlanarGraph::from_neighbor_lists(3, arcs, &[vec![1, 2], vec![2, 0], vec![0, 1]]).unwrap()
    }

    #[test]
    fn dart_encoding() {
        let d = Dart::forward(7);
        assert_eq!(d.arc(), 7);
        assert!(d.is_forward());
        assert_eq!(d.rev().arc(), 7);
        assert!(!d.rev().is_forward());
        assert_eq!(d.rev().rev(), d);
        assert_ne!(d.rev(), d);
    }

    #[test]
    fn triangle_has_two_faces() {
        let g = triangle();
        assert_eq!(g.face_count(), 2);
        assert!(g.faces().iter().all(|f| f.len() == 3));
    }

    #[test]
    fn single_arc_has_one_face() {
        let g = PlanarGraph::from_neighbor_lists(2, vec![Arc::new(0, 1, 7)], &[vec![1], vec![0]]).unwrap();
        assert_eq!(g.face_count(), 1);
        assert_eq!(g.capacity(Dart::forward(0)), 7);
        assert_eq!(g.capacity(Dart::backward(0)), 0);
    }

    #[test]
    fn k5_is_rejected() {
        let mut arcs = Vec::new();
        for u in 0..5 {
            for v in u + 1..5 {
                arcs.push(Arc::new(u, v, 1));
            }
        }
        let nbrs: Vec<Vec<usize>> = (0..5).map(|u| (0..5).filter(|&v| v != u).collect()).collect();
        let err = PlanarGraph::from_neighbor_lists(5, arcs, &nbrs).unwrap_err();
        assert!(matches!(err, GraphError::NonPlanarEmbedding { .. }));
    }

    #[test]
    fn wrong_rotation_of_k4_is_rejected() {
        // K4 is planar, but this rotation is not a planar embedding of it.
        let mut arcs = Vec::new();
        for u in 0..4 {
            for v in u + 1..4 {
                arcs.push(Arc::new(u, v, 1));
            }
        }
        let good = [vec![1, 2, 3], vec![0, 3, 2], vec![0, 1, 3], vec![0, 2, 1]];
        assert!(PlanarGraph::from_neighbor_lists(4, arcs.clone(), &good).is_ok());
        let bad = [vec![1, 2, 3], vec![0, 2, 3], vec![0, 1, 3], vec![0, 1, 2]];
        assert!(matches!(
            PlanarGraph::from_neighbor_lists(4, arcs, &bad),
            Err(GraphError::NonPlanarEmbedding { .. })
        ));
    }

    #[test]
    fn parallel_and_loops_are_rejected() {
        let arcs = vec![Arc::new(0, 1, 1), Arc::new(1, 0, 1)];
        let err = PlanarGraph::new(2, arcs, vec![vec![Dart::forward(0), Dart::backward(1)], vec![Dart::backward(0), Dart::forward(1)]]);
        assert!(matches!(err, Err(GraphError::ParallelArcOrLoop { .. })));
        let err = PlanarGraph::new(1, vec![Arc::new(0, 0, 1)], vec![vec![Dart::forward(0), Dart::backward(0)]]);
        assert!(matches!(err, Err(GraphError::ParallelArcOrLoop { .. })));
    }

    #[test]
    fn disconnected_is_rejected() {
        let err = PlanarGraph::from_neighbor_lists(3, vec![Arc::new(0, 1, 1)], &[vec![1], vec![0], vec![]]);
        assert!(matches!(err, Err(GraphError::Disconnected)));
    }

    #[test]
    fn rotation_must_cover_every_dart() {
        let err = PlanarGraph::new(2, vec![Arc::new(0, 1, 1)], vec![vec![Dart::forward(0)], vec![]]);
        assert!(matches!(err, Err(GraphError::InvalidRotation(_))));
        let err = PlanarGraph::from_neighbor_lists(3, vec![Arc::new(0, 1, 1), Arc::new(1, 2, 1)], &[vec![2], vec![0, 2], vec![1]]);
        assert!(matches!(err, Err(GraphError::InvalidRotation(_))));
    }

    #[test]
    fn terminal_overlap() {
        assert!(matches!(TerminalSets::new(3, vec![0, 1], vec![1]), Err(GraphError::TerminalOverlap { node: 1 })));
        let t = TerminalSets::new(3, vec![2, 0, 2], vec![1]).unwrap();
        assert_eq!(t.sources(), &[0, 2]);
        assert!(t.is_sink(1) && !t.is_terminal(3));
    }

    #[test]
    fn face_navigation_is_consistent() {
        let g = triangle();
        for i in 0..2 * g.arc_count() {
            let d = Dart::from_index(i);
            assert_eq!(g.pred(g.succ(d)), d);
            assert_eq!(g.tail(g.next_in_face(d)), g.head(d));
        }
    }
}
