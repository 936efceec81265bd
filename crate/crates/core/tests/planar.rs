use planarflow::generate::{generate, GenParams, Kind};
use planarflow::planar::{attach_apex, detach_terminal_from_cycle, triangulate_and_biconnect, Arc, ArcKind, Dart, DartGraph, GraphError, PlanarGraph, TerminalRole, TerminalSets};

fn square() -> PlanarGraph {
    // 0 - 1
    // |   |
    // 3 - 2
    let arcs = vec![Arc::new(0, 1, 3), Arc::new(1, 2, 4), Arc::new(2, 3, 5), Arc::new(3, 0, 6)];
    PlanarGraph::from_neighbor_lists(4, arcs, &[vec![1, 3], vec![2, 0], vec![3, 1], vec![0, 2]]).unwrap()
}

fn euler_holds(g: &PlanarGraph) -> bool {
    g.node_count() as i64 - g.arc_count() as i64 + g.face_count() as i64 == 2
}

#[test]
fn darts_pair_up() {
    let d = Dart::forward(7);
    assert_eq!(d.rev(), Dart::backward(7));
    assert_eq!(d.rev().rev(), d);
    assert_eq!(Dart::from_index(d.index()), d);
    assert_eq!(d.arc(), 7);
}

#[test]
fn square_faces_and_walks() {
    let g = square();
    assert_eq!(g.face_count(), 2);
    assert!(euler_holds(&g));
    for face in g.faces() {
        assert_eq!(face.len(), 4);
        for w in face.windows(2) {
            assert_eq!(g.head(w[0]), g.tail(w[1]));
        }
    }
    let d = g.dart_between(0, 1).unwrap();
    assert_eq!(g.face_walk(d).len(), 4);
    assert_eq!(g.pred(g.succ(d)), d);
    assert_eq!(g.infinite_capacity(), 1 + 3 + 4 + 5 + 6);
}

#[test]
fn rejects_invalid_graphs() {
    let parallel = vec![Arc::new(0, 1, 1), Arc::new(1, 0, 1)];
    assert!(matches!(
        PlanarGraph::from_neighbor_lists(2, parallel, &[vec![1], vec![0]]),
        Err(GraphError::ParallelArcOrLoop { .. }) | Err(GraphError::InvalidRotation(_))
    ));
    let disconnected = vec![Arc::new(0, 1, 1), Arc::new(2, 3, 1)];
    assert!(PlanarGraph::from_neighbor_lists(4, disconnected, &[vec![1], vec![0], vec![3], vec![2]]).is_err());
    let negative = vec![Arc::new(0, 1, -1)];
    assert_eq!(PlanarGraph::from_neighbor_lists(2, negative, &[vec![1], vec![0]]).unwrap_err(), GraphError::NegativeCapacity { arc: 0 });
    assert_eq!(TerminalSets::new(3, vec![0, 1], vec![1]).unwrap_err(), GraphError::TerminalOverlap { node: 1 });
}

#[test]
fn k4_with_crossing_rotation_is_rejected() {
    // K4 drawn with a rotation that is not planar
    let mut arcs = Vec::new();
    for u in 0..4 {
        for v in u + 1..4 {
            arcs.push(Arc::new(u, v, 1));
        }
    }
    let bad = [vec![1, 2, 3], vec![0, 2, 3], vec![0, 1, 3], vec![0, 1, 2]];
    let good = [vec![1, 2, 3], vec![0, 3, 2], vec![0, 1, 3], vec![0, 2, 1]];
    assert!(matches!(PlanarGraph::from_neighbor_lists(4, arcs.clone(), &bad), Err(GraphError::NonPlanarEmbedding { .. })));
    assert!(euler_holds(&PlanarGraph::from_neighbor_lists(4, arcs, &good).unwrap()));
}

#[test]
fn triangulation_keeps_arcs_and_makes_triangles() {
    for kind in [Kind::Grid, Kind::Triangulation] {
        for n in [3, 10, 57, 300] {
            let g = generate(&GenParams::new(kind, n, 11)).graph;
            let t = triangulate_and_biconnect(&g);
            assert!(euler_holds(&t));
            assert_eq!(&t.arcs()[..g.arc_count()], g.arcs());
            assert!(t.arcs()[g.arc_count()..].iter().all(|a| a.kind == ArcKind::ZeroFill && a.capacity == 0));
            assert!(t.faces().iter().all(|f| f.len() == 3), "{kind:?} n={n}");
            assert_eq!(t.arc_count(), 3 * t.node_count() - 6);
        }
    }
}

#[test]
fn detached_terminal_hangs_off_its_node() {
    let g = square();
    let face = g.dart_between(0, 1).unwrap();
    let (h, fresh) = detach_terminal_from_cycle(&g, 0, face, TerminalRole::Source, 9).unwrap();
    assert_eq!(fresh, 4);
    assert!(euler_holds(&h));
    assert_eq!(h.degree(fresh), 1);
    let a = h.arcs().last().unwrap();
    assert_eq!((a.tail, a.head, a.capacity, a.kind), (fresh, 0, 9, ArcKind::Terminal));
    assert_eq!(h.face_count(), g.face_count());
    let grid = generate(&GenParams::new(Kind::Grid, 9, 0)).graph;
    let d = grid.dart_between(0, 1).unwrap();
    let corner_face = [grid.face_walk(d), grid.face_walk(d.rev())].into_iter().min_by_key(|f| f.len()).unwrap();
    assert!(corner_face.iter().all(|&d| grid.tail(d) != 8));
    assert_eq!(
        detach_terminal_from_cycle(&grid, 8, corner_face[0], TerminalRole::Sink, 1).unwrap_err(),
        GraphError::FaceNotIncident { node: 8 }
    );
}

#[test]
fn apex_joins_every_boundary_node() {
    let g = square();
    let (h, apex) = attach_apex(&g, &[0, 1, 2], 100).unwrap();
    assert!(euler_holds(&h));
    assert_eq!(h.degree(apex), 3);
    for a in &h.arcs()[g.arc_count()..] {
        assert_eq!(a.kind, ArcKind::Apex);
        assert_eq!((a.capacity, a.reverse_capacity), (100, 100));
    }
    assert_eq!(attach_apex(&g, &[], 1).unwrap_err(), GraphError::BoundaryNotOnCommonFace);
}
