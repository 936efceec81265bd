use planarflow::engine::{msms_max_flow, Check, Config, Step};
use planarflow::flow::{has_residual_path, is_feasible};
use planarflow::generate::{generate, GenParams, Kind};
use planarflow::instance::parse_instance;
use planarflow::planar::{Arc, DartGraph, PlanarGraph, TerminalSets};
use planarflow::report::{depth_bound, shape_ok};
use planarflow::solvers::{oracle_for_graph, BackendKind};

fn audited(base_case: usize) -> Config {
    Config { audit: true, trace: true, base_case, ..Config::default() }
}

#[test]
fn matches_oracle_with_all_audits() {
    for seed in 0..40u64 {
        let kind = if seed % 2 == 0 { Kind::Grid } else { Kind::Triangulation };
        let mut params = GenParams::new(kind, 2 + (seed as usize * 37) % 350, seed);
        params.source_fraction = 0.1;
        params.sink_fraction = 0.1;
        let inst = generate(&params);
        let (s, t) = (inst.terminals.sources(), inst.terminals.sinks());
        let run = msms_max_flow(&inst.graph, &inst.terminals, &audited(4)).unwrap();
        assert_eq!(run.value, oracle_for_graph(&inst.graph, s, t).0.value, "seed {seed}");
        assert!(run.failures.is_empty(), "seed {seed}: {:?}", run.failures[0]);
        assert!(is_feasible(&inst.graph, &run.flow, s, t));
        assert!(!has_residual_path(&inst.graph, &run.flow, s, t));
        assert_eq!(run.flow.arc_count(), inst.graph.arc_count());
    }
}

#[test]
fn recursion_respects_the_shape_bounds() {
    let inst = generate(&GenParams::new(Kind::Triangulation, 3000, 1));
    let run = msms_max_flow(&inst.graph, &inst.terminals, &Config::default()).unwrap();
    assert!(run.depth() <= depth_bound(3000));
    assert!(shape_ok(&run.levels));
    assert!(run.levels.iter().any(|l| l.child_sizes.len() == 2));
    let root = &run.levels[0];
    assert_eq!((root.parent, root.depth, root.nodes), (None, 0, 3000));
}

#[test]
fn both_backends_give_the_same_value() {
    let inst = generate(&GenParams::new(Kind::Grid, 400, 3));
    let values: Vec<i64> = [BackendKind::Dinic, BackendKind::ShortestAugmenting]
        .into_iter()
        .map(|backend| msms_max_flow(&inst.graph, &inst.terminals, &Config { backend, base_case: 8, ..Config::default() }).unwrap().value)
        .collect();
    assert_eq!(values[0], values[1]);
}

#[test]
fn every_check_is_exercised() {
    let inst = generate(&GenParams::new(Kind::Triangulation, 500, 2));
    let run = msms_max_flow(&inst.graph, &inst.terminals, &audited(4)).unwrap();
    assert!(run.audits_passed());
    for c in Check::ALL {
        assert!(run.passed.get(&c).copied().unwrap_or(0) > 0, "{} never ran", c.name());
    }
}

#[test]
fn trace_covers_every_step_and_serializes() {
    let inst = generate(&GenParams::new(Kind::Grid, 200, 8));
    let run = msms_max_flow(&inst.graph, &inst.terminals, &audited(6)).unwrap();
    for step in [Step::BaseCase, Step::Recurse, Step::SourcesToBoundary, Step::BoundaryToSinks, Step::Redistribute, Step::Settle] {
        assert!(run.trace.iter().any(|r| r.step == step), "{step:?} missing");
    }
    let line = serde_json::to_string(&run.trace[0]).unwrap();
    assert!(line.contains("\"step\""));
    let quiet = msms_max_flow(&inst.graph, &inst.terminals, &Config::default()).unwrap();
    assert!(quiet.trace.is_empty(), "{:?}", quiet.trace.len());
    assert!(quiet.passed.is_empty(), "{:?}", quiet.passed);
}

#[test]
fn tiny_and_degenerate_inputs() {
    // terminals adjacent, no non-terminal nodes
    let g = PlanarGraph::from_neighbor_lists(2, vec![Arc::new(1, 0, 5)], &[vec![1], vec![0]]).unwrap();
    let t = TerminalSets::new(2, vec![0], vec![1]).unwrap();
    assert_eq!(msms_max_flow(&g, &t, &audited(3)).unwrap().value, 0);
    let t = TerminalSets::new(2, vec![1], vec![0]).unwrap();
    assert_eq!(msms_max_flow(&g, &t, &audited(3)).unwrap().value, 5);
    // no sinks at all
    let inst = generate(&GenParams::new(Kind::Grid, 30, 0));
    let none = TerminalSets::new(30, inst.terminals.sources().to_vec(), vec![]).unwrap();
    let run = msms_max_flow(&inst.graph, &none, &audited(3)).unwrap();
    assert_eq!(run.value, 0);
    assert!(run.flow.is_zero());
}

#[test]
fn path_graph_from_text() {
    let text = "p pmf 4 3\na 1 2 9\na 2 3 4\na 3 4 6\nr 1 2\nr 2 1 3\nr 3 2 4\nr 4 3\ns 1\nt 4\n";
    let inst = parse_instance(text).unwrap();
    let run = msms_max_flow(&inst.graph, &inst.terminals, &audited(3)).unwrap();
    assert_eq!(run.value, 4);
    assert_eq!(run.flow.arc_values(), &[4, 4, 4]);
}
