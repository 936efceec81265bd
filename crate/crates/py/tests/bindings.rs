use pyo3::prelude::*;
use pyo3::types::PyDict;

fn run(code: &std::ffi::CStr) {
    Python::initialize();
    Python::attach(|py| {
        let module = pyo3::wrap_pymodule!(planarflow_py::planarflow_py)(py);
        let globals = PyDict::new(py);
        globals.set_item("pf", module).unwrap();
        if let Err(e) = py.run(code, Some(&globals), None) {
            e.print(py);
            panic!("python code failed");
        }
    });
}

#[test]
fn solve_matches_oracle() {
    run(c"
for kind in ('grid', 'tri'):
    inst = pf.generate(kind, 120, seed=3)
    res = pf.solve(inst, base_case=4, audit=True)
    assert res.value == pf.oracle(inst), (res, pf.oracle(inst))
    assert res.audit_failures == []
    assert len(res.flow) == inst.arc_count == len(inst.arcs())
    assert res.depth >= 1
");
}

#[test]
fn parse_round_trip_and_errors() {
    run(c"
text = 'p pmf 3 2\\na 1 2 5\\na 2 3 3\\nr 1 2\\nr 2 1 3\\nr 3 2\\ns 1\\nt 3\\n'
inst = pf.parse(text)
assert inst.serialize() == text
assert (inst.sources, inst.sinks) == ([0], [2])
assert pf.solve(inst, backend='augment').flow == [3, 3]
for bad, exc in (('p pmf 2 1\\na 1 2 x\\n', ValueError),):
    try:
        pf.parse(bad)
    except exc:
        pass
    else:
        raise AssertionError('no error')
try:
    pf.solve(inst, backend='nope')
except ValueError:
    pass
else:
    raise AssertionError('no error')
");
}
