use pyo3::prelude::*;
use pyo3::types::PyDict;

fn run(code: &std::ffi::CStr) {
    Python::attach(|py| {
        let module = pyo3::wrap_pymodule!(subsyscode_py::subsyscode_py)(py);
        let globals = PyDict::new(py);
        globals.set_item("sc", module).unwrap();
        if let Err(e) = py.run(code, Some(&globals), None) {
            e.display(py);
            panic!("python assertion failed");
        }
    });
}

#[test]
fn pauli_and_layout() {
    run(c"
p = sc.PauliOperator('XZ')
q = sc.PauliOperator('ZX')
assert str(p * q) == 'YY', str(p * q)
assert str(sc.PauliOperator('XI') * sc.PauliOperator('ZI')) == '-i YI'
assert not sc.PauliOperator('XI').commutes_with(sc.PauliOperator('ZI'))
assert p.weight() == 2 and p.num_sites == 2
c = sc.CodeLayout(2, 3)
assert c.num_sites == 9
assert len(c.stabilizer_generators()) == 4
z = sc.PauliOperator('IIIIZIIII')
assert c.measure_syndrome(z) == ('11', '00')
assert c.classify(z) == 'Detectable'
out = c.decode(z)
assert out['residual'] == 'Gauge'
assert str(out['correction']) == 'IIIZIIIII'
l = c.logical_operators()
assert c.classify(l['y']) == 'LogicalY'
assert abs(c.analytic_failure_prob(0.1) - 0.149554432) < 1e-9
try:
    sc.CodeLayout(4, 3)
    raise AssertionError('expected ValueError')
except ValueError:
    pass
");
}

#[test]
fn simulations() {
    run(c"
c = sc.CodeLayout(2, 3)
a = sc.run_trials(c, 'z', 0.1, 2000, 5)
b = sc.run_trials(c, 'z', 0.1, 2000, 5)
assert a == b and a['trials'] == 2000
assert a['gauge'] + a['logical_z'] == 2000
r = sc.diagonalize(2)
assert r['dimension'] == 16 and r['all_multiplicities_even']
assert sum(m for _, m in r['levels']) == 16
try:
    sc.diagonalize(4)
    raise AssertionError('expected ValueError')
except ValueError as e:
    assert 'bound' in str(e)
c3 = sc.CodeLayout(3, 5)
e = sc.PauliOperator.identity(125) * sc.PauliOperator('I' * 62 + 'X' + 'I' * 62)
assert sc.mean_field_delta_e(c3, e) == 8.0
m = sc.simulate_ising_memory(2, 4, 1.0, 1e-6, 10, 1)
assert m == [1.0] * 10
op, se = sc.order_parameter_at(5, 1e-6, -1, 3, samples=20)
assert op == -1.0 and se == 0.0
");
}
