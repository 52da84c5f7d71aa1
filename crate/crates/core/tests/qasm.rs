use proptest::prelude::*;
use qcrot::circuit::{max_entry_distance, Circuit, Gate};
use qcrot::qasm::{export_qasm, parse_qasm};

fn gate_strategy() -> impl Strategy<Value = Gate> {
    let perm = Just(vec![0usize, 1, 2]).prop_shuffle();
    (0usize..10, perm, -0.5f64..0.5).prop_map(|(kind, q, t)| match kind {
        0 => Gate::h(q[0]),
        1 => Gate::x(q[0]),
        2 => Gate::rz(q[0], t),
        3 => Gate::ry(q[0], t),
        4 => Gate::cnot(q[0], q[1]),
        5 => Gate::toffoli(q[0], q[1], q[2]),
        6 => Gate::crz(q[0], q[1], t),
        7 => Gate::cphase(q[0], q[1], t),
        8 => Gate::swap(q[0], q[1]),
        _ => Gate::cry(q[0], q[1], t),
    })
}

proptest! {
    #[test]
    fn roundtrip_preserves_unitary(gates in prop::collection::vec(gate_strategy(), 1..30)) {
        let mut circuit = Circuit::new(3);
        for g in gates {
            circuit.push(g).unwrap();
        }
        let text = export_qasm(&circuit).unwrap();
        let back = parse_qasm(&text).unwrap();
        prop_assert_eq!(back.census(), circuit.census());
        let d = max_entry_distance(&back.unitary().unwrap(), &circuit.unitary().unwrap());
        prop_assert!(d < 1e-9, "distance {}", d);
    }
}

#[test]
fn parse_errors_are_reported() {
    assert!(parse_qasm("OPENQASM 2.0;\nh q[0];\n").is_err());
    assert!(parse_qasm("OPENQASM 2.0;\nqreg q[1];\nfoo q[0];\n").is_err());
    assert!(parse_qasm("OPENQASM 2.0;\nqreg q[1];\nu1(abc) q[0];\n").is_err());
    assert!(parse_qasm("OPENQASM 2.0;\nqreg q[1];\nh q[3];\n").is_err());
    assert!(parse_qasm("").is_err());
}
