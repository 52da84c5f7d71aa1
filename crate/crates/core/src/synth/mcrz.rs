use super::{synthesize_diagonal, DiagonalSpec};
use crate::circuit::{Circuit, Gate};
use crate::error::{domain, Result};

/// `Λ_k(X)` from Toffolis with `k − 2` dirty qubits (restored afterwards);
/// `4(k − 2)` Toffolis for `k ≥ 3`.
fn mcx_dirty_chain(controls: &[usize], target: usize, dirty: &[usize]) -> Vec<Gate> {
    let k = controls.len();
    match k {
        0 => return vec![Gate::x(target)],
        1 => return vec![Gate::cnot(controls[0], target)],
        2 => return vec![Gate::toffoli(controls[0], controls[1], target)],
        _ => {}
    }
    debug_assert!(dirty.len() >= k - 2);
    let (c, d) = (controls, dirty);
    let mut half = vec![Gate::toffoli(c[k - 1], d[k - 3], target)];
    for i in (1..=k - 3).rev() {
        half.push(Gate::toffoli(c[i + 1], d[i - 1], d[i]));
    }
    half.push(Gate::toffoli(c[0], c[1], d[0]));
    for i in 1..=k - 3 {
        half.push(Gate::toffoli(c[i + 1], d[i - 1], d[i]));
    }
    let mut gates = half.clone();
    gates.extend(half);
    gates
}

/// `Λ_k(X)` using a single dirty qubit: split the controls in two halves and
/// apply `A B A B`, each half borrowing the other as its dirty pool.
pub(crate) fn mcx_one_dirty(controls: &[usize], target: usize, dirty: usize) -> Vec<Gate> {
    let k = controls.len();
    if k <= 2 {
        return mcx_dirty_chain(controls, target, &[]);
    }
    let (c1, c2) = controls.split_at(k.div_ceil(2));
    let pool_a: Vec<usize> = c2.iter().copied().chain([target]).collect();
    let a = mcx_dirty_chain(c1, dirty, &pool_a);
    let c2d: Vec<usize> = c2.iter().copied().chain([dirty]).collect();
    let b = mcx_dirty_chain(&c2d, target, c1);
    let mut gates = Vec::with_capacity(2 * (a.len() + b.len()));
    for _ in 0..2 {
        gates.extend(a.iter().cloned());
        gates.extend(b.iter().cloned());
    }
    gates
}

fn chain_cost(k: usize) -> usize {
    if k <= 2 {
        1
    } else {
        4 * (k - 2)
    }
}

/// Gate count of [`multi_controlled_rz`] for `m` controls with an ancilla.
pub fn multi_controlled_rz_gate_bound(m: usize) -> usize {
    match m {
        0 | 1 => 1,
        2 => 5,
        _ => {
            let (k1, k2) = (m.div_ceil(2), m / 2);
            2 * (2 * chain_cost(k1) + 2 * chain_cost(k2 + 1)) + 1
        }
    }
}

/// Appends a phase `e^{2πi·angle}` on the all-ones state of
/// `controls ∪ {target}`.
pub(crate) fn append_mcrz(
    circuit: &mut Circuit,
    controls: &[usize],
    target: usize,
    ancilla: Option<usize>,
    angle: f64,
) -> Result<()> {
    match (controls, ancilla) {
        ([], _) => circuit.push(Gate::rz(target, angle)),
        ([c], _) => circuit.push(Gate::crz(*c, target, angle)),
        ([c0, c1], _) => {
            for g in [
                Gate::crz(*c1, target, angle / 2.0),
                Gate::cnot(*c0, *c1),
                Gate::crz(*c1, target, -angle / 2.0),
                Gate::cnot(*c0, *c1),
                Gate::crz(*c0, target, angle / 2.0),
            ] {
                circuit.push(g)?;
            }
            Ok(())
        }
        (_, Some(anc)) => {
            let compute = mcx_one_dirty(controls, anc, target);
            for g in compute.iter().cloned() {
                circuit.push(g)?;
            }
            circuit.push(Gate::crz(anc, target, angle))?;
            for g in compute.into_iter().rev() {
                circuit.push(g)?;
            }
            Ok(())
        }
        (_, None) => {
            let width = controls.len() + 1;
            let mut phases = vec![0.0; 1 << width];
            phases[(1 << width) - 1] = angle;
            let synth = synthesize_diagonal(&DiagonalSpec::new(phases)?);
            let map: Vec<usize> = controls.iter().copied().chain([target]).collect();
            circuit.append_mapped(&synth.circuit, &map)
        }
    }
}

/// `C^m RZ(angle)`: controls `0..m`, target `m`, and (for `m ≥ 3` with
/// `use_ancilla`) a clean ancilla `m + 1`. Without an ancilla the `m ≥ 3` case
/// is synthesized as an `(m+1)`-qubit diagonal.
pub fn multi_controlled_rz(m: usize, angle: f64, use_ancilla: bool) -> Result<Circuit> {
    if m == 0 {
        return Err(domain!("multi-controlled RZ needs at least one control"));
    }
    let with_anc = use_ancilla && m >= 3;
    let mut circuit = Circuit::new(m + 1 + with_anc as usize);
    let controls: Vec<usize> = (0..m).collect();
    append_mcrz(&mut circuit, &controls, m, with_anc.then_some(m + 1), angle)?;
    Ok(circuit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{max_entry_distance, GateKind};
    use crate::units::phase;
    use nalgebra::DMatrix;
    use num_complex::Complex64;

    fn classical(gates: &[Gate], mut bits: usize) -> usize {
        for g in gates {
            let q = g.qubits();
            let fire = q[..q.len() - 1].iter().all(|&c| bits >> c & 1 == 1);
            match g.kind() {
                GateKind::X | GateKind::Cnot | GateKind::Toffoli if fire => bits ^= 1 << q[q.len() - 1],
                _ => {}
            }
        }
        bits
    }

    #[test]
    fn dirty_chain_truth_table() {
        for k in 3..=5 {
            let controls: Vec<usize> = (0..k).collect();
            let dirty: Vec<usize> = (k + 1..2 * k - 1).collect();
            let gates = mcx_dirty_chain(&controls, k, &dirty);
            assert_eq!(gates.len(), 4 * (k - 2));
            let n = 2 * k - 1;
            for input in 0..1usize << n {
                let all = (0..k).all(|c| input >> c & 1 == 1);
                assert_eq!(classical(&gates, input), input ^ ((all as usize) << k), "k={k}");
            }
        }
    }

    #[test]
    fn one_dirty_truth_table() {
        for k in 3..=7 {
            let controls: Vec<usize> = (0..k).collect();
            let gates = mcx_one_dirty(&controls, k, k + 1);
            for input in 0..1usize << (k + 2) {
                let all = (0..k).all(|c| input >> c & 1 == 1);
                assert_eq!(classical(&gates, input), input ^ ((all as usize) << k), "k={k}");
            }
        }
    }

    fn reference(m: usize, angle: f64, extra: usize) -> DMatrix<Complex64> {
        let dim = 1usize << (m + 1 + extra);
        let full = (1usize << (m + 1)) - 1;
        DMatrix::from_fn(dim, dim, |i, j| {
            if i != j {
                Complex64::new(0.0, 0.0)
            } else if i & full == full {
                phase(angle)
            } else {
                Complex64::new(1.0, 0.0)
            }
        })
    }

    #[test]
    fn counts_and_equivalence_with_ancilla() {
        assert_eq!(multi_controlled_rz(1, 0.2, true).unwrap().len(), 1);
        for m in 1..=5 {
            let c = multi_controlled_rz(m, 0.37, true).unwrap();
            assert_eq!(c.len(), multi_controlled_rz_gate_bound(m), "m={m}");
            let extra = c.num_qubits() - m - 1;
            let u = c.unitary().unwrap();
            // Only the clean-ancilla subspace is constrained; compare columns with ancilla = 0.
            let r = reference(m, 0.37, extra);
            for col in 0..1usize << (m + 1) {
                for row in 0..u.nrows() {
                    assert!((u[(row, col)] - r[(row, col)]).norm() < 1e-12, "m={m}");
                }
            }
        }
        assert_eq!(multi_controlled_rz_gate_bound(3), 9);
        assert_eq!(multi_controlled_rz_gate_bound(4), 21);
    }

    #[test]
    fn gate_count_is_linear() {
        for m in 3..=40 {
            assert!(multi_controlled_rz_gate_bound(m) <= 16 * m, "m={m}");
        }
    }

    #[test]
    fn no_ancilla_is_exact() {
        for m in 1..=4 {
            let c = multi_controlled_rz(m, -0.21, false).unwrap();
            assert_eq!(c.num_qubits(), m + 1);
            assert!(max_entry_distance(&c.unitary().unwrap(), &reference(m, -0.21, 0)) < 1e-12);
        }
    }
}
