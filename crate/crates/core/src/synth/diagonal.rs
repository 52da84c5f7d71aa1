use super::{DiagonalSpec, ZERO_ANGLE_TOL};
use crate::circuit::{Circuit, Gate};
use crate::error::{domain, Result};
use crate::units::{canonical_turns, unit_turns};

/// Output of [`synthesize_diagonal`]: `D = e^{2πi·global_phase} · U(circuit)`.
#[derive(Debug, Clone)]
pub struct SynthesizedDiagonal {
    pub circuit: Circuit,
    pub global_phase: f64,
}

/// Binary-reflected Gray code of `i`.
pub fn gray_code(i: usize) -> usize {
    i ^ (i >> 1)
}

/// Parity-rotation angles `α_s = −2·w_s`, `w = WHT(θ)/N`. Index 0 holds the
/// global phase `θ_0` instead.
pub fn walsh_angles(phases: &[f64]) -> Vec<f64> {
    let n = phases.len();
    let mut w = phases.to_vec();
    let mut h = 1;
    while h < n {
        for block in (0..n).step_by(2 * h) {
            for i in block..block + h {
                let (a, b) = (w[i], w[i + h]);
                w[i] = a + b;
                w[i + h] = a - b;
            }
        }
        h *= 2;
    }
    let scale = n as f64;
    let mut alpha: Vec<f64> = w.iter().map(|x| canonical_turns(-2.0 * x / scale)).collect();
    alpha[0] = phases[0];
    alpha
}

fn is_zero(t: f64) -> bool {
    canonical_turns(t).abs() < ZERO_ANGLE_TOL
}

#[derive(Debug, Clone, Copy)]
enum ParityOp {
    Cnot(usize, usize),
    Rz(usize, f64),
}

/// Gray-code parity network over local qubits `0..m`, one block per highest
/// bit of the Walsh index.
fn parity_network(alpha: &[f64], m: usize) -> Vec<ParityOp> {
    let mut ops = Vec::new();
    for t in 0..m {
        let mut current = 0usize;
        for i in 0..(1usize << t) {
            let r = gray_code(i);
            let a = alpha[(1 << t) | r];
            if is_zero(a) {
                continue;
            }
            push_parity_change(&mut ops, current ^ r, t);
            current = r;
            ops.push(ParityOp::Rz(t, a));
        }
        push_parity_change(&mut ops, current, t);
    }
    ops
}

fn push_parity_change(ops: &mut Vec<ParityOp>, mut diff: usize, target: usize) {
    while diff != 0 {
        ops.push(ParityOp::Cnot(diff.trailing_zeros() as usize, target));
        diff &= diff - 1;
    }
}

/// Exact CNOT + RZ circuit for a diagonal unitary on qubits `0..m`. With no
/// zero angles it has `2^m − 1` RZ and `2^m − 2` CNOT gates.
pub fn synthesize_diagonal(spec: &DiagonalSpec) -> SynthesizedDiagonal {
    let m = spec.width();
    let alpha = walsh_angles(spec.phases());
    let mut circuit = Circuit::new(m);
    for op in parity_network(&alpha, m) {
        circuit.add(match op {
            ParityOp::Cnot(c, t) => Gate::cnot(c, t),
            ParityOp::Rz(t, a) => Gate::rz(t, a),
        });
    }
    SynthesizedDiagonal { circuit, global_phase: alpha[0] }
}

/// Controlled-`D^{2^p}` with the control on qubit 0 and `D` on `1..=m`.
///
/// RZ becomes CRZ and CNOT becomes Toffoli. The global phase of the
/// uncontrolled network is relative once controlled, so a single RZ on the
/// control carries it when non-zero.
pub fn synthesize_controlled_diagonal(spec: &DiagonalSpec, p: u32) -> Result<Circuit> {
    if p > 52 {
        return Err(domain!("power exponent {p} exceeds float precision"));
    }
    let m = spec.width();
    let powered = spec.power(p);
    let alpha = walsh_angles(powered.phases());
    let mut circuit = Circuit::new(m + 1);
    for op in parity_network(&alpha, m) {
        circuit.add(match op {
            ParityOp::Cnot(c, t) => Gate::toffoli(0, c + 1, t + 1),
            ParityOp::Rz(t, a) => Gate::crz(0, t + 1, a),
        });
    }
    let control_phase = unit_turns(alpha[0]);
    if !is_zero(control_phase) {
        circuit.add(Gate::rz(0, control_phase));
    }
    Ok(circuit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{max_entry_distance, GateClass};
    use crate::units::phase;

    #[test]
    fn gray_sequence() {
        let seq: Vec<usize> = (0..8).map(gray_code).collect();
        assert_eq!(seq, vec![0, 1, 3, 2, 6, 7, 5, 4]);
    }

    #[test]
    fn walsh_of_constant_is_global_phase_only() {
        let a = walsh_angles(&[0.3; 8]);
        assert_eq!(a[0], 0.3);
        assert!(a[1..].iter().all(|x| x.abs() < 1e-15));
    }

    #[test]
    fn single_qubit_diagonal() {
        let spec = DiagonalSpec::new(vec![0.0, 0.25]).unwrap();
        let s = synthesize_diagonal(&spec);
        assert_eq!(s.circuit.gates(), &[Gate::rz(0, 0.25)]);
        assert_eq!(s.global_phase, 0.0);
    }

    #[test]
    fn generic_counts_and_equivalence() {
        let phases = vec![0.11, 0.37, 0.52, 0.05, 0.91, 0.23, 0.64, 0.48];
        let spec = DiagonalSpec::new(phases).unwrap();
        let s = synthesize_diagonal(&spec);
        let census = s.circuit.census();
        assert_eq!(census.get(GateClass::Rz), 7);
        assert_eq!(census.get(GateClass::Cnot), 6);
        let u = s.circuit.unitary().unwrap() * phase(s.global_phase);
        assert!(max_entry_distance(&u, &spec.matrix()) < 1e-12);
    }

    #[test]
    fn controlled_power_equivalence() {
        let spec = DiagonalSpec::new(vec![0.3, 0.7, 0.15, 0.9]).unwrap();
        for p in 0..3 {
            let c = synthesize_controlled_diagonal(&spec, p).unwrap();
            let d = max_entry_distance(&c.unitary().unwrap(), &spec.power(p).controlled_matrix());
            assert!(d < 1e-12, "p={p}: {d}");
            assert!(c.gates().iter().filter(|g| g.class() != GateClass::Rz).count() <= 5);
        }
    }

    #[test]
    fn zero_angles_are_elided() {
        let spec = DiagonalSpec::new(vec![0.0; 4]).unwrap();
        assert!(synthesize_diagonal(&spec).circuit.is_empty());
        assert!(synthesize_controlled_diagonal(&spec, 0).unwrap().is_empty());
    }
}
