//! Controlled rotation `|0⟩|k⟩ ↦ (cos·|0⟩ + sin(4πθ_k)|1⟩)|k⟩` by phase
//! estimation on `D = diag(e^{2πiθ_k})` followed by a controlled-`Ry`
//! cascade.
//!
//! Qubit layout: ancilla `0`, Reg.A `1..=m` (PE output), Reg.E `m+1..=2m`
//! (oracle index).

mod oracle;

pub use oracle::{
    guarded_fraction, make_hhl_oracle, make_hhl_oracle_clamped, make_qaop_oracle, make_qkpca_oracle,
    make_qsvt_oracle, qaop_pair, theta_for_amplitude, AngleOracle, OracleDescriptor, MAX_ORACLE_WIDTH,
};

use crate::circuit::{Circuit, Gate};
use crate::error::{domain, Result};
use crate::state::{QubitSpan, RegisterLabel, StateVector};
use crate::synth::{inverse_qft, synthesize_controlled_diagonal};
use crate::units::unit_turns;

/// How the controlled-`D^{2^i}` blocks are realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DiagonalMode {
    /// Toffoli + CRZ networks from [`synthesize_controlled_diagonal`].
    #[default]
    Synthesized,
    /// One composite diagonal gate per power (fast to simulate, not
    /// exportable).
    Composite,
}

/// Qubit positions of the three registers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrotLayout {
    pub m: usize,
}

impl CrotLayout {
    pub const ANCILLA: usize = 0;

    pub fn reg_a(&self) -> Vec<usize> {
        (1..=self.m).collect()
    }

    pub fn reg_e(&self) -> Vec<usize> {
        (self.m + 1..=2 * self.m).collect()
    }

    pub fn num_qubits(&self) -> usize {
        1 + 2 * self.m
    }

    pub fn spans(&self) -> Vec<QubitSpan> {
        vec![
            QubitSpan::new(RegisterLabel::Ancilla, 0, 1),
            QubitSpan::new(RegisterLabel::RegA, 1, self.m),
            QubitSpan::new(RegisterLabel::RegE, 1 + self.m, self.m),
        ]
    }
}

/// Appends controlled-`D^{2^i}` (control `control`, diagonal on `targets`).
pub(crate) fn append_controlled_power(
    circuit: &mut Circuit,
    oracle: &AngleOracle,
    power: u32,
    control: usize,
    targets: &[usize],
    mode: DiagonalMode,
) -> Result<()> {
    match mode {
        DiagonalMode::Synthesized => {
            let block = synthesize_controlled_diagonal(&oracle.diagonal_spec(), power)?;
            let map: Vec<usize> = std::iter::once(control).chain(targets.iter().copied()).collect();
            circuit.append_mapped(&block, &map)
        }
        DiagonalMode::Composite => {
            let scale = 2f64.powi(power as i32);
            let mut phases = vec![0.0; 2 << oracle.width()];
            for (k, t) in oracle.thetas().iter().enumerate() {
                phases[2 * k + 1] = unit_turns(t * scale);
            }
            let qubits = std::iter::once(control).chain(targets.iter().copied()).collect();
            circuit.push(Gate::diagonal(qubits, phases)?)
        }
    }
}

/// Hadamards on Reg.A, controlled powers of `D`, inverse QFT on Reg.A.
pub fn build_pe_stage(oracle: &AngleOracle, mode: DiagonalMode) -> Result<Circuit> {
    let layout = CrotLayout { m: oracle.width() };
    let (reg_a, reg_e) = (layout.reg_a(), layout.reg_e());
    let mut c = Circuit::new(layout.num_qubits()).with_spans(layout.spans())?;
    for &q in &reg_a {
        c.push(Gate::h(q))?;
    }
    for (i, &ctrl) in reg_a.iter().enumerate() {
        append_controlled_power(&mut c, oracle, i as u32, ctrl, &reg_e, mode)?;
    }
    c.append_mapped(&inverse_qft(layout.m)?, &reg_a)?;
    Ok(c)
}

/// `CRY(Reg.A_j → ancilla, 2·2^j/2^m)`: total rotation `4π·a/2^m` radians.
pub fn build_ry_cascade(m: usize) -> Result<Circuit> {
    let layout = CrotLayout { m };
    let mut c = Circuit::new(layout.num_qubits()).with_spans(layout.spans())?;
    for (j, q) in layout.reg_a().into_iter().enumerate() {
        c.push(Gate::cry(q, CrotLayout::ANCILLA, 2.0 * (1u64 << j) as f64 / (1u64 << m) as f64))?;
    }
    Ok(c)
}

/// Full module with synthesized controlled powers.
pub fn build_crot_circuit(oracle: &AngleOracle, uncompute_reg_a: bool) -> Result<Circuit> {
    build_crot_circuit_with(oracle, uncompute_reg_a, DiagonalMode::Synthesized)
}

pub fn build_crot_circuit_with(oracle: &AngleOracle, uncompute_reg_a: bool, mode: DiagonalMode) -> Result<Circuit> {
    let pe = build_pe_stage(oracle, mode)?;
    let mut c = pe.clone();
    c.append(&build_ry_cascade(oracle.width())?)?;
    if uncompute_reg_a {
        c.append(&pe.inverse())?;
    }
    Ok(c)
}

#[derive(Debug, Clone)]
pub struct CrotResult {
    /// Reg.E after post-selecting ancilla = 1 and Reg.A = 0, renormalized.
    pub output_state: StateVector,
    pub success_probability: f64,
    /// Norm of the Reg.A components off `|0…0⟩` in the final state.
    pub reg_a_residual: f64,
}

/// Simulates the module (with uncompute) on `|0⟩|0…0⟩|input⟩`.
pub fn run_crot(oracle: &AngleOracle, input_reg_e: &StateVector) -> Result<CrotResult> {
    run_crot_with(oracle, input_reg_e, DiagonalMode::Composite)
}

pub fn run_crot_with(oracle: &AngleOracle, input_reg_e: &StateVector, mode: DiagonalMode) -> Result<CrotResult> {
    let layout = CrotLayout { m: oracle.width() };
    if input_reg_e.num_qubits() != layout.m {
        return Err(domain!("input has {} qubits, oracle index needs {}", input_reg_e.num_qubits(), layout.m));
    }
    let circuit = build_crot_circuit_with(oracle, true, mode)?;
    let initial = StateVector::zero(1 + layout.m)?.tensor(input_reg_e)?;
    let out = circuit.simulate(&initial)?;
    let reg_a = layout.reg_a();
    let reg_a_residual = (1.0 - out.probability(&reg_a, 0)?).max(0.0).sqrt();
    let (selected, success_probability) = out.postselect(CrotLayout::ANCILLA, 1)?;
    // After removing the ancilla, Reg.A sits on qubits 0..m.
    let (output_state, _) = selected.project(&(0..layout.m).collect::<Vec<_>>(), 0)?;
    Ok(CrotResult { output_state, success_probability, reg_a_residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn layout_positions() {
        let l = CrotLayout { m: 3 };
        assert_eq!(l.reg_a(), vec![1, 2, 3]);
        assert_eq!(l.reg_e(), vec![4, 5, 6]);
    }

    #[test]
    fn exact_oracle_single_input() {
        let oracle = AngleOracle::from_descriptor(&OracleDescriptor::Linear { m: 3, stride: 1.0 }).unwrap();
        for mode in [DiagonalMode::Synthesized, DiagonalMode::Composite] {
            let input = StateVector::new_basis_state(3, 5).unwrap();
            let pe = build_pe_stage(&oracle, mode).unwrap();
            let state = pe.simulate(&StateVector::zero(4).unwrap().tensor(&input).unwrap()).unwrap();
            assert!((state.probability(&[1, 2, 3], 5).unwrap() - 1.0).abs() < 1e-9);
            let r = run_crot_with(&oracle, &input, mode).unwrap();
            let expected = (4.0 * std::f64::consts::PI * 5.0 / 8.0).sin().powi(2);
            assert!((r.success_probability - expected).abs() < 1e-9);
            assert!(r.reg_a_residual < 1e-9);
        }
    }

    #[test]
    fn constant_oracle_keeps_input() {
        let oracle = AngleOracle::from_thetas(4, vec![1.0 / 16.0; 16]).unwrap();
        let amps: Vec<Complex64> = (0..16).map(|_| Complex64::new(0.25, 0.0)).collect();
        let input = StateVector::from_amplitudes(amps).unwrap();
        let r = run_crot(&oracle, &input).unwrap();
        assert!(r.output_state.max_deviation(&input).unwrap() < 1e-9);
        assert!((r.success_probability - 0.5).abs() < 1e-9);
    }

    #[test]
    fn zero_oracle_never_succeeds() {
        let oracle = AngleOracle::from_descriptor(&OracleDescriptor::Zero { m: 2 }).unwrap();
        let input = StateVector::new_basis_state(2, 1).unwrap();
        assert!(run_crot(&oracle, &input).is_err());
    }
}
