//! HHL pipeline: phase estimation of `e^{2πiA}` into Reg.E, the controlled
//! rotation module on Reg.E, uncompute, and post-selection.
//!
//! Layout: ancilla `0`, Reg.A `1..=m`, Reg.E `m+1..=2m`, Reg.B
//! `2m+1..2m+n`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate};
use crate::crot::{build_pe_stage, build_ry_cascade, make_hhl_oracle_clamped, DiagonalMode};
use crate::error::{domain, param, Error, Result};
use crate::state::{QubitSpan, RegisterLabel, StateVector, MAX_QUBITS};
use crate::synth::inverse_qft;
use crate::units::{phase, unit_turns};

const HERMITIAN_TOL: f64 = 1e-12;
const NORM_TOL: f64 = 1e-12;

/// `A x = b` with Hermitian `A` (spectrum in `(0, 1]`) and unit `b`.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    n: usize,
    a: DMatrix<Complex64>,
    b: DVector<Complex64>,
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<Complex64>,
}

#[derive(Deserialize)]
struct SystemFile {
    n: usize,
    a: Vec<[f64; 2]>,
    b: Vec<[f64; 2]>,
}

fn pairs(v: &[[f64; 2]]) -> Vec<Complex64> {
    v.iter().map(|[re, im]| Complex64::new(*re, *im)).collect()
}

impl LinearSystem {
    pub fn new(a: DMatrix<Complex64>, b: DVector<Complex64>) -> Result<Self> {
        let dim = a.nrows();
        if !a.is_square() || dim < 2 || !dim.is_power_of_two() {
            return Err(Error::Validation(format!("A must be 2^n × 2^n with n ≥ 1, got {}×{}", a.nrows(), a.ncols())));
        }
        if b.len() != dim {
            return Err(Error::Validation(format!("b has length {}, expected {dim}", b.len())));
        }
        let skew = (&a - a.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if skew >= HERMITIAN_TOL {
            return Err(Error::Validation(format!("A is not Hermitian (max |A − A†| = {skew:e})")));
        }
        let norm = b.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Validation(format!("b has norm {norm}, expected 1")));
        }
        let eig = a.clone().symmetric_eigen();
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let eigenvectors = DMatrix::from_fn(dim, dim, |r, c| eig.eigenvectors[(r, order[c])]);
        if let Some(bad) = eigenvalues.iter().find(|&&l| !(l > 1e-12 && l <= 1.0 + 1e-12)) {
            return Err(Error::Validation(format!("eigenvalue {bad} of A lies outside (0, 1]")));
        }
        Ok(Self { n: dim.trailing_zeros() as usize, a, b, eigenvalues, eigenvectors })
    }

    /// Reads `{"n": …, "a": [[re, im], …] (row-major), "b": [[re, im], …]}`.
    /// `b` is normalized on load.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: SystemFile = serde_json::from_str(text)?;
        let dim = 1usize << file.n.min(MAX_QUBITS);
        if file.n == 0 || file.n > MAX_QUBITS || file.a.len() != dim * dim || file.b.len() != dim {
            return Err(Error::Validation(format!(
                "system file needs n ≥ 1, {} entries in a and {} in b",
                dim * dim,
                dim
            )));
        }
        let a = DMatrix::from_row_slice(dim, dim, &pairs(&file.a));
        let b = DVector::from_vec(pairs(&file.b));
        let norm = b.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Validation("b must be a nonzero finite vector".into()));
        }
        Self::new(a, b / Complex64::new(norm, 0.0))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.a
    }

    pub fn rhs(&self) -> &DVector<Complex64> {
        &self.b
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    pub fn condition_number(&self) -> f64 {
        self.lambda_max() / self.lambda_min()
    }

    /// Coefficients `β_j = ⟨u_j|b⟩` in the sorted eigenbasis.
    pub fn eigen_coefficients(&self) -> DVector<Complex64> {
        self.eigenvectors.adjoint() * &self.b
    }
}

/// `A^{-1} b`, normalized.
pub fn classical_solve(system: &LinearSystem) -> Result<DVector<Complex64>> {
    if system.eigenvalues.iter().any(|l| l.abs() <= 1e-12) {
        return Err(Error::Solver("A is singular".into()));
    }
    let x = system.a.clone().lu().solve(&system.b).ok_or_else(|| Error::Solver("LU solve failed".into()))?;
    let norm = x.norm();
    Ok(x / Complex64::new(norm, 0.0))
}

/// Eigenvalues (ascending) and the matching unitary eigenvector columns.
pub fn spectral_decompose(system: &LinearSystem) -> (Vec<f64>, DMatrix<Complex64>) {
    (system.eigenvalues.clone(), system.eigenvectors.clone())
}

/// `U^{2^i}` for `U = e^{2πiA}`, via the eigendecomposition with phases
/// `2^i·λ_j mod 1`.
pub fn hamiltonian_power(system: &LinearSystem, i: u32) -> DMatrix<Complex64> {
    let scale = 2f64.powi(i as i32);
    let phases = DMatrix::from_diagonal(&DVector::from_iterator(
        system.dim(),
        system.eigenvalues.iter().map(|l| phase(unit_turns(l * scale))),
    ));
    &system.eigenvectors * phases * system.eigenvectors.adjoint()
}

/// Normalized state from a classical vector.
pub fn embed_classical(x: &[Complex64]) -> Result<StateVector> {
    if x.len() < 2 || !x.len().is_power_of_two() {
        return Err(domain!("vector length {} is not a power of two ≥ 2", x.len()));
    }
    StateVector::from_unnormalized(x.to_vec())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HhlParameters {
    pub m: usize,
    pub s: f64,
    pub c: f64,
    pub kappa: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HhlReport {
    pub solution_state: StateVector,
    /// Probability of reading the ancilla as 1.
    pub success_probability: f64,
    /// Probability that Reg.A and Reg.E read zero given a successful ancilla.
    pub uncompute_probability: f64,
    pub fidelity: f64,
    pub classical_solution: Vec<Complex64>,
    pub eigenvalues: Vec<f64>,
    pub parameters: HhlParameters,
}

#[derive(Debug, Clone, Copy)]
pub struct HhlOptions {
    pub diagonal_mode: DiagonalMode,
}

impl Default for HhlOptions {
    fn default() -> Self {
        Self { diagonal_mode: DiagonalMode::Composite }
    }
}

fn layout_spans(m: usize, n: usize) -> Vec<QubitSpan> {
    vec![
        QubitSpan::new(RegisterLabel::Ancilla, 0, 1),
        QubitSpan::new(RegisterLabel::RegA, 1, m),
        QubitSpan::new(RegisterLabel::RegE, 1 + m, m),
        QubitSpan::new(RegisterLabel::RegB, 1 + 2 * m, n),
    ]
}

fn check_run(system: &LinearSystem, m: usize, s: f64) -> Result<()> {
    if !(s > 0.0 && s < 1.0) {
        return Err(param!("s must lie in (0, 1), got {s}"));
    }
    if m == 0 {
        return Err(param!("m must be at least 1"));
    }
    let total = 1 + 2 * m + system.n;
    if total > MAX_QUBITS {
        return Err(param!("{total} qubits exceed the simulator limit of {MAX_QUBITS}"));
    }
    let grid = 2f64.powi(-(m as i32));
    let (lo, hi) = (system.lambda_min(), system.lambda_max());
    if lo < grid - 1e-12 || hi > 1.0 - grid + 1e-12 {
        return Err(param!(
            "eigenvalues [{lo}, {hi}] must lie in [2^-{m}, 1 − 2^-{m}] to avoid phase aliasing"
        ));
    }
    Ok(())
}

/// Phase estimation of `e^{2πiA}`: Reg.E controls, Reg.B target.
pub fn build_hhl_pe(system: &LinearSystem, m: usize) -> Result<Circuit> {
    let n = system.n;
    let reg_e: Vec<usize> = (1 + m..=2 * m).collect();
    let reg_b: Vec<usize> = (1 + 2 * m..1 + 2 * m + n).collect();
    let mut c = Circuit::new(1 + 2 * m + n).with_spans(layout_spans(m, n))?;
    for &q in &reg_e {
        c.push(Gate::h(q))?;
    }
    for (i, &ctrl) in reg_e.iter().enumerate() {
        let qubits = std::iter::once(ctrl).chain(reg_b.iter().copied()).collect();
        c.push(Gate::unitary(qubits, hamiltonian_power(system, i as u32))?)?;
    }
    c.append_mapped(&inverse_qft(m)?, &reg_e)?;
    Ok(c)
}

/// The complete HHL circuit and the constant `C = s·λ_min` it encodes.
pub fn build_hhl_circuit(system: &LinearSystem, m: usize, s: f64, mode: DiagonalMode) -> Result<(Circuit, f64)> {
    check_run(system, m, s)?;
    let c = s * system.lambda_min();
    let oracle = make_hhl_oracle_clamped(m, c)?;
    let total = 1 + 2 * m + system.n;
    let crot_map: Vec<usize> = (0..=2 * m).collect();
    let hhl_pe = build_hhl_pe(system, m)?;
    let crot_pe = build_pe_stage(&oracle, mode)?;
    let mut circuit = hhl_pe.clone();
    circuit.append_mapped(&crot_pe, &crot_map)?;
    circuit.append_mapped(&build_ry_cascade(m)?, &crot_map)?;
    circuit.append_mapped(&crot_pe.inverse(), &crot_map)?;
    circuit.append(&hhl_pe.inverse())?;
    debug_assert_eq!(circuit.num_qubits(), total);
    Ok((circuit, c))
}

pub fn run_hhl(system: &LinearSystem, m: usize, s: f64) -> Result<HhlReport> {
    run_hhl_with(system, m, s, HhlOptions::default())
}

pub fn run_hhl_with(system: &LinearSystem, m: usize, s: f64, options: HhlOptions) -> Result<HhlReport> {
    let (circuit, c) = build_hhl_circuit(system, m, s, options.diagonal_mode)?;
    let b = StateVector::from_amplitudes(system.b.iter().copied().collect())?;
    let initial = StateVector::zero(1 + 2 * m)?.tensor(&b)?;
    let out = circuit.simulate(&initial)?;
    let (selected, success_probability) = out.postselect(0, 1)?;
    let work: Vec<usize> = (0..2 * m).collect();
    let (solution_state, uncompute_probability) = selected.project(&work, 0)?;
    let classical = classical_solve(system)?;
    let reference = StateVector::from_amplitudes(classical.iter().copied().collect())?;
    let fidelity = solution_state.overlap(&reference)?;
    Ok(HhlReport {
        solution_state,
        success_probability,
        uncompute_probability,
        fidelity,
        classical_solution: classical.iter().copied().collect(),
        eigenvalues: system.eigenvalues.clone(),
        parameters: HhlParameters { m, s, c, kappa: system.condition_number() },
    })
}
