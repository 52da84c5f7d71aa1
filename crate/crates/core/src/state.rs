//! Dense statevector simulation.
//!
//! Qubit 0 is the least significant bit of a basis index. A register of
//! qubits `[q_0, q_1, …]` reads the value `Σ_j bit(q_j)·2^j`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::units;

/// Largest register the dense simulator accepts (2^24 amplitudes, 256 MiB).
pub const MAX_QUBITS: usize = 24;

/// Tolerance used to accept caller-supplied matrices as unitary.
pub const UNITARY_TOL: f64 = 1e-10;

/// Outcomes below this probability are treated as impossible.
pub const POSTSELECT_MIN_PROBABILITY: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegisterLabel {
    Ancilla,
    RegA,
    RegE,
    RegB,
    Aux,
}

/// A contiguous, labelled block of qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QubitSpan {
    pub label: RegisterLabel,
    pub offset: usize,
    pub width: usize,
}

impl QubitSpan {
    pub fn new(label: RegisterLabel, offset: usize, width: usize) -> Self {
        Self { label, offset, width }
    }

    pub fn qubits(&self) -> Vec<usize> {
        (self.offset..self.offset + self.width).collect()
    }

    /// Qubit `i` of the span (its bit of weight `2^i`).
    pub fn qubit(&self, i: usize) -> usize {
        debug_assert!(i < self.width);
        self.offset + i
    }

    /// Checks that `spans` are disjoint and cover exactly `0..num_qubits`.
    pub fn validate_layout(spans: &[QubitSpan], num_qubits: usize) -> Result<()> {
        let mut owner = vec![None; num_qubits];
        for span in spans {
            for q in span.qubits() {
                match owner.get_mut(q) {
                    None => return Err(domain!("span {:?} exceeds {num_qubits} qubits", span.label)),
                    Some(Some(other)) => {
                        return Err(domain!("qubit {q} claimed by {other:?} and {:?}", span.label))
                    }
                    Some(slot) => *slot = Some(span.label),
                }
            }
        }
        if let Some(q) = owner.iter().position(Option::is_none) {
            return Err(domain!("qubit {q} belongs to no span"));
        }
        Ok(())
    }
}

/// Dense amplitude vector over `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

fn check_qubit_count(num_qubits: usize) -> Result<()> {
    if num_qubits > MAX_QUBITS {
        return Err(domain!("{num_qubits} qubits exceeds the dense simulator limit of {MAX_QUBITS}"));
    }
    Ok(())
}

/// Squared 2-norm with a fixed left-to-right reduction order.
fn sum_norm_sqr(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

/// Returns `Σ_j bit_j(value)·2^{qubits[j]}`, i.e. scatters the bits of
/// `value` onto the given qubit positions.
pub(crate) fn scatter_bits(value: usize, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .enumerate()
        .filter(|(j, _)| value >> j & 1 == 1)
        .fold(0, |acc, (_, &q)| acc | 1 << q)
}

/// Inverse of [`scatter_bits`]: reads the register value stored on `qubits`.
pub(crate) fn gather_bits(index: usize, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .enumerate()
        .fold(0, |acc, (j, &q)| acc | ((index >> q) & 1) << j)
}

fn mask_of(qubits: &[usize]) -> usize {
    qubits.iter().fold(0, |m, &q| m | 1 << q)
}

/// True when `m` is square and `m†m = I` entrywise within `tol`.
pub fn is_unitary(m: &DMatrix<Complex64>, tol: f64) -> bool {
    if !m.is_square() {
        return false;
    }
    let prod = m.adjoint() * m;
    let n = m.nrows();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let target = if i == j { 1.0 } else { 0.0 };
            (prod[(i, j)] - Complex64::new(target, 0.0)).norm() <= tol
        })
    })
}

impl StateVector {
    /// |0…0⟩ over `num_qubits` qubits.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::new_basis_state(num_qubits, 0)
    }

    pub fn new_basis_state(num_qubits: usize, index: usize) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(domain!("basis index {index} out of range for {num_qubits} qubits"));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { num_qubits, amplitudes })
    }

    /// Wraps amplitudes that are already normalized (within 1e-9).
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(domain!("amplitude count {dim} is not a power of two"));
        }
        let num_qubits = dim.trailing_zeros() as usize;
        check_qubit_count(num_qubits)?;
        let norm = sum_norm_sqr(&amplitudes);
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::Validation(format!("state has squared norm {norm}, expected 1")));
        }
        Ok(Self { num_qubits, amplitudes })
    }

    /// Normalizes `amplitudes` and wraps them.
    pub fn from_unnormalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = sum_norm_sqr(&amplitudes).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(domain!("cannot normalize a zero or non-finite vector"));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Self::from_amplitudes(amplitudes)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        sum_norm_sqr(&self.amplitudes)
    }

    /// `self ⊗ high`: `self` occupies the low qubits, `high` the qubits above.
    pub fn tensor(&self, high: &StateVector) -> Result<StateVector> {
        let num_qubits = self.num_qubits + high.num_qubits;
        check_qubit_count(num_qubits)?;
        let amplitudes = high
            .amplitudes
            .iter()
            .flat_map(|h| self.amplitudes.iter().map(move |l| l * h))
            .collect();
        Ok(StateVector { num_qubits, amplitudes })
    }

    fn check_qubits(&self, qubits: &[usize]) -> Result<()> {
        for (i, &q) in qubits.iter().enumerate() {
            if q >= self.num_qubits {
                return Err(domain!("qubit {q} out of range for {} qubits", self.num_qubits));
            }
            if qubits[..i].contains(&q) {
                return Err(domain!("qubit {q} listed twice"));
            }
        }
        Ok(())
    }

    fn check_disjoint(&self, controls: &[usize], targets: &[usize]) -> Result<()> {
        let mut all = controls.to_vec();
        all.extend_from_slice(targets);
        self.check_qubits(&all)
            .map_err(|_| domain!("controls {controls:?} and targets {targets:?} overlap or are out of range"))
    }

    /// Applies `matrix` to `targets` on every basis state whose `controls`
    /// are all 1. `matrix` must be unitary and of dimension `2^|targets|`.
    pub fn apply_controlled_unitary(
        &mut self,
        matrix: &DMatrix<Complex64>,
        controls: &[usize],
        targets: &[usize],
    ) -> Result<()> {
        self.check_disjoint(controls, targets)?;
        if targets.is_empty() {
            return Err(domain!("controlled unitary needs at least one target"));
        }
        let dim = 1usize << targets.len();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(domain!(
                "matrix is {}x{}, expected {dim}x{dim} for {} targets",
                matrix.nrows(),
                matrix.ncols(),
                targets.len()
            ));
        }
        if !is_unitary(matrix, UNITARY_TOL) {
            return Err(Error::Validation("matrix is not unitary within 1e-10".into()));
        }
        self.apply_matrix_unchecked(matrix, controls, targets);
        Ok(())
    }

    pub(crate) fn apply_matrix_unchecked(
        &mut self,
        matrix: &DMatrix<Complex64>,
        controls: &[usize],
        targets: &[usize],
    ) {
        let dim = 1usize << targets.len();
        let offsets: Vec<usize> = (0..dim).map(|k| scatter_bits(k, targets)).collect();
        let tmask = mask_of(targets);
        let cmask = mask_of(controls);
        let mut buf = vec![Complex64::new(0.0, 0.0); dim];
        for base in 0..self.amplitudes.len() {
            if base & tmask != 0 || base & cmask != cmask {
                continue;
            }
            for (b, &off) in buf.iter_mut().zip(&offsets) {
                *b = self.amplitudes[base | off];
            }
            for (row, &off) in offsets.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (col, b) in buf.iter().enumerate() {
                    acc += matrix[(row, col)] * b;
                }
                self.amplitudes[base | off] = acc;
            }
        }
    }

    /// Applies a 2×2 matrix `[[m00, m01], [m10, m11]]` to `target` where all
    /// bits in `control_mask` are set.
    pub(crate) fn apply_single(&mut self, m: [[Complex64; 2]; 2], target: usize, control_mask: usize) {
        let bit = 1usize << target;
        for i in 0..self.amplitudes.len() {
            if i & bit != 0 || i & control_mask != control_mask {
                continue;
            }
            let a0 = self.amplitudes[i];
            let a1 = self.amplitudes[i | bit];
            self.amplitudes[i] = m[0][0] * a0 + m[0][1] * a1;
            self.amplitudes[i | bit] = m[1][0] * a0 + m[1][1] * a1;
        }
    }

    /// Multiplies every amplitude whose index has all bits of `mask` set by
    /// `e^{2πi·turns}`.
    pub(crate) fn apply_phase_mask(&mut self, mask: usize, turns: f64) {
        let p = units::phase(turns);
        for (i, a) in self.amplitudes.iter_mut().enumerate() {
            if i & mask == mask {
                *a *= p;
            }
        }
    }

    /// Controlled bit flip of `target` (X, CNOT, Toffoli).
    pub(crate) fn apply_flip(&mut self, target: usize, control_mask: usize) {
        let bit = 1usize << target;
        for i in 0..self.amplitudes.len() {
            if i & bit == 0 && i & control_mask == control_mask {
                self.amplitudes.swap(i, i | bit);
            }
        }
    }

    pub(crate) fn apply_swap(&mut self, a: usize, b: usize, control_mask: usize) {
        let (ba, bb) = (1usize << a, 1usize << b);
        for i in 0..self.amplitudes.len() {
            if i & ba != 0 && i & bb == 0 && i & control_mask == control_mask {
                self.amplitudes.swap(i, (i & !ba) | bb);
            }
        }
    }

    /// Multiplies each basis state whose `controls` are set by
    /// `e^{2πi·phases[k]}`, where `k` is the value held on `targets`.
    pub fn apply_diagonal_phases(&mut self, phases: &[f64], targets: &[usize], controls: &[usize]) -> Result<()> {
        self.check_disjoint(controls, targets)?;
        if phases.len() != 1usize << targets.len() {
            return Err(domain!(
                "{} phases supplied for a {}-qubit diagonal (need {})",
                phases.len(),
                targets.len(),
                1usize << targets.len()
            ));
        }
        self.apply_diagonal_unchecked(phases, targets, controls);
        Ok(())
    }

    pub(crate) fn apply_diagonal_unchecked(&mut self, phases: &[f64], targets: &[usize], controls: &[usize]) {
        let factors: Vec<Complex64> = phases.iter().map(|&t| units::phase(t)).collect();
        let cmask = mask_of(controls);
        for (i, a) in self.amplitudes.iter_mut().enumerate() {
            if i & cmask == cmask {
                *a *= factors[gather_bits(i, targets)];
            }
        }
    }

    /// Probability that the register on `qubits` reads `value`.
    pub fn probability(&self, qubits: &[usize], value: usize) -> Result<f64> {
        self.check_qubits(qubits)?;
        let mask = mask_of(qubits);
        let want = scatter_bits(value, qubits);
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask == want)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Projects the register on `qubits` onto `value`, removes those qubits,
    /// and renormalizes. Returns the reduced state and the probability of the
    /// projection (its squared norm before renormalization).
    pub fn project(&self, qubits: &[usize], value: usize) -> Result<(StateVector, f64)> {
        self.check_qubits(qubits)?;
        if value >> qubits.len() != 0 {
            return Err(domain!("value {value} does not fit in {} qubits", qubits.len()));
        }
        let mask = mask_of(qubits);
        let want = scatter_bits(value, qubits);
        let kept: Vec<usize> = (0..self.num_qubits).filter(|q| mask >> q & 1 == 0).collect();
        let mut reduced = vec![Complex64::new(0.0, 0.0); 1usize << kept.len()];
        for (r, slot) in reduced.iter_mut().enumerate() {
            *slot = self.amplitudes[scatter_bits(r, &kept) | want];
        }
        let probability = sum_norm_sqr(&reduced);
        if probability < POSTSELECT_MIN_PROBABILITY {
            return Err(Error::PostSelectionImpossible { probability });
        }
        let norm = probability.sqrt();
        reduced.iter_mut().for_each(|a| *a /= norm);
        Ok((StateVector { num_qubits: kept.len(), amplitudes: reduced }, probability))
    }

    /// Post-selects `qubit` on `outcome`; the qubit is removed from the
    /// returned state.
    pub fn postselect(&self, qubit: usize, outcome: u8) -> Result<(StateVector, f64)> {
        if outcome > 1 {
            return Err(domain!("outcome must be 0 or 1, got {outcome}"));
        }
        self.project(&[qubit], outcome as usize)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.num_qubits != other.num_qubits {
            return Err(domain!(
                "overlap between {}-qubit and {}-qubit states",
                self.num_qubits,
                other.num_qubits
            ));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩|`.
    pub fn overlap(&self, other: &StateVector) -> Result<f64> {
        self.inner(other).map(|c| c.norm())
    }

    /// Largest entrywise deviation `max_i |a_i − b_i|`.
    pub fn max_deviation(&self, other: &StateVector) -> Result<f64> {
        if self.num_qubits != other.num_qubits {
            return Err(domain!("comparing states of different sizes"));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}
