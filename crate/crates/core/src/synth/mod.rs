//! Circuit synthesis routines.
//!
//! Layout conventions (all little-endian):
//! * diagonal networks act on qubits `0..m`, phase index `k = Σ bit(q_j)·2^j`;
//! * controlled variants put the control on qubit 0 and the diagonal on
//!   `1..=m`;
//! * [`multi_controlled_rz`] uses controls `0..m`, target `m`, ancilla `m+1`.

mod cubes;
mod diagonal;
mod mcrz;
mod qft;

pub use cubes::{merge_cubes, synthesize_cd_product, CdProduct, Cube};
pub use diagonal::{
    gray_code, synthesize_controlled_diagonal, synthesize_diagonal, walsh_angles, SynthesizedDiagonal,
};
pub use mcrz::{multi_controlled_rz, multi_controlled_rz_gate_bound};
pub use qft::{inverse_qft, qft};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::units::{phase, unit_turns};

/// Angles whose canonical value is below this are treated as zero when
/// deciding whether to emit a rotation.
pub const ZERO_ANGLE_TOL: f64 = 1e-13;

/// Phases `θ_0 … θ_{2^m−1}` (turns, canonicalized to [0, 1)) of
/// `D = diag(e^{2πiθ_k})`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalSpec {
    width: usize,
    phases: Vec<f64>,
}

impl DiagonalSpec {
    pub fn new(phases: Vec<f64>) -> Result<Self> {
        let n = phases.len();
        if n < 2 || !n.is_power_of_two() {
            return Err(domain!("diagonal needs 2^m phases with m ≥ 1, got {n}"));
        }
        if let Some(bad) = phases.iter().find(|t| !t.is_finite()) {
            return Err(domain!("non-finite phase {bad}"));
        }
        Ok(Self { width: n.trailing_zeros() as usize, phases: phases.into_iter().map(unit_turns).collect() })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// Phases of `D^{2^p}`: each θ doubled `p` times, mod 1 (exact in
    /// binary floating point).
    pub fn power(&self, p: u32) -> DiagonalSpec {
        let scale = 2f64.powi(p as i32);
        Self { width: self.width, phases: self.phases.iter().map(|t| unit_turns(t * scale)).collect() }
    }

    pub fn matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.phases.len(),
            self.phases.iter().map(|&t| phase(t)),
        ))
    }

    /// Dense controlled-`D` with the control on qubit 0.
    pub fn controlled_matrix(&self) -> DMatrix<Complex64> {
        let dim = 2 * self.phases.len();
        let diag = (0..dim).map(|i| if i & 1 == 1 { phase(self.phases[i >> 1]) } else { Complex64::new(1.0, 0.0) });
        DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(dim, diag))
    }

    /// Number of distinct phase values (exact comparison).
    pub fn distinct_phases(&self) -> usize {
        let mut bits: Vec<u64> = self.phases.iter().map(|t| t.to_bits()).collect();
        bits.sort_unstable();
        bits.dedup();
        bits.len()
    }
}
