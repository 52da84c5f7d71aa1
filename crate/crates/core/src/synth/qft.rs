use crate::circuit::{Circuit, Gate};
use crate::error::{domain, Result};

/// Quantum Fourier transform on `m` qubits,
/// `|a⟩ ↦ 2^{−m/2} Σ_k e^{2πi·ak/2^m} |k⟩`, including the final swaps.
pub fn qft(m: usize) -> Result<Circuit> {
    if m < 1 {
        return Err(domain!("QFT needs at least one qubit"));
    }
    let mut c = Circuit::new(m);
    for j in (0..m).rev() {
        c.add(Gate::h(j));
        for k in (0..j).rev() {
            c.add(Gate::cphase(k, j, 1.0 / (1u64 << (j - k + 1)) as f64));
        }
    }
    for j in 0..m / 2 {
        c.add(Gate::swap(j, m - 1 - j));
    }
    Ok(c)
}

/// Inverse QFT: H + controlled-phase count `m(m+1)/2`, plus `⌊m/2⌋` swaps.
pub fn inverse_qft(m: usize) -> Result<Circuit> {
    Ok(qft(m)?.inverse())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{max_entry_distance, GateClass};
    use nalgebra::DMatrix;
    use num_complex::Complex64;

    fn dft_adjoint(m: usize) -> DMatrix<Complex64> {
        let n = 1usize << m;
        DMatrix::from_fn(n, n, |a, k| {
            Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * (a * k) as f64 / n as f64) / (n as f64).sqrt()
        })
    }

    #[test]
    fn single_qubit_is_hadamard() {
        let c = inverse_qft(1).unwrap();
        assert_eq!(c.gates(), &[Gate::h(0)]);
    }

    #[test]
    fn three_qubit_counts() {
        let census = inverse_qft(3).unwrap().census();
        assert_eq!(census.sum(&[GateClass::H, GateClass::Cphase]), 6);
        assert_eq!(census.get(GateClass::Swap), 1);
    }

    #[test]
    fn matches_dense_dft() {
        for m in 1..=5 {
            let u = inverse_qft(m).unwrap().unitary().unwrap();
            let d = max_entry_distance(&u, &dft_adjoint(m));
            assert!(d < 1e-12, "m={m}: distance {d}");
        }
    }

    #[test]
    fn rejects_zero_width() {
        assert!(inverse_qft(0).is_err());
    }
}
