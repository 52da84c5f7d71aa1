#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use qcrot::Complex64;

pub fn cis(turns: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * turns)
}

pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `diag(e^{2πiθ_k})`.
pub fn diag_matrix(phases: &[f64]) -> DMatrix<Complex64> {
    let n = phases.len();
    DMatrix::from_fn(n, n, |i, j| if i == j { cis(phases[i]) } else { re(0.0) })
}

/// Controlled diagonal with the control as the least significant qubit.
pub fn controlled_diag_matrix(phases: &[f64]) -> DMatrix<Complex64> {
    let n = 2 * phases.len();
    DMatrix::from_fn(n, n, |i, j| match (i == j, i & 1) {
        (false, _) => re(0.0),
        (true, 0) => re(1.0),
        (true, _) => cis(phases[i >> 1]),
    })
}

/// `min_φ max |a − e^{iφ} b|` estimated by aligning on the largest entry of `b`.
pub fn global_phase_distance(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    let (idx, _) = b.iter().enumerate().max_by(|x, y| x.1.norm().total_cmp(&y.1.norm())).unwrap();
    let ratio = a.as_slice()[idx] / b.as_slice()[idx];
    let phase = ratio / ratio.norm();
    a.iter().zip(b.iter()).map(|(x, y)| (x - phase * y).norm()).fold(0.0, f64::max)
}

pub fn max_dist(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Outcome distribution of ideal phase estimation with `m` bits for an
/// eigenphase `phase` (turns), from the explicit geometric sum.
pub fn pe_distribution(phase: f64, m: usize) -> Vec<f64> {
    let n = 1usize << m;
    (0..n)
        .map(|a| {
            let delta = phase - a as f64 / n as f64;
            let amp: Complex64 = (0..n).map(|x| cis(x as f64 * delta)).sum::<Complex64>() / n as f64;
            amp.norm_sqr()
        })
        .collect()
}

/// Ancilla `|1⟩` amplitude left on Reg.A = 0 after the rotation module with
/// uncompute, for an input index whose angle is `theta`.
pub fn effective_rotation(theta: f64, m: usize) -> f64 {
    let n = 1usize << m;
    pe_distribution(theta, m).iter().enumerate().map(|(a, p)| p * (4.0 * PI * a as f64 / n as f64).sin()).sum()
}

/// HHL rotation angle for index `e`, with `C/λ̂` saturated at 1.
pub fn hhl_theta(e: usize, m: usize, c: f64) -> f64 {
    let lambda_hat = e.max(1) as f64 / (1u64 << m) as f64;
    (c / lambda_hat).min(1.0).asin() / (4.0 * PI)
}

/// Unnormalized Reg.B amplitude of the HHL circuit in the eigenbasis:
/// `β_j Σ_e P_e(λ_j) g(e)` where `g` is [`effective_rotation`].
pub fn hhl_predicted_weights(eigenvalues: &[f64], betas: &[Complex64], m: usize, c: f64) -> Vec<Complex64> {
    let g: Vec<f64> = (0..1usize << m).map(|e| effective_rotation(hhl_theta(e, m, c), m)).collect();
    eigenvalues
        .iter()
        .zip(betas)
        .map(|(&l, b)| {
            let w: f64 = pe_distribution(l, m).iter().zip(&g).map(|(p, g)| p * g).sum();
            b * w
        })
        .collect()
}

pub fn normalize(v: &[Complex64]) -> Vec<Complex64> {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter().map(|z| z / n).collect()
}

/// Hermitian matrix `V diag(λ) V†` from a random unitary built by
/// Gram-Schmidt on seeded Gaussian columns.
pub fn hermitian_with_spectrum(eigenvalues: &[f64], seed: u64) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    use rand::{Rng, SeedableRng};
    let n = eigenvalues.len();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut cols: Vec<DVector<Complex64>> = Vec::new();
    while cols.len() < n {
        let mut v = DVector::from_fn(n, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        for u in &cols {
            let proj = u.dotc(&v);
            v -= u * proj;
        }
        let norm = v.norm();
        if norm > 1e-6 {
            cols.push(v / re(norm));
        }
    }
    let vmat = DMatrix::from_columns(&cols);
    let d = DMatrix::from_diagonal(&DVector::from_iterator(n, eigenvalues.iter().map(|&l| re(l))));
    let a = &vmat * d * vmat.adjoint();
    // Symmetrize away rounding so the Hermitian check is exact.
    let a = (&a + a.adjoint()) * re(0.5);
    (a, vmat)
}
