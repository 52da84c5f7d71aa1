mod common;

use std::f64::consts::PI;

use common::{effective_rotation, re};
use proptest::prelude::*;
use qcrot::crot::{
    build_crot_circuit, build_crot_circuit_with, build_pe_stage, make_hhl_oracle, make_hhl_oracle_clamped,
    run_crot, run_crot_with, AngleOracle, CrotLayout, DiagonalMode, OracleDescriptor,
};
use qcrot::{Complex64, StateVector};

fn linear(m: usize, stride: f64) -> AngleOracle {
    AngleOracle::from_descriptor(&OracleDescriptor::Linear { m, stride }).unwrap()
}

fn basis_input(m: usize, k: usize) -> StateVector {
    StateVector::zero(1 + m).unwrap().tensor(&StateVector::new_basis_state(m, k).unwrap()).unwrap()
}

#[test]
fn exact_pe_is_deterministic_and_uncomputes() {
    for m in 2..=4 {
        let oracle = linear(m, 3.0);
        let layout = CrotLayout { m };
        let pe = build_pe_stage(&oracle, DiagonalMode::Synthesized).unwrap();
        let full = build_crot_circuit(&oracle, true).unwrap();
        for k in 0..1usize << m {
            let a = (3 * k) % (1 << m);
            let after_pe = pe.simulate(&basis_input(m, k)).unwrap();
            assert!((after_pe.probability(&layout.reg_a(), a).unwrap() - 1.0).abs() < 1e-9);
            let out = full.simulate(&basis_input(m, k)).unwrap();
            let residual = (1.0 - out.probability(&layout.reg_a(), 0).unwrap()).max(0.0).sqrt();
            assert!(residual < 1e-9, "m={m} k={k}");
            let amp = out.amplitude(1 | k << (1 + m));
            assert!((amp - re((4.0 * PI * a as f64 / (1 << m) as f64).sin())).norm() < 1e-9);
        }
    }
}

#[test]
fn grid_example_m3() {
    // θ(k) = k/8 with Reg.E = |5⟩ gives sin(4π·5/8).
    let oracle = linear(3, 1.0);
    let out = build_crot_circuit(&oracle, false).unwrap().simulate(&basis_input(3, 5)).unwrap();
    let amp: f64 = (0..out.dim()).filter(|i| i & 1 == 1).map(|i| out.amplitude(i).re).sum();
    assert!((amp - (4.0 * PI * 5.0 / 8.0).sin()).abs() < 1e-9);
}

#[test]
fn off_grid_example_matches_pe_weighting() {
    // θ(k) = k/32 at m = 3 is not on the grid; the ancilla amplitude on
    // Reg.A = 0 is the PE-weighted average of sin(4πa/8).
    let oracle = linear(3, 0.25);
    let out = build_crot_circuit(&oracle, true).unwrap().simulate(&basis_input(3, 5)).unwrap();
    let amp = out.amplitude(1 | 5 << 4);
    assert!((amp - re(effective_rotation(5.0 / 32.0, 3))).norm() < 1e-9);
    assert!((amp.re - (5.0 * PI / 8.0).sin()).abs() > 1e-3);
}

#[test]
fn zero_oracle_leaves_ancilla() {
    let oracle = AngleOracle::from_descriptor(&OracleDescriptor::Zero { m: 3 }).unwrap();
    let out = build_crot_circuit(&oracle, true).unwrap().simulate(&basis_input(3, 6)).unwrap();
    assert!(out.probability(&[0], 1).unwrap() < 1e-20);
}

#[test]
fn success_probability_for_exact_inputs() {
    let oracle = linear(4, 1.0);
    for k in [1usize, 3, 7, 10] {
        let r = run_crot(&oracle, &StateVector::new_basis_state(4, k).unwrap()).unwrap();
        let expected = (4.0 * PI * k as f64 / 16.0).sin().powi(2);
        assert!((r.success_probability - expected).abs() < 1e-9);
    }
}

#[test]
fn superposition_weights_follow_rotation() {
    let m = 4;
    let oracle = AngleOracle::from_thetas(m, (0..16).map(|k| (k % 3) as f64 / 16.0).collect()).unwrap();
    assert!(oracle.is_exact());
    let betas: Vec<Complex64> = (0..16).map(|k| Complex64::new(1.0 + k as f64, 0.5 - k as f64 * 0.1)).collect();
    let input = StateVector::from_unnormalized(betas.clone()).unwrap();
    let r = run_crot(&oracle, &input).unwrap();
    let expected: Vec<Complex64> =
        (0..16).map(|k| betas[k] * re((4.0 * PI * oracle.theta(k)).sin())).collect();
    let expected = StateVector::from_unnormalized(expected).unwrap();
    assert!(r.output_state.max_deviation(&expected).unwrap() < 1e-9);
    assert!(r.reg_a_residual < 1e-9);
    let p: f64 = (0..16).map(|k| input.amplitude(k).norm_sqr() * oracle.amplitude(k).powi(2)).sum();
    assert!((r.success_probability - p).abs() < 1e-9);
}

#[test]
fn hhl_oracle_superposition_matches_pe_weighted_inverse() {
    let m = 5;
    let c = 1.0 / 32.0;
    let oracle = make_hhl_oracle(m, c).unwrap();
    let ks = [3usize, 8, 13, 21];
    let mut amps = vec![re(0.0); 32];
    for (i, &k) in ks.iter().enumerate() {
        amps[k] = Complex64::new(0.3 + 0.1 * i as f64, 0.2);
    }
    let input = StateVector::from_unnormalized(amps.clone()).unwrap();
    let r = run_crot(&oracle, &input).unwrap();
    let predicted: Vec<Complex64> =
        (0..32).map(|k| amps[k] * re(effective_rotation(oracle.theta(k), m))).collect();
    let predicted = StateVector::from_unnormalized(predicted).unwrap();
    assert!(r.output_state.overlap(&predicted).unwrap() > 1.0 - 1e-9);
}

#[test]
fn composite_and_synthesized_agree() {
    let oracle = make_hhl_oracle_clamped(3, 0.3).unwrap();
    let a = build_crot_circuit_with(&oracle, true, DiagonalMode::Synthesized).unwrap().unitary().unwrap();
    let b = build_crot_circuit_with(&oracle, true, DiagonalMode::Composite).unwrap().unitary().unwrap();
    assert!(common::max_dist(&a, &b) < 1e-10);
}

#[test]
fn inexact_error_shrinks_with_m() {
    let c = 0.2;
    let mut previous = f64::INFINITY;
    for m in [4usize, 6, 8, 10] {
        let n = 1usize << m;
        let oracle = make_hhl_oracle_clamped(m, c).unwrap();
        let mut err = 0.0;
        for x in [0.3, 0.45, 0.6, 0.85] {
            let k = (x * n as f64).round() as usize;
            let r = run_crot_with(&oracle, &StateVector::new_basis_state(m, k).unwrap(), DiagonalMode::Composite)
                .unwrap();
            err += (r.success_probability - oracle.amplitude(k).powi(2)).abs() / 4.0;
        }
        assert!(err < previous, "m={m}: {err} ≥ {previous}");
        previous = err;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exact_random_oracles(m in 2usize..=4, seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = 1usize << m;
        let grid: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
        let oracle = AngleOracle::from_thetas(m, grid.iter().map(|&a| a as f64 / n as f64).collect()).unwrap();
        let circuit = build_crot_circuit_with(&oracle, true, DiagonalMode::Composite).unwrap();
        let k = rng.random_range(0..n);
        let out = circuit.simulate(&basis_input(m, k)).unwrap();
        let amp = out.amplitude(1 | k << (1 + m));
        prop_assert!((amp - re((4.0 * PI * grid[k] as f64 / n as f64).sin())).norm() < 1e-9);
    }
}
