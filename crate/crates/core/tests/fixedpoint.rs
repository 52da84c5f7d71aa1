use proptest::prelude::*;
use qcrot::fixedpoint::{
    approx_inverse_amplitude, fidelity_model, mean_fidelities, run_sweep, sample_betas, sample_spectrum,
    trial_rng, truncate_bits, write_csv, SweepConfig,
};
use qcrot::Complex64;

/// Integer-domain truncation, independent of the float implementation.
fn truncate_oracle(x: f64, m: u32) -> f64 {
    if x == 1.0 {
        return 1.0;
    }
    let k = (x * f64::from(1u32 << m)) as u64;
    k.max(1) as f64 / f64::from(1u32 << m)
}

fn chain_oracle(lambda: f64, m: u32, c: f64) -> f64 {
    let lt = truncate_oracle(lambda, m);
    let a = (c / lt).min(1.0).asin() / std::f64::consts::FRAC_PI_2;
    truncate_oracle((truncate_oracle(a, m) * std::f64::consts::FRAC_PI_2).sin(), m)
}

fn config(n: usize, m: usize, kappa: f64, s: f64, trials: usize) -> SweepConfig {
    SweepConfig { n, m, kappa, s, trials, seed: 2024, uniform_b: false }
}

fn grid_means(configs: &[SweepConfig]) -> Vec<f64> {
    let rows = run_sweep(configs).unwrap();
    mean_fidelities(configs, &rows)
}

proptest! {
    #[test]
    fn truncation_matches_integer_oracle(x in 0.0f64..=1.0, m in 1u32..=20) {
        prop_assert_eq!(truncate_bits(x, m as usize).unwrap(), truncate_oracle(x, m));
    }

    #[test]
    fn chain_matches_oracle(lambda in 0.05f64..=1.0, m in 2u32..=16, frac in 0.0f64..=1.0) {
        let c = frac * 0.05;
        let got = approx_inverse_amplitude(lambda, m as usize, c).unwrap();
        prop_assert_eq!(got, chain_oracle(lambda, m, c));
    }

    #[test]
    fn fidelity_is_bounded(n in 1usize..=4, m in 1usize..=12, kappa in 1.0f64..200.0, s in 0.01f64..0.999, seed in any::<u64>()) {
        let cfg = SweepConfig { seed, ..config(n, m, kappa, s, 1) };
        let mut rng = trial_rng(seed, 0);
        let spectrum = sample_spectrum(n, kappa, &mut rng);
        let betas = sample_betas(spectrum.len(), false, &mut rng);
        let f = fidelity_model(&cfg, &spectrum, &betas).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&f));
    }

    #[test]
    fn fidelity_ignores_global_phase(seed in any::<u64>(), phi in 0.0f64..6.3, m in 2usize..10) {
        let cfg = config(3, m, 20.0, 0.9, 1);
        let mut rng = trial_rng(seed, 0);
        let spectrum = sample_spectrum(3, 20.0, &mut rng);
        let betas = sample_betas(8, false, &mut rng);
        let rotated: Vec<Complex64> = betas.iter().map(|b| b * Complex64::from_polar(1.0, phi)).collect();
        let a = fidelity_model(&cfg, &spectrum, &betas).unwrap();
        let b = fidelity_model(&cfg, &spectrum, &rotated).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn spectrum_bounds_over_many_samples() {
    for trial in 0..1000 {
        let mut rng = trial_rng(7, trial);
        let spectrum = sample_spectrum(3, 8.0, &mut rng);
        assert_eq!(spectrum.len(), 8);
        assert!(spectrum.iter().all(|&l| (0.125..=1.0).contains(&l)));
        assert_eq!(spectrum.iter().filter(|&&l| l == 1.0).count(), 1);
        assert!(spectrum.contains(&0.125));
    }
}

#[test]
fn convergence_at_thirty_bits() {
    let mut rng = trial_rng(3, 0);
    for _ in 0..500 {
        let lambda: f64 = rand::Rng::random_range(&mut rng, 0.01..=1.0);
        let c = 0.01 * 0.99;
        let got = approx_inverse_amplitude(lambda, 30, c).unwrap();
        assert!((got - c / lambda).abs() < 1e-6, "λ={lambda}: {got} vs {}", c / lambda);
    }
}

#[test]
fn unit_condition_number_is_perfect() {
    let grid: Vec<SweepConfig> = (1..=12).map(|m| config(4, m, 1.0, 0.5, 5)).collect();
    assert!(run_sweep(&grid).unwrap().iter().all(|r| (r.fidelity - 1.0).abs() < 1e-12));
}

#[test]
fn sweep_determinism_and_csv() {
    let grid = vec![config(5, 6, 10.0, 0.9, 20), config(5, 8, 100.0, 0.99, 10)];
    let a = run_sweep(&grid).unwrap();
    let b = run_sweep(&grid).unwrap();
    assert_eq!(a, b);
    let (mut x, mut y) = (Vec::new(), Vec::new());
    write_csv(&a, &mut x).unwrap();
    write_csv(&b, &mut y).unwrap();
    assert_eq!(x, y);
    let text = String::from_utf8(x).unwrap();
    assert!(text.starts_with("n,m,kappa,s,trial,fidelity\n"));
    assert_eq!(text.lines().count(), 31);
    assert!(!text.contains('\r'));
    // Trial rows do not depend on the rest of the grid.
    let alone = run_sweep(&grid[1..]).unwrap();
    assert_eq!(alone, a[20..]);
}

#[test]
fn fidelity_rises_with_m() {
    let grid: Vec<SweepConfig> = (4..=16).step_by(4).map(|m| config(10, m, 10.0, 0.99, 100)).collect();
    let means = grid_means(&grid);
    assert!(means.windows(2).all(|w| w[1] >= w[0]), "{means:?}");
    assert!(means[means.len() - 1] > 0.9999, "{means:?}");
}

#[test]
fn larger_kappa_needs_more_bits() {
    let kappas = [10.0, 100.0, 1000.0];
    let needed: Vec<usize> = kappas
        .iter()
        .map(|&kappa| {
            let grid: Vec<SweepConfig> = (4..=16).map(|m| config(10, m, kappa, 0.99, 40)).collect();
            let means = grid_means(&grid);
            means.iter().position(|&f| f >= 0.99).map_or(usize::MAX, |i| i + 4)
        })
        .collect();
    assert!(needed.windows(2).all(|w| w[0] <= w[1]), "{needed:?}");
    assert!(needed[0] < needed[2], "{needed:?}");
}
