//! Fixed-point model of HHL fidelity: eigenvalues, arcsin values and sines
//! are truncated to `m` fractional bits and the resulting solution is
//! compared with the exact one in the eigenbasis.

use std::io::Write;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, param, Error, Result};

/// Widest `m` for which `2^m` stays exact in an `f64` mantissa.
pub const MAX_BITS: usize = 52;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n: usize,
    pub m: usize,
    pub kappa: f64,
    pub s: f64,
    pub trials: usize,
    pub seed: u64,
    /// Use `β_j = 1/√N` instead of normalized complex Gaussian weights.
    #[serde(default)]
    pub uniform_b: bool,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > 24 {
            return Err(param!("n must be in 1..=24, got {}", self.n));
        }
        if self.m == 0 || self.m > MAX_BITS {
            return Err(param!("m must be in 1..={MAX_BITS}, got {}", self.m));
        }
        if !(self.kappa >= 1.0 && self.kappa.is_finite()) {
            return Err(param!("kappa must be a finite value ≥ 1, got {}", self.kappa));
        }
        if !(self.s > 0.0 && self.s < 1.0) {
            return Err(param!("s must lie in (0, 1), got {}", self.s));
        }
        if self.trials == 0 {
            return Err(param!("trials must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub m: usize,
    pub kappa: f64,
    pub s: f64,
    pub trial: usize,
    pub fidelity: f64,
}

/// `2^n` eigenvalues: one pinned at 1, one at `1/κ`, the rest uniform on
/// `[1/κ, 1]`, shuffled.
pub fn sample_spectrum(n: usize, kappa: f64, rng: &mut impl Rng) -> Vec<f64> {
    let dim = 1usize << n;
    let lo = 1.0 / kappa;
    let mut spectrum = Vec::with_capacity(dim);
    spectrum.push(1.0);
    spectrum.push(lo);
    for _ in 2..dim {
        spectrum.push(if lo < 1.0 { rng.random_range(lo..=1.0) } else { 1.0 });
    }
    spectrum.shuffle(rng);
    spectrum
}

/// Unit-norm weights: complex standard normal, or uniform `1/√N`.
pub fn sample_betas(dim: usize, uniform: bool, rng: &mut impl Rng) -> Vec<Complex64> {
    if uniform {
        return vec![Complex64::new(1.0 / (dim as f64).sqrt(), 0.0); dim];
    }
    let mut betas: Vec<Complex64> =
        (0..dim).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
    let norm = betas.iter().map(|b| b.norm_sqr()).sum::<f64>().sqrt();
    betas.iter_mut().for_each(|b| *b /= norm);
    betas
}

/// `floor(x·2^m)/2^m`, with 0 mapped to `2^{−m}` and 1 kept as 1.
pub fn truncate_bits(x: f64, m: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(domain!("truncate_bits needs x in [0, 1], got {x}"));
    }
    if m == 0 || m > MAX_BITS {
        return Err(domain!("bit count must be in 1..={MAX_BITS}, got {m}"));
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    let scale = (1u64 << m) as f64;
    let t = (x * scale).floor() / scale;
    Ok(if t == 0.0 { 1.0 / scale } else { t })
}

fn inverse_chain(arg: f64, m: usize) -> Result<f64> {
    let a = arg.asin();
    let half_pi = std::f64::consts::FRAC_PI_2;
    let a_trunc = truncate_bits((a / half_pi).min(1.0), m)? * half_pi;
    truncate_bits(a_trunc.sin().clamp(0.0, 1.0), m)
}

fn check_lambda(lambda: f64, c: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(domain!("eigenvalue {lambda} outside (0, 1]"));
    }
    if !(c >= 0.0 && c.is_finite()) {
        return Err(domain!("C must be a finite non-negative number, got {c}"));
    }
    Ok(())
}

/// Truncated estimate of `C/λ`: truncate λ, take `arcsin(C/λ̃)`, truncate it
/// on the `π/2`-normalized grid, take the sine and truncate again.
pub fn approx_inverse_amplitude(lambda: f64, m: usize, c: f64) -> Result<f64> {
    check_lambda(lambda, c)?;
    let lt = truncate_bits(lambda, m)?;
    let arg = c / lt;
    if arg > 1.0 {
        return Err(domain!("arcsin argument C/λ̃ = {arg} exceeds 1 (λ̃ = {lt})"));
    }
    inverse_chain(arg, m)
}

/// As [`approx_inverse_amplitude`] but saturates `C/λ̃` at 1.
pub fn approx_inverse_amplitude_saturating(lambda: f64, m: usize, c: f64) -> Result<f64> {
    check_lambda(lambda, c)?;
    let lt = truncate_bits(lambda, m)?;
    inverse_chain((c / lt).min(1.0), m)
}

/// `|⟨w′|w⟩|/(‖w′‖‖w‖)` for exact weights `w_j = (C/λ_j)β_j` and truncated
/// weights `w′_j`, with `C = s·min λ`.
pub fn fidelity_model(config: &SweepConfig, spectrum: &[f64], betas: &[Complex64]) -> Result<f64> {
    if spectrum.len() != betas.len() || spectrum.is_empty() {
        return Err(domain!("spectrum and β must have equal, nonzero length"));
    }
    let beta_norm = betas.iter().map(|b| b.norm_sqr()).sum::<f64>();
    if (beta_norm - 1.0).abs() > 1e-9 {
        return Err(domain!("β must have unit norm, got squared norm {beta_norm}"));
    }
    let lambda_min = spectrum.iter().copied().fold(f64::INFINITY, f64::min);
    let c = config.s * lambda_min;
    let mut dot = Complex64::new(0.0, 0.0);
    let (mut nw, mut nw_approx) = (0.0, 0.0);
    for (&lambda, beta) in spectrum.iter().zip(betas) {
        let w = beta * (c / lambda);
        let w_approx = beta * approx_inverse_amplitude_saturating(lambda, config.m, c)?;
        dot += w_approx.conj() * w;
        nw += w.norm_sqr();
        nw_approx += w_approx.norm_sqr();
    }
    if nw_approx == 0.0 || nw == 0.0 {
        return Err(Error::Degenerate("all weights vanish".into()));
    }
    Ok((dot.norm() / (nw.sqrt() * nw_approx.sqrt())).min(1.0))
}

/// Per-trial generator, independent of scheduling.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

pub fn run_trial(config: &SweepConfig, trial: usize) -> Result<SweepRow> {
    let mut rng = trial_rng(config.seed, trial);
    let spectrum = sample_spectrum(config.n, config.kappa, &mut rng);
    let betas = sample_betas(spectrum.len(), config.uniform_b, &mut rng);
    let fidelity = fidelity_model(config, &spectrum, &betas)?;
    Ok(SweepRow { n: config.n, m: config.m, kappa: config.kappa, s: config.s, trial, fidelity })
}

/// All trials of every config, in grid order then trial order.
pub fn run_sweep(grid: &[SweepConfig]) -> Result<Vec<SweepRow>> {
    for config in grid {
        config.validate()?;
    }
    let jobs: Vec<(&SweepConfig, usize)> = grid.iter().flat_map(|c| (0..c.trials).map(move |t| (c, t))).collect();
    jobs.par_iter().map(|(c, t)| run_trial(c, *t)).collect()
}

/// Mean fidelity for each config, in grid order.
pub fn mean_fidelities(grid: &[SweepConfig], rows: &[SweepRow]) -> Vec<f64> {
    let mut start = 0;
    grid.iter()
        .map(|c| {
            let slice = &rows[start..start + c.trials];
            start += c.trials;
            slice.iter().map(|r| r.fidelity).sum::<f64>() / c.trials as f64
        })
        .collect()
}

/// `x` with 12 significant digits.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..12).contains(&exp) {
        return format!("{x:.11e}");
    }
    let decimals = (11 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

pub const CSV_HEADER: &str = "n,m,kappa,s,trial,fidelity";

pub fn write_csv(rows: &[SweepRow], mut out: impl Write) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(out, "{},{},{},{},{},{}", r.n, r.m, r.kappa, r.s, r.trial, format_sig12(r.fidelity))?;
    }
    Ok(())
}
