use serde::{Deserialize, Serialize};

use crate::error::{domain, param, Error, Result};
use crate::synth::DiagonalSpec;
use crate::units::unit_turns;

/// Largest index width accepted by the oracle constructors.
pub const MAX_ORACLE_WIDTH: usize = 20;

/// Serializable description of an oracle, enough to rebuild it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum OracleDescriptor {
    /// `θ_k = ½·arcsin(C/λ̂_k)` with `λ̂_k = max(k, 1)/2^m`. With `clamp`
    /// the argument saturates at 1 instead of being rejected.
    Hhl {
        m: usize,
        c: f64,
        #[serde(default)]
        clamp: bool,
    },
    /// `θ_k = ½·arcsin(γ(√λ_k − τ)/√λ_k)` over `λ_k = max(k, 1)/2^m`.
    Qsvt { m: usize, gamma: f64, tau: f64 },
    /// `θ_k = ½·arcsin(ρ(1 + λ₂/(σ²β²)))`; the index concatenates a σ²
    /// register (low half) and a β² register (high half).
    Qaop { m: usize, rho: f64, lambda2: f64 },
    /// `θ_k = ½·arcsin(1/√λ_k)` with `λ_k` spaced linearly over `[1, λ_max]`.
    Qkpca { m: usize, lambda_max: f64 },
    /// `θ_k = stride·k/2^m mod 1`; exact on the PE grid for integer strides.
    Linear { m: usize, stride: f64 },
    Zero { m: usize },
    Custom { m: usize, thetas: Vec<f64> },
}

impl OracleDescriptor {
    pub fn width(&self) -> usize {
        match self {
            Self::Hhl { m, .. }
            | Self::Qsvt { m, .. }
            | Self::Qaop { m, .. }
            | Self::Qkpca { m, .. }
            | Self::Linear { m, .. }
            | Self::Zero { m }
            | Self::Custom { m, .. } => *m,
        }
    }

    /// Parses `name[:key=value,...]` (for example `hhl:c=0.0625` or
    /// `qsvt:gamma=0.5,tau=0.2`) or a JSON descriptor. `m` fills the width
    /// for the short form.
    pub fn parse(text: &str, m: usize) -> Result<Self> {
        let text = text.trim();
        if text.starts_with('{') {
            return Ok(serde_json::from_str(text)?);
        }
        let (name, rest) = text.split_once(':').unwrap_or((text, ""));
        let mut kv = std::collections::BTreeMap::new();
        for pair in rest.split(',').filter(|p| !p.trim().is_empty()) {
            let (k, v) = pair.split_once('=').ok_or_else(|| param!("expected key=value, got '{pair}'"))?;
            let v: f64 = v.trim().parse().map_err(|_| param!("'{v}' is not a number"))?;
            kv.insert(k.trim().to_ascii_lowercase(), v);
        }
        let get = |key: &str| kv.get(key).copied().ok_or_else(|| param!("oracle '{name}' needs '{key}'"));
        let d = match name.to_ascii_lowercase().as_str() {
            "hhl" => Self::Hhl { m, c: get("c")?, clamp: kv.get("clamp").is_some_and(|&v| v != 0.0) },
            "qsvt" => Self::Qsvt { m, gamma: get("gamma")?, tau: get("tau")? },
            "qaop" => Self::Qaop { m, rho: get("rho")?, lambda2: get("lambda2")? },
            "qkpca" => Self::Qkpca { m, lambda_max: get("lambda_max")? },
            "linear" | "exact" => Self::Linear { m, stride: kv.get("stride").copied().unwrap_or(1.0) },
            "zero" => Self::Zero { m },
            other => return Err(param!("unknown oracle '{other}'")),
        };
        Ok(d)
    }
}

/// Angle table `θ_k` (turns) over an `m`-bit index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleOracle {
    width: usize,
    thetas: Vec<f64>,
    descriptor: OracleDescriptor,
}

fn check_width(m: usize) -> Result<()> {
    if m == 0 || m > MAX_ORACLE_WIDTH {
        return Err(domain!("oracle width must be in 1..={MAX_ORACLE_WIDTH}, got {m}"));
    }
    Ok(())
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(param!("{name} must be finite, got {v}"));
    }
    Ok(())
}

/// Half-angle in turns for a rotation amplitude: `arcsin(x)/(4π)`.
pub fn theta_for_amplitude(x: f64) -> f64 {
    x.asin() / (4.0 * std::f64::consts::PI)
}

/// `k/2^m` with 0 replaced by `2^{−m}`.
pub fn guarded_fraction(k: usize, m: usize) -> f64 {
    k.max(1) as f64 / (1u64 << m) as f64
}

fn offending(bad: &[usize]) -> String {
    let shown: Vec<String> = bad.iter().take(8).map(|k| k.to_string()).collect();
    let more = if bad.len() > 8 { format!(" (+{} more)", bad.len() - 8) } else { String::new() };
    format!("[{}]{more}", shown.join(", "))
}

impl AngleOracle {
    /// Builds from raw angles; `thetas.len()` must be `2^m`.
    pub fn from_thetas(m: usize, thetas: Vec<f64>) -> Result<Self> {
        check_width(m)?;
        if thetas.len() != 1 << m {
            return Err(domain!("expected {} angles, got {}", 1usize << m, thetas.len()));
        }
        if thetas.iter().any(|t| !t.is_finite()) {
            return Err(domain!("angles must be finite"));
        }
        let thetas: Vec<f64> = thetas.into_iter().map(unit_turns).collect();
        Ok(Self { width: m, descriptor: OracleDescriptor::Custom { m, thetas: thetas.clone() }, thetas })
    }

    pub fn from_descriptor(d: &OracleDescriptor) -> Result<Self> {
        match d {
            OracleDescriptor::Hhl { m, c, clamp: false } => make_hhl_oracle(*m, *c),
            OracleDescriptor::Hhl { m, c, clamp: true } => make_hhl_oracle_clamped(*m, *c),
            OracleDescriptor::Qsvt { m, gamma, tau } => {
                let mut o = make_qsvt_oracle(*m, *gamma, *tau, |k| guarded_fraction(k, *m))?;
                o.descriptor = d.clone();
                Ok(o)
            }
            OracleDescriptor::Qaop { m, rho, lambda2 } => {
                let mut o = make_qaop_oracle(*m, *rho, *lambda2, |k| qaop_pair(k, *m))?;
                o.descriptor = d.clone();
                Ok(o)
            }
            OracleDescriptor::Qkpca { m, lambda_max } => {
                check_finite("lambda_max", *lambda_max)?;
                if *lambda_max < 1.0 {
                    return Err(param!("lambda_max must be at least 1, got {lambda_max}"));
                }
                let top = ((1u64 << m) - 1).max(1) as f64;
                let mut o = make_qkpca_oracle(*m, |k| 1.0 + (lambda_max - 1.0) * k as f64 / top)?;
                o.descriptor = d.clone();
                Ok(o)
            }
            OracleDescriptor::Linear { m, stride } => {
                check_width(*m)?;
                check_finite("stride", *stride)?;
                let n = (1u64 << m) as f64;
                let thetas = (0..1usize << m).map(|k| unit_turns(stride * k as f64 / n)).collect();
                Ok(Self { width: *m, thetas, descriptor: d.clone() })
            }
            OracleDescriptor::Zero { m } => {
                check_width(*m)?;
                Ok(Self { width: *m, thetas: vec![0.0; 1 << m], descriptor: d.clone() })
            }
            OracleDescriptor::Custom { m, thetas } => Self::from_thetas(*m, thetas.clone()),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn theta(&self, k: usize) -> f64 {
        self.thetas[k]
    }

    pub fn descriptor(&self) -> &OracleDescriptor {
        &self.descriptor
    }

    /// Ideal ancilla amplitude `sin(4π·θ_k)`.
    pub fn amplitude(&self, k: usize) -> f64 {
        (4.0 * std::f64::consts::PI * self.thetas[k]).sin()
    }

    /// The PE-grid value `2^m·θ_k` when it is an integer (within `1e-12`).
    pub fn grid_index(&self, k: usize) -> Option<usize> {
        let scaled = self.thetas[k] * (1u64 << self.width) as f64;
        let r = scaled.round();
        ((scaled - r).abs() < 1e-12).then_some(r as usize % (1 << self.width))
    }

    /// Whether every angle lies exactly on the `m`-bit PE grid.
    pub fn is_exact(&self) -> bool {
        (0..self.thetas.len()).all(|k| self.grid_index(k).is_some())
    }

    pub fn diagonal_spec(&self) -> DiagonalSpec {
        DiagonalSpec::new(self.thetas.clone()).expect("oracle width is at least 1")
    }
}

fn hhl_thetas(m: usize, c: f64) -> Vec<f64> {
    (0..1usize << m).map(|k| theta_for_amplitude((c / guarded_fraction(k, m)).min(1.0))).collect()
}

fn check_hhl(m: usize, c: f64) -> Result<()> {
    check_width(m)?;
    check_finite("C", c)?;
    if c < 0.0 {
        return Err(param!("C must be non-negative, got {c}"));
    }
    Ok(())
}

/// HHL inversion oracle. Rejects `C·2^m > 1`, where the amplitude at the
/// smallest representable eigenvalue would exceed 1.
pub fn make_hhl_oracle(m: usize, c: f64) -> Result<AngleOracle> {
    check_hhl(m, c)?;
    if c * (1u64 << m) as f64 > 1.0 {
        return Err(param!("C·2^m = {} exceeds 1 at λ̂ = 2^-{m}", c * (1u64 << m) as f64));
    }
    Ok(AngleOracle { width: m, thetas: hhl_thetas(m, c), descriptor: OracleDescriptor::Hhl { m, c, clamp: false } })
}

/// As [`make_hhl_oracle`] but saturates `C/λ̂` at 1 for the small `λ̂` that
/// lie below `C`.
pub fn make_hhl_oracle_clamped(m: usize, c: f64) -> Result<AngleOracle> {
    check_hhl(m, c)?;
    Ok(AngleOracle { width: m, thetas: hhl_thetas(m, c), descriptor: OracleDescriptor::Hhl { m, c, clamp: true } })
}

/// QSVT threshold oracle; the argument is clamped at 0 below `λ = τ²`.
pub fn make_qsvt_oracle(m: usize, gamma: f64, tau: f64, lambda_of_k: impl Fn(usize) -> f64) -> Result<AngleOracle> {
    check_width(m)?;
    check_finite("gamma", gamma)?;
    check_finite("tau", tau)?;
    let mut thetas = Vec::with_capacity(1 << m);
    let mut bad = Vec::new();
    for k in 0..1usize << m {
        let lambda = lambda_of_k(k);
        if !(lambda > 0.0) {
            return Err(param!("λ_{k} = {lambda} must be positive"));
        }
        let root = lambda.sqrt();
        let arg = (gamma * (root - tau) / root).max(0.0);
        if arg > 1.0 {
            bad.push(k);
        }
        thetas.push(theta_for_amplitude(arg.min(1.0)));
    }
    if !bad.is_empty() {
        return Err(param!("QSVT argument exceeds 1 at k = {}", offending(&bad)));
    }
    Ok(AngleOracle { width: m, thetas, descriptor: OracleDescriptor::Qsvt { m, gamma, tau } })
}

/// `(σ², β²)` decoded from a concatenated index: σ² from the low
/// `⌈m/2⌉` bits, β² from the rest, each zero-guarded.
pub fn qaop_pair(k: usize, m: usize) -> (f64, f64) {
    let low_bits = m.div_ceil(2);
    let high_bits = m - low_bits;
    let low = k & ((1 << low_bits) - 1);
    let high = k >> low_bits;
    let sigma2 = guarded_fraction(low, low_bits);
    let beta2 = if high_bits == 0 { 1.0 } else { guarded_fraction(high, high_bits) };
    (sigma2, beta2)
}

/// QAOP regularized-inverse oracle.
pub fn make_qaop_oracle(
    m: usize,
    rho: f64,
    lambda2: f64,
    pair_of_k: impl Fn(usize) -> (f64, f64),
) -> Result<AngleOracle> {
    check_width(m)?;
    check_finite("rho", rho)?;
    check_finite("lambda2", lambda2)?;
    if rho < 0.0 || lambda2 < 0.0 {
        return Err(param!("rho and lambda2 must be non-negative"));
    }
    let mut thetas = Vec::with_capacity(1 << m);
    let mut bad = Vec::new();
    for k in 0..1usize << m {
        let (sigma2, beta2) = pair_of_k(k);
        let product = sigma2 * beta2;
        if !(product > 0.0) {
            return Err(param!("σ²β² at k = {k} must be positive"));
        }
        let arg = rho * (1.0 + lambda2 / product);
        if arg > 1.0 {
            bad.push(k);
        }
        thetas.push(theta_for_amplitude(arg.min(1.0)));
    }
    if !bad.is_empty() {
        return Err(param!("QAOP argument exceeds 1 at k = {}", offending(&bad)));
    }
    Ok(AngleOracle { width: m, thetas, descriptor: OracleDescriptor::Qaop { m, rho, lambda2 } })
}

/// QKPCA oracle; every `λ_k` must be at least 1.
pub fn make_qkpca_oracle(m: usize, lambda_of_k: impl Fn(usize) -> f64) -> Result<AngleOracle> {
    check_width(m)?;
    let mut thetas = Vec::with_capacity(1 << m);
    for k in 0..1usize << m {
        let lambda = lambda_of_k(k);
        if !(lambda >= 1.0) {
            return Err(Error::Parameter(format!("λ_{k} = {lambda} is below 1")));
        }
        thetas.push(theta_for_amplitude(1.0 / lambda.sqrt()));
    }
    let lambda_max = (0..1usize << m).map(&lambda_of_k).fold(1.0, f64::max);
    Ok(AngleOracle { width: m, thetas, descriptor: OracleDescriptor::Qkpca { m, lambda_max } })
}
