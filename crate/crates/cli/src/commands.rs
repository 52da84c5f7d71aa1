use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use qcrot::circuit::{distance_up_to_global_phase, max_entry_distance};
use qcrot::crot::{build_crot_circuit, build_crot_circuit_with, AngleOracle, DiagonalMode, OracleDescriptor};
use qcrot::fixedpoint::{mean_fidelities, run_sweep, write_csv, SweepConfig};
use qcrot::hhl::{run_hhl, LinearSystem};
use qcrot::qasm;
use qcrot::resources::{crossover_m, gate_count_csv, gate_count_svg, format_comparison_table, comparison_table};
use qcrot::synth::{synthesize_controlled_diagonal, synthesize_diagonal, DiagonalSpec};
use qcrot::{Complex64, GateClass, StateVector};

use crate::output::write_atomic;
use crate::{CompileArgs, CrotArgs, ExportArgs, HhlArgs, ResourcesArgs, SweepArgs};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Check(String),
    #[error(transparent)]
    Core(#[from] qcrot::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Input(_) => 1,
            Self::Core(e) if e.is_input_error() => 1,
            _ => 2,
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn read_input(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> CliResult<Vec<T>> {
    let items: Result<Vec<T>, _> = text.split(',').map(|s| s.trim().parse::<T>()).collect();
    match items {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => Err(CliError::Input(format!("bad {what} list '{text}'"))),
    }
}

fn parse_range(text: &str) -> CliResult<Vec<usize>> {
    let parts = parse_list::<usize>(&text.replace(':', ","), "m-range")?;
    let (start, end, step) = match parts[..] {
        [a] => (a, a, 1),
        [a, b] => (a, b, 1),
        [a, b, s] => (a, b, s),
        _ => return Err(CliError::Input(format!("bad m-range '{text}'"))),
    };
    if step == 0 || start > end {
        return Err(CliError::Input(format!("empty m-range '{text}'")));
    }
    Ok((start..=end).step_by(step).collect())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GridEntry {
    n: usize,
    m: usize,
    kappa: f64,
    s: f64,
    trials: Option<usize>,
    seed: Option<u64>,
    #[serde(default)]
    uniform_b: Option<bool>,
}

fn build_grid(a: &SweepArgs) -> CliResult<Vec<SweepConfig>> {
    if let Some(path) = &a.grid {
        let entries: Vec<GridEntry> = serde_json::from_str(&read_input(path)?)
            .map_err(|e| CliError::Input(format!("bad grid file: {e}")))?;
        return Ok(entries
            .into_iter()
            .map(|e| SweepConfig {
                n: e.n,
                m: e.m,
                kappa: e.kappa,
                s: e.s,
                trials: e.trials.unwrap_or(a.trials),
                seed: e.seed.unwrap_or(a.seed),
                uniform_b: e.uniform_b.unwrap_or(a.uniform_b),
            })
            .collect());
    }
    let missing = |flag: &str| CliError::Input(format!("--{flag} is required without --grid"));
    let n = a.n.ok_or_else(|| missing("n"))?;
    let ms = parse_range(a.m_range.as_deref().ok_or_else(|| missing("m-range"))?)?;
    let kappas = parse_list::<f64>(a.kappa_list.as_deref().ok_or_else(|| missing("kappa-list"))?, "kappa")?;
    let ss = parse_list::<f64>(a.s_list.as_deref().ok_or_else(|| missing("s-list"))?, "s")?;
    let mut grid = Vec::new();
    for &kappa in &kappas {
        for &s in &ss {
            for &m in &ms {
                grid.push(SweepConfig { n, m, kappa, s, trials: a.trials, seed: a.seed, uniform_b: a.uniform_b });
            }
        }
    }
    Ok(grid)
}

pub fn fidelity_sweep(a: SweepArgs) -> CliResult {
    let grid = build_grid(&a)?;
    if grid.is_empty() {
        return Err(CliError::Input("empty grid".into()));
    }
    let rows = run_sweep(&grid)?;
    let mut csv = Vec::new();
    write_csv(&rows, &mut csv)?;
    write_atomic(&a.out, &csv)?;
    println!("{:>4} {:>3} {:>10} {:>8} {:>7}  mean_fidelity", "n", "m", "kappa", "s", "trials");
    for (c, mean) in grid.iter().zip(mean_fidelities(&grid, &rows)) {
        println!("{:>4} {:>3} {:>10} {:>8} {:>7}  {mean:.9}", c.n, c.m, c.kappa, c.s, c.trials);
    }
    println!("wrote {} rows to {}", rows.len(), a.out.display());
    Ok(())
}

pub fn hhl_demo(a: HhlArgs) -> CliResult {
    let system = LinearSystem::from_json(&read_input(&a.system)?)?;
    let report = run_hhl(&system, a.m, a.s)?;
    let p = report.parameters;
    println!("m = {}, s = {}, C = {:.6e}, kappa = {:.6}", p.m, p.s, p.c, p.kappa);
    println!("eigenvalues: {:?}", report.eigenvalues);
    println!("success probability: {:.9}", report.success_probability);
    println!("uncompute probability: {:.9}", report.uncompute_probability);
    println!("fidelity: {:.12}", report.fidelity);
    // Align the global phase of the quantum solution with the classical one.
    let quantum = report.solution_state.amplitudes();
    let dot: Complex64 = quantum.iter().zip(&report.classical_solution).map(|(q, c)| q.conj() * c).sum();
    let align = if dot.norm() > 0.0 { dot / dot.norm() } else { Complex64::new(1.0, 0.0) };
    println!("{:>5}  {:>28}  {:>28}", "index", "classical", "quantum");
    for (i, (c, q)) in report.classical_solution.iter().zip(quantum).enumerate() {
        let q = q * align;
        println!("{i:>5}  {:>13.9} {:>+13.9}i  {:>13.9} {:>+13.9}i", c.re, c.im, q.re, q.im);
    }
    if let Some(path) = a.emit_state {
        let json = serde_json::to_vec_pretty(&report).map_err(qcrot::Error::from)?;
        write_atomic(&path, &json)?;
    }
    Ok(())
}

pub fn crot_verify(a: CrotArgs) -> CliResult {
    let descriptor = OracleDescriptor::parse(&a.oracle, a.m)?;
    if descriptor.width() != a.m {
        return Err(CliError::Input(format!("oracle width {} does not match --m {}", descriptor.width(), a.m)));
    }
    let oracle = AngleOracle::from_descriptor(&descriptor)?;
    let m = oracle.width();
    if a.exhaustive && m > 8 {
        return Err(CliError::Input("exhaustive mode supports m ≤ 8".into()));
    }
    let inputs: Vec<usize> = if a.exhaustive {
        (0..1 << m).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
        (0..a.samples.max(1)).map(|_| rng.random_range(0..1usize << m)).collect()
    };
    let mode = if a.synthesized { DiagonalMode::Synthesized } else { DiagonalMode::Composite };
    let circuit = build_crot_circuit_with(&oracle, true, mode)?;
    let exact = oracle.is_exact();
    let mut worst: f64 = 0.0;
    println!("{:>6} {:>14} {:>14} {:>14} {:>12}", "k", "theta", "p_circuit", "sin^2(4πθ)", "deviation");
    for &k in &inputs {
        let input = StateVector::zero(1 + m)?.tensor(&StateVector::new_basis_state(m, k)?)?;
        let out = circuit.simulate(&input)?;
        let amp = oracle.amplitude(k);
        let cos = (4.0 * std::f64::consts::PI * oracle.theta(k)).cos();
        let base = k << (1 + m);
        let mut target = vec![Complex64::new(0.0, 0.0); out.dim()];
        target[base] = Complex64::new(cos, 0.0);
        target[base | 1] = Complex64::new(amp, 0.0);
        let target = StateVector::from_amplitudes(target)?;
        let deviation = out.max_deviation(&target)?;
        let p = out.probability(&[0], 1)?;
        worst = worst.max(deviation);
        println!("{k:>6} {:>14.10} {p:>14.10} {:>14.10} {deviation:>12.3e}", oracle.theta(k), amp * amp);
    }
    println!("oracle: {}", serde_json::to_string(&descriptor).map_err(qcrot::Error::from)?);
    println!("exact on the {m}-bit grid: {exact}");
    println!("max deviation: {worst:.3e}");
    if exact && worst > 1e-6 {
        return Err(CliError::Check(format!("deviation {worst:.3e} exceeds 1e-6 for an exact oracle")));
    }
    println!("{}", if exact { "PASS" } else { "report only (inexact oracle)" });
    Ok(())
}

pub fn compile_diagonal(a: CompileArgs) -> CliResult {
    let phases: Vec<f64> = match (&a.phases, a.random) {
        (Some(text), None) => {
            serde_json::from_str(text).map_err(|e| CliError::Input(format!("bad phase list: {e}")))?
        }
        (None, Some(m)) => {
            if m == 0 || m > 12 {
                return Err(CliError::Input("--random needs 1 ≤ m ≤ 12".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            (0..1usize << m).map(|_| rng.random::<f64>()).collect()
        }
        _ => return Err(CliError::Input("give exactly one of --phases or --random".into())),
    };
    let spec = DiagonalSpec::new(phases)?;
    let m = spec.width();
    let bound = (1usize << (m + 1)) - 3;
    let (circuit, network, verify) = if a.controlled {
        let c = synthesize_controlled_diagonal(&spec, 0)?;
        let network = c.gates().iter().filter(|g| g.class() != GateClass::Rz).count();
        let verify = if m <= 6 { Some(max_entry_distance(&c.unitary()?, &spec.controlled_matrix())) } else { None };
        (c, network, verify)
    } else {
        let s = synthesize_diagonal(&spec);
        let verify = if m <= 6 { Some(distance_up_to_global_phase(&s.circuit.unitary()?, &spec.matrix())) } else { None };
        let n = s.circuit.len();
        println!("global phase: {} turns", s.global_phase);
        (s.circuit, n, verify)
    };
    println!("census: {}", circuit.census());
    println!("network gates {network} ≤ 2^(m+1) − 3 = {bound}: {}", network <= bound);
    if a.controlled && network != circuit.len() {
        println!("control-wire phase gates: {}", circuit.len() - network);
    }
    let qasm = qasm::export_qasm(&circuit)?;
    if let Some(path) = &a.out_qasm {
        write_atomic(path, qasm.as_bytes())?;
        println!("wrote {}", path.display());
    }
    match verify {
        Some(d) if d >= 1e-10 => Err(CliError::Check(format!("matrix reconstruction error {d:.3e} ≥ 1e-10"))),
        Some(d) => {
            println!("matrix reconstruction error: {d:.3e}");
            Ok(())
        }
        None => {
            println!("matrix reconstruction skipped (m > 6)");
            Ok(())
        }
    }
}

pub fn resources(a: ResourcesArgs) -> CliResult {
    if a.max_m == 0 {
        return Err(CliError::Input("--max-m must be at least 1".into()));
    }
    let csv = gate_count_csv(a.max_m)?;
    if let Some(path) = &a.out {
        write_atomic(path, csv.as_bytes())?;
    } else {
        print!("{csv}");
    }
    if let Some(path) = &a.svg {
        write_atomic(path, gate_count_svg(a.max_m)?.as_bytes())?;
    }
    println!("crossover m: {}", crossover_m());
    print!("{}", format_comparison_table(&comparison_table()));
    Ok(())
}

pub fn export_qasm(a: ExportArgs) -> CliResult {
    let descriptor = OracleDescriptor::parse(&a.oracle, a.m)?;
    let oracle = AngleOracle::from_descriptor(&descriptor)?;
    let circuit = build_crot_circuit(&oracle, a.uncompute)?;
    write_atomic(&a.out, qasm::export_qasm(&circuit)?.as_bytes())?;
    println!("census: {}", circuit.census());
    println!("wrote {}", a.out.display());
    Ok(())
}
