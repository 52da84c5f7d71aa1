mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "qcrot", version, about = "Controlled-rotation circuits, HHL simulation and fidelity sweeps")]
struct Cli {
    /// Worker threads for parallel sweeps (defaults to the number of cores).
    #[arg(long, global = true, env = "QCROT_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fixed-point fidelity model over a parameter grid, written as CSV.
    FidelitySweep(SweepArgs),
    /// Run the HHL circuit on a linear system file.
    HhlDemo(HhlArgs),
    /// Check the controlled-rotation circuit against its ideal output.
    CrotVerify(CrotArgs),
    /// Synthesize a diagonal unitary and export it as OpenQASM.
    CompileDiagonal(CompileArgs),
    /// Closed-form gate counts, crossover and comparison table.
    Resources(ResourcesArgs),
    /// Export the synthesized controlled-rotation circuit as OpenQASM.
    ExportQasm(ExportArgs),
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// JSON list of sweep configs; missing trials/seed fall back to the flags.
    #[arg(long, conflicts_with_all = ["n", "m_range", "kappa_list", "s_list"])]
    pub grid: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Inclusive range `start:end` or `start:end:step`.
    #[arg(long)]
    pub m_range: Option<String>,
    /// Comma-separated condition numbers.
    #[arg(long)]
    pub kappa_list: Option<String>,
    /// Comma-separated scaling factors.
    #[arg(long)]
    pub s_list: Option<String>,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Use the uniform right-hand side in the eigenbasis.
    #[arg(long)]
    pub uniform_b: bool,
}

#[derive(Args, Debug)]
pub struct HhlArgs {
    #[arg(long)]
    pub system: PathBuf,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub s: f64,
    /// Write the full report (including the solution state) as JSON.
    #[arg(long)]
    pub emit_state: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CrotArgs {
    #[arg(long)]
    pub m: usize,
    /// `name[:key=value,...]` or a JSON descriptor, e.g. `hhl:c=0.01`.
    #[arg(long)]
    pub oracle: String,
    /// Check every basis input instead of a sample.
    #[arg(long)]
    pub exhaustive: bool,
    #[arg(long, default_value_t = 16)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Use Toffoli/CRZ networks instead of composite diagonal gates.
    #[arg(long)]
    pub synthesized: bool,
}

#[derive(Args, Debug)]
pub struct CompileArgs {
    /// JSON array of phases in turns.
    #[arg(long, conflicts_with = "random")]
    pub phases: Option<String>,
    /// Draw 2^m uniform phases.
    #[arg(long, value_name = "M")]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub controlled: bool,
    #[arg(long)]
    pub out_qasm: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ResourcesArgs {
    #[arg(long, default_value_t = 20)]
    pub max_m: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ExportArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub oracle: String,
    /// Append the inverse phase-estimation stage.
    #[arg(long)]
    pub uncompute: bool,
    #[arg(long)]
    pub out: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::FidelitySweep(a) => commands::fidelity_sweep(a),
        Command::HhlDemo(a) => commands::hhl_demo(a),
        Command::CrotVerify(a) => commands::crot_verify(a),
        Command::CompileDiagonal(a) => commands::compile_diagonal(a),
        Command::Resources(a) => commands::resources(a),
        Command::ExportQasm(a) => commands::export_qasm(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
