use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use hbac_core::config::{parse_config_file, ConfigFile, OutputFormat, ScenarioKind};
use hbac_core::runner::run_scenario;

const EXIT_ERROR: u8 = 1;
const EXIT_NOT_CONVERGED: u8 = 3;

/// Heat-bath algorithmic cooling scenarios: PPA, cross-relaxation cooling,
/// Solomon dynamics and PPA-vs-cross-relaxation comparisons.
#[derive(Parser, Debug)]
#[command(name = "hbac", version)]
struct Cli {
    scenario: ScenarioKind,

    /// TOML scenario file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,

    #[arg(long)]
    qubits: Option<usize>,

    /// Bath polarization; replaces any sweep from the config file.
    #[arg(long)]
    bath_polarization: Option<f64>,

    #[arg(long)]
    tol: Option<f64>,

    #[arg(long)]
    max_iters: Option<usize>,

    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("hbac: at least one run hit max_iters without converging");
            ExitCode::from(EXIT_NOT_CONVERGED)
        }
        Err(e) => {
            eprintln!("hbac: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn run(cli: Cli) -> Result<bool, Box<dyn std::error::Error>> {
    let mut file = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            parse_config_file(&text)?
        }
        None => ConfigFile::default(),
    };

    file.scenario = Some(cli.scenario);
    if cli.qubits.is_some() {
        file.qubits = cli.qubits;
    }
    if cli.bath_polarization.is_some() {
        file.bath_polarization = cli.bath_polarization;
        file.sweep = None;
    }
    if cli.tol.is_some() {
        file.tol = cli.tol;
    }
    if cli.max_iters.is_some() {
        file.max_iters = cli.max_iters;
    }
    if cli.out.is_some() {
        file.output = cli.out;
    }
    if cli.format.is_some() {
        file.format = cli.format;
    }

    let cfg = file.validate()?;
    let outcome = run_scenario(&cfg)?;
    outcome
        .write(&mut std::io::stdout().lock())
        .map_err(|e| format!("cannot write output: {e}"))?;
    Ok(outcome.all_converged())
}
