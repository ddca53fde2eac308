use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fermiex::format::{read_matrix, read_state, write_state};
use fermiex::state::BasisSpec;
use fermiex::two_fermion::HeliumVariant;
use fermiex_cli::commands::{
    cmd_analyze, cmd_exclusion_scan, cmd_helium, cmd_pauli_pair, cmd_schmidt, parse_vector, CliError, CliResult,
    HeliumArgs, Options, Outcome,
};

/// Antisymmetrization, exclusion and entanglement analysis of few-fermion states.
#[derive(Debug, Parser)]
#[command(name = "fermiex", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Tolerance for exclusion and symmetry tests.
    #[arg(long, env = "FERMI_TOL", default_value_t = fermiex::DEFAULT_TOL)]
    tol: f64,
    /// Relative singular-value cutoff for ranks.
    #[arg(long, default_value_t = fermiex::DEFAULT_RANK_TOL)]
    rank_tol: f64,
    /// Renormalize inputs instead of rejecting them.
    #[arg(long)]
    normalize: bool,
    /// Also write the report as JSON to this path.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analyze an n-fermion state file.
    Analyze {
        file: PathBuf,
        /// Treat the input as a pre-state and antisymmetrize it first.
        #[arg(long)]
        pre_antisymmetrize: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Build and analyze a Helium-type two-electron state from a spatial matrix.
    Helium {
        file: PathBuf,
        /// One of plus, minus, star.
        #[arg(long)]
        variant: HeliumVariant,
        /// Spin vector of the first electron, as re:im,re:im,...
        #[arg(long, allow_hyphen_values = true)]
        spin: String,
        /// Spin vector of the second electron (defaults to --spin).
        #[arg(long, allow_hyphen_values = true)]
        spin2: Option<String>,
        /// Strength above which the spatial entanglement is reported as not weak.
        #[arg(long, default_value_t = 0.1)]
        weak_cutoff: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Test whether a pre-state is annihilated by antisymmetrization.
    ExclusionScan {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Schmidt decomposition of a spatial matrix.
    Schmidt {
        file: PathBuf,
        /// Strength above which the spatial entanglement is reported as not weak.
        #[arg(long, default_value_t = 0.1)]
        weak_cutoff: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Antisymmetric pair of two single-particle states.
    PauliPair {
        /// First single-particle vector, as re:im,re:im,...
        #[arg(long, allow_hyphen_values = true)]
        psi: String,
        /// Second single-particle vector.
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
        /// Number of spatial modes.
        #[arg(long)]
        modes: usize,
        /// Spin dimension.
        #[arg(long, default_value_t = 1)]
        spin_dim: usize,
        /// Write the resulting state file here.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

impl Common {
    fn options(&self) -> Options {
        Options {
            tol: self.tol,
            rank_tol: self.rank_tol,
            normalize: self.normalize,
        }
    }
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|e| CliError::Core(e.into()))
}

fn run(cli: Cli) -> CliResult<(Outcome, Option<PathBuf>)> {
    let (outcome, common) = match cli.command {
        Command::Analyze { file, pre_antisymmetrize, common } => {
            let t = read_state(&file)?;
            (cmd_analyze(&t, &common.options(), pre_antisymmetrize)?, common)
        }
        Command::Helium { file, variant, spin, spin2, weak_cutoff, common } => {
            let m = read_matrix(&file)?;
            let args = HeliumArgs {
                variant,
                spin: parse_vector(&spin)?,
                spin2: spin2.as_deref().map(parse_vector).transpose()?,
                weak_cutoff,
            };
            (cmd_helium(&m, &args, &common.options())?, common)
        }
        Command::ExclusionScan { file, common } => {
            let t = read_state(&file)?;
            (cmd_exclusion_scan(&t, &common.options())?, common)
        }
        Command::Schmidt { file, weak_cutoff, common } => {
            let m = read_matrix(&file)?;
            (cmd_schmidt(&m, &common.options(), weak_cutoff)?, common)
        }
        Command::PauliPair { psi, phi, modes, spin_dim, out, common } => {
            let spec = BasisSpec::new(modes, spin_dim)?;
            let (outcome, state) =
                cmd_pauli_pair(&spec, &parse_vector(&psi)?, &parse_vector(&phi)?, &common.options())?;
            if let (Some(path), Some(t)) = (out, state) {
                write_file(&path, &write_state(&t))?;
            }
            (outcome, common)
        }
    };
    Ok((outcome, common.json))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok((outcome, json)) => {
            let code = outcome.exit_code();
            if let Some(path) = json {
                let text = serde_json::to_string_pretty(&outcome.report.to_json(code)).expect("report is valid JSON");
                if let Err(e) = write_file(&path, &(text + "\n")) {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            }
            let mut out = std::io::stdout().lock();
            if out.write_all(outcome.report.render_text().as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
