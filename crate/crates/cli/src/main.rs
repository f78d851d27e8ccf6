use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use schmidt_core::density::DensityMatrix;
use schmidt_core::fixtures;
use schmidt_core::ketparse::parse_state;
use schmidt_core::numlin::DEFAULT_RELATIVE_TOL;
use schmidt_core::report::{analyze, density_report, state_from_json, AnalysisOptions};
use schmidt_core::schmidt::{NormPolicy, SchmidtOptions, DEFAULT_RANK_THRESHOLD};
use schmidt_core::{BipartitePureState, Error};

mod render;

/// Schmidt-mode analysis of two-party pure states.
#[derive(Parser)]
#[command(name = "schmidt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a state given as a ket expression or a JSON document.
    Analyze {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        flags: Flags,
    },
    /// Run one of the built-in examples.
    Examples {
        #[arg(value_enum)]
        name: Example,
        #[command(flatten)]
        flags: Flags,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// State in the ket-v1 grammar, e.g. "|a>(x)|alpha> + |b>(x)|beta>".
    #[arg(long)]
    expr: Option<String>,
    /// schmidt-state-v1 document, or a report emitted by --format json.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct Flags {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Eigensolver stopping threshold, relative to the largest matrix entry.
    #[arg(long, default_value_t = DEFAULT_RELATIVE_TOL)]
    tolerance: f64,
    /// Schmidt weights at or below this do not count toward the rank.
    #[arg(long, default_value_t = DEFAULT_RANK_THRESHOLD)]
    rank_threshold: f64,
    /// Reject states whose norm differs from 1 instead of rescaling them.
    #[arg(long)]
    strict_norm: bool,
    /// Leave the Schmidt modes out of the report.
    #[arg(long)]
    no_modes: bool,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Example {
    Psi0,
    Psi1,
    Psi2,
    Psi3,
    Bell,
    Classical,
}

enum Failure {
    Input(String),
    Numerical(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }

    fn from_core(e: Error, source: Option<&str>) -> Self {
        if e.is_numerical() {
            return Failure::Numerical(e.to_string());
        }
        match (&e, source) {
            (Error::Parse(pe), Some(text)) => {
                let caret = " ".repeat(pe.position);
                Failure::Input(format!("{e}\n  {text}\n  {caret}^"))
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl Flags {
    fn options(&self) -> Result<AnalysisOptions, Failure> {
        for (name, v) in [("--tolerance", self.tolerance), ("--rank-threshold", self.rank_threshold)] {
            if !v.is_finite() {
                return Err(Failure::Input(format!("{name} must be finite, got {v}")));
            }
        }
        Ok(AnalysisOptions {
            schmidt: SchmidtOptions {
                rank_threshold: self.rank_threshold,
                relative_tolerance: self.tolerance,
            },
            norm_policy: if self.strict_norm { NormPolicy::Strict } else { NormPolicy::Rescale },
            include_modes: !self.no_modes,
        })
    }
}

fn load(input: &Input) -> Result<BipartitePureState, Failure> {
    if let Some(text) = &input.expr {
        return parse_state(text).map_err(|e| Failure::from_core(e, Some(text)));
    }
    let path = input.file.as_ref().expect("clap requires one input");
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    state_from_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn run_analysis(state: &BipartitePureState, flags: &Flags) -> Result<String, Failure> {
    let report = analyze(state, &flags.options()?).map_err(|e| Failure::from_core(e, None))?;
    Ok(match flags.format {
        Format::Json => report.to_json(),
        Format::Table => render::analysis_table(&report),
    })
}

fn run_density(name: &str, rho: &DensityMatrix, other: &str, reference: &DensityMatrix, flags: &Flags) -> Result<String, Failure> {
    let report = density_report(name, rho, other, reference, 1e-12).map_err(|e| Failure::from_core(e, None))?;
    Ok(match flags.format {
        Format::Json => report.to_json(),
        Format::Table => render::density_table(&report),
    })
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Analyze { input, flags } => run_analysis(&load(&input)?, &flags),
        Command::Examples { name, flags } => match name {
            Example::Psi0 => run_analysis(&fixtures::psi0(), &flags),
            Example::Psi1 => run_analysis(&fixtures::psi1(), &flags),
            Example::Psi2 => run_analysis(&fixtures::psi2(), &flags),
            Example::Psi3 => run_analysis(&fixtures::psi3(), &flags),
            Example::Bell => run_density("bell", &fixtures::rho_qm(), "classical", &fixtures::rho_cl(), &flags),
            Example::Classical => run_density("classical", &fixtures::rho_cl(), "bell", &fixtures::rho_qm(), &flags),
        },
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = writeln!(io::stdout().lock(), "{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            let (Failure::Input(msg) | Failure::Numerical(msg)) = &f;
            eprintln!("error: {msg}");
            ExitCode::from(f.exit_code())
        }
    }
}
