//! `qgauss`: explore presets, compute normal forms, run Gauss decompositions
//! and verification suites.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 rewriting budget exceeded.

mod commands;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Basis {
    Frt,
    Gauss,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Factors,
    Relations,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Paper,
    Frt,
    Ybe,
    All,
}

#[derive(Debug, Parser)]
#[command(name = "qgauss", version, about = "Gauss decomposition of FRT quantum (super)groups")]
struct Cli {
    /// Rewriting steps allowed per normal form.
    #[arg(long, global = true, env = "QGAUSS_MAX_STEPS")]
    max_steps: Option<u64>,
    /// Highest degree for confluence and linear checks.
    #[arg(long, global = true, env = "QGAUSS_MAX_DEGREE")]
    max_degree: Option<usize>,
    /// Word limit of the linear oracle.
    #[arg(long, global = true, env = "QGAUSS_MAX_WORDS")]
    max_words: Option<usize>,
    /// TOML file with the same keys as the flags (default ./qgauss.toml if present).
    #[arg(long, global = true, env = "QGAUSS_CONFIG")]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Run the verification suites on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Shipped presets.
    Preset {
        #[command(subcommand)]
        action: PresetCmd,
    },
    /// Sorted relation listing of a preset.
    Relations {
        preset: String,
        #[arg(long, value_enum, default_value = "frt")]
        basis: Basis,
    },
    /// Gauss decomposition with its verification report.
    Decompose {
        preset: String,
        #[arg(long, value_enum, default_value = "all")]
        emit: Emit,
    },
    /// Verification suites; exits 1 if any selected check fails.
    Check {
        preset: String,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
    },
    /// Normal form of an expression. `--at-q` takes a rational value of
    /// s = q^(1/2), not of q.
    NormalForm {
        preset: String,
        expr: String,
        #[arg(long, value_enum, default_value = "frt")]
        basis: Basis,
        #[arg(long = "at-q", value_name = "S")]
        at_q: Option<String>,
    },
    /// R-matrix data files.
    Rmatrix {
        #[command(subcommand)]
        action: RmatrixCmd,
    },
}

#[derive(Debug, Subcommand)]
enum PresetCmd {
    List,
    /// Print the preset definition file.
    Show { name: String },
}

#[derive(Debug, Subcommand)]
enum RmatrixCmd {
    /// Parse a file and check the Yang-Baxter equation.
    Validate { file: PathBuf },
}

#[derive(Debug)]
pub enum Failure {
    /// Output is complete but some check failed.
    Verification(String),
    Usage(String),
    Budget(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Budget(_) => 3,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (out, result) = run(cli);
    print!("{}", out);
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Verification(m) | Failure::Usage(m) | Failure::Budget(m) if !m.is_empty() => {
                    eprintln!("error: {}", m)
                }
                _ => {}
            }
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli) -> (String, Result<(), Failure>) {
    let file = match settings::ConfigFile::load(cli.config.as_deref()) {
        Ok(f) => f,
        Err(e) => return (String::new(), Err(e)),
    };
    let ctx = commands::Ctx {
        budget: settings::budget(
            &file,
            settings::Overrides {
                max_steps: cli.max_steps,
                max_degree: cli.max_degree,
                max_words: cli.max_words,
            },
        ),
        format: cli.format.or(file.format).unwrap_or(Format::Text),
        exec: if cli.sequential || file.sequential == Some(true) {
            qgauss::Exec::Sequential
        } else {
            qgauss::Exec::default()
        },
    };
    let mut out = String::new();
    let r = match cli.cmd {
        Cmd::Preset { action: PresetCmd::List } => commands::preset_list(&ctx, &mut out),
        Cmd::Preset {
            action: PresetCmd::Show { name },
        } => commands::preset_show(&name, &mut out),
        Cmd::Relations { preset, basis } => commands::relations(&ctx, &preset, basis, &mut out),
        Cmd::Decompose { preset, emit } => commands::decompose(&ctx, &preset, emit, &mut out),
        Cmd::Check { preset, suite } => commands::check(&ctx, &preset, suite, &mut out),
        Cmd::NormalForm {
            preset,
            expr,
            basis,
            at_q,
        } => commands::normal_form(&ctx, &preset, &expr, basis, at_q.as_deref(), &mut out),
        Cmd::Rmatrix {
            action: RmatrixCmd::Validate { file },
        } => commands::rmatrix_validate(&ctx, &file, &mut out),
    };
    (out, r)
}
