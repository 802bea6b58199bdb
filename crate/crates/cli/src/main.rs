mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use nhfloquet::experiments::{self, Command, WorkPool};
use nhfloquet::Error;

/// Floquet non-Hermitian SSH chain simulator.
#[derive(Parser, Debug)]
#[command(name = "nhfloquet", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// TOML config file; keys not given keep their defaults.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory (default: <output_dir>/<subcommand>).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Master seed for disorder realizations (overrides disorder.seed).
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, value_name = "N", default_value_t = 0)]
    workers: usize,
    /// Override a config key, e.g. `--set drive.f=0.5` or `--set f=0.5`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    sets: Vec<String>,
}

#[derive(Subcommand, Debug, Clone)]
enum Sub {
    /// Quasienergies of the real-space Floquet operator over the (f, w) grid.
    Spectrum,
    /// Open-chain singular spectra of U(T) ∓ I and their zero-mode counts.
    Singulars,
    /// Momentum-space windings V1 and V2.
    Winding,
    /// Real-space windings of periodic chains, clean or disordered.
    WindingReal,
    /// Static Bloch and GBZ windings next to open-chain zero modes.
    StaticWinding,
    /// V1 and V2 over a two-dimensional (f, w) grid.
    PhaseDiagram,
    /// Gap closings bisected along the swept axes.
    Boundaries,
    /// Disorder sweep: mode drift, WIPR and real-space windings.
    Disorder,
    /// Disorder-averaged WIPR only.
    Wipr,
    /// Repeat the run recorded in a manifest.json.
    Rerun {
        /// Manifest written by an earlier run.
        manifest: PathBuf,
    },
}

impl Sub {
    fn command(&self) -> Option<Command> {
        Some(match self {
            Sub::Spectrum => Command::Spectrum,
            Sub::Singulars => Command::Singulars,
            Sub::Winding => Command::Winding,
            Sub::WindingReal => Command::WindingReal,
            Sub::StaticWinding => Command::StaticWinding,
            Sub::PhaseDiagram => Command::PhaseDiagram,
            Sub::Boundaries => Command::Boundaries,
            Sub::Disorder => Command::Disorder,
            Sub::Wipr => Command::Wipr,
            Sub::Rerun { .. } => return None,
        })
    }
}

const EXIT_IO: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::InvalidParameter(_) => EXIT_CONFIG,
        Error::Io { .. } => EXIT_IO,
        _ => EXIT_NUMERIC,
    }
}

fn main() -> ExitCode {
    let matches = Cli::command().after_help(config::keys_help()).get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let pool = match WorkPool::new(cli.common.workers) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };

    let (name, result) = match cli.command {
        Sub::Rerun { manifest } => {
            let dir = cli.common.out.clone().unwrap_or_else(|| {
                manifest
                    .parent()
                    .map(|p| p.join("rerun"))
                    .unwrap_or_else(|| "rerun".into())
            });
            ("rerun", experiments::rerun(&manifest, &pool, &dir).map(|r| (r, dir)))
        }
        sub => {
            let command = sub.command().expect("experiment subcommand");
            let mut cfg = match config::load(cli.common.config.as_deref(), std::env::vars(), &cli.common.sets) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("config error: {e}");
                    return ExitCode::from(EXIT_CONFIG);
                }
            };
            if let Some(seed) = cli.common.seed {
                cfg.disorder.seed = seed;
            }
            let dir = cli
                .common
                .out
                .clone()
                .unwrap_or_else(|| experiments::default_dir(&cfg, command));
            (
                command.name(),
                experiments::execute(command, &cfg, &pool, &dir).map(|r| (r, dir)),
            )
        }
    };

    match result {
        Ok(((out, manifest), dir)) => {
            println!("{}", out.summary);
            println!("wrote {} to {}", manifest.files.join(", "), dir.display());
            for d in &out.diagnostics {
                eprintln!("warning: {d}");
            }
            if out.diagnostics.is_empty() {
                ExitCode::SUCCESS
            } else {
                eprintln!(
                    "{name}: {} numerical failure(s); affected rows are flagged or empty",
                    out.diagnostics.len()
                );
                ExitCode::from(EXIT_NUMERIC)
            }
        }
        Err(e) => {
            let code = exit_for(&e);
            match code {
                EXIT_CONFIG => eprintln!("config error: {e}"),
                EXIT_NUMERIC => eprintln!("{name}: numerical failure: {e}"),
                _ => eprintln!("error: {e}"),
            }
            ExitCode::from(code)
        }
    }
}
