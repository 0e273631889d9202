//! `deloc`: command-line front end for deloc-core.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "deloc", version, about = "Delocalized cohomology and index pairings for finite group actions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the machine-readable JSON report here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for internal parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Conjugacy classes and periodic cyclic homology of a group algebra.
    HpGroup {
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        corpus: Option<String>,
    },
    /// Cohomology of the action groupoid, checked against two oracles.
    Cohomology {
        #[arg(long)]
        space: Option<String>,
        #[arg(long)]
        corpus: Option<String>,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Per-class delocalized cohomology.
    Deloc {
        #[arg(long)]
        space: Option<String>,
        #[arg(long)]
        corpus: Option<String>,
    },
    /// Gram matrices of the Poincaré pairing per class.
    Pairing {
        #[arg(long)]
        space: Option<String>,
        #[arg(long)]
        corpus: Option<String>,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// The Chern–assembly index identity.
    AssemblyCheck {
        #[arg(long)]
        corpus: Option<String>,
        #[arg(long)]
        space: Option<String>,
        #[arg(long)]
        bundle: Option<String>,
    },
    /// Functoriality and projection formula for umkehr maps.
    Umkehr {
        /// A JSON map chain (source, middle, target, f, g).
        #[arg(long)]
        chain: Option<String>,
        #[arg(long)]
        corpus: Option<String>,
    },
    /// Numerical checks of the deformation to the normal cone.
    DncCheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

/// Exit status: 0 ok, 1 a check failed, 2 bad input.
pub enum Failure {
    Check(String),
    Input(String),
}

impl From<deloc_core::Error> for Failure {
    fn from(e: deloc_core::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = commands::run(&cli.command).and_then(|report| {
        print!("{}", report.text);
        if let Some(path) = &cli.out {
            let mut body = serde_json::to_string_pretty(&report.json).expect("reports serialize");
            body.push('\n');
            std::fs::write(path, body).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
        }
        if report.passed {
            Ok(())
        } else {
            Err(Failure::Check("one or more checks failed".into()))
        }
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
