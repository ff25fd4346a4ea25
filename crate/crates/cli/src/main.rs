// Copyright 2026 The lievessiot Authors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lievessiot::automorphic::Integrator;
use lievessiot_cli::{parse_override, run_file, validate_file, CliError, Format, Overrides};
use rayon::prelude::*;
use serde::Deserialize;

#[derive(Parser)]
#[command(name = "lievessiot", version, about = "Run automorphic-system scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Execute scenario files and write artifacts.
    Run {
        /// Scenario files (JSON).
        #[arg(required = true)]
        scenarios: Vec<PathBuf>,
        #[command(flatten)]
        flags: Flags,
    },
    /// Check scenario files without integrating.
    Validate {
        #[arg(required = true)]
        scenarios: Vec<PathBuf>,
        #[command(flatten)]
        flags: Flags,
    },
}

#[derive(Args, Clone, Default)]
struct Flags {
    /// JSON file with default values for the flags below.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Grid step, overriding the scenario path step.
    #[arg(long)]
    step: Option<f64>,
    /// Tolerance override `KEY=VALUE`; repeatable.
    #[arg(long = "tol-override", value_parser = parse_override)]
    tol_override: Vec<(String, f64)>,
    #[arg(long)]
    integrator: Option<Integrator>,
    /// Scenarios run in parallel.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    out: Option<PathBuf>,
    step: Option<f64>,
    #[serde(default)]
    tolerances: BTreeMap<String, f64>,
    integrator: Option<Integrator>,
    jobs: Option<usize>,
    format: Option<Format>,
}

struct Resolved {
    out: PathBuf,
    overrides: Overrides,
    jobs: usize,
    format: Format,
}

fn resolve(flags: &Flags) -> Result<Resolved, CliError> {
    let config = match &flags.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Validation(format!("{}: {e}", p.display())))?;
            serde_json::from_str::<ConfigFile>(&text).map_err(|e| CliError::Validation(format!("{}: {e}", p.display())))?
        }
        None => ConfigFile::default(),
    };
    let mut tolerances = config.tolerances;
    tolerances.extend(flags.tol_override.iter().cloned());
    Ok(Resolved {
        out: flags.out.clone().or(config.out).unwrap_or_else(|| PathBuf::from("out")),
        overrides: Overrides { step: flags.step.or(config.step), integrator: flags.integrator.or(config.integrator), tolerances },
        jobs: flags.jobs.or(config.jobs).unwrap_or(1).max(1),
        format: flags.format.or(config.format).unwrap_or_default(),
    })
}

fn stem(p: &Path) -> String {
    p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "scenario".into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (scenarios, flags, dry) = match cli.command {
        Cmd::Run { scenarios, flags } => (scenarios, flags, false),
        Cmd::Validate { scenarios, flags } => (scenarios, flags, true),
    };
    let settings = match resolve(&flags) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let single = scenarios.len() == 1;
    let task = |file: &PathBuf| -> (String, Result<String, CliError>) {
        let label = file.display().to_string();
        if dry {
            return (label, validate_file(file, &settings.overrides));
        }
        let out = if single { settings.out.clone() } else { settings.out.join(stem(file)) };
        let r = run_file(file, &out, &settings.overrides, settings.format)
            .map(|a| format!("ok ({} artifacts in {})", a.len(), out.display()));
        (label, r)
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(settings.jobs).build().expect("thread pool");
    let results: Vec<(String, Result<String, CliError>)> = pool.install(|| scenarios.par_iter().map(task).collect());
    let mut code = 0;
    for (label, r) in results {
        match r {
            Ok(msg) => println!("{label}: {msg}"),
            Err(e) => {
                eprintln!("{label}: {e}");
                code = code.max(e.exit_code());
            }
        }
    }
    ExitCode::from(code as u8)
}
