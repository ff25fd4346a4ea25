// Copyright 2026 The lievessiot Authors
// SPDX-License-Identifier: Apache-2.0

//! Scenario runner: reads scenario files, executes their commands in order
//! and writes one CSV or JSON artifact per command, each with a JSON
//! sidecar holding the numerical settings.
//!
//! Exit codes: `0` when every command and its built-in checks succeed, `2`
//! when the scenario fails validation, `3` when a numerical cross-check
//! fails.

pub mod scenario;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use lievessiot::automorphic::{flow_with, GroupCurve};
use lievessiot::homogeneous::{
    induce_and_solve, linear_superposition, riccati_superposition_curves, PointCurve, SpaceKind,
};
use lievessiot::lie::{matrix_from_pairs, AlgebraElement, GroupElement};
use lievessiot::reduction::{abelian_integrate_with, lie_reduce, solvable_integrate_with, Solution};
use lievessiot::symmetries::{adjoint_residual, galois_centralizer_diagnostic, right_symmetry_ansatz, solve_adjoint};
use lievessiot::timefunc::parse;
use lievessiot::{Complex64, Error};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub use scenario::{load, prepare, Command, Overrides, Prepared, Scenario, Settings};

/// Failure of a scenario, with its exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("numerical check failed: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

/// Input problems map to validation failures; failed numerical checks and
/// breakdowns of the numerics map to cross-check failures.
pub fn classify(context: &str, e: Error) -> CliError {
    let msg = format!("{context}: {e}");
    match e {
        Error::Parse { .. }
        | Error::PoleOnPath { .. }
        | Error::PoleError { .. }
        | Error::DimensionMismatch(_)
        | Error::UnknownName(_)
        | Error::NotClosed { .. }
        | Error::DependentBasis { .. }
        | Error::NotInGroup { .. }
        | Error::UnsupportedKind(_)
        | Error::NotAbelian { .. }
        | Error::NotSolvable { .. }
        | Error::NotInOrbit(_)
        | Error::NotASolution { .. }
        | Error::DependentSolutions { .. }
        | Error::DegenerateTriple
        | Error::DegenerateQuadruple => CliError::Validation(msg),
        Error::ProjectionFailure { .. }
        | Error::NoConvergence { .. }
        | Error::StepTooLarge { .. }
        | Error::OutOfDomain { .. }
        | Error::CrossCheckFailure { .. }
        | Error::SectionSingular { .. }
        | Error::ContainmentViolation { .. } => CliError::Numerical(msg),
    }
}

/// Output encoding of curve artifacts; reports are always JSON.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// One written artifact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub path: PathBuf,
    pub sidecar: PathBuf,
}

enum Output {
    Csv(String),
    Json(Value),
}

fn curve_output(format: Format, csv: String, json: impl FnOnce() -> Value) -> Output {
    match format {
        Format::Csv => Output::Csv(csv),
        Format::Json => Output::Json(json()),
    }
}

fn group_curve_json(c: &GroupCurve) -> Value {
    let rows: Vec<Value> = c
        .times()
        .iter()
        .zip(c.values())
        .map(|(t, m)| json!({ "t": [t.re, t.im], "sigma": lievessiot::lie::matrix_to_pairs(m) }))
        .collect();
    Value::Array(rows)
}

fn point_curve_output(format: Format, c: &PointCurve) -> Output {
    curve_output(format, c.to_csv(), || c.to_json())
}

fn pair(p: &[f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

fn execute(p: &Prepared, cmd: &Command, format: Format) -> Result<Output, CliError> {
    let label = cmd.label();
    let err = |e: Error| classify(label, e);
    let opts = p.settings.flow_options();
    let sys = &p.system;
    let path = &p.path;
    Ok(match cmd {
        Command::Flow { sigma0 } => {
            let s0 = match sigma0 {
                Some(m) => GroupElement::new(&p.algebra, matrix_from_pairs(m).map_err(err)?).map_err(err)?,
                None => GroupElement::identity(&p.algebra),
            };
            let c = flow_with(sys, path, &s0, &opts).map_err(err)?;
            curve_output(format, c.to_csv(), || group_curve_json(&c))
        }
        Command::Quadrature {} => {
            let c = abelian_integrate_with(sys, path, p.settings.quadrature_step).map_err(err)?;
            curve_output(format, c.to_csv(), || group_curve_json(&c))
        }
        Command::Solvable {} => {
            let c = solvable_integrate_with(sys, path, p.settings.quadrature_step).map_err(err)?;
            curve_output(format, c.to_csv(), || group_curve_json(&c))
        }
        Command::Induce { space, x0 } => {
            let x0 = p.point(space, x0)?;
            let c = induce_and_solve(sys, p.space(space)?, &x0, path, &opts).map_err(err)?;
            point_curve_output(format, &c)
        }
        Command::Reduce { space, x0, solution } => {
            let sp = p.space(space)?;
            let x0p = p.point(space, x0)?;
            let sol = match solution {
                scenario::SolutionSpec::Rational(f) => {
                    Solution::Rational(f.iter().map(|e| parse(e)).collect::<Result<Vec<_>, _>>().map_err(err)?)
                }
                scenario::SolutionSpec::Induced(x) => {
                    let start = p.point(space, x)?;
                    Solution::Sampled(induce_and_solve(sys, sp, &start, path, &opts).map_err(err)?)
                }
            };
            let r = lie_reduce(sys, sp, &sol, &x0p, path, p.settings.step).map_err(err)?;
            Output::Json(r.to_json().map_err(err)?)
        }
        Command::Symmetries { degree, v0 } => {
            let ansatz = right_symmetry_ansatz(sys, *degree);
            let basis: Vec<Vec<String>> = ansatz.basis.iter().map(|s| s.to_strings()).collect();
            let mut report = json!({ "degree": degree, "basis": basis });
            if let Some(v) = v0 {
                let coords: Vec<Complex64> = v.iter().map(pair).collect();
                let v0 = AlgebraElement::from_slice(&p.algebra, &coords);
                let curve = solve_adjoint(sys, &v0, path, &opts).map_err(err)?;
                let residual = adjoint_residual(sys, &curve).map_err(err)?;
                report["adjoint"] = json!({ "residual": residual, "csv": curve.to_csv() });
            }
            Output::Json(report)
        }
        Command::Diagnose { invariants, degree, transport } => {
            let data = invariants
                .iter()
                .map(|i| Ok((p.space(&i.space)?.clone(), p.point(&i.space, &i.point)?)))
                .collect::<Result<Vec<_>, CliError>>()?;
            let t0 = path.start();
            let along = if *transport { Some(path) } else { None };
            let r = galois_centralizer_diagnostic(sys, &data, *degree, t0, along, &opts).map_err(err)?;
            Output::Json(r.to_json())
        }
        Command::Superpose { space, solutions, lambda } => {
            let sp = p.space(space)?;
            let curves = solutions
                .iter()
                .map(|x| induce_and_solve(sys, sp, &p.point(space, x)?, path, &opts).map_err(err))
                .collect::<Result<Vec<_>, CliError>>()?;
            let c = match sp.kind() {
                SpaceKind::ProjectiveLine => {
                    riccati_superposition_curves(&curves[0], &curves[1], &curves[2], pair(&lambda[0])).map_err(err)?
                }
                _ => linear_superposition(&curves, &lambda.iter().map(pair).collect::<Vec<_>>()).map_err(err)?,
            };
            point_curve_output(format, &c)
        }
    })
}

fn sidecar(p: &Prepared, cmd: &Command, format: Format) -> Value {
    json!({
        "scenario": p.scenario.name,
        "command": cmd.label(),
        "format": format,
        "integrator": p.settings.integrator.to_string(),
        "tolerances": {
            "step": p.settings.step,
            "refine": p.settings.refine,
            "max_refinements": p.settings.max_refinements,
            "quadrature_step": p.settings.quadrature_step,
            "pole_clearance": lievessiot::timefunc::POLE_CLEARANCE,
            "reduction": lievessiot::reduction::REDUCTION_TOL,
            "solution": lievessiot::reduction::SOLUTION_TOL,
            "adjoint_cross_check": lievessiot::symmetries::ADJOINT_CROSS_CHECK_TOL,
            "containment": lievessiot::symmetries::CONTAINMENT_TOL,
            "transport": lievessiot::symmetries::TRANSPORT_TOL,
        },
    })
}

fn write_file(path: &Path, body: &str) -> Result<(), CliError> {
    std::fs::write(path, body).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Executes every command of `p` in order, writing
/// `NN_<command>.{csv,json}` and `NN_<command>.meta.json` into `out`.
/// Stops at the first failure.
pub fn run_prepared(p: &Prepared, out: &Path, format: Format) -> Result<Vec<Artifact>, CliError> {
    let mut artifacts = Vec::new();
    if p.scenario.commands.is_empty() {
        return Ok(artifacts);
    }
    std::fs::create_dir_all(out).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
    for (i, cmd) in p.scenario.commands.iter().enumerate() {
        let stem = format!("{i:02}_{}", cmd.label());
        let (file, body) = match execute(p, cmd, format)? {
            Output::Csv(s) => (out.join(format!("{stem}.csv")), s),
            Output::Json(v) => (out.join(format!("{stem}.json")), pretty(&v)),
        };
        write_file(&file, &body)?;
        let meta = out.join(format!("{stem}.meta.json"));
        write_file(&meta, &pretty(&sidecar(p, cmd, format)))?;
        artifacts.push(Artifact { path: file, sidecar: meta });
    }
    Ok(artifacts)
}

/// Loads, validates and runs one scenario file.
pub fn run_file(file: &Path, out: &Path, overrides: &Overrides, format: Format) -> Result<Vec<Artifact>, CliError> {
    let scenario = load(file)?;
    let prepared = prepare(&scenario, overrides)?;
    run_prepared(&prepared, out, format)
}

/// Dry run: structural checks only. Returns a one-line summary.
pub fn validate_file(file: &Path, overrides: &Overrides) -> Result<String, CliError> {
    let scenario = load(file)?;
    let p = prepare(&scenario, overrides)?;
    let mut s = String::from("ok");
    write!(
        s,
        " ({}: dim {}, {} spaces, {} commands)",
        p.algebra.name(),
        p.algebra.dim(),
        p.spaces.len(),
        p.scenario.commands.len()
    )
    .unwrap();
    Ok(s)
}

/// Parses `K=V` pairs of `--tol-override`.
pub fn parse_override(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected KEY=VALUE, got `{s}`"))?;
    let v: f64 = v.trim().parse().map_err(|e| format!("{k}: {e}"))?;
    Ok((k.trim().to_string(), v))
}
