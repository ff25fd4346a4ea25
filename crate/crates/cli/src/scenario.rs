// Copyright 2026 The lievessiot Authors
// SPDX-License-Identifier: Apache-2.0

//! Scenario files: the system, its homogeneous spaces, the integration path
//! and an ordered list of commands.

use std::collections::BTreeMap;
use std::path::Path;

use lievessiot::automorphic::{AutomorphicSystem, FlowOptions, Integrator, DEFAULT_REFINE_TOL};
use lievessiot::homogeneous::{HomogeneousSpace, SpaceKind, SpacePoint};
use lievessiot::lie::{builtin_algebra, compute_structure_constants, matrix_from_pairs, Algebra, GroupConstraint};
use lievessiot::reduction::DEFAULT_QUADRATURE_STEP;
use lievessiot::timefunc::{parse, TimePath, POLE_CLEARANCE};
use lievessiot::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

/// Keys accepted in `tolerances` and by `--tol-override`.
pub const TOLERANCE_KEYS: [&str; 3] = ["refine", "max_refinements", "quadrature_step"];

type PairMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub name: Option<String>,
    pub group: GroupSpec,
    pub coefficients: Vec<String>,
    #[serde(default)]
    pub spaces: Vec<SpaceSpec>,
    pub path: PathSpec,
    /// Extra points the path must avoid, as `[re, im]`.
    #[serde(default)]
    pub poles: Vec<[f64; 2]>,
    #[serde(default)]
    pub integrator: Option<Integrator>,
    #[serde(default)]
    pub commands: Vec<Command>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

/// A catalog algebra (`name`, `n`) or a custom basis (`basis`,
/// `constraint`).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub name: String,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub basis: Option<Vec<PairMatrix>>,
    #[serde(default)]
    pub constraint: Option<GroupConstraint>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub name: String,
    pub kind: SpaceKind,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathSpec {
    pub nodes: Vec<[f64; 2]>,
    pub step: f64,
}

/// A particular solution handed to `reduce`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SolutionSpec {
    /// Exact rational entries.
    Rational(Vec<String>),
    /// The induced solution through this initial point.
    Induced(Value),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvariantSpec {
    pub space: String,
    pub point: Value,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case", deny_unknown_fields)]
pub enum Command {
    /// Automorphic flow from `sigma0` (identity by default).
    Flow {
        #[serde(default)]
        sigma0: Option<PairMatrix>,
    },
    /// Induced solution on a space.
    Induce { space: String, x0: Value },
    /// Lie's reduction by a particular solution.
    Reduce { space: String, x0: Value, solution: SolutionSpec },
    /// Abelian quadrature.
    Quadrature {},
    /// Solvable quadrature.
    Solvable {},
    /// Polynomial symmetries and, given `v0`, the adjoint curve through it.
    Symmetries {
        degree: usize,
        #[serde(default)]
        v0: Option<Vec<[f64; 2]>>,
    },
    /// Stabilizer/centralizer diagnostic with transport along the path.
    Diagnose {
        invariants: Vec<InvariantSpec>,
        degree: usize,
        #[serde(default = "default_true")]
        transport: bool,
    },
    /// Superposition: three solutions and one constant on the projective
    /// line, `n` solutions and `n` constants on `ℂⁿ`.
    Superpose { space: String, solutions: Vec<Value>, lambda: Vec<[f64; 2]> },
}

fn default_true() -> bool {
    true
}

impl Command {
    pub fn label(&self) -> &'static str {
        match self {
            Command::Flow { .. } => "flow",
            Command::Induce { .. } => "induce",
            Command::Reduce { .. } => "reduce",
            Command::Quadrature {} => "quadrature",
            Command::Solvable {} => "solvable",
            Command::Symmetries { .. } => "symmetries",
            Command::Diagnose { .. } => "diagnose",
            Command::Superpose { .. } => "superpose",
        }
    }

    fn spaces(&self) -> Vec<&str> {
        match self {
            Command::Induce { space, .. } | Command::Reduce { space, .. } | Command::Superpose { space, .. } => {
                vec![space.as_str()]
            }
            Command::Diagnose { invariants, .. } => invariants.iter().map(|i| i.space.as_str()).collect(),
            _ => Vec::new(),
        }
    }
}

/// Flags that override scenario settings.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub step: Option<f64>,
    pub integrator: Option<Integrator>,
    pub tolerances: BTreeMap<String, f64>,
}

/// Effective numerical settings of a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Settings {
    pub step: f64,
    pub integrator: Integrator,
    pub refine: f64,
    pub max_refinements: usize,
    pub quadrature_step: f64,
}

impl Settings {
    pub fn flow_options(&self) -> FlowOptions {
        FlowOptions {
            step: self.step,
            integrator: self.integrator,
            refine: Some(self.refine),
            max_refinements: self.max_refinements,
        }
    }
}

/// A scenario with its algebra, system, spaces and path built and checked.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub scenario: Scenario,
    pub algebra: Algebra,
    pub system: AutomorphicSystem,
    pub spaces: BTreeMap<String, HomogeneousSpace>,
    pub path: TimePath,
    pub settings: Settings,
}

impl Prepared {
    pub fn space(&self, name: &str) -> Result<&HomogeneousSpace, CliError> {
        self.spaces.get(name).ok_or_else(|| CliError::Validation(format!("commands: undeclared space `{name}`")))
    }

    pub fn point(&self, space: &str, value: &Value) -> Result<SpacePoint, CliError> {
        let sp = self.space(space)?;
        SpacePoint::from_json(sp, value).map_err(|e| CliError::Validation(format!("point on `{space}`: {e}")))
    }
}

pub fn load(path: &Path) -> Result<Scenario, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

fn field(name: &str) -> impl Fn(lievessiot::Error) -> CliError + '_ {
    move |e| CliError::Validation(format!("{name}: {e}"))
}

fn build_algebra(spec: &GroupSpec) -> Result<Algebra, CliError> {
    match &spec.basis {
        Some(mats) => {
            let basis = mats.iter().map(|m| matrix_from_pairs(m)).collect::<Result<Vec<_>, _>>().map_err(field("group.basis"))?;
            let constraint = spec.constraint.unwrap_or(GroupConstraint::GeneralLinear);
            compute_structure_constants(&spec.name, basis, constraint).map_err(field("group.basis"))
        }
        None => {
            let n = spec.n.ok_or_else(|| CliError::Validation("group.n: required for catalog algebras".into()))?;
            builtin_algebra(&spec.name, n).map_err(field("group"))
        }
    }
}

fn settings(scenario: &Scenario, overrides: &Overrides) -> Result<Settings, CliError> {
    let mut tol = scenario.tolerances.clone();
    tol.extend(overrides.tolerances.iter().map(|(k, v)| (k.clone(), *v)));
    if let Some(k) = tol.keys().find(|k| !TOLERANCE_KEYS.contains(&k.as_str())) {
        return Err(CliError::Validation(format!("tolerances: unknown key `{k}` (expected one of {TOLERANCE_KEYS:?})")));
    }
    let positive = |name: &str, v: f64| {
        if v.is_finite() && v > 0.0 {
            Ok(v)
        } else {
            Err(CliError::Validation(format!("{name}: must be positive, got {v}")))
        }
    };
    let step = positive("path.step", overrides.step.unwrap_or(scenario.path.step))?;
    let refine = positive("tolerances.refine", tol.get("refine").copied().unwrap_or(DEFAULT_REFINE_TOL))?;
    let quadrature_step =
        positive("tolerances.quadrature_step", tol.get("quadrature_step").copied().unwrap_or(DEFAULT_QUADRATURE_STEP))?;
    let max_refinements = match tol.get("max_refinements") {
        Some(&v) if v >= 0.0 && v.fract() == 0.0 => v as usize,
        Some(&v) => return Err(CliError::Validation(format!("tolerances.max_refinements: expected a count, got {v}"))),
        None => FlowOptions::default().max_refinements,
    };
    let integrator = overrides.integrator.or(scenario.integrator).unwrap_or_default();
    Ok(Settings { step, integrator, refine, max_refinements, quadrature_step })
}

/// Structural checks without integration: algebra closure, coefficient
/// count and syntax, declared spaces and points, path clearance from the
/// coefficient poles and the declared poles, tolerance keys.
pub fn prepare(scenario: &Scenario, overrides: &Overrides) -> Result<Prepared, CliError> {
    let algebra = build_algebra(&scenario.group)?;
    if scenario.coefficients.len() != algebra.dim() {
        return Err(CliError::Validation(format!(
            "coefficients: expected {} entries for `{}`, got {}",
            algebra.dim(),
            algebra.name(),
            scenario.coefficients.len()
        )));
    }
    for (k, c) in scenario.coefficients.iter().enumerate() {
        parse(c).map_err(|e| CliError::Validation(format!("coefficients[{k}]: {e}")))?;
    }
    let system = AutomorphicSystem::parse(&algebra, &scenario.coefficients).map_err(field("coefficients"))?;
    let mut spaces = BTreeMap::new();
    for s in &scenario.spaces {
        let space = HomogeneousSpace::new(s.kind, &algebra).map_err(|e| CliError::Validation(format!("spaces.{}: {e}", s.name)))?;
        if spaces.insert(s.name.clone(), space).is_some() {
            return Err(CliError::Validation(format!("spaces: duplicate name `{}`", s.name)));
        }
    }
    let nodes: Vec<Complex64> = scenario.path.nodes.iter().map(|p| Complex64::new(p[0], p[1])).collect();
    let path = TimePath::new(nodes).map_err(field("path.nodes"))?;
    let mut poles = system.coeffs().pole_locations();
    poles.extend(scenario.poles.iter().map(|p| Complex64::new(p[0], p[1])));
    path.check_clearance(&poles, POLE_CLEARANCE).map_err(field("path"))?;
    let settings = settings(scenario, overrides)?;
    let prepared = Prepared { scenario: scenario.clone(), algebra, system, spaces, path, settings };
    for (i, cmd) in scenario.commands.iter().enumerate() {
        for name in cmd.spaces() {
            prepared.space(name).map_err(|e| CliError::Validation(format!("commands[{i}]: {e}")))?;
        }
        check_command(&prepared, cmd).map_err(|e| match e {
            CliError::Validation(m) => CliError::Validation(format!("commands[{i}] ({}): {m}", cmd.label())),
            other => other,
        })?;
    }
    Ok(prepared)
}

fn check_command(p: &Prepared, cmd: &Command) -> Result<(), CliError> {
    match cmd {
        Command::Flow { sigma0: Some(m) } => {
            let m = matrix_from_pairs(m).map_err(field("sigma0"))?;
            lievessiot::lie::GroupElement::new(&p.algebra, m).map_err(field("sigma0"))?;
        }
        Command::Induce { space, x0 } | Command::Reduce { space, x0, .. } => {
            p.point(space, x0)?;
        }
        Command::Diagnose { invariants, .. } => {
            for inv in invariants {
                p.point(&inv.space, &inv.point)?;
            }
        }
        Command::Superpose { space, solutions, lambda } => {
            for s in solutions {
                p.point(space, s)?;
            }
            let (need, consts) = match p.space(space)?.kind() {
                SpaceKind::ProjectiveLine => (3, 1),
                SpaceKind::Linear => (p.algebra.n(), p.algebra.n()),
                SpaceKind::Adjoint => {
                    return Err(CliError::Validation("superposition is defined on linear and projective spaces".into()))
                }
            };
            if solutions.len() != need || lambda.len() != consts {
                return Err(CliError::Validation(format!("expected {need} solutions and {consts} constants")));
            }
        }
        Command::Symmetries { v0: Some(v), .. } if v.len() != p.algebra.dim() => {
            return Err(CliError::Validation(format!("v0: expected {} coordinates", p.algebra.dim())));
        }
        _ => {}
    }
    if let Command::Reduce { solution: SolutionSpec::Rational(f), .. } = cmd {
        for (k, e) in f.iter().enumerate() {
            parse(e).map_err(|err| CliError::Validation(format!("solution.rational[{k}]: {err}")))?;
        }
    }
    if let Command::Reduce { space, solution: SolutionSpec::Induced(x), .. } = cmd {
        p.point(space, x)?;
    }
    Ok(())
}
