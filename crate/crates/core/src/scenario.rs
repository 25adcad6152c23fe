//! Scenario files and the batch runner behind the `lab` command.
//!
//! A scenario is one JSON document naming a field, an automorphism `φ`, a
//! base point `c` and a list of tasks. Tasks run in a fixed canonical order
//! and each yields a pass/fail outcome plus the reports it produced. All
//! volatile data (wall-clock start, per-task durations) lives under the
//! single `timestamp` key of the run report, so two runs of one scenario
//! serialize identically once that key is dropped.

use std::sync::Arc;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::euler::{self, EulerOp};
use crate::orbitcert::{self, noetherian_report, OrbitWindow, Verdict};
use crate::projgeo::text::{parse_aut, parse_point, parse_poly};
use crate::projgeo::{orbit_point, ProjAut, ProjPoint};
use crate::report::{Check, Method, Report};
use crate::scalars::field::Field;
use crate::scalars::{FieldSpec, Scalar};
use crate::subring::certify::{certified_hilbert, certified_opposite, certified_ring_equality, specialize_ctx};
use crate::subring::{IndexSet, SubringCtx};
use crate::witness;

pub const SCENARIO_SCHEMA: &str = "twistlab-scenario/1";
pub const REPORT_SCHEMA: &str = "twistlab-report/1";
pub const DEFAULT_WINDOW: usize = 12;
pub const DEFAULT_DMAX: usize = 3;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
}

fn invalid(msg: impl Into<String>) -> ScenarioError {
    ScenarioError::Invalid(msg.into())
}

fn default_window() -> usize {
    DEFAULT_WINDOW
}

fn default_dmax() -> usize {
    DEFAULT_DMAX
}

fn default_nmax() -> usize {
    5
}

fn default_seed() -> u64 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldConfig {
    #[serde(default)]
    pub characteristic: u64,
    #[serde(default)]
    pub params: Vec<String>,
}

/// A named list of orbit indices examined by the position task.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Probe {
    pub name: String,
    pub indices: Vec<i64>,
}

/// A hypersurface the position task must find, up to scalar.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedWitness {
    pub side: String,
    pub degree: usize,
    pub poly: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "task", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Task {
    /// Orbit points on the window are pairwise distinct.
    Orbit {},
    /// Position certificates on both sides of the orbit and on probes.
    Position {
        #[serde(default)]
        probes: Vec<Probe>,
        #[serde(default)]
        expect: Vec<ExpectedWitness>,
        /// Require general position on the full window in every degree
        /// where the certificate is meaningful.
        #[serde(default)]
        general_position: bool,
    },
    /// `dim R_n = C(n+t,t) − n`.
    Hilbert {
        #[serde(default = "default_nmax")]
        nmax: usize,
        #[serde(default = "default_seed")]
        seed: u64,
    },
    /// `V^n` equals the closed form `{f ∈ U_n : f(c_i) = 0, i < n}`.
    RingEquality {
        #[serde(default = "default_nmax")]
        nmax: usize,
        #[serde(default = "default_seed")]
        seed: u64,
    },
    /// Module Hilbert functions, decompositions, annihilators, subfactors.
    Modules {
        sets: Vec<Vec<usize>>,
        #[serde(default = "default_nmax")]
        nmax: usize,
        #[serde(default)]
        annihilators: Vec<usize>,
        #[serde(default)]
        subfactors: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        specialize: Option<u64>,
    },
    /// Point ideals `J^{(i)}` and their Hilbert profiles.
    PointFamily {
        points: Vec<usize>,
        #[serde(default = "default_nmax")]
        nmax: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        specialize: Option<u64>,
    },
    /// Two point ideals agreeing exactly through degree `i`.
    Collision {
        points: Vec<usize>,
        #[serde(default = "default_nmax")]
        nmax: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        specialize: Option<u64>,
    },
    /// Membership and pivot obligations for the explicit witness chain.
    Witness {
        #[serde(default = "default_witness_nmax")]
        nmax: usize,
        #[serde(default = "default_pmax")]
        pmax: usize,
    },
    /// Dimensions of algebras generated by Eulerian derivatives.
    Euler {
        gens: Vec<String>,
        #[serde(default = "default_nmax")]
        nmax: usize,
        #[serde(default = "default_euler_windows")]
        windows: (usize, usize),
        #[serde(default = "default_seed")]
        seed: u64,
        /// Parameters `p_1..p_t` whose `w`-relations are checked.
        #[serde(default)]
        relation_params: Vec<String>,
    },
    /// Anti-isomorphism onto the ring of `φ^{-1}`.
    Opposite {
        #[serde(default = "default_pairs")]
        pairs: usize,
        #[serde(default = "default_nmax")]
        nmax: usize,
        #[serde(default = "default_seed")]
        seed: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        specialize: Option<u64>,
    },
}

fn default_witness_nmax() -> usize {
    3
}

fn default_pmax() -> usize {
    2
}

fn default_euler_windows() -> (usize, usize) {
    (20, 26)
}

fn default_pairs() -> usize {
    5
}

/// Task names in execution order.
pub const TASK_ORDER: [&str; 10] =
    ["orbit", "position", "hilbert", "ring-equality", "modules", "point-family", "collision", "witness", "euler", "opposite"];

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Orbit {} => "orbit",
            Task::Position { .. } => "position",
            Task::Hilbert { .. } => "hilbert",
            Task::RingEquality { .. } => "ring-equality",
            Task::Modules { .. } => "modules",
            Task::PointFamily { .. } => "point-family",
            Task::Collision { .. } => "collision",
            Task::Witness { .. } => "witness",
            Task::Euler { .. } => "euler",
            Task::Opposite { .. } => "opposite",
        }
    }

    fn rank(&self) -> usize {
        TASK_ORDER.iter().position(|n| *n == self.name()).unwrap()
    }

    /// Largest degree the task asks for.
    fn max_degree(&self) -> usize {
        match self {
            Task::Orbit {} | Task::Position { .. } => 0,
            Task::Hilbert { nmax, .. }
            | Task::RingEquality { nmax, .. }
            | Task::PointFamily { nmax, .. }
            | Task::Collision { nmax, .. }
            | Task::Witness { nmax, .. }
            | Task::Euler { nmax, .. }
            | Task::Opposite { nmax, .. } => *nmax,
            Task::Modules { nmax, .. } => *nmax,
        }
    }
}

/// One-paragraph description of a task, for `lab explain`.
pub fn explain(task: &str) -> Option<&'static str> {
    Some(match task {
        "orbit" => "Checks that the orbit points c_i = φ^{-i}(c), |i| ≤ window, are pairwise distinct and that stepping the orbit one index at a time agrees with taking matrix powers.",
        "position" => "Builds evaluation matrices of the orbit points on the sides i ≥ 0, i ≤ −1, the full window and any named probes, for degrees 1..dmax. Full rank means general position on that window; a kernel vector is a hypersurface through the points and is re-verified by evaluation. Optional expectations name witnesses that must appear up to scalar.",
        "hilbert" => "Compares dim R_n, the forms vanishing at c_0..c_{n−1}, with C(n+t,t) − n for n ≤ nmax. Over a parameter field in characteristic zero the dimension is certified by a specialization rank bound.",
        "ring-equality" => "Checks that the subalgebra generated by V = (m_c)_1 agrees degreewise with the closed form {f : f(c_i) = 0, i < n}.",
        "modules" => "For each index set B: dim (T^B/R)_n = |A_n ∩ B| and the directness of the sum of one-point modules. Also the annihilator of a one-point module generator and the dimension profiles of the two kinds of subfactor for random f.",
        "point-family" => "For each i, the ideal J^(i) (R ∩ m_{c_i} up to degree i, R ∩ m_{c_i}^2 above) has R/J^(i) with Hilbert profile (1,…,1,t,t,…) and is closed under left multiplication by R_1.",
        "collision" => "For each i, two distinct point ideals of R that agree exactly through degree i, built from two codimension-one subspaces of R_{i+1} containing J^(i)_{i+1}.",
        "witness" => "The explicit witness chain over k(y_1..y_t): t_n lies in the right degree and vanishes at c_0..c_n, and the pivot obligations (a)-(c) hold with indeterminate coefficients.",
        "euler" => "Rank of the length-n words in the given Eulerian derivatives as operators on a Laurent window, against C(n+t,t) − n, at two window sizes. Optionally the w-relations for the listed parameters.",
        "opposite" => "The map f ↦ ϕ^{−m}(f) on U_m reverses twisted products of random linear forms and carries R(φ,c) onto R(φ^{−1}, φ(c)) degreewise. Over a parameter field in characteristic zero without `specialize`, the degreewise image is proved by matching the defining orbit points.",
        _ => return None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: String,
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub field: FieldConfig,
    pub t: usize,
    /// Row-major matrix text, e.g. `[[1,0,0],[0,p1,0],[0,0,p2]]`.
    pub phi: String,
    /// Point text, e.g. `(1:1:1)`.
    pub c: String,
    #[serde(default = "default_window")]
    pub window: usize,
    #[serde(default = "default_dmax")]
    pub dmax: usize,
    pub tasks: Vec<Task>,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Scenario, ScenarioError> {
        let s: Scenario = serde_json::from_str(text)?;
        s.prepare()?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn with_overrides(mut self, window: Option<usize>, dmax: Option<usize>) -> Self {
        if let Some(w) = window {
            self.window = w;
        }
        if let Some(d) = dmax {
            self.dmax = d;
        }
        self
    }

    /// Resolves the field, `φ` and `c`, and checks the declared sizes.
    pub fn prepare(&self) -> Result<Prepared, ScenarioError> {
        if self.schema != SCENARIO_SCHEMA {
            return Err(invalid(format!("schema must be {SCENARIO_SCHEMA:?}, got {:?}", self.schema)));
        }
        let spec = FieldSpec::from_owned(self.field.characteristic, self.field.params.clone()).map_err(|e| invalid(format!("field: {e}")))?;
        let phi = parse_aut(&spec, &self.phi).map_err(|e| invalid(format!("phi: {e}")))?;
        let c = parse_point(&spec, &self.c).map_err(|e| invalid(format!("c: {e}")))?;
        if phi.t() != self.t || c.t() != self.t {
            return Err(invalid(format!("t = {} but phi is {}x{} and c has {} coordinates", self.t, phi.t() + 1, phi.t() + 1, c.t() + 1)));
        }
        if self.t < 2 {
            return Err(invalid("t must be at least 2"));
        }
        if self.window == 0 {
            return Err(invalid("window must be positive"));
        }
        if self.dmax > self.window {
            return Err(invalid(format!("dmax {} exceeds window {}", self.dmax, self.window)));
        }
        for task in &self.tasks {
            if task.max_degree() > self.window {
                return Err(invalid(format!("task {} asks for degree {} beyond window {}", task.name(), task.max_degree(), self.window)));
            }
            self.validate_task(&spec, task)?;
        }
        Ok(Prepared { spec, phi, c })
    }

    fn validate_task(&self, spec: &Arc<FieldSpec>, task: &Task) -> Result<(), ScenarioError> {
        let name = task.name();
        match task {
            Task::Position { probes, expect, .. } => {
                let mut seen = std::collections::BTreeSet::new();
                for pr in probes {
                    if ["nonnegative", "negative", "full"].contains(&pr.name.as_str()) || !seen.insert(pr.name.as_str()) {
                        return Err(invalid(format!("{name}: probe name {:?} is reserved or repeated", pr.name)));
                    }
                    if pr.indices.is_empty() {
                        return Err(invalid(format!("{name}: probe {:?} has no indices", pr.name)));
                    }
                }
                for e in expect {
                    parse_poly(spec, self.t, &e.poly, Some(e.degree)).map_err(|err| invalid(format!("{name}: expected witness {:?}: {err}", e.poly)))?;
                }
            }
            Task::Modules { sets, annihilators, .. } => {
                for b in sets {
                    IndexSet::new(b.iter().copied(), self.window).map_err(|e| invalid(format!("{name}: {e}")))?;
                }
                if let Some(j) = annihilators.iter().find(|&&j| j >= self.window) {
                    return Err(invalid(format!("{name}: annihilator index {j} outside window")));
                }
            }
            Task::PointFamily { points, .. } | Task::Collision { points, .. } => {
                if let Some(i) = points.iter().find(|&&i| i + 2 > self.window) {
                    return Err(invalid(format!("{name}: point index {i} needs window at least {}", i + 2)));
                }
            }
            Task::Euler { gens, relation_params, .. } => {
                if gens.is_empty() {
                    return Err(invalid(format!("{name}: no generators")));
                }
                for g in gens {
                    parse_euler_op(spec, g).map_err(|e| invalid(format!("{name}: {e}")))?;
                }
                for p in relation_params {
                    Scalar::parse(spec, p).map_err(|e| invalid(format!("{name}: relation parameter {p:?}: {e}")))?;
                }
            }
            _ => {}
        }
        Ok(())
    }
}

/// Parses `D(p)`, `W(p)` or `yinv`.
pub fn parse_euler_op(spec: &Arc<FieldSpec>, src: &str) -> Result<EulerOp<Scalar>, ScenarioError> {
    let s = src.trim();
    if s == "yinv" {
        return Ok(EulerOp::YInv);
    }
    let (head, rest) = s.split_at(s.find('(').ok_or_else(|| invalid(format!("bad operator {src:?}")))?);
    let arg = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(|| invalid(format!("bad operator {src:?}")))?;
    let p = Scalar::parse(spec, arg).map_err(|e| invalid(format!("operator {src:?}: {e}")))?;
    let op = match head.trim() {
        "D" => EulerOp::D(p),
        "W" => EulerOp::W(p),
        _ => return Err(invalid(format!("unknown operator {head:?} in {src:?}"))),
    };
    op.validate(spec).map_err(|e| invalid(format!("operator {src:?}: {e}")))?;
    Ok(op)
}

/// A scenario with its field, automorphism and point resolved.
pub struct Prepared {
    pub spec: Arc<FieldSpec>,
    pub phi: ProjAut<Scalar>,
    pub c: ProjPoint<Scalar>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TaskOutcome {
    pub task: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub reports: Vec<Report>,
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub evidence: serde_json::Value,
}

impl TaskOutcome {
    fn from_reports(task: &str, reports: Vec<Report>, evidence: serde_json::Value) -> Self {
        let failures: Vec<String> = reports.iter().flat_map(|r| r.failures().into_iter().map(move |f| format!("{}: {f}", r.name))).collect();
        TaskOutcome { task: task.to_string(), pass: failures.is_empty(), failures, error: None, reports, evidence }
    }

    fn failed(task: &str, error: String) -> Self {
        TaskOutcome {
            task: task.to_string(),
            pass: false,
            failures: vec![error.clone()],
            error: Some(error),
            reports: Vec::new(),
            evidence: serde_json::Value::Null,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TaskTiming {
    pub task: String,
    pub ms: u64,
}

/// Volatile data, excluded from determinism comparisons.
#[derive(Clone, Debug, Serialize)]
pub struct Timestamp {
    pub started_unix_ms: u64,
    pub total_ms: u64,
    pub tasks: Vec<TaskTiming>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema: String,
    pub scenario: Scenario,
    pub tasks: Vec<TaskOutcome>,
    pub pass: bool,
    pub timestamp: Timestamp,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The report as JSON with the `timestamp` key removed.
    pub fn stable_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v.as_object_mut().expect("object").remove("timestamp");
        serde_json::to_string_pretty(&v).expect("value serializes")
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }
}

/// Runs every task of a validated scenario, in canonical order.
pub fn run(scenario: &Scenario) -> Result<RunReport, ScenarioError> {
    let prepared = scenario.prepare()?;
    let started = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis() as u64).unwrap_or(0);
    let clock = Instant::now();
    let sub = SubringCtx::from_aut(prepared.phi.clone(), prepared.c.clone(), scenario.window).map_err(|e| e.to_string());
    let mut tasks: Vec<&Task> = scenario.tasks.iter().collect();
    tasks.sort_by_key(|t| t.rank());
    let results: Vec<(TaskOutcome, u64)> = tasks
        .par_iter()
        .map(|task| {
            let t0 = Instant::now();
            let out = run_task(scenario, &prepared, &sub, task);
            (out, t0.elapsed().as_millis() as u64)
        })
        .collect();
    let timings = results.iter().map(|(o, ms)| TaskTiming { task: o.task.clone(), ms: *ms }).collect();
    let outcomes: Vec<TaskOutcome> = results.into_iter().map(|(o, _)| o).collect();
    let pass = outcomes.iter().all(|o| o.pass);
    Ok(RunReport {
        schema: REPORT_SCHEMA.to_string(),
        scenario: scenario.clone(),
        tasks: outcomes,
        pass,
        timestamp: Timestamp { started_unix_ms: started, total_ms: clock.elapsed().as_millis() as u64, tasks: timings },
    })
}

fn run_task(s: &Scenario, p: &Prepared, sub: &Result<SubringCtx<Scalar>, String>, task: &Task) -> TaskOutcome {
    let name = task.name();
    let need_sub = || sub.as_ref().map_err(|e| format!("subring setup: {e}"));
    let result: Result<TaskOutcome, String> = match task {
        Task::Orbit {} => Ok(orbit_task(s, p)),
        Task::Position { probes, expect, general_position } => position_task(s, p, probes, expect, *general_position),
        Task::Hilbert { nmax, seed } => need_sub().and_then(|ctx| {
            let rep = if certify(p) {
                certified_hilbert(ctx, *nmax, *seed).map_err(|e| e.to_string())?
            } else {
                with_method(ctx.hilbert_report(*nmax), Method::exact::<Scalar>(&p.spec))
            };
            Ok(TaskOutcome::from_reports(name, vec![rep], serde_json::Value::Null))
        }),
        Task::RingEquality { nmax, seed } => need_sub().and_then(|ctx| {
            let rep = if certify(p) {
                certified_ring_equality(ctx, *nmax, *seed).map_err(|e| e.to_string())?
            } else {
                with_method(ctx.ring_equality_report(*nmax), Method::exact::<Scalar>(&p.spec))
            };
            Ok(TaskOutcome::from_reports(name, vec![rep], serde_json::Value::Null))
        }),
        Task::Modules { sets, nmax, annihilators, subfactors, specialize } => need_sub().and_then(|ctx| {
            on_ctx(ctx, *specialize, |c, m| modules_reports(c, m, sets, *nmax, annihilators, *subfactors))
                .map(|reps| TaskOutcome::from_reports(name, reps, serde_json::Value::Null))
        }),
        Task::PointFamily { points, nmax, specialize } => need_sub().and_then(|ctx| {
            on_ctx(ctx, *specialize, |c, m| {
                Ok(points.iter().map(|&i| with_method(c.point_family_report(i, *nmax), m.clone()).named(format!("point_ideal_family i = {i}"))).collect())
            })
            .map(|reps| TaskOutcome::from_reports(name, reps, serde_json::Value::Null))
        }),
        Task::Collision { points, nmax, specialize } => need_sub().and_then(|ctx| {
            on_ctx(ctx, *specialize, |c, m| {
                Ok(points.iter().map(|&i| with_method(c.collision_report(i, *nmax), m.clone()).named(format!("truncation_collision i = {i}"))).collect())
            })
            .map(|reps| TaskOutcome::from_reports(name, reps, serde_json::Value::Null))
        }),
        Task::Witness { nmax, pmax } => witness_task(p, *nmax, *pmax),
        Task::Euler { gens, nmax, windows, seed, relation_params } => euler_task(p, gens, *nmax, *windows, *seed, relation_params),
        Task::Opposite { pairs, nmax, seed, specialize: None } if certify(p) => need_sub().and_then(|ctx| {
            let r = certified_opposite(ctx, *pairs, *nmax, *seed).map_err(|e| e.to_string())?;
            Ok(TaskOutcome::from_reports(name, vec![r], serde_json::Value::Null))
        }),
        Task::Opposite { pairs, nmax, seed, specialize } => need_sub().and_then(|ctx| {
            on_ctx(ctx, *specialize, |c, m| Ok(vec![with_method(c.opposite_ring_check(*pairs, *nmax, *seed).map_err(|e| e.to_string())?, m)]))
                .map(|reps| TaskOutcome::from_reports(name, reps, serde_json::Value::Null))
        }),
    };
    result.unwrap_or_else(|e| TaskOutcome::failed(name, e))
}

/// Certified dimensions apply to parameter fields of characteristic zero.
fn certify(p: &Prepared) -> bool {
    p.spec.characteristic == 0 && !p.spec.params.is_empty()
}

fn with_method(mut r: Report, m: Method) -> Report {
    r.method = m;
    r
}

trait Named {
    fn named(self, name: String) -> Self;
}

impl Named for Report {
    fn named(mut self, name: String) -> Self {
        self.name = name;
        self
    }
}

/// Runs `f` on the symbolic context, or on a specialization of it.
fn on_ctx(
    ctx: &SubringCtx<Scalar>,
    specialize: Option<u64>,
    f: impl Fn(&dyn SubringOps, Method) -> Result<Vec<Report>, String>,
) -> Result<Vec<Report>, String> {
    match specialize {
        None => f(ctx, Method::exact::<Scalar>(ctx.ctx())),
        Some(seed) => {
            let (sp, sc) = specialize_ctx(ctx, seed).map_err(|e| format!("specialization: {e}"))?;
            f(&sc, Method::Specialized { modulus: sp.q, seed })
        }
    }
}

/// The subring computations used by tasks, object-safe over the field.
trait SubringOps: Sync {
    fn m_dimension_report(&self, b: &IndexSet, nmax: usize) -> Report;
    fn m_decomposition_check(&self, b: &IndexSet, nmax: usize) -> Report;
    fn one_point_annihilator(&self, j: usize, mmax: usize) -> Report;
    fn subfactors(&self, degree: usize, mmax: usize, seed: u64) -> Result<Vec<Report>, String>;
    fn point_family_report(&self, i: usize, nmax: usize) -> Report;
    fn collision_report(&self, i: usize, nmax: usize) -> Report;
    fn opposite_ring_check(&self, pairs: usize, nmax: usize, seed: u64) -> Result<Report, crate::subring::SubringError>;
}

impl<F: Field> SubringOps for SubringCtx<F> {
    fn m_dimension_report(&self, b: &IndexSet, nmax: usize) -> Report {
        SubringCtx::m_dimension_report(self, b, nmax)
    }

    fn m_decomposition_check(&self, b: &IndexSet, nmax: usize) -> Report {
        SubringCtx::m_decomposition_check(self, b, nmax)
    }

    fn one_point_annihilator(&self, j: usize, mmax: usize) -> Report {
        SubringCtx::one_point_annihilator(self, j, mmax)
    }

    fn subfactors(&self, degree: usize, mmax: usize, seed: u64) -> Result<Vec<Report>, String> {
        let f = self.random_member(&self.r_piece_closed(degree), seed);
        let first = self.subfactor_first_type(&f, mmax).map_err(|e| e.to_string())?;
        let second = self.subfactor_second_type(&f, mmax).map_err(|e| e.to_string())?;
        let tag = format!("f = {f}, zero set {:?}", first.zero_set);
        let mut a = first.report;
        a.note(tag.clone());
        let mut b = second.report;
        b.note(tag);
        Ok(vec![a, b])
    }

    fn point_family_report(&self, i: usize, nmax: usize) -> Report {
        self.point_ideal_family(i, nmax).report
    }

    fn collision_report(&self, i: usize, nmax: usize) -> Report {
        self.truncation_collision(i, nmax).report
    }

    fn opposite_ring_check(&self, pairs: usize, nmax: usize, seed: u64) -> Result<Report, crate::subring::SubringError> {
        SubringCtx::opposite_ring_check(self, pairs, nmax, seed)
    }
}

fn modules_reports(
    c: &dyn SubringOps,
    m: Method,
    sets: &[Vec<usize>],
    nmax: usize,
    annihilators: &[usize],
    subfactors: usize,
) -> Result<Vec<Report>, String> {
    let mut out = Vec::new();
    for set in sets {
        let b = IndexSet::new(set.iter().copied(), nmax.max(set.iter().max().map_or(0, |x| x + 1))).map_err(|e| e.to_string())?;
        out.push(with_method(c.m_dimension_report(&b, nmax), m.clone()).named(format!("module_hilbert B = {set:?}")));
        out.push(with_method(c.m_decomposition_check(&b, nmax), m.clone()).named(format!("module_decomposition B = {set:?}")));
    }
    for &j in annihilators {
        out.push(with_method(c.one_point_annihilator(j, nmax.saturating_sub(j + 1).max(1)), m.clone()).named(format!("one_point_annihilator j = {j}")));
    }
    for k in 0..subfactors {
        for r in c.subfactors(2, nmax, 100 + k as u64)? {
            out.push(with_method(r, m.clone()));
        }
    }
    Ok(out)
}

fn orbit_task(s: &Scenario, p: &Prepared) -> TaskOutcome {
    let w = s.window as i64;
    let win = OrbitWindow::contiguous(p.phi.clone(), p.c.clone(), -w, w);
    let mut rep = Report::new("orbit", Method::exact::<Scalar>(&p.spec));
    rep.check(Check::with("orbit points distinct", orbitcert::distinctness_check(&win), format!("indices {} to {w}", -w)));
    let stepwise = (-w..w).all(|i| orbit_point(&p.phi, &win.points()[(i + w) as usize], 1) == win.points()[(i + w + 1) as usize]);
    rep.check(Check::new("stepping by one index agrees with matrix powers", stepwise));
    for i in -2..=2 {
        rep.note(format!("c_{i} = {}", win.points()[(i + w) as usize]));
    }
    TaskOutcome::from_reports("orbit", vec![rep], serde_json::Value::Null)
}

fn position_task(s: &Scenario, p: &Prepared, probes: &[Probe], expect: &[ExpectedWitness], general: bool) -> Result<TaskOutcome, String> {
    let w = s.window as i64;
    let win = OrbitWindow::contiguous(p.phi.clone(), p.c.clone(), -w, w);
    let probe_list: Vec<(String, Vec<i64>)> = probes.iter().map(|pr| (pr.name.clone(), pr.indices.clone())).collect();
    let ev = noetherian_report(&win, s.dmax.max(expect.iter().map(|e| e.degree).max().unwrap_or(0)), &probe_list);
    let mut rep = ev.report.clone();
    for e in expect {
        let want = parse_poly(&p.spec, s.t, &e.poly, Some(e.degree)).map_err(|err| err.to_string())?;
        let found = ev.side(&e.side).and_then(|side| side.certificates.iter().find(|c| c.degree == e.degree));
        let ok = match found {
            Some(c) if c.verdict == Verdict::HypersurfaceFound => {
                let got = c.witness.as_ref().and_then(|txt| parse_poly(&p.spec, s.t, txt, Some(e.degree)).ok());
                got.is_some_and(|g| orbitcert::proportional(&g, &want))
            }
            _ => false,
        };
        let detail = found.and_then(|c| c.witness.clone()).unwrap_or_else(|| "no witness".into());
        rep.check(Check::with(format!("{}: degree {} witness proportional to {}", e.side, e.degree, e.poly), ok, detail));
    }
    if general {
        let full = ev.side("full").ok_or("full side missing")?;
        for c in full.certificates.iter().filter(|c| c.meaningful) {
            rep.check(Check::new(format!("full: general position in degree {}", c.degree), c.verdict == Verdict::GeneralPosition));
        }
    }
    let evidence = serde_json::to_value(&ev.sides).map_err(|e| e.to_string())?;
    Ok(TaskOutcome::from_reports("position", vec![rep], evidence))
}

fn witness_task(p: &Prepared, nmax: usize, pmax: usize) -> Result<TaskOutcome, String> {
    let orb = witness::setup_affine(&p.phi, &p.c, nmax.max(pmax) + 2).map_err(|e| e.to_string())?;
    let (rep, pivots) = witness::witness_report(&orb, nmax, pmax).map_err(|e| e.to_string())?;
    let mut reps = vec![rep];
    reps.extend(pivots.iter().map(|pv| pv.report.clone()));
    let evidence = serde_json::json!({
        "permutation": orb.permutation(),
        "pivots": pivots.iter().map(|pv| serde_json::json!({
            "n": pv.n,
            "pivot_a": pv.pivot_a,
            "pivot_b": pv.pivot_b,
            "pivot_c": pv.pivot_c,
            "u": pv.u,
            "indeterminates": pv.indeterminates,
            "unit_axiom_cited": pv.unit_axiom_cited,
        })).collect::<Vec<_>>(),
    });
    Ok(TaskOutcome::from_reports("witness", reps, evidence))
}

fn euler_task(p: &Prepared, gens: &[String], nmax: usize, windows: (usize, usize), seed: u64, relation_params: &[String]) -> Result<TaskOutcome, String> {
    let ops = gens.iter().map(|g| parse_euler_op(&p.spec, g)).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
    let mut rep = euler::dimension_report(&ops, nmax, windows, seed).map_err(|e| e.to_string())?;
    rep.name = format!("euler_dimension {}", gens.join(", "));
    let mut reps = vec![rep];
    if !relation_params.is_empty() {
        let ps = relation_params.iter().map(|x| Scalar::parse(&p.spec, x)).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
        let mut rel = Report::new("euler_relations", Method::exact::<Scalar>(&p.spec));
        for i in 0..=ps.len() {
            for j in 0..=ps.len() {
                if i == j {
                    continue;
                }
                let ok = euler::relation_check(&p.spec, &ps, i, j, 8).map_err(|e| e.to_string())?;
                rel.check(Check::new(format!("w_{j} w_{i} = p_{j}^-1 p_{i} w_{i} w_{j} on the window"), ok));
                if i < j {
                    rel.check(Check::new(format!("x_{j} * x_{i} = p_{j}^-1 p_{i} x_{i} * x_{j} in S(phi)"), euler::twist_relation_check(&p.spec, &ps, i, j)));
                }
            }
        }
        reps.push(rel);
    }
    Ok(TaskOutcome::from_reports("euler", reps, serde_json::Value::Null))
}

/// A bundled scenario.
pub struct Preset {
    pub name: &'static str,
    pub text: &'static str,
}

impl Preset {
    pub fn scenario(&self) -> Scenario {
        Scenario::parse(self.text).expect("bundled presets are valid")
    }

    pub fn description(&self) -> String {
        self.scenario().description
    }
}

pub const PRESETS: [Preset; 7] = [
    Preset { name: "generic-diag-t2", text: include_str!("../presets/generic-diag-t2.json") },
    Preset { name: "generic-diag-t3", text: include_str!("../presets/generic-diag-t3.json") },
    Preset { name: "block3", text: include_str!("../presets/block3.json") },
    Preset { name: "wierd-ex", text: include_str!("../presets/wierd-ex.json") },
    Preset { name: "euler-t2", text: include_str!("../presets/euler-t2.json") },
    Preset { name: "euler-D1", text: include_str!("../presets/euler-D1.json") },
    Preset { name: "explicit-B-witness", text: include_str!("../presets/explicit-B-witness.json") },
];

pub fn preset(name: &str) -> Result<&'static Preset, ScenarioError> {
    PRESETS.iter().find(|p| p.name == name).ok_or_else(|| ScenarioError::UnknownPreset(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_round_trip() {
        for p in &PRESETS {
            let s = p.scenario();
            assert_eq!(s.name, p.name);
            let again = Scenario::parse(&s.to_json()).unwrap();
            assert_eq!(s, again, "{}", p.name);
        }
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let mut v: serde_json::Value = serde_json::from_str(PRESETS[0].text).unwrap();
        v["tasks"][0]["bogus"] = serde_json::json!(1);
        assert!(Scenario::parse(&v.to_string()).is_err());
    }

    #[test]
    fn degree_beyond_window_is_rejected() {
        let s = PRESETS[0].scenario().with_overrides(Some(2), Some(2));
        assert!(matches!(s.prepare(), Err(ScenarioError::Invalid(_))));
    }

    #[test]
    fn euler_operators_parse() {
        let spec = FieldSpec::new(0, &["p"]).unwrap();
        assert!(matches!(parse_euler_op(&spec, "D(p)"), Ok(EulerOp::D(_))));
        assert!(matches!(parse_euler_op(&spec, "yinv"), Ok(EulerOp::YInv)));
        assert!(parse_euler_op(&spec, "D(0)").is_err());
        assert!(parse_euler_op(&spec, "Q(p)").is_err());
    }

    #[test]
    fn every_task_has_an_explanation() {
        for t in TASK_ORDER {
            assert!(explain(t).is_some(), "{t}");
        }
        assert!(explain("nothing").is_none());
    }
}
