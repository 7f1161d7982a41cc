//! JSON batch front end: problem ingestion, dispatch and reports.
//!
//! Matrices are arrays of rows. Real entries are numbers; complex entries are
//! `[re, im]` pairs and are only accepted when `field` is `"complex"`.

use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::ball::{self, BallPoint};
use crate::error::{Error, Result};
use crate::field::{Field, FieldTag};
use crate::fixtures::{self, BaseGroup, Seed};
use crate::indefinite::{JUnitary, Signature};
use crate::solver::{
    self, GroupSpec, SolveReport, UnitarizationCheck, UnitarizationResult, DEFAULT_CLOSURE_CAP, DEFAULT_MAX_ITER,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Metric,
    FixedPoint,
    Unitarize,
    Verify,
    Fixture,
}

impl Mode {
    pub fn parse(s: &str) -> Option<Mode> {
        Some(match s {
            "metric" => Mode::Metric,
            "fixed-point" => Mode::FixedPoint,
            "unitarize" => Mode::Unitarize,
            "verify" => Mode::Verify,
            "fixture" => Mode::Fixture,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Metric => "metric",
            Mode::FixedPoint => "fixed-point",
            Mode::Unitarize => "unitarize",
            Mode::Verify => "verify",
            Mode::Fixture => "fixture",
        }
    }
}

/// Fixture families the `fixture` mode can emit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FixtureKind {
    /// A base group conjugated by the Möbius operator of a seeded point.
    Planted { group: BaseGroup, max_norm: f64 },
    /// The order-2 group `{I, diag(1, -1)}` on signature (1, 1), conjugated to fix `a`.
    Reflection { a: f64 },
    /// The unbounded group generated by a hyperbolic rotation on signature (1, 1).
    Hyperbolic { t: f64 },
}

/// Mode-specific inputs; matrices are stored over the complex field and
/// narrowed to the requested field at dispatch.
#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Metric {
        a: DMatrix<Complex64>,
        b: DMatrix<Complex64>,
    },
    FixedPoint {
        generators: Vec<DMatrix<Complex64>>,
        iterative: bool,
        init: Option<DMatrix<Complex64>>,
    },
    Unitarize {
        generators: Vec<DMatrix<Complex64>>,
    },
    Verify {
        generators: Vec<DMatrix<Complex64>>,
        similarity: DMatrix<Complex64>,
        transformed: Vec<DMatrix<Complex64>>,
    },
    Fixture {
        kind: FixtureKind,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInput {
    pub field: FieldTag,
    pub n: usize,
    pub k: usize,
    pub mode: Mode,
    pub payload: Payload,
    pub tol: f64,
    pub max_iter: usize,
    pub closure_cap: usize,
    pub seed: Option<u64>,
}

/// Command-line overrides applied before validation.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub mode: Option<String>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub closure_cap: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    ValidationError,
    NotFinite,
    NonConvergence,
    Inconsistency,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::ValidationError => "validation-error",
            Status::NotFinite => "not-finite",
            Status::NonConvergence => "non-convergence",
            Status::Inconsistency => "inconsistency",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::ValidationError => 2,
            _ => 3,
        }
    }

    pub fn of_error(e: &Error) -> Status {
        match e {
            Error::Validation { .. } | Error::NotAGraph { .. } | Error::NotNegative { .. } => Status::ValidationError,
            Error::NotFinite { .. } => Status::NotFinite,
            _ => Status::Inconsistency,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub status: Status,
    pub mode: Option<Mode>,
    pub field: Option<FieldTag>,
    pub result: Value,
    pub checks: Vec<(String, f64)>,
    pub error: Option<String>,
    pub timing_ms: f64,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub fn failure(e: &Error) -> Report {
        Report {
            status: Status::of_error(e),
            mode: None,
            field: None,
            result: Value::Null,
            checks: Vec::new(),
            error: Some(e.to_string()),
            timing_ms: 0.0,
        }
    }

    pub fn check(&self, name: &str) -> Option<f64> {
        self.checks.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("status".into(), json!(self.status.as_str()));
        if let Some(m) = self.mode {
            obj.insert("mode".into(), json!(m.as_str()));
        }
        if let Some(f) = self.field {
            obj.insert("field".into(), json!(f.as_str()));
        }
        obj.insert("result".into(), self.result.clone());
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|(n, v)| json!({"name": n, "value": v}))
            .collect();
        obj.insert("checks".into(), Value::Array(checks));
        if let Some(e) = &self.error {
            obj.insert("error".into(), json!(e));
        }
        obj.insert("timing_ms".into(), json!(self.timing_ms));
        Value::Object(obj)
    }
}

// ---------------------------------------------------------------------------
// parsing

fn at(path: impl Into<String>, msg: impl Into<String>) -> Error {
    Error::validation_at(path, msg)
}

fn get<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| at(format!("{path}/{key}"), "missing field"))
}

fn as_usize(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .filter(|&x| x > 0)
        .map(|x| x as usize)
        .ok_or_else(|| at(path, "expected a positive integer"))
}

fn as_f64(v: &Value, path: &str) -> Result<f64> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| at(path, "expected a finite number"))
}

fn parse_entry(v: &Value, field: FieldTag, path: &str) -> Result<Complex64> {
    match v {
        Value::Number(_) => Ok(Complex64::new(as_f64(v, path)?, 0.0)),
        Value::Array(parts) if parts.len() == 2 => {
            if field == FieldTag::Real {
                return Err(at(path, "complex entry under field \"real\""));
            }
            Ok(Complex64::new(
                as_f64(&parts[0], &format!("{path}/0"))?,
                as_f64(&parts[1], &format!("{path}/1"))?,
            ))
        }
        _ => Err(at(path, "expected a number or a [re, im] pair")),
    }
}

/// Parse a row-major matrix and check its shape.
pub fn parse_matrix(v: &Value, field: FieldTag, shape: (usize, usize), path: &str) -> Result<DMatrix<Complex64>> {
    let rows = v.as_array().ok_or_else(|| at(path, "expected an array of rows"))?;
    if rows.len() != shape.0 {
        return Err(at(path, format!("expected {} rows, got {}", shape.0, rows.len())));
    }
    let mut m = DMatrix::zeros(shape.0, shape.1);
    for (i, row) in rows.iter().enumerate() {
        let row_path = format!("{path}/{i}");
        let row = row.as_array().ok_or_else(|| at(&row_path, "expected an array"))?;
        if row.len() != shape.1 {
            return Err(at(
                &row_path,
                format!("expected {} entries, got {}", shape.1, row.len()),
            ));
        }
        for (j, e) in row.iter().enumerate() {
            m[(i, j)] = parse_entry(e, field, &format!("{row_path}/{j}"))?;
        }
    }
    Ok(m)
}

fn narrow<T: Field>(m: &DMatrix<Complex64>) -> DMatrix<T> {
    m.map(|z| T::from_parts(z.re, z.im))
}

fn check_ball_point(m: &DMatrix<Complex64>, path: &str) -> Result<()> {
    BallPoint::new(m.clone()).map(|_| ()).map_err(|e| e.under(path))
}

fn parse_generators(v: &Value, field: FieldTag, sig: Signature, path: &str) -> Result<Vec<DMatrix<Complex64>>> {
    let list = v.as_array().ok_or_else(|| at(path, "expected an array of matrices"))?;
    if list.is_empty() {
        return Err(at(path, "at least one generator is required"));
    }
    list.iter()
        .enumerate()
        .map(|(i, g)| {
            let p = format!("{path}/{i}");
            let m = parse_matrix(g, field, (sig.dim(), sig.dim()), &p)?;
            JUnitary::from_matrix(&m, sig).map_err(|e| e.under(&p))?;
            Ok(m)
        })
        .collect()
}

fn parse_fixture_kind(obj: &Map<String, Value>, sig: Signature) -> Result<FixtureKind> {
    let kind = get(obj, "kind", "/payload")?
        .as_str()
        .ok_or_else(|| at("/payload/kind", "expected a string"))?;
    let order =
        |default: usize| -> Result<usize> { obj.get("order").map_or(Ok(default), |v| as_usize(v, "/payload/order")) };
    let max_norm = obj
        .get("max_norm")
        .map_or(Ok(0.6), |v| as_f64(v, "/payload/max_norm"))?;
    if !(max_norm > 0.0 && max_norm < 1.0) {
        return Err(at("/payload/max_norm", "must lie in (0, 1)"));
    }
    let planted = |group| Ok(FixtureKind::Planted { group, max_norm });
    match kind {
        "cyclic" => planted(BaseGroup::Cyclic(order(4)?)),
        "dihedral" => planted(BaseGroup::Dihedral(order(8)?)),
        "symmetric4" => planted(BaseGroup::Symmetric4),
        "reflection" | "hyperbolic" => {
            if (sig.n, sig.k) != (1, 1) {
                return Err(at("/n", format!("fixture kind {kind} needs n = k = 1")));
            }
            if kind == "reflection" {
                let a = obj.get("a").map_or(Ok(0.4), |v| as_f64(v, "/payload/a"))?;
                if !(a.abs() < 1.0) {
                    return Err(at("/payload/a", "must lie in (-1, 1)"));
                }
                Ok(FixtureKind::Reflection { a })
            } else {
                let t = obj.get("t").map_or(Ok(0.1), |v| as_f64(v, "/payload/t"))?;
                Ok(FixtureKind::Hyperbolic { t })
            }
        }
        other => Err(at("/payload/kind", format!("unknown fixture kind {other:?}"))),
    }
}

/// Parse and fully validate a problem document.
pub fn parse_input(text: &[u8], overrides: &Overrides) -> Result<ProblemInput> {
    let doc: Value = serde_json::from_slice(text).map_err(|e| at("", format!("malformed JSON: {e}")))?;
    let obj = doc.as_object().ok_or_else(|| at("", "expected a JSON object"))?;

    let field = match get(obj, "field", "")?.as_str() {
        Some("real") => FieldTag::Real,
        Some("complex") => FieldTag::Complex,
        _ => return Err(at("/field", "expected \"real\" or \"complex\"")),
    };
    let n = as_usize(get(obj, "n", "")?, "/n")?;
    let k = as_usize(get(obj, "k", "")?, "/k")?;
    let sig = Signature::new(n, k)?;
    let mode_str = match &overrides.mode {
        Some(m) => m.clone(),
        None => get(obj, "mode", "")?
            .as_str()
            .ok_or_else(|| at("/mode", "expected a string"))?
            .to_owned(),
    };
    let mode = Mode::parse(&mode_str).ok_or_else(|| at("/mode", format!("unknown mode {mode_str:?}")))?;

    let tol = match overrides.tol {
        Some(t) => t,
        None => obj.get("tol").map_or(Ok(1e-8), |v| as_f64(v, "/tol"))?,
    };
    if !(tol > 0.0) {
        return Err(at("/tol", "must be positive"));
    }
    let max_iter = match overrides.max_iter {
        Some(m) => m,
        None => obj
            .get("max_iter")
            .map_or(Ok(DEFAULT_MAX_ITER), |v| as_usize(v, "/max_iter"))?,
    };
    let closure_cap = match overrides.closure_cap {
        Some(c) => c,
        None => obj
            .get("closure_cap")
            .map_or(Ok(DEFAULT_CLOSURE_CAP), |v| as_usize(v, "/closure_cap"))?,
    };
    let seed = match overrides.seed {
        Some(s) => Some(s),
        None => match obj.get("seed") {
            None | Some(Value::Null) => None,
            Some(v) => Some(v.as_u64().ok_or_else(|| at("/seed", "expected an unsigned integer"))?),
        },
    };

    let empty = Map::new();
    let payload_obj = match obj.get("payload") {
        Some(Value::Object(p)) => p,
        Some(_) => return Err(at("/payload", "expected an object")),
        None if mode == Mode::Fixture => &empty,
        None => return Err(at("/payload", "missing field")),
    };
    let point = |key: &str| -> Result<DMatrix<Complex64>> {
        let path = format!("/payload/{key}");
        let m = parse_matrix(get(payload_obj, key, "/payload")?, field, (n, k), &path)?;
        check_ball_point(&m, &path)?;
        Ok(m)
    };
    let generators = || {
        parse_generators(
            get(payload_obj, "generators", "/payload")?,
            field,
            sig,
            "/payload/generators",
        )
    };

    let payload = match mode {
        Mode::Metric => Payload::Metric {
            a: point("A")?,
            b: point("B")?,
        },
        Mode::FixedPoint => {
            let iterative = match payload_obj.get("method").map(|v| v.as_str()) {
                None | Some(Some("averaging")) => false,
                Some(Some("iterative")) => true,
                _ => return Err(at("/payload/method", "expected \"averaging\" or \"iterative\"")),
            };
            let init = if payload_obj.contains_key("init") {
                Some(point("init")?)
            } else {
                None
            };
            Payload::FixedPoint {
                generators: generators()?,
                iterative,
                init,
            }
        }
        Mode::Unitarize => Payload::Unitarize {
            generators: generators()?,
        },
        Mode::Verify => {
            let d = sig.dim();
            let similarity = parse_matrix(
                get(payload_obj, "similarity", "/payload")?,
                field,
                (d, d),
                "/payload/similarity",
            )?;
            let list = get(payload_obj, "transformed", "/payload")?
                .as_array()
                .ok_or_else(|| at("/payload/transformed", "expected an array of matrices"))?;
            let transformed = list
                .iter()
                .enumerate()
                .map(|(i, m)| parse_matrix(m, field, (d, d), &format!("/payload/transformed/{i}")))
                .collect::<Result<_>>()?;
            Payload::Verify {
                generators: generators()?,
                similarity,
                transformed,
            }
        }
        Mode::Fixture => Payload::Fixture {
            kind: parse_fixture_kind(payload_obj, sig)?,
        },
    };

    Ok(ProblemInput {
        field,
        n,
        k,
        mode,
        payload,
        tol,
        max_iter,
        closure_cap,
        seed,
    })
}

// ---------------------------------------------------------------------------
// serialization

/// Encode a matrix as rows of numbers (real) or `[re, im]` pairs (complex).
pub fn matrix_to_json<T: Field>(m: &DMatrix<T>) -> Value {
    let rows: Vec<Value> = (0..m.nrows())
        .map(|i| {
            let row: Vec<Value> = (0..m.ncols())
                .map(|j| {
                    let v = m[(i, j)];
                    match T::TAG {
                        FieldTag::Real => json!(v.re_part()),
                        FieldTag::Complex => json!([v.re_part(), v.im_part()]),
                    }
                })
                .collect();
            Value::Array(row)
        })
        .collect();
    Value::Array(rows)
}

fn solve_report_json<T: Field>(r: &SolveReport<T>) -> Value {
    json!({
        "fixed_point": matrix_to_json(r.fixed_point.matrix()),
        "method": r.method.as_str(),
        "residual": r.residual,
        "iterations": r.iterations,
        "group_size": r.group_size,
        "converged": r.converged,
        "orbit_bound_check": r.orbit_bound_check.map(|c| json!({
            "c": c.c, "r": c.r, "max_orbit_norm": c.max_orbit_norm,
        })),
    })
}

fn unitarization_json<T: Field>(r: &UnitarizationResult<T>) -> Value {
    json!({
        "similarity": matrix_to_json(&r.similarity),
        "transformed": r.transformed.iter().map(matrix_to_json).collect::<Vec<_>>(),
        "unitarity_defect": r.unitarity_defect,
        "fixed_point": matrix_to_json(r.solve.fixed_point.matrix()),
        "fixed_point_residual": r.solve.residual,
        "group_size": r.elements.len(),
    })
}

fn check_list(c: &UnitarizationCheck) -> Vec<(String, f64)> {
    c.named().iter().map(|(n, v)| (n.to_string(), *v)).collect()
}

// ---------------------------------------------------------------------------
// dispatch

struct Outcome {
    status: Status,
    result: Value,
    checks: Vec<(String, f64)>,
}

fn group_spec<T: Field>(input: &ProblemInput, generators: &[DMatrix<Complex64>]) -> Result<GroupSpec<T>> {
    let sig = Signature::new(input.n, input.k)?;
    let gens = generators
        .iter()
        .map(|m| JUnitary::from_matrix(&narrow::<T>(m), sig))
        .collect::<Result<Vec<_>>>()?;
    Ok(GroupSpec::new(sig, gens)?.with_cap(input.closure_cap))
}

fn run_typed<T: Field>(input: &ProblemInput) -> Result<Outcome> {
    match &input.payload {
        Payload::Metric { a, b } => {
            let a = BallPoint::new(narrow::<T>(a))?;
            let b = BallPoint::new(narrow::<T>(b))?;
            let d = ball::rho(&a, &b)?;
            let mid = ball::midpoint(&a, &b)?;
            let checks = vec![
                ("rho_symmetry_defect".to_string(), (d - ball::rho(&b, &a)?).abs()),
                (
                    "midpoint_equidistance_defect".to_string(),
                    (ball::rho(&a, &mid)? - 0.5 * d).abs(),
                ),
            ];
            Ok(Outcome {
                status: Status::Ok,
                result: json!({
                    "rho": d,
                    "midpoint": matrix_to_json(mid.matrix()),
                    "boundary_margins": {
                        "A": ball::boundary_margin(&a).value(),
                        "B": ball::boundary_margin(&b).value(),
                    },
                }),
                checks,
            })
        }
        Payload::FixedPoint {
            generators,
            iterative,
            init,
        } => {
            let spec = group_spec::<T>(input, generators)?;
            let report = if *iterative {
                let x0 = match init {
                    Some(m) => BallPoint::new(narrow::<T>(m))?,
                    None => BallPoint::zero(input.n, input.k),
                };
                solver::fixed_point_iterative(spec.generators(), &x0, input.tol, input.max_iter)?
            } else {
                let closure = solver::group_closure(&spec)?;
                solver::fixed_point_averaging(&closure)?
            };
            let status = if report.converged {
                Status::Ok
            } else {
                Status::NonConvergence
            };
            let mut checks = vec![("residual".to_string(), report.residual)];
            if let Some(c) = report.orbit_bound_check {
                checks.push(("orbit_bound_slack".to_string(), c.r - c.max_orbit_norm));
            }
            Ok(Outcome {
                status,
                result: solve_report_json(&report),
                checks,
            })
        }
        Payload::Unitarize { generators } => {
            let spec = group_spec::<T>(input, generators)?;
            let result = solver::unitarize(&spec)?;
            let check = solver::verify_unitarized(&result, &spec)?;
            Ok(Outcome {
                status: Status::Ok,
                result: unitarization_json(&result),
                checks: check_list(&check),
            })
        }
        Payload::Verify {
            generators,
            similarity,
            transformed,
        } => {
            let spec = group_spec::<T>(input, generators)?;
            let closure = solver::group_closure(&spec)?;
            let elements: Vec<DMatrix<T>> = closure.iter().map(JUnitary::to_matrix).collect();
            let transformed: Vec<DMatrix<T>> = transformed.iter().map(narrow::<T>).collect();
            let n = input.n;
            let k = input.k;
            let sim = narrow::<T>(similarity);
            let top = sim.view((0, n), (n, k)).into_owned();
            let bottom = sim.view((n, n), (k, k)).into_owned();
            let x = BallPoint::new(crate::matfun::right_divide(&top, &bottom)?)?;
            let residual = solver::displacement(&x, &closure)?;
            let result = UnitarizationResult {
                similarity: sim,
                elements,
                transformed,
                unitarity_defect: f64::NAN,
                solve: SolveReport {
                    fixed_point: x,
                    method: solver::SolveMethod::Averaging,
                    residual,
                    iterations: 0,
                    group_size: closure.len(),
                    converged: true,
                    orbit_bound_check: None,
                    trace: Vec::new(),
                },
            };
            let check = solver::verify_unitarized(&result, &spec)?;
            Ok(Outcome {
                status: Status::Ok,
                result: json!({"passes": check.passes()}),
                checks: check_list(&check),
            })
        }
        Payload::Fixture { kind } => fixture_outcome::<T>(input, *kind),
    }
}

fn fixture_outcome<T: Field>(input: &ProblemInput, kind: FixtureKind) -> Result<Outcome> {
    let sig = Signature::new(input.n, input.k)?;
    let seed = Seed(input.seed.unwrap_or(0));
    let to_t = |m: &DMatrix<f64>| m.map(|x| T::from_real(x));
    let problem = |mode: &str, generators: Vec<Value>| {
        json!({
            "field": T::TAG.as_str(),
            "n": input.n,
            "k": input.k,
            "mode": mode,
            "payload": {"generators": generators},
            "tol": input.tol,
            "max_iter": input.max_iter,
            "closure_cap": input.closure_cap,
            "seed": input.seed,
        })
    };
    let planted_json = |pg: fixtures::PlantedGroup<f64>, name: String, unique: bool| {
        let generators = pg
            .spec
            .generators()
            .iter()
            .map(|g| matrix_to_json(&to_t(&g.to_matrix())))
            .collect();
        json!({
            "group": name,
            "problem": problem("unitarize", generators),
            "planted_point": matrix_to_json(&to_t(pg.planted_point.matrix())),
            "planted_similarity": matrix_to_json(&to_t(&pg.planted_similarity)),
            "unique_fixed_point": unique,
        })
    };
    let result = match kind {
        FixtureKind::Planted { group, max_norm } => {
            let base = group.elements(sig)?;
            let unique = fixtures::fixed_space_dim(&base)? == 0;
            let a = fixtures::random_ball_point::<f64>(input.n, input.k, max_norm, seed);
            let pg = fixtures::conjugated_orthogonal_group(&base, &a)?;
            planted_json(pg, group.name(), unique)
        }
        FixtureKind::Reflection { a } => {
            let r = JUnitary::block_diagonal(DMatrix::from_element(1, 1, 1.0), DMatrix::from_element(1, 1, -1.0))?;
            let base = [JUnitary::identity(sig), r];
            let pg = fixtures::conjugated_orthogonal_group(&base, &BallPoint::scalar(a)?)?;
            planted_json(pg, "reflection".into(), true)
        }
        FixtureKind::Hyperbolic { t } => {
            let g = fixtures::hyperbolic_generator(t);
            json!({
                "group": "hyperbolic",
                "problem": problem("fixed-point", vec![matrix_to_json(&to_t(&g.to_matrix()))]),
            })
        }
    };
    Ok(Outcome {
        status: Status::Ok,
        result,
        checks: Vec::new(),
    })
}

/// Execute a validated problem. Errors become a status; this never panics on
/// validated input.
pub fn run(input: &ProblemInput) -> Report {
    let start = Instant::now();
    let outcome = match input.field {
        FieldTag::Real => run_typed::<f64>(input),
        FieldTag::Complex => run_typed::<Complex64>(input),
    };
    let timing_ms = start.elapsed().as_secs_f64() * 1e3;
    match outcome {
        Ok(o) => Report {
            status: o.status,
            mode: Some(input.mode),
            field: Some(input.field),
            result: o.result,
            checks: o.checks,
            error: None,
            timing_ms,
        },
        Err(e) => Report {
            mode: Some(input.mode),
            field: Some(input.field),
            timing_ms,
            ..Report::failure(&e)
        },
    }
}

/// Parse then run; parse failures yield a validation-error report.
pub fn process(text: &[u8], overrides: &Overrides) -> Report {
    match parse_input(text, overrides) {
        Ok(input) => run(&input),
        Err(e) => Report::failure(&e),
    }
}
