//! Scenario configs and artifact emission.
//!
//! A scenario runs one pipeline and writes
//! `<out>/<name>/{manifest.json, trajectory.jsonl, report.json, tables/*.csv}`.
//! Everything except the wall time in the manifest is a function of the
//! config alone.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::curve::{diagnostics_unchecked, ClosedSphereCurve, Polyline};
use crate::error::{Error, Result};
use crate::flow::{
    circle_oracle, evolve_arc, evolve_closed, straightening_experiment, FlowConfig, FlowTrajectory, LeafParams,
};
use crate::geom::{geodesic_distance, GreatCircle, SpherePoint};
use crate::graph::{crosscheck, evolve_graph, PeriodicGraph};
use crate::jordan::{
    construct_spacing, generate_curve, leafable_wiggle, multiplicity_at, multiplicity_sup, verify_spacing, CurveKind,
    Generated,
};
use crate::levelset::{sandwich_flow, sandwich_levels, AnnulusState};
use crate::verify::{run_suite, CheckRow, CHECK_NAMES};

/// A runnable experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    /// Root for artifacts; the CLI `--out` flag takes precedence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(flatten)]
    pub task: Task,
}

/// Per-kind parameters; the JSON discriminator is `kind`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Task {
    Simulate {
        curve: CurveKind,
        #[serde(default)]
        flow: FlowConfig,
    },
    Multiplicity {
        curve: CurveKind,
        r: f64,
        #[serde(default = "default_pole_samples")]
        pole_samples: usize,
        /// Extra poles to report individually.
        #[serde(default)]
        poles: Vec<[f64; 3]>,
    },
    Spacing {
        curve: CurveKind,
        theta: f64,
        #[serde(default = "default_x_samples")]
        x_samples: usize,
    },
    Straighten {
        params: LeafParams,
        t_end: f64,
        #[serde(default = "default_wiggle_nodes")]
        nodes: usize,
        #[serde(default)]
        flow: FlowConfig,
    },
    Levelset {
        input: LevelsetInput,
        t: f64,
        #[serde(default)]
        flow: FlowConfig,
    },
    GraphFlow {
        profile: GraphProfile,
        dt: f64,
        t_end: f64,
        #[serde(default)]
        crosscheck: bool,
    },
    Verify {
        /// Check names; `"all"` alone or as an entry selects every check.
        #[serde(deserialize_with = "one_or_many")]
        suite: Vec<String>,
    },
}

fn one_or_many<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Vec<String>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(String),
        Many(Vec<String>),
    }
    Ok(match OneOrMany::deserialize(d)? {
        OneOrMany::One(s) => vec![s],
        OneOrMany::Many(v) => v,
    })
}

fn default_pole_samples() -> usize {
    2000
}
fn default_x_samples() -> usize {
    4000
}
fn default_wiggle_nodes() -> usize {
    1024
}

/// Initial data for a level-set run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "from")]
pub enum LevelsetInput {
    /// Offsets `eps0 2^-n` of a generated curve.
    Curve { curve: CurveKind, eps0: f64, n_levels: usize },
    /// An annulus between two circles about `center`.
    Annulus {
        #[serde(default = "north")]
        center: [f64; 3],
        inner: f64,
        outer: f64,
        #[serde(default = "default_nodes")]
        nodes: usize,
    },
}

fn north() -> [f64; 3] {
    [0.0, 0.0, 1.0]
}
fn default_nodes() -> usize {
    256
}

/// `offset + sum a_k sin(k x + phase_k)` sampled at `n` points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphProfile {
    pub n: usize,
    #[serde(default)]
    pub offset: f64,
    /// `(k, amplitude, phase)` triples.
    #[serde(default)]
    pub modes: Vec<(u32, f64, f64)>,
}

impl GraphProfile {
    pub fn build(&self) -> Result<PeriodicGraph> {
        PeriodicGraph::from_fn(self.n, |x| {
            self.offset + self.modes.iter().map(|(k, a, p)| a * (*k as f64 * x + p).sin()).sum::<f64>()
        })
    }
}

/// Trajectory file format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    #[default]
    Jsonl,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "jsonl" => Ok(Format::Jsonl),
            other => Err(Error::ConfigInvalid(format!("format: expected csv or jsonl, got '{other}'"))),
        }
    }
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| Error::ConfigInvalid(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn kind_name(&self) -> &'static str {
        match self.task {
            Task::Simulate { .. } => "simulate",
            Task::Multiplicity { .. } => "multiplicity",
            Task::Spacing { .. } => "spacing",
            Task::Straighten { .. } => "straighten",
            Task::Levelset { .. } => "levelset",
            Task::GraphFlow { .. } => "graphflow",
            Task::Verify { .. } => "verify",
        }
    }

    /// Field-level checks that do not need any computation.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::ConfigInvalid(m));
        if self.name.is_empty() || self.name.contains(['/', '\\']) || self.name == "." || self.name == ".." {
            return bad(format!("name: '{}' is not a plain directory name", self.name));
        }
        let flow_ok = |f: &FlowConfig| f.validate().map_err(|e| Error::ConfigInvalid(format!("flow.{}", strip(e))));
        match &self.task {
            Task::Simulate { flow, .. } | Task::Straighten { flow, .. } => flow_ok(flow)?,
            Task::Levelset { flow, t, .. } => {
                flow_ok(flow)?;
                if !(*t > 0.0) {
                    return bad(format!("t: must be positive, got {t}"));
                }
            }
            Task::Multiplicity { r, pole_samples, .. } => {
                if !(*r > 0.0) {
                    return bad(format!("r: must be positive, got {r}"));
                }
                if *pole_samples < 100 {
                    return bad(format!("pole_samples: need at least 100, got {pole_samples}"));
                }
            }
            Task::Spacing { theta, .. } => {
                if !(*theta > 0.0 && *theta < std::f64::consts::FRAC_PI_4) {
                    return bad(format!("theta: must lie in (0, pi/4), got {theta}"));
                }
            }
            Task::GraphFlow { dt, t_end, .. } => {
                if !(*dt > 0.0) {
                    return bad(format!("dt: must be positive, got {dt}"));
                }
                if !(*t_end >= 0.0) {
                    return bad(format!("t_end: must be non-negative, got {t_end}"));
                }
            }
            Task::Verify { suite } => {
                if let Some(x) = suite.iter().find(|s| s.as_str() != "all" && !CHECK_NAMES.contains(&s.as_str())) {
                    return bad(format!("suite: unknown check '{x}'"));
                }
            }
        }
        if let Task::Straighten { t_end, .. } = &self.task {
            if !(*t_end > 0.0) {
                return bad(format!("t_end: must be positive, got {t_end}"));
            }
        }
        Ok(())
    }
}

fn strip(e: Error) -> String {
    match e {
        Error::ConfigInvalid(m) => m,
        other => other.to_string(),
    }
}

/// Result of [`run_scenario`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub dir: PathBuf,
    /// False when a verification suite had failing rows.
    pub ok: bool,
    pub report: Value,
    /// Rows of a verification run; empty for other kinds.
    pub checks: Vec<CheckRow>,
}

/// Artifacts gathered by a pipeline before they are written.
struct Artifacts {
    trajectory: Vec<Value>,
    report: Value,
    tables: Vec<(String, String)>,
    ok: bool,
    /// Oracle comparison echoed into the manifest.
    oracle: Option<Value>,
    checks: Vec<CheckRow>,
}

impl Artifacts {
    fn report(report: Value) -> Self {
        Artifacts { trajectory: Vec::new(), report, tables: Vec::new(), ok: true, oracle: None, checks: Vec::new() }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn closed_of(g: Generated) -> Result<ClosedSphereCurve> {
    match g {
        Generated::Closed(c) => Ok(c),
        Generated::Gamma(_) => Err(Error::ConfigInvalid("curve: this scenario needs a closed curve".into())),
    }
}

fn trajectory_rows<C: Polyline>(traj: &FlowTrajectory<C>, circle: Option<(SpherePoint, f64)>) -> Result<Vec<Value>> {
    traj.snapshots
        .iter()
        .map(|s| {
            let mut row = json!({
                "t": s.t,
                "nodes": s.curve.node_count(),
                "length": s.diagnostics.length,
                "total_curvature": s.diagnostics.total_curvature,
                "bending": s.diagnostics.bending,
                "enclosed_area": s.diagnostics.enclosed_area,
            });
            if let Some((center, r0)) = circle {
                let radius = s.curve.nodes().iter().map(|p| geodesic_distance(p, &center)).sum::<f64>()
                    / s.curve.node_count() as f64;
                row["radius"] = json!(radius);
                row["oracle_radius"] = json!(circle_oracle(r0, s.t)?);
            }
            Ok(row)
        })
        .collect()
}

fn simulate(curve: &CurveKind, flow: &FlowConfig, seed: u64) -> Result<Artifacts> {
    let circle = match curve {
        CurveKind::Circle { radius, center, .. } if *radius < std::f64::consts::FRAC_PI_2 => {
            Some((SpherePoint::new(center[0], center[1], center[2])?, *radius))
        }
        _ => None,
    };
    let (rows, status, steps, final_csv) = match generate_curve(curve, seed)? {
        Generated::Closed(c) => {
            let traj = evolve_closed(&c, flow)?;
            (trajectory_rows(&traj, circle)?, traj.status, traj.steps, crate::io::curve_to_csv(&traj.last().curve))
        }
        Generated::Gamma(g) => {
            let traj = evolve_arc(&g.arc, flow)?;
            (trajectory_rows(&traj, None)?, traj.status, traj.steps, crate::io::curve_to_csv(&traj.last().curve))
        }
    };
    let last = rows.last().cloned().unwrap_or(Value::Null);
    let oracle = circle.map(|_| {
        json!({
            "final_radius": last["radius"],
            "oracle_radius": last["oracle_radius"],
            "relative_error": ((last["radius"].as_f64().unwrap_or(f64::NAN) - last["oracle_radius"].as_f64().unwrap_or(f64::NAN))
                / last["oracle_radius"].as_f64().unwrap_or(f64::NAN)).abs(),
        })
    });
    Ok(Artifacts {
        report: json!({ "status": status, "steps": steps, "final": last }),
        trajectory: rows,
        tables: vec![("final_curve.csv".into(), final_csv)],
        ok: true,
        oracle,
        checks: Vec::new(),
    })
}

fn multiplicity(curve: &CurveKind, r: f64, pole_samples: usize, poles: &[[f64; 3]], seed: u64) -> Result<Artifacts> {
    let c = closed_of(generate_curve(curve, seed)?)?;
    let sup = multiplicity_sup(&c, r, pole_samples)?;
    let mut table = String::from("px,py,pz,count\n");
    let mut reports = Vec::new();
    for p in poles {
        let g = GreatCircle::new(SpherePoint::new(p[0], p[1], p[2])?);
        let rep = multiplicity_at(&c, &g, r);
        let q = g.pole().to_array();
        table.push_str(&format!("{:.16e},{:.16e},{:.16e},{}\n", q[0], q[1], q[2], rep.count));
        reports.push(to_value(&rep));
    }
    let mut a = Artifacts::report(json!({ "sup": sup, "circles": reports }));
    a.tables.push(("multiplicity.csv".into(), table));
    Ok(a)
}

fn spacing(curve: &CurveKind, theta: f64, x_samples: usize, seed: u64) -> Result<Artifacts> {
    let c = closed_of(generate_curve(curve, seed)?)?;
    let sp = construct_spacing(&c, theta)?;
    let verdict = verify_spacing(&c, &sp, x_samples);
    let mut table = String::from("x,y,z\n");
    for p in &sp.points {
        table.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", p.x(), p.y(), p.z()));
    }
    let mut a = Artifacts::report(json!({ "spacing": sp, "verification": verdict }));
    a.ok = verdict.ok;
    a.tables.push(("spacing_points.csv".into(), table));
    Ok(a)
}

fn straighten(params: &LeafParams, t_end: f64, nodes: usize, flow: &FlowConfig, seed: u64) -> Result<Artifacts> {
    let g = GreatCircle::equator();
    let (ell, x) = leafable_wiggle(&g, params, seed, nodes)?;
    let rep = straightening_experiment(&ell, &g, params, t_end, flow)?;
    let rows = rep.deviation.iter().map(|(t, d)| json!({ "t": t, "deviation": d })).collect();
    let mut table = String::from("t,deviation\n");
    for (t, d) in &rep.deviation {
        table.push_str(&format!("{t:.12e},{d:.12e}\n"));
    }
    Ok(Artifacts {
        trajectory: rows,
        report: json!({ "x": x, "report": rep }),
        tables: vec![("deviation.csv".into(), table), ("initial_curve.csv".into(), crate::io::curve_to_csv(&ell))],
        ok: true,
        oracle: None,
        checks: Vec::new(),
    })
}

fn levelset(input: &LevelsetInput, t: f64, flow: &FlowConfig, seed: u64) -> Result<Artifacts> {
    let res = match input {
        LevelsetInput::Curve { curve, eps0, n_levels } => {
            let c = closed_of(generate_curve(curve, seed)?)?;
            sandwich_flow(&c, *eps0, *n_levels, t, flow)
        }
        LevelsetInput::Annulus { center, inner, outer, nodes } => {
            let s = AnnulusState::between_circles(SpherePoint::new(center[0], center[1], center[2])?, *inner, *outer, *nodes);
            sandwich_levels(vec![(None, s)], t, flow)
        }
    };
    let rows = res.levels.iter().map(to_value).collect();
    Ok(Artifacts {
        trajectory: rows,
        tables: vec![("sandwich.csv".into(), res.to_csv())],
        report: to_value(&res),
        ok: true,
        oracle: None,
        checks: Vec::new(),
    })
}

fn graphflow(profile: &GraphProfile, dt: f64, t_end: f64, check: bool) -> Result<Artifacts> {
    let u0 = profile.build()?;
    let u = evolve_graph(&u0, dt, t_end)?;
    let gap = if check { Some(crosscheck(&u0, &GreatCircle::equator(), t_end)?) } else { None };
    let mut a = Artifacts::report(json!({ "t_end": t_end, "crosscheck_hausdorff": gap }));
    a.tables.push(("initial_profile.csv".into(), u0.to_csv()));
    a.tables.push(("final_profile.csv".into(), u.to_csv()));
    Ok(a)
}

fn verify(suite: &[String]) -> Result<Artifacts> {
    let names: Vec<String> = if suite.iter().any(|s| s == "all") {
        CHECK_NAMES.iter().map(|s| s.to_string()).collect()
    } else {
        suite.to_vec()
    };
    let rows = run_suite(&names)?;
    let mut a = Artifacts::report(json!({ "checks": rows }));
    a.ok = rows.iter().all(|r| r.passed);
    a.trajectory = rows.iter().map(to_value).collect();
    a.tables.push(("checks.csv".into(), checks_csv(&rows)));
    a.checks = rows;
    Ok(a)
}

/// `name,passed,measured,tolerance` rows.
pub fn checks_csv(rows: &[CheckRow]) -> String {
    let mut out = String::from("name,passed,measured,tolerance\n");
    for r in rows {
        out.push_str(&format!("{},{},{:.6e},{:.6e}\n", r.name, r.passed, r.measured, r.tolerance));
    }
    out
}

/// One human-readable line per check.
pub fn checks_table(rows: &[CheckRow]) -> String {
    rows.iter()
        .map(|r| {
            format!(
                "{:<22} {}  measured {:<12.4e} tol {:<10.2e} {}\n",
                r.name,
                if r.passed { "PASS" } else { "FAIL" },
                r.measured,
                r.tolerance,
                r.detail
            )
        })
        .collect()
}

fn jsonl(rows: &[Value]) -> String {
    rows.iter().map(|r| format!("{}\n", serde_json::to_string(r).expect("json"))).collect()
}

/// Flattens scalar fields of the rows into CSV, columns from the first row.
fn rows_csv(rows: &[Value]) -> String {
    let Some(Value::Object(first)) = rows.first() else {
        return String::new();
    };
    let cols: Vec<&String> = first.iter().filter(|(_, v)| !v.is_object() && !v.is_array()).map(|(k, _)| k).collect();
    let mut out = cols.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(",");
    out.push('\n');
    for r in rows {
        let line: Vec<String> = cols
            .iter()
            .map(|c| match &r[c.as_str()] {
                Value::Null => String::new(),
                Value::String(s) => s.clone(),
                v => v.to_string(),
            })
            .collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Executes the scenario and writes its artifacts under `out_root`.
pub fn run_scenario(scenario: &Scenario, out_root: &Path, format: Format) -> Result<RunOutcome> {
    scenario.validate()?;
    let start = Instant::now();
    let seed = scenario.seed;
    let art = match &scenario.task {
        Task::Simulate { curve, flow } => simulate(curve, flow, seed)?,
        Task::Multiplicity { curve, r, pole_samples, poles } => multiplicity(curve, *r, *pole_samples, poles, seed)?,
        Task::Spacing { curve, theta, x_samples } => spacing(curve, *theta, *x_samples, seed)?,
        Task::Straighten { params, t_end, nodes, flow } => straighten(params, *t_end, *nodes, flow, seed)?,
        Task::Levelset { input, t, flow } => levelset(input, *t, flow, seed)?,
        Task::GraphFlow { profile, dt, t_end, crosscheck } => graphflow(profile, *dt, *t_end, *crosscheck)?,
        Task::Verify { suite } => verify(suite)?,
    };
    let dir = out_root.join(&scenario.name);
    let tables = dir.join("tables");
    fs::create_dir_all(&tables)?;
    match format {
        Format::Jsonl => fs::write(dir.join("trajectory.jsonl"), jsonl(&art.trajectory))?,
        Format::Csv => fs::write(tables.join("trajectory.csv"), rows_csv(&art.trajectory))?,
    }
    for (name, body) in &art.tables {
        fs::write(tables.join(name), body)?;
    }
    let pretty = |v: &Value| serde_json::to_string_pretty(v).expect("json") + "\n";
    fs::write(dir.join("report.json"), pretty(&art.report))?;
    let manifest = json!({
        "config": scenario,
        "kind": scenario.kind_name(),
        "package": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "format": format,
        "ok": art.ok,
        "oracle": art.oracle,
        "wall_time_s": start.elapsed().as_secs_f64(),
    });
    fs::write(dir.join("manifest.json"), pretty(&manifest))?;
    Ok(RunOutcome { dir, ok: art.ok, report: art.report, checks: art.checks })
}

/// Process exit code for an error: 2 for configuration problems, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ConfigInvalid(_) | Error::Parse(_) => 2,
        _ => 1,
    }
}

/// `{"error": variant, "message": text}` for reporting a failed run.
pub fn error_json(e: &Error) -> Value {
    let debug = format!("{e:?}");
    let variant = debug.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error");
    json!({ "error": variant, "message": e.to_string() })
}

/// Diagnostics of a closed curve for quick inspection.
pub fn describe(c: &ClosedSphereCurve) -> Value {
    to_value(&diagnostics_unchecked(c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle_config() -> String {
        r#"{"name":"circle","kind":"Simulate","seed":1,
            "curve":{"kind":"Circle","radius":1.0471975511965976,"nodes":256},
            "flow":{"dt":1e-4,"max_time":0.5,"snapshot_interval":0.1,"target_nodes":256}}"#
            .to_string()
    }

    #[test]
    fn simulate_circle_matches_oracle() {
        let s = Scenario::from_json(&circle_config()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let out = run_scenario(&s, dir.path(), Format::Jsonl).unwrap();
        let text = fs::read_to_string(out.dir.join("trajectory.jsonl")).unwrap();
        let last: Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
        let (r, o) = (last["radius"].as_f64().unwrap(), last["oracle_radius"].as_f64().unwrap());
        assert!((r - o).abs() / o < 5e-3);
        assert_eq!(o, circle_oracle(std::f64::consts::PI / 3.0, 0.5).unwrap());
        for f in ["manifest.json", "report.json", "tables/final_curve.csv"] {
            assert!(out.dir.join(f).exists(), "{f}");
        }
    }

    #[test]
    fn outputs_are_deterministic() {
        let s = Scenario::from_json(&circle_config()).unwrap();
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        for fmt in [Format::Jsonl, Format::Csv] {
            let x = run_scenario(&s, a.path(), fmt).unwrap();
            let y = run_scenario(&s, b.path(), fmt).unwrap();
            for f in ["trajectory.jsonl", "report.json", "tables/final_curve.csv"] {
                if x.dir.join(f).exists() {
                    assert_eq!(fs::read(x.dir.join(f)).unwrap(), fs::read(y.dir.join(f)).unwrap(), "{f}");
                }
            }
        }
        assert!(a.path().join("circle/tables/trajectory.csv").exists());
    }

    #[test]
    fn negative_dt_is_a_config_error() {
        let text = circle_config().replace("\"dt\":1e-4", "\"dt\":-1e-4");
        let err = Scenario::from_json(&text).unwrap_err();
        assert_eq!(exit_code(&err), 2);
        assert!(err.to_string().contains("dt"), "{err}");
        assert_eq!(exit_code(&Scenario::from_json("{").unwrap_err()), 2);
    }

    #[test]
    fn empty_and_unknown_suites() {
        let s = Scenario::from_json(r#"{"name":"v","kind":"Verify","suite":[]}"#).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let out = run_scenario(&s, dir.path(), Format::Jsonl).unwrap();
        assert!(out.ok);
        assert_eq!(out.report["checks"].as_array().unwrap().len(), 0);
        assert!(Scenario::from_json(r#"{"name":"v","kind":"Verify","suite":["nope"]}"#).is_err());
        let all = Scenario::from_json(r#"{"name":"v","kind":"Verify","suite":"all"}"#).unwrap();
        assert_eq!(all.task, Task::Verify { suite: vec!["all".into()] });
    }

    #[test]
    fn other_kinds_run() {
        let dir = tempfile::tempdir().unwrap();
        let configs = [
            r#"{"name":"m","kind":"Multiplicity","r":0.1,"pole_samples":200,"poles":[[0,0,1]],
                "curve":{"kind":"PerturbedLatitude","radius":1.5,"amplitude":0.05,"mode":3,"nodes":128}}"#,
            r#"{"name":"g","kind":"GraphFlow","dt":1e-4,"t_end":0.05,"profile":{"n":64,"modes":[[2,0.05,0.0]]}}"#,
            r#"{"name":"l","kind":"Levelset","t":0.05,"flow":{"target_nodes":128},
                "input":{"from":"Annulus","inner":0.6,"outer":1.0,"nodes":128}}"#,
        ];
        for c in configs {
            let s = Scenario::from_json(c).unwrap();
            let out = run_scenario(&s, dir.path(), Format::Csv).unwrap();
            assert!(out.ok, "{}", s.name);
        }
        let m: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("m/report.json")).unwrap()).unwrap();
        assert!(m["sup"]["value"].as_u64().unwrap() >= 2, "{}", m["sup"]);
    }
}
