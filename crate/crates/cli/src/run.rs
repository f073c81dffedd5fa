//! Scenario execution, output files and the run manifest.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use qdplasmon::dynamics::{
    detect_steady_state, propagate_lindblad, propagate_nonhermitian, DensityMatrix, SolverKind, Trajectory,
    WavePacket,
};
use qdplasmon::entanglement::concurrence_series;
use qdplasmon::manifold::{run_manifold_scenario, CouplingMode, ManifoldRun};
use qdplasmon::spectra::{run_spectrum_scenario, Spectrum};
use qdplasmon::units::CONSTANTS;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::{parse_config, set_numeric_path, sweep_label, ResolvedScenario, ScenarioConfig, ScenarioKind};
use crate::error::CliError;

pub const MANIFEST_NAME: &str = "manifest.json";
pub const SWEEP_MANIFEST_NAME: &str = "sweep.json";

#[derive(Clone, Debug, Serialize)]
pub struct FileRecord {
    pub name: String,
    pub bytes: usize,
    pub sha256: String,
}

/// One solver's share of a run.
#[derive(Clone, Debug)]
pub struct SolverLeg {
    pub solver: SolverKind,
    pub trajectory: Trajectory,
    pub spectrum: Option<Spectrum>,
    /// `(t, C)` for the dot pair.
    pub concurrence: Option<Vec<(f64, f64)>>,
    pub steady_state_fs: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct ManifoldLeg {
    pub mode: CouplingMode,
    pub run: ManifoldRun,
    pub wall_time_s: f64,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub resolved: ResolvedScenario,
    pub legs: Vec<SolverLeg>,
    pub manifold: Vec<ManifoldLeg>,
    pub files: Vec<FileRecord>,
    pub manifest_path: PathBuf,
    pub wall_time_s: f64,
}

impl RunOutcome {
    pub fn leg(&self, solver: SolverKind) -> Option<&SolverLeg> {
        self.legs.iter().find(|l| l.solver == solver)
    }

    pub fn manifold_leg(&self, mode: CouplingMode) -> Option<&ManifoldLeg> {
        self.manifold.iter().find(|l| l.mode == mode)
    }
}

struct OutputDir {
    dir: PathBuf,
    files: Vec<FileRecord>,
}

impl OutputDir {
    fn create(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        Ok(OutputDir { dir: dir.to_path_buf(), files: Vec::new() })
    }

    fn write(&mut self, name: &str, bytes: Vec<u8>) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, &bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        self.files.push(FileRecord { name: name.to_string(), bytes: bytes.len(), sha256: sha256_hex(&bytes) });
        Ok(())
    }

    fn write_with(&mut self, name: &str, f: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> Result<(), CliError> {
        let mut buf = Vec::new();
        f(&mut buf)?;
        self.write(name, buf)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Runs a config, or its sweep when the config carries one.
pub fn execute(config: &ScenarioConfig) -> Result<Execution, CliError> {
    if config.sweep.is_some() {
        Ok(Execution::Sweep(run_sweep(config)?))
    } else {
        Ok(Execution::Single(Box::new(run(config)?)))
    }
}

pub enum Execution {
    Single(Box<RunOutcome>),
    Sweep(SweepOutcome),
}

impl Execution {
    pub fn exit_code(&self) -> i32 {
        match self {
            Execution::Single(_) => 0,
            Execution::Sweep(s) => s.exit_code(),
        }
    }
}

pub fn run(config: &ScenarioConfig) -> Result<RunOutcome, CliError> {
    if config.sweep.is_some() {
        return Err(CliError::Config { path: "sweep".into(), message: "use the sweep runner for configs with a sweep".into() });
    }
    let start = Instant::now();
    let r = config.resolve()?;
    let mut out = OutputDir::create(&r.output_dir)?;

    let (legs, manifold) = match r.scenario {
        ScenarioKind::Manifold => (Vec::new(), run_manifold_legs(&r)?),
        _ => (run_solver_legs(&r)?, Vec::new()),
    };

    for leg in &legs {
        let name = leg.solver.name();
        if let Some(s) = &leg.spectrum {
            out.write_with(&format!("spectrum_{name}.csv"), |b| s.write_csv(b))?;
        }
        out.write_with(&format!("trajectory_{name}.csv"), |b| leg.trajectory.write_csv(b))?;
        if let Some(c) = &leg.concurrence {
            out.write(&format!("concurrence_{name}.csv"), concurrence_csv("C_pair", c.iter().copied()))?;
        }
    }
    for leg in &manifold {
        let mode = leg.mode.name();
        out.write_with(&format!("trajectory_manifold_{mode}.csv"), |b| leg.run.trajectory.write_csv(b))?;
        let series = leg.run.trajectory.times.iter().copied().zip(leg.run.average_concurrence.iter().copied());
        out.write(&format!("concurrence_manifold_{mode}.csv"), concurrence_csv("C_avg", series))?;
        let meta = json!({
            "mode": mode,
            "seed": r.seed,
            "n_dots": r.n_dots,
            "mean_eV": r.manifold.mean,
            "std_eV": r.manifold.std,
            "couplings_eV": leg.run.couplings,
            "negative_couplings": leg.run.negative_couplings,
            "condition_number": leg.run.condition_number,
            "eigen_propagated": leg.run.eigen_propagated,
        });
        out.write(&format!("manifold_{mode}.json"), pretty(&meta))?;
    }

    let wall_time_s = start.elapsed().as_secs_f64();
    let manifest = json!({
        "config": config,
        "resolved": r,
        "constants": CONSTANTS,
        "versions": {
            "qdplasmon": env!("CARGO_PKG_VERSION"),
            "qdplasmon-core": qdplasmon::VERSION,
        },
        "wall_time_s": wall_time_s,
        "files": out.files,
        "summary": summarize(&r, &legs, &manifold),
    });
    let manifest_path = out.dir.join(MANIFEST_NAME);
    fs::write(&manifest_path, pretty(&manifest)).map_err(|e| CliError::Io(format!("{}: {e}", manifest_path.display())))?;

    Ok(RunOutcome { resolved: r, legs, manifold, files: out.files, manifest_path, wall_time_s })
}

fn pretty(v: &Value) -> Vec<u8> {
    let mut s = serde_json::to_vec_pretty(v).expect("JSON values always serialize");
    s.push(b'\n');
    s
}

fn concurrence_csv(column: &str, series: impl Iterator<Item = (f64, f64)>) -> Vec<u8> {
    let mut s = format!("t_fs,{column}\n");
    for (t, c) in series {
        s.push_str(&qdplasmon::dynamics::fmt_sig(t));
        s.push(',');
        s.push_str(&qdplasmon::dynamics::fmt_sig(c));
        s.push('\n');
    }
    s.into_bytes()
}

fn run_solver_legs(r: &ResolvedScenario) -> Result<Vec<SolverLeg>, CliError> {
    r.solver.solvers().into_par_iter().map(|solver| run_leg(r, solver)).collect()
}

fn run_leg(r: &ResolvedScenario, solver: SolverKind) -> Result<SolverLeg, CliError> {
    let basis = r.basis()?;
    let drive = r.drive();
    if r.scenario == ScenarioKind::Spectrum {
        let run = run_spectrum_scenario(&r.params, &basis, solver, &drive, &r.spectrum_options())?;
        return Ok(SolverLeg {
            solver,
            trajectory: run.trajectory,
            spectrum: Some(run.spectrum),
            concurrence: None,
            steady_state_fs: None,
        });
    }

    let entangle = r.scenario == ScenarioKind::Entangle;
    let spec = r.propagation(entangle);
    let mut trajectory = if entangle {
        // Dot 1 excited, plasmon empty.
        let psi0 = WavePacket::basis_state(basis, 0, &[1, 0])?;
        match solver {
            SolverKind::Lindblad => propagate_lindblad(&DensityMatrix::from_pure(&psi0), &r.params, &drive, &spec)?,
            _ => propagate_nonhermitian(&psi0, &r.params, &drive, &spec)?,
        }
    } else {
        match solver {
            SolverKind::Lindblad => propagate_lindblad(&DensityMatrix::ground(basis), &r.params, &drive, &spec)?,
            _ => propagate_nonhermitian(&WavePacket::ground(basis), &r.params, &drive, &spec)?,
        }
    };
    let concurrence = if entangle { Some(concurrence_series(&trajectory, r.concurrence_padding)?) } else { None };
    trajectory.snapshots.clear();
    let steady_state_fs = (r.scenario == ScenarioKind::DynamicsCw)
        .then(|| detect_steady_state(&trajectory, r.steady_state.window_fs, r.steady_state.tol))
        .flatten();
    Ok(SolverLeg { solver, trajectory, spectrum: None, concurrence, steady_state_fs })
}

fn run_manifold_legs(r: &ResolvedScenario) -> Result<Vec<ManifoldLeg>, CliError> {
    r.manifold
        .mode
        .modes()
        .into_par_iter()
        .map(|mode| {
            let start = Instant::now();
            let run = run_manifold_scenario(&r.params, &r.manifold_scenario(mode))?;
            Ok(ManifoldLeg { mode, run, wall_time_s: start.elapsed().as_secs_f64() })
        })
        .collect()
}

fn health(traj: &Trajectory) -> Value {
    let max_abs = |v: &[f64], f: &dyn Fn(f64) -> f64| v.iter().map(|x| f(*x)).fold(0.0, f64::max);
    let mut h = json!({
        "max_trace_or_norm_deviation": max_abs(&traj.norm_or_trace, &|x| (x - 1.0).abs()),
        "final_norm_or_trace": traj.norm_or_trace.last(),
    });
    if traj.solver == SolverKind::Lindblad {
        h["max_hermiticity_deviation"] = json!(max_abs(&traj.hermiticity, &|x| x));
        h["min_eigenvalue"] = json!(traj.min_eigenvalue.iter().cloned().fold(f64::INFINITY, f64::min));
    }
    h
}

fn summarize(r: &ResolvedScenario, legs: &[SolverLeg], manifold: &[ManifoldLeg]) -> Value {
    let mut summary = serde_json::Map::new();
    for leg in legs {
        let traj = &leg.trajectory;
        let mut s = json!({ "health": health(traj) });
        if let Some(spec) = &leg.spectrum {
            let peak = spec.peak_height();
            let peak_omega = spec.omega.iter().zip(&spec.sigma).find(|(_, &v)| v == peak).map(|(&w, _)| w);
            s["peak_sigma_cm2"] = json!(peak);
            s["peak_omega_eV"] = json!(peak_omega);
            s["masked_points"] = json!(spec.masked_count());
            if let Some((w, v)) = spec.dip(r.params.omega0, 0.005) {
                s["dip_omega_eV"] = json!(w);
                s["dip_sigma_cm2"] = json!(v);
            }
            s["dip_depth_cm2"] = json!(spec.dip_depth(r.params.omega0, 0.005, 0.05));
        }
        if let Some(c) = &leg.concurrence {
            if let Some(&(t, v)) = c.iter().max_by(|a, b| a.1.total_cmp(&b.1)) {
                s["peak_concurrence"] = json!(v);
                s["peak_concurrence_t_fs"] = json!(t);
            }
        }
        if r.scenario == ScenarioKind::DynamicsCw {
            s["steady_state_fs"] = json!(leg.steady_state_fs);
            let last = traj.len() - 1;
            s["final_dot_populations"] = json!(traj.dot_populations.iter().map(|p| p[last]).collect::<Vec<_>>());
            s["final_plasmon_population"] = json!(traj.plasmon_population[last]);
        }
        summary.insert(leg.solver.name().to_string(), s);
    }
    for leg in manifold {
        summary.insert(
            format!("manifold_{}", leg.mode.name()),
            json!({
                "peak_average_concurrence": leg.run.peak_concurrence(),
                "condition_number": leg.run.condition_number,
                "eigen_propagated": leg.run.eigen_propagated,
                "negative_couplings": leg.run.negative_couplings,
                "wall_time_s": leg.wall_time_s,
                "final_norm": leg.run.trajectory.norm_or_trace.last(),
            }),
        );
    }
    Value::Object(summary)
}

#[derive(Debug)]
pub struct SweepEntry {
    pub value: f64,
    pub label: String,
    pub result: Result<RunOutcome, CliError>,
}

#[derive(Debug)]
pub struct SweepOutcome {
    pub axis: String,
    pub entries: Vec<SweepEntry>,
    pub manifest_path: PathBuf,
}

impl SweepOutcome {
    /// Exit code of the first failed value, 0 when all succeeded.
    pub fn exit_code(&self) -> i32 {
        self.entries.iter().find_map(|e| e.result.as_ref().err().map(CliError::exit_code)).unwrap_or(0)
    }

    pub fn outcome(&self, value: f64) -> Option<&RunOutcome> {
        self.entries.iter().find(|e| e.value == value).and_then(|e| e.result.as_ref().ok())
    }
}

/// One independent run per sweep value, each in its own subdirectory of the
/// config's output directory, executed concurrently.
pub fn run_sweep(config: &ScenarioConfig) -> Result<SweepOutcome, CliError> {
    let sweep = config
        .sweep
        .clone()
        .ok_or_else(|| CliError::Config { path: "sweep".into(), message: "missing".into() })?;
    if sweep.values.is_empty() {
        return Err(CliError::Config { path: "sweep.values".into(), message: "no values to sweep".into() });
    }
    let base_dir = config.output_dir.clone().unwrap_or_else(|| PathBuf::from("out"));
    let mut base = config.clone();
    base.sweep = None;
    let doc = serde_json::to_value(&base).expect("config serializes");

    // Build every per-value config first so that a bad axis is a config
    // error for the whole sweep rather than one per value.
    let mut configs = Vec::with_capacity(sweep.values.len());
    for &value in &sweep.values {
        let mut d = doc.clone();
        set_numeric_path(&mut d, &sweep.axis, value)?;
        let label = sweep_label(&sweep.axis, value);
        d["output_dir"] = json!(base_dir.join(&label));
        let c = parse_config(&d.to_string())
            .map_err(|e| CliError::Config { path: format!("sweep.axis ({})", sweep.axis), message: e.to_string() })?;
        configs.push((value, label, c));
    }
    fs::create_dir_all(&base_dir).map_err(|e| CliError::Io(format!("{}: {e}", base_dir.display())))?;

    let entries: Vec<SweepEntry> =
        configs.into_par_iter().map(|(value, label, c)| SweepEntry { value, label, result: run(&c) }).collect();

    let status: Vec<Value> = entries
        .iter()
        .map(|e| match &e.result {
            Ok(o) => json!({
                "value": e.value,
                "directory": e.label,
                "status": "ok",
                "manifest_sha256": fs::read(&o.manifest_path).ok().map(|b| sha256_hex(&b)),
            }),
            Err(err) => json!({
                "value": e.value,
                "directory": e.label,
                "status": "failed",
                "exit_code": err.exit_code(),
                "error": err.to_string(),
            }),
        })
        .collect();
    let manifest = json!({ "axis": sweep.axis, "config": config, "runs": status });
    let manifest_path = base_dir.join(SWEEP_MANIFEST_NAME);
    fs::write(&manifest_path, pretty(&manifest)).map_err(|e| CliError::Io(format!("{}: {e}", manifest_path.display())))?;
    Ok(SweepOutcome { axis: sweep.axis, entries, manifest_path })
}

