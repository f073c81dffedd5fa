//! Scenario configuration: JSON document, defaults and validation.
//!
//! Precedence, highest first: command-line flags, values in the config file,
//! parameter-set defaults.

use std::path::{Path, PathBuf};

use qdplasmon::drive::DriveSpec;
use qdplasmon::dynamics::{PropagationSpec, RecordSpec, SolverKind, DEFAULT_DT_FS, DEFAULT_T_END_FS};
use qdplasmon::entanglement::NormPadding;
use qdplasmon::manifold::{CouplingMode, ManifoldScenario};
use qdplasmon::model::{build_basis, Basis, ParameterSet};
use qdplasmon::spectra::{FrequencyGrid, SpectrumOptions};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScenarioKind {
    #[serde(rename = "spectrum")]
    Spectrum,
    #[serde(rename = "dynamics-cw")]
    DynamicsCw,
    #[serde(rename = "entangle")]
    Entangle,
    #[serde(rename = "manifold-N")]
    Manifold,
}

impl ScenarioKind {
    pub fn name(&self) -> &'static str {
        match self {
            ScenarioKind::Spectrum => "spectrum",
            ScenarioKind::DynamicsCw => "dynamics-cw",
            ScenarioKind::Entangle => "entangle",
            ScenarioKind::Manifold => "manifold-N",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverChoice {
    Lindblad,
    Nonhermitian,
    Both,
}

impl SolverChoice {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "lindblad" => Some(SolverChoice::Lindblad),
            "nonhermitian" => Some(SolverChoice::Nonhermitian),
            "both" => Some(SolverChoice::Both),
            _ => None,
        }
    }

    pub fn solvers(&self) -> Vec<SolverKind> {
        match self {
            SolverChoice::Lindblad => vec![SolverKind::Lindblad],
            SolverChoice::Nonhermitian => vec![SolverKind::NonHermitian],
            SolverChoice::Both => vec![SolverKind::NonHermitian, SolverKind::Lindblad],
        }
    }
}

/// A coupling given either once for all dots or per dot.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Couplings {
    Uniform(f64),
    PerDot(Vec<f64>),
}

/// Any subset of the physical parameters; omitted fields keep the values of
/// the chosen parameter set.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamOverrides {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_pl: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_l: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<Couplings>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma2_star: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_pl: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_pl: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e_l: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_l: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_med: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cw_mode: Option<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ManifoldModes {
    Homogeneous,
    Inhomogeneous,
    Both,
}

impl ManifoldModes {
    pub fn modes(&self) -> Vec<CouplingMode> {
        match self {
            ManifoldModes::Homogeneous => vec![CouplingMode::Homogeneous],
            ManifoldModes::Inhomogeneous => vec![CouplingMode::Inhomogeneous],
            ManifoldModes::Both => vec![CouplingMode::Homogeneous, CouplingMode::Inhomogeneous],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldConfig {
    #[serde(default = "default_manifold_dots")]
    pub n_dots: usize,
    #[serde(default = "default_manifold_modes")]
    pub mode: ManifoldModes,
    /// Coupling mean and spread, eV.
    #[serde(default = "default_coupling")]
    pub mean: f64,
    #[serde(default = "default_coupling")]
    pub std: f64,
    #[serde(default = "default_sample_step")]
    pub sample_step_fs: f64,
}

fn default_manifold_dots() -> usize {
    50
}
fn default_manifold_modes() -> ManifoldModes {
    ManifoldModes::Both
}
fn default_coupling() -> f64 {
    0.0167
}
fn default_sample_step() -> f64 {
    1.0
}

impl Default for ManifoldConfig {
    fn default() -> Self {
        ManifoldConfig {
            n_dots: default_manifold_dots(),
            mode: default_manifold_modes(),
            mean: default_coupling(),
            std: default_coupling(),
            sample_step_fs: default_sample_step(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SteadyStateConfig {
    pub window_fs: f64,
    pub tol: f64,
}

impl Default for SteadyStateConfig {
    fn default() -> Self {
        SteadyStateConfig { window_fs: 100.0, tol: 1e-3 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Dotted path of a numeric config field; bare physical parameter names
    /// are looked up under `params`.
    pub axis: String,
    pub values: Vec<f64>,
}

/// The config document as written.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameter_set: Option<u8>,
    #[serde(default)]
    pub params: ParamOverrides,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverChoice>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_dots: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_pl: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_end_fs: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt_fs: Option<f64>,
    /// Integration steps per recorded sample.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub record_stride: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<FrequencyGrid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifold: Option<ManifoldConfig>,
    #[serde(default)]
    pub concurrence_padding: NormPadding,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steady_state: Option<SteadyStateConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct FlagOverrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub solver: Option<SolverChoice>,
    pub parameter_set: Option<u8>,
}

impl FlagOverrides {
    pub fn apply(&self, config: &mut ScenarioConfig) {
        if let Some(out) = &self.out {
            config.output_dir = Some(out.clone());
        }
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(solver) = self.solver {
            config.solver = Some(solver);
        }
        if let Some(set) = self.parameter_set {
            config.parameter_set = Some(set);
        }
    }
}

/// Everything a run needs, with defaults filled in and invariants checked.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResolvedScenario {
    pub scenario: ScenarioKind,
    pub parameter_set: u8,
    pub params: ParameterSet,
    pub solver: SolverChoice,
    pub n_dots: usize,
    pub n_pl: usize,
    pub t_end_fs: f64,
    pub dt_fs: f64,
    pub record_stride: usize,
    pub output_dir: PathBuf,
    pub seed: u64,
    pub spectrum: FrequencyGrid,
    pub manifold: ManifoldConfig,
    pub concurrence_padding: NormPadding,
    pub steady_state: SteadyStateConfig,
}

fn schema_error(path: &str, message: impl Into<String>) -> CliError {
    CliError::Config { path: path.to_string(), message: message.into() }
}

/// Parses a config document, reporting the path of the first offending field.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        schema_error(if path == "." { "<root>" } else { &path }, e.into_inner().to_string())
    })
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

impl ScenarioConfig {
    pub fn resolve(&self) -> Result<ResolvedScenario, CliError> {
        let kind = self.scenario;
        let set = self.parameter_set.unwrap_or(match kind {
            ScenarioKind::Spectrum | ScenarioKind::DynamicsCw => 1,
            ScenarioKind::Entangle | ScenarioKind::Manifold => 2,
        });
        if set != 1 && set != 2 {
            return Err(schema_error("parameter_set", format!("must be 1 or 2, got {set}")));
        }

        let solver = self.solver.unwrap_or(match kind {
            ScenarioKind::Manifold => SolverChoice::Nonhermitian,
            _ => SolverChoice::Both,
        });
        if kind == ScenarioKind::Manifold && solver != SolverChoice::Nonhermitian {
            return Err(schema_error(
                "solver",
                "manifold-N runs only with the non-Hermitian solver; the density matrix of many dots is out of scale",
            ));
        }

        let manifold = self.manifold.clone().unwrap_or_default();
        if self.manifold.is_some() && kind != ScenarioKind::Manifold {
            return Err(schema_error("manifold", "only used by the manifold-N scenario"));
        }
        let n_dots = match kind {
            ScenarioKind::Manifold => {
                if self.n_dots.is_some_and(|n| n != manifold.n_dots) {
                    return Err(schema_error("n_dots", "manifold-N takes its dot count from manifold.n_dots"));
                }
                manifold.n_dots
            }
            _ => match (&self.n_dots, &self.params.g) {
                (Some(n), _) => *n,
                (None, Some(Couplings::PerDot(g))) => g.len(),
                (None, _) if kind == ScenarioKind::Entangle => 2,
                (None, _) => 1,
            },
        };
        if n_dots == 0 {
            return Err(schema_error("n_dots", "must be at least 1"));
        }
        if kind == ScenarioKind::Entangle && n_dots != 2 {
            return Err(schema_error("n_dots", format!("entangle needs exactly 2 dots, got {n_dots}")));
        }
        if kind == ScenarioKind::Manifold && n_dots < 2 {
            return Err(schema_error("manifold.n_dots", "needs at least 2 dots"));
        }

        let mut params = ParameterSet::table(set, n_dots).map_err(|e| schema_error("parameter_set", e.to_string()))?;
        self.apply_overrides(&mut params, n_dots)?;
        match kind {
            ScenarioKind::DynamicsCw => params.cw_mode = true,
            ScenarioKind::Spectrum if params.cw_mode => {
                return Err(schema_error("params.cw_mode", "spectra need a pulsed drive"));
            }
            ScenarioKind::Manifold if params.e_l != 0.0 => {
                return Err(schema_error("params.e_l", "the single-excitation manifold is closed only without drive"));
            }
            _ => {}
        }
        if kind == ScenarioKind::Manifold {
            params.g = vec![manifold.mean; n_dots];
        }
        params.validate().map_err(|e| schema_error("params", e.to_string()))?;

        let n_pl = self.n_pl.unwrap_or(if kind == ScenarioKind::DynamicsCw { 15 } else { 5 });
        if n_pl < 2 {
            return Err(schema_error("n_pl", "must be at least 2"));
        }
        let t_end_fs = self.t_end_fs.unwrap_or(DEFAULT_T_END_FS);
        let dt_fs = self.dt_fs.unwrap_or(DEFAULT_DT_FS);
        if !(t_end_fs > 0.0 && t_end_fs.is_finite()) {
            return Err(schema_error("t_end_fs", "must be positive"));
        }
        if !(dt_fs > 0.0 && dt_fs.is_finite()) {
            return Err(schema_error("dt_fs", "must be positive"));
        }
        let record_stride = self.record_stride.unwrap_or(if kind == ScenarioKind::Spectrum { 20 } else { 200 });
        if record_stride == 0 {
            return Err(schema_error("record_stride", "must be at least 1"));
        }
        if kind != ScenarioKind::Manifold {
            let steps = t_end_fs / dt_fs;
            if (steps - steps.round()).abs() > 1e-6 || (steps.round() as usize) % record_stride != 0 {
                return Err(schema_error(
                    "record_stride",
                    format!("t_end_fs / dt_fs = {steps} steps must be a whole multiple of the record stride {record_stride}"),
                ));
            }
        } else {
            let samples = t_end_fs / manifold.sample_step_fs;
            if !(manifold.sample_step_fs > 0.0) || (samples - samples.round()).abs() > 1e-6 {
                return Err(schema_error("manifold.sample_step_fs", "t_end_fs must be a whole number of sample steps"));
            }
            if !(manifold.std >= 0.0) {
                return Err(schema_error("manifold.std", "must be nonnegative"));
            }
        }
        if self.spectrum.is_some() && kind != ScenarioKind::Spectrum {
            return Err(schema_error("spectrum", "only used by the spectrum scenario"));
        }
        let spectrum = self.spectrum.unwrap_or(FrequencyGrid::DEFAULT);
        if kind == ScenarioKind::Spectrum {
            spectrum.points().map_err(|e| schema_error("spectrum", e.to_string()))?;
        }
        let steady_state = self.steady_state.clone().unwrap_or_default();
        if !(steady_state.window_fs > 0.0 && steady_state.tol > 0.0) {
            return Err(schema_error("steady_state", "window_fs and tol must be positive"));
        }

        Ok(ResolvedScenario {
            scenario: kind,
            parameter_set: set,
            params,
            solver,
            n_dots,
            n_pl,
            t_end_fs,
            dt_fs,
            record_stride,
            output_dir: self.output_dir.clone().unwrap_or_else(|| PathBuf::from("out")),
            seed: self.seed,
            spectrum,
            manifold,
            concurrence_padding: self.concurrence_padding,
            steady_state,
        })
    }

    fn apply_overrides(&self, p: &mut ParameterSet, n_dots: usize) -> Result<(), CliError> {
        let o = &self.params;
        let scalars: [(&Option<f64>, &mut f64); 12] = [
            (&o.omega0, &mut p.omega0),
            (&o.omega_pl, &mut p.omega_pl),
            (&o.omega_l, &mut p.omega_l),
            (&o.gamma1, &mut p.gamma1),
            (&o.gamma2_star, &mut p.gamma2_star),
            (&o.gamma_pl, &mut p.gamma_pl),
            (&o.d0, &mut p.d0),
            (&o.d_pl, &mut p.d_pl),
            (&o.e_l, &mut p.e_l),
            (&o.t_c, &mut p.t_c),
            (&o.tau_l, &mut p.tau_l),
            (&o.n_med, &mut p.n_med),
        ];
        for (src, dst) in scalars {
            if let Some(v) = src {
                *dst = *v;
            }
        }
        if let Some(cw) = o.cw_mode {
            p.cw_mode = cw;
        }
        match &o.g {
            Some(Couplings::Uniform(g)) => p.g = vec![*g; n_dots],
            Some(Couplings::PerDot(g)) => {
                if g.len() != n_dots {
                    return Err(schema_error("params.g", format!("{} couplings given for {n_dots} dots", g.len())));
                }
                p.g = g.clone();
            }
            None => {}
        }
        Ok(())
    }
}

impl ResolvedScenario {
    pub fn basis(&self) -> Result<Basis, CliError> {
        build_basis(self.n_dots, self.n_pl).map_err(|e| schema_error("n_dots", e.to_string()))
    }

    pub fn drive(&self) -> DriveSpec {
        DriveSpec::from_params(&self.params)
    }

    pub fn propagation(&self, snapshots: bool) -> PropagationSpec {
        PropagationSpec {
            t_end: self.t_end_fs,
            dt: self.dt_fs,
            record: RecordSpec { stride: self.record_stride, snapshots, positivity: true },
        }
    }

    pub fn spectrum_options(&self) -> SpectrumOptions {
        SpectrumOptions { grid: self.spectrum, t_end: self.t_end_fs, dt: self.dt_fs, stride: self.record_stride }
    }

    pub fn manifold_scenario(&self, mode: CouplingMode) -> ManifoldScenario {
        ManifoldScenario {
            n_dots: self.n_dots,
            mode,
            mean: self.manifold.mean,
            std: self.manifold.std,
            seed: self.seed,
            t_end: self.t_end_fs,
            sample_step: self.manifold.sample_step_fs,
        }
    }
}

/// Sets a numeric field addressed by a dotted path in a config document.
pub fn set_numeric_path(doc: &mut Value, axis: &str, value: f64) -> Result<(), CliError> {
    const PARAM_NAMES: [&str; 13] = [
        "omega0", "omega_pl", "omega_l", "g", "gamma1", "gamma2_star", "gamma_pl", "d0", "d_pl", "e_l", "t_c",
        "tau_l", "n_med",
    ];
    let path = if PARAM_NAMES.contains(&axis) { format!("params.{axis}") } else { axis.to_string() };
    let (parents, leaf) = match path.rsplit_once('.') {
        Some((p, l)) => (p.split('.').collect::<Vec<_>>(), l),
        None => (Vec::new(), path.as_str()),
    };
    let mut node = doc;
    for part in parents {
        let obj = node
            .as_object_mut()
            .ok_or_else(|| schema_error(&path, format!("'{part}' is not inside an object")))?;
        node = obj.entry(part.to_string()).or_insert_with(|| Value::Object(Default::default()));
    }
    let obj = node.as_object_mut().ok_or_else(|| schema_error(&path, format!("'{leaf}' is not inside an object")))?;
    let integer_field = matches!(leaf, "n_dots" | "n_pl" | "record_stride" | "seed" | "parameter_set");
    let number = if integer_field {
        if value.fract() != 0.0 || value < 0.0 {
            return Err(schema_error(&path, format!("{value} is not a nonnegative integer")));
        }
        Value::from(value as u64)
    } else {
        serde_json::Number::from_f64(value)
            .map(Value::Number)
            .ok_or_else(|| schema_error(&path, format!("{value} is not a finite number")))?
    };
    obj.insert(leaf.to_string(), number);
    Ok(())
}

/// Directory-name form of a sweep value, e.g. `gamma2_star_0.00127`.
pub fn sweep_label(axis: &str, value: f64) -> String {
    let name = axis.rsplit('.').next().unwrap_or(axis);
    format!("{name}_{value}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_table_defaults() {
        let c = parse_config(r#"{"scenario": "spectrum", "parameter_set": 1}"#).unwrap();
        let r = c.resolve().unwrap();
        assert_eq!(r.params, ParameterSet::optical_spectra(1));
        assert_eq!(r.solver, SolverChoice::Both);
        assert_eq!((r.n_dots, r.n_pl), (1, 5));
    }

    #[test]
    fn single_override_changes_one_field() {
        let c = parse_config(r#"{"scenario": "spectrum", "params": {"gamma2_star": 0.00508}}"#).unwrap();
        let r = c.resolve().unwrap();
        let mut want = ParameterSet::optical_spectra(1);
        want.gamma2_star = 0.00508;
        assert_eq!(r.params, want);
    }

    #[test]
    fn manifold_rejects_both_solvers() {
        let c = parse_config(r#"{"scenario": "manifold-N", "solver": "both"}"#).unwrap();
        let err = c.resolve().unwrap_err();
        assert!(matches!(&err, CliError::Config { path, .. } if path == "solver"), "{err}");
        assert!(err.to_string().contains("non-Hermitian"));
    }

    #[test]
    fn errors_name_the_offending_path() {
        let err = parse_config(r#"{"scenario": "spectrum", "params": {"gamma2": 0.1}}"#).unwrap_err();
        assert!(matches!(&err, CliError::Config { path, .. } if path.starts_with("params")), "{err}");
        let err = parse_config(r#"{"scenario": "spectrum", "n_pl": "five"}"#).unwrap_err();
        assert!(matches!(&err, CliError::Config { path, .. } if path == "n_pl"), "{err}");
        let err = parse_config(r#"{"scenario": "spectra"}"#).unwrap_err();
        assert!(matches!(&err, CliError::Config { path, .. } if path == "scenario"), "{err}");
        let err = parse_config(r#"{"scenario": "spectrum", "params": {"g": [0.01, 0.02]}, "n_dots": 3}"#)
            .unwrap()
            .resolve()
            .unwrap_err();
        assert!(matches!(&err, CliError::Config { path, .. } if path == "params.g"), "{err}");
    }

    #[test]
    fn scalar_and_list_couplings() {
        let r = parse_config(r#"{"scenario": "spectrum", "n_dots": 2, "params": {"g": 0.02}}"#)
            .unwrap()
            .resolve()
            .unwrap();
        assert_eq!(r.params.g, vec![0.02, 0.02]);
        let r = parse_config(r#"{"scenario": "spectrum", "params": {"g": [0.01, 0.03]}}"#).unwrap().resolve().unwrap();
        assert_eq!((r.n_dots, r.params.g.clone()), (2, vec![0.01, 0.03]));
    }

    #[test]
    fn scenario_invariants() {
        let cw = parse_config(r#"{"scenario": "dynamics-cw"}"#).unwrap().resolve().unwrap();
        assert!(cw.params.cw_mode);
        assert_eq!(cw.n_pl, 15);
        assert!(parse_config(r#"{"scenario": "spectrum", "params": {"cw_mode": true}}"#).unwrap().resolve().is_err());
        assert!(parse_config(r#"{"scenario": "entangle", "n_dots": 3}"#).unwrap().resolve().is_err());
        assert!(parse_config(r#"{"scenario": "spectrum", "record_stride": 7}"#).unwrap().resolve().is_err());
        assert!(parse_config(r#"{"scenario": "spectrum", "parameter_set": 3}"#).unwrap().resolve().is_err());
        let e = parse_config(r#"{"scenario": "entangle"}"#).unwrap().resolve().unwrap();
        assert_eq!((e.parameter_set, e.n_dots), (2, 2));
    }

    #[test]
    fn flags_take_precedence() {
        let mut c = parse_config(r#"{"scenario": "entangle", "solver": "lindblad", "seed": 3}"#).unwrap();
        FlagOverrides { seed: Some(9), solver: Some(SolverChoice::Nonhermitian), ..Default::default() }.apply(&mut c);
        let r = c.resolve().unwrap();
        assert_eq!((r.seed, r.solver), (9, SolverChoice::Nonhermitian));
    }

    #[test]
    fn sweep_paths() {
        let mut doc = serde_json::json!({"scenario": "spectrum"});
        set_numeric_path(&mut doc, "gamma2_star", 0.00127).unwrap();
        set_numeric_path(&mut doc, "n_pl", 7.0).unwrap();
        set_numeric_path(&mut doc, "spectrum.omega_step", 1e-3).unwrap();
        assert_eq!(doc["params"]["gamma2_star"], 0.00127);
        assert_eq!(doc["n_pl"], 7);
        assert!(set_numeric_path(&mut doc, "n_pl", 7.5).is_err());
        assert_eq!(sweep_label("params.gamma2_star", 0.0), "gamma2_star_0");
        assert_eq!(sweep_label("g", 0.01527), "g_0.01527");
    }
}
