//! Declarative scenario configs and batch execution.
//!
//! A scenario is one JSON file naming a graph, a game, an initial
//! condition, integrator settings, and the artifacts to write. Vertex
//! labels in files are 1-indexed with vertex 1 the hub of the star
//! builders; the API converts to 0-indexed at the parse boundary. The
//! whole pipeline is deterministic: the same config always produces
//! byte-identical CSV files.

use std::collections::HashSet;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::csv::{emit_average, emit_equilibria, emit_snapshot, emit_tensor, emit_timecourse};
use crate::dynamics::{detect_steady_state, integrate, DynamicsError, IntegratorOptions, Trajectory};
use crate::equilibria::enumerate_pure_nash;
use crate::graph::{build_star, Graph, StarKind};
use crate::payoff::{payoff_tensor, GameSpec, PayoffMatrix, PayoffModel, StateProfile};

/// Errors grouped by failure stage so callers can map them to exit codes.
#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{context}: {message}")]
    Validation { context: String, message: String },
    #[error("scenario {scenario}: {source}")]
    Integration {
        scenario: String,
        #[source]
        source: DynamicsError,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
}

/// Failure stage of a [`ScenarioError`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Parse,
    Validation,
    Integration,
    Io,
}

impl ScenarioError {
    pub fn category(&self) -> ErrorCategory {
        match self {
            ScenarioError::Parse { .. } => ErrorCategory::Parse,
            ScenarioError::Validation { .. } => ErrorCategory::Validation,
            ScenarioError::Integration { .. } => ErrorCategory::Integration,
            ScenarioError::Io { .. } => ErrorCategory::Io,
        }
    }
}

fn invalid(context: &str, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Validation { context: context.to_string(), message: message.into() }
}

fn io_error(path: &Path, source: io::Error) -> ScenarioError {
    ScenarioError::Io { path: path.display().to_string(), source }
}

/// One scenario file, fully describing a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub graph: GraphConfig,
    pub game: GameConfig,
    pub initial_condition: InitialConditionConfig,
    pub run: RunConfig,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub outputs: Vec<OutputConfig>,
}

/// Graph source: a star builder invocation or an explicit arc list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GraphConfig {
    Star(StarConfig),
    Edges(EdgeListConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StarKindConfig {
    Open,
    Closed,
    Weighted,
}

/// Star builder arguments. `heavy_weight` and `heavy_edges` apply only to
/// the weighted kind; edges are unordered 1-indexed pairs and default to
/// weight 3 when reweighted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StarConfig {
    pub kind: StarKindConfig,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heavy_weight: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heavy_edges: Option<Vec<(usize, usize)>>,
}

/// Explicit digraph: arcs are `[from, to, weight]` with 1-indexed vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeListConfig {
    pub n: usize,
    pub arcs: Vec<(usize, usize, f64)>,
}

impl GraphConfig {
    pub fn build(&self) -> Result<Graph, ScenarioError> {
        match self {
            GraphConfig::Star(cfg) => {
                if cfg.kind != StarKindConfig::Weighted
                    && (cfg.heavy_weight.is_some() || cfg.heavy_edges.is_some())
                {
                    return Err(invalid(
                        "graph.star",
                        "heavy_weight and heavy_edges apply only to kind \"weighted\"",
                    ));
                }
                let kind = match cfg.kind {
                    StarKindConfig::Open => StarKind::Open,
                    StarKindConfig::Closed => StarKind::Closed,
                    StarKindConfig::Weighted => StarKind::WeightedAsymmetric,
                };
                let mut heavy = Vec::new();
                for &(a, b) in cfg.heavy_edges.as_deref().unwrap_or(&[]) {
                    if a == 0 || b == 0 || a > cfg.n || b > cfg.n {
                        return Err(invalid(
                            "graph.star.heavy_edges",
                            format!("vertex labels are 1..={}, got ({a}, {b})", cfg.n),
                        ));
                    }
                    heavy.push((a - 1, b - 1));
                }
                build_star(kind, cfg.n, cfg.heavy_weight.unwrap_or(3.0), &heavy)
                    .map_err(|e| invalid("graph.star", e.to_string()))
            }
            GraphConfig::Edges(cfg) => {
                let mut arcs = Vec::with_capacity(cfg.arcs.len());
                for &(v, w, weight) in &cfg.arcs {
                    if v == 0 || w == 0 || v > cfg.n || w > cfg.n {
                        return Err(invalid(
                            "graph.edges.arcs",
                            format!("vertex labels are 1..={}, got ({v}, {w})", cfg.n),
                        ));
                    }
                    arcs.push((v - 1, w - 1, weight));
                }
                Graph::from_edges(cfg.n, &arcs).map_err(|e| invalid("graph.edges", e.to_string()))
            }
        }
    }
}

/// The named 2x2 games of the benchmark suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GamePreset {
    Bistable,
    Prisoner,
    Coexistence,
}

impl GamePreset {
    /// Builds the preset matrix, enforcing each preset's theta range.
    pub fn matrix(self, theta: Option<f64>) -> Result<PayoffMatrix, ScenarioError> {
        let rows = match self {
            GamePreset::Bistable => {
                let t = theta.ok_or_else(|| invalid("game.theta", "preset \"bistable\" requires theta"))?;
                if !(t.is_finite() && t > 0.0) {
                    return Err(invalid("game.theta", format!("bistable requires theta > 0, got {t}")));
                }
                vec![vec![1.0, 0.0], vec![0.0, t]]
            }
            GamePreset::Prisoner => {
                let t = theta.ok_or_else(|| invalid("game.theta", "preset \"prisoner\" requires theta"))?;
                if !(t.is_finite() && t > 1.0) {
                    return Err(invalid("game.theta", format!("prisoner requires theta > 1, got {t}")));
                }
                vec![vec![1.0, 0.0], vec![t, 0.0]]
            }
            GamePreset::Coexistence => {
                if theta.is_some() {
                    return Err(invalid("game.theta", "preset \"coexistence\" takes no theta"));
                }
                vec![vec![0.0, 1.0], vec![1.0, 0.0]]
            }
        };
        Ok(PayoffMatrix::from_rows(&rows).expect("preset matrices are well formed"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelConfig {
    WeightedAverage,
    WeightedSum,
}

impl From<ModelConfig> for PayoffModel {
    fn from(value: ModelConfig) -> PayoffModel {
        match value {
            ModelConfig::WeightedAverage => PayoffModel::WeightedAverage,
            ModelConfig::WeightedSum => PayoffModel::WeightedSum,
        }
    }
}

fn default_model() -> ModelConfig {
    ModelConfig::WeightedAverage
}

/// Game source: exactly one of `preset`, `matrix` (shared by all vertices),
/// or `matrices` (one per vertex). `theta` parameterizes presets only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<GamePreset>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<Vec<Vec<Vec<f64>>>>,
    #[serde(default = "default_model")]
    pub model: ModelConfig,
}

impl GameConfig {
    pub fn build(&self, n: usize) -> Result<GameSpec, ScenarioError> {
        let chosen = usize::from(self.preset.is_some())
            + usize::from(self.matrix.is_some())
            + usize::from(self.matrices.is_some());
        if chosen != 1 {
            return Err(invalid("game", "exactly one of preset, matrix, matrices must be given"));
        }
        let model: PayoffModel = self.model.into();
        if let Some(preset) = self.preset {
            return Ok(GameSpec::uniform(n, preset.matrix(self.theta)?, model));
        }
        if self.theta.is_some() {
            return Err(invalid("game.theta", "theta applies only to presets"));
        }
        if let Some(rows) = &self.matrix {
            let b = PayoffMatrix::from_rows(rows).map_err(|e| invalid("game.matrix", e.to_string()))?;
            return Ok(GameSpec::uniform(n, b, model));
        }
        let raw = self.matrices.as_ref().expect("one source chosen");
        if raw.len() != n {
            return Err(invalid(
                "game.matrices",
                format!("{} matrices for {} vertices", raw.len(), n),
            ));
        }
        let mut matrices = Vec::with_capacity(raw.len());
        for (v, rows) in raw.iter().enumerate() {
            matrices.push(
                PayoffMatrix::from_rows(rows)
                    .map_err(|e| invalid(&format!("game.matrices[{v}]"), e.to_string()))?,
            );
        }
        GameSpec::new(matrices, model).map_err(|e| invalid("game.matrices", e.to_string()))
    }
}

/// The four initial-condition patterns of the benchmark suite. Rebels use
/// the quasi-pure second strategy; everyone else the quasi-pure first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IcPreset {
    /// No rebels.
    Homogeneous,
    /// The first peripheral vertex (label 2) rebels.
    ExternalOutlayer,
    /// The hub (label 1) rebels.
    CentralOutlayer,
    /// Hub and first peripheral (labels 1 and 2) rebel.
    ExternalCentral,
}

/// Builds a preset initial condition for `n` vertices and 2 strategies.
/// `q` is the quasi-pure level: the majority plays `[q, 1-q]`, rebels
/// play `[1-q, q]`.
pub fn initial_condition(preset: IcPreset, n: usize, q: f64) -> Result<StateProfile, ScenarioError> {
    if n < 3 {
        return Err(invalid("initial_condition", format!("presets need n >= 3 vertices, got {n}")));
    }
    if !(q.is_finite() && q > 0.0 && q < 1.0) {
        return Err(invalid(
            "initial_condition.quasi_pure_level",
            format!("needs 0 < q < 1, got {q}"),
        ));
    }
    let rebels: &[usize] = match preset {
        IcPreset::Homogeneous => &[],
        IcPreset::ExternalOutlayer => &[1],
        IcPreset::CentralOutlayer => &[0],
        IcPreset::ExternalCentral => &[0, 1],
    };
    let states = (0..n)
        .map(|v| if rebels.contains(&v) { vec![1.0 - q, q] } else { vec![q, 1.0 - q] })
        .collect();
    StateProfile::new(states).map_err(|e| invalid("initial_condition", e.to_string()))
}

fn default_quasi_pure() -> f64 {
    0.99
}

/// Initial condition source: a preset or explicit per-vertex vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConditionConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<IcPreset>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quasi_pure_level: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vectors: Option<Vec<Vec<f64>>>,
}

impl InitialConditionConfig {
    pub fn build(&self, n: usize, m: usize) -> Result<StateProfile, ScenarioError> {
        match (&self.preset, &self.vectors) {
            (Some(_), Some(_)) | (None, None) => {
                Err(invalid("initial_condition", "exactly one of preset, vectors must be given"))
            }
            (Some(preset), None) => {
                if m != 2 {
                    return Err(invalid(
                        "initial_condition.preset",
                        format!("presets need a 2-strategy game, got M = {m}"),
                    ));
                }
                initial_condition(*preset, n, self.quasi_pure_level.unwrap_or_else(default_quasi_pure))
            }
            (None, Some(vectors)) => {
                if self.quasi_pure_level.is_some() {
                    return Err(invalid(
                        "initial_condition.quasi_pure_level",
                        "applies only to presets",
                    ));
                }
                if vectors.len() != n {
                    return Err(invalid(
                        "initial_condition.vectors",
                        format!("{} vectors for {} vertices", vectors.len(), n),
                    ));
                }
                let x = StateProfile::new(vectors.clone())
                    .map_err(|e| invalid("initial_condition.vectors", e.to_string()))?;
                if x.m() != m {
                    return Err(invalid(
                        "initial_condition.vectors",
                        format!("vectors have M = {}, game has M = {m}", x.m()),
                    ));
                }
                Ok(x)
            }
        }
    }
}

fn default_dt() -> f64 {
    1e-3
}

fn default_renormalize_every() -> usize {
    100
}

fn default_true() -> bool {
    true
}

fn default_sample_every() -> usize {
    100
}

fn default_steady_eps() -> f64 {
    1e-6
}

/// Default steady-state window in model-time units; shortened to the run
/// span when `t_end` is smaller.
pub const DEFAULT_STEADY_WINDOW: f64 = 5.0;

/// Integrator settings plus the steady-state detector parameters. Only
/// `t_end` is required.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_dt")]
    pub dt: f64,
    pub t_end: f64,
    #[serde(default = "default_renormalize_every")]
    pub renormalize_every: usize,
    #[serde(default = "default_true")]
    pub clamp_negatives: bool,
    #[serde(default = "default_sample_every")]
    pub sample_every: usize,
    #[serde(default = "default_steady_eps")]
    pub steady_eps: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steady_window: Option<f64>,
}

impl RunConfig {
    pub fn integrator_options(&self) -> IntegratorOptions {
        IntegratorOptions {
            dt: self.dt,
            t_end: self.t_end,
            renormalize_every: self.renormalize_every,
            clamp_negatives: self.clamp_negatives,
            sample_every: self.sample_every,
        }
    }

    /// The detector window actually used: the explicit value, or the
    /// default shortened to the run span.
    pub fn effective_steady_window(&self) -> f64 {
        self.steady_window.unwrap_or_else(|| DEFAULT_STEADY_WINDOW.min(self.t_end))
    }

    fn validate(&self) -> Result<(), ScenarioError> {
        self.integrator_options().validate().map_err(|e| invalid("run", e.to_string()))?;
        if !(self.steady_eps.is_finite() && self.steady_eps > 0.0) {
            return Err(invalid("run.steady_eps", format!("needs eps > 0, got {}", self.steady_eps)));
        }
        if let Some(window) = self.steady_window {
            if !(window.is_finite() && window > 0.0 && window <= self.t_end) {
                return Err(invalid(
                    "run.steady_window",
                    format!("needs 0 < window <= t_end, got {window}"),
                ));
            }
        }
        Ok(())
    }
}

/// Artifact kinds a scenario can emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputKind {
    Timecourse,
    Snapshot,
    Average,
    Tensor,
    Equilibria,
}

/// One artifact request. Relative paths land in the run's output
/// directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub kind: OutputKind,
    pub path: PathBuf,
}

impl ScenarioConfig {
    /// Applies every cross-field check: buildable graph, game, and initial
    /// condition with mutually consistent dimensions, valid run settings,
    /// well-formed output list.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.name.is_empty()
            || !self.name.chars().all(|c| c.is_ascii_alphanumeric() || "_-.".contains(c))
        {
            return Err(invalid(
                "name",
                "must be non-empty, using only ASCII letters, digits, '_', '-', '.'",
            ));
        }
        let g = self.graph.build()?;
        let spec = self.game.build(g.n())?;
        self.initial_condition.build(g.n(), spec.m())?;
        self.run.validate()?;
        let mut seen = HashSet::new();
        for output in &self.outputs {
            if output.path.as_os_str().is_empty() {
                return Err(invalid("outputs", "empty output path"));
            }
            if !seen.insert(&output.path) {
                return Err(invalid(
                    "outputs",
                    format!("duplicate output path {}", output.path.display()),
                ));
            }
        }
        Ok(())
    }
}

/// Reads and fully validates one scenario file.
pub fn parse_scenario(path: &Path) -> Result<ScenarioConfig, ScenarioError> {
    let text = fs::read_to_string(path).map_err(|source| io_error(path, source))?;
    let cfg: ScenarioConfig = serde_json::from_str(&text).map_err(|e| ScenarioError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    cfg.validate()?;
    Ok(cfg)
}

/// Completed run: the trajectory, the detected steady-state onset if any,
/// and the artifacts written.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub scenario_id: String,
    pub trajectory: Trajectory,
    pub steady_time: Option<f64>,
    pub final_state: StateProfile,
    pub written: Vec<PathBuf>,
}

/// Runs one scenario: integrate, detect steady state, write artifacts.
/// Relative output paths are joined onto `out_dir`.
pub fn run_scenario(cfg: &ScenarioConfig, out_dir: &Path) -> Result<RunResult, ScenarioError> {
    cfg.validate()?;
    let g = cfg.graph.build()?;
    let spec = cfg.game.build(g.n())?;
    let x0 = cfg.initial_condition.build(g.n(), spec.m())?;
    let opts = cfg.run.integrator_options();
    let trajectory = integrate(&g, &spec, &x0, &opts)
        .map_err(|source| ScenarioError::Integration { scenario: cfg.name.clone(), source })?;
    let steady_time = detect_steady_state(
        &g,
        &spec,
        &trajectory,
        cfg.run.steady_eps,
        cfg.run.effective_steady_window(),
    )
    .map_err(|source| ScenarioError::Integration { scenario: cfg.name.clone(), source })?;
    let final_state = trajectory.final_state().clone();
    let mut written = Vec::with_capacity(cfg.outputs.len());
    for output in &cfg.outputs {
        let target =
            if output.path.is_absolute() { output.path.clone() } else { out_dir.join(&output.path) };
        match output.kind {
            OutputKind::Timecourse => {
                emit_timecourse(&target, &trajectory).map_err(|e| io_error(&target, e))?
            }
            OutputKind::Snapshot => {
                emit_snapshot(&target, &final_state).map_err(|e| io_error(&target, e))?
            }
            OutputKind::Average => {
                emit_average(&target, &trajectory).map_err(|e| io_error(&target, e))?
            }
            OutputKind::Tensor => {
                let tensor =
                    payoff_tensor(&g, &spec).map_err(|e| invalid("outputs.tensor", e.to_string()))?;
                emit_tensor(&target, &tensor).map_err(|e| io_error(&target, e))?
            }
            OutputKind::Equilibria => {
                let report = enumerate_pure_nash(&g, &spec)
                    .map_err(|e| invalid("outputs.equilibria", e.to_string()))?;
                emit_equilibria(&target, &report, g.n()).map_err(|e| io_error(&target, e))?
            }
        }
        written.push(target);
    }
    Ok(RunResult { scenario_id: cfg.name.clone(), trajectory, steady_time, final_state, written })
}

/// Parses and runs many scenario files on up to `parallelism` worker
/// threads. Results come back in input order, one per path, and a failing
/// scenario never aborts the rest.
pub fn run_batch(
    paths: &[PathBuf],
    parallelism: usize,
    out_dir: &Path,
) -> Vec<Result<RunResult, ScenarioError>> {
    let slots: Vec<Mutex<Option<Result<RunResult, ScenarioError>>>> =
        paths.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = parallelism.max(1).min(paths.len().max(1));
    thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= paths.len() {
                    break;
                }
                let outcome =
                    parse_scenario(&paths[i]).and_then(|cfg| run_scenario(&cfg, out_dir));
                *slots[i].lock().expect("no poisoned slot") = Some(outcome);
            });
        }
    });
    slots
        .into_iter()
        .map(|slot| slot.into_inner().expect("no poisoned slot").expect("worker filled every slot"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal_json(name: &str) -> String {
        format!(
            r#"{{
              "name": "{name}",
              "graph": {{"star": {{"kind": "open", "n": 6}}}},
              "game": {{"preset": "bistable", "theta": 1.0}},
              "initial_condition": {{"preset": "central_outlayer"}},
              "run": {{"t_end": 2.0}}
            }}"#
        )
    }

    fn write_scenario(dir: &Path, name: &str, body: &str) -> PathBuf {
        let path = dir.join(format!("{name}.json"));
        fs::write(&path, body).unwrap();
        path
    }

    #[test]
    fn preset_matrices_entry_by_entry() {
        let b = GamePreset::Bistable.matrix(Some(1.5)).unwrap();
        assert_eq!(
            [b.entry(0, 0), b.entry(0, 1), b.entry(1, 0), b.entry(1, 1)],
            [1.0, 0.0, 0.0, 1.5]
        );
        let p = GamePreset::Prisoner.matrix(Some(1.5)).unwrap();
        assert_eq!(
            [p.entry(0, 0), p.entry(0, 1), p.entry(1, 0), p.entry(1, 1)],
            [1.0, 0.0, 1.5, 0.0]
        );
        let c = GamePreset::Coexistence.matrix(None).unwrap();
        assert_eq!(
            [c.entry(0, 0), c.entry(0, 1), c.entry(1, 0), c.entry(1, 1)],
            [0.0, 1.0, 1.0, 0.0]
        );
    }

    #[test]
    fn preset_theta_ranges() {
        assert!(GamePreset::Bistable.matrix(Some(0.0)).is_err());
        assert!(GamePreset::Bistable.matrix(None).is_err());
        assert!(GamePreset::Prisoner.matrix(Some(1.0)).is_err());
        assert!(GamePreset::Prisoner.matrix(Some(0.5)).is_err());
        assert!(GamePreset::Coexistence.matrix(Some(1.0)).is_err());
        assert!(GamePreset::Bistable.matrix(Some(f64::NAN)).is_err());
    }

    #[test]
    fn initial_condition_presets_place_rebels() {
        let q = 0.99;
        let hom = initial_condition(IcPreset::Homogeneous, 6, q).unwrap();
        for v in 0..6 {
            assert_eq!(hom.vertex(v), &[q, 1.0 - q]);
        }
        let ext = initial_condition(IcPreset::ExternalOutlayer, 6, q).unwrap();
        assert_eq!(ext.vertex(1), &[1.0 - q, q]);
        assert_eq!(ext.vertex(0), &[q, 1.0 - q]);
        let central = initial_condition(IcPreset::CentralOutlayer, 6, q).unwrap();
        assert_eq!(central.vertex(0), &[1.0 - q, q]);
        for v in 1..6 {
            assert_eq!(central.vertex(v), &[q, 1.0 - q]);
        }
        let both = initial_condition(IcPreset::ExternalCentral, 6, q).unwrap();
        assert_eq!(both.vertex(0), &[1.0 - q, q]);
        assert_eq!(both.vertex(1), &[1.0 - q, q]);
        for v in 2..6 {
            assert_eq!(both.vertex(v), &[q, 1.0 - q]);
        }
    }

    #[test]
    fn initial_condition_preconditions() {
        assert!(initial_condition(IcPreset::Homogeneous, 2, 0.99).is_err());
        assert!(initial_condition(IcPreset::Homogeneous, 6, 1.0).is_err());
        assert!(initial_condition(IcPreset::Homogeneous, 6, 0.0).is_err());
    }

    #[test]
    fn parse_accepts_a_full_config() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_scenario(dir.path(), "demo", &minimal_json("demo"));
        let cfg = parse_scenario(&path).unwrap();
        assert_eq!(cfg.name, "demo");
        assert_eq!(cfg.run.dt, 1e-3);
        assert_eq!(cfg.run.t_end, 2.0);
        assert_eq!(cfg.run.steady_eps, 1e-6);
        assert_eq!(cfg.run.steady_window, None);
        // the default window shrinks to fit short runs
        assert_eq!(cfg.run.effective_steady_window(), 2.0);
        assert_eq!(cfg.game.model, ModelConfig::WeightedAverage);
        assert!(cfg.outputs.is_empty());
    }

    #[test]
    fn parse_reports_line_info_on_bad_syntax() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_scenario(dir.path(), "broken", "{\"name\": \"x\",\n  oops\n}");
        let err = parse_scenario(&path).unwrap_err();
        assert_eq!(err.category(), ErrorCategory::Parse);
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn missing_file_is_an_io_error() {
        let err = parse_scenario(Path::new("/nonexistent/nope.json")).unwrap_err();
        assert_eq!(err.category(), ErrorCategory::Io);
    }

    #[test]
    fn unknown_preset_lists_valid_names() {
        let body = minimal_json("demo").replace("bistable", "chicken");
        let dir = tempfile::tempdir().unwrap();
        let path = write_scenario(dir.path(), "demo", &body);
        let err = parse_scenario(&path).unwrap_err();
        assert_eq!(err.category(), ErrorCategory::Parse);
        let message = err.to_string();
        for name in ["bistable", "prisoner", "coexistence"] {
            assert!(message.contains(name), "{message}");
        }
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let body = minimal_json("demo").replace("\"run\"", "\"extra\": 1, \"run\"");
        let dir = tempfile::tempdir().unwrap();
        let path = write_scenario(dir.path(), "demo", &body);
        let err = parse_scenario(&path).unwrap_err();
        assert_eq!(err.category(), ErrorCategory::Parse);
        assert!(err.to_string().contains("extra"), "{err}");
    }

    #[test]
    fn theta_range_validation() {
        let mut bad_prisoner: ScenarioConfig = serde_json::from_str(&minimal_json("x")).unwrap();
        bad_prisoner.game.preset = Some(GamePreset::Prisoner);
        bad_prisoner.game.theta = Some(0.5);
        let err = bad_prisoner.validate().unwrap_err();
        assert_eq!(err.category(), ErrorCategory::Validation);
        assert!(err.to_string().contains("theta > 1"), "{err}");

        let mut bad_bistable: ScenarioConfig = serde_json::from_str(&minimal_json("x")).unwrap();
        bad_bistable.game.theta = Some(-1.0);
        assert!(bad_bistable.validate().is_err());
    }

    #[test]
    fn explicit_steady_window_must_fit_run() {
        let mut cfg: ScenarioConfig = serde_json::from_str(&minimal_json("x")).unwrap();
        cfg.run.steady_window = Some(10.0);
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("run.steady_window"), "{err}");
    }

    #[test]
    fn dimension_mismatches_name_the_field() {
        let mut cfg: ScenarioConfig = serde_json::from_str(&minimal_json("x")).unwrap();
        cfg.initial_condition =
            InitialConditionConfig { preset: None, quasi_pure_level: None, vectors: Some(vec![vec![0.5, 0.5]; 5]) };
        let err = cfg.validate().unwrap_err();
        assert_eq!(err.category(), ErrorCategory::Validation);
        assert!(err.to_string().contains("initial_condition.vectors"), "{err}");
        assert!(err.to_string().contains("5 vectors for 6 vertices"), "{err}");
    }

    #[test]
    fn m_mismatch_between_game_and_vectors() {
        let mut cfg: ScenarioConfig = serde_json::from_str(&minimal_json("x")).unwrap();
        cfg.game =
            GameConfig { preset: None, theta: None, matrix: Some(vec![vec![0.0; 3]; 3]), matrices: None, model: default_model() };
        cfg.initial_condition = InitialConditionConfig {
            preset: None,
            quasi_pure_level: None,
            vectors: Some(vec![vec![0.5, 0.5]; 6]),
        };
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("M = 2"), "{err}");
        assert!(err.to_string().contains("M = 3"), "{err}");
    }

    #[test]
    fn preset_initial_condition_needs_two_strategies() {
        let mut cfg: ScenarioConfig = serde_json::from_str(&minimal_json("x")).unwrap();
        cfg.game =
            GameConfig { preset: None, theta: None, matrix: Some(vec![vec![0.0; 3]; 3]), matrices: None, model: default_model() };
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("2-strategy"), "{err}");
    }

    #[test]
    fn heavy_edges_only_on_weighted_stars() {
        let mut cfg: ScenarioConfig = serde_json::from_str(&minimal_json("x")).unwrap();
        cfg.graph = GraphConfig::Star(StarConfig {
            kind: StarKindConfig::Open,
            n: 6,
            heavy_weight: Some(3.0),
            heavy_edges: None,
        });
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("weighted"), "{err}");
    }

    #[test]
    fn weighted_star_config_builds_reweighted_graph() {
        let cfg = GraphConfig::Star(StarConfig {
            kind: StarKindConfig::Weighted,
            n: 6,
            heavy_weight: None,
            heavy_edges: Some(vec![(2, 6)]),
        });
        let g = cfg.build().unwrap();
        // labels 2 and 6 are indices 1 and 5; default heavy weight is 3
        assert_eq!(g.weight(1, 5), 3.0);
        assert_eq!(g.weight(5, 1), 3.0);
        assert_eq!(g.weight(0, 1), 1.0);
    }

    #[test]
    fn edge_list_config_uses_one_indexed_labels() {
        let cfg = GraphConfig::Edges(EdgeListConfig {
            n: 3,
            arcs: vec![(1, 2, 1.0), (2, 1, 0.5), (1, 3, 2.0)],
        });
        let g = cfg.build().unwrap();
        assert_eq!(g.weight(0, 1), 1.0);
        assert_eq!(g.weight(1, 0), 0.5);
        assert_eq!(g.weight(0, 2), 2.0);
        assert_eq!(g.weight(2, 0), 0.0);

        let bad = GraphConfig::Edges(EdgeListConfig { n: 3, arcs: vec![(0, 2, 1.0)] });
        let err = bad.build().unwrap_err();
        assert!(err.to_string().contains("1..=3"), "{err}");
    }

    #[test]
    fn duplicate_output_paths_rejected() {
        let mut cfg: ScenarioConfig = serde_json::from_str(&minimal_json("x")).unwrap();
        cfg.outputs = vec![
            OutputConfig { kind: OutputKind::Snapshot, path: PathBuf::from("a.csv") },
            OutputConfig { kind: OutputKind::Timecourse, path: PathBuf::from("a.csv") },
        ];
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
    }

    #[test]
    fn config_round_trips_through_json() {
        let mut cfg: ScenarioConfig = serde_json::from_str(&minimal_json("demo")).unwrap();
        cfg.outputs = vec![
            OutputConfig { kind: OutputKind::Snapshot, path: PathBuf::from("final.csv") },
            OutputConfig { kind: OutputKind::Tensor, path: PathBuf::from("tensor.csv") },
        ];
        let text = serde_json::to_string_pretty(&cfg).unwrap();
        let reparsed: ScenarioConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(reparsed, cfg);
    }

    #[test]
    fn run_scenario_writes_requested_outputs() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg: ScenarioConfig = serde_json::from_str(&minimal_json("writer")).unwrap();
        cfg.outputs = vec![
            OutputConfig { kind: OutputKind::Snapshot, path: PathBuf::from("final.csv") },
            OutputConfig { kind: OutputKind::Timecourse, path: PathBuf::from("course.csv") },
            OutputConfig { kind: OutputKind::Average, path: PathBuf::from("avg.csv") },
            OutputConfig { kind: OutputKind::Tensor, path: PathBuf::from("tensor.csv") },
            OutputConfig { kind: OutputKind::Equilibria, path: PathBuf::from("nash.csv") },
        ];
        let result = run_scenario(&cfg, dir.path()).unwrap();
        assert_eq!(result.scenario_id, "writer");
        assert_eq!(result.written.len(), 5);
        for path in &result.written {
            assert!(path.exists(), "{} missing", path.display());
        }
        assert_eq!(&result.final_state, result.trajectory.final_state());
        let snapshot = fs::read_to_string(dir.path().join("final.csv")).unwrap();
        assert!(snapshot.starts_with("vertex,x1,x2\n"));
        assert_eq!(snapshot.lines().count(), 7);
    }

    #[test]
    fn run_scenario_detects_steady_state_of_settled_run() {
        let body = r#"{
          "name": "settled",
          "graph": {"star": {"kind": "open", "n": 6}},
          "game": {"preset": "bistable", "theta": 1.0},
          "initial_condition": {"preset": "homogeneous"},
          "run": {"t_end": 50.0, "steady_eps": 1e-6, "steady_window": 5.0}
        }"#;
        let cfg: ScenarioConfig = serde_json::from_str(body).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let result = run_scenario(&cfg, dir.path()).unwrap();
        let steady = result.steady_time.expect("homogeneous bistable run settles");
        assert!(steady < 45.0, "steady at {steady}");
        // everyone converges on the first strategy
        for v in 0..6 {
            assert!(result.final_state.vertex(v)[0] > 0.999);
        }
    }

    #[test]
    fn unwritable_output_path_is_io_error() {
        let mut cfg: ScenarioConfig = serde_json::from_str(&minimal_json("x")).unwrap();
        cfg.run.t_end = 0.5;
        cfg.outputs =
            vec![OutputConfig { kind: OutputKind::Snapshot, path: PathBuf::from("/proc/replinet/out.csv") }];
        let err = run_scenario(&cfg, Path::new(".")).unwrap_err();
        assert_eq!(err.category(), ErrorCategory::Io);
    }

    #[test]
    fn batch_preserves_input_order_and_isolates_failures() {
        let dir = tempfile::tempdir().unwrap();
        let out = tempfile::tempdir().unwrap();
        let a = write_scenario(dir.path(), "a", &minimal_json("a"));
        let missing = dir.path().join("missing.json");
        let c = write_scenario(dir.path(), "c", &minimal_json("c"));
        let results = run_batch(&[a, missing, c], 3, out.path());
        assert_eq!(results.len(), 3);
        assert_eq!(results[0].as_ref().unwrap().scenario_id, "a");
        assert!(results[1].is_err());
        assert_eq!(results[2].as_ref().unwrap().scenario_id, "c");
    }

    #[test]
    fn batch_of_nothing_is_empty() {
        let out = tempfile::tempdir().unwrap();
        assert!(run_batch(&[], 4, out.path()).is_empty());
    }

    #[test]
    fn batch_output_is_independent_of_parallelism() {
        let dir = tempfile::tempdir().unwrap();
        let mut paths = Vec::new();
        for (i, preset) in ["homogeneous", "external_outlayer", "central_outlayer"].iter().enumerate() {
            let body = format!(
                r#"{{
                  "name": "p{i}",
                  "graph": {{"star": {{"kind": "closed", "n": 6}}}},
                  "game": {{"preset": "bistable", "theta": 1.0}},
                  "initial_condition": {{"preset": "{preset}"}},
                  "run": {{"t_end": 3.0}},
                  "outputs": [{{"kind": "snapshot", "path": "p{i}.csv"}}]
                }}"#
            );
            paths.push(write_scenario(dir.path(), &format!("p{i}"), &body));
        }
        let serial_dir = tempfile::tempdir().unwrap();
        let parallel_dir = tempfile::tempdir().unwrap();
        let serial = run_batch(&paths, 1, serial_dir.path());
        let parallel = run_batch(&paths, 4, parallel_dir.path());
        assert!(serial.iter().all(Result::is_ok));
        assert!(parallel.iter().all(Result::is_ok));
        for i in 0..3 {
            let a = fs::read(serial_dir.path().join(format!("p{i}.csv"))).unwrap();
            let b = fs::read(parallel_dir.path().join(format!("p{i}.csv"))).unwrap();
            assert_eq!(a, b, "snapshot {i} differs between parallelism levels");
        }
    }

    #[test]
    fn repeated_runs_are_byte_identical() {
        let mut cfg: ScenarioConfig = serde_json::from_str(&minimal_json("det")).unwrap();
        cfg.run.t_end = 5.0;
        cfg.outputs = vec![
            OutputConfig { kind: OutputKind::Snapshot, path: PathBuf::from("final.csv") },
            OutputConfig { kind: OutputKind::Timecourse, path: PathBuf::from("course.csv") },
        ];
        let first = tempfile::tempdir().unwrap();
        let second = tempfile::tempdir().unwrap();
        run_scenario(&cfg, first.path()).unwrap();
        run_scenario(&cfg, second.path()).unwrap();
        for file in ["final.csv", "course.csv"] {
            let a = fs::read(first.path().join(file)).unwrap();
            let b = fs::read(second.path().join(file)).unwrap();
            assert_eq!(a, b, "{file} differs between runs");
        }
    }
}
