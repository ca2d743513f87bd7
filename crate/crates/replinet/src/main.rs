use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use replinet::{
    emit_equilibria, emit_tensor, enumerate_pure_nash, parse_scenario, payoff_tensor, run_batch,
    run_scenario, ErrorCategory, GameConfig, GamePreset, GraphConfig, RunResult, ScenarioConfig,
    ScenarioError, StarKindConfig,
};

/// Replicator dynamics on finite weighted networks.
#[derive(Parser)]
#[command(name = "replinet", version, about)]
struct Cli {
    /// Directory for output artifacts; defaults to $REPLINET_OUT_DIR, then
    /// the current directory.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunOverrides {
    /// Override the integrator step size from the config.
    #[arg(long, value_name = "DT")]
    dt: Option<f64>,
    /// Override the integration horizon from the config.
    #[arg(long, value_name = "T")]
    t_end: Option<f64>,
    /// Override the steady-state detection threshold from the config.
    #[arg(long, value_name = "EPS")]
    eps: Option<f64>,
}

impl RunOverrides {
    fn apply(&self, cfg: &mut ScenarioConfig) {
        if let Some(dt) = self.dt {
            cfg.run.dt = dt;
        }
        if let Some(t_end) = self.t_end {
            cfg.run.t_end = t_end;
        }
        if let Some(eps) = self.eps {
            cfg.run.steady_eps = eps;
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario file and write its outputs.
    Simulate {
        config: PathBuf,
        #[command(flatten)]
        overrides: RunOverrides,
    },
    /// Run every *.json scenario in a directory, in filename order.
    Batch {
        dir: PathBuf,
        /// Worker threads; defaults to the available parallelism.
        #[arg(long, value_name = "N")]
        jobs: Option<usize>,
    },
    /// Write the payoff tensor of a scenario's graph and game.
    Tensor { config: PathBuf },
    /// Enumerate pure Nash equilibria of the induced game.
    Equilibria { config: PathBuf },
    /// Inspect scenario files.
    Scenarios {
        #[command(subcommand)]
        action: ScenariosAction,
    },
}

#[derive(Subcommand)]
enum ScenariosAction {
    /// Summarize every *.json scenario in a directory.
    List {
        #[arg(default_value = "scenarios")]
        dir: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out_dir = cli
        .out
        .or_else(|| std::env::var_os("REPLINET_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    match dispatch(cli.command, &out_dir) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(e.category()))
        }
    }
}

fn exit_code(category: ErrorCategory) -> u8 {
    match category {
        ErrorCategory::Parse => 2,
        ErrorCategory::Validation => 3,
        ErrorCategory::Integration => 4,
        ErrorCategory::Io => 5,
    }
}

fn dispatch(command: Command, out_dir: &Path) -> Result<(), ScenarioError> {
    match command {
        Command::Simulate { config, overrides } => {
            let mut cfg = parse_scenario(&config)?;
            overrides.apply(&mut cfg);
            let result = run_scenario(&cfg, out_dir)?;
            report_run(&cfg, &result);
            Ok(())
        }
        Command::Batch { dir, jobs } => batch(&dir, jobs, out_dir),
        Command::Tensor { config } => {
            let cfg = parse_scenario(&config)?;
            let (g, spec) = build_game(&cfg)?;
            let tensor = payoff_tensor(&g, &spec).map_err(|e| game_error(&cfg.name, e))?;
            let path = out_dir.join(format!("{}_tensor.csv", cfg.name));
            emit_tensor(&path, &tensor).map_err(|e| io_error(&path, e))?;
            println!(
                "wrote {} ({} profiles, {} vertices)",
                path.display(),
                tensor.profiles(),
                tensor.n()
            );
            Ok(())
        }
        Command::Equilibria { config } => {
            let cfg = parse_scenario(&config)?;
            let (g, spec) = build_game(&cfg)?;
            let report = enumerate_pure_nash(&g, &spec).map_err(|e| game_error(&cfg.name, e))?;
            let path = out_dir.join(format!("{}_equilibria.csv", cfg.name));
            emit_equilibria(&path, &report, g.n()).map_err(|e| io_error(&path, e))?;
            println!(
                "{} pure Nash equilibria among {} profiles",
                report.pure_nash.len(),
                report.checked_profiles
            );
            for eq in &report.pure_nash {
                let labels: Vec<String> =
                    eq.profile.0.iter().map(|s| (s + 1).to_string()).collect();
                let kind = if eq.strict { "strict" } else { "non-strict" };
                println!("  ({}) {}", labels.join(", "), kind);
            }
            println!("wrote {}", path.display());
            Ok(())
        }
        Command::Scenarios { action: ScenariosAction::List { dir } } => list_scenarios(&dir),
    }
}

fn build_game(cfg: &ScenarioConfig) -> Result<(replinet::Graph, replinet::GameSpec), ScenarioError> {
    let g = cfg.graph.build()?;
    let spec = cfg.game.build(g.n())?;
    Ok((g, spec))
}

fn game_error(scenario: &str, e: replinet::PayoffError) -> ScenarioError {
    ScenarioError::Validation { context: format!("scenario {scenario}"), message: e.to_string() }
}

fn io_error(path: &Path, source: std::io::Error) -> ScenarioError {
    ScenarioError::Io { path: path.display().to_string(), source }
}

fn report_run(cfg: &ScenarioConfig, result: &RunResult) {
    match result.steady_time {
        Some(t) => println!(
            "{}: steady within {:.0e} from t = {t:.1}",
            result.scenario_id, cfg.run.steady_eps
        ),
        None => println!(
            "{}: no steady state at eps {:.0e} by t = {}",
            result.scenario_id, cfg.run.steady_eps, cfg.run.t_end
        ),
    }
    for v in 0..result.final_state.n() {
        let comps: Vec<String> =
            result.final_state.vertex(v).iter().map(|x| format!("{x:.6}")).collect();
        println!("  vertex {}: [{}]", v + 1, comps.join(", "));
    }
    for path in &result.written {
        println!("  wrote {}", path.display());
    }
}

fn scenario_paths(dir: &Path) -> Result<Vec<PathBuf>, ScenarioError> {
    let entries = std::fs::read_dir(dir).map_err(|e| io_error(dir, e))?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| io_error(dir, e))?.path();
        if path.extension().is_some_and(|ext| ext == "json") {
            paths.push(path);
        }
    }
    paths.sort();
    Ok(paths)
}

fn batch(dir: &Path, jobs: Option<usize>, out_dir: &Path) -> Result<(), ScenarioError> {
    let paths = scenario_paths(dir)?;
    let jobs = jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .max(1);
    let results = run_batch(&paths, jobs, out_dir);
    let mut first_failure = None;
    let mut ok = 0;
    for (path, outcome) in paths.iter().zip(results) {
        match outcome {
            Ok(result) => {
                ok += 1;
                match result.steady_time {
                    Some(t) => println!(
                        "ok  {} ({} files, steady from t = {t:.1})",
                        result.scenario_id,
                        result.written.len()
                    ),
                    None => println!(
                        "ok  {} ({} files, no steady state)",
                        result.scenario_id,
                        result.written.len()
                    ),
                }
            }
            Err(e) => {
                eprintln!("err {}: {e}", path.display());
                first_failure.get_or_insert(e);
            }
        }
    }
    println!("{ok}/{} scenarios succeeded", paths.len());
    match first_failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn list_scenarios(dir: &Path) -> Result<(), ScenarioError> {
    let paths = scenario_paths(dir)?;
    for path in &paths {
        match parse_scenario(path) {
            Ok(cfg) => println!(
                "{:<28} {:<22} {:<18} {:<18} t_end={:<6} outputs={}",
                cfg.name,
                graph_summary(&cfg.graph),
                game_summary(&cfg.game),
                ic_summary(&cfg),
                cfg.run.t_end,
                cfg.outputs.len()
            ),
            Err(e) => eprintln!("{}: {e}", path.display()),
        }
    }
    Ok(())
}

fn graph_summary(graph: &GraphConfig) -> String {
    match graph {
        GraphConfig::Star(star) => {
            let kind = match star.kind {
                StarKindConfig::Open => "open star",
                StarKindConfig::Closed => "closed star",
                StarKindConfig::Weighted => "weighted star",
            };
            format!("{kind} n={}", star.n)
        }
        GraphConfig::Edges(edges) => format!("digraph n={} ({} arcs)", edges.n, edges.arcs.len()),
    }
}

fn game_summary(game: &GameConfig) -> String {
    let base = match (game.preset, game.theta) {
        (Some(GamePreset::Bistable), Some(theta)) => format!("bistable({theta})"),
        (Some(GamePreset::Prisoner), Some(theta)) => format!("prisoner({theta})"),
        (Some(GamePreset::Coexistence), _) => "coexistence".to_string(),
        (Some(_), None) => "preset".to_string(),
        (None, _) if game.matrices.is_some() => "per-vertex matrices".to_string(),
        (None, _) => "custom matrix".to_string(),
    };
    match game.model {
        replinet::ModelConfig::WeightedAverage => base,
        replinet::ModelConfig::WeightedSum => format!("{base} ws"),
    }
}

fn ic_summary(cfg: &ScenarioConfig) -> String {
    match cfg.initial_condition.preset {
        Some(preset) => format!("{preset:?}")
            .chars()
            .flat_map(|c| {
                if c.is_uppercase() { vec!['_', c.to_ascii_lowercase()] } else { vec![c] }
            })
            .skip(1)
            .collect(),
        None => "explicit vectors".to_string(),
    }
}
