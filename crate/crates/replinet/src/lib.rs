//! Replicator dynamics for evolutionary games on finite weighted networks.

pub mod csv;
pub mod dynamics;
pub mod equilibria;
pub mod graph;
pub mod payoff;
pub mod scenario;

pub use csv::{
    emit_average, emit_equilibria, emit_snapshot, emit_tensor, emit_timecourse, fmt_f64,
};
pub use dynamics::{
    classical_rhs, detect_steady_state, discrete_step, integrate, integrate_classical,
    replicator_rhs, Derivative, DynamicsError, IntegratorOptions, SampleDiagnostics, Trajectory,
};
pub use equilibria::{
    best_response_violation, enumerate_pure_nash, enumerate_pure_nash_with_cap, is_rest_point,
    mixed_nash_2x2, EquilibriumReport, MixedNash2x2, NashProfile, RestPointCheck, NASH_TOL,
};
pub use graph::{build_star, Graph, GraphError, NeighborhoodReport, StarKind};
pub use payoff::{
    environment_vector, expected_payoff, fitness_vector, payoff_tensor, payoff_tensor_with_cap,
    pure_payoff, strategy_fitness, GameSpec, PayoffError, PayoffMatrix, PayoffModel, PayoffTensor,
    PureProfile, StateError, StateProfile,
};
pub use scenario::{
    initial_condition, parse_scenario, run_batch, run_scenario, EdgeListConfig, ErrorCategory,
    GameConfig, GamePreset, GraphConfig, IcPreset, InitialConditionConfig, ModelConfig,
    OutputConfig, OutputKind, RunConfig, RunResult, ScenarioConfig, ScenarioError, StarConfig,
    StarKindConfig,
};
