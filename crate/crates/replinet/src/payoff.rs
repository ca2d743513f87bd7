//! Payoffs of the network game: each vertex plays an M-strategy matrix game
//! against the weighted blend of its out-neighbors' states.
//!
//! The blend is the environment vector: for vertex v with out-weight sum
//! d_v > 0 it is (1/d_v) * sum_w a_vw * x_w, a point of the strategy simplex.
//! Under the weighted-average model (WA) the fitness of strategy s at v is
//! (B_v * env)_s; the weighted-sum model (WS) drops the 1/d_v normalization,
//! which is the same as playing WA with matrices d_v * B_v. A vertex with no
//! out-arcs has no opponents: its fitnesses and expected payoff are all zero
//! by convention, freezing its dynamics.

use thiserror::Error;

use crate::graph::Graph;

/// How neighbor payoffs aggregate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PayoffModel {
    /// Weighted average: payoffs are normalized by the out-weight sum.
    WeightedAverage,
    /// Weighted sum: raw accumulation over out-arcs.
    WeightedSum,
}

#[derive(Debug, Error, PartialEq)]
pub enum PayoffError {
    #[error("payoff matrix must be square with at least 2 strategies, got {rows} rows and row {row} of length {len}")]
    RaggedMatrix { rows: usize, row: usize, len: usize },
    #[error("payoff matrix entry ({s}, {r}) is not finite")]
    NonFiniteEntry { s: usize, r: usize },
    #[error("game needs one matrix per vertex: got {matrices} matrices for {vertices} vertices")]
    MatrixCountMismatch { matrices: usize, vertices: usize },
    #[error("matrices disagree on strategy count: matrix {index} has {m}, expected {expected}")]
    StrategyCountMismatch { index: usize, m: usize, expected: usize },
    #[error("profile has {len} strategies for {n} vertices")]
    ProfileLengthMismatch { len: usize, n: usize },
    #[error("strategy {s} out of range for {m} strategies (vertex {v})")]
    StrategyOutOfRange { v: usize, s: usize, m: usize },
    #[error("enumeration needs {needed} profiles, exceeding the cap of {cap}")]
    CapExceeded { needed: u128, cap: usize },
}

#[derive(Debug, Error, PartialEq)]
pub enum StateError {
    #[error("state profile must have at least one vertex")]
    Empty,
    #[error("vertex {v} has {len} strategy shares, expected {m}")]
    LengthMismatch { v: usize, len: usize, m: usize },
    #[error("vertex {v} strategy {s} has negative share {value}")]
    NegativeShare { v: usize, s: usize, value: f64 },
    #[error("vertex {v} strategy {s} has non-finite share")]
    NonFiniteShare { v: usize, s: usize },
    #[error("vertex {v} shares sum to {sum}, further than {tol} from 1")]
    SumOutOfTolerance { v: usize, sum: f64, tol: f64 },
}

/// Square payoff matrix. Entry `(s, r)` is the payoff for playing `s`
/// against an opponent playing `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffMatrix {
    m: usize,
    // row-major m*m
    entries: Vec<f64>,
}

impl PayoffMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, PayoffError> {
        let m = rows.len();
        if m < 2 {
            return Err(PayoffError::RaggedMatrix { rows: m, row: 0, len: rows.first().map_or(0, Vec::len) });
        }
        let mut entries = Vec::with_capacity(m * m);
        for (s, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(PayoffError::RaggedMatrix { rows: m, row: s, len: row.len() });
            }
            for (r, &value) in row.iter().enumerate() {
                if !value.is_finite() {
                    return Err(PayoffError::NonFiniteEntry { s, r });
                }
                entries.push(value);
            }
        }
        Ok(PayoffMatrix { m, entries })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn entry(&self, s: usize, r: usize) -> f64 {
        assert!(s < self.m && r < self.m, "strategy pair ({s}, {r}) out of range");
        self.entries[s * self.m + r]
    }

    fn row(&self, s: usize) -> &[f64] {
        &self.entries[s * self.m..(s + 1) * self.m]
    }

    /// Entrywise `factor * B`.
    pub fn scaled(&self, factor: f64) -> PayoffMatrix {
        PayoffMatrix {
            m: self.m,
            entries: self.entries.iter().map(|e| factor * e).collect(),
        }
    }

    /// Entrywise `B + c`.
    pub fn shifted(&self, c: f64) -> PayoffMatrix {
        PayoffMatrix {
            m: self.m,
            entries: self.entries.iter().map(|e| e + c).collect(),
        }
    }
}

/// One payoff matrix per vertex plus the aggregation model.
#[derive(Debug, Clone, PartialEq)]
pub struct GameSpec {
    matrices: Vec<PayoffMatrix>,
    model: PayoffModel,
    m: usize,
}

impl GameSpec {
    pub fn new(matrices: Vec<PayoffMatrix>, model: PayoffModel) -> Result<Self, PayoffError> {
        let m = match matrices.first() {
            Some(first) => first.m(),
            None => return Err(PayoffError::MatrixCountMismatch { matrices: 0, vertices: 1 }),
        };
        for (index, matrix) in matrices.iter().enumerate() {
            if matrix.m() != m {
                return Err(PayoffError::StrategyCountMismatch { index, m: matrix.m(), expected: m });
            }
        }
        Ok(GameSpec { matrices, model, m })
    }

    /// Every vertex plays the same matrix.
    pub fn uniform(n: usize, matrix: PayoffMatrix, model: PayoffModel) -> Self {
        GameSpec {
            m: matrix.m(),
            matrices: vec![matrix; n.max(1)],
            model,
        }
    }

    pub fn n(&self) -> usize {
        self.matrices.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn model(&self) -> PayoffModel {
        self.model
    }

    pub fn matrix(&self, v: usize) -> &PayoffMatrix {
        &self.matrices[v]
    }

    fn check_graph(&self, g: &Graph) {
        assert!(
            g.n() == self.n(),
            "game has {} matrices but graph has {} vertices",
            self.n(),
            g.n()
        );
    }
}

/// One pure strategy per vertex, 0-indexed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PureProfile(pub Vec<usize>);

impl PureProfile {
    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn strategy(&self, v: usize) -> usize {
        self.0[v]
    }

    /// Rank in the lexicographic order of all m^n profiles, vertex 0 most
    /// significant.
    pub fn lex_rank(&self, m: usize) -> usize {
        self.0.iter().fold(0, |acc, &s| acc * m + s)
    }

    /// Inverse of [`lex_rank`](Self::lex_rank).
    pub fn from_lex_rank(mut rank: usize, n: usize, m: usize) -> Self {
        let mut strategies = vec![0; n];
        for v in (0..n).rev() {
            strategies[v] = rank % m;
            rank /= m;
        }
        PureProfile(strategies)
    }

    fn validate(&self, n: usize, m: usize) -> Result<(), PayoffError> {
        if self.n() != n {
            return Err(PayoffError::ProfileLengthMismatch { len: self.n(), n });
        }
        for (v, &s) in self.0.iter().enumerate() {
            if s >= m {
                return Err(PayoffError::StrategyOutOfRange { v, s, m });
            }
        }
        Ok(())
    }
}

/// Tolerance band for renormalizing a state vector sum at construction.
pub const STATE_SUM_TOL: f64 = 1e-9;

/// One mixed strategy per vertex; every vector lies on the simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct StateProfile {
    states: Vec<Vec<f64>>,
    m: usize,
}

impl StateProfile {
    /// Validates and adopts per-vertex state vectors. Components must be
    /// non-negative and each vector must sum to 1 within `1e-9`; sums inside
    /// that band are renormalized to exactly 1, anything further out is
    /// rejected rather than silently fixed.
    pub fn new(states: Vec<Vec<f64>>) -> Result<Self, StateError> {
        let m = match states.first() {
            Some(first) => first.len(),
            None => return Err(StateError::Empty),
        };
        if m == 0 {
            return Err(StateError::LengthMismatch { v: 0, len: 0, m: 1 });
        }
        let mut states = states;
        for (v, state) in states.iter_mut().enumerate() {
            if state.len() != m {
                return Err(StateError::LengthMismatch { v, len: state.len(), m });
            }
            let mut sum = 0.0;
            for (s, &share) in state.iter().enumerate() {
                if !share.is_finite() {
                    return Err(StateError::NonFiniteShare { v, s });
                }
                if share < 0.0 {
                    return Err(StateError::NegativeShare { v, s, value: share });
                }
                sum += share;
            }
            if (sum - 1.0).abs() > STATE_SUM_TOL {
                return Err(StateError::SumOutOfTolerance { v, sum, tol: STATE_SUM_TOL });
            }
            if sum != 1.0 {
                for share in state.iter_mut() {
                    *share /= sum;
                }
            }
        }
        Ok(StateProfile { states, m })
    }

    /// The profile of strategy versors for a pure profile.
    pub fn pure(profile: &PureProfile, m: usize) -> Self {
        let states = profile
            .0
            .iter()
            .map(|&s| {
                assert!(s < m, "strategy {s} out of range for {m} strategies");
                let mut e = vec![0.0; m];
                e[s] = 1.0;
                e
            })
            .collect();
        StateProfile { states, m }
    }

    /// Every vertex in the same state.
    pub fn homogeneous(n: usize, state: Vec<f64>) -> Result<Self, StateError> {
        StateProfile::new(vec![state; n.max(1)])
    }

    pub fn n(&self) -> usize {
        self.states.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn vertex(&self, v: usize) -> &[f64] {
        &self.states[v]
    }

    pub fn states(&self) -> &[Vec<f64>] {
        &self.states
    }

    /// Flattens to one buffer, vertex-major.
    pub fn to_flat(&self) -> Vec<f64> {
        self.states.iter().flatten().copied().collect()
    }

    fn check_shape(&self, g: &Graph, spec: &GameSpec) {
        assert!(
            self.n() == g.n(),
            "state has {} vertices but graph has {}",
            self.n(),
            g.n()
        );
        assert!(
            self.m() == spec.m(),
            "state has {} strategies but game has {}",
            self.m(),
            spec.m()
        );
    }
}

/// Weighted blend of the out-neighbors' states of `v`, a simplex point.
/// `None` when `v` has no out-arcs.
pub fn environment_vector(g: &Graph, x: &StateProfile, v: usize) -> Option<Vec<f64>> {
    assert!(x.n() == g.n(), "state has {} vertices but graph has {}", x.n(), g.n());
    let d = g.out_weight_sum(v);
    if d == 0.0 {
        return None;
    }
    let mut env = vec![0.0; x.m()];
    for (w, &a) in g.row(v).iter().enumerate() {
        if a > 0.0 {
            for (e, &share) in env.iter_mut().zip(x.vertex(w)) {
                *e += a * share;
            }
        }
    }
    for e in env.iter_mut() {
        *e /= d;
    }
    Some(env)
}

/// Fitness of every strategy at `v` against the environment: `B_v * env`
/// under WA, scaled by `d_v` under WS. `None` when `v` has no out-arcs.
pub fn fitness_vector(g: &Graph, spec: &GameSpec, x: &StateProfile, v: usize) -> Option<Vec<f64>> {
    spec.check_graph(g);
    x.check_shape(g, spec);
    let env = environment_vector(g, x, v)?;
    let factor = match spec.model() {
        PayoffModel::WeightedAverage => 1.0,
        PayoffModel::WeightedSum => g.out_weight_sum(v),
    };
    let b = spec.matrix(v);
    let fitness = (0..spec.m())
        .map(|s| factor * dot(b.row(s), &env))
        .collect();
    Some(fitness)
}

/// Fitness of strategy `s` at vertex `v`; zero when `v` has no out-arcs.
pub fn strategy_fitness(g: &Graph, spec: &GameSpec, x: &StateProfile, v: usize, s: usize) -> f64 {
    assert!(s < spec.m(), "strategy {s} out of range for {} strategies", spec.m());
    match fitness_vector(g, spec, x, v) {
        Some(fitness) => fitness[s],
        None => 0.0,
    }
}

/// Expected payoff of `v`: its state contracted with the fitness vector.
/// Zero when `v` has no out-arcs.
pub fn expected_payoff(g: &Graph, spec: &GameSpec, x: &StateProfile, v: usize) -> f64 {
    match fitness_vector(g, spec, x, v) {
        Some(fitness) => dot(x.vertex(v), &fitness),
        None => 0.0,
    }
}

/// Payoff of `v` when every vertex plays a pure strategy. Computed by direct
/// summation over out-arcs, not through the environment vector.
pub fn pure_payoff(g: &Graph, spec: &GameSpec, profile: &PureProfile, v: usize) -> Result<f64, PayoffError> {
    spec.check_graph(g);
    profile.validate(g.n(), spec.m())?;
    let b = spec.matrix(v);
    let s_v = profile.strategy(v);
    let mut sum = 0.0;
    for (w, &a) in g.row(v).iter().enumerate() {
        if a > 0.0 {
            sum += a * b.entry(s_v, profile.strategy(w));
        }
    }
    match spec.model() {
        PayoffModel::WeightedSum => Ok(sum),
        PayoffModel::WeightedAverage => {
            let d = g.out_weight_sum(v);
            if d == 0.0 {
                Ok(0.0)
            } else {
                Ok(sum / d)
            }
        }
    }
}

/// Default cap on the number of enumerated profiles.
pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;

/// Payoffs of every vertex at every pure profile, stored in lexicographic
/// profile order.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffTensor {
    n: usize,
    m: usize,
    // per vertex, m^n entries in lex profile order
    values: Vec<Vec<f64>>,
}

impl PayoffTensor {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of profiles, m^n.
    pub fn profiles(&self) -> usize {
        self.values[0].len()
    }

    pub fn payoff(&self, v: usize, profile: &PureProfile) -> f64 {
        self.values[v][profile.lex_rank(self.m)]
    }

    pub fn payoff_at_rank(&self, v: usize, rank: usize) -> f64 {
        self.values[v][rank]
    }

    /// Iterates `(profile, payoffs-by-vertex)` in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (PureProfile, Vec<f64>)> + '_ {
        (0..self.profiles()).map(|rank| {
            let profile = PureProfile::from_lex_rank(rank, self.n, self.m);
            let payoffs = (0..self.n).map(|v| self.values[v][rank]).collect();
            (profile, payoffs)
        })
    }
}

/// Checks that m^n stays within `cap` and returns it.
pub(crate) fn profile_count(n: usize, m: usize, cap: usize) -> Result<usize, PayoffError> {
    let needed = (m as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if needed > cap as u128 {
        return Err(PayoffError::CapExceeded { needed, cap });
    }
    Ok(needed as usize)
}

/// Enumerates the full payoff tensor with the default profile cap.
pub fn payoff_tensor(g: &Graph, spec: &GameSpec) -> Result<PayoffTensor, PayoffError> {
    payoff_tensor_with_cap(g, spec, DEFAULT_ENUMERATION_CAP)
}

/// Enumerates the full payoff tensor, refusing to build more than `cap`
/// profiles.
pub fn payoff_tensor_with_cap(g: &Graph, spec: &GameSpec, cap: usize) -> Result<PayoffTensor, PayoffError> {
    spec.check_graph(g);
    let n = g.n();
    let m = spec.m();
    let count = profile_count(n, m, cap)?;
    let mut values = vec![vec![0.0; count]; n];
    for rank in 0..count {
        let profile = PureProfile::from_lex_rank(rank, n, m);
        for (v, column) in values.iter_mut().enumerate() {
            column[rank] = pure_payoff(g, spec, &profile, v)?;
        }
    }
    Ok(PayoffTensor { n, m, values })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
