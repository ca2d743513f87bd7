//! Equilibrium analysis of the induced N-player game.
//!
//! A pure profile is a Nash equilibrium when no vertex can raise its own
//! payoff by switching strategy unilaterally, everyone else held fixed.
//! Comparisons carry a small tolerance so payoff ties register as
//! equilibria; a profile is flagged strict only when every deviation loses
//! strictly. Every Nash profile, pure or mixed, is a rest point of the
//! replicator field, which [`is_rest_point`] checks directly.

use crate::dynamics::replicator_rhs;
use crate::graph::Graph;
use crate::payoff::{
    payoff_tensor_with_cap, GameSpec, PayoffError, PayoffMatrix, PureProfile, StateProfile,
    DEFAULT_ENUMERATION_CAP,
};

/// Payoff ties within this tolerance count as indifference.
pub const NASH_TOL: f64 = 1e-12;

/// One pure Nash equilibrium with its margin.
#[derive(Debug, Clone, PartialEq)]
pub struct NashProfile {
    pub profile: PureProfile,
    /// Largest payoff change any vertex can gain by deviating; at most
    /// [`NASH_TOL`] for a listed profile, strictly negative for a strict one.
    pub worst_deviation_gain: f64,
    pub strict: bool,
}

/// Outcome of exhaustive pure-profile enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumReport {
    /// Nash profiles in lexicographic order.
    pub pure_nash: Vec<NashProfile>,
    /// Number of profiles examined, m^n.
    pub checked_profiles: usize,
}

/// Enumerates all pure Nash equilibria with the default profile cap.
pub fn enumerate_pure_nash(g: &Graph, spec: &GameSpec) -> Result<EquilibriumReport, PayoffError> {
    enumerate_pure_nash_with_cap(g, spec, DEFAULT_ENUMERATION_CAP)
}

/// Enumerates all pure Nash equilibria, refusing to scan more than `cap`
/// profiles.
pub fn enumerate_pure_nash_with_cap(
    g: &Graph,
    spec: &GameSpec,
    cap: usize,
) -> Result<EquilibriumReport, PayoffError> {
    let tensor = payoff_tensor_with_cap(g, spec, cap)?;
    let n = g.n();
    let m = spec.m();
    let count = tensor.profiles();
    let mut pure_nash = Vec::new();
    for rank in 0..count {
        let profile = PureProfile::from_lex_rank(rank, n, m);
        let mut worst = f64::NEG_INFINITY;
        // deviations of vertex v shift the rank by (s' - s_v) * m^(n-1-v)
        let mut stride = count / m;
        for v in 0..n {
            let own = tensor.payoff_at_rank(v, rank);
            let s_v = profile.strategy(v);
            let base = rank - s_v * stride;
            for s in 0..m {
                if s != s_v {
                    let gain = tensor.payoff_at_rank(v, base + s * stride) - own;
                    if gain > worst {
                        worst = gain;
                    }
                }
            }
            stride /= m;
        }
        if worst <= NASH_TOL {
            pure_nash.push(NashProfile {
                profile,
                worst_deviation_gain: worst,
                strict: worst < -NASH_TOL,
            });
        }
    }
    Ok(EquilibriumReport { pure_nash, checked_profiles: count })
}

/// Interior indifference point of a 2x2 matrix game.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MixedNash2x2 {
    /// Both strategies earn the same against this mix, which is strictly
    /// inside the simplex.
    Interior([f64; 2]),
    /// The indifference point exists but falls on or outside the boundary.
    NoInterior,
    /// The payoff differences cancel; every mix is indifferent.
    Degenerate,
}

impl MixedNash2x2 {
    pub fn point(&self) -> Option<[f64; 2]> {
        match self {
            MixedNash2x2::Interior(p) => Some(*p),
            _ => None,
        }
    }
}

/// Solves for the mixed equilibrium of a 2x2 game: the opponent mix that
/// makes both strategies earn alike. Requires a 2x2 matrix.
pub fn mixed_nash_2x2(b: &PayoffMatrix) -> MixedNash2x2 {
    assert!(b.m() == 2, "mixed_nash_2x2 needs a 2x2 matrix, got {}x{}", b.m(), b.m());
    let denominator = b.entry(0, 0) - b.entry(0, 1) - b.entry(1, 0) + b.entry(1, 1);
    if denominator.abs() < 1e-12 {
        return MixedNash2x2::Degenerate;
    }
    let p = (b.entry(1, 1) - b.entry(0, 1)) / denominator;
    if p > 0.0 && p < 1.0 {
        MixedNash2x2::Interior([p, 1.0 - p])
    } else {
        MixedNash2x2::NoInterior
    }
}

/// Rest-point verdict with the measured residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RestPointCheck {
    /// Largest |dx/dt| component at the state.
    pub residual: f64,
    pub is_rest: bool,
}

/// Checks whether `x` is a rest point of the replicator field within `tol`.
pub fn is_rest_point(g: &Graph, spec: &GameSpec, x: &StateProfile, tol: f64) -> RestPointCheck {
    let residual = replicator_rhs(g, spec, x).max_norm();
    RestPointCheck { residual, is_rest: residual <= tol }
}

/// How much vertex `v` could gain by switching to its best reply:
/// `max_s p_vs - phi_v`. Non-positive at equilibrium, zero wherever the
/// vertex already plays only best replies.
pub fn best_response_violation(g: &Graph, spec: &GameSpec, x: &StateProfile, v: usize) -> f64 {
    match crate::payoff::fitness_vector(g, spec, x, v) {
        Some(fitness) => {
            let best = fitness.iter().fold(f64::NEG_INFINITY, |acc, &p| acc.max(p));
            let phi: f64 = x
                .vertex(v)
                .iter()
                .zip(&fitness)
                .map(|(&share, &p)| share * p)
                .sum();
            best - phi
        }
        None => 0.0,
    }
}
