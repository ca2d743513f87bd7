//! Replicator dynamics on a network: for every vertex v and strategy s,
//!
//! ```text
//! dx_vs/dt = x_vs * (p_vs - phi_v)
//! ```
//!
//! where `p_vs` is the fitness of strategy s at v against v's environment
//! and `phi_v` the expected payoff of v's own mix. The per-vertex simplex is
//! invariant: derivatives sum to zero and every face is preserved, so pure
//! profiles are exact rest points.
//!
//! Integration uses classical fixed-step fourth-order Runge-Kutta. The step
//! map multiplies each share by a factor close to 1, so the simplex is
//! preserved up to roundoff; the integrator renormalizes on a fixed cadence,
//! clamps roundoff-scale negatives, records the drift it saw beforehand, and
//! aborts if any share falls below -1e-9, which signals a step size too
//! large for the payoff scale rather than harmless drift.

use thiserror::Error;

use crate::graph::Graph;
use crate::payoff::{GameSpec, PayoffMatrix, PayoffModel, StateError, StateProfile};

/// Shares this far below zero abort the integration.
pub const INSTABILITY_FLOOR: f64 = -1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum DynamicsError {
    #[error("step size must be positive and finite, got {dt}")]
    BadStep { dt: f64 },
    #[error("end time must be positive and finite, got {t_end}")]
    BadEndTime { t_end: f64 },
    #[error("step size {dt} exceeds end time {t_end}")]
    StepExceedsEndTime { dt: f64, t_end: f64 },
    #[error("{name} must be at least 1")]
    ZeroCadence { name: &'static str },
    #[error("discrete map denominator 1 + phi*tau = {denominator} at vertex {v}; tau = {tau} is too large for this payoff scale")]
    NonPositiveDenominator { v: usize, denominator: f64, tau: f64 },
    #[error("share ({v}, {s}) = {value} fell below {INSTABILITY_FLOOR} at t = {t}; the step size is too large")]
    Instability { t: f64, v: usize, s: usize, value: f64 },
    #[error("vertex {v} shares sum to {sum} at t = {t}; integration diverged")]
    DegenerateSum { t: f64, v: usize, sum: f64 },
    #[error("steady-state window {window} exceeds the trajectory span {span}")]
    WindowExceedsSpan { window: f64, span: f64 },
    #[error("steady-state tolerance must be positive, got {eps}")]
    BadTolerance { eps: f64 },
    #[error(transparent)]
    State(#[from] StateError),
}

/// Time derivative of a state profile, one vector per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Derivative {
    pub per_vertex: Vec<Vec<f64>>,
}

impl Derivative {
    /// Largest absolute component.
    pub fn max_norm(&self) -> f64 {
        self.per_vertex
            .iter()
            .flatten()
            .fold(0.0, |acc: f64, &d| acc.max(d.abs()))
    }
}

/// Right-hand side of the network replicator equation at `x`.
pub fn replicator_rhs(g: &Graph, spec: &GameSpec, x: &StateProfile) -> Derivative {
    let n = g.n();
    let m = spec.m();
    let flat = x.to_flat();
    let mut out = vec![0.0; n * m];
    let mut env = vec![0.0; m];
    rhs_flat(g, spec, &flat, &mut out, &mut env);
    Derivative {
        per_vertex: out.chunks(m).map(<[f64]>::to_vec).collect(),
    }
}

/// Right-hand side of the classical replicator equation for one population
/// with payoff matrix `b` at state `y`.
pub fn classical_rhs(b: &PayoffMatrix, y: &[f64]) -> Vec<f64> {
    let m = b.m();
    assert!(y.len() == m, "state has {} shares but matrix has {m} strategies", y.len());
    let mut out = vec![0.0; m];
    classical_rhs_flat(b, y, &mut out);
    out
}

/// One step of the discrete-time replicator map with step `tau`:
/// `x'_vs = x_vs * (1 + p_vs * tau) / (1 + phi_v * tau)`.
///
/// The map agrees with the flow to first order in `tau`. Denominators must
/// stay positive; numerators can go negative when payoffs are negative and
/// `tau` is large, in which case the resulting state fails validation.
pub fn discrete_step(
    g: &Graph,
    spec: &GameSpec,
    x: &StateProfile,
    tau: f64,
) -> Result<StateProfile, DynamicsError> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(DynamicsError::BadStep { dt: tau });
    }
    let n = g.n();
    let m = spec.m();
    let flat = x.to_flat();
    let mut env = vec![0.0; m];
    let mut fit = vec![0.0; m];
    let mut states = Vec::with_capacity(n);
    for v in 0..n {
        let xv = &flat[v * m..(v + 1) * m];
        fitness_into(g, spec, &flat, v, &mut env, &mut fit);
        let phi = dot(xv, &fit);
        let denominator = 1.0 + phi * tau;
        if denominator <= 0.0 {
            return Err(DynamicsError::NonPositiveDenominator { v, denominator, tau });
        }
        states.push(
            xv.iter()
                .zip(&fit)
                .map(|(&share, &p)| share * (1.0 + p * tau) / denominator)
                .collect(),
        );
    }
    Ok(StateProfile::new(states)?)
}

/// Fixed-step integration controls.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegratorOptions {
    /// Runge-Kutta step size.
    pub dt: f64,
    /// Integration horizon; the trajectory always samples this time.
    pub t_end: f64,
    /// Renormalize every this many steps.
    pub renormalize_every: usize,
    /// Clamp shares in [-1e-9, 0) to zero at renormalization.
    pub clamp_negatives: bool,
    /// Store every this many steps (t = 0 and t_end are always stored).
    pub sample_every: usize,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        IntegratorOptions {
            dt: 1e-3,
            t_end: 50.0,
            renormalize_every: 100,
            clamp_negatives: true,
            sample_every: 100,
        }
    }
}

impl IntegratorOptions {
    pub fn validate(&self) -> Result<(), DynamicsError> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(DynamicsError::BadStep { dt: self.dt });
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(DynamicsError::BadEndTime { t_end: self.t_end });
        }
        if self.dt > self.t_end {
            return Err(DynamicsError::StepExceedsEndTime { dt: self.dt, t_end: self.t_end });
        }
        if self.renormalize_every == 0 {
            return Err(DynamicsError::ZeroCadence { name: "renormalize_every" });
        }
        if self.sample_every == 0 {
            return Err(DynamicsError::ZeroCadence { name: "sample_every" });
        }
        Ok(())
    }
}

/// Health record attached to each stored sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleDiagnostics {
    /// Worst per-vertex |sum - 1| seen since the previous sample, measured
    /// before any renormalization.
    pub max_simplex_residual: f64,
    /// Smallest share seen since the previous sample, before clamping.
    pub min_component: f64,
    /// Largest |dx/dt| component at the sampled state.
    pub max_derivative_norm: f64,
}

/// Sampled solution of an integration run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<StateProfile>,
    pub diagnostics: Vec<SampleDiagnostics>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn span(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0) - self.times.first().copied().unwrap_or(0.0)
    }

    pub fn final_state(&self) -> &StateProfile {
        self.states.last().expect("trajectory holds at least the initial sample")
    }
}

/// Integrates the network replicator equation from `x0`.
pub fn integrate(
    g: &Graph,
    spec: &GameSpec,
    x0: &StateProfile,
    opts: &IntegratorOptions,
) -> Result<Trajectory, DynamicsError> {
    let n = g.n();
    let m = spec.m();
    let mut env = vec![0.0; m];
    integrate_core(n, m, x0.to_flat(), opts, |x, out| {
        rhs_flat(g, spec, x, out, &mut env);
    })
}

/// Integrates the classical single-population replicator equation with the
/// same scheme as [`integrate`]. The result is a one-vertex trajectory.
pub fn integrate_classical(
    b: &PayoffMatrix,
    y0: &[f64],
    opts: &IntegratorOptions,
) -> Result<Trajectory, DynamicsError> {
    let y0 = StateProfile::new(vec![y0.to_vec()])?;
    let m = b.m();
    integrate_core(1, m, y0.to_flat(), opts, |y, out| {
        classical_rhs_flat(b, y, out);
    })
}

/// Earliest sampled time from which the dynamics stay quiet: the largest
/// |dx/dt| component is below `eps` at every sample in `[t*, t* + window]`.
/// The window must fit inside the trajectory, so qualifying times stop
/// `window` before the end.
pub fn detect_steady_state(
    g: &Graph,
    spec: &GameSpec,
    trajectory: &Trajectory,
    eps: f64,
    window: f64,
) -> Result<Option<f64>, DynamicsError> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(DynamicsError::BadTolerance { eps });
    }
    let span = trajectory.span();
    if !(window >= 0.0 && window.is_finite()) || window > span + TIME_SLACK {
        return Err(DynamicsError::WindowExceedsSpan { window, span });
    }
    let norms: Vec<f64> = trajectory
        .states
        .iter()
        .map(|x| replicator_rhs(g, spec, x).max_norm())
        .collect();
    let times = &trajectory.times;
    let t_end = *times.last().expect("trajectory holds at least the initial sample");
    // loud[k] = how many samples in 0..k move faster than eps
    let mut loud = vec![0usize; norms.len() + 1];
    for (k, &norm) in norms.iter().enumerate() {
        loud[k + 1] = loud[k] + usize::from(norm >= eps);
    }
    let mut end = 0;
    for i in 0..times.len() {
        if times[i] + window > t_end + TIME_SLACK {
            break;
        }
        // first sample covering the far edge of the window
        while times[end] < times[i] + window - TIME_SLACK {
            end += 1;
        }
        if loud[end + 1] - loud[i] == 0 {
            return Ok(Some(times[i]));
        }
    }
    Ok(None)
}

const TIME_SLACK: f64 = 1e-9;

// shared fitness route: fills `fit` with B_v * env (scaled by d_v under WS),
// or zeros when v has no out-arcs
fn fitness_into(g: &Graph, spec: &GameSpec, x: &[f64], v: usize, env: &mut [f64], fit: &mut [f64]) {
    let m = spec.m();
    let d = g.out_weight_sum(v);
    if d == 0.0 {
        fit.fill(0.0);
        return;
    }
    env.fill(0.0);
    for (w, &a) in g.row(v).iter().enumerate() {
        if a > 0.0 {
            let xw = &x[w * m..(w + 1) * m];
            for (e, &share) in env.iter_mut().zip(xw) {
                *e += a * share;
            }
        }
    }
    for e in env.iter_mut() {
        *e /= d;
    }
    let factor = match spec.model() {
        PayoffModel::WeightedAverage => 1.0,
        PayoffModel::WeightedSum => d,
    };
    let b = spec.matrix(v);
    for (s, slot) in fit.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (r, &e) in env.iter().enumerate() {
            acc += b.entry(s, r) * e;
        }
        *slot = factor * acc;
    }
}

// rhs on flat buffers; each vertex's slice of `out` doubles as its fitness
// scratch before being overwritten with the derivative
fn rhs_flat(g: &Graph, spec: &GameSpec, x: &[f64], out: &mut [f64], env: &mut [f64]) {
    let m = spec.m();
    for (v, fit) in out.chunks_mut(m).enumerate() {
        fitness_into(g, spec, x, v, env, fit);
        let xv = &x[v * m..(v + 1) * m];
        let phi = dot(xv, fit);
        for (slot, &share) in fit.iter_mut().zip(xv) {
            *slot = share * (*slot - phi);
        }
    }
}

fn classical_rhs_flat(b: &PayoffMatrix, y: &[f64], out: &mut [f64]) {
    let m = b.m();
    for s in 0..m {
        let mut acc = 0.0;
        for (r, &share) in y.iter().enumerate() {
            acc += b.entry(s, r) * share;
        }
        out[s] = acc;
    }
    let phi = dot(y, out);
    for (slot, &share) in out.iter_mut().zip(y) {
        *slot = share * (*slot - phi);
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

// fixed-step RK4 over a flat (n*m) buffer with per-vertex bookkeeping
fn integrate_core(
    n: usize,
    m: usize,
    x0: Vec<f64>,
    opts: &IntegratorOptions,
    mut rhs: impl FnMut(&[f64], &mut [f64]),
) -> Result<Trajectory, DynamicsError> {
    opts.validate()?;
    let dt = opts.dt;
    let t_end = opts.t_end;
    // land exactly on t_end: full steps of dt plus one trailing short step
    // when t_end is not a whole multiple
    let ratio = t_end / dt;
    let (full_steps, tail_step) = if (ratio - ratio.round()).abs() <= 1e-9 * ratio.max(1.0) {
        (ratio.round() as usize, None)
    } else {
        let full = ratio.floor() as usize;
        (full, Some(t_end - full as f64 * dt))
    };
    let total_steps = full_steps + tail_step.map_or(0, |_| 1);

    let size = n * m;
    let mut x = x0;
    let mut k1 = vec![0.0; size];
    let mut k2 = vec![0.0; size];
    let mut k3 = vec![0.0; size];
    let mut k4 = vec![0.0; size];
    let mut stage = vec![0.0; size];

    let mut trajectory = Trajectory {
        times: Vec::new(),
        states: Vec::new(),
        diagnostics: Vec::new(),
    };

    // window accumulators reset at every stored sample
    let mut window_residual = 0.0_f64;
    let mut window_min = f64::INFINITY;

    for xv in x.chunks(m) {
        let sum: f64 = xv.iter().sum();
        window_residual = window_residual.max((sum - 1.0).abs());
        for &share in xv {
            window_min = window_min.min(share);
        }
    }
    store_sample(
        &mut trajectory,
        0.0,
        &x,
        n,
        m,
        &mut window_residual,
        &mut window_min,
        &mut rhs,
        &mut k1,
    )?;

    for step in 1..=total_steps {
        let h = match (step == total_steps, tail_step) {
            (true, Some(tail)) => tail,
            _ => dt,
        };
        let t = if step == total_steps { t_end } else { step as f64 * dt };

        rhs(&x, &mut k1);
        for i in 0..size {
            stage[i] = x[i] + 0.5 * h * k1[i];
        }
        rhs(&stage, &mut k2);
        for i in 0..size {
            stage[i] = x[i] + 0.5 * h * k2[i];
        }
        rhs(&stage, &mut k3);
        for i in 0..size {
            stage[i] = x[i] + h * k3[i];
        }
        rhs(&stage, &mut k4);
        let sixth = h / 6.0;
        for i in 0..size {
            x[i] += sixth * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }

        // drift bookkeeping and the instability guard, before any repair
        for v in 0..n {
            let xv = &x[v * m..(v + 1) * m];
            let sum: f64 = xv.iter().sum();
            window_residual = window_residual.max((sum - 1.0).abs());
            for (s, &share) in xv.iter().enumerate() {
                window_min = window_min.min(share);
                if share < INSTABILITY_FLOOR {
                    return Err(DynamicsError::Instability { t, v, s, value: share });
                }
            }
        }

        if step % opts.sample_every == 0 || step == total_steps {
            store_sample(
                &mut trajectory,
                t,
                &x,
                n,
                m,
                &mut window_residual,
                &mut window_min,
                &mut rhs,
                &mut k1,
            )?;
        }

        if step % opts.renormalize_every == 0 {
            for v in 0..n {
                let xv = &mut x[v * m..(v + 1) * m];
                if opts.clamp_negatives {
                    for share in xv.iter_mut() {
                        // anything below the floor already aborted above
                        if *share < 0.0 {
                            *share = 0.0;
                        }
                    }
                }
                let sum: f64 = xv.iter().sum();
                if !(sum > 0.5) {
                    return Err(DynamicsError::DegenerateSum { t, v, sum });
                }
                if sum != 1.0 {
                    for share in xv.iter_mut() {
                        *share /= sum;
                    }
                }
            }
        }
    }

    Ok(trajectory)
}

// sanitizes a copy of the working state into a valid StateProfile sample and
// appends it with the diagnostics gathered since the previous sample
#[allow(clippy::too_many_arguments)]
fn store_sample(
    trajectory: &mut Trajectory,
    t: f64,
    x: &[f64],
    n: usize,
    m: usize,
    window_residual: &mut f64,
    window_min: &mut f64,
    rhs: &mut impl FnMut(&[f64], &mut [f64]),
    scratch: &mut [f64],
) -> Result<(), DynamicsError> {
    let mut states = Vec::with_capacity(n);
    for v in 0..n {
        let mut xv = x[v * m..(v + 1) * m].to_vec();
        for share in xv.iter_mut() {
            // roundoff-scale only: the instability guard ran first
            if *share < 0.0 {
                *share = 0.0;
            }
        }
        let sum: f64 = xv.iter().sum();
        if !(sum > 0.5) {
            return Err(DynamicsError::DegenerateSum { t, v, sum });
        }
        if sum != 1.0 {
            for share in xv.iter_mut() {
                *share /= sum;
            }
        }
        states.push(xv);
    }
    let sample = StateProfile::new(states)?;
    let flat = sample.to_flat();
    rhs(&flat, scratch);
    let max_derivative_norm = scratch.iter().fold(0.0_f64, |acc, &d| acc.max(d.abs()));
    trajectory.times.push(t);
    trajectory.states.push(sample);
    trajectory.diagnostics.push(SampleDiagnostics {
        max_simplex_residual: *window_residual,
        min_component: *window_min,
        max_derivative_norm,
    });
    *window_residual = 0.0;
    *window_min = f64::INFINITY;
    Ok(())
}
