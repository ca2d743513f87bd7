//! CSV artifact writers.
//!
//! All numeric fields are printed with 12 significant digits in scientific
//! notation so artifacts are stable across runs and platforms. Vertex and
//! strategy labels are 1-indexed in files, matching the usual presentation
//! of small games, while the API stays 0-indexed.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use crate::dynamics::Trajectory;
use crate::equilibria::EquilibriumReport;
use crate::payoff::{PayoffTensor, StateProfile};

/// Formats one number with 12 significant digits, normalizing `-0`.
pub fn fmt_f64(value: f64) -> String {
    let v = if value == 0.0 { 0.0 } else { value };
    format!("{v:.11e}")
}

fn write_file(path: &Path, contents: &str) -> io::Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::write(path, contents)
}

/// Writes `t,vertex,strategy,x`: every sampled time, every vertex, every
/// strategy share, in that nesting order.
pub fn emit_timecourse(path: &Path, trajectory: &Trajectory) -> io::Result<()> {
    let mut out = String::from("t,vertex,strategy,x\n");
    for (i, state) in trajectory.states.iter().enumerate() {
        let t = trajectory.times[i];
        for v in 0..state.n() {
            for (s, &share) in state.vertex(v).iter().enumerate() {
                let _ = writeln!(out, "{},{},{},{}", fmt_f64(t), v + 1, s + 1, fmt_f64(share));
            }
        }
    }
    write_file(path, &out)
}

/// Writes `vertex,x1,..,xM`: one row per vertex for a single state.
pub fn emit_snapshot(path: &Path, state: &StateProfile) -> io::Result<()> {
    let mut out = String::from("vertex");
    for s in 0..state.m() {
        let _ = write!(out, ",x{}", s + 1);
    }
    out.push('\n');
    for v in 0..state.n() {
        let _ = write!(out, "{}", v + 1);
        for &share in state.vertex(v) {
            let _ = write!(out, ",{}", fmt_f64(share));
        }
        out.push('\n');
    }
    write_file(path, &out)
}

/// Writes `t,mean_x1,..,mean_xM`: the vertex-average state at every sample.
pub fn emit_average(path: &Path, trajectory: &Trajectory) -> io::Result<()> {
    let m = trajectory.states.first().map_or(0, |s| s.m());
    let mut out = String::from("t");
    for s in 0..m {
        let _ = write!(out, ",mean_x{}", s + 1);
    }
    out.push('\n');
    for (i, state) in trajectory.states.iter().enumerate() {
        let n = state.n();
        let mut means = vec![0.0; m];
        for v in 0..n {
            for (s, &share) in state.vertex(v).iter().enumerate() {
                means[s] += share;
            }
        }
        let _ = write!(out, "{}", fmt_f64(trajectory.times[i]));
        for mean in means {
            let _ = write!(out, ",{}", fmt_f64(mean / n as f64));
        }
        out.push('\n');
    }
    write_file(path, &out)
}

/// Writes `s_1,..,s_N,pi_1,..,pi_N`: every pure profile in lexicographic
/// order with each vertex's payoff. Strategies are 1-indexed.
pub fn emit_tensor(path: &Path, tensor: &PayoffTensor) -> io::Result<()> {
    let n = tensor.n();
    let mut out = String::new();
    for v in 0..n {
        let _ = write!(out, "{}s_{}", if v == 0 { "" } else { "," }, v + 1);
    }
    for v in 0..n {
        let _ = write!(out, ",pi_{}", v + 1);
    }
    out.push('\n');
    for (profile, payoffs) in tensor.iter() {
        for (v, &s) in profile.0.iter().enumerate() {
            let _ = write!(out, "{}{}", if v == 0 { "" } else { "," }, s + 1);
        }
        for payoff in payoffs {
            let _ = write!(out, ",{}", fmt_f64(payoff));
        }
        out.push('\n');
    }
    write_file(path, &out)
}

/// Writes `s_1,..,s_N,strict`: the pure Nash profiles with their
/// strictness flag.
pub fn emit_equilibria(path: &Path, report: &EquilibriumReport, n: usize) -> io::Result<()> {
    let mut out = String::new();
    for v in 0..n {
        let _ = write!(out, "{}s_{}", if v == 0 { "" } else { "," }, v + 1);
    }
    out.push_str(",strict\n");
    for entry in &report.pure_nash {
        for (v, &s) in entry.profile.0.iter().enumerate() {
            let _ = write!(out, "{}{}", if v == 0 { "" } else { "," }, s + 1);
        }
        let _ = writeln!(out, ",{}", entry.strict);
    }
    write_file(path, &out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{integrate, IntegratorOptions};
    use crate::equilibria::enumerate_pure_nash;
    use crate::graph::Graph;
    use crate::payoff::{payoff_tensor, GameSpec, PayoffMatrix, PayoffModel};

    fn tiny_setup() -> (Graph, GameSpec) {
        let g = Graph::from_edges(2, &[(0, 1, 1.0), (1, 0, 1.0)]).unwrap();
        let b = PayoffMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 2.0]]).unwrap();
        (g, GameSpec::uniform(2, b, PayoffModel::WeightedAverage))
    }

    #[test]
    fn fmt_has_12_significant_digits_and_no_negative_zero() {
        assert_eq!(fmt_f64(1.0), "1.00000000000e0");
        assert_eq!(fmt_f64(0.5), "5.00000000000e-1");
        assert_eq!(fmt_f64(-0.0), "0.00000000000e0");
        assert_eq!(fmt_f64(1.0 / 3.0), "3.33333333333e-1");
        assert_eq!(fmt_f64(-1234.5), "-1.23450000000e3");
    }

    #[test]
    fn timecourse_layout() {
        let (g, spec) = tiny_setup();
        let x0 = StateProfile::homogeneous(2, vec![0.75, 0.25]).unwrap();
        let opts = IntegratorOptions { t_end: 0.2, ..IntegratorOptions::default() };
        let trajectory = integrate(&g, &spec, &x0, &opts).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("tc.csv");
        emit_timecourse(&path, &trajectory).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,vertex,strategy,x");
        // 3 samples (t=0, 0.1, 0.2) x 2 vertices x 2 strategies
        assert_eq!(lines.len(), 1 + 3 * 2 * 2);
        assert_eq!(lines[1], "0.00000000000e0,1,1,7.50000000000e-1");
        assert_eq!(lines[2], "0.00000000000e0,1,2,2.50000000000e-1");
        assert_eq!(lines[3], "0.00000000000e0,2,1,7.50000000000e-1");
        assert!(lines[5].starts_with("1.00000000000e-1,1,1,"));
    }

    #[test]
    fn snapshot_layout() {
        let x = StateProfile::new(vec![vec![1.0, 0.0], vec![0.25, 0.75]]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("snap.csv");
        emit_snapshot(&path, &x).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(
            text,
            "vertex,x1,x2\n\
             1,1.00000000000e0,0.00000000000e0\n\
             2,2.50000000000e-1,7.50000000000e-1\n"
        );
    }

    #[test]
    fn average_layout() {
        let (g, spec) = tiny_setup();
        let x0 = StateProfile::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let opts = IntegratorOptions { t_end: 0.1, ..IntegratorOptions::default() };
        let trajectory = integrate(&g, &spec, &x0, &opts).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("avg.csv");
        emit_average(&path, &trajectory).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,mean_x1,mean_x2");
        // opposite versors average to one half and stay there: both vertices
        // sit at rest points of the two-player field
        assert_eq!(lines[1], "0.00000000000e0,5.00000000000e-1,5.00000000000e-1");
    }

    #[test]
    fn tensor_layout() {
        let (g, spec) = tiny_setup();
        let tensor = payoff_tensor(&g, &spec).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("tensor.csv");
        emit_tensor(&path, &tensor).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "s_1,s_2,pi_1,pi_2");
        assert_eq!(lines.len(), 1 + 4);
        assert_eq!(lines[1], "1,1,1.00000000000e0,1.00000000000e0");
        assert_eq!(lines[2], "1,2,0.00000000000e0,0.00000000000e0");
        assert_eq!(lines[4], "2,2,2.00000000000e0,2.00000000000e0");
    }

    #[test]
    fn equilibria_layout() {
        let (g, spec) = tiny_setup();
        let report = enumerate_pure_nash(&g, &spec).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("eq.csv");
        emit_equilibria(&path, &report, 2).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text, "s_1,s_2,strict\n1,1,true\n2,2,true\n");
    }

    #[test]
    fn parent_directories_are_created() {
        let x = StateProfile::homogeneous(2, vec![0.5, 0.5]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("deep/nested/out.csv");
        emit_snapshot(&path, &x).unwrap();
        assert!(path.exists());
    }
}
