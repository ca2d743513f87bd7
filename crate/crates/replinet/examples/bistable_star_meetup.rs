//! A lone rebel hub against five conformist peripherals in the two-strict-
//! equilibria game on the open star: neither camp wins, and every vertex
//! settles on the mixed point [0.5, 0.5].
//!
//! The open star is bipartite with the hub as one side, so the rebel hub and
//! the conformist periphery pull each other exactly halfway.

use replinet::{
    build_star, detect_steady_state, initial_condition, integrate, GamePreset, GameSpec, IcPreset,
    IntegratorOptions, PayoffModel, StarKind,
};

fn main() {
    let g = build_star(StarKind::Open, 6, 3.0, &[]).expect("open star");
    let matrix = GamePreset::Bistable.matrix(Some(1.0)).expect("theta = 1 is admissible");
    let spec = GameSpec::uniform(6, matrix, PayoffModel::WeightedAverage);
    let x0 = initial_condition(IcPreset::CentralOutlayer, 6, 0.99).expect("n = 6, m = 2");

    let opts = IntegratorOptions { t_end: 50.0, ..IntegratorOptions::default() };
    let trajectory = integrate(&g, &spec, &x0, &opts).expect("stays on the simplex");

    println!("t      hub x1    periphery x1");
    for &t in &[0.0, 2.0, 5.0, 10.0, 20.0, 50.0] {
        let i = trajectory
            .times
            .iter()
            .position(|&ti| (ti - t).abs() < 1e-9)
            .expect("sampled time");
        let state = &trajectory.states[i];
        println!("{t:5.1}  {:.6}  {:.6}", state.vertex(0)[0], state.vertex(1)[0]);
    }

    let steady = detect_steady_state(&g, &spec, &trajectory, 1e-3, 5.0)
        .expect("window fits the trajectory");
    match steady {
        Some(t) => println!("\nsteady (eps 1e-3) from t = {t:.1}"),
        None => println!("\nstill moving at t = 50"),
    }

    let last = trajectory.final_state();
    let worst = (0..6)
        .map(|v| (last.vertex(v)[0] - 0.5).abs())
        .fold(0.0, f64::max);
    println!("max |x1 - 0.5| at t = 50: {worst:.2e}");
}
