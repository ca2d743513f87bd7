//! Homogeneous populations make the network invisible: with one shared payoff
//! matrix, the weighted-average model, and identical initial mixtures, every
//! vertex of every graph traces the classical replicator orbit.

use replinet::{
    build_star, integrate, integrate_classical, GamePreset, GameSpec, IntegratorOptions,
    PayoffModel, StarKind, StateProfile,
};

fn main() {
    let matrix = GamePreset::Prisoner.matrix(Some(1.5)).expect("theta > 1");
    let y0 = vec![0.99, 0.01];
    let opts = IntegratorOptions { t_end: 50.0, ..IntegratorOptions::default() };

    let classical = integrate_classical(&matrix, &y0, &opts).expect("simplex preserved");

    for (label, kind) in [
        ("open", StarKind::Open),
        ("closed", StarKind::Closed),
        ("weighted", StarKind::WeightedAsymmetric),
    ] {
        let g = build_star(kind, 6, 3.0, &[(0, 1), (1, 5), (2, 3)]).expect("star");
        let spec = GameSpec::uniform(6, matrix.clone(), PayoffModel::WeightedAverage);
        let x0 = StateProfile::new(vec![y0.clone(); 6]).expect("homogeneous start");
        let networked = integrate(&g, &spec, &x0, &opts).expect("simplex preserved");

        // sup-norm gap between each vertex trajectory and the classical one
        let mut gap: f64 = 0.0;
        for (i, state) in networked.states.iter().enumerate() {
            for v in 0..6 {
                for s in 0..2 {
                    gap = gap.max((state.vertex(v)[s] - classical.states[i].vertex(0)[s]).abs());
                }
            }
        }
        println!("{label:8} star: sup-norm deviation from classical orbit = {gap:.2e}");
    }
}
