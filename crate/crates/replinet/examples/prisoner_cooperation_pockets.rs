//! Where does cooperation survive? Runs the prisoner game (theta = 1.5) to
//! t = 100 from every benchmark initial condition on every benchmark star and
//! reports which vertices keep a cooperating share above 0.1.
//!
//! From the homogeneous start every graph behaves like the classical
//! single-population equation and cooperation decays toward zero; the
//! non-homogeneous starts leave cooperating pockets on some graphs.

use replinet::{
    build_star, initial_condition, integrate, GamePreset, GameSpec, IcPreset, IntegratorOptions,
    PayoffModel, StarKind,
};

fn main() {
    let matrix = GamePreset::Prisoner.matrix(Some(1.5)).expect("theta > 1");
    let opts = IntegratorOptions { t_end: 100.0, ..IntegratorOptions::default() };

    println!("{:<18} {:<10} cooperators (x1 > 0.1) at t = 100", "initial condition", "graph");
    for ic in [
        IcPreset::Homogeneous,
        IcPreset::ExternalOutlayer,
        IcPreset::CentralOutlayer,
        IcPreset::ExternalCentral,
    ] {
        for (label, kind) in [
            ("open", StarKind::Open),
            ("closed", StarKind::Closed),
            ("weighted", StarKind::WeightedAsymmetric),
        ] {
            let g = build_star(kind, 6, 3.0, &[(0, 1), (1, 5), (2, 3)]).expect("star");
            let spec = GameSpec::uniform(6, matrix.clone(), PayoffModel::WeightedAverage);
            let x0 = initial_condition(ic, 6, 0.99).expect("n = 6, m = 2");
            let trajectory = integrate(&g, &spec, &x0, &opts).expect("simplex preserved");
            let last = trajectory.final_state();

            let survivors: Vec<String> = (0..6)
                .filter(|&v| last.vertex(v)[0] > 0.1)
                .map(|v| format!("{} ({:.2})", v + 1, last.vertex(v)[0]))
                .collect();
            let cell = if survivors.is_empty() { "none".to_string() } else { survivors.join(", ") };
            println!("{:<18} {label:<10} {cell}", format!("{ic:?}"));
        }
    }
}
