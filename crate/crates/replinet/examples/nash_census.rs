//! Censuses the pure Nash equilibria of the induced 6-player game on the
//! closed star for each preset matrix, then the interior candidate of each
//! 2x2 matrix on its own.

use replinet::{
    build_star, enumerate_pure_nash, mixed_nash_2x2, GamePreset, GameSpec, MixedNash2x2,
    PayoffModel, StarKind,
};

fn main() {
    let g = build_star(StarKind::Closed, 6, 3.0, &[]).expect("closed star");

    for (label, preset, theta) in [
        ("bistable(1.5)", GamePreset::Bistable, Some(1.5)),
        ("prisoner(1.5)", GamePreset::Prisoner, Some(1.5)),
        ("coexistence", GamePreset::Coexistence, None),
    ] {
        let matrix = preset.matrix(theta).expect("admissible theta");
        let spec = GameSpec::uniform(6, matrix.clone(), PayoffModel::WeightedAverage);
        let report = enumerate_pure_nash(&g, &spec).expect("2^6 profiles fit the cap");

        println!("{label}: {} pure Nash among {} profiles", report.pure_nash.len(), report.checked_profiles);
        for eq in &report.pure_nash {
            let labels: Vec<String> = eq.profile.0.iter().map(|s| (s + 1).to_string()).collect();
            println!(
                "  ({})  {}  worst deviation gain {:.1e}",
                labels.join(""),
                if eq.strict { "strict" } else { "non-strict" },
                eq.worst_deviation_gain
            );
        }

        match mixed_nash_2x2(&matrix) {
            MixedNash2x2::Interior(point) => {
                println!("  interior mixed point: [{:.4}, {:.4}]", point[0], point[1])
            }
            MixedNash2x2::NoInterior => println!("  no interior mixed point"),
            MixedNash2x2::Degenerate => println!("  degenerate: a continuum of mixed points"),
        }
        println!();
    }
}
