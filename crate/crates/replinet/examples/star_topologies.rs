//! Builds the three benchmark stars (open, closed, asymmetric weighted) and
//! prints their adjacency structure and normalization sums.

use replinet::{build_star, StarKind};

fn main() {
    let stars = [
        ("open", build_star(StarKind::Open, 6, 3.0, &[])),
        ("closed", build_star(StarKind::Closed, 6, 3.0, &[])),
        (
            "weighted",
            // hub = vertex 1; heavy edges use the shipped scenario placement
            build_star(StarKind::WeightedAsymmetric, 6, 3.0, &[(0, 1), (1, 5), (2, 3)]),
        ),
    ];

    for (label, star) in stars {
        let g = star.expect("benchmark stars are well formed");
        println!("{label} star, n = {}", g.n());
        for v in 0..g.n() {
            let report = g.neighborhood(v);
            let row: Vec<String> = g.row(v).iter().map(|w| format!("{w:.0}")).collect();
            println!(
                "  vertex {}: row [{}]  degree {}  d_v = {}",
                v + 1,
                row.join(" "),
                report.degree,
                report.weight_sum
            );
        }
        // undirected by construction: weight(v, w) == weight(w, v)
        for v in 0..g.n() {
            for w in 0..g.n() {
                assert_eq!(g.weight(v, w), g.weight(w, v));
            }
        }
        println!();
    }
}
