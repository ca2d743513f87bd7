//! Enumerates the payoff tensor of a small 3-player game under both payoff
//! models. The directed triangle here has weighted degrees (1 + mu, 3 mu, mu),
//! so the weighted-average and weighted-sum payoffs differ per vertex.

use replinet::{payoff_tensor, GameSpec, Graph, PayoffMatrix, PayoffModel};

fn main() {
    let mu = 1.0;
    let (a, b, c, d) = (1.0, 2.0, 3.0, 4.0);

    let g = Graph::from_edges(
        3,
        &[(0, 1, 1.0), (0, 2, mu), (1, 0, mu), (1, 2, 2.0 * mu), (2, 1, mu)],
    )
    .expect("valid digraph");
    let matrix = PayoffMatrix::from_rows(&[vec![a, b], vec![c, d]]).expect("2x2 matrix");

    for model in [PayoffModel::WeightedAverage, PayoffModel::WeightedSum] {
        let spec = GameSpec::uniform(3, matrix.clone(), model);
        let tensor = payoff_tensor(&g, &spec).expect("8 profiles fit any cap");
        println!("{model:?}: {} profiles", tensor.profiles());
        println!("  s1 s2 s3   pi1      pi2      pi3");
        for (profile, payoffs) in tensor.iter() {
            let strategies: Vec<String> =
                (0..3).map(|v| (profile.strategy(v) + 1).to_string()).collect();
            let values: Vec<String> = payoffs.iter().map(|p| format!("{p:8.4}")).collect();
            println!("  {}    {}", strategies.join("  "), values.join(" "));
        }
        println!();
    }
}
