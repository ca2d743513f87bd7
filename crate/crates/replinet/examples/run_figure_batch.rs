//! Runs the whole shipped scenario corpus through the batch runner and
//! tabulates steady-state onsets. Artifacts land in a temporary directory;
//! point REPLINET_OUT_DIR or the CLI's --out somewhere durable to keep them.

use std::path::PathBuf;

use replinet::run_batch;

fn main() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    let mut paths: Vec<PathBuf> = std::fs::read_dir(&dir)
        .expect("scenario directory ships with the repo")
        .map(|entry| entry.expect("readable entry").path())
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    paths.sort();

    let out = std::env::temp_dir().join("replinet_figure_batch");
    let results = run_batch(&paths, 4, &out);

    let mut settled = 0;
    for (path, outcome) in paths.iter().zip(&results) {
        match outcome {
            Ok(result) => match result.steady_time {
                Some(t) => {
                    settled += 1;
                    println!("{:<30} steady from t = {t:.1}", result.scenario_id);
                }
                None => println!("{:<30} still moving at the horizon", result.scenario_id),
            },
            Err(e) => println!("{:<30} failed: {e}", path.display()),
        }
    }
    println!(
        "\n{} scenarios, {settled} settled, artifacts under {}",
        results.len(),
        out.display()
    );
}
