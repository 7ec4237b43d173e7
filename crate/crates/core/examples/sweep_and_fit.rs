// A parameter sweep from a JSON spec, its CSV, and a rate fit.

use lingame::experiments::{fit_rows, write_csv, ExperimentSpec, RateModel, SweepOptions};

const SPEC: &str = r#"{
  "name": "cover-vs-zero",
  "dimension": 2,
  "noise": 1.0,
  "roundsGrid": [8, 16, 32, 64, 128],
  "reconstructor": {"name": "cover_net", "params": {"alpha": 0.02}},
  "adversary": {"name": "zero"},
  "seeds": [0],
  "metricsEvery": 0,
  "objective": "improper"
}"#;

pub fn run() -> lingame::Result<()> {
    let spec = ExperimentSpec::from_json_str(SPEC)?;
    let out = lingame::experiments::sweep(
        &spec,
        SweepOptions {
            jobs: 2,
            metrics_every: None,
        },
    )?;
    let mut csv = Vec::new();
    write_csv(&out.rows, &mut csv)?;
    print!("{}", String::from_utf8_lossy(&csv));

    // in the plane the error decays like T^-2
    let fit = fit_rows(&out.rows, RateModel::PowerLaw)?;
    println!("{}", serde_json::to_string(&fit)?);
    println!("first trace file: {}", out.traces[0].0);
    Ok(())
}

#[allow(dead_code)]
fn main() -> lingame::Result<()> {
    run()
}
