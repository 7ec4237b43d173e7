// In high dimension a few hundred zero answers leave two random Gaussian
// points both feasible and far apart.

use lingame::experiments::{dimension_experiment, write_rows};

pub fn run() -> lingame::Result<()> {
    let rows = dimension_experiment(&[8, 32, 64], &|_| 256, 40, 1)?;
    write_rows(&rows, std::io::stdout().lock())?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> lingame::Result<()> {
    run()
}
