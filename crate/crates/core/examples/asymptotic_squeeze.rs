// Cover-net loss against the midpoint-simplex adversary, squeezed between
// the limiting value and its 1/cos α inflation.

use lingame::experiments::asymptotic_experiment;

pub fn run() -> lingame::Result<()> {
    for d in [1, 2, 3] {
        for row in asymptotic_experiment(d, &[1.0], &[0.4, 0.2, 0.1])? {
            println!(
                "d={} α={:.2} T={:>4}: {:.6} <= {:.6} <= {:.6}  (limit {:.6}) {}",
                row.d,
                row.alpha,
                row.rounds,
                row.lower,
                row.loss,
                row.upper,
                row.target,
                if row.squeezed { "ok" } else { "VIOLATED" }
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> lingame::Result<()> {
    run()
}
