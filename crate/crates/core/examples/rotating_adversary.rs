// The refining reconstructor against the rotating-simplex adversary: the
// excess over the limiting radius collapses batch by batch.

use lingame::game::{run_game_with, GameConfig, RunOptions};
use lingame::geometry::jung_constant;
use lingame::strategies::{default_beta, RobustJungReconstructor, RotatingSimplex};

pub fn run() -> lingame::Result<()> {
    let d = 2;
    let mut rec = RobustJungReconstructor::new(d, default_beta(d), usize::MAX)?;
    let (net, batch) = rec.schedule();
    println!("preprocessing net: {net} queries, then batches of {batch}");
    let mut adv = RotatingSimplex::new(d, 1.0 / 20.0)?;
    let cfg = GameConfig::new(d, 0.5, 40, 0)?;
    let trace = run_game_with(&mut rec, &mut adv, &cfg, RunOptions::every(1))?;

    let limit = jung_constant(d);
    for m in trace.per_round.iter().skip(net.saturating_sub(3)).take(12) {
        if let Some(r) = m.radius.finite() {
            println!("round {:>2}: excess {:.3e}", m.round, r - limit);
        }
    }
    for b in rec.batch_log() {
        println!(
            "batch at round {:>2}: excess {:.3e}, fit residual {:.2e}",
            b.round,
            b.radius - limit,
            b.fit_residual
        );
    }
    println!(
        "phase {:?}; adversary rotated {} times",
        rec.phase(),
        adv.rotations()
    );
    let alphas: Vec<String> = adv
        .alphas()
        .iter()
        .take(4)
        .map(|a| format!("{a:.3e}"))
        .collect();
    println!("safety radii α_0..α_3: {}", alphas.join(", "));
    Ok(())
}

#[allow(dead_code)]
fn main() -> lingame::Result<()> {
    run()
}
