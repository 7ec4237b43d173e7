// Improper prediction: answering a new direction with the midpoint of the
// region's projection costs exactly half the diameter.

use lingame::game::{improper_loss, midpoint_predictor, run_game_with, GameConfig, RunOptions};
use lingame::geometry::Direction;
use lingame::polytope::region_diameter;
use lingame::strategies::{CoverNetReconstructor, ZeroAnswer};

pub fn run() -> lingame::Result<()> {
    let d = 3;
    for rounds in [16, 64, 256] {
        let cfg = GameConfig::new(d, 1.0, rounds, 2)?;
        let mut rec = CoverNetReconstructor::new(d, 0.1)?;
        let mut adv = ZeroAnswer::new(2);
        let trace = run_game_with(&mut rec, &mut adv, &cfg, RunOptions::every(0))?;
        let cache = trace.final_region()?.snapshot();
        let predict = midpoint_predictor(cache.clone())?;
        let loss = improper_loss(&trace, &predict, 2000)?;
        println!(
            "T={rounds:>3}: improper loss {loss:.6}, diameter/2 {:.6}, prediction along e1 {:+.2e}",
            region_diameter(&cache)? / 2.0,
            predict(&Direction::axis(d, 0))
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> lingame::Result<()> {
    run()
}
