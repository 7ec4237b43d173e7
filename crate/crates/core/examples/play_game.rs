// One game: a cover-net reconstructor against a truthful adversary, with
// the per-round radius and the JSON trace.

use lingame::game::{proper_loss, run_game_with, GameConfig, GameTrace, RunOptions};
use lingame::geometry::{jung_constant, Vector};
use lingame::strategies::{CoverNetReconstructor, FixedSetMidpoint};

pub fn run() -> lingame::Result<()> {
    let alpha: f64 = 0.1;
    let secret = Vector::from_column_slice(&[0.3, -1.2]);
    let mut rec = CoverNetReconstructor::new(2, alpha)?;
    let rounds = rec.net().len();
    let mut adv = FixedSetMidpoint::truthful(secret.clone());
    let cfg = GameConfig::new(2, 0.5, rounds, 1)?;
    let trace = run_game_with(&mut rec, &mut adv, &cfg, RunOptions::every(8))?;

    for m in &trace.per_round {
        println!(
            "round {:>3}: radius {}  diameter {}",
            m.round, m.radius, m.diameter
        );
    }
    let estimate = trace.estimate.clone().expect("finished game");
    let bound = jung_constant(2) * 2.0 * cfg.noise / alpha.cos();
    println!("proper loss {}", proper_loss(&trace)?);
    println!(
        "|estimate - secret| = {:.4} (bound {bound:.4})",
        (&estimate - &secret).norm()
    );

    let json = trace.to_json_string();
    let back = GameTrace::from_json_str(&json)?;
    println!(
        "trace JSON: {} bytes, round trip equal: {}",
        json.len(),
        back == trace
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> lingame::Result<()> {
    run()
}
