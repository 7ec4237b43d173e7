// Plugging in your own reconstructor: query coordinate axes in turn and
// answer with the Chebyshev center.

use lingame::game::{proper_loss, run_game, GameConfig, GameView, Reconstructor};
use lingame::geometry::{Direction, Vector};
use lingame::strategies::{chebyshev_estimate, FixedSetMidpoint};

struct Axes {
    next: usize,
}

impl Reconstructor for Axes {
    fn name(&self) -> &str {
        "axes"
    }

    fn next_query(&mut self, view: &GameView) -> lingame::Result<Direction> {
        let d = view.config.dimension;
        self.next += 1;
        Ok(Direction::axis(d, (self.next - 1) % d))
    }

    fn finish(&mut self, view: &GameView) -> lingame::Result<Vector> {
        chebyshev_estimate(view)
    }
}

pub fn run() -> lingame::Result<()> {
    let cfg = GameConfig::new(3, 0.5, 6, 0)?;
    let mut adv = FixedSetMidpoint::simplex(3, 0.5)?;
    let trace = run_game(&mut Axes { next: 0 }, &mut adv, &cfg)?;
    // axis queries leave a box around the simplex, so the loss is √3/2
    println!("axes: proper loss {}", proper_loss(&trace)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> lingame::Result<()> {
    run()
}
