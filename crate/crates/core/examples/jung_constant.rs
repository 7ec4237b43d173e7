// Minimum enclosing balls of regular simplices reproduce the Jung constant.

use lingame::geometry::{diameter, jung_constant, min_enclosing_ball, regular_simplex};

pub fn run() -> lingame::Result<()> {
    println!(
        "{:>2} {:>12} {:>12} {:>10}",
        "d", "MEB radius", "Jung_d", "diameter"
    );
    for d in 1..=6 {
        let simplex = regular_simplex(d, 1.0, true)?;
        let (ball, support) = min_enclosing_ball(&simplex)?;
        println!(
            "{d:>2} {:>12.9} {:>12.9} {:>10.6}  ({} support points)",
            ball.radius,
            jung_constant(d),
            diameter(&simplex)?,
            support.len()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> lingame::Result<()> {
    run()
}
