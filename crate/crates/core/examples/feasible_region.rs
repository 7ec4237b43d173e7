// Intersecting slabs incrementally and measuring the resulting polytope.

use lingame::geometry::Direction;
use lingame::polytope::{extract_witness, region_diameter, region_radius, Region, Slab};

pub fn run() -> lingame::Result<()> {
    let mut region = Region::new(2)?;
    // three slabs of half-width 1/2 at 120° spacing
    for k in 0..3 {
        let a = std::f64::consts::TAU * k as f64 / 3.0;
        let v = Direction::from_slice(&[a.cos(), a.sin()])?;
        region.add_slab(Slab::new(v, 0.0, 0.5)?)?;
        let cache = region.snapshot();
        if cache.bounded {
            let (ball, _) = region_radius(&cache)?;
            println!(
                "after {} slabs: {} vertices, radius {:.6}, diameter {:.6}",
                k + 1,
                cache.vertices.len(),
                ball.radius,
                region_diameter(&cache)?
            );
        } else {
            println!("after {} slabs: unbounded", k + 1);
        }
    }

    // the hexagon still holds a unit-scale witness: d+1 feasible points
    // (repeats allowed) whose enclosing radius reaches the Jung value
    let witness = extract_witness(&region.snapshot(), 2, 1.0)?;
    for x in &witness {
        println!("witness point ({:+.4}, {:+.4})", x[0], x[1]);
    }

    // an answer that contradicts the first slab empties the region
    let e1 = Direction::axis(2, 0);
    match region.add_slab(Slab::new(e1, 5.0, 0.5)?) {
        Err(e) => println!("inconsistent answer: {e}"),
        Ok(()) => println!("still feasible"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> lingame::Result<()> {
    run()
}
