// Monte Carlo checks of the simplex stability and rotation inequalities,
// and recovering a regular simplex from a noisy copy.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lingame::geometry::{hausdorff_distance, Vector};
use lingame::jung_lab::{
    beta_test, fit_regular, random_unit, verify_bilipschitz_suite, verify_rotation_suite,
    RegularSimplex,
};

pub fn run() -> lingame::Result<()> {
    for d in [2, 3] {
        let bl = verify_bilipschitz_suite(d, 2000, 1)?;
        let rot = verify_rotation_suite(d, 200, 1)?;
        println!(
            "d={d}: β_test {:.2e}; bi-Lipschitz {} failures ({} checked), rotation {} failures",
            beta_test(d),
            bl.failures,
            bl.checked,
            rot.failures
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let truth = RegularSimplex::standard(3, 1.0, true)?;
    let noisy: Vec<Vector> = truth
        .vertices()
        .iter()
        .map(|x| x + random_unit(3, &mut rng) * rng.random_range(0.0..1e-3))
        .collect();
    let (fit, residual) = fit_regular(&noisy, 1.0)?;
    println!(
        "fit residual {residual:.2e}; distance to the true simplex {:.2e}",
        hausdorff_distance(fit.vertices(), truth.vertices())?
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> lingame::Result<()> {
    run()
}
