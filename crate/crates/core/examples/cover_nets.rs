// Angular α-nets on the sphere, their size bounds, and a CSV round trip.

use lingame::nets::{build_cover, covering_bounds, read_net_csv, verify_cover, write_net_csv};

pub fn run() -> lingame::Result<()> {
    for (d, alpha) in [(2, 0.1), (2, 0.5), (3, 0.5), (3, 0.3), (4, 0.6)] {
        let net = build_cover(d, alpha)?;
        let (lo, hi) = covering_bounds(d, alpha)?;
        let (ok, gap) = verify_cover(&net, 20_000, 9)?;
        println!(
            "d={d} α={alpha}: {:>4} directions in ({lo:.1}, {hi:.1}); worst sampled gap {gap:.4} covered={ok}",
            net.len()
        );
    }

    let net = build_cover(3, 0.5)?;
    let mut buf = Vec::new();
    write_net_csv(&net, &mut buf)?;
    let back = read_net_csv(buf.as_slice())?;
    println!(
        "CSV header: {}",
        String::from_utf8_lossy(&buf)
            .lines()
            .next()
            .unwrap_or_default()
    );
    println!("read back {} directions", back.len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> lingame::Result<()> {
    run()
}
