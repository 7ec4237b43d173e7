//! Angular coverings of the unit sphere.
//!
//! A set `V` of unit vectors is an α-net when every unit vector lies within
//! angle α of some member. In the plane nets are equally spaced and provably
//! covering; in higher dimensions they come from greedy farthest-point
//! selection over a random pool and carry a Monte Carlo certificate.

use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::sync::{Arc, Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{Direction, Vector};

/// Seed used by [`build_cover`] when none is given.
pub const DEFAULT_NET_SEED: u64 = 0x6e65_7473;

/// Sample count for the certificate attached by [`build_cover`].
pub const DEFAULT_VERIFY_SAMPLES: usize = 100_000;

/// Minimum sample count accepted by [`verify_cover`].
pub const MIN_VERIFY_SAMPLES: usize = 10_000;

/// Hard cap on the greedy candidate pool.
pub const MAX_POOL: usize = 1 << 18;

/// Greedy selection stops once the pool is covered at this fraction of α,
/// leaving slack for gaps the finite pool cannot see.
const POOL_TARGET: f64 = 0.9;

/// Outcome of a statistical coverage check.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub samples: usize,
    pub worst_gap: f64,
    pub seed: u64,
}

/// An ordered α-net. For `d >= 3` every prefix of the ordering is itself a
/// reasonably spread net, so truncated query budgets still cover evenly.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverNet {
    pub directions: Vec<Direction>,
    pub alpha: f64,
    pub dimension: usize,
    pub verified: bool,
    pub seed: u64,
    pub certificate: Option<Certificate>,
}

impl CoverNet {
    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < std::f64::consts::FRAC_PI_2 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "alpha must lie in (0, pi/2), got {alpha}"
        )))
    }
}

/// `(√d · α^{-(d-1)}, 2^{2d} · α^{-(d-1)})`, the two-sided bound on the
/// minimal size of an α-covering of `S^{d-1}`.
pub fn covering_bounds(d: usize, alpha: f64) -> Result<(f64, f64)> {
    check_alpha(alpha)?;
    if d == 0 {
        return Err(Error::invalid("dimension must be positive"));
    }
    let scale = alpha.powi(-(d as i32 - 1));
    Ok(((d as f64).sqrt() * scale, 4f64.powi(d as i32) * scale))
}

/// Builds an α-net with the default seed and certifies it.
pub fn build_cover(d: usize, alpha: f64) -> Result<CoverNet> {
    build_cover_seeded(d, alpha, DEFAULT_NET_SEED)
}

pub fn build_cover_seeded(d: usize, alpha: f64, seed: u64) -> Result<CoverNet> {
    check_alpha(alpha)?;
    let directions = match d {
        0 => return Err(Error::invalid("dimension must be positive")),
        1 => vec![Direction::axis(1, 0), Direction::axis(1, 0).negated()],
        2 => circle_net(alpha),
        _ => greedy_net(d, alpha, seed)?,
    };
    let mut net = CoverNet {
        directions,
        alpha,
        dimension: d,
        verified: false,
        seed,
        certificate: None,
    };
    if d <= 2 {
        // exact by construction
        net.verified = true;
    } else {
        let (ok, worst) = verify_cover(&net, DEFAULT_VERIFY_SAMPLES, seed ^ 0x7665_7269)?;
        net.verified = ok;
        net.certificate = Some(Certificate {
            samples: DEFAULT_VERIFY_SAMPLES,
            worst_gap: worst,
            seed: seed ^ 0x7665_7269,
        });
        let (_, upper) = covering_bounds(d, alpha)?;
        if net.len() as f64 >= upper {
            eprintln!(
                "warning: net of size {} exceeds the covering upper bound {upper:.1}",
                net.len()
            );
        }
    }
    Ok(net)
}

/// Like [`build_cover_seeded`], but memoized per `(d, α, seed)` for the life
/// of the process. Sweeps rebuild the same net for every cell otherwise.
pub fn build_cover_cached(d: usize, alpha: f64, seed: u64) -> Result<Arc<CoverNet>> {
    type Cache = Mutex<HashMap<(usize, u64, u64), Arc<CoverNet>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let key = (d, alpha.to_bits(), seed);
    let cache = CACHE.get_or_init(Default::default);
    if let Some(net) = cache.lock().expect("net cache").get(&key) {
        return Ok(Arc::clone(net));
    }
    let net = Arc::new(build_cover_seeded(d, alpha, seed)?);
    cache
        .lock()
        .expect("net cache")
        .insert(key, Arc::clone(&net));
    Ok(net)
}

/// `n = ceil(π/α)` directions spaced `2π/n` around the circle, listed in
/// bit-reversed order so that prefixes spread out.
fn circle_net(alpha: f64) -> Vec<Direction> {
    let n = (std::f64::consts::PI / alpha).ceil() as usize;
    let step = std::f64::consts::TAU / n as f64;
    bit_reversed_order(n)
        .into_iter()
        .map(|k| {
            let a = step * k as f64;
            Direction::new(Vector::from_column_slice(&[a.cos(), a.sin()]))
                .expect("unit by construction")
        })
        .collect()
}

fn bit_reversed_order(n: usize) -> Vec<usize> {
    let bits = usize::BITS - n.next_power_of_two().leading_zeros() - 1;
    let mut order: Vec<usize> = (0..n.next_power_of_two())
        .map(|k| {
            if bits == 0 {
                k
            } else {
                k.reverse_bits() >> (usize::BITS - bits)
            }
        })
        .filter(|&k| k < n)
        .collect();
    order.dedup();
    order
}

fn random_direction(rng: &mut ChaCha8Rng, d: usize) -> Vector {
    loop {
        let x = Vector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal));
        let n = x.norm();
        if n > 1e-9 {
            return x / n;
        }
    }
}

fn greedy_net(d: usize, alpha: f64, seed: u64) -> Result<Vec<Direction>> {
    let (_, upper) = covering_bounds(d, alpha)?;
    let pool_size = ((200.0 * upper).min(MAX_POOL as f64)) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool: Vec<Vector> = (0..pool_size)
        .map(|_| random_direction(&mut rng, d))
        .collect();
    let threshold = (POOL_TARGET * alpha).cos();

    let mut chosen = vec![Direction::axis(d, 0)];
    // best[i] = max over chosen of <pool_i, chosen>
    let mut best: Vec<f64> = pool.iter().map(|p| p[0]).collect();
    loop {
        let (far, &worst) = best
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("pool nonempty");
        if worst >= threshold {
            break;
        }
        let next = pool[far].clone();
        best.par_iter_mut().zip(pool.par_iter()).for_each(|(b, p)| {
            let t = p.dot(&next);
            if t > *b {
                *b = t;
            }
        });
        chosen.push(Direction::new(next)?);
    }
    Ok(chosen)
}

/// Largest angular gap seen over `samples` uniform directions, and whether it
/// stays within the net's α.
pub fn verify_cover(net: &CoverNet, samples: usize, seed: u64) -> Result<(bool, f64)> {
    if samples < MIN_VERIFY_SAMPLES {
        return Err(Error::invalid(format!(
            "at least {MIN_VERIFY_SAMPLES} samples are required, got {samples}"
        )));
    }
    if net.is_empty() {
        return Ok((false, std::f64::consts::PI));
    }
    const CHUNK: usize = 4096;
    let d = net.dimension;
    let chunks = samples.div_ceil(CHUNK);
    let worst_dot = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let count = CHUNK.min(samples - c * CHUNK);
            (0..count)
                .map(|_| {
                    let x = random_direction(&mut rng, d);
                    net.directions
                        .iter()
                        .map(|v| v.dot(&x))
                        .fold(f64::NEG_INFINITY, f64::max)
                })
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min);
    let worst = worst_dot.clamp(-1.0, 1.0).acos();
    Ok((worst <= net.alpha, worst))
}

/// Writes the net as CSV, one direction per row, after a
/// `# d=<d> alpha=<a> verified=<bool> seed=<s>` header line.
pub fn write_net_csv<W: Write>(net: &CoverNet, mut out: W) -> Result<()> {
    writeln!(
        out,
        "# d={} alpha={} verified={} seed={}",
        net.dimension, net.alpha, net.verified, net.seed
    )?;
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    for v in &net.directions {
        writer.write_record(v.iter().map(|x| format!("{x:.16e}")))?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_net_csv<R: BufRead>(mut input: R) -> Result<CoverNet> {
    let mut header = String::new();
    input.read_line(&mut header)?;
    let header = header
        .trim()
        .strip_prefix('#')
        .ok_or_else(|| Error::invalid("net CSV must start with a '#' header"))?;
    let mut dimension = None;
    let mut alpha = None;
    let mut verified = None;
    let mut seed = None;
    for field in header.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| Error::invalid(format!("malformed header field {field:?}")))?;
        let bad = |_| Error::invalid(format!("bad value for {key}: {value:?}"));
        match key {
            "d" => dimension = Some(value.parse::<usize>().map_err(|e| bad(e.to_string()))?),
            "alpha" => alpha = Some(value.parse::<f64>().map_err(|e| bad(e.to_string()))?),
            "verified" => verified = Some(value.parse::<bool>().map_err(|e| bad(e.to_string()))?),
            "seed" => seed = Some(value.parse::<u64>().map_err(|e| bad(e.to_string()))?),
            _ => {}
        }
    }
    let dimension = dimension.ok_or_else(|| Error::invalid("header lacks d"))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(input);
    let mut directions = Vec::new();
    for record in reader.records() {
        let record = record?;
        let coords = record
            .iter()
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::invalid(format!("bad coordinate: {e}")))?;
        if coords.len() != dimension {
            return Err(Error::DimensionMismatch {
                expected: dimension,
                found: coords.len(),
            });
        }
        directions.push(Direction::new(Vector::from_vec(coords))?);
    }
    Ok(CoverNet {
        directions,
        alpha: alpha.ok_or_else(|| Error::invalid("header lacks alpha"))?,
        dimension,
        verified: verified.unwrap_or(false),
        seed: seed.unwrap_or(0),
        certificate: None,
    })
}
