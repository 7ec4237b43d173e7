use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::game::{Adversary, GameView};
use crate::geometry::{diameter, regular_simplex, Direction, PointSet, Vector, EPS_NUM};
use crate::jung_lab::{random_unit, rotate_simplex, RegularSimplex};
use crate::polytope::project_points;

/// Answers the midpoint of the projection of a fixed set `S`, which keeps all
/// of `S` feasible as long as `diam(S) <= 2δ`.
#[derive(Clone, Debug)]
pub struct FixedSetMidpoint {
    set: PointSet,
    checked: usize,
}

impl FixedSetMidpoint {
    pub fn new(set: PointSet, noise: f64) -> Result<Self> {
        let diam = diameter(&set)?;
        if diam > 2.0 * noise * (1.0 + 1e-12) {
            return Err(Error::invalid(format!(
                "set diameter {diam} exceeds twice the noise {noise}"
            )));
        }
        Ok(FixedSetMidpoint { set, checked: 0 })
    }

    /// `S` = regular simplex of edge `2δ`, centered at the origin.
    pub fn simplex(d: usize, noise: f64) -> Result<Self> {
        Self::new(regular_simplex(d, 2.0 * noise, true)?, noise)
    }

    /// `S = {secret}`: answers are exact inner products.
    pub fn truthful(secret: Vector) -> Self {
        FixedSetMidpoint {
            set: vec![secret],
            checked: 0,
        }
    }

    pub fn set(&self) -> &[Vector] {
        &self.set
    }
}

impl Adversary for FixedSetMidpoint {
    fn name(&self) -> &str {
        if self.set.len() == 1 {
            "truthful"
        } else {
            "fixed_set_midpoint"
        }
    }

    fn answer(&mut self, query: &Direction, view: &GameView) -> Result<f64> {
        if query.dim() != self.set[0].len() || view.config.dimension != query.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.set[0].len(),
                found: query.dim(),
            });
        }
        let (lo, hi) = project_points(&self.set, query)?;
        Ok(0.5 * (lo + hi))
    }

    fn reveal(&mut self, _view: &GameView) -> Result<Vector> {
        Ok(self.set[0].clone())
    }

    fn audit(&mut self, view: &GameView) -> Result<()> {
        let slabs = view.slabs.slabs();
        for (k, slab) in slabs.iter().enumerate().skip(self.checked) {
            if let Some(x) = self.set.iter().find(|x| !slab.contains(x)) {
                return Err(Error::InvariantBreach(format!(
                    "point {x:?} of the fixed set left slab {k}"
                )));
            }
        }
        self.checked = slabs.len();
        Ok(())
    }
}

/// Probe directions used to discretize the safety balls.
pub const SAFETY_PROBES: usize = 32;

fn safety_probes(d: usize) -> Vec<Vector> {
    match d {
        1 => vec![Vector::from_element(1, 1.0), Vector::from_element(1, -1.0)],
        2 => (0..SAFETY_PROBES)
            .map(|k| {
                let a = std::f64::consts::TAU * k as f64 / SAFETY_PROBES as f64;
                Vector::from_column_slice(&[a.cos(), a.sin()])
            })
            .collect(),
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(0x7361_6665);
            (0..SAFETY_PROBES)
                .map(|_| random_unit(d, &mut rng))
                .collect()
        }
    }
}

/// Current unit simplex and safety radius of the rotating adversary.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplexState {
    pub vertices: PointSet,
    pub safety: f64,
}

/// The rotating-simplex adversary at `δ = ½`, edge 1. It keeps
/// `Δ_t + B(α_t)` inside the feasible region while `α_{t+1} = α_t²/17`,
/// rotating the simplex slightly whenever a query is nearly parallel to an
/// edge.
#[derive(Clone, Debug)]
pub struct RotatingSimplex {
    state: SimplexState,
    alphas: Vec<f64>,
    rotations: usize,
    probes: Vec<Vector>,
}

/// The noise level the rotating adversary is defined for.
pub const ROTATING_NOISE: f64 = 0.5;

impl RotatingSimplex {
    pub fn new(d: usize, alpha0: f64) -> Result<Self> {
        if !(alpha0 > 0.0 && alpha0 < 0.25) {
            return Err(Error::invalid(format!(
                "alpha0 must lie in (0, 1/4), got {alpha0}"
            )));
        }
        Ok(RotatingSimplex {
            state: SimplexState {
                vertices: regular_simplex(d, 1.0, true)?,
                safety: alpha0,
            },
            alphas: vec![alpha0],
            rotations: 0,
            probes: safety_probes(d),
        })
    }

    pub fn state(&self) -> &SimplexState {
        &self.state
    }

    /// `α_0, α_1, …`, one entry per answered round plus the initial value.
    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn rotations(&self) -> usize {
        self.rotations
    }

    /// Ordered pair `(i, j)` maximizing `⟨v, x_i - x_j⟩`; ties go to the
    /// lexicographically smallest pair.
    pub fn max_edge(vertices: &[Vector], v: &Direction) -> (usize, usize, f64) {
        let proj: Vec<f64> = vertices.iter().map(|x| v.dot(x)).collect();
        let mut best = (0, 1, f64::NEG_INFINITY);
        for i in 0..proj.len() {
            for j in 0..proj.len() {
                if i != j && proj[i] - proj[j] > best.2 {
                    best = (i, j, proj[i] - proj[j]);
                }
            }
        }
        best
    }

    /// Rotates the current simplex by `α/2` about vertex `j`, in the plane of
    /// `v` and the edge `x_i - x_j`.
    fn rotate(&mut self, v: &Direction, i: usize, j: usize, alpha: f64) -> Result<()> {
        let anchor = self.state.vertices[j].clone();
        let mut order = vec![j, i];
        order.extend((0..self.state.vertices.len()).filter(|&k| k != i && k != j));
        let local: PointSet = order
            .iter()
            .map(|&k| &self.state.vertices[k] - &anchor)
            .collect();
        let simplex = RegularSimplex::new(local, 1.0)?;
        let rotated = rotate_simplex(&simplex, v, 0.5 * alpha)?;
        let shift = (&rotated.vertices()[1] - &simplex.vertices()[1]).norm();
        let allowed = alpha - alpha * alpha / 17.0;
        if shift > allowed + 1e-15 {
            return Err(Error::InvariantBreach(format!(
                "rotation moved x1 by {shift}, more than {allowed}"
            )));
        }
        for (slot, &k) in order.iter().enumerate() {
            self.state.vertices[k] = &rotated.vertices()[slot] + &anchor;
        }
        self.rotations += 1;
        Ok(())
    }
}

impl Adversary for RotatingSimplex {
    fn name(&self) -> &str {
        "rotating_simplex"
    }

    fn answer(&mut self, query: &Direction, view: &GameView) -> Result<f64> {
        if view.config.noise != ROTATING_NOISE {
            return Err(Error::config(format!(
                "the rotating adversary runs at noise 1/2, got {}",
                view.config.noise
            )));
        }
        let alpha = self.state.safety;
        let next_alpha = alpha * alpha / 17.0;
        let (mut i, mut j, lead) = Self::max_edge(&self.state.vertices, query);
        if lead > 1.0 - 2.0 * next_alpha {
            self.rotate(query, i, j, alpha)?;
            (i, j, _) = Self::max_edge(&self.state.vertices, query);
        }
        let x = &self.state.vertices;
        let r = 0.5 * query.dot(&(&x[i] + &x[j]));
        // every safety ball must sit inside the new slab
        for (k, xk) in x.iter().enumerate() {
            let slack = (query.dot(xk) - r).abs() + next_alpha - ROTATING_NOISE;
            if slack > EPS_NUM {
                return Err(Error::InvariantBreach(format!(
                    "vertex {k} safety ball exceeds the slab by {slack}"
                )));
            }
        }
        self.state.safety = next_alpha;
        self.alphas.push(next_alpha);
        Ok(r)
    }

    fn reveal(&mut self, _view: &GameView) -> Result<Vector> {
        Ok(self.state.vertices[0].clone())
    }

    fn audit(&mut self, view: &GameView) -> Result<()> {
        let alpha = self.state.safety;
        for (k, x) in self.state.vertices.iter().enumerate() {
            let points =
                std::iter::once(x.clone()).chain(self.probes.iter().map(|p| x + p * alpha));
            for p in points {
                if !view.slabs.contains(&p)? {
                    return Err(Error::InvariantBreach(format!(
                        "safety ball of vertex {k} left the feasible region at round {}",
                        view.round()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Answers 0 to every query.
#[derive(Clone, Debug)]
pub struct ZeroAnswer {
    rng: ChaCha8Rng,
}

impl ZeroAnswer {
    pub fn new(seed: u64) -> Self {
        ZeroAnswer {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl Adversary for ZeroAnswer {
    fn name(&self) -> &str {
        "zero"
    }

    fn answer(&mut self, _query: &Direction, _view: &GameView) -> Result<f64> {
        Ok(0.0)
    }

    /// A feasible standard Gaussian sample if one of a few draws lands in
    /// the region, otherwise the origin.
    fn reveal(&mut self, view: &GameView) -> Result<Vector> {
        let d = view.config.dimension;
        for _ in 0..16 {
            let x = Vector::from_fn(d, |_, _| StandardNormal.sample(&mut self.rng));
            if view.slabs.contains(&x)? {
                return Ok(x);
            }
        }
        Ok(Vector::zeros(d))
    }
}
