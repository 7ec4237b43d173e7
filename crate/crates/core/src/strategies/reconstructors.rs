use std::collections::VecDeque;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{GameView, Reconstructor};
use crate::geometry::{Direction, Vector};
use crate::jung_lab::{fit_regular, random_unit};
use crate::nets::{build_cover_cached, CoverNet, DEFAULT_NET_SEED};
use crate::polytope::{extract_witness, region_radius};

/// Chebyshev center of the current region, or the origin while it is
/// unbounded (or not enumerable).
pub fn chebyshev_estimate(view: &GameView) -> Result<Vector> {
    let d = view.config.dimension;
    let Some(region) = view.region else {
        return Ok(Vector::zeros(d));
    };
    let cache = region.snapshot();
    if cache.bounded {
        Ok(region_radius(&cache)?.0.center)
    } else {
        Ok(Vector::zeros(d))
    }
}

/// Queries an α-net in order (cycling once exhausted) and answers with the
/// Chebyshev center.
#[derive(Clone, Debug)]
pub struct CoverNetReconstructor {
    net: Arc<CoverNet>,
    next: usize,
}

impl CoverNetReconstructor {
    pub fn new(d: usize, alpha: f64) -> Result<Self> {
        Self::with_seed(d, alpha, DEFAULT_NET_SEED)
    }

    pub fn with_seed(d: usize, alpha: f64, net_seed: u64) -> Result<Self> {
        Ok(CoverNetReconstructor {
            net: build_cover_cached(d, alpha, net_seed)?,
            next: 0,
        })
    }

    pub fn from_net(net: CoverNet) -> Self {
        CoverNetReconstructor {
            net: Arc::new(net),
            next: 0,
        }
    }

    pub fn net(&self) -> &CoverNet {
        &self.net
    }
}

impl Reconstructor for CoverNetReconstructor {
    fn name(&self) -> &str {
        "cover_net"
    }

    fn next_query(&mut self, _view: &GameView) -> Result<Direction> {
        let q = self.net.directions[self.next % self.net.len()].clone();
        self.next += 1;
        Ok(q)
    }

    fn finish(&mut self, view: &GameView) -> Result<Vector> {
        chebyshev_estimate(view)
    }
}

/// Preprocessing net angle `arccos(1/(1+β))`.
pub fn preprocessing_alpha(beta: f64) -> f64 {
    (1.0 / (1.0 + beta)).acos()
}

/// Default preprocessing slack per dimension.
pub fn default_beta(d: usize) -> f64 {
    if d <= 2 {
        0.01
    } else {
        0.005
    }
}

/// Per-batch bookkeeping of the refinement phase.
#[derive(Clone, Debug, PartialEq)]
pub struct BatchRecord {
    /// Rounds answered when the batch was planned.
    pub round: usize,
    /// Region radius at that moment.
    pub radius: f64,
    /// Hausdorff distance from the witness to the fitted simplex.
    pub fit_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Phase {
    Preprocessing,
    Refining,
    /// Radius fell below the limiting value; only padding queries remain.
    Settled,
}

/// Queries an `arccos(1/(1+β))`-net, then repeatedly fits a regular simplex
/// to the current witness and queries its normalized edge directions.
#[derive(Clone, Debug)]
pub struct RobustJungReconstructor {
    net: Arc<CoverNet>,
    beta: f64,
    batches: usize,
    phase: Phase,
    next_net: usize,
    pending: VecDeque<Direction>,
    batch_log: Vec<BatchRecord>,
}

impl RobustJungReconstructor {
    pub fn new(d: usize, beta: f64, batches: usize) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::invalid(format!("beta must be positive, got {beta}")));
        }
        let net = build_cover_cached(d, preprocessing_alpha(beta), DEFAULT_NET_SEED)?;
        Ok(RobustJungReconstructor {
            net,
            beta,
            batches,
            phase: Phase::Preprocessing,
            next_net: 0,
            pending: VecDeque::new(),
            batch_log: Vec::new(),
        })
    }

    /// `(net size, queries per batch)`.
    pub fn schedule(&self) -> (usize, usize) {
        let d = self.net.dimension;
        (self.net.len(), d * (d + 1) / 2)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn phase(&self) -> &Phase {
        &self.phase
    }

    pub fn batch_log(&self) -> &[BatchRecord] {
        &self.batch_log
    }

    fn net_query(&mut self) -> Direction {
        let q = self.net.directions[self.next_net % self.net.len()].clone();
        self.next_net += 1;
        q
    }

    fn plan_batch(&mut self, view: &GameView) -> Result<()> {
        let d = view.config.dimension;
        let scale = 2.0 * view.config.noise;
        let cache = view.snapshot()?;
        if !cache.bounded {
            return Ok(());
        }
        let radius = region_radius(&cache)?.0.radius;
        let witness = match extract_witness(&cache, d, scale) {
            Ok(w) => w,
            Err(Error::NoWitness { .. }) => {
                self.phase = Phase::Settled;
                return Ok(());
            }
            Err(e) => return Err(e),
        };
        let (simplex, fit_residual) = fit_regular(&witness, scale)?;
        let x = simplex.vertices();
        for i in 0..x.len() {
            for j in (i + 1)..x.len() {
                self.pending.push_back(Direction::normalize(&x[i] - &x[j])?);
            }
        }
        self.batch_log.push(BatchRecord {
            round: view.round(),
            radius,
            fit_residual,
        });
        Ok(())
    }
}

impl Reconstructor for RobustJungReconstructor {
    fn name(&self) -> &str {
        "robust_jung"
    }

    fn next_query(&mut self, view: &GameView) -> Result<Direction> {
        if self.phase == Phase::Preprocessing {
            if self.next_net < self.net.len() {
                return Ok(self.net_query());
            }
            self.phase = Phase::Refining;
        }
        if self.pending.is_empty()
            && self.phase == Phase::Refining
            && self.batch_log.len() < self.batches
        {
            self.plan_batch(view)?;
        }
        match self.pending.pop_front() {
            Some(q) => Ok(q),
            None => Ok(self.net_query()),
        }
    }

    fn finish(&mut self, view: &GameView) -> Result<Vector> {
        chebyshev_estimate(view)
    }
}

/// Uniformly random directions drawn from the game seed.
#[derive(Clone, Debug)]
pub struct RandomDirections {
    rng: ChaCha8Rng,
}

impl RandomDirections {
    pub fn new(seed: u64) -> Self {
        RandomDirections {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl Reconstructor for RandomDirections {
    fn name(&self) -> &str {
        "random_directions"
    }

    fn next_query(&mut self, view: &GameView) -> Result<Direction> {
        Direction::new(random_unit(view.config.dimension, &mut self.rng))
    }

    fn finish(&mut self, view: &GameView) -> Result<Vector> {
        chebyshev_estimate(view)
    }
}
