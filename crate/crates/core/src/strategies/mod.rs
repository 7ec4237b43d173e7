//! Reconstructor and adversary strategies, and lookup by name.

mod adversaries;
mod reconstructors;

pub use adversaries::{
    FixedSetMidpoint, RotatingSimplex, SimplexState, ZeroAnswer, ROTATING_NOISE, SAFETY_PROBES,
};
pub use reconstructors::{
    chebyshev_estimate, default_beta, preprocessing_alpha, BatchRecord, CoverNetReconstructor,
    Phase, RandomDirections, RobustJungReconstructor,
};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::game::{midpoint_predictor, Adversary, GameConfig, GameTrace, Reconstructor};
use crate::geometry::{Direction, Vector};
use crate::nets::DEFAULT_NET_SEED;

pub const RECONSTRUCTORS: &[&str] = &["cover_net", "robust_jung", "random_directions"];
pub const ADVERSARIES: &[&str] = &[
    "fixed_set_midpoint",
    "midpoint_simplex",
    "truthful",
    "rotating_simplex",
    "zero",
];

/// A strategy name with its parameters, as written in experiment configs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrategySpec {
    pub name: String,
    #[serde(default)]
    pub params: Map<String, Value>,
}

impl StrategySpec {
    pub fn new(name: &str) -> Self {
        StrategySpec {
            name: name.to_string(),
            params: Map::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    fn f64_param(&self, key: &str) -> Result<Option<f64>> {
        match self.params.get(key) {
            None => Ok(None),
            Some(v) => v.as_f64().map(Some).ok_or_else(|| {
                Error::config(format!("{}: parameter {key} must be a number", self.name))
            }),
        }
    }

    fn u64_param(&self, key: &str) -> Result<Option<u64>> {
        match self.params.get(key) {
            None => Ok(None),
            Some(v) => v.as_u64().map(Some).ok_or_else(|| {
                Error::config(format!(
                    "{}: parameter {key} must be a non-negative integer",
                    self.name
                ))
            }),
        }
    }

    fn vector_param(&self, value: &Value, d: usize) -> Result<Vector> {
        let coords = value
            .as_array()
            .and_then(|a| a.iter().map(Value::as_f64).collect::<Option<Vec<_>>>())
            .ok_or_else(|| Error::config(format!("{}: expected a list of numbers", self.name)))?;
        if coords.len() != d {
            return Err(Error::config(format!(
                "{}: point has {} coordinates, game dimension is {d}",
                self.name,
                coords.len()
            )));
        }
        Ok(Vector::from_vec(coords))
    }

    /// Rejects names outside `known`.
    pub fn check_known(&self, known: &[&str]) -> Result<()> {
        if known.contains(&self.name.as_str()) {
            Ok(())
        } else {
            Err(Error::config(format!(
                "unknown strategy {:?}; expected one of {}",
                self.name,
                known.join(", ")
            )))
        }
    }
}

fn as_config_error(e: Error) -> Error {
    match e {
        Error::InvalidArgument(msg) => Error::Config(msg),
        other => other,
    }
}

pub fn build_reconstructor(
    spec: &StrategySpec,
    cfg: &GameConfig,
) -> Result<Box<dyn Reconstructor + Send>> {
    spec.check_known(RECONSTRUCTORS)?;
    let d = cfg.dimension;
    let built: Box<dyn Reconstructor + Send> = match spec.name.as_str() {
        "cover_net" => {
            let alpha = spec.f64_param("alpha")?.unwrap_or(0.1);
            let seed = spec.u64_param("net_seed")?.unwrap_or(DEFAULT_NET_SEED);
            Box::new(CoverNetReconstructor::with_seed(d, alpha, seed).map_err(as_config_error)?)
        }
        "robust_jung" => {
            let beta = spec.f64_param("beta")?.unwrap_or(default_beta(d));
            let batches = spec
                .u64_param("batches")?
                .map_or(usize::MAX, |b| b as usize);
            Box::new(RobustJungReconstructor::new(d, beta, batches).map_err(as_config_error)?)
        }
        "random_directions" => Box::new(RandomDirections::new(cfg.seed)),
        _ => unreachable!("checked above"),
    };
    Ok(built)
}

pub fn build_adversary(spec: &StrategySpec, cfg: &GameConfig) -> Result<Box<dyn Adversary + Send>> {
    spec.check_known(ADVERSARIES)?;
    let d = cfg.dimension;
    let built: Box<dyn Adversary + Send> = match spec.name.as_str() {
        "fixed_set_midpoint" => {
            let points = spec
                .params
                .get("points")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::config("fixed_set_midpoint: needs a points list"))?
                .iter()
                .map(|p| spec.vector_param(p, d))
                .collect::<Result<Vec<_>>>()?;
            Box::new(FixedSetMidpoint::new(points, cfg.noise).map_err(as_config_error)?)
        }
        "midpoint_simplex" => {
            Box::new(FixedSetMidpoint::simplex(d, cfg.noise).map_err(as_config_error)?)
        }
        "truthful" => {
            let secret = match spec.params.get("secret") {
                Some(v) => spec.vector_param(v, d)?,
                None => Vector::zeros(d),
            };
            Box::new(FixedSetMidpoint::truthful(secret))
        }
        "rotating_simplex" => {
            if cfg.noise != ROTATING_NOISE {
                return Err(Error::config(format!(
                    "rotating_simplex requires noise 0.5, got {}",
                    cfg.noise
                )));
            }
            let alpha0 = spec.f64_param("alpha0")?.unwrap_or(1.0 / 20.0);
            Box::new(RotatingSimplex::new(d, alpha0).map_err(as_config_error)?)
        }
        "zero" => Box::new(ZeroAnswer::new(cfg.seed)),
        _ => unreachable!("checked above"),
    };
    Ok(built)
}

/// The improper predictor that outputs the midpoint of the final region's
/// projection onto the queried line.
pub fn improper_midpoint_predictor(trace: &GameTrace) -> Result<impl Fn(&Direction) -> f64> {
    midpoint_predictor(trace.final_region()?.snapshot())
}
