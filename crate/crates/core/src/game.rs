//! The round loop of the reconstruction game, its transcript and losses.

use std::fmt;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::geometry::{diameter_pair, Direction, Vector};
use crate::polytope::{
    diameter_direction, project_interval, region_radius, Region, Slab, SlabSystem, VertexCache,
    MAX_ENUM_DIM,
};

/// Version tag written into every serialized trace.
pub const TRACE_VERSION: u32 = 1;

/// Default number of probe directions for [`improper_loss`].
pub const DEFAULT_PROBES: usize = 2000;

#[derive(Clone, Debug, PartialEq)]
pub struct GameConfig {
    pub dimension: usize,
    pub noise: f64,
    pub rounds: usize,
    pub seed: u64,
}

impl GameConfig {
    pub fn new(dimension: usize, noise: f64, rounds: usize, seed: u64) -> Result<Self> {
        let cfg = GameConfig {
            dimension,
            noise,
            rounds,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dimension == 0 {
            return Err(Error::invalid("dimension must be positive"));
        }
        if !(self.noise.is_finite() && self.noise > 0.0) {
            return Err(Error::invalid(format!(
                "noise must be positive, got {}",
                self.noise
            )));
        }
        Ok(())
    }
}

/// A radius or diameter that may be infinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Extent {
    Finite(f64),
    Unbounded,
}

impl Extent {
    pub fn finite(self) -> Option<f64> {
        match self {
            Extent::Finite(x) => Some(x),
            Extent::Unbounded => None,
        }
    }

    pub fn is_bounded(self) -> bool {
        matches!(self, Extent::Finite(_))
    }

    fn scaled(self, factor: f64) -> Self {
        match self {
            Extent::Finite(x) => Extent::Finite(x * factor),
            Extent::Unbounded => Extent::Unbounded,
        }
    }
}

impl fmt::Display for Extent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extent::Finite(x) => write!(f, "{x}"),
            Extent::Unbounded => f.write_str("unbounded"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoundRecord {
    pub query: Direction,
    pub answer: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RoundMetrics {
    /// Number of answered rounds at measurement time.
    pub round: usize,
    pub radius: Extent,
    pub diameter: Extent,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GameTrace {
    pub config: GameConfig,
    pub rounds: Vec<RoundRecord>,
    pub per_round: Vec<RoundMetrics>,
    pub estimate: Option<Vector>,
    pub infeasible: bool,
}

/// What strategies see of a running game.
pub struct GameView<'a> {
    pub config: &'a GameConfig,
    pub slabs: &'a SlabSystem,
    /// Vertex representation, maintained in dimensions up to [`MAX_ENUM_DIM`].
    pub region: Option<&'a Region>,
}

impl GameView<'_> {
    pub fn round(&self) -> usize {
        self.slabs.len()
    }

    pub fn remaining(&self) -> usize {
        self.config.rounds.saturating_sub(self.round())
    }

    pub fn snapshot(&self) -> Result<VertexCache> {
        self.region
            .map(Region::snapshot)
            .ok_or_else(|| Error::invalid("no vertex representation in this dimension"))
    }
}

pub trait Reconstructor {
    fn name(&self) -> &str;
    fn next_query(&mut self, view: &GameView) -> Result<Direction>;
    /// The final point estimate.
    fn finish(&mut self, view: &GameView) -> Result<Vector>;
}

pub trait Adversary {
    fn name(&self) -> &str;
    fn answer(&mut self, query: &Direction, view: &GameView) -> Result<f64>;
    /// A point consistent with every answer given.
    fn reveal(&mut self, view: &GameView) -> Result<Vector>;
    /// Checks internal invariants after a round has been recorded.
    fn audit(&mut self, _view: &GameView) -> Result<()> {
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    /// Record region metrics every `k` rounds (and always after the last);
    /// 0 records only the final region.
    pub metrics_every: usize,
    /// Maintain the vertex representation (only possible up to
    /// [`MAX_ENUM_DIM`]). Without it the game checks membership only and
    /// records no metrics.
    pub track_region: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            metrics_every: 1,
            track_region: true,
        }
    }
}

impl RunOptions {
    pub fn every(metrics_every: usize) -> Self {
        RunOptions {
            metrics_every,
            ..Self::default()
        }
    }

    pub fn membership_only() -> Self {
        RunOptions {
            metrics_every: 0,
            track_region: false,
        }
    }
}

fn measure(region: &Region, round: usize) -> Result<RoundMetrics> {
    let cache = region.snapshot();
    if !cache.bounded {
        return Ok(RoundMetrics {
            round,
            radius: Extent::Unbounded,
            diameter: Extent::Unbounded,
        });
    }
    let (ball, _) = region_radius(&cache)?;
    let diameter = diameter_pair(&cache.vertices).map_or(0.0, |(_, _, d)| d);
    Ok(RoundMetrics {
        round,
        radius: Extent::Finite(ball.radius),
        diameter: Extent::Finite(diameter),
    })
}

pub fn run_game(
    reconstructor: &mut dyn Reconstructor,
    adversary: &mut dyn Adversary,
    cfg: &GameConfig,
) -> Result<GameTrace> {
    run_game_with(reconstructor, adversary, cfg, RunOptions::default())
}

/// Plays `cfg.rounds` rounds. An answer that empties the feasible region, or
/// a revealed secret outside it, ends the game with `infeasible` set. Broken
/// adversary invariants surface as [`Error::InvariantBreach`].
pub fn run_game_with(
    reconstructor: &mut dyn Reconstructor,
    adversary: &mut dyn Adversary,
    cfg: &GameConfig,
    opts: RunOptions,
) -> Result<GameTrace> {
    cfg.validate()?;
    let d = cfg.dimension;
    let mut slabs = SlabSystem::new(d);
    let mut region = if opts.track_region && d <= MAX_ENUM_DIM {
        Some(Region::new(d)?)
    } else {
        None
    };
    let mut trace = GameTrace {
        config: cfg.clone(),
        rounds: Vec::with_capacity(cfg.rounds),
        per_round: Vec::new(),
        estimate: None,
        infeasible: false,
    };
    for t in 1..=cfg.rounds {
        let view = GameView {
            config: cfg,
            slabs: &slabs,
            region: region.as_ref(),
        };
        let query = reconstructor.next_query(&view)?;
        if query.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: query.dim(),
            });
        }
        let answer = adversary.answer(&query, &view)?;
        let slab = Slab::new(query.clone(), answer, cfg.noise)?;
        trace.rounds.push(RoundRecord { query, answer });
        slabs.push(slab.clone())?;
        if let Some(region) = region.as_mut() {
            match region.add_slab(slab) {
                Ok(()) => {}
                Err(Error::Infeasible) => {
                    trace.infeasible = true;
                    return Ok(trace);
                }
                Err(e) => return Err(e),
            }
        }
        adversary.audit(&GameView {
            config: cfg,
            slabs: &slabs,
            region: region.as_ref(),
        })?;
        let due = opts.metrics_every > 0 && t % opts.metrics_every == 0;
        if let Some(region) = region.as_ref().filter(|_| due || t == cfg.rounds) {
            trace.per_round.push(measure(region, t)?);
        }
    }
    if cfg.rounds == 0 {
        if let Some(region) = region.as_ref() {
            trace.per_round.push(measure(region, 0)?);
        }
    }
    let view = GameView {
        config: cfg,
        slabs: &slabs,
        region: region.as_ref(),
    };
    let estimate = reconstructor.finish(&view)?;
    if estimate.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: estimate.len(),
        });
    }
    trace.estimate = Some(estimate);
    let secret = adversary.reveal(&view)?;
    if !slabs.contains(&secret)? {
        trace.infeasible = true;
    }
    Ok(trace)
}

impl GameTrace {
    pub fn slab_system(&self) -> Result<SlabSystem> {
        let mut sys = SlabSystem::new(self.config.dimension);
        for r in &self.rounds {
            sys.push(Slab::new(r.query.clone(), r.answer, self.config.noise)?)?;
        }
        Ok(sys)
    }

    /// Rebuilds the final feasible region from the transcript.
    pub fn final_region(&self) -> Result<Region> {
        let mut region = Region::new(self.config.dimension)?;
        for r in &self.rounds {
            region.add_slab(Slab::new(r.query.clone(), r.answer, self.config.noise)?)?;
        }
        Ok(region)
    }

    pub fn final_metrics(&self) -> Option<RoundMetrics> {
        self.per_round.last().copied()
    }

    pub fn final_radius(&self) -> Extent {
        self.final_metrics().map_or(Extent::Unbounded, |m| m.radius)
    }

    pub fn final_diameter(&self) -> Extent {
        self.final_metrics()
            .map_or(Extent::Unbounded, |m| m.diameter)
    }
}

/// Worst-case distance from the estimate to the final feasible region.
/// Equals the region radius when the estimate is a Chebyshev center.
pub fn proper_loss(trace: &GameTrace) -> Result<Extent> {
    let estimate = trace
        .estimate
        .as_ref()
        .ok_or_else(|| Error::invalid("trace has no estimate"))?;
    let cache = trace.final_region()?.snapshot();
    if !cache.bounded {
        return Ok(Extent::Unbounded);
    }
    Ok(Extent::Finite(
        cache
            .vertices
            .iter()
            .map(|x| (x - estimate).norm())
            .fold(0.0, f64::max),
    ))
}

/// Deterministic spread of `count` probe directions.
pub fn probe_directions(d: usize, count: usize) -> Vec<Direction> {
    match d {
        1 => vec![Direction::axis(1, 0), Direction::axis(1, 0).negated()],
        2 => (0..count)
            .map(|k| {
                let a = std::f64::consts::TAU * k as f64 / count as f64;
                Direction::new(Vector::from_column_slice(&[a.cos(), a.sin()])).expect("unit")
            })
            .collect(),
        _ => {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x7072_6f62_6573);
            (0..count)
                .map(|_| Direction::new(crate::jung_lab::random_unit(d, &mut rng)).expect("unit"))
                .collect()
        }
    }
}

/// Worst error of an improper predictor over a probe set: `probes` spread
/// directions plus the diameter direction of the final region. For arbitrary
/// predictors this is a lower bound on the supremum over all directions.
pub fn improper_loss(
    trace: &GameTrace,
    predictor: &dyn Fn(&Direction) -> f64,
    probes: usize,
) -> Result<f64> {
    if probes < 1000 {
        return Err(Error::invalid(format!(
            "at least 1000 probes required, got {probes}"
        )));
    }
    let cache = trace.final_region()?.snapshot();
    improper_loss_on(&cache, predictor, probes)
}

pub fn improper_loss_on(
    cache: &VertexCache,
    predictor: &dyn Fn(&Direction) -> f64,
    probes: usize,
) -> Result<f64> {
    let d = cache.dim();
    let mut dirs = probe_directions(d, probes);
    if let Some(v) = diameter_direction(cache)? {
        dirs.push(v);
    }
    let mut worst = 0.0f64;
    for v in &dirs {
        let (lo, hi) = project_interval(cache, v)?;
        let p = predictor(v);
        worst = worst.max((p - lo).abs()).max((hi - p).abs());
    }
    Ok(worst)
}

/// The midpoint-of-projection predictor for a bounded region.
pub fn midpoint_predictor(cache: VertexCache) -> Result<impl Fn(&Direction) -> f64> {
    if !cache.bounded {
        return Err(Error::Unbounded);
    }
    Ok(move |v: &Direction| {
        let (lo, hi) = project_interval(&cache, v).expect("bounded");
        0.5 * (lo + hi)
    })
}

/// Multiplies every length in the trace by `factor`. Queries are unchanged.
pub fn rescale_game(trace: &GameTrace, factor: f64) -> Result<GameTrace> {
    if !(factor.is_finite() && factor > 0.0) {
        return Err(Error::invalid(format!(
            "scale factor must be positive, got {factor}"
        )));
    }
    let mut out = trace.clone();
    out.config.noise *= factor;
    for r in &mut out.rounds {
        r.answer *= factor;
    }
    for m in &mut out.per_round {
        m.radius = m.radius.scaled(factor);
        m.diameter = m.diameter.scaled(factor);
    }
    if let Some(e) = out.estimate.as_mut() {
        *e *= factor;
    }
    Ok(out)
}

pub(crate) fn real(x: f64) -> Value {
    Value::String(format!("{x:.16e}"))
}

fn extent(e: Extent) -> Value {
    match e {
        Extent::Finite(x) => real(x),
        Extent::Unbounded => Value::String("unbounded".into()),
    }
}

fn vector(v: &Vector) -> Value {
    Value::Array(v.iter().map(|&x| real(x)).collect())
}

fn bad(what: &str) -> Error {
    Error::invalid(format!("malformed trace: {what}"))
}

fn parse_real(v: &Value, what: &str) -> Result<f64> {
    v.as_str()
        .and_then(|s| s.parse::<f64>().ok())
        .ok_or_else(|| bad(what))
}

fn parse_extent(v: &Value, what: &str) -> Result<Extent> {
    if v.as_str() == Some("unbounded") {
        Ok(Extent::Unbounded)
    } else {
        parse_real(v, what).map(Extent::Finite)
    }
}

fn parse_vector(v: &Value, what: &str) -> Result<Vector> {
    let items = v.as_array().ok_or_else(|| bad(what))?;
    let coords = items
        .iter()
        .map(|x| parse_real(x, what))
        .collect::<Result<Vec<_>>>()?;
    Ok(Vector::from_vec(coords))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| bad(key))
}

fn parse_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| bad(what))
}

impl GameTrace {
    /// Versioned JSON document; reals are decimal strings with 17
    /// significant digits so they round-trip exactly.
    pub fn to_json(&self) -> Value {
        json!({
            "version": TRACE_VERSION,
            "config": {
                "dimension": self.config.dimension,
                "noise": real(self.config.noise),
                "rounds": self.config.rounds,
                "seed": self.config.seed,
            },
            "rounds": self.rounds.iter().map(|r| json!({
                "query": vector(r.query.as_vector()),
                "answer": real(r.answer),
            })).collect::<Vec<_>>(),
            "perRound": self.per_round.iter().map(|m| json!({
                "round": m.round,
                "radius": extent(m.radius),
                "diameter": extent(m.diameter),
            })).collect::<Vec<_>>(),
            "estimate": self.estimate.as_ref().map_or(Value::Null, vector),
            "infeasible": self.infeasible,
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializable")
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value.as_object().ok_or_else(|| bad("not an object"))?;
        let version = field(obj, "version")?
            .as_u64()
            .ok_or_else(|| bad("version"))?;
        if version != TRACE_VERSION as u64 {
            return Err(Error::invalid(format!(
                "unsupported trace version {version}"
            )));
        }
        let cfg = field(obj, "config")?
            .as_object()
            .ok_or_else(|| bad("config"))?;
        let config = GameConfig::new(
            parse_usize(field(cfg, "dimension")?, "dimension")?,
            parse_real(field(cfg, "noise")?, "noise")?,
            parse_usize(field(cfg, "rounds")?, "rounds")?,
            field(cfg, "seed")?.as_u64().ok_or_else(|| bad("seed"))?,
        )?;
        let rounds = field(obj, "rounds")?
            .as_array()
            .ok_or_else(|| bad("rounds"))?
            .iter()
            .map(|r| {
                let r = r.as_object().ok_or_else(|| bad("round"))?;
                Ok(RoundRecord {
                    query: Direction::new(parse_vector(field(r, "query")?, "query")?)?,
                    answer: parse_real(field(r, "answer")?, "answer")?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let per_round = field(obj, "perRound")?
            .as_array()
            .ok_or_else(|| bad("perRound"))?
            .iter()
            .map(|m| {
                let m = m.as_object().ok_or_else(|| bad("metrics"))?;
                Ok(RoundMetrics {
                    round: parse_usize(field(m, "round")?, "round")?,
                    radius: parse_extent(field(m, "radius")?, "radius")?,
                    diameter: parse_extent(field(m, "diameter")?, "diameter")?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let estimate = match field(obj, "estimate")? {
            Value::Null => None,
            v => Some(parse_vector(v, "estimate")?),
        };
        let infeasible = field(obj, "infeasible")?
            .as_bool()
            .ok_or_else(|| bad("infeasible"))?;
        Ok(GameTrace {
            config,
            rounds,
            per_round,
            estimate,
            infeasible,
        })
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::enumerate_vertices;

    /// Queries a fixed list cyclically and outputs the Chebyshev center.
    struct Scripted(Vec<Direction>, usize);

    impl Reconstructor for Scripted {
        fn name(&self) -> &str {
            "scripted"
        }
        fn next_query(&mut self, _: &GameView) -> Result<Direction> {
            let q = self.0[self.1 % self.0.len()].clone();
            self.1 += 1;
            Ok(q)
        }
        fn finish(&mut self, view: &GameView) -> Result<Vector> {
            let cache = view.snapshot()?;
            if cache.bounded {
                Ok(region_radius(&cache)?.0.center)
            } else {
                Ok(Vector::zeros(view.config.dimension))
            }
        }
    }

    struct Honest(Vector);

    impl Adversary for Honest {
        fn name(&self) -> &str {
            "honest"
        }
        fn answer(&mut self, q: &Direction, _: &GameView) -> Result<f64> {
            Ok(q.dot(&self.0))
        }
        fn reveal(&mut self, _: &GameView) -> Result<Vector> {
            Ok(self.0.clone())
        }
    }

    /// Answers that drift away so the region empties.
    struct Liar(f64);

    impl Adversary for Liar {
        fn name(&self) -> &str {
            "liar"
        }
        fn answer(&mut self, _: &Direction, _: &GameView) -> Result<f64> {
            self.0 += 5.0;
            Ok(self.0)
        }
        fn reveal(&mut self, view: &GameView) -> Result<Vector> {
            Ok(Vector::zeros(view.config.dimension))
        }
    }

    fn axes(d: usize) -> Vec<Direction> {
        (0..d).map(|k| Direction::axis(d, k)).collect()
    }

    #[test]
    fn zero_rounds() {
        let cfg = GameConfig::new(2, 0.5, 0, 1).unwrap();
        let trace = run_game(
            &mut Scripted(axes(2), 0),
            &mut Honest(Vector::zeros(2)),
            &cfg,
        )
        .unwrap();
        assert!(trace.rounds.is_empty());
        assert_eq!(trace.estimate, Some(Vector::zeros(2)));
        assert_eq!(trace.final_radius(), Extent::Unbounded);
        assert_eq!(proper_loss(&trace).unwrap(), Extent::Unbounded);
    }

    #[test]
    fn square_game_losses() {
        let cfg = GameConfig::new(2, 0.5, 2, 1).unwrap();
        let secret = Vector::from_column_slice(&[0.1, -0.2]);
        let trace = run_game(&mut Scripted(axes(2), 0), &mut Honest(secret.clone()), &cfg).unwrap();
        assert!(!trace.infeasible);
        assert_eq!(trace.per_round.len(), 2);
        assert_eq!(trace.per_round[0].radius, Extent::Unbounded);
        let r = trace.final_radius().finite().unwrap();
        assert!((r - 0.5f64.sqrt()).abs() < 1e-12);
        let loss = proper_loss(&trace).unwrap().finite().unwrap();
        assert!((loss - 0.5f64.sqrt()).abs() < 1e-12);
        let mut corner = trace.clone();
        corner.estimate = Some(&secret + Vector::from_column_slice(&[0.5, 0.5]));
        let loss = proper_loss(&corner).unwrap().finite().unwrap();
        assert!((loss - 2f64.sqrt()).abs() < 1e-12);

        let cache = trace.final_region().unwrap().snapshot();
        let mid = midpoint_predictor(cache.clone()).unwrap();
        assert!((mid(&Direction::axis(2, 0)) - 0.1).abs() < 1e-12);
        let imp = improper_loss(&trace, &mid, 1000).unwrap();
        assert!((imp - 0.5f64.sqrt()).abs() < 1e-9);
        let zero = |_: &Direction| 0.0;
        let far = improper_loss(&trace, &zero, 1000).unwrap();
        assert!(far >= secret.norm() - 0.5 * 2f64.sqrt() - 1e-9);
        assert!(improper_loss(&trace, &mid, 10).is_err());
    }

    #[test]
    fn metrics_every_k() {
        let cfg = GameConfig::new(2, 0.5, 7, 1).unwrap();
        let opts = RunOptions::every(3);
        let trace = run_game_with(
            &mut Scripted(axes(2), 0),
            &mut Honest(Vector::zeros(2)),
            &cfg,
            opts,
        )
        .unwrap();
        let rounds: Vec<usize> = trace.per_round.iter().map(|m| m.round).collect();
        assert_eq!(rounds, vec![3, 6, 7]);
        let only_final = run_game_with(
            &mut Scripted(axes(2), 0),
            &mut Honest(Vector::zeros(2)),
            &cfg,
            RunOptions::every(0),
        )
        .unwrap();
        assert_eq!(only_final.per_round.len(), 1);
        assert_eq!(only_final.rounds, trace.rounds);
    }

    #[test]
    fn infeasible_answers_are_flagged() {
        let cfg = GameConfig::new(1, 0.5, 3, 1).unwrap();
        let dirs = vec![Direction::axis(1, 0)];
        let trace = run_game(&mut Scripted(dirs, 0), &mut Liar(0.0), &cfg).unwrap();
        assert!(trace.infeasible);
        assert_eq!(trace.rounds.len(), 2);
    }

    #[test]
    fn high_dimension_runs_without_vertices() {
        let cfg = GameConfig::new(10, 1.0, 5, 1).unwrap();
        struct Axes(usize);
        impl Reconstructor for Axes {
            fn name(&self) -> &str {
                "axes"
            }
            fn next_query(&mut self, view: &GameView) -> Result<Direction> {
                self.0 += 1;
                Ok(Direction::axis(view.config.dimension, self.0 - 1))
            }
            fn finish(&mut self, view: &GameView) -> Result<Vector> {
                assert!(view.snapshot().is_err());
                Ok(Vector::zeros(view.config.dimension))
            }
        }
        let trace = run_game(&mut Axes(0), &mut Honest(Vector::zeros(10)), &cfg).unwrap();
        assert_eq!(trace.rounds.len(), 5);
        assert!(trace.per_round.is_empty());
        assert!(!trace.infeasible);
    }

    #[test]
    fn config_validation() {
        assert!(GameConfig::new(0, 1.0, 1, 0).is_err());
        assert!(GameConfig::new(2, 0.0, 1, 0).is_err());
        assert!(GameConfig::new(2, -1.0, 1, 0).is_err());
    }

    #[test]
    fn rescale_properties() {
        let cfg = GameConfig::new(2, 0.5, 3, 9).unwrap();
        let dirs = vec![
            Direction::axis(2, 0),
            Direction::normalize(Vector::from_column_slice(&[1.0, 1.0])).unwrap(),
            Direction::axis(2, 1),
        ];
        let trace = run_game(
            &mut Scripted(dirs, 0),
            &mut Honest(Vector::from_column_slice(&[0.3, 0.1])),
            &cfg,
        )
        .unwrap();
        assert_eq!(rescale_game(&trace, 1.0).unwrap(), trace);
        let doubled = rescale_game(&trace, 2.0).unwrap();
        let a = proper_loss(&trace).unwrap().finite().unwrap();
        let b = proper_loss(&doubled).unwrap().finite().unwrap();
        assert!((b - 2.0 * a).abs() < 1e-12);
        assert!(rescale_game(&trace, 0.0).is_err());
        for (x, y) in trace.rounds.iter().zip(&doubled.rounds) {
            assert_eq!(x.query, y.query);
        }
    }

    #[test]
    fn json_round_trip() {
        let cfg = GameConfig::new(2, 0.5, 4, u64::MAX).unwrap();
        let trace = run_game(
            &mut Scripted(axes(2), 0),
            &mut Honest(Vector::from_column_slice(&[1.0 / 3.0, -0.1])),
            &cfg,
        )
        .unwrap();
        let text = trace.to_json_string();
        assert!(text.contains("\"unbounded\""));
        assert!(text.contains("\"perRound\""));
        let back = GameTrace::from_json_str(&text).unwrap();
        assert_eq!(back, trace);
        assert!(GameTrace::from_json_str("{\"version\": 99}").is_err());
    }

    #[test]
    fn seventeen_significant_digits() {
        let Value::String(s) = real(0.1) else {
            panic!()
        };
        let mantissa = s.split('e').next().unwrap().replace(['.', '-'], "");
        assert_eq!(mantissa.len(), 17);
        assert_eq!(s.parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn probe_directions_are_unit_and_distinct() {
        for d in 1..=4 {
            let dirs = probe_directions(d, 1000);
            assert!(dirs.iter().all(|v| (v.norm() - 1.0).abs() < 1e-12));
            assert!(dirs.len() >= 2);
        }
        let cache = enumerate_vertices(&SlabSystem::new(2), 1.0).unwrap();
        assert!(midpoint_predictor(cache).is_err());
    }
}
