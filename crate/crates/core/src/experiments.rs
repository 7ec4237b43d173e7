//! Sweeps over `(T, seed)` grids, rate fits, and the dimension and
//! asymptotic experiments, with CSV and JSON persistence.

use std::fmt;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::game::{
    improper_loss, midpoint_predictor, proper_loss, run_game_with, Extent, GameConfig, GameTrace,
    RunOptions, DEFAULT_PROBES,
};
use crate::geometry::{jung_constant, Vector};
use crate::strategies::{
    build_adversary, build_reconstructor, CoverNetReconstructor, FixedSetMidpoint,
    RandomDirections, StrategySpec, ZeroAnswer, ADVERSARIES, RECONSTRUCTORS,
};

/// Written as the first line of every sweep CSV.
pub const CSV_SCHEMA: &str = "# lingame-sweep v1";

/// Excess below this is reported as converged and left out of fits.
pub const EXCESS_FLOOR: f64 = 1e-12;

/// Caps of [`dimension_experiment`].
pub const MAX_DIMENSION_ROUNDS: u64 = 1 << 16;
pub const MAX_DIMENSION: usize = 256;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Objective {
    /// Radius of the final region against `2·Jung_d·δ`.
    #[default]
    Proper,
    /// Midpoint-predictor error against `δ`.
    Improper,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ExperimentSpec {
    pub name: String,
    pub dimension: usize,
    pub noise: f64,
    pub rounds_grid: Vec<usize>,
    pub reconstructor: StrategySpec,
    pub adversary: StrategySpec,
    pub seeds: Vec<u64>,
    #[serde(default = "default_metrics_every")]
    pub metrics_every: usize,
    #[serde(default)]
    pub objective: Objective,
}

fn default_metrics_every() -> usize {
    1
}

impl ExperimentSpec {
    pub fn new(
        name: &str,
        dimension: usize,
        noise: f64,
        rounds_grid: Vec<usize>,
        reconstructor: StrategySpec,
        adversary: StrategySpec,
    ) -> Self {
        ExperimentSpec {
            name: name.to_string(),
            dimension,
            noise,
            rounds_grid,
            reconstructor,
            adversary,
            seeds: vec![0],
            metrics_every: 1,
            objective: Objective::Proper,
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let spec: ExperimentSpec =
            serde_json::from_str(text).map_err(|e| Error::config(format!("bad spec: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.rounds_grid.is_empty() {
            return Err(Error::config("roundsGrid is empty"));
        }
        if self.seeds.is_empty() {
            return Err(Error::config("seeds is empty"));
        }
        if self.dimension == 0 {
            return Err(Error::config("dimension must be positive"));
        }
        if !(self.noise.is_finite() && self.noise > 0.0) {
            return Err(Error::config(format!(
                "noise must be positive, got {}",
                self.noise
            )));
        }
        self.reconstructor.check_known(RECONSTRUCTORS)?;
        self.adversary.check_known(ADVERSARIES)?;
        Ok(())
    }

    /// The `(T, seed)` cells in spec order: T-major.
    pub fn cells(&self) -> Vec<(usize, u64)> {
        self.rounds_grid
            .iter()
            .flat_map(|&t| self.seeds.iter().map(move |&s| (t, s)))
            .collect()
    }

    /// Content address of one cell's trace.
    pub fn trace_name(&self, rounds: usize, seed: u64) -> String {
        let mut h = Sha256::new();
        h.update(serde_json::to_vec(self).expect("serializable"));
        h.update(rounds.to_le_bytes());
        h.update(seed.to_le_bytes());
        format!("trace-{}.json", &hex::encode(h.finalize())[..16])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Converged,
    Unbounded,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub name: String,
    pub dimension: usize,
    pub noise: f64,
    pub rounds: usize,
    pub seed: u64,
    pub radius: Extent,
    pub diameter: Extent,
    pub excess: Option<f64>,
    pub wallclock_ms: f64,
    pub status: Status,
}

impl SweepRow {
    /// Usable for rate fits.
    pub fn usable(&self) -> bool {
        self.status == Status::Ok && self.excess.is_some()
    }
}

#[derive(Serialize, Deserialize)]
struct CsvRecord {
    name: String,
    d: usize,
    delta: String,
    #[serde(rename = "T")]
    rounds: usize,
    seed: u64,
    radius: String,
    diameter: String,
    excess: String,
    wallclock_ms: String,
    status: Status,
}

fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_extent(e: Extent) -> String {
    match e {
        Extent::Finite(x) => fmt_real(x),
        Extent::Unbounded => "unbounded".into(),
    }
}

fn parse_real(s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::invalid(format!("not a number: {s:?}")))
}

fn parse_extent(s: &str) -> Result<Extent> {
    if s.trim() == "unbounded" {
        Ok(Extent::Unbounded)
    } else {
        parse_real(s).map(Extent::Finite)
    }
}

impl From<&SweepRow> for CsvRecord {
    fn from(r: &SweepRow) -> Self {
        CsvRecord {
            name: r.name.clone(),
            d: r.dimension,
            delta: fmt_real(r.noise),
            rounds: r.rounds,
            seed: r.seed,
            radius: fmt_extent(r.radius),
            diameter: fmt_extent(r.diameter),
            excess: r.excess.map(fmt_real).unwrap_or_default(),
            wallclock_ms: format!("{:.3}", r.wallclock_ms),
            status: r.status,
        }
    }
}

impl TryFrom<CsvRecord> for SweepRow {
    type Error = Error;

    fn try_from(r: CsvRecord) -> Result<Self> {
        Ok(SweepRow {
            name: r.name,
            dimension: r.d,
            noise: parse_real(&r.delta)?,
            rounds: r.rounds,
            seed: r.seed,
            radius: parse_extent(&r.radius)?,
            diameter: parse_extent(&r.diameter)?,
            excess: match r.excess.trim() {
                "" => None,
                s => Some(parse_real(s)?),
            },
            wallclock_ms: parse_real(&r.wallclock_ms)?,
            status: r.status,
        })
    }
}

pub fn write_csv<W: Write>(rows: &[SweepRow], mut out: W) -> Result<()> {
    writeln!(out, "{CSV_SCHEMA}")?;
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(CsvRecord::from(r))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a sweep CSV; `#` lines are skipped.
pub fn read_csv<R: Read>(input: R) -> Result<Vec<SweepRow>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(input);
    rdr.deserialize::<CsvRecord>()
        .map(|rec| SweepRow::try_from(rec?))
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SweepOptions {
    /// Worker threads; 0 uses the rayon default.
    pub jobs: usize,
    /// Overrides the spec's `metricsEvery`.
    pub metrics_every: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    /// `(content-addressed file name, trace)` per cell, in row order.
    pub traces: Vec<(String, GameTrace)>,
}

impl SweepOutcome {
    pub fn infeasible_rows(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.status == Status::Infeasible)
            .count()
    }

    /// Writes `<dir>/<name>.csv` and `<dir>/traces/*.json`; returns the CSV path.
    pub fn write_to(&self, spec: &ExperimentSpec, dir: &Path) -> Result<PathBuf> {
        let traces = dir.join("traces");
        fs::create_dir_all(&traces)?;
        for (file, trace) in &self.traces {
            fs::write(traces.join(file), trace.to_json_string())?;
        }
        let path = dir.join(format!("{}.csv", spec.name));
        write_csv(&self.rows, fs::File::create(&path)?)?;
        Ok(path)
    }
}

fn run_cell(
    spec: &ExperimentSpec,
    rounds: usize,
    seed: u64,
    opts: RunOptions,
) -> Result<(SweepRow, GameTrace)> {
    let started = Instant::now();
    let cfg = GameConfig::new(spec.dimension, spec.noise, rounds, seed)
        .map_err(|e| Error::config(e.to_string()))?;
    let mut rec = build_reconstructor(&spec.reconstructor, &cfg)?;
    let mut adv = build_adversary(&spec.adversary, &cfg)?;
    let trace = run_game_with(rec.as_mut(), adv.as_mut(), &cfg, opts)?;
    let (radius, diameter) = (trace.final_radius(), trace.final_diameter());
    let mut status = if trace.infeasible {
        Status::Infeasible
    } else if !radius.is_bounded() {
        Status::Unbounded
    } else {
        Status::Ok
    };
    let excess = match (status, spec.objective) {
        (Status::Ok, Objective::Proper) => radius
            .finite()
            .map(|r| r - 2.0 * jung_constant(cfg.dimension) * cfg.noise),
        (Status::Ok, Objective::Improper) => {
            let predictor = midpoint_predictor(trace.final_region()?.snapshot())?;
            Some(improper_loss(&trace, &predictor, DEFAULT_PROBES)? - cfg.noise)
        }
        _ => None,
    };
    if excess.is_some_and(|e| e < EXCESS_FLOOR) {
        status = Status::Converged;
    }
    let row = SweepRow {
        name: spec.name.clone(),
        dimension: cfg.dimension,
        noise: cfg.noise,
        rounds,
        seed,
        radius,
        diameter,
        excess,
        wallclock_ms: started.elapsed().as_secs_f64() * 1e3,
        status,
    };
    Ok((row, trace))
}

fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::config(format!("cannot start {jobs} workers: {e}")))?;
    Ok(pool.install(f))
}

/// Runs every `(T, seed)` cell of the spec on a bounded worker pool. Rows
/// come back in spec order regardless of scheduling.
pub fn sweep(spec: &ExperimentSpec, opts: SweepOptions) -> Result<SweepOutcome> {
    spec.validate()?;
    let run = RunOptions::every(opts.metrics_every.unwrap_or(spec.metrics_every));
    let cells = spec.cells();
    let results = with_pool(opts.jobs, || {
        cells
            .par_iter()
            .map(|&(t, s)| run_cell(spec, t, s, run))
            .collect::<Result<Vec<_>>>()
    })??;
    let mut rows = Vec::with_capacity(results.len());
    let mut traces = Vec::with_capacity(results.len());
    for (row, trace) in results {
        traces.push((spec.trace_name(row.rounds, row.seed), trace));
        rows.push(row);
    }
    Ok(SweepOutcome { rows, traces })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum RateModel {
    /// `log2(-log2 ε)` against `T`.
    DoublyExponential,
    /// `ln ε` against `ln T`.
    PowerLaw,
}

impl FromStr for RateModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "doublyExponential" | "doubly-exponential" => Ok(RateModel::DoublyExponential),
            "powerLaw" | "power-law" => Ok(RateModel::PowerLaw),
            _ => Err(Error::config(format!(
                "unknown model {s:?}; expected doublyExponential or powerLaw"
            ))),
        }
    }
}

impl fmt::Display for RateModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RateModel::DoublyExponential => "doublyExponential",
            RateModel::PowerLaw => "powerLaw",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RateFit {
    pub model: RateModel,
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    /// Points that entered the regression.
    pub points: usize,
}

/// Ordinary least squares `y = slope·x + intercept`, with `r²` clamped to
/// `[0, 1]`.
fn least_squares(xy: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = xy.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xy
        .iter()
        .map(|p| (p.1 - slope * p.0 - intercept).powi(2))
        .sum();
    let r2 = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    (slope, intercept, r2.clamp(0.0, 1.0))
}

/// Fits `(T, excess)` points. Doubly-exponential fits use only
/// `EXCESS_FLOOR <= ε < 1`; power-law fits only positive excess.
pub fn fit_rate(points: &[(f64, f64)], model: RateModel) -> Result<RateFit> {
    let xy: Vec<(f64, f64)> = match model {
        RateModel::DoublyExponential => points
            .iter()
            .filter(|(_, e)| *e >= EXCESS_FLOOR && *e < 1.0)
            .map(|&(t, e)| (t, (-e.log2()).log2()))
            .collect(),
        RateModel::PowerLaw => points
            .iter()
            .filter(|(t, e)| *t > 0.0 && *e > 0.0)
            .map(|&(t, e)| (t.ln(), e.ln()))
            .collect(),
    };
    let distinct_x = {
        let mut xs: Vec<u64> = xy.iter().map(|p| p.0.to_bits()).collect();
        xs.sort_unstable();
        xs.dedup();
        xs.len()
    };
    if xy.len() < 4 || distinct_x < 2 {
        return Err(Error::InsufficientData(format!(
            "{model} fit needs at least 4 usable points at 2 distinct T, got {}",
            xy.len()
        )));
    }
    let (slope, intercept, r2) = least_squares(&xy);
    Ok(RateFit {
        model,
        slope,
        intercept,
        r2,
        points: xy.len(),
    })
}

/// [`fit_rate`] over the usable rows of a sweep.
pub fn fit_rows(rows: &[SweepRow], model: RateModel) -> Result<RateFit> {
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.usable())
        .map(|r| (r.rounds as f64, r.excess.expect("usable")))
        .collect();
    fit_rate(&points, model)
}

pub fn fit_csv<R: Read>(input: R, model: RateModel) -> Result<RateFit> {
    fit_rows(&read_csv(input)?, model)
}

/// The points (sorted by `T`) from the last rise in excess up to the first
/// one under [`EXCESS_FLOOR`]: the stretch where contraction is visible
/// before double precision runs out.
pub fn pre_underflow_window(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut sorted: Vec<(f64, f64)> = points.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let end = sorted
        .iter()
        .position(|p| p.1 < EXCESS_FLOOR)
        .unwrap_or(sorted.len());
    let sorted = &sorted[..end];
    let mut start = 0;
    for k in 1..sorted.len() {
        if sorted[k].1 >= sorted[k - 1].1 || sorted[k - 1].1 >= 1.0 {
            start = k;
        }
    }
    sorted[start..].to_vec()
}

/// Smallest `K` with `ε_{k+1} <= K·ε_k²` for every consecutive pair.
pub fn quadratic_constant(excesses: &[f64]) -> Option<f64> {
    excesses
        .windows(2)
        .map(|w| w[1] / (w[0] * w[0]))
        .reduce(f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DimensionRow {
    pub d: usize,
    /// Rounds played after capping.
    pub rounds: u64,
    pub requested_rounds: u64,
    pub capped: bool,
    pub delta: f64,
    pub trials: usize,
    /// Trials where two Gaussian samples were both feasible and `>= √d` apart.
    pub successes: usize,
    pub empirical: f64,
    pub floor: f64,
}

/// `1 - 2/T - (e^{1/2}/2)^{d/2}`.
pub fn dimension_floor(d: usize, rounds: u64) -> f64 {
    1.0 - 2.0 / rounds as f64 - (0.5f64.exp() / 2.0).powf(d as f64 / 2.0)
}

/// Noise `2√(ln T)` used by the dimension experiment.
pub fn dimension_noise(rounds: u64) -> f64 {
    2.0 * (rounds as f64).ln().sqrt()
}

/// Zero answers to random queries at noise `2√(ln T)`, then checks whether
/// two independent standard Gaussians are both feasible and `√d` apart.
/// Membership checks only. Dimensions above [`MAX_DIMENSION`] are dropped
/// and `T` is capped at [`MAX_DIMENSION_ROUNDS`].
pub fn dimension_experiment(
    d_grid: &[usize],
    t_rule: &(dyn Fn(usize) -> u64 + Sync),
    trials: usize,
    seed: u64,
) -> Result<Vec<DimensionRow>> {
    if trials < 30 {
        return Err(Error::config(format!(
            "at least 30 trials required, got {trials}"
        )));
    }
    let mut rows = Vec::new();
    for &d in d_grid.iter().filter(|&&d| (1..=MAX_DIMENSION).contains(&d)) {
        let requested = t_rule(d);
        let rounds = requested.clamp(2, MAX_DIMENSION_ROUNDS);
        let delta = dimension_noise(rounds);
        let outcomes = (0..trials)
            .into_par_iter()
            .map(|trial| -> Result<bool> {
                let trial_seed = seed ^ ((d as u64) << 32) ^ trial as u64;
                let cfg = GameConfig::new(d, delta, rounds as usize, trial_seed)?;
                let mut rec = RandomDirections::new(trial_seed);
                let mut adv = ZeroAnswer::new(trial_seed);
                let trace = run_game_with(&mut rec, &mut adv, &cfg, RunOptions::membership_only())?;
                let sys = trace.slab_system()?;
                let mut rng = ChaCha8Rng::seed_from_u64(trial_seed ^ 0x6761_7573);
                let mut gauss = || Vector::from_fn(d, |_, _| StandardNormal.sample(&mut rng));
                let (x, y) = (gauss(), gauss());
                Ok(sys.contains(&x)? && sys.contains(&y)? && (&x - &y).norm() >= (d as f64).sqrt())
            })
            .collect::<Result<Vec<bool>>>()?;
        let successes = outcomes.iter().filter(|&&ok| ok).count();
        rows.push(DimensionRow {
            d,
            rounds,
            requested_rounds: requested,
            capped: rounds != requested,
            delta,
            trials,
            successes,
            empirical: successes as f64 / trials as f64,
            floor: dimension_floor(d, rounds),
        });
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AsymptoticRow {
    pub d: usize,
    pub delta: f64,
    pub alpha: f64,
    /// Net size, which is also the number of rounds played.
    pub rounds: usize,
    pub loss: f64,
    /// `2·Jung_d·δ`.
    pub lower: f64,
    /// `2·Jung_d·δ / cos α`.
    pub upper: f64,
    /// `√(2d/(d+1))·δ`.
    pub target: f64,
    pub squeezed: bool,
}

/// Cover-net reconstructor against the midpoint-simplex adversary for each
/// `(δ, α)`, checking `2·Jung_d·δ <= loss <= 2·Jung_d·δ/cos α`.
pub fn asymptotic_experiment(
    d: usize,
    deltas: &[f64],
    alphas: &[f64],
) -> Result<Vec<AsymptoticRow>> {
    if alphas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::config("alpha grid must be strictly decreasing"));
    }
    let cells: Vec<(f64, f64)> = deltas
        .iter()
        .flat_map(|&delta| alphas.iter().map(move |&alpha| (delta, alpha)))
        .collect();
    cells
        .par_iter()
        .map(|&(delta, alpha)| {
            let mut rec = CoverNetReconstructor::new(d, alpha)?;
            let rounds = rec.net().len();
            let mut adv = FixedSetMidpoint::simplex(d, delta)?;
            let cfg = GameConfig::new(d, delta, rounds, 0)?;
            let trace = run_game_with(&mut rec, &mut adv, &cfg, RunOptions::every(0))?;
            if trace.infeasible {
                return Err(Error::InvariantBreach(format!(
                    "midpoint-simplex adversary became infeasible at δ={delta}, α={alpha}"
                )));
            }
            let loss = proper_loss(&trace)?.finite().ok_or(Error::Unbounded)?;
            let lower = 2.0 * jung_constant(d) * delta;
            let upper = lower / alpha.cos();
            Ok(AsymptoticRow {
                d,
                delta,
                alpha,
                rounds,
                loss,
                lower,
                upper,
                target: (2.0 * d as f64 / (d as f64 + 1.0)).sqrt() * delta,
                squeezed: loss >= lower - 1e-9 && loss <= upper + 1e-9,
            })
        })
        .collect()
}

/// `δ / cos(T^{-1/(d-1)})`: no `T`-query reconstructor has improper error
/// below this against zero answers.
pub fn improper_lower_bound(d: usize, rounds: usize, delta: f64) -> f64 {
    if d < 2 {
        return delta;
    }
    delta / (rounds as f64).powf(-1.0 / (d as f64 - 1.0)).cos()
}

/// Writes any serializable rows as CSV under the schema comment.
pub fn write_rows<W: Write, T: Serialize>(rows: &[T], mut out: W) -> Result<()> {
    writeln!(out, "{CSV_SCHEMA}")?;
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_spec() -> ExperimentSpec {
        let mut spec = ExperimentSpec::new(
            "toy",
            2,
            0.5,
            vec![0, 4, 12],
            StrategySpec::new("cover_net").with("alpha", 0.3),
            StrategySpec::new("midpoint_simplex"),
        );
        spec.seeds = vec![1, 2];
        spec
    }

    #[test]
    fn synthetic_doubly_exponential_slope() {
        let pts: Vec<(f64, f64)> = (1..=8)
            .map(|t| (t as f64, 2f64.powf(-(2f64.powf(0.5 * t as f64)))))
            .collect();
        let fit = fit_rate(&pts, RateModel::DoublyExponential).unwrap();
        assert!((fit.slope - 0.5).abs() < 1e-6, "{fit:?}");
        assert!(fit.r2 > 0.999_999);
    }

    #[test]
    fn synthetic_power_law_slope() {
        let pts: Vec<(f64, f64)> = (4..=12)
            .map(|k| {
                let t = 2f64.powi(k);
                (t, (1.0 + 1.0 / t) - 1.0)
            })
            .collect();
        let fit = fit_rate(&pts, RateModel::PowerLaw).unwrap();
        assert!((fit.slope + 1.0).abs() < 1e-6, "{fit:?}");
    }

    #[test]
    fn fit_needs_four_points() {
        let pts = [(1.0, 0.1), (2.0, 0.01), (3.0, 1e-4)];
        assert!(matches!(
            fit_rate(&pts, RateModel::DoublyExponential),
            Err(Error::InsufficientData(_))
        ));
        let neg = [(1.0, -0.1), (2.0, 0.0), (3.0, -1.0), (4.0, 0.0)];
        assert!(matches!(
            fit_rate(&neg, RateModel::PowerLaw),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn r2_stays_in_unit_interval() {
        let pts = [(1.0, 0.5), (2.0, 0.01), (3.0, 0.4), (4.0, 0.02), (5.0, 0.3)];
        let fit = fit_rate(&pts, RateModel::DoublyExponential).unwrap();
        assert!((0.0..=1.0).contains(&fit.r2));
    }

    #[test]
    fn window_cuts_at_floor_and_last_rise() {
        let pts = [
            (1.0, 0.3),
            (2.0, 0.4),
            (3.0, 1e-2),
            (4.0, 1e-4),
            (5.0, 1e-9),
            (6.0, 1e-15),
            (7.0, 1e-3),
        ];
        let w = pre_underflow_window(&pts);
        assert_eq!(
            w.iter().map(|p| p.0).collect::<Vec<_>>(),
            vec![2.0, 3.0, 4.0, 5.0]
        );
        assert_eq!(quadratic_constant(&[1e-2, 1e-4, 1e-8]), Some(1.0));
    }

    #[test]
    fn empty_grid_rejected() {
        let mut spec = toy_spec();
        spec.rounds_grid.clear();
        assert!(matches!(spec.validate(), Err(Error::Config(_))));
        let mut spec = toy_spec();
        spec.adversary = StrategySpec::new("oracle");
        assert!(matches!(spec.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn spec_json_uses_camel_case() {
        let text = r#"{"name":"s","dimension":2,"noise":0.5,"roundsGrid":[3],
            "reconstructor":{"name":"cover_net","params":{"alpha":0.2}},
            "adversary":{"name":"truthful"},"seeds":[7],"metricsEvery":2}"#;
        let spec = ExperimentSpec::from_json_str(text).unwrap();
        assert_eq!(spec.metrics_every, 2);
        assert_eq!(spec.objective, Objective::Proper);
        assert!(ExperimentSpec::from_json_str(&text.replace("roundsGrid", "rounds")).is_err());
    }

    #[test]
    fn sweep_is_ordered_and_reproducible() {
        let spec = toy_spec();
        let a = sweep(
            &spec,
            SweepOptions {
                jobs: 3,
                metrics_every: None,
            },
        )
        .unwrap();
        let b = sweep(
            &spec,
            SweepOptions {
                jobs: 1,
                metrics_every: None,
            },
        )
        .unwrap();
        let cells: Vec<_> = a.rows.iter().map(|r| (r.rounds, r.seed)).collect();
        assert_eq!(cells, spec.cells());
        let strip = |o: &SweepOutcome| {
            let mut buf = Vec::new();
            let rows: Vec<SweepRow> = o
                .rows
                .iter()
                .cloned()
                .map(|mut r| {
                    r.wallclock_ms = 0.0;
                    r
                })
                .collect();
            write_csv(&rows, &mut buf).unwrap();
            buf
        };
        assert_eq!(strip(&a), strip(&b));
        assert_eq!(a.rows[0].status, Status::Unbounded);
        // T=12 covers the circle, so the excess is inside the cover-net bracket
        let last = a.rows.last().unwrap();
        let limit = 2.0 * jung_constant(2) * 0.5;
        let e = last.excess.unwrap();
        assert!(
            e > -1e-12 && e <= limit * (1.0 / 0.3f64.cos() - 1.0),
            "{last:?}"
        );
        let names: std::collections::HashSet<_> = a.traces.iter().map(|t| &t.0).collect();
        assert_eq!(names.len(), a.traces.len());
    }

    #[test]
    fn csv_round_trip() {
        let spec = toy_spec();
        let out = sweep(&spec, SweepOptions::default()).unwrap();
        let mut buf = Vec::new();
        write_csv(&out.rows, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(CSV_SCHEMA));
        assert!(text
            .lines()
            .nth(1)
            .unwrap()
            .starts_with("name,d,delta,T,seed,radius"));
        let back = read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.len(), out.rows.len());
        for (x, y) in back.iter().zip(&out.rows) {
            assert_eq!(x.radius, y.radius);
            assert_eq!(x.excess, y.excess);
            assert_eq!(x.status, y.status);
        }
    }

    #[test]
    fn trace_names_depend_on_spec_and_cell() {
        let spec = toy_spec();
        let mut other = toy_spec();
        other.noise = 1.0;
        assert_ne!(spec.trace_name(4, 1), spec.trace_name(4, 2));
        assert_ne!(spec.trace_name(4, 1), other.trace_name(4, 1));
        assert_eq!(spec.trace_name(4, 1), toy_spec().trace_name(4, 1));
    }

    #[test]
    fn improper_objective_excess_is_half_diameter_minus_noise() {
        let mut spec = toy_spec();
        spec.objective = Objective::Improper;
        spec.adversary = StrategySpec::new("zero");
        spec.rounds_grid = vec![12];
        let out = sweep(&spec, SweepOptions::default()).unwrap();
        for r in &out.rows {
            let half = r.diameter.finite().unwrap() / 2.0;
            assert!((r.excess.unwrap() - (half - 0.5)).abs() < 1e-9, "{r:?}");
        }
    }

    #[test]
    fn dimension_floor_values() {
        assert!((dimension_floor(64, 256) - 0.990).abs() < 1e-3);
        assert!((dimension_noise(256) - 2.0 * 256f64.ln().sqrt()).abs() < 1e-15);
        assert!(dimension_experiment(&[4], &|_| 16, 10, 0).is_err());
    }

    #[test]
    fn dimension_caps() {
        let rows = dimension_experiment(&[4, 300], &|_| 1 << 40, 30, 5).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].capped);
        assert_eq!(rows[0].rounds, MAX_DIMENSION_ROUNDS);
        assert_eq!(rows[0].requested_rounds, 1 << 40);
    }

    #[test]
    fn asymptotic_squeeze_small() {
        let rows = asymptotic_experiment(2, &[1.0], &[0.3, 0.2]).unwrap();
        assert!(rows.iter().all(|r| r.squeezed), "{rows:?}");
        let one = asymptotic_experiment(1, &[1.0], &[0.3]).unwrap();
        assert!((one[0].loss - 1.0).abs() < 1e-12);
        assert!(asymptotic_experiment(2, &[1.0], &[0.1, 0.2]).is_err());
    }

    #[test]
    fn improper_lower_bound_values() {
        assert!((improper_lower_bound(3, 16, 1.0) - 1.0 / 0.25f64.cos()).abs() < 1e-15);
        assert!(improper_lower_bound(3, 4096, 1.0) > 1.0);
    }
}
