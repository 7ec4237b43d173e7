use std::fs;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::json;

use lingame::experiments::{fit_csv, sweep, ExperimentSpec, RateModel, SweepOptions};
use lingame::game::{run_game_with, GameConfig, RunOptions};
use lingame::jung_lab::{verify_bilipschitz_suite, verify_fit_suite, verify_rotation_suite};
use lingame::nets::{
    build_cover_seeded, covering_bounds, read_net_csv, verify_cover, write_net_csv,
    DEFAULT_NET_SEED, DEFAULT_VERIFY_SAMPLES,
};
use lingame::strategies::{build_adversary, build_reconstructor};
use lingame::{Error, Result};

#[derive(Parser)]
#[command(
    name = "lingame",
    version,
    about = "Linear reconstruction game simulator"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Record region metrics every k rounds (0: final round only)
    #[arg(long, global = true)]
    metrics_every: Option<usize>,
    /// Worker threads (0: all cores)
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Play one game from an experiment spec and print its trace as JSON
    Simulate {
        /// Rounds to play; defaults to the first entry of roundsGrid
        #[arg(long)]
        rounds: Option<usize>,
    },
    /// Run every (T, seed) cell of a spec; writes CSV and traces
    Sweep,
    /// Build (or check) an angular covering net
    Net {
        #[arg(long)]
        dimension: Option<usize>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
        /// Verify an existing net CSV instead of building one
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Run the robust-Jung and rotation Monte Carlo suites
    Verify {
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Fit a convergence rate to a sweep CSV
    Fit {
        input: PathBuf,
        #[arg(long, default_value = "doublyExponential")]
        model: String,
    },
}

#[derive(Deserialize, Default)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct NetConfig {
    dimension: Option<usize>,
    alpha: Option<f64>,
    samples: Option<usize>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct VerifyConfig {
    #[serde(default = "default_trials")]
    trials: usize,
    #[serde(default = "default_dimensions")]
    dimensions: Vec<usize>,
    #[serde(default = "default_fit_noise")]
    fit_noise: f64,
}

fn default_trials() -> usize {
    10_000
}

fn default_dimensions() -> Vec<usize> {
    vec![2, 3]
}

fn default_fit_noise() -> f64 {
    1e-3
}

fn read_config<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn require_spec(common: &Common) -> Result<ExperimentSpec> {
    let path = common
        .config
        .as_deref()
        .ok_or_else(|| Error::Config("--config <spec.json> is required".into()))?;
    ExperimentSpec::load(path)
}

fn out_dir(common: &Common) -> Result<Option<&Path>> {
    if let Some(dir) = common.out.as_deref() {
        fs::create_dir_all(dir)?;
    }
    Ok(common.out.as_deref())
}

fn print_json(value: &serde_json::Value) -> Result<()> {
    let mut stdout = io::stdout().lock();
    serde_json::to_writer_pretty(&mut stdout, value)?;
    writeln!(stdout)?;
    Ok(())
}

fn simulate(common: &Common, rounds: Option<usize>) -> Result<ExitCode> {
    let spec = require_spec(common)?;
    let t = rounds.unwrap_or(spec.rounds_grid[0]);
    let seed = common.seed.unwrap_or(spec.seeds[0]);
    let cfg = GameConfig::new(spec.dimension, spec.noise, t, seed)
        .map_err(|e| Error::Config(e.to_string()))?;
    let mut rec = build_reconstructor(&spec.reconstructor, &cfg)?;
    let mut adv = build_adversary(&spec.adversary, &cfg)?;
    let every = common.metrics_every.unwrap_or(spec.metrics_every);
    let trace = run_game_with(rec.as_mut(), adv.as_mut(), &cfg, RunOptions::every(every))?;
    let text = trace.to_json_string();
    if let Some(dir) = out_dir(common)? {
        fs::write(dir.join(spec.trace_name(t, seed)), &text)?;
    }
    println!("{text}");
    if trace.infeasible {
        eprintln!("adversary answers became infeasible");
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn run_sweep(common: &Common) -> Result<ExitCode> {
    let mut spec = require_spec(common)?;
    if let Some(seed) = common.seed {
        spec.seeds = vec![seed];
    }
    let outcome = sweep(
        &spec,
        SweepOptions {
            jobs: common.jobs,
            metrics_every: common.metrics_every,
        },
    )?;
    let dir = common.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let csv = outcome.write_to(&spec, &dir)?;
    eprintln!("wrote {} rows to {}", outcome.rows.len(), csv.display());
    let bad = outcome.infeasible_rows();
    if bad > 0 {
        eprintln!("{bad} cells ended infeasible");
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn net(
    common: &Common,
    dimension: Option<usize>,
    alpha: Option<f64>,
    samples: Option<usize>,
    input: Option<&Path>,
) -> Result<ExitCode> {
    let file: NetConfig = match common.config.as_deref() {
        Some(p) => read_config(p)?,
        None => NetConfig::default(),
    };
    let seed = common.seed.unwrap_or(DEFAULT_NET_SEED);
    let samples = samples.or(file.samples).unwrap_or(DEFAULT_VERIFY_SAMPLES);
    let net = match input {
        Some(path) => read_net_csv(BufReader::new(fs::File::open(path)?))?,
        None => {
            let d = dimension
                .or(file.dimension)
                .ok_or_else(|| Error::Config("net needs a dimension".into()))?;
            let alpha = alpha
                .or(file.alpha)
                .ok_or_else(|| Error::Config("net needs alpha".into()))?;
            build_cover_seeded(d, alpha, seed).map_err(|e| Error::Config(e.to_string()))?
        }
    };
    let (ok, worst) =
        verify_cover(&net, samples, seed ^ 0x63_6c69).map_err(|e| Error::Config(e.to_string()))?;
    let (lower, upper) = covering_bounds(net.dimension, net.alpha)?;
    if let Some(dir) = out_dir(common)? {
        let path = dir.join(format!("net-d{}-a{}.csv", net.dimension, net.alpha));
        write_net_csv(&net, fs::File::create(path)?)?;
    }
    print_json(&json!({
        "dimension": net.dimension,
        "alpha": net.alpha,
        "size": net.len(),
        "lowerBound": lower,
        "upperBound": upper,
        "samples": samples,
        "worstGap": worst,
        "verified": ok,
    }))?;
    Ok(ExitCode::SUCCESS)
}

fn verify(common: &Common, trials: Option<usize>) -> Result<ExitCode> {
    let mut cfg: VerifyConfig = match common.config.as_deref() {
        Some(p) => read_config(p)?,
        None => serde_json::from_str("{}").expect("defaults"),
    };
    if let Some(t) = trials {
        cfg.trials = t;
    }
    let seed = common.seed.unwrap_or(0);
    let mut reports = Vec::new();
    for &d in &cfg.dimensions {
        reports.push(verify_bilipschitz_suite(d, cfg.trials, seed)?);
        reports.push(verify_rotation_suite(d, cfg.trials.min(1000), seed)?);
        reports.push(verify_fit_suite(
            d,
            cfg.trials.min(1000),
            cfg.fit_noise,
            seed,
        )?);
    }
    let value = serde_json::to_value(&reports)?;
    if let Some(dir) = out_dir(common)? {
        fs::write(
            dir.join("verify.json"),
            serde_json::to_string_pretty(&value)?,
        )?;
    }
    print_json(&value)?;
    if reports.iter().all(|r| r.passed) {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("a Monte Carlo suite failed");
        Ok(ExitCode::from(2))
    }
}

fn fit(input: &Path, model: &str) -> Result<ExitCode> {
    let model: RateModel = model.parse()?;
    let fit = fit_csv(fs::File::open(input)?, model)?;
    print_json(&serde_json::to_value(fit)?)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(3);
        }
    };
    let c = &cli.common;
    let result = match &cli.command {
        Command::Simulate { rounds } => simulate(c, *rounds),
        Command::Sweep => run_sweep(c),
        Command::Net {
            dimension,
            alpha,
            samples,
            input,
        } => net(c, *dimension, *alpha, *samples, input.as_deref()),
        Command::Verify { trials } => verify(c, *trials),
        Command::Fit { input, model } => fit(input, model),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
