//! Command-line front end: configuration files, seeded execution, parameter
//! sweeps and JSON/CSV output. The `qss-sim` binary is a thin wrapper around
//! [`main_with_args`].
//!
//! Exit codes: 0 on success, 1 on usage or configuration errors, 2 when a
//! protocol run aborted and `--fail-on-abort` was given.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::adversary::{information_bound, AttackStrategy};
use crate::analysis::{comparison_table, detection_survival, efficiency_vs_delta, ComparisonRow, Survival};
use crate::bits::BitString;
use crate::channel::AgentLegs;
use crate::protocol::{run_keygen_traced, run_naive_qss, RunConfig, RunReport};
use crate::qubit::Basis;
use crate::splitting::{run_split_traced, SplitConfig, SplitMode, SplitReport};

/// Environment variable overriding the worker-thread count.
pub const THREADS_ENV: &str = "QSS_SIM_THREADS";

/// Column order of the sweep CSV.
pub const SWEEP_HEADER: [&str; 4] = ["delta", "eta_theory", "eta_empirical_mean", "eta_empirical_std"];
/// Column order of key-generation CSV rows.
pub const RUN_HEADER: [&str; 15] = [
    "run",
    "seed",
    "protocol",
    "n_agents",
    "n_photons",
    "key_length",
    "void_rounds",
    "check1_error",
    "check2_error",
    "decision",
    "reason",
    "b_s",
    "q_t",
    "b_t",
    "eta_paper",
];
/// Column order of secret-splitting CSV rows.
pub const SPLIT_HEADER: [&str; 11] = [
    "run",
    "seed",
    "mode",
    "share_length",
    "recovered_length",
    "check_error",
    "control_events",
    "mismatches",
    "encode_ops",
    "decision",
    "reason",
];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error(transparent)]
    Sim(#[from] crate::error::Error),
    #[error("writing output: {0}")]
    Output(String),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

#[derive(Debug, Parser)]
#[command(name = "qss-sim", version, about = "Bidirectional quantum secret sharing simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Multi-party key generation.
    Keygen(RunArgs),
    /// Baseline QSS built from two BB84 sessions.
    Naive(RunArgs),
    /// Secret splitting (ping-pong or block mode).
    Split(SplitArgs),
    /// Theory-vs-simulation sweep of the check fraction.
    Sweep(SweepArgs),
    /// Evaluate the closed-form formulas.
    Formulas(FormulaArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AttackArg {
    None,
    /// Intercept-resend in a random basis.
    Random,
    /// Intercept-resend always in Z.
    FixedZ,
    /// Intercept-resend always in X.
    FixedX,
    /// Dishonest agent (see --insider).
    Dishonest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LegsArg {
    Forward,
    Return,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Pingpong,
    Block,
}

/// Channel and attacker flags shared by every protocol command. Flags
/// override values from `--config`.
#[derive(Debug, Clone, Args)]
pub struct ChannelArgs {
    /// Survival probability of every leg [default: 1]
    #[arg(long)]
    pub survival: Option<f64>,
    /// Bit-flip probability per leg [default: 0]
    #[arg(long)]
    pub flip: Option<f64>,
    /// Phase-flip probability per leg [default: 0]
    #[arg(long)]
    pub phase: Option<f64>,
    /// Depolarizing probability per leg [default: 0]
    #[arg(long)]
    pub depol: Option<f64>,
    /// Attack strategy [default: none]
    #[arg(long, value_enum)]
    pub attack: Option<AttackArg>,
    /// Agent whose legs are tapped [default: 1]
    #[arg(long)]
    pub tap_agent: Option<usize>,
    /// Which legs are tapped [default: forward]
    #[arg(long, value_enum)]
    pub tap_legs: Option<LegsArg>,
    /// Insider for --attack dishonest [default: 0]
    #[arg(long)]
    pub insider: Option<usize>,
}

/// Output flags shared by every protocol command.
#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// JSON configuration file (see the README for the schema)
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Base seed; drawn from OS entropy and echoed in the output when absent
    #[arg(long)]
    pub seed: Option<u64>,
    /// Repetitions, seeded with seed, seed+1, ...
    #[arg(long = "reps", default_value_t = 1)]
    pub repetitions: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Write results here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Dump one JSON line per round (or photon) to this file
    #[arg(long)]
    pub transcript: Option<PathBuf>,
    /// Exit with status 2 when any run aborts
    #[arg(long)]
    pub fail_on_abort: bool,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Number of agents [default: 2]
    #[arg(long)]
    pub agents: Option<usize>,
    /// Photon rounds [default: 10000]
    #[arg(long)]
    pub photons: Option<usize>,
    /// First-check fraction, 0 < δ ≤ 1/2 [default: 0.1]
    #[arg(long)]
    pub delta1: Option<f64>,
    /// Second-check fraction, 0 < δ ≤ 1/2 [default: 0.1]
    #[arg(long)]
    pub delta2: Option<f64>,
    /// Abort threshold on any check error rate [default: 0.11]
    #[arg(long)]
    pub eps_max: Option<f64>,
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SplitArgs {
    /// Splitting variant [default: pingpong]
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Secret as a 0/1 string
    #[arg(long, conflicts_with = "secret_len")]
    pub secret: Option<String>,
    /// Length of a random secret drawn from the seed [default: 128]
    #[arg(long)]
    pub secret_len: Option<usize>,
    /// Control-mode probability p_s [default: 0.1]
    #[arg(long)]
    pub ps: Option<f64>,
    /// Redundancy rate r [default: 0.1]
    #[arg(long)]
    pub redundancy: Option<f64>,
    /// Block-mode check fraction [default: 0.1]
    #[arg(long)]
    pub delta1: Option<f64>,
    /// Abort threshold [default: 0.11]
    #[arg(long)]
    pub eps_max: Option<f64>,
    /// Control events between running checks [default: 20]
    #[arg(long)]
    pub window: Option<usize>,
    /// Block size [default: smallest admissible]
    #[arg(long)]
    pub block_size: Option<usize>,
    /// Photon budget per ping-pong stream [default: unlimited]
    #[arg(long)]
    pub max_photons: Option<usize>,
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Swept parameter (only `delta`, applied to both checks)
    #[arg(long)]
    pub param: String,
    /// Comma-separated values
    #[arg(long, value_delimiter = ',', required = true)]
    pub values: Vec<f64>,
    /// Repetitions per value
    #[arg(long, default_value_t = 20)]
    pub reps: usize,
    #[arg(long, default_value_t = 2)]
    pub agents: usize,
    #[arg(long, default_value_t = 10_000)]
    pub photons: usize,
    /// Base seed; cell c, repetition r runs with seed + c*reps + r
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct FormulaArgs {
    /// Detection survival P(n, p_s, ε)
    #[arg(long)]
    pub detection: bool,
    /// Information bound I₀(ε)
    #[arg(long)]
    pub info: bool,
    /// Efficiency (1 − δ)²
    #[arg(long)]
    pub efficiency: bool,
    /// Efficiency comparison table at --delta
    #[arg(long)]
    pub table: bool,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub ps: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Emit JSON instead of text
    #[arg(long)]
    pub json: bool,
}

/// A parsed configuration file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "protocol", rename_all = "snake_case")]
pub enum ExperimentConfig {
    Keygen(RunConfig),
    Naive(RunConfig),
    Split(SplitConfig),
}

fn entropy_seed() -> u64 {
    rand::rng().random()
}

/// Reads a JSON configuration file. The `protocol` field selects the
/// experiment (`keygen` when absent); a missing `seed` is drawn from OS
/// entropy. Every value is validated and errors name the offending field.
pub fn load_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_config(&text).map_err(|message| CliError::Parse {
        path: path.to_owned(),
        message,
    })
}

/// Parses configuration text; see [`load_config`].
pub fn parse_config(text: &str) -> Result<ExperimentConfig, String> {
    let mut doc: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let obj = doc
        .as_object_mut()
        .ok_or_else(|| "configuration must be a JSON object".to_owned())?;
    obj.entry("protocol").or_insert_with(|| Value::from("keygen"));
    obj.entry("seed").or_insert_with(|| Value::from(entropy_seed()));
    let protocol = obj.get("protocol").and_then(Value::as_str).unwrap_or("").to_owned();
    if matches!(protocol.as_str(), "keygen" | "naive") {
        obj.entry("n_agents").or_insert_with(|| Value::from(2));
        obj.entry("n_photons").or_insert_with(|| Value::from(10_000));
    }
    let cfg: ExperimentConfig = serde_json::from_value(doc).map_err(|e| e.to_string())?;
    match &cfg {
        ExperimentConfig::Keygen(c) | ExperimentConfig::Naive(c) => c.validate(),
        ExperimentConfig::Split(c) => c.validate(),
    }
    .map_err(|e| e.to_string())?;
    Ok(cfg)
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let stdout = io::stdout();
    match execute(&cli.command, &mut stdout.lock()) {
        Ok(Outcome::Ok) => 0,
        Ok(Outcome::Aborted) => 2,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

/// Whether any run aborted under `--fail-on-abort`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    Aborted,
}

/// Runs a parsed command, writing results to `--output` or `stdout`.
pub fn execute(command: &Command, stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    match command {
        Command::Keygen(args) => run_protocol(args, false, stdout),
        Command::Naive(args) => run_protocol(args, true, stdout),
        Command::Split(args) => run_splitting(args, stdout),
        Command::Sweep(args) => run_sweep(args, stdout),
        Command::Formulas(args) => run_formulas(args, stdout).map(|_| Outcome::Ok),
    }
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("{THREADS_ENV}: `{v}` is not a thread count")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::usage(e.to_string()))
}

fn apply_channel(
    legs: &mut Vec<AgentLegs>,
    attack: &mut AttackStrategy,
    n_agents: usize,
    ch: &ChannelArgs,
) -> Result<(), CliError> {
    let touches_legs = ch.survival.is_some() || ch.flip.is_some() || ch.phase.is_some() || ch.depol.is_some();
    if (touches_legs || ch.attack.is_some()) && legs.is_empty() {
        *legs = vec![AgentLegs::ideal(); n_agents];
    }
    if touches_legs {
        for l in legs.iter_mut() {
            for leg in [&mut l.forward, &mut l.back] {
                if let Some(s) = ch.survival {
                    leg.survival_prob = s;
                }
                let noise = &mut leg.noise;
                if let Some(p) = ch.flip {
                    noise.flip_prob = p;
                }
                if let Some(p) = ch.phase {
                    noise.phase_prob = p;
                }
                if let Some(p) = ch.depol {
                    noise.depol_prob = p;
                }
            }
        }
    }
    if let Some(a) = ch.attack {
        *attack = match a {
            AttackArg::None => AttackStrategy::None,
            AttackArg::Random => AttackStrategy::InterceptResendRandomBasis,
            AttackArg::FixedZ => AttackStrategy::InterceptResendFixedBasis { basis: Basis::Z },
            AttackArg::FixedX => AttackStrategy::InterceptResendFixedBasis { basis: Basis::X },
            AttackArg::Dishonest => AttackStrategy::DishonestAgent {
                insider: ch.insider.unwrap_or(0),
            },
        };
        if a != AttackArg::None {
            let target = ch.tap_agent.unwrap_or(1);
            let l = legs
                .get_mut(target)
                .ok_or_else(|| CliError::usage(format!("--tap-agent: agent {target} does not exist")))?;
            let which = ch.tap_legs.unwrap_or(LegsArg::Forward);
            l.forward.tapped = matches!(which, LegsArg::Forward | LegsArg::Both);
            l.back.tapped = matches!(which, LegsArg::Return | LegsArg::Both);
        }
    }
    Ok(())
}

fn keygen_config(args: &RunArgs, naive: bool) -> Result<RunConfig, CliError> {
    let mut cfg = match &args.out.config {
        Some(path) => match load_config(path)? {
            ExperimentConfig::Keygen(c) | ExperimentConfig::Naive(c) => c,
            ExperimentConfig::Split(_) => {
                return Err(CliError::usage(format!(
                    "--config: {} describes a split experiment",
                    path.display()
                )))
            }
        },
        None => {
            let mut c = RunConfig::ideal(2, 10_000, 0.1, 0.1, 0);
            c.seed = entropy_seed();
            c
        }
    };
    if let Some(v) = args.agents {
        cfg.n_agents = v;
    }
    if let Some(v) = args.photons {
        cfg.n_photons = v;
    }
    if let Some(v) = args.delta1 {
        cfg.check1_fraction = v;
    }
    if let Some(v) = args.delta2 {
        cfg.check2_fraction = v;
    }
    if let Some(v) = args.eps_max {
        cfg.abort_threshold = v;
    }
    if let Some(v) = args.out.seed {
        cfg.seed = v;
    }
    if !cfg.legs.is_empty() && cfg.legs.len() != cfg.n_agents && args.agents.is_some() {
        cfg.legs.resize(cfg.n_agents, AgentLegs::ideal());
    }
    apply_channel(&mut cfg.legs, &mut cfg.attack, cfg.n_agents, &args.channel)?;
    if naive && cfg.n_agents != 2 {
        return Err(CliError::usage(
            "--agents: the naive baseline requires exactly 2 agents",
        ));
    }
    cfg.validate()?;
    Ok(cfg)
}

fn check_repetitions(n: usize) -> Result<(), CliError> {
    if n == 0 {
        Err(CliError::usage("--reps: must be at least 1"))
    } else {
        Ok(())
    }
}

fn run_protocol(args: &RunArgs, naive: bool, stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    check_repetitions(args.out.repetitions)?;
    let base = keygen_config(args, naive)?;
    let pool = thread_pool()?;
    let want_transcript = args.out.transcript.is_some() && !naive;
    let results: Vec<(RunReport, Vec<String>)> = pool.install(|| {
        (0..args.out.repetitions)
            .into_par_iter()
            .map(|rep| {
                let mut cfg = base.clone();
                cfg.seed = base.seed.wrapping_add(rep as u64);
                if naive {
                    return run_naive_qss(&cfg).map(|r| (r, Vec::new()));
                }
                let run = run_keygen_traced(&cfg)?;
                let lines = if want_transcript {
                    run.transcript.iter().map(|t| transcript_line(rep, t)).collect()
                } else {
                    Vec::new()
                };
                Ok((run.report, lines))
            })
            .collect::<crate::error::Result<Vec<_>>>()
    })?;

    if let Some(path) = &args.out.transcript {
        write_lines(path, results.iter().flat_map(|(_, l)| l.iter()))?;
    }
    let reports: Vec<RunReport> = results.into_iter().map(|(r, _)| r).collect();
    let text = match args.out.format {
        OutputFormat::Json => json_document(&reports)?,
        OutputFormat::Csv => run_csv(&reports)?,
    };
    emit(&args.out.output, &text, stdout)?;
    let aborted = reports.iter().any(|r| !r.decision.is_accept());
    Ok(if aborted && args.out.fail_on_abort {
        Outcome::Aborted
    } else {
        Outcome::Ok
    })
}

fn transcript_line<T: Serialize>(run: usize, record: &T) -> String {
    let mut v = serde_json::to_value(record).expect("transcripts serialize");
    if let Value::Object(m) = &mut v {
        m.insert("run".into(), Value::from(run));
    }
    v.to_string()
}

fn split_config(args: &SplitArgs) -> Result<SplitConfig, CliError> {
    let mut cfg = match &args.out.config {
        Some(path) => match load_config(path)? {
            ExperimentConfig::Split(c) => c,
            _ => {
                return Err(CliError::usage(format!(
                    "--config: {} does not describe a split experiment",
                    path.display()
                )))
            }
        },
        None => SplitConfig::ideal(BitString::new(), SplitMode::PingPong, entropy_seed()),
    };
    if let Some(v) = args.out.seed {
        cfg.seed = v;
    }
    if let Some(m) = args.mode {
        cfg.mode = match m {
            ModeArg::Pingpong => SplitMode::PingPong,
            ModeArg::Block => SplitMode::Block,
        };
    }
    if let Some(s) = &args.secret {
        cfg.secret = s
            .parse()
            .map_err(|_| CliError::usage("--secret: expected a string of 0s and 1s"))?;
    } else if args.secret_len.is_some() || cfg.secret.is_empty() {
        let n = args.secret_len.unwrap_or(128);
        cfg.secret = BitString::random(n, &mut crate::rng::substream(cfg.seed, u64::MAX - 16));
    }
    if let Some(v) = args.ps {
        cfg.control_prob = v;
    }
    if let Some(v) = args.redundancy {
        cfg.redundancy_rate = v;
    }
    if let Some(v) = args.delta1 {
        cfg.check_fraction = v;
    }
    if let Some(v) = args.eps_max {
        cfg.abort_threshold = v;
    }
    if let Some(v) = args.window {
        cfg.abort_window = v;
    }
    if args.block_size.is_some() {
        cfg.block_size = args.block_size;
    }
    if args.max_photons.is_some() {
        cfg.max_photons = args.max_photons;
    }
    apply_channel(&mut cfg.legs, &mut cfg.attack, crate::splitting::SENDERS, &args.channel)?;
    cfg.validate()?;
    Ok(cfg)
}

fn run_splitting(args: &SplitArgs, stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    check_repetitions(args.out.repetitions)?;
    let base = split_config(args)?;
    let pool = thread_pool()?;
    let want_transcript = args.out.transcript.is_some();
    let results: Vec<(SplitReport, Vec<String>)> = pool.install(|| {
        (0..args.out.repetitions)
            .into_par_iter()
            .map(|rep| {
                let mut cfg = base.clone();
                cfg.seed = base.seed.wrapping_add(rep as u64);
                let run = run_split_traced(&cfg)?;
                let mut lines = Vec::new();
                if want_transcript {
                    for (sender, stream) in run.transcript.streams.iter().enumerate() {
                        for e in stream {
                            let mut v = serde_json::to_value(e).expect("events serialize");
                            if let Value::Object(m) = &mut v {
                                m.insert("sender".into(), Value::from(sender));
                            }
                            lines.push(transcript_line(rep, &v));
                        }
                    }
                }
                Ok((run.report, lines))
            })
            .collect::<crate::error::Result<Vec<_>>>()
    })?;
    if let Some(path) = &args.out.transcript {
        write_lines(path, results.iter().flat_map(|(_, l)| l.iter()))?;
    }
    let reports: Vec<SplitReport> = results.into_iter().map(|(r, _)| r).collect();
    let text = match args.out.format {
        OutputFormat::Json => json_document(&reports)?,
        OutputFormat::Csv => split_csv(&reports)?,
    };
    emit(&args.out.output, &text, stdout)?;
    let aborted = reports.iter().any(|r| !r.decision.is_accept());
    Ok(if aborted && args.out.fail_on_abort {
        Outcome::Aborted
    } else {
        Outcome::Ok
    })
}

/// One sweep cell: theory against the Monte Carlo mean and spread.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub delta: f64,
    pub eta_theory: f64,
    pub eta_empirical_mean: f64,
    pub eta_empirical_std: f64,
}

/// Runs `reps` ideal key generations per check fraction (applied to both
/// checks) and compares the empirical efficiency with `(1 - delta)^2`.
/// Cell `c`, repetition `r` uses seed `seed + c * reps + r`.
pub fn sweep_delta(
    values: &[f64],
    reps: usize,
    agents: usize,
    photons: usize,
    seed: u64,
) -> crate::error::Result<Vec<SweepRow>> {
    values
        .iter()
        .enumerate()
        .map(|(cell, &delta)| {
            let eta_theory = efficiency_vs_delta(delta)?;
            let etas = (0..reps)
                .into_par_iter()
                .map(|rep| {
                    let s = seed.wrapping_add((cell * reps + rep) as u64);
                    let cfg = RunConfig::ideal(agents, photons, delta, delta, s);
                    run_keygen_traced(&cfg).map(|r| r.report.efficiency.paper.eta)
                })
                .collect::<crate::error::Result<Vec<f64>>>()?;
            let n = etas.len() as f64;
            let mean = etas.iter().sum::<f64>() / n;
            let var = if etas.len() > 1 {
                etas.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1.0)
            } else {
                0.0
            };
            Ok(SweepRow {
                delta,
                eta_theory,
                eta_empirical_mean: mean,
                eta_empirical_std: var.sqrt(),
            })
        })
        .collect()
}

fn run_sweep(args: &SweepArgs, stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    if args.param != "delta" {
        return Err(CliError::usage(format!(
            "--param: unsupported parameter `{}` (supported: delta)",
            args.param
        )));
    }
    check_repetitions(args.reps)?;
    for v in &args.values {
        if !(*v > 0.0 && *v <= 0.5) {
            return Err(CliError::usage(format!("--values: {v} violates 0 < δ ≤ 1/2")));
        }
    }
    let seed = args.seed.unwrap_or_else(entropy_seed);
    let pool = thread_pool()?;
    let rows = pool.install(|| sweep_delta(&args.values, args.reps, args.agents, args.photons, seed))?;
    let text = match args.format {
        OutputFormat::Json => json_document(&rows)?,
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(SWEEP_HEADER).map_err(out_err)?;
            for r in &rows {
                w.write_record([
                    r.delta.to_string(),
                    r.eta_theory.to_string(),
                    r.eta_empirical_mean.to_string(),
                    r.eta_empirical_std.to_string(),
                ])
                .map_err(out_err)?;
            }
            csv_text(w)?
        }
    };
    emit(&args.output, &text, stdout)?;
    Ok(Outcome::Ok)
}

#[derive(Debug, Serialize)]
struct FormulaOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    detection: Option<DetectionOutput>,
    #[serde(skip_serializing_if = "Option::is_none")]
    information_bound: Option<InfoOutput>,
    #[serde(skip_serializing_if = "Option::is_none")]
    efficiency: Option<EfficiencyOutput>,
    #[serde(skip_serializing_if = "Option::is_none")]
    table: Option<Vec<ComparisonRow>>,
}

#[derive(Debug, Serialize)]
struct DetectionOutput {
    n: u64,
    p_s: f64,
    epsilon: f64,
    #[serde(flatten)]
    survival: Survival,
}

#[derive(Debug, Serialize)]
struct InfoOutput {
    epsilon: f64,
    bits_per_qubit: f64,
}

#[derive(Debug, Serialize)]
struct EfficiencyOutput {
    delta: f64,
    eta: f64,
}

fn require<T: Copy>(v: Option<T>, flag: &str, what: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::usage(format!("{flag} is required for {what}")))
}

fn run_formulas(args: &FormulaArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    if !(args.detection || args.info || args.efficiency || args.table) {
        return Err(CliError::usage(
            "formulas: choose at least one of --detection, --info, --efficiency, --table",
        ));
    }
    let mut out = FormulaOutput {
        detection: None,
        information_bound: None,
        efficiency: None,
        table: None,
    };
    if args.detection {
        let n = require(args.n, "--n", "--detection")?;
        let p_s = require(args.ps, "--ps", "--detection")?;
        let epsilon = require(args.eps, "--eps", "--detection")?;
        out.detection = Some(DetectionOutput {
            n,
            p_s,
            epsilon,
            survival: detection_survival(n, p_s, epsilon)?,
        });
    }
    if args.info {
        let epsilon = require(args.eps, "--eps", "--info")?;
        out.information_bound = Some(InfoOutput {
            epsilon,
            bits_per_qubit: information_bound(epsilon)?,
        });
    }
    if args.efficiency {
        let delta = require(args.delta, "--delta", "--efficiency")?;
        out.efficiency = Some(EfficiencyOutput {
            delta,
            eta: efficiency_vs_delta(delta)?,
        });
    }
    if args.table {
        out.table = Some(comparison_table(args.delta.unwrap_or(0.1))?);
    }

    let text = if args.json {
        json_document(&[out])?
    } else {
        let mut s = String::new();
        if let Some(d) = &out.detection {
            s += &format!(
                "detection_survival n={} p_s={} eps={}\nprobability {:e}\nlog10 {:.4}\n",
                d.n, d.p_s, d.epsilon, d.survival.probability, d.survival.log10_probability
            );
        }
        if let Some(i) = &out.information_bound {
            s += &format!("information_bound eps={} bits {:.4}\n", i.epsilon, i.bits_per_qubit);
        }
        if let Some(e) = &out.efficiency {
            s += &format!("efficiency delta={} eta {:.4}\n", e.delta, e.eta);
        }
        if let Some(t) = &out.table {
            for r in t {
                s += &format!("{:<18} {:.4}  {}\n", r.protocol, r.eta, r.note);
            }
        }
        s
    };
    stdout.write_all(text.as_bytes()).map_err(out_err)
}

fn out_err(e: impl std::fmt::Display) -> CliError {
    CliError::Output(e.to_string())
}

/// A single value for one item, an array otherwise.
fn json_document<T: Serialize>(items: &[T]) -> Result<String, CliError> {
    let mut s = if items.len() == 1 {
        serde_json::to_string_pretty(&items[0])
    } else {
        serde_json::to_string_pretty(items)
    }
    .map_err(out_err)?;
    s.push('\n');
    Ok(s)
}

fn fmt_rates(rates: &[Option<f64>]) -> String {
    rates
        .iter()
        .map(|r| r.map_or_else(|| "NA".to_owned(), |v| v.to_string()))
        .collect::<Vec<_>>()
        .join(";")
}

fn decision_fields(d: &crate::protocol::Decision) -> (String, String) {
    match d {
        crate::protocol::Decision::Accept => ("accept".into(), String::new()),
        crate::protocol::Decision::Abort(r) => ("abort".into(), r.clone()),
    }
}

fn csv_text(w: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = w.into_inner().map_err(out_err)?;
    String::from_utf8(bytes).map_err(out_err)
}

fn run_csv(reports: &[RunReport]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(RUN_HEADER).map_err(out_err)?;
    for (i, r) in reports.iter().enumerate() {
        let (decision, reason) = decision_fields(&r.decision);
        let protocol = serde_json::to_value(r.protocol).map_err(out_err)?;
        let e = &r.efficiency.full;
        w.write_record([
            i.to_string(),
            r.seed.to_string(),
            protocol.as_str().unwrap_or_default().to_owned(),
            r.n_agents.to_string(),
            r.n_photons.to_string(),
            r.dealer_key.len().to_string(),
            r.void_rounds.to_string(),
            fmt_rates(&r.check1_error),
            fmt_rates(&r.check2_error),
            decision,
            reason,
            e.b_s.to_string(),
            e.q_t.to_string(),
            e.b_t.to_string(),
            r.efficiency.paper.eta.to_string(),
        ])
        .map_err(out_err)?;
    }
    csv_text(w)
}

fn split_csv(reports: &[SplitReport]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SPLIT_HEADER).map_err(out_err)?;
    for (i, r) in reports.iter().enumerate() {
        let (decision, reason) = decision_fields(&r.decision);
        let sum =
            |f: fn(&crate::splitting::DetectionStats) -> usize| r.detection.iter().map(f).sum::<usize>().to_string();
        w.write_record([
            i.to_string(),
            r.seed.to_string(),
            match r.mode {
                SplitMode::PingPong => "ping_pong".to_owned(),
                SplitMode::Block => "block".to_owned(),
            },
            r.bob_share.len().to_string(),
            r.recovered.len().to_string(),
            fmt_rates(&r.check_error),
            sum(|d| d.control_events),
            sum(|d| d.mismatches),
            sum(|d| d.encode_ops),
            decision,
            reason,
        ])
        .map_err(out_err)?;
    }
    csv_text(w)
}

fn emit(path: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
            path: p.clone(),
            source,
        }),
        None => stdout.write_all(text.as_bytes()).map_err(out_err),
    }
}

fn write_lines<'a>(path: &Path, lines: impl Iterator<Item = &'a String>) -> Result<(), CliError> {
    let mut s = String::new();
    for l in lines {
        s.push_str(l);
        s.push('\n');
    }
    fs::write(path, s).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}
