//! The `bcconf` command-line front end.
//!
//! Every flag can also be given in a JSON config file (`--config`) using the
//! flag name with underscores as the key; flags on the command line win.
//! Exit codes: 0 success, 1 internal failure or failed check, 2 invalid
//! input, 3 resource budget exceeded.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::awgn::{awgn_region_with, AwgnParams};
use crate::error::{Error, Result};
use crate::exec::{init_threads, Execution};
use crate::model::{AuxJoint, ChannelLaw, ConferenceCapacity, MiVector};
use crate::polytope::{Tolerances, Vec3};
use crate::regions::{check_equivalence, default_cards, sample_region_with, RateTriple, RegionReport, VertexFailure};
use crate::sim::{simulate, CodeParams, CodebookMode, SimOptions, DEFAULT_BATCH, DEFAULT_BUDGET, DEFAULT_EPS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Budget(_) => EXIT_BUDGET,
        e if e.is_input_error() => EXIT_INPUT,
        _ => EXIT_INTERNAL,
    }
}

#[derive(Debug, Parser)]
#[command(name = "bcconf", version, about = "Broadcast channel with degraded message sets and a conference link")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the union of inner polytopes and write its hull.
    Region(RunConfig),
    /// Run the vertex-level equivalence check on sampled laws.
    Check(RunConfig),
    /// Sweep the Gaussian region over power splits.
    Awgn(RunConfig),
    /// Estimate error probabilities of the random code.
    Simulate(RunConfig),
}

/// Pair `|U|,|V|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cards(pub usize, pub usize);

impl FromStr for Cards {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (a, b) = s.split_once(',').ok_or("expected `|U|,|V|`")?;
        let p = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t}: {e}"));
        Ok(Cards(p(a)?, p(b)?))
    }
}

fn parse_rates(s: &str) -> std::result::Result<RateTriple, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t}: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    match v[..] {
        [a, b, c] => RateTriple::new(a, b, c).map_err(|e| e.to_string()),
        _ => Err("expected `r0,r0p,r1`".into()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CodebookArg {
    Fixed,
    PerBatch,
    PerTrial,
}

/// All options of all subcommands. Unused options are ignored.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// JSON file with default values for any of these options.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Channel spec JSON.
    #[arg(long)]
    pub channel: Option<PathBuf>,
    /// Auxiliary law JSON (simulate).
    #[arg(long)]
    pub aux: Option<PathBuf>,
    /// Conference capacity in bits per channel use.
    #[arg(long)]
    pub c1: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Simplex grid resolution (awgn).
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub trials: Option<u64>,
    /// Blocklength (simulate).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Rate triple `r0,r0p,r1`.
    #[arg(long, value_parser = parse_rates)]
    pub rates: Option<RateTriple>,
    /// Auxiliary cardinalities `|U|,|V|`; default `|X|+3` for both.
    #[arg(long)]
    pub cards: Option<Cards>,
    #[arg(long)]
    pub power: Option<f64>,
    #[arg(long)]
    pub n1: Option<f64>,
    #[arg(long)]
    pub n2: Option<f64>,
    /// Typicality slack.
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, value_enum)]
    pub codebook: Option<CodebookArg>,
    /// Trials per codebook in per-batch mode.
    #[arg(long)]
    pub batch_size: Option<usize>,
    /// Maximum total number of codewords.
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long)]
    pub feasibility_tol: Option<f64>,
    #[arg(long)]
    pub rank_tol: Option<f64>,
    #[arg(long)]
    pub dedup_tol: Option<f64>,
    #[arg(long)]
    pub active_tol: Option<f64>,
    /// Add this amount to I(UV;Y2) of every sample before checking (check).
    #[arg(long)]
    pub inject_chain_fault: Option<f64>,
    /// Worker thread cap; 1 runs sequentially.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Main output file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Report JSON (region); defaults to the output path with a `.json` extension.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

macro_rules! overlay {
    ($a:ident, $b:ident; $($f:ident),*) => {
        RunConfig { config: None, $($f: $a.$f.or($b.$f)),* }
    };
}

impl RunConfig {
    /// Fields set in `self` take precedence over `base`.
    pub fn over(self, base: RunConfig) -> RunConfig {
        overlay!(self, base; channel, aux, c1, samples, grid, trials, n, seed, rates, cards, power, n1, n2,
            eps, codebook, batch_size, budget, feasibility_tol, rank_tol, dedup_tol, active_tol,
            inject_chain_fault, threads, out, report)
    }

    pub fn from_json_file(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("config file {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("config file {}: {e}", path.display())))
    }

    /// Applies the config file, if any.
    pub fn resolve(self) -> Result<RunConfig> {
        match self.config.clone() {
            Some(p) => Ok(self.over(RunConfig::from_json_file(&p)?)),
            None => Ok(self),
        }
    }

    fn tolerances(&self) -> Result<Tolerances> {
        let d = Tolerances::default();
        let t = Tolerances {
            feasibility: self.feasibility_tol.unwrap_or(d.feasibility),
            rank: self.rank_tol.unwrap_or(d.rank),
            dedup: self.dedup_tol.unwrap_or(d.dedup),
            active: self.active_tol.unwrap_or(d.active),
        };
        for (name, v) in [("feasibility", t.feasibility), ("rank", t.rank), ("dedup", t.dedup), ("active", t.active)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!("{name} tolerance must be positive, got {v}")));
            }
        }
        Ok(t)
    }

    fn c1(&self) -> Result<ConferenceCapacity> {
        ConferenceCapacity::new(self.c1.unwrap_or(0.0))
    }

    fn channel(&self) -> Result<ChannelLaw> {
        let p = need(&self.channel, "--channel")?;
        ChannelLaw::load(p)
    }

    fn out(&self) -> Result<&Path> {
        need(&self.out, "--out").map(|p| p.as_path())
    }

    fn exec(&self) -> Execution {
        match self.threads {
            Some(1) => Execution::Sequential,
            _ => Execution::Parallel,
        }
    }

    fn cards(&self, ch: &ChannelLaw) -> (usize, usize) {
        self.cards.map_or_else(|| default_cards(ch.x_size()), |c| (c.0, c.1))
    }
}

fn need<'a, T>(v: &'a Option<T>, flag: &str) -> Result<&'a T> {
    v.as_ref().ok_or_else(|| Error::InvalidInput(format!("missing required option {flag}")))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io { context: format!("writing {}", path.display()), source: e })
}

fn cmd_region(cfg: &RunConfig) -> Result<i32> {
    let ch = cfg.channel()?;
    let tol = cfg.tolerances()?;
    let exec = cfg.exec();
    let samples = *need(&cfg.samples, "--samples")?;
    let region = sample_region_with(&ch, cfg.c1()?, samples, cfg.cards(&ch), cfg.seed.unwrap_or(0), exec)?;
    let out = cfg.out()?;
    region.hull_vertices().write_csv(out)?;
    let report_path = cfg.report.clone().unwrap_or_else(|| out.with_extension("json"));
    write_file(&report_path, &RegionReport::new(&region, &tol, exec).to_json())?;
    println!(
        "{} samples, {} hull vertices -> {}, report -> {}",
        region.samples.len(),
        region.hull_vertices().len(),
        out.display(),
        report_path.display()
    );
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct CheckSample {
    index: usize,
    mi: MiVector,
    consistency: Option<String>,
    passed: bool,
    outer_vertices: usize,
    positive_vertices: usize,
    boundary_vertices: usize,
    failures: Vec<VertexFailure>,
}

#[derive(Debug, Serialize)]
struct CheckReport {
    c1: f64,
    samples: usize,
    passed: usize,
    failed: usize,
    all_passed: bool,
    per_sample: Vec<CheckSample>,
}

fn first_bad(r: &CheckReport) -> Option<(usize, String, Option<Vec3>)> {
    let s = r.per_sample.iter().find(|s| !s.passed)?;
    match (&s.consistency, s.failures.first()) {
        (_, Some(f)) => Some((s.index, f.reason.clone(), Some(f.vertex))),
        (Some(c), None) => Some((s.index, c.clone(), None)),
        (None, None) => Some((s.index, "check failed".into(), None)),
    }
}

fn cmd_check(cfg: &RunConfig) -> Result<i32> {
    let ch = cfg.channel()?;
    let tol = cfg.tolerances()?;
    let exec = cfg.exec();
    let c1 = cfg.c1()?;
    let samples = *need(&cfg.samples, "--samples")?;
    let fault = cfg.inject_chain_fault.unwrap_or(0.0);
    let region = sample_region_with(&ch, c1, samples, cfg.cards(&ch), cfg.seed.unwrap_or(0), exec)?;
    let per_sample: Vec<CheckSample> = exec.map_indexed(region.samples.len(), |i| {
        let mut mi = region.samples[i].mi;
        mi.i_uv_y2 += fault;
        let consistency = mi.validate(tol.feasibility.max(1e-9)).err();
        let rep = check_equivalence(&mi, c1, &tol);
        CheckSample {
            index: i,
            mi,
            passed: consistency.is_none() && rep.passed,
            consistency,
            outer_vertices: rep.outer_vertices.len(),
            positive_vertices: rep.positive_vertices,
            boundary_vertices: rep.boundary_vertices,
            failures: rep.failures,
        }
    });
    let passed = per_sample.iter().filter(|s| s.passed).count();
    let report = CheckReport {
        c1: c1.value(),
        samples: per_sample.len(),
        passed,
        failed: per_sample.len() - passed,
        all_passed: passed == per_sample.len(),
        per_sample,
    };
    if let Some(out) = &cfg.out {
        write_file(out, &serde_json::to_string_pretty(&report).expect("check report serialises"))?;
    }
    println!("{}/{} samples pass", report.passed, report.samples);
    if let Some((i, reason, v)) = first_bad(&report) {
        match v {
            Some(v) => eprintln!("sample {i}: vertex ({:.12}, {:.12}, {:.12}): {reason}", v[0], v[1], v[2]),
            None => eprintln!("sample {i}: {reason}"),
        }
        return Ok(EXIT_INTERNAL);
    }
    Ok(EXIT_OK)
}

fn cmd_awgn(cfg: &RunConfig) -> Result<i32> {
    let params = AwgnParams::new(
        *need(&cfg.power, "--power")?,
        *need(&cfg.n1, "--n1")?,
        *need(&cfg.n2, "--n2")?,
        cfg.c1()?,
    )?;
    let grid = *need(&cfg.grid, "--grid")?;
    let region = awgn_region_with(&params, grid, cfg.exec())?;
    let out = cfg.out()?;
    region.write_boundary_csv(out)?;
    if let Some(r) = &cfg.report {
        region.hull_vertices().write_csv(r)?;
    }
    println!("{} power splits, {} hull vertices -> {}", region.splits.len(), region.hull_vertices().len(), out.display());
    Ok(EXIT_OK)
}

fn cmd_simulate(cfg: &RunConfig) -> Result<i32> {
    let ch = cfg.channel()?;
    let aux = AuxJoint::load(need(&cfg.aux, "--aux")?)?;
    let p = CodeParams {
        n: *need(&cfg.n, "--n")?,
        rates: *need(&cfg.rates, "--rates")?,
        c1: cfg.c1()?,
        aux,
        ch,
        eps: cfg.eps.unwrap_or(DEFAULT_EPS),
        seed: cfg.seed.unwrap_or(0),
    };
    let mode = match cfg.codebook.unwrap_or(CodebookArg::PerBatch) {
        CodebookArg::Fixed => CodebookMode::Fixed,
        CodebookArg::PerBatch => CodebookMode::PerBatch { size: cfg.batch_size.unwrap_or(DEFAULT_BATCH) },
        CodebookArg::PerTrial => CodebookMode::PerTrial,
    };
    if cfg.batch_size == Some(0) {
        return Err(Error::InvalidInput("--batch-size must be >= 1".into()));
    }
    let opts = SimOptions { mode, budget: cfg.budget.unwrap_or(DEFAULT_BUDGET), exec: cfg.exec() };
    let trials = *need(&cfg.trials, "--trials")?;
    let report = simulate(&p, trials, &opts)?;
    let out = cfg.out()?;
    write_file(out, &report.to_json())?;
    println!(
        "pe_no_conf = {:.6}, pe_conf = {:.6} (+/- {:.6}) over {} trials -> {}",
        report.pe_no_conf,
        report.pe_conf,
        report.ci_halfwidth,
        report.trials,
        out.display()
    );
    Ok(EXIT_OK)
}

/// Runs one parsed command and returns its exit code.
pub fn run(cli: Cli) -> i32 {
    let (cmd, cfg) = match cli.command {
        Command::Region(c) => ("region", c),
        Command::Check(c) => ("check", c),
        Command::Awgn(c) => ("awgn", c),
        Command::Simulate(c) => ("simulate", c),
    };
    let result = cfg.resolve().and_then(|cfg| {
        if let Some(t) = cfg.threads {
            if t == 0 {
                return Err(Error::InvalidInput("--threads must be >= 1".into()));
            }
            init_threads(t);
        }
        match cmd {
            "region" => cmd_region(&cfg),
            "check" => cmd_check(&cfg),
            "awgn" => cmd_awgn(&cfg),
            _ => cmd_simulate(&cfg),
        }
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}
