//! Monte Carlo simulation of superposition coding with binning.
//!
//! A code is a three-layer random codebook `u(m0) -> v(m0, m0') -> x(m0, m0', m1)`
//! drawn from an auxiliary law, with the residual messages `m0'` split into
//! `nu1` round-robin bins. Decoder 1 recovers all three messages and, when the
//! conference link is up, forwards the bin of its estimate of `m0'`. Decoder 2
//! recovers `m0` alone, or `(m0, m0')` inside the forwarded bin.
//!
//! Typicality is the entropy (weak) kind with slack `eps`, checked over every
//! nonempty subset of the variables a decoder looks at. Decoding is an
//! exhaustive search, so the message counts are bounded by a codeword budget.

mod codebook;
mod decode;
mod typical;

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{mix_seed, Execution};
use crate::model::{AuxJoint, AuxSpec, ChannelLaw, ChannelSpec, ConferenceCapacity};
use crate::regions::RateTriple;

pub use codebook::{bin_of, ChannelSampler, Codebook};
pub use decode::{conference_map, Decoders};
pub use typical::{DesignLaw, Level, Scratch};

/// Default cap on `mu0 + mu0*mu0' + mu0*mu0'*mu1`.
pub const DEFAULT_BUDGET: u64 = 1 << 16;
pub const DEFAULT_EPS: f64 = 0.05;
pub const DEFAULT_BATCH: usize = 50;

/// Largest exponent accepted for a message count.
const MAX_BITS: f64 = 62.0;

const CODEBOOK_STREAM: u64 = 0x434f_4445;
const TRIAL_STREAM: u64 = 0x5452_4941;

/// Parameters of one random code ensemble.
#[derive(Debug, Clone)]
pub struct CodeParams {
    pub n: usize,
    pub rates: RateTriple,
    pub c1: ConferenceCapacity,
    pub aux: AuxJoint,
    pub ch: ChannelLaw,
    pub eps: f64,
    pub seed: u64,
}

/// Whether and how often the codebook is redrawn during a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CodebookMode {
    Fixed,
    PerBatch { size: usize },
    PerTrial,
}

impl Default for CodebookMode {
    fn default() -> Self {
        CodebookMode::PerBatch { size: DEFAULT_BATCH }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOptions {
    pub mode: CodebookMode,
    pub budget: u64,
    pub exec: Execution,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions { mode: CodebookMode::default(), budget: DEFAULT_BUDGET, exec: Execution::default() }
    }
}

/// `ceil(2^bits)` with a small relative allowance for rounding in `n * R`.
fn ceil_pow2(bits: f64) -> f64 {
    (bits.exp2() * (1.0 - 1e-12)).ceil().max(1.0)
}

/// Number of messages `ceil(2^{n r})`.
pub fn message_count(n: usize, r: f64) -> Result<u64> {
    let bits = n as f64 * r;
    if !(bits >= 0.0) {
        return Err(Error::InvalidInput(format!("rate {r} must be a nonnegative number")));
    }
    if bits > MAX_BITS {
        return Err(Error::Budget(format!("2^{bits:.1} messages at n = {n}, rate {r}")));
    }
    Ok(ceil_pow2(bits) as u64)
}

/// Number of bins `ceil(2^{n c1})`, saturating.
pub fn bin_count(n: usize, c1: ConferenceCapacity) -> u64 {
    ceil_pow2(n as f64 * c1.value()) as u64
}

/// Message and bin counts of a code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MessageCounts {
    pub mu0: u64,
    pub mu0p: u64,
    pub mu1: u64,
    pub nu1: u64,
}

impl MessageCounts {
    pub fn new(p: &CodeParams) -> Result<Self> {
        Ok(MessageCounts {
            mu0: message_count(p.n, p.rates.r0)?,
            mu0p: message_count(p.n, p.rates.r0p)?,
            mu1: message_count(p.n, p.rates.r1)?,
            nu1: bin_count(p.n, p.c1),
        })
    }

    /// `mu0 + mu0*mu0' + mu0*mu0'*mu1`, or `None` on overflow.
    pub fn total_codewords(&self) -> Option<u64> {
        let uv = self.mu0.checked_mul(self.mu0p)?;
        let uvx = uv.checked_mul(self.mu1)?;
        self.mu0.checked_add(uv)?.checked_add(uvx)
    }

    pub fn check_budget(&self, budget: u64) -> Result<()> {
        match self.total_codewords() {
            Some(t) if t <= budget => Ok(()),
            t => Err(Error::Budget(format!(
                "codebook needs {} codewords (mu0={}, mu0'={}, mu1={}), budget is {budget}",
                t.map_or("more than 2^64".to_string(), |t| t.to_string()),
                self.mu0,
                self.mu0p,
                self.mu1
            ))),
        }
    }

    fn triple(&self) -> (u64, u64, u64) {
        (self.mu0, self.mu0p, self.mu1)
    }
}

/// Rates actually used, `log2(count)/n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RealizedRates {
    pub r0: f64,
    pub r0p: f64,
    pub r1: f64,
    pub c1: f64,
}

impl RealizedRates {
    pub fn new(c: &MessageCounts, n: usize) -> Self {
        let r = |k: u64| (k as f64).log2() / n as f64;
        RealizedRates { r0: r(c.mu0), r0p: r(c.mu0p), r1: r(c.mu1), c1: r(c.nu1) }
    }
}

/// Labels of the decoder-1 competitor groups; `1` marks a correct index.
pub const TABLE_GROUPS: [&str; 7] = ["E(1,1,*)", "E(1,*,1)", "E(1,*,*)", "E(*,1,1)", "E(*,1,*)", "E(*,*,1)", "E(*,*,*)"];
/// True triple not typical at decoder 1.
pub const E10: &str = "E10";
/// True cloud centre not typical at decoder 2.
pub const E20: &str = "E20";
/// Some wrong cloud centre typical at decoder 2.
pub const E21: &str = "E21";
/// True pair not typical at decoder 2.
pub const E20_CONF: &str = "E'20";
/// Some wrong pair in the forwarded bin typical at decoder 2.
pub const E21_CONF: &str = "E'21";

const N_EVENTS: usize = 12;
const EVENT_LABELS: [&str; N_EVENTS] = [
    E10,
    TABLE_GROUPS[0],
    TABLE_GROUPS[1],
    TABLE_GROUPS[2],
    TABLE_GROUPS[3],
    TABLE_GROUPS[4],
    TABLE_GROUPS[5],
    TABLE_GROUPS[6],
    E20,
    E21,
    E20_CONF,
    E21_CONF,
];

/// Index into `TABLE_GROUPS` of a competitor, or `None` for the true triple.
fn group_of(hit: (u64, u64, u64), truth: (u64, u64, u64)) -> Option<usize> {
    let key = (hit.0 == truth.0, hit.1 == truth.1, hit.2 == truth.2);
    match key {
        (true, true, true) => None,
        (true, true, false) => Some(0),
        (true, false, true) => Some(1),
        (true, false, false) => Some(2),
        (false, true, true) => Some(3),
        (false, true, false) => Some(4),
        (false, false, true) => Some(5),
        (false, false, false) => Some(6),
    }
}

/// Integer tallies over a set of trials; summed across batches.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Tally {
    trials: u64,
    errors_no_conf: u64,
    errors_conf: u64,
    decoder1_errors: u64,
    decoder2_errors: u64,
    decoder2_conf_errors: u64,
    inclusion_violations: u64,
    events: [u64; N_EVENTS],
}

impl Tally {
    fn add(mut self, o: Tally) -> Tally {
        self.trials += o.trials;
        self.errors_no_conf += o.errors_no_conf;
        self.errors_conf += o.errors_conf;
        self.decoder1_errors += o.decoder1_errors;
        self.decoder2_errors += o.decoder2_errors;
        self.decoder2_conf_errors += o.decoder2_conf_errors;
        self.inclusion_violations += o.inclusion_violations;
        for (a, b) in self.events.iter_mut().zip(o.events) {
            *a += b;
        }
        self
    }
}

/// Outcome of a single transmission.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialOutcome {
    pub message: (u64, u64, u64),
    pub decoder1: Option<(u64, u64, u64)>,
    pub decoder2: Option<u64>,
    pub bin: u64,
    pub decoder2_conf: Option<(u64, u64)>,
    /// Trial in `S_e`.
    pub error_no_conf: bool,
    /// Trial in `S'_e`.
    pub error_conf: bool,
    events: [bool; N_EVENTS],
}

impl TrialOutcome {
    /// Labels of the error events that occurred.
    pub fn events(&self) -> Vec<&'static str> {
        EVENT_LABELS.iter().zip(self.events).filter(|(_, e)| *e).map(|(l, _)| *l).collect()
    }
}

/// Runs one trial on a fixed codebook with a uniformly drawn message.
pub fn run_trial<R: Rng + ?Sized>(
    cb: &Codebook,
    dec: &Decoders,
    sampler: &ChannelSampler,
    eps: f64,
    rng: &mut R,
    scratch: &mut Scratch,
) -> Result<TrialOutcome> {
    let (mu0, mu0p, mu1) = cb.counts();
    let truth = (rng.random_range(1..=mu0), rng.random_range(1..=mu0p), rng.random_range(1..=mu1));
    let (y1, y2) = sampler.send(cb.x_word(truth.0, truth.1, truth.2), rng);
    let mut events = [false; N_EVENTS];

    let mut hits = 0u32;
    let mut first = None;
    let mut true_typical = false;
    dec.for_each_typical_triple(cb, &y1, eps, scratch, |a, b, c| {
        if hits == 0 {
            first = Some((a, b, c));
        }
        hits += 1;
        match group_of((a, b, c), truth) {
            None => true_typical = true,
            Some(g) => events[1 + g] = true,
        }
    })?;
    events[0] = !true_typical;
    let decoder1 = if hits == 1 { first } else { None };

    let mut centres = Vec::new();
    dec.for_each_typical_centre(cb, &y2, eps, scratch, |m| centres.push(m))?;
    events[8] = !centres.contains(&truth.0);
    events[9] = centres.iter().any(|&m| m != truth.0);
    let decoder2 = if centres.len() == 1 { Some(centres[0]) } else { None };

    let bin = conference_map(cb, decoder1);
    let mut pairs = Vec::new();
    for &m0 in &centres {
        for m0p in cb.bin_members(bin) {
            if dec.satellite_typical(cb, &y2, m0, m0p, eps, scratch) {
                pairs.push((m0, m0p));
            }
        }
    }
    let true_pair = centres.contains(&truth.0) && dec.satellite_typical(cb, &y2, truth.0, truth.1, eps, scratch);
    events[10] = !true_pair;
    events[11] = pairs.iter().any(|&p| p != (truth.0, truth.1));
    let decoder2_conf = if pairs.len() == 1 { Some(pairs[0]) } else { None };

    let error_no_conf = decoder1 != Some(truth) || decoder2 != Some(truth.0);
    let error_conf = error_no_conf || decoder2_conf.map(|p| p.1) != Some(truth.1);
    Ok(TrialOutcome {
        message: truth,
        decoder1,
        decoder2,
        bin,
        decoder2_conf,
        error_no_conf,
        error_conf,
        events,
    })
}

/// Empirical error probabilities with and without the conference link.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorStats {
    pub trials: u64,
    /// Trials in `S_e`.
    pub errors_no_conf: u64,
    /// Trials in `S'_e`.
    pub errors_conf: u64,
    pub pe_no_conf: f64,
    pub pe_conf: f64,
    /// Larger of the two 95% normal-approximation half-widths.
    pub ci_halfwidth: f64,
    pub decoder1_errors: u64,
    pub decoder2_errors: u64,
    pub decoder2_conf_errors: u64,
    /// Trials in `S_e` but not in `S'_e`.
    pub inclusion_violations: u64,
    pub per_event_counts: BTreeMap<String, u64>,
    pub counts: MessageCounts,
    pub realized: RealizedRates,
}

fn halfwidth(p: f64, trials: u64) -> f64 {
    1.96 * (p * (1.0 - p) / trials as f64).sqrt()
}

impl ErrorStats {
    fn from_tally(t: &Tally, counts: MessageCounts, realized: RealizedRates) -> Self {
        let pe_no_conf = t.errors_no_conf as f64 / t.trials as f64;
        let pe_conf = t.errors_conf as f64 / t.trials as f64;
        ErrorStats {
            trials: t.trials,
            errors_no_conf: t.errors_no_conf,
            errors_conf: t.errors_conf,
            pe_no_conf,
            pe_conf,
            ci_halfwidth: halfwidth(pe_no_conf, t.trials).max(halfwidth(pe_conf, t.trials)),
            decoder1_errors: t.decoder1_errors,
            decoder2_errors: t.decoder2_errors,
            decoder2_conf_errors: t.decoder2_conf_errors,
            inclusion_violations: t.inclusion_violations,
            per_event_counts: EVENT_LABELS.iter().zip(t.events).map(|(l, c)| (l.to_string(), c)).collect(),
            counts,
            realized,
        }
    }
}

fn validate(p: &CodeParams, trials: u64) -> Result<()> {
    if p.n == 0 {
        return Err(Error::InvalidInput("blocklength n must be >= 1".into()));
    }
    if !(p.eps > 0.0 && p.eps < 1.0) {
        return Err(Error::InvalidInput(format!("eps = {} must lie in (0, 1)", p.eps)));
    }
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be >= 1".into()));
    }
    if p.aux.x_size() != p.ch.x_size() {
        return Err(Error::ShapeMismatch(format!(
            "aux law has |X| = {}, channel has |X| = {}",
            p.aux.x_size(),
            p.ch.x_size()
        )));
    }
    Ok(())
}

/// Draws the codebook for ensemble index `k`.
pub fn generate_codebook(p: &CodeParams, budget: u64, k: u64) -> Result<Codebook> {
    let c = MessageCounts::new(p)?;
    c.check_budget(budget)?;
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(p.seed, CODEBOOK_STREAM, k));
    Codebook::generate(p.n, c.triple(), c.nu1, &p.aux, &mut rng)
}

/// Estimates `P_e` and `P'_e` with default options.
pub fn estimate_errors(p: &CodeParams, trials: u64) -> Result<ErrorStats> {
    estimate_errors_with(p, trials, &SimOptions::default())
}

pub fn estimate_errors_with(p: &CodeParams, trials: u64, opts: &SimOptions) -> Result<ErrorStats> {
    validate(p, trials)?;
    let counts = MessageCounts::new(p)?;
    counts.check_budget(opts.budget)?;
    let dec = Decoders::new(&p.aux, &p.ch)?;
    let sampler = ChannelSampler::new(&p.ch);

    let batch = match opts.mode {
        CodebookMode::Fixed => DEFAULT_BATCH as u64,
        CodebookMode::PerBatch { size } => size.max(1) as u64,
        CodebookMode::PerTrial => 1,
    };
    let shared = match opts.mode {
        CodebookMode::Fixed => Some(generate_codebook(p, opts.budget, 0)?),
        _ => None,
    };
    let batches = trials.div_ceil(batch);
    let results = opts.exec.map_indexed(batches as usize, |b| -> Result<Tally> {
        let b = b as u64;
        let own;
        let cb = match &shared {
            Some(cb) => cb,
            None => {
                own = generate_codebook(p, opts.budget, b)?;
                &own
            }
        };
        let mut scratch = Scratch::default();
        let mut t = Tally::default();
        for i in b * batch..((b + 1) * batch).min(trials) {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(p.seed, TRIAL_STREAM, i));
            let o = run_trial(cb, &dec, &sampler, p.eps, &mut rng, &mut scratch)?;
            t.trials += 1;
            t.errors_no_conf += o.error_no_conf as u64;
            t.errors_conf += o.error_conf as u64;
            t.decoder1_errors += (o.decoder1 != Some(o.message)) as u64;
            t.decoder2_errors += (o.decoder2 != Some(o.message.0)) as u64;
            t.decoder2_conf_errors += (o.decoder2_conf.map(|q| q.1) != Some(o.message.1)) as u64;
            t.inclusion_violations += (o.error_no_conf && !o.error_conf) as u64;
            for (a, e) in t.events.iter_mut().zip(o.events) {
                *a += e as u64;
            }
        }
        Ok(t)
    });
    let mut total = Tally::default();
    for r in results {
        total = total.add(r?);
    }
    Ok(ErrorStats::from_tally(&total, counts, RealizedRates::new(&counts, p.n)))
}

/// Echo of the inputs of a simulation run.
#[derive(Debug, Clone, Serialize)]
pub struct ParamsEcho {
    pub n: usize,
    pub rates: RateTriple,
    pub c1: f64,
    pub eps: f64,
    pub seed: u64,
    pub trials: u64,
    pub codebook: CodebookMode,
    pub budget: u64,
    pub aux: AuxSpec,
    pub channel: ChannelSpec,
}

/// Simulation report as written by the CLI.
#[derive(Debug, Clone, Serialize)]
pub struct SimReport {
    pub params: ParamsEcho,
    pub message_counts: MessageCounts,
    pub realized_rates: RealizedRates,
    pub trials: u64,
    pub pe_no_conf: f64,
    pub pe_conf: f64,
    pub ci_halfwidth: f64,
    pub errors_no_conf: u64,
    pub errors_conf: u64,
    pub decoder1_errors: u64,
    pub decoder2_errors: u64,
    pub decoder2_conf_errors: u64,
    pub inclusion_violations: u64,
    pub per_event_counts: BTreeMap<String, u64>,
}

impl SimReport {
    pub fn new(p: &CodeParams, trials: u64, opts: &SimOptions, s: ErrorStats) -> Self {
        SimReport {
            params: ParamsEcho {
                n: p.n,
                rates: p.rates,
                c1: p.c1.value(),
                eps: p.eps,
                seed: p.seed,
                trials,
                codebook: opts.mode,
                budget: opts.budget,
                aux: p.aux.to_spec(),
                channel: p.ch.to_spec(),
            },
            message_counts: s.counts,
            realized_rates: s.realized,
            trials: s.trials,
            pe_no_conf: s.pe_no_conf,
            pe_conf: s.pe_conf,
            ci_halfwidth: s.ci_halfwidth,
            errors_no_conf: s.errors_no_conf,
            errors_conf: s.errors_conf,
            decoder1_errors: s.decoder1_errors,
            decoder2_errors: s.decoder2_errors,
            decoder2_conf_errors: s.decoder2_conf_errors,
            inclusion_violations: s.inclusion_violations,
            per_event_counts: s.per_event_counts,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

/// Runs `estimate_errors_with` and wraps the result in a report.
pub fn simulate(p: &CodeParams, trials: u64, opts: &SimOptions) -> Result<SimReport> {
    let s = estimate_errors_with(p, trials, opts)?;
    Ok(SimReport::new(p, trials, opts, s))
}
