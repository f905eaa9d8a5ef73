//! Monte Carlo frame-error-rate estimation over the depolarizing channel.
//!
//! Every trial owns an RNG seeded from (master seed, channel index, trial
//! index), so trials are independent of execution order: chunks are
//! evaluated in parallel, then scanned in index order and truncated at the
//! exact trial where the stopping rule fires. Results are therefore
//! byte-identical across thread counts.

use crate::css::CssCode;
use crate::decoder::binary::Bp2Decoder;
use crate::decoder::{
    bp_decode, depolarizing_prior, CamelDecoder, DecoderConfig, DecodingGraph,
};
use crate::error::{Error, Result};
use crate::gf4::Gf4;
use rand::prelude::*;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use std::io::Write;

/// Two-sided 95% normal quantile used by the Wilson interval.
pub const WILSON_Z: f64 = 1.959963984540054;

/// Trials evaluated per parallel batch before the stopping rule is
/// re-checked.
const CHUNK: u64 = 1024;

pub const CSV_HEADER: &str =
    "code,decoder,success_mode,epsilon,trials,frame_errors,fer,ci95_low,ci95_high,iterations,master_seed";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelModel {
    eps: f64,
}

impl ChannelModel {
    pub fn new(eps: f64) -> Result<ChannelModel> {
        if !eps.is_finite() || !(0.0..=0.75).contains(&eps) {
            return Err(Error::SimulationSpec(format!(
                "channel strength {eps} outside [0, 0.75]"
            )));
        }
        Ok(ChannelModel { eps })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Each qubit independently takes a uniform nonzero symbol with
    /// probability eps.
    pub fn sample_error(&self, n: usize, rng: &mut impl Rng) -> Vec<Gf4> {
        (0..n)
            .map(|_| {
                if rng.random_bool(self.eps) {
                    Gf4::from_index(rng.random_range(1..4))
                } else {
                    Gf4::ZERO
                }
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecoderKind {
    /// Four-guess ensemble on the reduced graph.
    Camel,
    /// Plain quaternary sum-product on the full graph.
    Bp,
    /// Single reduced-graph path whose guess is the true last symbol.
    Ga,
    /// Two independent binary decoders over the bit planes.
    Bp2,
}

impl DecoderKind {
    pub const ALL: [DecoderKind; 4] =
        [DecoderKind::Camel, DecoderKind::Bp, DecoderKind::Ga, DecoderKind::Bp2];

    pub fn parse(s: &str) -> Result<DecoderKind> {
        match s.to_ascii_lowercase().as_str() {
            "camel" => Ok(DecoderKind::Camel),
            "bp" => Ok(DecoderKind::Bp),
            "ga" => Ok(DecoderKind::Ga),
            "bp2" => Ok(DecoderKind::Bp2),
            _ => Err(Error::SimulationSpec(format!(
                "unknown decoder '{s}' (expected camel, bp, ga, or bp2)"
            ))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            DecoderKind::Camel => "camel",
            DecoderKind::Bp => "bp",
            DecoderKind::Ga => "ga",
            DecoderKind::Bp2 => "bp2",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuccessMode {
    /// The estimate must reproduce the error exactly.
    Strict,
    /// The residual may be any product of stabilizer rows.
    Degenerate,
}

impl SuccessMode {
    pub fn parse(s: &str) -> Result<SuccessMode> {
        match s.to_ascii_lowercase().as_str() {
            "strict" => Ok(SuccessMode::Strict),
            "degenerate" => Ok(SuccessMode::Degenerate),
            _ => Err(Error::SimulationSpec(format!(
                "unknown success mode '{s}' (expected strict or degenerate)"
            ))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            SuccessMode::Strict => "strict",
            SuccessMode::Degenerate => "degenerate",
        }
    }
}

/// True when the decode attempt counts as a frame error. `estimate` is
/// `None` when the decoder declared failure outright.
pub fn adjudicate(
    code: &CssCode,
    truth: &[Gf4],
    estimate: Option<&[Gf4]>,
    mode: SuccessMode,
) -> bool {
    let Some(est) = estimate else {
        return true;
    };
    match mode {
        SuccessMode::Strict => est != truth,
        SuccessMode::Degenerate => {
            let residual: Vec<Gf4> = truth.iter().zip(est).map(|(a, b)| a.add(*b)).collect();
            !code
                .residual_in_stabilizer(&residual)
                .expect("estimate length matches code length")
        }
    }
}

#[derive(Clone, Debug)]
pub struct SimulationSpec {
    pub epsilons: Vec<f64>,
    pub decoder: DecoderKind,
    pub success_mode: SuccessMode,
    pub min_frame_errors: u64,
    pub max_trials: u64,
    /// Iteration cap handed to the message-passing decoders.
    pub iterations: usize,
    pub master_seed: u64,
}

impl Default for SimulationSpec {
    fn default() -> Self {
        SimulationSpec {
            epsilons: Vec::new(),
            decoder: DecoderKind::Camel,
            success_mode: SuccessMode::Degenerate,
            min_frame_errors: 300,
            max_trials: 100_000_000,
            iterations: 15,
            master_seed: 1,
        }
    }
}

impl SimulationSpec {
    /// An empty epsilon list is allowed: the sweep is empty and succeeds.
    pub fn validate(&self) -> Result<()> {
        for &eps in &self.epsilons {
            ChannelModel::new(eps)?;
        }
        if self.min_frame_errors == 0 {
            return Err(Error::SimulationSpec(
                "min_frame_errors must be at least 1".into(),
            ));
        }
        if self.max_trials == 0 {
            return Err(Error::SimulationSpec("max_trials must be at least 1".into()));
        }
        if self.iterations == 0 {
            return Err(Error::SimulationSpec("iterations must be at least 1".into()));
        }
        Ok(())
    }

    fn decoder_config(&self) -> DecoderConfig {
        DecoderConfig {
            max_iterations: self.iterations,
            early_stop: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointResult {
    pub epsilon: f64,
    pub trials: u64,
    pub frame_errors: u64,
    pub fer: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
}

impl PointResult {
    /// The trial budget ran out before a single frame error was seen; the
    /// estimate is only an upper bound then.
    pub fn zero_frame_errors(&self) -> bool {
        self.frame_errors == 0
    }
}

/// Wilson score interval for k successes in n Bernoulli trials.
pub fn wilson_interval(k: u64, n: u64) -> (f64, f64) {
    assert!(n > 0 && k <= n);
    let z = WILSON_Z;
    let total = n;
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = (z / denom) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    // At the boundary counts the closed forms are exact; computing them
    // via center +- half would leave rounding residue.
    let low = if k == 0 { 0.0 } else { (center - half).max(0.0) };
    let high = if k == total { 1.0 } else { (center + half).min(1.0) };
    (low, high)
}

/// Per-trial RNG; the tag in the last word separates this stream family
/// from any future one.
pub fn trial_rng(master_seed: u64, eps_index: usize, trial: u64) -> ChaCha12Rng {
    let mut seed = [0u8; 32];
    seed[..8].copy_from_slice(&master_seed.to_le_bytes());
    seed[8..16].copy_from_slice(&(eps_index as u64).to_le_bytes());
    seed[16..24].copy_from_slice(&trial.to_le_bytes());
    seed[24..].copy_from_slice(&0x71_6c_64_70_63_68_61_6eu64.to_le_bytes());
    ChaCha12Rng::from_seed(seed)
}

/// Observer hooks for long sweeps; all methods have no-op defaults.
pub trait SweepObserver: Sync {
    fn progress(&self, _eps_index: usize, _trials: u64, _frame_errors: u64) {}
    fn point_done(&self, _eps_index: usize, _result: &PointResult) {}
    fn cancelled(&self) -> bool {
        false
    }
}

pub struct NoopObserver;

impl SweepObserver for NoopObserver {}

/// Decoder state shared by every trial of one point.
struct TrialEngine<'a> {
    code: &'a CssCode,
    kind: DecoderKind,
    mode: SuccessMode,
    config: DecoderConfig,
    channel: ChannelModel,
    camel: Option<CamelDecoder>,
    full: Option<(DecodingGraph, Vec<[f64; 4]>)>,
    bp2: Option<Bp2Decoder>,
}

impl<'a> TrialEngine<'a> {
    fn new(code: &'a CssCode, spec: &SimulationSpec, eps: f64) -> Result<TrialEngine<'a>> {
        let channel = ChannelModel::new(eps)?;
        let mut engine = TrialEngine {
            code,
            kind: spec.decoder,
            mode: spec.success_mode,
            config: spec.decoder_config(),
            channel,
            camel: None,
            full: None,
            bp2: None,
        };
        match spec.decoder {
            DecoderKind::Camel | DecoderKind::Ga => {
                engine.camel = Some(CamelDecoder::new(code));
            }
            DecoderKind::Bp => {
                let graph = DecodingGraph::from_code(code);
                let priors = vec![depolarizing_prior(eps); code.n()];
                engine.full = Some((graph, priors));
            }
            DecoderKind::Bp2 => {
                engine.bp2 = Some(Bp2Decoder::new(code));
            }
        }
        Ok(engine)
    }

    fn frame_error(&self, master_seed: u64, eps_index: usize, trial: u64) -> bool {
        let mut rng = trial_rng(master_seed, eps_index, trial);
        let truth = self.channel.sample_error(self.code.n(), &mut rng);
        let syndrome = self.code.compute_syndrome(&truth).expect("length");
        let eps = self.channel.eps();
        let estimate: Option<Vec<Gf4>> = match self.kind {
            DecoderKind::Camel => {
                let out = self
                    .camel
                    .as_ref()
                    .unwrap()
                    .decode(&syndrome, eps, &self.config);
                out.chosen_estimate().map(|s| s.to_vec())
            }
            DecoderKind::Ga => {
                let guess = truth[self.code.n() - 1];
                let out = self
                    .camel
                    .as_ref()
                    .unwrap()
                    .decode_path(&syndrome, eps, guess, &self.config);
                out.satisfied.then_some(out.estimate)
            }
            DecoderKind::Bp => {
                let (graph, priors) = self.full.as_ref().unwrap();
                let out = bp_decode(graph, &syndrome, priors, &self.config);
                out.satisfied.then_some(out.estimate)
            }
            DecoderKind::Bp2 => {
                let out = self
                    .bp2
                    .as_ref()
                    .unwrap()
                    .decode(&syndrome, eps, &self.config);
                out.satisfied.then_some(out.estimate)
            }
        };
        adjudicate(self.code, &truth, estimate.as_deref(), self.mode)
    }
}

/// Estimate one channel point. Trials run until `min_frame_errors` frame
/// errors have been seen or `max_trials` trials are spent, whichever
/// comes first.
pub fn run_point(
    code: &CssCode,
    spec: &SimulationSpec,
    eps_index: usize,
    observer: &dyn SweepObserver,
) -> Result<PointResult> {
    spec.validate()?;
    let eps = spec.epsilons[eps_index];
    let engine = TrialEngine::new(code, spec, eps)?;
    let mut trials = 0u64;
    let mut errors = 0u64;
    while trials < spec.max_trials && errors < spec.min_frame_errors {
        if observer.cancelled() {
            return Err(Error::Cancelled);
        }
        let base = trials;
        let chunk_len = CHUNK.min(spec.max_trials - base);
        let flags: Vec<bool> = (base..base + chunk_len)
            .into_par_iter()
            .map(|t| engine.frame_error(spec.master_seed, eps_index, t))
            .collect();
        for flag in flags {
            trials += 1;
            if flag {
                errors += 1;
                if errors >= spec.min_frame_errors {
                    break;
                }
            }
        }
        observer.progress(eps_index, trials, errors);
    }
    let fer = errors as f64 / trials as f64;
    let (ci95_low, ci95_high) = wilson_interval(errors, trials);
    Ok(PointResult {
        epsilon: eps,
        trials,
        frame_errors: errors,
        fer,
        ci95_low,
        ci95_high,
    })
}

/// Cap trial parallelism process-wide. Must run before the first
/// simulation; the worker count never changes results, only wall time.
pub fn configure_threads(threads: usize) -> Result<()> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::ThreadPool(e.to_string()))
}

pub fn run_sweep(
    code: &CssCode,
    spec: &SimulationSpec,
    observer: &dyn SweepObserver,
) -> Result<Vec<PointResult>> {
    spec.validate()?;
    let mut results = Vec::with_capacity(spec.epsilons.len());
    for eps_index in 0..spec.epsilons.len() {
        let result = run_point(code, spec, eps_index, observer)?;
        observer.point_done(eps_index, &result);
        results.push(result);
    }
    Ok(results)
}

/// Up to six significant digits, plain notation in the human range and
/// scientific outside it, trailing zeros trimmed.
pub fn format_significant(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..=5).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{x:.5e}");
        let (mantissa, exponent) = s.split_once('e').expect("scientific form");
        format!(
            "{}e{}",
            mantissa.trim_end_matches('0').trim_end_matches('.'),
            exponent
        )
    }
}

pub fn write_csv<W: Write>(
    w: &mut W,
    code_label: &str,
    spec: &SimulationSpec,
    points: &[PointResult],
) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for p in points {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{}",
            code_label,
            spec.decoder.as_str(),
            spec.success_mode.as_str(),
            format_significant(p.epsilon),
            p.trials,
            p.frame_errors,
            format_significant(p.fer),
            format_significant(p.ci95_low),
            format_significant(p.ci95_high),
            spec.iterations,
            spec.master_seed
        )?;
    }
    Ok(())
}

pub fn csv_string(code_label: &str, spec: &SimulationSpec, points: &[PointResult]) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, code_label, spec, points).expect("in-memory write");
    String::from_utf8(buf).expect("ascii csv")
}
