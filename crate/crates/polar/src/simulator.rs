//! Seeded Monte Carlo campaigns: FER and average-complexity statistics for
//! the three decoders over a grid of code rates.
//!
//! Reproducibility contract: every trial's randomness comes from a seed
//! derived from `(master seed, rate-grid index, frame index)` by a
//! counter-based splitter. The derivation is independent of the decoder, so
//! all decoders see identical info bits and channel noise at a given frame
//! index (paired comparisons), and independent of scheduling, so results are
//! bit-identical for any worker count. Early stopping scans per-frame
//! results in frame order and cuts at the exact frame where the error floor
//! is reached, which keeps the stop point deterministic too.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::channels::{channel_llrs, transmit, ChannelModel, Llr};
use crate::codec::{
    count_lr_calls, encode, estimate_complexity, lclsc_decode, lsc_decode, sc_decode,
};
use crate::construction::{CodeSpec, ConstructError, ReliabilityMode};
use crate::float::Float;

/// Errors from campaign configuration and aggregation.
#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error("{0}")]
    InvalidConfig(String),
    #[error("paired campaigns have mismatched grids or seeds")]
    GridMismatch,
}

/// The decoding algorithms a campaign can exercise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DecoderKind {
    Sc,
    Lsc,
    Lclsc,
}

impl DecoderKind {
    pub fn name(self) -> &'static str {
        match self {
            DecoderKind::Sc => "sc",
            DecoderKind::Lsc => "lsc",
            DecoderKind::Lclsc => "lclsc",
        }
    }
}

impl std::fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One frame's outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialResult {
    pub frame_error: bool,
    pub lr_calls: u64,
    pub sc_mode_bits: usize,
}

/// Campaign description: channel, code grid, decoders, and stopping rules.
#[derive(Clone, Debug)]
pub struct CampaignConfig<F> {
    pub channel: ChannelModel<F>,
    pub block_len: usize,
    /// Information lengths (one per rate-grid point).
    pub info_lens: Vec<usize>,
    pub decoders: Vec<DecoderKind>,
    pub list_size: usize,
    pub p_mode: ReliabilityMode<F>,
    /// Maximum frames per (decoder, rate) cell.
    pub trials: u64,
    /// Early-stop error-frame floor; 0 disables early stopping.
    pub min_errors: u64,
    pub seed: u64,
}

/// Statistics of one (decoder, rate) cell.
#[derive(Clone, Debug)]
pub struct CellStats {
    pub decoder: DecoderKind,
    pub info_len: usize,
    pub frames: u64,
    pub errors: u64,
    pub fer: f64,
    /// 95% normal-approximation half width, `1.96 sqrt(fer (1-fer) / frames)`.
    pub fer_ci95: f64,
    pub mean_lr_calls: f64,
    pub lr_calls_stddev: f64,
    /// Mean number of SC-mode information bits per frame (`m`).
    pub mean_sc_mode_bits: f64,
    /// The linear cost model evaluated at the measured mean `m`.
    pub eq12_estimate: f64,
    pub ml_fer_lower_bound: f64,
    pub sc_fer_upper_bound: f64,
}

/// All cells of a campaign plus the identifiers needed to pair campaigns.
#[derive(Clone, Debug)]
pub struct CampaignStats {
    pub channel: String,
    pub block_len: usize,
    pub list_size: usize,
    pub seed: u64,
    pub cells: Vec<CellStats>,
}

impl CampaignStats {
    /// The cells of one decoder, as a standalone stats object (for pairing).
    pub fn only(&self, decoder: DecoderKind) -> CampaignStats {
        CampaignStats {
            channel: self.channel.clone(),
            block_len: self.block_len,
            list_size: self.list_size,
            seed: self.seed,
            cells: self
                .cells
                .iter()
                .filter(|c| c.decoder == decoder)
                .cloned()
                .collect(),
        }
    }

    pub fn cell(&self, decoder: DecoderKind, info_len: usize) -> Option<&CellStats> {
        self.cells
            .iter()
            .find(|c| c.decoder == decoder && c.info_len == info_len)
    }
}

/// Per-rate comparison of two campaigns run with the same grid and seed.
#[derive(Clone, Debug)]
pub struct DeltaRow {
    pub info_len: usize,
    /// FER(A) / FER(B) with a 95% interval (log-normal approximation).
    pub fer_ratio: f64,
    pub fer_ratio_lo: f64,
    pub fer_ratio_hi: f64,
    /// mean lr_calls(A) / mean lr_calls(B) with a 95% interval.
    pub complexity_ratio: f64,
    pub complexity_ratio_lo: f64,
    pub complexity_ratio_hi: f64,
    /// Set when either cell has fewer than 20 error frames.
    pub low_confidence: bool,
}

const SPLITMIX_GAMMA: u64 = 0x9E3779B97F4A7C15;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(SPLITMIX_GAMMA);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D049BB133111EB);
    x ^ (x >> 31)
}

/// Derives the per-trial seed from `(master, rate index, frame index)`.
///
/// Deliberately independent of the decoder so that every decoder sees the
/// identical frame at a given index.
pub fn derive_trial_seed(master: u64, rate_index: u64, frame: u64) -> u64 {
    splitmix64(splitmix64(master ^ splitmix64(rate_index)) ^ frame)
}

/// Draws one frame: uniform info bits, encoding, transmission, LLR mapping.
pub fn generate_frame<F: Float>(
    code: &CodeSpec<F>,
    ch: &ChannelModel<F>,
    trial_seed: u64,
) -> (Vec<u8>, Vec<Llr<F>>) {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
    let info: Vec<u8> = (0..code.info_len())
        .map(|_| rng.random::<bool>() as u8)
        .collect();
    let x = encode(&code.expand_info_bits(&info));
    let y = transmit(&x, ch, &mut rng);
    let llrs = channel_llrs(&y, ch).expect("transmit produces matching symbols");
    (info, llrs)
}

/// Runs a single frame through one decoder. A frame error is any
/// information-bit mismatch.
pub fn run_trial<F: Float>(
    code: &CodeSpec<F>,
    ch: &ChannelModel<F>,
    decoder: DecoderKind,
    list_size: usize,
    trial_seed: u64,
) -> TrialResult {
    let (info, llrs) = generate_frame(code, ch, trial_seed);
    let out = match decoder {
        DecoderKind::Sc => sc_decode(&llrs, code),
        DecoderKind::Lsc => lsc_decode(&llrs, code, list_size, None).expect("no start path"),
        DecoderKind::Lclsc => lclsc_decode(&llrs, code, list_size),
    };
    TrialResult {
        frame_error: out.info_bits != info,
        lr_calls: count_lr_calls(&out),
        sc_mode_bits: out.sc_mode_bits,
    }
}

/// Runs the full campaign grid. Cells iterate decoders in the order given,
/// each sweeping the rate grid.
pub fn run_campaign<F: Float>(cfg: &CampaignConfig<F>) -> Result<CampaignStats, SimError> {
    if cfg.decoders.is_empty() {
        return Err(SimError::InvalidConfig(
            "decode.decoders must not be empty".into(),
        ));
    }
    if cfg.info_lens.is_empty() {
        return Err(SimError::InvalidConfig(
            "code.rates / code.info_lens must not be empty".into(),
        ));
    }
    if cfg.trials == 0 {
        return Err(SimError::InvalidConfig("sim.trials must be >= 1".into()));
    }
    if cfg.list_size == 0 {
        return Err(SimError::InvalidConfig(
            "decode.list_size must be >= 1".into(),
        ));
    }
    let mut codes = Vec::with_capacity(cfg.info_lens.len());
    for &k in &cfg.info_lens {
        codes.push(CodeSpec::construct(
            cfg.block_len,
            k,
            &cfg.channel,
            cfg.p_mode,
        )?);
    }
    let mut cells = Vec::new();
    for &decoder in &cfg.decoders {
        for (rate_index, code) in codes.iter().enumerate() {
            cells.push(run_cell(cfg, code, decoder, rate_index as u64));
        }
    }
    Ok(CampaignStats {
        channel: cfg.channel.to_string(),
        block_len: cfg.block_len,
        list_size: cfg.list_size,
        seed: cfg.seed,
        cells,
    })
}

/// Frames per parallel batch; stop conditions are evaluated in frame order
/// after each batch, so the value affects speed only, never results.
const BATCH: u64 = 256;

fn run_cell<F: Float>(
    cfg: &CampaignConfig<F>,
    code: &CodeSpec<F>,
    decoder: DecoderKind,
    rate_index: u64,
) -> CellStats {
    let mut frames = 0u64;
    let mut errors = 0u64;
    let mut sum_calls = 0.0f64;
    let mut sum_calls_sq = 0.0f64;
    let mut sum_m = 0.0f64;
    'outer: while frames < cfg.trials {
        let start = frames;
        let batch = BATCH.min(cfg.trials - start);
        let results: Vec<TrialResult> = (start..start + batch)
            .into_par_iter()
            .map(|frame| {
                run_trial(
                    code,
                    &cfg.channel,
                    decoder,
                    cfg.list_size,
                    derive_trial_seed(cfg.seed, rate_index, frame),
                )
            })
            .collect();
        for r in results {
            frames += 1;
            errors += u64::from(r.frame_error);
            sum_calls += r.lr_calls as f64;
            sum_calls_sq += (r.lr_calls as f64) * (r.lr_calls as f64);
            sum_m += r.sc_mode_bits as f64;
            if cfg.min_errors > 0 && errors >= cfg.min_errors {
                break 'outer;
            }
        }
    }
    let nf = frames as f64;
    let fer = errors as f64 / nf;
    let mean_calls = sum_calls / nf;
    let var_calls = (sum_calls_sq / nf - mean_calls * mean_calls).max(0.0);
    let mean_m = sum_m / nf;
    let z_info: Vec<f64> = code.info_z().iter().map(|z| z.as_f64()).collect();
    CellStats {
        decoder,
        info_len: code.info_len(),
        frames,
        errors,
        fer,
        fer_ci95: 1.96 * (fer * (1.0 - fer) / nf).sqrt(),
        mean_lr_calls: mean_calls,
        lr_calls_stddev: var_calls.sqrt(),
        mean_sc_mode_bits: mean_m,
        eq12_estimate: estimate_complexity(
            mean_m,
            code.info_len(),
            code.block_len(),
            cfg.list_size,
        ),
        ml_fer_lower_bound: crate::construction::ml_fer_lower_bound(&z_info),
        sc_fer_upper_bound: crate::construction::sc_fer_upper_bound(&z_info),
    }
}

/// Pairs two campaigns cell by cell and reports FER and complexity ratios
/// `A / B` with normal-approximation intervals.
pub fn paired_delta(a: &CampaignStats, b: &CampaignStats) -> Result<Vec<DeltaRow>, SimError> {
    if a.block_len != b.block_len
        || a.seed != b.seed
        || a.channel != b.channel
        || a.cells.len() != b.cells.len()
    {
        return Err(SimError::GridMismatch);
    }
    let mut rows = Vec::with_capacity(a.cells.len());
    for (ca, cb) in a.cells.iter().zip(&b.cells) {
        if ca.info_len != cb.info_len {
            return Err(SimError::GridMismatch);
        }
        let (fer_ratio, fer_lo, fer_hi) =
            ratio_with_ci(ca.fer, binomial_log_var(ca), cb.fer, binomial_log_var(cb));
        let va = mean_log_var(ca.mean_lr_calls, ca.lr_calls_stddev, ca.frames);
        let vb = mean_log_var(cb.mean_lr_calls, cb.lr_calls_stddev, cb.frames);
        let (c_ratio, c_lo, c_hi) = ratio_with_ci(ca.mean_lr_calls, va, cb.mean_lr_calls, vb);
        rows.push(DeltaRow {
            info_len: ca.info_len,
            fer_ratio,
            fer_ratio_lo: fer_lo,
            fer_ratio_hi: fer_hi,
            complexity_ratio: c_ratio,
            complexity_ratio_lo: c_lo,
            complexity_ratio_hi: c_hi,
            low_confidence: ca.errors < 20 || cb.errors < 20,
        });
    }
    Ok(rows)
}

/// Variance of `ln(fer estimate)` under the binomial model; `None` when the
/// cell has no errors.
fn binomial_log_var(c: &CellStats) -> Option<f64> {
    if c.errors == 0 {
        None
    } else {
        Some((1.0 - c.fer) / (c.fer * c.frames as f64))
    }
}

fn mean_log_var(mean: f64, stddev: f64, frames: u64) -> Option<f64> {
    if mean <= 0.0 {
        None
    } else {
        Some((stddev * stddev / frames as f64) / (mean * mean))
    }
}

fn ratio_with_ci(
    num: f64,
    num_log_var: Option<f64>,
    den: f64,
    den_log_var: Option<f64>,
) -> (f64, f64, f64) {
    // Equal point estimates pair to a ratio of exactly 1 (covers 0/0).
    let ratio = if num == den { 1.0 } else { num / den };
    match (num_log_var, den_log_var) {
        (Some(va), Some(vb)) => {
            let half = 1.96 * (va + vb).sqrt();
            (ratio, ratio * (-half).exp(), ratio * half.exp())
        }
        _ => (ratio, 0.0, f64::INFINITY),
    }
}
