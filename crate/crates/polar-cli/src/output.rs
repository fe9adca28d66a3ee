//! Writers for the CLI's file outputs: the code-spec file, the results CSV,
//! the run manifest, and the optional gnuplot script.
//!
//! Floats are printed with `{}`, Rust's shortest round-trip formatting, so
//! every emitted number parses back to the identical bit pattern.

use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::Result;

use crate::config::Config;
use polar::{
    lclsc_decode, lsc_decode, sc_decode, BitMode, CampaignConfig, CampaignStats, ChannelModel,
    CodeSpec, DecoderKind,
};

/// Stable column order of results.csv; documented in the README.
pub const CSV_HEADER: &str = "decoder,channel,N,k,L,frames,errors,fer,fer_ci,\
mean_lr_calls,mean_m,eq12_estimate,ml_lower,union_upper";

fn join_floats(values: &[f64]) -> String {
    let items: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("[{}]", items.join(", "))
}

fn join_usize(values: &[usize]) -> String {
    let items: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("[{}]", items.join(", "))
}

/// The code-spec file: dimensions, channel, reliabilities, and thresholds.
/// Indices are 0-based subchannel positions in natural decoding order.
pub fn codespec_toml(code: &CodeSpec<f64>, ch: &ChannelModel<f64>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# polar code specification");
    let _ = writeln!(s, "block_len = {}", code.block_len());
    let _ = writeln!(s, "info_len = {}", code.info_len());
    let _ = writeln!(s, "channel = \"{ch}\"");
    let _ = writeln!(s, "z_threshold = {}", code.z_threshold());
    let _ = writeln!(s, "split_index = {}", code.split_index());
    let _ = writeln!(s, "info_set = {}", join_usize(code.info_set()));
    let _ = writeln!(s, "z = {}", join_floats(code.z()));
    let _ = writeln!(s, "p = {}", join_floats(code.reliability_targets()));
    let _ = writeln!(s, "tau = {}", join_floats(code.llr_thresholds()));
    s
}

/// One CSV row per (decoder, rate) cell, in campaign order.
pub fn results_csv(stats: &CampaignStats, list_size: usize) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{CSV_HEADER}");
    for c in &stats.cells {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            c.decoder.name(),
            stats.channel,
            stats.block_len,
            c.info_len,
            list_size,
            c.frames,
            c.errors,
            c.fer,
            c.fer_ci95,
            c.mean_lr_calls,
            c.mean_sc_mode_bits,
            c.eq12_estimate,
            c.ml_fer_lower_bound,
            c.sc_fer_upper_bound,
        );
    }
    s
}

/// The run manifest: tool identity, timestamp, master seed, and a full echo
/// of the merged configuration. Every CSV row is traceable through it.
pub fn manifest_toml(cfg: &Config, stats: &CampaignStats) -> Result<String> {
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let mut s = String::new();
    let _ = writeln!(s, "tool = \"polar-cli\"");
    let _ = writeln!(s, "version = \"{}\"", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(s, "timestamp_unix = {timestamp}");
    let _ = writeln!(s, "master_seed = {}", stats.seed);
    let _ = writeln!(s, "channel = \"{}\"", stats.channel);
    let _ = writeln!(s, "results_csv = \"results.csv\"");
    let _ = writeln!(s);
    let _ = writeln!(s, "[config]");
    s.push_str(&toml::to_string(cfg)?);
    Ok(s)
}

/// Per-frame diagnostics for the first `frames` frames of every cell:
/// outcome, LR calls, SC-mode bit count, and the per-information-bit
/// decoding mode as a compact S/L string.
pub fn trace_csv(campaign: &CampaignConfig<f64>, frames: u64) -> Result<String> {
    let mut s = String::new();
    let _ = writeln!(s, "decoder,k,frame,frame_error,lr_calls,m,modes");
    for (rate_index, &k) in campaign.info_lens.iter().enumerate() {
        let code = CodeSpec::construct(campaign.block_len, k, &campaign.channel, campaign.p_mode)?;
        for &decoder in &campaign.decoders {
            for frame in 0..frames.min(campaign.trials) {
                let seed = polar::derive_trial_seed(campaign.seed, rate_index as u64, frame);
                let (info, llrs) = polar::generate_frame(&code, &campaign.channel, seed);
                let out = match decoder {
                    DecoderKind::Sc => sc_decode(&llrs, &code),
                    DecoderKind::Lsc => {
                        lsc_decode(&llrs, &code, campaign.list_size, None).expect("fresh decode")
                    }
                    DecoderKind::Lclsc => lclsc_decode(&llrs, &code, campaign.list_size),
                };
                let modes: String = out
                    .mode_trace
                    .iter()
                    .map(|&b| if b == BitMode::Sc { 'S' } else { 'L' })
                    .collect();
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{}",
                    decoder.name(),
                    k,
                    frame,
                    u8::from(out.info_bits != info),
                    out.lr_calls,
                    out.sc_mode_bits,
                    modes
                );
            }
        }
    }
    Ok(s)
}

/// A plotting script over results.csv: FER and mean LR calls versus rate,
/// one series per decoder.
pub fn gnuplot_script() -> String {
    let mut s = String::new();
    s.push_str("set datafile separator \",\"\n");
    s.push_str("set key left bottom\n");
    s.push_str("set terminal pngcairo size 900,600\n\n");
    s.push_str("set output \"fer.png\"\n");
    s.push_str("set logscale y\n");
    s.push_str("set xlabel \"rate k/N\"\nset ylabel \"FER\"\n");
    s.push_str(
        "plot \"results.csv\" using (strcol(1) eq \"sc\" ? $4/$3 : 1/0):8 with linespoints title \"SC\", \\\n     \"results.csv\" using (strcol(1) eq \"lsc\" ? $4/$3 : 1/0):8 with linespoints title \"LSC\", \\\n     \"results.csv\" using (strcol(1) eq \"lclsc\" ? $4/$3 : 1/0):8 with linespoints title \"LCLSC\"\n\n",
    );
    s.push_str("set output \"complexity.png\"\n");
    s.push_str("unset logscale y\n");
    s.push_str("set ylabel \"mean LR calculations\"\n");
    s.push_str(
        "plot \"results.csv\" using (strcol(1) eq \"sc\" ? $4/$3 : 1/0):10 with linespoints title \"SC\", \\\n     \"results.csv\" using (strcol(1) eq \"lsc\" ? $4/$3 : 1/0):10 with linespoints title \"LSC\", \\\n     \"results.csv\" using (strcol(1) eq \"lclsc\" ? $4/$3 : 1/0):10 with linespoints title \"LCLSC\", \\\n     \"results.csv\" using (strcol(1) eq \"lclsc\" ? $4/$3 : 1/0):12 with linespoints title \"LCLSC model\"\n",
    );
    s
}
