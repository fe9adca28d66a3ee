//! Embedded oracle suite: fast exhaustive checks of the kernels against the
//! brute-force references in [`crate::oracle`], runnable from the CLI.
//!
//! The `corrupt_f` option swaps the exact f-combine for a broken min-sum
//! variant inside the decoders under test; a healthy suite must then fail
//! (negative control for the checks themselves).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channels::{channel_llrs, transmit, ChannelModel};
use crate::codec::{encode, lsc_decode_inner, sc_decode_inner, CombineKind};
use crate::construction::{evolve_bhattacharyya, CodeSpec, ReliabilityMode};
use crate::oracle;

/// Options for a selftest run.
#[derive(Clone, Copy, Debug, Default)]
pub struct SelftestOptions {
    /// Replace the exact f-combine with a deliberately broken one; the suite
    /// is expected to fail. Used as a negative control.
    pub corrupt_f: bool,
}

/// One check's outcome.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Outcome of the whole suite.
#[derive(Clone, Debug, Default)]
pub struct SelftestReport {
    pub checks: Vec<CheckResult>,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: &'static str, passed: bool, detail: String) {
        self.checks.push(CheckResult {
            name,
            passed,
            detail,
        });
    }
}

/// Runs the embedded oracle suite.
pub fn run(opts: SelftestOptions) -> SelftestReport {
    let combine = if opts.corrupt_f {
        CombineKind::CorruptMinSum
    } else {
        CombineKind::Exact
    };
    let mut report = SelftestReport::default();
    check_encoder(&mut report);
    check_bec_construction(&mut report);
    check_sc_call_count(&mut report, combine);
    check_sc_against_marginalization(&mut report, combine);
    check_list_scores(&mut report, combine);
    report
}

fn check_encoder(report: &mut SelftestReport) {
    let mut ok = true;
    for n in [2usize, 4, 8, 16] {
        for word in 0u32..(1 << n.min(12)) {
            let u: Vec<u8> = (0..n).map(|i| ((word >> (i % 32)) & 1) as u8).collect();
            if encode(&encode(&u)) != u || encode(&u) != oracle::encode_by_matrix(&u) {
                ok = false;
            }
        }
    }
    report.push(
        "encoder involution and generator-matrix equivalence (N <= 16)",
        ok,
        String::new(),
    );
}

fn check_bec_construction(report: &mut SelftestReport) {
    let eps = 0.4;
    let exact = oracle::bec_exact_subchannel_erasure(3, eps);
    let evolved = evolve_bhattacharyya(eps, 3);
    let mut worst = 0.0f64;
    for (e, v) in exact.iter().zip(&evolved) {
        worst = worst.max((e - v).abs() / e.max(1e-300));
    }
    report.push(
        "BEC N=8 construction vs exhaustive erasure-pattern enumeration",
        worst < 1e-12,
        format!("worst relative deviation {worst:.3e}"),
    );
}

fn check_sc_call_count(report: &mut SelftestReport, combine: CombineKind) {
    let ch = ChannelModel::bec(0.4f64).unwrap();
    let code = CodeSpec::construct(512, 256, &ch, ReliabilityMode::LowerBound).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut ok = true;
    for _ in 0..5 {
        let info: Vec<u8> = (0..256).map(|_| rng.random::<bool>() as u8).collect();
        let x = encode(&code.expand_info_bits(&info));
        let y = transmit(&x, &ch, &mut rng);
        let llrs = channel_llrs(&y, &ch).unwrap();
        let out = sc_decode_inner(&llrs, &code, combine);
        if out.lr_calls != 512 + 512 * 9 {
            ok = false;
        }
    }
    report.push(
        "SC LR-call count is exactly N + N log2 N at N=512",
        ok,
        String::new(),
    );
}

fn check_sc_against_marginalization(report: &mut SelftestReport, combine: CombineKind) {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut mismatches = 0u32;
    let mut compared = 0u32;
    for ch in [
        ChannelModel::bec(0.4f64).unwrap(),
        ChannelModel::bsc(0.11).unwrap(),
    ] {
        let code = CodeSpec::construct(8, 4, &ch, ReliabilityMode::Fixed(0.9)).unwrap();
        for _ in 0..100 {
            let info: Vec<u8> = (0..4).map(|_| rng.random::<bool>() as u8).collect();
            let x = encode(&code.expand_info_bits(&info));
            let y = transmit(&x, &ch, &mut rng);
            let w: Vec<(f64, f64)> = y
                .iter()
                .map(|&s| oracle::symbol_likelihoods(s, &ch))
                .collect();
            let frozen: Vec<bool> = code.frozen_mask().to_vec();
            let (want_u, contradiction) = oracle::sc_decode_by_marginalization(&w, &frozen);
            if oracle::sc_decision_margin(&w, &frozen, &want_u) < 1e-9 {
                continue; // razor-thin tie; skip the decision comparison
            }
            compared += 1;
            let llrs = channel_llrs(&y, &ch).unwrap();
            let got = sc_decode_inner(&llrs, &code, combine);
            let limit = contradiction.unwrap_or(8);
            for (pos, &leaf) in code.info_set().iter().enumerate() {
                if leaf < limit && got.info_bits[pos] != want_u[leaf] {
                    mismatches += 1;
                }
            }
        }
    }
    report.push(
        "SC decisions match exhaustive subchannel marginalization (N=8)",
        mismatches == 0 && compared > 150,
        format!("{compared} frames compared, {mismatches} mismatches"),
    );
}

fn check_list_scores(report: &mut SelftestReport, combine: CombineKind) {
    let ch = ChannelModel::bsc(0.11f64).unwrap();
    let code = CodeSpec::construct(8, 4, &ch, ReliabilityMode::Fixed(0.9)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let info: Vec<u8> = (0..4).map(|_| rng.random::<bool>() as u8).collect();
        let x = encode(&code.expand_info_bits(&info));
        let y = transmit(&x, &ch, &mut rng);
        let w: Vec<(f64, f64)> = y
            .iter()
            .map(|&s| oracle::symbol_likelihoods(s, &ch))
            .collect();
        let llrs = channel_llrs(&y, &ch).unwrap();
        let out = lsc_decode_inner(&llrs, &code, 4, combine);
        let u = code.expand_info_bits(&out.info_bits);
        let want = oracle::chain_log_posterior(&w, &u);
        let got = out.score;
        let rel = (got - want).abs() / want.abs().max(1e-12);
        worst = worst.max(rel);
    }
    report.push(
        "list path score matches brute-force branch-posterior chain (N=8)",
        worst < 1e-9,
        format!("worst relative deviation {worst:.3e}"),
    );
}
