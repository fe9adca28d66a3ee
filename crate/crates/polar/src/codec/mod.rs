//! Encoder and the three decoders: successive cancellation (SC), list SC
//! (LSC), and the threshold-gated hybrid (LCLSC), with exact LR-call
//! accounting.
//!
//! The encoder is the Kronecker power of `[[1,0],[1,1]]` in natural bit
//! order (no bit-reversal permutation); decoders run the matching f/g
//! recursion. Complexity is measured as the number of LR calculations: one
//! per channel LLR plus one per f- or g-evaluation, with computations shared
//! across list paths charged once (the lazy-copy cost model). SC therefore
//! reports exactly `N + N log2 N` calls per frame and LSC at most `L` times
//! that.
//!
//! LCLSC decodes the first `a` information bits by SC while each decision
//! LLR clears its per-bit threshold `tau_i`; the first miss switches the
//! decoder permanently to LSC seeded with the single live path, and if all
//! `a` checks pass the remaining bits are decoded by SC as well.

mod memory;

use thiserror::Error;

use crate::channels::Llr;
use crate::construction::CodeSpec;
use crate::float::Float;

use memory::PathMemory;

/// Errors from the decoders.
#[derive(Debug, Error, PartialEq)]
pub enum CodecError {
    #[error("start path is inconsistent with this decode call: {0}")]
    InconsistentStart(&'static str),
}

/// Running totals of decoder work.
///
/// `lr_calls` counts channel-LLR accountings plus every f/g evaluation
/// performed; `erasure_conflicts` counts g-combines of contradictory certain
/// evidence (`+inf` with `-inf`), which yield an erasure by convention.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DecodeCounters {
    pub lr_calls: u64,
    pub erasure_conflicts: u64,
}

/// Which rule decoded an information bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BitMode {
    Sc,
    Lsc,
}

/// Result of decoding one frame.
#[derive(Clone, Debug)]
pub struct DecodeOutcome<F> {
    /// The `k` decoded information bits in decoding order.
    pub info_bits: Vec<u8>,
    /// Total LR calculations for the frame.
    pub lr_calls: u64,
    /// Number of information bits decided in SC mode (`m`).
    pub sc_mode_bits: usize,
    /// Per-information-bit decoding mode, length `k`.
    pub mode_trace: Vec<BitMode>,
    /// Accumulated log branch probability of the returned path: the sum over
    /// all `N` input positions of `ln P(u_i | y, u_1..u_(i-1))`. Always <= 0;
    /// exactly `-inf` when the path crossed a zero-probability branch (only
    /// possible with the BEC's infinite LLRs).
    pub score: F,
    /// Diagnostic count of contradictory-infinity g-combines.
    pub erasure_conflicts: u64,
}

/// Returns the frame's LR-calculation count.
pub fn count_lr_calls<F>(outcome: &DecodeOutcome<F>) -> u64 {
    outcome.lr_calls
}

/// The average-complexity model
/// `C = (m/k)(N + N log2 N) + ((k-m)/k) L (N + N log2 N)`.
pub fn estimate_complexity(
    mean_sc_bits: f64,
    info_len: usize,
    block_len: usize,
    list_size: usize,
) -> f64 {
    assert!(info_len >= 1 && block_len.is_power_of_two());
    let base = block_len as f64 * (1.0 + (block_len as f64).log2());
    let k = info_len as f64;
    let m = mean_sc_bits.clamp(0.0, k);
    (m / k) * base + ((k - m) / k) * list_size as f64 * base
}

/// Encodes `u` with the Kronecker-power generator over GF(2), in place via
/// the `O(N log N)` butterfly, natural bit order. The transform is an
/// involution: applying it twice returns the input.
pub fn encode(u: &[u8]) -> Vec<u8> {
    assert!(
        u.len().is_power_of_two(),
        "input length must be a power of two"
    );
    debug_assert!(u.iter().all(|&b| b <= 1));
    let mut x = u.to_vec();
    let n = x.len();
    let mut len = 1;
    while len < n {
        let mut start = 0;
        while start < n {
            for i in start..start + len {
                x[i] ^= x[i + len];
            }
            start += 2 * len;
        }
        len *= 2;
    }
    x
}

/// Exact f-combine (boxplus) of two LLRs, charging one LR call.
///
/// Computed as `sign(l1) sign(l2) min(|l1|,|l2|)` plus the correction
/// `ln((1 + e^-|l1+l2|) / (1 + e^-|l1-l2|))`, which equals
/// `2 atanh(tanh(l1/2) tanh(l2/2))` without overflow. Extended-real cases:
/// a zero operand absorbs (`f(0, x) = 0`) and an infinite operand passes the
/// other through with its sign (`f(+inf, x) = x`, `f(-inf, x) = -x`).
pub fn f_combine<F: Float>(counters: &mut DecodeCounters, l1: Llr<F>, l2: Llr<F>) -> Llr<F> {
    counters.lr_calls += 1;
    f_exact(l1, l2)
}

/// g-combine `l2 + (1-2b) l1`, charging one LR call.
///
/// Contradictory certain evidence (`+inf` plus `-inf`) yields the erasure
/// LLR 0 and bumps the diagnostic counter; it cannot arise on a correct BEC
/// path, and 0 is the information-free element.
pub fn g_combine<F: Float>(
    counters: &mut DecodeCounters,
    l1: Llr<F>,
    l2: Llr<F>,
    bit: u8,
) -> Llr<F> {
    counters.lr_calls += 1;
    g_raw(counters, l1, l2, bit)
}

fn f_exact<F: Float>(l1: Llr<F>, l2: Llr<F>) -> Llr<F> {
    let (x, y) = (l1.value(), l2.value());
    if x == F::zero() || y == F::zero() {
        return Llr::zero();
    }
    if x.is_infinite() {
        return if x > F::zero() { l2 } else { -l2 };
    }
    if y.is_infinite() {
        return if y > F::zero() { l1 } else { -l1 };
    }
    let mag = x.abs().min(y.abs());
    let sign = if (x < F::zero()) != (y < F::zero()) {
        -F::one()
    } else {
        F::one()
    };
    let corr = (-(x + y).abs()).exp().ln_1p() - (-(x - y).abs()).exp().ln_1p();
    Llr::new(sign * mag + corr)
}

/// Min-sum f without the correction term. Only reachable through the
/// selftest's negative control, which must detect the broken kernel.
fn f_corrupt_min_sum<F: Float>(l1: Llr<F>, l2: Llr<F>) -> Llr<F> {
    let (x, y) = (l1.value(), l2.value());
    if x == F::zero() || y == F::zero() {
        return Llr::zero();
    }
    if x.is_infinite() {
        return if x > F::zero() { l2 } else { -l2 };
    }
    if y.is_infinite() {
        return if y > F::zero() { l1 } else { -l1 };
    }
    let mag = x.abs().min(y.abs());
    let sign = if (x < F::zero()) != (y < F::zero()) {
        -F::one()
    } else {
        F::one()
    };
    Llr::new(sign * mag)
}

fn g_raw<F: Float>(counters: &mut DecodeCounters, l1: Llr<F>, l2: Llr<F>, bit: u8) -> Llr<F> {
    debug_assert!(bit <= 1);
    let x = if bit == 1 { -l1.value() } else { l1.value() };
    let y = l2.value();
    if x.is_infinite() && y.is_infinite() && (x > F::zero()) != (y > F::zero()) {
        counters.erasure_conflicts += 1;
        return Llr::zero();
    }
    Llr::new(x + y)
}

/// Selects the f implementation used by a decoder run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum CombineKind {
    Exact,
    /// Selftest negative control.
    CorruptMinSum,
}

impl CombineKind {
    #[inline]
    fn f<F: Float>(self, counters: &mut DecodeCounters, l1: Llr<F>, l2: Llr<F>) -> Llr<F> {
        counters.lr_calls += 1;
        match self {
            CombineKind::Exact => f_exact(l1, l2),
            CombineKind::CorruptMinSum => f_corrupt_min_sum(l1, l2),
        }
    }
}

/// `ln P(u = bit | llr)`: the log of the normalized branch probability,
/// `-ln(1 + e^-s)` with `s = (1-2 bit) llr`.
fn branch_log_prob<F: Float>(llr: Llr<F>, bit: u8) -> F {
    let s = if bit == 0 { llr.value() } else { -llr.value() };
    if s.is_infinite() {
        return if s > F::zero() {
            F::zero()
        } else {
            F::neg_infinity()
        };
    }
    s.min(F::zero()) - (-s.abs()).exp().ln_1p()
}

/// One list-decoding hypothesis: decisions so far, normalized path score,
/// and the per-level LLR working memory.
///
/// A branch whose posterior is exactly zero would drive the log score to
/// `-inf` and erase every later distinction between such paths, so the score
/// is kept as a finite part plus a count of zero-probability branchings,
/// ordered lexicographically (fewer zeros first, then higher finite part).
/// This is the correct total order on products of probabilities and keeps a
/// width-1 list identical to SC even after a BEC contradiction.
#[derive(Clone, Debug)]
struct Path<F: Float> {
    mem: PathMemory<F>,
    u: Vec<u8>,
    score: F,
    zero_branchings: u32,
}

impl<F: Float> Path<F> {
    fn new(channel_llrs: &[Llr<F>]) -> Self {
        Path {
            mem: PathMemory::new(channel_llrs),
            u: vec![0; channel_llrs.len()],
            score: F::zero(),
            zero_branchings: 0,
        }
    }

    fn add_branch(&mut self, llr: Llr<F>, bit: u8) {
        let ll = branch_log_prob(llr, bit);
        if ll.is_infinite() {
            self.zero_branchings += 1;
        } else {
            self.score += ll;
        }
    }

    /// True when this path ranks above `other`.
    fn beats(&self, other: &Self) -> bool {
        self.zero_branchings < other.zero_branchings
            || (self.zero_branchings == other.zero_branchings && self.score > other.score)
    }

    fn extended_score(&self, offset: F) -> F {
        if self.zero_branchings > 0 {
            F::neg_infinity()
        } else {
            self.score + offset
        }
    }
}

/// A single consistent decoding path paused at an information position,
/// usable as the starting point of a list decode. Built with [`sc_prefix`]
/// or internally by [`lclsc_decode`] at its SC-to-LSC switch.
#[derive(Clone, Debug)]
pub struct DecoderPath<F: Float> {
    path: Path<F>,
    next_leaf: usize,
    info_decoded: usize,
    counters: DecodeCounters,
    /// Decision LLR for `next_leaf` when it was already computed (and
    /// charged) by the producer of this path.
    pending_llr: Option<Llr<F>>,
}

impl<F: Float> DecoderPath<F> {
    /// Accumulated log branch probability over the decided prefix.
    pub fn score(&self) -> F {
        self.path.extended_score(F::zero())
    }

    /// First undecided input position.
    pub fn position(&self) -> usize {
        self.next_leaf
    }

    /// Information bits decided so far, in decoding order.
    pub fn info_prefix(&self, code: &CodeSpec<F>) -> Vec<u8> {
        code.info_set()
            .iter()
            .take(self.info_decoded)
            .map(|&i| self.path.u[i])
            .collect()
    }

    fn validate(&self, llr: &[Llr<F>], code: &CodeSpec<F>) -> Result<(), CodecError> {
        if self.path.u.len() != code.block_len() {
            return Err(CodecError::InconsistentStart("block length mismatch"));
        }
        if self.path.mem.channel() != llr {
            return Err(CodecError::InconsistentStart(
                "channel LLRs differ from the path's",
            ));
        }
        if self.next_leaf > code.block_len() {
            return Err(CodecError::InconsistentStart("position out of range"));
        }
        if self.next_leaf < code.block_len() && code.is_frozen(self.next_leaf) {
            return Err(CodecError::InconsistentStart(
                "path must be paused at an information position",
            ));
        }
        let info_before = code
            .info_set()
            .iter()
            .filter(|&&i| i < self.next_leaf)
            .count();
        if info_before != self.info_decoded {
            return Err(CodecError::InconsistentStart("decoded-bit count mismatch"));
        }
        for (i, &b) in self.path.u.iter().enumerate() {
            if b > 1 || (code.is_frozen(i) && b != 0) {
                return Err(CodecError::InconsistentStart("frozen bit not zero"));
            }
        }
        Ok(())
    }
}

/// Single-path SC stepping shared by `sc_decode`, `sc_prefix`, and the SC
/// phase of `lclsc_decode`.
struct ScRunner<'c, F: Float> {
    code: &'c CodeSpec<F>,
    path: Path<F>,
    next_leaf: usize,
    info_decoded: usize,
    counters: DecodeCounters,
    combine: CombineKind,
}

impl<'c, F: Float> ScRunner<'c, F> {
    fn new(llr: &[Llr<F>], code: &'c CodeSpec<F>, combine: CombineKind) -> Self {
        assert_eq!(llr.len(), code.block_len(), "LLR vector length must be N");
        ScRunner {
            code,
            path: Path::new(llr),
            next_leaf: 0,
            info_decoded: 0,
            counters: DecodeCounters {
                // Channel-LLR accounting: one call per received symbol.
                lr_calls: llr.len() as u64,
                erasure_conflicts: 0,
            },
            combine,
        }
    }

    fn commit(&mut self, llr: Llr<F>, bit: u8) {
        let phi = self.next_leaf;
        self.path.add_branch(llr, bit);
        self.path.u[phi] = bit;
        self.path.mem.record_decision(phi, bit);
        if !self.code.is_frozen(phi) {
            self.info_decoded += 1;
        }
        self.next_leaf += 1;
    }

    /// Decodes the current leaf: frozen positions are forced to 0,
    /// information positions take the hard decision.
    fn decode_leaf(&mut self) {
        let phi = self.next_leaf;
        let llr = self
            .path
            .mem
            .compute_leaf_llr(phi, &mut self.counters, self.combine);
        let bit = if self.code.is_frozen(phi) {
            0
        } else {
            llr.hard_decision()
        };
        self.commit(llr, bit);
    }

    /// Decodes frozen leaves until paused at an information leaf (or done).
    fn skip_frozen(&mut self) {
        while self.next_leaf < self.code.block_len() && self.code.is_frozen(self.next_leaf) {
            self.decode_leaf();
        }
    }

    fn into_outcome(self) -> DecodeOutcome<F> {
        debug_assert_eq!(self.next_leaf, self.code.block_len());
        let k = self.code.info_len();
        DecodeOutcome {
            info_bits: self
                .code
                .info_set()
                .iter()
                .map(|&i| self.path.u[i])
                .collect(),
            lr_calls: self.counters.lr_calls,
            sc_mode_bits: k,
            mode_trace: vec![BitMode::Sc; k],
            score: self.path.extended_score(F::zero()),
            erasure_conflicts: self.counters.erasure_conflicts,
        }
    }
}

/// Successive cancellation decoding.
///
/// Performs exactly `N + N log2 N` LR calculations per frame: `N` channel
/// accountings plus `N log2 N` f/g evaluations, fully memoized.
pub fn sc_decode<F: Float>(llr: &[Llr<F>], code: &CodeSpec<F>) -> DecodeOutcome<F> {
    sc_decode_inner(llr, code, CombineKind::Exact)
}

pub(crate) fn sc_decode_inner<F: Float>(
    llr: &[Llr<F>],
    code: &CodeSpec<F>,
    combine: CombineKind,
) -> DecodeOutcome<F> {
    let mut sc = ScRunner::new(llr, code, combine);
    while sc.next_leaf < code.block_len() {
        sc.decode_leaf();
    }
    sc.into_outcome()
}

/// Runs SC over the first `info_bits` information positions and returns the
/// paused path, positioned at the next information leaf (or at the end).
/// Frozen positions up to that leaf are already decided.
pub fn sc_prefix<F: Float>(llr: &[Llr<F>], code: &CodeSpec<F>, info_bits: usize) -> DecoderPath<F> {
    assert!(info_bits <= code.info_len());
    let mut sc = ScRunner::new(llr, code, CombineKind::Exact);
    while sc.info_decoded < info_bits {
        sc.decode_leaf();
    }
    sc.skip_frozen();
    DecoderPath {
        path: sc.path,
        next_leaf: sc.next_leaf,
        info_decoded: sc.info_decoded,
        counters: sc.counters,
        pending_llr: None,
    }
}

/// One entry of the final decoding list.
#[derive(Clone, Debug)]
pub struct PathReport<F> {
    pub info_bits: Vec<u8>,
    /// Accumulated log branch probability; `-inf` for zero-probability paths.
    pub score: F,
}

/// Breadth-first list decoding with search width `list_size`.
///
/// Every path forks at each information bit; the `list_size` highest-scoring
/// candidates survive, ranked by accumulated log branch probability with
/// stable tie-breaking (parent order, then branch 0). When `start` is given,
/// decoding resumes from that path and `sc_mode_bits` reports the bits it
/// had already decided.
pub fn lsc_decode<F: Float>(
    llr: &[Llr<F>],
    code: &CodeSpec<F>,
    list_size: usize,
    start: Option<DecoderPath<F>>,
) -> Result<DecodeOutcome<F>, CodecError> {
    assert!(list_size >= 1, "list size must be at least 1");
    assert_eq!(llr.len(), code.block_len(), "LLR vector length must be N");
    let start = match start {
        Some(path) => {
            path.validate(llr, code)?;
            path
        }
        None => DecoderPath {
            path: Path::new(llr),
            next_leaf: 0,
            info_decoded: 0,
            counters: DecodeCounters {
                lr_calls: llr.len() as u64,
                erasure_conflicts: 0,
            },
            pending_llr: None,
        },
    };
    Ok(lsc_from_path(code, list_size, start, CombineKind::Exact).0)
}

/// Like [`lsc_decode`], additionally returning the whole final list in rank
/// order (diagnostic surface used by score-correctness checks).
pub fn lsc_decode_list<F: Float>(
    llr: &[Llr<F>],
    code: &CodeSpec<F>,
    list_size: usize,
) -> (DecodeOutcome<F>, Vec<PathReport<F>>) {
    assert!(list_size >= 1, "list size must be at least 1");
    assert_eq!(llr.len(), code.block_len(), "LLR vector length must be N");
    let start = DecoderPath {
        path: Path::new(llr),
        next_leaf: 0,
        info_decoded: 0,
        counters: DecodeCounters {
            lr_calls: llr.len() as u64,
            erasure_conflicts: 0,
        },
        pending_llr: None,
    };
    lsc_from_path(code, list_size, start, CombineKind::Exact)
}

pub(crate) fn lsc_decode_inner<F: Float>(
    llr: &[Llr<F>],
    code: &CodeSpec<F>,
    list_size: usize,
    combine: CombineKind,
) -> DecodeOutcome<F> {
    let start = DecoderPath {
        path: Path::new(llr),
        next_leaf: 0,
        info_decoded: 0,
        counters: DecodeCounters {
            lr_calls: llr.len() as u64,
            erasure_conflicts: 0,
        },
        pending_llr: None,
    };
    lsc_from_path(code, list_size, start, combine).0
}

/// Low-complexity hybrid decoding: SC with per-bit reliability checks on
/// the first `a` information bits, falling back to list decoding from the
/// first unreliable bit onward.
///
/// The decision LLR of information bit `i <= a` is compared against the
/// threshold `tau_i`; `|LLR| > tau_i` keeps SC. The first miss seeds LSC
/// with the single live path, and no further threshold checks happen. If all
/// `a` checks pass, the remaining bits are decoded by SC too.
pub fn lclsc_decode<F: Float>(
    llr: &[Llr<F>],
    code: &CodeSpec<F>,
    list_size: usize,
) -> DecodeOutcome<F> {
    assert!(list_size >= 1, "list size must be at least 1");
    let split_a = code.split_index();
    let tau = code.llr_thresholds();
    let mut sc = ScRunner::new(llr, code, CombineKind::Exact);
    while sc.info_decoded < split_a {
        sc.skip_frozen();
        let phi = sc.next_leaf;
        let llr_i = sc
            .path
            .mem
            .compute_leaf_llr(phi, &mut sc.counters, sc.combine);
        if llr_i.abs() > tau[sc.info_decoded] {
            let bit = llr_i.hard_decision();
            sc.commit(llr_i, bit);
        } else {
            // Unreliable estimate: hand the live path to the list decoder.
            // SC is not applicable after this point.
            let start = DecoderPath {
                info_decoded: sc.info_decoded,
                next_leaf: phi,
                path: sc.path,
                counters: sc.counters,
                pending_llr: Some(llr_i),
            };
            return lsc_from_path(code, list_size, start, CombineKind::Exact).0;
        }
    }
    // Every bad-region bit was received reliably: SC for the remaining bits.
    while sc.next_leaf < code.block_len() {
        sc.decode_leaf();
    }
    sc.into_outcome()
}

/// The list engine: runs from a (possibly mid-frame) single path to the end
/// of the frame.
fn lsc_from_path<F: Float>(
    code: &CodeSpec<F>,
    list_size: usize,
    start: DecoderPath<F>,
    combine: CombineKind,
) -> (DecodeOutcome<F>, Vec<PathReport<F>>) {
    let sc_mode_bits = start.info_decoded;
    let mut paths = vec![start.path];
    let mut counters = start.counters;
    let mut pending = start.pending_llr;
    let mut score_offset = F::zero();
    let mut leaf_llrs: Vec<Llr<F>> = Vec::with_capacity(list_size);
    let mut cands: Vec<Candidate<F>> = Vec::with_capacity(2 * list_size);

    for phi in start.next_leaf..code.block_len() {
        leaf_llrs.clear();
        if let Some(l) = pending.take() {
            debug_assert_eq!(paths.len(), 1);
            leaf_llrs.push(l);
        } else {
            for p in paths.iter_mut() {
                leaf_llrs.push(p.mem.compute_leaf_llr(phi, &mut counters, combine));
            }
        }

        if code.is_frozen(phi) {
            for (p, &l) in paths.iter_mut().zip(&leaf_llrs) {
                p.add_branch(l, 0);
                p.u[phi] = 0;
                p.mem.record_decision(phi, 0);
            }
            continue;
        }

        // Fork every path on both branches; candidates are generated in
        // (parent index, branch 0 first) order, so the stable sort below
        // realizes the documented tie-break.
        cands.clear();
        for (parent, (p, &l)) in paths.iter().zip(&leaf_llrs).enumerate() {
            for bit in [0u8, 1u8] {
                let ll = branch_log_prob(l, bit);
                let (zeros, score) = if ll.is_infinite() {
                    (p.zero_branchings + 1, p.score)
                } else {
                    (p.zero_branchings, p.score + ll)
                };
                cands.push(Candidate {
                    parent,
                    bit,
                    zeros,
                    score,
                });
            }
        }
        cands.sort_by(|a, b| {
            a.zeros
                .cmp(&b.zeros)
                .then_with(|| b.score.partial_cmp(&a.score).expect("scores are never NaN"))
        });
        cands.truncate(list_size);

        // Materialize the survivors. Old paths are dropped before decisions
        // are written, so an only child mutates its buffers in place and
        // siblings copy-on-write only what they touch.
        let parents = std::mem::take(&mut paths);
        paths = cands.iter().map(|c| parents[c.parent].clone()).collect();
        drop(parents);
        for (p, c) in paths.iter_mut().zip(&cands) {
            p.score = c.score;
            p.zero_branchings = c.zeros;
            p.u[phi] = c.bit;
            p.mem.record_decision(phi, c.bit);
        }

        // Keep finite parts anchored at zero so they cannot drift over long
        // frames; ranking is translation invariant.
        let max = paths
            .iter()
            .map(|p| p.score)
            .fold(F::neg_infinity(), F::max);
        if max.is_finite() && max != F::zero() {
            for p in paths.iter_mut() {
                p.score -= max;
            }
            score_offset += max;
        }
    }

    let mut best = 0;
    for i in 1..paths.len() {
        if paths[i].beats(&paths[best]) {
            best = i;
        }
    }
    let winner = &paths[best];
    let k = code.info_len();
    let mut mode_trace = vec![BitMode::Sc; sc_mode_bits];
    mode_trace.resize(k, BitMode::Lsc);
    let outcome = DecodeOutcome {
        info_bits: code.info_set().iter().map(|&i| winner.u[i]).collect(),
        lr_calls: counters.lr_calls,
        sc_mode_bits,
        mode_trace,
        score: winner.extended_score(score_offset),
        erasure_conflicts: counters.erasure_conflicts,
    };
    let reports = paths
        .iter()
        .map(|p| PathReport {
            info_bits: code.info_set().iter().map(|&i| p.u[i]).collect(),
            score: p.extended_score(score_offset),
        })
        .collect();
    (outcome, reports)
}

struct Candidate<F> {
    parent: usize,
    bit: u8,
    zeros: u32,
    score: F,
}
