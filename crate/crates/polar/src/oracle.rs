//! Brute-force reference implementations for validation.
//!
//! Everything here recomputes quantities from their definitions — explicit
//! generator matrices, exhaustive marginalization over future input bits,
//! enumeration of erasure patterns — without touching the production f/g
//! recursion, so the fast paths can be checked against them. Costs are
//! exponential in `N`; intended for `N <= 16` (matrices) and `N <= 10`
//! (marginalizations).

use crate::channels::{ChannelModel, ChannelSymbol};
use crate::float::Float;

/// The Kronecker power `G_2^(x)n` of `[[1,0],[1,1]]` as an explicit matrix.
pub fn kron_generator(levels: u32) -> Vec<Vec<u8>> {
    let mut g = vec![vec![1u8]];
    for _ in 0..levels {
        let m = g.len();
        let mut next = vec![vec![0u8; 2 * m]; 2 * m];
        for r in 0..m {
            for c in 0..m {
                // G2 (x) G: block [[G, 0], [G, G]].
                next[r][c] = g[r][c];
                next[r + m][c] = g[r][c];
                next[r + m][c + m] = g[r][c];
            }
        }
        g = next;
    }
    g
}

/// Encodes by direct vector-matrix multiplication over GF(2).
pub fn encode_by_matrix(u: &[u8]) -> Vec<u8> {
    assert!(u.len().is_power_of_two());
    let g = kron_generator(u.len().trailing_zeros());
    let mut x = vec![0u8; u.len()];
    for (i, &ui) in u.iter().enumerate() {
        if ui == 1 {
            for (xj, &gij) in x.iter_mut().zip(&g[i]) {
                *xj ^= gij;
            }
        }
    }
    x
}

/// Per-position channel likelihoods `(W(y|0), W(y|1))`; densities for the
/// BAWGN channel.
pub fn symbol_likelihoods<F: Float>(y: ChannelSymbol<F>, ch: &ChannelModel<F>) -> (f64, f64) {
    match (*ch, y) {
        (ChannelModel::Bec { erasure }, sym) => {
            let eps = erasure.as_f64();
            match sym {
                ChannelSymbol::Erasure => (eps, eps),
                ChannelSymbol::Bit(0) => (1.0 - eps, 0.0),
                ChannelSymbol::Bit(_) => (0.0, 1.0 - eps),
                ChannelSymbol::Real(_) => panic!("alphabet mismatch"),
            }
        }
        (ChannelModel::Bsc { crossover }, ChannelSymbol::Bit(b)) => {
            let p = crossover.as_f64();
            if b == 0 {
                (1.0 - p, p)
            } else {
                (p, 1.0 - p)
            }
        }
        (ChannelModel::Bawgn { sigma }, ChannelSymbol::Real(v)) => {
            let s = sigma.as_f64();
            let v = v.as_f64();
            let norm = 1.0 / (s * (2.0 * std::f64::consts::PI).sqrt());
            let dens = |mean: f64| norm * (-(v - mean).powi(2) / (2.0 * s * s)).exp();
            (dens(1.0), dens(-1.0))
        }
        _ => panic!("alphabet mismatch"),
    }
}

/// `W(y|u)` for a full input vector: the product of per-position likelihoods
/// of the re-encoded codeword.
pub fn word_likelihood(w: &[(f64, f64)], u: &[u8]) -> f64 {
    let x = encode_by_matrix(u);
    x.iter()
        .zip(w)
        .map(|(&xj, &(w0, w1))| if xj == 0 { w0 } else { w1 })
        .product()
}

/// The subchannel marginal `S(prefix) = sum over completions of W(y|u)`,
/// with every future bit free as in the subchannel definition (the `2^-(N-1)`
/// normalizer is omitted; it cancels in every ratio used here).
pub fn prefix_marginal(w: &[(f64, f64)], prefix: &[u8]) -> f64 {
    let free = w.len() - prefix.len();
    let mut total = 0.0;
    let mut u = prefix.to_vec();
    u.resize(w.len(), 0);
    for comp in 0u64..(1 << free) {
        for b in 0..free {
            u[prefix.len() + b] = ((comp >> b) & 1) as u8;
        }
        total += word_likelihood(w, &u);
    }
    total
}

/// SC decoding straight from the subchannel marginals: at step `i`, compare
/// `S(prefix + 0)` against `S(prefix + 1)`. Frozen bits are forced to zero;
/// ties decode to 0, matching the production convention `LR >= 1 -> 0`.
///
/// Also returns the first position where both marginals vanish (the decided
/// prefix contradicts the received word outright). From that point on the
/// subchannel LR is 0/0 and no decision is better-defined than any other, so
/// comparisons against an implementation stop there.
pub fn sc_decode_by_marginalization(w: &[(f64, f64)], frozen: &[bool]) -> (Vec<u8>, Option<usize>) {
    let n = w.len();
    let mut u: Vec<u8> = Vec::with_capacity(n);
    let mut contradiction = None;
    for i in 0..n {
        if frozen[i] {
            u.push(0);
            continue;
        }
        u.push(0);
        let s0 = prefix_marginal(w, &u);
        u[i] = 1;
        let s1 = prefix_marginal(w, &u);
        if contradiction.is_none() && s0 == 0.0 && s1 == 0.0 {
            contradiction = Some(i);
        }
        u[i] = if s0 >= s1 { 0 } else { 1 };
    }
    (u, contradiction)
}

/// The smallest relative decision margin `|ln(S0/S1)|` over the information
/// bits of an SC decode; razor-thin margins make decision comparisons
/// against a floating-point implementation meaningless.
pub fn sc_decision_margin(w: &[(f64, f64)], frozen: &[bool], u: &[u8]) -> f64 {
    let mut margin = f64::INFINITY;
    let mut prefix: Vec<u8> = Vec::with_capacity(u.len());
    for i in 0..u.len() {
        if !frozen[i] {
            prefix.push(0);
            let s0 = prefix_marginal(w, &prefix);
            prefix[i] = 1;
            let s1 = prefix_marginal(w, &prefix);
            if s0 > 0.0 && s1 > 0.0 {
                margin = margin.min((s0 / s1).ln().abs());
            } else if s0 == 0.0 && s1 == 0.0 {
                margin = 0.0;
            }
        }
        prefix.truncate(i);
        prefix.push(u[i]);
    }
    margin
}

/// Maximum of `ln W(y|u)` over all information words (frozen bits zero).
pub fn best_ml_log_likelihood(w: &[(f64, f64)], frozen: &[bool]) -> f64 {
    let info: Vec<usize> = (0..frozen.len()).filter(|&i| !frozen[i]).collect();
    let mut best = f64::NEG_INFINITY;
    for word in 0u64..(1 << info.len()) {
        let mut u = vec![0u8; frozen.len()];
        for (b, &pos) in info.iter().enumerate() {
            u[pos] = ((word >> b) & 1) as u8;
        }
        best = best.max(word_likelihood(w, &u).ln());
    }
    best
}

/// `ln sum over all inputs of W(y|u)`: the normalizer that turns a chain of
/// branch posteriors back into a word likelihood.
pub fn log_marginal_of_output(w: &[(f64, f64)]) -> f64 {
    prefix_marginal(w, &[]).ln()
}

/// The accumulated log branch posterior of a full input vector:
/// `sum_i ln( S(u_1..u_i) / (S(u_1..u_{i-1} 0) + S(u_1..u_{i-1} 1)) )`.
/// Telescopes to `ln W(y|u) - ln sum_u W(y|u)`; exactly `-inf` as soon as a
/// selected branch has zero probability.
pub fn chain_log_posterior(w: &[(f64, f64)], u: &[u8]) -> f64 {
    let mut acc = 0.0;
    let mut prefix: Vec<u8> = Vec::with_capacity(u.len());
    for (i, &bit) in u.iter().enumerate() {
        prefix.push(0);
        let s0 = prefix_marginal(w, &prefix);
        prefix[i] = 1;
        let s1 = prefix_marginal(w, &prefix);
        let sel = if bit == 0 { s0 } else { s1 };
        if sel == 0.0 {
            // The path's probability is already zero; later branch
            // posteriors are 0/0 and contribute nothing well-defined.
            return f64::NEG_INFINITY;
        }
        acc += (sel / (s0 + s1)).ln();
        prefix[i] = bit;
    }
    acc
}

/// Exact per-subchannel erasure probabilities of the BEC under genie-aided
/// SC, by enumerating every erasure pattern.
///
/// For a fixed pattern the likelihoods are indicator functions, so the
/// subchannel marginals become integer counts of consistent completions and
/// "erased" is the exact equality of the two counts. The returned vector is
/// the pattern-probability-weighted erasure indicator per subchannel.
pub fn bec_exact_subchannel_erasure(levels: u32, eps: f64) -> Vec<f64> {
    let n = 1usize << levels;
    let mut z = vec![0.0f64; n];
    for pattern in 0u64..(1 << n) {
        let erased: Vec<bool> = (0..n).map(|i| (pattern >> i) & 1 == 1).collect();
        let weight = erased.iter().filter(|&&e| e).count() as i32;
        let prob = eps.powi(weight) * (1.0 - eps).powi(n as i32 - weight);
        // Transmitted all-zero; genie supplies the true (zero) prefix.
        for (i, zi) in z.iter_mut().enumerate() {
            let c0 = count_consistent(&erased, i, 0);
            let c1 = count_consistent(&erased, i, 1);
            if c0 == c1 {
                *zi += prob;
            }
        }
    }
    z
}

/// Counts completions `u_{i+1}..u_N` such that `u = (0,..,0, bit, future)`
/// re-encodes to a codeword matching the all-zero word on every non-erased
/// position.
fn count_consistent(erased: &[bool], i: usize, bit: u8) -> u64 {
    let n = erased.len();
    let free = n - i - 1;
    let mut count = 0u64;
    let mut u = vec![0u8; n];
    u[i] = bit;
    for comp in 0u64..(1 << free) {
        for b in 0..free {
            u[i + 1 + b] = ((comp >> b) & 1) as u8;
        }
        let x = encode_by_matrix(&u);
        let consistent = x.iter().zip(erased).all(|(&xj, &e)| e || xj == 0);
        if consistent {
            count += 1;
        }
    }
    count
}
