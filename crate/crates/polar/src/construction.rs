//! Code construction: Bhattacharyya-parameter evolution, information-set
//! selection, the decoder's two thresholds, and the FER bounds.
//!
//! Subchannels are kept in natural (non-bit-reversed) order, consistent with
//! the `G_2^(x)n` Kronecker-power encoder in [`crate::codec`]: at every
//! polarization level the degraded channel (`Z- = 2Z - Z^2`) occupies the
//! first half of each block and the upgraded channel (`Z+ = Z^2`) the second
//! half. For the BEC this recursion is exact; for the BSC and BAWGN it is
//! the usual heuristic construction seeded from the channel's initial
//! Bhattacharyya parameter.

use thiserror::Error;

use crate::channels::{initial_bhattacharyya, ChannelModel};
use crate::float::Float;

/// Errors from code construction.
#[derive(Debug, Error, PartialEq)]
pub enum ConstructError {
    #[error("code.block_len must be a power of two >= 2, got {0}")]
    BlockLenNotPowerOfTwo(usize),
    #[error("code.info_len must satisfy 1 <= k <= N, got k={k}, N={n}")]
    InfoLenOutOfRange { k: usize, n: usize },
    #[error("decode.p_fixed must lie in (1/2, 1), got {0}")]
    FixedTargetOutOfRange(f64),
}

/// How the per-bit correct-decoding targets `p_i` are chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ReliabilityMode<F> {
    /// `p_i = 1 - Z_i / 2`, the per-subchannel lower bound on correct
    /// decoding probability (clamped below 1 so thresholds stay finite).
    LowerBound,
    /// A fixed `p_i = c` for all information bits, `c in (1/2, 1)`.
    Fixed(F),
}

/// Evolves the Bhattacharyya parameter through `levels` polarization steps.
///
/// Returns `2^levels` values; index `i` (0-based) is subchannel `i+1` in
/// natural decoding order. All outputs lie in `[0, 1]`.
pub fn evolve_bhattacharyya<F: Float>(z0: F, levels: u32) -> Vec<F> {
    assert!(
        z0 >= F::zero() && z0 <= F::one(),
        "initial Bhattacharyya parameter must lie in [0, 1]"
    );
    let two = F::from_f64(2.0);
    let mut z = vec![z0];
    for _ in 0..levels {
        let mut next = Vec::with_capacity(2 * z.len());
        for &zi in &z {
            // Children of subchannel j are the degraded channel at 2j and
            // the upgraded one at 2j+1; each refinement level splits along
            // the next-less-significant index bit, so this pairwise layout
            // is the natural decoding order.
            let minus = two * zi - zi * zi;
            let plus = zi * zi;
            // Clamp against rounding excursions above 1.
            next.push(minus.min(F::one()));
            next.push(plus);
        }
        z = next;
    }
    z
}

/// Picks the `k` most reliable subchannels (smallest Z; ties go to the lower
/// index). Returns the information set in ascending index order — which is
/// also decoding order — and the complementary frozen mask.
pub fn select_information_set<F: Float>(z: &[F], k: usize) -> (Vec<usize>, Vec<bool>) {
    assert!(k >= 1 && k <= z.len(), "need 1 <= k <= N");
    let mut order: Vec<usize> = (0..z.len()).collect();
    order.sort_by(|&a, &b| z[a].partial_cmp(&z[b]).unwrap().then(a.cmp(&b)));
    let mut info: Vec<usize> = order[..k].to_vec();
    info.sort_unstable();
    let mut frozen = vec![true; z.len()];
    for &i in &info {
        frozen[i] = false;
    }
    (info, frozen)
}

/// Lower bound on the frame error rate of ML decoding:
/// `1 - prod_i (1 - (1 - sqrt(1 - Z_i^2)) / 2)`.
pub fn ml_fer_lower_bound<F: Float>(z_info: &[F]) -> F {
    let mut log_prod = F::zero();
    for &z in z_info {
        let pe = bit_error_lower_bound(z);
        log_prod += (-pe).ln_1p();
    }
    -(log_prod.exp_m1())
}

/// Per-bit ML error lower bound `(1 - sqrt(1 - Z^2)) / 2`, evaluated in the
/// cancellation-free form `Z^2 / (2 (1 + sqrt(1 - Z^2)))`.
fn bit_error_lower_bound<F: Float>(z: F) -> F {
    let one = F::one();
    let two = F::from_f64(2.0);
    let root = (one - z * z).max(F::zero()).sqrt();
    z * z / (two * (one + root))
}

/// Union upper bound on the SC frame error rate: the plain sum of the
/// information-set Bhattacharyya parameters. May exceed 1; it is a bound,
/// not a probability, and is deliberately not clamped.
pub fn sc_fer_upper_bound<F: Float>(z_info: &[F]) -> F {
    z_info.iter().copied().sum()
}

/// The Bhattacharyya threshold: the ML FER lower bound spread evenly over
/// the `k` information bits.
pub fn compute_z_threshold<F: Float>(z_info: &[F]) -> F {
    assert!(!z_info.is_empty());
    ml_fer_lower_bound(z_info) / F::from_f64(z_info.len() as f64)
}

/// Splits the information bits into the "bad" prefix `u_1..u_a` and the
/// "good" tail `u_(a+1)..u_k`.
///
/// `a` is the last decoding position whose Z exceeds the threshold, so every
/// later position satisfies `Z <= z_th`. When no position exceeds the
/// threshold the split is clamped to `a = 1`, keeping `1 <= a <= k`.
pub fn compute_split_index<F: Float>(z_info_in_decoding_order: &[F], z_th: F) -> usize {
    assert!(!z_info_in_decoding_order.is_empty());
    z_info_in_decoding_order
        .iter()
        .rposition(|&z| z > z_th)
        .map(|pos| pos + 1)
        .unwrap_or(1)
}

/// Per-bit correct-decoding targets `p_i`.
///
/// In [`ReliabilityMode::LowerBound`] the target is `1 - Z_i/2`, clamped so
/// a perfect subchannel (`Z = 0`) does not produce an infinite LLR threshold
/// that would force list decoding on it.
pub fn reliability_targets<F: Float>(
    z_info: &[F],
    mode: ReliabilityMode<F>,
) -> Result<Vec<F>, ConstructError> {
    let half = F::from_f64(0.5);
    let cap = F::one() - F::from_f64(1e-12);
    match mode {
        ReliabilityMode::LowerBound => Ok(z_info
            .iter()
            .map(|&z| (F::one() - half * z).min(cap))
            .collect()),
        ReliabilityMode::Fixed(c) => {
            if !(c > half && c < F::one()) {
                return Err(ConstructError::FixedTargetOutOfRange(c.as_f64()));
            }
            Ok(vec![c; z_info.len()])
        }
    }
}

/// LLR-domain reliability threshold `tau = ln(p / (1 - p))`.
///
/// The two-sided LR rule — `LR > p/(1-p)` when `LR > 1`, `LR < (1-p)/p`
/// when `LR < 1` — is equivalent to `|LLR| > tau`.
pub fn llr_threshold<F: Float>(p: F) -> F {
    assert!(
        p >= F::from_f64(0.5) && p < F::one(),
        "reliability target must lie in [1/2, 1)"
    );
    (p / (F::one() - p)).ln()
}

/// A fully constructed polar code: dimensions, per-subchannel reliabilities,
/// frozen mask, and the decoder's thresholds.
#[derive(Clone, Debug)]
pub struct CodeSpec<F> {
    block_len: usize,
    info_len: usize,
    z: Vec<F>,
    info_set: Vec<usize>,
    frozen: Vec<bool>,
    z_th: F,
    split_a: usize,
    p: Vec<F>,
    tau: Vec<F>,
}

impl<F: Float> CodeSpec<F> {
    /// Constructs an `(N, k)` code for the given channel.
    pub fn construct(
        block_len: usize,
        info_len: usize,
        ch: &ChannelModel<F>,
        mode: ReliabilityMode<F>,
    ) -> Result<Self, ConstructError> {
        if !block_len.is_power_of_two() || block_len < 2 {
            return Err(ConstructError::BlockLenNotPowerOfTwo(block_len));
        }
        if info_len < 1 || info_len > block_len {
            return Err(ConstructError::InfoLenOutOfRange {
                k: info_len,
                n: block_len,
            });
        }
        let levels = block_len.trailing_zeros();
        let z = evolve_bhattacharyya(initial_bhattacharyya(ch), levels);
        Self::from_reliabilities(z, info_len, mode)
    }

    /// Builds a code directly from a reliability vector (used by tests and
    /// by construction-method comparisons).
    pub fn from_reliabilities(
        z: Vec<F>,
        info_len: usize,
        mode: ReliabilityMode<F>,
    ) -> Result<Self, ConstructError> {
        assert!(
            z.iter().all(|v| !v.is_nan()),
            "reliability vector must not contain NaN"
        );
        let block_len = z.len();
        if !block_len.is_power_of_two() || block_len < 2 {
            return Err(ConstructError::BlockLenNotPowerOfTwo(block_len));
        }
        if info_len < 1 || info_len > block_len {
            return Err(ConstructError::InfoLenOutOfRange {
                k: info_len,
                n: block_len,
            });
        }
        let (info_set, frozen) = select_information_set(&z, info_len);
        let z_info: Vec<F> = info_set.iter().map(|&i| z[i]).collect();
        let z_th = compute_z_threshold(&z_info);
        let split_a = compute_split_index(&z_info, z_th);
        let p = reliability_targets(&z_info, mode)?;
        let tau = p.iter().map(|&pi| llr_threshold(pi)).collect();
        let spec = CodeSpec {
            block_len,
            info_len,
            z,
            info_set,
            frozen,
            z_th,
            split_a,
            p,
            tau,
        };
        spec.debug_check();
        Ok(spec)
    }

    /// Internal consistency: the split condition of the threshold design.
    fn debug_check(&self) {
        debug_assert!(self.split_a >= 1 && self.split_a <= self.info_len);
        let z_info = self.info_z();
        for (j, &z) in z_info.iter().enumerate().skip(self.split_a) {
            debug_assert!(
                z <= self.z_th,
                "info position {} has Z {} above threshold {}",
                j + 1,
                z,
                self.z_th
            );
        }
        if z_info.iter().any(|&z| z > self.z_th) {
            debug_assert!(z_info[self.split_a - 1] > self.z_th);
        }
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    pub fn info_len(&self) -> usize {
        self.info_len
    }

    /// Number of polarization levels, `log2(N)`.
    pub fn levels(&self) -> u32 {
        self.block_len.trailing_zeros()
    }

    /// Per-subchannel Bhattacharyya parameters in natural order.
    pub fn z(&self) -> &[F] {
        &self.z
    }

    /// Information-set indices (0-based), ascending = decoding order.
    pub fn info_set(&self) -> &[usize] {
        &self.info_set
    }

    pub fn frozen_mask(&self) -> &[bool] {
        &self.frozen
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.frozen[i]
    }

    /// Z values of the information bits in decoding order.
    pub fn info_z(&self) -> Vec<F> {
        self.info_set.iter().map(|&i| self.z[i]).collect()
    }

    pub fn z_threshold(&self) -> F {
        self.z_th
    }

    /// Size of the "bad" information-bit prefix checked against the LLR
    /// thresholds, `1 <= a <= k`.
    pub fn split_index(&self) -> usize {
        self.split_a
    }

    pub fn reliability_targets(&self) -> &[F] {
        &self.p
    }

    /// LLR thresholds per information bit, in decoding order.
    pub fn llr_thresholds(&self) -> &[F] {
        &self.tau
    }

    pub fn ml_fer_lower_bound(&self) -> F {
        ml_fer_lower_bound(&self.info_z())
    }

    pub fn sc_fer_upper_bound(&self) -> F {
        sc_fer_upper_bound(&self.info_z())
    }

    /// Scatters `k` information bits into a full `N`-length input vector
    /// with frozen positions set to zero.
    pub fn expand_info_bits(&self, info: &[u8]) -> Vec<u8> {
        assert_eq!(info.len(), self.info_len);
        let mut u = vec![0u8; self.block_len];
        for (&pos, &b) in self.info_set.iter().zip(info) {
            u[pos] = b;
        }
        u
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn evolve_one_level() {
        let z = evolve_bhattacharyya(0.4f64, 1);
        assert_eq!(z, vec![0.64, 0.16000000000000003]);
        assert!((z[0] - 0.64).abs() < 1e-15 && (z[1] - 0.16).abs() < 1e-15);
    }

    #[test]
    fn evolve_perfect_channel_stays_perfect() {
        for n in 1..=6 {
            assert!(evolve_bhattacharyya(0.0f64, n).iter().all(|&z| z == 0.0));
        }
    }

    #[test]
    fn evolve_outputs_in_unit_interval() {
        for z0 in [0.1f64, 0.4, 0.62578, 0.9, 1.0] {
            for &z in &evolve_bhattacharyya(z0, 6) {
                assert!((0.0..=1.0).contains(&z));
            }
        }
    }

    #[test]
    fn degradation_ordering_every_butterfly() {
        for z0 in [0.2f64, 0.4, 0.62578, 0.95] {
            for level in 0..6u32 {
                let parent = evolve_bhattacharyya(z0, level);
                let child = evolve_bhattacharyya(z0, level + 1);
                for (j, &z) in parent.iter().enumerate() {
                    let minus = child[2 * j];
                    let plus = child[2 * j + 1];
                    assert!(plus <= z && z <= minus, "butterfly ordering violated");
                }
            }
        }
    }

    #[test]
    fn bec_capacity_is_conserved() {
        for eps in [0.1f64, 0.4, 0.7] {
            for n in 1..=8u32 {
                let z = evolve_bhattacharyya(eps, n);
                let cap: f64 = z.iter().map(|zi| 1.0 - zi).sum::<f64>() / z.len() as f64;
                assert!(
                    (cap - (1.0 - eps)).abs() < 1e-12,
                    "capacity drifted at eps={eps}, n={n}: {cap}"
                );
            }
        }
    }

    #[test]
    fn select_info_set_examples() {
        let (info, frozen) = select_information_set(&[0.64f64, 0.16], 1);
        assert_eq!(info, vec![1]); // subchannel 2 in 1-based terms
        assert_eq!(frozen, vec![true, false]);

        let (info, frozen) = select_information_set(&[0.3f64, 0.2, 0.1, 0.4], 4);
        assert_eq!(info, vec![0, 1, 2, 3]);
        assert!(frozen.iter().all(|f| !f));

        // Documented tie-break: equal Z resolves to the lower index.
        let (info, _) = select_information_set(&[0.5f64, 0.5, 0.5, 0.5], 2);
        assert_eq!(info, vec![0, 1]);
    }

    #[test]
    fn ml_bound_examples() {
        assert_eq!(ml_fer_lower_bound(&[0.0f64, 0.0, 0.0]), 0.0);
        assert!((ml_fer_lower_bound(&[1.0f64]) - 0.5).abs() < 1e-15);
        let p = ml_fer_lower_bound(&[0.5f64, 0.1]);
        let pe1 = 0.5 * (1.0 - 0.75f64.sqrt());
        let pe2 = 0.5 * (1.0 - 0.99f64.sqrt());
        let direct = 1.0 - (1.0 - pe1) * (1.0 - pe2);
        assert!((p - direct).abs() < 1e-14);
        assert!((p - 0.06933).abs() < 1e-5);
    }

    #[test]
    fn sc_bound_examples() {
        assert_eq!(sc_fer_upper_bound(&[0.0f64; 4]), 0.0);
        assert!((sc_fer_upper_bound(&[0.5f64, 0.1]) - 0.6).abs() < 1e-15);
    }

    #[test]
    fn z_threshold_examples() {
        let t = compute_z_threshold(&[0.5f64, 0.1]);
        assert!((t - 0.034664).abs() < 1e-5);
        assert_eq!(compute_z_threshold(&[0.0f64, 0.0]), 0.0);
        assert!((compute_z_threshold(&[1.0f64]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn split_index_examples() {
        let t = compute_z_threshold(&[0.5f64, 0.1]);
        assert_eq!(compute_split_index(&[0.5f64, 0.1], t), 2);
        assert_eq!(compute_split_index(&[0.5f64, 0.01], t), 1);
        assert_eq!(compute_split_index(&[0.001f64, 0.001], t), 1); // clamp
    }

    #[test]
    fn reliability_target_examples() {
        let p = reliability_targets(&[0.2f64], ReliabilityMode::LowerBound).unwrap();
        assert!((p[0] - 0.9).abs() < 1e-15);
        let p = reliability_targets(&[1.0f64], ReliabilityMode::LowerBound).unwrap();
        assert_eq!(p[0], 0.5);
        let p = reliability_targets(&[0.3f64, 0.7], ReliabilityMode::Fixed(0.9)).unwrap();
        assert_eq!(p, vec![0.9, 0.9]);
        assert!(reliability_targets(&[0.3f64], ReliabilityMode::Fixed(0.5)).is_err());
        assert!(reliability_targets(&[0.3f64], ReliabilityMode::Fixed(1.0)).is_err());
    }

    #[test]
    fn perfect_subchannel_keeps_threshold_finite() {
        let p = reliability_targets(&[0.0f64], ReliabilityMode::LowerBound).unwrap();
        let tau = llr_threshold(p[0]);
        assert!(tau.is_finite());
    }

    #[test]
    fn llr_threshold_examples() {
        assert!((llr_threshold(0.9f64) - 9.0f64.ln()).abs() < 1e-15);
        assert!((llr_threshold(0.9f64) - 2.19722).abs() < 1e-5);
        assert_eq!(llr_threshold(0.5f64), 0.0);
    }

    #[test]
    fn lr_domain_rule_matches_llr_rule() {
        // The two-branch LR-domain test against |ln LR| > ln(p/(1-p)).
        let mut rng_state = 0x9E3779B97F4A7C15u64;
        let mut next = || {
            rng_state = rng_state.wrapping_mul(6364136223846793005).wrapping_add(1);
            (rng_state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..1000 {
            let log_lr = (next() - 0.5) * 20.0;
            let lr = log_lr.exp();
            let p = 0.5 + next() * 0.499;
            let lr_rule = if lr > 1.0 {
                lr > p / (1.0 - p)
            } else if lr < 1.0 {
                lr < (1.0 - p) / p
            } else {
                false
            };
            let llr_rule = log_lr.abs() > llr_threshold(p);
            assert_eq!(lr_rule, llr_rule, "lr={lr}, p={p}");
        }
        // Spot values: LR = 10 is reliable at p = 0.9, LR = 0.2 is not.
        assert!(10.0f64.ln().abs() > llr_threshold(0.9));
        assert!(0.2f64.ln().abs() <= llr_threshold(0.9));
    }

    #[test]
    fn construct_validates_dimensions() {
        let ch = ChannelModel::bec(0.4f64).unwrap();
        assert!(matches!(
            CodeSpec::construct(3, 2, &ch, ReliabilityMode::LowerBound),
            Err(ConstructError::BlockLenNotPowerOfTwo(3))
        ));
        assert!(matches!(
            CodeSpec::construct(8, 0, &ch, ReliabilityMode::LowerBound),
            Err(ConstructError::InfoLenOutOfRange { .. })
        ));
        assert!(matches!(
            CodeSpec::construct(8, 9, &ch, ReliabilityMode::LowerBound),
            Err(ConstructError::InfoLenOutOfRange { .. })
        ));
    }

    #[test]
    fn constructed_code_is_consistent() {
        let ch = ChannelModel::bec(0.4f64).unwrap();
        for k in [1usize, 3, 4, 7, 8] {
            let code = CodeSpec::construct(8, k, &ch, ReliabilityMode::LowerBound).unwrap();
            assert_eq!(code.info_set().len(), k);
            assert_eq!(code.frozen_mask().iter().filter(|f| **f).count(), 8 - k);
            let a = code.split_index();
            assert!((1..=k).contains(&a));
            let z_info = code.info_z();
            for &z in &z_info[a..] {
                assert!(z <= code.z_threshold());
            }
            assert!(code.sc_fer_upper_bound() >= code.ml_fer_lower_bound());
        }
    }

    proptest! {
        #[test]
        fn union_bound_dominates_ml_bound(zs in proptest::collection::vec(0.0f64..=1.0, 1..40)) {
            let union = sc_fer_upper_bound(&zs);
            let ml = ml_fer_lower_bound(&zs);
            prop_assert!(union >= ml - 1e-12);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&ml));
        }

        #[test]
        fn split_consistency(zs in proptest::collection::vec(0.0f64..=1.0, 1..40)) {
            let z_th = compute_z_threshold(&zs);
            let a = compute_split_index(&zs, z_th);
            prop_assert!(a >= 1 && a <= zs.len());
            for &z in &zs[a..] {
                prop_assert!(z <= z_th);
            }
            if zs.iter().any(|&z| z > z_th) {
                prop_assert!(zs[a - 1] > z_th);
            }
        }

        #[test]
        fn evolution_stays_in_unit_interval(z0 in 0.0f64..=1.0) {
            for &z in &evolve_bhattacharyya(z0, 5) {
                prop_assert!((0.0..=1.0).contains(&z));
            }
        }
    }
}
