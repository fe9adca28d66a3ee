//! Channel models and their log-likelihood-ratio front end.
//!
//! Three binary-input channels are supported: the binary erasure channel
//! (BEC), the binary symmetric channel (BSC), and the binary-input AWGN
//! channel (BAWGN) with unit-energy BPSK signalling, bit `b` mapped to
//! `1 - 2b`. Each channel provides symbol transmission, a mapping from
//! channel output to an LLR, its initial Bhattacharyya parameter, and its
//! capacity.
//!
//! LLRs use the convention `ln(W(y|0) / W(y|1))`: positive favours bit 0.
//! BEC outputs map to the exact three-valued set `{+inf, 0, -inf}` so that
//! erasure-channel decoding stays exact instead of saturating.

use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::float::Float;

/// Errors from channel construction and symbol handling.
#[derive(Debug, Error, PartialEq)]
pub enum ChannelError {
    /// Channel parameter outside its valid range.
    #[error("{0}")]
    InvalidParam(String),
    /// A symbol was paired with a channel of a different alphabet.
    #[error("symbol alphabet does not match channel kind {0}")]
    AlphabetMismatch(&'static str),
}

/// A log-likelihood ratio: an extended real, never NaN.
///
/// `+inf` means "certainly bit 0", `-inf` "certainly bit 1", `0` carries no
/// information (an erasure).
#[derive(Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Llr<F>(F);

impl<F: Float> Llr<F> {
    /// Wraps a raw value. Panics on NaN, which has no LLR meaning.
    #[inline]
    pub fn new(value: F) -> Self {
        assert!(!value.is_nan(), "LLR must not be NaN");
        Llr(value)
    }

    #[inline]
    pub fn value(self) -> F {
        self.0
    }

    #[inline]
    pub fn zero() -> Self {
        Llr(F::zero())
    }

    #[inline]
    pub fn infinity() -> Self {
        Llr(F::infinity())
    }

    #[inline]
    pub fn neg_infinity() -> Self {
        Llr(F::neg_infinity())
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == F::zero()
    }

    #[inline]
    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// Hard decision: non-negative LLR decodes to bit 0.
    #[inline]
    pub fn hard_decision(self) -> u8 {
        if self.0 < F::zero() {
            1
        } else {
            0
        }
    }

    #[inline]
    pub fn abs(self) -> F {
        self.0.abs()
    }
}

impl<F: Float> std::ops::Neg for Llr<F> {
    type Output = Llr<F>;

    #[inline]
    fn neg(self) -> Llr<F> {
        Llr(-self.0)
    }
}

impl<F: Float> std::fmt::Debug for Llr<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Llr({:?})", self.0)
    }
}

/// Which channel family a model belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelKind {
    Bec,
    Bsc,
    Bawgn,
}

impl ChannelKind {
    pub fn name(self) -> &'static str {
        match self {
            ChannelKind::Bec => "bec",
            ChannelKind::Bsc => "bsc",
            ChannelKind::Bawgn => "bawgn",
        }
    }
}

/// A binary-input channel with its noise parameter.
///
/// Valid parameter ranges are `0 <= eps < 1` for the BEC, `0 <= p < 1/2`
/// for the BSC and `sigma >= 0` for the BAWGN. The lower endpoints are the
/// noiseless limits; they are accepted so that noiseless round trips can be
/// exercised directly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ChannelModel<F> {
    /// Binary erasure channel with erasure rate `epsilon`.
    Bec { erasure: F },
    /// Binary symmetric channel with crossover probability `crossover`.
    Bsc { crossover: F },
    /// Binary-input AWGN channel with noise standard deviation `sigma`.
    Bawgn { sigma: F },
}

impl<F: Float> ChannelModel<F> {
    pub fn bec(erasure: F) -> Result<Self, ChannelError> {
        if erasure.is_nan() || erasure < F::zero() || erasure >= F::one() {
            return Err(ChannelError::InvalidParam(format!(
                "channel.epsilon must be in [0, 1), got {erasure}"
            )));
        }
        Ok(ChannelModel::Bec { erasure })
    }

    pub fn bsc(crossover: F) -> Result<Self, ChannelError> {
        let half = F::from_f64(0.5);
        if crossover.is_nan() || crossover < F::zero() || crossover >= half {
            return Err(ChannelError::InvalidParam(format!(
                "channel.crossover must be in [0, 1/2), got {crossover}"
            )));
        }
        Ok(ChannelModel::Bsc { crossover })
    }

    pub fn bawgn(sigma: F) -> Result<Self, ChannelError> {
        if sigma.is_nan() || sigma < F::zero() || sigma.is_infinite() {
            return Err(ChannelError::InvalidParam(format!(
                "channel.sigma must be finite and >= 0, got {sigma}"
            )));
        }
        Ok(ChannelModel::Bawgn { sigma })
    }

    pub fn kind(&self) -> ChannelKind {
        match self {
            ChannelModel::Bec { .. } => ChannelKind::Bec,
            ChannelModel::Bsc { .. } => ChannelKind::Bsc,
            ChannelModel::Bawgn { .. } => ChannelKind::Bawgn,
        }
    }

    pub fn param(&self) -> F {
        match *self {
            ChannelModel::Bec { erasure } => erasure,
            ChannelModel::Bsc { crossover } => crossover,
            ChannelModel::Bawgn { sigma } => sigma,
        }
    }
}

impl<F: Float> std::fmt::Display for ChannelModel<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}({})", self.kind().name(), self.param())
    }
}

/// One channel output symbol.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ChannelSymbol<F> {
    /// A hard bit, produced by the BEC (non-erased) and the BSC.
    Bit(u8),
    /// A BEC erasure.
    Erasure,
    /// A real-valued BAWGN observation.
    Real(F),
}

/// Transmits a codeword over the channel, one independent symbol per bit.
///
/// Deterministic given the RNG state: identical `(x, ch, seed)` produce the
/// identical symbol vector. Noise is sampled in `f64` and converted, so the
/// realization does not depend on the scalar type `F`.
///
/// Panics if `x` contains a value other than 0 or 1.
pub fn transmit<F: Float, R: Rng + ?Sized>(
    x: &[u8],
    ch: &ChannelModel<F>,
    rng: &mut R,
) -> Vec<ChannelSymbol<F>> {
    assert!(x.iter().all(|&b| b <= 1), "codeword bits must be 0 or 1");
    match *ch {
        ChannelModel::Bec { erasure } => {
            let eps = erasure.as_f64();
            x.iter()
                .map(|&b| {
                    if rng.random::<f64>() < eps {
                        ChannelSymbol::Erasure
                    } else {
                        ChannelSymbol::Bit(b)
                    }
                })
                .collect()
        }
        ChannelModel::Bsc { crossover } => {
            let p = crossover.as_f64();
            x.iter()
                .map(|&b| {
                    if rng.random::<f64>() < p {
                        ChannelSymbol::Bit(b ^ 1)
                    } else {
                        ChannelSymbol::Bit(b)
                    }
                })
                .collect()
        }
        ChannelModel::Bawgn { sigma } => {
            let s = sigma.as_f64();
            x.iter()
                .map(|&b| {
                    let signal = 1.0 - 2.0 * f64::from(b);
                    let noise: f64 = rng.sample(StandardNormal);
                    ChannelSymbol::Real(F::from_f64(signal + s * noise))
                })
                .collect()
        }
    }
}

/// Maps one channel output to its LLR `ln(W(y|0)/W(y|1))`.
///
/// BEC: bit 0 -> `+inf`, bit 1 -> `-inf`, erasure -> `0`.
/// BSC: bit 0 -> `ln((1-p)/p)`, bit 1 -> the negation.
/// BAWGN: `y -> 2y / sigma^2`.
pub fn channel_llr<F: Float>(
    y: ChannelSymbol<F>,
    ch: &ChannelModel<F>,
) -> Result<Llr<F>, ChannelError> {
    match (*ch, y) {
        (ChannelModel::Bec { .. }, ChannelSymbol::Erasure) => Ok(Llr::zero()),
        (ChannelModel::Bec { .. }, ChannelSymbol::Bit(0)) => Ok(Llr::infinity()),
        (ChannelModel::Bec { .. }, ChannelSymbol::Bit(_)) => Ok(Llr::neg_infinity()),
        (ChannelModel::Bsc { crossover }, ChannelSymbol::Bit(b)) => {
            // p = 0 is the noiseless limit: the magnitude becomes +inf.
            let mag = ((F::one() - crossover) / crossover).ln();
            Ok(if b == 0 {
                Llr::new(mag)
            } else {
                Llr::new(-mag)
            })
        }
        (ChannelModel::Bawgn { sigma }, ChannelSymbol::Real(v)) => {
            let two = F::from_f64(2.0);
            Ok(Llr::new(two * v / (sigma * sigma)))
        }
        (ch, _) => Err(ChannelError::AlphabetMismatch(ch.kind().name())),
    }
}

/// Maps a whole received vector to LLRs.
pub fn channel_llrs<F: Float>(
    y: &[ChannelSymbol<F>],
    ch: &ChannelModel<F>,
) -> Result<Vec<Llr<F>>, ChannelError> {
    y.iter().map(|&s| channel_llr(s, ch)).collect()
}

/// The Bhattacharyya parameter of the raw channel, `Z(W) in [0, 1]`.
///
/// BEC: `eps`. BSC: `2 sqrt(p (1-p))`. BAWGN with unit-energy BPSK:
/// `exp(-1 / (2 sigma^2))`, the closed form of the Bhattacharyya integral.
pub fn initial_bhattacharyya<F: Float>(ch: &ChannelModel<F>) -> F {
    match *ch {
        ChannelModel::Bec { erasure } => erasure,
        ChannelModel::Bsc { crossover } => {
            let two = F::from_f64(2.0);
            two * (crossover * (F::one() - crossover)).sqrt()
        }
        ChannelModel::Bawgn { sigma } => {
            if sigma == F::zero() {
                F::zero()
            } else {
                let two = F::from_f64(2.0);
                (-(F::one() / (two * sigma * sigma))).exp()
            }
        }
    }
}

/// Channel capacity in bits per channel use.
///
/// BEC: `1 - eps`. BSC: `1 - H2(p)`. BAWGN: the mutual information of a
/// uniform BPSK input, evaluated by Simpson quadrature.
pub fn capacity<F: Float>(ch: &ChannelModel<F>) -> F {
    match *ch {
        ChannelModel::Bec { erasure } => F::one() - erasure,
        ChannelModel::Bsc { crossover } => F::one() - binary_entropy(crossover),
        ChannelModel::Bawgn { sigma } => bawgn_capacity(sigma),
    }
}

/// Binary entropy in bits; `H2(0) = 0` by continuity.
fn binary_entropy<F: Float>(p: F) -> F {
    if p == F::zero() || p == F::one() {
        return F::zero();
    }
    let q = F::one() - p;
    -(p * p.ln() + q * q.ln()) / F::LN_2()
}

/// BPSK-AWGN mutual information: `1 - E_{y ~ N(1, s^2)} log2(1 + e^(-2y/s^2))`.
fn bawgn_capacity<F: Float>(sigma: F) -> F {
    if sigma == F::zero() {
        return F::one();
    }
    let two = F::from_f64(2.0);
    let span = F::from_f64(12.0) * sigma;
    let lo = F::one() - span;
    let hi = F::one() + span;
    let steps = 4000; // Simpson with an even interval count
    let h = (hi - lo) / F::from_f64(steps as f64);
    let var2 = two * sigma * sigma;
    let norm = (F::PI() * var2).sqrt();
    let integrand = |y: F| -> F {
        let d = y - F::one();
        let pdf = (-(d * d) / var2).exp() / norm;
        let e = (-two * y / (sigma * sigma)).exp();
        pdf * e.ln_1p() / F::LN_2()
    };
    let mut acc = integrand(lo) + integrand(hi);
    for i in 1..steps {
        let y = lo + h * F::from_f64(i as f64);
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += F::from_f64(w) * integrand(y);
    }
    F::one() - acc * h / F::from_f64(3.0)
}
