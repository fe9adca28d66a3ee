//! Polar code construction, encoding, and decoding with exact complexity
//! accounting, plus a deterministic Monte Carlo simulation engine.
//!
//! Three decoders are provided:
//!
//! * [`sc_decode`]: successive cancellation, exactly `N + N log2 N` LR
//!   calculations per frame;
//! * [`lsc_decode`]: breadth-first list SC with search width `L`, at most
//!   `L (N + N log2 N)` calculations under lazy-copy accounting;
//! * [`lclsc_decode`]: a low-complexity hybrid that keeps SC while per-bit
//!   LLR thresholds hold on the unreliable ("bad") information bits and
//!   switches to list decoding on the first miss.
//!
//! Code construction evolves the channel's Bhattacharyya parameter through
//! the polarization recursion (exact for the BEC) and derives the two
//! thresholds the hybrid needs: a Bhattacharyya threshold splitting the
//! information bits into bad/good regions, and per-bit LLR reliability
//! gates.
//!
//! The numeric kernels are generic over [`float::Float`] (`f32` or `f64`);
//! the `*64` aliases below fix the common choice.
//!
//! ```
//! use polar::{ChannelModel, CodeSpec, ReliabilityMode};
//! use polar::{channel_llrs, encode, lclsc_decode, transmit};
//! use rand::SeedableRng;
//!
//! let ch = ChannelModel::bec(0.4f64).unwrap();
//! let code = CodeSpec::construct(64, 32, &ch, ReliabilityMode::LowerBound).unwrap();
//! let info = vec![1u8; 32];
//! let x = encode(&code.expand_info_bits(&info));
//! let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
//! let y = transmit(&x, &ch, &mut rng);
//! let llrs = channel_llrs(&y, &ch).unwrap();
//! let out = lclsc_decode(&llrs, &code, 16);
//! assert_eq!(out.info_bits.len(), 32);
//! ```

pub mod channels;
pub mod codec;
pub mod construction;
pub mod float;
pub mod oracle;
pub mod selftest;
pub mod simulator;

pub use channels::{
    capacity, channel_llr, channel_llrs, initial_bhattacharyya, transmit, ChannelError,
    ChannelKind, ChannelModel, ChannelSymbol, Llr,
};
pub use codec::{
    count_lr_calls, encode, estimate_complexity, f_combine, g_combine, lclsc_decode, lsc_decode,
    lsc_decode_list, sc_decode, sc_prefix, BitMode, CodecError, DecodeCounters, DecodeOutcome,
    DecoderPath, PathReport,
};
pub use construction::{
    compute_split_index, compute_z_threshold, evolve_bhattacharyya, llr_threshold,
    ml_fer_lower_bound, reliability_targets, sc_fer_upper_bound, select_information_set, CodeSpec,
    ConstructError, ReliabilityMode,
};
pub use float::Float;
pub use simulator::{
    derive_trial_seed, generate_frame, paired_delta, run_campaign, run_trial, CampaignConfig,
    CampaignStats, CellStats, DecoderKind, DeltaRow, SimError, TrialResult,
};

/// `f64` instantiations of the generic types.
pub type Llr64 = channels::Llr<f64>;
pub type ChannelModel64 = channels::ChannelModel<f64>;
pub type ChannelSymbol64 = channels::ChannelSymbol<f64>;
pub type CodeSpec64 = construction::CodeSpec<f64>;
pub type ReliabilityMode64 = construction::ReliabilityMode<f64>;
pub type DecodeOutcome64 = codec::DecodeOutcome<f64>;
pub type DecoderPath64 = codec::DecoderPath<f64>;
pub type CampaignConfig64 = simulator::CampaignConfig<f64>;
