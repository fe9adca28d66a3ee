//! Construction checks against exhaustive erasure-pattern enumeration.

use polar::oracle;
use polar::{
    evolve_bhattacharyya, select_information_set, ChannelModel, CodeSpec, ReliabilityMode,
};

#[test]
fn bec_evolution_equals_exhaustive_erasure_enumeration() {
    // The polarization recursion is exact for the BEC: the evolved Z vector
    // must equal the genie-aided SC erasure probability of every subchannel,
    // enumerated over all 2^N erasure patterns.
    for (levels, eps) in [(1u32, 0.4f64), (2, 0.4), (3, 0.4), (3, 0.11), (3, 0.7)] {
        let exact = oracle::bec_exact_subchannel_erasure(levels, eps);
        let evolved = evolve_bhattacharyya(eps, levels);
        assert_eq!(exact.len(), evolved.len());
        for (i, (e, v)) in exact.iter().zip(&evolved).enumerate() {
            let rel = (e - v).abs() / e.max(1e-300);
            assert!(
                rel < 1e-12,
                "subchannel {i} at eps={eps}, n={levels}: exact {e} vs evolved {v}"
            );
        }
    }
}

#[test]
fn info_set_matches_exhaustive_reliability_ranking() {
    let exact = oracle::bec_exact_subchannel_erasure(3, 0.4);
    let evolved = evolve_bhattacharyya(0.4f64, 3);
    let (info_from_exact, _) = select_information_set(&exact, 4);
    let (info_from_evolved, _) = select_information_set(&evolved, 4);
    assert_eq!(info_from_exact, info_from_evolved);
}

#[test]
fn constructed_code_bounds_hold_across_channels() {
    for ch in [
        ChannelModel::bec(0.4f64).unwrap(),
        ChannelModel::bsc(0.11).unwrap(),
        ChannelModel::bawgn(0.97865).unwrap(),
    ] {
        for k in [8usize, 16, 32, 48] {
            let code = CodeSpec::construct(64, k, &ch, ReliabilityMode::Fixed(0.9)).unwrap();
            assert!(code.sc_fer_upper_bound() >= code.ml_fer_lower_bound());
            let a = code.split_index();
            assert!((1..=k).contains(&a));
            let z_info = code.info_z();
            for &z in &z_info[a..] {
                assert!(z <= code.z_threshold());
            }
            if z_info.iter().any(|&z| z > code.z_threshold()) {
                assert!(z_info[a - 1] > code.z_threshold());
            }
        }
    }
}
