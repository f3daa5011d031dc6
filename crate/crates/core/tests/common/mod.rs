#![allow(dead_code)]

use planar_cayley::LabelingScheme;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

pub const DEFAULT_SEED: u64 = 20_241_016;

/// Property-test seed: `PCAYLEY_SEED` if set, otherwise a fixed default.
pub fn seed() -> u64 {
    std::env::var("PCAYLEY_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(seed()),
        failure_persistence: None,
        ..Config::default()
    }
}

/// Random scheme of degree `lo..=hi`.
pub fn arb_scheme(lo: usize, hi: usize) -> impl Strategy<Value = LabelingScheme> {
    (lo..=hi)
        .prop_flat_map(|d| {
            (
                Just((0..d).collect::<Vec<usize>>()).prop_shuffle(),
                0..=d / 2,
                proptest::collection::vec(any::<bool>(), d),
            )
        })
        .prop_map(|(perm, pairs, signs)| {
            let d = perm.len();
            let mut sigma: Vec<usize> = (0..d).collect();
            for i in 0..pairs {
                let (a, b) = (perm[2 * i], perm[2 * i + 1]);
                sigma[a] = b;
                sigma[b] = a;
            }
            let tau: Vec<i8> = (0..d)
                .map(|i| if signs[i.min(sigma[i])] { 1 } else { -1 })
                .collect();
            LabelingScheme::new(sigma, tau).unwrap()
        })
}

pub fn octagonal() -> LabelingScheme {
    LabelingScheme::from_one_based(&[1, 7, 3, 5, 4, 8, 2, 6], &[1, -1, 1, 1, 1, -1, -1, -1]).unwrap()
}

pub fn square() -> LabelingScheme {
    LabelingScheme::from_one_based(&[3, 4, 1, 2], &[1, 1, 1, 1]).unwrap()
}

/// The snub cube numbering with `a1^4`, `a3^2` and `a4^3` among its relators.
pub fn snub() -> LabelingScheme {
    LabelingScheme::from_one_based(&[2, 1, 3, 5, 4], &[1, 1, 1, 1, 1]).unwrap()
}
