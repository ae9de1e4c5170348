#![allow(dead_code)]

use opdef::{catalog, CMatrix, FiniteGroup, ToleranceConfig};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn cfg() -> ToleranceConfig {
    ToleranceConfig::default()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Groups of order at most 8 covering the cyclic, dihedral, symmetric and product constructors.
pub fn group() -> impl Strategy<Value = FiniteGroup> {
    prop_oneof![
        (1usize..=8).prop_map(|n| FiniteGroup::cyclic(n).unwrap()),
        (2usize..=4).prop_map(|n| FiniteGroup::dihedral(n).unwrap()),
        Just(FiniteGroup::symmetric(3).unwrap()),
        Just(catalog::klein_group()),
        Just(FiniteGroup::product(&FiniteGroup::cyclic(2).unwrap(), &FiniteGroup::cyclic(3).unwrap()).unwrap()),
    ]
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
