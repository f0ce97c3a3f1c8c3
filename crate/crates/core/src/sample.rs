//! Seeded random sets for the randomized suites.
//!
//! All generators draw from [`Rng`], a ChaCha stream seeded from a `u64`, so
//! identical seeds give identical corpora on every platform.

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::monoid::ZeroSet;
use crate::setcore::FinSet;

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random nonempty subset of `[[lo, hi]]`, each point kept with probability
/// `density`, with one forced element if the draw came out empty.
pub fn fin_set(rng: &mut Rng, lo: i64, hi: i64, density: f64) -> FinSet {
    let mut v: Vec<i64> = (lo..=hi).filter(|_| rng.random_bool(density)).collect();
    if v.is_empty() {
        v.push(rng.random_range(lo..=hi));
    }
    FinSet::new(v).expect("nonempty")
}

/// A random zero-set inside `[[lo, hi]]` (`lo <= 0 <= hi`) with a random density.
pub fn zero_set(rng: &mut Rng, lo: i64, hi: i64) -> ZeroSet {
    let density = rng.random_range(0.1..0.9);
    let mut v: Vec<i64> = (lo..=hi).filter(|_| rng.random_bool(density)).collect();
    v.push(0);
    ZeroSet::new(FinSet::new(v).expect("nonempty")).expect("contains 0")
}

/// A random zero-set inside `[[0, hi]]`, i.e. anchored at 0.
pub fn nat_zero_set(rng: &mut Rng, hi: i64) -> ZeroSet {
    zero_set(rng, 0, hi)
}
