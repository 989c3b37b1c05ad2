//! Deterministic random streams.
//!
//! Every trial has one 64-bit root seed. Each consumer of randomness draws
//! from its own stream, keyed by a purpose tag and an index (usually the arm):
//!
//! ```text
//! child_seed = mix(mix(root_seed, purpose_tag), index)
//! ```
//!
//! where `mix` is the SplitMix64 finalizer applied to `a ^ splitmix(b)`.
//! Streams are ChaCha8 (a counter-based generator) seeded from `child_seed`,
//! and Gaussian draws use the ziggurat sampler of `rand_distr::StandardNormal`.
//! Identical seeds therefore give bit-identical trajectories, regardless of
//! the order in which arms are pulled or how trials are scheduled on threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Generator backing every stream.
pub type Stream = ChaCha8Rng;

/// Purpose tags used to separate streams derived from one root seed.
pub mod purpose {
    /// Offline dataset draws, indexed by arm.
    pub const OFFLINE: u64 = 0x6f66_666c_696e_6501;
    /// Online reward draws, indexed by arm.
    pub const ONLINE: u64 = 0x6f6e_6c69_6e65_0002;
    /// Per-trial root seeds, indexed by trial number.
    pub const TRIAL: u64 = 0x7472_6961_6c00_0003;
    /// Shared offline dataset for fixed-dataset experiments.
    pub const FIXED_DATASET: u64 = 0x6669_7865_6400_0004;
    /// Free-form Monte-Carlo checks.
    pub const MONTE_CARLO: u64 = 0x6d63_0000_0000_0005;
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Combine two words into a well-mixed seed.
#[inline]
pub fn mix(a: u64, b: u64) -> u64 {
    splitmix64(a ^ splitmix64(b))
}

/// Seed of the stream for `(purpose, index)` under `root`.
pub fn child_seed(root: u64, purpose: u64, index: u64) -> u64 {
    mix(mix(root, purpose), index)
}

/// Open the stream for `(purpose, index)` under `root`.
pub fn stream(root: u64, purpose: u64, index: u64) -> Stream {
    Stream::seed_from_u64(child_seed(root, purpose, index))
}

/// Root seed of trial `trial` in an experiment seeded with `experiment_seed`.
pub fn trial_seed(experiment_seed: u64, trial: u64) -> u64 {
    child_seed(experiment_seed, purpose::TRIAL, trial)
}

#[inline]
pub fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}
