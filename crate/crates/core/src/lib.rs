//! Bandit learning with possibly biased offline data.
//!
//! * [`model`]: instances, offline datasets, bias bounds and gaps.
//! * [`policy`]: MIN-UCB and the PURE-UCB, UCBS and MonUCB baselines.
//! * [`comb`]: combinatorial semi-bandits and MIN-COMB-UCB.
//! * [`bounds`]: discrepancy, saving terms, the water-filling `τ*` and regret-bound profiles.
//! * [`sim`]: seeded trials, parallel experiments, presets and CSV output.
//! * [`plot`]: static SVG plots of experiment summaries.
//! * [`cli`]: the `warmstart` command-line tool.

pub mod bounds;
pub mod cli;
pub mod comb;
pub mod error;
pub mod io;
pub mod model;
pub mod plot;
pub mod policy;
pub mod rng;
pub mod sim;

pub use error::{Error, Result};
pub use model::{
    gap_profile, sample_offline, validate_bias_bound, ArmPair, BiasBound, GapProfile,
    MabInstance, Noise, OfflineDataset, OnlineRewards,
};
pub use policy::{DeltaSchedule, IndexPair, PolicyKind, PolicyState};
