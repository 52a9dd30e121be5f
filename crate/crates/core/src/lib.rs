//! Differentially private aggregation in the shuffled model.
//!
//! Users apply a local randomizer, a trusted shuffler outputs all messages in
//! a uniformly random order, and an analyzer estimates the aggregate from the
//! anonymous pool. The crate provides:
//!
//! - [`bitsum`]: the one-message bit-sum protocol and its parameter calculus,
//! - [`realsum`]: a multi-message protocol for sums of reals in [0, 1],
//! - [`applications`]: histograms, selection, a randomized-response baseline
//!   and the shuffled-to-local wrapper,
//! - [`oracle`]: exact output laws and hockey-stick checks that verify the
//!   privacy claims numerically,
//! - [`composition`]: advanced composition and per-round budget splitting,
//! - [`simulation`]: a reproducible Monte-Carlo trial harness,
//! - [`cli`]: the `shuffled-dp` command line front end.
//!
//! The shuffler is an in-process permutation. Messages an adversary injects
//! into the pool are ordinary post-processing input for the analyzer and do
//! not weaken the guarantee; no attack harness models them.
//!
//! ```
//! use shuffled_dp::{BitDataset, BitSumParams, PrivacyBudget, RandomSource};
//!
//! let budget = PrivacyBudget::new(1.0, 1e-6)?;
//! let params = BitSumParams::for_budget(10_000, &budget)?;
//! let data = BitDataset::with_ones(10_000, 3_000)?;
//! let (estimate, transcript) = params.run(&data, &RandomSource::new(42))?;
//! assert_eq!(transcript.len(), 10_000);
//! assert!((estimate - 3_000.0).abs() < 200.0);
//! # Ok::<(), shuffled_dp::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod applications;
pub mod bitsum;
pub mod cli;
pub mod composition;
pub mod error;
pub mod model;
pub mod oracle;
pub mod protocol;
pub mod realsum;
pub mod rng;
pub mod shuffle;
pub mod simulation;

pub use bitsum::BitSumParams;
pub use composition::{compose, per_round_budget, RoundBudget};
pub use error::{Error, Result};
pub use model::{BitDataset, PrivacyBudget, RealDataset, Transcript};
pub use protocol::{run_protocol, Analyzer, ProtocolConfig, Randomizer};
pub use realsum::{RealSumParams, RoundBit};
pub use rng::RandomSource;
pub use shuffle::shuffle;
