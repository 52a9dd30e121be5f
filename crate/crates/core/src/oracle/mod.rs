//! Exact privacy verification for the bit-sum protocol.
//!
//! The analyzer of the bit-sum protocol sees a shuffled pool of bits, which is
//! equivalent to seeing only their sum. That sum's law depends on the dataset
//! only through its number of ones `k`, so neighboring datasets reduce to the
//! pairs `(k, k+1)` and the tight delta at a given epsilon is a finite
//! computation over pmfs on `{0, ..., n}`.

mod divergence;
mod equivalence;
mod pmf;
mod verify;

pub use divergence::{hockey_stick, hockey_stick_slices};
pub use equivalence::{
    chi_square_gof, empirical_equivalence_test, empirical_equivalence_test_on,
    sample_randomizer_sums, EquivalenceResult,
};
pub use pmf::{
    binomial_pmf, c_lambda_pmf, hypergeometric_pmf, ln_binomial_pmf, randomizer_sum_pmf,
    DiscretePmf,
};
pub use verify::{
    tight_epsilon, verify_randomizer_local_dp, verify_shuffled_dp, verify_shuffled_dp_with,
    DpReport, NeighborPair, OracleOptions, PmfRoute, DEFAULT_EXACT_LIMIT,
};
