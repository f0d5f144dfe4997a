//! Randomized campaigns: the constrained tan optimisation, the sharpness
//! miner for the weighted corollary, and soundness fuzzing of every verifier.
//!
//! Every trial draws from its own generator seeded by `(seed, trial_index)`,
//! and results are reduced in trial-index order, so reports do not depend on
//! thread count or scheduling.

mod fuzz;
pub mod generators;
mod mine;
mod optimize;

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::jensen::Theorem;
use crate::job::Job;

pub use fuzz::{fuzz_theorem, fuzz_until_passing};
pub use mine::{mine_cor1_sharpness, MINER_GAP_THRESHOLD};
pub use optimize::{optimize_tan_example, tan_example_constraints, tan_example_objective, TAN_EXAMPLE_GUARD};

/// Trials evaluated per parallel batch.
pub(crate) const BATCH: usize = 2048;

/// Probability of drawing a sample close to a constraint boundary.
pub(crate) const BOUNDARY_BIAS: f64 = 0.3;

pub type TrialRng = ChaCha12Rng;

/// The generator for one trial; depends on nothing but its arguments.
pub fn trial_rng(seed: u64, index: u64) -> TrialRng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub best_value: f64,
    pub best_point: Vec<f64>,
    pub feasible_evaluations: u64,
    pub total_evaluations: u64,
    pub seed: u64,
    /// Distinct feasible points with objective above `-1e-6`, first few only.
    pub near_zero_points: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleResult {
    pub found: bool,
    /// A `check-jensen` job for the weighted corollary with the range
    /// hypothesis suppressed; replayable by the CLI.
    pub witness: Option<Box<Job>>,
    pub observed_gap: Option<f64>,
    pub evaluations: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub theorem: Theorem,
    pub seed: u64,
    pub trials: u64,
    pub passed: u64,
    pub hypothesis_failed: u64,
    pub violated: u64,
    /// Trials whose generated instance was rejected by a precondition.
    pub errors: u64,
    pub hypothesis_pass_rate: f64,
    /// Smallest gap among passing trials, oriented so that `>= 0` agrees
    /// with the inequality.
    pub min_gap: Option<f64>,
    pub first_violation: Option<Box<Job>>,
    pub first_error: Option<String>,
    /// Discrete measures certified as Steffensen-Popoviciu that fail
    /// Steffensen's partial-sum condition. Recorded, not asserted.
    pub sp_without_steffensen: u64,
}
