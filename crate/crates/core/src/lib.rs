//! Certification of Steffensen-Popoviciu signed measures on compact
//! intervals and hypothesis-checked verification of Jensen-type
//! inequalities for functions that are not necessarily convex.
//!
//! The crate is organised bottom-up:
//!
//! * [`quadrature`]: composite Gauss-Legendre integration with a doubling
//!   error estimate.
//! * [`function`]: the closed catalog of evaluable functions ([`FunctionSpec`]).
//! * [`measure`]: discrete and density signed measures, masses, moments and
//!   barycenters.
//! * [`sp`]: Steffensen's discrete condition and the endpoint-positivity
//!   certificate.
//! * [`shape`]: convexity, point symmetry, left almost convexity, weight
//!   admissibility, and the chord/convexification constructions.
//! * [`jensen`]: the per-result verifiers producing a [`JensenReport`].
//! * [`search`]: the constrained tan optimisation, the sharpness miner and
//!   soundness fuzzing.
//! * [`job`]: JSON job files and reports used by the `jensen-lab` binary.

// `!(a < b)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod function;
pub mod jensen;
pub mod job;
pub mod json;
pub mod measure;
pub mod quadrature;
pub mod search;
pub mod shape;
pub mod sp;

pub use error::{Error, Result};
pub use function::{FunctionSpec, RealFunction};
pub use jensen::{HypothesisCheck, JensenReport, Settings, Theorem, Verdict};
pub use measure::{
    DensitySignedMeasure, DiscreteSignedMeasure, Interval, MomentSummary, SignedMeasure,
};
pub use quadrature::{QuadratureConfig, QuadratureResult};
pub use shape::{AlmostConvexWitness, ShapeVerdict};
pub use sp::{SPCertificate, SteffensenVerdict};

/// Default slack for every numerical equality and nonnegativity test.
pub const DEFAULT_TOL: f64 = 1e-9;
