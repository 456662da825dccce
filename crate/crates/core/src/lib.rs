//! Finite-frame imprecise probability.
//!
//! The crate models lower probabilities on a finite outcome space and the
//! ways they can be updated:
//!
//! * [`model`]: frames, events, partitions, mass functions, capacities and
//!   probability intervals, plus the JSON model format.
//! * [`transforms`]: Möbius and zeta transforms between capacities and mass
//!   functions, conjugate upper probabilities, k-monotonicity testing.
//! * [`credal`]: the credal polytope `{P : P(A) >= lower(A)}` with a dense
//!   simplex solver, vertex enumeration and fractional (ratio) bounds.
//! * [`updating`]: generalized Bayes, Dempster and Geometric conditioning,
//!   each computed along two independent routes.
//! * [`phenomena`]: dilation, contraction and sure-loss detection, and Dutch
//!   books built from sure loss.
//! * [`simpson`]: aggregation rules, Simpson reversals and aggregation sure
//!   loss.
//! * [`casebook`]: the worked models (prisoners, boxer, election, treatment).
//!
//! Heavy loops (vertex enumeration, posterior tables, sweeps, randomized
//! searches) run on rayon when the `parallel` feature is enabled; every such
//! entry point also accepts an explicit [`Exec`] so both paths stay testable.

pub mod casebook;
pub mod cli;
pub mod credal;
pub mod error;
pub mod model;
pub mod par;
pub mod phenomena;
pub mod random;
pub mod simpson;
pub mod transforms;
pub mod updating;

pub use error::{Error, Result};
pub use model::{
    Capacity, CapacityKind, Event, Frame, MassFunction, Partition, ProbabilityInterval,
};
pub use par::Exec;
pub use updating::Rule;

/// Absolute tolerance for all real comparisons.
pub const TOL: f64 = 1e-9;

/// Distance below which two credal vertices are considered identical.
pub const VERTEX_TOL: f64 = 1e-7;

/// Largest supported frame.
pub const MAX_FRAME: usize = 24;
