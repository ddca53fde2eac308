//! Finite-dimensional multi-fermion states.
//!
//! The crate builds antisymmetrized states over a composite single-particle
//! index (spatial mode × spin), classifies identical-particle entanglement by
//! Slater rank, and detects *excluded* states: states whose normalized form
//! degenerates to `0/0` because the antisymmetrized numerator and the
//! normalization denominator vanish together.
//!
//! Module map:
//!
//! - [`state`]: basis description, dense tensors, inner products, partial trace.
//! - [`antisym`]: the antisymmetrizer, pair-symmetry predicates and the generic
//!   norm-ratio exclusion detector.
//! - [`two_fermion`]: Helium-type two-electron states with closed-form
//!   normalization, the exclusion catalog and Slater rank.
//! - [`weak_ent`]: Schmidt analysis of spatial wavefunctions, rank-1
//!   truncation and quantum-number attribution.
//! - [`factored`]: states factored into an antisymmetric spatial part and a
//!   symmetric spin part.
//! - [`format`]: the line-oriented state and matrix file formats.

pub mod antisym;
pub mod error;
pub mod factored;
pub mod format;
mod perm;
pub mod state;
pub mod two_fermion;
pub mod weak_ent;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Relative tolerance used wherever a caller does not supply one.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Relative singular-value threshold for rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// Inputs handed to state constructors must have unit norm within this bound.
pub const NORM_INPUT_TOL: f64 = 1e-8;
