//! Pattern-avoiding sets over finite fields.
//!
//! The crate builds r-point patterns x, x + M_1 d, ..., x + M_{r-1} d over
//! (F_q^n)^k from generator matrices, validates full-rankness, detects and
//! counts instances inside point sets, evaluates the associated indicator
//! tensor and checks its diagonality on avoiding sets, computes exact and
//! analytic avoidance bounds (the rate c_q and big-integer monomial counts),
//! searches for large avoiding sets, and provides the geometric constructors
//! (right isosceles, 45-degree, equilateral) that realize classical
//! triangle shapes as patterns.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod gf;
pub mod linalg;
pub mod pattern;
pub mod report;
pub mod search;
pub mod tensor;

pub use error::{Error, Result};
