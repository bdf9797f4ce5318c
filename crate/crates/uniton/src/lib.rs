//! Explicit harmonic maps of finite uniton number from the Riemann sphere
//! into complex Grassmannians.
//!
//! The crate builds maps `φ = Q(π₁−π₁⊥)⋯(π_r−π_r⊥)` from arrays of rational
//! vector data, evaluates them pointwise in exact Q(i) arithmetic or in
//! double precision, and checks the algebraic and differential identities
//! that such maps satisfy.
//!
//! Layout:
//! - [`scalar`], [`ratfun`], [`linalg`]: the numeric kernel.
//! - [`engine`]: arrays, transforms, elementary operators, chains.
//! - [`combinatorics`]: adapted pairs, rank counting, bounds, enumeration.
//! - [`loop_model`]: extended solutions and the Grassmannian model.
//! - [`verifier`]: exact and finite-difference checks.
//! - [`scenario`], [`presets`]: JSON input and frozen example data.
//!
//! The linear algebra and the chain evaluator are generic over [`Field`];
//! the aliases below name the two instantiations used throughout.

pub mod combinatorics;
pub mod engine;
pub mod linalg;
pub mod loop_model;
pub mod presets;
pub mod ratfun;
pub mod scalar;
pub mod scenario;
pub mod verifier;

pub use num_complex::Complex64;
pub use scalar::{DdComplex, Field, GaussRat};

/// Exact dense matrix over Q(i).
pub type ExactMatrix = linalg::Matrix<GaussRat>;
/// Double-precision complex dense matrix.
pub type FloatMatrix = linalg::Matrix<Complex64>;
/// Exact pointwise frame.
pub type ExactFrame = linalg::Frame<GaussRat>;
/// Floating pointwise frame.
pub type FloatFrame = linalg::Frame<Complex64>;
/// Projection stack evaluated exactly.
pub type ExactStack = engine::ProjectionStack<GaussRat>;
/// Projection stack evaluated in double precision.
pub type FloatStack = engine::ProjectionStack<Complex64>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("division by the zero rational function")]
    DivisionByZeroFunction,
    #[error("pole at evaluation point {0}")]
    PoleAtPoint(String),
    #[error("rank drop at point {point}: {what} has rank {got}, generic rank {expected}")]
    RankDropAtPoint { point: String, what: String, got: usize, expected: usize },
    #[error("F0-array pattern violated in column {column}: {detail}")]
    PatternViolation { column: usize, detail: String },
    #[error("split failure at step {step}: rank(α∩F)={inside} + rank(α∩F⊥)={outside} ≠ rank α={total}")]
    SplitFailure { step: usize, inside: usize, outside: usize, total: usize },
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("bad arguments: {0}")]
    BadArguments(String),
    #[error("infeasible pair: {0}")]
    InfeasiblePair(String),
    #[error("finite-difference step too large: Richardson disagreement {disagreement:e} exceeds {tol:e}")]
    StepTooLarge { disagreement: f64, tol: f64 },
    #[error("no generic evaluation point found: {0}")]
    NoGenericPoint(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
