//! Construction and certification of flat, nearly skew-reciprocal Littlewood
//! polynomials.
//!
//! The library is organized around a four-stage pipeline:
//!
//! 1. [`rudin_shapiro`] — Rudin–Shapiro pairs, prefixes, the nine-block
//!    polynomial `T` and the cosine polynomial `c(t) = T(2t)`;
//! 2. [`intervals`] — classification of the circle into good/bad intervals,
//!    suitable/well-separated collections, symmetric colorings and the
//!    piecewise-linear target `G_α` with exact Fourier coefficients;
//! 3. [`discrepancy`] — an algorithmic partial-coloring solver producing
//!    ±1 colorings with certified per-constraint discrepancies;
//! 4. [`flatgen`] — coefficient assembly into a ±1 polynomial of degree `4n`
//!    together with a bound-chain audit.
//!
//! [`trigcore`] supplies the shared currency: exact-coefficient trigonometric
//! polynomials with certified sup-norms, and [`littlewood`] contains
//! brute-force oracles (exhaustive flattest search, self-reciprocal zero
//! verification).

pub mod discrepancy;
pub mod flatgen;
pub mod grid;
pub mod intervals;
pub mod littlewood;
pub mod rudin_shapiro;
pub mod trigcore;

use thiserror::Error;

/// Schema version stamped on every serialized artifact.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum Error {
    #[error("coefficient vectors have inconsistent lengths: cos {cos}, sin {sin}")]
    CoefficientLengths { cos: usize, sin: usize },
    #[error("generation m = {m} outside supported range 0..={max}")]
    GenerationOutOfRange { m: u32, max: u32 },
    #[error("generation m = {m} must be odd")]
    EvenGeneration { m: u32 },
    #[error("n = {n} must be a positive multiple of 10")]
    NotDivisibleByTen { n: u64 },
    #[error(
        "no odd m puts gamma = 9*2^m/(2n) in [{lo:e}, {hi:e}) for n = {n}; \
         smallest feasible n for this window is about {min_n:e}"
    )]
    WindowInfeasible { lo: f64, hi: f64, n: u64, min_n: f64 },
    #[error("operation requires degree >= 1")]
    DegreeTooSmall,
    #[error("modulus-of-continuity value must be nonnegative, got {value}")]
    NegativeModulus { value: f64 },
    #[error("periodic function does not expose exact Fourier coefficients; use the quadrature mode")]
    FourierUnavailable,
    #[error("quadrature did not reach tolerance {requested:e} (estimated error {achieved:e}) at {nodes} nodes")]
    QuadratureTolerance { requested: f64, achieved: f64, nodes: usize },
    #[error("|p(t0)| = {value} is below the certified extremum threshold {required}")]
    NotAnExtremum { value: f64, required: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{what} = {size} exceeds supported limit {limit}")]
    TooLarge { what: &'static str, size: u64, limit: u64 },
    #[error("coefficient supports overlap or leave a gap at frequency offset {offset}")]
    SupportConflict { offset: usize },
    #[error("invalid coefficient character {found:?} at position {position}")]
    BadCoefficientChar { found: char, position: usize },
    #[error("coefficient string is empty")]
    EmptyCoefficients,
    #[error("symmetry class has no members at degree {degree}")]
    EmptySymmetryClass { degree: usize },
    #[error("entropy condition fails: sum {value} exceeds budget v/16 = {budget}")]
    EntropyCondition { value: f64, budget: f64 },
    #[error("interval collection failed validation: {0}")]
    InvalidCollection(String),
    #[error("paper profile is not runnable at desk scale: {0}")]
    PaperProfile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
