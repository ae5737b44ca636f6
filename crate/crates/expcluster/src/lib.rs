//! Exponential structures made executable.
//!
//! A positive weight sequence `a = {a_j}` defines, through `g(z) = exp(S(z))`
//! with `S(z) = sum_j a_j z^j`, a family of coefficients `c_n` that shows up in
//! three guises: as the partition function of a reversible
//! coagulation-fragmentation process, as the normaliser of assembly/multiset
//! combinatorial structures, and as the element count of an additive number
//! system. This crate computes all of it at finite `n` and compares against
//! the governing asymptotics:
//!
//! - [`sequences`] — weight sequences of regular variation `a_j ~ j^{l-1} L(j)`,
//!   slowly varying functions and their conjugates, divisor-sum conversions
//!   from multiset/generator counts, and the `h^j` rescaling transform.
//! - [`coeff`] — exact (log-space and rational) coefficient tables for `c_n`
//!   and size-window restrictions, cluster-size distributions, and the
//!   component-count marginals/joints they induce.
//! - [`saddle`] — the tilting equation `M(sigma) = n`, its exact moments,
//!   and the local-limit-theorem product that couples tables to asymptotics.
//! - [`asymptotics`] — closed-form regime predictions: saddle scaling in all
//!   window regimes, coefficient asymptotics, threshold laws for extreme
//!   cluster sizes, factorised count limits, and geometric-generator counting.
//! - [`cfp`] — the reversible coagulation-fragmentation chain itself: exact
//!   invariant measure, Gillespie simulation, and detailed-balance checks.
//!
//! Numeric kernels ([`logspace`], [`special`], [`quad`], [`roots`]) are
//! generic over the scalar type via [`scalar::Scalar`]; the domain layer uses
//! the [`Real`] alias. Everything that can overflow is carried in log space.

pub mod asymptotics;
pub mod cfp;
pub mod coeff;
pub mod logspace;
pub mod quad;
pub mod roots;
pub mod saddle;
pub mod scalar;
pub mod sequences;
pub mod special;

/// Scalar used by the domain layer.
pub type Real = f64;

/// Log-space nonnegative real over [`Real`].
pub type LogReal = logspace::LogNum<Real>;

/// Exact rational scalar used by oracle-mode tables.
pub type Exact = num_rational::BigRational;

pub use coeff::{CoefficientTable, SizeWindow};
pub use saddle::SaddlePoint;
pub use sequences::{ParameterFunction, SlowlyVarying};

/// Crate-wide error type.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter function: {0}")]
    InvalidParameterFunction(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("not implemented: {0}")]
    NotImplemented(String),
    #[error("diverging sum: {0}")]
    Divergence(String),
    #[error("solver failure: {0}")]
    SolverFailure(String),
    #[error("regime not classifiable: {0}")]
    Regime(String),
    #[error("input too large: {0}")]
    TooLarge(String),
    #[error("invalid window: {0}")]
    Window(String),
}

pub type Result<T> = std::result::Result<T, Error>;
