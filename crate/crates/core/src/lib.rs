//! Exact arithmetic for representation numbers of positive definite
//! integral quadratic forms.
//!
//! Everything here is computed over arbitrary-precision integers and
//! rationals; there is no floating point anywhere in the math core.
//! The main pipeline:
//!
//! - [`qform`]: Gram matrices, determinants, levels, characteristic polynomials.
//! - [`dirichlet`]: Kronecker-symbol quadratic characters.
//! - [`bernoulli`]: generalized Bernoulli numbers and L-values at nonpositive integers.
//! - [`qseries`]: truncated q-expansions, Eisenstein series, Hecke operators.
//! - [`lattice`]: exact lattice-point enumeration for theta coefficients.
//! - [`dims`]: dimension formulas for the relevant spaces of modular forms.
//! - [`identities`]: closed-form representation-number formulas and the
//!   verification suites tying formulas to enumerated counts.

pub mod bernoulli;
pub mod catalog;
pub mod dims;
pub mod dirichlet;
pub mod exactnum;
pub mod identities;
pub mod lattice;
pub mod qform;
pub mod qseries;

/// Arbitrary-precision integer used throughout the crate.
pub type Int = num_bigint::BigInt;
/// Arbitrary-precision rational, the coefficient domain for every series
/// and L-value.
pub type Rat = num_rational::BigRational;

/// Integer-coefficient polynomial (e.g. characteristic polynomials).
pub type IntPolynomial = exactnum::Polynomial<Int>;
/// Rational-coefficient truncated q-expansion.
pub type RatSeries = qseries::QSeries<Rat>;

pub use dirichlet::QuadCharacter;
pub use lattice::RepTable;
pub use qform::GramMatrix;
