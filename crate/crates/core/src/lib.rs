//! Exact computation of the variance of arithmetic functions in arithmetic
//! progressions, together with the harmonic-analysis objects used to predict
//! its size: Ramanujan sums, exponential sums over major and minor arcs,
//! twisted partial sums and smooth-number counts.
//!
//! The modules build on each other bottom-up:
//!
//! - [`sieve`]: smallest-prime-factor sieve and function tables
//!   (`ω`, `Ω`, `μ`, `φ`, `σ`, `α^{ϖ(n)}`, smooth indicators), Ramanujan rows,
//!   twisted sums and divisor-coefficient tables.
//! - [`variance`]: `V(N, Q; f)` by the definition, a brute-force reference and
//!   `Q`-sweep reports.
//! - [`circle`]: exponential sums, arc systems, `L^2` quadrature and the
//!   Cauchy–Schwarz chain.
//! - [`asymptotics`]: predicted shapes, Euler products and moment sums.
//! - [`experiment`]: config-driven batch runner behind the `apvar` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::manual_is_multiple_of)]

pub mod asymptotics;
pub mod circle;
pub mod error;
pub mod experiment;
pub mod format;
pub mod oracle;
pub mod sieve;
pub mod stats;
pub mod variance;

pub use error::{Error, Result};
