//! High-precision machinery for the prime zeta function P(s) = sum_p p^-s
//! near its logarithmic singularity at s = 1.
//!
//! The expansion P(s) = log(1/(s-1)) + sum_n alpha_n (s-1)^n / n! defines a
//! family of generalized Mertens constants alpha_n. This crate computes them
//! by three independent routes and cross-validates:
//!
//! - the Mobius series alpha_n = g_n + sum_{k>=2} mu(k)/k k^n (log zeta)^(n)(k)
//!   (the precision route, good to the full working precision);
//! - prime-sum limits alpha_n = lim (-1)^n [sum_{p<=x} log^n p / p - log^n x / n]
//!   backed by a segmented sieve;
//! - the remainder integral (-1)^n int (log^n t - n log^(n-1) t)/t^2
//!   [pi(t) - li(t)] dt, evaluated exactly between prime jumps.
//!
//! P(s) itself is evaluated by direct summation, Mobius inversion of
//! log zeta, the s=1 series, and the remainder-integral continuation.

pub mod alpha;
pub mod checks;
pub mod empirical;
pub mod error;
pub mod logint;
pub mod mobius;
pub mod pzeta;
pub mod real;
pub mod series;
pub mod sieve;
pub mod stieltjes;
pub mod zeta;

pub use error::{Error, Result};
pub use real::{PrecisionPolicy, Real};
