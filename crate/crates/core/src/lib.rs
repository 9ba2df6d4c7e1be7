//! Numerics for the von Mises (circular normal) law and its linear normal
//! approximation.
//!
//! The crate is split into four layers:
//!
//! * [`special_fn`]: modified Bessel functions `I0`, `I1` and `log I0`, with a
//!   power series for moderate arguments and the Hankel asymptotic series for
//!   large ones.
//! * [`circular_dist`]: exact von Mises and wrapped normal densities, circular
//!   variances and the standard normal helpers `phi`, `Phi` and the upper
//!   incomplete moments `Psi_j`.
//! * [`bridge_approx`]: standardized deviates, the bulk region, and the
//!   large-concentration expansions of the density ratio, its logarithm and
//!   the distribution function.
//! * [`oracle`]: adaptive quadrature, integral representations of the Bessel
//!   functions, and residual scans that measure the error order of every
//!   expansion against brute force.

pub mod bridge_approx;
pub mod circular_dist;
mod error;
pub mod oracle;
pub mod special_fn;

pub use error::{Error, Result};
