//! Tree entropy of hypercubic and body-centered-cubic lattices.
//!
//! The quantity computed here is the exponential growth rate per site of the
//! number of spanning trees in growing cubes of a lattice, `h_d`. The library
//! evaluates it through an exact random-walk series: the return probabilities
//! `p_d(2k)` of simple random walk on `Z^d` are computed as exact rationals,
//! partial sums of the series are closed with Hurwitz-zeta tail bounds, and
//! every certified endpoint is produced with directed rounding. Alongside the
//! series machinery there are three independent cross-checks: a matrix-tree
//! oracle on finite grids, a one-dimensional Bessel-integral evaluation, and a
//! large-`d` asymptotic expansion.
//!
//! Module map:
//!
//! * [`walks`] — exact return counts `f(d,k)` and probabilities `p_d(2k)`
//!   via the dimension-splitting binomial convolution, with memoization.
//! * [`series`] — entropy estimates and certified intervals from exact
//!   partial sums plus rigorous tail bounds.
//! * [`zeta`] — Hurwitz zeta bounds (one-sided, elementary) and the
//!   Euler–Maclaurin estimate used for non-rigorous tails.
//! * [`asymptotic`] — the `1/d` expansion of `h_d` through order 14.
//! * [`bessel`] — non-rigorous quadrature of the `I_0` integral
//!   representation.
//! * [`kirchhoff`] — exact spanning-tree counts of finite grid graphs by
//!   fraction-free elimination; ground truth for the thermodynamic limit.
//! * [`real`] — directed-rounding high-precision arithmetic shared by all of
//!   the above.
//!
//! The crate is `no_std` (with `alloc`); all I/O lives in the companion CLI
//! crate.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod asymptotic;
pub mod bessel;
mod error;
pub mod kirchhoff;
pub mod real;
pub mod series;
pub mod walks;
pub mod zeta;

pub use error::{Error, Result};
pub use real::{Dir, Engine};
pub use series::{
    CertifiedInterval, EntropyResult, LatticeFamily, LatticeSpec, ResultRecord, Rigor, TailMethod,
};
pub use walks::{ReturnCountTable, WalkCountCache};

/// Exact rational scalar: arbitrary-precision numerator/denominator pair,
/// kept in canonical form (reduced, positive denominator) by construction.
pub type ExactRational = num_rational::BigRational;
