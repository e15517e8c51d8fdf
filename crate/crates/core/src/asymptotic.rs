//! Large-dimension expansion of the tree entropy:
//! `h_d = log(2d) - [c_1/d + c_2/d^2 + … + c_14/d^14 + O(d^-15)]`.
//!
//! The expansion is asymptotic, not convergent; the coefficients turn
//! negative from order 9 on, and for fixed `d` the term magnitudes
//! eventually grow. [`best_truncation`] applies the usual smallest-term
//! heuristic.

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::real::{Dir, Engine};
use crate::{Error, Result};

/// Highest available expansion order.
pub const MAX_ORDER: usize = 14;

/// Expansion coefficients `c_1 … c_14` as (numerator, denominator).
pub const COEFFICIENTS: [(i64, i64); MAX_ORDER] = [
    (1, 4),
    (3, 16),
    (7, 32),
    (45, 128),
    (269, 384),
    (805, 512),
    (3615, 1024),
    (23205, 4096),
    (-144963, 10240),
    (-2187031, 8192),
    (-40225409, 16384),
    (-1277353077, 65536),
    (-66817216455, 458752),
    (-271891453119, 262144),
];

/// `c_j / d^j` as an exact rational; `j` is 1-based.
pub fn term(d: u32, j: usize) -> Result<BigRational> {
    if j == 0 || j > MAX_ORDER {
        return Err(Error::UnsupportedOrder {
            order: j,
            max: MAX_ORDER,
        });
    }
    let (num, den) = COEFFICIENTS[j - 1];
    Ok(BigRational::new(
        BigInt::from(num),
        BigInt::from(den) * BigInt::from(d as u64).pow(j as u32),
    ))
}

/// `log(2d) - sum_{j=1..order} c_j/d^j`. Order 0 is allowed and yields the
/// bare `log(2d)`. Meaningful only for moderately large `d`; the series is
/// asymptotic.
pub fn h_asymptotic(eng: &mut Engine, d: u32, order: usize) -> Result<BigFloat> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1"));
    }
    if order > MAX_ORDER {
        return Err(Error::UnsupportedOrder {
            order,
            max: MAX_ORDER,
        });
    }
    let mut correction = BigRational::zero();
    for j in 1..=order {
        correction += term(d, j)?;
    }
    let two_d = eng.from_u64(2 * d as u64);
    let log = eng.ln(&two_d, Dir::Near);
    let corr = eng.from_rational(&correction, Dir::Near);
    Ok(eng.sub(&log, &corr, Dir::Near))
}

/// Smallest-term truncation: the order `j` minimizing `|c_j/d^j|` (first
/// such on ties) and the corresponding value.
pub fn best_truncation(eng: &mut Engine, d: u32) -> Result<(usize, BigFloat)> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1"));
    }
    let mut best_j = 1;
    let mut best_mag: Option<BigRational> = None;
    for j in 1..=MAX_ORDER {
        let mag = term(d, j)?.abs();
        if best_mag.as_ref().map_or(true, |b| &mag < b) {
            best_mag = Some(mag);
            best_j = j;
        }
    }
    let value = h_asymptotic(eng, d, best_j)?;
    Ok((best_j, value))
}
