//! Hurwitz zeta evaluation: elementary one-sided bounds for certified tail
//! closures, and an Euler–Maclaurin estimate for accurate (two-sided but
//! unproven) tail corrections.
//!
//! Throughout, `zeta(s, a) = sum_{j>=0} (a + j)^(-s)` with `s > 1`, `a >= 1`.

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::real::{Dir, Engine};
use crate::{Error, Result};

/// Largest supported number of Bernoulli correction terms.
pub const MAX_EULER_MACLAURIN_ORDER: usize = 10;

/// B_2, B_4, …, B_20 as (numerator, denominator).
const BERNOULLI: [(i64, i64); MAX_EULER_MACLAURIN_ORDER] = [
    (1, 6),
    (-1, 30),
    (1, 42),
    (-1, 30),
    (5, 66),
    (-691, 2730),
    (7, 6),
    (-3617, 510),
    (43867, 798),
    (-174611, 330),
];

fn check_domain(eng: &Engine, s: &BigFloat, a: &BigFloat) -> Result<()> {
    let one = eng.from_u64(1);
    if s <= &one {
        return Err(Error::Domain("zeta(s, a) requires s > 1"));
    }
    if a < &one {
        return Err(Error::Domain("zeta(s, a) requires a >= 1"));
    }
    Ok(())
}

/// Certified upper bound by integral comparison:
/// `zeta(s, a) <= a^(-s) + a^(1-s)/(s-1)`, evaluated with upward rounding.
///
/// One-sidedness: each term `(a+j)^(-s)` with `j >= 1` is at most
/// `int_{a+j-1}^{a+j} x^(-s) dx`, so the sum past the first term is at most
/// `int_a^inf x^(-s) dx = a^(1-s)/(s-1)`.
pub fn hurwitz_zeta_upper(eng: &mut Engine, s: &BigFloat, a: &BigFloat) -> Result<BigFloat> {
    check_domain(eng, s, a)?;
    let one = eng.from_u64(1);
    let neg_s = s.neg();
    let one_minus_s = eng.sub(&one, s, Dir::Up); // exact for dyadic s
    let s_minus_one = eng.sub(s, &one, Dir::Down);
    // a > 1 makes a^e decreasing in e; rounding e upward is safe either way
    // because pow itself is correctly rounded for exact inputs, and our s is
    // exact (dyadic). Round the power results upward directly.
    let first = eng.pow(a, &neg_s, Dir::Up);
    let integral_num = eng.pow(a, &one_minus_s, Dir::Up);
    let integral = eng.div(&integral_num, &s_minus_one, Dir::Up);
    Ok(eng.add(&first, &integral, Dir::Up))
}

/// Certified lower bound: `zeta(s, a) >= a^(1-s)/(s-1) + a^(-s)/2`,
/// evaluated with downward rounding.
///
/// One-sidedness: `x^(-s)` is convex, so the trapezoid sum overestimates the
/// integral: `sum_{j>=0} f(a+j) - f(a)/2 >= int_a^inf f`.
pub fn hurwitz_zeta_lower(eng: &mut Engine, s: &BigFloat, a: &BigFloat) -> Result<BigFloat> {
    check_domain(eng, s, a)?;
    let one = eng.from_u64(1);
    let one_minus_s = eng.sub(&one, s, Dir::Down);
    let s_minus_one = eng.sub(s, &one, Dir::Up);
    let integral_num = eng.pow(a, &one_minus_s, Dir::Down);
    let integral = eng.div(&integral_num, &s_minus_one, Dir::Down);
    let neg_s = s.neg();
    let mut half_first = eng.pow(a, &neg_s, Dir::Down);
    let e = half_first.exponent().expect("finite");
    half_first.set_exponent(e - 1); // exact halving
    Ok(eng.add(&integral, &half_first, Dir::Down))
}

/// Euler–Maclaurin estimate of `zeta(s, a)` with `order` Bernoulli
/// correction terms:
///
/// ```text
/// zeta(s,a) ~ sum_{j<m} (a+j)^(-s) + N^(1-s)/(s-1) + N^(-s)/2
///           + sum_{i=1}^{order} B_2i/(2i)! * s(s+1)…(s+2i-2) * N^(-s-2i+1)
/// ```
///
/// with `N = a + m`. Not one-sided; accuracy improves with `order` (the
/// error is on the scale of the first omitted correction term).
pub fn hurwitz_zeta_estimate(
    eng: &mut Engine,
    s: &BigFloat,
    a: &BigFloat,
    order: usize,
) -> Result<BigFloat> {
    check_domain(eng, s, a)?;
    if order > MAX_EULER_MACLAURIN_ORDER {
        return Err(Error::UnsupportedOrder {
            order,
            max: MAX_EULER_MACLAURIN_ORDER,
        });
    }
    // Push the expansion point far enough out that the first omitted
    // Bernoulli term is negligible at moderate orders.
    let target = 32.0_f64.max(8.0 * (order as f64 + 1.0));
    let a_f = Engine::to_f64(a);
    let m = if a_f >= target {
        0u64
    } else {
        (target - a_f).ceil() as u64
    };

    let neg_s = s.neg();
    let mut direct = eng.zero();
    for j in 0..m {
        let base = eng.add(a, &eng.from_u64(j), Dir::Near);
        let term = eng.pow(&base, &neg_s, Dir::Near);
        direct = eng.add(&direct, &term, Dir::Near);
    }
    let big_n = eng.add(a, &eng.from_u64(m), Dir::Near);

    let one = eng.from_u64(1);
    let one_minus_s = eng.sub(&one, s, Dir::Near);
    let s_minus_one = eng.sub(s, &one, Dir::Near);
    let integral_num = eng.pow(&big_n, &one_minus_s, Dir::Near);
    let integral = eng.div(&integral_num, &s_minus_one, Dir::Near);

    let mut half_boundary = eng.pow(&big_n, &neg_s, Dir::Near);
    let e = half_boundary.exponent().expect("finite");
    half_boundary.set_exponent(e - 1);

    let mut sum = eng.add(&direct, &integral, Dir::Near);
    sum = eng.add(&sum, &half_boundary, Dir::Near);

    // Bernoulli corrections. poch = s (s+1) … (s + 2i - 2), built up
    // incrementally; factorial (2i)! fits in u64 for 2i <= 20.
    let mut poch = s.clone();
    let mut factorial: u64 = 2;
    for (i, &(b_num, b_den)) in BERNOULLI.iter().enumerate().take(order) {
        let two_i = 2 * (i as u64 + 1);
        // exponent -s - (2i - 1)
        let shift = eng.from_u64(two_i - 1);
        let exp = eng.sub(&neg_s, &shift, Dir::Near);
        let power = eng.pow(&big_n, &exp, Dir::Near);
        let coeff_num = eng.from_i64(b_num);
        let coeff_den = eng.from_i64(b_den.checked_mul(factorial as i64).expect("fits"));
        let coeff = eng.div(&coeff_num, &coeff_den, Dir::Near);
        let mut term = eng.mul(&coeff, &poch, Dir::Near);
        term = eng.mul(&term, &power, Dir::Near);
        sum = eng.add(&sum, &term, Dir::Near);
        // extend pochhammer and factorial for the next correction
        let n1 = eng.add(s, &eng.from_u64(two_i - 1), Dir::Near);
        let n2 = eng.add(s, &eng.from_u64(two_i), Dir::Near);
        poch = eng.mul(&poch, &n1, Dir::Near);
        poch = eng.mul(&poch, &n2, Dir::Near);
        factorial = factorial
            .checked_mul((two_i + 1) * (two_i + 2))
            .expect("factorial fits u64 for order <= 10");
    }
    Ok(sum)
}

/// Catalan's constant `G = sum_k (-1)^k/(2k+1)^2` as an exact rational
/// approximation, accelerated with the Chebyshev-based scheme of Cohen,
/// Rodriguez Villegas, and Zagier. For `n` iterations the error is below
/// `3 / (3 + sqrt 8)^n`; the default `n` covers well over 30 digits.
///
/// The sequence `1/(2k+1)^2` is a Hausdorff moment sequence, which is the
/// hypothesis the acceleration's error bound needs.
pub fn catalan_rational(n: usize) -> BigRational {
    // d = ((3+sqrt8)^n + (3-sqrt8)^n)/2: integer, via the Chebyshev-style
    // recurrence d_{j+1} = 6 d_j - d_{j-1}.
    let mut d_prev = BigInt::one(); // j = 0
    let mut d = BigInt::from(3); // j = 1
    if n == 0 {
        d = BigInt::one();
    }
    for _ in 1..n {
        let next = 6 * &d - &d_prev;
        d_prev = d;
        d = next;
    }
    let d = BigRational::from_integer(d);

    let mut b = -BigRational::one();
    let mut c = -d.clone();
    let mut s = BigRational::from_integer(BigInt::from(0));
    for k in 0..n as i64 {
        c = &b - &c;
        let a_k = BigRational::new(BigInt::one(), BigInt::from((2 * k + 1) * (2 * k + 1)));
        s += &c * &a_k;
        // b <- b * (k+n)(k-n) / ((k+1/2)(k+1))
        let num = BigRational::from_integer(BigInt::from((k + n as i64) * (k - n as i64)) * 2);
        let den = BigRational::from_integer(BigInt::from((2 * k + 1) * (k + 1)));
        b = b * num / den;
    }
    s / d
}

/// Catalan's constant at the engine's working precision (error far below
/// one ulp for precisions up to a few thousand bits).
pub fn catalan(eng: &Engine) -> BigFloat {
    // 0.4 decimal digits per iteration; add slack.
    let n = (eng.bits() as f64 * 0.3915) as usize + 16;
    eng.from_rational(&catalan_rational(n), Dir::Near)
}
