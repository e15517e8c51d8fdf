//! Directed-rounding high-precision real arithmetic.
//!
//! Thin layer over [`astro_float`] that makes rounding direction explicit at
//! every call site. astro-float documents all operations, functions, radix
//! conversions, and constants as correctly rounded, so evaluating with
//! [`Dir::Down`] / [`Dir::Up`] yields values that bound the exact result from
//! below / above. Certified interval endpoints are built exclusively from such
//! one-sided evaluations; [`Dir::Near`] is reserved for estimates.

use alloc::string::String;
use alloc::vec::Vec;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint, Sign as IntSign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Rounding direction of a single operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dir {
    /// Round toward negative infinity (result is a lower bound).
    Down,
    /// Round toward positive infinity (result is an upper bound).
    Up,
    /// Round to nearest (estimates only, never certified endpoints).
    Near,
}

impl Dir {
    fn rm(self) -> RoundingMode {
        match self {
            Dir::Down => RoundingMode::Down,
            Dir::Up => RoundingMode::Up,
            Dir::Near => RoundingMode::ToEven,
        }
    }

    /// The opposite direction; `Near` is self-opposite.
    pub fn flip(self) -> Dir {
        match self {
            Dir::Down => Dir::Up,
            Dir::Up => Dir::Down,
            Dir::Near => Dir::Near,
        }
    }
}

/// Working-precision context: precision in bits plus the shared cache of
/// constants (pi, ln 2) used by astro-float.
pub struct Engine {
    bits: usize,
    consts: Consts,
}

impl Engine {
    /// New engine with the given working precision in bits.
    pub fn new(bits: u32) -> Engine {
        Engine {
            bits: bits as usize,
            consts: Consts::new().expect("constants cache allocation"),
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits as u32
    }

    pub fn zero(&self) -> BigFloat {
        BigFloat::from_i8(0, self.bits)
    }

    pub fn from_u64(&self, v: u64) -> BigFloat {
        BigFloat::from_u64(v, self.bits.max(64))
    }

    pub fn from_i64(&self, v: i64) -> BigFloat {
        BigFloat::from_i64(v, self.bits.max(64))
    }

    /// Exact conversion of an arbitrary-precision non-negative integer.
    pub fn from_biguint_exact(&self, v: &BigUint) -> BigFloat {
        if v.is_zero() {
            return self.zero();
        }
        let words = v.to_u64_digits();
        let e = v.bits();
        debug_assert!(e <= i32::MAX as u64);
        BigFloat::from_words(&words, Sign::Pos, e as astro_float::Exponent)
    }

    /// Exact conversion of an arbitrary-precision integer.
    pub fn from_bigint_exact(&self, v: &BigInt) -> BigFloat {
        let mag = self.from_biguint_exact(v.magnitude());
        if v.sign() == IntSign::Minus {
            mag.neg()
        } else {
            mag
        }
    }

    /// Directed conversion of an exact rational to working precision.
    ///
    /// `Down`/`Up` results bound the rational from the corresponding side;
    /// `Near` is within one ulp of the exact value.
    pub fn from_rational(&self, q: &BigRational, dir: Dir) -> BigFloat {
        if q.is_zero() {
            return self.zero();
        }
        let negative = q.is_negative();
        // Rounding the magnitude toward zero corresponds to Down for positive
        // values and Up for negative ones.
        let mag_dir = if negative { dir.flip() } else { dir };
        let num = q.numer().magnitude();
        let den = q.denom().magnitude();

        // Scale so the integer quotient carries bits+2 significant bits.
        let sh: i64 = self.bits as i64 + 2 - (num.bits() as i64 - den.bits() as i64);
        let scaled_num = if sh >= 0 { num << (sh as u64) } else { num.clone() };
        let scaled_den = if sh >= 0 { den.clone() } else { den << ((-sh) as u64) };
        let (quot, rem) = scaled_num.div_rem(&scaled_den);

        let picked = match mag_dir {
            Dir::Down => quot,
            Dir::Up => {
                if rem.is_zero() {
                    quot
                } else {
                    quot + 1u32
                }
            }
            Dir::Near => {
                if &rem * 2u32 >= scaled_den {
                    quot + 1u32
                } else {
                    quot
                }
            }
        };

        // picked * 2^-sh, rounded at target precision in the same direction.
        let mut f = self.from_biguint_exact(&picked);
        let e = f.exponent().expect("finite");
        f.set_exponent(e - sh as astro_float::Exponent);
        let rm = if negative { mag_dir.flip().rm() } else { mag_dir.rm() };
        f.set_precision(self.bits, rm).expect("set_precision");
        if negative {
            f.neg()
        } else {
            f
        }
    }

    /// Exact rational value of a finite float (the conversion is lossless).
    pub fn to_rational(x: &BigFloat) -> BigRational {
        if x.is_zero() {
            return BigRational::zero();
        }
        let (words, _n, sign, e, _inexact) = x.as_raw_parts().expect("finite value");
        let mut bytes = Vec::with_capacity(words.len() * 8);
        for w in words {
            bytes.extend_from_slice(&w.to_le_bytes());
        }
        let m = BigUint::from_bytes_le(&bytes);
        // value = m * 2^(e - 64*len)
        let shift = e as i64 - (words.len() as i64) * 64;
        let mag = if shift >= 0 {
            BigRational::from_integer(BigInt::from(m << (shift as u64)))
        } else {
            BigRational::new(BigInt::from(m), BigInt::from(BigUint::one() << ((-shift) as u64)))
        };
        if sign == Sign::Neg {
            -mag
        } else {
            mag
        }
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat, dir: Dir) -> BigFloat {
        a.add(b, self.bits, dir.rm())
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat, dir: Dir) -> BigFloat {
        a.sub(b, self.bits, dir.rm())
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat, dir: Dir) -> BigFloat {
        a.mul(b, self.bits, dir.rm())
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat, dir: Dir) -> BigFloat {
        a.div(b, self.bits, dir.rm())
    }

    /// Natural logarithm; requires a positive argument.
    pub fn ln(&mut self, x: &BigFloat, dir: Dir) -> BigFloat {
        x.ln(self.bits, dir.rm(), &mut self.consts)
    }

    pub fn exp(&mut self, x: &BigFloat, dir: Dir) -> BigFloat {
        x.exp(self.bits, dir.rm(), &mut self.consts)
    }

    pub fn sqrt(&self, x: &BigFloat, dir: Dir) -> BigFloat {
        x.sqrt(self.bits, dir.rm())
    }

    /// `x^n` for non-negative integer `n`; directed rounding is meaningful
    /// here for positive `x` (the power is then monotone in `x`).
    pub fn powi(&self, x: &BigFloat, n: usize, dir: Dir) -> BigFloat {
        x.powi(n, self.bits, dir.rm())
    }

    /// General power `x^e` for positive `x`.
    pub fn pow(&mut self, x: &BigFloat, e: &BigFloat, dir: Dir) -> BigFloat {
        x.pow(e, self.bits, dir.rm(), &mut self.consts)
    }

    pub fn cos(&mut self, x: &BigFloat, dir: Dir) -> BigFloat {
        x.cos(self.bits, dir.rm(), &mut self.consts)
    }

    pub fn pi(&mut self, dir: Dir) -> BigFloat {
        self.consts.pi(self.bits, dir.rm())
    }

    pub fn ln_2(&mut self, dir: Dir) -> BigFloat {
        self.consts.ln_2(self.bits, dir.rm())
    }

    /// Parse a decimal string (scientific or positional), correctly rounded.
    pub fn parse(&mut self, s: &str) -> Result<BigFloat> {
        let f = BigFloat::parse(s, Radix::Dec, self.bits, RoundingMode::ToEven, &mut self.consts);
        if f.is_nan() {
            return Err(Error::InvalidArgument("unparseable decimal literal"));
        }
        Ok(f)
    }

    /// Lossy conversion for diagnostics and threshold checks.
    pub fn to_f64(x: &BigFloat) -> f64 {
        if x.is_zero() {
            return 0.0;
        }
        if x.is_inf_pos() {
            return f64::INFINITY;
        }
        if x.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        let Some((words, _n, sign, e, _)) = x.as_raw_parts() else {
            return f64::NAN;
        };
        let mut acc = 0.0f64;
        // value = 0.m * 2^e, words little-endian; top two words carry more
        // than f64 needs.
        let len = words.len();
        for (i, w) in words.iter().enumerate().skip(len.saturating_sub(2)) {
            let word_exp = e as i64 - 64 * (len - i) as i64;
            acc += ldexp(*w as f64, word_exp);
        }
        if sign == Sign::Neg {
            -acc
        } else {
            acc
        }
    }

    /// Total order on finite values; panics on NaN (never produced here).
    pub fn cmp(a: &BigFloat, b: &BigFloat) -> core::cmp::Ordering {
        a.partial_cmp(b).expect("finite values")
    }

    /// Decimal string with `digits` significant digits, round-to-nearest.
    ///
    /// Deterministic: positional notation for moderate magnitudes,
    /// scientific `d.dd…e±k` otherwise.
    pub fn to_decimal(x: &BigFloat, digits: usize) -> String {
        decimal_string(x, digits, false)
    }

    /// Decimal string with `digits` significant digits, truncated toward zero.
    pub fn to_decimal_truncated(x: &BigFloat, digits: usize) -> String {
        decimal_string(x, digits, true)
    }

    /// Enough decimal digits to make `to_decimal` round-trip at precision
    /// `bits` under correctly rounded parsing.
    pub fn roundtrip_digits(bits: u32) -> usize {
        (bits as f64 * core::f64::consts::LOG10_2).ceil() as usize + 3
    }

    /// Render `x` with round-trip precision and verify by parsing back.
    /// Returns the string and whether it failed to round-trip exactly.
    pub fn to_decimal_roundtrip(&mut self, x: &BigFloat) -> (String, bool) {
        let s = Self::to_decimal(x, Self::roundtrip_digits(self.bits()));
        match self.parse(&s) {
            Ok(back) => {
                let truncated = back.partial_cmp(x) != Some(core::cmp::Ordering::Equal);
                (s, truncated)
            }
            Err(_) => (s, true),
        }
    }

    /// Number of leading significant decimal digits pinned down by the
    /// enclosure `[lo, hi]`: the largest `d` such that both endpoints round
    /// to the same `d`-digit decimal. Rounding is monotone, so every value in
    /// the interval rounds to those same digits.
    pub fn certified_digits(lo: &BigFloat, hi: &BigFloat, max_digits: usize) -> usize {
        for d in (1..=max_digits).rev() {
            if Self::to_decimal(lo, d) == Self::to_decimal(hi, d) {
                return d;
            }
        }
        0
    }
}

fn ldexp(x: f64, e: i64) -> f64 {
    if e > 1023 {
        f64::INFINITY * x.signum()
    } else if e < -1074 {
        0.0
    } else {
        x * 2f64.powi(e as i32)
    }
}

/// Core decimal formatting: `digits` significant digits of `x`.
fn decimal_string(x: &BigFloat, digits: usize, truncate: bool) -> String {
    use alloc::format;
    let digits = digits.max(1);
    if x.is_zero() {
        return String::from("0");
    }
    let Some((words, _n, sign, e, _)) = x.as_raw_parts() else {
        return String::from("nan");
    };
    let mut bytes = Vec::with_capacity(words.len() * 8);
    for w in words {
        bytes.extend_from_slice(&w.to_le_bytes());
    }
    let m = BigUint::from_bytes_le(&bytes);
    let t: i64 = e as i64 - (words.len() as i64) * 64; // |x| = m * 2^t

    // First guess of the decimal exponent: |x| in [2^(e-1), 2^e).
    let mut k: i64 = ((e as f64 - 1.0) * core::f64::consts::LOG10_2).floor() as i64;
    loop {
        // A = round_or_trunc(m * 2^t * 10^(digits-1-k)) should have exactly
        // `digits` digits when k = floor(log10 |x|).
        let q: i64 = digits as i64 - 1 - k;
        let mut num = m.clone();
        let mut den = BigUint::one();
        if t >= 0 {
            num <<= t as u64;
        } else {
            den <<= (-t) as u64;
        }
        if q >= 0 {
            num *= BigUint::from(10u32).pow(q as u32);
        } else {
            den *= BigUint::from(10u32).pow((-q) as u32);
        }
        let a = if truncate {
            &num / &den
        } else {
            (&num + (&den >> 1u32)) / &den
        };
        let s = a.to_str_radix(10);
        if s.len() > digits {
            // Rounded up across a power of ten.
            k += 1;
            continue;
        }
        if s.len() < digits {
            k -= 1;
            continue;
        }
        let sign_str = if sign == Sign::Neg { "-" } else { "" };
        // Positional for moderate exponents, scientific otherwise.
        return if k >= -4 && k < 21 {
            if k >= 0 {
                let k = k as usize;
                if k + 1 >= digits {
                    let mut out = String::from(sign_str);
                    out.push_str(&s);
                    for _ in 0..(k + 1 - digits) {
                        out.push('0');
                    }
                    out
                } else {
                    format!("{sign_str}{}.{}", &s[..k + 1], &s[k + 1..])
                }
            } else {
                let zeros = (-k - 1) as usize;
                let mut out = String::from(sign_str);
                out.push_str("0.");
                for _ in 0..zeros {
                    out.push('0');
                }
                out.push_str(&s);
                out
            }
        } else if digits == 1 {
            format!("{sign_str}{s}e{k}")
        } else {
            format!("{sign_str}{}.{}e{k}", &s[..1], &s[1..])
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rational_conversion_brackets_exact_value() {
        let eng = Engine::new(128);
        for q in [rat(1, 3), rat(-1, 3), rat(22, 7), rat(-355, 113), rat(1, 10)] {
            let lo = eng.from_rational(&q, Dir::Down);
            let hi = eng.from_rational(&q, Dir::Up);
            let mid = eng.from_rational(&q, Dir::Near);
            assert!(Engine::to_rational(&lo) <= q, "down bound fails for {q}");
            assert!(Engine::to_rational(&hi) >= q, "up bound fails for {q}");
            assert!(lo <= mid && mid <= hi);
        }
    }

    #[test]
    fn dyadic_rationals_convert_exactly() {
        let eng = Engine::new(64);
        for q in [rat(1, 8), rat(-3, 4), rat(5, 1), rat(-1, 1024)] {
            let lo = eng.from_rational(&q, Dir::Down);
            let hi = eng.from_rational(&q, Dir::Up);
            assert_eq!(lo, hi);
            assert_eq!(Engine::to_rational(&lo), q);
        }
    }

    #[test]
    fn big_integer_conversion_is_exact() {
        let eng = Engine::new(256);
        let v = BigUint::from(3u32).pow(200);
        let f = eng.from_biguint_exact(&v);
        assert_eq!(
            Engine::to_rational(&f),
            BigRational::from_integer(BigInt::from(v))
        );
    }

    #[test]
    fn pi_brackets_reference() {
        let mut eng = Engine::new(192);
        let lo = eng.pi(Dir::Down);
        let hi = eng.pi(Dir::Up);
        assert!(lo < hi);
        let reference = eng
            .parse("3.14159265358979323846264338327950288419716939937510582097494459")
            .unwrap();
        assert!(lo < reference && reference < hi);
    }

    #[test]
    fn ln_directed_brackets_reference() {
        let mut eng = Engine::new(192);
        let six = eng.from_u64(6);
        let lo = eng.ln(&six, Dir::Down);
        let hi = eng.ln(&six, Dir::Up);
        let reference = eng
            .parse("1.79175946922805500081247735838070227272299069218300470585537")
            .unwrap();
        assert!(lo < reference && reference < hi);
        // one-ulp tightness at 192 bits
        let gap = eng.sub(&hi, &lo, Dir::Up);
        let tol = eng.parse("1e-55").unwrap();
        assert!(gap < tol);
    }

    #[test]
    fn sqrt_directed() {
        let eng = Engine::new(128);
        let two = eng.from_u64(2);
        let lo = eng.sqrt(&two, Dir::Down);
        let hi = eng.sqrt(&two, Dir::Up);
        assert!(eng.mul(&lo, &lo, Dir::Up) <= two);
        assert!(eng.mul(&hi, &hi, Dir::Down) >= two);
    }

    #[test]
    fn decimal_formatting() {
        let mut eng = Engine::new(128);
        let x = eng.parse("1234.5678").unwrap();
        assert_eq!(Engine::to_decimal(&x, 8), "1234.5678");
        assert_eq!(Engine::to_decimal(&x, 6), "1234.57");
        assert_eq!(Engine::to_decimal_truncated(&x, 6), "1234.56");
        assert_eq!(Engine::to_decimal(&x, 2), "1200");
        let y = eng.parse("-0.000125").unwrap();
        assert_eq!(Engine::to_decimal(&y, 3), "-0.000125");
        let z = eng.parse("6.25e-40").unwrap();
        assert_eq!(Engine::to_decimal(&z, 3), "6.25e-40");
        // rounding across a power of ten
        let w = eng.parse("0.999").unwrap();
        assert_eq!(Engine::to_decimal(&w, 2), "1.0");
    }

    #[test]
    fn decimal_roundtrip() {
        let mut eng = Engine::new(192);
        let three = eng.from_u64(3);
        let x = eng.div(&eng.from_u64(1), &three, Dir::Near);
        let (s, truncated) = eng.to_decimal_roundtrip(&x);
        assert!(!truncated, "1/3 failed to round-trip via {s}");
        let pi = eng.pi(Dir::Near);
        let (s, truncated) = eng.to_decimal_roundtrip(&pi);
        assert!(!truncated, "pi failed to round-trip via {s}");
    }

    #[test]
    fn certified_digit_count() {
        let mut eng = Engine::new(128);
        let lo = eng.parse("1.9997076445").unwrap();
        let hi = eng.parse("1.9997076951").unwrap();
        let d = Engine::certified_digits(&lo, &hi, 30);
        // endpoints agree to 1.99970769 after rounding at 8 digits? they
        // differ at the 8th significant digit (…64 vs …69), rounding at 7
        // digits gives 1.999708 for both.
        assert_eq!(d, 7);
        assert_eq!(Engine::to_decimal(&lo, d), Engine::to_decimal(&hi, d));
    }

    #[test]
    fn f64_conversion() {
        let mut eng = Engine::new(128);
        let x = eng.parse("2.25").unwrap();
        assert_eq!(Engine::to_f64(&x), 2.25);
        let y = eng.parse("-1.5e-30").unwrap();
        let fy = Engine::to_f64(&y);
        assert!((fy - (-1.5e-30)).abs() < 1e-45);
        let q = BigRational::from_f64(0.1).unwrap();
        let z = eng.from_rational(&q, Dir::Near);
        assert_eq!(Engine::to_f64(&z), 0.1);
    }
}
