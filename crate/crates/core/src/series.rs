//! Entropy values and certified intervals from the return-probability series.
//!
//! For the hypercubic lattice the tree entropy satisfies
//!
//! ```text
//! h_d = log(2d) - sum_{k>=1} p_d(2k)/(2k),
//! ```
//!
//! with all series terms positive. Exact rational partial sums therefore give
//! rigorous upper bounds directly, and lower bounds follow by bounding the
//! dropped tail with `p_d(2k) <= 2 (d/(4 pi k))^(d/2)` closed into a Hurwitz
//! zeta value. Body-centered lattices use `h^bcc_d = d log 2 -
//! (1/2) sum_k p_1(2k)^d / k` with the analogous one-dimensional bounds on
//! `p_1` from both sides.
//!
//! The exactness firewall: partial sums are computed entirely in rational
//! arithmetic and convert to floating point exactly once per endpoint, with
//! directed rounding. Estimates (as opposed to bounds) refine the tail with
//! the second-order approximation `p_d(2k) ≈ 2 (d/(4 pi k))^(d/2) (1 - d/(8k))`
//! summed by Euler–Maclaurin zeta evaluation; they are never used for
//! certified endpoints.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use astro_float::BigFloat;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::real::{Dir, Engine};
use crate::walks::{self, ReturnCountTable, WalkCountCache};
use crate::zeta;
use crate::{Error, Result};

/// Euler–Maclaurin correction order used for tail estimates.
pub const EULER_MACLAURIN_ORDER: usize = 4;

/// Lattice family treated by the series machinery.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeFamily {
    Hypercubic,
    Bcc,
}

impl LatticeFamily {
    pub fn as_str(self) -> &'static str {
        match self {
            LatticeFamily::Hypercubic => "hypercubic",
            LatticeFamily::Bcc => "bcc",
        }
    }
}

/// A lattice family together with its dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeSpec {
    pub family: LatticeFamily,
    pub dimension: u32,
}

impl LatticeSpec {
    pub fn hypercubic(d: u32) -> LatticeSpec {
        LatticeSpec {
            family: LatticeFamily::Hypercubic,
            dimension: d,
        }
    }

    pub fn bcc(d: u32) -> LatticeSpec {
        LatticeSpec {
            family: LatticeFamily::Bcc,
            dimension: d,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.family {
            LatticeFamily::Hypercubic if self.dimension >= 1 => Ok(()),
            LatticeFamily::Bcc if self.dimension >= 2 => Ok(()),
            LatticeFamily::Hypercubic => Err(Error::Domain("hypercubic lattice requires d >= 1")),
            LatticeFamily::Bcc => Err(Error::Domain("bcc lattice requires d >= 2")),
        }
    }
}

impl core::fmt::Display for LatticeSpec {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{} d={}", self.family.as_str(), self.dimension)
    }
}

/// Whether a certified interval is unconditional.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rigor {
    /// Both endpoints rest on proven inequalities.
    Proven,
    /// The tail bound relies on the return-probability bound outside its
    /// proven range (d >= 7, small k).
    Conditional,
}

impl Rigor {
    pub fn as_str(self) -> &'static str {
        match self {
            Rigor::Proven => "proven",
            Rigor::Conditional => "conditional",
        }
    }
}

/// Method that produced the certified tail closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailMethod {
    /// Elementary integral-comparison zeta bounds (used for all certified
    /// endpoints).
    ZetaIntegral,
    /// Euler–Maclaurin summation (estimates only).
    EulerMaclaurin,
}

impl TailMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            TailMethod::ZetaIntegral => "zeta_integral",
            TailMethod::EulerMaclaurin => "euler_maclaurin",
        }
    }
}

/// Pair of directed-rounded endpoints guaranteed to contain the true value
/// (under the stated rigor).
#[derive(Debug, Clone)]
pub struct CertifiedInterval {
    lo: BigFloat,
    hi: BigFloat,
    rigor: Rigor,
    condition_note: String,
}

impl CertifiedInterval {
    fn new(lo: BigFloat, hi: BigFloat, rigor: Rigor, condition_note: String) -> CertifiedInterval {
        assert!(
            Engine::cmp(&lo, &hi) != core::cmp::Ordering::Greater,
            "interval endpoints out of order"
        );
        CertifiedInterval {
            lo,
            hi,
            rigor,
            condition_note,
        }
    }

    pub fn lo(&self) -> &BigFloat {
        &self.lo
    }

    pub fn hi(&self) -> &BigFloat {
        &self.hi
    }

    pub fn rigor(&self) -> Rigor {
        self.rigor
    }

    pub fn condition_note(&self) -> &str {
        &self.condition_note
    }

    pub fn contains(&self, x: &BigFloat) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// True when `other` lies inside (or on the boundary of) `self`.
    pub fn contains_interval(&self, other: &CertifiedInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn width(&self, eng: &Engine) -> BigFloat {
        eng.sub(&self.hi, &self.lo, Dir::Up)
    }
}

/// A computed entropy value: estimate plus certified enclosure and the
/// parameters that produced them.
#[derive(Debug, Clone)]
pub struct EntropyResult {
    pub lattice: LatticeSpec,
    pub estimate: BigFloat,
    pub certified: CertifiedInterval,
    pub terms_used: usize,
    pub precision_bits: u32,
    pub tail_method: TailMethod,
}

impl EntropyResult {
    /// Flat record with decimal strings for serialization. Strings carry
    /// enough digits to round-trip to the binary values exactly; if any
    /// fails to round-trip, `truncated` is set.
    pub fn to_record(&self, eng: &mut Engine) -> ResultRecord {
        let (estimate, t1) = eng.to_decimal_roundtrip(&self.estimate);
        let (lo, t2) = eng.to_decimal_roundtrip(&self.certified.lo);
        let (hi, t3) = eng.to_decimal_roundtrip(&self.certified.hi);
        ResultRecord {
            family: self.lattice.family.as_str(),
            d: self.lattice.dimension,
            k_terms: self.terms_used,
            precision_bits: self.precision_bits,
            estimate,
            lo,
            hi,
            rigor: self.certified.rigor.as_str(),
            tail_method: self.tail_method.as_str(),
            condition_note: self.certified.condition_note.clone(),
            truncated: t1 || t2 || t3,
        }
    }
}

/// Serialization-ready view of an [`EntropyResult`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultRecord {
    pub family: &'static str,
    pub d: u32,
    pub k_terms: usize,
    pub precision_bits: u32,
    pub estimate: String,
    pub lo: String,
    pub hi: String,
    pub rigor: &'static str,
    pub tail_method: &'static str,
    pub condition_note: String,
    pub truncated: bool,
}

/// Exact partial sum `sum_{k=1..K} p_d(2k)/(2k)` in rational arithmetic.
///
/// Only even step counts contribute (odd-step return probabilities vanish),
/// so this is the full partial sum of the entropy series through `2K` steps.
pub fn partial_sum(d: u32, terms: usize, table: &ReturnCountTable) -> Result<BigRational> {
    if terms == 0 {
        return Err(Error::InvalidArgument("partial sum needs at least one term"));
    }
    if table.dimension() != d {
        return Err(Error::InvalidArgument("table dimension mismatch"));
    }
    if table.kmax() < terms {
        return Err(Error::OutOfRange("table shorter than requested partial sum"));
    }
    let step = BigUint::from((2 * d as u64) * (2 * d as u64));
    let mut power = BigUint::one();
    let mut acc = BigRational::zero();
    for k in 1..=terms {
        power = &power * &step;
        let den = &power * BigUint::from(2 * k as u64);
        acc += BigRational::new(
            BigInt::from(table.count(k)?.clone()),
            BigInt::from(den),
        );
    }
    Ok(acc)
}

/// Exact partial sum `(1/2) sum_{k=1..K} p_1(2k)^d/(2k)` of the bcc series.
pub fn bcc_partial_sum(d: u32, terms: usize) -> Result<BigRational> {
    if d < 2 {
        return Err(Error::Domain("bcc series requires d >= 2"));
    }
    if terms == 0 {
        return Err(Error::InvalidArgument("partial sum needs at least one term"));
    }
    let mut central = BigUint::one();
    let mut acc = BigRational::zero();
    for j in 1..=terms as u64 {
        central = central * (2 * (2 * j - 1)) / j; // C(2j, j)
        let num = central.pow(d);
        let den = (BigUint::one() << (2 * j * d as u64)) * BigUint::from(4 * j);
        acc += BigRational::new(BigInt::from(num), BigInt::from(den));
    }
    Ok(acc)
}

/// Verification verdict for the return-probability bound at one `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundCheck {
    Holds,
    Violated,
    /// The working pi enclosure was too coarse to decide (does not occur at
    /// the precision used here; reported rather than assumed away).
    Indeterminate,
}

/// Exact check of `p_d(2k) <= 2 (d/(4 pi k))^(d/2)` for all `1 <= k <= k_hi`
/// of the given table. Returns the list of `k` at which the bound could not
/// be confirmed. The inequality is squared to clear the half-integer power
/// and decided with rational enclosures of pi, so the verdicts are exact.
pub fn verify_return_bound(table: &ReturnCountTable, k_hi: usize) -> Result<Vec<(usize, BoundCheck)>> {
    let d = table.dimension();
    if table.kmax() < k_hi {
        return Err(Error::OutOfRange("table shorter than verification range"));
    }
    let mut eng = Engine::new(192);
    let pi_lo = Engine::to_rational(&eng.pi(Dir::Down));
    let pi_hi = Engine::to_rational(&eng.pi(Dir::Up));
    // p^2 (4k)^d pi^d <= 4 d^d  <=>  f^2 (4k)^d pi_num^d <= 4 d^d (2d)^(4k) pi_den^d
    let pi_hi_num_d = pi_hi.numer().magnitude().pow(d);
    let pi_hi_den_d = pi_hi.denom().magnitude().pow(d);
    let pi_lo_num_d = pi_lo.numer().magnitude().pow(d);
    let pi_lo_den_d = pi_lo.denom().magnitude().pow(d);
    let four_d_d = BigUint::from(4u32) * BigUint::from(d as u64).pow(d);
    let step = BigUint::from(2 * d as u64).pow(4);
    let mut walk_den = BigUint::one(); // (2d)^(4k)

    let mut failures = Vec::new();
    for k in 1..=k_hi {
        walk_den = &walk_den * &step;
        let f = table.count(k)?;
        let f2 = f * f;
        let four_k_d = BigUint::from(4 * k as u64).pow(d);
        let lhs_core = &f2 * &four_k_d;
        let rhs_core = &four_d_d * &walk_den;
        // confirm with the upper pi enclosure
        if &lhs_core * &pi_hi_num_d <= &rhs_core * &pi_hi_den_d {
            continue;
        }
        // refute with the lower enclosure
        if &lhs_core * &pi_lo_num_d > &rhs_core * &pi_lo_den_d {
            failures.push((k, BoundCheck::Violated));
        } else {
            failures.push((k, BoundCheck::Indeterminate));
        }
    }
    Ok(failures)
}

/// Session object: walk-count memoization plus a fixed-precision engine.
pub struct EntropyComputer {
    cache: WalkCountCache,
    eng: Engine,
}

impl EntropyComputer {
    pub fn new(precision_bits: u32) -> EntropyComputer {
        EntropyComputer {
            cache: WalkCountCache::new(),
            eng: Engine::new(precision_bits),
        }
    }

    pub fn precision_bits(&self) -> u32 {
        self.eng.bits()
    }

    pub fn engine(&mut self) -> &mut Engine {
        &mut self.eng
    }

    pub fn table(&mut self, d: u32, kmax: usize) -> Result<Arc<ReturnCountTable>> {
        self.cache.build_counts(d, kmax)
    }

    /// Rigorous upper bound on `h_d`: upward-rounded `log(2d) - S_K`.
    /// Every partial sum bounds the series from below, so this holds for any
    /// number of terms.
    pub fn upper_bound_h(&mut self, d: u32, terms: usize) -> Result<BigFloat> {
        let table = self.table(d, terms)?;
        let sum = partial_sum(d, terms, &table)?;
        let two_d = self.eng.from_u64(2 * d as u64);
        let log_up = self.eng.ln(&two_d, Dir::Up);
        let sum_down = self.eng.from_rational(&sum, Dir::Down);
        Ok(self.eng.sub(&log_up, &sum_down, Dir::Up))
    }

    /// `(d / (4 pi))^(d/2)` with directed rounding.
    fn tail_prefactor(&mut self, d: u32, dir: Dir) -> BigFloat {
        let pi = self.eng.pi(dir.flip());
        let four = self.eng.from_u64(4);
        let four_pi = self.eng.mul(&four, &pi, dir.flip());
        let base = self.eng.div(&self.eng.from_u64(d as u64), &four_pi, dir);
        let exp = half_integer(&self.eng, d as u64);
        self.eng.pow(&base, &exp, dir)
    }

    /// Upward-rounded bound on the dropped tail
    /// `sum_{k>K} p_d(2k)/(2k) <= (d/(4 pi))^(d/2) zeta(d/2+1, K+1)`,
    /// together with its rigor: the return-probability bound behind it is
    /// proven for `1 <= d <= 6` and only for large `k` when `d >= 7`.
    ///
    /// `terms = 0` bounds the whole series. For `d <= 2` the closure
    /// converges slowly (exponent `d/2 + 1 <= 2`); still valid, so allowed.
    pub fn tail_upper(&mut self, d: u32, terms: usize) -> Result<(BigFloat, Rigor)> {
        if d == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1"));
        }
        let prefactor = self.tail_prefactor(d, Dir::Up);
        let s = half_integer(&self.eng, d as u64 + 2); // d/2 + 1
        let a = self.eng.from_u64(terms as u64 + 1);
        let z = zeta::hurwitz_zeta_upper(&mut self.eng, &s, &a)?;
        let tail = self.eng.mul(&prefactor, &z, Dir::Up);
        let rigor = if d <= 6 { Rigor::Proven } else { Rigor::Conditional };
        Ok((tail, rigor))
    }

    /// Non-rigorous tail estimate using the second-order approximation:
    /// `(d/(4 pi))^(d/2) [zeta(d/2+1, K+1) - (d/8) zeta(d/2+2, K+1)]` with
    /// Euler–Maclaurin zeta evaluation. Used only for the `estimate` field.
    pub fn estimate_tail(&mut self, d: u32, terms: usize) -> Result<BigFloat> {
        if d == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1"));
        }
        let prefactor = self.tail_prefactor(d, Dir::Near);
        let s = half_integer(&self.eng, d as u64 + 2);
        let s1 = half_integer(&self.eng, d as u64 + 4);
        let a = self.eng.from_u64(terms as u64 + 1);
        let z0 = zeta::hurwitz_zeta_estimate(&mut self.eng, &s, &a, EULER_MACLAURIN_ORDER)?;
        let z1 = zeta::hurwitz_zeta_estimate(&mut self.eng, &s1, &a, EULER_MACLAURIN_ORDER)?;
        let d_eighth = exact_eighth(&self.eng, d as u64);
        let corr = self.eng.mul(&d_eighth, &z1, Dir::Near);
        let inner = self.eng.sub(&z0, &corr, Dir::Near);
        Ok(self.eng.mul(&prefactor, &inner, Dir::Near))
    }

    /// Entropy with certified interval at the paper's per-dimension term
    /// counts (1000 / 100 / 80 by band).
    pub fn compute_entropy_default(&mut self, spec: LatticeSpec) -> Result<EntropyResult> {
        let terms = walks::default_terms(spec.dimension);
        self.compute_entropy(spec, terms)
    }

    /// Entropy estimate plus certified interval from `terms` series terms.
    pub fn compute_entropy(&mut self, spec: LatticeSpec, terms: usize) -> Result<EntropyResult> {
        spec.validate()?;
        if terms == 0 {
            return Err(Error::InvalidArgument("need at least one series term"));
        }
        match spec.family {
            LatticeFamily::Hypercubic => self.hypercubic_entropy(spec, terms),
            LatticeFamily::Bcc => self.bcc_entropy(spec, terms),
        }
    }

    fn hypercubic_entropy(&mut self, spec: LatticeSpec, terms: usize) -> Result<EntropyResult> {
        let d = spec.dimension;
        let table = self.table(d, terms)?;
        let sum = partial_sum(d, terms, &table)?;

        let two_d = self.eng.from_u64(2 * d as u64);
        let log_up = self.eng.ln(&two_d, Dir::Up);
        let log_down = self.eng.ln(&two_d, Dir::Down);
        let sum_down = self.eng.from_rational(&sum, Dir::Down);
        let sum_up = self.eng.from_rational(&sum, Dir::Up);

        let hi = self.eng.sub(&log_up, &sum_down, Dir::Up);
        let (tail, rigor) = self.tail_upper(d, terms)?;
        let lo_partial = self.eng.sub(&log_down, &sum_up, Dir::Down);
        let lo = self.eng.sub(&lo_partial, &tail, Dir::Down);

        let est_tail = self.estimate_tail(d, terms)?;
        let log_near = self.eng.ln(&two_d, Dir::Near);
        let sum_near = self.eng.from_rational(&sum, Dir::Near);
        let est_partial = self.eng.sub(&log_near, &sum_near, Dir::Near);
        let estimate = self.eng.sub(&est_partial, &est_tail, Dir::Near);

        let condition_note = if rigor == Rigor::Conditional {
            // The bound is verified exactly against the computed p_d(2k) up
            // to K, so the condition only concerns the k > K tail.
            let failures = verify_return_bound(&table, terms)?;
            if failures.is_empty() {
                format!(
                    "tail bound unproven for small k in d >= 7; verified exactly for all k <= {terms}"
                )
            } else {
                format!(
                    "tail bound unproven for small k in d >= 7; violated in computed range at k = {:?}",
                    failures
                )
            }
        } else {
            String::new()
        };

        let certified = CertifiedInterval::new(lo, hi, rigor, condition_note);
        debug_assert!(certified.contains(&estimate));
        Ok(EntropyResult {
            lattice: spec,
            estimate,
            certified,
            terms_used: terms,
            precision_bits: self.eng.bits(),
            tail_method: TailMethod::ZetaIntegral,
        })
    }

    /// Certified bcc tail bounds. With `q = 1/(4 pi k)`, the proven
    /// inequalities `2 q^(1/2) (1 - 1/(8k)) <= p_1(2k) <= 2 q^(1/2)` give
    ///
    /// ```text
    /// (1/4) pi^(-d/2) [zeta(s) - (d/8) zeta(s+1)] <= T <= (1/4) pi^(-d/2) zeta(s)
    /// ```
    ///
    /// for the discarded tail `T = (1/2) sum_{k>K} p_1(2k)^d/(2k)`, where
    /// `s = d/2 + 1`, zetas at offset `K+1`, and the lower line uses
    /// `(1 - x)^d >= 1 - dx`.
    fn bcc_tail_bounds(&mut self, d: u32, terms: usize) -> Result<(BigFloat, BigFloat)> {
        let s = half_integer(&self.eng, d as u64 + 2);
        let s1 = half_integer(&self.eng, d as u64 + 4);
        let a = self.eng.from_u64(terms as u64 + 1);

        // upper: (1/4) pi^(-d/2) zeta_up(s, a)
        let pi_down = self.eng.pi(Dir::Down);
        let exp = half_integer(&self.eng, d as u64);
        let pow_down = self.eng.pow(&pi_down, &exp, Dir::Down);
        let one = self.eng.from_u64(1);
        let inv_up = self.eng.div(&one, &pow_down, Dir::Up);
        let quarter_inv_up = shift_exponent(&inv_up, -2);
        let z_up = zeta::hurwitz_zeta_upper(&mut self.eng, &s, &a)?;
        let t_hi = self.eng.mul(&quarter_inv_up, &z_up, Dir::Up);

        // lower: (1/4) pi^(-d/2) [zeta_lo(s, a) - (d/8) zeta_up(s1, a)]
        let pi_up = self.eng.pi(Dir::Up);
        let pow_up = self.eng.pow(&pi_up, &exp, Dir::Up);
        let inv_down = self.eng.div(&one, &pow_up, Dir::Down);
        let quarter_inv_down = shift_exponent(&inv_down, -2);
        let z_lo = zeta::hurwitz_zeta_lower(&mut self.eng, &s, &a)?;
        let z1_up = zeta::hurwitz_zeta_upper(&mut self.eng, &s1, &a)?;
        let d_eighth = exact_eighth(&self.eng, d as u64);
        let corr_up = self.eng.mul(&d_eighth, &z1_up, Dir::Up);
        let inner_down = self.eng.sub(&z_lo, &corr_up, Dir::Down);
        let mut t_lo = self.eng.mul(&quarter_inv_down, &inner_down, Dir::Down);
        if t_lo.is_negative() {
            t_lo = self.eng.zero(); // the tail is a sum of positive terms
        }
        Ok((t_lo, t_hi))
    }

    fn bcc_entropy(&mut self, spec: LatticeSpec, terms: usize) -> Result<EntropyResult> {
        let d = spec.dimension;
        let sum = bcc_partial_sum(d, terms)?;
        let ln2_up = self.eng.ln_2(Dir::Up);
        let ln2_down = self.eng.ln_2(Dir::Down);
        let d_f = self.eng.from_u64(d as u64);
        let dlog2_up = self.eng.mul(&d_f, &ln2_up, Dir::Up);
        let dlog2_down = self.eng.mul(&d_f, &ln2_down, Dir::Down);
        let sum_down = self.eng.from_rational(&sum, Dir::Down);
        let sum_up = self.eng.from_rational(&sum, Dir::Up);

        let (t_lo, t_hi) = self.bcc_tail_bounds(d, terms)?;
        let hi_partial = self.eng.sub(&dlog2_up, &sum_down, Dir::Up);
        let hi = self.eng.sub(&hi_partial, &t_lo, Dir::Up);
        let lo_partial = self.eng.sub(&dlog2_down, &sum_up, Dir::Down);
        let lo = self.eng.sub(&lo_partial, &t_hi, Dir::Down);

        // estimate: same structure as the hypercubic tail but with the
        // one-dimensional constant, i.e. (1/4) pi^(-d/2) [z(s) - (d/8) z(s+1)]
        let s = half_integer(&self.eng, d as u64 + 2);
        let s1 = half_integer(&self.eng, d as u64 + 4);
        let a = self.eng.from_u64(terms as u64 + 1);
        let z0 = zeta::hurwitz_zeta_estimate(&mut self.eng, &s, &a, EULER_MACLAURIN_ORDER)?;
        let z1 = zeta::hurwitz_zeta_estimate(&mut self.eng, &s1, &a, EULER_MACLAURIN_ORDER)?;
        let pi = self.eng.pi(Dir::Near);
        let exp = half_integer(&self.eng, d as u64);
        let pi_pow = self.eng.pow(&pi, &exp, Dir::Near);
        let one = self.eng.from_u64(1);
        let inv = self.eng.div(&one, &pi_pow, Dir::Near);
        let quarter_inv = shift_exponent(&inv, -2);
        let d_eighth = exact_eighth(&self.eng, d as u64);
        let corr = self.eng.mul(&d_eighth, &z1, Dir::Near);
        let inner = self.eng.sub(&z0, &corr, Dir::Near);
        let t_est = self.eng.mul(&quarter_inv, &inner, Dir::Near);

        let ln2_near = self.eng.ln_2(Dir::Near);
        let dlog2 = self.eng.mul(&d_f, &ln2_near, Dir::Near);
        let sum_near = self.eng.from_rational(&sum, Dir::Near);
        let est_partial = self.eng.sub(&dlog2, &sum_near, Dir::Near);
        let estimate = self.eng.sub(&est_partial, &t_est, Dir::Near);

        let certified = CertifiedInterval::new(lo, hi, Rigor::Proven, String::new());
        debug_assert!(certified.contains(&estimate));
        Ok(EntropyResult {
            lattice: spec,
            estimate,
            certified,
            terms_used: terms,
            precision_bits: self.eng.bits(),
            tail_method: TailMethod::ZetaIntegral,
        })
    }
}

/// `n/2` exactly.
fn half_integer(eng: &Engine, n: u64) -> BigFloat {
    shift_exponent(&eng.from_u64(n), -1)
}

/// `n/8` exactly.
fn exact_eighth(eng: &Engine, n: u64) -> BigFloat {
    shift_exponent(&eng.from_u64(n), -3)
}

/// Multiply by `2^delta` (exact).
fn shift_exponent(x: &BigFloat, delta: i32) -> BigFloat {
    let mut y = x.clone();
    if !y.is_zero() {
        let e = y.exponent().expect("finite");
        y.set_exponent(e + delta);
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn partial_sum_examples() {
        let mut cache = WalkCountCache::new();
        let t3 = cache.build_counts(3, 2).unwrap();
        assert_eq!(partial_sum(3, 1, &t3).unwrap(), rat(1, 12));
        assert_eq!(partial_sum(3, 2, &t3).unwrap(), rat(29, 288));
        let t2 = cache.build_counts(2, 1).unwrap();
        assert_eq!(partial_sum(2, 1, &t2).unwrap(), rat(1, 8));
        assert!(matches!(
            partial_sum(3, 5, &t3),
            Err(Error::OutOfRange(_))
        ));
    }

    #[test]
    fn bcc_partial_sum_first_term() {
        // (1/2) p_1(2)^d / 2 = 2^(-d-2)
        assert_eq!(bcc_partial_sum(3, 1).unwrap(), rat(1, 32));
        assert_eq!(bcc_partial_sum(4, 1).unwrap(), rat(1, 64));
        // second term adds (1/2)(3/8)^d/4
        let s2 = bcc_partial_sum(3, 2).unwrap();
        assert_eq!(s2, rat(1, 32) + rat(27, 512) / rat(8, 1));
    }

    #[test]
    fn upper_bound_one_dimension_single_term() {
        // log 2 - 1/4, rounded upward
        let mut comp = EntropyComputer::new(64);
        let got = comp.upper_bound_h(1, 1).unwrap();
        let eng = comp.engine();
        let two = eng.from_u64(2);
        let ln2_up = eng.ln(&two, Dir::Up);
        let quarter = eng.from_rational(&rat(1, 4), Dir::Down);
        let expect = eng.sub(&ln2_up, &quarter, Dir::Up);
        assert_eq!(got, expect);
    }

    #[test]
    fn h4_below_two_after_thirteen_terms() {
        let mut comp = EntropyComputer::new(128);
        let upper = comp.upper_bound_h(4, 13).unwrap();
        let two = comp.engine().from_u64(2);
        assert!(upper < two, "upper bound {}", Engine::to_f64(&upper));
        // and 12 terms do not suffice
        let upper12 = comp.upper_bound_h(4, 12).unwrap();
        assert!(upper12 > two);
    }

    #[test]
    fn tail_upper_covers_whole_series() {
        // With zero terms kept, the bound must cover the entire series
        // log(2d) - h_d. For d = 3 that is log 6 - 1.6733893… = 0.1183702….
        let mut comp = EntropyComputer::new(128);
        let (tail, rigor) = comp.tail_upper(3, 0).unwrap();
        assert_eq!(rigor, Rigor::Proven);
        let whole = comp.engine().parse("0.118370266").unwrap();
        assert!(tail >= whole);
        let not_crazy = comp.engine().parse("1.0").unwrap();
        assert!(tail < not_crazy);
    }

    #[test]
    fn tail_upper_rigor_flag() {
        let mut comp = EntropyComputer::new(128);
        assert_eq!(comp.tail_upper(6, 10).unwrap().1, Rigor::Proven);
        assert_eq!(comp.tail_upper(7, 10).unwrap().1, Rigor::Conditional);
    }

    #[test]
    fn estimate_tail_between_zero_and_upper() {
        let mut comp = EntropyComputer::new(128);
        for d in [2u32, 3, 5] {
            let est = comp.estimate_tail(d, 50).unwrap();
            let (up, _) = comp.tail_upper(d, 50).unwrap();
            assert!(est > comp.engine().zero());
            assert!(est < up, "estimate should be below the certified bound");
        }
    }

    #[test]
    fn one_dimensional_interval_contains_zero() {
        // h_1 = 0 exactly (a path has one spanning tree).
        let mut comp = EntropyComputer::new(64);
        for terms in [1usize, 10, 100] {
            let r = comp
                .compute_entropy(LatticeSpec::hypercubic(1), terms)
                .unwrap();
            let zero = comp.engine().zero();
            assert!(
                r.certified.contains(&zero),
                "zero escapes interval at K={terms}: [{}, {}]",
                Engine::to_f64(r.certified.lo()),
                Engine::to_f64(r.certified.hi())
            );
            assert!(r.certified.contains(&r.estimate));
        }
    }

    #[test]
    fn two_dimensional_interval_contains_catalan_value() {
        // h_2 = 4G/pi.
        let mut comp = EntropyComputer::new(192);
        let g = zeta::catalan(comp.engine());
        let pi = comp.engine().pi(Dir::Near);
        let four = comp.engine().from_u64(4);
        let eng = comp.engine();
        let four_g = eng.mul(&four, &g, Dir::Near);
        let h2 = eng.div(&four_g, &pi, Dir::Near);
        for terms in [10usize, 100] {
            let r = comp
                .compute_entropy(LatticeSpec::hypercubic(2), terms)
                .unwrap();
            assert!(r.certified.contains(&h2), "4G/pi escapes at K={terms}");
        }
    }

    #[test]
    fn intervals_nest_as_terms_grow() {
        let mut comp = EntropyComputer::new(128);
        for d in [1u32, 2, 3, 5] {
            let coarse = comp.compute_entropy(LatticeSpec::hypercubic(d), 20).unwrap();
            let fine = comp.compute_entropy(LatticeSpec::hypercubic(d), 200).unwrap();
            assert!(
                coarse.certified.contains_interval(&fine.certified),
                "interval at K=200 escapes K=20 interval for d={d}"
            );
            assert!(fine.certified.hi() <= coarse.certified.hi());
        }
    }

    #[test]
    fn bcc_interval_sane() {
        let mut comp = EntropyComputer::new(128);
        let r = comp.compute_entropy(LatticeSpec::bcc(3), 200).unwrap();
        assert_eq!(r.certified.rigor(), Rigor::Proven);
        assert!(r.certified.contains(&r.estimate));
        // h3_bcc = 1.99019141… per the published bounds
        let reference = comp.engine().parse("1.9901914178").unwrap();
        assert!(r.certified.contains(&reference));
        let width = r.certified.width(comp.engine());
        let loose = comp.engine().parse("1e-4").unwrap();
        assert!(width < loose);
    }

    #[test]
    fn conditional_rigor_for_high_dimension() {
        let mut comp = EntropyComputer::new(128);
        let r = comp.compute_entropy(LatticeSpec::hypercubic(9), 30).unwrap();
        assert_eq!(r.certified.rigor(), Rigor::Conditional);
        assert!(r.certified.condition_note().contains("verified exactly"));
        assert!(r.certified.contains(&r.estimate));
    }

    #[test]
    fn invalid_specs_rejected() {
        let mut comp = EntropyComputer::new(64);
        assert!(matches!(
            comp.compute_entropy(LatticeSpec::bcc(1), 10),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            comp.compute_entropy(LatticeSpec::hypercubic(0), 10),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            comp.compute_entropy(LatticeSpec::hypercubic(3), 0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn return_bound_holds_in_range() {
        let mut cache = WalkCountCache::new();
        for d in 1..=4u32 {
            let t = cache.build_counts(d, 60).unwrap();
            let failures = verify_return_bound(&t, 60).unwrap();
            assert!(failures.is_empty(), "bound failed for d={d}: {failures:?}");
        }
    }

    #[test]
    fn record_round_trips() {
        let mut comp = EntropyComputer::new(128);
        let r = comp.compute_entropy(LatticeSpec::hypercubic(3), 50).unwrap();
        let rec = r.to_record(comp.engine());
        assert_eq!(rec.family, "hypercubic");
        assert_eq!(rec.d, 3);
        assert_eq!(rec.k_terms, 50);
        assert!(!rec.truncated, "decimal strings must round-trip");
        let eng = comp.engine();
        let lo_back = eng.parse(&rec.lo).unwrap();
        assert_eq!(&lo_back, r.certified.lo());
    }
}
