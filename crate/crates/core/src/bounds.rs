//! Explicit upper bounds for the reciprocal sums, evaluated rigorously, and
//! the comparison harness that certifies `sum <= bound`.
//!
//! Logarithms are natural. With `K` the largest index such that `q_K <= N`:
//!
//! * `e1`: `4N(ln q_K + 1) + 2 q_{K+1}(ln(N/q_K) + 1)` bounds `T_N(α, γ)`;
//! * `e2`: `4N(ln q_K + 1)` bounds the sum with the whole residue class of
//!   `n'` modulo `q_K` removed;
//! * `dist`: `8N(ln q_K + 1) + 4 q_{K+1}(ln(N/q_K) + 2)` bounds the
//!   nearest-integer sum;
//! * `power-gt1`: `2^{1+b} ζ(b) N^b + 2^b ζ(b) q_{K+1}^b` for `b > 1`;
//! * `power-lt1`: `2^{1+b}/(1-b) N + 2^b/(1-b) q_{K+1}^b (N/q_K)^{1-b}` for `0 < b < 1`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::alpha::{IrrationalNumber, Shift};
use crate::cf::{convergent, largest_convergent_index};
use crate::elementary::{ln_rational, pow_rational};
use crate::enclosure::{RealEnclosure, Rounding};
use crate::error::{Error, Result};
use crate::report::{ser_bigint, Interval};
use crate::sums::{self, SumKind, SumReport};

/// Absolute accuracy used for bound values unless asked otherwise.
pub const DEFAULT_BOUND_BITS: u32 = 96;

/// Accuracy of the ζ factor inside power bounds. The bound only has to beat
/// the sum, so a relative error near `2^-56` is ample.
const ZETA_BITS_IN_BOUND: u32 = 56;

/// Which bound formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BoundKind {
    #[serde(rename = "e1")]
    E1,
    #[serde(rename = "e2")]
    E2,
    #[serde(rename = "dist")]
    Dist,
    #[serde(rename = "power-gt1")]
    PowerGt1,
    #[serde(rename = "power-lt1")]
    PowerLt1,
}

impl BoundKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::E1 => "e1",
            BoundKind::E2 => "e2",
            BoundKind::Dist => "dist",
            BoundKind::PowerGt1 => "power-gt1",
            BoundKind::PowerLt1 => "power-lt1",
        }
    }

    /// The sum this bound applies to.
    pub fn sum_kind(self, b: Option<&BigRational>) -> SumKind {
        match self {
            BoundKind::E1 => SumKind::Frac,
            BoundKind::E2 => SumKind::FracExcludingResidue,
            BoundKind::Dist => SumKind::Dist,
            BoundKind::PowerGt1 | BoundKind::PowerLt1 => {
                SumKind::Power(b.cloned().unwrap_or_else(BigRational::one))
            }
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A bound value with the continued-fraction data it depends on.
#[derive(Debug, Clone)]
pub struct BoundValue {
    pub kind: BoundKind,
    pub alpha: IrrationalNumber,
    pub n: u64,
    pub b: Option<BigRational>,
    pub k: usize,
    pub q_k: BigInt,
    pub q_k1: BigInt,
    pub value: RealEnclosure,
    pub bits: u32,
}

struct Setup {
    k: usize,
    q_k: BigInt,
    q_k1: BigInt,
    n: BigRational,
    ln_qk: RealEnclosure,
    ln_ratio: RealEnclosure,
}

fn setup(alpha: &IrrationalNumber, n: u64, bits: u32) -> Result<Setup> {
    let k = largest_convergent_index(alpha, n)?;
    let q_k = convergent(alpha, k)?.q;
    let q_k1 = convergent(alpha, k + 1)?.q;
    let nr = BigRational::from_integer(n.into());
    let ln_qk = ln_rational(&BigRational::from_integer(q_k.clone()), bits)?;
    let ln_ratio = ln_rational(&(&nr / BigRational::from_integer(q_k.clone())), bits)?;
    Ok(Setup {
        k,
        q_k,
        q_k1,
        n: nr,
        ln_qk,
        ln_ratio,
    })
}

fn int(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

/// `c1·N·(ln q_K + 1) + c2·q_{K+1}·(ln(N/q_K) + c3)`.
fn log_bound(st: &Setup, c1: i64, c2: i64, c3: i64) -> RealEnclosure {
    let one = BigInt::one();
    let first = st
        .ln_qk
        .add_integer(&one)
        .mul_rational(&(&st.n * BigRational::from_integer(c1.into())));
    if c2 == 0 {
        return first;
    }
    let second = st
        .ln_ratio
        .add_integer(&BigInt::from(c3))
        .mul_rational(&(int(&st.q_k1) * BigRational::from_integer(c2.into())));
    first.add(&second)
}

fn finish(kind: BoundKind, alpha: &IrrationalNumber, n: u64, b: Option<BigRational>, st: Setup, value: RealEnclosure, bits: u32) -> BoundValue {
    BoundValue {
        kind,
        alpha: alpha.clone(),
        n,
        b,
        k: st.k,
        q_k: st.q_k,
        q_k1: st.q_k1,
        value,
        bits,
    }
}

fn bound_log_kind(alpha: &IrrationalNumber, n: u64, kind: BoundKind, bits: u32) -> Result<BoundValue> {
    let st = setup(alpha, n, bits + 8)?;
    let v = match kind {
        BoundKind::E1 => log_bound(&st, 4, 2, 1),
        BoundKind::E2 => log_bound(&st, 4, 0, 0),
        BoundKind::Dist => log_bound(&st, 8, 4, 2),
        _ => unreachable!("power bounds are built separately"),
    };
    Ok(finish(kind, alpha, n, None, st, v, bits))
}

/// `4N(ln q_K + 1) + 2 q_{K+1}(ln(N/q_K) + 1)`.
pub fn bound_t(alpha: &IrrationalNumber, n: u64) -> Result<BoundValue> {
    bound_log_kind(alpha, n, BoundKind::E1, DEFAULT_BOUND_BITS)
}

/// `4N(ln q_K + 1)`.
pub fn bound_t_excluding(alpha: &IrrationalNumber, n: u64) -> Result<BoundValue> {
    bound_log_kind(alpha, n, BoundKind::E2, DEFAULT_BOUND_BITS)
}

/// `8N(ln q_K + 1) + 4 q_{K+1}(ln(N/q_K) + 2)`.
pub fn bound_dist(alpha: &IrrationalNumber, n: u64) -> Result<BoundValue> {
    bound_log_kind(alpha, n, BoundKind::Dist, DEFAULT_BOUND_BITS)
}

/// `ζ(b)` for rational `b > 1`, to width at most `2^-tol_bits`.
///
/// The partial sum `Σ_{j<M} j^{-b}` is completed by a tail bracket that is
/// rigorous because `t^{-b}` is convex and decreasing:
/// `∫_M^∞ t^{-b} dt + M^{-b}/2 <= Σ_{j>=M} j^{-b} <= ∫_{M-1/2}^∞ t^{-b} dt`.
pub fn zeta(b: &BigRational, tol_bits: u32) -> Result<RealEnclosure> {
    type Cache = Mutex<HashMap<(BigRational, u32), RealEnclosure>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (b.clone(), tol_bits);
    if let Some(hit) = cache.lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let e = zeta_uncached(b, tol_bits)?;
    cache.lock().unwrap().insert(key, e.clone());
    Ok(e)
}

fn zeta_uncached(b: &BigRational, tol_bits: u32) -> Result<RealEnclosure> {
    if b <= &BigRational::one() {
        return Err(Error::Domain(format!("ζ(b) needs b > 1, got {b}")));
    }
    let bf = b.to_f64().unwrap_or(2.0);
    // bracket width is about b(b+1) M^{-b-2} / 24
    let target = (tol_bits as f64 + 2.0) * std::f64::consts::LN_2;
    let est = ((bf * (bf + 1.0) / 24.0).ln() + target) / (bf + 2.0);
    let mut m = (est.exp().ceil() as u64).max(16);
    loop {
        let e = zeta_with_cut(b, m, tol_bits)?;
        if e.width_at_most(tol_bits) {
            return Ok(e);
        }
        m *= 2;
    }
}

fn zeta_with_cut(b: &BigRational, m: u64, tol_bits: u32) -> Result<RealEnclosure> {
    let w = tol_bits + 68 - m.leading_zeros() + 4;
    let neg_b = -b.clone();
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    for j in 1..m {
        let t = pow_rational(&BigRational::from_integer(j.into()), &neg_b, w)?;
        lo += t.lo_mantissa();
        hi += t.hi_mantissa();
    }
    let partial = RealEnclosure::new(lo, hi, w);
    let b_minus_one = b - BigRational::one();
    let inv = BigRational::one() / &b_minus_one;
    let one_minus_b = -b_minus_one;
    let mr = BigRational::from_integer(m.into());
    let tail_lo = pow_rational(&mr, &one_minus_b, w)?
        .mul_rational(&inv)
        .add(&pow_rational(&mr, &neg_b, w)?.mul_rational(&BigRational::new(1.into(), 2.into())));
    let half_below = &mr - BigRational::new(1.into(), 2.into());
    let tail_hi = pow_rational(&half_below, &one_minus_b, w)?.mul_rational(&inv);
    let tail = RealEnclosure::new(tail_lo.lo_mantissa().clone(), tail_hi.hi_mantissa().clone(), w);
    Ok(partial.add(&tail))
}

/// The power bound for `b > 0`, `b ≠ 1`; the branch follows the sign of `b - 1`.
pub fn bound_power(alpha: &IrrationalNumber, n: u64, b: &BigRational) -> Result<BoundValue> {
    bound_power_at(alpha, n, b, DEFAULT_BOUND_BITS)
}

fn bound_power_at(alpha: &IrrationalNumber, n: u64, b: &BigRational, bits: u32) -> Result<BoundValue> {
    if !b.is_positive() {
        return Err(Error::Domain(format!("exponent b = {b} must be positive")));
    }
    if b.is_one() {
        return Err(Error::Domain("b = 1 is covered by the e1 bound".into()));
    }
    let st = setup(alpha, n, bits)?;
    // all factors are at most about N^b; keep that many extra bits
    let w = bits + 16 + (64 - n.leading_zeros()) * (b.ceil().to_integer().to_u32().unwrap_or(4) + 1);
    let two = BigRational::from_integer(2.into());
    let one = BigRational::one();
    let pow2b = pow_rational(&two, b, w)?;
    let pow2b1 = pow2b.mul_integer(&BigInt::from(2));
    let qk1_b = pow_rational(&int(&st.q_k1), b, w)?;
    let (kind, value) = if b > &one {
        let z = zeta(b, ZETA_BITS_IN_BOUND)?;
        let n_b = pow_rational(&st.n, b, w)?;
        let first = pow2b1.mul(&z).mul(&n_b);
        let second = pow2b.mul(&z).mul(&qk1_b);
        (BoundKind::PowerGt1, first.add(&second))
    } else {
        let inv = &one / (&one - b);
        let ratio = &st.n / int(&st.q_k);
        let ratio_pow = pow_rational(&ratio, &(&one - b), w)?;
        let first = pow2b1.mul_rational(&(&inv * &st.n));
        let second = pow2b.mul_rational(&inv).mul(&qk1_b).mul(&ratio_pow);
        (BoundKind::PowerLt1, first.add(&second))
    };
    Ok(finish(kind, alpha, n, Some(b.clone()), st, value.with_scale(bits), bits))
}

/// Recompute a bound at a different accuracy.
fn recompute(bound: &BoundValue, bits: u32) -> Result<BoundValue> {
    match bound.kind {
        BoundKind::PowerGt1 | BoundKind::PowerLt1 => {
            bound_power_at(&bound.alpha, bound.n, bound.b.as_ref().expect("power bound has b"), bits)
        }
        k => bound_log_kind(&bound.alpha, bound.n, k, bits),
    }
}

/// Outcome of a rigorous comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Holds,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "Holds",
            Verdict::Inconclusive => "Inconclusive",
        })
    }
}

/// A verified (or not) inequality `sum <= bound`.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub sum: SumReport,
    pub bound: BoundValue,
    pub verdict: Verdict,
    /// `sum.upper / bound.lower`, rounded up.
    pub tightness: f64,
}

/// JSON form of a [`BoundReport`].
#[derive(Debug, Clone, Serialize)]
pub struct BoundJson {
    pub kind: BoundKind,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "qK", serialize_with = "ser_bigint")]
    pub q_k: BigInt,
    #[serde(rename = "qK1", serialize_with = "ser_bigint")]
    pub q_k1: BigInt,
    pub alpha: String,
    pub gamma: String,
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
    pub bound: Interval,
    pub sum: Interval,
    pub verdict: Verdict,
    pub tightness: f64,
}

impl BoundReport {
    pub fn to_json(&self) -> BoundJson {
        BoundJson {
            kind: self.bound.kind,
            k: self.bound.k,
            q_k: self.bound.q_k.clone(),
            q_k1: self.bound.q_k1.clone(),
            alpha: self.sum.alpha.label().to_string(),
            gamma: self.sum.gamma.to_string(),
            n: self.sum.n,
            b: self.bound.b.as_ref().map(|b| b.to_string()),
            bound: Interval::from(&self.bound.value),
            sum: Interval::from(&self.sum.value),
            verdict: self.verdict,
            tightness: self.tightness,
        }
    }
}

fn check_match(sum: &SumReport, bound: &BoundValue) -> Result<()> {
    if sum.alpha != bound.alpha {
        return Err(Error::ParameterMismatch(format!(
            "sum is for α = {}, bound for α = {}",
            sum.alpha, bound.alpha
        )));
    }
    if sum.n != bound.n {
        return Err(Error::ParameterMismatch(format!(
            "sum is for N = {}, bound for N = {}",
            sum.n, bound.n
        )));
    }
    let expected = bound.kind.sum_kind(bound.b.as_ref());
    if sum.kind != expected {
        return Err(Error::ParameterMismatch(format!(
            "a {} bound does not apply to a {} sum",
            bound.kind,
            sum.kind.name()
        )));
    }
    Ok(())
}

fn tightness(sum: &RealEnclosure, bound: &RealEnclosure) -> f64 {
    let lo = bound.lower();
    if !lo.is_positive() {
        return f64::INFINITY;
    }
    let r = sum.upper() / lo;
    let f = r.to_f64().unwrap_or(f64::INFINITY);
    let exact = |v: f64| BigRational::from_float(v);
    match exact(f) {
        Some(v) if v < r => f.next_up(),
        _ => f,
    }
}

fn compare(sum: &SumReport, bound: &BoundValue) -> BoundReport {
    let holds = sum.value.certainly_le(&bound.value);
    BoundReport {
        sum: sum.clone(),
        bound: bound.clone(),
        verdict: if holds { Verdict::Holds } else { Verdict::Inconclusive },
        tightness: tightness(&sum.value, &bound.value),
    }
}

/// Certify `sum <= bound`. A failed comparison is retried once with both
/// sides at twice the precision before being reported as inconclusive.
/// Refined values must overlap the ones passed in; if they do not, the
/// inputs are inconsistent and the first verdict stands.
pub fn verify(sum: &SumReport, bound: &BoundValue) -> Result<BoundReport> {
    check_match(sum, bound)?;
    let first = compare(sum, bound);
    if first.verdict == Verdict::Holds {
        return Ok(first);
    }
    let sum2 = sums::recompute(sum, sum.tol_bits * 2)?;
    let bound2 = recompute(bound, bound.bits * 2)?;
    if !sum2.value.overlaps(&sum.value) || !bound2.value.overlaps(&bound.value) {
        return Ok(first);
    }
    Ok(compare(&sum2, &bound2))
}

/// Compute the matching sum and bound and compare them.
pub fn verify_kind(
    alpha: &IrrationalNumber,
    gamma: &Shift,
    n: u64,
    kind: BoundKind,
    b: Option<&BigRational>,
    tol_bits: u32,
) -> Result<BoundReport> {
    let (sum, bound) = match kind {
        BoundKind::E1 => (sums::sum_reciprocal_frac(alpha, gamma, n, tol_bits)?, bound_t(alpha, n)?),
        BoundKind::E2 => (
            sums::sum_reciprocal_frac_excluding_residue(alpha, gamma, n, tol_bits)?,
            bound_t_excluding(alpha, n)?,
        ),
        BoundKind::Dist => (sums::sum_reciprocal_dist(alpha, gamma, n, tol_bits)?, bound_dist(alpha, n)?),
        BoundKind::PowerGt1 | BoundKind::PowerLt1 => {
            let b = b.ok_or_else(|| Error::Domain("power bound needs an exponent".into()))?;
            let bound = bound_power(alpha, n, b)?;
            (sums::sum_reciprocal_power(alpha, gamma, n, b, tol_bits)?, bound)
        }
    };
    verify(&sum, &bound)
}

/// Bound kind for a power exponent.
pub fn power_kind(b: &BigRational) -> BoundKind {
    if b > &BigRational::one() {
        BoundKind::PowerGt1
    } else {
        BoundKind::PowerLt1
    }
}

/// Lower endpoint of a bound as a directed decimal, for tables.
pub fn lower_decimal(e: &RealEnclosure, digits: u32) -> String {
    crate::enclosure::format_dyadic(e.lo_mantissa(), e.scale(), digits, Rounding::Down)
}

/// Upper endpoint of a bound as a directed decimal, for tables.
pub fn upper_decimal(e: &RealEnclosure, digits: u32) -> String {
    crate::enclosure::format_dyadic(e.hi_mantissa(), e.scale(), digits, Rounding::Up)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alpha::make_quadratic_surd;

    fn sqrt2m1() -> IrrationalNumber {
        make_quadratic_surd(-1, 1, 1, 2).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn near(e: &RealEnclosure, v: f64, tol: f64) {
        let got: f64 = e.approx();
        assert!((got - v).abs() <= tol, "{e} vs {v}");
    }

    #[test]
    fn logarithmic_bounds() {
        let a = sqrt2m1();
        let b = bound_t(&a, 4).unwrap();
        assert_eq!((b.k, b.q_k.clone(), b.q_k1.clone()), (1, 2.into(), 5.into()));
        near(&b.value, 44.021_826_694_558_58, 1e-12);
        near(&bound_t(&a, 12).unwrap().value, 225.275_519_189_824_01, 1e-11);
        near(&bound_t_excluding(&a, 4).unwrap().value, 27.090_354_888_959_125, 1e-12);
        near(&bound_t_excluding(&a, 12).unwrap().value, 167.275_519_189_824_01, 1e-11);
        near(&bound_dist(&a, 4).unwrap().value, 108.043_653_389_117_16, 1e-11);
        near(&bound_dist(&a, 12).unwrap().value, 566.551_038_379_648, 1e-10);
        assert!(b.value.width_at_most(DEFAULT_BOUND_BITS));
    }

    #[test]
    fn log_terms_vanish_when_q_is_one() {
        // N = 1, a_1 = 2: K = 0, bound 4 + 2 q_1 = 8 exactly
        let a = sqrt2m1();
        let b = bound_t(&a, 1).unwrap();
        assert!(b.value.is_point());
        assert!(b.value.contains(&rat(8, 1)));
        let e2 = bound_t_excluding(&a, 1).unwrap();
        assert!(e2.value.is_point() && e2.value.contains(&rat(4, 1)));
    }

    #[test]
    fn zeta_values() {
        let z2 = zeta(&rat(2, 1), 42).unwrap();
        near(&z2, std::f64::consts::PI.powi(2) / 6.0, 1e-12);
        assert!(z2.width_at_most(42));
        near(&zeta(&rat(3, 1), 40).unwrap(), 1.202_056_903_159_594_2, 1e-11);
        near(&zeta(&rat(3, 2), 40).unwrap(), 2.612_375_348_685_488, 1e-11);
        let coarse = zeta(&rat(3, 2), 20).unwrap();
        let fine = zeta(&rat(3, 2), 22).unwrap();
        assert!(fine.overlaps(&coarse));
        assert!(zeta(&rat(1, 1), 10).is_err());
    }

    #[test]
    fn power_bounds() {
        let a = sqrt2m1();
        let b2 = bound_power(&a, 4, &rat(2, 1)).unwrap();
        assert_eq!(b2.kind, BoundKind::PowerGt1);
        near(&b2.value, 375.044_967_241_395_6, 1e-10);
        let bh = bound_power(&a, 4, &rat(1, 2)).unwrap();
        assert_eq!(bh.kind, BoundKind::PowerLt1);
        near(&bh.value, 31.571_688_907_968_68, 1e-11);
        assert!(bound_power(&a, 4, &rat(1, 1)).is_err());
    }

    #[test]
    fn verification() {
        let a = sqrt2m1();
        let half = Shift::rational(1, 2);
        let r = verify_kind(&a, &half, 4, BoundKind::E1, None, 30).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert!((r.tightness - 0.170_033).abs() < 1e-5);
        let r = verify_kind(&a, &Shift::zero(), 4, BoundKind::Dist, None, 30).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert!((r.tightness - 0.141_411).abs() < 1e-5);
        let r = verify_kind(&a, &Shift::zero(), 4, BoundKind::PowerGt1, Some(&rat(2, 1)), 30).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn swapped_roles_are_inconclusive() {
        // a "bound" far below the sum: compare the e1 sum against a fake bound of 7.4
        let a = sqrt2m1();
        let sum = sums::sum_reciprocal_frac(&a, &Shift::zero(), 4, 30).unwrap();
        let mut fake = bound_t(&a, 4).unwrap();
        fake.value = RealEnclosure::from_rational(&rat(74, 10), 40);
        let r = compare(&sum, &fake);
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(r.tightness > 1.0);
    }

    #[test]
    fn mismatched_parameters() {
        let a = sqrt2m1();
        let sum = sums::sum_reciprocal_frac(&a, &Shift::zero(), 4, 30).unwrap();
        let wrong_n = bound_t(&a, 5).unwrap();
        assert!(matches!(verify(&sum, &wrong_n), Err(Error::ParameterMismatch(_))));
        let wrong_kind = bound_dist(&a, 4).unwrap();
        assert!(matches!(verify(&sum, &wrong_kind), Err(Error::ParameterMismatch(_))));
        let phi = make_quadratic_surd(1, 1, 2, 5).unwrap();
        assert!(matches!(
            verify(&sum, &bound_t(&phi, 4).unwrap()),
            Err(Error::ParameterMismatch(_))
        ));
    }

    #[test]
    fn residue_bound_is_below_full_bound() {
        let a = sqrt2m1();
        for n in [1, 4, 12, 100, 1000] {
            let e1 = bound_t(&a, n).unwrap();
            let e2 = bound_t_excluding(&a, n).unwrap();
            assert!(e2.value.certainly_le(&e1.value));
        }
    }
}
