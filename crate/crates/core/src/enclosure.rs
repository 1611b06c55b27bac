//! Dyadic interval enclosures with outward (directed) rounding.
//!
//! A [`RealEnclosure`] stores two integer mantissas sharing one binary scale:
//! the enclosed value lies in `[lo / 2^scale, hi / 2^scale]`. Every operation
//! rounds the lower endpoint toward −∞ and the upper endpoint toward +∞, so an
//! enclosure produced from enclosures of the inputs always contains the exact
//! result. No floating point is involved anywhere.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, One, Signed, ToPrimitive};

/// Rounding direction for a single endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    Down,
    Up,
}

pub(crate) fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    debug_assert!(b.is_positive());
    a.div_floor(b)
}

pub(crate) fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    debug_assert!(b.is_positive());
    -((-a).div_floor(b))
}

pub(crate) fn div_round(a: &BigInt, b: &BigInt, mode: Rounding) -> BigInt {
    match mode {
        Rounding::Down => floor_div(a, b),
        Rounding::Up => ceil_div(a, b),
    }
}

pub(crate) fn pow2(k: u32) -> BigInt {
    BigInt::one() << k as usize
}

/// `floor(a / 2^k)`.
pub(crate) fn shr_floor(a: &BigInt, k: u32) -> BigInt {
    if k == 0 {
        return a.clone();
    }
    if a.sign() != Sign::Minus {
        a >> k as usize
    } else {
        floor_div(a, &pow2(k))
    }
}

/// `ceil(a / 2^k)`.
pub(crate) fn shr_ceil(a: &BigInt, k: u32) -> BigInt {
    -shr_floor(&-a, k)
}

/// `floor(r * 2^scale)` or `ceil(r * 2^scale)`.
pub(crate) fn scale_rational(r: &BigRational, scale: u32, mode: Rounding) -> BigInt {
    let num = r.numer() << scale as usize;
    div_round(&num, r.denom(), mode)
}

/// Number of bits in `|a|` (0 for zero).
pub(crate) fn bit_len(a: &BigInt) -> u64 {
    a.bits()
}

/// Interval `[lo, hi] / 2^scale` that provably contains some real number.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RealEnclosure {
    lo: BigInt,
    hi: BigInt,
    scale: u32,
}

impl RealEnclosure {
    /// Panics if `lo > hi`.
    pub fn new(lo: BigInt, hi: BigInt, scale: u32) -> Self {
        assert!(lo <= hi, "enclosure endpoints out of order");
        RealEnclosure { lo, hi, scale }
    }

    pub fn point(mantissa: BigInt, scale: u32) -> Self {
        RealEnclosure {
            lo: mantissa.clone(),
            hi: mantissa,
            scale,
        }
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self::point(n.into(), 0)
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    /// Smallest enclosure of `r` with endpoints at the given scale.
    pub fn from_rational(r: &BigRational, scale: u32) -> Self {
        RealEnclosure {
            lo: scale_rational(r, scale, Rounding::Down),
            hi: scale_rational(r, scale, Rounding::Up),
            scale,
        }
    }

    pub fn lo_mantissa(&self) -> &BigInt {
        &self.lo
    }

    pub fn hi_mantissa(&self) -> &BigInt {
        &self.hi
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn lower(&self) -> BigRational {
        BigRational::new(self.lo.clone(), pow2(self.scale))
    }

    pub fn upper(&self) -> BigRational {
        BigRational::new(self.hi.clone(), pow2(self.scale))
    }

    pub fn width(&self) -> BigRational {
        BigRational::new(&self.hi - &self.lo, pow2(self.scale))
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// `true` when the width is at most `2^-bits`.
    pub fn width_at_most(&self, bits: u32) -> bool {
        let w = &self.hi - &self.lo;
        if self.scale >= bits {
            w <= pow2(self.scale - bits)
        } else {
            (w << (bits - self.scale) as usize) <= BigInt::one()
        }
    }

    /// Re-express at another scale, rounding outward when the scale shrinks.
    pub fn with_scale(&self, scale: u32) -> Self {
        match scale.cmp(&self.scale) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let k = (scale - self.scale) as usize;
                RealEnclosure {
                    lo: &self.lo << k,
                    hi: &self.hi << k,
                    scale,
                }
            }
            Ordering::Less => {
                let k = self.scale - scale;
                RealEnclosure {
                    lo: shr_floor(&self.lo, k),
                    hi: shr_ceil(&self.hi, k),
                    scale,
                }
            }
        }
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let s = self.scale.max(other.scale);
        (self.with_scale(s), other.with_scale(s))
    }

    /// Order by lower endpoint.
    pub fn cmp_lower(&self, other: &Self) -> Ordering {
        if self.scale == other.scale {
            return self.lo.cmp(&other.lo);
        }
        let (a, b) = self.aligned(other);
        a.lo.cmp(&b.lo)
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lower() <= x && x <= &self.upper()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        let (a, b) = self.aligned(other);
        a.lo <= b.hi && b.lo <= a.hi
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        let (a, b) = self.aligned(other);
        b.lo <= a.lo && a.hi <= b.hi
    }

    /// Every point of `self` is strictly below every point of `other`.
    pub fn certainly_lt(&self, other: &Self) -> bool {
        let (a, b) = self.aligned(other);
        a.hi < b.lo
    }

    /// Every point of `self` is at most every point of `other`.
    pub fn certainly_le(&self, other: &Self) -> bool {
        let (a, b) = self.aligned(other);
        a.hi <= b.lo
    }

    pub fn certainly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    /// Integer part, when both endpoints agree on it.
    pub fn floor(&self) -> Option<BigInt> {
        let a = shr_floor(&self.lo, self.scale);
        let b = shr_floor(&self.hi, self.scale);
        (a == b).then_some(a)
    }

    pub fn neg(&self) -> Self {
        RealEnclosure {
            lo: -&self.hi,
            hi: -&self.lo,
            scale: self.scale,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        RealEnclosure {
            lo: a.lo + b.lo,
            hi: a.hi + b.hi,
            scale: a.scale,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn add_integer(&self, n: &BigInt) -> Self {
        let shifted = n << self.scale as usize;
        RealEnclosure {
            lo: &self.lo + &shifted,
            hi: &self.hi + shifted,
            scale: self.scale,
        }
    }

    pub fn mul_integer(&self, n: &BigInt) -> Self {
        let (a, b) = (&self.lo * n, &self.hi * n);
        if n.is_negative() {
            RealEnclosure::new(b, a, self.scale)
        } else {
            RealEnclosure::new(a, b, self.scale)
        }
    }

    /// Product with a rational, rounded outward at the current scale.
    pub fn mul_rational(&self, r: &BigRational) -> Self {
        let (a, b) = (&self.lo * r.numer(), &self.hi * r.numer());
        let (a, b) = if r.is_negative() { (b, a) } else { (a, b) };
        RealEnclosure {
            lo: floor_div(&a, r.denom()),
            hi: ceil_div(&b, r.denom()),
            scale: self.scale,
        }
    }

    /// Interval product, rounded outward to the larger of the two scales.
    pub fn mul(&self, other: &Self) -> Self {
        let cands = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = cands.iter().min().unwrap();
        let hi = cands.iter().max().unwrap();
        let s = self.scale.max(other.scale);
        let drop = self.scale + other.scale - s;
        RealEnclosure {
            lo: shr_floor(lo, drop),
            hi: shr_ceil(hi, drop),
            scale: s,
        }
    }

    /// `1 / self` at the given scale. `None` if the interval touches zero.
    pub fn recip(&self, scale: u32) -> Option<Self> {
        if self.contains_zero() {
            return None;
        }
        if self.lo.is_negative() {
            return Some(self.neg().recip(scale)?.neg());
        }
        let num = pow2(self.scale + scale);
        Some(RealEnclosure {
            lo: floor_div(&num, &self.hi),
            hi: ceil_div(&num, &self.lo),
            scale,
        })
    }

    pub fn div(&self, other: &Self, scale: u32) -> Option<Self> {
        Some(self.mul(&other.recip(scale.max(self.scale))?).with_scale(scale.max(self.scale)))
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        RealEnclosure {
            lo: a.lo.min(b.lo),
            hi: a.hi.max(b.hi),
            scale: a.scale,
        }
    }

    /// Enclosure of `min(x, y)` for `x ∈ self`, `y ∈ other`.
    pub fn min(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        RealEnclosure {
            lo: a.lo.min(b.lo),
            hi: a.hi.min(b.hi),
            scale: a.scale,
        }
    }

    /// Enclosure of `max(x, y)`.
    pub fn max(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        RealEnclosure {
            lo: a.lo.max(b.lo),
            hi: a.hi.max(b.hi),
            scale: a.scale,
        }
    }

    /// Midpoint approximation in any float type.
    pub fn approx<F: Float + FromPrimitive>(&self) -> F {
        let mid = BigRational::new(&self.lo + &self.hi, pow2(self.scale + 1));
        F::from_f64(mid.to_f64().unwrap_or(f64::NAN)).unwrap_or_else(F::nan)
    }

    /// Lower endpoint as an `f64` that is never above the true endpoint.
    pub fn lower_f64(&self) -> f64 {
        dyadic_to_f64(&self.lo, self.scale, Rounding::Down)
    }

    /// Upper endpoint as an `f64` that is never below the true endpoint.
    pub fn upper_f64(&self) -> f64 {
        dyadic_to_f64(&self.hi, self.scale, Rounding::Up)
    }
}

impl fmt::Display for RealEnclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            format_dyadic(&self.lo, self.scale, 15, Rounding::Down),
            format_dyadic(&self.hi, self.scale, 15, Rounding::Up)
        )
    }
}

/// Directed conversion of `m / 2^scale` to `f64`.
pub fn dyadic_to_f64(m: &BigInt, scale: u32, mode: Rounding) -> f64 {
    let exact = BigRational::new(m.clone(), pow2(scale));
    let mut f = exact.to_f64().unwrap_or(match m.sign() {
        Sign::Minus => f64::NEG_INFINITY,
        _ => f64::INFINITY,
    });
    if !f.is_finite() {
        return match mode {
            Rounding::Down if f > 0.0 => f64::MAX,
            Rounding::Up if f < 0.0 => f64::MIN,
            _ => f,
        };
    }
    let as_rat = |v: f64| BigRational::from_float(v).expect("finite float");
    match mode {
        Rounding::Down => {
            while as_rat(f) > exact {
                f = f.next_down();
            }
        }
        Rounding::Up => {
            while as_rat(f) < exact {
                f = f.next_up();
            }
        }
    }
    f
}

/// Fixed-point decimal rendering of `m / 2^scale` with `digits` fractional
/// digits, rounded in the requested direction.
pub fn format_dyadic(m: &BigInt, scale: u32, digits: u32, mode: Rounding) -> String {
    let ten = BigInt::from(10u32).pow(digits);
    let scaled = div_round(&(m * &ten), &pow2(scale), mode);
    let neg = scaled.is_negative();
    let abs = scaled.abs();
    let (int, frac) = abs.div_rem(&ten);
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    s.push_str(&int.to_string());
    if digits > 0 {
        s.push('.');
        let f = frac.to_string();
        for _ in f.len()..digits as usize {
            s.push('0');
        }
        s.push_str(&f);
    }
    s
}

/// Exact value of a finite `f64` as a rational.
pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn shifts_round_in_the_requested_direction() {
        let a = BigInt::from(-5);
        assert_eq!(shr_floor(&a, 1), BigInt::from(-3));
        assert_eq!(shr_ceil(&a, 1), BigInt::from(-2));
        assert_eq!(shr_floor(&BigInt::from(5), 1), BigInt::from(2));
        assert_eq!(shr_ceil(&BigInt::from(5), 1), BigInt::from(3));
        assert_eq!(shr_ceil(&BigInt::from(4), 1), BigInt::from(2));
    }

    #[test]
    fn rational_enclosure_contains_value() {
        let third = rat(1, 3);
        let e = RealEnclosure::from_rational(&third, 20);
        assert!(e.contains(&third));
        assert!(e.width_at_most(20));
        assert!(!e.is_point());
        let half = RealEnclosure::from_rational(&rat(1, 2), 4);
        assert!(half.is_point());
    }

    #[test]
    fn arithmetic_is_outward() {
        let a = RealEnclosure::from_rational(&rat(1, 3), 30);
        let b = RealEnclosure::from_rational(&rat(-2, 7), 25);
        let p = a.mul(&b);
        assert!(p.contains(&rat(-2, 21)));
        let s = a.add(&b);
        assert!(s.contains(&(rat(1, 3) - rat(2, 7))));
        let r = b.recip(40).unwrap();
        assert!(r.contains(&rat(-7, 2)));
        let q = a.div(&b, 40).unwrap();
        assert!(q.contains(&rat(-7, 6)));
        assert!(a.mul_rational(&rat(-3, 5)).contains(&rat(-1, 5)));
        assert!(RealEnclosure::from_integer(0).recip(10).is_none());
    }

    #[test]
    fn floor_needs_agreement() {
        let e = RealEnclosure::new(BigInt::from(-1), BigInt::from(1), 4);
        assert_eq!(e.floor(), None);
        let e = RealEnclosure::new(BigInt::from(17), BigInt::from(18), 4);
        assert_eq!(e.floor(), Some(BigInt::from(1)));
    }

    #[test]
    fn directed_float_conversion() {
        let third = RealEnclosure::from_rational(&rat(1, 3), 200);
        let lo = third.lower_f64();
        let hi = third.upper_f64();
        assert!(lo < hi);
        assert!(rational_from_f64(lo).unwrap() <= rat(1, 3));
        assert!(rational_from_f64(hi).unwrap() >= rat(1, 3));
        let exact = RealEnclosure::from_rational(&rat(3, 4), 8);
        assert_eq!(exact.lower_f64(), 0.75);
        assert_eq!(exact.upper_f64(), 0.75);
    }

    #[test]
    fn decimal_rendering() {
        let m = BigInt::from(-3);
        assert_eq!(format_dyadic(&m, 2, 3, Rounding::Down), "-0.750");
        let third = RealEnclosure::from_rational(&rat(1, 3), 64);
        assert_eq!(format_dyadic(third.lo_mantissa(), 64, 4, Rounding::Down), "0.3333");
        assert_eq!(format_dyadic(third.hi_mantissa(), 64, 4, Rounding::Up), "0.3334");
    }
}
