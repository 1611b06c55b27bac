//! Rigorous logarithms, exponentials and rational powers on enclosures.
//!
//! All series are evaluated in fixed point with every intermediate rounded
//! in the direction that keeps the final interval valid, and truncated
//! tails are bounded explicitly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::enclosure::{
    bit_len, ceil_div, div_round, floor_div, pow2, scale_rational, shr_ceil, shr_floor,
    RealEnclosure, Rounding,
};
use crate::error::{Error, Result};

/// Largest root degree handled by exact integer roots; bigger exponent
/// denominators go through `exp(b ln x)`.
const ROOT_DEGREE_LIMIT: u64 = 12;

const GUARD_BITS: u32 = 12;

/// Enclosure of `atanh(y)` for rational `0 <= y <= 1/3`, mantissas at scale `w`.
fn atanh_small(y: &BigRational, w: u32) -> (BigInt, BigInt) {
    debug_assert!(!y.is_negative() && y <= &BigRational::new(1.into(), 3.into()));
    if y.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    let y_lo = scale_rational(y, w, Rounding::Down);
    let y_hi = scale_rational(y, w, Rounding::Up);
    let y2_lo = shr_floor(&(&y_lo * &y_lo), w);
    let y2_hi = shr_ceil(&(&y_hi * &y_hi), w);
    let (mut pw_lo, mut pw_hi) = (y_lo, y_hi);
    let (mut sum_lo, mut sum_hi) = (BigInt::zero(), BigInt::zero());
    let mut j: u64 = 0;
    loop {
        let d = BigInt::from(2 * j + 1);
        sum_lo += floor_div(&pw_lo, &d);
        sum_hi += ceil_div(&pw_hi, &d);
        pw_lo = shr_floor(&(&pw_lo * &y2_lo), w);
        pw_hi = shr_ceil(&(&pw_hi * &y2_hi), w);
        j += 1;
        // remaining tail <= y^(2j+1) / (1 - y^2) <= 9/8 * pw_hi
        if pw_hi <= BigInt::from(4) {
            sum_hi += &pw_hi * 2 + 1;
            break;
        }
    }
    (sum_lo, sum_hi)
}

/// `ln 2` at scale `w`.
fn ln2_fixed(w: u32) -> (BigInt, BigInt) {
    let (lo, hi) = atanh_small(&BigRational::new(1.into(), 3.into()), w);
    (lo * 2, hi * 2)
}

/// Enclosure of `ln x` for a positive rational, endpoints at scale `bits`
/// with each endpoint within `2^-bits` of the exact value.
pub fn ln_rational(x: &BigRational, bits: u32) -> Result<RealEnclosure> {
    if !x.is_positive() {
        return Err(Error::Domain(format!("logarithm of non-positive value {x}")));
    }
    if x.is_one() {
        return Ok(RealEnclosure::point(BigInt::zero(), bits));
    }
    // x = 2^e * m with 1 <= m < 2
    let mut e: i64 = bit_len(x.numer()) as i64 - bit_len(x.denom()) as i64;
    let two = BigRational::from_integer(2.into());
    let scale_by = |e: i64| -> BigRational {
        if e >= 0 {
            x / BigRational::from_integer(pow2(e as u32))
        } else {
            x * BigRational::from_integer(pow2((-e) as u32))
        }
    };
    let mut m = scale_by(e);
    while m < BigRational::one() {
        e -= 1;
        m = scale_by(e);
    }
    while m >= two {
        e += 1;
        m = scale_by(e);
    }
    let y = (&m - BigRational::one()) / (&m + BigRational::one());
    let w = bits + GUARD_BITS + 64 - (e.unsigned_abs().leading_zeros());
    let (at_lo, at_hi) = atanh_small(&y, w);
    let (l2_lo, l2_hi) = ln2_fixed(w);
    let eb = BigInt::from(e);
    let (e_lo, e_hi) = if e >= 0 {
        (&eb * &l2_lo, &eb * &l2_hi)
    } else {
        (&eb * &l2_hi, &eb * &l2_lo)
    };
    let lo = at_lo * 2 + e_lo;
    let hi = at_hi * 2 + e_hi;
    Ok(RealEnclosure::new(lo, hi, w).with_scale(bits))
}

/// Enclosure of `exp(t)` for the dyadic point `t = m / 2^scale`.
fn exp_dyadic(m: &BigInt, scale: u32, bits: u32) -> RealEnclosure {
    if m.is_negative() {
        // exp(t) = 1 / exp(-t), and exp(-t) >= 1
        let inner = exp_dyadic(&-m, scale, bits + GUARD_BITS);
        return inner
            .recip(bits)
            .expect("exp is positive");
    }
    if m.is_zero() {
        return RealEnclosure::point(pow2(bits), bits);
    }
    // reduce so that u = t / 2^r <= 1/2
    let int_bits = bit_len(m) as i64 - scale as i64;
    let r: u32 = (int_bits + 1).max(0) as u32;
    // magnitude of the result: exp(t) < 2^(1.5 t) <= 2^(1.5 * 2^int_bits)
    let mag: u32 = if int_bits >= 0 {
        (3u64 << int_bits as u32).div_ceil(2).min(u32::MAX as u64 / 4) as u32
    } else {
        2
    };
    let w = (bits + GUARD_BITS + r + mag).max(scale + r);
    let u = m << (w - scale - r) as usize; // exact
    let one = pow2(w);
    let (mut sum_lo, mut sum_hi) = (one.clone(), one.clone());
    let (mut t_lo, mut t_hi) = (one.clone(), one);
    let mut j: u64 = 1;
    loop {
        let d = BigInt::from(j);
        t_lo = floor_div(&shr_floor(&(&t_lo * &u), w), &d);
        t_hi = ceil_div(&shr_ceil(&(&t_hi * &u), w), &d);
        sum_lo += &t_lo;
        sum_hi += &t_hi;
        j += 1;
        if t_hi <= BigInt::one() {
            // tail after term j is at most the last term since u <= 1/2
            sum_hi += &t_hi + 1;
            break;
        }
    }
    for _ in 0..r {
        sum_lo = shr_floor(&(&sum_lo * &sum_lo), w);
        sum_hi = shr_ceil(&(&sum_hi * &sum_hi), w);
    }
    RealEnclosure::new(sum_lo, sum_hi, w).with_scale(bits)
}

/// Enclosure of `exp(t)` for every `t` in the given interval.
pub fn exp(t: &RealEnclosure, bits: u32) -> RealEnclosure {
    let lo = exp_dyadic(t.lo_mantissa(), t.scale(), bits);
    let hi = exp_dyadic(t.hi_mantissa(), t.scale(), bits);
    RealEnclosure::new(lo.lo_mantissa().clone(), hi.hi_mantissa().clone(), bits)
}

/// `floor` or `ceil` of `(num/den)^(1/q) * 2^bits` for a positive rational.
fn root_scaled(num: &BigInt, den: &BigInt, q: u32, bits: u32, mode: Rounding) -> BigInt {
    let shifted = num << (bits as usize * q as usize);
    let z = div_round(&shifted, den, mode);
    let r = z.nth_root(q);
    match mode {
        Rounding::Down => r,
        Rounding::Up => {
            if Pow::pow(&r, q) < z {
                r + 1
            } else {
                r
            }
        }
    }
}

/// Directed `x^b` for a positive rational `x` and rational exponent `b`,
/// as a mantissa at scale `bits`. Uses exact integer roots.
fn pow_root(x: &BigRational, b: &BigRational, bits: u32, mode: Rounding) -> BigInt {
    let p = b.numer().abs().to_u32().expect("exponent numerator too large");
    let q = b.denom().to_u32().expect("exponent denominator too large");
    let (mut num, mut den) = (Pow::pow(x.numer(), p), Pow::pow(x.denom(), p));
    if b.is_negative() {
        std::mem::swap(&mut num, &mut den);
    }
    root_scaled(&num, &den, q, bits, mode)
}

fn use_roots(b: &BigRational) -> bool {
    b.denom().to_u64().is_some_and(|q| q <= ROOT_DEGREE_LIMIT)
        && b.numer().abs().to_u64().is_some_and(|p| p <= 64 * ROOT_DEGREE_LIMIT)
}

/// Enclosure of `x^b` for a positive rational `x`.
pub fn pow_rational(x: &BigRational, b: &BigRational, bits: u32) -> Result<RealEnclosure> {
    if !x.is_positive() {
        return Err(Error::Domain(format!("power of non-positive base {x}")));
    }
    if use_roots(b) {
        return Ok(RealEnclosure::new(
            pow_root(x, b, bits, Rounding::Down),
            pow_root(x, b, bits, Rounding::Up),
            bits,
        ));
    }
    let w = bits + GUARD_BITS + magnitude_bits(x, b);
    let l = ln_rational(x, w)?.mul_rational(b);
    Ok(exp(&l, w).with_scale(bits))
}

/// Extra working bits so that `exp(b ln x)` keeps absolute accuracy.
fn magnitude_bits(x: &BigRational, b: &BigRational) -> u32 {
    let lx = bit_len(x.numer()) as i64 - bit_len(x.denom()) as i64;
    let bf = b.to_f64().unwrap_or(1.0).abs();
    ((lx.unsigned_abs() as f64 + 1.0) * (bf + 1.0)).ceil() as u32 + 2
}

/// Enclosure of `x^b` for every positive `x` in the interval.
pub fn pow(x: &RealEnclosure, b: &BigRational, bits: u32) -> Result<RealEnclosure> {
    if b.is_zero() {
        return Ok(RealEnclosure::point(pow2(bits), bits));
    }
    if !x.certainly_positive() {
        return Err(Error::Domain("power of an interval that is not positive".into()));
    }
    let lo = pow_rational(&x.lower(), b, bits)?;
    let hi = pow_rational(&x.upper(), b, bits)?;
    Ok(if b.is_positive() {
        RealEnclosure::new(lo.lo_mantissa().clone(), hi.hi_mantissa().clone(), bits)
    } else {
        RealEnclosure::new(hi.lo_mantissa().clone(), lo.hi_mantissa().clone(), bits)
    })
}

/// Directed `(m / 2^scale)^b` for `m > 0`, as a mantissa at scale `bits`.
/// The hot path of the power sums; avoids building rationals when roots apply.
pub(crate) fn pow_dyadic(
    m: &BigInt,
    scale: u32,
    b: &BigRational,
    bits: u32,
    mode: Rounding,
) -> BigInt {
    debug_assert!(m.is_positive());
    if use_roots(b) {
        let p = b.numer().abs().to_u32().unwrap();
        let q = b.denom().to_u32().unwrap();
        let mp = Pow::pow(m, p);
        let dp = pow2(scale * p);
        let (num, den) = if b.is_negative() { (dp, mp) } else { (mp, dp) };
        return root_scaled(&num, &den, q, bits, mode);
    }
    let x = BigRational::new(m.clone(), pow2(scale));
    let e = pow_rational(&x, b, bits).expect("positive base");
    match mode {
        Rounding::Down => e.lo_mantissa().clone(),
        Rounding::Up => e.hi_mantissa().clone(),
    }
}

/// `true` if `x^b` would be a rational number we can represent exactly,
/// i.e. `b` is an integer.
pub fn is_integral_exponent(b: &BigRational) -> bool {
    b.is_integer()
}

/// Convenience used by tests and diagnostics: `ln` evaluated to `bits`.
pub fn ln_integer(n: u64, bits: u32) -> Result<RealEnclosure> {
    ln_rational(&BigRational::from_integer(n.into()), bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn close_to(e: &RealEnclosure, v: f64, tol: f64) {
        let lo = e.lower_f64();
        let hi = e.upper_f64();
        assert!(lo <= v + tol && v - tol <= hi, "{e} vs {v}");
    }

    #[test]
    fn ln_known_values() {
        let l2 = ln_integer(2, 80).unwrap();
        close_to(&l2, std::f64::consts::LN_2, 1e-15);
        assert!(l2.width_at_most(78));
        let l12 = ln_integer(12, 64).unwrap();
        close_to(&l12, 12f64.ln(), 1e-14);
        let third = ln_rational(&rat(1, 3), 64).unwrap();
        close_to(&third, (1.0f64 / 3.0).ln(), 1e-14);
        let one = ln_integer(1, 64).unwrap();
        assert!(one.is_point() && one.contains(&rat(0, 1)));
        assert!(ln_rational(&rat(0, 1), 10).is_err());
    }

    #[test]
    fn ln_enclosures_nest_under_refinement() {
        let a = ln_rational(&rat(1000, 7), 60).unwrap();
        let b = ln_rational(&rat(1000, 7), 240).unwrap();
        assert!(a.overlaps(&b));
        assert!(b.width_at_most(236));
    }

    #[test]
    fn exp_known_values() {
        let one = RealEnclosure::from_integer(1);
        let e = exp(&one, 70);
        close_to(&e, std::f64::consts::E, 1e-15);
        let m = RealEnclosure::from_rational(&rat(-5, 2), 40);
        close_to(&exp(&m, 70), (-2.5f64).exp(), 1e-15);
        let big = RealEnclosure::from_integer(20);
        close_to(&exp(&big, 40), 20f64.exp(), 1e-3);
    }

    #[test]
    fn exp_of_ln_round_trips() {
        let x = rat(22, 7);
        let l = ln_rational(&x, 100).unwrap();
        let back = exp(&l, 90);
        assert!(back.contains(&x));
    }

    #[test]
    fn roots_and_powers() {
        let s = pow_rational(&rat(2, 1), &rat(1, 2), 64).unwrap();
        close_to(&s, std::f64::consts::SQRT_2, 1e-17);
        assert!(s.width_at_most(63));
        let c = pow_rational(&rat(5, 1), &rat(3, 1), 10).unwrap();
        assert!(c.is_point() && c.contains(&rat(125, 1)));
        let inv = pow_rational(&rat(4, 1), &rat(-3, 2), 64).unwrap();
        assert!(inv.contains(&rat(1, 8)));
        // large denominator goes through exp/ln
        let odd = pow_rational(&rat(10, 1), &rat(37, 100), 60).unwrap();
        close_to(&odd, 10f64.powf(0.37), 1e-14);
        let odd_neg = pow_rational(&rat(3, 10), &rat(-123, 1000), 60).unwrap();
        close_to(&odd_neg, 0.3f64.powf(-0.123), 1e-14);
    }

    #[test]
    fn both_power_routes_agree() {
        // b = 5/12 is at the root-degree limit; 5/13 goes through exp/ln
        for (num, den) in [(5i64, 12i64), (7, 11)] {
            let b = rat(num, den);
            let root = pow_rational(&rat(17, 3), &b, 80).unwrap();
            let x = ln_rational(&rat(17, 3), 100).unwrap().mul_rational(&b);
            let via_exp = exp(&x, 80);
            assert!(root.overlaps(&via_exp));
        }
    }

    #[test]
    fn dyadic_power_matches_rational_power() {
        let m = BigInt::from(3u32) << 60usize; // 3 * 2^60 / 2^62 = 0.75
        let b = rat(-1, 2);
        let lo = pow_dyadic(&m, 62, &b, 64, Rounding::Down);
        let hi = pow_dyadic(&m, 62, &b, 64, Rounding::Up);
        let e = pow_rational(&rat(3, 4), &b, 64).unwrap();
        assert_eq!(&lo, e.lo_mantissa());
        assert_eq!(&hi, e.hi_mantissa());
    }
}
