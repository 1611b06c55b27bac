//! Rigorous enclosures of reciprocal sums over `{nα − γ}`.
//!
//! All terms are evaluated on a common dyadic grid: `nα − γ` at scale `S`,
//! its reciprocal (or power) at output scale `T`. Mantissas are summed
//! exactly as integers, so the result does not depend on evaluation order.
//! When an enclosure is too wide, or an ordering cannot be certified, the
//! whole pass is repeated at twice the working precision.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::alpha::{IrrationalNumber, PrecisionPolicy, Shift};
use crate::cf::{convergent, largest_convergent_index};
use crate::elementary::{pow_dyadic, pow_rational};
use crate::enclosure::{ceil_div, floor_div, pow2, shr_ceil, shr_floor, RealEnclosure, Rounding};
use crate::error::{Error, Result};
use crate::report::Interval;

/// Default tolerance: `2^-30`.
pub const DEFAULT_TOL_BITS: u32 = 30;

/// Which sum is being evaluated.
#[derive(Debug, Clone, PartialEq)]
pub enum SumKind {
    /// `Σ_{n ≠ n'} 1/{nα − γ}`.
    Frac,
    /// `Σ_{n ≢ n' (mod q_K)} 1/{nα − γ}`.
    FracExcludingResidue,
    /// `Σ_{n ≠ n*} 1/‖nα − γ‖`.
    Dist,
    /// `Σ_{n ≠ n'} 1/{nα − γ}^b`.
    Power(BigRational),
    /// `Σ_{1 <= n <= N, n ≠ n'} 1/(n^a {nα − γ}^b)`.
    General { a: BigRational, b: BigRational },
}

impl SumKind {
    pub fn name(&self) -> &'static str {
        match self {
            SumKind::Frac => "frac",
            SumKind::FracExcludingResidue => "frac-excluding-residue",
            SumKind::Dist => "dist",
            SumKind::Power(_) => "power",
            SumKind::General { .. } => "general",
        }
    }

    /// Exponent `b` of the fractional part (1 unless a power sum).
    pub fn exponent(&self) -> BigRational {
        match self {
            SumKind::Power(b) | SumKind::General { b, .. } => b.clone(),
            _ => BigRational::one(),
        }
    }

    /// Weight exponent `a` (0 unless a general sum).
    pub fn weight(&self) -> BigRational {
        match self {
            SumKind::General { a, .. } => a.clone(),
            _ => BigRational::zero(),
        }
    }
}

/// Why an index (or residue class) is missing from a sum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Exclusion {
    /// The excluded minimiser (`n'` or `n*`).
    pub index: u64,
    /// For residue exclusion, every `n ≡ index (mod modulus)` is skipped.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
    pub reason: &'static str,
}

/// A certified sum together with the data that produced it.
#[derive(Debug, Clone)]
pub struct SumReport {
    pub alpha: IrrationalNumber,
    pub gamma: Shift,
    pub n: u64,
    pub kind: SumKind,
    pub excluded: Exclusion,
    /// The excluded term is exactly `1/0`.
    pub exact_hit: bool,
    pub value: RealEnclosure,
    pub term_count: u64,
    pub tol_bits: u32,
}

impl SumReport {
    pub fn to_json(&self) -> SumJson {
        SumJson {
            alpha: self.alpha.label().to_string(),
            gamma: self.gamma.to_string(),
            kind: self.kind.name(),
            n: self.n,
            a: self.kind.weight().to_string(),
            b: self.kind.exponent().to_string(),
            excluded: self.excluded.clone(),
            exact_hit: self.exact_hit,
            value: Interval::from(&self.value),
            term_count: self.term_count,
            tol: crate::enclosure::dyadic_to_f64(&BigInt::one(), self.tol_bits, Rounding::Up),
        }
    }
}

/// JSON form of a [`SumReport`].
#[derive(Debug, Clone, Serialize)]
pub struct SumJson {
    pub alpha: String,
    pub gamma: String,
    pub kind: &'static str,
    #[serde(rename = "N")]
    pub n: u64,
    pub a: String,
    pub b: String,
    pub excluded: Exclusion,
    pub exact_hit: bool,
    pub value: Interval,
    pub term_count: u64,
    pub tol: f64,
}

impl fmt::Display for SumReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} sum for α = {}, γ = {}, N = {}: {}",
            self.kind.name(),
            self.alpha,
            self.gamma,
            self.n,
            self.value
        )
    }
}

/// Outcome of one pass at fixed precision.
enum Pass<T> {
    Done(T),
    Refine(String),
}

/// `{nα − γ}` for `n = 0..=N` at scale `S`, as mantissa pairs.
struct FracTable {
    scale: u32,
    lo: Vec<BigInt>,
    hi: Vec<BigInt>,
    /// Index where `nα − γ` is exactly an integer.
    exact: Option<u64>,
}

impl FracTable {
    fn build(alpha: &IrrationalNumber, gamma: &Shift, n_max: u64, s: u32) -> Result<Pass<FracTable>> {
        let exact = gamma.exact_hit().filter(|&v| v <= n_max);
        let nbits = 64 - n_max.leading_zeros();
        let scale = s + nbits + 2;
        let a = alpha.eval_enclosure(scale)?.with_scale(scale);
        let g = gamma.enclose(alpha, scale)?.with_scale(scale);
        let one = pow2(scale);
        let len = n_max as usize + 1;
        let mut lo = Vec::with_capacity(len);
        let mut hi = Vec::with_capacity(len);
        let mut x_lo = -g.hi_mantissa().clone();
        let mut x_hi = -g.lo_mantissa().clone();
        for n in 0..=n_max {
            if n > 0 {
                x_lo += a.lo_mantissa();
                x_hi += a.hi_mantissa();
            }
            if exact == Some(n) {
                lo.push(BigInt::zero());
                hi.push(BigInt::zero());
                continue;
            }
            let f = shr_floor(&x_lo, scale);
            if shr_floor(&x_hi, scale) != f {
                return Ok(Pass::Refine(format!("{{{n}α − γ}} straddles an integer")));
            }
            let base = &f * &one;
            lo.push(&x_lo - &base);
            hi.push(&x_hi - &base);
        }
        Ok(Pass::Done(FracTable { scale, lo, hi, exact }))
    }

    fn one(&self) -> BigInt {
        pow2(self.scale)
    }

    /// `‖nα − γ‖` bounds.
    fn dist(&self, n: usize) -> (BigInt, BigInt) {
        let one = self.one();
        let (lo, hi) = (&self.lo[n], &self.hi[n]);
        let d_lo = lo.clone().min(&one - hi);
        let d_hi = hi.clone().min(&one - lo);
        (d_lo, d_hi)
    }

    /// Certified index of the smallest `{nα − γ}`.
    fn argmin_frac(&self) -> Pass<u64> {
        if let Some(v) = self.exact {
            return Pass::Done(v);
        }
        let best = (0..self.lo.len()).min_by(|&i, &j| self.hi[i].cmp(&self.hi[j])).unwrap();
        for j in 0..self.lo.len() {
            if j != best && self.lo[j] <= self.hi[best] {
                return Pass::Refine(format!("{{{best}α − γ}} and {{{j}α − γ}} not separated"));
            }
        }
        Pass::Done(best as u64)
    }

    /// Certified index of the smallest `‖nα − γ‖`, ties to the smallest `n`.
    fn argmin_dist(&self, gamma: &Shift) -> Pass<u64> {
        if let Some(v) = self.exact {
            return Pass::Done(v);
        }
        let d: Vec<_> = (0..self.lo.len()).map(|i| self.dist(i)).collect();
        let best = (0..d.len()).min_by(|&i, &j| d[i].1.cmp(&d[j].1).then(i.cmp(&j))).unwrap();
        let mut winner = best;
        for j in 0..d.len() {
            if j == best || d[j].0 > d[best].1 {
                continue;
            }
            match gamma.distance_tie(best as u64, j as u64) {
                Some(true) => winner = winner.min(j),
                _ => {
                    return Pass::Refine(format!("‖{best}α − γ‖ and ‖{j}α − γ‖ not separated"));
                }
            }
        }
        Pass::Done(winner as u64)
    }
}

/// Term evaluator: `(lo, hi)` mantissas at scale `T` of one term, or `None`
/// when the argument is not yet bounded away from zero.
type Term<'a> = dyn Fn(u64, &BigInt, &BigInt) -> Option<(BigInt, BigInt)> + 'a;

fn recip_term(s: u32, t: u32) -> impl Fn(u64, &BigInt, &BigInt) -> Option<(BigInt, BigInt)> {
    let num = pow2(s + t);
    move |_, lo: &BigInt, hi: &BigInt| {
        if !lo.is_positive() {
            return None;
        }
        Some((floor_div(&num, hi), ceil_div(&num, lo)))
    }
}

fn power_term(s: u32, t: u32, b: BigRational) -> impl Fn(u64, &BigInt, &BigInt) -> Option<(BigInt, BigInt)> {
    let neg_b = -b;
    move |_, lo: &BigInt, hi: &BigInt| {
        if !lo.is_positive() {
            return None;
        }
        Some((
            pow_dyadic(hi, s, &neg_b, t, Rounding::Down),
            pow_dyadic(lo, s, &neg_b, t, Rounding::Up),
        ))
    }
}

/// Multiply a term by `n^{-a}`, both at scale `t`.
fn weighted(
    inner: Box<Term<'_>>,
    a: BigRational,
    t: u32,
) -> impl Fn(u64, &BigInt, &BigInt) -> Option<(BigInt, BigInt)> + '_ {
    let neg_a = -a;
    move |n: u64, lo: &BigInt, hi: &BigInt| {
        let (v_lo, v_hi) = inner(n, lo, hi)?;
        let w = pow_rational(&BigRational::from_integer(n.into()), &neg_a, t).ok()?;
        Some((
            shr_floor(&(v_lo * w.lo_mantissa()), t),
            shr_ceil(&(v_hi * w.hi_mantissa()), t),
        ))
    }
}

struct Evaluated {
    excluded: Exclusion,
    exact_hit: bool,
    value: RealEnclosure,
    term_count: u64,
}

fn check_args(n: u64, kind: &SumKind) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let b = kind.exponent();
    if !b.is_positive() {
        return Err(Error::Domain(format!("exponent b = {b} must be positive")));
    }
    if kind.weight().is_negative() {
        return Err(Error::Domain("weight exponent a must be nonnegative".into()));
    }
    Ok(())
}

/// More working precision cannot help once it exceeds what a bare-enclosure
/// shift is known to.
fn precision_useful(gamma: &Shift, s: u32) -> bool {
    match gamma.resolution_limit() {
        Some(e) => s <= e.scale() + 64,
        None => true,
    }
}

/// Initial working precision: enough that error amplification by the
/// smallest retained denominators (about `N^{b+1}`) stays below the budget.
fn initial_bits(n: u64, tol_bits: u32, kind: &SumKind) -> u32 {
    let nb = 64 - n.leading_zeros();
    let b = kind.exponent().ceil().to_integer().to_u32().unwrap_or(8).min(64);
    tol_bits + (b + 3) * nb + 16
}

fn evaluate(alpha: &IrrationalNumber, gamma: &Shift, n: u64, kind: &SumKind, tol_bits: u32) -> Result<Evaluated> {
    check_args(n, kind)?;
    let policy = PrecisionPolicy::default();
    let nb = 64 - n.leading_zeros();
    // Per-term rounding of 2^-t over at most N + 1 terms stays below tol/8.
    let t = tol_bits + nb + 4;
    let residue_modulus = match kind {
        SumKind::FracExcludingResidue => {
            let k = largest_convergent_index(alpha, n)?;
            Some(convergent(alpha, k)?.q.to_u64().expect("q_K <= N"))
        }
        _ => None,
    };
    let mut last = String::from("no precision tried");
    for s in policy.schedule(initial_bits(n, tol_bits, kind)) {
        if !precision_useful(gamma, s) {
            break;
        }
        let table = match FracTable::build(alpha, gamma, n, s)? {
            Pass::Done(t) => t,
            Pass::Refine(why) => {
                last = why;
                continue;
            }
        };
        let pick = match kind {
            SumKind::Dist => table.argmin_dist(gamma),
            _ => table.argmin_frac(),
        };
        let excl = match pick {
            Pass::Done(v) => v,
            Pass::Refine(why) => {
                last = why;
                continue;
            }
        };
        let sc = table.scale;
        let term: Box<Term<'_>> = match kind {
            SumKind::Frac | SumKind::FracExcludingResidue | SumKind::Dist => Box::new(recip_term(sc, t)),
            SumKind::Power(b) => Box::new(power_term(sc, t, b.clone())),
            SumKind::General { a, b } => {
                let inner: Box<Term<'_>> = if b.is_one() {
                    Box::new(recip_term(sc, t))
                } else {
                    Box::new(power_term(sc, t, b.clone()))
                };
                Box::new(weighted(inner, a.clone(), t))
            }
        };
        let start = if matches!(kind, SumKind::General { .. }) { 1 } else { 0 };
        let skip = |m: u64| match residue_modulus {
            Some(q) => m % q == excl % q,
            None => m == excl,
        };
        let mut sum_lo = BigInt::zero();
        let mut sum_hi = BigInt::zero();
        let mut count = 0u64;
        let mut failed = None;
        for m in start..=n {
            if skip(m) {
                continue;
            }
            let i = m as usize;
            let (lo, hi) = match kind {
                SumKind::Dist => table.dist(i),
                _ => (table.lo[i].clone(), table.hi[i].clone()),
            };
            match term(m, &lo, &hi) {
                Some((a, b)) => {
                    sum_lo += a;
                    sum_hi += b;
                    count += 1;
                }
                None => {
                    failed = Some(m);
                    break;
                }
            }
        }
        if let Some(m) = failed {
            last = format!("term n = {m} is not bounded away from zero");
            continue;
        }
        let value = RealEnclosure::new(sum_lo, sum_hi, t);
        if !value.width_at_most(tol_bits) {
            last = format!("sum enclosure wider than 2^-{tol_bits}");
            continue;
        }
        let exact_hit = table.exact == Some(excl);
        let reason = match (kind, residue_modulus) {
            (SumKind::Dist, _) => "nearest-integer minimiser",
            (_, Some(_)) => "residue class of the minimiser",
            _ => "fractional-part minimiser",
        };
        return Ok(Evaluated {
            excluded: Exclusion {
                index: excl,
                modulus: residue_modulus,
                reason,
            },
            exact_hit,
            value,
            term_count: count,
        });
    }
    Err(Error::unresolved(format!(
        "{} sum for α = {alpha}, γ = {gamma}, N = {n}: {last}",
        kind.name()
    )))
}

fn run(alpha: &IrrationalNumber, gamma: &Shift, n: u64, kind: SumKind, tol_bits: u32) -> Result<SumReport> {
    let ev = evaluate(alpha, gamma, n, &kind, tol_bits)?;
    Ok(SumReport {
        alpha: alpha.clone(),
        gamma: gamma.clone(),
        n,
        kind,
        excluded: ev.excluded,
        exact_hit: ev.exact_hit,
        value: ev.value,
        term_count: ev.term_count,
        tol_bits,
    })
}

/// Re-evaluate a report's sum at another tolerance.
pub(crate) fn recompute(report: &SumReport, tol_bits: u32) -> Result<SumReport> {
    run(&report.alpha, &report.gamma, report.n, report.kind.clone(), tol_bits)
}

/// Index `n'` in `[0, N]` minimising `{nα − γ}`.
pub fn argmin_frac(alpha: &IrrationalNumber, gamma: &Shift, n: u64) -> Result<u64> {
    locate(alpha, gamma, n, false)
}

/// Index `n*` in `[0, N]` minimising `‖nα − γ‖`, ties to the smallest `n`.
pub fn argmin_dist(alpha: &IrrationalNumber, gamma: &Shift, n: u64) -> Result<u64> {
    locate(alpha, gamma, n, true)
}

fn locate(alpha: &IrrationalNumber, gamma: &Shift, n: u64, dist: bool) -> Result<u64> {
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let mut last = String::new();
    for s in PrecisionPolicy::default().schedule(64) {
        if !precision_useful(gamma, s) {
            break;
        }
        let table = match FracTable::build(alpha, gamma, n, s)? {
            Pass::Done(t) => t,
            Pass::Refine(why) => {
                last = why;
                continue;
            }
        };
        let pick = if dist {
            table.argmin_dist(gamma)
        } else {
            table.argmin_frac()
        };
        match pick {
            Pass::Done(v) => return Ok(v),
            Pass::Refine(why) => last = why,
        }
    }
    Err(Error::unresolved(last))
}

/// `T_N(α, γ)`: all `0 <= n <= N` except `n'`.
pub fn sum_reciprocal_frac(alpha: &IrrationalNumber, gamma: &Shift, n: u64, tol_bits: u32) -> Result<SumReport> {
    run(alpha, gamma, n, SumKind::Frac, tol_bits)
}

/// As [`sum_reciprocal_frac`] but skipping every `n ≡ n' (mod q_K)`.
pub fn sum_reciprocal_frac_excluding_residue(
    alpha: &IrrationalNumber,
    gamma: &Shift,
    n: u64,
    tol_bits: u32,
) -> Result<SumReport> {
    run(alpha, gamma, n, SumKind::FracExcludingResidue, tol_bits)
}

/// `Σ_{n ≠ n*} 1/‖nα − γ‖`.
pub fn sum_reciprocal_dist(alpha: &IrrationalNumber, gamma: &Shift, n: u64, tol_bits: u32) -> Result<SumReport> {
    run(alpha, gamma, n, SumKind::Dist, tol_bits)
}

/// `T^b_N(α, γ)`; `b = 1` is the plain sum.
pub fn sum_reciprocal_power(
    alpha: &IrrationalNumber,
    gamma: &Shift,
    n: u64,
    b: &BigRational,
    tol_bits: u32,
) -> Result<SumReport> {
    if b.is_one() {
        return sum_reciprocal_frac(alpha, gamma, n, tol_bits);
    }
    run(alpha, gamma, n, SumKind::Power(b.clone()), tol_bits)
}

/// `Σ 1/(n^a {nα − γ}^b)` over `1 <= n <= N`, `n ≠ n'`; `a = 0` is the power
/// sum (which includes `n = 0`).
pub fn sum_general(
    alpha: &IrrationalNumber,
    gamma: &Shift,
    n: u64,
    a: &BigRational,
    b: &BigRational,
    tol_bits: u32,
) -> Result<SumReport> {
    if a.is_zero() {
        return sum_reciprocal_power(alpha, gamma, n, b, tol_bits);
    }
    run(
        alpha,
        gamma,
        n,
        SumKind::General {
            a: a.clone(),
            b: b.clone(),
        },
        tol_bits,
    )
}

/// The index `n'` whose point `{n'α}` is the first at or after `{γ}` in
/// sorted order (or `0` when no point is), and `γ' = {n'α}` as an exact
/// combination. Termwise `1/{nα − γ} <= 1/{nα − γ'}` away from `n'`.
pub fn reduce_to_semihomogeneous(alpha: &IrrationalNumber, gamma: &Shift, n: u64) -> Result<(u64, Shift)> {
    let np = argmin_frac(alpha, gamma, n)?;
    Ok((np, Shift::fractional_multiple(alpha, np)?))
}

/// Reduce a rational to `[0, 1)`.
pub fn reduce_mod_one(r: &BigRational) -> BigRational {
    let fl = r.numer().div_floor(r.denom());
    r - BigRational::from_integer(fl)
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

    fn close(r: &SumReport, v: f64, tol: f64) {
        let got: f64 = r.value.approx();
        assert!((got - v).abs() < tol, "{r}: expected {v}");
        assert!(r.value.width_at_most(r.tol_bits));
    }

    #[test]
    fn minimisers() {
        let a = sqrt2m1();
        assert_eq!(argmin_frac(&a, &Shift::rational(1, 2), 4).unwrap(), 4);
        assert_eq!(argmin_frac(&a, &Shift::zero(), 7).unwrap(), 0);
        assert_eq!(argmin_frac(&a, &Shift::combination(rat(0, 1), rat(3, 1)), 4).unwrap(), 3);
        assert_eq!(argmin_dist(&a, &Shift::zero(), 4).unwrap(), 0);
        assert_eq!(argmin_dist(&a, &Shift::rational(1, 2), 4).unwrap(), 1);
        assert_eq!(argmin_dist(&a, &Shift::combination(rat(0, 1), rat(2, 1)), 4).unwrap(), 2);
    }

    #[test]
    fn distance_tie_goes_to_smaller_index() {
        // γ = 3α/2: ‖α − γ‖ = ‖2α − γ‖ = α/2, the minimum for N = 2
        let a = sqrt2m1();
        let g = Shift::combination(rat(0, 1), rat(3, 2));
        assert_eq!(argmin_dist(&a, &g, 2).unwrap(), 1);
    }

    #[test]
    fn plain_sums() {
        let a = sqrt2m1();
        let r = sum_reciprocal_frac(&a, &Shift::zero(), 4, 40).unwrap();
        close(&r, 9.265_048_437_046_768, 1e-10);
        assert_eq!((r.excluded.index, r.term_count, r.exact_hit), (0, 4, true));
        let r = sum_reciprocal_frac(&a, &Shift::rational(1, 2), 4, 40).unwrap();
        close(&r, 7.485_198_027_666_548, 1e-10);
        assert_eq!((r.excluded.index, r.exact_hit), (4, false));
        let r = sum_reciprocal_frac(&a, &Shift::zero(), 1, 40).unwrap();
        close(&r, 2.414_213_562_373_095, 1e-10);
    }

    #[test]
    fn residue_sums() {
        let a = sqrt2m1();
        let r = sum_reciprocal_frac_excluding_residue(&a, &Shift::zero(), 4, 40).unwrap();
        close(&r, 6.535_533_905_932_738, 1e-10);
        assert_eq!(r.excluded.modulus, Some(2));
        let r = sum_reciprocal_frac_excluding_residue(&a, &Shift::rational(1, 2), 4, 40).unwrap();
        close(&r, 2.440_382_527_811_582, 1e-10);
        let r = sum_reciprocal_frac_excluding_residue(&a, &Shift::zero(), 1, 40).unwrap();
        assert_eq!(r.term_count, 0);
        assert!(r.value.is_point() && r.value.contains(&BigRational::zero()));
    }

    #[test]
    fn distance_sums() {
        let a = sqrt2m1();
        let r = sum_reciprocal_dist(&a, &Shift::zero(), 4, 40).unwrap();
        close(&r, 15.278_174_593_052_023, 1e-10);
        let r = sum_reciprocal_dist(&a, &Shift::rational(1, 2), 4, 40).unwrap();
        close(&r, 15.305_778_868_443_31, 1e-10);
        assert_eq!(r.excluded.index, 1);
        let r = sum_reciprocal_dist(&a, &Shift::rational(1, 2), 2, 40).unwrap();
        close(&r, 5.044_815_499_854_966, 1e-10);
    }

    #[test]
    fn power_sums() {
        let a = sqrt2m1();
        let r = sum_reciprocal_power(&a, &Shift::zero(), 4, &rat(2, 1), 40).unwrap();
        close(&r, 26.588_540_637_210_57, 1e-9);
        let r = sum_reciprocal_power(&a, &Shift::zero(), 4, &rat(1, 2), 40).unwrap();
        close(&r, 5.916_420_503_497_496, 1e-10);
        let r = sum_reciprocal_power(&a, &Shift::zero(), 1, &rat(2, 1), 40).unwrap();
        close(&r, 5.828_427_124_746_19, 1e-10);
        // irrational-looking exponent takes the exp/ln route
        let r = sum_reciprocal_power(&a, &Shift::zero(), 4, &rat(37, 100), 30).unwrap();
        let direct: f64 = [1.0f64, 2.0, 3.0, 4.0]
            .iter()
            .map(|n| ((n * (std::f64::consts::SQRT_2 - 1.0)).fract()).powf(-0.37))
            .sum();
        close(&r, direct, 1e-8);
    }

    #[test]
    fn weighted_sums() {
        let a = sqrt2m1();
        let r = sum_general(&a, &Shift::zero(), 4, &rat(1, 1), &rat(1, 1), 40).unwrap();
        close(&r, 4.772_142_338_301_454, 1e-10);
        let r = sum_general(&a, &Shift::zero(), 2, &rat(2, 1), &rat(1, 1), 40).unwrap();
        close(&r, 2.715_990_257_669_732, 1e-10);
        let p = sum_general(&a, &Shift::zero(), 4, &rat(0, 1), &rat(2, 1), 40).unwrap();
        assert_eq!(p.kind, SumKind::Power(rat(2, 1)));
    }

    #[test]
    fn semihomogeneous_reduction() {
        let a = sqrt2m1();
        let (np, g) = reduce_to_semihomogeneous(&a, &Shift::rational(1, 2), 4).unwrap();
        assert_eq!(np, 4);
        let ge: f64 = g.enclose(&a, 60).unwrap().approx();
        assert!((ge - 0.656_854_249_492_380_2).abs() < 1e-12);
        let t1 = sum_reciprocal_frac(&a, &Shift::rational(1, 2), 4, 40).unwrap();
        let t2 = sum_reciprocal_frac(&a, &g, 4, 40).unwrap();
        close(&t2, 11.770_124_709_322_873, 1e-9);
        assert!(t1.value.certainly_le(&t2.value));
        assert_eq!(reduce_to_semihomogeneous(&a, &Shift::zero(), 4).unwrap().0, 0);
        let (np, g) = reduce_to_semihomogeneous(&a, &Shift::rational(9, 10), 4).unwrap();
        assert_eq!(np, 0);
        assert_eq!(g.exact_hit(), Some(0));
    }

    #[test]
    fn refinement_nests() {
        let a = sqrt2m1();
        let coarse = sum_reciprocal_frac(&a, &Shift::rational(1, 3), 50, 20).unwrap();
        let fine = sum_reciprocal_frac(&a, &Shift::rational(1, 3), 50, 21).unwrap();
        assert!(fine.value.overlaps(&coarse.value));
        assert!(fine.value.width_at_most(21));
    }

    #[test]
    fn coarse_shift_near_a_hit_is_unresolved() {
        let a = sqrt2m1();
        // a shift only known to 2^-20 sitting on {3α}
        let g = Shift::parse("dec:0.24264068711928515@20").unwrap();
        assert!(matches!(
            sum_reciprocal_frac(&a, &g, 4, 30),
            Err(Error::UnresolvedComparison(_))
        ));
    }

    #[test]
    fn bad_arguments() {
        let a = sqrt2m1();
        assert!(matches!(sum_reciprocal_frac(&a, &Shift::zero(), 0, 30), Err(Error::Domain(_))));
        assert!(matches!(
            sum_reciprocal_power(&a, &Shift::zero(), 3, &rat(-1, 1), 30),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn reduce_mod_one_works() {
        assert_eq!(reduce_mod_one(&rat(-1, 3)), rat(2, 3));
        assert_eq!(reduce_mod_one(&rat(7, 2)), rat(1, 2));
    }
}
