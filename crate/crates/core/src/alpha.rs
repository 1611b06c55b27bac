//! Exact carriers for the rotation number α and the shift γ.
//!
//! α is either a quadratic surd `(a + b√d)/c`, for which every question is
//! decidable with integer arithmetic, or a continued-fraction digit stream
//! (a finite prefix or a generator), which pins α down to an interval that
//! shrinks as more digits become available. γ is a rational, a rational
//! combination `u + v·α`, or a bare enclosure.

use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cf::ConvergentTable;
use crate::enclosure::{pow2, scale_rational, RealEnclosure, Rounding};
use crate::error::{Error, Result};
use crate::RatForm;

/// Environment variable overriding the precision cap (in bits).
pub const PRECISION_CAP_ENV: &str = "RECIP_PRECISION_CAP";

const DEFAULT_START_BITS: u32 = 64;
const DEFAULT_CAP_BITS: u32 = 1 << 16;

/// Adaptive precision schedule: start low, double, give up at the cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub start_bits: u32,
    pub cap_bits: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        static CAP: OnceLock<u32> = OnceLock::new();
        let cap = *CAP.get_or_init(|| {
            std::env::var(PRECISION_CAP_ENV)
                .ok()
                .and_then(|v| v.trim().parse::<u32>().ok())
                .filter(|&v| v >= DEFAULT_START_BITS)
                .unwrap_or(DEFAULT_CAP_BITS)
        });
        PrecisionPolicy {
            start_bits: DEFAULT_START_BITS,
            cap_bits: cap,
        }
    }
}

impl PrecisionPolicy {
    /// Precisions to try, doubling from the start value; the first entry is
    /// raised to at least `min_bits` by doubling.
    pub fn schedule(&self, min_bits: u32) -> Vec<u32> {
        let mut b = self.start_bits.max(1);
        while b < min_bits && b < self.cap_bits {
            b = b.saturating_mul(2);
        }
        let mut out = Vec::new();
        while b <= self.cap_bits {
            out.push(b);
            b = match b.checked_mul(2) {
                Some(v) => v,
                None => break,
            };
        }
        if out.is_empty() {
            out.push(self.cap_bits);
        }
        out
    }
}

/// `(a + b√d) / c`, canonical: `gcd(a, b, c) = 1`, `c > 0`, `b ≠ 0`, `d` not a square.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl QuadraticSurd {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if d.is_negative() || d < BigInt::from(2) {
            if d.is_one() || d.is_zero() {
                return Err(Error::PerfectSquare(d));
            }
            return Err(Error::Domain(format!("radicand {d} must be at least 2")));
        }
        let root = d.sqrt();
        if &root * &root == d {
            return Err(Error::PerfectSquare(d));
        }
        if b.is_zero() {
            return Err(Error::RationalValue);
        }
        let (mut a, mut b, mut c) = (a, b, c);
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        Ok(QuadraticSurd { a, b, c, d })
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    fn negated(&self) -> Self {
        QuadraticSurd {
            a: -&self.a,
            b: -&self.b,
            c: self.c.clone(),
            d: self.d.clone(),
        }
    }

    /// Enclosure of width at most `2^-bits`, from one integer square root.
    fn enclose(&self, bits: u32) -> RealEnclosure {
        let s = bits + 1;
        let rad = &self.b * &self.b * &self.d;
        let r = (rad << (2 * s as usize)).sqrt(); // floor(|b|√d · 2^s)
        let a_s = &self.a << s as usize;
        let (num_lo, num_hi) = if self.b.is_positive() {
            (&a_s + &r, &a_s + &r + 1)
        } else {
            (&a_s - &r - 1, &a_s - &r)
        };
        RealEnclosure::new(
            crate::enclosure::floor_div(&num_lo, &self.c),
            crate::enclosure::ceil_div(&num_hi, &self.c),
            s,
        )
    }

    /// State `(P, Q, D)` with value `(P + √D)/Q` and `Q | D - P²`.
    pub(crate) fn cf_state(&self) -> (BigInt, BigInt, BigInt) {
        let dd = &self.b * &self.b * &self.d;
        let (mut p, mut q) = if self.b.is_positive() {
            (self.a.clone(), self.c.clone())
        } else {
            (-&self.a, -&self.c)
        };
        let mut dd = dd;
        if !(&dd - &p * &p).is_multiple_of(&q) {
            let qa = q.abs();
            p *= &qa;
            dd *= &q * &q;
            q *= &qa;
        }
        (p, q, dd)
    }
}

/// One step of the integer-only surd expansion: returns the partial quotient
/// of `(P + √D)/Q` and advances the state to the complete quotient's inverse.
pub(crate) fn surd_cf_step(p: &mut BigInt, q: &mut BigInt, d: &BigInt, isqrt_d: &BigInt) -> BigInt {
    let a = if q.is_positive() {
        (&*p + isqrt_d).div_floor(q)
    } else {
        (&*p + isqrt_d + 1i32).div_floor(q)
    };
    let p_next = &a * &*q - &*p;
    let q_next = (d - &p_next * &p_next) / &*q;
    *p = p_next;
    *q = q_next;
    a
}

type DigitFn = dyn Fn(usize) -> BigInt + Send + Sync;

/// Partial quotients `a_1, a_2, …` of a continued-fraction stream.
#[derive(Clone)]
pub enum DigitSource {
    Finite(Vec<BigInt>),
    /// `f(k)` returns `a_k` for `k >= 1`.
    Generated(Arc<DigitFn>),
}

impl fmt::Debug for DigitSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DigitSource::Finite(v) => f.debug_tuple("Finite").field(v).finish(),
            DigitSource::Generated(_) => f.write_str("Generated(..)"),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) enum Repr {
    Surd(QuadraticSurd),
    Stream { a0: BigInt, digits: DigitSource },
}

/// An irrational real number that can be queried exactly.
///
/// Clones share one append-only convergent cache.
#[derive(Clone)]
pub struct IrrationalNumber {
    repr: Arc<Repr>,
    label: Arc<str>,
    table: Arc<RwLock<ConvergentTable>>,
}

impl fmt::Debug for IrrationalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IrrationalNumber")
            .field("label", &self.label)
            .field("repr", &self.repr)
            .finish()
    }
}

impl fmt::Display for IrrationalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

impl PartialEq for IrrationalNumber {
    fn eq(&self, other: &Self) -> bool {
        match (&*self.repr, &*other.repr) {
            (Repr::Surd(a), Repr::Surd(b)) => a == b,
            (
                Repr::Stream {
                    a0: x0,
                    digits: DigitSource::Finite(xs),
                },
                Repr::Stream {
                    a0: y0,
                    digits: DigitSource::Finite(ys),
                },
            ) => x0 == y0 && xs == ys,
            _ => Arc::ptr_eq(&self.repr, &other.repr),
        }
    }
}

/// Build `(a + b√d)/c`.
pub fn make_quadratic_surd(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>, d: impl Into<BigInt>) -> Result<IrrationalNumber> {
    let s = QuadraticSurd::new(a.into(), b.into(), c.into(), d.into())?;
    Ok(IrrationalNumber::from_surd(s))
}

impl IrrationalNumber {
    fn from_repr(repr: Repr, label: String) -> Self {
        let table = ConvergentTable::new(&repr);
        IrrationalNumber {
            repr: Arc::new(repr),
            label: label.into(),
            table: Arc::new(RwLock::new(table)),
        }
    }

    pub fn from_surd(s: QuadraticSurd) -> Self {
        let label = format!("surd:{},{},{},{}", s.a, s.b, s.c, s.d);
        Self::from_repr(Repr::Surd(s), label)
    }

    /// Finite prefix `[a0; a1, …, am]`; all `a_k` for `k >= 1` must be positive.
    pub fn from_cf_prefix(a0: impl Into<BigInt>, digits: Vec<BigInt>) -> Result<Self> {
        let a0 = a0.into();
        if let Some(bad) = digits.iter().find(|d| !d.is_positive()) {
            return Err(Error::Domain(format!("partial quotient {bad} must be positive")));
        }
        let mut label = format!("cf:{a0}");
        for d in &digits {
            label.push(',');
            label.push_str(&d.to_string());
        }
        Ok(Self::from_repr(
            Repr::Stream {
                a0,
                digits: DigitSource::Finite(digits),
            },
            label,
        ))
    }

    /// Unbounded stream whose `k`-th partial quotient (`k >= 1`) is `f(k)`.
    /// `f` must return positive integers.
    pub fn from_cf_generator(
        name: &str,
        a0: impl Into<BigInt>,
        f: impl Fn(usize) -> BigInt + Send + Sync + 'static,
    ) -> Self {
        Self::from_repr(
            Repr::Stream {
                a0: a0.into(),
                digits: DigitSource::Generated(Arc::new(f)),
            },
            name.to_string(),
        )
    }

    /// Euler's number, `[2; 1, 2, 1, 1, 4, 1, 1, 6, …]`.
    pub fn euler() -> Self {
        Self::from_cf_generator("e", 2, |k| {
            if k % 3 == 2 {
                BigInt::from(2 * (k + 1) / 3)
            } else {
                BigInt::one()
            }
        })
    }

    /// Same number, different display label.
    pub fn with_label(mut self, label: &str) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub(crate) fn repr(&self) -> &Repr {
        &self.repr
    }

    pub(crate) fn table(&self) -> &RwLock<ConvergentTable> {
        &self.table
    }

    pub fn as_surd(&self) -> Option<&QuadraticSurd> {
        match &*self.repr {
            Repr::Surd(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_surd(&self) -> bool {
        self.as_surd().is_some()
    }

    /// `-α`. Streams are transformed digit-wise, which needs `a_1` (and `a_2`
    /// when `a_1 = 1`).
    pub fn negated(&self) -> Result<Self> {
        match &*self.repr {
            Repr::Surd(s) => Ok(Self::from_surd(s.negated())),
            Repr::Stream { a0, digits } => {
                let a0n = -a0 - 1;
                match digits {
                    DigitSource::Finite(ds) => {
                        if ds.is_empty() || (ds[0].is_one() && ds.len() < 2) {
                            return Err(Error::InsufficientDigits {
                                needed: 2,
                                available: ds.len(),
                            });
                        }
                        let mut out = Vec::with_capacity(ds.len() + 1);
                        if ds[0].is_one() {
                            out.push(&ds[1] + 1);
                            out.extend(ds[2..].iter().cloned());
                        } else {
                            out.push(BigInt::one());
                            out.push(&ds[0] - 1);
                            out.extend(ds[1..].iter().cloned());
                        }
                        Self::from_cf_prefix(a0n, out)
                    }
                    DigitSource::Generated(f) => {
                        let f = Arc::clone(f);
                        let first = f(1);
                        let name = format!("-({})", self.label);
                        if first.is_one() {
                            Ok(Self::from_cf_generator(&name, a0n, move |k| {
                                if k == 1 {
                                    f(2) + 1
                                } else {
                                    f(k + 1)
                                }
                            }))
                        } else {
                            Ok(Self::from_cf_generator(&name, a0n, move |k| match k {
                                1 => BigInt::one(),
                                2 => f(1) - 1,
                                _ => f(k - 1),
                            }))
                        }
                    }
                }
            }
        }
    }

    /// Enclosure of α of width at most `2^-bits`.
    pub fn eval_enclosure(&self, bits: u32) -> Result<RealEnclosure> {
        match &*self.repr {
            Repr::Surd(s) => Ok(s.enclose(bits)),
            Repr::Stream { .. } => {
                let e = self.stream_enclosure(Some(bits))?;
                if e.width_at_most(bits) {
                    Ok(e)
                } else {
                    let available = self.table.read().unwrap().digit_count().saturating_sub(1);
                    Err(Error::InsufficientDigits {
                        needed: available + 1,
                        available,
                    })
                }
            }
        }
    }

    /// Tightest enclosure available, never wider than needed for `2^-bits`
    /// when enough digits exist. Does not fail on short prefixes.
    pub fn best_enclosure(&self, bits: u32) -> RealEnclosure {
        match &*self.repr {
            Repr::Surd(s) => s.enclose(bits),
            Repr::Stream { .. } => self
                .stream_enclosure(Some(bits))
                .expect("a stream always has a_0"),
        }
    }

    /// Bracket `α ∈ (p_m/q_m, (p_m + p_{m-1})/(q_m + q_{m-1}))` for the first
    /// `m` whose bracket is narrow enough, or the last available one.
    fn stream_enclosure(&self, bits: Option<u32>) -> Result<RealEnclosure> {
        let target = bits.map(|b| b + 1);
        let mut m = 0usize;
        loop {
            let more = crate::cf::ensure_digits(self, m + 1).is_ok();
            let (p, q, pp, qq) = {
                let t = self.table.read().unwrap();
                let (p, q) = t.pq(m);
                let (pp, qq) = t.pq_prev(m);
                (p.clone(), q.clone(), pp, qq)
            };
            let den = &q * (&q + &qq);
            let narrow = match target {
                Some(t) => den.bits() > u64::from(t),
                None => false,
            };
            if narrow || !more {
                let scale = bits.unwrap_or(64) + 2;
                let x1 = BigRational::new(p.clone(), q.clone());
                let x2 = BigRational::new(&p + pp, &q + qq);
                let (lo, hi) = if x1 < x2 { (x1, x2) } else { (x2, x1) };
                return Ok(RealEnclosure::new(
                    scale_rational(&lo, scale, Rounding::Down),
                    scale_rational(&hi, scale, Rounding::Up),
                    scale,
                ));
            }
            m += 1;
        }
    }

    /// `⌊α⌋`.
    pub fn floor(&self) -> BigInt {
        crate::cf::ensure_digits(self, 0).expect("a_0 always exists");
        self.table.read().unwrap().digit(0).clone()
    }
}

/// Value of γ.
#[derive(Debug, Clone, PartialEq)]
pub enum Shift {
    Rational(BigRational),
    /// `u + v·α` with rational `u, v`.
    Combination(RatForm),
    /// Only an enclosure is known; exact coincidences cannot be decided.
    Enclosure { value: RealEnclosure, label: String },
}

impl Shift {
    pub fn zero() -> Self {
        Shift::Rational(BigRational::zero())
    }

    pub fn rational(num: i64, den: i64) -> Self {
        Shift::Rational(BigRational::new(num.into(), den.into()))
    }

    pub fn combination(u: BigRational, v: BigRational) -> Self {
        Shift::Combination(RatForm::new(u, v))
    }

    /// `{n α}` written as the exact combination `n α - ⌊n α⌋`.
    pub fn fractional_multiple(alpha: &IrrationalNumber, n: u64) -> Result<Self> {
        let fl = floor_of_multiple(alpha, n)?;
        Ok(Shift::Combination(RatForm::new(
            BigRational::from_integer(-fl),
            BigRational::from_integer(n.into()),
        )))
    }

    /// Symbolic form, when known.
    pub fn as_form(&self) -> Option<RatForm> {
        match self {
            Shift::Rational(r) => Some(RatForm::constant(r.clone())),
            Shift::Combination(f) => Some(f.clone()),
            Shift::Enclosure { .. } => None,
        }
    }

    /// Whether `nα − γ` is an integer. `None` when undecidable (bare enclosure).
    pub fn exact_zero_at(&self, n: u64) -> Option<bool> {
        let f = self.as_form()?;
        Some(f.coeff == BigRational::from_integer(n.into()) && f.constant.is_integer())
    }

    /// The unique `n >= 0` with `nα − γ ∈ ℤ`, if any (decidable case only).
    pub fn exact_hit(&self) -> Option<u64> {
        let f = self.as_form()?;
        if f.coeff.is_integer() && f.constant.is_integer() {
            f.coeff.to_integer().to_u64()
        } else {
            None
        }
    }

    /// Whether `‖n1 α − γ‖ = ‖n2 α − γ‖` for `n1 ≠ n2`; that happens iff
    /// `(n1 + n2)α − 2γ ∈ ℤ`. `None` when undecidable.
    pub fn distance_tie(&self, n1: u64, n2: u64) -> Option<bool> {
        if n1 == n2 {
            return Some(true);
        }
        let f = self.as_form()?;
        let two = BigRational::from_integer(2.into());
        Some(
            f.coeff.clone() * two.clone() == BigRational::from_integer((n1 + n2).into())
                && (f.constant * two).is_integer(),
        )
    }

    /// Enclosure of γ. For a bare enclosure the stored interval is returned as
    /// is, so its width may exceed `2^-bits`.
    pub fn enclose(&self, alpha: &IrrationalNumber, bits: u32) -> Result<RealEnclosure> {
        match self {
            Shift::Rational(r) => Ok(RealEnclosure::from_rational(r, bits)),
            Shift::Combination(f) => f.enclose(alpha, bits),
            Shift::Enclosure { value, .. } => Ok(value.clone()),
        }
    }

    /// Intrinsic uncertainty: `Some(bits)` means the shift is only known to
    /// within `2^-bits`.
    pub fn resolution_limit(&self) -> Option<&RealEnclosure> {
        match self {
            Shift::Enclosure { value, .. } => Some(value),
            _ => None,
        }
    }

    /// Parse `rat:p/q`, `lincomb:u,v` (meaning `u + vα`, rationals allowed)
    /// or `dec:<decimal>@<bits>`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec_t = spec.trim();
        let (kind, body) = spec_t
            .split_once(':')
            .ok_or_else(|| Error::parse(spec, "expected rat:, lincomb: or dec:"))?;
        match kind {
            "rat" => Ok(Shift::Rational(parse_rational(body)?)),
            "lincomb" => {
                let (u, v) = body
                    .split_once(',')
                    .ok_or_else(|| Error::parse(spec, "expected lincomb:u,v"))?;
                Ok(Shift::combination(parse_rational(u)?, parse_rational(v)?))
            }
            "dec" => {
                let (num, bits) = body
                    .split_once('@')
                    .ok_or_else(|| Error::parse(spec, "expected dec:<value>@<bits>"))?;
                let bits: u32 = bits
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(spec, "bad bit count"))?;
                let v = parse_rational(num)?;
                // radius 2^-bits around the decimal value
                let m_lo = scale_rational(&v, bits, Rounding::Down) - 1;
                let m_hi = scale_rational(&v, bits, Rounding::Up) + 1;
                Ok(Shift::Enclosure {
                    value: RealEnclosure::new(m_lo, m_hi, bits),
                    label: spec_t.to_string(),
                })
            }
            _ => Err(Error::parse(spec, "unknown shift kind")),
        }
    }
}

impl fmt::Display for Shift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shift::Rational(r) => write!(f, "rat:{r}"),
            Shift::Combination(c) => write!(f, "lincomb:{},{}", c.constant, c.coeff),
            Shift::Enclosure { label, .. } => f.write_str(label),
        }
    }
}

/// Parse an integer, a fraction `p/q`, or a decimal such as `-0.125` or `1e-3`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| Error::parse(s, "bad numerator"))?;
        let q: BigInt = q.trim().parse().map_err(|_| Error::parse(s, "bad denominator"))?;
        if q.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        return Ok(BigRational::new(p, q));
    }
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (
            &t[..i],
            t[i + 1..]
                .parse::<i32>()
                .map_err(|_| Error::parse(s, "bad exponent"))?,
        ),
        None => (t, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(Error::parse(s, "empty number"));
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(Error::parse(s, "not a number"));
    }
    let digits: BigInt = format!("{ip}{fp}0").parse::<BigInt>().unwrap() / 10;
    let mut r = BigRational::new(digits, BigInt::from(10).pow(fp.len() as u32));
    let ten = BigRational::from_integer(10.into());
    if exp > 0 {
        r *= num_traits::pow(ten, exp as usize);
    } else if exp < 0 {
        r /= num_traits::pow(ten, (-exp) as usize);
    }
    Ok(if neg { -r } else { r })
}

fn parse_int_list(body: &str, spec: &str) -> Result<Vec<BigInt>> {
    body.split(',')
        .map(|x| {
            x.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::parse(spec, format!("bad integer {x:?}")))
        })
        .collect()
}

/// Parse an α specification: `surd:a,b,c,d` for `(a + b√d)/c`,
/// `cf:a0,a1,…` for a finite prefix, or a preset (`phi`, `sqrt2`,
/// `sqrt2m1`, `sqrt3m1`, `e`).
pub fn parse_alpha(spec: &str) -> Result<IrrationalNumber> {
    let t = spec.trim();
    let preset = match t {
        "phi" => Some(make_quadratic_surd(1, 1, 2, 5)?),
        "sqrt2" => Some(make_quadratic_surd(0, 1, 1, 2)?),
        "sqrt2m1" => Some(make_quadratic_surd(-1, 1, 1, 2)?),
        "sqrt3m1" => Some(make_quadratic_surd(-1, 1, 1, 3)?),
        "e" => Some(IrrationalNumber::euler()),
        _ => None,
    };
    if let Some(p) = preset {
        return Ok(p.with_label(t));
    }
    let (kind, body) = t
        .split_once(':')
        .ok_or_else(|| Error::parse(spec, "expected surd:, cf: or a preset name"))?;
    match kind {
        "surd" => {
            let v = parse_int_list(body, spec)?;
            let [a, b, c, d]: [BigInt; 4] = v
                .try_into()
                .map_err(|_| Error::parse(spec, "surd needs exactly four integers a,b,c,d"))?;
            Ok(make_quadratic_surd(a, b, c, d)?.with_label(t))
        }
        "cf" => {
            let mut v = parse_int_list(body, spec)?;
            if v.is_empty() {
                return Err(Error::parse(spec, "empty prefix"));
            }
            let a0 = v.remove(0);
            Ok(IrrationalNumber::from_cf_prefix(a0, v)?.with_label(t))
        }
        _ => Err(Error::parse(spec, "unknown α kind")),
    }
}

/// `⌊nα⌋`, decided by refinement (never ambiguous since α is irrational).
pub fn floor_of_multiple(alpha: &IrrationalNumber, n: u64) -> Result<BigInt> {
    if n == 0 {
        return Ok(BigInt::zero());
    }
    let nb = BigInt::from(n);
    for bits in PrecisionPolicy::default().schedule(64) {
        let e = alpha.best_enclosure(bits + 64 - n.leading_zeros());
        if let Some(f) = e.mul_integer(&nb).floor() {
            return Ok(f);
        }
        if !alpha.is_surd() && !e.width_at_most(bits) {
            let available = alpha.table().read().unwrap().digit_count().saturating_sub(1);
            return Err(Error::InsufficientDigits {
                needed: available + 1,
                available,
            });
        }
    }
    Err(Error::unresolved(format!("floor({n}·α) at the precision cap")))
}

/// `{nα − γ}` either certified to be exactly zero or enclosed.
#[derive(Debug, Clone, PartialEq)]
pub enum FracPart {
    ExactZero,
    Enclosure(RealEnclosure),
}

impl FracPart {
    /// Enclosure view; an exact zero is the point `0`.
    pub fn to_enclosure(&self) -> RealEnclosure {
        match self {
            FracPart::ExactZero => RealEnclosure::zero(),
            FracPart::Enclosure(e) => e.clone(),
        }
    }
}

/// Fractional part of an enclosure, or `None` when it straddles an integer.
pub(crate) fn frac_of(e: &RealEnclosure) -> Option<RealEnclosure> {
    let fl = e.floor()?;
    Some(e.add_integer(&-fl))
}

/// `{nα − γ}` to width `2^-bits`.
pub fn frac_part(alpha: &IrrationalNumber, n: u64, gamma: &Shift, bits: u32) -> Result<FracPart> {
    if gamma.exact_zero_at(n) == Some(true) {
        return Ok(FracPart::ExactZero);
    }
    if let Some(limit) = gamma.resolution_limit() {
        if !limit.width_at_most(bits + 1) {
            return Err(Error::unresolved(format!(
                "shift {gamma} is too coarse for a 2^-{bits} enclosure of {{{n}α − γ}}"
            )));
        }
    }
    let nb = BigInt::from(n);
    let nbits = 64 - n.leading_zeros();
    let mut last_err = None;
    for s in PrecisionPolicy::default().schedule(bits + 2) {
        let a = alpha.eval_enclosure(s + nbits + 1)?;
        let g = gamma.enclose(alpha, s + 1)?;
        let x = a.mul_integer(&nb).sub(&g);
        if let Some(fr) = frac_of(&x) {
            if fr.width_at_most(bits) {
                return Ok(FracPart::Enclosure(fr));
            }
        }
        last_err = Some(Error::unresolved(format!(
            "{{{n}α − γ}} for γ = {gamma} at {s} bits"
        )));
        if gamma.resolution_limit().is_some() {
            break;
        }
    }
    Err(last_err.unwrap_or_else(|| Error::unresolved("precision cap reached")))
}

/// `2^-bits` as a rational, for messages and JSON.
pub fn tolerance_value(bits: u32) -> BigRational {
    BigRational::new(BigInt::one(), pow2(bits))
}
