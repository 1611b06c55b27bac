//! Brute-force reference implementations.
//!
//! Deliberately naive: points are computed one by one with generic interval
//! operations, sorted, differenced and summed directly. Nothing here uses the
//! three-gap machinery or the fixed-grid term evaluator, so agreement between
//! the two paths is meaningful.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alpha::{IrrationalNumber, Shift};
use crate::elementary::{pow, pow_rational};
use crate::enclosure::RealEnclosure;
use crate::error::{Error, Result};

/// Working precision and seed for the oracles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub precision_bits: u32,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            precision_bits: 128,
            seed: 0x5eed,
        }
    }
}

impl OracleConfig {
    pub fn new(precision_bits: u32, seed: u64) -> Result<Self> {
        if precision_bits < 128 {
            return Err(Error::Domain(format!(
                "oracle precision {precision_bits} is below 128 bits"
            )));
        }
        Ok(OracleConfig { precision_bits, seed })
    }

    /// Deterministic generator for randomized grids.
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    /// `count` rationals in `[0, 1)` with denominators below `max_den`.
    pub fn random_rationals(&self, count: usize, max_den: u64) -> Vec<BigRational> {
        let mut rng = self.rng();
        (0..count)
            .map(|_| {
                let q = rng.gen_range(2..max_den.max(3));
                let p = rng.gen_range(0..q);
                BigRational::new(p.into(), q.into())
            })
            .collect()
    }
}

fn frac(x: &RealEnclosure, what: impl FnOnce() -> String) -> Result<RealEnclosure> {
    let fl = x
        .floor()
        .ok_or_else(|| Error::unresolved(format!("floor of {} is ambiguous", what())))?;
    Ok(x.sub(&RealEnclosure::from_integer(fl)))
}

/// `(n, {nα})` for `1 <= n <= N`, ascending, with certified separation.
pub fn sorted_points(alpha: &IrrationalNumber, n: u64, cfg: &OracleConfig) -> Result<Vec<(u64, RealEnclosure)>> {
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let a = alpha.eval_enclosure(cfg.precision_bits)?;
    let mut pts = Vec::with_capacity(n as usize);
    for m in 1..=n {
        let x = a.mul(&RealEnclosure::from_integer(m));
        pts.push((m, frac(&x, || format!("{m}α"))?));
    }
    pts.sort_by(|(_, x), (_, y)| x.cmp_lower(y));
    for w in pts.windows(2) {
        if !w[0].1.certainly_lt(&w[1].1) {
            return Err(Error::unresolved(format!(
                "{{{}α}} and {{{}α}} are not separated",
                w[0].0, w[1].0
            )));
        }
    }
    Ok(pts)
}

/// Distinct gap lengths with multiplicities, smallest first.
///
/// Gaps are the differences of consecutive sorted points together with the
/// two end intervals. Enclosures that overlap are treated as one value;
/// enclosures of different values must be certainly separated.
pub fn gap_multiset(alpha: &IrrationalNumber, n: u64, cfg: &OracleConfig) -> Result<Vec<(RealEnclosure, u64)>> {
    let pts = sorted_points(alpha, n, cfg)?;
    let mut gaps = Vec::with_capacity(pts.len() + 1);
    let mut prev = RealEnclosure::zero();
    for (_, p) in &pts {
        gaps.push(p.sub(&prev));
        prev = p.clone();
    }
    gaps.push(RealEnclosure::from_integer(1).sub(&prev));
    gaps.sort_by(|x, y| x.cmp_lower(y));
    let mut out: Vec<(RealEnclosure, u64)> = Vec::new();
    for g in gaps {
        match out.last_mut() {
            Some((h, c)) if h.overlaps(&g) => {
                *h = h.hull(&g);
                *c += 1;
            }
            _ => out.push((g, 1)),
        }
    }
    for w in out.windows(2) {
        if !w[0].0.certainly_lt(&w[1].0) {
            return Err(Error::unresolved("gap clusters are not separated".to_string()));
        }
    }
    Ok(out)
}

/// Which sum the brute-force path evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BruteKind {
    Frac,
    Dist,
    ExcludingResidue { modulus: u64 },
}

/// `Σ 1/(n^a {nα − γ}^b)` over `0 <= n <= N` (from 1 when `a > 0`),
/// skipping the minimiser of `{nα − γ}`.
pub fn sum_brute(
    alpha: &IrrationalNumber,
    gamma: &Shift,
    n: u64,
    a: &BigRational,
    b: &BigRational,
    cfg: &OracleConfig,
) -> Result<RealEnclosure> {
    sum_brute_kind(alpha, gamma, n, a, b, BruteKind::Frac, cfg)
}

/// General brute-force sum; see [`BruteKind`].
pub fn sum_brute_kind(
    alpha: &IrrationalNumber,
    gamma: &Shift,
    n: u64,
    a: &BigRational,
    b: &BigRational,
    kind: BruteKind,
    cfg: &OracleConfig,
) -> Result<RealEnclosure> {
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let bits = cfg.precision_bits;
    let al = alpha.eval_enclosure(bits + 64)?;
    let g = gamma.enclose(alpha, bits + 64)?;
    let one = RealEnclosure::from_integer(1);
    let mut vals: Vec<(u64, Option<RealEnclosure>)> = Vec::with_capacity(n as usize + 1);
    for m in 0..=n {
        if gamma.exact_zero_at(m) == Some(true) {
            vals.push((m, None));
            continue;
        }
        let x = al.mul(&RealEnclosure::from_integer(m)).sub(&g);
        let f = frac(&x, || format!("{m}α − γ"))?;
        let v = match kind {
            BruteKind::Dist => f.min(&one.sub(&f)),
            _ => f,
        };
        vals.push((m, Some(v)));
    }
    // the minimiser, ties resolved symbolically towards the smaller index
    let excluded = match vals.iter().find(|(_, v)| v.is_none()) {
        Some((m, _)) => *m,
        None => {
            let mut order: Vec<_> = vals.iter().map(|(m, v)| (*m, v.clone().unwrap())).collect();
            order.sort_by(|(i, x), (j, y)| x.upper().cmp(&y.upper()).then(i.cmp(j)));
            let (best, bv) = order[0].clone();
            let mut winner = best;
            for (m, v) in &order[1..] {
                if bv.certainly_lt(v) {
                    continue;
                }
                let tie = kind == BruteKind::Dist && gamma.distance_tie(best, *m) == Some(true);
                if tie {
                    winner = winner.min(*m);
                } else {
                    return Err(Error::unresolved(format!("minimum between n = {best} and n = {m}")));
                }
            }
            winner
        }
    };
    let start = if a.is_zero() { 0 } else { 1 };
    let neg_b = -b.clone();
    let neg_a = -a.clone();
    let mut total = RealEnclosure::zero();
    for (m, v) in vals.into_iter().filter(|(m, _)| *m >= start) {
        let skip = match kind {
            BruteKind::ExcludingResidue { modulus } => m % modulus == excluded % modulus,
            _ => m == excluded,
        };
        if skip {
            continue;
        }
        let v = v.ok_or_else(|| Error::unresolved(format!("term n = {m} is an exact pole")))?;
        let term = if b.is_one() {
            v.recip(bits)
                .ok_or_else(|| Error::unresolved(format!("term n = {m} is not bounded away from zero")))?
        } else {
            pow(&v, &neg_b, bits)?
        };
        let term = if a.is_zero() {
            term
        } else {
            term.mul(&pow_rational(&BigRational::from_integer(BigInt::from(m)), &neg_a, bits)?)
        };
        total = total.add(&term);
    }
    Ok(total)
}
