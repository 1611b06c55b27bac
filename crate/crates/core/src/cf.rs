//! Continued-fraction expansion, convergents and approximation errors.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::alpha::{surd_cf_step, DigitSource, IrrationalNumber, Repr};
use crate::enclosure::RealEnclosure;
use crate::error::{Error, Result};
use crate::IntForm;

/// Append-only cache of partial quotients and convergents shared by all
/// clones of an [`IrrationalNumber`].
#[derive(Debug)]
pub(crate) struct ConvergentTable {
    digits: Vec<BigInt>,
    p: Vec<BigInt>,
    q: Vec<BigInt>,
    surd: Option<SurdState>,
}

#[derive(Debug)]
struct SurdState {
    p: BigInt,
    q: BigInt,
    d: BigInt,
    isqrt_d: BigInt,
}

impl ConvergentTable {
    pub(crate) fn new(repr: &Repr) -> Self {
        let surd = match repr {
            Repr::Surd(s) => {
                let (p, q, d) = s.cf_state();
                let isqrt_d = d.sqrt();
                Some(SurdState { p, q, d, isqrt_d })
            }
            Repr::Stream { .. } => None,
        };
        ConvergentTable {
            digits: Vec::new(),
            p: Vec::new(),
            q: Vec::new(),
            surd,
        }
    }

    /// Number of known partial quotients (`a_0` counts).
    pub(crate) fn digit_count(&self) -> usize {
        self.digits.len()
    }

    pub(crate) fn digit(&self, k: usize) -> &BigInt {
        &self.digits[k]
    }

    pub(crate) fn pq(&self, k: usize) -> (&BigInt, &BigInt) {
        (&self.p[k], &self.q[k])
    }

    /// `(p_{k-1}, q_{k-1})`, with `(p_{-1}, q_{-1}) = (1, 0)`.
    pub(crate) fn pq_prev(&self, k: usize) -> (BigInt, BigInt) {
        if k == 0 {
            (BigInt::one(), BigInt::zero())
        } else {
            (self.p[k - 1].clone(), self.q[k - 1].clone())
        }
    }

    fn push(&mut self, a: BigInt) {
        let k = self.digits.len();
        let (p, q) = if k == 0 {
            (a.clone(), BigInt::one())
        } else {
            let (pp, qp) = self.pq_prev(k - 1);
            (&a * &self.p[k - 1] + pp, &a * &self.q[k - 1] + qp)
        };
        self.digits.push(a);
        self.p.push(p);
        self.q.push(q);
    }
}

/// Make sure `a_0..=a_m` are cached.
pub(crate) fn ensure_digits(x: &IrrationalNumber, m: usize) -> Result<()> {
    if x.table().read().unwrap().digit_count() > m {
        return Ok(());
    }
    let mut t = x.table().write().unwrap();
    while t.digit_count() <= m {
        let k = t.digit_count();
        let a = match x.repr() {
            Repr::Surd(_) => {
                let st = t.surd.as_mut().expect("surd state");
                surd_cf_step(&mut st.p, &mut st.q, &st.d, &st.isqrt_d)
            }
            Repr::Stream { a0, digits } => {
                if k == 0 {
                    a0.clone()
                } else {
                    match digits {
                        DigitSource::Finite(ds) => match ds.get(k - 1) {
                            Some(d) => d.clone(),
                            None => {
                                return Err(Error::InsufficientDigits {
                                    needed: m,
                                    available: ds.len(),
                                })
                            }
                        },
                        DigitSource::Generated(f) => {
                            let d = f(k);
                            if !d.is_positive() {
                                return Err(Error::Domain(format!(
                                    "generated partial quotient a_{k} = {d} is not positive"
                                )));
                            }
                            d
                        }
                    }
                }
            }
        };
        t.push(a);
    }
    Ok(())
}

/// The convergent `p_k/q_k` together with the partial quotient `a_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Convergent {
    pub k: usize,
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub a: BigInt,
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub p: BigInt,
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub q: BigInt,
}

impl Convergent {
    /// `D_k = q_k α − p_k` as an exact form.
    pub fn error_form(&self) -> IntForm {
        IntForm::new(-&self.p, self.q.clone())
    }
}

/// `a_0, a_1, …, a_count`.
pub fn partial_quotients(x: &IrrationalNumber, count: usize) -> Result<Vec<BigInt>> {
    ensure_digits(x, count)?;
    let t = x.table().read().unwrap();
    Ok(t.digits[..=count].to_vec())
}

/// Convergents `k = 0, …, count − 1`.
pub fn convergents(x: &IrrationalNumber, count: usize) -> Result<Vec<Convergent>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    ensure_digits(x, count - 1)?;
    let t = x.table().read().unwrap();
    Ok((0..count)
        .map(|k| Convergent {
            k,
            a: t.digits[k].clone(),
            p: t.p[k].clone(),
            q: t.q[k].clone(),
        })
        .collect())
}

pub fn convergent(x: &IrrationalNumber, k: usize) -> Result<Convergent> {
    ensure_digits(x, k)?;
    let t = x.table().read().unwrap();
    Ok(Convergent {
        k,
        a: t.digits[k].clone(),
        p: t.p[k].clone(),
        q: t.q[k].clone(),
    })
}

/// `q_k` as a machine integer, when it fits.
pub fn denominator_u64(x: &IrrationalNumber, k: usize) -> Result<Option<u64>> {
    Ok(convergent(x, k)?.q.to_u64())
}

/// Exact form of `D_k = q_k α − p_k` and an enclosure of its value.
///
/// The enclosure has relative accuracy better than `2^-64` whenever α can be
/// evaluated finely enough; for a short digit prefix it is the tightest the
/// prefix allows.
pub fn approximation_error(x: &IrrationalNumber, k: usize) -> Result<(IntForm, RealEnclosure)> {
    let c = convergent(x, k)?;
    let bits = 72 + 2 * c.q.bits() as u32;
    approximation_error_at(x, &c, bits)
}

/// As [`approximation_error`] with an explicit absolute width target.
pub fn approximation_error_at(x: &IrrationalNumber, c: &Convergent, bits: u32) -> Result<(IntForm, RealEnclosure)> {
    let form = c.error_form();
    let extra = c.q.bits() as u32 + 1;
    let a = x.best_enclosure(bits + extra);
    Ok((form, a.mul_integer(&c.q).add_integer(&-&c.p)))
}

/// Largest `K` with `q_K <= n`; fails with a domain error for `n = 0`.
pub fn largest_convergent_index(x: &IrrationalNumber, n: u64) -> Result<usize> {
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let nb = BigInt::from(n);
    let mut k = 0usize;
    loop {
        ensure_digits(x, k + 1)?;
        let t = x.table().read().unwrap();
        if t.q[k + 1] > nb {
            return Ok(k);
        }
        k += 1;
    }
}

/// Index `k >= 0` with `q_k + q_{k−1} <= n < q_{k+1} + q_k`, taking
/// `q_{-1} = 0`. It exists and is unique for every `n >= 1`.
pub(crate) fn three_gap_index(x: &IrrationalNumber, n: u64) -> Result<usize> {
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let nb = BigInt::from(n);
    let mut k = 0usize;
    loop {
        ensure_digits(x, k + 1)?;
        let t = x.table().read().unwrap();
        if nb < &t.q[k + 1] + &t.q[k] {
            return Ok(k);
        }
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alpha::{make_quadratic_surd, parse_alpha};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn golden_ratio_digits() {
        let phi = make_quadratic_surd(1, 1, 2, 5).unwrap();
        assert_eq!(partial_quotients(&phi, 5).unwrap(), ints(&[1, 1, 1, 1, 1, 1]));
        let qs: Vec<_> = convergents(&phi, 6).unwrap().into_iter().map(|c| c.q).collect();
        assert_eq!(qs, ints(&[1, 1, 2, 3, 5, 8]));
    }

    #[test]
    fn sqrt2_minus_one_convergents() {
        let a = make_quadratic_surd(-1, 1, 1, 2).unwrap();
        assert_eq!(partial_quotients(&a, 4).unwrap(), ints(&[0, 2, 2, 2, 2]));
        let cs = convergents(&a, 4).unwrap();
        let pq: Vec<_> = cs.iter().map(|c| (c.p.clone(), c.q.clone())).collect();
        assert_eq!(
            pq,
            vec![
                (0.into(), 1.into()),
                (1.into(), 2.into()),
                (2.into(), 5.into()),
                (5.into(), 12.into())
            ]
        );
    }

    #[test]
    fn periodic_surds() {
        // √7 = [2; 1, 1, 1, 4, …]
        let s7 = make_quadratic_surd(0, 1, 1, 7).unwrap();
        assert_eq!(partial_quotients(&s7, 8).unwrap(), ints(&[2, 1, 1, 1, 4, 1, 1, 1, 4]));
        // (3 + √13)/2 = [3; 3, 3, …]
        let t = make_quadratic_surd(3, 1, 2, 13).unwrap();
        assert_eq!(partial_quotients(&t, 4).unwrap(), ints(&[3, 3, 3, 3, 3]));
        // negative value: −√2 = [−2; 1, 1, 2, 2, …]
        let m = make_quadratic_surd(0, -1, 1, 2).unwrap();
        assert_eq!(partial_quotients(&m, 5).unwrap(), ints(&[-2, 1, 1, 2, 2, 2]));
        // denominator not dividing D − P²: (1 + √3)/5
        let u = make_quadratic_surd(1, 1, 5, 3).unwrap();
        assert_eq!(
            partial_quotients(&u, 11).unwrap(),
            ints(&[0, 1, 1, 4, 1, 7, 1, 4, 1, 7, 1, 4])
        );
    }

    #[test]
    fn approximation_errors_alternate() {
        let a = make_quadratic_surd(-1, 1, 1, 2).unwrap();
        let (f1, e1) = approximation_error(&a, 1).unwrap();
        assert_eq!(f1, IntForm::new((-1).into(), 2.into()));
        assert!((e1.approx::<f64>() + 0.171_572_875_253_809_9).abs() < 1e-15);
        let (_, e2) = approximation_error(&a, 2).unwrap();
        assert!((e2.approx::<f64>() - 0.071_067_811_865_475_24).abs() < 1e-15);
        for k in 0..20 {
            let (_, e) = approximation_error(&a, k).unwrap();
            if k % 2 == 0 {
                assert!(e.certainly_positive());
            } else {
                assert!(e.neg().certainly_positive());
            }
        }
    }

    #[test]
    fn largest_index() {
        let a = make_quadratic_surd(-1, 1, 1, 2).unwrap();
        assert_eq!(largest_convergent_index(&a, 4).unwrap(), 1);
        assert_eq!(largest_convergent_index(&a, 5).unwrap(), 2);
        assert_eq!(largest_convergent_index(&a, 12).unwrap(), 3);
        assert!(largest_convergent_index(&a, 0).is_err());
        let phi = make_quadratic_surd(1, 1, 2, 5).unwrap();
        // q_0 = q_1 = 1: the largest such index is 1
        assert_eq!(largest_convergent_index(&phi, 1).unwrap(), 1);
    }

    #[test]
    fn prefix_exhaustion() {
        let x = parse_alpha("cf:0,3,5").unwrap();
        assert_eq!(partial_quotients(&x, 2).unwrap(), ints(&[0, 3, 5]));
        assert!(matches!(
            partial_quotients(&x, 3),
            Err(Error::InsufficientDigits { .. })
        ));
        assert!(matches!(
            largest_convergent_index(&x, 1000),
            Err(Error::InsufficientDigits { .. })
        ));
    }

    #[test]
    fn euler_digits() {
        let e = parse_alpha("e").unwrap();
        assert_eq!(
            partial_quotients(&e, 9).unwrap(),
            ints(&[2, 1, 2, 1, 1, 4, 1, 1, 6, 1])
        );
    }
}
