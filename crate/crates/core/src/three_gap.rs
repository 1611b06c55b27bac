//! Constructive three-distance theorem.
//!
//! For `N >= 1` there is a unique `k >= 0` with `q_k + q_{k-1} <= N < q_{k+1} + q_k`.
//! Writing `N = r q_k + q_{k-1} + s`, the points `0, {α}, …, {Nα}` cut the
//! circle into `N + 1` arcs of lengths `δ_A = |D_k|`,
//! `δ_B = |D_{k+1}| + (a_{k+1} - r)|D_k|` and `δ_C = δ_A + δ_B`, and the arc
//! starting at `{nα}` as well as the index of the next point are determined by
//! integer arithmetic on `n` alone.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::alpha::IrrationalNumber;
use crate::cf::{self, ensure_digits};
use crate::enclosure::RealEnclosure;
use crate::error::{Error, Result};
use crate::IntForm;

/// Which of the three gap lengths follows a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum GapClass {
    A,
    B,
    C,
}

impl fmt::Display for GapClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GapClass::A => "A",
            GapClass::B => "B",
            GapClass::C => "C",
        };
        f.write_str(s)
    }
}

/// The `(k, r, s)` data of `N` together with the three gap lengths and counts.
#[derive(Debug, Clone)]
pub struct ThreeGapDecomposition {
    alpha: IrrationalNumber,
    n: u64,
    k: usize,
    r: u64,
    s: u64,
    q_k: u64,
    q_prev: u64,
    a_next: BigInt,
    delta_a: IntForm,
    delta_b: IntForm,
    delta_c: IntForm,
    counts: [u64; 3],
}

fn signed(sign_negative: bool, x: u64) -> i128 {
    if sign_negative {
        -(x as i128)
    } else {
        x as i128
    }
}

/// `(-1)^k D_k = |D_k|` as a form, for `k >= -1` (index shifted by one).
fn abs_error_form(p: &BigInt, q: &BigInt, k_parity_odd: bool) -> IntForm {
    let d = IntForm::new(-p, q.clone());
    if k_parity_odd {
        -d
    } else {
        d
    }
}

/// Build the decomposition for `N >= 1`.
pub fn decompose(alpha: &IrrationalNumber, n: u64) -> Result<ThreeGapDecomposition> {
    let k = cf::three_gap_index(alpha, n)?;
    ensure_digits(alpha, k + 1)?;
    let t = alpha.table().read().unwrap();
    let (p_k, q_k) = t.pq(k);
    let (p_k1, q_k1) = t.pq(k + 1);
    let (_, q_prev) = t.pq_prev(k);
    let a_next = t.digit(k + 1).clone();
    let q_k_u = q_k.to_u64().expect("q_k <= N");
    let q_prev_u = q_prev.to_u64().expect("q_{k-1} <= N");
    let r = (n - q_prev_u) / q_k_u;
    let s = (n - q_prev_u) % q_k_u;
    let odd = k % 2 == 1;
    let delta_a = abs_error_form(p_k, q_k, odd);
    let delta_b = abs_error_form(p_k1, q_k1, !odd) + delta_a.scale(&(&a_next - BigInt::from(r)));
    let delta_c = delta_a.clone() + delta_b.clone();
    let counts = [n + 1 - q_k_u, s + 1, q_k_u - s - 1];
    drop(t);
    Ok(ThreeGapDecomposition {
        alpha: alpha.clone(),
        n,
        k,
        r,
        s,
        q_k: q_k_u,
        q_prev: q_prev_u,
        a_next,
        delta_a,
        delta_b,
        delta_c,
        counts,
    })
}

impl ThreeGapDecomposition {
    pub fn alpha(&self) -> &IrrationalNumber {
        &self.alpha
    }
    pub fn n(&self) -> u64 {
        self.n
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn r(&self) -> u64 {
        self.r
    }
    pub fn s(&self) -> u64 {
        self.s
    }
    pub fn q_k(&self) -> u64 {
        self.q_k
    }
    pub fn q_prev(&self) -> u64 {
        self.q_prev
    }
    /// `a_{k+1}`.
    pub fn a_next(&self) -> &BigInt {
        &self.a_next
    }

    pub fn delta(&self, class: GapClass) -> &IntForm {
        match class {
            GapClass::A => &self.delta_a,
            GapClass::B => &self.delta_b,
            GapClass::C => &self.delta_c,
        }
    }

    pub fn count(&self, class: GapClass) -> u64 {
        self.counts[class as usize]
    }

    /// Rigorous enclosure of a gap length, width at most `2^-bits`.
    pub fn delta_enclosure(&self, class: GapClass, bits: u32) -> Result<RealEnclosure> {
        self.delta(class).enclose(&self.alpha, bits)
    }

    /// `N_A δ_A + N_B δ_B + N_C δ_C` as an exact form; always `1 + 0α`.
    pub fn partition_form(&self) -> IntForm {
        [GapClass::A, GapClass::B, GapClass::C]
            .iter()
            .map(|&c| self.delta(c).scale(&BigInt::from(self.count(c))))
            .fold(IntForm::new(0.into(), 0.into()), |acc, f| acc + f)
    }

    /// Signed offsets `(-1)^k q_k` and `(-1)^{k-1}(q_{k-1} + r q_k)`.
    fn offsets(&self) -> (i128, i128) {
        let odd = self.k % 2 == 1;
        let a = signed(odd, self.q_k);
        let b = signed(!odd, self.q_prev + self.r * self.q_k);
        (a, b)
    }

    fn check(&self, n: u64) -> Result<()> {
        if n > self.n {
            Err(Error::OutOfRange {
                index: n,
                max: self.n,
            })
        } else {
            Ok(())
        }
    }

    /// Gap class of the arc that starts at `{nα}`.
    pub fn classify(&self, n: u64) -> Result<GapClass> {
        self.check(n)?;
        let (oa, ob) = self.offsets();
        let inside = |m: i128| (0..=self.n as i128).contains(&m);
        let n = n as i128;
        Ok(if inside(n + oa) {
            GapClass::A
        } else if inside(n + ob) {
            GapClass::B
        } else {
            GapClass::C
        })
    }

    /// Index of the point following `{nα}` on the circle (`0` after the last).
    pub fn step(&self, n: u64) -> Result<u64> {
        let class = self.classify(n)?;
        let (oa, ob) = self.offsets();
        let delta = match class {
            GapClass::A => oa,
            GapClass::B => ob,
            // (-1)^{k-1}(q_{k-1} + (r-1) q_k)
            GapClass::C => ob + oa,
        };
        let next = n as i128 + delta;
        debug_assert!((0..=self.n as i128).contains(&next));
        Ok(next as u64)
    }

    /// Length of the arc starting at `{nα}`, as an exact form.
    pub fn gap_after(&self, n: u64) -> Result<&IntForm> {
        Ok(self.delta(self.classify(n)?))
    }

    /// `n_1, …, n_N` with `0 < {n_1 α} < … < {n_N α}`.
    pub fn permutation(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.n as usize);
        let mut cur = 0u64;
        for _ in 0..self.n {
            cur = self.step(cur).expect("step stays in range");
            out.push(cur);
        }
        out
    }
}

/// `n_1, …, n_N` for α and `N`.
pub fn permutation(alpha: &IrrationalNumber, n: u64) -> Result<Vec<u64>> {
    Ok(decompose(alpha, n)?.permutation())
}

/// JSON view of a decomposition.
#[derive(Debug, Clone, Serialize)]
pub struct DecompositionReport {
    #[serde(rename = "N")]
    pub n: u64,
    pub k: usize,
    pub r: u64,
    pub s: u64,
    pub delta: GapTable<GapReport>,
    pub counts: GapTable<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GapTable<T> {
    #[serde(rename = "A")]
    pub a: T,
    #[serde(rename = "B")]
    pub b: T,
    #[serde(rename = "C")]
    pub c: T,
}

/// `u + vα` with a floating approximation.
#[derive(Debug, Clone, Serialize)]
pub struct GapReport {
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub u: BigInt,
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub v: BigInt,
    pub approx: f64,
}

impl ThreeGapDecomposition {
    pub fn report(&self) -> Result<DecompositionReport> {
        let gap = |c: GapClass| -> Result<GapReport> {
            let f = self.delta(c);
            Ok(GapReport {
                u: f.constant.clone(),
                v: f.coeff.clone(),
                approx: self.delta_enclosure(c, 64)?.approx(),
            })
        };
        Ok(DecompositionReport {
            n: self.n,
            k: self.k,
            r: self.r,
            s: self.s,
            delta: GapTable {
                a: gap(GapClass::A)?,
                b: gap(GapClass::B)?,
                c: gap(GapClass::C)?,
            },
            counts: GapTable {
                a: self.counts[0],
                b: self.counts[1],
                c: self.counts[2],
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alpha::{make_quadratic_surd, parse_alpha};

    fn sqrt2m1() -> IrrationalNumber {
        make_quadratic_surd(-1, 1, 1, 2).unwrap()
    }

    fn phi_frac() -> IrrationalNumber {
        make_quadratic_surd(-1, 1, 2, 5).unwrap()
    }

    fn form(u: i64, v: i64) -> IntForm {
        IntForm::new(u.into(), v.into())
    }

    #[test]
    fn sqrt2m1_at_four() {
        let d = decompose(&sqrt2m1(), 4).unwrap();
        assert_eq!((d.k(), d.r(), d.s()), (1, 1, 1));
        assert_eq!(
            (d.count(GapClass::A), d.count(GapClass::B), d.count(GapClass::C)),
            (3, 2, 0)
        );
        // 3 - 2√2 = 1 - 2α and 3√2 - 4 = -1 + 3α
        assert_eq!(d.delta(GapClass::A), &form(1, -2));
        assert_eq!(d.delta(GapClass::B), &form(-1, 3));
        let da: f64 = d.delta_enclosure(GapClass::A, 60).unwrap().approx();
        let db: f64 = d.delta_enclosure(GapClass::B, 60).unwrap().approx();
        assert!((da - 0.171_572_875_253_809_9).abs() < 1e-15);
        assert!((db - 0.242_640_687_119_285_1).abs() < 1e-15);
        assert!(d.partition_form().is_one());
    }

    #[test]
    fn golden_fraction_at_five() {
        let d = decompose(&phi_frac(), 5).unwrap();
        assert_eq!((d.k(), d.r(), d.s()), (3, 1, 0));
        assert_eq!(
            (d.count(GapClass::A), d.count(GapClass::B), d.count(GapClass::C)),
            (3, 1, 2)
        );
        let approx = |c| d.delta_enclosure(c, 60).unwrap().approx::<f64>();
        assert!((approx(GapClass::A) - 0.145_898_033_750_315_5).abs() < 1e-12);
        assert!((approx(GapClass::B) - 0.090_169_943_749_474_2).abs() < 1e-12);
        assert!((approx(GapClass::C) - 0.236_067_977_499_789_7).abs() < 1e-12);
        assert_eq!(d.permutation(), vec![5, 2, 4, 1, 3]);
        assert_eq!(d.step(0).unwrap(), 5);
        assert_eq!(d.classify(0).unwrap(), GapClass::B);
    }

    #[test]
    fn classification_and_steps() {
        let d = decompose(&sqrt2m1(), 4).unwrap();
        assert_eq!(d.classify(0).unwrap(), GapClass::B);
        assert_eq!(d.classify(3).unwrap(), GapClass::A);
        assert_eq!(d.classify(2).unwrap(), GapClass::A);
        let mut seq = vec![0];
        for _ in 0..5 {
            seq.push(d.step(*seq.last().unwrap()).unwrap());
        }
        assert_eq!(seq, vec![0, 3, 1, 4, 2, 0]);
        assert_eq!(d.permutation(), vec![3, 1, 4, 2]);
        assert_eq!(d.gap_after(3).unwrap(), &form(1, -2));
        assert_eq!(d.gap_after(1).unwrap(), &form(-1, 3));
        assert_eq!(
            d.classify(5).unwrap_err(),
            Error::OutOfRange { index: 5, max: 4 }
        );
    }

    #[test]
    fn single_point() {
        for a in [sqrt2m1(), phi_frac(), parse_alpha("phi").unwrap()] {
            let d = decompose(&a, 1).unwrap();
            assert_eq!((d.k(), d.r(), d.s()), (0, 1, 0));
            assert_eq!(
                (d.count(GapClass::A), d.count(GapClass::B), d.count(GapClass::C)),
                (1, 1, 0)
            );
            // δ_A = {α}, δ_B = 1 - {α}, δ_C = 1
            let fl = a.floor();
            assert_eq!(d.delta(GapClass::A), &IntForm::new(-fl.clone(), 1.into()));
            assert_eq!(d.delta(GapClass::B), &IntForm::new(fl + 1, (-1).into()));
            assert_eq!(d.delta(GapClass::C), &form(1, 0));
            assert_eq!(d.classify(0).unwrap(), GapClass::A);
            assert_eq!(d.classify(1).unwrap(), GapClass::B);
            assert_eq!(d.permutation(), vec![1]);
            assert_eq!(d.step(1).unwrap(), 0);
        }
    }

    #[test]
    fn zero_points_rejected() {
        assert!(matches!(decompose(&sqrt2m1(), 0), Err(Error::Domain(_))));
    }

    #[test]
    fn json_shape() {
        let d = decompose(&sqrt2m1(), 4).unwrap();
        let v = serde_json::to_value(d.report().unwrap()).unwrap();
        assert_eq!(v["N"], 4);
        assert_eq!(v["counts"]["A"], 3);
        assert_eq!(v["delta"]["B"]["u"], -1);
        assert_eq!(v["delta"]["B"]["v"], 3);
    }
}
