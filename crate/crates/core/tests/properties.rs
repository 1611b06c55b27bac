//! Randomised properties over quadratic surds.

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use threegap::oracle::{self, OracleConfig};
use threegap::{bounds, convergents, decompose, make_quadratic_surd, sums, GapClass, IrrationalNumber, Shift, Verdict};

fn surd() -> impl Strategy<Value = IrrationalNumber> {
    (-20i64..20, 1i64..6, 1i64..12, 2i64..60)
        .prop_filter("radicand must not be a square", |&(_, _, _, d)| d.sqrt() * d.sqrt() != d)
        .prop_map(|(a, b, c, d)| make_quadratic_surd(a, b, c, d).unwrap())
}

fn shift() -> impl Strategy<Value = Shift> {
    (0i64..997, 1i64..997).prop_map(|(p, q)| Shift::rational(p % q, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn partition_and_counts(alpha in surd(), n in 1u64..400) {
        let d = decompose(&alpha, n).unwrap();
        prop_assert!(d.partition_form().is_one());
        let total: u64 = [GapClass::A, GapClass::B, GapClass::C].iter().map(|&c| d.count(c)).sum();
        prop_assert_eq!(total, n + 1);
    }

    #[test]
    fn permutation_matches_sorting(alpha in surd(), n in 1u64..150) {
        let d = decompose(&alpha, n).unwrap();
        let order: Vec<u64> = oracle::sorted_points(&alpha, n, &OracleConfig::default())
            .unwrap()
            .iter()
            .map(|(m, _)| *m)
            .collect();
        prop_assert_eq!(d.permutation(), order);
    }

    #[test]
    fn step_is_a_single_cycle(alpha in surd(), n in 1u64..300) {
        let d = decompose(&alpha, n).unwrap();
        let mut seen = vec![false; n as usize + 1];
        let mut x = 0;
        for _ in 0..=n {
            prop_assert!(!seen[x as usize]);
            seen[x as usize] = true;
            x = d.step(x).unwrap();
        }
        prop_assert_eq!(x, 0);
    }

    #[test]
    fn determinant_identity(alpha in surd()) {
        let cs = convergents(&alpha, 30).unwrap();
        for w in cs.windows(2) {
            let det = &w[1].q * &w[0].p - &w[0].q * &w[1].p;
            let want = if w[0].k % 2 == 0 { -BigInt::one() } else { BigInt::one() };
            prop_assert_eq!(det, want);
        }
    }

    #[test]
    fn certified_sum_contains_brute_force(alpha in surd(), gamma in shift(), n in 1u64..60) {
        let s = sums::sum_reciprocal_frac(&alpha, &gamma, n, 30).unwrap();
        let b = oracle::sum_brute(&alpha, &gamma, n, &BigRational::zero(), &BigRational::one(), &OracleConfig::default())
            .unwrap();
        prop_assert!(s.value.overlaps(&b));
        prop_assert!(s.value.width_at_most(30));
        let np = sums::argmin_frac(&alpha, &gamma, n).unwrap();
        prop_assert_eq!(s.excluded.index, np);
    }

    #[test]
    fn log_bounds_hold(alpha in surd(), gamma in shift(), n in 1u64..2000) {
        for kind in [bounds::BoundKind::E1, bounds::BoundKind::E2, bounds::BoundKind::Dist] {
            let r = bounds::verify_kind(&alpha, &gamma, n, kind, None, 24).unwrap();
            prop_assert_eq!(r.verdict, Verdict::Holds);
            prop_assert!(r.tightness > 0.0 && r.tightness <= 1.0);
        }
        let excl = bounds::bound_t_excluding(&alpha, n).unwrap().value;
        let full = bounds::bound_t(&alpha, n).unwrap().value;
        prop_assert!(excl.certainly_le(&full));
    }

    #[test]
    fn shift_text_round_trips(u in -50i64..50, v in -9i64..9, den in 1i64..30) {
        let g = Shift::combination(BigRational::new(u.into(), den.into()), BigRational::from_integer(v.into()));
        prop_assert_eq!(Shift::parse(&g.to_string()).unwrap(), g);
    }
}
