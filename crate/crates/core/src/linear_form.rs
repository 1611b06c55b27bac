//! Exact values of the form `u + v·α`.
//!
//! Because α is irrational, `1` and `α` are linearly independent over the
//! rationals, so two forms denote the same real number iff their coefficients
//! agree. That is what makes gap lengths, approximation errors and shifts
//! comparable symbolically.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::alpha::IrrationalNumber;
use crate::enclosure::RealEnclosure;
use crate::error::Result;

/// `constant + coeff·α` with coefficients in any numeric ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinearForm<T> {
    pub constant: T,
    pub coeff: T,
}

impl<T: Num + Clone> LinearForm<T> {
    pub fn new(constant: T, coeff: T) -> Self {
        LinearForm { constant, coeff }
    }

    pub fn constant(c: T) -> Self {
        LinearForm {
            constant: c,
            coeff: T::zero(),
        }
    }

    pub fn alpha() -> Self {
        LinearForm {
            constant: T::zero(),
            coeff: T::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.coeff.is_zero()
    }

    /// `true` for `1 + 0α`.
    pub fn is_one(&self) -> bool {
        self.constant.is_one() && self.coeff.is_zero()
    }

    /// `true` when the form has no α part.
    pub fn is_constant(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn scale(&self, k: &T) -> Self {
        LinearForm {
            constant: self.constant.clone() * k.clone(),
            coeff: self.coeff.clone() * k.clone(),
        }
    }

    /// Floating approximation given an approximation of α.
    pub fn approx<F>(&self, alpha: F) -> F
    where
        T: ToPrimitive,
        F: Float + FromPrimitive,
    {
        let c = F::from_f64(self.constant.to_f64().unwrap_or(f64::NAN)).unwrap_or_else(F::nan);
        let v = F::from_f64(self.coeff.to_f64().unwrap_or(f64::NAN)).unwrap_or_else(F::nan);
        c + v * alpha
    }
}

impl<T: Num + Clone> Add for LinearForm<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        LinearForm {
            constant: self.constant + rhs.constant,
            coeff: self.coeff + rhs.coeff,
        }
    }
}

impl<T: Num + Clone> Sub for LinearForm<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        LinearForm {
            constant: self.constant - rhs.constant,
            coeff: self.coeff - rhs.coeff,
        }
    }
}

impl<T: Num + Clone + Neg<Output = T>> Neg for LinearForm<T> {
    type Output = Self;
    fn neg(self) -> Self {
        LinearForm {
            constant: -self.constant,
            coeff: -self.coeff,
        }
    }
}

impl<T: Num + Clone> Mul<T> for LinearForm<T> {
    type Output = Self;
    fn mul(self, k: T) -> Self {
        self.scale(&k)
    }
}

impl<T: Num + Clone> Zero for LinearForm<T> {
    fn zero() -> Self {
        LinearForm::constant(T::zero())
    }
    fn is_zero(&self) -> bool {
        LinearForm::is_zero(self)
    }
}

impl<T: fmt::Display + Num + Clone + PartialOrd> fmt::Display for LinearForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeff.is_zero() {
            return write!(f, "{}", self.constant);
        }
        if !self.constant.is_zero() {
            write!(f, "{} ", self.constant)?;
            if self.coeff < T::zero() {
                write!(f, "- {}α", T::zero() - self.coeff.clone())
            } else {
                write!(f, "+ {}α", self.coeff)
            }
        } else {
            write!(f, "{}α", self.coeff)
        }
    }
}

impl LinearForm<BigInt> {
    /// Rigorous enclosure of the value, width at most `2^-bits`.
    pub fn enclose(&self, alpha: &IrrationalNumber, bits: u32) -> Result<RealEnclosure> {
        let extra = self.coeff.bits() as u32 + 1;
        let a = alpha.eval_enclosure(bits + extra)?;
        Ok(a.mul_integer(&self.coeff).add_integer(&self.constant))
    }

    pub fn to_rational(&self) -> LinearForm<BigRational> {
        LinearForm {
            constant: BigRational::from_integer(self.constant.clone()),
            coeff: BigRational::from_integer(self.coeff.clone()),
        }
    }
}

impl LinearForm<BigRational> {
    /// Rigorous enclosure of the value, width at most `2^-bits`.
    pub fn enclose(&self, alpha: &IrrationalNumber, bits: u32) -> Result<RealEnclosure> {
        let scale = bits + 2;
        let c = RealEnclosure::from_rational(&self.constant, scale);
        if self.coeff.is_zero() {
            return Ok(c);
        }
        let extra = (self.coeff.numer().bits() as u32 + 2).saturating_sub(self.coeff.denom().bits() as u32);
        let a = alpha.eval_enclosure(scale + extra + 1)?;
        Ok(a.mul_rational(&self.coeff).add(&c))
    }

    /// Integer coefficients, when both coefficients are integers.
    pub fn to_integer(&self) -> Option<LinearForm<BigInt>> {
        (self.constant.is_integer() && self.coeff.is_integer()).then(|| LinearForm {
            constant: self.constant.to_integer(),
            coeff: self.coeff.to_integer(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::IntForm;
    use proptest::prelude::*;

    #[test]
    fn display_reads_naturally() {
        let f = IntForm::new(3.into(), (-2).into());
        assert_eq!(f.to_string(), "3 - 2α");
        assert_eq!(IntForm::alpha().to_string(), "1α");
        assert_eq!(IntForm::constant(7.into()).to_string(), "7");
    }

    #[test]
    fn float_approximation_is_generic() {
        let f = LinearForm::<i64>::new(3, -2);
        let a32: f32 = f.approx(0.5f32);
        let a64: f64 = f.approx(0.5f64);
        assert_eq!(a32, 2.0);
        assert_eq!(a64, 2.0);
    }

    proptest! {
        #[test]
        fn ring_laws(a in -1000i64..1000, b in -1000i64..1000, c in -1000i64..1000, d in -1000i64..1000, k in -50i64..50) {
            let x = LinearForm::new(a, b);
            let y = LinearForm::new(c, d);
            prop_assert_eq!(x.clone() + y.clone() - y.clone(), x.clone());
            prop_assert_eq!((x.clone() + y.clone()) * k, x.clone() * k + y * k);
            prop_assert!((x.clone() - x).is_zero());
        }
    }
}
