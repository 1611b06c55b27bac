//! Rigorous computation of three-gap structures and reciprocal sums over
//! irrational rotations.
//!
//! Everything that can be decided exactly (gap lengths, orderings, which term
//! vanishes) is decided with integer arithmetic; every real number that is
//! reported comes as a certified enclosure.

pub mod alpha;
pub mod bounds;
pub mod cf;
pub mod cli;
pub mod elementary;
pub mod enclosure;
pub mod error;
pub mod linear_form;
pub mod oracle;
mod report;
pub mod sums;
pub mod three_gap;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use alpha::{frac_part, make_quadratic_surd, parse_alpha, FracPart, IrrationalNumber, PrecisionPolicy, QuadraticSurd, Shift};
pub use bounds::{bound_dist, bound_power, bound_t, bound_t_excluding, verify, zeta, BoundKind, BoundReport, BoundValue, Verdict};
pub use cf::{approximation_error, convergents, largest_convergent_index, partial_quotients, Convergent};
pub use enclosure::RealEnclosure;
pub use error::{Error, Result};
pub use linear_form::LinearForm;
pub use report::Interval;
pub use sums::{
    argmin_dist, argmin_frac, reduce_to_semihomogeneous, sum_general, sum_reciprocal_dist, sum_reciprocal_frac,
    sum_reciprocal_frac_excluding_residue, sum_reciprocal_power, SumKind, SumReport,
};
pub use three_gap::{decompose, permutation, GapClass, ThreeGapDecomposition};

/// `u + vα` with integer coefficients; gap lengths and approximation errors.
pub type IntForm = LinearForm<BigInt>;
/// `u + vα` with rational coefficients; shifts.
pub type RatForm = LinearForm<BigRational>;
