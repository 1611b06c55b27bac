//! Serialization helpers shared by the JSON reports.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::enclosure::RealEnclosure;

/// Integers go out as JSON numbers when they fit in `i64`, else as strings.
pub(crate) fn ser_bigint<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match x.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&x.to_string()),
    }
}

/// Outward-rounded `f64` endpoints of an enclosure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl From<&RealEnclosure> for Interval {
    fn from(e: &RealEnclosure) -> Self {
        Interval {
            lo: e.lower_f64(),
            hi: e.upper_f64(),
        }
    }
}
