use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational;

/// An exact probability in `[0, 1]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MeasureValue(
    #[serde(serialize_with = "rational::serialize", deserialize_with = "rational::deserialize")]
    BigRational,
);

impl MeasureValue {
    pub fn new(value: BigRational) -> Result<Self> {
        if value < BigRational::zero() || value > BigRational::one() {
            return Err(Error::param(format!(
                "measure {} outside [0, 1]",
                rational::format_rational(&value)
            )));
        }
        Ok(MeasureValue(value))
    }

    /// `num / den`; an empty universe (`den == 0`) has measure zero.
    pub fn from_counts(num: u128, den: u128) -> Self {
        if den == 0 {
            return MeasureValue(BigRational::zero());
        }
        assert!(num <= den, "count {num} exceeds universe {den}");
        MeasureValue(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero() -> Self {
        MeasureValue(BigRational::zero())
    }

    pub fn one() -> Self {
        MeasureValue(BigRational::one())
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn into_inner(self) -> BigRational {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for MeasureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&rational::format_rational(&self.0))
    }
}

impl fmt::Debug for MeasureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_and_bounds() {
        assert_eq!(MeasureValue::from_counts(10, 20).to_string(), "1/2");
        assert_eq!(MeasureValue::from_counts(0, 0), MeasureValue::zero());
        assert!(MeasureValue::new(BigRational::new(3.into(), 2.into())).is_err());
        let json = serde_json::to_string(&MeasureValue::from_counts(32, 70)).unwrap();
        assert_eq!(json, "\"16/35\"");
        let back: MeasureValue = serde_json::from_str(&json).unwrap();
        assert_eq!(back, MeasureValue::from_counts(16, 35));
    }
}
