//! Exact binomial coefficients and small rational helpers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// `C(n, r)`, zero when `r > n`. Exact for every `n <= 64`.
pub fn binomial(n: u32, r: u32) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc
}

/// `C(n, r)` for signed arguments; zero outside the usual range.
pub fn binomial_i(n: i64, r: i64) -> u128 {
    if n < 0 || r < 0 || r > n {
        0
    } else {
        binomial(n as u32, r as u32)
    }
}

pub fn ratio(num: u128, den: u128) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: u128) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn pow(base: &BigRational, exp: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Smallest integer `>= q`.
pub fn ceil(q: &BigRational) -> BigInt {
    q.ceil().to_integer()
}

pub fn is_zero(q: &BigRational) -> bool {
    q.is_zero()
}

/// `ceil(a / b)` for positive `b`.
pub fn div_ceil(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}
