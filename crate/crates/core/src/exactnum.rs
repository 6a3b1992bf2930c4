//! Exact integer and rational scalars: factorials, binomials and Bernoulli
//! numbers.
//!
//! [`Rational`] is `num_rational::BigRational`, which normalizes on every
//! construction (positive denominator, lowest terms), so two equal values are
//! always structurally equal. Its `Display` form is `num/den`, or just `num`
//! when the denominator is one.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// `n!` as an exact integer.
pub fn factorial(n: u32) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Binomial coefficient `C(n, k)`; `k > n` is rejected.
pub fn binomial(n: u32, k: u32) -> Result<BigInt> {
    if k > n {
        return Err(Error::BinomialRange { n, k });
    }
    let k = k.min(n - k);
    // Each partial product C(n, i) is an integer, so the division is exact.
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    Ok(acc)
}

/// Integer as a rational.
pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `num/den` as a normalized rational. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn bernoulli_table() -> &'static Mutex<Vec<Rational>> {
    static TABLE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(vec![Rational::one()]))
}

/// Bernoulli number `B_m` with the convention `B_1 = -1/2`.
///
/// Computed from `sum_{j=0}^{m} C(m+1, j) B_j = 0` and memoized process-wide.
pub fn bernoulli(m: u32) -> Rational {
    let mut table = bernoulli_table().lock().unwrap_or_else(|e| e.into_inner());
    while table.len() <= m as usize {
        let next = table.len() as u32;
        let mut sum = Rational::zero();
        for (j, b) in table.iter().enumerate() {
            if !b.is_zero() {
                let c = binomial(next + 1, j as u32).expect("j <= next");
                sum += Rational::from_integer(c) * b;
            }
        }
        table.push(-sum / Rational::from_integer(BigInt::from(next + 1)));
    }
    table[m as usize].clone()
}
