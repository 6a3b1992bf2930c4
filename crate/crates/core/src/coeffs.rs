//! Stirling series coefficients `a_k` in
//!
//! ```text
//! n! e^n / (n^n sqrt(2 pi n)) ~ sum_k a_k / n^k
//! ```
//!
//! computed three independent ways, plus the `1/n!` table `(-1)^k a_k` and
//! the identities that tie the two expansions together.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{bernoulli, factorial, Rational};
use crate::polyring::{gauss_expectation, StirlingPolys};
use crate::series::{phi_series, TruncSeries};

/// Which construction produced a coefficient table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// Gaussian expectation of the Stirling polynomial `P_{2k}`.
    Recurrence,
    /// `z^(2k)` coefficient of `(z^2 / (2(e^z - 1 - z)))^(k + 1/2)`.
    HalfPower,
    /// Exponential of the Bernoulli-number series for `log n!`.
    Bernoulli,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Recurrence, Method::HalfPower, Method::Bernoulli];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Recurrence => "recurrence",
            Method::HalfPower => "halfpower",
            Method::Bernoulli => "bernoulli",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown method {s:?}")))
    }
}

/// Whether a table expands `n!` or `1/n!`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Expansion {
    Factorial,
    Reciprocal,
}

impl Expansion {
    pub fn as_str(self) -> &'static str {
        match self {
            Expansion::Factorial => "factorial",
            Expansion::Reciprocal => "reciprocal",
        }
    }

    fn flipped(self) -> Self {
        match self {
            Expansion::Factorial => Expansion::Reciprocal,
            Expansion::Reciprocal => Expansion::Factorial,
        }
    }
}

impl FromStr for Expansion {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "factorial" => Ok(Expansion::Factorial),
            "reciprocal" => Ok(Expansion::Reciprocal),
            _ => Err(Error::Parse(format!("unknown expansion {s:?}"))),
        }
    }
}

/// Coefficients `a_0..=a_K` with their provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffTable {
    pub values: Vec<Rational>,
    pub method: Method,
    pub expansion: Expansion,
}

impl CoeffTable {
    pub fn new(values: Vec<Rational>, method: Method, expansion: Expansion) -> Result<Self> {
        if values.first().is_none_or(|v| !v.is_one()) {
            return Err(Error::InvalidArgument(
                "a coefficient table must start with a_0 = 1".into(),
            ));
        }
        Ok(CoeffTable {
            values,
            method,
            expansion,
        })
    }

    /// Largest index `K`.
    pub fn max_k(&self) -> usize {
        self.values.len() - 1
    }

    /// Coefficients as a power series in `x = 1/n`.
    pub fn as_series(&self) -> TruncSeries {
        TruncSeries::new(self.values.clone(), self.max_k())
    }
}

pub fn compute(method: Method, max_k: usize) -> CoeffTable {
    match method {
        Method::Recurrence => coeffs_via_recurrence(max_k),
        Method::HalfPower => coeffs_via_halfpower(max_k),
        Method::Bernoulli => coeffs_via_bernoulli(max_k),
    }
}

/// `a_k = 2^k / (2k)! * E[P_{2k}]` with `E` the normalized Gaussian
/// expectation.
pub fn coeffs_via_recurrence(max_k: usize) -> CoeffTable {
    let polys = StirlingPolys::new(2 * max_k);
    let values = (0..=max_k)
        .map(|k| {
            let scale = Rational::new(BigInt::one() << k, factorial(2 * k as u32));
            scale * gauss_expectation(polys.get(2 * k))
        })
        .collect();
    CoeffTable {
        values,
        method: Method::Recurrence,
        expansion: Expansion::Factorial,
    }
}

/// `a_k = (2k)! / (2^k k!) * [z^(2k)] (1/phi(z))^(k + 1/2)`.
///
/// This is the `2k`-th derivative at zero divided by `2^k k!`, with the
/// derivative replaced by `(2k)!` times the coefficient.
pub fn coeffs_via_halfpower(max_k: usize) -> CoeffTable {
    let inv_phi = phi_series(2 * max_k).recip().expect("phi(0) = 1");
    let values = (0..=max_k)
        .map(|k| {
            let alpha = Rational::new(BigInt::from(2 * k + 1), BigInt::from(2));
            // only z^0..z^(2k) matter for this k
            let pow = inv_phi.truncate(2 * k).pow_rational(&alpha).expect("constant term 1");
            let scale = Rational::new(factorial(2 * k as u32), factorial(k as u32) << k);
            scale * pow.coeff(2 * k)
        })
        .collect();
    CoeffTable {
        values,
        method: Method::HalfPower,
        expansion: Expansion::Factorial,
    }
}

/// `B_{2j} / (2j (2j - 1))`, the coefficient of `x^(2j-1)` in the series for
/// `log(n! e^n / (n^n sqrt(2 pi n)))` in `x = 1/n`.
pub fn log_coefficient(j: u32) -> Rational {
    bernoulli(2 * j) / BigInt::from(2 * j * (2 * j - 1))
}

/// `exp(sum_{j>=1} B_{2j} / (2j(2j-1)) x^(2j-1))`, truncated at `x^K`.
pub fn coeffs_via_bernoulli(max_k: usize) -> CoeffTable {
    let mut l = vec![Rational::zero(); max_k + 1];
    for j in 1.. {
        let d = 2 * j as usize - 1;
        if d > max_k {
            break;
        }
        l[d] = log_coefficient(j);
    }
    let values = TruncSeries::new(l, max_k)
        .exp()
        .expect("constant term 0")
        .coeffs()
        .to_vec();
    CoeffTable {
        values,
        method: Method::Bernoulli,
        expansion: Expansion::Factorial,
    }
}

/// The table with `(-1)^k` signs applied: `n!` coefficients become `1/n!`
/// coefficients and vice versa.
pub fn reciprocal_coeffs(t: &CoeffTable) -> CoeffTable {
    let values = t
        .values
        .iter()
        .enumerate()
        .map(|(k, a)| if k % 2 == 1 { -a } else { a.clone() })
        .collect();
    CoeffTable {
        values,
        method: t.method,
        expansion: t.expansion.flipped(),
    }
}

/// `s_m = sum_{k=0}^m (-1)^k a_k a_{m-k}` for `m = 0..=M`. For a genuine
/// Stirling table `s_0 = 1` and every other `s_m` is zero.
pub fn convolution_check(t: &CoeffTable, max_m: usize) -> Result<Vec<Rational>> {
    if max_m > t.max_k() {
        return Err(Error::OrderTooLarge {
            order: max_m,
            max: t.max_k(),
        });
    }
    let a = &t.values;
    Ok((0..=max_m)
        .map(|m| {
            (0..=m).fold(Rational::zero(), |acc, k| {
                let term = &a[k] * &a[m - k];
                if k % 2 == 1 {
                    acc - term
                } else {
                    acc + term
                }
            })
        })
        .collect())
}

/// Coefficients of `log(sum_k a_k x^k)` through `x^K`. Even powers vanish and
/// `x^(2j-1)` carries [`log_coefficient`]`(j)` when `t` is a genuine table.
pub fn log_series_coeffs(t: &CoeffTable, max_k: usize) -> Result<Vec<Rational>> {
    if max_k > t.max_k() {
        return Err(Error::OrderTooLarge {
            order: max_k,
            max: t.max_k(),
        });
    }
    Ok(t.as_series().truncate(max_k).log()?.coeffs().to_vec())
}

/// `(|a_k| / k!)^(1/k)` for `k = 1..=K`.
///
/// Bounded values witness a positive radius of convergence for the
/// exponential generating function `sum a_k x^k / k!`.
pub fn egf_growth(t: &CoeffTable) -> Vec<f64> {
    (1..=t.max_k())
        .map(|k| {
            let a = &t.values[k];
            if a.is_zero() {
                return 0.0;
            }
            let ln = ln_abs(a.numer()) - ln_abs(a.denom()) - ln_abs(&factorial(k as u32));
            (ln / k as f64).exp()
        })
        .collect()
}

/// `ln |v|` for a nonzero integer of any size.
fn ln_abs(v: &BigInt) -> f64 {
    let bits = v.bits();
    let shift = bits.saturating_sub(64);
    let head = (v.abs() >> shift).to_f64().expect("fits in f64");
    head.ln() + shift as f64 * std::f64::consts::LN_2
}
