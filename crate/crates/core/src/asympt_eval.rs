//! High-precision evaluation of the Stirling ratio
//! `F(n) = n! e^n / (n^n sqrt(2 pi n))` against truncations of its
//! asymptotic series.
//!
//! For a fixed truncation order `N`, `|F(n) - sum_{k<=N} a_k n^-k| * n^(N+1)`
//! stays bounded as `n` grows (and tends to `|a_{N+1}|`), while for fixed `n`
//! the error first falls and eventually grows again as `N` increases.

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use crate::bigfloat::{BigFloat, MIN_PREC};
use crate::coeffs::{reciprocal_coeffs, CoeffTable, Expansion};
use crate::error::{Error, Result};
use crate::exactnum::Rational;

const GUARD_BITS: u32 = 32;

fn check_prec(prec: u32) -> Result<()> {
    if prec < MIN_PREC {
        return Err(Error::PrecisionTooLow {
            got: prec,
            min: MIN_PREC,
        });
    }
    Ok(())
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::ZeroN);
    }
    Ok(())
}

fn check_order(t: &CoeffTable, order: usize) -> Result<()> {
    if order > t.max_k() {
        return Err(Error::OrderTooLarge { order, max: t.max_k() });
    }
    Ok(())
}

fn factorial_u64(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `n^n sqrt(2 pi n) e^-n` at `w` bits.
fn stirling_prefactor(n: u64, w: u32) -> BigFloat {
    let nf = BigFloat::from_bigint(&BigInt::from(n), w);
    let nn = BigFloat::from_bigint(&Pow::pow(BigInt::from(n), n), w);
    let root = (BigFloat::pi(w) * &nf).mul_pow2(1).sqrt();
    nn * root * (-nf).exp()
}

/// `F(n) = n! e^n / (n^n sqrt(2 pi n))`, relative error below `2^(8 - prec)`.
pub fn stirling_ratio(n: u64, prec: u32) -> Result<BigFloat> {
    check_n(n)?;
    check_prec(prec)?;
    let w = prec + GUARD_BITS;
    let f = BigFloat::from_bigint(&factorial_u64(n), w) / stirling_prefactor(n, w);
    Ok(f.with_prec(prec))
}

/// `sum_{k=0}^{N} a_k / n^k`, exactly.
pub fn eval_partial_sum(t: &CoeffTable, n: u64, order: usize) -> Result<Rational> {
    check_n(n)?;
    check_order(t, order)?;
    let x = Rational::new(BigInt::one(), BigInt::from(n));
    // Horner in 1/n
    Ok(t.values[..=order]
        .iter()
        .rev()
        .fold(Rational::zero(), |acc, a| acc * &x + a))
}

/// One `(n, N)` comparison between `F(n)` and a partial sum.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorRow {
    pub n: u64,
    /// Truncation order `N` (the last included index).
    pub order: usize,
    pub ratio: BigFloat,
    pub partial: BigFloat,
    pub abs_error: BigFloat,
    /// `abs_error * n^(N+1)`.
    pub scaled_error: BigFloat,
}

/// One row per `(n, N)` pair, `n` outermost, in input order.
pub fn error_table(t: &CoeffTable, ns: &[u64], orders: &[usize], prec: u32) -> Result<Vec<ErrorRow>> {
    check_prec(prec)?;
    for &n in ns {
        check_n(n)?;
    }
    for &order in orders {
        check_order(t, order)?;
    }
    let mut rows = Vec::with_capacity(ns.len() * orders.len());
    for &n in ns {
        let ratio = stirling_ratio(n, prec)?;
        for &order in orders {
            let partial = BigFloat::from_rational(&eval_partial_sum(t, n, order)?, prec);
            let abs_error = (&ratio - &partial).abs();
            let scale = BigFloat::from_bigint(&Pow::pow(BigInt::from(n), order + 1), prec);
            let scaled_error = &abs_error * &scale;
            rows.push(ErrorRow {
                n,
                order,
                ratio: ratio.clone(),
                partial,
                abs_error,
                scaled_error,
            });
        }
    }
    Ok(rows)
}

/// Truncation errors `|F(n) - partial(N)|` for `N = 0..=K` at one `n`.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub n: u64,
    /// Smallest `N` attaining the minimum error.
    pub best_order: usize,
    pub min_error: BigFloat,
    pub errors: Vec<BigFloat>,
}

impl Truncation {
    /// Whether the error starts growing again before the end of the table.
    pub fn has_turnaround(&self) -> bool {
        self.best_order + 1 < self.errors.len()
    }

    pub fn is_strictly_decreasing(&self) -> bool {
        self.errors.windows(2).all(|w| w[1] < w[0])
    }

    /// Fails with "no turnaround within K" when the error only decreases.
    pub fn require_turnaround(self) -> Result<Self> {
        if self.is_strictly_decreasing() {
            return Err(Error::NoTurnaround {
                n: self.n,
                max_k: self.errors.len() - 1,
            });
        }
        Ok(self)
    }
}

pub fn optimal_truncation(t: &CoeffTable, n: u64, prec: u32) -> Result<Truncation> {
    check_n(n)?;
    check_prec(prec)?;
    let ratio = stirling_ratio(n, prec)?;
    let errors = (0..=t.max_k())
        .map(|order| {
            let partial = BigFloat::from_rational(&eval_partial_sum(t, n, order)?, prec);
            Ok((&ratio - &partial).abs())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut best_order = 0;
    for (i, e) in errors.iter().enumerate() {
        if *e < errors[best_order] {
            best_order = i;
        }
    }
    Ok(Truncation {
        n,
        best_order,
        min_error: errors[best_order].clone(),
        errors,
    })
}

/// `n^n sqrt(2 pi n) e^-n * sum_{k<=N} a_k n^-k`. Needs an `n!` table.
pub fn factorial_approx(n: u64, order: usize, t: &CoeffTable, prec: u32) -> Result<BigFloat> {
    check_prec(prec)?;
    if t.expansion != Expansion::Factorial {
        return Err(Error::InvalidArgument(
            "factorial_approx needs an n! coefficient table".into(),
        ));
    }
    let partial = eval_partial_sum(t, n, order)?;
    let w = prec + GUARD_BITS;
    let v = stirling_prefactor(n, w) * BigFloat::from_rational(&partial, w);
    Ok(v.with_prec(prec))
}

/// `e^n / (n^n sqrt(2 pi n)) * sum_{k<=N} (-1)^k a_k n^-k`. Accepts either
/// the `n!` table (signs are flipped here) or a `1/n!` table.
pub fn reciprocal_factorial_approx(n: u64, order: usize, t: &CoeffTable, prec: u32) -> Result<BigFloat> {
    check_prec(prec)?;
    let flipped;
    let table = match t.expansion {
        Expansion::Reciprocal => t,
        Expansion::Factorial => {
            flipped = reciprocal_coeffs(t);
            &flipped
        }
    };
    let partial = eval_partial_sum(table, n, order)?;
    let w = prec + GUARD_BITS;
    let v = BigFloat::from_rational(&partial, w) / stirling_prefactor(n, w);
    Ok(v.with_prec(prec))
}

/// `n!` at `prec` bits.
pub fn factorial_float(n: u64, prec: u32) -> BigFloat {
    BigFloat::from_bigint(&factorial_u64(n), prec)
}
