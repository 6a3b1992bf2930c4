//! Truncated formal power series over [`Rational`].
//!
//! A [`TruncSeries`] of order `T` stores the coefficients of `z^0..=z^T`.
//! Binary operations on series of different orders truncate to the smaller
//! order, and equality compares coefficients up to the smaller order.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{factorial, Rational};
use crate::polyring::Poly;

#[derive(Clone, Debug)]
pub struct TruncSeries {
    coeffs: Vec<Rational>,
}

impl TruncSeries {
    /// Series of order `order` with the given leading coefficients; missing
    /// coefficients are zero, extra ones are dropped.
    pub fn new(mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::zero());
        TruncSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        TruncSeries::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        TruncSeries::new(vec![Rational::one()], order)
    }

    pub fn from_poly(p: &Poly, order: usize) -> Self {
        TruncSeries::new(p.coeffs().to_vec(), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    pub fn truncate(&self, order: usize) -> Self {
        TruncSeries::new(
            self.coeffs[..=order.min(self.order())].to_vec(),
            order.min(self.order()),
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// `f(-z)`.
    pub fn alternate(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
            .collect();
        TruncSeries { coeffs }
    }

    fn require_constant(&self, op: &'static str, expected: &'static str, ok: bool) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::ConstantTerm { op, expected })
        }
    }

    /// Multiplicative inverse, by the triangular recurrence
    /// `b_m = -(sum_{k=1}^m a_k b_{m-k}) / a_0`.
    pub fn recip(&self) -> Result<Self> {
        let a = &self.coeffs;
        self.require_constant("reciprocal", "a nonzero value", !a[0].is_zero())?;
        let inv0 = a[0].recip();
        let mut b = vec![inv0.clone()];
        for m in 1..a.len() {
            let s = (1..=m).fold(Rational::zero(), |acc, k| acc + &a[k] * &b[m - k]);
            b.push(-s * &inv0);
        }
        Ok(TruncSeries { coeffs: b })
    }

    /// `exp(a)` for `a_0 = 0`, from `b' = a' b`.
    pub fn exp(&self) -> Result<Self> {
        let a = &self.coeffs;
        self.require_constant("exp", "0", a[0].is_zero())?;
        let mut b = vec![Rational::one()];
        for m in 1..a.len() {
            let s = (1..=m).fold(Rational::zero(), |acc, k| acc + &a[k] * &b[m - k] * BigInt::from(k));
            b.push(s / BigInt::from(m));
        }
        Ok(TruncSeries { coeffs: b })
    }

    /// `log(a)` for `a_0 = 1`, from `a b' = a'`.
    pub fn log(&self) -> Result<Self> {
        let a = &self.coeffs;
        self.require_constant("log", "1", a[0].is_one())?;
        let mut b = vec![Rational::zero()];
        for m in 1..a.len() {
            let s = (1..m).fold(Rational::zero(), |acc, k| acc + &b[k] * &a[m - k] * BigInt::from(k));
            b.push(&a[m] - s / BigInt::from(m));
        }
        Ok(TruncSeries { coeffs: b })
    }

    /// `a^alpha` for `a_0 = 1` and rational `alpha`.
    ///
    /// With `b = a^alpha`, `a b' = alpha a' b` gives
    /// `m b_m = sum_{k=1}^m (alpha k - (m - k)) a_k b_{m-k}`.
    pub fn pow_rational(&self, alpha: &Rational) -> Result<Self> {
        let a = &self.coeffs;
        self.require_constant("rational power", "1", a[0].is_one())?;
        let mut b = vec![Rational::one()];
        for m in 1..a.len() {
            let mut s = Rational::zero();
            for k in 1..=m {
                if a[k].is_zero() {
                    continue;
                }
                let w = alpha * BigInt::from(k) - Rational::from_integer(BigInt::from(m - k));
                s += w * &a[k] * &b[m - k];
            }
            b.push(s / BigInt::from(m));
        }
        Ok(TruncSeries { coeffs: b })
    }
}

/// `phi(z) = 2 (e^z - 1 - z) / z^2 = sum_j 2 z^j / (j+2)!`, truncated at `order`.
pub fn phi_series(order: usize) -> TruncSeries {
    let coeffs = (0..=order)
        .map(|j| Rational::new(BigInt::from(2), factorial(j as u32 + 2)))
        .collect();
    TruncSeries { coeffs }
}

impl PartialEq for TruncSeries {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a == b)
    }
}

impl Add<&TruncSeries> for &TruncSeries {
    type Output = TruncSeries;
    fn add(self, rhs: &TruncSeries) -> TruncSeries {
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        TruncSeries { coeffs }
    }
}

impl Sub<&TruncSeries> for &TruncSeries {
    type Output = TruncSeries;
    fn sub(self, rhs: &TruncSeries) -> TruncSeries {
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        TruncSeries { coeffs }
    }
}

impl Neg for &TruncSeries {
    type Output = TruncSeries;
    fn neg(self) -> TruncSeries {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul<&TruncSeries> for &TruncSeries {
    type Output = TruncSeries;
    fn mul(self, rhs: &TruncSeries) -> TruncSeries {
        let order = self.order().min(rhs.order());
        let mut out = vec![Rational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().take(order + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(order + 1 - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        TruncSeries { coeffs: out }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, ratio};
    use proptest::prelude::*;

    fn series(cs: &[(i64, i64)], order: usize) -> TruncSeries {
        TruncSeries::new(cs.iter().map(|&(n, d)| ratio(n, d)).collect(), order)
    }

    #[test]
    fn ring_examples() {
        let a = series(&[(1, 1), (1, 1)], 4);
        let b = series(&[(1, 1), (-1, 1)], 4);
        assert_eq!(&a * &b, series(&[(1, 1), (0, 1), (-1, 1)], 4));
        assert_eq!(&a * &TruncSeries::one(4), a);
        let phi = phi_series(10);
        assert_eq!(&phi * &phi.recip().unwrap(), TruncSeries::one(10));
    }

    #[test]
    fn mixed_orders_truncate() {
        let a = series(&[(1, 1), (2, 1), (3, 1)], 2);
        let b = series(&[(1, 1), (1, 1), (1, 1), (1, 1), (1, 1)], 4);
        assert_eq!((&a + &b).order(), 2);
        assert_eq!((&a * &b).order(), 2);
        assert_eq!(&a * &b, series(&[(1, 1), (3, 1), (6, 1)], 2));
    }

    #[test]
    fn reciprocal_examples() {
        assert_eq!(TruncSeries::one(5).recip().unwrap(), TruncSeries::one(5));
        let geo = series(&[(1, 1), (-1, 1)], 6).recip().unwrap();
        assert!(geo.coeffs().iter().all(|c| *c == int(1)));
        let r = phi_series(2).recip().unwrap();
        assert_eq!(r, series(&[(1, 1), (-1, 3), (1, 36)], 2));
        assert!(matches!(
            series(&[(0, 1), (1, 1)], 3).recip(),
            Err(Error::ConstantTerm { .. })
        ));
    }

    #[test]
    fn exp_log_examples() {
        assert_eq!(TruncSeries::zero(5).exp().unwrap(), TruncSeries::one(5));
        let x = series(&[(0, 1), (1, 12)], 4);
        let e = x.exp().unwrap();
        assert_eq!(e.coeff(2), &ratio(1, 288));
        assert_eq!(e.log().unwrap(), x);
        assert!(TruncSeries::one(3).exp().is_err());
        assert!(series(&[(2, 1)], 3).log().is_err());
    }

    #[test]
    fn power_examples() {
        let a = series(&[(1, 1), (3, 7), (-2, 5)], 6);
        assert_eq!(a.pow_rational(&int(1)).unwrap(), a);
        let sqrt = series(&[(1, 1), (1, 1)], 5).pow_rational(&ratio(1, 2)).unwrap();
        // binomial series C(1/2, k)
        let mut c = int(1);
        for k in 0..=5 {
            assert_eq!(sqrt.coeff(k), &c);
            c = c * (ratio(1, 2) - int(k as i64)) / int(k as i64 + 1);
        }
        let h = phi_series(2).recip().unwrap().pow_rational(&ratio(3, 2)).unwrap();
        assert_eq!(h.coeff(2), &ratio(1, 12));
        assert!(series(&[(2, 1), (1, 1)], 3).pow_rational(&ratio(1, 2)).is_err());
    }

    #[test]
    fn phi_coefficients() {
        let phi = phi_series(30);
        assert_eq!(phi.coeff(0), &int(1));
        assert_eq!(phi.coeff(1), &ratio(1, 3));
        assert_eq!(phi.coeff(2), &ratio(1, 12));
        for j in 0..=30u32 {
            let d = Rational::from_integer(factorial(j) * BigInt::from((j + 1) * (j + 2)));
            assert_eq!(phi.coeff(j as usize) * d, int(2));
        }
    }

    fn unit_series(order: usize) -> impl Strategy<Value = TruncSeries> {
        prop::collection::vec((-9i64..9, 1i64..9), order).prop_map(move |cs| {
            let mut v = vec![int(1)];
            v.extend(cs.into_iter().map(|(n, d)| ratio(n, d)));
            TruncSeries::new(v, order)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn recip_is_involution(s in unit_series(8), c in 1i64..9) {
            let s = s.scale(&int(c));
            prop_assert_eq!(s.recip().unwrap().recip().unwrap(), s);
        }

        #[test]
        fn power_law(s in unit_series(7), p in (-5i64..5, 1i64..4), q in (-5i64..5, 1i64..4)) {
            let p = ratio(p.0, p.1);
            let q = ratio(q.0, q.1);
            let lhs = &s.pow_rational(&p).unwrap() * &s.pow_rational(&q).unwrap();
            prop_assert_eq!(lhs, s.pow_rational(&(p + q)).unwrap());
        }

        #[test]
        fn exp_inverts_log(s in unit_series(8)) {
            prop_assert_eq!(s.log().unwrap().exp().unwrap(), s);
        }

        #[test]
        fn power_agrees_with_exp_of_scaled_log(s in unit_series(7), p in (-5i64..5, 1i64..4)) {
            let p = ratio(p.0, p.1);
            let via_log = s.log().unwrap().scale(&p).exp().unwrap();
            prop_assert_eq!(s.pow_rational(&p).unwrap(), via_log);
        }
    }
}
