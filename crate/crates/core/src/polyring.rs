//! Dense polynomials over [`Rational`], the Stirling polynomial family `P_k`,
//! and the Gaussian expectation that turns `P_{2k}` into the coefficient
//! `a_k`.
//!
//! # Normalization
//!
//! Every Gaussian integral here is divided by `sqrt(pi)`:
//!
//! ```text
//! E[p] = (1/sqrt(pi)) * integral of p(x) e^(-x^2) dx over the real line
//! ```
//!
//! With that normalization the even moments are rational,
//! `E[x^(2j)] = (2j)! / (4^j j!)`, and odd moments vanish, so the whole path
//! from the `P_k` recurrence to the Stirling coefficients stays in exact
//! rational arithmetic. The `sqrt(pi)` never appears anywhere downstream.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::exactnum::{binomial, factorial, Rational};

/// Polynomial with coefficients indexed by degree. Trailing zeros are
/// stripped, so the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// `c * x^m`.
    pub fn monomial(c: Rational, m: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); m + 1];
        coeffs[m] = c;
        Poly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree of the lowest nonzero term.
    pub fn low_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// `x^m * p`.
    pub fn shift(&self, m: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::zero(); m];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl fmt::Display for Poly {
    /// `c0 + c1*x + c2*x^2 + ...`, zero terms omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Memoized table `P_0, ..., P_K` of the Stirling polynomials, defined by
/// `P_0 = 1` and
///
/// ```text
/// P_{k+1}(x) = -2 sum_{j=0}^{k} C(k, j) P_j(x) x^(k-j+3) / ((k-j+2)(k-j+3))
/// ```
///
/// `P_k(x)` is the k-th `t`-derivative at `t = 0` of `exp(-x^2 phi(x t))`.
#[derive(Clone, Debug)]
pub struct StirlingPolys {
    table: Vec<Poly>,
}

impl StirlingPolys {
    /// Builds `P_0..=P_max`.
    pub fn new(max: usize) -> Self {
        let mut table = Vec::with_capacity(max + 1);
        table.push(Poly::one());
        for k in 0..max {
            let mut next = Poly::zero();
            for (j, pj) in table.iter().enumerate() {
                let d = k - j;
                let c = Rational::new(
                    binomial(k as u32, j as u32).expect("j <= k") * -2,
                    ((d + 2) * (d + 3)).into(),
                );
                next = &next + &pj.scale(&c).shift(d + 3);
            }
            table.push(next);
        }
        StirlingPolys { table }
    }

    pub fn max(&self) -> usize {
        self.table.len() - 1
    }

    /// `P_k`. Panics if `k` exceeds the table.
    pub fn get(&self, k: usize) -> &Poly {
        &self.table[k]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Poly> {
        self.table.iter()
    }
}

/// `P_k`, built through a fresh table. Use [`StirlingPolys`] when several
/// members of the family are needed.
pub fn stirling_poly(k: usize) -> Poly {
    StirlingPolys::new(k).table.swap_remove(k)
}

/// Normalized Gaussian moment `(1/sqrt(pi)) int x^(2j) e^(-x^2) dx = (2j)!/(4^j j!)`.
pub fn gauss_moment(j: u32) -> Rational {
    Rational::new(factorial(2 * j), factorial(j) << (2 * j))
}

/// `(1/sqrt(pi)) int p(x) e^(-x^2) dx`, exactly.
pub fn gauss_expectation(p: &Poly) -> Rational {
    p.coeffs()
        .iter()
        .enumerate()
        .step_by(2)
        .filter(|(_, c)| !c.is_zero())
        .map(|(d, c)| c * gauss_moment((d / 2) as u32))
        .fold(Rational::zero(), |acc, t| acc + t)
}
