//! Stirling's series for `n!` and `1/n!`.
//!
//! The coefficients `a_k` of
//!
//! ```text
//! n! ~ n^n sqrt(2 pi n) e^-n (1 + 1/(12n) + 1/(288n^2) - 139/(51840n^3) - ...)
//! ```
//!
//! are computed exactly in three independent ways ([`coeffs`]): Gaussian
//! expectations of a polynomial family ([`polyring`]), coefficient
//! extraction from a half-integer power of a formal series ([`series`]), and
//! the classical Bernoulli-number route. The `1/n!` expansion uses the same
//! coefficients with alternating signs.
//!
//! On the numeric side, [`asympt_eval`] compares truncations against the
//! Stirling ratio at arbitrary precision, and [`quadrature`] evaluates the
//! integral representations whose Maclaurin coefficients the series is
//! built from. [`bigfloat`] supplies the multiprecision arithmetic.
//!
//! ```
//! use stirling_core::coeffs::{coeffs_via_recurrence, convolution_check};
//!
//! let t = coeffs_via_recurrence(5);
//! assert_eq!(t.values[3].to_string(), "-139/51840");
//! let s = convolution_check(&t, 5).unwrap();
//! assert!(s[1..].iter().all(|v| v.to_string() == "0"));
//! ```

pub mod asympt_eval;
pub mod bigfloat;
pub mod coeffs;
pub mod error;
pub mod exactnum;
pub mod io;
pub mod polyring;
pub mod quadrature;
pub mod series;

pub use bigfloat::BigFloat;
pub use coeffs::{CoeffTable, Expansion, Method};
pub use error::{Error, Result};
pub use exactnum::Rational;
