//! Numerical evaluation of the two integral representations
//!
//! ```text
//! f(t) = (1/sqrt(pi)) int_{-inf}^{inf}     exp(-x^2 phi(x t))   dx
//! g(t) = (1/sqrt(pi)) int_{-pi/t}^{pi/t}   exp(-x^2 phi(i x t)) dx
//! ```
//!
//! with `phi(z) = 2 (e^z - 1 - z) / z^2`. At `t = sqrt(2/n)` they equal the
//! Stirling ratio `F(n)` and its reciprocal.
//!
//! Integration uses the tanh-sinh (double exponential) rule on a finite
//! interval. Each level halves the step and reuses every earlier node; the
//! error estimate is the difference between the last two levels. Infinite or
//! long ranges are cut where the integrand envelopes guarantee a small tail:
//!
//! * `exp(-x^2 phi(x t)) <= exp(-x^2)` for `x >= 0`, any `t`;
//! * `exp(-x^2 phi(x t)) <= exp(2x + 2)` for `x < 0`, `0 < t <= 1`;
//! * `exp(-x^2 phi(x t)) <= exp((2 x t + 2) / t^2)` for `x < 0`, any `t > 0`
//!   (from `e^(xt) > 0`; equals the previous bound at `t = 1`);
//! * `|exp(-x^2 phi(i x t))| <= exp(-4 x^2 / pi^2)` for `|x t| <= pi`.
//!
//! The cut points target a tail of `min(tol/4, 2^-64)`, so for every
//! tolerance above about `1e-18` the integration interval does not depend on
//! `tol` and tightening `tol` only adds refinement levels. The tail bounds
//! are included in `err_estimate`.

use std::f64::consts::{LN_2, PI};

use crate::bigfloat::{BigFloat, Complex, MIN_PREC};
use crate::error::{Error, Result};

const GUARD_BITS: u32 = 16;
const MAX_LEVEL: u32 = 12;
const MIN_LEVEL: u32 = 3;

#[derive(Clone, Debug)]
pub struct QuadResult {
    /// Real part of the integral.
    pub value: BigFloat,
    /// Imaginary part; identically zero for `f`.
    pub imag: BigFloat,
    /// Bound on `|value - exact|`: quadrature estimate plus truncated tails.
    pub err_estimate: BigFloat,
    /// Integrand evaluations.
    pub nodes: usize,
}

fn check_prec(prec: u32) -> Result<()> {
    if prec < MIN_PREC {
        return Err(Error::PrecisionTooLow {
            got: prec,
            min: MIN_PREC,
        });
    }
    Ok(())
}

/// `log2` of the size of the `j`-th series term `|z|^j / (j+2)!`, used to
/// stop the Maclaurin branch.
fn series_terms(abs_z: f64, prec: u32) -> usize {
    let target = -(f64::from(prec) + f64::from(GUARD_BITS));
    let lz = abs_z.log2();
    let mut lg = -1.0; // 2/2! = 1 for j = 0, log2 scale
    let mut j = 0usize;
    while lg > target {
        j += 1;
        lg += lz - ((j + 2) as f64).log2();
    }
    j
}

/// `phi(x)` for real `x`; Maclaurin series for `|x| < 1/2`.
pub fn phi_real(x: &BigFloat, prec: u32) -> BigFloat {
    let w = prec + GUARD_BITS;
    let x = x.with_prec(w);
    let ax = x.to_f64().abs();
    if ax == 0.0 {
        return BigFloat::one(prec);
    }
    if ax < 0.5 {
        // sum 2 x^j / (j+2)!, term_j = term_{j-1} * x / (j+2)
        let mut term = BigFloat::one(w);
        let mut sum = BigFloat::one(w);
        for j in 1..=series_terms(ax, w) {
            term = &term * &x / BigFloat::from_i64(j as i64 + 2, w);
            sum = &sum + &term;
        }
        return sum.with_prec(prec);
    }
    let one = BigFloat::one(w);
    let num = (x.exp() - &one - &x).mul_pow2(1);
    (num / (&x * &x)).with_prec(prec)
}

/// `phi(z)` for complex `z`; Maclaurin series for `|z| < 1/2`.
pub fn phi_eval(z: &Complex, prec: u32) -> Complex {
    let w = prec + GUARD_BITS;
    let z = Complex::new(z.re.with_prec(w), z.im.with_prec(w));
    let az = z.re.to_f64().hypot(z.im.to_f64());
    let round = |c: Complex| Complex::new(c.re.with_prec(prec), c.im.with_prec(prec));
    if az == 0.0 {
        return Complex::real(BigFloat::one(prec));
    }
    if az < 0.5 {
        let mut term = Complex::real(BigFloat::one(w));
        let mut sum = term.clone();
        for j in 1..=series_terms(az, w) {
            let inv = BigFloat::one(w) / BigFloat::from_i64(j as i64 + 2, w);
            term = (&term * &z).scale(&inv);
            sum = &sum + &term;
        }
        return round(sum);
    }
    let one = Complex::real(BigFloat::one(w));
    let num = &(&z.exp() - &one) - &z;
    let num = Complex::new(num.re.mul_pow2(1), num.im.mul_pow2(1));
    round(&num / &(&z * &z))
}

/// `psi(u) = u e^u + u + 2 - 2 e^u = sum_{k>=3} (k-2) u^k / k!`.
pub fn psi(u: &BigFloat, prec: u32) -> BigFloat {
    let w = prec + GUARD_BITS;
    let u = u.with_prec(w);
    let au = u.to_f64().abs();
    if au == 0.0 {
        return BigFloat::zero(prec);
    }
    if au < 0.5 {
        // p_k = u^k / k!
        let mut p = BigFloat::one(w);
        let mut sum = BigFloat::zero(w);
        for k in 1..=series_terms(au, w) + 3 {
            p = &p * &u / BigFloat::from_i64(k as i64, w);
            if k >= 3 {
                sum = &sum + &(&p * &BigFloat::from_i64(k as i64 - 2, w));
            }
        }
        return sum.with_prec(prec);
    }
    let e = u.exp();
    let two = BigFloat::from_i64(2, w);
    (&u * &e + &u + &two - e.mul_pow2(1)).with_prec(prec)
}

/// `sqrt(2/n)`, the argument at which `f` and `g` reproduce `F(n)` and `1/F(n)`.
pub fn t_for_n(n: u64, prec: u32) -> BigFloat {
    (BigFloat::from_i64(2, prec) / BigFloat::from_bigint(&n.into(), prec)).sqrt()
}

struct Integral {
    sum: Complex,
    err: f64,
    nodes: usize,
}

/// Tanh-sinh quadrature of `h` over `[a, b]` to absolute tolerance `tol`.
fn tanh_sinh<F>(a: &BigFloat, b: &BigFloat, tol: f64, prec: u32, mut h: F) -> Result<Integral>
where
    F: FnMut(&BigFloat) -> Complex,
{
    let center = (a + b).mul_pow2(-1);
    let half = (b - a).mul_pow2(-1);
    let half_pi = BigFloat::pi(prec).mul_pow2(-1);
    let one = BigFloat::one(prec);
    // beyond t_max the node weights fall below 2^-prec
    let t_max = ((f64::from(prec) + 8.0) * LN_2 / PI).asinh();

    // level 0 starts with the center node, weight pi/2
    let mut acc = h(&center).scale(&half_pi);
    let mut nodes = 1usize;
    // weight * (h(center + half*u) + h(center - half*u)) at abscissa t
    let mut pair = |t: &BigFloat, nodes: &mut usize| -> Complex {
        let et = t.exp();
        let inv_et = &one / &et;
        let sinh_t = (&et - &inv_et).mul_pow2(-1);
        let cosh_t = (&et + &inv_et).mul_pow2(-1);
        let s = &half_pi * &sinh_t;
        let es = s.exp();
        let inv_es = &one / &es;
        let cosh_s = (&es + &inv_es).mul_pow2(-1);
        let u = (&es - &inv_es) / (&es + &inv_es);
        let weight = &half_pi * &cosh_t / (&cosh_s * &cosh_s);
        let offset = &half * &u;
        let sum = &h(&(&center + &offset)) + &h(&(&center - &offset));
        *nodes += 2;
        sum.scale(&weight)
    };

    // rest of level 0: t = +-1, +-2, ...
    let mut k = 1i64;
    while (k as f64) <= t_max {
        acc = &acc + &pair(&BigFloat::from_i64(k, prec), &mut nodes);
        k += 1;
    }
    let mut prev = acc.scale(&half);
    let mut err = f64::INFINITY;
    for level in 1..=MAX_LEVEL {
        let step = BigFloat::one(prec).mul_pow2(-i64::from(level));
        let count = (t_max * f64::from(1u32 << level)).floor() as i64;
        let mut j = 1i64;
        while j <= count {
            let t = BigFloat::from_i64(j, prec).mul_pow2(-i64::from(level));
            acc = &acc + &pair(&t, &mut nodes);
            j += 2;
        }
        let cur = acc.scale(&(&half * &step));
        err = (&cur - &prev).abs().to_f64();
        prev = cur;
        if level >= MIN_LEVEL && err <= tol {
            return Ok(Integral { sum: prev, err, nodes });
        }
    }
    Err(Error::QuadratureBudget {
        tol,
        nodes,
        estimate: err,
    })
}

fn check_args(t: &BigFloat, prec: u32, tol: f64) -> Result<()> {
    check_prec(prec)?;
    if t.is_zero() || t.is_negative() {
        return Err(Error::InvalidArgument("t must be positive".into()));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    Ok(())
}

fn tail_target(tol: f64) -> f64 {
    (tol / 4.0).min(2f64.powi(-64))
}

/// Rounds a cut point up to a multiple of 1/4 so that nearby tolerances
/// share an interval.
fn quantize(x: f64) -> f64 {
    (x * 4.0).ceil() / 4.0
}

/// `(1/sqrt(pi)) int_X^inf e^(-c x^2) dx <= e^(-c X^2) / (2 c X sqrt(pi))`.
fn gaussian_tail(c: f64, x: f64) -> f64 {
    (-c * x * x).exp() / (2.0 * c * x * PI.sqrt())
}

fn gaussian_cut(c: f64, target: f64) -> f64 {
    let mut x = (-target.ln() / c).sqrt().max(1.0);
    while gaussian_tail(c, x) > target {
        x += 0.25;
    }
    while x > 1.25 && gaussian_tail(c, x - 0.25) <= target {
        x -= 0.25;
    }
    quantize(x)
}

/// Left cut for `f` and the tail mass it leaves out.
fn f_left_cut(t: f64, target: f64) -> (f64, f64) {
    let sqrt_pi = PI.sqrt();
    // general envelope: (1/sqrt(pi)) (t/2) exp(2/t^2 - 2X/t)
    let general = |x: f64| (t / 2.0) * (2.0 / (t * t) - 2.0 * x / t).exp() / sqrt_pi;
    let x_general = quantize(1.0 / t - (t / 2.0) * (2.0 * sqrt_pi * target / t).ln()).max(1.0);
    if t <= 1.0 {
        // e^(2x+2) envelope: (1/sqrt(pi)) e^(2 - 2X) / 2
        let paper = |x: f64| (2.0 - 2.0 * x).exp() / (2.0 * sqrt_pi);
        let x_paper = quantize(1.0 - (2.0 * sqrt_pi * target).ln() / 2.0).max(1.0);
        if x_paper < x_general {
            return (x_paper, paper(x_paper));
        }
    }
    (x_general, general(x_general))
}

/// `f(t)` by tanh-sinh quadrature; `|value - f(t)| <= err_estimate <= tol`.
pub fn f_integral(t: &BigFloat, prec: u32, tol: f64) -> Result<QuadResult> {
    check_args(t, prec, tol)?;
    let tf = t.to_f64();
    let target = tail_target(tol);
    let right = gaussian_cut(1.0, target);
    let right_tail = gaussian_tail(1.0, right);
    let (left, left_tail) = f_left_cut(tf, target);

    let t = t.with_prec(prec);
    let integrand = |x: &BigFloat| {
        let e = -(x * x * phi_real(&(x * &t), prec));
        Complex::real(e.exp())
    };
    let a = BigFloat::from_f64(-left, prec);
    let b = BigFloat::from_f64(right, prec);
    let quad = tanh_sinh(&a, &b, tol - left_tail - right_tail, prec, integrand)?;
    let inv_sqrt_pi = BigFloat::one(prec) / BigFloat::pi(prec).sqrt();
    Ok(QuadResult {
        value: &quad.sum.re * &inv_sqrt_pi,
        imag: BigFloat::zero(prec),
        err_estimate: BigFloat::from_f64(quad.err + left_tail + right_tail, prec),
        nodes: quad.nodes,
    })
}

/// `g(t)` by tanh-sinh quadrature of the complex integrand over the whole
/// symmetric interval. The imaginary part is reported rather than assumed
/// zero; it vanishes because the integrand at `-x` is the conjugate of the
/// integrand at `x`.
pub fn g_integral(t: &BigFloat, prec: u32, tol: f64) -> Result<QuadResult> {
    check_args(t, prec, tol)?;
    let tf = t.to_f64();
    let c = 4.0 / (PI * PI);
    let full = PI / tf;
    let cut = gaussian_cut(c, tail_target(tol) / 2.0);
    let (bound, tail) = if cut < full {
        (BigFloat::from_f64(cut, prec), 2.0 * gaussian_tail(c, cut))
    } else {
        (BigFloat::pi(prec) / t.with_prec(prec), 0.0)
    };

    let t = t.with_prec(prec);
    let integrand = |x: &BigFloat| {
        let z = Complex::imag(x * &t);
        let p = phi_eval(&z, prec);
        let x2 = -(x * x);
        p.scale(&x2).exp()
    };
    let quad = tanh_sinh(&-&bound, &bound, tol - tail, prec, integrand)?;
    let inv_sqrt_pi = BigFloat::one(prec) / BigFloat::pi(prec).sqrt();
    Ok(QuadResult {
        value: &quad.sum.re * &inv_sqrt_pi,
        imag: &quad.sum.im * &inv_sqrt_pi,
        err_estimate: BigFloat::from_f64(quad.err + tail, prec),
        nodes: quad.nodes,
    })
}

/// Sample points for [`bound_checks`].
#[derive(Clone, Debug)]
pub struct BoundGrid {
    /// `u >= 0` for the `psi` checks.
    pub u: Vec<f64>,
    /// `x < 0` for the `exp(2x + 2)` envelope.
    pub x_neg: Vec<f64>,
    /// `x >= 0` for the `exp(-x^2)` envelope.
    pub x_pos: Vec<f64>,
    /// `t` in `[0, 1]`.
    pub t: Vec<f64>,
    /// Number of equal steps splitting `[0, pi]` for the `Re phi(i theta)` checks.
    pub theta_steps: usize,
    /// Allowed `|psi(-u) + e^-u psi(u)|`.
    pub reflection_tol: f64,
}

impl BoundGrid {
    fn range(lo: f64, hi: f64, step: f64, include_hi: bool) -> Vec<f64> {
        let n = ((hi - lo) / step).round() as i64;
        let last = if include_hi { n } else { n - 1 };
        (0..=last).map(|i| lo + i as f64 * step).collect()
    }

    /// `u` in `[0, 20]` step 0.01, `x` in `[-20, 0)` and `[0, 20]` step 0.1,
    /// `t` in `[0, 1]` step 0.05, 1000 steps in `theta`.
    pub fn standard() -> Self {
        BoundGrid {
            u: Self::range(0.0, 20.0, 0.01, true),
            x_neg: Self::range(-20.0, 0.0, 0.1, false),
            x_pos: Self::range(0.0, 20.0, 0.1, true),
            t: Self::range(0.0, 1.0, 0.05, true),
            theta_steps: 1000,
            reflection_tol: 1e-20,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundCheck {
    pub name: &'static str,
    pub passed: bool,
    /// Smallest slack over the grid (negative means violated); for the
    /// reflection identity, the largest residual.
    pub worst_margin: f64,
}

#[derive(Clone, Debug)]
pub struct BoundReport {
    pub checks: Vec<BoundCheck>,
}

impl BoundReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&BoundCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn min_of(it: impl Iterator<Item = BigFloat>) -> Option<BigFloat> {
    it.reduce(|a, b| if b < a { b } else { a })
}

/// Spot-checks of the inequalities that make the integral representations
/// work:
///
/// * `psi(u) >= 0` for `u >= 0`;
/// * `psi(-u) + e^-u psi(u) = 0`;
/// * `exp(-x^2 phi(x t)) <= exp(2x + 2)` for `x < 0` and `<= exp(-x^2)` for
///   `x >= 0` (compared through the exponents);
/// * `Re phi(i theta)` non-increasing on `[0, pi]`, bottoming out at `4/pi^2`.
pub fn bound_checks(grid: &BoundGrid, prec: u32) -> Result<BoundReport> {
    check_prec(prec)?;
    let f = |v: f64| BigFloat::from_f64(v, prec);
    let mut checks = Vec::new();

    let psis: Vec<(BigFloat, BigFloat)> = grid.u.iter().map(|&u| (f(u), psi(&f(u), prec))).collect();
    let worst = min_of(psis.iter().map(|(_, p)| p.clone())).unwrap_or_else(|| BigFloat::zero(prec));
    checks.push(BoundCheck {
        name: "psi_nonnegative",
        passed: !worst.is_negative(),
        worst_margin: worst.to_f64(),
    });

    let residual = psis
        .iter()
        .map(|(u, p)| (psi(&-u, prec) + (-u).exp() * p).abs().to_f64())
        .fold(0.0, f64::max);
    checks.push(BoundCheck {
        name: "psi_reflection",
        passed: residual <= grid.reflection_tol,
        worst_margin: residual,
    });

    let two = BigFloat::from_i64(2, prec);
    let neg = min_of(grid.x_neg.iter().flat_map(|&x| {
        let x = f(x);
        let two = two.clone();
        grid.t
            .iter()
            .map(move |&t| &x * &x * phi_real(&(&x * &f(t)), prec) + x.mul_pow2(1) + &two)
    }))
    .unwrap_or_else(|| BigFloat::zero(prec));
    checks.push(BoundCheck {
        name: "envelope_negative_x",
        passed: !neg.is_negative(),
        worst_margin: neg.to_f64(),
    });

    let pos = min_of(grid.x_pos.iter().flat_map(|&x| {
        let x = f(x);
        grid.t
            .iter()
            .map(move |&t| &x * &x * (phi_real(&(&x * &f(t)), prec) - BigFloat::one(prec)))
    }))
    .unwrap_or_else(|| BigFloat::zero(prec));
    checks.push(BoundCheck {
        name: "envelope_positive_x",
        passed: !pos.is_negative(),
        worst_margin: pos.to_f64(),
    });

    let pi = BigFloat::pi(prec);
    let steps = grid.theta_steps.max(1);
    let re: Vec<BigFloat> = (0..=steps)
        .map(|i| {
            let theta = &pi * &BigFloat::from_i64(i as i64, prec) / BigFloat::from_i64(steps as i64, prec);
            phi_eval(&Complex::imag(theta), prec).re
        })
        .collect();
    let drop = min_of(re.windows(2).map(|w| &w[0] - &w[1])).unwrap_or_else(|| BigFloat::zero(prec));
    checks.push(BoundCheck {
        name: "re_phi_nonincreasing",
        passed: !drop.is_negative(),
        worst_margin: drop.to_f64(),
    });

    let floor = BigFloat::from_i64(4, prec) / (&pi * &pi);
    let eps = BigFloat::one(prec).mul_pow2(16 - i64::from(prec));
    let lowest = min_of(re.iter().cloned()).expect("nonempty");
    let at_pi = re.last().expect("nonempty");
    let slack = &lowest - &floor;
    let passed = (at_pi - &floor).abs() <= eps && slack >= -&eps;
    checks.push(BoundCheck {
        name: "re_phi_minimum",
        passed,
        worst_margin: slack.to_f64(),
    });

    Ok(BoundReport { checks })
}
