//! Arbitrary-precision binary floating point.
//!
//! A [`BigFloat`] is `mant * 2^exp` where `|mant|` carries exactly `prec`
//! significant bits (or is zero). Arithmetic (`+ - * /`, `sqrt`, and
//! conversions from integers and rationals) rounds to nearest, ties to even,
//! at the larger of the operand precisions. Transcendentals run in
//! fixed-point with at least 40 guard bits and are rounded once: `exp` keeps
//! full relative accuracy, `sin`/`cos` are accurate to an absolute error far
//! below one ulp of 1.
//!
//! There are no infinities or NaNs; the exponent is an `i64`, so ordinary
//! use never overflows. Dividing by zero, or taking the square root of a
//! negative number, panics.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::Rational;

/// Smallest working precision accepted by the numeric APIs.
pub const MIN_PREC: u32 = 64;

const GUARD: u64 = 40;

#[derive(Clone, Debug)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

fn round_parts(m: BigInt, exp: i64, prec: u32, sticky: bool) -> BigFloat {
    let prec = prec.max(1);
    let (sign, mut mag) = m.into_parts();
    let mut exp = exp;
    if mag.is_zero() {
        debug_assert!(!sticky);
        return BigFloat::zero(prec);
    }
    if sticky {
        debug_assert!(mag.bits() >= u64::from(prec) + 2);
        mag = (mag << 1u32) | BigUint::one();
        exp -= 1;
    }
    let bits = mag.bits();
    let p = u64::from(prec);
    if bits > p {
        let mut shift = bits - p;
        let mut q = &mag >> shift;
        let rem = mag - (&q << shift);
        let half = BigUint::one() << (shift - 1);
        let up = match rem.cmp(&half) {
            Ordering::Greater => true,
            Ordering::Equal => q.is_odd(),
            Ordering::Less => false,
        };
        if up {
            q += 1u32;
            if q.bits() > p {
                q >>= 1u32;
                shift += 1;
            }
        }
        mag = q;
        exp += shift as i64;
    } else if bits < p {
        let shift = p - bits;
        mag <<= shift;
        exp -= shift as i64;
    }
    BigFloat {
        mant: BigInt::from_biguint(sign, mag),
        exp,
        prec,
    }
}

impl BigFloat {
    pub fn zero(prec: u32) -> Self {
        BigFloat {
            mant: BigInt::zero(),
            exp: 0,
            prec,
        }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        round_parts(v.clone(), 0, prec, false)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        round_parts(BigInt::from(v), 0, prec, false)
    }

    /// Exact conversion of a finite `f64`, then rounded to `prec`.
    pub fn from_f64(v: f64, prec: u32) -> Self {
        assert!(v.is_finite(), "non-finite f64 {v}");
        if v == 0.0 {
            return Self::zero(prec);
        }
        let bits = v.to_bits();
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        let m = if v < 0.0 { -BigInt::from(m) } else { BigInt::from(m) };
        round_parts(m, e, prec, false)
    }

    /// Correctly rounded `num / den`. Panics if `den == 0`.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        assert!(!den.is_zero(), "division by zero");
        if num.is_zero() {
            return Self::zero(prec);
        }
        let negative = num.is_negative() != den.is_negative();
        let a = num.magnitude();
        let b = den.magnitude();
        let s = i64::from(prec) + 2 - (a.bits() as i64 - b.bits() as i64);
        let (q, r) = if s >= 0 {
            (a << (s as u64)).div_rem(b)
        } else {
            a.div_rem(&(b << ((-s) as u64)))
        };
        let sign = if negative { Sign::Minus } else { Sign::Plus };
        round_parts(BigInt::from_biguint(sign, q), -s, prec, !r.is_zero())
    }

    pub fn from_rational(v: &Rational, prec: u32) -> Self {
        Self::from_ratio(v.numer(), v.denom(), prec)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// The same value rounded to `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Self {
        round_parts(self.mant.clone(), self.exp, prec, false)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            mant: self.mant.abs(),
            ..self.clone()
        }
    }

    /// Multiplies by `2^k` exactly.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        BigFloat {
            exp: self.exp + k,
            ..self.clone()
        }
    }

    /// Exact value as a rational.
    pub fn to_rational(&self) -> Rational {
        if self.exp >= 0 {
            Rational::from_integer(&self.mant << (self.exp as u64))
        } else {
            Rational::new(self.mant.clone(), BigInt::one() << ((-self.exp) as u64))
        }
    }

    /// Position of the leading bit: `2^(top-1) <= |x| < 2^top`.
    fn top(&self) -> i64 {
        self.exp + self.mant.bits() as i64
    }

    /// `log2 |x|`, approximately. Not meaningful for zero.
    pub fn log2_approx(&self) -> f64 {
        let bits = self.mant.bits();
        let shift = bits.saturating_sub(53);
        let head = (self.mant.magnitude() >> shift).to_f64().unwrap_or(1.0);
        head.log2() + (self.exp + shift as i64) as f64
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        let shift = bits.saturating_sub(64);
        let head = (self.mant.magnitude() >> shift).to_u64().unwrap_or(u64::MAX) as f64;
        let mut e = self.exp + shift as i64;
        let mut v = head;
        while e > 1000 {
            v *= 2f64.powi(1000);
            e -= 1000;
            if v.is_infinite() {
                break;
            }
        }
        while e < -1000 {
            v *= 2f64.powi(-1000);
            e += 1000;
            if v == 0.0 {
                break;
            }
        }
        v *= 2f64.powi(e as i32);
        if self.is_negative() {
            -v
        } else {
            v
        }
    }

    /// Nearest integer, ties away from zero.
    pub fn round_to_bigint(&self) -> BigInt {
        if self.exp >= 0 {
            return &self.mant << (self.exp as u64);
        }
        let shift = (-self.exp) as u64;
        let mag = self.mant.magnitude();
        let half = BigUint::one() << (shift - 1);
        let q: BigUint = (mag + half) >> shift;
        BigInt::from_biguint(self.mant.sign(), q)
    }

    /// `floor(x * 2^w)` as an integer.
    fn to_fixed(&self, w: u64) -> BigInt {
        let e = self.exp + w as i64;
        if e >= 0 {
            &self.mant << (e as u64)
        } else {
            self.mant.clone() >> ((-e) as u64)
        }
    }

    fn from_fixed(v: BigInt, w: u64, prec: u32) -> Self {
        round_parts(v, -(w as i64), prec, false)
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "sqrt of negative value");
        if self.is_zero() {
            return self.clone();
        }
        let p = u64::from(self.prec);
        let bits = self.mant.bits();
        let mut s = (2 * p + 4).saturating_sub(bits) as i64;
        if (self.exp - s).rem_euclid(2) != 0 {
            s += 1;
        }
        let m: BigUint = self.mant.magnitude() << (s as u64);
        let r = m.sqrt();
        let sticky = &r * &r != m;
        round_parts(BigInt::from(r), (self.exp - s) / 2, self.prec, sticky)
    }

    /// `e^x` with full relative accuracy.
    pub fn exp(&self) -> Self {
        let prec = self.prec;
        if self.is_zero() {
            return Self::one(prec);
        }
        let k = (self.to_f64() / std::f64::consts::LN_2).round() as i64;
        let w = u64::from(prec) + GUARD + 64 - k.unsigned_abs().leading_zeros() as u64;
        let r = self.to_fixed(w) - BigInt::from(k) * ln2_fixed(w);
        let one = BigInt::one() << w;
        let mut sum = one.clone();
        let mut term = one;
        let mut j = 1u32;
        loop {
            term = ((term * &r) >> w) / j;
            if term.is_zero() {
                break;
            }
            sum += &term;
            j += 1;
        }
        round_parts(sum, k - w as i64, prec, false)
    }

    /// `(sin x, cos x)`.
    pub fn sin_cos(&self) -> (Self, Self) {
        let prec = self.prec;
        if self.is_zero() {
            return (Self::zero(prec), Self::one(prec));
        }
        let q = (self.to_f64() / std::f64::consts::FRAC_PI_2).round() as i64;
        let w = u64::from(prec) + GUARD + 64 - q.unsigned_abs().leading_zeros() as u64;
        // r = x - q*pi/2, computed as (2x - q*pi) / 2 to avoid halving pi
        let r = ((self.to_fixed(w) << 1u32) - BigInt::from(q) * pi_fixed(w)) >> 1u32;
        let mut sin = BigInt::zero();
        let mut cos = BigInt::one() << w;
        let mut term = BigInt::one() << w;
        let mut j = 1u32;
        loop {
            term = ((term * &r) >> w) / j;
            if term.is_zero() {
                break;
            }
            let neg = (j / 2) % 2 == 1;
            let slot = if j % 2 == 1 { &mut sin } else { &mut cos };
            if neg {
                *slot -= &term;
            } else {
                *slot += &term;
            }
            j += 1;
        }
        let (s, c) = match q.rem_euclid(4) {
            0 => (sin, cos),
            1 => (cos, -sin),
            2 => (-sin, -cos),
            _ => (-cos, sin),
        };
        (Self::from_fixed(s, w, prec), Self::from_fixed(c, w, prec))
    }

    pub fn pi(prec: u32) -> Self {
        let w = u64::from(prec) + GUARD;
        Self::from_fixed(pi_fixed(w), w, prec)
    }

    pub fn ln2(prec: u32) -> Self {
        let w = u64::from(prec) + GUARD;
        Self::from_fixed(ln2_fixed(w), w, prec)
    }

    /// Scientific notation with `digits` significant digits, in the style of
    /// Rust's `{:e}` (`1.5e-3`, `2e0`), trailing zeros removed.
    pub fn to_sci_string(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.is_zero() {
            return "0e0".to_string();
        }
        let r = self.to_rational().abs();
        let ten = BigInt::from(10);
        let upper = num_traits::pow(ten.clone(), digits);
        let lower = num_traits::pow(ten.clone(), digits - 1);
        let mut e10 = (self.log2_approx() * std::f64::consts::LOG10_2).floor() as i64;
        let n = loop {
            let k = digits as i64 - 1 - e10;
            let p10 = num_traits::pow(ten.clone(), k.unsigned_abs() as usize);
            let scaled = if k >= 0 {
                &r * Rational::from_integer(p10)
            } else {
                &r / Rational::from_integer(p10)
            };
            let n = round_half_even(&scaled);
            if n >= upper {
                e10 += 1;
            } else if n < lower {
                e10 -= 1;
            } else {
                break n;
            }
        };
        let s = n.to_string();
        let (head, tail) = s.split_at(1);
        let tail = tail.trim_end_matches('0');
        let sign = if self.is_negative() { "-" } else { "" };
        if tail.is_empty() {
            format!("{sign}{head}e{e10}")
        } else {
            format!("{sign}{head}.{tail}e{e10}")
        }
    }

    /// Shortest decimal string that parses back to exactly this value at
    /// this value's precision.
    pub fn to_shortest_string(&self) -> String {
        let max = (f64::from(self.prec) * std::f64::consts::LOG10_2).ceil() as usize + 2;
        for d in 1..max {
            let s = self.to_sci_string(d);
            if Self::parse(&s, self.prec).is_ok_and(|v| v == *self) {
                return s;
            }
        }
        self.to_sci_string(max)
    }

    /// Parses a decimal literal such as `-12.5`, `3e-7` or `1.0844e0`,
    /// rounding to `prec` bits.
    pub fn parse(s: &str, prec: u32) -> Result<Self> {
        let r = parse_decimal(s).ok_or_else(|| Error::Parse(format!("not a decimal number: {s:?}")))?;
        Ok(Self::from_rational(&r, prec))
    }
}

fn round_half_even(r: &Rational) -> BigInt {
    let two = BigInt::from(2);
    let (q, rem) = r.numer().div_mod_floor(r.denom());
    match (&rem * &two).cmp(r.denom()) {
        Ordering::Greater => q + 1,
        Ordering::Less => q,
        Ordering::Equal => {
            if q.is_odd() {
                q + 1
            } else {
                q
            }
        }
    }
}

/// Exact rational value of a decimal literal.
pub(crate) fn parse_decimal(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (mantissa, exp10) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i64>().ok()?),
        None => (body, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse::<BigInt>().ok()? / 10;
    let e = exp10 - frac_part.len() as i64;
    let p10 = num_traits::pow(BigInt::from(10), e.unsigned_abs() as usize);
    let v = if e >= 0 {
        Rational::from_integer(digits * p10)
    } else {
        Rational::new(digits, p10)
    };
    Some(if negative { -v } else { v })
}

/// Caches a fixed-point constant at the highest precision requested so far.
fn cached_fixed(cache: &Mutex<(u64, BigInt)>, w: u64, compute: fn(u64) -> BigInt) -> BigInt {
    let mut slot = cache.lock().unwrap_or_else(|e| e.into_inner());
    if slot.0 < w {
        let work = w.max(2 * slot.0) + 32;
        *slot = (work, compute(work));
    }
    &slot.1 >> (slot.0 - w)
}

/// `atan(1/x) * 2^w`, truncated.
fn atan_inv_fixed(x: u64, w: u64) -> BigInt {
    let x2 = BigInt::from(x * x);
    let mut term = (BigInt::one() << w) / x;
    let mut sum = term.clone();
    let mut k = 1u64;
    while !term.is_zero() {
        term /= &x2;
        let t = &term / (2 * k + 1);
        if k % 2 == 1 {
            sum -= t;
        } else {
            sum += t;
        }
        k += 1;
    }
    sum
}

fn pi_fixed(w: u64) -> BigInt {
    static CACHE: OnceLock<Mutex<(u64, BigInt)>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new((0, BigInt::zero())));
    cached_fixed(cache, w, |w| {
        let g = w + 16;
        // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
        let v = atan_inv_fixed(5, g) * 16 - atan_inv_fixed(239, g) * 4;
        v >> 16u32
    })
}

fn ln2_fixed(w: u64) -> BigInt {
    static CACHE: OnceLock<Mutex<(u64, BigInt)>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new((0, BigInt::zero())));
    cached_fixed(cache, w, |w| {
        let g = w + 16;
        // ln 2 = sum_{k>=1} 1 / (k 2^k)
        let mut sum = BigInt::zero();
        let mut k = 1u64;
        loop {
            let t = (BigInt::one() << g.saturating_sub(k)) / k;
            if k > g || t.is_zero() {
                break;
            }
            sum += t;
            k += 1;
        }
        sum >> 16u32
    })
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let sa = self.mant.sign();
        let sb = other.mant.sign();
        if sa != sb {
            let rank = |s: Sign| match s {
                Sign::Minus => 0,
                Sign::NoSign => 1,
                Sign::Plus => 2,
            };
            return Some(rank(sa).cmp(&rank(sb)));
        }
        if sa == Sign::NoSign {
            return Some(Ordering::Equal);
        }
        let mag = match self.top().cmp(&other.top()) {
            Ordering::Equal => {
                let e = self.exp.min(other.exp);
                let a = self.mant.magnitude() << ((self.exp - e) as u64);
                let b = other.mant.magnitude() << ((other.exp - e) as u64);
                a.cmp(&b)
            }
            o => o,
        };
        Some(if sa == Sign::Minus { mag.reverse() } else { mag })
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_shortest_string())
    }
}

fn add_impl(a: &BigFloat, b: &BigFloat, negate_b: bool) -> BigFloat {
    let prec = a.prec.max(b.prec);
    let b_signed = |v: &BigInt| if negate_b { -v } else { v.clone() };
    if b.is_zero() {
        return a.with_prec(prec);
    }
    if a.is_zero() {
        return round_parts(b_signed(&b.mant), b.exp, prec, false);
    }
    let (mut xa, mut ea) = (a.mant.clone(), a.exp);
    let (mut xb, mut eb) = (b_signed(&b.mant), b.exp);
    // An operand entirely below the rounding position only contributes a
    // sticky bit; replace it by a tiny value of the same sign.
    let gap = i64::from(prec) + 4;
    if b.top() < a.top() - gap {
        xb = xb.signum();
        eb = a.top() - gap;
    } else if a.top() < b.top() - gap {
        xa = xa.signum();
        ea = b.top() - gap;
    }
    let e = ea.min(eb);
    let sum = (xa << ((ea - e) as u64)) + (xb << ((eb - e) as u64));
    round_parts(sum, e, prec, false)
}

fn mul_impl(a: &BigFloat, b: &BigFloat) -> BigFloat {
    round_parts(&a.mant * &b.mant, a.exp + b.exp, a.prec.max(b.prec), false)
}

fn div_impl(a: &BigFloat, b: &BigFloat) -> BigFloat {
    let prec = a.prec.max(b.prec);
    BigFloat::from_ratio(&a.mant, &b.mant, prec).mul_pow2(a.exp - b.exp)
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&BigFloat> for &BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: &BigFloat) -> BigFloat {
                $body(self, rhs)
            }
        }
        impl $trait<BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: BigFloat) -> BigFloat {
                $body(&self, &rhs)
            }
        }
        impl $trait<&BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: &BigFloat) -> BigFloat {
                $body(&self, rhs)
            }
        }
        impl $trait<BigFloat> for &BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: BigFloat) -> BigFloat {
                $body(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| add_impl(a, b, false));
forward_binop!(Sub, sub, |a, b| add_impl(a, b, true));
forward_binop!(Mul, mul, mul_impl);
forward_binop!(Div, div, div_impl);

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat {
            mant: -self.mant,
            ..self
        }
    }
}

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        -self.clone()
    }
}

/// Complex number over [`BigFloat`].
#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl Complex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        Complex { re, im }
    }

    pub fn real(re: BigFloat) -> Self {
        let prec = re.prec();
        Complex {
            re,
            im: BigFloat::zero(prec),
        }
    }

    pub fn imag(im: BigFloat) -> Self {
        let prec = im.prec();
        Complex {
            re: BigFloat::zero(prec),
            im,
        }
    }

    pub fn zero(prec: u32) -> Self {
        Complex::real(BigFloat::zero(prec))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn scale(&self, s: &BigFloat) -> Self {
        Complex::new(&self.re * s, &self.im * s)
    }

    pub fn norm_sqr(&self) -> BigFloat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs(&self) -> BigFloat {
        self.norm_sqr().sqrt()
    }

    pub fn exp(&self) -> Self {
        let m = self.re.exp();
        let (s, c) = self.im.sin_cos();
        Complex::new(&m * &c, &m * &s)
    }
}

impl Add<&Complex> for &Complex {
    type Output = Complex;
    fn add(self, rhs: &Complex) -> Complex {
        Complex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub<&Complex> for &Complex {
    type Output = Complex;
    fn sub(self, rhs: &Complex) -> Complex {
        Complex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul<&Complex> for &Complex {
    type Output = Complex;
    fn mul(self, rhs: &Complex) -> Complex {
        Complex::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Div<&Complex> for &Complex {
    type Output = Complex;
    fn div(self, rhs: &Complex) -> Complex {
        let d = rhs.norm_sqr();
        Complex::new(
            (&self.re * &rhs.re + &self.im * &rhs.im) / &d,
            (&self.im * &rhs.re - &self.re * &rhs.im) / &d,
        )
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-&self.re, -&self.im)
    }
}
