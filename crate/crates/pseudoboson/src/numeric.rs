//! High-precision numerics shared by the non-exact code paths.
//!
//! Exact data lives in [`ExactScalar`]; everything that leaves the rational
//! world (Gaussian moments, quadrature references, series partial sums, Fock
//! matrices) is computed in MPFR floats at a configurable precision, wrapped
//! in the small complex type [`Cx`]. [`Value`] is the exact-or-approximate
//! sum type used wherever a quantity stays exact when its inputs were exact.

use std::fmt;

use rug::float::Constant;
use rug::{Float, Rational};
use serde_json::{json, Value as Json};

use crate::scalar::{ExactScalar, ScalarError};

/// Working precision, stored in bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Prec(u32);

impl Prec {
    /// Precision holding roughly `digits` significant decimal digits.
    pub fn from_digits(digits: u32) -> Self {
        let bits = (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32;
        Prec(bits.max(24) + 16)
    }

    pub fn from_bits(bits: u32) -> Self {
        Prec(bits.max(24))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// Decimal digits carried, rounded down.
    pub fn digits(self) -> u32 {
        ((f64::from(self.0) - 16.0) / std::f64::consts::LOG2_10).floor() as u32
    }

    /// Same precision with extra guard bits, for internal oracles.
    pub fn boosted(self, extra_digits: u32) -> Self {
        Prec(self.0 + (f64::from(extra_digits) * std::f64::consts::LOG2_10).ceil() as u32)
    }
}

impl Default for Prec {
    fn default() -> Self {
        Prec::from_digits(34)
    }
}

pub fn float_pi(prec: Prec) -> Float {
    Float::with_val(prec.bits(), Constant::Pi)
}

pub fn float_from_rational(q: &Rational, prec: Prec) -> Float {
    Float::with_val(prec.bits(), q)
}

/// Exact `n!` as a rational.
pub fn factorial(n: u32) -> Rational {
    let mut acc = Rational::from(1);
    for k in 2..=u64::from(n) {
        acc *= k;
    }
    acc
}

/// Complex number backed by two MPFR floats.
#[derive(Debug, Clone, PartialEq)]
pub struct Cx {
    pub re: Float,
    pub im: Float,
}

impl Cx {
    pub fn new(re: Float, im: Float) -> Self {
        Cx { re, im }
    }

    pub fn zero(prec: Prec) -> Self {
        Cx::new(
            Float::with_val(prec.bits(), 0),
            Float::with_val(prec.bits(), 0),
        )
    }

    pub fn one(prec: Prec) -> Self {
        Cx::from_f64(1.0, prec)
    }

    pub fn from_f64(x: f64, prec: Prec) -> Self {
        Cx::new(
            Float::with_val(prec.bits(), x),
            Float::with_val(prec.bits(), 0),
        )
    }

    pub fn real(re: Float) -> Self {
        let p = re.prec();
        Cx::new(re, Float::with_val(p, 0))
    }

    pub fn from_rational(q: &Rational, prec: Prec) -> Self {
        Cx::real(float_from_rational(q, prec))
    }

    /// `(re + i·im)·√rad` evaluated in floats.
    pub fn from_scalar(s: &ExactScalar, prec: Prec) -> Self {
        let root = float_from_rational(s.radical(), prec).sqrt();
        Cx::new(
            float_from_rational(s.re(), prec) * &root,
            float_from_rational(s.im(), prec) * &root,
        )
    }

    fn prec_bits(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn add(&self, rhs: &Cx) -> Cx {
        let p = self.prec_bits().max(rhs.prec_bits());
        Cx::new(
            Float::with_val(p, &self.re + &rhs.re),
            Float::with_val(p, &self.im + &rhs.im),
        )
    }

    pub fn sub(&self, rhs: &Cx) -> Cx {
        let p = self.prec_bits().max(rhs.prec_bits());
        Cx::new(
            Float::with_val(p, &self.re - &rhs.re),
            Float::with_val(p, &self.im - &rhs.im),
        )
    }

    pub fn mul(&self, rhs: &Cx) -> Cx {
        let p = self.prec_bits().max(rhs.prec_bits());
        let re = Float::with_val(p, &self.re * &rhs.re) - Float::with_val(p, &self.im * &rhs.im);
        let im = Float::with_val(p, &self.re * &rhs.im) + Float::with_val(p, &self.im * &rhs.re);
        Cx::new(re, im)
    }

    pub fn div(&self, rhs: &Cx) -> Cx {
        let p = self.prec_bits().max(rhs.prec_bits());
        let den = rhs.norm_sqr();
        let num = self.mul(&rhs.conj());
        Cx::new(
            Float::with_val(p, &num.re / &den),
            Float::with_val(p, &num.im / &den),
        )
    }

    pub fn scale(&self, t: &Float) -> Cx {
        let p = self.prec_bits().max(t.prec());
        Cx::new(
            Float::with_val(p, &self.re * t),
            Float::with_val(p, &self.im * t),
        )
    }

    pub fn neg(&self) -> Cx {
        Cx::new(
            Float::with_val(self.re.prec(), -&self.re),
            Float::with_val(self.im.prec(), -&self.im),
        )
    }

    pub fn conj(&self) -> Cx {
        Cx::new(self.re.clone(), Float::with_val(self.im.prec(), -&self.im))
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec_bits();
        Float::with_val(p, &self.re * &self.re) + Float::with_val(p, &self.im * &self.im)
    }

    pub fn abs(&self) -> Float {
        self.norm_sqr().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// Deterministic decimal rendering at a fixed digit count.
    pub fn to_string_digits(&self, digits: usize) -> String {
        let re = self.re.to_string_radix(10, Some(digits));
        if self.im.is_zero() {
            re
        } else {
            format!("{re} + {}i", self.im.to_string_radix(10, Some(digits)))
        }
    }

    pub fn to_json(&self, digits: usize) -> Json {
        json!({
            "re": self.re.to_string_radix(10, Some(digits)),
            "im": self.im.to_string_radix(10, Some(digits)),
        })
    }
}

impl fmt::Display for Cx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_digits(20))
    }
}

/// A quantity that is exact when its inputs were exact, and a high-precision
/// float otherwise. Exactness degrades (never upgrades) through arithmetic;
/// adding two exact values whose radicals differ falls back to floats.
#[derive(Debug, Clone)]
pub enum Value {
    Exact(ExactScalar),
    Approx(Cx),
}

impl Value {
    pub fn zero() -> Self {
        Value::Exact(ExactScalar::zero())
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Value::Exact(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Value::Exact(s) => s.is_zero(),
            Value::Approx(c) => c.re.is_zero() && c.im.is_zero(),
        }
    }

    pub fn as_exact(&self) -> Option<&ExactScalar> {
        match self {
            Value::Exact(s) => Some(s),
            Value::Approx(_) => None,
        }
    }

    pub fn to_cx(&self, prec: Prec) -> Cx {
        match self {
            Value::Exact(s) => Cx::from_scalar(s, prec),
            Value::Approx(c) => c.clone(),
        }
    }

    pub fn add(&self, rhs: &Value, prec: Prec) -> Value {
        match (self, rhs) {
            (Value::Exact(a), Value::Exact(b)) => match a.try_add(b) {
                Ok(sum) => Value::Exact(sum),
                Err(ScalarError::RadicalMismatch { .. }) => {
                    Value::Approx(Cx::from_scalar(a, prec).add(&Cx::from_scalar(b, prec)))
                }
                Err(e) => unreachable!("exact addition can only fail on radicals: {e}"),
            },
            _ => Value::Approx(self.to_cx(prec).add(&rhs.to_cx(prec))),
        }
    }

    pub fn mul(&self, rhs: &Value, prec: Prec) -> Value {
        match (self, rhs) {
            (Value::Exact(a), Value::Exact(b)) => Value::Exact(a.mul(b)),
            _ => Value::Approx(self.to_cx(prec).mul(&rhs.to_cx(prec))),
        }
    }

    pub fn neg(&self) -> Value {
        match self {
            Value::Exact(s) => Value::Exact(s.neg()),
            Value::Approx(c) => Value::Approx(c.neg()),
        }
    }

    pub fn conj(&self) -> Value {
        match self {
            Value::Exact(s) => Value::Exact(s.conj()),
            Value::Approx(c) => Value::Approx(c.conj()),
        }
    }

    /// Rendering used in reports: exact values print in closed form, floats
    /// at the requested digit count.
    pub fn render(&self, digits: usize) -> String {
        match self {
            Value::Exact(s) => s.to_string(),
            Value::Approx(c) => c.to_string_digits(digits),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(20))
    }
}

/// Truncated power series `Σ coeffs[n]·x^n` with exact-or-approx
/// coefficients.
#[derive(Debug, Clone)]
pub struct PowerSeries {
    coeffs: Vec<Value>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<Value>) -> Self {
        PowerSeries { coeffs }
    }

    pub fn zero() -> Self {
        PowerSeries { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[Value] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Value {
        self.coeffs.get(n).cloned().unwrap_or_else(Value::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        let mut last = None;
        for (n, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                last = Some(n);
            }
        }
        last
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    /// Horner evaluation at a real point.
    pub fn eval(&self, x: &Float, prec: Prec) -> Cx {
        let mut acc = Cx::zero(prec);
        for c in self.coeffs.iter().rev() {
            acc = acc.scale(x).add(&c.to_cx(prec));
        }
        acc
    }

    pub fn to_json(&self, digits: usize) -> Json {
        Json::Array(
            self.coeffs
                .iter()
                .map(|c| Json::String(c.render(digits)))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_roundtrip() {
        let p = Prec::from_digits(34);
        assert!(p.digits() >= 34);
        assert!(p.bits() >= 113);
    }

    #[test]
    fn scalar_to_float_matches() {
        // (1/2)·√2 = 0.7071...
        let s = ExactScalar::sqrt_rational(&Rational::from((1, 2))).unwrap();
        let c = Cx::from_scalar(&s, Prec::default());
        assert!((c.re.to_f64() - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn value_addition_promotes_on_radical_mismatch() {
        let a = Value::Exact(ExactScalar::sqrt_uint(2));
        let b = Value::Exact(ExactScalar::sqrt_uint(3));
        let sum = a.add(&b, Prec::default());
        assert!(!sum.is_exact());
        let (re, _) = sum.to_cx(Prec::default()).to_f64();
        assert!((re - (2f64.sqrt() + 3f64.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn series_eval_horner() {
        // 1 - x^2/2
        let p = PowerSeries::new(vec![
            Value::Exact(ExactScalar::one()),
            Value::zero(),
            Value::Exact(ExactScalar::from_i64_parts((-1, 2), (0, 1))),
        ]);
        let x = Float::with_val(64, 2.0);
        let (re, im) = p.eval(&x, Prec::default()).to_f64();
        assert_eq!(re, -1.0);
        assert_eq!(im, 0.0);
    }

    #[test]
    fn complex_division() {
        let p = Prec::default();
        let a = Cx::new(Float::with_val(64, 1), Float::with_val(64, 2));
        let b = Cx::new(Float::with_val(64, 3), Float::with_val(64, -1));
        let q = a.div(&b);
        let back = q.mul(&b);
        assert!(back.sub(&a).abs().to_f64() < 1e-15, "{}", p.bits());
    }
}
