//! Exact complex scalars with an optional square-root radical factor.
//!
//! An [`ExactScalar`] represents `(re + i·im)·√rad` where `re`, `im`, `rad`
//! are rationals and `rad > 0`. The radical is kept canonical (numerator and
//! denominator square-free, `rad = 1` for the zero scalar), so structural
//! equality of scalars is decidable by plain field comparison. Radicals are
//! closed under multiplication; addition is defined only between scalars
//! whose canonical radicals agree and reports a mismatch otherwise.

use std::cmp::Ordering;
use std::fmt;

use rug::{Integer, Rational};
use thiserror::Error;

/// Largest integer (numerator or denominator of a radicand) accepted by the
/// square-root constructors. Keeps the trial-division factorization bounded.
pub const MAX_RADICAND: u64 = 1_000_000_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    /// Addition of two scalars whose square-free radicals differ.
    #[error("radical mismatch: cannot add √({left}) and √({right}) exactly")]
    RadicalMismatch { left: String, right: String },
    #[error("radicand must be positive, got {0}")]
    NonPositiveRadicand(String),
    #[error("radicand {0} exceeds the factorization bound {MAX_RADICAND}")]
    RadicandTooLarge(String),
    #[error("division by zero scalar")]
    DivisionByZero,
    #[error("invalid scalar component: {0}")]
    InvalidComponent(String),
}

/// Exact complex rational scalar carrying a square-free radical factor.
///
/// Value represented: `(re + i·im)·√rad`. Canonical form keeps `rad` a
/// square-free positive integer (`√(p/q)` is rewritten as `√(pq)/q`), so
/// every value has exactly one representation and equality is structural.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactScalar {
    re: Rational,
    im: Rational,
    rad: Rational,
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

/// Split `n > 0` as `s²·r` with `r` square-free, by trial division.
fn squarefree_split(n: &Integer) -> (Integer, Integer) {
    let mut m = n.clone();
    let mut s = Integer::from(1);
    let mut d = Integer::from(2);
    loop {
        let dsq = Integer::from(&d * &d);
        if dsq > m {
            break;
        }
        while m.is_divisible(&dsq) {
            m /= &dsq;
            s *= &d;
        }
        d += 1;
    }
    (s, m)
}

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar {
            re: Rational::new(),
            im: Rational::new(),
            rad: Rational::from(1),
        }
    }

    pub fn one() -> Self {
        ExactScalar::from_rational(Rational::from(1))
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        ExactScalar {
            re: Rational::new(),
            im: Rational::from(1),
            rad: Rational::from(1),
        }
    }

    pub fn from_int(n: i64) -> Self {
        ExactScalar::from_rational(Rational::from(n))
    }

    pub fn from_rational(re: Rational) -> Self {
        ExactScalar {
            re,
            im: Rational::new(),
            rad: Rational::from(1),
        }
        .normalized()
    }

    pub fn from_parts(re: Rational, im: Rational) -> Self {
        ExactScalar {
            re,
            im,
            rad: Rational::from(1),
        }
        .normalized()
    }

    pub fn from_i64_parts(re: (i64, i64), im: (i64, i64)) -> Self {
        ExactScalar::from_parts(rat(re.0, re.1), rat(im.0, im.1))
    }

    /// `√q` for a positive rational `q`, in canonical form.
    ///
    /// `√8` normalizes to `2·√2`; `√(1/2)` to `√(1/2)` (both parts already
    /// square-free).
    pub fn sqrt_rational(q: &Rational) -> Result<Self, ScalarError> {
        if q.cmp0() != Ordering::Greater {
            return Err(ScalarError::NonPositiveRadicand(q.to_string()));
        }
        let bound = Integer::from(MAX_RADICAND);
        if *q.numer() > bound || *q.denom() > bound {
            return Err(ScalarError::RadicandTooLarge(q.to_string()));
        }
        let (sn, rn) = squarefree_split(q.numer());
        let (sd, rd) = squarefree_split(q.denom());
        // √(p/q) = (sn/(sd·rd))·√(rn·rd): rn and rd are coprime square-free,
        // so their product is square-free and the radical stays integral
        let rad = Integer::from(&rn * &rd);
        Ok(ExactScalar {
            re: Rational::from((sn, Integer::from(&sd * &rd))),
            im: Rational::new(),
            rad: Rational::from(rad),
        }
        .normalized())
    }

    pub fn sqrt_uint(n: u64) -> Self {
        ExactScalar::sqrt_rational(&Rational::from(n)).expect("positive integer radicand")
    }

    /// `√(n!)`, built incrementally so no large integer is ever factored.
    pub fn sqrt_factorial(n: u32) -> Self {
        let mut acc = ExactScalar::one();
        for k in 2..=u64::from(n) {
            acc = acc.mul(&ExactScalar::sqrt_uint(k));
        }
        acc
    }

    /// `1/√(n!)`.
    pub fn inv_sqrt_factorial(n: u32) -> Self {
        ExactScalar::sqrt_factorial(n)
            .inv()
            .expect("factorial is nonzero")
    }

    fn normalized(mut self) -> Self {
        debug_assert!(self.rad.cmp0() == Ordering::Greater);
        if self.re.cmp0() == Ordering::Equal && self.im.cmp0() == Ordering::Equal {
            self.rad = Rational::from(1);
            return self;
        }
        if *self.rad.denom() != 1 {
            // √(p/q) = √(pq)/q
            let q = Integer::from(self.rad.denom());
            let pq = Integer::from(self.rad.numer() * &q);
            self.re /= &q;
            self.im /= &q;
            self.rad = Rational::from(pq);
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.re.cmp0() == Ordering::Equal && self.im.cmp0() == Ordering::Equal
    }

    pub fn is_one(&self) -> bool {
        *self == ExactScalar::one()
    }

    /// True when the value lies in ℚ (no imaginary part, trivial radical).
    pub fn is_rational(&self) -> bool {
        self.im.cmp0() == Ordering::Equal && self.rad == 1
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn im(&self) -> &Rational {
        &self.im
    }

    pub fn radical(&self) -> &Rational {
        &self.rad
    }

    pub fn neg(&self) -> Self {
        ExactScalar {
            re: Rational::from(-&self.re),
            im: Rational::from(-&self.im),
            rad: self.rad.clone(),
        }
        .normalized()
    }

    pub fn conj(&self) -> Self {
        ExactScalar {
            re: self.re.clone(),
            im: Rational::from(-&self.im),
            rad: self.rad.clone(),
        }
        .normalized()
    }

    /// Exact addition; defined only when the canonical radicals agree.
    pub fn try_add(&self, other: &Self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.rad != other.rad {
            return Err(ScalarError::RadicalMismatch {
                left: self.rad.to_string(),
                right: other.rad.to_string(),
            });
        }
        Ok(ExactScalar {
            re: Rational::from(&self.re + &other.re),
            im: Rational::from(&self.im + &other.im),
            rad: self.rad.clone(),
        }
        .normalized())
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ScalarError> {
        self.try_add(&other.neg())
    }

    /// Exact multiplication. Radicals multiply; the product radical is put
    /// back in square-free canonical form using only gcd extractions, so no
    /// factorization of large numbers is required.
    pub fn mul(&self, other: &Self) -> Self {
        let re = Rational::from(&self.re * &other.re) - Rational::from(&self.im * &other.im);
        let im = Rational::from(&self.re * &other.im) + Rational::from(&self.im * &other.re);
        let (carry, rad) = combine_radicals(&self.rad, &other.rad);
        ExactScalar {
            re: re * &carry,
            im: im * &carry,
            rad,
        }
        .normalized()
    }

    pub fn mul_rational(&self, q: &Rational) -> Self {
        ExactScalar {
            re: Rational::from(&self.re * q),
            im: Rational::from(&self.im * q),
            rad: self.rad.clone(),
        }
        .normalized()
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        // 1/(z·√r) = (z̄/|z|²)·√r/r for the integral square-free radical r
        let denom = Rational::from(&self.rad * &(Rational::from(&self.re * &self.re) + Rational::from(&self.im * &self.im)));
        Ok(ExactScalar {
            re: Rational::from(&self.re / &denom),
            im: -Rational::from(&self.im / &denom),
            rad: self.rad.clone(),
        }
        .normalized())
    }

    pub fn div(&self, other: &Self) -> Result<Self, ScalarError> {
        Ok(self.mul(&other.inv()?))
    }

    /// `(-1)^n` as an exact scalar.
    pub fn alternating_sign(n: u32) -> Self {
        if n.is_multiple_of(2) {
            ExactScalar::one()
        } else {
            ExactScalar::from_int(-1)
        }
    }

    /// Serialize as the canonical six-component tuple
    /// `[re_num, re_den, im_num, im_den, rad_num, rad_den]`.
    pub fn to_components(&self) -> [String; 6] {
        [
            self.re.numer().to_string(),
            self.re.denom().to_string(),
            self.im.numer().to_string(),
            self.im.denom().to_string(),
            self.rad.numer().to_string(),
            self.rad.denom().to_string(),
        ]
    }

    /// Parse the six-component tuple form. The radical is re-canonicalized,
    /// so any square factors present in the input are extracted.
    pub fn from_components(parts: &[String]) -> Result<Self, ScalarError> {
        if parts.len() != 6 {
            return Err(ScalarError::InvalidComponent(format!(
                "expected 6 components, got {}",
                parts.len()
            )));
        }
        let int = |s: &String| {
            Integer::parse(s.as_str())
                .map(Integer::from)
                .map_err(|_| ScalarError::InvalidComponent(s.clone()))
        };
        let ratio = |n: &String, d: &String| -> Result<Rational, ScalarError> {
            let den = int(d)?;
            if den.cmp0() == Ordering::Equal {
                return Err(ScalarError::InvalidComponent(format!("{n}/{d}")));
            }
            Ok(Rational::from((int(n)?, den)))
        };
        let re = ratio(&parts[0], &parts[1])?;
        let im = ratio(&parts[2], &parts[3])?;
        let rad = ratio(&parts[4], &parts[5])?;
        let base = ExactScalar::from_parts(re, im);
        let root = ExactScalar::sqrt_rational(&rad)?;
        Ok(base.mul(&root))
    }
}

/// `√r1·√r2 = carry·√rad` with `rad` canonical square-free.
fn combine_radicals(r1: &Rational, r2: &Rational) -> (Rational, Rational) {
    if *r1 == 1 {
        return (Rational::from(1), r2.clone());
    }
    if *r2 == 1 {
        return (Rational::from(1), r1.clone());
    }
    let gpp = Integer::from(r1.numer().gcd_ref(r2.numer()));
    let gqq = Integer::from(r1.denom().gcd_ref(r2.denom()));
    let mut pnew = Integer::from(r1.numer() / &gpp) * Integer::from(r2.numer() / &gpp);
    let mut qnew = Integer::from(r1.denom() / &gqq) * Integer::from(r2.denom() / &gqq);
    // A prime shared between the remaining numerator and denominator appears
    // once in each, so it cancels as a plain fraction under the root.
    let cross = Integer::from(pnew.gcd_ref(&qnew));
    pnew /= &cross;
    qnew /= &cross;
    (Rational::from((gpp, gqq)), Rational::from((pnew, qnew)))
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let complex = if self.im.cmp0() == Ordering::Equal {
            self.re.to_string()
        } else if self.re.cmp0() == Ordering::Equal {
            format!("{}i", self.im)
        } else {
            format!("({}{}{}i)", self.re, if self.im.cmp0() == Ordering::Less { "" } else { "+" }, self.im)
        };
        if self.rad == 1 {
            write!(f, "{complex}")
        } else {
            write!(f, "{complex}·√({})", self.rad)
        }
    }
}
