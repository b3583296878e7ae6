//! The closed distribution class `span{x^n} ⊕ span{δ^(n)}` and the four
//! ladder atoms acting on it.
//!
//! A [`WeakDistribution`] is a finite combination of monomials and delta
//! derivatives with [`ExactScalar`] coefficients, kept in sparse canonical
//! form (no zero coefficients), so equality is structural. The class is
//! closed under multiplication by x and differentiation:
//!
//! * `x·x^n = x^(n+1)`, `x·δ^(n) = −n·δ^(n−1)`, `x·δ = 0`
//! * `(x^n)′ = n·x^(n−1)`, `(δ^(n))′ = δ^(n+1)`

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use rug::Rational;
use serde_json::{json, Map, Value as Json};
use thiserror::Error;

use crate::scalar::{ExactScalar, ScalarError};

/// Hard cap on monomial degree and delta order, guarding against runaway
/// symbolic growth. Exceeding it panics; [`OperatorWord::try_apply`] offers a
/// checked route with a caller-chosen cap.
pub const DEGREE_CAP: u32 = 512;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DistribError {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("degree {degree} exceeds cap {cap}")]
    DegreeOverflow { degree: u32, cap: u32 },
    #[error("malformed distribution serialization: {0}")]
    BadSerialization(String),
}

/// Finite combination of `x^n` (poly part) and `δ^(n)` (delta part).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeakDistribution {
    poly: BTreeMap<u32, ExactScalar>,
    delta: BTreeMap<u32, ExactScalar>,
}

impl WeakDistribution {
    pub fn zero() -> Self {
        WeakDistribution::default()
    }

    /// The constant function 1.
    pub fn one() -> Self {
        WeakDistribution::monomial(0, ExactScalar::one())
    }

    /// The Dirac delta.
    pub fn dirac() -> Self {
        WeakDistribution::delta_deriv(0, ExactScalar::one())
    }

    /// `c·x^n`. Panics if `n` exceeds [`DEGREE_CAP`].
    pub fn monomial(n: u32, c: ExactScalar) -> Self {
        let mut f = WeakDistribution::zero();
        f.insert_poly(n, c);
        f
    }

    /// `c·δ^(n)`. Panics if `n` exceeds [`DEGREE_CAP`].
    pub fn delta_deriv(n: u32, c: ExactScalar) -> Self {
        let mut f = WeakDistribution::zero();
        f.insert_delta(n, c);
        f
    }

    fn insert_poly(&mut self, n: u32, c: ExactScalar) {
        assert!(
            n <= DEGREE_CAP,
            "monomial degree {n} exceeds cap {DEGREE_CAP}"
        );
        if !c.is_zero() {
            self.poly.insert(n, c);
        }
    }

    fn insert_delta(&mut self, n: u32, c: ExactScalar) {
        assert!(
            n <= DEGREE_CAP,
            "delta order {n} exceeds cap {DEGREE_CAP}"
        );
        if !c.is_zero() {
            self.delta.insert(n, c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_empty() && self.delta.is_empty()
    }

    pub fn poly_terms(&self) -> impl Iterator<Item = (u32, &ExactScalar)> {
        self.poly.iter().map(|(&n, c)| (n, c))
    }

    pub fn delta_terms(&self) -> impl Iterator<Item = (u32, &ExactScalar)> {
        self.delta.iter().map(|(&n, c)| (n, c))
    }

    pub fn has_poly_part(&self) -> bool {
        !self.poly.is_empty()
    }

    pub fn has_delta_part(&self) -> bool {
        !self.delta.is_empty()
    }

    pub fn max_poly_degree(&self) -> Option<u32> {
        self.poly.keys().next_back().copied()
    }

    pub fn max_delta_order(&self) -> Option<u32> {
        self.delta.keys().next_back().copied()
    }

    /// Multiplication by x: shifts monomials up, lowers delta derivatives via
    /// `x·δ^(n) = −n·δ^(n−1)` (and kills `δ` itself). Total on the class.
    pub fn apply_x(&self) -> Self {
        let mut out = WeakDistribution::zero();
        for (&n, c) in &self.poly {
            out.insert_poly(n + 1, c.clone());
        }
        for (&n, c) in &self.delta {
            if n >= 1 {
                let coeff = c.mul_rational(&Rational::from(-i64::from(n)));
                out.insert_delta(n - 1, coeff);
            }
        }
        out
    }

    /// Differentiation: `x^n ↦ n·x^(n−1)` (constants die), `δ^(n) ↦ δ^(n+1)`.
    pub fn apply_d(&self) -> Self {
        let mut out = WeakDistribution::zero();
        for (&n, c) in &self.poly {
            if n >= 1 {
                out.insert_poly(n - 1, c.mul_rational(&Rational::from(i64::from(n))));
            }
        }
        for (&n, c) in &self.delta {
            out.insert_delta(n + 1, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        WeakDistribution {
            poly: self.poly.iter().map(|(&n, c)| (n, c.neg())).collect(),
            delta: self.delta.iter().map(|(&n, c)| (n, c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        if c.is_zero() {
            return WeakDistribution::zero();
        }
        let mut out = WeakDistribution::zero();
        for (&n, coeff) in &self.poly {
            out.insert_poly(n, coeff.mul(c));
        }
        for (&n, coeff) in &self.delta {
            out.insert_delta(n, coeff.mul(c));
        }
        out
    }

    /// Exact sum; fails with a radical mismatch when two coefficients at the
    /// same degree carry different square-free radicals.
    pub fn try_add(&self, other: &Self) -> Result<Self, DistribError> {
        fn merge(
            a: &BTreeMap<u32, ExactScalar>,
            b: &BTreeMap<u32, ExactScalar>,
        ) -> Result<BTreeMap<u32, ExactScalar>, ScalarError> {
            let mut out = a.clone();
            for (&n, c) in b {
                let merged = match out.get(&n) {
                    Some(prev) => prev.try_add(c)?,
                    None => c.clone(),
                };
                if merged.is_zero() {
                    out.remove(&n);
                } else {
                    out.insert(n, merged);
                }
            }
            Ok(out)
        }
        Ok(WeakDistribution {
            poly: merge(&self.poly, &other.poly)?,
            delta: merge(&self.delta, &other.delta)?,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, DistribError> {
        self.try_add(&other.neg())
    }

    fn add_closed(&self, other: &Self) -> Self {
        self.try_add(other)
            .expect("operands built from a common source share radicals")
    }

    /// `(ab − ba)F − F`; identically zero on the whole class.
    pub fn commutator_residual(&self) -> Self {
        let ab = self.apply_x().apply_d();
        let ba = self.apply_d().apply_x();
        ab.add_closed(&ba.neg()).add_closed(&self.neg())
    }

    pub fn apply_atom(&self, atom: Atom) -> Self {
        match atom {
            Atom::A => self.apply_d(),
            Atom::B => self.apply_x(),
            Atom::ADag => self.apply_d().neg(),
            Atom::BDag => self.apply_x(),
        }
    }

    /// Random member with rational coefficients, for property suites.
    pub fn random<R: Rng + ?Sized>(
        rng: &mut R,
        max_degree: u32,
        max_order: u32,
        terms: usize,
    ) -> Self {
        let mut f = WeakDistribution::zero();
        for _ in 0..terms {
            let num = rng.random_range(-20i64..=20);
            let den = rng.random_range(1i64..=12);
            let re = Rational::from((num, den));
            let im = Rational::from((rng.random_range(-20i64..=20), rng.random_range(1i64..=12)));
            let c = ExactScalar::from_parts(re, im);
            if rng.random_bool(0.5) {
                let n = rng.random_range(0..=max_degree);
                let merged = match f.poly.get(&n) {
                    Some(prev) => prev.try_add(&c).expect("rational coefficients"),
                    None => c,
                };
                if merged.is_zero() {
                    f.poly.remove(&n);
                } else {
                    f.poly.insert(n, merged);
                }
            } else {
                let n = rng.random_range(0..=max_order);
                let merged = match f.delta.get(&n) {
                    Some(prev) => prev.try_add(&c).expect("rational coefficients"),
                    None => c,
                };
                if merged.is_zero() {
                    f.delta.remove(&n);
                } else {
                    f.delta.insert(n, merged);
                }
            }
        }
        f
    }

    /// Canonical JSON form with exact rational components, no floats:
    /// `{"poly": {"n": [re_num, re_den, im_num, im_den, rad_num, rad_den]},
    ///   "delta": {...}}`.
    pub fn to_json(&self) -> Json {
        fn side(map: &BTreeMap<u32, ExactScalar>) -> Json {
            let mut obj = Map::new();
            for (n, c) in map {
                let comps: Vec<Json> = c
                    .to_components()
                    .iter()
                    .map(|s| Json::String(s.clone()))
                    .collect();
                obj.insert(n.to_string(), Json::Array(comps));
            }
            Json::Object(obj)
        }
        json!({ "poly": side(&self.poly), "delta": side(&self.delta) })
    }

    pub fn from_json(v: &Json) -> Result<Self, DistribError> {
        fn side(v: Option<&Json>, label: &str) -> Result<Vec<(u32, ExactScalar)>, DistribError> {
            let mut out = Vec::new();
            let Some(obj) = v else {
                return Ok(out);
            };
            let obj = obj
                .as_object()
                .ok_or_else(|| DistribError::BadSerialization(format!("{label} not an object")))?;
            for (key, val) in obj {
                let n: u32 = key.parse().map_err(|_| {
                    DistribError::BadSerialization(format!("bad {label} degree {key}"))
                })?;
                let arr = val.as_array().ok_or_else(|| {
                    DistribError::BadSerialization(format!("{label}[{key}] not an array"))
                })?;
                let parts: Vec<String> = arr
                    .iter()
                    .map(|x| {
                        x.as_str().map(str::to_string).ok_or_else(|| {
                            DistribError::BadSerialization(format!(
                                "{label}[{key}] has non-string component"
                            ))
                        })
                    })
                    .collect::<Result<_, _>>()?;
                out.push((n, ExactScalar::from_components(&parts)?));
            }
            Ok(out)
        }
        let mut f = WeakDistribution::zero();
        for (n, c) in side(v.get("poly"), "poly")? {
            if n > DEGREE_CAP {
                return Err(DistribError::DegreeOverflow {
                    degree: n,
                    cap: DEGREE_CAP,
                });
            }
            f.insert_poly(n, c);
        }
        for (n, c) in side(v.get("delta"), "delta")? {
            if n > DEGREE_CAP {
                return Err(DistribError::DegreeOverflow {
                    degree: n,
                    cap: DEGREE_CAP,
                });
            }
            f.insert_delta(n, c);
        }
        Ok(f)
    }
}

impl fmt::Display for WeakDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (n, c) in &self.poly {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}·x")?,
                _ => write!(f, "{c}·x^{n}")?,
            }
        }
        for (n, c) in &self.delta {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if *n == 0 {
                write!(f, "{c}·δ")?;
            } else {
                write!(f, "{c}·δ^({n})")?;
            }
        }
        Ok(())
    }
}

/// One of the four ladder atoms: `a` differentiates, `b` multiplies by x,
/// `a† = −a`, `b† = b` (from `x̂† = x̂`, `D̂† = −D̂`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Atom {
    A,
    B,
    ADag,
    BDag,
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::A => write!(f, "a"),
            Atom::B => write!(f, "b"),
            Atom::ADag => write!(f, "a†"),
            Atom::BDag => write!(f, "b†"),
        }
    }
}

/// A finite word in the atoms, applied right to left; the empty word is the
/// identity.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OperatorWord {
    atoms: Vec<Atom>,
}

impl OperatorWord {
    pub fn new(atoms: impl Into<Vec<Atom>>) -> Self {
        OperatorWord {
            atoms: atoms.into(),
        }
    }

    pub fn identity() -> Self {
        OperatorWord::default()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn apply(&self, f: &WeakDistribution) -> WeakDistribution {
        let mut cur = f.clone();
        for atom in self.atoms.iter().rev() {
            cur = cur.apply_atom(*atom);
        }
        cur
    }

    /// Like [`apply`](Self::apply) but with a caller-chosen degree cap,
    /// checked before any work is done. Each atom can raise the monomial
    /// degree or the delta order by at most one.
    pub fn try_apply(
        &self,
        f: &WeakDistribution,
        cap: u32,
    ) -> Result<WeakDistribution, DistribError> {
        let start = f
            .max_poly_degree()
            .unwrap_or(0)
            .max(f.max_delta_order().unwrap_or(0));
        let bound = start.saturating_add(self.atoms.len() as u32);
        if bound > cap || cap > DEGREE_CAP {
            return Err(DistribError::DegreeOverflow {
                degree: bound,
                cap: cap.min(DEGREE_CAP),
            });
        }
        Ok(self.apply(f))
    }
}

impl fmt::Display for OperatorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return write!(f, "1");
        }
        for atom in &self.atoms {
            write!(f, "{atom}")?;
        }
        Ok(())
    }
}
