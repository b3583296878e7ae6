//! String specs for distributions, spans, test-function providers and
//! moment sequences, as accepted on the command line.
//!
//! Distribution specs: `phi:n`, `psi:n`, `x:n`, `delta:n`,
//! `span:phi:{0:1,3:2}`, `span:psi:{0:1,2:-1/2}`.
//! Provider specs: `gaussian:alpha=1/2`, `indicator:0,1`,
//! `polygauss:1+x^2,alpha=1`, `exp`, `exp:c=1`, `zero`.
//! Moment specs: `moments:1,0,2/3` (finite support) or
//! `gaussmoments:alpha=1,n=10` (no support bound; exercises the rejection
//! path of the dual Taylor construction).

use rug::Rational;
use thiserror::Error;

use crate::distribution::WeakDistribution;
use crate::expansion::MomentSequence;
use crate::families::{BasisTag, FamilyIndexVector};
use crate::numeric::{Prec, Value};
use crate::scalar::ExactScalar;
use crate::testfn::{
    make_exp, make_gaussian, make_indicator, make_poly_gaussian, make_zero, TestFunction,
};

#[derive(Debug, Error, Clone, PartialEq)]
#[error("cannot parse spec '{spec}': {reason}")]
pub struct SpecError {
    pub spec: String,
    pub reason: String,
}

fn bad(spec: &str, reason: impl Into<String>) -> SpecError {
    SpecError {
        spec: spec.to_string(),
        reason: reason.into(),
    }
}

/// `"3"`, `"-1/2"`.
pub fn parse_rational(s: &str) -> Result<Rational, SpecError> {
    Rational::parse(s.trim())
        .map(Rational::from)
        .map_err(|e| bad(s, format!("not a rational: {e}")))
}

/// `"2"`, `"-1/2"`, `"i"`, `"-i"`, `"3i"`, `"1+2i"`, `"1/2-1/3i"`.
pub fn parse_scalar(s: &str) -> Result<ExactScalar, SpecError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(bad(s, "empty scalar"));
    }
    if !t.ends_with('i') {
        return Ok(ExactScalar::from_rational(parse_rational(t)?));
    }
    // split a trailing imaginary term from an optional real head
    let body = &t[..t.len() - 1];
    // find the split point: last '+'/'-' that is not the leading sign and not
    // inside a fraction
    let mut split = None;
    for (idx, ch) in body.char_indices().skip(1) {
        if ch == '+' || ch == '-' {
            split = Some(idx);
        }
    }
    let (re_str, im_str) = match split {
        Some(idx) => (&body[..idx], &body[idx..]),
        None => ("0", body),
    };
    let im = match im_str {
        "" | "+" => Rational::from(1),
        "-" => Rational::from(-1),
        other => parse_rational(other)?,
    };
    let re = parse_rational(if re_str.is_empty() { "0" } else { re_str })?;
    Ok(ExactScalar::from_parts(re, im))
}

/// Ascending coefficients of `"1+x^2"`, `"3/2x^3-x"`, `"-x+2"`.
pub fn parse_poly(s: &str) -> Result<Vec<Rational>, SpecError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(bad(s, "empty polynomial"));
    }
    let mut coeffs: Vec<Rational> = Vec::new();
    let mut term = String::new();
    let mut terms = Vec::new();
    for (i, ch) in t.char_indices() {
        if (ch == '+' || ch == '-') && i > 0 {
            terms.push(std::mem::take(&mut term));
        }
        term.push(ch);
    }
    terms.push(term);
    for term in terms {
        let (coeff_str, degree) = match term.find('x') {
            None => (term.as_str(), 0u32),
            Some(pos) => {
                let deg = match term[pos + 1..].strip_prefix('^') {
                    Some(d) => d
                        .parse::<u32>()
                        .map_err(|_| bad(s, format!("bad exponent in '{term}'")))?,
                    None if term[pos + 1..].is_empty() => 1,
                    None => return Err(bad(s, format!("bad term '{term}'"))),
                };
                (&term[..pos], deg)
            }
        };
        let coeff = match coeff_str {
            "" | "+" => Rational::from(1),
            "-" => Rational::from(-1),
            other => parse_rational(other)?,
        };
        if coeffs.len() <= degree as usize {
            coeffs.resize(degree as usize + 1, Rational::new());
        }
        coeffs[degree as usize] += coeff;
    }
    Ok(coeffs)
}

/// `span:psi:{0:1,3:2}`.
pub fn parse_span(spec: &str) -> Result<FamilyIndexVector, SpecError> {
    let rest = spec
        .strip_prefix("span:")
        .ok_or_else(|| bad(spec, "span spec must start with 'span:'"))?;
    let (tag_str, body) = rest
        .split_once(':')
        .ok_or_else(|| bad(spec, "expected span:<phi|psi>:{...}"))?;
    let tag = match tag_str {
        "phi" => BasisTag::Phi,
        "psi" => BasisTag::Psi,
        other => return Err(bad(spec, format!("unknown basis '{other}'"))),
    };
    let body = body
        .strip_prefix('{')
        .and_then(|b| b.strip_suffix('}'))
        .ok_or_else(|| bad(spec, "span coefficients must be wrapped in {...}"))?;
    let mut coeffs = Vec::new();
    if !body.trim().is_empty() {
        for part in body.split(',') {
            let (idx, val) = part
                .split_once(':')
                .ok_or_else(|| bad(spec, format!("bad span entry '{part}'")))?;
            let k: u32 = idx
                .trim()
                .parse()
                .map_err(|_| bad(spec, format!("bad span index '{idx}'")))?;
            coeffs.push((k, parse_scalar(val)?));
        }
    }
    Ok(FamilyIndexVector::new(tag, coeffs))
}

/// Any class-member spec, resolved to a distribution.
pub fn parse_distribution(spec: &str) -> Result<WeakDistribution, SpecError> {
    if spec.starts_with("span:") {
        return Ok(parse_span(spec)?.to_distribution());
    }
    let (kind, arg) = spec
        .split_once(':')
        .ok_or_else(|| bad(spec, "expected <kind>:<index>"))?;
    let n: u32 = arg
        .trim()
        .parse()
        .map_err(|_| bad(spec, format!("bad index '{arg}'")))?;
    match kind {
        "phi" => Ok(crate::families::phi(n)),
        "psi" => Ok(crate::families::psi(n)),
        "x" => Ok(WeakDistribution::monomial(n, ExactScalar::one())),
        "delta" => Ok(WeakDistribution::delta_deriv(n, ExactScalar::one())),
        other => Err(bad(spec, format!("unknown distribution kind '{other}'"))),
    }
}

/// Provider specs: see module docs.
pub fn parse_test_function(spec: &str) -> Result<TestFunction, SpecError> {
    let (kind, rest) = match spec.split_once(':') {
        Some((k, r)) => (k, r),
        None => (spec, ""),
    };
    match kind {
        "gaussian" => {
            let alpha = parse_named_rational(spec, rest, "alpha")?;
            make_gaussian(alpha).map_err(|e| bad(spec, e.to_string()))
        }
        "indicator" => {
            let (a, b) = rest
                .split_once(',')
                .ok_or_else(|| bad(spec, "expected indicator:a,b"))?;
            make_indicator(parse_rational(a)?, parse_rational(b)?)
                .map_err(|e| bad(spec, e.to_string()))
        }
        "polygauss" => {
            let (poly_str, alpha_str) = rest
                .rsplit_once(',')
                .ok_or_else(|| bad(spec, "expected polygauss:<poly>,alpha=<q>"))?;
            let alpha = parse_named_rational(spec, alpha_str, "alpha")?;
            make_poly_gaussian(parse_poly(poly_str)?, alpha).map_err(|e| bad(spec, e.to_string()))
        }
        "exp" => {
            let c = if rest.is_empty() {
                Rational::from(1)
            } else {
                parse_named_rational(spec, rest, "c")?
            };
            Ok(make_exp(c))
        }
        "zero" => Ok(make_zero()),
        other => Err(bad(spec, format!("unknown provider '{other}'"))),
    }
}

fn parse_named_rational(spec: &str, part: &str, name: &str) -> Result<Rational, SpecError> {
    let val = part
        .strip_prefix(name)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| bad(spec, format!("expected {name}=<rational>, got '{part}'")))?;
    parse_rational(val)
}

/// Either side of a pairing: a class member or a provider.
pub enum Target {
    Dist(WeakDistribution),
    Fn(TestFunction),
}

pub fn parse_target(spec: &str) -> Result<Target, SpecError> {
    let kind = spec.split(':').next().unwrap_or(spec);
    match kind {
        "phi" | "psi" | "x" | "delta" | "span" => Ok(Target::Dist(parse_distribution(spec)?)),
        _ => Ok(Target::Fn(parse_test_function(spec)?)),
    }
}

/// `moments:1,0,2/3` (finite) or `gaussmoments:alpha=1,n=10` (unbounded).
pub fn parse_moments(spec: &str, prec: Prec) -> Result<MomentSequence, SpecError> {
    if let Some(rest) = spec.strip_prefix("moments:") {
        let mut values = Vec::new();
        for part in rest.split(',') {
            values.push(Value::Exact(parse_scalar(part)?));
        }
        return Ok(MomentSequence::finite(values));
    }
    if let Some(rest) = spec.strip_prefix("gaussmoments:") {
        let (alpha_str, n_str) = rest
            .split_once(',')
            .ok_or_else(|| bad(spec, "expected gaussmoments:alpha=<q>,n=<count>"))?;
        let alpha = parse_named_rational(spec, alpha_str, "alpha")?;
        let up_to: u32 = n_str
            .strip_prefix("n=")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| bad(spec, "expected n=<count>"))?;
        let g = make_gaussian(alpha).map_err(|e| bad(spec, e.to_string()))?;
        return MomentSequence::from_function_unbounded(&g, up_to, prec)
            .map_err(|e| bad(spec, e.to_string()));
    }
    Err(bad(spec, "expected moments:... or gaussmoments:..."))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalars() {
        assert_eq!(parse_scalar("3/2").unwrap(), ExactScalar::from_i64_parts((3, 2), (0, 1)));
        assert_eq!(parse_scalar("i").unwrap(), ExactScalar::i());
        assert_eq!(
            parse_scalar("1-1/2i").unwrap(),
            ExactScalar::from_i64_parts((1, 1), (-1, 2))
        );
        assert_eq!(parse_scalar("-2i").unwrap(), ExactScalar::from_i64_parts((0, 1), (-2, 1)));
        assert!(parse_scalar("abc").is_err());
    }

    #[test]
    fn polys() {
        let p = parse_poly("1+x^2").unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p[0], Rational::from(1));
        assert_eq!(p[1], Rational::new());
        assert_eq!(p[2], Rational::from(1));
        let p = parse_poly("3/2x^3-x").unwrap();
        assert_eq!(p[1], Rational::from(-1));
        assert_eq!(p[3], Rational::from((3, 2)));
    }

    #[test]
    fn spans() {
        let v = parse_span("span:psi:{0:1,3:2}").unwrap();
        assert_eq!(v.tag(), BasisTag::Psi);
        let coeffs: Vec<_> = v.coeffs().collect();
        assert_eq!(coeffs.len(), 2);
        assert_eq!(coeffs[1], (3, &ExactScalar::from_int(2)));
    }

    #[test]
    fn distributions() {
        assert_eq!(parse_distribution("phi:0").unwrap(), WeakDistribution::one());
        assert_eq!(parse_distribution("psi:0").unwrap(), WeakDistribution::dirac());
        assert!(parse_distribution("blah:3").is_err());
    }

    #[test]
    fn providers() {
        assert!(parse_test_function("gaussian:alpha=1/2").is_ok());
        assert!(parse_test_function("indicator:0,1").is_ok());
        assert!(parse_test_function("polygauss:1+x^2,alpha=1").is_ok());
        assert!(parse_test_function("exp").is_ok());
        assert!(parse_test_function("exp:c=-1/2").is_ok());
        assert!(parse_test_function("gaussian:alpha=-1").is_err());
        assert!(parse_test_function("nope:1").is_err());
    }

    #[test]
    fn moments() {
        let m = parse_moments("moments:1,0,2/3", Prec::default()).unwrap();
        assert_eq!(m.support_bound(), Some(2));
        let m = parse_moments("gaussmoments:alpha=1,n=6", Prec::default()).unwrap();
        assert_eq!(m.support_bound(), None);
    }
}
