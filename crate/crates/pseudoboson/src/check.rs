//! Exact identity suites behind `check`: every structural identity the
//! library claims, run over bases and seeded random inputs, reported one
//! line per identity.
//!
//! The report lines carry stable equation tags (`Eq32.commutator`,
//! `Eq37.biorthonormality`, …) so scripted consumers can key on them. The
//! commutator suite takes its multiplication operator through an injection
//! point, which lets the fault-injection harness verify that a broken
//! operator actually turns the report red.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value as Json};

use crate::distribution::{Atom, WeakDistribution};
use crate::families::{
    self, intertwine_residuals, s_phi_span, s_psi_span, BasisTag, FamilyIndexVector,
};
use crate::numeric::Prec;
use crate::pairing;
use crate::scalar::ExactScalar;

/// Deliberate defects that can be wired into a suite to prove the checks
/// catch them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Flip the sign of the multiplication operator.
    ApplyXSignFlip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    Distrib,
    Families,
    Pairing,
    All,
}

impl Scope {
    pub fn parse(s: &str) -> Option<Scope> {
        match s {
            "distrib" => Some(Scope::Distrib),
            "families" => Some(Scope::Families),
            "pairing" => Some(Scope::Pairing),
            "all" => Some(Scope::All),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Scope::Distrib => "distrib",
            Scope::Families => "families",
            Scope::Pairing => "pairing",
            Scope::All => "all",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckLine {
    pub id: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckLine {
    fn pass(id: &'static str, detail: impl Into<String>) -> Self {
        CheckLine {
            id,
            passed: true,
            detail: detail.into(),
        }
    }

    fn fail(id: &'static str, detail: impl Into<String>) -> Self {
        CheckLine {
            id,
            passed: false,
            detail: detail.into(),
        }
    }

    pub fn render(&self) -> String {
        format!(
            "{}: {}({})",
            self.id,
            if self.passed { "pass" } else { "fail" },
            self.detail
        )
    }
}

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub scope: Scope,
    pub lines: Vec<CheckLine>,
    pub passed: bool,
}

impl CheckReport {
    pub fn to_json(&self) -> Json {
        json!({
            "scope": self.scope.as_str(),
            "passed": self.passed,
            "identities": self.lines.iter().map(|l| json!({
                "id": l.id,
                "status": if l.passed { "pass" } else { "fail" },
                "detail": l.detail,
            })).collect::<Vec<_>>(),
        })
    }

    pub fn first_failure(&self) -> Option<&CheckLine> {
        self.lines.iter().find(|l| !l.passed)
    }
}

/// Run the exact property suites for a scope. The seed fixes the random
/// inputs, so identical configurations give identical reports.
pub fn run_check(scope: Scope, fault: Option<Fault>, seed: u64, prec: Prec) -> CheckReport {
    let mut lines = Vec::new();
    if matches!(scope, Scope::Distrib | Scope::All) {
        lines.extend(distrib_suite(fault, seed));
    }
    if matches!(scope, Scope::Families | Scope::All) {
        lines.extend(families_suite(seed));
    }
    if matches!(scope, Scope::Pairing | Scope::All) {
        lines.extend(pairing_suite(seed, prec));
    }
    let passed = lines.iter().all(|l| l.passed);
    CheckReport {
        scope,
        lines,
        passed,
    }
}

fn apply_x_with(fault: Option<Fault>, f: &WeakDistribution) -> WeakDistribution {
    match fault {
        None => f.apply_x(),
        Some(Fault::ApplyXSignFlip) => f.apply_x().neg(),
    }
}

fn commutator_residual_with(fault: Option<Fault>, f: &WeakDistribution) -> WeakDistribution {
    let ab = apply_x_with(fault, f).apply_d();
    let ba = apply_x_with(fault, &f.apply_d());
    ab.try_sub(&ba)
        .and_then(|d| d.try_sub(f))
        .expect("commutator terms share radicals")
}

fn distrib_suite(fault: Option<Fault>, seed: u64) -> Vec<CheckLine> {
    let mut lines = Vec::new();

    // [a,b]F = F pointwise on the monomial/delta basis
    let mut basis_ok = true;
    for n in 0..=50u32 {
        let members = [
            WeakDistribution::monomial(n, ExactScalar::one()),
            WeakDistribution::delta_deriv(n, ExactScalar::one()),
        ];
        for f in members {
            if !commutator_residual_with(fault, &f).is_zero() {
                basis_ok = false;
            }
        }
    }
    lines.push(if basis_ok {
        CheckLine::pass("Eq32.commutator", "basis x^n, δ^(n), n<=50")
    } else {
        CheckLine::fail("Eq32.commutator", "nonzero residual on basis member")
    });

    // the same commutation on random class members
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut random_ok = true;
    for _ in 0..1000 {
        let f = WeakDistribution::random(&mut rng, 50, 50, 6);
        if !commutator_residual_with(fault, &f).is_zero() {
            random_ok = false;
            break;
        }
    }
    lines.push(if random_ok {
        CheckLine::pass("Eq41.weak_commutation", "1000 random members, degree<=50")
    } else {
        CheckLine::fail("Eq41.weak_commutation", "nonzero residual on random member")
    });

    // canonical radical arithmetic
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5ca1ab1e);
    let mut scalar_ok = true;
    for _ in 0..1000 {
        use rand::Rng;
        let a = ExactScalar::sqrt_uint(rng.random_range(1u64..=400)).mul(
            &ExactScalar::from_i64_parts(
                (rng.random_range(-9i64..=9), rng.random_range(1i64..=7)),
                (rng.random_range(-9i64..=9), rng.random_range(1i64..=7)),
            ),
        );
        let b = ExactScalar::sqrt_uint(rng.random_range(1u64..=400));
        let prod = a.mul(&b);
        // square-free canonical radical: multiplying the radical by itself
        // must land back in the rationals
        let sq = ExactScalar::sqrt_rational(prod.radical());
        let canonical = match sq {
            Ok(s) => s.radical() == prod.radical(),
            Err(_) => false,
        };
        if !canonical || prod != prod.clone() {
            scalar_ok = false;
            break;
        }
    }
    lines.push(if scalar_ok {
        CheckLine::pass("scalar.canonical_radical", "1000 random products square-free")
    } else {
        CheckLine::fail("scalar.canonical_radical", "non-canonical radical found")
    });

    lines
}

fn families_suite(seed: u64) -> Vec<CheckLine> {
    let mut lines = Vec::new();

    // construction from the vacua
    let mut ok = true;
    for n in 0..=30u32 {
        let mut built = WeakDistribution::one();
        for _ in 0..n {
            built = built.apply_atom(Atom::B);
        }
        if built.scale(&ExactScalar::inv_sqrt_factorial(n)) != families::phi(n) {
            ok = false;
        }
        let mut built = WeakDistribution::dirac();
        for _ in 0..n {
            built = built.apply_atom(Atom::ADag);
        }
        if built.scale(&ExactScalar::inv_sqrt_factorial(n)) != families::psi(n) {
            ok = false;
        }
    }
    lines.push(if ok {
        CheckLine::pass("Eq42.construction", "b^n/√n! and a†^n/√n! from the vacua, n<=30")
    } else {
        CheckLine::fail("Eq42.construction", "family member mismatch")
    });

    // raising
    let mut ok = true;
    for k in 0..=40u32 {
        let factor = ExactScalar::sqrt_uint(u64::from(k) + 1);
        if families::phi(k).apply_atom(Atom::B) != families::phi(k + 1).scale(&factor) {
            ok = false;
        }
        if families::psi(k).apply_atom(Atom::ADag) != families::psi(k + 1).scale(&factor) {
            ok = false;
        }
    }
    lines.push(if ok {
        CheckLine::pass("Eq33.raising", "k<=40")
    } else {
        CheckLine::fail("Eq33.raising", "raising factor mismatch")
    });

    // lowering, including vacuum annihilation
    let mut ok = families::phi(0).apply_atom(Atom::A).is_zero()
        && families::psi(0).apply_atom(Atom::BDag).is_zero();
    for k in 1..=40u32 {
        let factor = ExactScalar::sqrt_uint(u64::from(k));
        if families::phi(k).apply_atom(Atom::A) != families::phi(k - 1).scale(&factor) {
            ok = false;
        }
        if families::psi(k).apply_atom(Atom::BDag) != families::psi(k - 1).scale(&factor) {
            ok = false;
        }
    }
    lines.push(if ok {
        CheckLine::pass("Eq34.lowering", "k<=40, vacua annihilated")
    } else {
        CheckLine::fail("Eq34.lowering", "lowering factor mismatch")
    });

    // eigenvalue equations
    let mut ok = true;
    for k in 0..=40u32 {
        let scale = ExactScalar::from_int(i64::from(k));
        if families::apply_number(&families::phi(k)) != families::phi(k).scale(&scale) {
            ok = false;
        }
        if families::apply_number_dag(&families::psi(k)) != families::psi(k).scale(&scale) {
            ok = false;
        }
    }
    lines.push(if ok {
        CheckLine::pass("Eq35.number_eigenvalue", "N, N† eigenvalues k<=40")
    } else {
        CheckLine::fail("Eq35.number_eigenvalue", "eigenvalue equation fails")
    });

    // coefficient swap and inversion on random spans
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xfeed);
    let mut swap_ok = true;
    let mut inverse_ok = true;
    for i in 0..200 {
        let tag = if i % 2 == 0 { BasisTag::Phi } else { BasisTag::Psi };
        let v = FamilyIndexVector::random(&mut rng, tag, 25, 4);
        match tag {
            BasisTag::Phi => {
                let swapped = s_psi_span(&v).expect("tag checked");
                if swapped.tag() != BasisTag::Psi
                    || !swapped.coeffs().eq(v.coeffs())
                {
                    swap_ok = false;
                }
                if s_phi_span(&swapped).expect("tag checked") != v {
                    inverse_ok = false;
                }
            }
            BasisTag::Psi => {
                let swapped = s_phi_span(&v).expect("tag checked");
                if swapped.tag() != BasisTag::Phi
                    || !swapped.coeffs().eq(v.coeffs())
                {
                    swap_ok = false;
                }
                if s_psi_span(&swapped).expect("tag checked") != v {
                    inverse_ok = false;
                }
            }
        }
    }
    lines.push(if swap_ok {
        CheckLine::pass("Eq45.coefficient_swap", "200 random spans, indices<=25")
    } else {
        CheckLine::fail("Eq45.coefficient_swap", "coefficients not preserved")
    });
    lines.push(if inverse_ok {
        CheckLine::pass("Eq46.inverse", "S_φS_ψ = id and S_ψS_φ = id on spans")
    } else {
        CheckLine::fail("Eq46.inverse", "swap composition is not the identity")
    });

    // intertwining identities
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcd);
    let mut number_ok = true;
    let mut ladder_ok = true;
    for i in 0..200 {
        let tag = if i % 2 == 0 { BasisTag::Phi } else { BasisTag::Psi };
        let v = FamilyIndexVector::random(&mut rng, tag, 25, 4);
        for r in intertwine_residuals(&v) {
            if !r.residual.is_zero() {
                if r.id.contains("number") {
                    number_ok = false;
                } else {
                    ladder_ok = false;
                }
            }
        }
    }
    lines.push(if number_ok {
        CheckLine::pass("Eq47.number_intertwine", "NS_φ = S_φN†, N†S_ψ = S_ψN on 200 spans")
    } else {
        CheckLine::fail("Eq47.number_intertwine", "nonzero residual")
    });
    lines.push(if ladder_ok {
        CheckLine::pass("Eq48.ladder_intertwine", "a,b,a†,b† via S-conjugation on 200 spans")
    } else {
        CheckLine::fail("Eq48.ladder_intertwine", "nonzero residual")
    });

    lines
}

fn pairing_suite(seed: u64, prec: Prec) -> Vec<CheckLine> {
    let mut lines = Vec::new();

    let mut ok = true;
    for n in 0..=30u32 {
        for m in 0..=30u32 {
            let v = pairing::pair(&families::phi(n), &families::psi(m), prec)
                .expect("poly×delta pairing is defined");
            let expect = if n == m {
                ExactScalar::one()
            } else {
                ExactScalar::zero()
            };
            if v.value.as_exact() != Some(&expect) {
                ok = false;
            }
        }
    }
    lines.push(if ok {
        CheckLine::pass("Eq37.biorthonormality", "n,m<=30")
    } else {
        CheckLine::fail("Eq37.biorthonormality", "⟨φ_n,ψ_m⟩ ≠ δ_{n,m}")
    });

    // Hermitian symmetry and sesquilinearity on random exact pairs
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x77);
    let mut herm_ok = true;
    let mut sesq_ok = true;
    for _ in 0..300 {
        use rand::Rng;
        let n = rng.random_range(0..20u32);
        let m = rng.random_range(0..20u32);
        let c = ExactScalar::from_i64_parts(
            (rng.random_range(-9i64..=9), rng.random_range(1i64..=5)),
            (rng.random_range(-9i64..=9), rng.random_range(1i64..=5)),
        );
        let f = WeakDistribution::monomial(n, c.clone());
        let g = WeakDistribution::delta_deriv(m, ExactScalar::one());
        let fg = pairing::pair(&f, &g, prec).expect("defined");
        let gf = pairing::pair(&g, &f, prec).expect("defined");
        if fg.value.as_exact().map(|s| s.conj()) != gf.value.as_exact().cloned() {
            herm_ok = false;
        }
        let scaled = pairing::pair(&f.scale(&c), &g, prec).expect("defined");
        let expect = c.conj().mul(fg.value.as_exact().expect("exact"));
        if scaled.value.as_exact() != Some(&expect) {
            sesq_ok = false;
        }
    }
    lines.push(if herm_ok {
        CheckLine::pass("Eq36.hermitian_symmetry", "⟨F,G⟩ = conj(⟨G,F⟩) on 300 random pairs")
    } else {
        CheckLine::fail("Eq36.hermitian_symmetry", "symmetry violated")
    });
    lines.push(if sesq_ok {
        CheckLine::pass("Eq36.sesquilinearity", "conjugate-linear first slot on 300 random pairs")
    } else {
        CheckLine::fail("Eq36.sesquilinearity", "linearity violated")
    });

    lines
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_check_passes() {
        let report = run_check(Scope::All, None, 7, Prec::default());
        assert!(report.passed, "failing lines: {:?}", report.first_failure());
        assert!(report
            .lines
            .iter()
            .any(|l| l.render() == "Eq37.biorthonormality: pass(n,m<=30)"));
    }

    #[test]
    fn injected_sign_fault_is_caught_by_the_commutator() {
        let report = run_check(Scope::Distrib, Some(Fault::ApplyXSignFlip), 7, Prec::default());
        assert!(!report.passed);
        let first = report.first_failure().unwrap();
        assert_eq!(first.id, "Eq32.commutator");
    }

    #[test]
    fn reports_are_deterministic_for_fixed_seed() {
        let a = run_check(Scope::All, None, 42, Prec::default());
        let b = run_check(Scope::All, None, 42, Prec::default());
        assert_eq!(a.to_json(), b.to_json());
    }
}
