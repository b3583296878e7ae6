//! Acceptance suite: every identity and convergence claim the library makes,
//! run at its stated tolerance, one pass/fail line per criterion.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Rational;

use pseudoboson::bateman::{
    self, standard_battery, BatemanParams, VacuumKind, KERNEL_SIGMA_THRESHOLD,
};
use pseudoboson::distribution::WeakDistribution;
use pseudoboson::expansion::{
    dual_taylor, quasi_basis_scan, taylor_reconstruct, Acceleration, ExpansionError,
    MomentSequence, QuasiOrdering, Verdict,
};
use pseudoboson::families::{
    self, intertwine_residuals, s_phi_extend, BasisTag, FamilyIndexVector,
};
use pseudoboson::numeric::{factorial, Prec, Value};
use pseudoboson::pairing::pair;
use pseudoboson::scalar::ExactScalar;
use pseudoboson::testfn::{make_exp, make_gaussian, make_indicator};
use pseudoboson::Atom;

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn prec() -> Prec {
    Prec::default()
}

fn report(name: &str, passed: bool, elapsed_s: f64, budget_s: f64) {
    println!(
        "acceptance {name}: {} ({elapsed_s:.2}s, budget {budget_s:.0}s)",
        if passed { "PASS" } else { "FAIL" }
    );
}

#[test]
fn criterion_1_exact_biorthonormality() {
    let start = Instant::now();
    let mut ok = true;
    for n in 0..=30u32 {
        for m in 0..=30u32 {
            let v = pair(&families::phi(n), &families::psi(m), prec()).unwrap();
            let expect = if n == m {
                ExactScalar::one()
            } else {
                ExactScalar::zero()
            };
            if !(v.exact && v.value.as_exact() == Some(&expect)) {
                ok = false;
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report("1 biorthonormality ⟨φ_n,ψ_m⟩ = δ_{n,m}, n,m ≤ 30, exact", ok, elapsed, 5.0);
    assert!(ok);
    assert!(elapsed < 5.0, "runtime {elapsed:.2}s exceeds 5s");
}

#[test]
fn criterion_2_exact_weak_commutation() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut ok = true;
    for _ in 0..1000 {
        let f = WeakDistribution::random(&mut rng, 50, 50, 6);
        if !f.commutator_residual().is_zero() {
            ok = false;
            break;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report("2 weak commutation [a,b]F = F on 1000 random members, exact", ok, elapsed, 10.0);
    assert!(ok);
    assert!(elapsed < 10.0, "runtime {elapsed:.2}s exceeds 10s");
}

#[test]
fn criterion_3_ladder_number_intertwining() {
    let start = Instant::now();
    let mut ok = true;

    // ladder and eigenvalue relations for k ≤ 40
    for k in 0..=40u32 {
        let up = ExactScalar::sqrt_uint(u64::from(k) + 1);
        ok &= families::phi(k).apply_atom(Atom::B) == families::phi(k + 1).scale(&up);
        ok &= families::psi(k).apply_atom(Atom::ADag) == families::psi(k + 1).scale(&up);
        if k > 0 {
            let down = ExactScalar::sqrt_uint(u64::from(k));
            ok &= families::phi(k).apply_atom(Atom::A) == families::phi(k - 1).scale(&down);
            ok &= families::psi(k).apply_atom(Atom::BDag) == families::psi(k - 1).scale(&down);
        }
        let kc = ExactScalar::from_int(i64::from(k));
        ok &= families::apply_number(&families::phi(k)) == families::phi(k).scale(&kc);
        ok &= families::apply_number_dag(&families::psi(k)) == families::psi(k).scale(&kc);
    }
    ok &= families::phi(0).apply_atom(Atom::A).is_zero();
    ok &= families::psi(0).apply_atom(Atom::BDag).is_zero();

    // basis-swap and intertwining residuals on 200 random finite spans
    let mut rng = ChaCha8Rng::seed_from_u64(4711);
    for i in 0..200 {
        let tag = if i % 2 == 0 { BasisTag::Phi } else { BasisTag::Psi };
        let v = FamilyIndexVector::random(&mut rng, tag, 25, 4);
        let round_trip = match tag {
            BasisTag::Phi => families::s_phi_span(&families::s_psi_span(&v).unwrap()).unwrap(),
            BasisTag::Psi => families::s_psi_span(&families::s_phi_span(&v).unwrap()).unwrap(),
        };
        ok &= round_trip == v;
        for r in intertwine_residuals(&v) {
            ok &= r.residual.is_zero();
        }
    }

    let elapsed = start.elapsed().as_secs_f64();
    report(
        "3 ladder/number relations k ≤ 40 and swap/intertwine residuals on 200 spans, exact",
        ok,
        elapsed,
        30.0,
    );
    assert!(ok);
    assert!(elapsed < 30.0, "runtime {elapsed:.2}s exceeds 30s");
}

#[test]
fn criterion_4_taylor_reconstruction() {
    let start = Instant::now();
    let mut ok = true;

    // e^x through the pairing route: coefficients exactly 1/n!
    let rep = taylor_reconstruct(&make_exp(q(1, 1)), 20, None, prec()).unwrap();
    for n in 0..=20u32 {
        let expect = Rational::from(1) / factorial(n);
        ok &= rep.series.coeff(n as usize).as_exact().map(|s| s.re().clone()) == Some(expect);
    }

    // e^{−x²/2} at N = 8: sup error on [−1,1] below 3e−4
    let gauss = make_gaussian(q(1, 2)).unwrap();
    let rep = taylor_reconstruct(&gauss, 8, Some((q(-1, 1), q(1, 1))), prec()).unwrap();
    let sup = rep.sup_error.unwrap().to_f64();
    ok &= sup < 3e-4;

    let elapsed = start.elapsed().as_secs_f64();
    report(
        "4 taylor reconstruction: exact 1/n! for e^x (n ≤ 20), sup error < 3e−4 for e^{−x²/2}",
        ok,
        elapsed,
        30.0,
    );
    assert!(ok, "sup error {sup}");
}

#[test]
fn criterion_5_quasi_basis_convergence() {
    let start = Instant::now();
    let p = prec();
    let narrow = make_gaussian(q(1, 1)).unwrap(); // e^{−x²}
    let wide = make_gaussian(q(1, 2)).unwrap(); // e^{−x²/2}

    // √(2π/3) to relative 1e−10 by N ≤ 60
    let target = 1.447_202_509_116_535_3_f64;
    let rep = quasi_basis_scan(
        &narrow,
        &wide,
        QuasiOrdering::PhiPsi,
        60,
        Acceleration::None,
        1e-10 * target,
        p,
    )
    .unwrap();
    let mut ok = (rep.reference.re.to_f64() - target).abs() < 1e-12;
    ok &= matches!(rep.verdict, Verdict::Converged { at, .. } if at <= 60);

    // diagonal case with Euler acceleration: √π within 1e−6 by N ≤ 400
    let rep = quasi_basis_scan(
        &wide,
        &wide,
        QuasiOrdering::PhiPsi,
        400,
        Acceleration::Euler,
        1e-6,
        p,
    )
    .unwrap();
    ok &= (rep.reference.re.to_f64() - std::f64::consts::PI.sqrt()).abs() < 1e-12;
    ok &= matches!(rep.verdict, Verdict::Converged { at, .. } if at <= 400);

    // reversed pair is reported diverging
    let rep = quasi_basis_scan(
        &wide,
        &narrow,
        QuasiOrdering::PhiPsi,
        80,
        Acceleration::None,
        1e-10,
        p,
    )
    .unwrap();
    ok &= rep.verdict == Verdict::Diverging;

    let elapsed = start.elapsed().as_secs_f64();
    report(
        "5 quasi-basis: √(2π/3) rel 1e−10 by N≤60; Euler to √π by N≤400; reversed pair diverges",
        ok,
        elapsed,
        30.0,
    );
    assert!(ok);
}

#[test]
fn criterion_6_indicator_extension() {
    let start = Instant::now();
    let f = make_indicator(q(0, 1), q(1, 1)).unwrap();
    let rep = s_phi_extend(&f, 30, prec()).unwrap();
    let mut ok = true;
    for n in 0..=30u32 {
        let expect = Rational::from(1) / (factorial(n) * Rational::from(n + 1));
        ok &= rep.series.coeff(n as usize).as_exact().map(|s| s.re().clone()) == Some(expect);
    }
    // numeric ratio test confirms convergence at every tested radius ≤ 10
    ok &= rep.diagnostics.iter().all(|d| d.convergent);
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "6 indicator extension: α_n = 1/(n!(n+1)) exactly, n ≤ 30, everywhere-convergent",
        ok,
        elapsed,
        30.0,
    );
    assert!(ok);
}

#[test]
fn criterion_7_dual_taylor() {
    let start = Instant::now();
    let p = prec();
    let mut ok = true;

    // finite moments produce the exact finite delta combination
    let mu = MomentSequence::finite(vec![
        Value::Exact(ExactScalar::from_int(2)),
        Value::zero(),
        Value::Exact(ExactScalar::from_int(6)),
    ]);
    let series = dual_taylor(&mu, p).unwrap();
    let dist = series.to_distribution().unwrap();
    // 2δ + (6/2!)·δ'' = 2δ + 3δ''
    let expect = WeakDistribution::delta_deriv(0, ExactScalar::from_int(2))
        .try_add(&WeakDistribution::delta_deriv(2, ExactScalar::from_int(3)))
        .unwrap();
    ok &= dist == expect;

    // unbounded moment sequences are rejected
    let g = make_gaussian(q(1, 1)).unwrap();
    let unbounded = MomentSequence::from_function_unbounded(&g, 12, p).unwrap();
    ok &= matches!(
        dual_taylor(&unbounded, p),
        Err(ExpansionError::InfiniteMoments)
    );

    let elapsed = start.elapsed().as_secs_f64();
    report(
        "7 dual taylor: exact finite delta combination; unbounded moments rejected",
        ok,
        elapsed,
        30.0,
    );
    assert!(ok);
}

#[test]
fn criterion_8_bateman_identities() {
    let start = Instant::now();
    let p = prec();
    let t = 8u32;
    let mut ok = true;

    // five parameter triples with ω² > 0 (fixed seed)
    let mut rng = ChaCha8Rng::seed_from_u64(777);
    let mut params_list = vec![BatemanParams::new(q(1, 1), q(1, 2), q(1, 1)).unwrap()];
    while params_list.len() < 5 {
        let m = q(rng.random_range(1i64..=4), rng.random_range(1i64..=2));
        let k = q(rng.random_range(1i64..=4), rng.random_range(1i64..=2));
        let gamma = q(rng.random_range(0i64..=2), rng.random_range(1i64..=3));
        if let Ok(params) = BatemanParams::new(m, gamma, k) {
            params_list.push(params);
        }
    }

    let pb = bateman::build_pb(t, p).unwrap();
    let eye = bateman::FockOperator::identity(pb.a1.basis().clone(), p);
    let pairs: [(&bateman::FockOperator, &bateman::FockOperator, bool); 4] = [
        (&pb.a1, &pb.b1, true),
        (&pb.a1, &pb.b2, false),
        (&pb.a2, &pb.b1, false),
        (&pb.a2, &pb.b2, true),
    ];
    for (a, b, is_diag) in pairs {
        let mut c = a.commutator(b, p);
        if is_diag {
            c = c.sub(&eye);
        }
        ok &= c.max_abs_on_safe_columns(t - 2).to_f64() < 1e-12;
    }

    for params in &params_list {
        let residual = bateman::hamiltonian_residual(params, t, p).unwrap().to_f64();
        ok &= residual < 1e-12;
    }

    let elapsed = start.elapsed().as_secs_f64();
    report(
        "8 bateman: [A_j,B_k] = δ_{jk} and both Hamiltonian forms agree, residual < 1e−12, T = 8",
        ok,
        elapsed,
        20.0,
    );
    assert!(ok);
    assert!(elapsed < 20.0, "runtime {elapsed:.2}s exceeds 20s");
}

#[test]
fn criterion_9_joint_kernel_and_weak_vacua() {
    let start = Instant::now();
    let p = prec();
    let params = BatemanParams::new(q(1, 1), q(1, 2), q(1, 1)).unwrap();
    let mut ok = true;

    // no joint kernel at desk scale: σ_min stays above the calibrated floor
    let truncs: Vec<u32> = (4..=12).collect();
    let rows = bateman::joint_kernel_scan(&params, &truncs, p).unwrap();
    for row in &rows {
        ok &= row.sigma_min_pair > KERNEL_SIGMA_THRESHOLD;
        ok &= row.sigma_min_bdag_pair > KERNEL_SIGMA_THRESHOLD;
    }

    // both distributional vacua pass the 12-function battery for both modes
    for poly in standard_battery() {
        for which in [VacuumKind::Phi00, VacuumKind::Psi00] {
            for j in [1usize, 2] {
                let r = bateman::weak_vacuum_residual(&params, which, j, &poly, None, p)
                    .unwrap()
                    .to_f64();
                ok &= r < 1e-8;
            }
        }
    }

    // the perturbed candidate δ(x₁−x₂−1/10) fails the battery
    let eps = q(1, 10);
    let mut worst: f64 = 0.0;
    for poly in standard_battery() {
        for j in [1usize, 2] {
            let r = bateman::weak_vacuum_residual(&params, VacuumKind::Phi00, j, &poly, Some(&eps), p)
                .unwrap()
                .to_f64();
            worst = worst.max(r);
        }
    }
    ok &= worst > 1e-3;

    let elapsed = start.elapsed().as_secs_f64();
    report(
        "9 joint-kernel σ_min > 0.1 for T ∈ {4..12}; vacuum battery < 1e−8; shifted candidate rejected",
        ok,
        elapsed,
        60.0,
    );
    assert!(ok);
    assert!(elapsed < 60.0, "runtime {elapsed:.2}s exceeds 60s");
}
