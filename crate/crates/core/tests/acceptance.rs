//! End-to-end acceptance checks, one test per criterion. Each prints a
//! `criterion N: PASS|FAIL` line to stderr (bypassing the test harness's
//! capture) before asserting.

use std::f64::consts::{PI, TAU};
use std::io::Write;
use std::time::Instant;

use harmgeo::algebra::{rat, rat_int, Field, RatFunc, Rational};
use harmgeo::geodesic::{integrate, lemma1_critical_eps, GeodesicState};
use harmgeo::kovacic::{run_kovacic, table1, table1_text, verify_solution, FuchsianOde, SearchResult, Verdict, Witness};
use harmgeo::nve::{delta1_closed_form, dual_representation_check, equatorial_nve, expected_poles};
use harmgeo::poincare::{find_closed_geodesics, generate_section, max_occupancy, FixedPointOptions, GeodesicFamily, SectionConfig, Stability};
use harmgeo::surface::PolarSurface;
use harmgeo::QuadExt;

fn report(n: u32, ok: bool, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "criterion {n}: {verdict} ({detail})");
}

fn q(v: Rational) -> QuadExt {
    QuadExt::rational(v)
}

#[test]
fn criterion_1_table1() {
    let start = Instant::now();
    let rows: Vec<_> = (2..=12).map(|n| (n, table1(n, &rat(1, 4)).unwrap())).collect();
    let text = table1_text(&rows);
    let elapsed = start.elapsed().as_secs_f64();
    let golden = include_str!("golden/table1.txt");
    let ok = text == golden && elapsed < 10.0;
    report(1, ok, &format!("golden match {}, {elapsed:.2} s", text == golden));
    assert_eq!(text, golden);
    assert!(elapsed < 10.0);
}

#[test]
fn criterion_2_unsolvable_n2_to_12() {
    let start = Instant::now();
    let mut problems = Vec::new();
    for eps in [rat(1, 10), rat(1, 4), rat(1, 2)] {
        for n in 2..=12u32 {
            let ode = FuchsianOde::from_nve(&equatorial_nve(n, &eps).unwrap());
            let out = run_kovacic(&ode).unwrap();
            let populated = matches!(n, 2..=6 | 10 | 12);
            let all_failed = out.ledger.iter().all(|e| matches!(e.result, SearchResult::NoPolynomial { .. }));
            if out.verdict != Verdict::Unsolvable || populated == out.ledger.is_empty() || !all_failed {
                problems.push(format!("n = {n}, ε = {eps}"));
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let ok = problems.is_empty() && elapsed < 1800.0;
    report(2, ok, &format!("{} problem cases, {elapsed:.1} s", problems.len()));
    assert!(problems.is_empty(), "{problems:?}");
    assert!(elapsed < 1800.0);
}

#[test]
fn criterion_3_n1_solvable() {
    let mut ok = true;
    for eps in [rat(1, 10), rat(1, 3), rat(1, 2)] {
        let ode = FuchsianOde::from_nve(&equatorial_nve(1, &eps).unwrap());
        let out = run_kovacic(&ode).unwrap();
        let Verdict::Solvable { case: 1, d: 0, witness } = &out.verdict else {
            ok = false;
            continue;
        };
        let Witness::Rational { omega, .. } = witness else {
            ok = false;
            continue;
        };
        // ω = ξ₁′/ξ₁ for ξ₁ = (z+1)(z²−ε²)^{3/4}(z−ρ)^{−1/4}
        let rho = expected_poles(1, &eps)[3].clone();
        let want = [
            RatFunc::pole_term(q(rat_int(1)), &q(rat_int(-1)), 1),
            RatFunc::pole_term(q(rat(3, 4)), &q(eps.clone()), 1),
            RatFunc::pole_term(q(rat(3, 4)), &q(-&eps), 1),
            RatFunc::pole_term(q(rat(-1, 4)), &rho, 1),
        ]
        .iter()
        .fold(RatFunc::zero(), |a, t| &a + t);
        let residual = &(&omega.derivative() + &(omega * omega)) - &ode.r;
        ok &= verify_solution(&ode, witness) && residual.is_zero() && *omega == want;
    }
    report(3, ok, "n = 1 solvable in case 1 with the expected ω");
    assert!(ok);
}

#[test]
fn criterion_4_fuchsian_data() {
    let mut bad = Vec::new();
    for eps in [rat(1, 10), rat(1, 4), rat(1, 2), rat(7, 10)] {
        for n in 2..=12u32 {
            let d = equatorial_nve(n, &eps).unwrap();
            let pf = &d.fuchsian;
            let beta: Vec<QuadExt> = [rat(0, 1), rat(-3, 16), rat(-3, 16), rat(5, 16), rat(5, 16)].map(q).to_vec();
            let ok = pf.beta == beta
                && pf.beta_inf == q(rat(i64::from(n) + 1, i64::from(n * n)))
                && pf.delta_sum().is_zero()
                && pf.delta[0] == q(rat_int(2) / (rat_int(i64::from(n)) * (&eps * &eps - rat_int(1))))
                && pf.delta[0] == q(delta1_closed_form(n, &eps));
            if !ok {
                bad.push(format!("n = {n}, ε = {eps}"));
            }
        }
        let one = equatorial_nve(1, &eps).unwrap();
        if one.fuchsian.beta_inf != q(rat(45, 16)) {
            bad.push(format!("n = 1, ε = {eps}"));
        }
    }
    report(4, bad.is_empty(), &format!("{} mismatches", bad.len()));
    assert!(bad.is_empty(), "{bad:?}");
}

#[test]
fn criterion_5_lemma1() {
    let start = Instant::now();
    let got: Vec<f64> = [2, 3, 4].map(lemma1_critical_eps).to_vec();
    let elapsed = start.elapsed().as_secs_f64();
    let ok = got.iter().zip([0.570, 0.497, 0.445]).all(|(g, w)| (g - w).abs() <= 0.005) && elapsed < 60.0;
    report(5, ok, &format!("ε* = {got:.4?}, {elapsed:.2} s"));
    assert!(ok);
}

fn unit(theta: f64, phi: f64) -> [f64; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

#[test]
fn criterion_6_integrator() {
    // great circles on the sphere close after 2π
    let sphere = PolarSurface::<f64>::sphere();
    let mut closure: f64 = 0.0;
    for (t, p, a) in [(1.1, 0.4, 0.7), (0.6, -2.0, 2.9), (2.2, 1.3, -1.2)] {
        let st = GeodesicState::normalized(&sphere, t, p, f64::cos(a), f64::sin(a)).unwrap();
        let end = integrate(&sphere, st, TAU, 1e-12).unwrap().end;
        let (u, v) = (unit(t, p), unit(end.theta, end.phi));
        closure = closure.max((0..3).map(|i| (u[i] - v[i]).powi(2)).sum::<f64>().sqrt());
    }
    // Clairaut integral on a zonal surface
    let zonal = PolarSurface::<f64>::zonal(2, 0.3).unwrap();
    let st = GeodesicState::normalized(&zonal, 1.2, 0.1, 0.5, 0.8).unwrap();
    let traj = integrate(&zonal, st, 1000.0, 1e-12).unwrap();
    let l = |g: &GeodesicState<f64>| zonal.metric_at(g.theta, g.phi).unwrap().g_pp * g.phi_dot;
    let clairaut = traj.samples.iter().map(|(g, _)| (l(g) - l(&st)).abs()).fold(0.0, f64::max);
    // Hamiltonian drift on a sectoral surface
    let sect = PolarSurface::<f64>::sectoral(3, 0.2).unwrap();
    let st = GeodesicState::normalized(&sect, 1.0, 0.2, 0.7, 0.6).unwrap();
    let drift = integrate(&sect, st, 1000.0, 1e-12).unwrap().max_energy_drift();
    let ok = closure <= 1e-8 && clairaut <= 1e-9 && drift <= 1e-9;
    report(6, ok, &format!("closure {closure:.1e}, Clairaut {clairaut:.1e}, |2H−1| {drift:.1e}"));
    assert!(ok);
}

#[test]
fn criterion_7_closed_geodesics() {
    let opts = FixedPointOptions::default();
    let s3 = PolarSurface::<f64>::sectoral(3, 0.1).unwrap();
    let s2 = PolarSurface::<f64>::sectoral(2, 0.1).unwrap();
    let planar3 = find_closed_geodesics(&s3, GeodesicFamily::Planar, (PI / 3.0, 0.0), &opts).unwrap();
    let perp3 = find_closed_geodesics(&s3, GeodesicFamily::Perpendicular, (PI / 6.0, 0.0), &opts).unwrap();
    let planar2 = find_closed_geodesics(&s2, GeodesicFamily::Planar, (0.0, 0.0), &opts).unwrap();
    let dets = [planar3.det(), perp3.det(), planar2.det()];
    let ok = planar3.classification == Stability::Hyperbolic
        && perp3.classification == Stability::Elliptic
        && planar2.classification == Stability::Elliptic
        && dets.iter().all(|d| (d - 1.0).abs() <= 1e-4);
    report(
        7,
        ok,
        &format!(
            "n=3 planar {:?}, n=3 perpendicular {:?}, n=2 planar {:?}, max |det − 1| = {:.1e}",
            planar3.classification,
            perp3.classification,
            planar2.classification,
            dets.iter().map(|d| (d - 1.0).abs()).fold(0.0, f64::max)
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_8_chaos_onset() {
    let cfg = SectionConfig::new(40, 400, 7);
    let occ = |eps: f64| {
        let s = PolarSurface::<f64>::sectoral(3, eps).unwrap();
        max_occupancy(&generate_section(&s, &cfg).unwrap(), 100)
    };
    let (regular, mixed) = (occ(0.1), occ(0.3));
    let ratio = mixed / regular;
    let ok = ratio > 5.0;
    report(8, ok, &format!("max occupancy {regular:.4} at ε = 0.1, {mixed:.4} at ε = 0.3, ratio {ratio:.2}"));
    assert!(ok, "ratio {ratio}");
}

#[test]
fn criterion_9_dual_representation() {
    let mut worst: f64 = 0.0;
    for n in [2, 3] {
        let data = equatorial_nve(n, &rat(1, 5)).unwrap();
        let rep = dual_representation_check(&data, 0.05, 1e-12).unwrap();
        worst = worst.max(rep.max_rel_err);
    }
    let ok = worst <= 1e-6;
    report(9, ok, &format!("max relative error {worst:.1e}"));
    assert!(ok);
}
