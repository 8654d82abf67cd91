use std::convert::Infallible;

use proptest::prelude::*;

use super::candidates::case3_set;
use super::*;
use crate::algebra::{rat, rat_int, Rational};
use crate::geodesic::dopri::{Dopri5, Tolerances};
use crate::nve::{equatorial_nve, expected_poles};

fn q(v: Rational) -> QuadExt {
    QuadExt::rational(v)
}

fn nve_ode(n: u32, eps: Rational) -> FuchsianOde<QuadExt> {
    FuchsianOde::from_nve(&equatorial_nve(n, &eps).unwrap())
}

fn counts(pairs: &[(usize, usize)]) -> std::collections::BTreeMap<usize, usize> {
    pairs.iter().copied().collect()
}

/// `ξ″ = (−5x² − 22)/(36(x² − 1)²) ξ`: the normal form of Chebyshev's
/// equation with index 1/3, whose group is dihedral.
fn chebyshev_third() -> FuchsianOde<Rational> {
    let num = Poly::new(vec![rat_int(-22), rat_int(0), rat_int(-5)]);
    let den = Poly::new(vec![rat_int(-1), rat_int(0), rat_int(1)]).pow(2).scale(&rat_int(36));
    FuchsianOde::new(RatFunc::new(num, den).unwrap(), &[rat_int(1), rat_int(-1)]).unwrap()
}

#[test]
fn table_rows() {
    let eps = rat(1, 4);
    let t2 = table1(2, &eps).unwrap();
    assert_eq!(t2[&1], counts(&[(0, 4)]));
    assert_eq!(t2[&2], counts(&[(0, 3), (1, 1)]));
    assert_eq!(t2[&4], counts(&[(0, 4), (1, 2), (2, 1)]));
    assert_eq!(t2[&6], counts(&[(0, 21), (1, 10), (2, 3), (3, 1)]));
    assert_eq!(t2[&12], counts(&[(0, 31), (1, 20), (2, 13), (3, 8), (4, 4), (5, 2), (6, 1)]));
    let t6 = table1(6, &eps).unwrap();
    assert!(t6[&1].is_empty() && t6[&2].is_empty() && t6[&4].is_empty());
    assert_eq!(t6[&6], counts(&[(0, 3), (1, 1)]));
    assert_eq!(t6[&12], counts(&[(0, 3), (1, 2), (2, 1)]));
    let t12 = table1(12, &eps).unwrap();
    assert_eq!(t12[&6], counts(&[(0, 2)]));
    assert_eq!(t12[&12], counts(&[(0, 2), (1, 1)]));
}

#[test]
fn case3_sets_for_n2() {
    let ode = nve_ode(2, rat(1, 2));
    assert_eq!(case3_set(&ode, Some(0), 12), vec![12]);
    // ±ε then ρ±
    assert_eq!(case3_set(&ode, Some(1), 12), vec![6, 7, 5, 8, 4, 9, 3]);
    assert_eq!(case3_set(&ode, Some(2), 12), vec![6, 7, 5, 8, 4, 9, 3]);
    assert_eq!(case3_set(&ode, Some(3), 12), vec![6, 9, 3, 12, 0, 15, -3]);
    assert_eq!(case3_set(&ode, Some(4), 12), vec![6, 9, 3, 12, 0, 15, -3]);
    assert_eq!(case3_set(&ode, None, 12), vec![6, 8, 4, 10, 2, 12, 0, 14, -2, 16, -4, 18, -6]);
    let top = case3_candidates(&ode, 12).unwrap().into_iter().max_by_key(|c| c.d).unwrap();
    assert_eq!(top.d, 6);
    let f: Vec<String> = top.exponents.iter().map(ToString::to_string).collect();
    assert_eq!(f, ["12", "3", "3", "-3", "-3"]);
    assert_eq!(top.at_infinity, q(rat_int(18)));
}

#[test]
fn candidates_recompute_their_degree() {
    let ode = nve_ode(3, rat(1, 5));
    for case in CASES {
        for c in candidates_for(&ode, case).unwrap() {
            assert_eq!(c.recompute_d(), Some(c.d));
            assert_eq!(c.selection.len(), ode.poles.len() + 1);
        }
    }
    assert!(case1_candidates(&ode).unwrap().is_empty());
}

#[test]
fn n1_exponent_count() {
    let ode = nve_ode(1, rat(1, 3));
    let all = case1_candidates(&ode).unwrap();
    assert_eq!(all.iter().filter(|c| c.d == 1).count(), 2);
    let c1: Vec<_> = all.into_iter().filter(|c| c.d == 0).collect();
    // the simple pole at −1 contributes α = 1 under both signs
    assert_eq!(c1.len(), 2);
    for c in &c1 {
        assert_eq!(c.d, 0);
        assert_eq!(c.at_infinity, q(rat(9, 4)));
        let a: Vec<QuadExt> = vec![q(rat_int(1)), q(rat(3, 4)), q(rat(3, 4)), q(rat(-1, 4))];
        assert_eq!(c.exponents, a);
    }
}

#[test]
fn euler_equation() {
    // ξ″ = ¾ z⁻² ξ has ξ = z^{3/2} and ξ = z^{−1/2}
    let r = RatFunc::pole_term(rat(3, 4), &rat_int(0), 2);
    let ode = FuchsianOde::new(r, &[rat_int(0)]).unwrap();
    let out = run_kovacic(&ode).unwrap();
    let Verdict::Solvable { case: 1, d: 0, witness: Witness::Rational { omega, .. } } = &out.verdict else {
        panic!("expected case 1, got {:?}", out.verdict);
    };
    let plus = RatFunc::pole_term(rat(3, 2), &rat_int(0), 1);
    let minus = RatFunc::pole_term(rat(-1, 2), &rat_int(0), 1);
    assert!(*omega == plus || *omega == minus);
    let found: Vec<&RatFunc<Rational>> = out
        .ledger
        .iter()
        .filter_map(|e| match &e.result {
            SearchResult::Found(Witness::Rational { omega, .. }) => Some(omega),
            _ => None,
        })
        .collect();
    assert!(found.contains(&&plus) && found.contains(&&minus));
}

#[test]
fn case2_instance() {
    let ode = chebyshev_third();
    assert_eq!(ode.beta, vec![rat(-3, 16), rat(-3, 16)]);
    assert!(case1_candidates(&ode).unwrap().is_empty());
    let out = run_kovacic(&ode).unwrap();
    let Verdict::Solvable { case: 2, d: 0, witness } = &out.verdict else {
        panic!("expected case 2, got {:?}", out.verdict);
    };
    let Witness::Quadratic { phi, .. } = witness else { panic!() };
    // φ = x/(x² − 1)
    let expect = RatFunc::new(Poly::x(), Poly::new(vec![rat_int(-1), rat_int(0), rat_int(1)])).unwrap();
    assert_eq!(*phi, expect);
    assert!(verify_solution(&ode, witness));

    // independent check: take a numerical root ω of the quadratic and
    // substitute it into the Riccati equation by finite differences
    let ev = |f: &RatFunc<Rational>, x: f64| {
        let h = |p: &Poly<Rational>| p.coeffs().iter().rev().fold(0.0, |a, c| a * x + c.to_f64());
        h(f.num()) / h(f.den())
    };
    let half = rat(1, 2);
    let c = &(&phi.derivative() + &(phi * phi)).scale(&half) - &ode.r;
    let omega = |x: f64| {
        let (p, cc) = (ev(phi, x), ev(&c, x));
        0.5 * (p + (p * p - 4.0 * cc).sqrt())
    };
    for x in [1.5, 2.0, 3.7, 10.0] {
        let h = 1e-5;
        let d = (omega(x + h) - omega(x - h)) / (2.0 * h);
        let res = d + omega(x).powi(2) - ev(&ode.r, x);
        assert!(res.abs() < 1e-7, "x = {x}: residual {res}");
    }
}

#[test]
fn n1_witness() {
    for eps in [rat(1, 10), rat(1, 3), rat(1, 2)] {
        let ode = nve_ode(1, eps.clone());
        let out = run_kovacic(&ode).unwrap();
        let Verdict::Solvable { case: 1, d: 0, witness } = &out.verdict else {
            panic!("n = 1 should be solvable");
        };
        assert!(verify_solution(&ode, witness));
        let Witness::Rational { omega, p, .. } = witness else { panic!() };
        assert_eq!(*p, Poly::one());
        let rho = expected_poles(1, &eps)[3].clone();
        let want = [
            RatFunc::pole_term(q(rat_int(1)), &q(rat_int(-1)), 1),
            RatFunc::pole_term(q(rat(3, 4)), &q(eps.clone()), 1),
            RatFunc::pole_term(q(rat(3, 4)), &q(-&eps), 1),
            RatFunc::pole_term(q(rat(-1, 4)), &rho, 1),
        ]
        .iter()
        .fold(RatFunc::zero(), |a, t| &a + t);
        assert_eq!(*omega, want);
    }
}

#[test]
fn broken_witness_rejected() {
    let ode = nve_ode(1, rat(1, 3));
    let Verdict::Solvable { witness: Witness::Rational { theta, p, omega }, .. } = run_kovacic(&ode).unwrap().verdict else {
        panic!()
    };
    let bad = &omega + &RatFunc::pole_term(QuadExt::one(), &ode.poles[0], 1);
    let w = Witness::Rational { theta, p, omega: bad };
    assert!(!verify_solution(&ode, &w));
}

#[test]
fn n1_wronskian() {
    // ξ₁ = (z+1)(z²−ε²)^{3/4}(z−ρ)^{−1/4}; ξ₂ = ξ₁∫ξ₁⁻² has W(ξ₁, ξ₂) = 1
    let eps = rat(1, 3);
    let ode = nve_ode(1, eps.clone());
    let (e, rho) = (1.0 / 3.0, expected_poles(1, &eps)[3].to_f64());
    let r_num: Vec<f64> = ode.r.num().coeffs().iter().map(|c| c.to_f64()).collect();
    let r_den: Vec<f64> = ode.r.den().coeffs().iter().map(|c| c.to_f64()).collect();
    let horner = |c: &[f64], x: f64| c.iter().rev().fold(0.0, |a, k| a * x + k);
    let rf = |x: f64| horner(&r_num, x) / horner(&r_den, x);
    let xi1 = |z: f64| (z + 1.0) * (z * z - e * e).powf(0.75) * (z - rho).powf(-0.25);
    let om = |z: f64| 1.0 / (z + 1.0) + 0.75 / (z - e) + 0.75 / (z + e) - 0.25 / (z - rho);
    let z0 = e.max(rho) + 0.5;
    let mut f = |z: f64, y: &[f64; 4]| -> Result<[f64; 4], Infallible> {
        let rz = rf(z);
        Ok([y[1], rz * y[0], y[3], rz * y[2]])
    };
    let y0 = [xi1(z0), om(z0) * xi1(z0), 0.0, 1.0 / xi1(z0)];
    let mut st = Dopri5::new(&mut f, z0, y0, 1e-3, Tolerances::uniform(1e-12)).unwrap();
    let z1 = z0 + 3.0;
    while st.t < z1 {
        st.step(&mut f, z1).unwrap();
        let y = st.y;
        let w = y[0] * y[3] - y[1] * y[2];
        assert!((w - 1.0).abs() < 1e-8, "W = {w} at z = {}", st.t);
        assert!((y[0] / xi1(st.t) - 1.0).abs() < 1e-8);
    }
}

#[test]
fn n2_low_cases_fail() {
    let ode = nve_ode(2, rat(1, 2));
    for c in case1_candidates(&ode).unwrap() {
        assert!(matches!(case1_search(&ode, &c), SearchResult::NoPolynomial { .. }));
    }
    for c in case2_candidates(&ode).unwrap() {
        assert!(matches!(case2_search(&ode, &c), SearchResult::NoPolynomial { .. }));
    }
}

#[test]
fn empty_ledger_rows() {
    for n in [7, 8, 9, 11, 13] {
        let out = run_kovacic(&nve_ode(n, rat(1, 2))).unwrap();
        assert_eq!(out.verdict, Verdict::Unsolvable);
        assert!(out.ledger.is_empty(), "n = {n}");
        assert_eq!(out.necessary, [true; 3]);
    }
}

#[test]
fn case3_degree_bound() {
    let ode = nve_ode(2, rat(1, 4));
    let top = case3_candidates(&ode, 12).unwrap().into_iter().find(|c| c.d == 6).unwrap();
    let weights = top.theta_weights();
    let theta = ode
        .poles
        .iter()
        .zip(&weights)
        .fold(RatFunc::zero(), |acc, (a, w)| &acc + &RatFunc::pole_term(w.clone(), a, 1));
    let p = Poly::monomial(QuadExt::one(), 6);
    let chain = case3_recursion(&ode, &theta, 12, &p);
    // P_N = O(z^d), each step adds at most k − 1 = 4
    for (i, pi) in chain.iter().enumerate().skip(1) {
        let level = 12 - (i - 1);
        assert!(pi.degree().unwrap() <= 4 * level + 6);
    }
    assert!(chain[0].degree().unwrap() <= 58);
    assert!(matches!(case3_search(&ode, &top), SearchResult::NoPolynomial { .. }));
}

#[test]
fn necessary_conditions_filter() {
    // only simple poles: case 2 is impossible
    let r = &RatFunc::pole_term(rat_int(-2), &rat_int(0), 1) + &RatFunc::pole_term(rat_int(2), &rat_int(1), 1);
    let ode = FuchsianOde::new(r, &[rat_int(0), rat_int(1)]).unwrap();
    assert_eq!(ode.necessary_conditions(), [true, false, true]);
    let out = run_kovacic(&ode).unwrap();
    assert!(out.ledger.iter().all(|e| e.candidate.case != 2));
}

#[test]
fn rejects_non_fuchsian() {
    let r = RatFunc::pole_term(rat_int(1), &rat_int(0), 3);
    assert!(matches!(
        FuchsianOde::new(r, &[rat_int(0)]),
        Err(KovacicError::NotFuchsian(_))
    ));
    let r = RatFunc::pole_term(rat_int(1), &rat_int(0), 1);
    assert!(FuchsianOde::new(r, &[rat_int(0)]).is_err());
}

#[test]
fn report_json() {
    let ode = nve_ode(1, rat(1, 2));
    let out = run_kovacic(&ode).unwrap();
    let v = outcome_json(&ode, &out);
    assert_eq!(v["verdict"]["solvable"], true);
    assert_eq!(v["verdict"]["case"], 1);
    assert_eq!(v["ledger"].as_array().unwrap().len(), 4);
    assert_eq!(v["poles"].as_array().unwrap().len(), 4);
}

#[test]
fn table_text_layout() {
    let rows: Vec<(u32, Table1Row)> = [2, 7].iter().map(|&n| (n, table1(n, &rat(1, 3)).unwrap())).collect();
    let text = table1_text(&rows);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("n | N=1  | N=2"));
    assert!(lines[3].starts_with("7 | -    | -"));
    let json = table1_json(&rows);
    assert_eq!(json["rows"][0]["counts"]["12"]["6"], 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]
    /// ω = Σ α_j/(z − a_j) + P′/P planted in ξ″ = (ω′ + ω²)ξ is recovered.
    #[test]
    fn planted_case1(
        alpha in prop::collection::vec((-7i64..8, 1i64..4), 2..4),
        root in -9i64..-3,
    ) {
        let poles: Vec<Rational> = (0..alpha.len()).map(|j| rat_int(j as i64 * 2 + 1)).collect();
        let p = Poly::linear_root(&rat_int(root));
        let mut omega = RatFunc::new(p.derivative(), p.clone()).unwrap();
        for ((num, den), a) in alpha.iter().zip(&poles) {
            omega = &omega + &RatFunc::pole_term(rat(*num, *den), a, 1);
        }
        let r = &omega.derivative() + &(&omega * &omega);
        let Ok(ode) = FuchsianOde::new(r, &poles) else { return Ok(()) };
        prop_assume!(ode.poles.len() == poles.len());
        let Ok(cands) = case1_candidates(&ode) else { return Ok(()) };
        let hits: Vec<RatFunc<Rational>> = cands
            .iter()
            .filter_map(|c| match case1_search(&ode, c) {
                SearchResult::Found(Witness::Rational { omega, .. }) => Some(omega),
                _ => None,
            })
            .collect();
        prop_assert!(hits.contains(&omega));
    }
}
