use super::*;
use crate::algebra::{rat, RatFunc};

fn q(v: Rational) -> QuadExt {
    QuadExt::rational(v)
}

#[test]
fn standard_form_examples() {
    let zero = QRatFunc::zero();
    let r = standard_form(&zero, &QRatFunc::constant(rat_int(-1)));
    assert_eq!(r, QRatFunc::one());
    // p = 1/z: r = 1/(4z²) − 1/(2z²)
    let p = RatFunc::new(Poly::one(), Poly::x()).unwrap();
    let r = standard_form(&p, &zero);
    let want = RatFunc::new(Poly::constant(rat(-1, 4)), Poly::x().pow(2)).unwrap();
    assert_eq!(r, want);
}

#[test]
fn sphere_branch() {
    assert_eq!(sphere_nve().omega_sq, 1);
    assert_eq!(equatorial_nve(3, &rat_int(0)), Err(NveError::Sphere));
    assert!(matches!(equatorial_nve(3, &rat(3, 2)), Err(NveError::AmplitudeOutOfRange(_))));
}

#[test]
fn matches_independent_derivation() {
    // hand-simplified equatorial coefficients, with G = g_φφ and W = ż²
    for (n, eps) in [(2u32, rat(1, 2)), (3, rat(1, 4)), (1, rat(1, 3))] {
        let d = equatorial_nve(n, &eps).unwrap();
        let nn = rat_int(i64::from(n));
        let z = QRatFunc::from_poly(Poly::x());
        let k = |v: Rational| QRatFunc::constant(v);
        let r = &k(rat_int(1)) + &z;
        let rp2 = &k(&nn * &nn * &eps * &eps) - &(&k(&nn * &nn) * &(&z * &z));
        let g = &(&r * &r) + &rp2;
        let rtt = &k(-nn.clone()) * &z;
        let rpp = &k(-(&nn * &nn)) * &z;
        let dgamma = &(&(&(&rtt * &(&rpp - &r)) + &(&r * &r)) / &(&r * &r))
            - &(&(&(&rtt * &rp2) * &(&rpp + &r)) / &(&(&r * &r) * &g));
        let w = &rp2 / &g;
        let p = &(&w.derivative() / &(&k(rat_int(2)) * &w)) + &(&k(rat_int(2)) / &r);
        let qq = &dgamma / &(&g * &w);
        assert_eq!(d.p, p, "n = {n}");
        assert_eq!(d.q, qq, "n = {n}");
    }
}

#[test]
fn fuchsian_data_n2() {
    let d = equatorial_nve(2, &rat(1, 2)).unwrap();
    let f = &d.fuchsian;
    let beta: Vec<QuadExt> = [0, -3, -3, 5, 5].iter().map(|&b| q(rat(b, 16))).collect();
    assert_eq!(f.beta, beta);
    assert_eq!(f.beta_inf, q(rat(3, 4)));
    assert!(f.delta_sum().is_zero());
    assert_eq!(f.delta[0], q(rat(-4, 3)));
    assert_eq!(f.delta[1], q(rat(83, 72)));
    assert_eq!(f.delta[2], q(rat(-27, 8)));
    let d7 = QuadExt::sqrt_of(rat_int(7));
    let s = d7.mul_ref(&q(rat(925, 1008)));
    assert_eq!(f.delta[3], q(rat(16, 9)).sub_ref(&s));
    assert_eq!(f.delta[4], q(rat(16, 9)).add_ref(&s));
}

#[test]
fn fuchsian_data_n3() {
    let d = equatorial_nve(3, &rat(1, 4)).unwrap();
    let f = &d.fuchsian;
    let s6 = QuadExt::sqrt_of(rat_int(6)).mul_ref(&q(rat(11, 18)));
    let want = [
        q(rat(-32, 45)),
        q(rat(253, 180)),
        q(rat(-19, 12)),
        q(rat(4, 9)).sub_ref(&s6),
        q(rat(4, 9)).add_ref(&s6),
    ];
    assert_eq!(f.delta, want.to_vec());
    assert_eq!(f.beta_inf, q(rat(4, 9)));
}

#[test]
fn fuchsian_data_n1() {
    let d = equatorial_nve(1, &rat(1, 3)).unwrap();
    let f = &d.fuchsian;
    assert_eq!(f.poles[3], q(rat(-5, 9)));
    let beta: Vec<QuadExt> = [0, -3, -3, 5].iter().map(|&b| q(rat(b, 16))).collect();
    assert_eq!(f.beta, beta);
    assert_eq!(f.beta_inf, q(rat(45, 16)));
    let want: Vec<QuadExt> = [rat(-9, 4), rat(153, 64), rat(-9, 8), rat(63, 64)].into_iter().map(q).collect();
    assert_eq!(f.delta, want);
}

#[test]
fn beta_is_independent_of_eps() {
    for n in 2..=12u32 {
        let binf = rat(i64::from(n) + 1, i64::from(n * n));
        for eps in [rat(1, 10), rat(1, 4), rat(1, 2), rat(2, 3)] {
            let d = equatorial_nve(n, &eps).unwrap();
            let f = &d.fuchsian;
            let beta: Vec<QuadExt> = [0, -3, -3, 5, 5].iter().map(|&b| q(rat(b, 16))).collect();
            assert_eq!(f.beta, beta, "n = {n}");
            assert_eq!(f.beta_inf, q(binf.clone()));
            assert!(f.delta_sum().is_zero());
            assert_eq!(f.delta[0], q(delta1_closed_form(n, &eps)));
            // √(1 + 4β∞) = (n+2)/n
            let root = (rat_int(1) + rat_int(4) * &binf).sqrt().unwrap();
            assert_eq!(root, rat(i64::from(n) + 2, i64::from(n)));
            for i in 0..5 {
                for j in 0..i {
                    assert_ne!(f.poles[i], f.poles[j]);
                }
            }
        }
    }
}

#[test]
fn json_dump_has_integer_lists() {
    let d = equatorial_nve(2, &rat(1, 2)).unwrap();
    let v = nve_json(&d);
    assert_eq!(v["poles"].as_array().unwrap().len(), 5);
    assert_eq!(v["D"], "7/4");
    for key in ["p", "q", "r"] {
        for part in ["num", "den"] {
            for c in v[key][part].as_array().unwrap() {
                assert!(c.as_str().unwrap().parse::<i128>().is_ok());
            }
        }
    }
}

#[test]
fn z_domain_agrees_with_arc_length_domain() {
    for n in [2u32, 3] {
        let d = equatorial_nve(n, &rat(1, 5)).unwrap();
        let rep = dual_representation_check(&d, 0.05, 1e-12).unwrap();
        eprintln!("n = {n}: {rep:?}");
        assert_eq!(rep.segments, 2 * n as usize);
        assert!(rep.max_rel_err < 1e-6, "{}", rep.max_rel_err);
    }
}
