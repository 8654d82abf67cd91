use std::f64::consts::{FRAC_PI_2, PI, TAU};

use super::*;

fn sectoral(n: u32, eps: f64) -> PolarSurface<f64> {
    PolarSurface::sectoral(n, eps).unwrap()
}

#[test]
fn phi_dot_max_branches() {
    assert_eq!(phi_dot_max(3, 0.0), 1.0);
    assert!((phi_dot_max(2, 0.1_f64) - 1.0 / 1.1).abs() < 1e-15);
    let (n, e) = (3.0_f64, 0.2);
    let want = 1.0 / (n * n * (1.0 + e * e * (n * n - 1.0)) / (n * n - 1.0)).sqrt();
    assert!((phi_dot_max(3, 0.2) - want).abs() < 1e-15);
    // continuous at the branch point
    let e0 = 1.0_f64 / 8.0;
    assert!((phi_dot_max(3, e0 - 1e-12) - phi_dot_max(3, e0 + 1e-12)).abs() < 1e-10);
}

#[test]
fn phi_dot_max_is_uniform_limit() {
    // 1/√max g_φφ by scanning φ
    for (n, e) in [(2, 0.1), (3, 0.2), (4, 0.4), (5, 0.05)] {
        let s = sectoral(n, e);
        let scan = (0..20000)
            .map(|i| phi_dot_limit(&s, TAU * i as f64 / 20000.0).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert!((scan - phi_dot_max(n, e)).abs() < 1e-7, "n = {n}: {scan}");
        let top = (0..20000)
            .map(|i| phi_dot_limit(&s, TAU * i as f64 / 20000.0).unwrap())
            .fold(0.0, f64::max);
        assert!((top - phi_dot_bound(n, e)).abs() < 1e-7);
    }
}

#[test]
fn rotate_chart_round_trip() {
    let (t, p) = rotate_chart(FRAC_PI_2, FRAC_PI_2);
    // the y-axis is the rotated north pole
    assert!(t.abs() < 1e-15);
    let (t0, p0) = (FRAC_PI_2, 0.0);
    let (a, b) = rotate_chart(t0, p0);
    assert!((a - FRAC_PI_2).abs() < 1e-15 && b.abs() < 1e-15);
    for &(t, ph) in &[(0.3_f64, 0.2_f64), (1.7, -2.9), (2.9, 1.0)] {
        let (vt, vp) = rotate_chart(t, ph);
        assert!((t.sin() - (1.0 - (vt.sin() * vp.sin()).powi(2)).sqrt()).abs() < 1e-12);
        let (bt, bp) = unrotate_chart(vt, vp);
        assert!((bt - t).abs() < 1e-12 && (bp - ph).abs() < 1e-12);
    }
    let _ = p;
}

#[test]
fn launch_is_unit_speed_and_upward() {
    let s = sectoral(3, 0.2);
    let st = launch(&s, 0.4, 0.5).unwrap();
    assert!(st.theta_dot > 0.0);
    assert!((st.two_h(&s).unwrap() - 1.0).abs() < 1e-14);
    assert!(matches!(launch(&s, 0.0, 1.0), Err(PoincareError::Infeasible { .. })));
}

#[test]
fn sphere_return_is_identity() {
    let s = PolarSurface::<f64>::sphere();
    for &(p, pd) in &[(0.3, 0.2), (2.0, -0.7), (5.0, 0.95)] {
        let (p1, pd1) = return_map(&s, p, pd).unwrap();
        assert!((pd1 - pd).abs() < 1e-10);
        assert!(((p1 - p) / TAU - ((p1 - p) / TAU).round()).abs() < 1e-10);
    }
}

#[test]
fn sphere_section_rows_are_flat() {
    let s = PolarSurface::<f64>::sphere();
    let sec = generate_section(&s, &SectionConfig::new(4, 5, 9)).unwrap();
    assert!(sec.failures.is_empty());
    for id in 0..4 {
        let v: Vec<f64> = sec.trajectory(id).map(|p| p.phi_dot).collect();
        assert_eq!(v.len(), 5);
        assert!(v.iter().all(|x| (x - v[0]).abs() < 1e-8));
    }
}

#[test]
fn planar_point_is_fixed() {
    let s = sectoral(3, 0.1);
    let (p, pd) = return_map(&s, PI / 3.0, 0.0).unwrap();
    let d = (p - PI / 3.0) / TAU;
    assert!((d - d.round()).abs() * TAU < 1e-8, "{p}");
    assert!(pd.abs() < 1e-8);
}

#[test]
fn inverse_undoes_return() {
    let s = sectoral(2, 0.1);
    let opts = ReturnOptions::default();
    let f = return_map_with(&s, 1.0, 0.3, &opts).unwrap();
    let b = inverse_return_map_with(&s, f.phi, f.phi_dot, &opts).unwrap();
    assert!((b.phi - 1.0).abs() < 1e-6);
    assert!((b.phi_dot - 0.3).abs() < 1e-6);
}

#[test]
fn section_is_deterministic_and_valid() {
    let s = sectoral(3, 0.2);
    let cfg = SectionConfig::new(6, 20, 42);
    let a = generate_section(&s, &cfg).unwrap();
    let b = generate_section(&s, &cfg).unwrap();
    assert_eq!(a.points, b.points);
    assert!(a.failures.is_empty());
    assert_eq!(a.points.len(), 120);
    for p in &a.points {
        assert!((0.0..TAU).contains(&p.phi));
        assert!(p.phi_dot.abs() <= phi_dot_limit(&s, p.phi).unwrap() + 1e-9);
        assert!(p.phi_dot.abs() <= a.phi_dot_bound + 1e-9);
    }
}

#[test]
fn classification_examples() {
    let opts = FixedPointOptions::default();
    let odd = find_closed_geodesics(&sectoral(3, 0.1), GeodesicFamily::Planar, (PI / 3.0, 0.0), &opts).unwrap();
    let even = find_closed_geodesics(&sectoral(2, 0.1), GeodesicFamily::Planar, (0.0, 0.0), &opts).unwrap();
    let perp = find_closed_geodesics(&sectoral(3, 0.1), GeodesicFamily::Perpendicular, (PI / 6.0, 0.0), &opts).unwrap();
    assert_eq!(odd.classification, Stability::Hyperbolic);
    assert_eq!(even.classification, Stability::Elliptic);
    assert_eq!(perp.classification, Stability::Elliptic);
}
