//! Numerical cross-check of the algebrized NVE: solve it in `z` and compare
//! with the linearized equation integrated directly in arc length along the
//! numerically computed equatorial geodesic.

use std::convert::Infallible;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use super::{NveData, NveError};
use crate::algebra::rational_to_f64;
use crate::geodesic::dopri::{Dopri5, StepError, Tolerances};
use crate::surface::{PolarSurface, SurfaceError};
use crate::QRatFunc;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualReport {
    /// Largest `|ξ_z − ξ_s|` over both fundamental solutions, relative to
    /// each solution's maximum over the circuit.
    pub max_rel_err: f64,
    pub segments: usize,
    pub compared: usize,
}

fn eval_f64(f: &QRatFunc, z: f64) -> f64 {
    let horner = |c: &[crate::Rational]| c.iter().rev().fold(0.0, |acc, k| acc * z + rational_to_f64(k));
    horner(f.num().coeffs()) / horner(f.den().coeffs())
}

struct Sample {
    phi: f64,
    phi_dot: f64,
    xi: [f64; 4],
}

fn surface_err(e: StepError<SurfaceError>) -> NveError {
    NveError::Numerical(e.to_string())
}

/// Integrates `ξ̈ = −Γ^θ_φφ,θ φ̇² ξ − 2Γ^θ_θφ φ̇ ξ̇` for the two fundamental
/// solutions along one equatorial circuit, then re-solves the z-equation
/// on every monotone stretch of `z = ε cos nφ(s)` (seeded from the s-domain
/// data at its first sample) and compares. Samples with
/// `|sin nφ| < margin` sit next to the turning points `z = ±ε`, where the
/// map s ↦ z folds, and are skipped.
pub fn dual_representation_check(data: &NveData, margin: f64, tol: f64) -> Result<DualReport, NveError> {
    let n = data.n;
    let nf = f64::from(n);
    let eps = rational_to_f64(&data.eps);
    let surf = PolarSurface::<f64>::sectoral(n, eps).map_err(|e| NveError::Numerical(e.to_string()))?;

    let mut f_s = |_s: f64, y: &[f64; 6]| -> Result<[f64; 6], SurfaceError> {
        let (phi, pd) = (y[0], y[1]);
        let m = surf.metric_at(FRAC_PI_2, phi)?;
        let dg = surf.gamma_theta_phiphi_dtheta(FRAC_PI_2, phi)?;
        let a = -dg * pd * pd;
        let b = -2.0 * m.gamma.t_tp * pd;
        Ok([pd, -m.gamma.p_pp * pd * pd, y[3], a * y[2] + b * y[3], y[5], a * y[4] + b * y[5]])
    };
    let phi_dot0 = 1.0 / surf.metric_at(FRAC_PI_2, 0.0).map_err(|e| NveError::Numerical(e.to_string()))?.g_pp.sqrt();
    let y0 = [0.0, phi_dot0, 1.0, 0.0, 0.0, 1.0];
    let tol_s = Tolerances {
        h_max: 0.01,
        ..Tolerances::uniform(tol)
    };
    let mut st = Dopri5::new(&mut f_s, 0.0, y0, 1e-3, tol_s).map_err(|e| NveError::Numerical(e.to_string()))?;
    let mut samples = vec![Sample {
        phi: 0.0,
        phi_dot: phi_dot0,
        xi: [1.0, 0.0, 0.0, 1.0],
    }];
    while st.y[0] < TAU {
        st.step(&mut f_s, 1e6).map_err(surface_err)?;
        samples.push(Sample {
            phi: st.y[0],
            phi_dot: st.y[1],
            xi: [st.y[2], st.y[3], st.y[4], st.y[5]],
        });
    }
    let scale = [0usize, 2].map(|k| samples.iter().map(|s| s.xi[k].abs()).fold(0.0, f64::max));

    let (p, q) = (&data.p, &data.q);
    let mut f_z = |z: f64, y: &[f64; 4]| -> Result<[f64; 4], Infallible> {
        let (pz, qz) = (eval_f64(p, z), eval_f64(q, z));
        Ok([y[1], -pz * y[1] - qz * y[0], y[3], -pz * y[3] - qz * y[2]])
    };
    let tol_z = Tolerances::uniform(tol);

    let mut max_rel: f64 = 0.0;
    let mut compared = 0;
    let mut segments = 0;
    for j in 0..2 * n {
        let (lo, hi) = (f64::from(j) * PI / nf, f64::from(j + 1) * PI / nf);
        let seg: Vec<&Sample> = samples
            .iter()
            .filter(|s| s.phi >= lo && s.phi < hi && (nf * s.phi).sin().abs() >= margin)
            .collect();
        let Some(first) = seg.first() else { continue };
        segments += 1;
        let z_of = |s: &Sample| eps * (nf * s.phi).cos();
        let zdot = |s: &Sample| -eps * nf * (nf * s.phi).sin() * s.phi_dot;
        let seed = |s: &Sample| {
            let zd = zdot(s);
            [s.xi[0], s.xi[1] / zd, s.xi[2], s.xi[3] / zd]
        };
        let mut z = Dopri5::new(&mut f_z, z_of(first), seed(first), 1e-4, tol_z).expect("infallible");
        for s in &seg[1..] {
            let target = z_of(s);
            while z.t != target {
                z.step(&mut f_z, target).map_err(|e| NveError::Numerical(e.to_string()))?;
            }
            for (k, col) in [(0usize, 0usize), (2, 1)] {
                let err = (z.y[k] - s.xi[k]).abs() / scale[col];
                max_rel = max_rel.max(err);
            }
            compared += 1;
        }
    }
    Ok(DualReport {
        max_rel_err: max_rel,
        segments,
        compared,
    })
}
