//! Closed geodesics as fixed points of the (iterated) return map.

use num_complex::Complex;
use serde::Serialize;

use super::{iterate_return_map, PoincareError, ReturnOptions};
use crate::surface::PolarSurface;
use crate::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GeodesicFamily {
    /// In a symmetry plane φ = πi/n; fixed point `(πi/n, 0)`.
    Planar,
    /// Meets the equator at right angles between planar ones (odd n).
    Perpendicular,
    /// Off the φ̇ = 0 axis.
    Oblique,
    /// Centres of the islands inside homoclinic loops.
    Island,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stability {
    Elliptic,
    Hyperbolic,
    Parabolic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedGeodesic<T> {
    pub family: GeodesicFamily,
    pub phi: T,
    pub phi_dot: T,
    /// Number of section returns per closing.
    pub period: usize,
    pub monodromy: [[T; 2]; 2],
    pub eigenvalues: [Complex<T>; 2],
    pub classification: Stability,
    /// Sup-norm of `P^k(x) − x` at the returned point (φ taken mod 2π).
    pub residual: T,
}

impl<T: Real> ClosedGeodesic<T> {
    pub fn det(&self) -> T {
        let m = &self.monodromy;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }
}

#[derive(Debug, Clone)]
pub struct FixedPointOptions<T> {
    pub period: usize,
    /// Target sup-norm of the residual.
    pub tol: T,
    pub max_iter: usize,
    /// Central-difference step for the monodromy matrix.
    pub fd_step: T,
    /// Half-width of the band around |tr M| = 2 classified as parabolic.
    pub parabolic_band: T,
    pub map: ReturnOptions<T>,
}

impl<T: Real> Default for FixedPointOptions<T> {
    fn default() -> Self {
        Self {
            period: 1,
            tol: T::c(1e-10),
            max_iter: 40,
            fd_step: T::c(1e-5),
            parabolic_band: T::c(1e-6),
            map: ReturnOptions::default(),
        }
    }
}

fn wrap_pi<T: Real>(d: T) -> T {
    let tau = T::c(std::f64::consts::TAU);
    d - tau * (d / tau).round()
}

fn residual<T: Real>(surface: &PolarSurface<T>, x: [T; 2], opts: &FixedPointOptions<T>) -> Result<[T; 2], PoincareError> {
    let (p, pd) = iterate_return_map(surface, x[0], x[1], opts.period, &opts.map)?;
    Ok([wrap_pi(p - x[0]), pd - x[1]])
}

/// Jacobian of the `period`-fold return map by central differences.
pub fn monodromy<T: Real>(surface: &PolarSurface<T>, phi: T, phi_dot: T, opts: &FixedPointOptions<T>) -> Result<[[T; 2]; 2], PoincareError> {
    let h = opts.fd_step;
    let map = |p: T, pd: T| iterate_return_map(surface, p, pd, opts.period, &opts.map);
    let (a_p, a_pd) = map(phi + h, phi_dot)?;
    let (b_p, b_pd) = map(phi - h, phi_dot)?;
    let (c_p, c_pd) = map(phi, phi_dot + h)?;
    let (d_p, d_pd) = map(phi, phi_dot - h)?;
    let two_h = h + h;
    Ok([
        [wrap_pi(a_p - b_p) / two_h, wrap_pi(c_p - d_p) / two_h],
        [(a_pd - b_pd) / two_h, (c_pd - d_pd) / two_h],
    ])
}

/// Eigenvalues of a 2×2 matrix and the resulting stability type.
pub fn classify<T: Real>(m: &[[T; 2]; 2], parabolic_band: T) -> ([Complex<T>; 2], Stability) {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let half = T::c(0.5);
    let disc = tr * tr - T::c(4.0) * det;
    let eig = if disc >= T::zero() {
        let s = disc.sqrt();
        [Complex::new(half * (tr + s), T::zero()), Complex::new(half * (tr - s), T::zero())]
    } else {
        let s = (-disc).sqrt();
        [Complex::new(half * tr, half * s), Complex::new(half * tr, -half * s)]
    };
    // compare |tr| with 2√det so a slightly non-unit det does not bias it
    let edge = T::c(2.0) * det.abs().sqrt();
    let stab = if (tr.abs() - edge).abs() <= parabolic_band {
        Stability::Parabolic
    } else if tr.abs() < edge {
        Stability::Elliptic
    } else {
        Stability::Hyperbolic
    };
    (eig, stab)
}

/// Newton iteration on `P^k(x) − x` from `guess = (φ, φ̇)`, then the
/// monodromy matrix and its classification at the converged point.
pub fn find_closed_geodesics<T: Real>(
    surface: &PolarSurface<T>,
    family: GeodesicFamily,
    guess: (T, T),
    opts: &FixedPointOptions<T>,
) -> Result<ClosedGeodesic<T>, PoincareError> {
    let norm = |f: [T; 2]| f[0].abs().max(f[1].abs());
    let mut x = [guess.0, guess.1];
    let mut f = residual(surface, x, opts)?;
    let mut iter = 0;
    while norm(f) > opts.tol {
        if iter == opts.max_iter {
            return Err(PoincareError::Divergence(format!("residual {} after {iter} iterations", norm(f))));
        }
        iter += 1;
        let m = monodromy(surface, x[0], x[1], opts)?;
        let j = [[m[0][0] - T::one(), m[0][1]], [m[1][0], m[1][1] - T::one()]];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == T::zero() || !det.is_finite() {
            return Err(PoincareError::Divergence("singular Jacobian".into()));
        }
        let dx = [
            -(j[1][1] * f[0] - j[0][1] * f[1]) / det,
            -(j[0][0] * f[1] - j[1][0] * f[0]) / det,
        ];
        // backtrack if the full step does not reduce the residual
        let mut t = T::one();
        loop {
            let trial = [x[0] + t * dx[0], x[1] + t * dx[1]];
            match residual(surface, trial, opts) {
                Ok(ft) if norm(ft) < norm(f) => {
                    x = trial;
                    f = ft;
                    break;
                }
                _ if t < T::c(1e-3) => {
                    return Err(PoincareError::Divergence(format!("line search stalled at residual {}", norm(f))));
                }
                _ => t = t * T::c(0.5),
            }
        }
    }
    let m = monodromy(surface, x[0], x[1], opts)?;
    let (eigenvalues, classification) = classify(&m, opts.parabolic_band);
    let tau = T::c(std::f64::consts::TAU);
    Ok(ClosedGeodesic {
        family,
        phi: x[0] - tau * (x[0] / tau).floor(),
        phi_dot: x[1],
        period: opts.period,
        monodromy: m,
        eigenvalues,
        classification,
        residual: norm(f),
    })
}
