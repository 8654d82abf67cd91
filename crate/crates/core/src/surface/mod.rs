//! Star-shaped surfaces `r(θ, φ) = 1 + Σ ε_k Y_k(θ, φ)` built from real
//! spherical harmonics, with their metric and Christoffel data.
//!
//! Harmonics are evaluated in Cartesian form on the unit sphere,
//! `P^m_l(cos θ) cos mφ = Re((x + iy)^m) · P_l^{(m)}(z)`, so the same code
//! serves any rotated chart: a chart only changes how `(θ, φ)` map to the
//! unit vector `(x, y, z)`.

mod legendre;
mod metric;

use serde::{Deserialize, Serialize};

use crate::Real;

pub use legendre::assoc_legendre;
pub use metric::{Christoffel, Metric2};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SurfaceError {
    #[error("evaluation at a coordinate pole (θ = {0})")]
    CoordinateSingularity(f64),
    #[error("associated Legendre order out of range: l = {l}, m = {m}")]
    InvalidOrder { l: u32, m: u32 },
    #[error("argument {0} outside [−1, 1]")]
    OutOfDomain(f64),
    #[error("amplitude must satisfy 0 ≤ ε < 1, got {0}")]
    InvalidAmplitude(f64),
}

/// Evaluations closer than this to θ ∈ {0, π} are rejected.
pub const POLE_GUARD: f64 = 1e-8;

/// Which harmonic the surface is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    Zonal { l: u32 },
    Sectoral { n: u32 },
    Tesseral { l: u32, m: u32 },
    Custom,
}

/// One term `ε · P^m_l(cos θ) cos mφ / max|P^m_l|` of a custom surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicTerm {
    pub l: u32,
    pub m: u32,
    pub eps: f64,
}

/// Serializable surface selection, e.g. `{"family": "sectoral", "n": 3, "eps": 0.2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum SurfaceSpec {
    Zonal { l: u32, eps: f64 },
    Sectoral { n: u32, eps: f64 },
    Tesseral { l: u32, m: u32, eps: f64 },
    Custom { terms: Vec<HarmonicTerm> },
}

/// Coordinate chart on the unit sphere, given by the rotation `u = R û`
/// from chart coordinates `û(θ, φ) = (sin θ cos φ, sin θ sin φ, cos θ)` to
/// the surface frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    #[default]
    Standard,
    /// Quarter turn about the x-axis: `x = x̂, y = ẑ, z = −ŷ`. The
    /// original equator becomes the meridian φ̂ ∈ {0, π} and the original
    /// poles sit on the chart equator.
    Meridian,
    /// Quarter turn about the y-axis: `x = ẑ, y = ŷ, z = −x̂`. The n = 1
    /// sectoral surface becomes `r = 1 + ε cos θ̄`.
    Polar,
}

impl Chart {
    /// Chart unit vector to surface-frame unit vector.
    pub fn apply<T: Real>(self, v: [T; 3]) -> [T; 3] {
        match self {
            Chart::Standard => v,
            Chart::Meridian => [v[0], v[2], -v[1]],
            Chart::Polar => [v[2], v[1], -v[0]],
        }
    }

    /// Surface-frame unit vector to chart unit vector.
    pub fn invert<T: Real>(self, u: [T; 3]) -> [T; 3] {
        match self {
            Chart::Standard => u,
            Chart::Meridian => [u[0], -u[2], u[1]],
            Chart::Polar => [-u[2], u[1], u[0]],
        }
    }

    /// Standard `(θ, φ)` to this chart's angles.
    pub fn from_standard<T: Real>(self, theta: T, phi: T) -> (T, T) {
        angles(self.invert(unit(theta, phi)))
    }

    /// This chart's angles to standard `(θ, φ)`.
    pub fn to_standard<T: Real>(self, theta: T, phi: T) -> (T, T) {
        angles(self.apply(unit(theta, phi)))
    }
}

pub(crate) fn unit<T: Real>(theta: T, phi: T) -> [T; 3] {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [st * cp, st * sp, ct]
}

/// `(θ, φ)` of a unit vector, with φ in (−π, π].
pub(crate) fn angles<T: Real>(u: [T; 3]) -> (T, T) {
    let rho = u[0].hypot(u[1]);
    (rho.atan2(u[2]), u[1].atan2(u[0]))
}

/// Value and partial derivatives of `r` with respect to chart angles, up to
/// third order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet<T> {
    pub r: T,
    pub r_t: T,
    pub r_p: T,
    pub r_tt: T,
    pub r_tp: T,
    pub r_pp: T,
    pub r_ttt: T,
    pub r_ttp: T,
    pub r_tpp: T,
    pub r_ppp: T,
}

#[derive(Debug, Clone)]
struct Term<T> {
    /// amplitude with the normalisation folded in
    amp: T,
    m: u32,
    /// `d^m P_l/dx^m` and its first three derivatives, lowest degree first
    q: [Vec<T>; 4],
}

/// A surface `r(θ, φ)` in a chosen chart.
#[derive(Debug, Clone)]
pub struct PolarSurface<T: Real> {
    family: Family,
    eps: T,
    terms: Vec<Term<T>>,
    chart: Chart,
}

impl<T: Real> PolarSurface<T> {
    /// The unit sphere.
    pub fn sphere() -> Self {
        Self {
            family: Family::Sectoral { n: 0 },
            eps: T::zero(),
            terms: Vec::new(),
            chart: Chart::Standard,
        }
    }

    /// `r = 1 + ε P_l(cos θ)`, a surface of revolution.
    pub fn zonal(l: u32, eps: T) -> Result<Self, SurfaceError> {
        Self::single(Family::Zonal { l }, l, 0, eps)
    }

    /// `r = 1 + ε sinⁿθ cos nφ`.
    pub fn sectoral(n: u32, eps: T) -> Result<Self, SurfaceError> {
        Self::single(Family::Sectoral { n }, n, n, eps)
    }

    /// `r = 1 + ε P^m_l(cos θ) cos mφ / max|P^m_l|`.
    pub fn tesseral(l: u32, m: u32, eps: T) -> Result<Self, SurfaceError> {
        Self::single(Family::Tesseral { l, m }, l, m, eps)
    }

    /// Sum of normalised harmonic terms. Positivity of `r` requires
    /// `Σ|ε_k| < 1`.
    pub fn custom(terms: &[HarmonicTerm]) -> Result<Self, SurfaceError> {
        let total: f64 = terms.iter().map(|t| t.eps.abs()).sum();
        if total >= 1.0 {
            return Err(SurfaceError::InvalidAmplitude(total));
        }
        let terms = terms
            .iter()
            .map(|t| Term::new(t.l, t.m, T::c(t.eps)))
            .collect::<Result<_, _>>()?;
        Ok(Self {
            family: Family::Custom,
            eps: T::c(total),
            terms,
            chart: Chart::Standard,
        })
    }

    pub fn from_spec(spec: &SurfaceSpec) -> Result<Self, SurfaceError> {
        match *spec {
            SurfaceSpec::Zonal { l, eps } => Self::zonal(l, T::c(eps)),
            SurfaceSpec::Sectoral { n, eps } => Self::sectoral(n, T::c(eps)),
            SurfaceSpec::Tesseral { l, m, eps } => Self::tesseral(l, m, T::c(eps)),
            SurfaceSpec::Custom { ref terms } => Self::custom(terms),
        }
    }

    fn single(family: Family, l: u32, m: u32, eps: T) -> Result<Self, SurfaceError> {
        if !(eps >= T::zero() && eps < T::one()) {
            return Err(SurfaceError::InvalidAmplitude(eps.to_f64().unwrap_or(f64::NAN)));
        }
        let terms = if eps == T::zero() { Vec::new() } else { vec![Term::new(l, m, eps)?] };
        Ok(Self {
            family,
            eps,
            terms,
            chart: Chart::Standard,
        })
    }

    /// The same surface described in another chart.
    pub fn with_chart(&self, chart: Chart) -> Self {
        Self {
            chart,
            ..self.clone()
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }
    pub fn eps(&self) -> T {
        self.eps
    }
    pub fn chart(&self) -> Chart {
        self.chart
    }

    /// Sectoral order `n`, if this is a sectoral surface (the sphere counts as n = 0).
    pub fn sectoral_order(&self) -> Option<u32> {
        match self.family {
            Family::Sectoral { n } => Some(n),
            _ => None,
        }
    }

    /// `r` at chart angles (no pole check).
    pub fn r(&self, theta: T, phi: T) -> T {
        let u = self.chart.apply(unit(theta, phi));
        T::one() + self.terms.iter().map(|t| t.value(u)).fold(T::zero(), |a, b| a + b)
    }

    /// `r` and its partials to second order; third-order fields are zero.
    pub fn jet2(&self, theta: T, phi: T) -> Jet<T> {
        self.jet_impl(theta, phi, false)
    }

    /// `r` and its partials to third order.
    pub fn jet3(&self, theta: T, phi: T) -> Jet<T> {
        self.jet_impl(theta, phi, true)
    }

    fn jet_impl(&self, theta: T, phi: T, third: bool) -> Jet<T> {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        let z = T::zero();
        let c = self.chart;
        let u = c.apply([st * cp, st * sp, ct]);
        let ut = c.apply([ct * cp, ct * sp, -st]);
        let up = c.apply([-st * sp, st * cp, z]);
        let utt = c.apply([-st * cp, -st * sp, -ct]);
        let utp = c.apply([-ct * sp, ct * cp, z]);
        let upp = c.apply([-st * cp, -st * sp, z]);
        let neg = |v: [T; 3]| [-v[0], -v[1], -v[2]];
        let uttt = neg(ut);
        let uttp = neg(up);
        let utpp = c.apply([-ct * cp, -ct * sp, z]);
        let uppp = neg(up);

        let mut g = [z; 3];
        let mut h = [[z; 3]; 3];
        let mut k = [[[z; 3]; 3]; 3];
        let mut value = T::one();
        for term in &self.terms {
            term.accumulate(u, third, &mut value, &mut g, &mut h, &mut k);
        }
        let d1 = |a: [T; 3]| dot(&g, a);
        let d2 = |a: [T; 3], b: [T; 3]| {
            let mut s = z;
            for i in 0..3 {
                for j in 0..3 {
                    s = s + h[i][j] * a[i] * b[j];
                }
            }
            s
        };
        let d3 = |a: [T; 3], b: [T; 3], cc: [T; 3]| {
            let mut s = z;
            for i in 0..3 {
                for j in 0..3 {
                    for l in 0..3 {
                        s = s + k[i][j][l] * a[i] * b[j] * cc[l];
                    }
                }
            }
            s
        };
        let two = T::c(2.0);
        let three = T::c(3.0);
        let mut jet = Jet {
            r: value,
            r_t: d1(ut),
            r_p: d1(up),
            r_tt: d2(ut, ut) + d1(utt),
            r_tp: d2(ut, up) + d1(utp),
            r_pp: d2(up, up) + d1(upp),
            r_ttt: z,
            r_ttp: z,
            r_tpp: z,
            r_ppp: z,
        };
        if third {
            jet.r_ttt = d3(ut, ut, ut) + three * d2(ut, utt) + d1(uttt);
            jet.r_ttp = d3(ut, ut, up) + two * d2(ut, utp) + d2(utt, up) + d1(uttp);
            jet.r_tpp = d3(ut, up, up) + two * d2(up, utp) + d2(ut, upp) + d1(utpp);
            jet.r_ppp = d3(up, up, up) + three * d2(up, upp) + d1(uppp);
        }
        jet
    }

    /// Metric and Christoffel symbols at chart angles.
    pub fn metric_at(&self, theta: T, phi: T) -> Result<Metric2<T>, SurfaceError> {
        check_pole(theta)?;
        Ok(Metric2::from_jet(&self.jet2(theta, phi), theta))
    }

    /// `Γ^θ_φφ` from its closed form in `r` and first/second partials.
    pub fn gamma_theta_phiphi(&self, theta: T, phi: T) -> Result<T, SurfaceError> {
        check_pole(theta)?;
        Ok(metric::gamma_theta_phiphi_closed(&self.jet2(theta, phi), theta))
    }

    /// `∂_θ Γ^θ_φφ`, needed for the linearisation about planar geodesics.
    pub fn gamma_theta_phiphi_dtheta(&self, theta: T, phi: T) -> Result<T, SurfaceError> {
        check_pole(theta)?;
        Ok(metric::gamma_theta_phiphi_dtheta(&self.jet3(theta, phi), theta))
    }
}

fn check_pole<T: Real>(theta: T) -> Result<(), SurfaceError> {
    let g = T::c(POLE_GUARD);
    if theta < g || theta > T::PI() - g {
        Err(SurfaceError::CoordinateSingularity(theta.to_f64().unwrap_or(f64::NAN)))
    } else {
        Ok(())
    }
}

fn dot<T: Real>(a: &[T; 3], b: [T; 3]) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

impl<T: Real> Term<T> {
    fn new(l: u32, m: u32, eps: T) -> Result<Self, SurfaceError> {
        if m > l {
            return Err(SurfaceError::InvalidOrder { l, m });
        }
        let q0 = legendre::legendre_derivative_coeffs(l, m);
        let norm = max_abs_legendre(m, &q0);
        let deriv = |p: &[f64]| -> Vec<f64> {
            let d: Vec<f64> = p.iter().enumerate().skip(1).map(|(i, c)| i as f64 * c).collect();
            if d.is_empty() {
                vec![0.0]
            } else {
                d
            }
        };
        let q1 = deriv(&q0);
        let q2 = deriv(&q1);
        let q3 = deriv(&q2);
        let cast = |p: Vec<f64>| p.into_iter().map(T::c).collect::<Vec<T>>();
        Ok(Self {
            amp: eps / T::c(norm),
            m,
            q: [cast(q0), cast(q1), cast(q2), cast(q3)],
        })
    }

    fn value(&self, u: [T; 3]) -> T {
        let (re, _) = cpow(u[0], u[1], self.m);
        self.amp * re * horner(&self.q[0], u[2])
    }

    /// Adds this term's value, gradient, Hessian and (optionally) third
    /// derivative tensor at `u`.
    fn accumulate(
        &self,
        u: [T; 3],
        third: bool,
        value: &mut T,
        g: &mut [T; 3],
        h: &mut [[T; 3]; 3],
        k: &mut [[[T; 3]; 3]; 3],
    ) {
        let order = if third { 3 } else { 2 };
        let m = self.m as usize;
        // powers w^j for j = m−3..m, w = x + iy
        let mut wp = [(T::zero(), T::zero()); 4];
        for (j, slot) in wp.iter_mut().enumerate() {
            if m + j >= 3 {
                *slot = cpow(u[0], u[1], (m + j - 3) as u32);
            }
        }
        // ∂x^a ∂y^b Re(w^m) = Re(i^b · m(m−1)…(m−a−b+1) · w^{m−a−b})
        let a_deriv = |a: usize, b: usize| -> T {
            let s = a + b;
            if s > m {
                return T::zero();
            }
            let fall: f64 = (0..s).map(|i| (m - i) as f64).product();
            let (re, im) = wp[3 - s];
            let v = match b % 4 {
                0 => re,
                1 => -im,
                2 => -re,
                _ => im,
            };
            T::c(fall) * v
        };
        let qz: Vec<T> = self.q.iter().map(|p| horner(p, u[2])).collect();
        let d = |idx: &[usize]| -> T {
            let (mut a, mut b, mut c) = (0, 0, 0);
            for &i in idx {
                match i {
                    0 => a += 1,
                    1 => b += 1,
                    _ => c += 1,
                }
            }
            self.amp * a_deriv(a, b) * qz[c]
        };
        *value = *value + d(&[]);
        for i in 0..3 {
            g[i] = g[i] + d(&[i]);
            for j in 0..3 {
                h[i][j] = h[i][j] + d(&[i, j]);
                if order == 3 {
                    for l in 0..3 {
                        k[i][j][l] = k[i][j][l] + d(&[i, j, l]);
                    }
                }
            }
        }
    }
}

/// `(x + iy)^m` as `(re, im)`.
fn cpow<T: Real>(x: T, y: T, m: u32) -> (T, T) {
    let (mut re, mut im) = (T::one(), T::zero());
    for _ in 0..m {
        (re, im) = (re * x - im * y, re * y + im * x);
    }
    (re, im)
}

fn horner<T: Real>(p: &[T], x: T) -> T {
    p.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
}

/// `max_{|x| ≤ 1} (1−x²)^{m/2} |q(x)|`: dense scan, then golden-section
/// refinement around the best sample.
fn max_abs_legendre(m: u32, q: &[f64]) -> f64 {
    let f = |x: f64| (1.0 - x * x).max(0.0).powf(m as f64 / 2.0) * horner(q, x).abs();
    let n = 4000;
    let h = 2.0 / n as f64;
    let (mut best_x, mut best) = (-1.0, f(-1.0));
    for i in 1..=n {
        let x = -1.0 + i as f64 * h;
        let v = f(x);
        if v > best {
            best = v;
            best_x = x;
        }
    }
    let (mut a, mut b) = ((best_x - h).max(-1.0), (best_x + h).min(1.0));
    let gr = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let x1 = b - gr * (b - a);
        let x2 = a + gr * (b - a);
        if f(x1) > f(x2) {
            b = x2;
        } else {
            a = x1;
        }
    }
    best.max(f(0.5 * (a + b)))
}
