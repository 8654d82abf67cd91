//! Induced metric `ds² = (r_θ²+r²)dθ² + 2r_θr_φ dθdφ + (r_φ²+r²sin²θ)dφ²`
//! and its Levi-Civita connection.

use crate::Real;

use super::Jet;

/// Christoffel symbols of the second kind; `t_pp` is `Γ^θ_φφ`, `p_tp` is
/// `Γ^φ_θφ`, and so on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Christoffel<T> {
    pub t_tt: T,
    pub t_tp: T,
    pub t_pp: T,
    pub p_tt: T,
    pub p_tp: T,
    pub p_pp: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metric2<T> {
    pub g_tt: T,
    pub g_tp: T,
    pub g_pp: T,
    pub det: T,
    pub gamma: Christoffel<T>,
}

impl<T: Real> Metric2<T> {
    pub fn from_jet(j: &Jet<T>, theta: T) -> Self {
        let (s, c) = theta.sin_cos();
        let two = T::c(2.0);
        let half = T::c(0.5);
        let s2 = s * s;

        let g_tt = j.r_t * j.r_t + j.r * j.r;
        let g_tp = j.r_t * j.r_p;
        let g_pp = j.r_p * j.r_p + j.r * j.r * s2;
        let det = g_tt * g_pp - g_tp * g_tp;

        let dt_gtt = two * (j.r_t * j.r_tt + j.r * j.r_t);
        let dp_gtt = two * (j.r_t * j.r_tp + j.r * j.r_p);
        let dt_gtp = j.r_tt * j.r_p + j.r_t * j.r_tp;
        let dp_gtp = j.r_tp * j.r_p + j.r_t * j.r_pp;
        let dt_gpp = two * (j.r_p * j.r_tp + j.r * j.r_t * s2 + j.r * j.r * s * c);
        let dp_gpp = two * (j.r_p * j.r_pp + j.r * j.r_p * s2);

        // first kind: Γ_{a,bc} = ½(g_ab,c + g_ac,b − g_bc,a)
        let l_t_tt = half * dt_gtt;
        let l_t_tp = half * dp_gtt;
        let l_t_pp = dp_gtp - half * dt_gpp;
        let l_p_tt = dt_gtp - half * dp_gtt;
        let l_p_tp = half * dt_gpp;
        let l_p_pp = half * dp_gpp;

        let raise_t = |a: T, b: T| (g_pp * a - g_tp * b) / det;
        let raise_p = |a: T, b: T| (g_tt * b - g_tp * a) / det;
        Self {
            g_tt,
            g_tp,
            g_pp,
            det,
            gamma: Christoffel {
                t_tt: raise_t(l_t_tt, l_p_tt),
                t_tp: raise_t(l_t_tp, l_p_tp),
                t_pp: raise_t(l_t_pp, l_p_pp),
                p_tt: raise_p(l_t_tt, l_p_tt),
                p_tp: raise_p(l_t_tp, l_p_tp),
                p_pp: raise_p(l_t_pp, l_p_pp),
            },
        }
    }

    /// `2H = g_θθ θ̇² + 2g_θφ θ̇φ̇ + g_φφ φ̇²`.
    pub fn two_h(&self, theta_dot: T, phi_dot: T) -> T {
        self.g_tt * theta_dot * theta_dot
            + T::c(2.0) * self.g_tp * theta_dot * phi_dot
            + self.g_pp * phi_dot * phi_dot
    }
}

/// The explicit expression
/// `[r_θ(r r_φφ S² − 2r_φ² S² − r² S⁴) − C(r³S³ + r r_φ² S)] / [r(r²S² + r_θ²S² + r_φ²)]`.
pub(crate) fn gamma_theta_phiphi_closed<T: Real>(j: &Jet<T>, theta: T) -> T {
    let (s, c) = theta.sin_cos();
    let s2 = s * s;
    let two = T::c(2.0);
    let num = j.r_t * (j.r * j.r_pp * s2 - two * j.r_p * j.r_p * s2 - j.r * j.r * s2 * s2)
        - c * (j.r * j.r * j.r * s2 * s + j.r * j.r_p * j.r_p * s);
    let den = j.r * (j.r * j.r * s2 + j.r_t * j.r_t * s2 + j.r_p * j.r_p);
    num / den
}

/// `∂_θ Γ^θ_φφ` with `Γ^θ_φφ = (g_φφ Γ_{θ,φφ} − g_θφ Γ_{φ,φφ}) / det`.
pub(crate) fn gamma_theta_phiphi_dtheta<T: Real>(j: &Jet<T>, theta: T) -> T {
    let (s, c) = theta.sin_cos();
    let s2 = s * s;
    let two = T::c(2.0);
    let four = T::c(4.0);
    let half = T::c(0.5);
    let (r, rt, rp, rtt, rtp, rpp) = (j.r, j.r_t, j.r_p, j.r_tt, j.r_tp, j.r_pp);

    let g_tt = rt * rt + r * r;
    let g_tp = rt * rp;
    let g_pp = rp * rp + r * r * s2;
    let det = g_tt * g_pp - g_tp * g_tp;

    let dt_gtt = two * (rt * rtt + r * rt);
    let dt_gtp = rtt * rp + rt * rtp;
    let dp_gtp = rtp * rp + rt * rpp;
    let dt_gpp = two * (rp * rtp + r * rt * s2 + r * r * s * c);
    let dp_gpp = two * (rp * rpp + r * rp * s2);

    let dtp_gtp = j.r_ttp * rp + rtp * rtp + rtt * rpp + rt * j.r_tpp;
    let dtt_gpp = two * rtp * rtp
        + two * rp * j.r_ttp
        + two * rt * rt * s2
        + two * r * rtt * s2
        + T::c(8.0) * r * rt * s * c
        + two * r * r * (c * c - s2);
    let dtp_gpp = two * (rtp * rpp + rp * j.r_tpp + rt * rp * s2 + r * rtp * s2) + four * r * rp * s * c;

    let a = dp_gtp - half * dt_gpp;
    let b = half * dp_gpp;
    let da = dtp_gtp - half * dtt_gpp;
    let db = half * dtp_gpp;
    let ddet = dt_gtt * g_pp + g_tt * dt_gpp - two * g_tp * dt_gtp;

    let num = g_pp * a - g_tp * b;
    let dnum = dt_gpp * a + g_pp * da - dt_gtp * b - g_tp * db;
    (dnum * det - num * ddet) / (det * det)
}
