//! Normal variational equation along the equator of a sectoral surface, its
//! algebrization in `z = ε cos nφ`, and the Fuchsian data of the resulting
//! standard form `ξ″ = r(z) ξ`.

mod dual;
mod trig;

use serde_json::{json, Value};

use crate::algebra::{partial_fractions, rat_int, AlgebraError, Field, PartialFractions, Poly, QuadExt, Rational};
use crate::{KRatFunc, QPoly, QRatFunc};

pub use dual::{dual_representation_check, DualReport};
use trig::{Trig, TrigError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NveError {
    #[error("ε must lie in (0, 1), got {0}")]
    AmplitudeOutOfRange(String),
    #[error("ε = 0 is the sphere; use the sphere branch")]
    Sphere,
    #[error("n must be at least 1")]
    OrderTooSmall,
    #[error("odd powers of sin nφ did not cancel in {0}")]
    OddPowers(&'static str),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("numerical check failed: {0}")]
    Numerical(String),
}

impl From<TrigError> for NveError {
    fn from(e: TrigError) -> Self {
        match e {
            TrigError::Odd(what) => NveError::OddPowers(what),
            TrigError::Algebra(a) => NveError::Algebra(a),
        }
    }
}

/// Jacobi equation of a great circle on the unit sphere, `ξ̈ + ω² ξ = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereNve {
    pub omega_sq: i64,
}

/// The ε = 0 branch: the normal variation about the equator of the unit
/// sphere obeys `ξ̈ + ξ = 0`.
pub fn sphere_nve() -> SphereNve {
    SphereNve { omega_sq: 1 }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NveData {
    pub n: u32,
    pub eps: Rational,
    /// `D = 1 + ε²(n² − 1)`; the poles `ρ±` live in ℚ(√D).
    pub disc: Rational,
    /// `ξ″ + p ξ′ + q ξ = 0`; both have rational coefficients.
    pub p: QRatFunc,
    pub q: QRatFunc,
    /// Standard form `ξ̂″ = r ξ̂`.
    pub r: QRatFunc,
    /// `[−1, ε, −ε, ρ₊, ρ₋]`, or `[−1, ε, −ε, ρ]` for n = 1.
    pub poles: Vec<QuadExt>,
    pub fuchsian: PartialFractions<QuadExt>,
}

impl NveData {
    /// `r` with coefficients lifted to the quadratic field.
    pub fn r_k(&self) -> KRatFunc {
        self.r.map(|c| QuadExt::rational(c.clone()))
    }
}

/// Expected pole set of the standard form.
pub fn expected_poles(n: u32, eps: &Rational) -> Vec<QuadExt> {
    let q = |v: Rational| QuadExt::rational(v);
    let mut poles = vec![q(rat_int(-1)), q(eps.clone()), q(-eps)];
    if n == 1 {
        poles.push(q(-(rat_int(1) + eps * eps) / rat_int(2)));
    } else {
        let k = rat_int(i64::from(n * n) - 1);
        let disc = rat_int(1) + eps * eps * &k;
        let nd = QuadExt::sqrt_of(disc).mul_ref(&q(rat_int(i64::from(n))));
        let one = q(rat_int(1));
        let kinv = q(k.inv());
        poles.push(one.add_ref(&nd).mul_ref(&kinv));
        poles.push(one.sub_ref(&nd).mul_ref(&kinv));
    }
    poles
}

/// `r = −q + p²/4 + p′/2`, so that `ξ = ξ̂ exp(−½∫p)` turns
/// `ξ″ + pξ′ + qξ = 0` into `ξ̂″ = r ξ̂`.
pub fn standard_form<K: Field>(p: &crate::algebra::RatFunc<K>, q: &crate::algebra::RatFunc<K>) -> crate::algebra::RatFunc<K> {
    use crate::algebra::RatFunc;
    let quarter = RatFunc::constant(K::from_rational(Rational::new(1.into(), 4.into())));
    let half = RatFunc::constant(K::from_rational(Rational::new(1.into(), 2.into())));
    &(&(-q) + &(&quarter * &(p * p))) + &(&half * &p.derivative())
}

/// Partial-fraction data of `r` over its expected poles.
pub fn extract_fuchsian(r: &QRatFunc, n: u32, eps: &Rational) -> Result<PartialFractions<QuadExt>, NveError> {
    let rk = r.map(|c| QuadExt::rational(c.clone()));
    Ok(partial_fractions(&rk, &expected_poles(n, eps))?)
}

/// `δ₁ = 2/(n(ε² − 1))`, the residue at `z = −1` in closed form.
pub fn delta1_closed_form(n: u32, eps: &Rational) -> Rational {
    rat_int(2) / (rat_int(i64::from(n)) * (eps * eps - rat_int(1)))
}

/// Substitutes `c = z/ε` into a rational function of `c`.
fn c_to_z(f: &QRatFunc, eps: &Rational) -> Result<QRatFunc, AlgebraError> {
    let sub = |p: &QPoly| {
        let mut scale = rat_int(1);
        let inv = eps.inv();
        let mut out = Vec::with_capacity(p.coeffs().len());
        for c in p.coeffs() {
            out.push(c * &scale);
            scale = &scale * &inv;
        }
        Poly::new(out)
    };
    QRatFunc::new(sub(f.num()), sub(f.den()))
}

/// Derives the NVE of the equatorial geodesic of `r = 1 + ε sinⁿθ cos nφ`.
///
/// Along θ = π/2, θ̇ = 0 the normal variation obeys
/// `ξ̈ = −Γ^θ_φφ,θ φ̇² ξ − 2Γ^θ_θφ φ̇ ξ̇` with `g_φφ φ̇² = 1`. All
/// equatorial quantities are exact in `c = cos nφ` and `s = sin nφ` with
/// `s² = 1 − c²`; `W = ż²` and the coefficients must come out even in `s`.
pub fn equatorial_nve(n: u32, eps: &Rational) -> Result<NveData, NveError> {
    if n == 0 {
        return Err(NveError::OrderTooSmall);
    }
    if eps.is_zero() {
        return Err(NveError::Sphere);
    }
    if !(eps > &rat_int(0) && eps < &rat_int(1)) {
        return Err(NveError::AmplitudeOutOfRange(eps.to_string()));
    }
    let nn = rat_int(i64::from(n));
    let k = |v: Rational| Trig::constant(v);
    let c = Trig::c();
    let s = Trig::s();

    // r and its derivatives on the equator (sin θ = 1, cos θ = 0)
    let r = &k(rat_int(1)) + &c.scale(eps);
    let r_t = Trig::zero();
    let r_p = s.scale(&-(&nn * eps));
    let r_tt = c.scale(&-(&nn * eps));
    let r_tp = Trig::zero();
    let r_pp = c.scale(&-(&nn * &nn * eps));
    let r_ttp = s.scale(&(&nn * &nn * eps));
    let r_tpp = Trig::zero();
    let (sin_t, cos_t) = (k(rat_int(1)), Trig::zero());
    let two = rat_int(2);
    let half = Rational::new(1.into(), 2.into());

    let g_tt = &(&r_t * &r_t) + &(&r * &r);
    let g_tp = &r_t * &r_p;
    let g_pp = &(&r_p * &r_p) + &(&(&r * &r) * &(&sin_t * &sin_t));
    let det = &(&g_tt * &g_pp) - &(&g_tp * &g_tp);

    let dt_gtt = (&(&r_t * &r_tt) + &(&r * &r_t)).scale(&two);
    let dp_gtt = (&(&r_t * &r_tp) + &(&r * &r_p)).scale(&two);
    let dt_gtp = &(&r_tt * &r_p) + &(&r_t * &r_tp);
    let dp_gtp = &(&r_tp * &r_p) + &(&r_t * &r_pp);
    let dt_gpp = (&(&(&r_p * &r_tp) + &(&(&r * &r_t) * &(&sin_t * &sin_t))) + &(&(&r * &r) * &(&sin_t * &cos_t))).scale(&two);
    let dp_gpp = (&(&r_p * &r_pp) + &(&(&r * &r_p) * &(&sin_t * &sin_t))).scale(&two);

    // ∂_θ of the pieces of Γ^θ_φφ = (g_φφ Γ_θ,φφ − g_θφ Γ_φ,φφ)/det
    let dtp_gtp = &(&(&r_ttp * &r_p) + &(&r_tp * &r_tp)) + &(&(&r_tt * &r_pp) + &(&r_t * &r_tpp));
    let dtt_gpp = {
        let sc = &sin_t * &cos_t;
        let ss = &sin_t * &sin_t;
        let cc = &cos_t * &cos_t;
        let mut acc = (&r_tp * &r_tp).scale(&two);
        acc = &acc + &(&r_p * &r_ttp).scale(&two);
        acc = &acc + &(&(&r_t * &r_t) * &ss).scale(&two);
        acc = &acc + &(&(&r * &r_tt) * &ss).scale(&two);
        acc = &acc + &(&(&r * &r_t) * &sc).scale(&rat_int(8));
        &acc + &(&(&r * &r) * &(&cc - &ss)).scale(&two)
    };
    let dtp_gpp = {
        let ss = &sin_t * &sin_t;
        let a = &(&(&r_tp * &r_pp) + &(&r_p * &r_tpp)) + &(&(&(&r_t * &r_p) * &ss) + &(&(&r * &r_tp) * &ss));
        &a.scale(&two) + &(&(&r * &r_p) * &(&sin_t * &cos_t)).scale(&rat_int(4))
    };
    let a = &dp_gtp - &dt_gpp.scale(&half);
    let b = dp_gpp.scale(&half);
    let da = &dtp_gtp - &dtt_gpp.scale(&half);
    let db = dtp_gpp.scale(&half);
    let ddet = &(&(&dt_gtt * &g_pp) + &(&g_tt * &dt_gpp)) - &(&g_tp * &dt_gtp).scale(&two);
    let num = &(&g_pp * &a) - &(&g_tp * &b);
    let dnum = &(&(&dt_gpp * &a) + &(&g_pp * &da)) - &(&(&dt_gtp * &b) + &(&g_tp * &db));
    let dgamma = (&(&dnum * &det) - &(&num * &ddet)).checked_div(&(&det * &det))?;

    // Γ^θ_θφ = (g_φφ Γ_θ,θφ − g_θφ Γ_φ,θφ)/det
    let l_t_tp = dp_gtt.scale(&half);
    let l_p_tp = dt_gpp.scale(&half);
    let gamma_ttp = (&(&g_pp * &l_t_tp) - &(&g_tp * &l_p_tp)).checked_div(&det)?;

    // φ̇² = 1/g_φφ, ż = −εn s φ̇
    let phi_dot_sq = Trig::one().checked_div(&g_pp)?;
    let zdot_over_phidot = s.scale(&-(&nn * eps));
    let w = &(&zdot_over_phidot * &zdot_over_phidot) * &phi_dot_sq;
    // A = −Γ_φφ,θ φ̇², Bż = −2Γ^θ_θφ φ̇ ż
    let a_coef = &(-&dgamma) * &phi_dot_sq;
    let b_zdot = (&(&gamma_ttp * &zdot_over_phidot) * &phi_dot_sq).scale(&-two.clone());

    let w = c_to_z(&w.even("W")?, eps)?;
    let a_coef = c_to_z(&a_coef.even("Γ_φφ,θ φ̇²")?, eps)?;
    let b_zdot = c_to_z(&b_zdot.even("Γ_θφ φ̇ ż")?, eps)?;

    // W ξ″ + ½W′ ξ′ = A ξ + Bż ξ′
    let half_k = QRatFunc::constant(half);
    let p = &(&half_k * &w.derivative()).checked_div(&w)? - &b_zdot.checked_div(&w)?;
    let q = -&a_coef.checked_div(&w)?;
    let r = standard_form(&p, &q);
    let fuchsian = extract_fuchsian(&r, n, eps)?;
    Ok(NveData {
        n,
        eps: eps.clone(),
        disc: rat_int(1) + eps * eps * rat_int(i64::from(n * n) - 1),
        p,
        q,
        r,
        poles: expected_poles(n, eps),
        fuchsian,
    })
}

fn quad_json(x: &QuadExt, d: &Rational) -> Value {
    json!({ "a": x.a().to_string(), "b": x.b().to_string(), "d": d.to_string() })
}

/// Numerator and denominator scaled to coprime integer coefficient lists
/// (constant term first).
fn integer_lists(f: &QRatFunc) -> (Vec<String>, Vec<String>) {
    use num_integer::Integer;
    let all = f.num().coeffs().iter().chain(f.den().coeffs());
    let l = all.fold(num_bigint::BigInt::from(1), |acc, c| acc.lcm(c.denom()));
    let conv = |p: &QPoly| {
        p.coeffs()
            .iter()
            .map(|c| (c * Rational::from_integer(l.clone())).to_integer().to_string())
            .collect()
    };
    (conv(f.num()), conv(f.den()))
}

/// JSON dump: poles as `a + b√D`, β, δ, β∞, and p, q, r as integer
/// numerator/denominator coefficient lists.
pub fn nve_json(data: &NveData) -> Value {
    let d = &data.disc;
    let rf = |f: &QRatFunc| {
        let (num, den) = integer_lists(f);
        json!({ "num": num, "den": den })
    };
    let pf = &data.fuchsian;
    json!({
        "n": data.n,
        "eps": data.eps.to_string(),
        "D": d.to_string(),
        "poles": pf.poles.iter().map(|x| quad_json(x, d)).collect::<Vec<_>>(),
        "beta": pf.beta.iter().map(|x| quad_json(x, d)).collect::<Vec<_>>(),
        "delta": pf.delta.iter().map(|x| quad_json(x, d)).collect::<Vec<_>>(),
        "beta_inf": quad_json(&pf.beta_inf, d),
        "delta_sum": quad_json(&pf.delta_sum(), d),
        "p": rf(&data.p),
        "q": rf(&data.q),
        "r": rf(&data.r),
    })
}

#[cfg(test)]
mod tests;
