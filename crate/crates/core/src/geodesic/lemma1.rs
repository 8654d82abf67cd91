//! The polynomial `f(ρ)` with `Γ^θ_φφ = −r cosθ sin³θ f / det g` on the
//! sectoral surface, `ρ = sin θ`, and the amplitude at which `f(1)` first
//! becomes negative.

use num_traits::Num;

use crate::algebra::linsolve::solve;
use crate::algebra::{rat, rat_int, Poly, Rational};

/// `f(ρ)` at `c = cos nφ` (with `sin² nφ = 1 − c²`), evaluated in any ring
/// with division by `ρ³`.
///
/// From the explicit `Γ^θ_φφ` numerator `N`: `f = −(N / cos θ) / ρ³`, where
/// `r_θ / cos θ = εnρ^{n−1}c`, `r_φ² = ε²n²ρ^{2n}(1−c²)` and
/// `r_φφ = −εn²ρⁿc`.
pub fn lemma1_f<T: Num + Clone>(n: u32, eps: &T, c: &T, rho: &T) -> T {
    let k = |v: u32| (0..v).fold(T::zero(), |a, _| a + T::one());
    let pow = |x: &T, e: u32| (0..e).fold(T::one(), |a, _| a * x.clone());
    let nn = k(n);
    let rn = pow(rho, n);
    let s2 = T::one() - c.clone() * c.clone();
    let r = T::one() + eps.clone() * rn.clone() * c.clone();
    let rt_over_cos = eps.clone() * nn.clone() * pow(rho, n - 1) * c.clone();
    let rp2 = eps.clone() * eps.clone() * nn.clone() * nn.clone() * rn.clone() * rn.clone() * s2;
    let rpp = T::zero() - eps.clone() * nn.clone() * nn * rn * c.clone();
    let rho2 = rho.clone() * rho.clone();
    let two = k(2);
    let num_over_cos = rt_over_cos
        * (r.clone() * rpp * rho2.clone() - two * rp2.clone() * rho2.clone() - r.clone() * r.clone() * rho2.clone() * rho2)
        - (r.clone() * r.clone() * r.clone() * pow(rho, 3) + r * rp2 * rho.clone());
    (T::zero() - num_over_cos) / pow(rho, 3)
}

/// `f(ρ) = 1 + Σ a_i ρ^{e_i}` recovered by exact interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct Lemma1Poly {
    pub n: u32,
    /// Distinct exponents among `n, 2n−2, 2n, 3n−2, 3n` (they collide for
    /// n = 2) with their coefficients.
    pub terms: Vec<(u32, Rational)>,
    pub poly: Poly<Rational>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Lemma1Error {
    #[error("lemma needs n ≥ 2, got {0}")]
    OrderTooSmall(u32),
    #[error("singular interpolation system")]
    Singular,
}

/// Fits the coefficients of `f(ρ)` exactly by sampling it at distinct
/// rational `ρ` and solving the linear system over ℚ.
pub fn lemma1_poly(n: u32, eps: &Rational, c: &Rational) -> Result<Lemma1Poly, Lemma1Error> {
    if n < 2 {
        return Err(Lemma1Error::OrderTooSmall(n));
    }
    let mut exps = vec![n, 2 * n - 2, 2 * n, 3 * n - 2, 3 * n];
    exps.sort_unstable();
    exps.dedup();
    let k = exps.len();
    let one = rat_int(1);
    let (mut rows, mut rhs) = (Vec::with_capacity(k), Vec::with_capacity(k));
    for j in 1..=k as i64 {
        let rho = rat(j, k as i64 + 1);
        rows.push(exps.iter().map(|&e| num_traits::pow(rho.clone(), e as usize)).collect());
        rhs.push(lemma1_f(n, eps, c, &rho) - &one);
    }
    let sol = solve(rows, rhs, k).ok_or(Lemma1Error::Singular)?;
    if sol.rank < k {
        return Err(Lemma1Error::Singular);
    }
    let mut coeffs = vec![rat_int(0); 3 * n as usize + 1];
    coeffs[0] = one;
    for (&e, a) in exps.iter().zip(&sol.x) {
        coeffs[e as usize] = a.clone();
    }
    Ok(Lemma1Poly {
        n,
        terms: exps.into_iter().zip(sol.x).collect(),
        poly: Poly::new(coeffs),
    })
}

/// Smallest `ε ∈ (0, 1)` at which `min_{c ∈ [−1, 0]} f(1; c)` reaches zero,
/// to about 1e−7; 1 if there is none.
///
/// `f(1)` is a cubic in `c`; its minimum over the interval is taken over the
/// endpoints and the real critical points.
pub fn lemma1_critical_eps(n: u32) -> f64 {
    let min_f1 = |eps: f64| {
        // cubic coefficients from four samples (exact for a cubic)
        let xs = [-1.0, -1.0 / 3.0, 1.0 / 3.0, 1.0];
        let ys: Vec<f64> = xs.iter().map(|c| lemma1_f(n, &eps, c, &1.0)).collect();
        let coef = cubic_through(&xs, &ys);
        let eval = |c: f64| coef[0] + c * (coef[1] + c * (coef[2] + c * coef[3]));
        let mut best = eval(-1.0).min(eval(0.0));
        // f' = coef1 + 2 coef2 c + 3 coef3 c²
        let (a, b, cc) = (3.0 * coef[3], 2.0 * coef[2], coef[1]);
        let mut crit = Vec::new();
        if a.abs() > 1e-300 {
            let disc = b * b - 4.0 * a * cc;
            if disc >= 0.0 {
                let sq = disc.sqrt();
                crit.push((-b + sq) / (2.0 * a));
                crit.push((-b - sq) / (2.0 * a));
            }
        } else if b.abs() > 1e-300 {
            crit.push(-cc / b);
        }
        for c in crit {
            if (-1.0..=0.0).contains(&c) {
                best = best.min(eval(c));
            }
        }
        best
    };
    let mut lo = 0.0;
    let mut hi = None;
    let step = 1e-3;
    let mut e = step;
    while e < 1.0 {
        if min_f1(e) <= 0.0 {
            hi = Some(e);
            break;
        }
        lo = e;
        e += step;
    }
    let Some(mut hi) = hi else {
        return 1.0;
    };
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if min_f1(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Monomial coefficients of the cubic through four points (Lagrange form
/// expanded).
fn cubic_through(xs: &[f64; 4], ys: &[f64]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for i in 0..4 {
        // Π_{j≠i} (x − x_j) / (x_i − x_j)
        let mut basis = [1.0, 0.0, 0.0, 0.0];
        let mut denom = 1.0;
        for j in 0..4 {
            if j == i {
                continue;
            }
            let mut next = [0.0; 4];
            for d in 0..3 {
                next[d + 1] += basis[d];
                next[d] -= xs[j] * basis[d];
            }
            basis = next;
            denom *= xs[i] - xs[j];
        }
        for d in 0..4 {
            out[d] += ys[i] * basis[d] / denom;
        }
    }
    out
}
