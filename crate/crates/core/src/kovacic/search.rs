//! Stage two: the polynomial `P` of each case, and exact checks of the
//! resulting ω.

use serde_json::{json, Value};

use super::{CaseCandidate, FuchsianOde};
use crate::algebra::linsolve;
use crate::algebra::{Field, Poly, RatFunc};

#[derive(Debug, Clone, PartialEq)]
pub enum Witness<K: Field> {
    /// `ω = θ + P′/P` solves `ω′ + ω² = r`.
    Rational { theta: RatFunc<K>, p: Poly<K>, omega: RatFunc<K> },
    /// ω is a root of `ω² − φω + (½φ′ + ½φ² − r) = 0`, `φ = θ + P′/P`.
    Quadratic { theta: RatFunc<K>, p: Poly<K>, phi: RatFunc<K> },
    /// ω is a root of `Σ_i S^i P_i/(N − i)! ω^i = 0`; `relation[i]` is the
    /// coefficient of `ω^i`.
    Algebraic {
        case: u32,
        theta: RatFunc<K>,
        p: Poly<K>,
        relation: Vec<Poly<K>>,
    },
}

impl<K: Field> Witness<K> {
    pub fn to_json(&self) -> Value {
        match self {
            Witness::Rational { theta, p, omega } => json!({
                "kind": "rational",
                "theta": theta.to_string(),
                "P": p.to_string(),
                "omega": omega.to_string(),
            }),
            Witness::Quadratic { theta, p, phi } => json!({
                "kind": "quadratic",
                "theta": theta.to_string(),
                "P": p.to_string(),
                "phi": phi.to_string(),
                "relation": "omega^2 - phi*omega + (phi'/2 + phi^2/2 - r) = 0",
            }),
            Witness::Algebraic { case, theta, p, relation } => json!({
                "kind": "algebraic",
                "degree": case,
                "theta": theta.to_string(),
                "P": p.to_string(),
                "relation": relation.iter().map(ToString::to_string).collect::<Vec<_>>(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SearchResult<K: Field> {
    Found(Witness<K>),
    /// The coefficient equations for `P` are inconsistent.
    NoPolynomial { equations: usize, unknowns: usize },
    /// A polynomial was found but the exact check on ω rejected it.
    Unverified,
}

impl<K: Field> SearchResult<K> {
    pub fn to_json(&self) -> Value {
        match self {
            SearchResult::Found(w) => json!({ "status": "found", "witness": w.to_json() }),
            SearchResult::NoPolynomial { equations, unknowns } => json!({
                "status": "no_polynomial",
                "equations": equations,
                "unknowns": unknowns,
            }),
            SearchResult::Unverified => json!({ "status": "unverified" }),
        }
    }
}

fn theta<K: Field>(ode: &FuchsianOde<K>, weights: &[K]) -> RatFunc<K> {
    ode.poles
        .iter()
        .zip(weights)
        .fold(RatFunc::zero(), |acc, (a, w)| &acc + &RatFunc::pole_term(w.clone(), a, 1))
}

fn poly<K: Field>(f: &RatFunc<K>) -> Poly<K> {
    f.as_poly().expect("denominator cleared").clone()
}

fn times<K: Field>(p: &Poly<K>, f: &RatFunc<K>) -> Poly<K> {
    poly(&(&RatFunc::from_poly(p.clone()) * f))
}

/// Monic `P` of degree `d` with `image(P) = 0`, for a linear `image`.
/// Coefficient equations are stacked from the top degree down, so the
/// elimination fixes `p_{d−1}`, `p_{d−2}`, … first.
fn monic_kernel<K: Field>(image: impl Fn(&Poly<K>) -> Poly<K>, d: usize) -> Result<Poly<K>, (usize, usize)> {
    let cols: Vec<Poly<K>> = (0..=d).map(|i| image(&Poly::monomial(K::one(), i))).collect();
    let rows = cols.iter().filter_map(Poly::degree).max().map_or(0, |m| m + 1);
    let a = (0..rows).rev().map(|k| cols[..d].iter().map(|c| c.coeff(k)).collect()).collect();
    let b = (0..rows).rev().map(|k| cols[d].coeff(k).neg_ref()).collect();
    let sol = linsolve::solve(a, b, d).ok_or((rows, d))?;
    let mut coeffs = sol.x;
    coeffs.push(K::one());
    Ok(Poly::new(coeffs))
}

fn apply<K: Field>(ops: &[Poly<K>], p: &Poly<K>) -> Poly<K> {
    let mut acc = Poly::zero();
    let mut dp = p.clone();
    for op in ops {
        acc = &acc + &(op * &dp);
        dp = dp.derivative();
    }
    acc
}

fn log_derivative<K: Field>(p: &Poly<K>) -> RatFunc<K> {
    RatFunc::new(p.derivative(), p.clone()).expect("nonzero P")
}

/// Case 1: `P″ + 2θP′ + (θ′ + θ² − r)P = 0`, cleared by `S²`.
pub fn case1_search<K: Field>(ode: &FuchsianOde<K>, cand: &CaseCandidate<K>) -> SearchResult<K> {
    let th = theta(ode, &cand.theta_weights());
    let s2 = ode.s().pow(2);
    let a0 = &(&th.derivative() + &(&th * &th)) - &ode.r;
    let ops = [times(&s2, &a0), times(&s2, &th.scale(&K::from_i64(2))), s2];
    match monic_kernel(|p| apply(&ops, p), cand.d) {
        Err((equations, unknowns)) => SearchResult::NoPolynomial { equations, unknowns },
        Ok(p) => {
            let omega = &th + &log_derivative(&p);
            let w = Witness::Rational { theta: th, p, omega };
            finish(ode, w)
        }
    }
}

/// Case 2: `P‴ + 3θP″ + (3θ² + 3θ′ − 4r)P′ + (θ″ + 3θθ′ + θ³ − 4rθ − 2r′)P
/// = 0`, cleared by `S³`.
pub fn case2_search<K: Field>(ode: &FuchsianOde<K>, cand: &CaseCandidate<K>) -> SearchResult<K> {
    let k = |v: i64| K::from_i64(v);
    let r = &ode.r;
    let th = theta(ode, &cand.theta_weights());
    let th1 = th.derivative();
    let th_sq = &th * &th;
    let a1 = &(&th_sq.scale(&k(3)) + &th1.scale(&k(3))) - &r.scale(&k(4));
    let a0 = [
        th1.derivative(),
        (&th * &th1).scale(&k(3)),
        &th_sq * &th,
        (r * &th).scale(&k(-4)),
        r.derivative().scale(&k(-2)),
    ]
    .iter()
    .fold(RatFunc::zero(), |acc, t| &acc + t);
    let s3 = ode.s().pow(3);
    let ops = [times(&s3, &a0), times(&s3, &a1), times(&s3, &th.scale(&k(3))), s3];
    match monic_kernel(|p| apply(&ops, p), cand.d) {
        Err((equations, unknowns)) => SearchResult::NoPolynomial { equations, unknowns },
        Ok(p) => {
            let phi = &th + &log_derivative(&p);
            finish(ode, Witness::Quadratic { theta: th, p, phi })
        }
    }
}

/// Runs `P_N = −P`, `P_{i−1} = −S P_i′ + ((N − i)S′ − Sθ)P_i − (N − i)(i + 1)
/// S² r P_{i+1}` down to `P_{−1}`. Element 0 of the result is `P_{−1}` and
/// element `i + 1` is `P_i`.
pub fn case3_recursion<K: Field>(ode: &FuchsianOde<K>, theta: &RatFunc<K>, big_n: u32, p: &Poly<K>) -> Vec<Poly<K>> {
    let s = ode.s();
    let ds = s.derivative();
    let s_theta = times(&s, theta);
    let s2r = times(&s.pow(2), &ode.r);
    let big_n = big_n as usize;
    let mut out = vec![Poly::zero(); big_n + 2];
    out[big_n + 1] = -p;
    for i in (0..=big_n).rev() {
        let k = |v: usize| K::from_i64(v as i64);
        let pi = &out[i + 1];
        let mut next = -&(&s * &pi.derivative());
        next = &next + &(&(&ds.scale(&k(big_n - i)) - &s_theta) * pi);
        if i < big_n {
            let c = k((big_n - i) * (i + 1));
            next = &next - &(&s2r * &out[i + 2]).scale(&c);
        }
        out[i] = next;
    }
    out
}

/// Case 3: a monic `P` of degree `d` with `P_{−1} ≡ 0`.
pub fn case3_search<K: Field>(ode: &FuchsianOde<K>, cand: &CaseCandidate<K>) -> SearchResult<K> {
    let th = theta(ode, &cand.theta_weights());
    let bound = (cand.case as usize + 1) * ode.poles.len().saturating_sub(1) + cand.d;
    let image = |p: &Poly<K>| {
        let p_minus1 = case3_recursion(ode, &th, cand.case, p).swap_remove(0);
        assert!(p_minus1.degree().is_none_or(|g| g <= bound), "P_-1 exceeds its degree bound {bound}");
        p_minus1
    };
    match monic_kernel(image, cand.d) {
        Err((equations, unknowns)) => SearchResult::NoPolynomial { equations, unknowns },
        Ok(p) => {
            let relation = closing_relation(ode, &th, cand.case, &p);
            finish(
                ode,
                Witness::Algebraic {
                    case: cand.case,
                    theta: th,
                    p,
                    relation,
                },
            )
        }
    }
}

/// `S^i P_i/(N − i)!` for `i = 0..=N`.
fn closing_relation<K: Field>(ode: &FuchsianOde<K>, theta: &RatFunc<K>, big_n: u32, p: &Poly<K>) -> Vec<Poly<K>> {
    let ps = case3_recursion(ode, theta, big_n, p);
    let s = ode.s();
    let big_n = big_n as usize;
    let mut fact = K::one();
    let mut out = vec![Poly::zero(); big_n + 1];
    for i in (0..=big_n).rev() {
        // fact = (N − i)!
        if i < big_n {
            fact = fact.mul_ref(&K::from_i64((big_n - i) as i64));
        }
        out[i] = (&s.pow(i) * &ps[i + 1]).scale(&fact.inv());
    }
    out
}

fn finish<K: Field>(ode: &FuchsianOde<K>, w: Witness<K>) -> SearchResult<K> {
    if verify_solution(ode, &w) {
        SearchResult::Found(w)
    } else {
        SearchResult::Unverified
    }
}

/// Dispatches on the candidate's case label.
pub fn search<K: Field>(ode: &FuchsianOde<K>, cand: &CaseCandidate<K>) -> SearchResult<K> {
    match cand.case {
        1 => case1_search(ode, cand),
        2 => case2_search(ode, cand),
        _ => case3_search(ode, cand),
    }
}

/// `a + b ω` in `K(z)[ω]/(ω² − φω + c)`.
#[derive(Clone)]
struct QuadElt<K: Field> {
    a: RatFunc<K>,
    b: RatFunc<K>,
}

/// Exact check of a witness against `ξ″ = r ξ`.
///
/// Rational: `ω′ + ω² − r = 0`. Quadratic: with `ω² = φω − c` and
/// `ω′ = (φ′ω − c′)/(2ω − φ)`, `ω′ + ω² − r` reduces to zero in
/// `K(z)[ω]`. Algebraic: the recursion is rerun and `P_{−1}` must vanish.
pub fn verify_solution<K: Field>(ode: &FuchsianOde<K>, w: &Witness<K>) -> bool {
    let r = &ode.r;
    match w {
        Witness::Rational { omega, .. } => (&(&omega.derivative() + &(omega * omega)) - r).is_zero(),
        Witness::Quadratic { phi, .. } => {
            let half = K::from_i64(2).inv();
            let c = &(&phi.derivative() + &(phi * phi)).scale(&half) - r;
            // (2ω − φ)(φ − 2ω) = 4c − φ²
            let norm = &c.scale(&K::from_i64(4)) - &(phi * phi);
            if norm.is_zero() {
                // double root ω = φ/2, which is rational
                let omega = phi.scale(&half);
                return (&(&omega.derivative() + &(&omega * &omega)) - r).is_zero();
            }
            let mul = |x: &QuadElt<K>, y: &QuadElt<K>| {
                let bb = &x.b * &y.b;
                QuadElt {
                    a: &(&x.a * &y.a) - &(&bb * &c),
                    b: &(&(&x.a * &y.b) + &(&x.b * &y.a)) + &(&bb * phi),
                }
            };
            let numer = QuadElt {
                a: -&c.derivative(),
                b: phi.derivative(),
            };
            let conj = QuadElt {
                a: phi.clone(),
                b: RatFunc::constant(K::from_i64(-2)),
            };
            let top = mul(&numer, &conj);
            let inv_norm = norm.inv().expect("nonzero");
            // ω² = −c + φω
            let a = &(&(&top.a * &inv_norm) - &c) - r;
            let b = &(&top.b * &inv_norm) + phi;
            a.is_zero() && b.is_zero()
        }
        Witness::Algebraic { case, theta, p, relation } => {
            case3_recursion(ode, theta, *case, p)[0].is_zero() && *relation == closing_relation(ode, theta, *case, p)
        }
    }
}
