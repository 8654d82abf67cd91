//! Stage one: exponent selections giving a non-negative integer degree `d`.

use std::cmp::Ordering;

use num_traits::{Signed, ToPrimitive};

use super::{exponent_root, FuchsianOde, KovacicError};
use crate::algebra::{Field, Rational};

#[derive(Debug, Clone, PartialEq)]
pub struct CaseCandidate<K: Field> {
    /// 1, 2, or 4 / 6 / 12 for the subcases of case 3.
    pub case: u32,
    pub d: usize,
    /// α (case 1), e (case 2) or f (case 3) at each finite pole.
    pub exponents: Vec<K>,
    pub at_infinity: K,
    /// Sign (case 1) or multiplier e (cases 2, 3) picked at each pole,
    /// followed by the one at infinity.
    pub selection: Vec<i32>,
}

impl<K: Field> CaseCandidate<K> {
    /// `d` from the selected exponents, if it is a non-negative integer.
    pub fn recompute_d(&self) -> Option<usize> {
        let sum = self.exponents.iter().fold(K::zero(), |acc, x| acc.add_ref(x));
        to_degree(&self.at_infinity.sub_ref(&sum).mul_ref(&self.scale()))
    }

    /// 1, ½ or N/12.
    fn scale(&self) -> K {
        match self.case {
            1 => K::one(),
            2 => half(),
            n => K::from_rational(Rational::new(i64::from(n).into(), 12.into())),
        }
    }

    /// Ledger order: case, then d, then selection.
    pub fn ledger_cmp(&self, other: &Self) -> Ordering {
        (self.case, self.d, &self.selection).cmp(&(other.case, other.d, &other.selection))
    }

    /// Weights `w_j` of `θ = Σ w_j/(z − a_j)`: α_j, e_j/2 or (N/12) f_j.
    pub fn theta_weights(&self) -> Vec<K> {
        let scale = self.scale();
        self.exponents.iter().map(|x| x.mul_ref(&scale)).collect()
    }
}

fn to_degree<K: Field>(x: &K) -> Option<usize> {
    let q = x.to_rational()?;
    (q.is_integer() && !q.is_negative()).then(|| q.to_integer().to_usize()).flatten()
}

fn is_integer<K: Field>(x: &K) -> bool {
    x.to_rational().is_some_and(|q| q.is_integer())
}

type Options<K> = Vec<(i32, K)>;

fn half<K: Field>() -> K {
    K::from_rational(Rational::new(1.into(), 2.into()))
}

/// `½(1 ± √(1 + 4β))`, both signs kept even when they coincide.
fn case1_options<K: Field>(beta: &K) -> Result<Options<K>, KovacicError> {
    let root = exponent_root(beta).ok_or_else(|| KovacicError::ExponentOutsideField(beta.to_string()))?;
    let h = half::<K>();
    Ok(vec![
        (1, h.mul_ref(&K::one().add_ref(&root))),
        (-1, h.mul_ref(&K::one().sub_ref(&root))),
    ])
}

/// `{base + scale · e · √(1 + 4β) : e ∈ mults} ∩ ℤ`, duplicates dropped.
fn integer_set<K: Field>(beta: &K, base: i64, scale: &K, mults: &[i32]) -> Options<K> {
    let root = exponent_root(beta);
    let mut out: Options<K> = Vec::new();
    for &e in mults {
        let v = match (&root, e) {
            (_, 0) => K::from_i64(base),
            (Some(rt), _) => K::from_i64(base).add_ref(&scale.mul_ref(&K::from_i64(e.into())).mul_ref(rt)),
            (None, _) => continue,
        };
        if is_integer(&v) && !out.iter().any(|(_, w)| *w == v) {
            out.push((e, v));
        }
    }
    out
}

/// Walks the product of per-pole options and keeps selections with
/// `scale · (x_∞ − Σ x_j) ∈ ℕ₀`.
fn enumerate<K: Field>(
    case: u32,
    poles: &[Options<K>],
    inf: &Options<K>,
    keep: impl Fn(&[K], &K) -> bool,
) -> Vec<CaseCandidate<K>> {
    let mut out = Vec::new();
    let mut idx = vec![0usize; poles.len()];
    if poles.iter().any(Vec::is_empty) {
        return out;
    }
    loop {
        let exps: Vec<K> = idx.iter().zip(poles).map(|(&i, o)| o[i].1.clone()).collect();
        for (e_inf, x_inf) in inf {
            if !keep(&exps, x_inf) {
                continue;
            }
            let mut selection: Vec<i32> = idx.iter().zip(poles).map(|(&i, o)| o[i].0).collect();
            selection.push(*e_inf);
            let mut c = CaseCandidate {
                case,
                d: 0,
                exponents: exps.clone(),
                at_infinity: x_inf.clone(),
                selection,
            };
            if let Some(d) = c.recompute_d() {
                c.d = d;
                out.push(c);
            }
        }
        // odometer increment
        let mut k = 0;
        loop {
            if k == idx.len() {
                out.sort_by(CaseCandidate::ledger_cmp);
                return out;
            }
            idx[k] += 1;
            if idx[k] < poles[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Case 1: `α_j± = ½(1 ± √(1 + 4β_j))`, or α = 1 for a simple pole; the
/// same at infinity with `β_∞`; `d = α_∞ − Σ α_j`. Each sign choice is a
/// separate candidate even when both signs give the same exponent.
pub fn case1_candidates<K: Field>(ode: &FuchsianOde<K>) -> Result<Vec<CaseCandidate<K>>, KovacicError> {
    let poles = (0..ode.poles.len())
        .map(|j| {
            if ode.order(j) == 1 {
                Ok(vec![(1, K::one()), (-1, K::one())])
            } else {
                case1_options(&ode.beta[j])
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let inf = case1_options(&ode.beta_inf)?;
    Ok(enumerate(1, &poles, &inf, |_, _| true))
}

/// Case 2: `E_j = {2 + e√(1 + 4β_j) : e = 0, ±2} ∩ ℤ`, `E = {4}` at a simple
/// pole, `d = ½(e_∞ − Σ e_j)`; selections made only of even values are
/// skipped.
pub fn case2_candidates<K: Field>(ode: &FuchsianOde<K>) -> Result<Vec<CaseCandidate<K>>, KovacicError> {
    let one = K::one();
    let mults = [0, 2, -2];
    let poles: Vec<Options<K>> = (0..ode.poles.len())
        .map(|j| {
            if ode.order(j) == 1 {
                vec![(0, K::from_i64(4))]
            } else {
                integer_set(&ode.beta[j], 2, &one, &mults)
            }
        })
        .collect();
    let inf = integer_set(&ode.beta_inf, 2, &one, &mults);
    let even = |x: &K| x.to_rational().is_some_and(|q| (q / Rational::from_integer(2.into())).is_integer());
    Ok(enumerate(2, &poles, &inf, |exps, x_inf| !(exps.iter().all(even) && even(x_inf))))
}

/// `F` at one point: `{12}` for a simple pole (`beta = None`), otherwise
/// `{6 + (12e/N)√(1 + 4β) : |e| ≤ N/2} ∩ ℤ`.
fn case3_options<K: Field>(beta: Option<&K>, big_n: u32) -> Options<K> {
    let Some(beta) = beta else {
        return vec![(0, K::from_i64(12))];
    };
    let half_n = big_n as i32 / 2;
    let mults: Vec<i32> = std::iter::once(0).chain((1..=half_n).flat_map(|e| [e, -e])).collect();
    let scale = K::from_rational(Rational::new(12.into(), i64::from(big_n).into()));
    integer_set(beta, 6, &scale, &mults)
}

/// Case 3 with `N ∈ {4, 6, 12}`: `F_j = {6 + (12e/N)√(1 + 4β_j) : |e| ≤ N/2}
/// ∩ ℤ`, `F = {12}` at a simple pole, `d = (N/12)(f_∞ − Σ f_j)`.
pub fn case3_candidates<K: Field>(ode: &FuchsianOde<K>, big_n: u32) -> Result<Vec<CaseCandidate<K>>, KovacicError> {
    assert!(matches!(big_n, 4 | 6 | 12), "case 3 needs N ∈ {{4, 6, 12}}");
    let poles: Vec<Options<K>> = (0..ode.poles.len())
        .map(|j| case3_options((ode.order(j) == 2).then_some(&ode.beta[j]), big_n))
        .collect();
    let inf = case3_options(Some(&ode.beta_inf), big_n);
    Ok(enumerate(big_n, &poles, &inf, |_, _| true))
}

/// Candidates for one case label from [`CASES`](super::CASES).
pub fn candidates_for<K: Field>(ode: &FuchsianOde<K>, case: u32) -> Result<Vec<CaseCandidate<K>>, KovacicError> {
    match case {
        1 => case1_candidates(ode),
        2 => case2_candidates(ode),
        n => case3_candidates(ode, n),
    }
}

/// The case-3 exponent set at pole `j` (or at infinity), in enumeration order.
#[cfg(test)]
pub(crate) fn case3_set<K: Field>(ode: &FuchsianOde<K>, j: Option<usize>, big_n: u32) -> Vec<i64> {
    let opts = match j {
        Some(j) => case3_options((ode.order(j) == 2).then_some(&ode.beta[j]), big_n),
        None => case3_options(Some(&ode.beta_inf), big_n),
    };
    opts.iter()
        .map(|(_, v)| v.to_rational().unwrap().to_integer().to_i64().unwrap())
        .collect()
}
