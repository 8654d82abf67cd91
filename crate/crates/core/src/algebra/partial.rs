//! Partial-fraction data of Fuchsian rational functions, and the sign-variation
//! bound on positive roots.

use num_traits::Signed;

use super::field::{Field, Rational};
use super::poly::Poly;
use super::ratfunc::RatFunc;
use super::AlgebraError;

/// Coefficients of `f = Σ β_j/(z−a_j)² + Σ δ_j/(z−a_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialFractions<K: Field> {
    pub poles: Vec<K>,
    pub beta: Vec<K>,
    pub delta: Vec<K>,
    /// `Σ (β_j + δ_j a_j)`, the double-pole coefficient at infinity.
    pub beta_inf: K,
}

impl<K: Field> PartialFractions<K> {
    pub fn delta_sum(&self) -> K {
        self.delta.iter().fold(K::zero(), |acc, d| acc.add_ref(d))
    }

    /// Rebuilds `Σ β_j/(z−a_j)² + Σ δ_j/(z−a_j)`.
    pub fn reconstruct(&self) -> RatFunc<K> {
        let mut acc = RatFunc::zero();
        for ((a, b), d) in self.poles.iter().zip(&self.beta).zip(&self.delta) {
            if !b.is_zero() {
                acc = &acc + &RatFunc::pole_term(b.clone(), a, 2);
            }
            if !d.is_zero() {
                acc = &acc + &RatFunc::pole_term(d.clone(), a, 1);
            }
        }
        acc
    }
}

/// Expands `f` over the given distinct poles by residue evaluation.
///
/// With `f = N/Q` and `Q = (z−a)^m Q̂`: for a double pole `β = N(a)/Q̂(a)` and
/// `δ = (N/Q̂)'(a)`; for a simple pole `β = 0` and `δ = N(a)/Q̂(a)`. A listed
/// point that is not a pole gets zero coefficients.
pub fn partial_fractions<K: Field>(
    f: &RatFunc<K>,
    poles: &[K],
) -> Result<PartialFractions<K>, AlgebraError> {
    let mut beta = Vec::with_capacity(poles.len());
    let mut delta = Vec::with_capacity(poles.len());
    let mut covered = Poly::one();
    for (i, a) in poles.iter().enumerate() {
        if poles[..i].contains(a) {
            return Err(AlgebraError::RepeatedPole);
        }
        let m = f.den().root_multiplicity(a);
        let lin = Poly::linear_root(a);
        let q_hat = f.den().div_exact(&lin.pow(m))?;
        covered = &covered * &lin.pow(m);
        let n = f.num();
        match m {
            0 => {
                beta.push(K::zero());
                delta.push(K::zero());
            }
            1 => {
                beta.push(K::zero());
                delta.push(n.eval(a).div_ref(&q_hat.eval(a)));
            }
            2 => {
                let qa = q_hat.eval(a);
                let na = n.eval(a);
                beta.push(na.div_ref(&qa));
                let num = n.derivative().eval(a).mul_ref(&qa).sub_ref(&na.mul_ref(&q_hat.derivative().eval(a)));
                delta.push(num.div_ref(&qa.mul_ref(&qa)));
            }
            _ => return Err(AlgebraError::PoleOrderTooHigh(m)),
        }
    }
    if &covered != f.den() {
        return Err(AlgebraError::UnexpectedPole);
    }
    let beta_inf = poles
        .iter()
        .zip(&beta)
        .zip(&delta)
        .fold(K::zero(), |acc, ((a, b), d)| acc.add_ref(b).add_ref(&d.mul_ref(a)));
    let pf = PartialFractions {
        poles: poles.to_vec(),
        beta,
        delta,
        beta_inf,
    };
    if &pf.reconstruct() != f {
        // a polynomial part: f does not vanish at infinity
        return Err(AlgebraError::PolynomialPart);
    }
    if !pf.delta_sum().is_zero() {
        return Err(AlgebraError::IrregularAtInfinity);
    }
    Ok(pf)
}

/// Number of sign changes in the coefficient sequence (zeros skipped): an
/// upper bound on the number of positive roots, with the same parity.
pub fn descartes_bound(p: &Poly<Rational>) -> Result<usize, AlgebraError> {
    if p.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let signs: Vec<bool> = p
        .coeffs()
        .iter()
        .filter(|c| !Field::is_zero(*c))
        .map(|c| c.is_positive())
        .collect();
    Ok(signs.windows(2).filter(|w| w[0] != w[1]).count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{rat, rat_int};
    use crate::algebra::QuadExt;
    use proptest::prelude::*;

    #[test]
    fn constructed_input() {
        // 1/(z−1)² + 2/(z−1) − 2/(z+1)
        let one = rat_int(1);
        let m1 = rat_int(-1);
        let f = &(&RatFunc::pole_term(rat_int(1), &one, 2) + &RatFunc::pole_term(rat_int(2), &one, 1))
            + &RatFunc::pole_term(rat_int(-2), &m1, 1);
        let pf = partial_fractions(&f, &[one, m1]).unwrap();
        assert_eq!(pf.beta, vec![rat_int(1), rat_int(0)]);
        assert_eq!(pf.delta, vec![rat_int(2), rat_int(-2)]);
        assert!(Field::is_zero(&pf.delta_sum()));
        assert_eq!(pf.beta_inf, rat_int(1 + 2 * 1 + (-2) * (-1)));
    }

    #[test]
    fn rejects_triple_pole() {
        let f = RatFunc::pole_term(rat_int(1), &rat_int(0), 3);
        assert_eq!(
            partial_fractions(&f, &[rat_int(0)]),
            Err(AlgebraError::PoleOrderTooHigh(3))
        );
    }

    #[test]
    fn rejects_unlisted_pole() {
        let f = &RatFunc::pole_term(rat_int(1), &rat_int(0), 2) + &RatFunc::pole_term(rat_int(1), &rat_int(3), 2);
        assert_eq!(
            partial_fractions(&f, &[rat_int(0)]),
            Err(AlgebraError::UnexpectedPole)
        );
    }

    #[test]
    fn flags_irregular_infinity() {
        let f = RatFunc::pole_term(rat_int(2), &rat_int(1), 1);
        assert_eq!(
            partial_fractions(&f, &[rat_int(1)]),
            Err(AlgebraError::IrregularAtInfinity)
        );
    }

    #[test]
    fn quadratic_poles() {
        // 1/(z−√2)² − 1/(z+√2)² + 3/(z−√2) − 3/(z+√2)
        let s = QuadExt::sqrt_of(rat_int(2));
        let ms = -&s;
        let one = QuadExt::rational(rat_int(1));
        let three = QuadExt::rational(rat_int(3));
        let f = [
            RatFunc::pole_term(one.clone(), &s, 2),
            RatFunc::pole_term(-&one, &ms, 2),
            RatFunc::pole_term(three.clone(), &s, 1),
            RatFunc::pole_term(-&three, &ms, 1),
        ]
        .iter()
        .fold(RatFunc::zero(), |a, t| &a + t);
        // denominator stays over ℚ
        assert!(f.den().coeffs().iter().all(|c| c.to_rational().is_some()));
        let pf = partial_fractions(&f, &[s.clone(), ms]).unwrap();
        assert_eq!(pf.beta, vec![one.clone(), -&one]);
        assert_eq!(pf.delta, vec![three.clone(), -&three]);
    }

    #[test]
    fn sign_variations() {
        let p = |c: &[i64]| Poly::new(c.iter().map(|&v| rat_int(v)).collect::<Vec<_>>());
        assert_eq!(descartes_bound(&p(&[1, 0, 1])), Ok(0));
        assert_eq!(descartes_bound(&p(&[1, -3, 0, 1])), Ok(2));
        assert_eq!(descartes_bound(&Poly::zero()), Err(AlgebraError::ZeroPolynomial));
    }

    proptest! {
        #[test]
        fn round_trip_recovers_inputs(
            raw in prop::collection::vec(((-9i64..9, 1i64..5), (-9i64..9, 1i64..5)), 2..5),
        ) {
            let k = raw.len();
            let poles: Vec<Rational> = (0..k).map(|j| rat(2 * j as i64 - 3, 2)).collect();
            let beta: Vec<Rational> = raw.iter().map(|(b, _)| rat(b.0, b.1)).collect();
            let mut delta: Vec<Rational> = raw.iter().map(|(_, d)| rat(d.0, d.1)).collect();
            let s: Rational = delta[..k - 1].iter().sum();
            delta[k - 1] = -s;
            let mut f = RatFunc::zero();
            for j in 0..k {
                f = &f + &RatFunc::pole_term(beta[j].clone(), &poles[j], 2);
                f = &f + &RatFunc::pole_term(delta[j].clone(), &poles[j], 1);
            }
            let pf = partial_fractions(&f, &poles).unwrap();
            prop_assert_eq!(pf.beta, beta);
            prop_assert_eq!(pf.delta, delta);
        }
    }
}
