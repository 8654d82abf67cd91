//! Reduced rational functions `num/den` over an exact field.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::field::Field;
use super::poly::Poly;
use super::AlgebraError;

/// Invariants: `den` is monic and nonzero, `gcd(num, den) = 1`; zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc<K: Field> {
    num: Poly<K>,
    den: Poly<K>,
}

impl<K: Field> RatFunc<K> {
    pub fn new(num: Poly<K>, den: Poly<K>) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.div_exact(&g)?, den.div_exact(&g)?)
        };
        let lead = den.leading().expect("nonzero").clone();
        if !lead.is_one() {
            let inv = lead.inv();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(Self { num, den })
    }

    pub fn zero() -> Self {
        Self {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn constant(c: K) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn from_poly(p: Poly<K>) -> Self {
        Self {
            num: p,
            den: Poly::one(),
        }
    }

    /// `c / (z − a)^k`.
    pub fn pole_term(c: K, a: &K, k: usize) -> Self {
        Self::new(Poly::constant(c), Poly::linear_root(a).pow(k)).expect("nonzero denominator")
    }

    pub fn num(&self) -> &Poly<K> {
        &self.num
    }
    pub fn den(&self) -> &Poly<K> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial this is equal to, if the denominator is constant.
    pub fn as_poly(&self) -> Option<&Poly<K>> {
        (self.den.degree() == Some(0)).then_some(&self.num)
    }

    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        let d = &self.den * &self.den;
        Self::new(n, d).expect("nonzero denominator")
    }

    /// Evaluates at `x`; errors at a pole.
    pub fn eval(&self, x: &K) -> Result<K, AlgebraError> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(self.num.eval(x).div_ref(&d))
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &K) -> Self {
        Self::new(self.num.scale(c), self.den.clone()).expect("nonzero denominator")
    }

    pub fn map<L: Field>(&self, f: impl Fn(&K) -> L) -> RatFunc<L> {
        RatFunc::new(self.num.map(&f), self.den.map(&f)).expect("nonzero denominator")
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        if rhs.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Self::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl<'a, K: Field> Add<&'a RatFunc<K>> for &'a RatFunc<K> {
    type Output = RatFunc<K>;
    fn add(self, rhs: &RatFunc<K>) -> RatFunc<K> {
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone()).expect("nonzero");
        }
        let n = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc::new(n, &self.den * &rhs.den).expect("nonzero")
    }
}

impl<'a, K: Field> Sub<&'a RatFunc<K>> for &'a RatFunc<K> {
    type Output = RatFunc<K>;
    fn sub(self, rhs: &RatFunc<K>) -> RatFunc<K> {
        self + &(-rhs)
    }
}

impl<'a, K: Field> Mul<&'a RatFunc<K>> for &'a RatFunc<K> {
    type Output = RatFunc<K>;
    fn mul(self, rhs: &RatFunc<K>) -> RatFunc<K> {
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero")
    }
}

impl<'a, K: Field> Div<&'a RatFunc<K>> for &'a RatFunc<K> {
    type Output = RatFunc<K>;
    fn div(self, rhs: &RatFunc<K>) -> RatFunc<K> {
        self.checked_div(rhs).expect("division by zero rational function")
    }
}

impl<'a, K: Field> Neg for &'a RatFunc<K> {
    type Output = RatFunc<K>;
    fn neg(self) -> RatFunc<K> {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl<K: Field> $tr for RatFunc<K> {
            type Output = RatFunc<K>;
            fn $m(self, rhs: RatFunc<K>) -> RatFunc<K> {
                (&self).$m(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl<K: Field> fmt::Debug for RatFunc<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<K: Field> fmt::Display for RatFunc<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "[{}] / [{}]", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{rat, rat_int, Rational};

    fn qp(c: &[i64]) -> Poly<Rational> {
        Poly::new(c.iter().map(|&v| rat_int(v)).collect())
    }

    #[test]
    fn reduces_to_lowest_terms() {
        // (z² − 1) / (2z − 2) = (z + 1)/2
        let f = RatFunc::new(qp(&[-1, 0, 1]), qp(&[-2, 2])).unwrap();
        assert_eq!(f.den(), &qp(&[1]));
        assert_eq!(f.num(), &Poly::new(vec![rat(1, 2), rat(1, 2)]));
    }

    #[test]
    fn derivative_of_reciprocal() {
        // d/dz 1/z = −1/z²
        let f = RatFunc::new(qp(&[1]), qp(&[0, 1])).unwrap();
        let g = RatFunc::new(qp(&[-1]), qp(&[0, 0, 1])).unwrap();
        assert_eq!(f.derivative(), g);
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(
            RatFunc::new(qp(&[1]), Poly::zero()),
            Err(AlgebraError::DivisionByZero)
        );
    }

    #[test]
    fn arithmetic_round_trip() {
        let a = RatFunc::pole_term(rat(3, 2), &rat(1, 3), 2);
        let b = RatFunc::pole_term(rat(-1, 1), &rat(2, 1), 1);
        let s = &a + &b;
        assert_eq!(&s - &b, a);
        assert_eq!(&(&a * &b) / &b, a);
    }
}
