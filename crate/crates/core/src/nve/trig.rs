//! `ℚ(c)[s]/(s² − 1 + c²)`: rational functions of `c = cos nφ` extended by
//! `s = sin nφ`.

use std::ops::{Add, Mul, Neg, Sub};

use crate::algebra::{rat_int, AlgebraError, Poly, Rational};
use crate::QRatFunc;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub(crate) enum TrigError {
    #[error("odd part survives in {0}")]
    Odd(&'static str),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// `even + odd · s`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Trig {
    even: QRatFunc,
    odd: QRatFunc,
}

fn s_sq() -> QRatFunc {
    QRatFunc::from_poly(Poly::new(vec![rat_int(1), rat_int(0), rat_int(-1)]))
}

impl Trig {
    pub fn zero() -> Self {
        Self::constant(rat_int(0))
    }
    pub fn one() -> Self {
        Self::constant(rat_int(1))
    }
    pub fn constant(v: Rational) -> Self {
        Self {
            even: QRatFunc::constant(v),
            odd: QRatFunc::zero(),
        }
    }
    pub fn c() -> Self {
        Self {
            even: QRatFunc::from_poly(Poly::x()),
            odd: QRatFunc::zero(),
        }
    }
    pub fn s() -> Self {
        Self {
            even: QRatFunc::zero(),
            odd: QRatFunc::one(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self {
            even: self.even.scale(k),
            odd: self.odd.scale(k),
        }
    }

    /// Division through the conjugate `even − odd·s`.
    pub fn checked_div(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        let conj = Self {
            even: rhs.even.clone(),
            odd: -&rhs.odd,
        };
        let norm = &(&rhs.even * &rhs.even) - &(&(&rhs.odd * &rhs.odd) * &s_sq());
        let top = self * &conj;
        Ok(Self {
            even: top.even.checked_div(&norm)?,
            odd: top.odd.checked_div(&norm)?,
        })
    }

    /// The value as a function of `c` alone; fails if an odd part remains.
    pub fn even(&self, what: &'static str) -> Result<QRatFunc, TrigError> {
        if self.odd.is_zero() {
            Ok(self.even.clone())
        } else {
            Err(TrigError::Odd(what))
        }
    }
}

impl<'a> Add<&'a Trig> for &'a Trig {
    type Output = Trig;
    fn add(self, rhs: &Trig) -> Trig {
        Trig {
            even: &self.even + &rhs.even,
            odd: &self.odd + &rhs.odd,
        }
    }
}

impl<'a> Sub<&'a Trig> for &'a Trig {
    type Output = Trig;
    fn sub(self, rhs: &Trig) -> Trig {
        Trig {
            even: &self.even - &rhs.even,
            odd: &self.odd - &rhs.odd,
        }
    }
}

impl<'a> Mul<&'a Trig> for &'a Trig {
    type Output = Trig;
    fn mul(self, rhs: &Trig) -> Trig {
        Trig {
            even: &(&self.even * &rhs.even) + &(&(&self.odd * &rhs.odd) * &s_sq()),
            odd: &(&self.even * &rhs.odd) + &(&self.odd * &rhs.even),
        }
    }
}

impl Neg for &Trig {
    type Output = Trig;
    fn neg(self) -> Trig {
        Trig {
            even: -&self.even,
            odd: -&self.odd,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pythagoras() {
        let (c, s) = (Trig::c(), Trig::s());
        let one = &(&c * &c) + &(&s * &s);
        assert_eq!(one, Trig::one());
    }

    #[test]
    fn division_inverts_multiplication() {
        let x = &Trig::c() + &Trig::s().scale(&rat_int(3));
        let y = &Trig::one() + &Trig::s();
        let q = (&x * &y).checked_div(&y).unwrap();
        assert_eq!(q, x);
    }

    #[test]
    fn odd_part_is_reported() {
        assert!(Trig::s().even("s").is_err());
        assert!((&Trig::s() * &Trig::s()).even("s²").is_ok());
    }
}
