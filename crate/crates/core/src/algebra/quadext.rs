//! Elements `a + b√D` of a real quadratic extension of ℚ.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::Signed;

use super::field::{rational_sqrt, rational_to_f64, Field, Rational};
use super::AlgebraError;

/// `a + b√D` with rational `a`, `b`, `D`.
///
/// Canonical form: when `b = 0` the discriminant is stored as zero, so a
/// rational value has exactly one representation and is compatible with
/// every extension. When `D` is a perfect rational square the radical is
/// folded into `a` on construction, so `b ≠ 0` implies `D` is not a square
/// and equality is decided by comparing the three fields.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadExt {
    a: Rational,
    b: Rational,
    d: Rational,
}

impl QuadExt {
    pub fn new(a: Rational, b: Rational, d: Rational) -> Self {
        if b.is_zero() || d.is_zero() {
            return Self::rational(a);
        }
        if let Some(root) = rational_sqrt(&d) {
            return Self::rational(a + b * root);
        }
        let (f, m) = squarefree_part(&d);
        Self { a, b: b * f, d: m }
    }

    /// `d` is already a canonical non-square discriminant (or irrelevant).
    fn canonical(a: Rational, b: Rational, d: Rational) -> Self {
        if b.is_zero() {
            Self::rational(a)
        } else {
            Self { a, b, d }
        }
    }

    pub fn rational(a: Rational) -> Self {
        Self {
            a,
            b: Rational::zero(),
            d: Rational::zero(),
        }
    }

    /// `√D` itself.
    pub fn sqrt_of(d: Rational) -> Self {
        Self::new(Rational::zero(), <Rational as num_traits::One>::one(), d)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }
    pub fn b(&self) -> &Rational {
        &self.b
    }
    /// The discriminant, or `None` for a rational element.
    pub fn discriminant(&self) -> Option<&Rational> {
        if self.b.is_zero() {
            None
        } else {
            Some(&self.d)
        }
    }

    pub fn conjugate(&self) -> Self {
        Self {
            a: self.a.clone(),
            b: -&self.b,
            d: self.d.clone(),
        }
    }

    /// `a² − b²D`, the field norm down to ℚ.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * &self.d
    }

    fn shared_d(&self, rhs: &Self) -> Result<Rational, AlgebraError> {
        match (self.b.is_zero(), rhs.b.is_zero()) {
            (true, _) => Ok(rhs.d.clone()),
            (_, true) => Ok(self.d.clone()),
            _ if self.d == rhs.d => Ok(self.d.clone()),
            _ => Err(AlgebraError::MixedDiscriminants),
        }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        let d = self.shared_d(rhs)?;
        Ok(Self::canonical(&self.a + &rhs.a, &self.b + &rhs.b, d))
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        let d = self.shared_d(rhs)?;
        Ok(Self::canonical(&self.a - &rhs.a, &self.b - &rhs.b, d))
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        let d = self.shared_d(rhs)?;
        if self.b.is_zero() {
            return Ok(Self::canonical(&self.a * &rhs.a, &self.a * &rhs.b, d));
        }
        if rhs.b.is_zero() {
            return Ok(Self::canonical(&self.a * &rhs.a, &self.b * &rhs.a, d));
        }
        let a = &self.a * &rhs.a + &self.b * &rhs.b * &d;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        Ok(Self::canonical(a, b, d))
    }

    pub fn checked_inv(&self) -> Result<Self, AlgebraError> {
        let n = self.norm();
        if n.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::canonical(&self.a / &n, -&self.b / &n, self.d.clone()))
    }
}

/// Writes `D = f²m` with `m` a squarefree integer (as far as trial division
/// up to 10⁶ can tell), so `√D = f√m`.
fn squarefree_part(d: &Rational) -> (Rational, Rational) {
    use num_bigint::BigInt;
    // √(p/q) = √(pq)/q
    let mut m: BigInt = d.numer() * d.denom();
    let mut f = Rational::new(BigInt::from(1), d.denom().clone());
    let mut k = BigInt::from(2);
    let limit = BigInt::from(1_000_000);
    while &k * &k <= m && k <= limit {
        let kk = &k * &k;
        while num_traits::Zero::is_zero(&(&m % &kk)) {
            m /= &kk;
            f *= Rational::from_integer(k.clone());
        }
        k += 1;
    }
    (f, Rational::from_integer(m))
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "({})√({})", self.b, self.d)
        } else {
            let sign = if self.b.is_negative() { '-' } else { '+' };
            write!(f, "{} {} ({})√({})", self.a, sign, self.b.abs(), self.d)
        }
    }
}

impl Field for QuadExt {
    fn zero() -> Self {
        Self::rational(Rational::zero())
    }
    fn one() -> Self {
        Self::rational(<Rational as num_traits::One>::one())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self.checked_add(rhs).expect("mixed discriminants")
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self.checked_sub(rhs).expect("mixed discriminants")
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self.checked_mul(rhs).expect("mixed discriminants")
    }
    fn neg_ref(&self) -> Self {
        Self {
            a: -&self.a,
            b: -&self.b,
            d: self.d.clone(),
        }
    }
    fn inv(&self) -> Self {
        self.checked_inv().expect("inverse of zero")
    }
    fn from_rational(q: Rational) -> Self {
        Self::rational(q)
    }
    fn to_rational(&self) -> Option<Rational> {
        if self.b.is_zero() {
            Some(self.a.clone())
        } else {
            None
        }
    }
    fn sqrt(&self) -> Option<Self> {
        if self.b.is_zero() {
            return rational_sqrt(&self.a).map(Self::rational);
        }
        // (x + y√D)² = a + b√D  ⇔  x² + y²D = a, 2xy = b.
        // x² is a root of t² − a t + b²D/4 = 0.
        let disc = &self.a * &self.a - &self.b * &self.b * &self.d;
        let root = rational_sqrt(&disc)?;
        let two = Rational::from_integer(2.into());
        for x2 in [(&self.a + &root) / &two, (&self.a - &root) / &two] {
            if x2.is_zero() {
                continue;
            }
            if let Some(x) = rational_sqrt(&x2) {
                let y = &self.b / (&two * &x);
                let cand = Self::new(x, y, self.d.clone());
                if cand.mul_ref(&cand) == *self {
                    return Some(cand);
                }
            }
        }
        None
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(&self.a) + rational_to_f64(&self.b) * rational_to_f64(&self.d).sqrt()
    }
}

macro_rules! forward_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                self.add_ref(&rhs)
            }
        }
        impl<'a> Add<&'a $t> for &'a $t {
            type Output = $t;
            fn add(self, rhs: &$t) -> $t {
                self.add_ref(rhs)
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                self.sub_ref(&rhs)
            }
        }
        impl<'a> Sub<&'a $t> for &'a $t {
            type Output = $t;
            fn sub(self, rhs: &$t) -> $t {
                self.sub_ref(rhs)
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                self.mul_ref(&rhs)
            }
        }
        impl<'a> Mul<&'a $t> for &'a $t {
            type Output = $t;
            fn mul(self, rhs: &$t) -> $t {
                self.mul_ref(rhs)
            }
        }
        impl Div for $t {
            type Output = $t;
            fn div(self, rhs: $t) -> $t {
                self.div_ref(&rhs)
            }
        }
        impl<'a> Div<&'a $t> for &'a $t {
            type Output = $t;
            fn div(self, rhs: &$t) -> $t {
                self.div_ref(rhs)
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                self.neg_ref()
            }
        }
        impl<'a> Neg for &'a $t {
            type Output = $t;
            fn neg(self) -> $t {
                self.neg_ref()
            }
        }
    };
}

forward_ops!(QuadExt);
