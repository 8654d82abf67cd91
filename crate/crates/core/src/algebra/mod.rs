//! Exact arithmetic: rationals, real quadratic extensions, dense polynomials,
//! rational functions and partial fractions.

mod field;
pub mod linsolve;
mod partial;
mod poly;
mod quadext;
mod ratfunc;

pub use field::{as_integer, parse_rational, rat, rat_int, rational_sqrt, rational_to_f64, Field, Rational};
pub use partial::{descartes_bound, partial_fractions, PartialFractions};
pub use poly::Poly;
pub use quadext::QuadExt;
pub use ratfunc::RatFunc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomial division left a remainder")]
    InexactDivision,
    #[error("operands live in quadratic extensions with different discriminants")]
    MixedDiscriminants,
    #[error("pole of order {0} (expected at most 2)")]
    PoleOrderTooHigh(usize),
    #[error("denominator has a root outside the supplied pole list")]
    UnexpectedPole,
    #[error("pole listed twice")]
    RepeatedPole,
    #[error("rational function does not vanish at infinity")]
    PolynomialPart,
    #[error("sum of simple-pole residues is nonzero: infinity is irregular")]
    IrregularAtInfinity,
    #[error("zero polynomial")]
    ZeroPolynomial,
}
