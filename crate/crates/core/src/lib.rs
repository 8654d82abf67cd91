//! Geodesic flow on spherical-harmonic surfaces and exact Kovacic analysis of
//! the equatorial normal variational equation.
//!
//! The numerical layers ([`surface`], [`geodesic`], [`poincare`]) are generic
//! over a [`Real`] scalar; the symbolic layers ([`nve`], [`kovacic`]) work over
//! exact fields from [`algebra`]. Aliases at the crate root fix the common
//! choices.

pub mod algebra;
pub mod geodesic;
pub mod kovacic;
pub mod nve;
pub mod poincare;
pub mod surface;

/// Floating-point scalar for the numerical modules: `f32` or `f64`.
pub trait Real:
    num_traits::Float
    + num_traits::FloatConst
    + num_traits::FromPrimitive
    + std::fmt::Debug
    + std::fmt::Display
    + std::fmt::LowerExp
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from a double constant.
    fn c(v: f64) -> Self {
        Self::from_f64(v).expect("representable constant")
    }
}
impl Real for f32 {}
impl Real for f64 {}

pub use algebra::{Field, QuadExt, Rational};

/// Polynomial with rational coefficients.
pub type QPoly = algebra::Poly<Rational>;
/// Polynomial over a real quadratic extension of the rationals.
pub type KPoly = algebra::Poly<QuadExt>;
/// Rational function over the rationals.
pub type QRatFunc = algebra::RatFunc<Rational>;
/// Rational function over a real quadratic extension.
pub type KRatFunc = algebra::RatFunc<QuadExt>;
/// Double-precision surface.
pub type Surface = surface::PolarSurface<f64>;
/// Standard-form equation with coefficients in ℚ(√D), as produced by the
/// equatorial NVE.
pub type KFuchsianOde = kovacic::FuchsianOde<QuadExt>;
