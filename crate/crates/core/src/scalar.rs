//! Coefficient rings for graded elements.
//!
//! The graded algebra is generic over its coefficient type. Symbolic
//! coefficients ([`Expr`](crate::Expr)) carry the smooth functions of a
//! chart; exact rationals and IEEE floats are used for constant-coefficient
//! algebra and for elements evaluated at a point.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, One, ToPrimitive, Zero};

/// Exact arbitrary-precision rational.
pub type Rational = BigRational;

/// Real scalar types that expressions can be evaluated in.
pub trait Real: Float + FromPrimitive + Debug + Send + Sync + 'static {}

impl Real for f32 {}
impl Real for f64 {}

/// A commutative ring of coefficients, graded trivially (degree zero).
pub trait Coefficient:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
{
    fn from_integer(k: i64) -> Self;

    fn from_rational(q: &Rational) -> Self;

    /// Sum many values at once. Symbolic coefficients override this to
    /// normalise a whole sum in one pass.
    fn sum_all(items: Vec<Self>) -> Self {
        items.into_iter().fold(Self::zero(), |acc, x| acc + x)
    }
}

/// Coefficients that are functions of the chart coordinates.
pub trait Differentiable: Coefficient {
    /// Partial derivative with respect to chart coordinate `coord`.
    fn partial(&self, coord: usize) -> Self;
}

impl Coefficient for Rational {
    fn from_integer(k: i64) -> Self {
        Rational::from_integer(k.into())
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
}

impl Differentiable for Rational {
    fn partial(&self, _coord: usize) -> Self {
        Rational::zero()
    }
}

macro_rules! float_coefficient {
    ($t:ty) => {
        impl Coefficient for $t {
            fn from_integer(k: i64) -> Self {
                k as $t
            }

            fn from_rational(q: &Rational) -> Self {
                rational_to_real(q)
            }
        }

        impl Differentiable for $t {
            fn partial(&self, _coord: usize) -> Self {
                0.0
            }
        }
    };
}

float_coefficient!(f32);
float_coefficient!(f64);

/// Nearest real value of an exact rational.
pub fn rational_to_real<F: Real>(q: &Rational) -> F {
    if q.is_integer() {
        if let Some(k) = q.numer().to_i64() {
            return F::from_i64(k).expect("integer fits in float");
        }
    }
    F::from_f64(q.to_f64().unwrap_or(f64::NAN)).unwrap_or_else(F::nan)
}

/// Exact rational value of a finite float.
pub fn real_to_rational(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(n.into())
}
