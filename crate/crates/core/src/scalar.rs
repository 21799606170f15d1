//! Numeric scalar abstraction for model coefficients.

use std::fmt::{Debug, Display};

use num_traits::{FromPrimitive, Num, Signed};

/// Coefficient type for QUBO and Ising models.
///
/// Anything closed under the field operations with an exact zero works:
/// `f32`, `f64`, and `num_rational::Ratio<i64>` for exact arithmetic.
pub trait Scalar:
    Num + Signed + Copy + PartialOrd + FromPrimitive + Debug + Display + Send + Sync + 'static
{
    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }
}

impl<T> Scalar for T where
    T: Num + Signed + Copy + PartialOrd + FromPrimitive + Debug + Display + Send + Sync + 'static
{
}
