//! Scalar abstractions.
//!
//! Everything that only needs ring arithmetic (contractions, squared norms,
//! diagram sums) is written against [`Scalar`], so the same code runs on
//! `f32`, `f64` and exact `BigRational`. Anything that needs square roots,
//! logarithms or comparisons with tolerances asks for [`Real`].

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, Signed};

/// Ring-like scalar usable as a kernel coefficient.
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + Debug + Display + FromStr + FromPrimitive + Send + Sync + 'static
{
    /// Lossless-as-possible conversion from a count.
    fn from_count(n: u64) -> Self {
        Self::from_u64(n).expect("count representable in scalar type")
    }

    /// Approximate value as `f64`, for reporting.
    fn to_f64_lossy(&self) -> f64;
}

impl Scalar for f32 {
    fn to_f64_lossy(&self) -> f64 {
        f64::from(*self)
    }
}

impl Scalar for f64 {
    fn to_f64_lossy(&self) -> f64 {
        *self
    }
}

impl Scalar for BigRational {
    fn to_f64_lossy(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn from_count(n: u64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

/// Floating-point scalar.
pub trait Real: Scalar + Float {}

impl<T: Scalar + Float> Real for T {}

/// Sum in a fixed pairwise-tree order, so the result does not depend on how
/// the terms were produced (sequentially or by a thread pool).
pub fn pairwise_sum<T: Scalar>(terms: &[T]) -> T {
    match terms.len() {
        0 => T::zero(),
        1 => terms[0].clone(),
        n => {
            let (lo, hi) = terms.split_at(n / 2);
            pairwise_sum(lo) + pairwise_sum(hi)
        }
    }
}
