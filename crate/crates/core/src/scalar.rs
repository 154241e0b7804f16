//! Floating-point abstraction shared by the numeric modules.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real scalar the objective, regularizers and optimizer are generic over.
///
/// Implemented for `f32` and `f64`. Tolerances are stored as `f64` and
/// converted with [`Scalar::lit`], so single precision runs should pass
/// looser tolerances.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Converts an `f64` literal or tolerance into `Self`.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable in scalar type")
    }

    /// Converts a count into `Self`.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Sums values in a canonical order (sorted by `total_cmp` on `f64`), so the
/// result depends only on the multiset of terms.
pub(crate) fn canonical_sum<T: Scalar>(mut terms: Vec<T>) -> T {
    terms.sort_by(|a, b| a.as_f64().total_cmp(&b.as_f64()));
    terms.into_iter().fold(T::zero(), |acc, t| acc + t)
}

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}
