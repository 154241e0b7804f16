//! The regularized Motzkin–Straus objective `f(x) = xᵀAx + Φ(x)`.
//!
//! The adjacency matrix is never materialized; products with `A` walk the
//! bitset rows of the graph.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Clique, Graph};
use crate::regularizer::Penalty;
use crate::scalar::{dot, Scalar};
use crate::simplex::SimplexVector;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Scalar"))]
pub struct ObjectiveEval<T: Scalar> {
    pub value: T,
    /// `2Ax + ∇Φ(x)`.
    pub gradient: Vec<T>,
    /// Frank–Wolfe gap, when computed by the optimizer.
    pub fw_gap: Option<T>,
}

fn check_dim(g: &Graph, len: usize) -> Result<()> {
    if g.n() != len {
        Err(Error::DimensionMismatch { expected: g.n(), got: len })
    } else {
        Ok(())
    }
}

/// `A x`.
pub fn adjacency_product<T: Scalar>(g: &Graph, x: &[T]) -> Vec<T> {
    (0..g.n()).map(|i| g.neighbors(i).fold(T::zero(), |acc, j| acc + x[j])).collect()
}

/// `xᵀ A y`.
pub fn bilinear<T: Scalar>(g: &Graph, x: &[T], y: &[T]) -> T {
    dot(x, &adjacency_product(g, y))
}

/// Value and gradient at an arbitrary point of the ambient space.
pub fn evaluate<T: Scalar, P: Penalty<T> + ?Sized>(g: &Graph, reg: &P, x: &[T]) -> Result<ObjectiveEval<T>> {
    check_dim(g, x.len())?;
    let ax = adjacency_product(g, x);
    let mut gradient = reg.gradient(x);
    for (gi, &a) in gradient.iter_mut().zip(&ax) {
        *gi = *gi + a + a;
    }
    Ok(ObjectiveEval { value: dot(x, &ax) + reg.value(x), gradient, fw_gap: None })
}

/// `f` and `∇f` at a simplex point.
pub fn f_eval<T: Scalar, P: Penalty<T> + ?Sized>(
    g: &Graph,
    reg: &P,
    x: &SimplexVector<T>,
) -> Result<ObjectiveEval<T>> {
    evaluate(g, reg, x.as_slice())
}

/// Objective value only.
pub fn value<T: Scalar, P: Penalty<T> + ?Sized>(g: &Graph, reg: &P, x: &[T]) -> Result<T> {
    check_dim(g, x.len())?;
    Ok(bilinear(g, x, x) + reg.value(x))
}

/// `dᵀ (2A + ∇²Φ(x)) d`.
pub fn hessian_quadform<T: Scalar, P: Penalty<T> + ?Sized>(g: &Graph, reg: &P, x: &[T], d: &[T]) -> Result<T> {
    check_dim(g, x.len())?;
    check_dim(g, d.len())?;
    let q = bilinear(g, d, d);
    Ok(q + q + reg.hessian_quadform(x, d))
}

/// `f(x(C)) = 1 − 1/|C| + Φ(x(C))`, using `zᵀAz = (1ᵀz)² − zᵀz` for vectors
/// supported on a clique.
pub fn clique_objective<T: Scalar, P: Penalty<T> + ?Sized>(g: &Graph, reg: &P, c: &Clique) -> Result<T> {
    if let Some((i, j)) = g.first_non_adjacent_pair(c.vertices())? {
        return Err(Error::NotAClique(i, j));
    }
    let k = T::from_count(c.size());
    let x = g.characteristic_vector::<T>(c);
    Ok(T::one() - T::one() / k + reg.value(x.as_slice()))
}

/// `(1ᵀz)² − zᵀz`.
pub fn clique_support_form<T: Scalar>(z: &[T]) -> T {
    let s: T = z.iter().copied().sum();
    s * s - dot(z, z)
}
