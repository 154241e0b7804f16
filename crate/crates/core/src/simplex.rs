//! Points of the standard simplex.

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::config::TOL;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Nonnegative vector whose entries sum to one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent, bound(deserialize = "T: Scalar"))]
pub struct SimplexVector<T: Scalar>(Vec<T>);

/// Tolerance on `|sum - 1|` for dimension `n`: the configured absolute value,
/// widened to `n` ulps for low-precision scalars.
pub fn sum_tolerance<T: Scalar>(n: usize) -> T {
    T::lit(TOL.simplex_sum).max(T::from_count(n.max(1)) * T::epsilon())
}

impl<T: Scalar> SimplexVector<T> {
    /// Validates `x` as a simplex point.
    pub fn new(x: Vec<T>) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::NotInSimplex("empty vector".into()));
        }
        let tol = sum_tolerance::<T>(x.len());
        if let Some((i, v)) = x.iter().enumerate().find(|(_, v)| !(**v >= T::zero() && **v <= T::one() + tol)) {
            return Err(Error::NotInSimplex(format!("entry {i} = {v} outside [0,1]")));
        }
        let sum: T = x.iter().copied().sum();
        if (sum - T::one()).abs() > tol {
            return Err(Error::NotInSimplex(format!("entries sum to {sum}")));
        }
        Ok(Self(x))
    }

    /// Scales a nonnegative, nonzero vector onto the simplex.
    pub fn normalized(mut x: Vec<T>) -> Result<Self> {
        if x.iter().any(|v| !v.is_finite() || *v < T::zero()) {
            return Err(Error::NotInSimplex("negative or non-finite entry".into()));
        }
        let sum: T = x.iter().copied().sum();
        if sum <= T::zero() {
            return Err(Error::NotInSimplex("zero vector".into()));
        }
        for v in &mut x {
            *v = *v / sum;
        }
        Ok(Self(x))
    }

    pub fn vertex(n: usize, i: usize) -> Self {
        assert!(i < n, "vertex index {i} out of range for dimension {n}");
        let mut x = vec![T::zero(); n];
        x[i] = T::one();
        Self(x)
    }

    pub fn barycenter(n: usize) -> Self {
        assert!(n > 0);
        Self(vec![T::one() / T::from_count(n); n])
    }

    /// Mass `1/|support|` on each listed index.
    pub fn uniform_on(n: usize, support: &[usize]) -> Self {
        assert!(!support.is_empty(), "support must be nonempty");
        let w = T::one() / T::from_count(support.len());
        let mut x = vec![T::zero(); n];
        for &i in support {
            x[i] = w;
        }
        Self(x)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<T> {
        self.0
    }

    /// Indices of entries strictly above `tol`.
    pub fn support(&self, tol: T) -> Vec<usize> {
        support_of(&self.0, tol)
    }
}

pub(crate) fn support_of<T: Scalar>(x: &[T], tol: T) -> Vec<usize> {
    x.iter().enumerate().filter(|(_, v)| **v > tol).map(|(i, _)| i).collect()
}

/// Clamps tiny negative round-off to zero and rescales when the sum drifted by
/// more than the simplex tolerance.
pub(crate) fn repair<T: Scalar>(x: &mut [T]) {
    for v in x.iter_mut() {
        if *v < T::zero() {
            *v = T::zero();
        }
    }
    let sum: T = x.iter().copied().sum();
    if (sum - T::one()).abs() > T::lit(TOL.simplex_sum) && sum > T::zero() {
        for v in x.iter_mut() {
            *v = *v / sum;
        }
    }
}

/// Uniform (flat Dirichlet) sample from the simplex via normalized standard
/// exponentials.
pub fn sample_simplex<T: Scalar, R: Rng + ?Sized>(n: usize, rng: &mut R) -> SimplexVector<T> {
    assert!(n >= 1, "simplex dimension must be positive");
    if n == 1 {
        return SimplexVector(vec![T::one()]);
    }
    loop {
        let draws: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
        let sum: f64 = draws.iter().sum();
        if sum > 0.0 {
            let x = draws.into_iter().map(|d| T::lit(d / sum)).collect();
            return SimplexVector(x);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_off_simplex() {
        assert!(SimplexVector::new(vec![0.5, 0.6]).is_err());
        assert!(SimplexVector::new(vec![-0.1, 1.1]).is_err());
        assert!(SimplexVector::<f64>::new(vec![]).is_err());
        assert!(SimplexVector::new(vec![f64::NAN, 1.0]).is_err());
        assert!(SimplexVector::new(vec![0.25, 0.75]).is_ok());
    }

    #[test]
    fn one_dimensional_sample() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(sample_simplex::<f64, _>(1, &mut rng).as_slice(), &[1.0]);
    }

    #[test]
    fn sampling_is_deterministic() {
        let rng = ChaCha8Rng::seed_from_u64(11);
        let a = sample_simplex::<f64, _>(7, &mut rng.clone());
        let b = sample_simplex::<f64, _>(7, &mut rng.clone());
        assert_eq!(a, b);
        assert!(SimplexVector::new(a.into_vec()).is_ok());
    }

    #[test]
    fn flat_dirichlet_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut mean = [0.0f64; 3];
        let samples = 10_000;
        for _ in 0..samples {
            let x = sample_simplex::<f64, _>(3, &mut rng);
            for (m, v) in mean.iter_mut().zip(x.as_slice()) {
                *m += v / samples as f64;
            }
        }
        for m in mean {
            assert!((m - 1.0 / 3.0).abs() <= 0.01, "coordinate mean {m}");
        }
    }

    #[test]
    fn single_precision_points() {
        let x = SimplexVector::<f32>::barycenter(3);
        assert!(SimplexVector::new(x.into_vec()).is_ok());
    }
}
