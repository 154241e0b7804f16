//! Separable regularizers added to the Motzkin–Straus objective, and sampled
//! verification of the convexity (C1), curvature (C2) and permutation
//! symmetry (C3) conditions on the simplex.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::config::TOL;
use crate::error::{Error, Result};
use crate::scalar::{canonical_sum, Scalar};
use crate::simplex::sample_simplex;

/// Fraction of the open parameter bound used when a weight is left on `auto`.
pub const AUTO_FRACTION: f64 = 0.99;

/// Exponent used by the p-norm regularizer unless overridden.
pub const DEFAULT_P: f64 = 3.0;
pub const DEFAULT_EPSILON: f64 = 1e-9;
pub const DEFAULT_BETA: f64 = 5.0;

/// Smooth penalty `Φ` evaluated on (a neighbourhood of) the simplex.
///
/// The built-ins are separable, so the interface is value, gradient and
/// Hessian diagonal. Penalties with coupled second derivatives override
/// [`Penalty::hessian_quadform`] and report `hessian_is_diagonal() == false`;
/// everything in the crate that needs curvature goes through the quadratic
/// form.
pub trait Penalty<T: Scalar>: Sync {
    fn value(&self, x: &[T]) -> T;
    fn gradient_into(&self, x: &[T], out: &mut [T]);
    fn hessian_diag_into(&self, x: &[T], out: &mut [T]);

    /// `dᵀ ∇²Φ(x) d`.
    fn hessian_quadform(&self, x: &[T], d: &[T]) -> T {
        let mut h = vec![T::zero(); x.len()];
        self.hessian_diag_into(x, &mut h);
        h.iter().zip(d).fold(T::zero(), |acc, (&hi, &di)| acc + hi * di * di)
    }

    fn hessian_is_diagonal(&self) -> bool {
        true
    }

    /// Whether `Φ` is a polynomial of degree at most two, making the
    /// objective exactly quadratic along any line.
    fn is_quadratic(&self) -> bool;

    /// Whether `∇²Φ ≻ 0` on the simplex.
    fn is_strictly_convex(&self) -> bool;

    fn gradient(&self, x: &[T]) -> Vec<T> {
        let mut g = vec![T::zero(); x.len()];
        self.gradient_into(x, &mut g);
        g
    }

    fn hessian_diag(&self, x: &[T]) -> Vec<T> {
        let mut h = vec![T::zero(); x.len()];
        self.hessian_diag_into(x, &mut h);
        h
    }
}

/// Serializable regularizer choice. `alpha1`/`alpha2` of `None` mean
/// [`AUTO_FRACTION`] times the open upper bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RegularizerSpec {
    None,
    /// `½‖x‖²`.
    Bomze,
    /// `α₁ Σ (xᵢ + ε)^p`.
    Pnorm {
        p: f64,
        epsilon: f64,
        #[serde(default)]
        alpha1: Option<f64>,
    },
    /// `α₂ Σ (exp(−β xᵢ) − 1)`.
    Exp {
        beta: f64,
        #[serde(default)]
        alpha2: Option<f64>,
    },
}

impl RegularizerSpec {
    pub fn pnorm_default() -> Self {
        RegularizerSpec::Pnorm { p: DEFAULT_P, epsilon: DEFAULT_EPSILON, alpha1: None }
    }

    pub fn exp_default() -> Self {
        RegularizerSpec::Exp { beta: DEFAULT_BETA, alpha2: None }
    }

    /// The three penalties with `Φ ≻ 0` at their default parameters.
    pub fn strictly_convex_builtins() -> [RegularizerSpec; 3] {
        [RegularizerSpec::Bomze, Self::pnorm_default(), Self::exp_default()]
    }

    /// Short name used in reports: `none`, `bomze`, `pnorm`, `exp`.
    pub fn kind(&self) -> &'static str {
        match self {
            RegularizerSpec::None => "none",
            RegularizerSpec::Bomze => "bomze",
            RegularizerSpec::Pnorm { .. } => "pnorm",
            RegularizerSpec::Exp { .. } => "exp",
        }
    }

    /// Checks parameter domains and bounds, filling in `auto` weights.
    pub fn resolved(&self) -> Result<RegularizerSpec> {
        match *self {
            RegularizerSpec::None | RegularizerSpec::Bomze => Ok(*self),
            RegularizerSpec::Pnorm { p, epsilon, alpha1 } => {
                let bound = max_alpha1(p, epsilon)?;
                let alpha = alpha1.unwrap_or(AUTO_FRACTION * bound);
                if !(alpha > 0.0 && alpha < bound) {
                    return Err(Error::InvalidParameter(format!(
                        "alpha1 = {alpha} violates 0 < alpha1 < 2/(p(p-1)(1+epsilon)^(p-2)) = {bound}"
                    )));
                }
                Ok(RegularizerSpec::Pnorm { p, epsilon, alpha1: Some(alpha) })
            }
            RegularizerSpec::Exp { beta, alpha2 } => {
                let bound = max_alpha2(beta)?;
                let alpha = alpha2.unwrap_or(AUTO_FRACTION * bound);
                if !(alpha > 0.0 && alpha < bound) {
                    return Err(Error::InvalidParameter(format!(
                        "alpha2 = {alpha} violates 0 < alpha2 < 2/beta^2 = {bound}"
                    )));
                }
                Ok(RegularizerSpec::Exp { beta, alpha2: Some(alpha) })
            }
        }
    }

    /// Validated penalty in scalar type `T`.
    pub fn build<T: Scalar>(&self) -> Result<Regularizer<T>> {
        Ok(match self.resolved()? {
            RegularizerSpec::None => Regularizer::None,
            RegularizerSpec::Bomze => Regularizer::Bomze,
            RegularizerSpec::Pnorm { p, epsilon, alpha1 } => Regularizer::Pnorm {
                alpha: T::lit(alpha1.expect("resolved")),
                p: T::lit(p),
                epsilon: T::lit(epsilon),
            },
            RegularizerSpec::Exp { beta, alpha2 } => {
                Regularizer::Exp { alpha: T::lit(alpha2.expect("resolved")), beta: T::lit(beta) }
            }
        })
    }

    /// Builds without the bound check on the weight. Used to exercise
    /// condition verification on deliberately invalid parameters.
    pub fn build_unchecked<T: Scalar>(&self) -> Regularizer<T> {
        match *self {
            RegularizerSpec::None => Regularizer::None,
            RegularizerSpec::Bomze => Regularizer::Bomze,
            RegularizerSpec::Pnorm { p, epsilon, alpha1 } => Regularizer::Pnorm {
                alpha: T::lit(alpha1.unwrap_or_else(|| {
                    AUTO_FRACTION * 2.0 / (p * (p - 1.0) * (1.0 + epsilon).powf(p - 2.0))
                })),
                p: T::lit(p),
                epsilon: T::lit(epsilon),
            },
            RegularizerSpec::Exp { beta, alpha2 } => Regularizer::Exp {
                alpha: T::lit(alpha2.unwrap_or(AUTO_FRACTION * 2.0 / (beta * beta))),
                beta: T::lit(beta),
            },
        }
    }
}

impl fmt::Display for RegularizerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegularizerSpec::None | RegularizerSpec::Bomze => f.write_str(self.kind()),
            RegularizerSpec::Pnorm { p, epsilon, alpha1 } => match alpha1 {
                Some(a) => write!(f, "pnorm(p={p}, epsilon={epsilon}, alpha1={a})"),
                None => write!(f, "pnorm(p={p}, epsilon={epsilon}, alpha1=auto)"),
            },
            RegularizerSpec::Exp { beta, alpha2 } => match alpha2 {
                Some(a) => write!(f, "exp(beta={beta}, alpha2={a})"),
                None => write!(f, "exp(beta={beta}, alpha2=auto)"),
            },
        }
    }
}

/// Supremum of admissible `α₁`: `2 / (p (p−1) (1+ε)^{p−2})`.
pub fn max_alpha1(p: f64, epsilon: f64) -> Result<f64> {
    if !(p > 2.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("p = {p} must satisfy p > 2")));
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidParameter(format!("epsilon = {epsilon} must satisfy epsilon > 0")));
    }
    Ok(2.0 / (p * (p - 1.0) * (1.0 + epsilon).powf(p - 2.0)))
}

/// Supremum of admissible `α₂`: `2 / β²`.
pub fn max_alpha2(beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter(format!("beta = {beta} must satisfy beta > 0")));
    }
    Ok(2.0 / (beta * beta))
}

/// A built-in penalty with concrete parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Regularizer<T: Scalar> {
    None,
    Bomze,
    Pnorm { alpha: T, p: T, epsilon: T },
    Exp { alpha: T, beta: T },
}

impl<T: Scalar> Regularizer<T> {
    /// Parameters as a serializable spec (weights explicit).
    pub fn spec(&self) -> RegularizerSpec {
        match *self {
            Regularizer::None => RegularizerSpec::None,
            Regularizer::Bomze => RegularizerSpec::Bomze,
            Regularizer::Pnorm { alpha, p, epsilon } => RegularizerSpec::Pnorm {
                p: p.as_f64(),
                epsilon: epsilon.as_f64(),
                alpha1: Some(alpha.as_f64()),
            },
            Regularizer::Exp { alpha, beta } => {
                RegularizerSpec::Exp { beta: beta.as_f64(), alpha2: Some(alpha.as_f64()) }
            }
        }
    }

    fn term(&self, xi: T) -> T {
        match *self {
            Regularizer::None => T::zero(),
            Regularizer::Bomze => T::lit(0.5) * xi * xi,
            Regularizer::Pnorm { alpha, p, epsilon } => alpha * (xi + epsilon).powf(p),
            Regularizer::Exp { alpha, beta } => alpha * ((-beta * xi).exp() - T::one()),
        }
    }

    fn first(&self, xi: T) -> T {
        match *self {
            Regularizer::None => T::zero(),
            Regularizer::Bomze => xi,
            Regularizer::Pnorm { alpha, p, epsilon } => alpha * p * (xi + epsilon).powf(p - T::one()),
            Regularizer::Exp { alpha, beta } => -alpha * beta * (-beta * xi).exp(),
        }
    }

    fn second(&self, xi: T) -> T {
        match *self {
            Regularizer::None => T::zero(),
            Regularizer::Bomze => T::one(),
            Regularizer::Pnorm { alpha, p, epsilon } => {
                alpha * p * (p - T::one()) * (xi + epsilon).powf(p - T::lit(2.0))
            }
            Regularizer::Exp { alpha, beta } => alpha * beta * beta * (-beta * xi).exp(),
        }
    }
}

impl<T: Scalar> Penalty<T> for Regularizer<T> {
    fn value(&self, x: &[T]) -> T {
        if matches!(self, Regularizer::None) {
            return T::zero();
        }
        canonical_sum(x.iter().map(|&xi| self.term(xi)).collect())
    }

    fn gradient_into(&self, x: &[T], out: &mut [T]) {
        for (o, &xi) in out.iter_mut().zip(x) {
            *o = self.first(xi);
        }
    }

    fn hessian_diag_into(&self, x: &[T], out: &mut [T]) {
        for (o, &xi) in out.iter_mut().zip(x) {
            *o = self.second(xi);
        }
    }

    fn hessian_quadform(&self, x: &[T], d: &[T]) -> T {
        match self {
            Regularizer::None => T::zero(),
            Regularizer::Bomze => d.iter().fold(T::zero(), |acc, &di| acc + di * di),
            _ => x
                .iter()
                .zip(d)
                .filter(|(_, &di)| di != T::zero())
                .fold(T::zero(), |acc, (&xi, &di)| acc + self.second(xi) * di * di),
        }
    }

    fn is_quadratic(&self) -> bool {
        matches!(self, Regularizer::None | Regularizer::Bomze)
    }

    fn is_strictly_convex(&self) -> bool {
        !matches!(self, Regularizer::None)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionFlags {
    pub c1: bool,
    pub c2: bool,
    pub c3: bool,
}

impl ConditionFlags {
    pub fn all(&self) -> bool {
        self.c1 && self.c2 && self.c3
    }
}

/// Sampled evidence for (C1) `∇²Φ ⪰ 0`, (C2) `‖∇²Φ‖₂ < 2` and (C3) permutation
/// invariance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub regularizer: RegularizerSpec,
    pub dimension: usize,
    pub c1_min_hessian_entry: f64,
    pub c2_max_spectral_norm: f64,
    pub c3_max_permutation_deviation: f64,
    pub samples: usize,
    pub passed: ConditionFlags,
}

/// Samples `samples` simplex points of dimension `n` and records the extreme
/// values of the three conditions.
///
/// Points cycle through three families: simplex vertices, uniform samples and
/// sparse (Dirichlet 0.05) samples. The curvature bound of the built-ins is
/// attained at the vertices, which uniform sampling in high dimension never
/// approaches. The spectral norm is read off the Hessian diagonal, so only
/// diagonal penalties are accepted.
pub fn verify_conditions<T: Scalar, P: Penalty<T> + ?Sized>(
    penalty: &P,
    spec: RegularizerSpec,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<ConditionReport> {
    if samples == 0 || n == 0 {
        return Err(Error::InvalidParameter("samples and dimension must be positive".into()));
    }
    if !penalty.hessian_is_diagonal() {
        return Err(Error::Unsupported("condition sampling needs a diagonal Hessian".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sparse = Gamma::new(0.05, 1.0).expect("valid gamma parameters");
    let mut min_entry = f64::INFINITY;
    let mut max_norm = f64::NEG_INFINITY;
    let mut max_dev = 0.0f64;
    let mut c3_ok = true;
    let mut h = vec![T::zero(); n];
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..samples {
        let x: Vec<T> = match k % 3 {
            0 => {
                let mut v = vec![T::zero(); n];
                v[rng.random_range(0..n)] = T::one();
                v
            }
            1 => sample_simplex::<T, _>(n, &mut rng).into_vec(),
            _ => sparse_sample(n, &sparse, &mut rng),
        };
        penalty.hessian_diag_into(&x, &mut h);
        for &hi in &h {
            let hi = hi.as_f64();
            min_entry = min_entry.min(hi);
            max_norm = max_norm.max(hi.abs());
        }
        perm.shuffle(&mut rng);
        let permuted: Vec<T> = perm.iter().map(|&i| x[i]).collect();
        let a = penalty.value(&x).as_f64();
        let b = penalty.value(&permuted).as_f64();
        let dev = (a - b).abs();
        max_dev = max_dev.max(dev);
        c3_ok &= dev <= TOL.identity * a.abs().max(1.0);
    }
    Ok(ConditionReport {
        regularizer: spec,
        dimension: n,
        c1_min_hessian_entry: min_entry,
        c2_max_spectral_norm: max_norm,
        c3_max_permutation_deviation: max_dev,
        samples,
        passed: ConditionFlags { c1: min_entry >= 0.0, c2: max_norm < 2.0, c3: c3_ok },
    })
}

fn sparse_sample<T: Scalar, R: Rng + ?Sized>(n: usize, gamma: &Gamma<f64>, rng: &mut R) -> Vec<T> {
    loop {
        let draws: Vec<f64> = (0..n).map(|_| gamma.sample(rng)).collect();
        let sum: f64 = draws.iter().sum();
        if sum > 0.0 && sum.is_finite() {
            return draws.into_iter().map(|d| T::lit(d / sum)).collect();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp5() -> Regularizer<f64> {
        RegularizerSpec::exp_default().build().unwrap()
    }

    #[test]
    fn values_of_closed_forms() {
        let b: Regularizer<f64> = RegularizerSpec::Bomze.build().unwrap();
        assert_eq!(b.value(&[0.5, 0.5, 0.0, 0.0, 0.0]), 0.25);

        let e = Regularizer::Exp { alpha: 0.07, beta: 5.0 };
        assert_eq!(e.value(&[1.0]), 0.07 * ((-5.0f64).exp() - 1.0));

        // epsilon = 0 is outside the admissible domain; only used here to
        // hand-check the closed form
        let p = Regularizer::Pnorm { alpha: 1.0, p: 3.0, epsilon: 0.0 };
        assert_eq!(p.value(&[1.0, 0.0]), 1.0);

        assert_eq!(Regularizer::<f64>::None.value(&[0.3, 0.7]), 0.0);
    }

    #[test]
    fn hessian_diagonals() {
        let b: Regularizer<f64> = Regularizer::Bomze;
        assert_eq!(b.hessian_diag(&[0.2, 0.3, 0.5]), vec![1.0; 3]);
        let e = exp5();
        let alpha = 0.99 * 0.08;
        for hi in e.hessian_diag(&[0.0; 4]) {
            assert!((hi - alpha * 25.0).abs() < 1e-15);
        }
    }

    #[test]
    fn parameter_bounds() {
        assert!((max_alpha1(3.0, 1e-300).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(max_alpha2(5.0).unwrap(), 0.08);
        assert_eq!(max_alpha2(1.0).unwrap(), 2.0);
        assert!(max_alpha1(2.0, 0.1).is_err());
        assert!(max_alpha1(3.0, 0.0).is_err());
        assert!(max_alpha2(0.0).is_err());
        assert!(max_alpha2(f64::NAN).is_err());
    }

    #[test]
    fn bound_violation_names_the_bound() {
        let spec = RegularizerSpec::Exp { beta: 5.0, alpha2: Some(0.09) };
        let err = spec.build::<f64>().unwrap_err().to_string();
        assert!(err.contains("2/beta^2"), "{err}");
        let spec = RegularizerSpec::Pnorm { p: 3.0, epsilon: 1e-9, alpha1: Some(0.5) };
        assert!(spec.build::<f64>().is_err());
        let spec = RegularizerSpec::Exp { beta: 5.0, alpha2: Some(-0.01) };
        assert!(spec.build::<f64>().is_err());
    }

    #[test]
    fn auto_weights_are_resolved() {
        match RegularizerSpec::exp_default().resolved().unwrap() {
            RegularizerSpec::Exp { alpha2: Some(a), .. } => assert!((a - 0.0792).abs() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
        let r: Regularizer<f64> = RegularizerSpec::pnorm_default().build().unwrap();
        assert_eq!(r.spec().resolved().unwrap(), r.spec());
    }

    #[test]
    fn spec_json_schema() {
        let spec: RegularizerSpec =
            serde_json::from_str(r#"{"kind":"pnorm","p":3,"epsilon":1e-9,"alpha1":null}"#).unwrap();
        assert_eq!(spec, RegularizerSpec::pnorm_default());
        let spec: RegularizerSpec = serde_json::from_str(r#"{"kind":"exp","beta":5}"#).unwrap();
        assert_eq!(spec, RegularizerSpec::exp_default());
        let spec: RegularizerSpec = serde_json::from_str(r#"{"kind":"bomze"}"#).unwrap();
        assert_eq!(spec, RegularizerSpec::Bomze);
        assert_eq!(serde_json::to_string(&RegularizerSpec::None).unwrap(), r#"{"kind":"none"}"#);
    }

    #[test]
    fn bomze_conditions() {
        let b: Regularizer<f64> = Regularizer::Bomze;
        let r = verify_conditions(&b, RegularizerSpec::Bomze, 20, 60, 1).unwrap();
        assert_eq!(r.c2_max_spectral_norm, 1.0);
        assert_eq!(r.c1_min_hessian_entry, 1.0);
        assert!(r.passed.all());
    }

    #[test]
    fn exp_conditions_at_auto_weight() {
        let r = verify_conditions(&exp5(), RegularizerSpec::exp_default(), 30, 90, 2).unwrap();
        assert!(r.passed.all());
        assert!(r.c2_max_spectral_norm <= 1.98 + 1e-12);
        assert_eq!(r.c3_max_permutation_deviation, 0.0);
    }

    #[test]
    fn oversized_pnorm_weight_fails_curvature() {
        let bound = max_alpha1(3.0, 1e-9).unwrap();
        let spec = RegularizerSpec::Pnorm { p: 3.0, epsilon: 1e-9, alpha1: Some(1.5 * bound) };
        let reg = spec.build_unchecked::<f64>();
        // at a vertex the diagonal is 1.5 * 2 * (1 + eps)
        assert!(reg.hessian_diag(&[1.0, 0.0])[0] > 2.0);
        let r = verify_conditions(&reg, spec, 10, 30, 3).unwrap();
        assert!(!r.passed.c2);
        assert!(r.passed.c1 && r.passed.c3);
    }

    #[test]
    fn single_precision_penalty() {
        let r: Regularizer<f32> = RegularizerSpec::exp_default().build().unwrap();
        let g = r.gradient(&[0.5, 0.5]);
        assert!((g[0] - g[1]).abs() == 0.0);
    }
}
