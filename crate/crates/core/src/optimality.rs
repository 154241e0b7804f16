//! Optimality certificates on the simplex.
//!
//! First-order feasible directions at `x ∈ Δ` are the nonnegative span of the
//! edge generators `eᵢ − eⱼ` with `xⱼ > 0`, so first-order stationarity reduces
//! to a sign check on `∇f(x)ᵢ − ∇f(x)ⱼ` over those pairs. Second-order
//! certification is done at characteristic vectors, where the critical cone is
//! generated by the tight generators.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Serialize, Serializer};

use crate::config::TOL;
use crate::error::{Error, Result};
use crate::graph::{Clique, Graph};
use crate::objective::{self, adjacency_product};
use crate::oracle::{enumerate_maximal_cliques, ENUMERATION_LIMIT};
use crate::regularizer::Penalty;
use crate::scalar::{dot, Scalar};
use crate::simplex::{support_of, SimplexVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SecondOrder {
    Passed,
    Failed,
    NotChecked,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptimalityReport<T: Scalar> {
    pub first_order_ok: bool,
    /// `max ∇f(x)(eᵢ − eⱼ)` over feasible generators.
    pub worst_generator_slope: T,
    #[serde(serialize_with = "one_based_pair")]
    pub worst_generator: Option<(usize, usize)>,
    /// Generators with `|slope| <= tol`, as `(i, j)` for `eᵢ − eⱼ`.
    #[serde(serialize_with = "one_based_pairs")]
    pub tight_generators: Vec<(usize, usize)>,
    pub second_order: SecondOrder,
    /// Largest eigenvalue of the Hessian restricted to the clique face, when
    /// the projected check ran.
    pub max_face_eigenvalue: Option<f64>,
    pub ascent_direction: Option<Vec<T>>,
}

fn one_based_pair<S: Serializer>(p: &Option<(usize, usize)>, s: S) -> std::result::Result<S::Ok, S::Error> {
    p.map(|(i, j)| (i + 1, j + 1)).serialize(s)
}

fn one_based_pairs<S: Serializer>(p: &[(usize, usize)], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(p.iter().map(|(i, j)| (i + 1, j + 1)))
}

fn generator<T: Scalar>(n: usize, i: usize, j: usize) -> Vec<T> {
    let mut d = vec![T::zero(); n];
    d[i] = T::one();
    d[j] = -T::one();
    d
}

/// Checks `∇f(x)(eᵢ − eⱼ) <= tol` for every ordered pair with `xⱼ > 0`.
pub fn first_order_check<T: Scalar, P: Penalty<T> + ?Sized>(
    g: &Graph,
    reg: &P,
    x: &SimplexVector<T>,
    tol: T,
) -> Result<OptimalityReport<T>> {
    let grad = objective::f_eval(g, reg, x)?.gradient;
    Ok(first_order_from_gradient(&grad, x.as_slice(), tol))
}

fn first_order_from_gradient<T: Scalar>(grad: &[T], x: &[T], tol: T) -> OptimalityReport<T> {
    let n = grad.len();
    let mut worst = T::neg_infinity();
    let mut worst_pair = None;
    let mut tight = Vec::new();
    for j in (0..n).filter(|&j| x[j] > T::zero()) {
        for i in (0..n).filter(|&i| i != j) {
            let slope = grad[i] - grad[j];
            if slope > worst {
                worst = slope;
                worst_pair = Some((i, j));
            }
            if slope.abs() <= tol {
                tight.push((i, j));
            }
        }
    }
    if worst_pair.is_none() {
        // n == 1: no feasible direction
        worst = T::zero();
    }
    let ok = worst <= tol;
    OptimalityReport {
        first_order_ok: ok,
        worst_generator_slope: worst,
        worst_generator: worst_pair,
        tight_generators: tight,
        second_order: SecondOrder::NotChecked,
        max_face_eigenvalue: None,
        ascent_direction: match (ok, worst_pair) {
            (false, Some((i, j))) => Some(generator(n, i, j)),
            _ => None,
        },
    }
}

/// Certifies `x(C)` as a strict local maximizer for a strictly convex
/// penalty: first-order check, every tight generator must point inside `C`,
/// and `2A + ∇²Φ` must be negative definite on `{d : supp d ⊆ C, 1ᵀd = 0}`.
pub fn certify_characteristic_vector<T: Scalar, P: Penalty<T> + ?Sized>(
    g: &Graph,
    reg: &P,
    c: &Clique,
    tol: T,
) -> Result<OptimalityReport<T>> {
    if !reg.is_strictly_convex() {
        return Err(Error::Unsupported(
            "certification needs a strictly convex regularizer; use disprove_local_max for none".into(),
        ));
    }
    certify_clique_point(g, reg, c, tol)
}

/// Same checks as [`certify_characteristic_vector`] without the strict
/// convexity gate. Without strict convexity a tight generator leaving `C`
/// leaves the second-order status unresolved.
fn certify_clique_point<T: Scalar, P: Penalty<T> + ?Sized>(
    g: &Graph,
    reg: &P,
    c: &Clique,
    tol: T,
) -> Result<OptimalityReport<T>> {
    let x = g.characteristic_vector::<T>(c);
    let mut report = first_order_check(g, reg, &x, tol)?;
    if !report.first_order_ok {
        report.second_order = SecondOrder::Failed;
        return Ok(report);
    }
    let leaves_face = report.tight_generators.iter().any(|&(i, _)| !c.contains(i));
    let (max_eig, direction) = face_curvature(g, reg, x.as_slice(), c.vertices());
    report.max_face_eigenvalue = Some(max_eig);
    if max_eig >= -TOL.curvature {
        report.second_order = SecondOrder::Failed;
        report.ascent_direction = direction;
    } else if leaves_face {
        report.second_order = if reg.is_strictly_convex() { SecondOrder::Failed } else { SecondOrder::NotChecked };
    } else {
        report.second_order = SecondOrder::Passed;
    }
    Ok(report)
}

/// Largest eigenvalue of `Qᵀ (2A + ∇²Φ(x)) Q` where the columns of `Q` are an
/// orthonormal basis of `{d : supp d ⊆ face, 1ᵀd = 0}`, together with the
/// corresponding direction in the ambient space.
fn face_curvature<T: Scalar, P: Penalty<T> + ?Sized>(
    g: &Graph,
    reg: &P,
    x: &[T],
    face: &[usize],
) -> (f64, Option<Vec<T>>) {
    let k = face.len();
    if k < 2 {
        return (f64::NEG_INFINITY, None);
    }
    let n = x.len();
    // penalty block by polarization of the quadratic form hook
    let mut unit = vec![T::zero(); n];
    let diag: Vec<f64> = face
        .iter()
        .map(|&a| {
            unit[a] = T::one();
            let q = reg.hessian_quadform(x, &unit).as_f64();
            unit[a] = T::zero();
            q
        })
        .collect();
    let mut m = DMatrix::<f64>::zeros(k, k);
    for a in 0..k {
        m[(a, a)] = diag[a];
        for b in a + 1..k {
            let (va, vb) = (face[a], face[b]);
            let coupling = if reg.hessian_is_diagonal() {
                0.0
            } else {
                unit[va] = T::one();
                unit[vb] = T::one();
                let q = reg.hessian_quadform(x, &unit).as_f64();
                unit[va] = T::zero();
                unit[vb] = T::zero();
                0.5 * (q - diag[a] - diag[b])
            };
            let adj = if g.has_edge(va, vb) { 2.0 } else { 0.0 };
            m[(a, b)] = adj + coupling;
            m[(b, a)] = adj + coupling;
        }
    }
    // Helmert basis: q_m = (1, .., 1, -m, 0, ..) / sqrt(m (m + 1))
    let mut q = DMatrix::<f64>::zeros(k, k - 1);
    for col in 0..k - 1 {
        let mm = (col + 1) as f64;
        let scale = 1.0 / (mm * (mm + 1.0)).sqrt();
        for row in 0..=col {
            q[(row, col)] = scale;
        }
        q[(col + 1, col)] = -mm * scale;
    }
    let reduced = q.transpose() * &m * &q;
    let eig = SymmetricEigen::new(reduced);
    let (idx, &max) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("k >= 2");
    let local = &q * eig.eigenvectors.column(idx);
    let mut d = vec![T::zero(); n];
    for (a, &v) in face.iter().enumerate() {
        d[v] = T::lit(local[a]);
    }
    (max, Some(d))
}

/// Second-order witness against local maximality.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness<T: Scalar> {
    pub direction: Vec<T>,
    /// `∇f(x) d`, within the tolerance of zero.
    pub slope: T,
    /// `dᵀ ∇²f(x) d`, strictly above the tolerance.
    pub quadform: T,
}

/// Searches candidate critical directions for one with positive curvature.
///
/// With `candidates == None` the set is every tight generator plus, on graphs
/// small enough for enumeration, `x(C̃) − x` for each maximal clique `C̃`.
/// Among qualifying directions the one with the largest quadratic form wins;
/// ties keep the earlier candidate.
pub fn disprove_local_max<T: Scalar, P: Penalty<T> + ?Sized>(
    g: &Graph,
    reg: &P,
    x: &SimplexVector<T>,
    candidates: Option<&[Vec<T>]>,
    tol: T,
) -> Result<Option<Witness<T>>> {
    let eval = objective::f_eval(g, reg, x)?;
    let owned;
    let dirs: &[Vec<T>] = match candidates {
        Some(c) => c,
        None => {
            owned = default_candidates(g, x, &eval.gradient, tol);
            &owned
        }
    };
    let mut best: Option<Witness<T>> = None;
    for d in dirs {
        if d.len() != g.n() {
            return Err(Error::DimensionMismatch { expected: g.n(), got: d.len() });
        }
        let slope = dot(&eval.gradient, d);
        if slope.abs() > tol {
            continue;
        }
        let q = objective::hessian_quadform(g, reg, x.as_slice(), d)?;
        if q > tol && best.as_ref().is_none_or(|b| q > b.quadform) {
            best = Some(Witness { direction: d.clone(), slope, quadform: q });
        }
    }
    Ok(best)
}

fn default_candidates<T: Scalar>(g: &Graph, x: &SimplexVector<T>, grad: &[T], tol: T) -> Vec<Vec<T>> {
    let n = g.n();
    let report = first_order_from_gradient(grad, x.as_slice(), tol);
    let mut dirs: Vec<Vec<T>> = report.tight_generators.iter().map(|&(i, j)| generator(n, i, j)).collect();
    if n <= ENUMERATION_LIMIT {
        for c in enumerate_maximal_cliques(g) {
            let xc = g.characteristic_vector::<T>(&c);
            let d: Vec<T> = xc.as_slice().iter().zip(x.as_slice()).map(|(&a, &b)| a - b).collect();
            if d.iter().any(|v| *v != T::zero()) {
                dirs.push(d);
            }
        }
    }
    dirs
}

/// One pass of the support-reduction loop.
#[derive(Clone, Debug, PartialEq)]
pub struct PurifyStep<T: Scalar> {
    /// Vertex whose mass was moved away (now zero).
    pub removed: usize,
    /// Vertex that received the mass.
    pub kept: usize,
    pub value_before: T,
    pub value_after: T,
    pub support_after: usize,
}

/// Moves mass between non-adjacent support vertices until the support is a
/// clique. Along `eᵢ − eⱼ` with `aᵢⱼ = 0` the objective is convex, so the
/// better endpoint never loses value.
pub fn purify<T: Scalar, P: Penalty<T> + ?Sized>(g: &Graph, reg: &P, x: &SimplexVector<T>) -> Result<SimplexVector<T>> {
    Ok(purify_traced(g, reg, x)?.0)
}

/// [`purify`] plus the list of loop iterations.
pub fn purify_traced<T: Scalar, P: Penalty<T> + ?Sized>(
    g: &Graph,
    reg: &P,
    x: &SimplexVector<T>,
) -> Result<(SimplexVector<T>, Vec<PurifyStep<T>>)> {
    if x.dim() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: x.dim() });
    }
    let mut v = x.as_slice().to_vec();
    let mut ax = adjacency_product(g, &v);
    let mut quad = dot(&v, &ax);
    let mut steps = Vec::new();
    loop {
        let support = support_of(&v, T::zero());
        let Some((i, j)) = g.first_non_adjacent_pair(&support)? else { break };
        let before = quad + reg.value(&v);
        let (xi, xj) = (v[i], v[j]);
        // aᵢⱼ = aᵢᵢ = aⱼⱼ = 0, so the quadratic part is linear in t
        let slope_quad = (ax[i] - ax[j]) + (ax[i] - ax[j]);

        v[i] = xi + xj;
        v[j] = T::zero();
        let quad_keep_i = quad + slope_quad * xj;
        let keep_i = quad_keep_i + reg.value(&v);

        v[i] = T::zero();
        v[j] = xi + xj;
        let quad_keep_j = quad - slope_quad * xi;
        let keep_j = quad_keep_j + reg.value(&v);

        let (removed, kept, moved) = if keep_j > keep_i { (i, j, xi) } else { (j, i, xj) };
        v[removed] = T::zero();
        v[kept] = xi + xj;
        for r in g.neighbors(kept) {
            ax[r] = ax[r] + moved;
        }
        for r in g.neighbors(removed) {
            ax[r] = ax[r] - moved;
        }
        quad = dot(&v, &ax);
        let after = quad + reg.value(&v);
        steps.push(PurifyStep {
            removed,
            kept,
            value_before: before,
            value_after: after,
            support_after: support.len() - 1,
        });
    }
    Ok((SimplexVector::new(v)?, steps))
}

/// Clique read off a point: purify, drop entries at or below `support_tol`,
/// then extend greedily (ascending ids) to a maximal clique.
pub fn extract_clique<T: Scalar, P: Penalty<T> + ?Sized>(
    g: &Graph,
    reg: &P,
    x: &SimplexVector<T>,
    support_tol: T,
) -> Result<Clique> {
    let pure = purify(g, reg, x)?;
    let support = pure.support(support_tol);
    if support.is_empty() {
        return Err(Error::Numerical(format!("no entry above support threshold {support_tol}")));
    }
    Ok(Clique::new(g, support)?.extend_greedy(g))
}

/// Outcome of inspecting a (numerically) stationary point.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCertificate<T: Scalar> {
    pub certified: bool,
    /// Clique read from the thresholded support, when that support is one.
    pub support_clique: Option<Clique>,
    /// Feasible ascent or positive-curvature direction, when one was found.
    pub ascent_direction: Option<Vec<T>>,
}

/// Decides whether a converged iterate is a strict local maximizer.
///
/// The thresholded support must be a maximal clique `C`, the iterate must sit
/// within `certify_distance` of `x(C)`, and `x(C)` must pass the
/// characteristic-vector certificate. When any step fails, a direction that
/// improves the objective is returned if one is known: a mass transfer between
/// non-adjacent support vertices, an extension generator, a positive-curvature
/// face direction, or a witness from [`disprove_local_max`].
pub fn certify_point<T: Scalar, P: Penalty<T> + ?Sized>(
    g: &Graph,
    reg: &P,
    x: &SimplexVector<T>,
) -> Result<PointCertificate<T>> {
    let n = g.n();
    let tight = T::lit(TOL.tight_generator);
    let support = x.support(T::lit(TOL.support));
    if support.is_empty() {
        return Err(Error::Numerical("empty support".into()));
    }
    let grad = objective::f_eval(g, reg, x)?.gradient;
    if let Some((i, j)) = g.first_non_adjacent_pair(&support)? {
        let d = if grad[i] >= grad[j] { generator(n, i, j) } else { generator(n, j, i) };
        return Ok(PointCertificate { certified: false, support_clique: None, ascent_direction: Some(d) });
    }
    let clique = Clique::new(g, support)?;
    if !clique.is_maximal() {
        let common = g.common_neighbors(clique.vertices());
        let v = crate::bitset::first(&common).expect("non-maximal clique has an extension");
        let j = *clique
            .vertices()
            .iter()
            .min_by(|&&a, &&b| grad[a].as_f64().total_cmp(&grad[b].as_f64()))
            .expect("nonempty");
        return Ok(PointCertificate {
            certified: false,
            support_clique: Some(clique),
            ascent_direction: Some(generator(n, v, j)),
        });
    }
    let xc = g.characteristic_vector::<T>(&clique);
    let dist = x
        .as_slice()
        .iter()
        .zip(xc.as_slice())
        .fold(T::zero(), |acc, (&a, &b)| acc.max((a - b).abs()));
    if dist > T::lit(TOL.certify_distance) {
        return Ok(PointCertificate { certified: false, support_clique: Some(clique), ascent_direction: None });
    }
    let report = certify_clique_point(g, reg, &clique, tight)?;
    match report.second_order {
        SecondOrder::Passed => {
            Ok(PointCertificate { certified: true, support_clique: Some(clique), ascent_direction: None })
        }
        SecondOrder::Failed => Ok(PointCertificate {
            certified: false,
            support_clique: Some(clique),
            ascent_direction: report.ascent_direction,
        }),
        SecondOrder::NotChecked => {
            let witness = disprove_local_max(g, reg, &xc, None, tight)?;
            Ok(PointCertificate {
                certified: false,
                support_clique: Some(clique),
                ascent_direction: witness.map(|w| w.direction),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regularizer::{Regularizer, RegularizerSpec};

    const TIGHT: f64 = 1e-7;

    fn regs() -> Vec<Regularizer<f64>> {
        RegularizerSpec::strictly_convex_builtins().iter().map(|s| s.build().unwrap()).collect()
    }

    fn clique(g: &Graph, one_based: &[usize]) -> Clique {
        Clique::new(g, one_based.iter().map(|v| v - 1).collect()).unwrap()
    }

    #[test]
    fn figure1_edge_is_first_order_but_not_local_max() {
        let g = Graph::figure1();
        let none = Regularizer::<f64>::None;
        let x = g.characteristic_vector::<f64>(&clique(&g, &[1, 2]));
        let r = first_order_check(&g, &none, &x, TIGHT).unwrap();
        assert!(r.first_order_ok);
        assert_eq!(r.worst_generator_slope, 0.0);
        // gradient is all ones: every feasible generator (j in {1,2}) is tight
        assert_eq!(r.tight_generators.len(), 8);
        assert!(r.tight_generators.contains(&(2, 0)));

        let w = disprove_local_max(&g, &none, &x, None, TIGHT).unwrap().expect("witness");
        assert!(w.quadform > 0.0);
        assert!((w.quadform - 1.0 / 3.0).abs() < 1e-12);

        let counter_dir: Vec<f64> = g
            .characteristic_vector::<f64>(&clique(&g, &[3, 4, 5]))
            .as_slice()
            .iter()
            .zip(x.as_slice())
            .map(|(a, b)| a - b)
            .collect();
        let w = disprove_local_max(&g, &none, &x, Some(std::slice::from_ref(&counter_dir)), TIGHT).unwrap().unwrap();
        assert_eq!(w.direction, counter_dir);
        assert!((w.quadform - 1.0 / 3.0).abs() < 1e-12);

        assert!(certify_characteristic_vector(&g, &none, &clique(&g, &[1, 2]), TIGHT).is_err());
    }

    #[test]
    fn figure1_edge_is_certified_under_strictly_convex_penalties() {
        let g = Graph::figure1();
        let c = clique(&g, &[1, 2]);
        for reg in regs() {
            let r = certify_characteristic_vector(&g, &reg, &c, TIGHT).unwrap();
            assert!(r.first_order_ok, "{reg:?}");
            assert_eq!(r.second_order, SecondOrder::Passed, "{reg:?}");
            let x = g.characteristic_vector::<f64>(&c);
            assert!(disprove_local_max(&g, &reg, &x, None, TIGHT).unwrap().is_none());
        }
    }

    #[test]
    fn non_maximal_clique_fails_first_order() {
        let g = Graph::complete(3).unwrap();
        let r = certify_characteristic_vector(&g, &Regularizer::<f64>::Bomze, &clique(&g, &[1, 2]), TIGHT).unwrap();
        assert!(!r.first_order_ok);
        // slope toward vertex 3: 2(1 - 1/2) + (0 - 1/2) = 1/2
        assert!((r.worst_generator_slope - 0.5).abs() < 1e-15);
        assert_eq!(r.worst_generator.unwrap().0, 2);
        assert!(r.ascent_direction.is_some());
    }

    #[test]
    fn triangle_barycenter_has_no_witness() {
        let g = Graph::complete(3).unwrap();
        let x = SimplexVector::<f64>::barycenter(3);
        assert!(disprove_local_max(&g, &Regularizer::None, &x, None, TIGHT).unwrap().is_none());
    }

    #[test]
    fn penalty_slopes_at_characteristic_vectors() {
        // ∇Φ(x(S)) d <= 0 over feasible generators, for any S
        let n = 6;
        let sets: [&[usize]; 4] = [&[0], &[1, 4], &[0, 2, 3], &[0, 1, 2, 3, 4, 5]];
        for reg in regs() {
            for s in sets {
                let x = SimplexVector::<f64>::uniform_on(n, s);
                let grad = reg.gradient(x.as_slice());
                for &j in s {
                    for i in (0..n).filter(|&i| i != j) {
                        let slope = grad[i] - grad[j];
                        if s.contains(&i) {
                            assert!(slope.abs() < 1e-15);
                        } else {
                            assert!(slope < 0.0, "{reg:?} {s:?} ({i},{j})");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn purify_figure1_pair() {
        let g = Graph::figure1();
        let x = SimplexVector::new(vec![0.0, 0.5, 0.5, 0.0, 0.0]).unwrap();
        let (p, steps) = purify_traced(&g, &Regularizer::<f64>::None, &x).unwrap();
        assert_eq!(steps.len(), 1);
        assert_eq!(p.support(0.0).len(), 1);
        let v = objective::f_eval(&g, &Regularizer::None, &p).unwrap().value;
        assert_eq!(v, 0.0);
        // tie keeps the lower index
        assert_eq!(p.as_slice(), &[0.0, 1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn purify_keeps_clique_points() {
        let g = Graph::figure1();
        let x = SimplexVector::new(vec![0.2, 0.0, 0.3, 0.5, 0.0]).unwrap();
        assert_eq!(purify(&g, &Regularizer::<f64>::Bomze, &x).unwrap(), x);
    }

    #[test]
    fn extraction() {
        let g = Graph::figure1();
        let c = clique(&g, &[3, 4, 5]);
        let x = g.characteristic_vector::<f64>(&c);
        assert_eq!(extract_clique(&g, &Regularizer::None, &x, 1e-8).unwrap(), c);
        let k3 = Graph::complete(3).unwrap();
        let x = SimplexVector::new(vec![0.5, 0.5, 0.0]).unwrap();
        assert_eq!(extract_clique(&k3, &Regularizer::None, &x, 1e-8).unwrap().one_based(), vec![1, 2, 3]);
        assert!(extract_clique(&k3, &Regularizer::None, &x, 0.9).is_err());
    }

    #[test]
    fn point_certificates() {
        let g = Graph::figure1();
        let bomze = Regularizer::<f64>::Bomze;
        let c = clique(&g, &[1, 3, 4]);
        let cert = certify_point(&g, &bomze, &g.characteristic_vector(&c)).unwrap();
        assert!(cert.certified);
        assert_eq!(cert.support_clique, Some(c));

        // non-clique support yields a mass-transfer direction
        let x = SimplexVector::new(vec![0.5, 0.0, 0.0, 0.0, 0.5]).unwrap();
        let cert = certify_point(&g, &bomze, &x).unwrap();
        assert!(!cert.certified);
        assert!(cert.ascent_direction.is_some());

        // figure-1 edge under the plain program: disproved
        let x = g.characteristic_vector::<f64>(&clique(&g, &[1, 2]));
        let cert = certify_point(&g, &Regularizer::None, &x).unwrap();
        assert!(!cert.certified);
        assert!(cert.ascent_direction.is_some());

        // strictly maximal clique under the plain program: certified
        let k4 = Graph::complete(4).unwrap();
        let cert = certify_point(&k4, &Regularizer::<f64>::None, &SimplexVector::barycenter(4)).unwrap();
        assert!(cert.certified);
    }
}
