//! Frank–Wolfe local maximization on the simplex and the multistart driver.
//!
//! The local solver alternates Frank–Wolfe steps toward the best vertex with
//! away steps from the worst support vertex; away steps that hit their bound
//! drop a vertex from the support exactly. Once the gap closes, the iterate is
//! certified (see [`crate::optimality::certify_point`]); if certification
//! produces an ascent direction the solver steps along it and resumes.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::config::TOL;
use crate::error::{Error, Result};
use crate::graph::{Clique, Graph};
use crate::objective::{adjacency_product, bilinear};
use crate::optimality::{certify_point, extract_clique};
use crate::regularizer::{Penalty, RegularizerSpec};
use crate::scalar::{dot, Scalar};
use crate::simplex::{repair, sample_simplex, sum_tolerance, SimplexVector};

/// Bound on saddle escapes per trial.
pub const MAX_ESCAPES: usize = 5;

/// Recompute `Ax` from scratch this often to shed accumulated round-off.
const REFRESH_EVERY: usize = 64;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub max_iters: usize,
    pub fw_gap_tol: f64,
    pub starts: usize,
    pub seed: u64,
    pub parallel: bool,
    pub escape_saddles: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { max_iters: 10_000, fw_gap_tol: 1e-8, starts: 100, seed: 0, parallel: false, escape_saddles: true }
    }
}

impl SolveOptions {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::InvalidParameter("max_iters must be at least 1".into()));
        }
        if self.fw_gap_tol.is_nan() || self.fw_gap_tol <= 0.0 {
            return Err(Error::InvalidParameter("fw_gap_tol must be positive".into()));
        }
        if self.starts == 0 {
            return Err(Error::InvalidParameter("starts must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialStatus {
    Converged,
    IterLimit,
    EscapedThenConverged,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialResult<T: Scalar> {
    pub trial: usize,
    /// Nonzero entries only, as `[vertex (1-based), value]`.
    #[serde(rename = "x_support", serialize_with = "sparse_entries")]
    pub x_final: SimplexVector<T>,
    pub f_final: T,
    pub fw_gap: T,
    pub iters: usize,
    pub escapes: usize,
    pub status: TrialStatus,
    pub clique: Option<Clique>,
    pub is_certified_local_max: bool,
    pub wall_time: f64,
}

fn sparse_entries<T: Scalar, S: Serializer>(x: &SimplexVector<T>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(
        x.as_slice()
            .iter()
            .enumerate()
            .filter(|(_, v)| **v > T::zero())
            .map(|(i, v)| (i + 1, v.as_f64())),
    )
}

/// Objective restricted to the segment `x + t d`, `t ∈ [0, t_max]`.
///
/// The quadratic part is carried in closed form; only `Φ` is re-evaluated.
struct LineModel<'a, T: Scalar, P: Penalty<T> + ?Sized> {
    reg: &'a P,
    x: &'a [T],
    d: &'a [T],
    /// `xᵀAx`
    quad0: T,
    /// `dᵀAx`
    cross: T,
    /// `dᵀAd`
    curv: T,
    f0: T,
    slope: T,
    t_max: T,
}

impl<T: Scalar, P: Penalty<T> + ?Sized> LineModel<'_, T, P> {
    fn value_at(&self, t: T, scratch: &mut Vec<T>) -> T {
        scratch.clear();
        scratch.extend(self.x.iter().zip(self.d).map(|(&xi, &di)| xi + t * di));
        self.quad0 + (self.cross + self.cross) * t + self.curv * t * t + self.reg.value(scratch)
    }

    fn step(&self, scratch: &mut Vec<T>) -> T {
        if self.reg.is_quadratic() {
            // h(t) = f0 + slope t + c t², c = dᵀAd + ½ dᵀ∇²Φ d
            let c = self.curv + T::lit(0.5) * self.reg.hessian_quadform(self.x, self.d);
            exact_quadratic_step(self.slope, c, self.t_max)
        } else {
            self.armijo(scratch)
        }
    }

    fn armijo(&self, scratch: &mut Vec<T>) -> T {
        let c = T::lit(TOL.armijo_c);
        let floor = T::lit(TOL.step_floor);
        let mut t = self.t_max;
        while t >= floor {
            if self.value_at(t, scratch) >= self.f0 + c * t * self.slope {
                return t;
            }
            t = t * T::lit(0.5);
        }
        floor.min(self.t_max)
    }
}

/// Maximizer of `slope·t + curvature·t²` over `[0, t_max]` for `slope > 0`.
fn exact_quadratic_step<T: Scalar>(slope: T, curvature: T, t_max: T) -> T {
    if curvature >= T::zero() {
        t_max
    } else {
        (-slope / (curvature + curvature)).min(t_max).max(T::zero())
    }
}

/// Step length along `d` from `x`, for `slope = ∇f(x) d > 0`.
///
/// Quadratic objectives (`Φ` none or Bomze) are maximized exactly on
/// `[0, t_max]`; otherwise Armijo backtracking halves from `t_max` until
/// `f(x + t d) >= f(x) + 1e-4 t slope`, returning the floor `1e-12` if the
/// condition never holds.
pub fn line_search<T: Scalar, P: Penalty<T> + ?Sized>(g: &Graph, reg: &P, x: &[T], d: &[T], slope: T, t_max: T) -> T {
    let ax = adjacency_product(g, x);
    let quad0 = dot(x, &ax);
    let model = LineModel {
        reg,
        x,
        d,
        quad0,
        cross: dot(d, &ax),
        curv: bilinear(g, d, d),
        f0: quad0 + reg.value(x),
        slope,
        t_max,
    };
    model.step(&mut Vec::with_capacity(x.len()))
}

/// Mutable iterate shared by the Frank–Wolfe loop and the escape step.
struct Iterate<'a, T: Scalar, P: Penalty<T> + ?Sized> {
    g: &'a Graph,
    reg: &'a P,
    x: Vec<T>,
    ax: Vec<T>,
    grad: Vec<T>,
    dir: Vec<T>,
    scratch: Vec<T>,
    since_refresh: usize,
}

impl<'a, T: Scalar, P: Penalty<T> + ?Sized> Iterate<'a, T, P> {
    fn new(g: &'a Graph, reg: &'a P, x: Vec<T>) -> Self {
        let ax = adjacency_product(g, &x);
        let n = x.len();
        Self {
            g,
            reg,
            x,
            ax,
            grad: vec![T::zero(); n],
            dir: vec![T::zero(); n],
            scratch: Vec::with_capacity(n),
            since_refresh: 0,
        }
    }

    fn quad(&self) -> T {
        dot(&self.x, &self.ax)
    }

    fn value(&self) -> T {
        self.quad() + self.reg.value(&self.x)
    }

    fn refresh_gradient(&mut self) {
        self.reg.gradient_into(&self.x, &mut self.grad);
        for (gi, &a) in self.grad.iter_mut().zip(&self.ax) {
            *gi = *gi + a + a;
        }
    }

    /// Applies `x += t·dir` with `Ax` updated through the changed
    /// coordinates, then clamps round-off.
    fn apply(&mut self, t: T, zero_out: Option<usize>) {
        let n = self.x.len();
        for k in 0..n {
            let dk = self.dir[k];
            if dk != T::zero() {
                let delta = t * dk;
                self.x[k] = self.x[k] + delta;
                for r in self.g.neighbors(k) {
                    self.ax[r] = self.ax[r] + delta;
                }
            }
        }
        if let Some(a) = zero_out {
            self.x[a] = T::zero();
        }
        self.since_refresh += 1;
        let sum: T = self.x.iter().copied().sum();
        let drifted = (sum - T::one()).abs() > T::lit(TOL.simplex_sum);
        if drifted || zero_out.is_some() || self.x.iter().any(|v| *v < T::zero()) {
            repair(&mut self.x);
        }
        if drifted || zero_out.is_some() || self.since_refresh >= REFRESH_EVERY {
            self.ax = adjacency_product(self.g, &self.x);
            self.since_refresh = 0;
        }
    }

    /// Frank–Wolfe with away steps until the gap drops to `tol` or `budget`
    /// iterations are spent. Returns (converged, iterations, final gap).
    fn run(&mut self, budget: usize, tol: T, observe: &mut dyn FnMut(usize, T)) -> (bool, usize, T) {
        let n = self.x.len();
        let mut gap = T::infinity();
        for it in 0..=budget {
            self.refresh_gradient();
            let (s, gs) = argmax(&self.grad);
            let gx = dot(&self.grad, &self.x);
            gap = gs - gx;
            if gap <= tol {
                return (true, it, gap.max(T::zero()));
            }
            if it == budget {
                break;
            }
            let (a, ga) = self
                .x
                .iter()
                .enumerate()
                .filter(|(_, v)| **v > T::zero())
                .map(|(i, _)| (i, self.grad[i]))
                .fold((usize::MAX, T::infinity()), |acc, (i, gi)| if gi < acc.1 { (i, gi) } else { acc });
            let away_gap = gx - ga;
            let quad0 = self.quad();
            let (slope, t_max, cross, curv, drop) = if gap >= away_gap || self.x[a] >= T::one() {
                for k in 0..n {
                    self.dir[k] = -self.x[k];
                }
                self.dir[s] = self.dir[s] + T::one();
                // d = e_s - x
                let cross = self.ax[s] - quad0;
                let curv = quad0 - (self.ax[s] + self.ax[s]);
                (gap, T::one(), cross, curv, None)
            } else {
                self.dir.copy_from_slice(&self.x);
                self.dir[a] = self.dir[a] - T::one();
                // d = x - e_a
                let xa = self.x[a];
                let t_max = xa / (T::one() - xa);
                let cross = quad0 - self.ax[a];
                let curv = quad0 - (self.ax[a] + self.ax[a]);
                (away_gap, t_max, cross, curv, Some((a, t_max)))
            };
            let model = LineModel {
                reg: self.reg,
                x: &self.x,
                d: &self.dir,
                quad0,
                cross,
                curv,
                f0: quad0 + self.reg.value(&self.x),
                slope,
                t_max,
            };
            let t = model.step(&mut self.scratch);
            let zero_out = drop.and_then(|(a, tm)| (t >= tm).then_some(a));
            self.apply(t, zero_out);
            observe(it + 1, self.value());
        }
        (false, budget, gap.max(T::zero()))
    }

    /// Steps along `d` (with `1ᵀd = 0`) as far as feasibility allows, halving
    /// until the objective strictly increases. Returns whether it moved.
    fn escape(&mut self, d: &[T]) -> bool {
        let mut t_max = T::infinity();
        for (&xi, &di) in self.x.iter().zip(d) {
            if di < T::zero() {
                t_max = t_max.min(xi / -di);
            }
        }
        if !t_max.is_finite() || t_max <= T::zero() {
            return false;
        }
        let f0 = self.value();
        let mut t = t_max;
        for _ in 0..60 {
            self.scratch.clear();
            self.scratch.extend(self.x.iter().zip(d).map(|(&xi, &di)| (xi + t * di).max(T::zero())));
            let trial = bilinear(self.g, &self.scratch, &self.scratch) + self.reg.value(&self.scratch);
            if trial > f0 {
                self.dir.copy_from_slice(d);
                self.apply(t, None);
                return true;
            }
            t = t * T::lit(0.5);
        }
        false
    }
}

fn argmax<T: Scalar>(v: &[T]) -> (usize, T) {
    v.iter()
        .enumerate()
        .fold((0, T::neg_infinity()), |acc, (i, &vi)| if vi > acc.1 { (i, vi) } else { acc })
}

/// Local maximization from `x0`.
pub fn frank_wolfe<T: Scalar, P: Penalty<T> + ?Sized>(
    g: &Graph,
    reg: &P,
    x0: &SimplexVector<T>,
    opts: &SolveOptions,
) -> Result<TrialResult<T>> {
    frank_wolfe_observed(g, reg, x0, opts, &mut |_, _| {})
}

/// [`frank_wolfe`] with a callback receiving `(iteration, f)` after every
/// accepted step (line-search and escape steps alike).
pub fn frank_wolfe_observed<T: Scalar, P: Penalty<T> + ?Sized>(
    g: &Graph,
    reg: &P,
    x0: &SimplexVector<T>,
    opts: &SolveOptions,
    observe: &mut dyn FnMut(usize, T),
) -> Result<TrialResult<T>> {
    opts.validate()?;
    if x0.dim() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: x0.dim() });
    }
    let x0 = SimplexVector::new(x0.as_slice().to_vec())?;
    let start = Instant::now();
    let tol = T::lit(opts.fw_gap_tol);
    let mut it = Iterate::new(g, reg, x0.into_vec());
    let mut iters = 0;
    let mut escapes = 0;
    let (mut converged, mut gap);
    loop {
        let mut obs = |k: usize, f: T| observe(iters + k, f);
        let (conv, used, gp) = it.run(opts.max_iters - iters, tol, &mut obs);
        converged = conv;
        gap = gp;
        iters += used;
        if !converged {
            break;
        }
        let x = SimplexVector::new(it.x.clone())?;
        let cert = certify_point(g, reg, &x)?;
        if cert.certified || !opts.escape_saddles || escapes >= MAX_ESCAPES || iters >= opts.max_iters {
            break;
        }
        match cert.ascent_direction {
            Some(d) if it.escape(&d) => {
                escapes += 1;
                observe(iters, it.value());
            }
            _ => break,
        }
    }
    let x_final = SimplexVector::new(it.x.clone())?;
    let f_final = it.value();
    let certified = certify_point(g, reg, &x_final)?.certified;
    let clique = extract_clique(g, reg, &x_final, T::lit(TOL.support)).ok();
    let status = match (converged, escapes) {
        (false, _) => TrialStatus::IterLimit,
        (true, 0) => TrialStatus::Converged,
        (true, _) => TrialStatus::EscapedThenConverged,
    };
    debug_assert!((x_final.as_slice().iter().copied().sum::<T>() - T::one()).abs() <= sum_tolerance::<T>(g.n()));
    Ok(TrialResult {
        trial: 0,
        x_final,
        f_final,
        fw_gap: gap,
        iters,
        escapes,
        status,
        clique,
        is_certified_local_max: certified,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Start point of trial `trial`: a uniform simplex sample from a ChaCha8
/// stream keyed by `(seed, trial)`, independent of scheduling and of the
/// regularizer.
pub fn trial_start<T: Scalar>(n: usize, seed: u64, trial: usize) -> SimplexVector<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    sample_simplex(n, &mut rng)
}

/// Multistart aggregate; statistics cover certified trials only.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport<T: Scalar> {
    pub schema_version: u32,
    pub instance: String,
    pub n: usize,
    pub edge_count: usize,
    pub regularizer: RegularizerSpec,
    pub starts: usize,
    pub seed: u64,
    /// Largest certified clique size (0 when no trial certified).
    pub max: usize,
    pub mean: f64,
    /// Sample standard deviation (n − 1 denominator).
    pub std: f64,
    pub cpu_time_mean: f64,
    pub omitted_count: usize,
    pub trials: Vec<TrialResult<T>>,
}

impl<T: Scalar> RunReport<T> {
    /// Aggregates trials (sorted by index) into the report columns.
    pub fn from_trials(
        instance: &str,
        g: &Graph,
        regularizer: RegularizerSpec,
        opts: &SolveOptions,
        mut trials: Vec<TrialResult<T>>,
    ) -> Self {
        trials.sort_by_key(|t| t.trial);
        let sizes: Vec<f64> = trials
            .iter()
            .filter(|t| t.is_certified_local_max)
            .filter_map(|t| t.clique.as_ref().map(|c| c.size() as f64))
            .collect();
        let count = sizes.len();
        let max = sizes.iter().fold(0.0f64, |a, &b| a.max(b)) as usize;
        let mean = if count > 0 { sizes.iter().sum::<f64>() / count as f64 } else { 0.0 };
        let std = if count > 1 {
            (sizes.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (count - 1) as f64).sqrt()
        } else {
            0.0
        };
        let cpu_time_mean =
            if trials.is_empty() { 0.0 } else { trials.iter().map(|t| t.wall_time).sum::<f64>() / trials.len() as f64 };
        RunReport {
            schema_version: REPORT_SCHEMA_VERSION,
            instance: instance.to_string(),
            n: g.n(),
            edge_count: g.edge_count(),
            regularizer,
            starts: opts.starts,
            seed: opts.seed,
            max,
            mean,
            std,
            cpu_time_mean,
            omitted_count: trials.len() - count,
            trials,
        }
    }

    /// Copy with all timing fields zeroed; two runs with the same inputs
    /// produce identical timing-free reports.
    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        r.cpu_time_mean = 0.0;
        for t in &mut r.trials {
            t.wall_time = 0.0;
        }
        r
    }
}

/// Runs `opts.starts` independent local solves and aggregates them.
pub fn multistart<T: Scalar, P: Penalty<T> + ?Sized>(
    instance: &str,
    g: &Graph,
    reg: &P,
    spec: RegularizerSpec,
    opts: &SolveOptions,
) -> Result<RunReport<T>> {
    opts.validate()?;
    let run = |trial: usize| -> Result<TrialResult<T>> {
        let x0 = trial_start::<T>(g.n(), opts.seed, trial);
        let mut r = frank_wolfe(g, reg, &x0, opts)?;
        r.trial = trial;
        Ok(r)
    };
    let trials: Vec<TrialResult<T>> = if opts.parallel {
        (0..opts.starts).into_par_iter().map(run).collect::<Result<_>>()?
    } else {
        (0..opts.starts).map(run).collect::<Result<_>>()?
    };
    Ok(RunReport::from_trials(instance, g, spec, opts, trials))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::{clique_objective, value};
    use crate::regularizer::Regularizer;

    fn opts() -> SolveOptions {
        SolveOptions { starts: 10, seed: 7, ..SolveOptions::default() }
    }

    #[test]
    fn triangle_from_barycenter() {
        let g = Graph::complete(3).unwrap();
        let r = frank_wolfe(&g, &Regularizer::<f64>::None, &SimplexVector::barycenter(3), &opts()).unwrap();
        assert_eq!(r.status, TrialStatus::Converged);
        assert!((r.f_final - 2.0 / 3.0).abs() < 1e-12);
        assert!(r.fw_gap <= 1e-8);
        assert_eq!(r.clique.unwrap().one_based(), vec![1, 2, 3]);
        assert!(r.is_certified_local_max);
    }

    #[test]
    fn figure1_edge_is_a_fixed_point_under_bomze() {
        let g = Graph::figure1();
        let c = Clique::new(&g, vec![0, 1]).unwrap();
        let x0 = g.characteristic_vector::<f64>(&c);
        let r = frank_wolfe(&g, &Regularizer::Bomze, &x0, &opts()).unwrap();
        assert_eq!(r.iters, 0);
        assert_eq!(r.x_final, x0);
        assert_eq!(r.clique, Some(c));
        assert!(r.is_certified_local_max);
    }

    #[test]
    fn figure1_edge_escapes_without_penalty() {
        let g = Graph::figure1();
        let none = Regularizer::<f64>::None;
        let a = g.characteristic_vector::<f64>(&Clique::new(&g, vec![0, 1]).unwrap());
        let b = g.characteristic_vector::<f64>(&Clique::new(&g, vec![2, 3, 4]).unwrap());
        let x0: Vec<f64> = a.as_slice().iter().zip(b.as_slice()).map(|(p, q)| p + 1e-3 * (q - p)).collect();
        let r = frank_wolfe(&g, &none, &SimplexVector::new(x0).unwrap(), &opts()).unwrap();
        assert!(r.f_final >= 2.0 / 3.0 - 1e-9, "f = {}", r.f_final);
        assert_eq!(r.clique.unwrap().size(), 3);

        // started exactly at x({1,2}), only the escape can leave
        let r = frank_wolfe(&g, &none, &a, &opts()).unwrap();
        assert!(r.escapes >= 1);
        assert_eq!(r.status, TrialStatus::EscapedThenConverged);
        assert!(r.f_final >= 2.0 / 3.0 - 1e-9);
    }

    #[test]
    fn rejects_off_simplex_start() {
        let g = Graph::complete(2).unwrap();
        let bad = SimplexVector::<f64>::vertex(3, 0);
        assert!(frank_wolfe(&g, &Regularizer::None, &bad, &opts()).is_err());
        let bad_opts = SolveOptions { max_iters: 0, ..opts() };
        assert!(frank_wolfe(&g, &Regularizer::<f64>::None, &SimplexVector::barycenter(2), &bad_opts).is_err());
    }

    #[test]
    fn quadratic_line_search() {
        // interior maximizer of t - t^2 on [0,1] at 1/2
        assert_eq!(exact_quadratic_step(1.0, -1.0, 1.0), 0.5);
        // concave increasing on [0,1]
        assert_eq!(exact_quadratic_step(3.0, -1.0, 1.0), 1.0);
        assert_eq!(exact_quadratic_step(1.0, 0.5, 1.0), 1.0);

        let g = Graph::figure1();
        let x = [0.2, 0.2, 0.2, 0.2, 0.2];
        let d = [0.8, -0.2, -0.2, -0.2, -0.2];
        let reg = Regularizer::<f64>::Bomze;
        let grad = crate::objective::evaluate(&g, &reg, &x).unwrap().gradient;
        let slope = dot(&grad, &d);
        assert!(slope > 0.0);
        let t = line_search(&g, &reg, &x, &d, slope, 1.0);
        let at = |t: f64| {
            let y: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + t * b).collect();
            value(&g, &reg, &y).unwrap()
        };
        assert!(at(t) >= at(0.0) && at(t) >= at(1.0));
    }

    #[test]
    fn armijo_condition_holds() {
        let g = Graph::figure1();
        let reg: Regularizer<f64> = RegularizerSpec::pnorm_default().build().unwrap();
        let x = [0.1, 0.3, 0.2, 0.25, 0.15];
        let grad = crate::objective::evaluate(&g, &reg, &x).unwrap().gradient;
        let (s, _) = argmax(&grad);
        let d: Vec<f64> = (0..5).map(|k| if k == s { 1.0 } else { 0.0 } - x[k]).collect();
        let slope = dot(&grad, &d);
        let t = line_search(&g, &reg, &x, &d, slope, 1.0);
        let y: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + t * b).collect();
        let f0 = value(&g, &reg, &x).unwrap();
        assert!(value(&g, &reg, &y).unwrap() >= f0 + 1e-4 * t * slope);
    }

    #[test]
    fn multistart_on_triangle() {
        let g = Graph::complete(3).unwrap();
        for spec in [RegularizerSpec::None, RegularizerSpec::Bomze, RegularizerSpec::exp_default()] {
            let reg = spec.build::<f64>().unwrap();
            let r = multistart("k3", &g, &reg, reg.spec(), &opts()).unwrap();
            assert_eq!((r.max, r.mean, r.std), (3, 3.0, 0.0));
            assert_eq!(r.omitted_count, 0);
            let best = clique_objective(&g, &reg, r.trials[0].clique.as_ref().unwrap()).unwrap();
            assert!((r.trials[0].f_final - best).abs() < 1e-9);
        }
    }

    #[test]
    fn multistart_is_deterministic_and_schedule_free() {
        let g = Graph::figure1();
        let reg: Regularizer<f64> = RegularizerSpec::pnorm_default().build().unwrap();
        let serial = multistart("fig1", &g, &reg, reg.spec(), &opts()).unwrap().without_timing();
        let again = multistart("fig1", &g, &reg, reg.spec(), &opts()).unwrap().without_timing();
        let par = multistart("fig1", &g, &reg, reg.spec(), &SolveOptions { parallel: true, ..opts() })
            .unwrap()
            .without_timing();
        let a = serde_json::to_string(&serial).unwrap();
        assert_eq!(a, serde_json::to_string(&again).unwrap());
        assert_eq!(a, serde_json::to_string(&par).unwrap());
    }

    #[test]
    fn starts_depend_only_on_seed_and_index() {
        let a = trial_start::<f64>(12, 42, 3);
        assert_eq!(a, trial_start::<f64>(12, 42, 3));
        assert_ne!(a, trial_start::<f64>(12, 42, 4));
        assert_ne!(a, trial_start::<f64>(12, 43, 3));
    }

    #[test]
    fn single_precision_solve() {
        let g = Graph::complete(4).unwrap();
        let o = SolveOptions { fw_gap_tol: 1e-5, ..opts() };
        let r = frank_wolfe(&g, &Regularizer::<f32>::Bomze, &trial_start::<f32>(4, 1, 0), &o).unwrap();
        assert_eq!(r.clique.unwrap().size(), 4);
    }
}
