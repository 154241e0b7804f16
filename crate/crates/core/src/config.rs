//! Canonical numeric tolerances.
//!
//! Every threshold used by the checks in this crate lives here so that tests,
//! the optimizer and the CLI agree on what "equal", "tight" and "zero" mean.
//! Values are absolute unless noted; comparisons against quantities larger
//! than one go through [`Tolerances::close`], which switches to relative.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Allowed |sum(x) - 1| for a simplex point.
    pub simplex_sum: f64,
    /// Agreement of closed-form identities (clique values, eq. checks).
    pub identity: f64,
    /// |slope| at or below which an edge generator counts as tight.
    pub tight_generator: f64,
    /// Entries at or below this are treated as zero when reading a support.
    pub support: f64,
    /// Allowed decrease of the objective across one monotone step.
    pub ascent_slack: f64,
    /// Central finite-difference step.
    pub fd_step: f64,
    /// Relative agreement of analytic and finite-difference derivatives.
    pub fd_rel: f64,
    /// Armijo sufficient-increase constant.
    pub armijo_c: f64,
    /// Smallest step returned by backtracking.
    pub step_floor: f64,
    /// Max-norm distance between a converged iterate and the characteristic
    /// vector of its support for the iterate to inherit that vector's
    /// certificate.
    pub certify_distance: f64,
    /// Margin below zero that a projected Hessian eigenvalue must clear.
    pub curvature: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        simplex_sum: 1e-12,
        identity: 1e-12,
        tight_generator: 1e-7,
        support: 1e-8,
        ascent_slack: 1e-12,
        fd_step: 1e-6,
        fd_rel: 1e-6,
        armijo_c: 1e-4,
        step_floor: 1e-12,
        certify_distance: 1e-5,
        curvature: 1e-10,
    };

    /// `|a - b| <= tol`, measured relative to `max(|a|, |b|)` once that
    /// exceeds one.
    pub fn close(a: f64, b: f64, tol: f64) -> bool {
        let scale = a.abs().max(b.abs()).max(1.0);
        (a - b).abs() <= tol * scale
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

pub const TOL: Tolerances = Tolerances::DEFAULT;
