//! Maximum clique search through regularized Motzkin–Straus programs.
//!
//! The continuous program maximizes `f(x) = xᵀAx + Φ(x)` over the standard
//! simplex. With a suitable penalty `Φ`, local maximizers are exactly the
//! characteristic vectors of maximal cliques, so a multistart local solver
//! yields maximal cliques directly.
//!
//! ```
//! use regclique::{multistart, Graph, RegularizerSpec, SolveOptions};
//!
//! let g = Graph::figure1();
//! let spec = RegularizerSpec::pnorm_default().resolved().unwrap();
//! let reg = spec.build::<f64>().unwrap();
//! let opts = SolveOptions { starts: 5, ..SolveOptions::default() };
//! let report = multistart("fig1", &g, &reg, spec, &opts).unwrap();
//! assert!(report.max >= 2);
//! ```

mod bitset;
pub mod config;
pub mod error;
pub mod graph;
pub mod objective;
pub mod optimality;
pub mod optimizer;
pub mod oracle;
pub mod regularizer;
pub mod scalar;
pub mod simplex;

pub use config::{Tolerances, TOL};
pub use error::{Error, Result};
pub use graph::{parse_dimacs, parse_dimacs_str, Clique, DegreeStats, Graph, GraphBuilder, GraphJson, QuartileMethod};
pub use objective::{clique_objective, evaluate, f_eval, hessian_quadform, ObjectiveEval};
pub use optimality::{
    certify_characteristic_vector, certify_point, disprove_local_max, extract_clique, first_order_check, purify,
    purify_traced, OptimalityReport, PointCertificate, PurifyStep, SecondOrder, Witness,
};
pub use optimizer::{
    frank_wolfe, frank_wolfe_observed, line_search, multistart, trial_start, RunReport, SolveOptions, TrialResult,
    TrialStatus,
};
pub use oracle::{enumerate_maximal_cliques, max_clique_exact, motzkin_straus_value, MaxCliqueResult, ENUMERATION_LIMIT};
pub use regularizer::{
    max_alpha1, max_alpha2, verify_conditions, ConditionFlags, ConditionReport, Penalty, Regularizer,
    RegularizerSpec,
};
pub use scalar::Scalar;
pub use simplex::{sample_simplex, SimplexVector};

pub type SimplexVectorF64 = SimplexVector<f64>;
pub type RegularizerF64 = Regularizer<f64>;
pub type ObjectiveEvalF64 = ObjectiveEval<f64>;
pub type OptimalityReportF64 = OptimalityReport<f64>;
pub type TrialResultF64 = TrialResult<f64>;
pub type RunReportF64 = RunReport<f64>;

pub type SimplexVectorF32 = SimplexVector<f32>;
pub type RegularizerF32 = Regularizer<f32>;
pub type ObjectiveEvalF32 = ObjectiveEval<f32>;
pub type OptimalityReportF32 = OptimalityReport<f32>;
pub type TrialResultF32 = TrialResult<f32>;
pub type RunReportF32 = RunReport<f32>;
