//! Sensitivity analysis of convex multiobjective problems on a ball under
//! componentwise tilt perturbations.
//!
//! The library computes point-cloud approximations of weakly efficient
//! solution sets, the minimal-norm element of gradient hulls, excess and
//! Hausdorff set distances, pointwise and global condition numbers of the
//! solution map, pseudodistances between objective functions, and runs the
//! fixed-point and distance-theorem verifications that tie these together.
//!
//! Modules map one-to-one onto the conceptual pieces:
//!
//! - [`problem`]: problem instances, tilts, componentwise perturbations
//! - [`minnorm`]: gradient hulls, min-norm points, hull Lipschitz constants
//! - [`efficient_set`]: weakly efficient solution clouds and interiority
//! - [`setdist`]: excess and Hausdorff distances between point clouds
//! - [`conditioning`]: condition-number estimators and witnesses
//! - [`distance`]: pseudodistances, fixed-point runs, bound verification
//! - [`catalog`]: built-in test problems with closed-form solution sets

pub mod catalog;
pub mod conditioning;
pub mod distance;
pub mod efficient_set;
pub mod exec;
pub mod minnorm;
pub mod problem;
pub mod rng;
pub mod setdist;

use thiserror::Error;

/// Errors shared by all modules. Every failure mode is reported, never
/// silently absorbed; nonconvergence in particular always surfaces.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("point lies outside the ball (norm {norm}, radius {radius})")]
    PointOutsideBall { norm: f64, radius: f64 },
    #[error("component index {index} out of range for m = {m}")]
    BadComponentIndex { index: usize, m: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operands are defined on different balls")]
    DomainMismatch,
    #[error("objective counts differ: {left} vs {right}")]
    ShapeMismatch { left: usize, right: usize },
    #[error("empty vertex list")]
    EmptyVertexList,
    #[error("min-norm iteration did not converge (gap {gap:.3e} after {iterations} iterations)")]
    MinNormNonConvergence { gap: f64, iterations: usize },
    #[error("operation requires a certified R^m_+-convex objective")]
    NonConvexInput,
    #[error("scalarized solver did not converge (residual {residual:.3e})")]
    SolverNonConvergence { residual: f64 },
    #[error("point is on the ball boundary; the first-order test applies to interior points only")]
    BoundaryPoint,
    #[error("point is not weakly efficient (certificate {certificate:.3e} > tolerance {tolerance:.3e})")]
    NotASolution { certificate: f64, tolerance: f64 },
    #[error("unperturbed solution set touches the ball boundary (max point norm {max_norm} vs radius {radius})")]
    SolutionSetTouchesBoundary { max_norm: f64, radius: f64 },
    #[error("no direction leaving the solution set was found; witness not constructible")]
    NoExteriorDirection,
    #[error("contraction precondition violated: {reason}")]
    ContractionPreconditionViolated { reason: String },
    #[error("map is not contractive on samples: d_H ratio {ratio:.6} exceeds theta {theta}")]
    NotContractiveOnSamples { ratio: f64, theta: f64 },
    #[error("the radius identity is stated pointwise; a global estimate was passed")]
    GlobalEstimatePassed,
    #[error("perturbation cannot be combined with this component kind: {detail}")]
    UnsupportedPerturbation { detail: String },
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("simplex grid too large: {nodes} nodes (limit {limit})")]
    GridTooLarge { nodes: u128, limit: u128 },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
