//! Multiobjective problem instances on a closed origin-centered ball,
//! componentwise tilt perturbations, and the perturbation class that adds
//! the same scalar function to every component.
//!
//! Gradients are exact per descriptor kind; no numerical differentiation
//! happens here (finite differences appear only in tests). Convexity is
//! certified constructively for quadratic and polynomial kinds; builtin
//! analytic kinds carry a user-asserted flag.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::rng;
use crate::{Error, Result};

/// Step used for dense-grid scans of univariate polynomials, as a fraction
/// of the radius: the grid has `2 * POLY_GRID_STEPS + 1` nodes on `[-r, r]`.
const POLY_GRID_STEPS: usize = 10_000;

/// Tolerance for the ball membership test.
pub const BALL_TOL: f64 = 1e-9;

/// Symmetry tolerance for matrices read from problem files.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Closed ball centered at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ball {
    dimension: usize,
    radius: f64,
}

impl Ball {
    pub fn new(dimension: usize, radius: f64) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidProblem("dimension must be positive".into()));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidProblem(format!(
                "radius must be a positive real, got {radius}"
            )));
        }
        Ok(Ball { dimension, radius })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Membership test, exact up to [`BALL_TOL`].
    pub fn contains(&self, x: &DVector<f64>) -> bool {
        x.len() == self.dimension && x.norm() <= self.radius + BALL_TOL
    }

    /// Strict interiority test used where first-order conditions require it.
    pub fn strictly_contains(&self, x: &DVector<f64>) -> bool {
        x.len() == self.dimension && self.radius - x.norm() > BALL_TOL
    }

    /// Euclidean projection onto the ball.
    pub fn project(&self, x: &DVector<f64>) -> DVector<f64> {
        let norm = x.norm();
        if norm <= self.radius {
            x.clone()
        } else {
            x * (self.radius / norm)
        }
    }

    pub fn check_point(&self, x: &DVector<f64>) -> Result<()> {
        if x.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got: x.len(),
            });
        }
        if !self.contains(x) {
            return Err(Error::PointOutsideBall {
                norm: x.norm(),
                radius: self.radius,
            });
        }
        Ok(())
    }
}

/// Named analytic functions with closed-form gradients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Builtin {
    /// `sum_i exp(x_i)`, convex.
    ExpSum,
    /// `log(sum_i exp(x_i))`, convex.
    LogSumExp,
}

impl Builtin {
    pub fn name(&self) -> &'static str {
        match self {
            Builtin::ExpSum => "exp_sum",
            Builtin::LogSumExp => "log_sum_exp",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "exp_sum" => Ok(Builtin::ExpSum),
            "log_sum_exp" => Ok(Builtin::LogSumExp),
            other => Err(Error::InvalidProblem(format!(
                "unknown builtin function '{other}'"
            ))),
        }
    }

    fn eval(&self, x: &DVector<f64>) -> f64 {
        match self {
            Builtin::ExpSum => x.iter().map(|v| v.exp()).sum(),
            Builtin::LogSumExp => {
                let m = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                m + x.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
            }
        }
    }

    fn grad(&self, x: &DVector<f64>) -> DVector<f64> {
        match self {
            Builtin::ExpSum => x.map(|v| v.exp()),
            Builtin::LogSumExp => {
                let m = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let w = x.map(|v| (v - m).exp());
                let s: f64 = w.iter().sum();
                w / s
            }
        }
    }
}

/// Scalar function descriptor; the kinds the problem format supports.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarFn {
    /// `0.5 x'Qx + b'x + c` with `Q` symmetric.
    Quadratic {
        q: DMatrix<f64>,
        b: DVector<f64>,
        c: f64,
    },
    /// Univariate polynomial, ascending coefficients; only for `n = 1`.
    Polynomial { coeffs: Vec<f64> },
    /// Named analytic function with a user-asserted convexity flag.
    Builtin { which: Builtin, convex: bool },
}

/// Per-component gradient data computed at construction time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradInfo {
    /// Lipschitz constant of the gradient on the ball (estimate for builtins).
    pub lip_grad: f64,
    /// Upper bound on the gradient norm over the ball.
    pub grad_sup: f64,
    /// Lower curvature bound: `lambda_min(Q)` for quadratics, `min p''` on the
    /// scan grid for polynomials, `NaN` for builtins (not certified).
    pub curvature_lb: f64,
    /// True when `lip_grad` is a sampled estimate rather than exact.
    pub is_estimate: bool,
    /// Scan-grid step when a dense grid was used.
    pub grid_step: Option<f64>,
}

impl ScalarFn {
    pub fn quadratic(q: DMatrix<f64>, b: DVector<f64>, c: f64) -> Result<Self> {
        if !q.is_square() || q.nrows() != b.len() {
            return Err(Error::InvalidProblem(
                "quadratic descriptor has inconsistent shapes".into(),
            ));
        }
        for i in 0..q.nrows() {
            for j in (i + 1)..q.ncols() {
                if (q[(i, j)] - q[(j, i)]).abs() > SYMMETRY_TOL {
                    return Err(Error::InvalidProblem(format!(
                        "matrix not symmetric at ({i},{j}): {} vs {}",
                        q[(i, j)],
                        q[(j, i)]
                    )));
                }
            }
        }
        Ok(ScalarFn::Quadratic { q, b, c })
    }

    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        ScalarFn::Polynomial { coeffs }
    }

    pub fn dimension_ok(&self, n: usize) -> bool {
        match self {
            ScalarFn::Quadratic { q, .. } => q.nrows() == n,
            ScalarFn::Polynomial { .. } => n == 1,
            ScalarFn::Builtin { .. } => true,
        }
    }

    pub fn eval(&self, x: &DVector<f64>) -> f64 {
        match self {
            ScalarFn::Quadratic { q, b, c } => 0.5 * (q * x).dot(x) + b.dot(x) + c,
            ScalarFn::Polynomial { coeffs } => poly_eval(coeffs, x[0]),
            ScalarFn::Builtin { which, .. } => which.eval(x),
        }
    }

    pub fn grad(&self, x: &DVector<f64>) -> DVector<f64> {
        match self {
            ScalarFn::Quadratic { q, b, .. } => q * x + b,
            ScalarFn::Polynomial { coeffs } => {
                DVector::from_element(1, poly_eval(&poly_derive(coeffs), x[0]))
            }
            ScalarFn::Builtin { which, .. } => which.grad(x),
        }
    }

    /// Constant Hessian when the descriptor has one (quadratics, and
    /// univariate polynomials of degree at most two).
    pub fn hessian_constant(&self) -> Option<DMatrix<f64>> {
        match self {
            ScalarFn::Quadratic { q, .. } => Some(q.clone()),
            ScalarFn::Polynomial { coeffs } => {
                if coeffs.len() <= 3 {
                    let h = coeffs.get(2).copied().unwrap_or(0.0) * 2.0;
                    Some(DMatrix::from_element(1, 1, h))
                } else {
                    None
                }
            }
            ScalarFn::Builtin { .. } => None,
        }
    }

    /// Ascending polynomial coefficients when representable (`n = 1`).
    pub fn as_poly_coeffs(&self) -> Option<Vec<f64>> {
        match self {
            ScalarFn::Polynomial { coeffs } => Some(coeffs.clone()),
            ScalarFn::Quadratic { q, b, c } if q.nrows() == 1 => {
                Some(vec![*c, b[0], 0.5 * q[(0, 0)]])
            }
            _ => None,
        }
    }

    /// Descriptor-level sum; exact for quadratics of any dimension and for
    /// anything polynomial-representable in one dimension.
    pub fn add(&self, other: &ScalarFn) -> Result<ScalarFn> {
        if let (
            ScalarFn::Quadratic { q, b, c },
            ScalarFn::Quadratic {
                q: q2,
                b: b2,
                c: c2,
            },
        ) = (self, other)
        {
            if q.nrows() != q2.nrows() {
                return Err(Error::DimensionMismatch {
                    expected: q.nrows(),
                    got: q2.nrows(),
                });
            }
            return Ok(ScalarFn::Quadratic {
                q: q + q2,
                b: b + b2,
                c: c + c2,
            });
        }
        match (self.as_poly_coeffs(), other.as_poly_coeffs()) {
            (Some(a), Some(b)) => {
                let mut out = vec![0.0; a.len().max(b.len())];
                for (i, v) in a.iter().enumerate() {
                    out[i] += v;
                }
                for (i, v) in b.iter().enumerate() {
                    out[i] += v;
                }
                Ok(ScalarFn::Polynomial { coeffs: out })
            }
            _ => Err(Error::UnsupportedPerturbation {
                detail: format!("{} + {}", self.kind_name(), other.kind_name()),
            }),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            ScalarFn::Quadratic { .. } => "quadratic",
            ScalarFn::Polynomial { .. } => "polynomial",
            ScalarFn::Builtin { .. } => "builtin",
        }
    }

    /// Gradient data over the given ball. Exact for quadratics (spectral
    /// norm) and polynomials (dense scan, step reported); sampled upper
    /// estimate for builtins, from a fixed internal stream.
    pub fn grad_info(&self, ball: &Ball) -> GradInfo {
        let r = ball.radius();
        match self {
            ScalarFn::Quadratic { q, b, .. } => {
                let eig = q.clone().symmetric_eigen().eigenvalues;
                let lip = eig.iter().fold(0.0f64, |a, v| a.max(v.abs()));
                let lam_min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
                GradInfo {
                    lip_grad: lip,
                    grad_sup: lip * r + b.norm(),
                    curvature_lb: lam_min,
                    is_estimate: false,
                    grid_step: None,
                }
            }
            ScalarFn::Polynomial { coeffs } => {
                let d1 = poly_derive(coeffs);
                let d2 = poly_derive(&d1);
                let step = r / POLY_GRID_STEPS as f64;
                let mut lip = 0.0f64;
                let mut sup = 0.0f64;
                let mut curv = f64::INFINITY;
                for k in 0..=(2 * POLY_GRID_STEPS) {
                    let x = -r + step * k as f64;
                    sup = sup.max(poly_eval(&d1, x).abs());
                    let h = poly_eval(&d2, x);
                    lip = lip.max(h.abs());
                    curv = curv.min(h);
                }
                GradInfo {
                    lip_grad: lip,
                    grad_sup: sup,
                    curvature_lb: curv,
                    is_estimate: false,
                    grid_step: Some(step),
                }
            }
            ScalarFn::Builtin { .. } => {
                // Sampled upper estimate; fixed stream keeps it deterministic.
                let mut rng = rng::stream(0x5eed, "builtin-lip", 0);
                let n = ball.dimension();
                let mut lip = 0.0f64;
                let mut sup = 0.0f64;
                for _ in 0..400 {
                    let x = rng::uniform_in_ball(&mut rng, n, r);
                    let y = rng::uniform_in_ball(&mut rng, n, r);
                    let gx = self.grad(&x);
                    sup = sup.max(gx.norm());
                    let d = (&x - &y).norm();
                    if d > 1e-9 {
                        lip = lip.max((gx - self.grad(&y)).norm() / d);
                    }
                }
                // Boundary spikes dominate for exponentials; probe directions.
                for k in 0..64 {
                    let dir = rng::uniform_direction(&mut rng, n);
                    let x = dir * (r * (k as f64 + 1.0) / 64.0);
                    sup = sup.max(self.grad(&x).norm());
                }
                GradInfo {
                    lip_grad: lip * 1.05,
                    grad_sup: sup * 1.05,
                    curvature_lb: f64::NAN,
                    is_estimate: true,
                    grid_step: None,
                }
            }
        }
    }
}

fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn poly_derive(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| k as f64 * c)
        .collect()
}

/// Convexity certificate attached to a [`VectorFunction`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Convexity {
    /// Every component strongly convex; modulus is the smallest `alpha_i`
    /// in `f((1-t)x + tx') <= (1-t)f(x) + tf(x') - alpha (1-t) t |x-x'|^2`.
    StronglyConvex { modulus: f64 },
    Convex,
    Uncertified,
}

impl Convexity {
    pub fn is_convex(&self) -> bool {
        matches!(self, Convexity::Convex | Convexity::StronglyConvex { .. })
    }

    pub fn strong_modulus(&self) -> Option<f64> {
        match self {
            Convexity::StronglyConvex { modulus } => Some(*modulus),
            _ => None,
        }
    }
}

/// An `m`-component objective on a closed ball with exact gradient oracles
/// and a convexity certificate computed at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorFunction {
    ball: Ball,
    components: Vec<ScalarFn>,
    grad_info: Vec<GradInfo>,
    convexity: Convexity,
}

impl VectorFunction {
    pub fn new(ball: Ball, components: Vec<ScalarFn>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidProblem(
                "objective needs at least one component".into(),
            ));
        }
        for (i, c) in components.iter().enumerate() {
            if !c.dimension_ok(ball.dimension()) {
                return Err(Error::InvalidProblem(format!(
                    "component {} does not match dimension {} (polynomial kind requires n = 1)",
                    i + 1,
                    ball.dimension()
                )));
            }
        }
        let grad_info: Vec<GradInfo> = components.iter().map(|c| c.grad_info(&ball)).collect();
        let convexity = certify(&components, &grad_info);
        Ok(VectorFunction {
            ball,
            components,
            grad_info,
            convexity,
        })
    }

    pub fn ball(&self) -> &Ball {
        &self.ball
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[ScalarFn] {
        &self.components
    }

    pub fn convexity(&self) -> Convexity {
        self.convexity
    }

    pub fn grad_info(&self) -> &[GradInfo] {
        &self.grad_info
    }

    /// Upper bound on `max_i sup_ball |grad f_i|`.
    pub fn grad_sup_bound(&self) -> f64 {
        self.grad_info.iter().fold(0.0, |a, g| a.max(g.grad_sup))
    }

    pub fn require_convex(&self) -> Result<()> {
        if self.convexity.is_convex() {
            Ok(())
        } else {
            Err(Error::NonConvexInput)
        }
    }

    /// Componentwise values `(f_1(x), ..., f_m(x))`.
    pub fn eval(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        self.ball.check_point(x)?;
        Ok(DVector::from_iterator(
            self.components.len(),
            self.components.iter().map(|c| c.eval(x)),
        ))
    }

    /// Exact gradient of component `index` (1-based) at `x`.
    pub fn grad(&self, index: usize, x: &DVector<f64>) -> Result<DVector<f64>> {
        self.ball.check_point(x)?;
        if index == 0 || index > self.components.len() {
            return Err(Error::BadComponentIndex {
                index,
                m: self.components.len(),
            });
        }
        Ok(self.components[index - 1].grad(x))
    }

    /// All component gradients at `x`, tilted by `p` when given.
    pub fn gradients_tilted(&self, x: &DVector<f64>, p: Option<&DVector<f64>>) -> Result<Vec<DVector<f64>>> {
        self.ball.check_point(x)?;
        if let Some(p) = p {
            if p.len() != self.ball.dimension() {
                return Err(Error::DimensionMismatch {
                    expected: self.ball.dimension(),
                    got: p.len(),
                });
            }
        }
        Ok(self
            .components
            .iter()
            .map(|c| {
                let g = c.grad(x);
                match p {
                    Some(p) => g - p,
                    None => g,
                }
            })
            .collect())
    }
}

fn certify(components: &[ScalarFn], info: &[GradInfo]) -> Convexity {
    let mut modulus = f64::INFINITY;
    let mut all_strong = true;
    let mut all_convex = true;
    for (c, gi) in components.iter().zip(info) {
        match c {
            ScalarFn::Builtin { convex, .. } => {
                all_strong = false;
                if !convex {
                    all_convex = false;
                }
            }
            _ => {
                if gi.curvature_lb > 0.0 {
                    modulus = modulus.min(gi.curvature_lb / 2.0);
                } else {
                    all_strong = false;
                    if gi.curvature_lb < -SYMMETRY_TOL {
                        all_convex = false;
                    }
                }
            }
        }
    }
    if all_strong && modulus.is_finite() {
        Convexity::StronglyConvex { modulus }
    } else if all_convex {
        Convexity::Convex
    } else {
        Convexity::Uncertified
    }
}

/// The objective tilted by `p`: component `i` is `f_i(x) - <p, x>`.
#[derive(Debug, Clone, PartialEq)]
pub struct TiltedProblem {
    f: VectorFunction,
    p: DVector<f64>,
}

impl TiltedProblem {
    pub fn f(&self) -> &VectorFunction {
        &self.f
    }

    pub fn tilt_vector(&self) -> &DVector<f64> {
        &self.p
    }

    pub fn eval(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        let base = self.f.eval(x)?;
        let shift = self.p.dot(x);
        Ok(base.map(|v| v - shift))
    }

    pub fn grad(&self, index: usize, x: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(self.f.grad(index, x)? - &self.p)
    }
}

/// Builds the tilted problem `f^p`.
pub fn tilt(f: &VectorFunction, p: &DVector<f64>) -> Result<TiltedProblem> {
    if p.len() != f.ball().dimension() {
        return Err(Error::DimensionMismatch {
            expected: f.ball().dimension(),
            got: p.len(),
        });
    }
    Ok(TiltedProblem {
        f: f.clone(),
        p: p.clone(),
    })
}

/// A scalar perturbation `h` defining `g = f + h e`, with its
/// gradient-Lipschitz modulus over the ball.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationH {
    ball: Ball,
    h: ScalarFn,
    info: GradInfo,
}

impl PerturbationH {
    pub fn new(ball: Ball, h: ScalarFn) -> Result<Self> {
        if !h.dimension_ok(ball.dimension()) {
            return Err(Error::InvalidProblem(
                "perturbation does not match the ball dimension".into(),
            ));
        }
        let info = h.grad_info(&ball);
        Ok(PerturbationH { ball, h, info })
    }

    pub fn ball(&self) -> &Ball {
        &self.ball
    }

    pub fn descriptor(&self) -> &ScalarFn {
        &self.h
    }

    /// `lip(grad h; B(0,r))`; exact for quadratic and polynomial kinds.
    pub fn lip_grad(&self) -> f64 {
        self.info.lip_grad
    }

    /// Upper bound on `max_ball |grad h|`.
    pub fn grad_sup(&self) -> f64 {
        self.info.grad_sup
    }

    pub fn eval(&self, x: &DVector<f64>) -> f64 {
        self.h.eval(x)
    }

    pub fn grad_at(&self, x: &DVector<f64>) -> DVector<f64> {
        self.h.grad(x)
    }
}

/// Componentwise perturbation: `g_i = f_i + h` for every `i`, with the
/// convexity certificate recomputed from the merged descriptors.
pub fn perturb_componentwise(f: &VectorFunction, h: &PerturbationH) -> Result<VectorFunction> {
    if f.ball() != h.ball() {
        return Err(Error::DomainMismatch);
    }
    let components = f
        .components()
        .iter()
        .map(|c| c.add(h.descriptor()))
        .collect::<Result<Vec<_>>>()?;
    VectorFunction::new(*f.ball(), components)
}

/// A point of the standard simplex, `lambda_i >= 0`, `sum = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexWeight(DVector<f64>);

impl SimplexWeight {
    pub fn new(lambda: DVector<f64>) -> Result<Self> {
        if lambda.is_empty() {
            return Err(Error::InvalidProblem("empty weight vector".into()));
        }
        if lambda.iter().any(|&v| v < 0.0) {
            return Err(Error::InvalidProblem(
                "simplex weights must be nonnegative".into(),
            ));
        }
        let sum: f64 = lambda.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidProblem(format!(
                "simplex weights sum to {sum}, expected 1 within 1e-12"
            )));
        }
        Ok(SimplexWeight(lambda))
    }

    pub fn vertex(m: usize, i: usize) -> Self {
        let mut v = DVector::zeros(m);
        v[i] = 1.0;
        SimplexWeight(v)
    }

    pub fn as_vector(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::ops::Index<usize> for SimplexWeight {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Uniform rational grid on the simplex: all `lambda = k/N` with
/// `sum k_i = N`, in lexicographic order.
pub fn simplex_grid(m: usize, subdivisions: usize) -> Result<Vec<SimplexWeight>> {
    const NODE_LIMIT: u128 = 20_000_000;
    if m == 0 {
        return Err(Error::InvalidProblem("m must be positive".into()));
    }
    let n = subdivisions.max(1);
    let nodes = binomial(n as u128 + m as u128 - 1, m as u128 - 1);
    if nodes > NODE_LIMIT {
        return Err(Error::GridTooLarge {
            nodes,
            limit: NODE_LIMIT,
        });
    }
    let mut out = Vec::with_capacity(nodes as usize);
    let mut counts = vec![0usize; m];
    fill_grid(&mut out, &mut counts, 0, n, n);
    Ok(out)
}

fn fill_grid(out: &mut Vec<SimplexWeight>, counts: &mut [usize], pos: usize, left: usize, n: usize) {
    if pos + 1 == counts.len() {
        counts[pos] = left;
        let lambda = DVector::from_iterator(
            counts.len(),
            counts.iter().map(|&k| k as f64 / n as f64),
        );
        out.push(SimplexWeight(lambda));
        return;
    }
    for k in 0..=left {
        counts[pos] = k;
        fill_grid(out, counts, pos + 1, left - k, n);
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Default simplex subdivisions per objective count.
pub fn default_grid_resolution(m: usize) -> usize {
    match m {
        0 | 1 => 1,
        2 => 200,
        3 => 40,
        _ => 10,
    }
}

// ---------------------------------------------------------------------------
// Problem specification file (JSON encoding of the nested key/value records)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum DescriptorFile {
    Quadratic {
        #[serde(rename = "Q")]
        q: Vec<Vec<f64>>,
        #[serde(default)]
        b: Option<Vec<f64>>,
        #[serde(default)]
        c: f64,
    },
    Polynomial { coeffs: Vec<f64> },
    Builtin {
        name: String,
        #[serde(default)]
        convex: bool,
    },
}

/// On-disk problem specification.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    dimension: usize,
    radius: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    center: Option<Vec<f64>>,
    objectives: Vec<DescriptorFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    perturbation: Option<DescriptorFile>,
}

fn descriptor_to_file(s: &ScalarFn) -> DescriptorFile {
    match s {
        ScalarFn::Quadratic { q, b, c } => DescriptorFile::Quadratic {
            q: (0..q.nrows())
                .map(|i| (0..q.ncols()).map(|j| q[(i, j)]).collect())
                .collect(),
            b: Some(b.iter().cloned().collect()),
            c: *c,
        },
        ScalarFn::Polynomial { coeffs } => DescriptorFile::Polynomial {
            coeffs: coeffs.clone(),
        },
        ScalarFn::Builtin { which, convex } => DescriptorFile::Builtin {
            name: which.name().to_string(),
            convex: *convex,
        },
    }
}

fn descriptor_from_file(d: &DescriptorFile, n: usize) -> Result<ScalarFn> {
    match d {
        DescriptorFile::Quadratic { q, b, c } => {
            if q.len() != n || q.iter().any(|row| row.len() != n) {
                return Err(Error::InvalidProblem(format!(
                    "Q must be {n}x{n} row-major"
                )));
            }
            let qm = DMatrix::from_fn(n, n, |i, j| q[i][j]);
            let bv = match b {
                Some(b) => {
                    if b.len() != n {
                        return Err(Error::InvalidProblem(format!("b must have length {n}")));
                    }
                    DVector::from_column_slice(b)
                }
                None => DVector::zeros(n),
            };
            ScalarFn::quadratic(qm, bv, *c)
        }
        DescriptorFile::Polynomial { coeffs } => {
            if n != 1 {
                return Err(Error::InvalidProblem(
                    "polynomial kind requires dimension 1".into(),
                ));
            }
            Ok(ScalarFn::polynomial(coeffs.clone()))
        }
        DescriptorFile::Builtin { name, convex } => Ok(ScalarFn::Builtin {
            which: Builtin::from_name(name)?,
            convex: *convex,
        }),
    }
}

impl ProblemFile {
    pub fn from_problem(f: &VectorFunction, h: Option<&PerturbationH>) -> Self {
        ProblemFile {
            dimension: f.ball().dimension(),
            radius: f.ball().radius(),
            center: None,
            objectives: f.components().iter().map(descriptor_to_file).collect(),
            perturbation: h.map(|h| descriptor_to_file(h.descriptor())),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidProblem(format!("parse error: {e}")))
    }

    pub fn to_json(&self) -> String {
        // Serialization of these records cannot fail.
        serde_json::to_string_pretty(self).expect("problem file serialization")
    }

    /// Builds the in-memory problem, rejecting non-origin centers.
    pub fn build(&self) -> Result<(VectorFunction, Option<PerturbationH>)> {
        if let Some(center) = &self.center {
            if center.len() != self.dimension {
                return Err(Error::InvalidProblem(format!(
                    "center must have length {}",
                    self.dimension
                )));
            }
            if center.iter().any(|&v| v != 0.0) {
                return Err(Error::InvalidProblem(
                    "only origin-centered balls are supported; remove the center field or set it to zeros".into(),
                ));
            }
        }
        let ball = Ball::new(self.dimension, self.radius)?;
        let components = self
            .objectives
            .iter()
            .map(|d| descriptor_from_file(d, self.dimension))
            .collect::<Result<Vec<_>>>()?;
        let f = VectorFunction::new(ball, components)?;
        let h = match &self.perturbation {
            Some(d) => Some(PerturbationH::new(
                ball,
                descriptor_from_file(d, self.dimension)?,
            )?),
            None => None,
        };
        Ok((f, h))
    }
}
