//! Gradient hulls, their minimal-norm elements, and hull Lipschitz constants.
//!
//! The minimal-norm point of the convex hull of the component gradients
//! realizes `s(x) = d(0, H(x))`; its negation is the witness field `v(x)`
//! used to construct positivity tilts. The solver is a Wolfe-style
//! active-set iteration: deterministic, with ties in the linear-minimization
//! step broken by lowest vertex index.

use nalgebra::{DMatrix, DVector};

use crate::problem::{SimplexWeight, VectorFunction};
use crate::{Error, Result};

/// Relative Wolfe-gap stopping tolerance.
const GAP_TOL: f64 = 1e-10;
/// Coefficients at or below this are dropped from the corral.
const DROP_TOL: f64 = 1e-12;

/// Convex hull of gradient vectors at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientHull {
    vertices: Vec<DVector<f64>>,
}

impl GradientHull {
    pub fn new(vertices: Vec<DVector<f64>>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptyVertexList);
        }
        let n = vertices[0].len();
        if vertices.iter().any(|v| v.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: vertices.iter().map(|v| v.len()).find(|&l| l != n).unwrap(),
            });
        }
        Ok(GradientHull { vertices })
    }

    pub fn vertices(&self) -> &[DVector<f64>] {
        &self.vertices
    }
}

/// Hull of `{grad f_i(x) - p}`; with `p = None` the unperturbed hull.
pub fn gradient_hull(
    f: &VectorFunction,
    x: &DVector<f64>,
    p: Option<&DVector<f64>>,
) -> Result<GradientHull> {
    GradientHull::new(f.gradients_tilted(x, p)?)
}

/// Minimal-norm element of a hull with its simplex coefficients.
#[derive(Debug, Clone)]
pub struct MinNormResult {
    /// Nearest point of the hull to the origin.
    pub point: DVector<f64>,
    /// Its norm, `d(0, hull)`.
    pub norm: f64,
    /// Coefficients over the full vertex list (zero off the active set).
    pub coefficients: SimplexWeight,
    /// Normalized Wolfe gap at termination.
    pub gap: f64,
    pub iterations: usize,
}

/// Nearest point of `conv(vertices)` to the origin (Wolfe active-set
/// iteration). Terminates when the Wolfe gap drops below
/// `1e-10 * (1 + |x|^2)` and errs after `10 * m * n` iterations.
pub fn min_norm_point(vertices: &[DVector<f64>]) -> Result<MinNormResult> {
    let hull = GradientHull::new(vertices.to_vec())?;
    let vertices = hull.vertices();
    let m = vertices.len();
    let n = vertices[0].len();
    let max_iter = 10 * m * n;

    // Start from the vertex of least norm, lowest index on ties.
    let mut start = 0usize;
    for (i, v) in vertices.iter().enumerate() {
        if v.norm_squared() < vertices[start].norm_squared() - 0.0 {
            start = i;
        }
    }
    let mut corral: Vec<usize> = vec![start];
    let mut weights: Vec<f64> = vec![1.0];
    let mut x = vertices[start].clone();

    let mut iterations = 0usize;
    loop {
        // Linear minimization oracle over all vertices.
        let mut j = 0usize;
        let mut best = f64::INFINITY;
        for (i, v) in vertices.iter().enumerate() {
            let d = x.dot(v);
            if d < best - 0.0 {
                best = d;
                j = i;
            }
        }
        let xsq = x.norm_squared();
        let gap = (xsq - best) / (1.0 + xsq);
        if gap <= GAP_TOL || corral.contains(&j) {
            return Ok(finish(vertices, &corral, &weights, x, gap, iterations));
        }
        corral.push(j);
        weights.push(0.0);

        // Minor cycle: move to the min-norm point of the corral's hull.
        loop {
            iterations += 1;
            if iterations > max_iter {
                return Err(Error::MinNormNonConvergence {
                    gap,
                    iterations,
                });
            }
            let alpha = match affine_min_norm(vertices, &corral) {
                Some(a) => a,
                None => {
                    // Affinely dependent corral; drop the lightest member.
                    drop_lightest(&mut corral, &mut weights);
                    if corral.len() == 1 {
                        x = vertices[corral[0]].clone() * weights[0];
                        break;
                    }
                    continue;
                }
            };
            if alpha.iter().all(|&a| a >= -DROP_TOL) {
                weights = alpha.iter().map(|&a| a.max(0.0)).collect();
                normalize(&mut weights);
                x = combine(vertices, &corral, &weights);
                break;
            }
            // Step toward the affine solution until a coefficient hits zero.
            let mut theta = 1.0f64;
            for (w, &a) in weights.iter().zip(alpha.iter()) {
                if a < *w {
                    let t = w / (w - a);
                    if t < theta {
                        theta = t;
                    }
                }
            }
            for (w, &a) in weights.iter_mut().zip(alpha.iter()) {
                *w = (1.0 - theta) * *w + theta * a;
            }
            let mut k = 0;
            while k < corral.len() {
                if weights[k] <= DROP_TOL && corral.len() > 1 {
                    corral.remove(k);
                    weights.remove(k);
                } else {
                    k += 1;
                }
            }
            normalize(&mut weights);
            x = combine(vertices, &corral, &weights);
        }
    }
}

fn finish(
    vertices: &[DVector<f64>],
    corral: &[usize],
    weights: &[f64],
    x: DVector<f64>,
    gap: f64,
    iterations: usize,
) -> MinNormResult {
    let mut full = DVector::zeros(vertices.len());
    for (&i, &w) in corral.iter().zip(weights.iter()) {
        full[i] += w;
    }
    let sum: f64 = full.iter().sum();
    if sum > 0.0 {
        full /= sum;
    }
    let coefficients = SimplexWeight::new(full).expect("normalized corral weights");
    MinNormResult {
        norm: x.norm(),
        point: x,
        coefficients,
        gap,
        iterations,
    }
}

fn combine(vertices: &[DVector<f64>], corral: &[usize], weights: &[f64]) -> DVector<f64> {
    let mut x = DVector::zeros(vertices[0].len());
    for (&i, &w) in corral.iter().zip(weights.iter()) {
        x += &vertices[i] * w;
    }
    x
}

fn normalize(weights: &mut [f64]) {
    let sum: f64 = weights.iter().sum();
    if sum > 0.0 {
        for w in weights.iter_mut() {
            *w /= sum;
        }
    }
}

fn drop_lightest(corral: &mut Vec<usize>, weights: &mut Vec<f64>) {
    if corral.len() <= 1 {
        return;
    }
    let mut k = 0;
    for (i, w) in weights.iter().enumerate() {
        if *w < weights[k] {
            k = i;
        }
    }
    corral.remove(k);
    weights.remove(k);
    normalize(weights);
}

/// Min-norm point of the affine hull of the selected vertices, as
/// barycentric coordinates; `None` when the bordered Gram system is singular.
fn affine_min_norm(vertices: &[DVector<f64>], corral: &[usize]) -> Option<Vec<f64>> {
    let k = corral.len();
    let mut sys = DMatrix::zeros(k + 1, k + 1);
    for a in 0..k {
        for b in 0..k {
            sys[(a, b)] = vertices[corral[a]].dot(&vertices[corral[b]]);
        }
        sys[(a, k)] = 1.0;
        sys[(k, a)] = 1.0;
    }
    let mut rhs = DVector::zeros(k + 1);
    rhs[k] = 1.0;
    let sol = sys.lu().solve(&rhs)?;
    let alpha: Vec<f64> = sol.iter().take(k).cloned().collect();
    if alpha.iter().any(|a| !a.is_finite()) {
        return None;
    }
    Some(alpha)
}

/// `s_{f^p}(x)`: distance from the origin to the hull of `{grad f_i(x) - p}`.
pub fn s(f: &VectorFunction, p: &DVector<f64>, x: &DVector<f64>) -> Result<f64> {
    let hull = gradient_hull(f, x, Some(p))?;
    Ok(min_norm_point(hull.vertices())?.norm)
}

/// `v(x)`: the negation of the minimal-norm element of the unperturbed hull.
pub fn v(f: &VectorFunction, x: &DVector<f64>) -> Result<DVector<f64>> {
    let hull = gradient_hull(f, x, None)?;
    Ok(-min_norm_point(hull.vertices())?.point)
}

/// Hull Lipschitz data: `K = max_i lip(grad f_i; B(0,r))`.
#[derive(Debug, Clone, PartialEq)]
pub struct HullLipschitz {
    pub k: f64,
    pub per_component: Vec<f64>,
    /// Scan-grid step when any component used a dense grid.
    pub grid_step: Option<f64>,
    /// True when any component constant is a sampled estimate.
    pub is_estimate: bool,
}

pub fn hull_lipschitz_constant(f: &VectorFunction) -> HullLipschitz {
    let per_component: Vec<f64> = f.grad_info().iter().map(|g| g.lip_grad).collect();
    let k = per_component.iter().fold(0.0f64, |a, &v| a.max(v));
    let grid_step = f.grad_info().iter().find_map(|g| g.grid_step);
    let is_estimate = f.grad_info().iter().any(|g| g.is_estimate);
    HullLipschitz {
        k,
        per_component,
        grid_step,
        is_estimate,
    }
}

/// One-sided excess `e(conv(a), conv(b))`, exact via min-norm projections
/// of the vertices of `a` onto `conv(b)`.
pub fn hull_excess(a: &[DVector<f64>], b: &[DVector<f64>]) -> Result<f64> {
    let mut worst = 0.0f64;
    for va in a {
        let shifted: Vec<DVector<f64>> = b.iter().map(|vb| vb - va).collect();
        worst = worst.max(min_norm_point(&shifted)?.norm);
    }
    Ok(worst)
}

/// Hausdorff distance between two vertex-represented hulls.
pub fn hull_hausdorff(a: &[DVector<f64>], b: &[DVector<f64>]) -> Result<f64> {
    Ok(hull_excess(a, b)?.max(hull_excess(b, a)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{Ball, ScalarFn};
    use nalgebra::dvector;

    fn x2_x4() -> VectorFunction {
        VectorFunction::new(
            Ball::new(1, 1.0).unwrap(),
            vec![
                ScalarFn::polynomial(vec![0.0, 0.0, 1.0]),
                ScalarFn::polynomial(vec![0.0, 0.0, 0.0, 0.0, 1.0]),
            ],
        )
        .unwrap()
    }

    fn biobjective() -> VectorFunction {
        let q = DMatrix::from_element(1, 1, 2.0);
        VectorFunction::new(
            Ball::new(1, 2.0).unwrap(),
            vec![
                ScalarFn::quadratic(q.clone(), DVector::zeros(1), 0.0).unwrap(),
                ScalarFn::quadratic(q, DVector::from_element(1, -2.0), 1.0).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn projects_origin_onto_segment() {
        let r = min_norm_point(&[dvector![1.0, 0.0], dvector![0.0, 1.0]]).unwrap();
        assert!((r.point[0] - 0.5).abs() < 1e-12);
        assert!((r.point[1] - 0.5).abs() < 1e-12);
        assert!((r.norm - 0.5f64.sqrt() * 1.0).abs() < 1e-12);
        // point = sum of coefficients * vertices
        assert!((r.coefficients[0] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn symmetric_interval_gives_zero() {
        let r = min_norm_point(&[dvector![-1.0], dvector![1.0]]).unwrap();
        assert!(r.norm < 1e-12);
    }

    #[test]
    fn interior_origin_gives_exact_zero() {
        let r = min_norm_point(&[dvector![-3.0], dvector![-1.0, ]]).unwrap();
        assert!((r.norm - 1.0).abs() < 1e-12);
        let r = min_norm_point(&[dvector![1.0, 1.0], dvector![-2.0, 0.5], dvector![0.5, -2.0]])
            .unwrap();
        assert!(r.norm < 1e-9);
    }

    #[test]
    fn wolfe_optimality_holds() {
        let vs = vec![dvector![1.0, 1.0], dvector![2.0, 0.0], dvector![3.0, 3.0]];
        let r = min_norm_point(&vs).unwrap();
        for v in &vs {
            assert!(r.point.dot(&(v - &r.point)) >= -1e-9);
        }
        // reconstruction from coefficients
        let mut rec = DVector::zeros(2);
        for (i, v) in vs.iter().enumerate() {
            rec += v * r.coefficients[i];
        }
        assert!((rec - &r.point).norm() < 1e-9);
    }

    #[test]
    fn empty_and_mismatched_inputs_error() {
        assert!(matches!(min_norm_point(&[]), Err(Error::EmptyVertexList)));
        assert!(matches!(
            min_norm_point(&[dvector![1.0], dvector![1.0, 2.0]]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn invariant_under_permutation_and_duplicates() {
        let vs = vec![dvector![1.0, 1.0], dvector![2.0, 0.0], dvector![3.0, 3.0]];
        let base = min_norm_point(&vs).unwrap().norm;
        let perm = vec![vs[2].clone(), vs[0].clone(), vs[1].clone()];
        assert!((min_norm_point(&perm).unwrap().norm - base).abs() < 1e-9);
        let mut dup = vs.clone();
        dup.push(vs[1].clone());
        dup.push(vs[0].clone());
        assert!((min_norm_point(&dup).unwrap().norm - base).abs() < 1e-9);
    }

    #[test]
    fn s_examples() {
        let b = biobjective();
        let p0 = dvector![0.0];
        assert!(s(&b, &p0, &dvector![0.25]).unwrap() < 1e-12);
        assert!((s(&b, &p0, &dvector![-0.5]).unwrap() - 1.0).abs() < 1e-12);

        // m = 1: tilting by the only gradient cancels it.
        let single = VectorFunction::new(
            Ball::new(1, 1.0).unwrap(),
            vec![ScalarFn::quadratic(
                DMatrix::from_element(1, 1, 2.0),
                DVector::zeros(1),
                0.0,
            )
            .unwrap()],
        )
        .unwrap();
        let x = dvector![0.3];
        let p = single.grad(1, &x).unwrap();
        assert!(s(&single, &p, &x).unwrap() < 1e-12);
    }

    #[test]
    fn v_examples() {
        let b = biobjective();
        assert!((v(&b, &dvector![-0.5]).unwrap()[0] - 1.0).abs() < 1e-12);
        assert!(v(&b, &dvector![0.5]).unwrap()[0].abs() < 1e-12);
        let f = x2_x4();
        assert!((v(&f, &dvector![0.5]).unwrap()[0] + 0.5).abs() < 1e-12);
    }

    #[test]
    fn tilt_identity_on_hulls() {
        // s(f, p, x) equals the min-norm of H_f(x) - p computed directly.
        let f = x2_x4();
        let mut rng = crate::rng::stream(5, "tilt-identity", 0);
        for _ in 0..50 {
            let x = crate::rng::uniform_in_ball(&mut rng, 1, 1.0);
            let p = crate::rng::uniform_in_ball(&mut rng, 1, 0.5);
            let direct = s(&f, &p, &x).unwrap();
            let hull = gradient_hull(&f, &x, None).unwrap();
            let shifted: Vec<DVector<f64>> =
                hull.vertices().iter().map(|g| g - &p).collect();
            let via_shift = min_norm_point(&shifted).unwrap().norm;
            assert!((direct - via_shift).abs() < 1e-12);
        }
    }

    #[test]
    fn hull_lipschitz_examples() {
        let b = biobjective();
        assert!((hull_lipschitz_constant(&b).k - 2.0).abs() < 1e-12);

        let f = x2_x4();
        let hl = hull_lipschitz_constant(&f);
        assert!((hl.k - 12.0).abs() < 1e-6);
        assert!(hl.grid_step.is_some());

        let single = VectorFunction::new(
            Ball::new(2, 1.0).unwrap(),
            vec![ScalarFn::quadratic(
                DMatrix::from_diagonal(&dvector![2.0, 2.0]),
                DVector::zeros(2),
                0.0,
            )
            .unwrap()],
        )
        .unwrap();
        assert!((hull_lipschitz_constant(&single).k - 2.0).abs() < 1e-12);
    }

    #[test]
    fn s_is_lipschitz_with_constant_k() {
        for f in [x2_x4(), biobjective()] {
            let k = hull_lipschitz_constant(&f).k;
            let r = f.ball().radius();
            let p0 = DVector::zeros(1);
            let mut rng = crate::rng::stream(9, "s-lip", 0);
            for _ in 0..200 {
                let x = crate::rng::uniform_in_ball(&mut rng, 1, r);
                let y = crate::rng::uniform_in_ball(&mut rng, 1, r);
                let sx = s(&f, &p0, &x).unwrap();
                let sy = s(&f, &p0, &y).unwrap();
                assert!((sx - sy).abs() <= (k + 1e-6) * (&x - &y).norm() + 1e-12);
            }
        }
    }

    #[test]
    fn hulls_are_lipschitz_with_constant_k() {
        let f = biobjective();
        let k = hull_lipschitz_constant(&f).k;
        let mut rng = crate::rng::stream(13, "hull-lip", 0);
        for _ in 0..100 {
            let x = crate::rng::uniform_in_ball(&mut rng, 1, 2.0);
            let y = crate::rng::uniform_in_ball(&mut rng, 1, 2.0);
            let hx = gradient_hull(&f, &x, None).unwrap();
            let hy = gradient_hull(&f, &y, None).unwrap();
            let d = hull_hausdorff(hx.vertices(), hy.vertices()).unwrap();
            assert!(d <= k * (&x - &y).norm() + 1e-6);
        }
    }
}
