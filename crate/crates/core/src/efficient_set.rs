//! Point-cloud approximations of weakly efficient solution sets on the ball.
//!
//! For certified convex objectives every weakly efficient point minimizes
//! some simplex-weighted scalarization, so sweeping a uniform simplex grid
//! reaches the whole set. Each produced point carries a first-order
//! membership certificate; points that fail it are discarded and counted.

use nalgebra::{DMatrix, DVector};

use crate::exec;
use crate::minnorm;
use crate::problem::{simplex_grid, Ball, ScalarFn, SimplexWeight, VectorFunction};
use crate::rng;
use crate::{Error, Result};

/// Membership certificate tolerance, one order above the scalar-solver stop
/// tolerance to absorb accumulated rounding.
pub const MEMBERSHIP_TOL: f64 = 1e-7;
/// Stop tolerance of the scalarized solvers.
pub const SOLVER_TOL: f64 = 1e-10;
/// Points closer than this collapse in deduplication.
pub const DEDUP_RADIUS: f64 = 1e-7;
/// Clouds must stay this far from the boundary to count as interior.
pub const INTERIOR_MARGIN: f64 = 1e-6;

const PGD_MAX_ITER: usize = 100_000;

/// A finite sample of `WE_f(p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    /// Certified points, sorted lexicographically, deduplicated.
    pub points: Vec<DVector<f64>>,
    /// Upper bound on the distance from any true set point to the cloud;
    /// `None` when no strong-convexity certificate quantifies it.
    pub fill_distance: Option<f64>,
    /// The tilt this cloud approximates.
    pub tilt: DVector<f64>,
    /// Simplex-grid subdivisions used to produce it.
    pub grid_resolution: usize,
    /// Scalarization outputs dropped by certification or solver failure.
    pub discarded: usize,
}

impl PointCloud {
    pub fn max_norm(&self) -> f64 {
        self.points.iter().fold(0.0, |a, p| a.max(p.norm()))
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Delimited-text export: header with the tilt, grid resolution and fill
    /// distance, then one point per row, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let p = self
            .tilt
            .iter()
            .map(|v| format!("{v:.16e}"))
            .collect::<Vec<_>>()
            .join(";");
        let fill = match self.fill_distance {
            Some(f) => format!("{f:.16e}"),
            None => "unquantified".to_string(),
        };
        let mut out = format!(
            "# p={p}, grid_resolution={}, fill_distance={fill}\n",
            self.grid_resolution
        );
        for pt in &self.points {
            let row = pt
                .iter()
                .map(|v| format!("{v:.16e}"))
                .collect::<Vec<_>>()
                .join(",");
            out.push_str(&row);
            out.push('\n');
        }
        out
    }
}

/// Interiority threshold certificate: all tested tilts below `delta` kept
/// the solution cloud strictly inside the ball.
#[derive(Debug, Clone, PartialEq)]
pub struct InteriorityCertificate {
    pub delta: f64,
    /// Largest tilt magnitude probed (the first failing one).
    pub max_tested_tilt: f64,
    /// Minimum over passing probes of `r - max point norm`.
    pub witness_margin: f64,
}

struct WeightedProblem<'a> {
    f: &'a VectorFunction,
    p: &'a DVector<f64>,
    lambda: &'a SimplexWeight,
}

impl WeightedProblem<'_> {
    fn grad(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut g = DVector::zeros(x.len());
        for (i, c) in self.f.components().iter().enumerate() {
            let w = self.lambda[i];
            if w != 0.0 {
                g += c.grad(x) * w;
            }
        }
        g - self.p
    }

    fn lip(&self) -> f64 {
        self.f
            .grad_info()
            .iter()
            .enumerate()
            .map(|(i, gi)| self.lambda[i] * gi.lip_grad)
            .sum()
    }

    /// Weighted quadratic data when every component is quadratic.
    fn quadratic(&self) -> Option<(DMatrix<f64>, DVector<f64>)> {
        let n = self.f.ball().dimension();
        let mut q = DMatrix::zeros(n, n);
        let mut b = DVector::zeros(n);
        for (i, c) in self.f.components().iter().enumerate() {
            match c {
                ScalarFn::Quadratic { q: qi, b: bi, .. } => {
                    q += qi * self.lambda[i];
                    b += bi * self.lambda[i];
                }
                _ => return None,
            }
        }
        Some((q, b))
    }
}

/// Minimizer of `sum_i lambda_i (f_i(x) - <p, x>)` over the ball.
///
/// Quadratic objectives solve the stationarity system directly and polish
/// with projected gradient when the ball constraint binds. One-dimensional
/// convex objectives bisect the monotone scalarized derivative. Everything
/// else runs projected gradient with step `1/(K + lip)`.
pub fn scalar_minimize(
    f: &VectorFunction,
    p: &DVector<f64>,
    lambda: &SimplexWeight,
) -> Result<DVector<f64>> {
    f.require_convex()?;
    let ball = f.ball();
    if p.len() != ball.dimension() {
        return Err(Error::DimensionMismatch {
            expected: ball.dimension(),
            got: p.len(),
        });
    }
    if lambda.len() != f.num_components() {
        return Err(Error::ShapeMismatch {
            left: f.num_components(),
            right: lambda.len(),
        });
    }
    let w = WeightedProblem { f, p, lambda };

    if ball.dimension() == 1 {
        return Ok(bisect_univariate(&w, ball));
    }
    if let Some((q, b)) = w.quadratic() {
        let rhs = p - &b;
        if let Some(x) = q.clone().cholesky().map(|ch| ch.solve(&rhs)) {
            if x.iter().all(|v| v.is_finite()) {
                if ball.contains(&x) {
                    return Ok(x);
                }
                return projected_gradient(&w, ball, ball.project(&x));
            }
        }
    }
    projected_gradient(&w, ball, DVector::zeros(ball.dimension()))
}

/// Bisection on the nondecreasing scalarized derivative over `[-r, r]`.
fn bisect_univariate(w: &WeightedProblem<'_>, ball: &Ball) -> DVector<f64> {
    let r = ball.radius();
    let phi = |x: f64| w.grad(&DVector::from_element(1, x))[0];
    let (mut lo, mut hi) = (-r, r);
    let (glo, ghi) = (phi(lo), phi(hi));
    if glo >= 0.0 {
        return DVector::from_element(1, lo);
    }
    if ghi <= 0.0 {
        return DVector::from_element(1, hi);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= f64::EPSILON * r.max(1.0) {
            break;
        }
        if phi(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    DVector::from_element(1, 0.5 * (lo + hi))
}

fn projected_gradient(
    w: &WeightedProblem<'_>,
    ball: &Ball,
    start: DVector<f64>,
) -> Result<DVector<f64>> {
    let k = minnorm::hull_lipschitz_constant(w.f).k;
    let lip = w.lip();
    let denom = k + lip;
    if denom <= 1e-12 {
        // Purely linear scalarization: the minimizer sits on the boundary
        // against the gradient, or anywhere when the gradient vanishes.
        let g = w.grad(&DVector::zeros(ball.dimension()));
        let norm = g.norm();
        if norm <= 1e-15 {
            return Ok(DVector::zeros(ball.dimension()));
        }
        return Ok(-g * (ball.radius() / norm));
    }
    let step = 1.0 / denom;
    let mut x = start;
    for _ in 0..PGD_MAX_ITER {
        let next = ball.project(&(&x - w.grad(&x) * step));
        let residual = (&next - &x).norm() / step;
        x = next;
        if residual <= SOLVER_TOL {
            return Ok(x);
        }
    }
    let residual = (ball.project(&(&x - w.grad(&x) * step)) - &x).norm() / step;
    Err(Error::SolverNonConvergence { residual })
}

fn sort_points(points: &mut [DVector<f64>]) {
    points.sort_by(|a, b| {
        for i in 0..a.len() {
            match a[i].partial_cmp(&b[i]).expect("finite coordinates") {
                std::cmp::Ordering::Equal => continue,
                o => return o,
            }
        }
        std::cmp::Ordering::Equal
    });
}

fn dedup_points(sorted: Vec<DVector<f64>>) -> Vec<DVector<f64>> {
    let mut kept: Vec<DVector<f64>> = Vec::with_capacity(sorted.len());
    for p in sorted {
        if kept.iter().all(|q| (q - &p).norm() >= DEDUP_RADIUS) {
            kept.push(p);
        }
    }
    kept
}

/// Sweeps the simplex grid and returns the certified, deduplicated cloud.
pub fn weakly_efficient_set(
    f: &VectorFunction,
    p: &DVector<f64>,
    grid_resolution: usize,
) -> Result<PointCloud> {
    f.require_convex()?;
    if p.len() != f.ball().dimension() {
        return Err(Error::DimensionMismatch {
            expected: f.ball().dimension(),
            got: p.len(),
        });
    }
    let grid = simplex_grid(f.num_components(), grid_resolution)?;
    let raw = exec::map_collect(&grid, |lambda| scalar_minimize(f, p, lambda));

    let mut discarded = 0usize;
    let mut points = Vec::with_capacity(raw.len());
    for res in raw {
        match res {
            Ok(x) if x.iter().all(|v| v.is_finite()) => {
                match minnorm::s(f, p, &x) {
                    Ok(cert) if cert <= MEMBERSHIP_TOL => points.push(x),
                    _ => discarded += 1,
                }
            }
            _ => discarded += 1,
        }
    }
    sort_points(&mut points);
    let points = dedup_points(points);

    let fill_distance = f.convexity().strong_modulus().map(|alpha| {
        let grad_sup = f.grad_sup_bound() + p.norm();
        let lambda_fill = f.num_components() as f64 / grid_resolution.max(1) as f64;
        grad_sup * lambda_fill / (2.0 * alpha) + SOLVER_TOL
    });

    Ok(PointCloud {
        points,
        fill_distance,
        tilt: p.clone(),
        grid_resolution,
        discarded,
    })
}

/// First-order membership test with its certificate value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Membership {
    pub is_member: bool,
    pub certificate: f64,
}

/// Tests `x in WE_f(p)` via `s_{f^p}(x) <= tol`; interior points only.
pub fn is_weakly_efficient(
    f: &VectorFunction,
    p: &DVector<f64>,
    x: &DVector<f64>,
    tol: f64,
) -> Result<Membership> {
    f.require_convex()?;
    f.ball().check_point(x)?;
    if !f.ball().strictly_contains(x) {
        return Err(Error::BoundaryPoint);
    }
    let certificate = minnorm::s(f, p, x)?;
    Ok(Membership {
        is_member: certificate <= tol,
        certificate,
    })
}

/// Probes whether every cloud at tilt magnitude `delta` stays interior.
fn probe_interior(
    f: &VectorFunction,
    delta: f64,
    directions: &[DVector<f64>],
    grid_resolution: usize,
) -> Result<Option<f64>> {
    let r = f.ball().radius();
    let mut margin = f64::INFINITY;
    for dir in directions {
        let cloud = weakly_efficient_set(f, &(dir * delta), grid_resolution)?;
        if cloud.is_empty() {
            return Ok(None);
        }
        let m = r - cloud.max_norm();
        if m <= INTERIOR_MARGIN {
            return Ok(None);
        }
        margin = margin.min(m);
    }
    Ok(Some(margin))
}

/// Estimates the interiority threshold by bisection over tilt magnitude,
/// probing `tilt_samples` directions per magnitude (the coordinate axes
/// first, then seeded random directions).
pub fn delta_estimate(
    f: &VectorFunction,
    tilt_samples: usize,
    seed: u64,
) -> Result<InteriorityCertificate> {
    f.require_convex()?;
    let n = f.ball().dimension();
    let r = f.ball().radius();
    let grid_resolution = crate::problem::default_grid_resolution(f.num_components()).min(64);

    let zero = DVector::zeros(n);
    let cloud0 = weakly_efficient_set(f, &zero, grid_resolution)?;
    if cloud0.is_empty() || r - cloud0.max_norm() <= INTERIOR_MARGIN {
        return Err(Error::SolutionSetTouchesBoundary {
            max_norm: cloud0.max_norm(),
            radius: r,
        });
    }

    let mut directions: Vec<DVector<f64>> = Vec::new();
    for i in 0..n {
        let mut e = DVector::zeros(n);
        e[i] = 1.0;
        directions.push(e.clone());
        directions.push(-e);
        if directions.len() >= tilt_samples.max(2) {
            break;
        }
    }
    let mut dir_rng = rng::stream(seed, "delta-directions", 0);
    while directions.len() < tilt_samples.max(2) {
        directions.push(rng::uniform_direction(&mut dir_rng, n));
    }

    // Grow until a magnitude fails, then bisect.
    let k = minnorm::hull_lipschitz_constant(f).k;
    let mut lo = 0.0f64;
    let mut margin = r - cloud0.max_norm();
    let mut hi = (r * k.max(1.0)).max(1e-3);
    let mut hi_failed = false;
    for _ in 0..60 {
        match probe_interior(f, hi, &directions, grid_resolution)? {
            Some(m) => {
                lo = hi;
                margin = margin.min(m);
                hi *= 2.0;
            }
            None => {
                hi_failed = true;
                break;
            }
        }
    }
    if !hi_failed {
        return Ok(InteriorityCertificate {
            delta: lo,
            max_tested_tilt: hi,
            witness_margin: margin,
        });
    }
    let max_tested = hi;
    for _ in 0..30 {
        let mid = 0.5 * (lo + hi);
        match probe_interior(f, mid, &directions, grid_resolution)? {
            Some(m) => {
                lo = mid;
                margin = margin.min(m);
            }
            None => hi = mid,
        }
    }
    Ok(InteriorityCertificate {
        delta: lo,
        max_tested_tilt: max_tested,
        witness_margin: margin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use nalgebra::dvector;

    fn weight(vals: &[f64]) -> SimplexWeight {
        SimplexWeight::new(DVector::from_column_slice(vals)).unwrap()
    }

    #[test]
    fn scalar_minimize_examples() {
        let b = catalog::biobjective_quadratic();
        let p0 = dvector![0.0];
        let x = scalar_minimize(&b, &p0, &weight(&[1.0, 0.0])).unwrap();
        assert!(x[0].abs() < 1e-12);
        let x = scalar_minimize(&b, &p0, &weight(&[0.5, 0.5])).unwrap();
        assert!((x[0] - 0.5).abs() < 1e-12);

        let f = catalog::paper_example();
        let x = scalar_minimize(&f, &dvector![0.1], &weight(&[0.0, 1.0])).unwrap();
        assert!((x[0] - (0.1f64 / 4.0).cbrt()).abs() < 1e-10);
    }

    #[test]
    fn scalar_minimize_rejects_uncertified() {
        let f = crate::problem::VectorFunction::new(
            *catalog::paper_example().ball(),
            vec![crate::problem::ScalarFn::polynomial(vec![0.0, 0.0, -1.0])],
        )
        .unwrap();
        assert!(matches!(
            scalar_minimize(&f, &dvector![0.0], &weight(&[1.0])),
            Err(Error::NonConvexInput)
        ));
    }

    #[test]
    fn paper_example_cloud_spans_the_segment() {
        let f = catalog::paper_example();
        let cloud = weakly_efficient_set(&f, &dvector![0.1], 200).unwrap();
        assert!(!cloud.is_empty());
        let lo = cloud.points.first().unwrap()[0];
        let hi = cloud.points.last().unwrap()[0];
        assert!((lo - 0.05).abs() < 1e-3);
        assert!((hi - (0.1f64 / 4.0).cbrt()).abs() < 1e-3);
        assert_eq!(cloud.discarded, 0);
        assert!(cloud.fill_distance.is_none()); // x^4 is not strongly convex
    }

    #[test]
    fn biobjective_cloud_spans_unit_interval() {
        let b = catalog::biobjective_quadratic();
        let cloud = weakly_efficient_set(&b, &dvector![0.0], 200).unwrap();
        let lo = cloud.points.first().unwrap()[0];
        let hi = cloud.points.last().unwrap()[0];
        assert!(lo.abs() < 1e-6);
        assert!((hi - 1.0).abs() < 1e-6);
        assert!(cloud.fill_distance.is_some());
    }

    #[test]
    fn scalar_reduction_single_point() {
        let f = catalog::scalar_quadratic();
        let cloud = weakly_efficient_set(&f, &dvector![0.4], 10).unwrap();
        assert_eq!(cloud.points.len(), 1);
        assert!((cloud.points[0][0] - 0.2).abs() < 1e-9);
    }

    #[test]
    fn membership_examples() {
        let b = catalog::biobjective_quadratic();
        let m = is_weakly_efficient(&b, &dvector![0.0], &dvector![0.5], 1e-9).unwrap();
        assert!(m.is_member);
        let m = is_weakly_efficient(&b, &dvector![0.0], &dvector![-0.5], 1e-9).unwrap();
        assert!(!m.is_member);
        assert!((m.certificate - 1.0).abs() < 1e-12);

        let f = catalog::paper_example();
        let m = is_weakly_efficient(&f, &dvector![0.0], &dvector![0.0], 1e-9).unwrap();
        assert!(m.is_member);

        assert!(matches!(
            is_weakly_efficient(&f, &dvector![0.0], &dvector![1.0], 1e-9),
            Err(Error::BoundaryPoint)
        ));
    }

    #[test]
    fn delta_estimates() {
        let b = catalog::biobjective_quadratic();
        let cert = delta_estimate(&b, 4, 7).unwrap();
        assert!(cert.delta >= 1.0, "delta = {}", cert.delta);
        assert!(cert.witness_margin > 0.0);
        assert!(cert.max_tested_tilt > cert.delta);

        let f = catalog::scalar_quadratic();
        let cert = delta_estimate(&f, 4, 7).unwrap();
        assert!(cert.delta >= 1.0, "delta = {}", cert.delta);
    }

    #[test]
    fn delta_rejects_boundary_touching_sets() {
        // On [-1, 1] the unperturbed solution set of (x^2, (x-1)^2) clipped
        // by the ball touches the boundary at 1.
        let q = nalgebra::DMatrix::from_element(1, 1, 2.0);
        let f = crate::problem::VectorFunction::new(
            crate::problem::Ball::new(1, 1.0).unwrap(),
            vec![
                crate::problem::ScalarFn::quadratic(q.clone(), DVector::zeros(1), 0.0).unwrap(),
                crate::problem::ScalarFn::quadratic(q, DVector::from_element(1, -2.0), 1.0)
                    .unwrap(),
            ],
        )
        .unwrap();
        assert!(matches!(
            delta_estimate(&f, 2, 7),
            Err(Error::SolutionSetTouchesBoundary { .. })
        ));
    }

    #[test]
    fn cloud_csv_header() {
        let f = catalog::scalar_quadratic();
        let cloud = weakly_efficient_set(&f, &dvector![0.4], 10).unwrap();
        let csv = cloud.to_csv();
        assert!(csv.starts_with("# p=4.0000000000000002e-1, grid_resolution=10"));
        assert_eq!(csv.lines().count(), 2);
    }
}
