//! Built-in problems with closed-form weakly efficient sets, used by the
//! experiment suite and as oracles in tests.

use nalgebra::{DMatrix, DVector};

use crate::problem::{Ball, ScalarFn, VectorFunction};

/// `(x^2, x^4)` on `[-1, 1]`: strictly convex but not strongly convex; the
/// solution set under tilt `p > 0` is the segment `[p/2, cbrt(p/4)]` and the
/// problem is ill-conditioned at the origin.
pub fn paper_example() -> VectorFunction {
    VectorFunction::new(
        Ball::new(1, 1.0).expect("ball"),
        vec![
            ScalarFn::polynomial(vec![0.0, 0.0, 1.0]),
            ScalarFn::polynomial(vec![0.0, 0.0, 0.0, 0.0, 1.0]),
        ],
    )
    .expect("catalog problem")
}

/// `(x^2, (x-1)^2)` on `B(0,2)`: strongly convex pair with solution set
/// `[p/2, p/2 + 1]`, condition number exactly `1/2`.
pub fn biobjective_quadratic() -> VectorFunction {
    let q = DMatrix::from_element(1, 1, 2.0);
    VectorFunction::new(
        Ball::new(1, 2.0).expect("ball"),
        vec![
            ScalarFn::quadratic(q.clone(), DVector::zeros(1), 0.0).expect("descriptor"),
            ScalarFn::quadratic(q, DVector::from_element(1, -2.0), 1.0).expect("descriptor"),
        ],
    )
    .expect("catalog problem")
}

/// `x^2` on `[-1, 1]`: the scalar reduction with unique minimizer `p/2`.
pub fn scalar_quadratic() -> VectorFunction {
    VectorFunction::new(
        Ball::new(1, 1.0).expect("ball"),
        vec![ScalarFn::quadratic(
            DMatrix::from_element(1, 1, 2.0),
            DVector::zeros(1),
            0.0,
        )
        .expect("descriptor")],
    )
    .expect("catalog problem")
}

/// Two strongly convex quadratics in the plane on `B(0,3)`.
pub fn strongly_convex_2d() -> VectorFunction {
    let q1 = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 4.0]);
    let q2 = DMatrix::from_row_slice(2, 2, &[6.0, 1.0, 1.0, 3.0]);
    VectorFunction::new(
        Ball::new(2, 3.0).expect("ball"),
        vec![
            ScalarFn::quadratic(q1, DVector::zeros(2), 0.0).expect("descriptor"),
            ScalarFn::quadratic(q2, DVector::from_column_slice(&[-1.0, 0.5]), 0.0)
                .expect("descriptor"),
        ],
    )
    .expect("catalog problem")
}

/// Three strongly convex quadratics in the plane on `B(0,2)`.
pub fn triobjective_quadratic() -> VectorFunction {
    let q1 = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 2.0]);
    let q2 = DMatrix::from_row_slice(2, 2, &[3.0, 0.5, 0.5, 2.0]);
    let q3 = DMatrix::from_row_slice(2, 2, &[4.0, -1.0, -1.0, 5.0]);
    VectorFunction::new(
        Ball::new(2, 2.0).expect("ball"),
        vec![
            ScalarFn::quadratic(q1, DVector::zeros(2), 0.0).expect("descriptor"),
            ScalarFn::quadratic(q2, DVector::from_column_slice(&[-1.0, 0.0]), 0.0)
                .expect("descriptor"),
            ScalarFn::quadratic(q3, DVector::from_column_slice(&[0.0, -1.0]), 0.0)
                .expect("descriptor"),
        ],
    )
    .expect("catalog problem")
}

/// Every certified-convex catalog problem, with a stable name.
pub fn all() -> Vec<(&'static str, VectorFunction)> {
    vec![
        ("paper-example", paper_example()),
        ("biobjective-quadratic", biobjective_quadratic()),
        ("scalar-quadratic", scalar_quadratic()),
        ("strongly-convex-2d", strongly_convex_2d()),
        ("triobjective-quadratic", triobjective_quadratic()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::Convexity;

    #[test]
    fn certificates_are_as_expected() {
        assert_eq!(paper_example().convexity(), Convexity::Convex);
        assert!(matches!(
            biobjective_quadratic().convexity(),
            Convexity::StronglyConvex { .. }
        ));
        assert!(matches!(
            strongly_convex_2d().convexity(),
            Convexity::StronglyConvex { .. }
        ));
        assert!(matches!(
            triobjective_quadratic().convexity(),
            Convexity::StronglyConvex { .. }
        ));
    }

    #[test]
    fn all_are_convex() {
        for (name, f) in all() {
            assert!(f.convexity().is_convex(), "{name} must be certified convex");
        }
    }
}
