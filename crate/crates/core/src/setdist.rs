//! Excess and Hausdorff distances between finite point clouds, with the
//! empty-set conventions `e(empty, A) = 0`, `e(empty, empty) = 0`,
//! `e(A, empty) = +inf`.
//!
//! Computation is the exact `O(|A| * |B|)` double loop; clouds at desk scale
//! never warrant a spatial index. Infinity is a first-class value so the
//! conventions survive arithmetic: any quotient with an infinite numerator
//! must be classified divergent by callers, never silently overflowed.

use nalgebra::DVector;

use crate::exec;

/// A distance value on the extended nonnegative reals.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceValue {
    /// `+inf` exactly when the convention case `e(A, empty)` occurred.
    pub value: f64,
    /// Points realizing the sup/inf composition, when finite and attained.
    pub attaining_pair: Option<(DVector<f64>, DVector<f64>)>,
}

impl DistanceValue {
    fn zero() -> Self {
        DistanceValue {
            value: 0.0,
            attaining_pair: None,
        }
    }

    fn infinite() -> Self {
        DistanceValue {
            value: f64::INFINITY,
            attaining_pair: None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
    }
}

/// One-sided excess `e(A, B) = sup_{a in A} inf_{b in B} |a - b|`.
pub fn excess(a: &[DVector<f64>], b: &[DVector<f64>]) -> DistanceValue {
    if a.is_empty() {
        return DistanceValue::zero();
    }
    if b.is_empty() {
        return DistanceValue::infinite();
    }
    // Per-point minima in input order; the max reduction breaks ties by
    // lowest index so the result is independent of evaluation order.
    let minima = exec::map_collect(a, |pa| {
        let mut best = f64::INFINITY;
        let mut arg = 0usize;
        for (j, pb) in b.iter().enumerate() {
            let d = (pa - pb).norm();
            if d < best {
                best = d;
                arg = j;
            }
        }
        (best, arg)
    });
    let mut value = -1.0f64;
    let mut pair = (0usize, 0usize);
    for (i, &(d, j)) in minima.iter().enumerate() {
        if d > value {
            value = d;
            pair = (i, j);
        }
    }
    DistanceValue {
        value,
        attaining_pair: Some((a[pair.0].clone(), b[pair.1].clone())),
    }
}

/// Hausdorff distance `max(e(A,B), e(B,A))`; symmetric by construction.
pub fn hausdorff(a: &[DVector<f64>], b: &[DVector<f64>]) -> DistanceValue {
    let ab = excess(a, b);
    let ba = excess(b, a);
    if ba.value > ab.value {
        ba
    } else {
        ab
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dvector;

    fn segment(lo: f64, hi: f64, n: usize) -> Vec<DVector<f64>> {
        (0..=n)
            .map(|k| dvector![lo + (hi - lo) * k as f64 / n as f64])
            .collect()
    }

    #[test]
    fn excess_examples() {
        let seg = segment(0.0, 1.0, 100);
        let origin = vec![dvector![0.0]];
        assert_eq!(excess(&origin, &seg).value, 0.0);
        assert!((excess(&seg, &origin).value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn empty_set_conventions() {
        let a = vec![dvector![1.0]];
        let empty: Vec<DVector<f64>> = vec![];
        assert_eq!(excess(&empty, &a).value, 0.0);
        assert_eq!(excess(&empty, &empty).value, 0.0);
        assert_eq!(excess(&a, &empty).value, f64::INFINITY);
        assert_eq!(hausdorff(&a, &empty).value, f64::INFINITY);
        assert_eq!(hausdorff(&empty, &empty).value, 0.0);
    }

    #[test]
    fn hausdorff_examples() {
        let seg = segment(0.0, 1.0, 100);
        assert_eq!(hausdorff(&seg, &seg).value, 0.0);
        let origin = vec![dvector![0.0]];
        assert!((hausdorff(&origin, &seg).value - 1.0).abs() < 1e-15);

        // translated intervals [0.1, 1.1] vs [0, 1]
        let a = segment(0.1, 1.1, 200);
        let b = segment(0.0, 1.0, 200);
        let d = hausdorff(&a, &b).value;
        assert!((d - 0.1).abs() < 1e-2 / 200.0 + 1e-12);
    }
}
