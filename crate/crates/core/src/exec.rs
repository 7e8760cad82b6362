//! Execution helpers for the data-parallel sweeps.
//!
//! With the default `parallel` feature the dispatched helpers run on rayon;
//! without it they fall back to sequential iteration with an identical API.
//! Output order always matches input order, so results are independent of
//! thread scheduling. The `_seq` variants are always sequential and exist so
//! benchmarks can compare both paths in one binary.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `items`, preserving order.
#[cfg(feature = "parallel")]
pub fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Maps `f` over `items`, preserving order.
#[cfg(not(feature = "parallel"))]
pub fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.iter().map(f).collect()
}

/// Sequential reference path with the same signature as [`map_collect`].
pub fn map_collect_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dispatched_matches_sequential() {
        let items: Vec<i64> = (0..1000).collect();
        let a = map_collect(&items, |x| x * x - 3);
        let b = map_collect_seq(&items, |x| x * x - 3);
        assert_eq!(a, b);
    }
}
