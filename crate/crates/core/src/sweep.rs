//! Batch evaluation over independent inputs.
//!
//! [`map`] fans out over rayon's pool when the `parallel` feature is enabled
//! and falls back to a plain iterator otherwise. Output order always matches
//! input order. [`map_seq`] and (with the feature) [`map_par`] are exposed
//! separately so benchmarks can compare the two paths in one binary.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Applies `f` to every item, preserving order.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    return map_par(items, f);
    #[cfg(not(feature = "parallel"))]
    return map_seq(items, f);
}

/// Sequential reference path.
pub fn map_seq<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_par<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Returns true iff `pred` holds for every item; short-circuits per worker.
pub fn all<T, F>(items: &[T], pred: F) -> bool
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    return items.par_iter().all(pred);
    #[cfg(not(feature = "parallel"))]
    return items.iter().all(pred);
}

/// Whether this build evaluates batches on the rayon pool.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preserves_order() {
        let xs: Vec<u64> = (0..1000).collect();
        let ys = map(&xs, |x| x * x);
        assert_eq!(ys, map_seq(&xs, |x| x * x));
        assert_eq!(ys[999], 998001);
    }

    #[test]
    fn all_matches_iterator() {
        let xs: Vec<i32> = (1..500).collect();
        assert!(all(&xs, |&x| x > 0));
        assert!(!all(&xs, |&x| x != 250));
    }
}
