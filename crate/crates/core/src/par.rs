//! Data-parallel helpers with a sequential fallback.
//!
//! With the default `parallel` feature the maps run on rayon's pool; without
//! it they run sequentially with the same signatures. Results are collected
//! in input order and reductions happen after collection, so outputs are
//! identical bit for bit regardless of feature or thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `items`, preserving order.
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Indexed map over `0..n`, preserving order.
pub fn map_indexed<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Sequential versions, always available (benchmarks compare against these).
pub fn map_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

pub fn map_indexed_seq<U, F>(n: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..n).map(f).collect()
}

/// Pairwise (tree) summation; deterministic and more accurate than a left
/// fold for long series.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_matches_sequential() {
        let items: Vec<u64> = (0..1000).collect();
        let par = map(&items, |&x| x * x);
        let seq = map_seq(&items, |&x| x * x);
        assert_eq!(par, seq);
    }

    #[test]
    fn indexed_map_matches_sequential() {
        let par = map_indexed(257, |i| i as f64 * 0.5);
        let seq = map_indexed_seq(257, |i| i as f64 * 0.5);
        assert_eq!(par, seq);
    }

    #[test]
    fn pairwise_sum_basic() {
        let xs = vec![1.0; 1025];
        assert_eq!(pairwise_sum(&xs), 1025.0);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }
}
