//! Thin switch between rayon data-parallel loops and a sequential fallback.
//!
//! Everything in this crate is a pure function of its inputs, so sweeps over
//! grids, mode lists and seed ensembles parallelize freely. Reductions are
//! kept deterministic: work is mapped to a `Vec` in input order and folded
//! sequentially, so the result is bit-identical whether or not the `parallel`
//! feature (or any thread count) is in effect.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..n` collecting results in index order.
#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

/// Map `f` over `0..n` collecting results in index order.
#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

/// Map `f` over a slice, preserving order.
pub fn map_slice<S, T, F>(items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    map_indexed(items.len(), |i| f(&items[i]))
}

/// Deterministic sum of `f` over `0..n`: per-index values are computed in
/// parallel but accumulated in index order.
pub fn sum_indexed<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    map_indexed(n, f).iter().sum()
}
