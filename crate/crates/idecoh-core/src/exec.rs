//! Index-keyed fan-out for embarrassingly parallel loops.
//!
//! Results land in a vector slot chosen by index, so the output is
//! identical whatever the worker count. With the `parallel` feature off,
//! [`run_indexed`] degrades to the sequential path.

#[cfg(feature = "parallel")]
pub fn run_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn run_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    run_indexed_seq(n, f)
}

/// Sequential reference path, always available.
pub fn run_indexed_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    (0..n).map(f).collect()
}
