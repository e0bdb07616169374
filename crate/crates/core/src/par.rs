//! Index-ordered parallel map with a sequential fallback.
//!
//! Every data-parallel loop in the crate (grid cells, oracle batches,
//! Monte-Carlo experiments) goes through [`map_indexed`]. Results are written
//! by index, so the output never depends on the number of worker threads.
//! Building without the `parallel` feature compiles the sequential path only.

/// Evaluate `f(0..n)` and collect the results in index order.
///
/// `jobs = Some(1)` forces the sequential path, `Some(k)` runs on a dedicated
/// pool of `k` threads, `None` uses the global rayon pool.
pub fn map_indexed<T, F>(n: usize, jobs: Option<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        match jobs {
            Some(1) => (0..n).map(f).collect(),
            Some(k) => match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
                Ok(pool) => pool.install(|| (0..n).into_par_iter().map(&f).collect()),
                Err(_) => (0..n).map(f).collect(),
            },
            None => (0..n).into_par_iter().map(f).collect(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = jobs;
        (0..n).map(f).collect()
    }
}

/// True when the crate was built with the rayon backend.
pub const fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_independent_of_jobs() {
        let f = |i: usize| (i as f64).sqrt().sin();
        let a = map_indexed(1000, Some(1), f);
        let b = map_indexed(1000, Some(4), f);
        let c = map_indexed(1000, None, f);
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn empty_range() {
        let v: Vec<u8> = map_indexed(0, None, |_| 0);
        assert!(v.is_empty());
    }
}
