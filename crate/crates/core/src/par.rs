//! Order-preserving data-parallel map, backed by rayon when the `parallel`
//! feature is on and by a plain loop otherwise.
//!
//! `threads == 1` always takes the sequential path; `threads == 0` lets rayon
//! pick the worker count.

/// Maps `f` over `items` and returns results in input order.
pub fn map_ordered<T, R, F>(items: &[T], threads: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if threads != 1 {
            use rayon::prelude::*;
            return match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
                Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
                Err(e) => {
                    log::warn!("thread pool unavailable ({e}); running sequentially");
                    items.iter().map(f).collect()
                }
            };
        }
    }
    let _ = threads;
    items.iter().map(f).collect()
}

/// Whether this build can run work in parallel.
pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}
