//! Thin switch between rayon and plain iteration.
//!
//! Everything data-parallel in the engine (Monte Carlo replications,
//! per-pair network tests, stage-one regressions over seeds) funnels through
//! [`maybe_par_map`], so builds without the `parallel` feature fall back to
//! sequential execution with identical results.

/// Maps `f` over `items`, in parallel when the `parallel` feature is
/// compiled in and the runtime flag asks for it. Output order always matches
/// input order.
#[cfg(feature = "parallel")]
pub fn maybe_par_map<T, U, F>(items: Vec<T>, parallel: bool, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    if parallel {
        items.into_par_iter().map(f).collect()
    } else {
        items.into_iter().map(f).collect()
    }
}

#[cfg(not(feature = "parallel"))]
pub fn maybe_par_map<T, U, F>(items: Vec<T>, _parallel: bool, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}

/// Caps the global thread pool. Returns false when the cap could not be
/// applied (pool already built, or a sequential build).
#[cfg(feature = "parallel")]
pub fn set_thread_cap(threads: usize) -> bool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .is_ok()
}

#[cfg(not(feature = "parallel"))]
pub fn set_thread_cap(_threads: usize) -> bool {
    false
}
