//! Data-parallel helpers.
//!
//! With the `parallel` feature the helpers fan out over rayon's pool; without
//! it, or when parallelism is switched off at runtime, they run sequentially.
//! Results are always returned in input order, so the choice never changes a
//! computed value.

use std::sync::atomic::{AtomicBool, Ordering};

static ENABLED: AtomicBool = AtomicBool::new(true);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    Parallel,
}

pub fn set_parallelism(mode: Parallelism) {
    ENABLED.store(mode == Parallelism::Parallel, Ordering::Relaxed);
}

/// Run on `threads` workers: `1` selects the sequential path and `0` keeps
/// rayon's default pool size. The pool can be sized once per process.
pub fn set_threads(threads: usize) {
    if threads == 1 {
        set_parallelism(Parallelism::Sequential);
        return;
    }
    set_parallelism(Parallelism::Parallel);
    #[cfg(feature = "parallel")]
    if threads > 1 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
}

pub fn parallelism() -> Parallelism {
    if cfg!(feature = "parallel") && ENABLED.load(Ordering::Relaxed) {
        Parallelism::Parallel
    } else {
        Parallelism::Sequential
    }
}

/// Map `f` over `items`, preserving order.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if parallelism() == Parallelism::Parallel && items.len() > 1 {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
    }
    items.iter().map(f).collect()
}

/// Fallible ordered map; the first error in input order wins.
pub fn try_map<T, R, E, F>(items: &[T], f: F) -> Result<Vec<R>, E>
where
    T: Sync,
    R: Send,
    E: Send,
    F: Fn(&T) -> Result<R, E> + Sync + Send,
{
    map(items, f).into_iter().collect()
}
