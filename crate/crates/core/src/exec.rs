//! Execution strategy for the data-parallel inner loops.
//!
//! The search farm and batch verification map independent pure computations
//! over candidate lists. With the `parallel` feature (default) they can run
//! on a rayon pool; `Workers::Seq` or builds without the feature fall back
//! to a plain sequential loop. Output order is the input order either way.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Workers {
    /// Sequential execution.
    Seq,
    /// Parallel execution on up to `n` threads (0 = rayon default).
    Par(usize),
}

impl Workers {
    pub fn from_count(n: usize) -> Self {
        if n <= 1 {
            Workers::Seq
        } else {
            Workers::Par(n)
        }
    }
}

#[cfg(feature = "parallel")]
pub fn map_items<T, U, F>(workers: Workers, items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    match workers {
        Workers::Seq => items.into_iter().map(f).collect(),
        Workers::Par(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .expect("rayon pool");
            pool.install(|| items.into_par_iter().map(f).collect())
        }
    }
}

#[cfg(not(feature = "parallel"))]
pub fn map_items<T, U, F>(_workers: Workers, items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}
