//! Execution strategy for the data-parallel inner loops.
//!
//! Every parallel loop in this crate maps an index range to per-item results
//! and collects them in index order, so the parallel and sequential paths
//! produce identical output. Reductions over those results always happen
//! sequentially afterwards.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How the inner loops are scheduled.
///
/// Without the `parallel` feature, [`Execution::Parallel`] silently runs
/// sequentially.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// `(0..len).map(f).collect()`, in index order.
    pub fn map_range<R, F>(self, len: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..len).into_par_iter().map(f).collect();
        }
        (0..len).map(f).collect()
    }

    /// Like [`Execution::map_range`] but each worker gets its own scratch
    /// state, created by `init` and reused across items.
    pub fn map_range_with<S, R, I, F>(self, len: usize, init: I, f: F) -> Vec<R>
    where
        R: Send,
        I: Fn() -> S + Sync + Send,
        F: Fn(&mut S, usize) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..len)
                .into_par_iter()
                .map_init(&init, |s, i| f(s, i))
                .collect();
        }
        let mut scratch = init();
        (0..len).map(|i| f(&mut scratch, i)).collect()
    }

    /// `items.iter().map(f).collect()`, in order.
    pub fn map_slice<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Sorts and removes duplicates.
    pub fn sort_dedup<T: Ord + Send>(self, v: &mut Vec<T>) {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            v.par_sort_unstable();
            v.dedup();
            return;
        }
        v.sort_unstable();
        v.dedup();
    }
}
