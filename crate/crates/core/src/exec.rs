//! Sequential and rayon-backed execution of the enumeration loops.

/// How enumeration loops run. With the `parallel` feature disabled,
/// `Parallel` silently runs sequentially.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
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

/// Below this many items the parallel path is not worth the fork/join cost.
pub const PARALLEL_MIN_ITEMS: usize = 2048;

impl Execution {
    fn fan_out(self, items: usize) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel && items >= PARALLEL_MIN_ITEMS
    }

    /// Folds `0..n` through `map` and combines with `reduce`.
    pub(crate) fn map_reduce<T, M, R>(self, n: usize, identity: fn() -> T, map: M, reduce: R) -> T
    where
        T: Send,
        M: Fn(usize) -> T + Sync + Send,
        R: Fn(T, T) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.fan_out(n) {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(&map).reduce(identity, &reduce);
        }
        (0..n).map(map).fold(identity(), reduce)
    }

    /// Order-preserving map over a slice whose items are each expensive.
    pub(crate) fn map_slice<I, O, F>(self, items: &[I], f: F) -> Vec<O>
    where
        I: Sync,
        O: Send,
        F: Fn(&I) -> O + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel && items.len() > 1 {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }
}
