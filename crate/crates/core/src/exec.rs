//! Sequential or rayon-backed execution of the data-parallel sweeps.
//!
//! The sweeps in this crate (atom enumeration in the audits, random
//! correctness draws, ratio grids) are all map-then-merge over an index range.
//! [`Strategy`] runs them either way; results are identical because every
//! merge is an associative, commutative reduction.

use std::ops::Range;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    /// Rayon work stealing over the global pool.
    #[cfg(feature = "parallel")]
    Parallel,
}

impl Default for Strategy {
    /// Parallel when the `parallel` feature is on, sequential otherwise.
    fn default() -> Self {
        #[cfg(feature = "parallel")]
        return Strategy::Parallel;
        #[cfg(not(feature = "parallel"))]
        return Strategy::Sequential;
    }
}

impl Strategy {
    /// Every strategy compiled into this build.
    pub fn available() -> Vec<Strategy> {
        vec![
            Strategy::Sequential,
            #[cfg(feature = "parallel")]
            Strategy::Parallel,
        ]
    }

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Sequential => "sequential",
            #[cfg(feature = "parallel")]
            Strategy::Parallel => "parallel",
        }
    }

    /// Splits `range` into chunks, folds each chunk from `init()` with `fold`,
    /// and merges chunk results with `merge`.
    pub fn fold_range<T, I, F, M>(self, range: Range<u64>, init: I, fold: F, merge: M) -> T
    where
        T: Send,
        I: Fn() -> T + Sync + Send,
        F: Fn(T, u64) -> T + Sync + Send,
        M: Fn(T, T) -> T + Sync + Send,
    {
        match self {
            Strategy::Sequential => range.fold(init(), fold),
            #[cfg(feature = "parallel")]
            Strategy::Parallel => {
                use rayon::prelude::*;
                // A few chunks per thread keeps the number of accumulators small.
                let len = range.end.saturating_sub(range.start);
                let chunk = len.div_ceil(4 * rayon::current_num_threads() as u64).max(1);
                let starts: Vec<u64> = (range.start..range.end).step_by(chunk as usize).collect();
                starts
                    .into_par_iter()
                    .map(|lo| (lo..(lo + chunk).min(range.end)).fold(init(), &fold))
                    .reduce(&init, &merge)
            }
        }
    }

    /// Maps every index and collects in index order.
    pub fn map_range<T, F>(self, range: Range<u64>, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        match self {
            Strategy::Sequential => range.map(f).collect(),
            #[cfg(feature = "parallel")]
            Strategy::Parallel => {
                use rayon::prelude::*;
                range.into_par_iter().map(f).collect()
            }
        }
    }
}
