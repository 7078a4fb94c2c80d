//! Index-parallel map with a sequential fallback.
//!
//! Output order always follows the index order, so callers that fold the
//! result sequentially get the same answer with or without rayon.

use std::ops::Range;

#[cfg(feature = "parallel")]
pub(crate) fn map_range<T, F>(range: Range<u64>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    use rayon::prelude::*;
    range.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_range<T, F>(range: Range<u64>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    range.map(f).collect()
}
