//! Deterministic data-parallel helpers.
//!
//! Work items are indexed; results come back in index order whatever the
//! size of the enclosing rayon pool, and all reductions happen afterwards
//! on the ordered vector.

use crate::error::Result;
use rayon::prelude::*;

/// `f(0), f(1), …, f(n−1)` computed in parallel, collected in order.
pub fn map_indexed<T, F>(n: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}
