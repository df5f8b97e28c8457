//! Data-parallel map with a sequential stand-in when the `parallel` feature
//! is disabled. Input order is preserved either way, so downstream results
//! are identical across both builds.

use crate::error::Result;

#[cfg(feature = "parallel")]
pub(crate) fn par_map_collect<T, U, F>(items: &[T], f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U> + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn par_map_collect<T, U, F>(items: &[T], f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U> + Sync,
{
    items.iter().map(f).collect()
}
