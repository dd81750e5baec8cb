//! Ordered map over an index range, parallel when the `parallel` feature is on.
//!
//! Callers reduce the returned vector sequentially, so the reduction order
//! (and therefore every floating-point result) does not depend on threading.

use alloc::vec::Vec;

#[cfg(feature = "parallel")]
pub(crate) fn map_range<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..len).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_range<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..len).map(f).collect()
}
