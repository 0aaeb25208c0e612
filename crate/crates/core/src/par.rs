//! Data-parallel helpers. With the `parallel` feature (default) these fan out
//! over rayon's pool; without it they run sequentially with identical results.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Below this many units of work the helpers stay sequential.
pub const GRAIN: usize = 2048;

pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if items.len() > 1 {
            return items.par_iter().map(f).collect();
        }
    }
    items.iter().map(f).collect()
}

pub fn map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if n > 1 {
            return (0..n).into_par_iter().map(f).collect();
        }
    }
    (0..n).map(f).collect()
}

/// Applies `f` to every element; parallel only when `work` exceeds [`GRAIN`].
pub fn for_each_mut<T, F>(items: &mut [T], work: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut T) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if work > GRAIN {
            items.par_iter_mut().enumerate().for_each(|(i, x)| f(i, x));
            return;
        }
    }
    let _ = work;
    items.iter_mut().enumerate().for_each(|(i, x)| f(i, x));
}

/// Whether the crate was built with the rayon backend.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
