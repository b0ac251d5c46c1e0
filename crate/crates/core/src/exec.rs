//! Reduction backends.
//!
//! With the `parallel` feature (default) these fan out over the rayon
//! global pool; without it they are plain iterator folds. Exact arithmetic
//! makes the result independent of the reduction order, so both backends
//! return identical values.

use std::ops::Add;

use num_traits::Zero;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub fn backend_name() -> &'static str {
    if cfg!(feature = "parallel") {
        "rayon"
    } else {
        "sequential"
    }
}

/// Sizes the global pool. `None` or `Some(0)` keeps rayon's default. Only
/// the first call has an effect; later calls are ignored.
pub fn configure_threads(threads: Option<usize>) {
    #[cfg(feature = "parallel")]
    if let Some(t) = threads.filter(|&t| t > 0) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
}

/// Number of worker threads the reductions will use.
pub fn current_threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

/// `Σ f(item)`.
#[cfg(feature = "parallel")]
pub fn sum_by<T, S, F>(items: &[T], f: F) -> S
where
    T: Sync,
    S: Zero + Add<Output = S> + Send,
    F: Fn(&T) -> S + Sync + Send,
{
    items.par_iter().map(f).reduce(S::zero, |a, b| a + b)
}

#[cfg(not(feature = "parallel"))]
pub fn sum_by<T, S, F>(items: &[T], f: F) -> S
where
    S: Zero + Add<Output = S>,
    F: Fn(&T) -> S,
{
    items.iter().map(f).fold(S::zero(), |a, b| a + b)
}

/// Fallible `Σ f(item)`; the first error in item order is not guaranteed,
/// only that some error is returned when any item fails.
#[cfg(feature = "parallel")]
pub fn try_sum_by<T, S, E, F>(items: &[T], f: F) -> Result<S, E>
where
    T: Sync,
    S: Zero + Add<Output = S> + Send,
    E: Send,
    F: Fn(&T) -> Result<S, E> + Sync + Send,
{
    items.par_iter().map(f).try_reduce(S::zero, |a, b| Ok(a + b))
}

#[cfg(not(feature = "parallel"))]
pub fn try_sum_by<T, S, E, F>(items: &[T], f: F) -> Result<S, E>
where
    S: Zero + Add<Output = S>,
    F: Fn(&T) -> Result<S, E>,
{
    let mut acc = S::zero();
    for item in items {
        acc = acc + f(item)?;
    }
    Ok(acc)
}

/// Order-preserving map.
#[cfg(feature = "parallel")]
pub fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// All words of length `len` over `{0..alphabet}`, lexicographic.
pub fn all_words(alphabet: usize, len: usize) -> Vec<Vec<usize>> {
    let total = alphabet.checked_pow(len as u32).unwrap_or(usize::MAX);
    let mut out = Vec::with_capacity(total.min(1 << 20));
    if alphabet == 0 && len > 0 {
        return out;
    }
    let mut word = vec![0; len];
    loop {
        out.push(word.clone());
        let mut pos = len;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            word[pos] += 1;
            if word[pos] < alphabet {
                break;
            }
            word[pos] = 0;
        }
    }
}
