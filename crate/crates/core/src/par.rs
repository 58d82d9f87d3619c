//! Data-parallel helpers. With the `parallel` feature these dispatch to rayon
//! when the caller asks for [`ExecMode::Parallel`]; without it every call runs
//! sequentially. Results never depend on the mode.

use std::ops::Range;

use serde::Serialize;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExecMode {
    Sequential,
    #[default]
    Parallel,
}

impl ExecMode {
    /// True when parallel execution is both requested and compiled in.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == ExecMode::Parallel
    }
}

/// `f(i)` for every `i` in `range`, in order.
pub fn map_range<T, F>(mode: ExecMode, range: Range<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        return range.into_par_iter().map(f).collect();
    }
    let _ = mode;
    range.map(f).collect()
}

/// `f(item)` for every item of `items`, in order.
pub fn map_slice<S, T, F>(mode: ExecMode, items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = mode;
    items.iter().map(f).collect()
}

/// Applies `f` to consecutive chunks of length `chunk` (the last may be shorter).
pub fn for_each_chunk_mut<T, F>(mode: ExecMode, data: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(&mut [T]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        data.par_chunks_mut(chunk).for_each(f);
        return;
    }
    let _ = mode;
    data.chunks_mut(chunk).for_each(f);
}

/// Like [`for_each_chunk_mut`], also passing the chunk's position.
pub fn for_each_chunk_mut_indexed<T, F>(mode: ExecMode, data: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        data.par_chunks_mut(chunk).enumerate().for_each(|(i, c)| f(i, c));
        return;
    }
    let _ = mode;
    data.chunks_mut(chunk).enumerate().for_each(|(i, c)| f(i, c));
}

/// Folds `range` into chunk-local accumulators and combines them in index order.
pub fn fold_range<A, F, G>(mode: ExecMode, range: Range<usize>, chunk: usize, init: A, fold: F, combine: G) -> A
where
    A: Send + Sync + Clone,
    F: Fn(A, usize) -> A + Sync + Send,
    G: Fn(A, A) -> A + Sync + Send,
{
    let chunk = chunk.max(1);
    let start = range.start;
    let len = range.len();
    let pieces = len.div_ceil(chunk);
    let partials = map_range(mode, 0..pieces, |p| {
        let lo = start + p * chunk;
        let hi = (lo + chunk).min(start + len);
        (lo..hi).fold(init.clone(), &fold)
    });
    partials.into_iter().fold(init, combine)
}
