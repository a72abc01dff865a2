//! Data-parallel helpers.
//!
//! Every batch loop in the crate goes through these two functions so the
//! sequential and the rayon paths produce bit-identical results: work items
//! carry their own random stream, and reductions are done over fixed-size
//! chunks whose partial sums are folded in index order.

/// How batch loops are executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Uses rayon when the `parallel` feature is enabled, otherwise falls back
    /// to [`Execution::Sequential`].
    #[default]
    Parallel,
}

impl Execution {
    /// Whether this mode actually runs on the rayon pool in this build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Chunk length for deterministic reductions.
pub(crate) const REDUCE_CHUNK: usize = 4096;

/// Evaluates `f(0..n)` and collects the results in index order.
pub fn map_indexed<T, F>(exec: Execution, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// Sums `f` over `items` into `N` accumulators.
///
/// The slice is cut into [`REDUCE_CHUNK`]-sized pieces, each piece is summed
/// sequentially and the per-piece sums are added in order, so the result does
/// not depend on thread scheduling.
pub fn chunked_sum<T, F, const N: usize>(exec: Execution, items: &[T], f: F) -> [f64; N]
where
    T: Sync,
    F: Fn(&T) -> [f64; N] + Sync + Send,
{
    let partial = |chunk: &[T]| {
        let mut acc = [0.0; N];
        for item in chunk {
            let v = f(item);
            for (a, x) in acc.iter_mut().zip(v) {
                *a += x;
            }
        }
        acc
    };

    let partials: Vec<[f64; N]> = {
        #[cfg(feature = "parallel")]
        {
            if exec.is_parallel() {
                use rayon::prelude::*;
                items.par_chunks(REDUCE_CHUNK).map(partial).collect()
            } else {
                items.chunks(REDUCE_CHUNK).map(partial).collect()
            }
        }
        #[cfg(not(feature = "parallel"))]
        {
            let _ = exec;
            items.chunks(REDUCE_CHUNK).map(partial).collect()
        }
    };

    let mut total = [0.0; N];
    for p in partials {
        for (t, x) in total.iter_mut().zip(p) {
            *t += x;
        }
    }
    total
}
