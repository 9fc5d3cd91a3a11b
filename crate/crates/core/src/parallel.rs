use crate::error::{Error, Result};

/// Runs `f` on a dedicated pool of `workers` threads, or on the global pool
/// when `workers` is 0.
///
/// All parallel sweeps in this crate merge partial results in a fixed order,
/// so the worker count only affects wall time.
pub fn with_workers<R, F>(workers: usize, f: F) -> Result<R>
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    if workers == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::invalid(format!("cannot build worker pool: {e}")))?;
    Ok(pool.install(f))
}

/// Worker count taken from an explicit request, or the machine's
/// available parallelism when the request is 0.
pub fn resolve_workers(requested: usize) -> usize {
    if requested > 0 {
        requested
    } else {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    }
}
