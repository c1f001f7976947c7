//! Worker-pool sizing from the `GT_THREADS` environment variable.

/// Caps the global rayon pool at `GT_THREADS` workers when the variable
/// holds a positive integer. Returns the pool size in effect. Calling it
/// after the pool exists leaves the pool unchanged.
pub fn init_from_env() -> usize {
    if let Some(n) = std::env::var("GT_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
    {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    rayon::current_num_threads()
}
