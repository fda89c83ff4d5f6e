//! Data-parallel execution over independent samples.
//!
//! With the `parallel` feature (default) the indexed maps run on rayon;
//! without it they fall back to plain sequential iteration. Both paths
//! produce results in index order, and every ensemble reduction downstream
//! uses [`crate::stats::pairwise_sum`], so outputs are byte-identical across
//! thread counts and across the two build modes. The sequential variants are
//! always available for benchmarking the parallel speedup.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..n`, collecting in index order (parallel when enabled).
pub fn map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Sequential counterpart of [`map_range`], available in every build.
pub fn map_range_seq<U, F>(n: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..n).map(f).collect()
}

/// Map over a slice of independent work items (parallel when enabled).
pub fn map_slice<'a, T, U, F>(items: &'a [T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&'a T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Cap the rayon pool from the `RPS_SPDE_THREADS` environment variable.
///
/// Call once at process start; later calls are no-ops. Without the
/// `parallel` feature this does nothing.
pub fn init_thread_cap_from_env() {
    #[cfg(feature = "parallel")]
    {
        if let Ok(v) = std::env::var("RPS_SPDE_THREADS") {
            if let Ok(n) = v.trim().parse::<usize>() {
                if n >= 1 {
                    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree_bytewise() {
        let par = map_range(257, |i| (i as f64).sqrt().sin());
        let seq = map_range_seq(257, |i| (i as f64).sqrt().sin());
        assert_eq!(par.len(), seq.len());
        for (a, b) in par.iter().zip(&seq) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}
