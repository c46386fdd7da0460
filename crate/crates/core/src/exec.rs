//! Order-preserving data-parallel helpers.
//!
//! With the `parallel` feature the chunks are mapped on the rayon pool;
//! without it, or under [`ExecPolicy::Sequential`], they run in a plain loop.
//! Chunk boundaries never depend on the policy, so partial results are combined
//! in the same order either way and outputs are bit-identical.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecPolicy {
    Sequential,
    Parallel,
}

impl Default for ExecPolicy {
    fn default() -> Self {
        if cfg!(feature = "parallel") { ExecPolicy::Parallel } else { ExecPolicy::Sequential }
    }
}

impl ExecPolicy {
    /// Whether work will actually be spread over threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == ExecPolicy::Parallel
    }
}

pub fn map_chunks<T, R, F>(policy: ExecPolicy, items: &[T], chunk: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&[T]) -> R + Sync + Send,
{
    let chunk = chunk.max(1);
    #[cfg(feature = "parallel")]
    if policy.is_parallel() {
        use rayon::prelude::*;
        return items.par_chunks(chunk).map(f).collect();
    }
    let _ = policy;
    items.chunks(chunk).map(f).collect()
}

pub fn map<T, R, F>(policy: ExecPolicy, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if policy.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = policy;
    items.iter().map(f).collect()
}

/// Map over `0..n` in order.
pub fn map_range<R, F>(policy: ExecPolicy, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if policy.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = policy;
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policies_agree() {
        let xs: Vec<u64> = (0..10_000).collect();
        let a = map_chunks(ExecPolicy::Sequential, &xs, 97, |c| c.iter().sum::<u64>());
        let b = map_chunks(ExecPolicy::Parallel, &xs, 97, |c| c.iter().sum::<u64>());
        assert_eq!(a, b);
        assert_eq!(map_range(ExecPolicy::Parallel, 5, |i| i * i), vec![0, 1, 4, 9, 16]);
    }
}
