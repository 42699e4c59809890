//! Data-parallel helpers.
//!
//! With the `parallel` feature (default) work is spread over a rayon pool;
//! without it every helper runs sequentially. Results are always returned in
//! index order, so callers that fold them sequentially get bit-identical output
//! for any worker count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Where data-parallel loops run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Executor {
    /// Plain iterator on the calling thread.
    Sequential,
    /// The global rayon pool.
    #[default]
    Parallel,
    /// A dedicated pool with this many threads.
    Threads(usize),
}

impl Executor {
    /// `0` selects the global pool, `1` runs sequentially.
    pub fn from_workers(workers: usize) -> Self {
        match workers {
            0 => Executor::Parallel,
            1 => Executor::Sequential,
            n => Executor::Threads(n),
        }
    }

    /// Evaluate `f(i)` for `i in 0..len`, returning results in index order.
    pub fn map_indexed<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Executor::Sequential => (0..len).map(f).collect(),
            #[cfg(feature = "parallel")]
            Executor::Parallel => (0..len).into_par_iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Executor::Threads(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                Ok(pool) => pool.install(|| (0..len).into_par_iter().map(f).collect()),
                Err(_) => (0..len).map(f).collect(),
            },
            #[cfg(not(feature = "parallel"))]
            _ => (0..len).map(f).collect(),
        }
    }

    /// Map over a slice, preserving order.
    pub fn map_slice<S, T, F>(self, items: &[S], f: F) -> Vec<T>
    where
        S: Sync,
        T: Send,
        F: Fn(&S) -> T + Sync + Send,
    {
        self.map_indexed(items.len(), |i| f(&items[i]))
    }

    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self != Executor::Sequential
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        for exec in [Executor::Sequential, Executor::Parallel, Executor::Threads(3)] {
            let v = exec.map_indexed(1000, |i| i * i);
            assert!(v.iter().enumerate().all(|(i, &x)| x == i * i));
        }
    }

    #[test]
    fn workers_mapping() {
        assert_eq!(Executor::from_workers(0), Executor::Parallel);
        assert_eq!(Executor::from_workers(1), Executor::Sequential);
        assert_eq!(Executor::from_workers(4), Executor::Threads(4));
    }
}
