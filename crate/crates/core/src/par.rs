//! Data-parallel map with a sequential fallback.
//!
//! With the `parallel` feature, work is spread over a rayon pool; without
//! it, every [`Parallelism`] value runs sequentially. Results always come
//! back in input order, so callers see identical output either way.

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Parallelism {
    Sequential,
    /// Rayon's global pool.
    #[default]
    Auto,
    /// A dedicated pool with this many threads.
    Threads(usize),
}

impl Parallelism {
    pub fn from_jobs(jobs: Option<usize>) -> Self {
        match jobs {
            None | Some(0) => Parallelism::Auto,
            Some(1) => Parallelism::Sequential,
            Some(k) => Parallelism::Threads(k),
        }
    }
}

#[cfg(feature = "parallel")]
pub fn map<T, R, F>(par: Parallelism, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    match par {
        Parallelism::Sequential => items.iter().map(f).collect(),
        Parallelism::Auto => items.par_iter().map(f).collect(),
        Parallelism::Threads(k) => match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
            Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
            Err(_) => items.iter().map(f).collect(),
        },
    }
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, R, F>(_par: Parallelism, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let xs: Vec<u64> = (0..1000).collect();
        let seq = map(Parallelism::Sequential, &xs, |x| x * x);
        assert_eq!(map(Parallelism::Auto, &xs, |x| x * x), seq);
        assert_eq!(map(Parallelism::Threads(3), &xs, |x| x * x), seq);
    }
}
