use rayon::prelude::*;

use crate::error::{Error, Result};

/// Fixed-size thread pool whose `map` returns results in input order, so
/// nothing downstream can observe completion order.
pub struct WorkPool {
    pool: rayon::ThreadPool,
}

impl WorkPool {
    /// `workers = 0` picks one thread per available core.
    pub fn new(workers: usize) -> Result<Self> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("cannot start worker pool: {e}")))?;
        Ok(Self { pool })
    }

    pub fn serial() -> Self {
        Self::new(1).expect("single-thread pool")
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }

    pub fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        self.pool.install(|| items.par_iter().map(&f).collect())
    }
}
