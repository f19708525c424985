//! Row-memoized storage for recurrence-driven sequences.
//!
//! Every sequence in [`crate::combinat`] is backed by one of the two cache
//! shapes below. Entries are computed eagerly up to the requested index;
//! rows are published behind an `Arc` and never mutated afterwards, so a
//! re-run of the generator from the base cases always reproduces what is
//! stored. Extension happens under an exclusive lock, reads under a shared
//! one, which makes the caches safe to hit from concurrent sweep workers.

use std::sync::{Arc, RwLock};

/// Two-index table filled row by row.
///
/// `gen(q, prev)` must produce row `q` from row `q - 1` (`prev` is empty
/// for `q == 0`) and must be deterministic.
pub struct TriangleCache<T> {
    name: &'static str,
    gen: fn(usize, &[T]) -> Vec<T>,
    rows: RwLock<Vec<Arc<[T]>>>,
}

impl<T: Clone> TriangleCache<T> {
    pub const fn new(name: &'static str, gen: fn(usize, &[T]) -> Vec<T>) -> Self {
        TriangleCache {
            name,
            gen,
            rows: RwLock::new(Vec::new()),
        }
    }

    /// Which recurrence fills this cache.
    pub fn name(&self) -> &'static str {
        self.name
    }

    /// Row `q`, computing and publishing any missing rows first.
    pub fn row(&self, q: usize) -> Arc<[T]> {
        {
            let rows = self.rows.read().expect("cache lock poisoned");
            if let Some(row) = rows.get(q) {
                return row.clone();
            }
        }
        let mut rows = self.rows.write().expect("cache lock poisoned");
        while rows.len() <= q {
            let next = rows.len();
            let row = if next == 0 {
                (self.gen)(0, &[])
            } else {
                (self.gen)(next, &rows[next - 1])
            };
            rows.push(Arc::from(row));
        }
        rows[q].clone()
    }

    /// Entry `(q, k)`, or `None` when `k` lies beyond row `q`.
    pub fn entry(&self, q: usize, k: usize) -> Option<T> {
        self.row(q).get(k).cloned()
    }
}

/// One-index sequence filled term by term.
///
/// `gen(n, earlier)` must produce term `n` from the slice of terms
/// `0..n`.
pub struct SequenceCache<T> {
    name: &'static str,
    gen: fn(usize, &[T]) -> T,
    values: RwLock<Vec<T>>,
}

impl<T: Clone> SequenceCache<T> {
    pub const fn new(name: &'static str, gen: fn(usize, &[T]) -> T) -> Self {
        SequenceCache {
            name,
            gen,
            values: RwLock::new(Vec::new()),
        }
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    /// Term `n`, computing and publishing any missing terms first.
    pub fn value(&self, n: usize) -> T {
        {
            let values = self.values.read().expect("cache lock poisoned");
            if let Some(v) = values.get(n) {
                return v.clone();
            }
        }
        let mut values = self.values.write().expect("cache lock poisoned");
        while values.len() <= n {
            let next = values.len();
            let v = (self.gen)(next, &values);
            values.push(v);
        }
        values[n].clone()
    }
}
