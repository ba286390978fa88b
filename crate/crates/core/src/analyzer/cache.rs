use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use crate::lexicon::FlagSet;

use super::Analysis;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CacheStats {
    pub hits: usize,
    pub misses: usize,
}

impl CacheStats {
    pub fn lookups(&self) -> usize {
        self.hits + self.misses
    }

    pub fn hit_rate(&self) -> f64 {
        if self.lookups() == 0 {
            0.0
        } else {
            self.hits as f64 / self.lookups() as f64
        }
    }
}

type Entries = HashMap<(String, FlagSet), Arc<Vec<Analysis>>>;

/// Analyses per (lookup key, active flags). Safe to share between threads;
/// a miss computes under the lock, so each type is analyzed at most once.
#[derive(Debug, Default)]
pub struct TypeCache {
    map: Mutex<Entries>,
    hits: AtomicUsize,
    misses: AtomicUsize,
}

impl TypeCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get_or_compute<F>(&self, key: &str, flags: FlagSet, compute: F) -> Arc<Vec<Analysis>>
    where
        F: FnOnce() -> Vec<Analysis>,
    {
        let mut map = self.map.lock().expect("type cache lock poisoned");
        if let Some(found) = map.get(&(key.to_string(), flags)) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return Arc::clone(found);
        }
        self.misses.fetch_add(1, Ordering::Relaxed);
        let value = Arc::new(compute());
        map.insert((key.to_string(), flags), Arc::clone(&value));
        value
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats {
            hits: self.hits.load(Ordering::Relaxed),
            misses: self.misses.load(Ordering::Relaxed),
        }
    }

    /// Number of distinct types cached.
    pub fn len(&self) -> usize {
        self.map.lock().expect("type cache lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
