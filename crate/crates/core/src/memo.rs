//! Transparent memo table for cohomology results.
//!
//! Keyed by (surface fingerprint, class); results with the cache enabled are
//! identical to results without it. Concurrent access goes through an atomic
//! get-or-compute contract.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::cohom::CohomologyVector;
use crate::error::Result;

#[derive(Debug, Default)]
pub struct CohomCache {
    map: Mutex<HashMap<(u64, Vec<i64>), CohomologyVector>>,
}

impl CohomCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get_or_compute<F>(&self, key: (u64, Vec<i64>), f: F) -> Result<CohomologyVector>
    where
        F: FnOnce() -> Result<CohomologyVector>,
    {
        if let Some(v) = self.map.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let v = f()?;
        self.map
            .lock()
            .unwrap()
            .entry(key)
            .or_insert_with(|| v.clone());
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.map.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
