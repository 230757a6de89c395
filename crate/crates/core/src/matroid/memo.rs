use std::collections::HashMap;
use std::sync::atomic::{AtomicU8, Ordering};
use std::sync::{OnceLock, RwLock};

use crate::subset::SubsetMask;

const DENSE_LIMIT: usize = 16;
const UNKNOWN: u8 = u8::MAX;

/// Rank cache shared by concurrent readers.
///
/// Small ground sets get a lazily allocated flat table of atomics; larger
/// ones fall back to a locked hash map. Writes are idempotent since ranks
/// are a pure function of the mask.
pub(super) enum RankMemo {
    Dense { size: usize, table: OnceLock<Box<[AtomicU8]>> },
    Sparse(RwLock<HashMap<u32, u8>>),
}

impl RankMemo {
    pub(super) fn new(size: usize) -> Self {
        if size <= DENSE_LIMIT {
            RankMemo::Dense {
                size,
                table: OnceLock::new(),
            }
        } else {
            RankMemo::Sparse(RwLock::new(HashMap::new()))
        }
    }

    fn dense(size: usize, table: &OnceLock<Box<[AtomicU8]>>) -> &[AtomicU8] {
        table.get_or_init(|| (0..1usize << size).map(|_| AtomicU8::new(UNKNOWN)).collect())
    }

    pub(super) fn get(&self, s: SubsetMask) -> Option<usize> {
        match self {
            RankMemo::Dense { size, table } => {
                let v = Self::dense(*size, table)[s.bits() as usize].load(Ordering::Relaxed);
                (v != UNKNOWN).then_some(v as usize)
            }
            RankMemo::Sparse(map) => map.read().unwrap().get(&s.bits()).map(|&v| v as usize),
        }
    }

    pub(super) fn put(&self, s: SubsetMask, r: usize) {
        match self {
            RankMemo::Dense { size, table } => {
                Self::dense(*size, table)[s.bits() as usize].store(r as u8, Ordering::Relaxed)
            }
            RankMemo::Sparse(map) => {
                map.write().unwrap().insert(s.bits(), r as u8);
            }
        }
    }
}
