use crate::text::{FeatureMatrix, Storage};

/// Byte costs: a sparse entry is an 8-byte index plus an 8-byte value, a
/// dense scalar and a model parameter are 8 bytes each.
///
/// The memory of a run is the bytes of the train features, the test
/// features and the trained model together.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MemoryModel;

impl MemoryModel {
    pub const SPARSE_ENTRY_BYTES: u64 = 16;
    pub const DENSE_SCALAR_BYTES: u64 = 8;
    pub const PARAMETER_BYTES: u64 = 8;

    pub fn feature_bytes(storage: Storage, stored_entries: usize) -> u64 {
        let per = if storage.is_sparse() {
            Self::SPARSE_ENTRY_BYTES
        } else {
            Self::DENSE_SCALAR_BYTES
        };
        per * stored_entries as u64
    }

    pub fn model_bytes(parameter_count: usize) -> u64 {
        Self::PARAMETER_BYTES * parameter_count as u64
    }

    pub fn run_bytes(train: &FeatureMatrix, test: &FeatureMatrix, parameter_count: usize) -> u64 {
        train.feature_bytes() + test.feature_bytes() + Self::model_bytes(parameter_count)
    }
}
