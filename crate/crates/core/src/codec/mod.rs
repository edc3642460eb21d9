//! ORT encoding: duplicate elimination per pass, the multi-pass pipeline and
//! the `ORTC` container.
//!
//! A pass at stride `s` marks every byte that repeats the byte `s` positions
//! earlier inside a long enough chain, drops those bytes and appends the
//! repetition tree that records where they were. Pass `i` of the pipeline
//! runs at stride `i` over the serialized frame of pass `i - 1`, so the
//! outermost frame in a container belongs to the last pass.

mod container;
mod pass;

pub use container::{
    compress, decompress, inspect, ContainerInfo, FrameSummary, CONTAINER_HEADER_LEN, FORMAT_VERSION, MAGIC,
};
pub use pass::{decode_pass, encode_pass, mark_equalities, FrameMode, PassFrame, FRAME_HEADER_LEN};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("stride {0} is outside 1..=255")]
    InvalidStride(usize),
    #[error("minimum run {0} is outside 1..=255")]
    InvalidMinRun(u32),
    #[error("{0} passes requested, at most 255 are supported")]
    TooManyPasses(u32),
    #[error("not an ORTC container (bad magic)")]
    BadMagic,
    #[error("unsupported container version {0}")]
    UnsupportedVersion(u8),
    #[error("malformed frame: {0}")]
    MalformedFrame(String),
    #[error("decoded {actual} bytes but the header promises {expected}")]
    LengthMismatch { expected: u64, actual: u64 },
}

impl CodecError {
    pub(crate) fn malformed(reason: impl Into<String>) -> Self {
        CodecError::MalformedFrame(reason.into())
    }
}

/// Pipeline settings. The defaults are 10 passes with a minimum run of 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodecParams {
    pub passes: u32,
    pub min_run: u32,
}

impl Default for CodecParams {
    fn default() -> Self {
        Self { passes: 10, min_run: 3 }
    }
}

impl CodecParams {
    pub fn new(passes: u32, min_run: u32) -> Self {
        Self { passes, min_run }
    }

    pub fn validate(&self) -> Result<(), CodecError> {
        if self.passes > 255 {
            return Err(CodecError::TooManyPasses(self.passes));
        }
        if !(1..=255).contains(&self.min_run) {
            return Err(CodecError::InvalidMinRun(self.min_run));
        }
        Ok(())
    }
}
