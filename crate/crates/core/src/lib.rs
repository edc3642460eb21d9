//! Run-length compression with an octonary repetition tree (ORT).
//!
//! Repeated bytes are removed from the stream and their positions recorded
//! in a pruned 8-ary bitmap tree appended after the surviving bytes. The
//! transform runs several times with a growing comparison stride, each pass
//! re-encoding the previous pass's output.
//!
//! ```
//! use ort_core::{compress, decompress, CodecParams};
//!
//! let data = vec![0x42u8; 4096];
//! let packed = compress(&data, &CodecParams::default()).unwrap();
//! assert!(packed.len() < 200);
//! assert_eq!(decompress(&packed).unwrap(), data);
//! ```

pub mod baselines;
pub mod bench;
pub mod bitmap;
pub mod cli;
pub mod codec;
pub mod tree;

pub use baselines::{prlc1_decode, prlc1_encode, prlc2_decode, prlc2_encode, BaselineError, Prlc1Stream};
pub use bench::{compression_ratio, render_report, run_bench, BenchRow, Codec, CorpusItem, ReportFormat};
pub use bitmap::RepeatBitmap;
pub use codec::{compress, decode_pass, decompress, encode_pass, mark_equalities, CodecError, CodecParams, PassFrame};
pub use tree::{bitmap_to_tree, parse_tree, serialize_tree, tree_to_bitmap, NodeIndex, OrtTree, TreeError};
