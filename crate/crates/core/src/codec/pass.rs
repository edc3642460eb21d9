use crate::bitmap::RepeatBitmap;
use crate::tree::{bitmap_to_tree, parse_tree, serialize_tree, tree_to_bitmap};

use super::CodecError;

/// mode (1) + stride (1) + inputLen (8) + keptLen (8)
pub const FRAME_HEADER_LEN: usize = 18;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum FrameMode {
    Stored = 0,
    Ort = 1,
}

impl FrameMode {
    pub fn name(self) -> &'static str {
        match self {
            FrameMode::Stored => "stored",
            FrameMode::Ort => "ort",
        }
    }
}

/// Output of one encoding pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PassFrame {
    pub mode: FrameMode,
    pub stride: u8,
    pub input_len: u64,
    pub kept: Vec<u8>,
    /// Serialized repetition tree; empty for stored frames.
    pub tree: Vec<u8>,
}

/// Marks bytes that repeat the byte `stride` positions earlier.
///
/// Positions are grouped into chains `p, p + stride, p + 2 * stride, ...` of
/// equal values. In every maximal chain of at least `min_run` members, all
/// members but the first are marked. Positions below `stride` are never
/// marked.
pub fn mark_equalities(data: &[u8], stride: usize, min_run: usize) -> RepeatBitmap {
    assert!(stride >= 1 && min_run >= 1, "stride and min_run must be positive");
    let n = data.len();
    let mut bitmap = RepeatBitmap::new(n);
    for residue in 0..stride.min(n) {
        let mut anchor = residue;
        while anchor < n {
            let value = data[anchor];
            let mut last = anchor;
            let mut run = 1;
            while last + stride < n && data[last + stride] == value {
                last += stride;
                run += 1;
            }
            if run >= min_run {
                for p in (anchor + stride..=last).step_by(stride) {
                    bitmap.set(p);
                }
            }
            anchor = last + stride;
        }
    }
    bitmap
}

pub fn encode_pass(data: &[u8], stride: usize, min_run: u32) -> Result<PassFrame, CodecError> {
    let stride_byte = u8::try_from(stride)
        .ok()
        .filter(|&s| s >= 1)
        .ok_or(CodecError::InvalidStride(stride))?;
    if !(1..=255).contains(&min_run) {
        return Err(CodecError::InvalidMinRun(min_run));
    }

    let bitmap = mark_equalities(data, stride, min_run as usize);
    let kept: Vec<u8> = data
        .iter()
        .enumerate()
        .filter(|&(p, _)| !bitmap.get(p))
        .map(|(_, &b)| b)
        .collect();
    let tree = serialize_tree(&bitmap_to_tree(&bitmap));

    // both forms share the frame header
    if kept.len() + tree.len() < data.len() {
        Ok(PassFrame {
            mode: FrameMode::Ort,
            stride: stride_byte,
            input_len: data.len() as u64,
            kept,
            tree,
        })
    } else {
        Ok(PassFrame::stored(data, stride_byte))
    }
}

pub fn decode_pass(frame: &PassFrame) -> Result<Vec<u8>, CodecError> {
    if frame.stride == 0 {
        return Err(CodecError::malformed("stride 0"));
    }
    let input_len =
        usize::try_from(frame.input_len).map_err(|_| CodecError::malformed("input length does not fit in memory"))?;

    match frame.mode {
        FrameMode::Stored => {
            if !frame.tree.is_empty() {
                return Err(CodecError::malformed("stored frame carries a tree"));
            }
            if frame.kept.len() != input_len {
                return Err(CodecError::malformed("stored frame length disagrees with its payload"));
            }
            Ok(frame.kept.clone())
        }
        FrameMode::Ort => {
            let (tree, used) = parse_tree(&frame.tree, input_len).map_err(|e| CodecError::malformed(e.to_string()))?;
            if used != frame.tree.len() {
                return Err(CodecError::malformed("trailing bytes after the tree"));
            }
            // Checked before anything of size input_len is allocated.
            if tree.marked_positions().checked_add(frame.kept.len()) != Some(input_len) {
                return Err(CodecError::malformed("kept stream length disagrees with the tree"));
            }
            let bitmap = tree_to_bitmap(&tree, input_len).map_err(|e| CodecError::malformed(e.to_string()))?;

            let stride = usize::from(frame.stride);
            let mut out = Vec::with_capacity(input_len);
            let mut kept = frame.kept.iter();
            for p in 0..input_len {
                if bitmap.get(p) {
                    if p < stride {
                        return Err(CodecError::malformed(format!(
                            "position {p} repeats a byte before the start of the input"
                        )));
                    }
                    out.push(out[p - stride]);
                } else {
                    // the count check above guarantees a byte is available
                    out.push(*kept.next().expect("kept stream exhausted"));
                }
            }
            Ok(out)
        }
    }
}

impl PassFrame {
    pub fn stored(data: &[u8], stride: u8) -> Self {
        PassFrame {
            mode: FrameMode::Stored,
            stride,
            input_len: data.len() as u64,
            kept: data.to_vec(),
            tree: Vec::new(),
        }
    }

    pub fn kept_len(&self) -> u64 {
        self.kept.len() as u64
    }

    pub fn encoded_len(&self) -> usize {
        FRAME_HEADER_LEN + self.kept.len() + self.tree.len()
    }

    pub fn write_to(&self, out: &mut Vec<u8>) {
        out.reserve(self.encoded_len());
        out.push(self.mode as u8);
        out.push(self.stride);
        out.extend_from_slice(&self.input_len.to_le_bytes());
        out.extend_from_slice(&self.kept_len().to_le_bytes());
        out.extend_from_slice(&self.kept);
        out.extend_from_slice(&self.tree);
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.encoded_len());
        self.write_to(&mut out);
        out
    }

    /// Parses one frame from the front of `bytes`, returning it with the
    /// number of bytes it occupied. Frames are self-delimiting: the tree's
    /// extent follows from `input_len`.
    pub fn parse(bytes: &[u8]) -> Result<(PassFrame, usize), CodecError> {
        if bytes.len() < FRAME_HEADER_LEN {
            return Err(CodecError::malformed("truncated frame header"));
        }
        let mode = match bytes[0] {
            0 => FrameMode::Stored,
            1 => FrameMode::Ort,
            other => return Err(CodecError::malformed(format!("unknown frame mode {other}"))),
        };
        let stride = bytes[1];
        let input_len = read_u64(&bytes[2..10]);
        let kept_len = read_u64(&bytes[10..18]);

        let body = &bytes[FRAME_HEADER_LEN..];
        let kept_len = usize::try_from(kept_len)
            .ok()
            .filter(|&k| k <= body.len())
            .ok_or_else(|| CodecError::malformed("truncated kept stream"))?;
        let kept = body[..kept_len].to_vec();

        let tree = match mode {
            FrameMode::Stored => Vec::new(),
            FrameMode::Ort => {
                let input_len = usize::try_from(input_len)
                    .map_err(|_| CodecError::malformed("input length does not fit in memory"))?;
                let (_, used) =
                    parse_tree(&body[kept_len..], input_len).map_err(|e| CodecError::malformed(e.to_string()))?;
                body[kept_len..kept_len + used].to_vec()
            }
        };

        let frame = PassFrame {
            mode,
            stride,
            input_len,
            kept,
            tree,
        };
        let used = frame.encoded_len();
        Ok((frame, used))
    }
}

fn read_u64(bytes: &[u8]) -> u64 {
    u64::from_le_bytes(bytes.try_into().expect("8-byte slice"))
}
