use super::pass::{decode_pass, encode_pass, FrameMode, PassFrame};
use super::{CodecError, CodecParams};

pub const MAGIC: [u8; 4] = *b"ORTC";
pub const FORMAT_VERSION: u8 = 1;
/// magic (4) + version (1) + flags (1) + passCount (1) + minRun (1) + origLen (8).
/// Also the worst-case expansion of [`compress`].
pub const CONTAINER_HEADER_LEN: usize = 16;

const FLAG_STORED: u8 = 0x01;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Header {
    stored: bool,
    pass_count: u8,
    min_run: u8,
    orig_len: u64,
}

impl Header {
    fn write_to(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&MAGIC);
        out.push(FORMAT_VERSION);
        out.push(if self.stored { FLAG_STORED } else { 0 });
        out.push(self.pass_count);
        out.push(self.min_run);
        out.extend_from_slice(&self.orig_len.to_le_bytes());
    }

    fn parse(bytes: &[u8]) -> Result<Header, CodecError> {
        if bytes.len() < MAGIC.len() || bytes[..MAGIC.len()] != MAGIC {
            return Err(CodecError::BadMagic);
        }
        if bytes.len() < CONTAINER_HEADER_LEN {
            return Err(CodecError::malformed("truncated container header"));
        }
        if bytes[4] != FORMAT_VERSION {
            return Err(CodecError::UnsupportedVersion(bytes[4]));
        }
        let flags = bytes[5];
        if flags & !FLAG_STORED != 0 {
            return Err(CodecError::malformed(format!("unknown container flags {flags:#04x}")));
        }
        let header = Header {
            stored: flags & FLAG_STORED != 0,
            pass_count: bytes[6],
            min_run: bytes[7],
            orig_len: u64::from_le_bytes(bytes[8..16].try_into().expect("8-byte slice")),
        };
        if header.stored && header.pass_count != 0 {
            return Err(CodecError::malformed("stored container declares passes"));
        }
        Ok(header)
    }
}

fn stored_container(data: &[u8], min_run: u8) -> Vec<u8> {
    let mut out = Vec::with_capacity(CONTAINER_HEADER_LEN + data.len());
    Header {
        stored: true,
        pass_count: 0,
        min_run,
        orig_len: data.len() as u64,
    }
    .write_to(&mut out);
    out.extend_from_slice(data);
    out
}

/// Runs `params.passes` ORT passes (pass `i` at stride `i`) and wraps the
/// result in a container. Falls back to a stored container whenever that
/// is not strictly larger, so the output never exceeds the input by more
/// than [`CONTAINER_HEADER_LEN`] bytes.
pub fn compress(data: &[u8], params: &CodecParams) -> Result<Vec<u8>, CodecError> {
    params.validate()?;
    let min_run = params.min_run as u8;

    let mut current = data.to_vec();
    for stride in 1..=params.passes as usize {
        current = encode_pass(&current, stride, params.min_run)?.to_bytes();
    }
    if params.passes == 0 || current.len() >= data.len() {
        return Ok(stored_container(data, min_run));
    }

    let mut out = Vec::with_capacity(CONTAINER_HEADER_LEN + current.len());
    Header {
        stored: false,
        pass_count: params.passes as u8,
        min_run,
        orig_len: data.len() as u64,
    }
    .write_to(&mut out);
    out.extend_from_slice(&current);
    Ok(out)
}

/// Peels one frame off `buf`, which must hold exactly that frame.
fn peel(buf: &[u8], expected_stride: u8) -> Result<(PassFrame, Vec<u8>), CodecError> {
    let (frame, used) = PassFrame::parse(buf)?;
    if used != buf.len() {
        return Err(CodecError::malformed(format!(
            "{} trailing bytes after pass {expected_stride}",
            buf.len() - used
        )));
    }
    if frame.stride != expected_stride {
        return Err(CodecError::malformed(format!(
            "pass {expected_stride} has stride {}",
            frame.stride
        )));
    }
    let inner = decode_pass(&frame)?;
    Ok((frame, inner))
}

pub fn decompress(bytes: &[u8]) -> Result<Vec<u8>, CodecError> {
    let header = Header::parse(bytes)?;
    let payload = &bytes[CONTAINER_HEADER_LEN..];

    let out = if header.stored {
        if payload.len() as u64 != header.orig_len {
            return Err(CodecError::malformed("stored payload length disagrees with the header"));
        }
        payload.to_vec()
    } else {
        let mut current = payload.to_vec();
        for stride in (1..=header.pass_count).rev() {
            current = peel(&current, stride)?.1;
        }
        current
    };

    if out.len() as u64 != header.orig_len {
        return Err(CodecError::LengthMismatch {
            expected: header.orig_len,
            actual: out.len() as u64,
        });
    }
    Ok(out)
}

/// Shape of one pass inside a container.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameSummary {
    pub mode: FrameMode,
    pub stride: u8,
    pub input_len: u64,
    pub kept_len: u64,
    pub tree_len: usize,
    /// Serialized size of the frame, header included.
    pub encoded_len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContainerInfo {
    pub version: u8,
    pub stored: bool,
    pub pass_count: u8,
    pub min_run: u8,
    pub orig_len: u64,
    pub total_len: usize,
    /// Frames in pass order, stride 1 first. The last entry is the
    /// outermost frame, the one stored directly in the file.
    pub frames: Vec<FrameSummary>,
}

/// Decodes a container pass by pass and reports every frame.
pub fn inspect(bytes: &[u8]) -> Result<ContainerInfo, CodecError> {
    let header = Header::parse(bytes)?;
    let payload = &bytes[CONTAINER_HEADER_LEN..];
    let mut frames = Vec::with_capacity(header.pass_count as usize);

    let decoded_len = if header.stored {
        payload.len() as u64
    } else {
        let mut current = payload.to_vec();
        for stride in (1..=header.pass_count).rev() {
            let (frame, inner) = peel(&current, stride)?;
            frames.push(FrameSummary {
                mode: frame.mode,
                stride: frame.stride,
                input_len: frame.input_len,
                kept_len: frame.kept_len(),
                tree_len: frame.tree.len(),
                encoded_len: frame.encoded_len(),
            });
            current = inner;
        }
        current.len() as u64
    };
    if decoded_len != header.orig_len {
        return Err(if header.stored {
            CodecError::malformed("stored payload length disagrees with the header")
        } else {
            CodecError::LengthMismatch {
                expected: header.orig_len,
                actual: decoded_len,
            }
        });
    }
    frames.reverse();

    Ok(ContainerInfo {
        version: FORMAT_VERSION,
        stored: header.stored,
        pass_count: header.pass_count,
        min_run: header.min_run,
        orig_len: header.orig_len,
        total_len: bytes.len(),
        frames,
    })
}
