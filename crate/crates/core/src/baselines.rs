//! Classical run-length coders used as comparison points.
//!
//! Both only encode runs of three or more; shorter runs pass through as
//! literals.
//!
//! * PRLC1 marks a run with an escape byte: `flag, value, length - 1`.
//!   A run unit covers at most 256 bytes. The flag is the least frequent
//!   byte of the input, and literal occurrences of it are escaped as
//!   one-byte runs, so every input is encodable.
//! * PRLC2 works on 7-bit data: a byte with the MSB clear is a literal, a
//!   byte with the MSB set repeats the preceding literal `count` more
//!   times. A run unit covers at most 128 bytes.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BaselineError {
    #[error("byte {value:#04x} at offset {offset} does not fit the 7-bit alphabet")]
    UnsupportedAlphabet { offset: usize, value: u8 },
    #[error("malformed stream: {0}")]
    MalformedStream(&'static str),
}

const MIN_RUN: usize = 3;
pub const PRLC1_MAX_RUN: usize = 256;
pub const PRLC2_MAX_RUN: usize = 128;

/// Maximal runs of equal bytes as `(value, length)`.
fn runs(data: &[u8]) -> impl Iterator<Item = (u8, usize)> + '_ {
    data.chunk_by(|a, b| a == b).map(|run| (run[0], run.len()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prlc1Stream {
    pub flag: u8,
    pub body: Vec<u8>,
}

impl Prlc1Stream {
    /// File form: the flag byte followed by the body.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(1 + self.body.len());
        out.push(self.flag);
        out.extend_from_slice(&self.body);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, BaselineError> {
        let (&flag, body) = bytes
            .split_first()
            .ok_or(BaselineError::MalformedStream("missing flag byte"))?;
        Ok(Self {
            flag,
            body: body.to_vec(),
        })
    }

    pub fn encoded_len(&self) -> usize {
        1 + self.body.len()
    }
}

/// Least frequent byte value, ties to the smallest. `0x00` for empty input.
pub fn least_frequent_byte(data: &[u8]) -> u8 {
    let mut counts = [0usize; 256];
    for &b in data {
        counts[b as usize] += 1;
    }
    // min_by_key keeps the first minimum
    (0..=255u8).min_by_key(|&b| counts[b as usize]).unwrap_or(0)
}

pub fn prlc1_encode(data: &[u8]) -> Prlc1Stream {
    prlc1_encode_with_flag(data, least_frequent_byte(data))
}

pub fn prlc1_encode_with_flag(data: &[u8], flag: u8) -> Prlc1Stream {
    let mut body = Vec::with_capacity(data.len());
    for (value, len) in runs(data) {
        let mut left = len;
        while left > 0 {
            let unit = left.min(PRLC1_MAX_RUN);
            if unit >= MIN_RUN || value == flag {
                body.extend_from_slice(&[flag, value, (unit - 1) as u8]);
            } else {
                body.extend(std::iter::repeat_n(value, unit));
            }
            left -= unit;
        }
    }
    Prlc1Stream { flag, body }
}

pub fn prlc1_decode(stream: &Prlc1Stream) -> Result<Vec<u8>, BaselineError> {
    let mut out = Vec::with_capacity(stream.body.len());
    let mut bytes = stream.body.iter().copied();
    while let Some(b) = bytes.next() {
        if b == stream.flag {
            let (value, count) = bytes
                .next()
                .zip(bytes.next())
                .ok_or(BaselineError::MalformedStream("truncated run triple"))?;
            out.extend(std::iter::repeat_n(value, count as usize + 1));
        } else {
            out.push(b);
        }
    }
    Ok(out)
}

pub fn prlc2_encode(data: &[u8]) -> Result<Vec<u8>, BaselineError> {
    if let Some(offset) = data.iter().position(|&b| b & 0x80 != 0) {
        return Err(BaselineError::UnsupportedAlphabet {
            offset,
            value: data[offset],
        });
    }
    let mut body = Vec::with_capacity(data.len());
    for (value, len) in runs(data) {
        let mut left = len;
        while left > 0 {
            let unit = left.min(PRLC2_MAX_RUN);
            if unit >= MIN_RUN {
                body.push(value);
                body.push(0x80 | (unit - 1) as u8);
            } else {
                body.extend(std::iter::repeat_n(value, unit));
            }
            left -= unit;
        }
    }
    Ok(body)
}

pub fn prlc2_decode(body: &[u8]) -> Result<Vec<u8>, BaselineError> {
    let mut out = Vec::with_capacity(body.len());
    // a count byte is only valid directly after a literal
    let mut last_literal = None;
    for &b in body {
        if b & 0x80 == 0 {
            out.push(b);
            last_literal = Some(b);
        } else {
            let value = last_literal
                .take()
                .ok_or(BaselineError::MalformedStream("count byte without a preceding literal"))?;
            out.extend(std::iter::repeat_n(value, (b & 0x7F) as usize));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prlc1_examples() {
        let data = [3, 3, 8, 8, 8, 8, 8, 8, 8];
        let s = prlc1_encode_with_flag(&data, 0xFF);
        assert_eq!(s.body, vec![0x03, 0x03, 0xFF, 0x08, 0x06]);
        assert_eq!(prlc1_decode(&s).unwrap(), data);

        let data = [5, 9, 6, 1, 2];
        let s = prlc1_encode(&data);
        assert_eq!(s.flag, 0x00);
        assert_eq!(s.body, data);
        assert_eq!(s.to_bytes(), vec![0, 5, 9, 6, 1, 2]);
        assert_eq!(prlc1_decode(&s).unwrap(), data);

        let data = [0x41; 300];
        let s = prlc1_encode_with_flag(&data, 0xFF);
        assert_eq!(s.body, vec![0xFF, 0x41, 0xFF, 0xFF, 0x41, 0x2B]);
        assert_eq!(prlc1_decode(&s).unwrap(), data);
    }

    #[test]
    fn prlc1_short_tail_stays_literal() {
        let s = prlc1_encode_with_flag(&[0x41; 258], 0xFF);
        assert_eq!(s.body, vec![0xFF, 0x41, 0xFF, 0x41, 0x41]);
    }

    #[test]
    fn prlc1_escapes_literal_flags() {
        let s = prlc1_encode_with_flag(&[1, 0xFF, 2], 0xFF);
        assert_eq!(s.body, vec![1, 0xFF, 0xFF, 0x00, 2]);
        assert_eq!(prlc1_decode(&s).unwrap(), vec![1, 0xFF, 2]);
    }

    #[test]
    fn prlc1_errors() {
        let s = Prlc1Stream {
            flag: 0xFF,
            body: vec![0xFF, 0x08],
        };
        assert_eq!(
            prlc1_decode(&s),
            Err(BaselineError::MalformedStream("truncated run triple"))
        );
        let empty = Prlc1Stream { flag: 7, body: vec![] };
        assert_eq!(prlc1_decode(&empty).unwrap(), Vec::<u8>::new());
        assert!(Prlc1Stream::from_bytes(&[]).is_err());
    }

    #[test]
    fn flag_choice() {
        assert_eq!(least_frequent_byte(&[]), 0);
        let all: Vec<u8> = (0..=255).chain([0, 1, 2]).collect();
        assert_eq!(least_frequent_byte(&all), 3);
    }

    #[test]
    fn prlc2_examples() {
        assert_eq!(prlc2_encode(&[5; 5]).unwrap(), vec![0x05, 0x84]);
        assert_eq!(prlc2_decode(&[0x05, 0x84]).unwrap(), vec![5; 5]);
        assert_eq!(
            prlc2_encode(&[1, 2, 0x90]),
            Err(BaselineError::UnsupportedAlphabet { offset: 2, value: 0x90 })
        );
        assert_eq!(prlc2_encode(&[1; 200]).unwrap(), vec![0x01, 0xFF, 0x01, 0xC7]);
        assert_eq!(prlc2_decode(&[0x01, 0xFF, 0x01, 0xC7]).unwrap(), vec![1; 200]);
    }

    #[test]
    fn prlc2_errors() {
        assert!(matches!(prlc2_decode(&[0x84]), Err(BaselineError::MalformedStream(_))));
        assert!(matches!(
            prlc2_decode(&[0x05, 0x84, 0x81]),
            Err(BaselineError::MalformedStream(_))
        ));
        assert_eq!(prlc2_decode(&[]).unwrap(), Vec::<u8>::new());
        assert_eq!(prlc2_encode(&[]).unwrap(), Vec::<u8>::new());
    }
}
