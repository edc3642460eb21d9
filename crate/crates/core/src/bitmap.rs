//! One bit per input position, packed MSB-first into bytes.
//!
//! Byte `j` of the packing holds positions `8j..8j+8`, with position `8j`
//! in the most significant bit. That is exactly the layout of an ORT leaf,
//! so a leaf value can be read straight out of [`RepeatBitmap::block`].

use std::fmt;

#[derive(Clone, PartialEq, Eq, Default)]
pub struct RepeatBitmap {
    len: usize,
    blocks: Vec<u8>,
}

impl RepeatBitmap {
    /// An all-zero bitmap covering `len` positions.
    pub fn new(len: usize) -> Self {
        Self {
            len,
            blocks: vec![0; len.div_ceil(8)],
        }
    }

    /// Builds a bitmap from an iterator of set positions.
    ///
    /// Panics if any position is `>= len`.
    pub fn from_positions<I: IntoIterator<Item = usize>>(len: usize, positions: I) -> Self {
        let mut bitmap = Self::new(len);
        for p in positions {
            bitmap.set(p);
        }
        bitmap
    }

    pub(crate) fn from_blocks(len: usize, blocks: Vec<u8>) -> Self {
        debug_assert_eq!(blocks.len(), len.div_ceil(8));
        Self { len, blocks }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of 8-position blocks, `ceil(len / 8)`.
    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// The packed byte for block `j`.
    pub fn block(&self, j: usize) -> u8 {
        self.blocks[j]
    }

    pub fn blocks(&self) -> &[u8] {
        &self.blocks
    }

    #[inline]
    pub fn get(&self, p: usize) -> bool {
        assert!(
            p < self.len,
            "position {p} out of range for bitmap of length {}",
            self.len
        );
        self.blocks[p >> 3] & (0x80 >> (p & 7)) != 0
    }

    #[inline]
    pub fn set(&mut self, p: usize) {
        assert!(
            p < self.len,
            "position {p} out of range for bitmap of length {}",
            self.len
        );
        self.blocks[p >> 3] |= 0x80 >> (p & 7);
    }

    pub fn count_ones(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    /// Set positions in ascending order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks
            .iter()
            .enumerate()
            .filter(|(_, &b)| b != 0)
            .flat_map(|(j, &b)| (0..8).filter(move |i| b & (0x80 >> i) != 0).map(move |i| 8 * j + i))
    }
}

impl fmt::Debug for RepeatBitmap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RepeatBitmap")
            .field("len", &self.len)
            .field("ones", &self.ones().collect::<Vec<_>>())
            .finish()
    }
}
