//! Octonary repetition tree.
//!
//! Nodes live in the implicit array layout of a complete 8-ary tree: the
//! root is index 0, the children of `r` are `8r + 1 ..= 8r + 8` and the
//! parent of `r > 0` is `(r - 1) / 8`. Level `l` therefore starts at index
//! `(8^l - 1) / 7`.
//!
//! Leaves sit at level [`OrtTree::depth`], one per 8-position block of the
//! repeat bitmap, and hold that block verbatim (MSB-first). Internal node
//! bytes are presence masks: bit `k - 1` (counted from the MSB) is set iff
//! child `k` has at least one set bit below it. Subtrees without set bits
//! are pruned; only the root is kept when it is zero.
//!
//! The serialized form is a depth-first preorder of the present nodes.
//! It carries no length prefix: given the bitmap length, the presence
//! masks say exactly how many bytes to read.

use std::fmt;

use thiserror::Error;

use crate::bitmap::RepeatBitmap;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("the root node has no parent")]
    RootHasNoParent,
    #[error("child ordinal {0} is outside 1..=8")]
    BadChildOrdinal(u8),
    #[error("child index {index} exceeds the node count {node_count}")]
    ChildOutOfRange { index: u64, node_count: u64 },
    #[error("malformed tree: {0}")]
    MalformedTree(&'static str),
    #[error("tree marks position {position} but the bitmap only has {len} positions")]
    BitBeyondLength { position: usize, len: usize },
}

/// Index into the implicit complete 8-ary array layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeIndex(pub u64);

impl NodeIndex {
    pub const ROOT: NodeIndex = NodeIndex(0);

    pub fn is_root(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for NodeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn parent(r: NodeIndex) -> Result<NodeIndex, TreeError> {
    if r.is_root() {
        return Err(TreeError::RootHasNoParent);
    }
    Ok(NodeIndex((r.0 - 1) / 8))
}

/// Index of the `k`-th child (1-based) of `r` in a tree of `node_count` nodes.
pub fn kth_child(r: NodeIndex, k: u8, node_count: u64) -> Result<NodeIndex, TreeError> {
    if !(1..=8).contains(&k) {
        return Err(TreeError::BadChildOrdinal(k));
    }
    let index =
        r.0.checked_mul(8)
            .and_then(|v| v.checked_add(u64::from(k)))
            .unwrap_or(u64::MAX);
    if index > node_count {
        return Err(TreeError::ChildOutOfRange { index, node_count });
    }
    Ok(NodeIndex(index))
}

/// `8^d` for every depth a `usize` block count can reach.
const LEVEL_CAPACITY: [u64; 22] = {
    let mut table = [1u64; 22];
    let mut d = 1;
    while d < table.len() {
        table[d] = table[d - 1] * 8;
        d += 1;
    }
    table
};

/// Number of internal levels above the leaves: the smallest `d` with
/// `8^d >= num_blocks`. Zero and one block both give depth 0.
pub fn tree_depth(num_blocks: usize) -> u32 {
    let n = num_blocks as u64;
    LEVEL_CAPACITY
        .iter()
        .position(|&cap| cap >= n)
        .expect("block count exceeds 8^21") as u32
}

/// First array index on level `level`.
fn level_start(level: u32) -> u64 {
    (LEVEL_CAPACITY[level as usize] - 1) / 7
}

/// Node counts per level for a tree over `num_blocks` leaves, root first.
fn level_widths(num_blocks: usize, depth: u32) -> Vec<usize> {
    let mut widths = vec![0; depth as usize + 1];
    let mut w = num_blocks;
    for slot in widths.iter_mut().rev() {
        *slot = w;
        w = w.div_ceil(8);
    }
    // the root exists even over an empty bitmap
    widths[0] = 1;
    widths
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeNode {
    pub index: NodeIndex,
    pub value: u8,
}

/// A pruned repetition tree. Nodes are stored in serialization (preorder) order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrtTree {
    num_blocks: usize,
    depth: u32,
    nodes: Vec<TreeNode>,
}

impl OrtTree {
    pub fn num_blocks(&self) -> usize {
        self.num_blocks
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn root(&self) -> u8 {
        self.nodes[0].value
    }

    /// Present leaves as `(block, value)` pairs in block order.
    pub fn leaves(&self) -> impl Iterator<Item = (usize, u8)> + '_ {
        let base = level_start(self.depth);
        self.nodes
            .iter()
            .filter(move |n| n.index.0 >= base)
            .map(move |n| ((n.index.0 - base) as usize, n.value))
    }

    /// Total set bits across all leaves.
    pub fn marked_positions(&self) -> usize {
        self.leaves().map(|(_, v)| v.count_ones() as usize).sum()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        serialize_tree(self)
    }
}

/// Upper bound on the serialized size of any tree over `len` bitmap positions.
pub fn max_serialized_len(len: usize) -> usize {
    let num_blocks = len.div_ceil(8);
    let depth = tree_depth(num_blocks);
    let internal: u64 = LEVEL_CAPACITY[..depth as usize].iter().sum();
    num_blocks.max(1) + internal as usize
}

pub fn bitmap_to_tree(bitmap: &RepeatBitmap) -> OrtTree {
    let num_blocks = bitmap.num_blocks();
    let depth = tree_depth(num_blocks);

    // Dense byte values per level, leaves first, then folded upward.
    let mut levels: Vec<Vec<u8>> = vec![Vec::new(); depth as usize + 1];
    levels[depth as usize] = if num_blocks == 0 {
        vec![0]
    } else {
        bitmap.blocks().to_vec()
    };
    for level in (0..depth as usize).rev() {
        let folded = levels[level + 1]
            .chunks(8)
            .map(|children| {
                children
                    .iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .fold(0u8, |mask, (k, _)| mask | (0x80 >> k))
            })
            .collect();
        levels[level] = folded;
    }

    let mut nodes = Vec::new();
    collect_preorder(&levels, 0, 0, &mut nodes);
    OrtTree {
        num_blocks,
        depth,
        nodes,
    }
}

fn collect_preorder(levels: &[Vec<u8>], level: usize, local: usize, out: &mut Vec<TreeNode>) {
    let value = levels[level][local];
    out.push(TreeNode {
        index: NodeIndex(level_start(level as u32) + local as u64),
        value,
    });
    if level + 1 == levels.len() {
        return;
    }
    for k in 0..8 {
        if value & (0x80 >> k) != 0 {
            collect_preorder(levels, level + 1, 8 * local + k, out);
        }
    }
}

pub fn tree_to_bitmap(tree: &OrtTree, len: usize) -> Result<RepeatBitmap, TreeError> {
    let num_blocks = len.div_ceil(8);
    if tree.num_blocks != num_blocks {
        return Err(TreeError::MalformedTree(
            "tree block count does not match the bitmap length",
        ));
    }
    let mut blocks = vec![0u8; num_blocks];
    for (j, value) in tree.leaves() {
        if value == 0 {
            continue;
        }
        // highest set position in this leaf, counting MSB as offset 0
        let last = 8 * j + 7 - value.trailing_zeros() as usize;
        if last >= len {
            return Err(TreeError::BitBeyondLength { position: last, len });
        }
        blocks[j] = value;
    }
    Ok(RepeatBitmap::from_blocks(len, blocks))
}

pub fn serialize_tree(tree: &OrtTree) -> Vec<u8> {
    tree.nodes.iter().map(|n| n.value).collect()
}

/// Parses a preorder tree over a bitmap of `len` positions. Returns the tree
/// and the number of bytes consumed; trailing input is left untouched.
pub fn parse_tree(bytes: &[u8], len: usize) -> Result<(OrtTree, usize), TreeError> {
    let num_blocks = len.div_ceil(8);
    let depth = tree_depth(num_blocks);
    let mut parser = PreorderParser {
        bytes,
        pos: 0,
        widths: level_widths(num_blocks, depth),
        nodes: Vec::new(),
    };
    parser.node(0, 0)?;
    let consumed = parser.pos;
    Ok((
        OrtTree {
            num_blocks,
            depth,
            nodes: parser.nodes,
        },
        consumed,
    ))
}

struct PreorderParser<'a> {
    bytes: &'a [u8],
    pos: usize,
    widths: Vec<usize>,
    nodes: Vec<TreeNode>,
}

impl PreorderParser<'_> {
    fn node(&mut self, level: usize, local: usize) -> Result<(), TreeError> {
        let value = *self
            .bytes
            .get(self.pos)
            .ok_or(TreeError::MalformedTree("tree stream ends before all present nodes"))?;
        self.pos += 1;
        if value == 0 && level > 0 {
            return Err(TreeError::MalformedTree("zero byte at a non-root node"));
        }
        self.nodes.push(TreeNode {
            index: NodeIndex(level_start(level as u32) + local as u64),
            value,
        });
        if level + 1 == self.widths.len() {
            return Ok(());
        }
        for k in 0..8 {
            if value & (0x80 >> k) != 0 {
                let child = 8 * local + k;
                if child >= self.widths[level + 1] {
                    return Err(TreeError::MalformedTree("presence bit for a child past the last block"));
                }
                self.node(level + 1, child)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample64_bitmap() -> RepeatBitmap {
        RepeatBitmap::from_positions(64, [4, 5, 8, 14, 15, 52, 53, 54])
    }

    #[test]
    fn parent_and_child_examples() {
        assert_eq!(parent(NodeIndex(9)), Ok(NodeIndex(1)));
        assert_eq!(parent(NodeIndex(1)), Ok(NodeIndex(0)));
        assert_eq!(parent(NodeIndex(0)), Err(TreeError::RootHasNoParent));
        assert_eq!(kth_child(NodeIndex(1), 8, 97), Ok(NodeIndex(16)));
        assert_eq!(kth_child(NodeIndex(11), 3, 97), Ok(NodeIndex(91)));
        assert_eq!(kth_child(NodeIndex(0), 1, 97), Ok(NodeIndex(1)));
    }

    #[test]
    fn child_errors() {
        assert_eq!(kth_child(NodeIndex(0), 0, 97), Err(TreeError::BadChildOrdinal(0)));
        assert_eq!(kth_child(NodeIndex(0), 9, 97), Err(TreeError::BadChildOrdinal(9)));
        // the bound is inclusive, as in `8r + k <= n`
        assert_eq!(kth_child(NodeIndex(12), 1, 97), Ok(NodeIndex(97)));
        assert_eq!(
            kth_child(NodeIndex(12), 2, 97),
            Err(TreeError::ChildOutOfRange {
                index: 98,
                node_count: 97
            })
        );
        assert!(kth_child(NodeIndex(u64::MAX / 4), 1, u64::MAX - 1).is_err());
    }

    #[test]
    fn depth_examples() {
        assert_eq!(tree_depth(0), 0);
        assert_eq!(tree_depth(1), 0);
        assert_eq!(tree_depth(8), 1);
        assert_eq!(tree_depth(9), 2);
        assert_eq!(tree_depth(64), 2);
        assert_eq!(tree_depth(65), 3);
        assert_eq!(tree_depth(8192), 5);
    }

    #[test]
    fn depth_matches_brute_force_search() {
        for blocks in 1..5000usize {
            let brute = (0..).find(|&d| 8usize.pow(d) >= blocks).unwrap();
            assert_eq!(tree_depth(blocks), brute, "blocks = {blocks}");
        }
    }

    #[test]
    fn level_start_agrees_with_child_algebra() {
        for level in 0..8 {
            let first_child = kth_child(NodeIndex(level_start(level)), 1, u64::MAX).unwrap();
            assert_eq!(first_child.0, level_start(level + 1));
        }
    }

    #[test]
    fn sample64_tree() {
        let tree = bitmap_to_tree(&sample64_bitmap());
        assert_eq!(tree.depth(), 1);
        assert_eq!(serialize_tree(&tree), vec![0xC2, 0x0C, 0x83, 0x0E]);
        assert_eq!(tree.leaves().collect::<Vec<_>>(), vec![(0, 0x0C), (1, 0x83), (6, 0x0E)]);
        assert_eq!(tree_to_bitmap(&tree, 64).unwrap(), sample64_bitmap());
    }

    #[test]
    fn empty_and_zero_bitmaps_keep_a_zero_root() {
        let tree = bitmap_to_tree(&RepeatBitmap::new(64));
        assert_eq!(serialize_tree(&tree), vec![0x00]);
        assert_eq!(tree_to_bitmap(&tree, 64).unwrap(), RepeatBitmap::new(64));

        let tree = bitmap_to_tree(&RepeatBitmap::new(0));
        assert_eq!(serialize_tree(&tree), vec![0x00]);
        assert_eq!(parse_tree(&[0x00], 0).unwrap(), (tree, 1));
    }

    #[test]
    fn constant_run_of_sixteen() {
        let tree = bitmap_to_tree(&RepeatBitmap::from_positions(16, 1..16));
        assert_eq!(serialize_tree(&tree), vec![0xC0, 0x7F, 0xFF]);
    }

    #[test]
    fn parse_examples() {
        let (tree, used) = parse_tree(&[0xC2, 0x0C, 0x83, 0x0E, 0x55], 64).unwrap();
        assert_eq!(used, 4);
        assert_eq!(tree, bitmap_to_tree(&sample64_bitmap()));
        assert_eq!(parse_tree(&[0x00], 64).unwrap().1, 1);
        assert!(matches!(
            parse_tree(&[0xC2, 0x0C], 64),
            Err(TreeError::MalformedTree(_))
        ));
        assert!(matches!(parse_tree(&[], 64), Err(TreeError::MalformedTree(_))));
    }

    #[test]
    fn parse_rejects_child_past_last_block() {
        // 9 positions => 2 blocks => root may only mark children 1 and 2
        assert!(parse_tree(&[0xC0, 0x01, 0x80], 9).is_ok());
        assert!(matches!(parse_tree(&[0x20, 0x01], 9), Err(TreeError::MalformedTree(_))));
    }

    #[test]
    fn parse_rejects_zero_non_root() {
        assert!(matches!(
            parse_tree(&[0x80, 0x00], 64),
            Err(TreeError::MalformedTree(_))
        ));
    }

    #[test]
    fn bits_past_the_end_are_rejected() {
        // 10 positions: leaf 1 may only use its top two bits
        let (tree, _) = parse_tree(&[0x40, 0x20], 10).unwrap();
        assert_eq!(
            tree_to_bitmap(&tree, 10),
            Err(TreeError::BitBeyondLength { position: 10, len: 10 })
        );
        let (tree, _) = parse_tree(&[0x01], 0).unwrap();
        assert!(matches!(
            tree_to_bitmap(&tree, 0),
            Err(TreeError::BitBeyondLength { .. })
        ));
    }

    #[test]
    fn mismatched_length_is_malformed() {
        let tree = bitmap_to_tree(&sample64_bitmap());
        assert!(matches!(tree_to_bitmap(&tree, 72), Err(TreeError::MalformedTree(_))));
    }

    #[test]
    fn full_tree_bound() {
        assert_eq!(max_serialized_len(64), 8 + 1);
        assert_eq!(max_serialized_len(65536), 8192 + 1 + 8 + 64 + 512 + 4096);
        let full = bitmap_to_tree(&RepeatBitmap::from_positions(1000, 0..1000));
        assert!(full.node_count() <= max_serialized_len(1000));
    }
}
