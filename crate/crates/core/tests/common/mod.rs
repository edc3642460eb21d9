//! Naive reference implementations used as oracles. Nothing here calls into
//! the tree or codec modules of the library.
#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

/// Repeat flags by definition: for each position, walk its stride chain in
/// both directions and measure the maximal run of equal bytes.
pub fn brute_force_bitmap(data: &[u8], stride: usize, min_run: usize) -> Vec<bool> {
    let n = data.len();
    (0..n)
        .map(|p| {
            if p < stride || data[p] != data[p - stride] {
                return false;
            }
            let mut first = p;
            while first >= stride && data[first - stride] == data[p] {
                first -= stride;
            }
            let mut last = p;
            while last + stride < n && data[last + stride] == data[p] {
                last += stride;
            }
            (last - first) / stride + 1 >= min_run
        })
        .collect()
}

fn depth_for(num_blocks: usize) -> u32 {
    let mut d = 0;
    while 8usize.pow(d) < num_blocks {
        d += 1;
    }
    d
}

/// Preorder tree bytes built positionally: a node covering a range of
/// positions is present iff any position in the range is set.
pub fn naive_tree_bytes(bits: &[bool]) -> Vec<u8> {
    let n = bits.len();
    let num_blocks = n.div_ceil(8);
    let depth = depth_for(num_blocks);
    let any_set = |lo: usize, hi: usize| bits[lo.min(n)..hi.min(n)].iter().any(|&b| b);

    fn node(
        bits: &[bool],
        depth: u32,
        level: u32,
        local: usize,
        out: &mut Vec<u8>,
        any_set: &dyn Fn(usize, usize) -> bool,
    ) {
        let n = bits.len();
        if level == depth {
            let mut v = 0u8;
            for i in 0..8 {
                let p = local * 8 + i;
                if p < n && bits[p] {
                    v |= 0x80 >> i;
                }
            }
            out.push(v);
            return;
        }
        let child_span = 8 * 8usize.pow(depth - level - 1);
        let mut v = 0u8;
        for k in 0..8 {
            let c = local * 8 + k;
            if any_set(c * child_span, (c + 1) * child_span) {
                v |= 0x80 >> k;
            }
        }
        out.push(v);
        for k in 0..8 {
            if v & (0x80 >> k) != 0 {
                node(bits, depth, level + 1, local * 8 + k, out, any_set);
            }
        }
    }

    let mut out = Vec::new();
    node(bits, depth, 0, 0, &mut out, &any_set);
    out
}

/// Reads a preorder tree back into positional flags. Returns `None` on any
/// structural problem.
pub fn naive_tree_to_bits(tree: &[u8], n: usize) -> Option<(Vec<bool>, usize)> {
    let depth = depth_for(n.div_ceil(8));
    let mut bits = vec![false; n];
    let mut pos = 0;

    fn node(tree: &[u8], pos: &mut usize, bits: &mut [bool], depth: u32, level: u32, local: usize) -> Option<()> {
        let v = *tree.get(*pos)?;
        *pos += 1;
        if level == depth {
            for i in 0..8 {
                if v & (0x80 >> i) != 0 {
                    *bits.get_mut(local * 8 + i)? = true;
                }
            }
            return Some(());
        }
        for k in 0..8 {
            if v & (0x80 >> k) != 0 {
                node(tree, pos, bits, depth, level + 1, local * 8 + k)?;
            }
        }
        Some(())
    }

    node(tree, &mut pos, &mut bits, depth, 0, 0)?;
    Some((bits, pos))
}

/// Positional expansion: flagged bytes copy from `stride` back, the rest
/// come from `kept` in order.
pub fn naive_decode(bits: &[bool], kept: &[u8], stride: usize) -> Option<Vec<u8>> {
    let mut out: Vec<u8> = Vec::with_capacity(bits.len());
    let mut next = 0;
    for (p, &flag) in bits.iter().enumerate() {
        if flag {
            out.push(*out.get(p.checked_sub(stride)?)?);
        } else {
            out.push(*kept.get(next)?);
            next += 1;
        }
    }
    (next == kept.len()).then_some(out)
}

/// Buffers of mixed entropy: uniform noise, long runs, runs over a tiny
/// alphabet, periodic patterns and stepped gradients.
pub fn mixed_buffer(rng: &mut StdRng, len: usize) -> Vec<u8> {
    match rng.random_range(0..6u8) {
        0 => {
            let mut v = vec![0u8; len];
            rng.fill(&mut v[..]);
            v
        }
        1 => runs(rng, len, 256, 64),
        2 => runs(rng, len, 3, 6),
        3 => {
            let period = rng.random_range(1..12usize);
            let pattern: Vec<u8> = (0..period).map(|_| rng.random()).collect();
            (0..len).map(|i| pattern[i % period]).collect()
        }
        4 => {
            let step = rng.random_range(1..512usize);
            (0..len).map(|i| (i / step) as u8).collect()
        }
        _ => {
            // noise with occasional runs
            let mut v = runs(rng, len, 256, 3);
            for b in v.iter_mut() {
                if rng.random_bool(0.3) {
                    *b = rng.random();
                }
            }
            v
        }
    }
}

fn runs(rng: &mut StdRng, len: usize, alphabet: u16, max_run: usize) -> Vec<u8> {
    let mut v = Vec::with_capacity(len);
    while v.len() < len {
        let value = rng.random_range(0..alphabet) as u8;
        let run = rng.random_range(1..=max_run).min(len - v.len());
        v.extend(std::iter::repeat_n(value, run));
    }
    v
}

/// Lengths spread log-uniformly over `0..=max`.
pub fn mixed_len(rng: &mut StdRng, max: usize) -> usize {
    let bits = rng.random_range(0..=max.ilog2());
    rng.random_range(0..=(1usize << bits)).min(max)
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn sample64_data() -> Vec<u8> {
    let mut data: Vec<u8> = (0..64).collect();
    for group in [&[3usize, 4, 5][..], &[7, 8], &[13, 14, 15], &[51, 52, 53, 54]] {
        for &p in group {
            data[p] = group[0] as u8;
        }
    }
    data
}

pub fn positions(bits: &[bool]) -> Vec<usize> {
    bits.iter().enumerate().filter(|(_, &b)| b).map(|(p, _)| p).collect()
}
