//! Set partitions of positions {0..l}, encoded as restricted growth strings.
//!
//! A restricted growth string (RGS) `a` has `a[0] = 0` and
//! `a[i] <= 1 + max(a[..i])`; position `i` lies in block `a[i]`. Blocks are
//! therefore numbered by their smallest element, which is the canonical
//! order used throughout the crate.

use std::collections::HashMap;

/// Lexicographic enumeration of all RGS of length `len` using at most
/// `max_blocks` blocks.
#[derive(Clone, Debug)]
pub struct RestrictedGrowth {
    current: Vec<u32>,
    max_blocks: u32,
    started: bool,
    done: bool,
}

impl RestrictedGrowth {
    pub fn new(len: usize, max_blocks: usize) -> Self {
        RestrictedGrowth {
            current: vec![0; len],
            max_blocks: max_blocks.min(u32::MAX as usize) as u32,
            started: false,
            done: len > 0 && max_blocks == 0,
        }
    }

    fn advance(&mut self) -> bool {
        let len = self.current.len();
        let mut prefix_max = vec![0u32; len];
        for i in 1..len {
            prefix_max[i] = prefix_max[i - 1].max(self.current[i - 1]);
        }
        for i in (1..len).rev() {
            let limit = (prefix_max[i] + 1).min(self.max_blocks - 1);
            if self.current[i] < limit {
                self.current[i] += 1;
                for v in &mut self.current[i + 1..] {
                    *v = 0;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for RestrictedGrowth {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        if self.started && !self.advance() {
            self.done = true;
            return None;
        }
        self.started = true;
        Some(self.current.clone())
    }
}

/// Number of set partitions of an `len`-set into at most `max_blocks` blocks.
pub fn count_partitions(len: usize, max_blocks: usize) -> u128 {
    // Stirling numbers of the second kind, row by row
    let mut row = vec![1u128];
    for _ in 0..len {
        let mut next = vec![0u128; row.len() + 1];
        for (r, &s) in row.iter().enumerate() {
            next[r] += s * r as u128;
            next[r + 1] += s;
        }
        row = next;
    }
    row.iter().take(max_blocks + 1).sum()
}

/// The equality pattern of an index sequence: positions with equal values
/// share a block.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndexType {
    rgs: Vec<u32>,
    blocks: usize,
}

impl IndexType {
    pub fn of<T: Eq + std::hash::Hash>(seq: &[T]) -> Self {
        let mut seen: HashMap<&T, u32> = HashMap::new();
        let rgs = seq
            .iter()
            .map(|v| {
                let next = seen.len() as u32;
                *seen.entry(v).or_insert(next)
            })
            .collect();
        IndexType {
            rgs,
            blocks: seen.len(),
        }
    }

    pub fn from_rgs(rgs: Vec<u32>) -> Option<Self> {
        let mut max: Option<u32> = None;
        for &v in &rgs {
            match max {
                None if v != 0 => return None,
                Some(m) if v > m + 1 => return None,
                _ => {}
            }
            max = Some(max.map_or(v, |m| m.max(v)));
        }
        let blocks = max.map_or(0, |m| m as usize + 1);
        Some(IndexType { rgs, blocks })
    }

    pub fn block_count(&self) -> usize {
        self.blocks
    }

    pub fn rgs(&self) -> &[u32] {
        &self.rgs
    }

    /// Blocks as sorted lists of 0-based positions, ordered by smallest element.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.blocks];
        for (pos, &b) in self.rgs.iter().enumerate() {
            out[b as usize].push(pos);
        }
        out
    }
}
