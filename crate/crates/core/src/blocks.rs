//! Block structures (compositions of `n`) and positive roots of `gl(n)`.
//!
//! All row and column indices are 1-based, matching the usual way the
//! diagrams of a parabolic nilradical are drawn.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BlockError {
    #[error("block list is empty")]
    Empty,
    #[error("block size must be a positive integer, got `{0}`")]
    BadSize(String),
}

/// A positive root `e_i - e_j` of `gl(n)`, identified with matrix position
/// `(row, col)`. The derived ordering is lexicographic by `(row, col)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Root {
    pub row: usize,
    pub col: usize,
}

impl Root {
    pub const fn new(row: usize, col: usize) -> Self {
        Root { row, col }
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

impl From<(usize, usize)> for Root {
    fn from((row, col): (usize, usize)) -> Self {
        Root { row, col }
    }
}

/// The block sizes `(r_1, ..., r_s)` of a standard parabolic subalgebra.
///
/// Boundaries are the prefix sums `R_0 = 0 < R_1 < ... < R_s = n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockStructure {
    sizes: Vec<usize>,
    bounds: Vec<usize>,
    // block_of[i] for 1-based row i; entry 0 unused
    owner: Vec<usize>,
}

impl BlockStructure {
    pub fn new(sizes: Vec<usize>) -> Result<Self, BlockError> {
        if sizes.is_empty() {
            return Err(BlockError::Empty);
        }
        if let Some(bad) = sizes.iter().find(|&&r| r == 0) {
            return Err(BlockError::BadSize(bad.to_string()));
        }
        let mut bounds = Vec::with_capacity(sizes.len() + 1);
        bounds.push(0);
        let mut owner = vec![0];
        for (k, &r) in sizes.iter().enumerate() {
            let last = *bounds.last().unwrap();
            bounds.push(last + r);
            owner.extend(std::iter::repeat_n(k + 1, r));
        }
        Ok(BlockStructure {
            sizes,
            bounds,
            owner,
        })
    }

    /// The Borel case: `n` blocks of size one.
    pub fn borel(n: usize) -> Self {
        BlockStructure::new(vec![1; n.max(1)]).expect("positive sizes")
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn n(&self) -> usize {
        *self.bounds.last().unwrap()
    }

    pub fn num_blocks(&self) -> usize {
        self.sizes.len()
    }

    /// `R_k` for `k = 0..=s`.
    pub fn bound(&self, k: usize) -> usize {
        self.bounds[k]
    }

    pub fn bounds(&self) -> &[usize] {
        &self.bounds
    }

    /// Size of block `k` (1-based).
    pub fn size(&self, k: usize) -> usize {
        self.sizes[k - 1]
    }

    /// Size of the last block.
    pub fn last_size(&self) -> usize {
        *self.sizes.last().unwrap()
    }

    /// The unique `k` with `R_{k-1} < i <= R_k`.
    pub fn block_of(&self, i: usize) -> usize {
        assert!(i >= 1 && i <= self.n(), "index {i} outside 1..={}", self.n());
        self.owner[i]
    }

    pub fn same_block(&self, i: usize, j: usize) -> bool {
        self.block_of(i) == self.block_of(j)
    }

    /// Whether `(i, j)` is a position of the nilradical.
    pub fn in_nilradical(&self, root: Root) -> bool {
        root.row >= 1
            && root.col <= self.n()
            && root.row < root.col
            && self.block_of(root.row) < self.block_of(root.col)
    }

    /// The structure obtained by deleting the last row and column, i.e. with
    /// the last block shrunk by one (and dropped when it becomes empty).
    /// Returns `None` for `n = 1`.
    pub fn truncated(&self) -> Option<BlockStructure> {
        if self.n() <= 1 {
            return None;
        }
        let mut sizes = self.sizes.clone();
        let last = sizes.last_mut().unwrap();
        *last -= 1;
        if *last == 0 {
            sizes.pop();
        }
        Some(BlockStructure::new(sizes).expect("nonempty"))
    }
}

impl fmt::Display for BlockStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sizes.iter().map(|r| r.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for BlockStructure {
    type Err = BlockError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim();
        if trimmed.is_empty() {
            return Err(BlockError::Empty);
        }
        let sizes = trimmed
            .split(',')
            .map(|part| {
                let part = part.trim();
                match part.parse::<usize>() {
                    Ok(r) if r > 0 => Ok(r),
                    _ => Err(BlockError::BadSize(part.to_string())),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        BlockStructure::new(sizes)
    }
}

impl Serialize for BlockStructure {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.sizes.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BlockStructure {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let sizes = Vec::<usize>::deserialize(deserializer)?;
        BlockStructure::new(sizes).map_err(serde::de::Error::custom)
    }
}

/// All compositions of `n` in lexicographic order of their size lists.
pub fn compositions(n: usize) -> Vec<BlockStructure> {
    fn rec(rest: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for first in 1..=rest {
            prefix.push(first);
            rec(rest - first, prefix, out);
            prefix.pop();
        }
    }
    if n == 0 {
        return Vec::new();
    }
    let mut raw = Vec::new();
    rec(n, &mut Vec::new(), &mut raw);
    raw.into_iter()
        .map(|sizes| BlockStructure::new(sizes).expect("positive"))
        .collect()
}

/// Compositions of every `n` in `1..=max_n`, grouped by increasing `n`.
pub fn compositions_up_to(max_n: usize) -> Vec<BlockStructure> {
    (1..=max_n).flat_map(compositions).collect()
}
