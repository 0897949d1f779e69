//! Per-composition counts for regression snapshots.

use rayon::prelude::*;
use serde::Serialize;

use crate::blocks::compositions;
use crate::combinatorics::compute_base;
use crate::structure::last_column_anchor;

/// Largest `n` a sweep accepts; there are `2^(n-1)` compositions.
pub const MAX_SWEEP_N: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub blocks: Vec<usize>,
    pub dim_m: usize,
    pub base: usize,
    pub phi: usize,
    pub orbit_dim_bound: usize,
    pub anchored: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sweep {
    pub n: usize,
    pub rows: Vec<SweepRow>,
}

/// One row per composition of `n`, in lexicographic order of block lists.
pub fn sweep(n: usize) -> Sweep {
    let rows = compositions(n)
        .into_par_iter()
        .map(|bs| {
            let bd = compute_base(&bs);
            SweepRow {
                blocks: bs.sizes().to_vec(),
                dim_m: bd.m_set.len(),
                base: bd.base.len(),
                phi: bd.phi.len(),
                orbit_dim_bound: bd.m_set.len() - bd.base.len() - bd.phi.len(),
                anchored: last_column_anchor(&bd).is_some(),
            }
        })
        .collect();
    Sweep { n, rows }
}

pub fn sweep_json(n: usize) -> String {
    let mut text = serde_json::to_string_pretty(&sweep(n)).expect("plain data serializes");
    text.push('\n');
    text
}
