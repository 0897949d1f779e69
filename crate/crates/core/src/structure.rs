//! Data attached to the last column when it carries a base root: the anchor
//! and ladder, the chain roots, the principal minors, the shadow set and the
//! normal-form zero pattern.

use std::collections::{BTreeSet, HashMap};

use num_traits::Zero;
use thiserror::Error;

use crate::blocks::Root;
use crate::combinatorics::BaseData;
use crate::nilrad::NilradMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("blocks {blocks}: no base root in the last column")]
    AnchorMissing { blocks: String },
    #[error("blocks {blocks}: {detail}")]
    StructuralViolation { blocks: String, detail: String },
}

/// The base root `(m̃, n)` in the last column and its surroundings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnchorData {
    /// Row of the base root in column `n`.
    pub m_tilde: usize,
    /// Least row `i` with `(i, n)` in `S ∪ Φ`.
    pub m: usize,
    /// Size of the last block.
    pub r: usize,
    /// The base roots in rows `m̃ .. m̃+r-1`, sorted by column ascending.
    pub ladder: Vec<Root>,
}

impl AnchorData {
    pub fn ladder_cols(&self) -> Vec<usize> {
        self.ladder.iter().map(|r| r.col).collect()
    }
}

pub fn last_column_anchor(bd: &BaseData) -> Option<AnchorData> {
    let n = bd.bs.n();
    let anchor = bd.base_in_col(n)?;
    let r = bd.bs.last_size();
    let m = bd
        .generator_roots()
        .into_iter()
        .filter(|g| g.col == n)
        .map(|g| g.row)
        .min()
        .expect("anchor itself is in the last column");
    let mut ladder: Vec<Root> = (anchor.row..anchor.row + r)
        .map(|i| {
            bd.base_in_row(i)
                .unwrap_or_else(|| panic!("blocks {}: ladder row {i} has no base root", bd.bs))
        })
        .collect();
    ladder.sort_by_key(|g| g.col);
    Some(AnchorData {
        m_tilde: anchor.row,
        m,
        r,
        ladder,
    })
}

fn anchor_or_err(bd: &BaseData) -> Result<AnchorData, StructureError> {
    last_column_anchor(bd).ok_or_else(|| StructureError::AnchorMissing {
        blocks: bd.bs.to_string(),
    })
}

/// Whether a root's row respects the bound `a <= r + R_k` for
/// `R_k < a <= R_{k+1}`, `k >= 1`. Rows of the first block are unbounded.
fn row_bound_ok(bd: &BaseData, r: usize, root: Root) -> bool {
    let k = bd.bs.block_of(root.row) - 1;
    k == 0 || root.row <= r + bd.bs.bound(k)
}

/// The chain roots: roots of `S ∪ Φ` lying on some chain (consecutive roots
/// share column/row) made of roots within the row bound that passes through
/// a seed `(i, j)` with `m <= i < m + r` and `j` a ladder column.
///
/// A root lies on such a chain iff it reaches a seed or is reached from one
/// in the graph of bounded roots, so two reachability sweeps suffice.
pub fn psi_set(bd: &BaseData, anchor: &AnchorData) -> BTreeSet<Root> {
    let nodes: Vec<Root> = bd
        .generator_roots()
        .into_iter()
        .filter(|&g| row_bound_ok(bd, anchor.r, g))
        .collect();
    let ladder_cols = anchor.ladder_cols();
    let seeds: Vec<Root> = nodes
        .iter()
        .copied()
        .filter(|g| anchor.m <= g.row && g.row < anchor.m + anchor.r && ladder_cols.contains(&g.col))
        .collect();

    let mut by_row: HashMap<usize, Vec<Root>> = HashMap::new();
    let mut by_col: HashMap<usize, Vec<Root>> = HashMap::new();
    for &g in &nodes {
        by_row.entry(g.row).or_default().push(g);
        by_col.entry(g.col).or_default().push(g);
    }
    let sweep = |next: &dyn Fn(Root) -> Vec<Root>| {
        let mut seen: BTreeSet<Root> = seeds.iter().copied().collect();
        let mut stack = seeds.clone();
        while let Some(u) = stack.pop() {
            for v in next(u) {
                if seen.insert(v) {
                    stack.push(v);
                }
            }
        }
        seen
    };
    let forward = sweep(&|u: Root| by_row.get(&u.col).cloned().unwrap_or_default());
    let backward = sweep(&|u: Root| by_col.get(&u.row).cloned().unwrap_or_default());
    forward.union(&backward).copied().collect()
}

/// The square minor right of block `k` whose columns carry that block's
/// chain roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalMinor {
    pub block: usize,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl PrincipalMinor {
    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// Row on the secondary diagonal in column position `l` (0-based).
    pub fn diagonal_row(&self, l: usize) -> usize {
        self.rows[self.size() - 1 - l]
    }
}

/// One principal minor per block except the last, with `min(r, r_k)` rows.
///
/// For `k >= 2` the rows are the first rows of block `k`. For the first
/// block the chain roots sit in its bottom rows, so those are taken; this
/// agrees with taking the top rows whenever `r_1 <= r`.
pub fn principal_minors(
    bd: &BaseData,
    psi: &BTreeSet<Root>,
) -> Result<Vec<PrincipalMinor>, StructureError> {
    let bs = &bd.bs;
    let r = bs.last_size();
    let violation = |detail: String| StructureError::StructuralViolation {
        blocks: bs.to_string(),
        detail,
    };
    let mut out = Vec::new();
    for k in 1..bs.num_blocks() {
        let rt = r.min(bs.size(k));
        let (lo, hi) = (bs.bound(k - 1), bs.bound(k));
        let rows: Vec<usize> = if k == 1 {
            (hi - rt + 1..=hi).collect()
        } else {
            (lo + 1..=lo + rt).collect()
        };
        let in_block: Vec<Root> = psi
            .iter()
            .copied()
            .filter(|g| lo < g.row && g.row <= hi)
            .collect();
        if let Some(g) = in_block.iter().find(|g| !rows.contains(&g.row)) {
            return Err(violation(format!(
                "chain root {g} of block {k} lies outside rows {rows:?}"
            )));
        }
        let cols: Vec<usize> = in_block
            .iter()
            .map(|g| g.col)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if cols.len() != rt {
            return Err(violation(format!(
                "block {k} has chain-root columns {cols:?}, expected {rt} of them"
            )));
        }
        out.push(PrincipalMinor {
            block: k,
            rows,
            cols,
        });
    }
    Ok(out)
}

/// Positions of `M` in rows free of chain roots that have a chain root
/// further down in the same column.
pub fn t_set(bd: &BaseData, psi: &BTreeSet<Root>) -> BTreeSet<Root> {
    let psi_rows: BTreeSet<usize> = psi.iter().map(|g| g.row).collect();
    bd.m_set
        .iter()
        .copied()
        .filter(|g| {
            !psi_rows.contains(&g.row) && psi.iter().any(|p| p.col == g.col && p.row > g.row)
        })
        .collect()
}

/// Everything above, bundled for an anchored block structure.
#[derive(Clone, Debug)]
pub struct StructureSets {
    pub anchor: AnchorData,
    pub psi: BTreeSet<Root>,
    pub minors: Vec<PrincipalMinor>,
    pub shadow: BTreeSet<Root>,
}

impl StructureSets {
    pub fn new(bd: &BaseData) -> Result<Self, StructureError> {
        let anchor = anchor_or_err(bd)?;
        let psi = psi_set(bd, &anchor);
        let minors = principal_minors(bd, &psi)?;
        let shadow = t_set(bd, &psi);
        Ok(StructureSets {
            anchor,
            psi,
            minors,
            shadow,
        })
    }

    pub fn minor_with_row(&self, i: usize) -> Option<&PrincipalMinor> {
        self.minors.iter().find(|pm| pm.rows.contains(&i))
    }

    pub fn minor_with_col(&self, j: usize) -> Option<&PrincipalMinor> {
        self.minors.iter().find(|pm| pm.cols.contains(&j))
    }
}

/// Which normal-form condition failed, and where.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalFormViolation {
    /// 1: principal minor not anti-triangular with nonzero secondary
    /// diagonal; 2: nonzero right of a row's last chain root; 3: nonzero
    /// between principal-minor columns below the secondary diagonal.
    pub condition: u8,
    pub position: Root,
}

/// Checks the normal-form zero pattern; `Ok(())` when `x` belongs to it.
pub fn x_membership(
    x: &NilradMatrix,
    minors: &[PrincipalMinor],
    psi: &BTreeSet<Root>,
) -> Result<(), NormalFormViolation> {
    let n = x.n();
    let fail = |condition, i, j| {
        Err(NormalFormViolation {
            condition,
            position: Root::new(i, j),
        })
    };
    for pm in minors {
        let rt = pm.size();
        for (p, &i) in pm.rows.iter().enumerate() {
            for (q, &j) in pm.cols.iter().enumerate() {
                let zero = x.at(i, j).is_zero();
                if (p + q > rt - 1 && !zero) || (p + q == rt - 1 && zero) {
                    return fail(1, i, j);
                }
            }
        }
    }
    for i in 1..=n {
        if let Some(last) = psi.iter().filter(|g| g.row == i).map(|g| g.col).max() {
            if let Some(j) = (last + 1..=n).find(|&j| !x.at(i, j).is_zero()) {
                return fail(2, i, j);
            }
        }
    }
    for pm in minors {
        let rt = pm.size();
        for (p, &i) in pm.rows.iter().enumerate() {
            for a in 1..rt {
                if p + a < rt {
                    continue;
                }
                for j in pm.cols[a - 1] + 1..pm.cols[a] {
                    if !psi.contains(&Root::new(i, j)) && !x.at(i, j).is_zero() {
                        return fail(3, i, j);
                    }
                }
            }
        }
    }
    Ok(())
}
