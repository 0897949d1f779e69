//! Structural properties of the base, the generated roots and the chain
//! roots, phrased as checks that report every counterexample they find.

use std::collections::{BTreeMap, BTreeSet};

use crate::blocks::Root;
use crate::combinatorics::{dominates, BaseData};
use crate::structure::StructureSets;

/// A named structural property. Checks marked `anchored` only apply when
/// the last column carries a base root.
pub struct LemmaCheck {
    pub name: &'static str,
    pub anchored: bool,
    check: fn(&BaseData, Option<&StructureSets>) -> Vec<String>,
}

impl LemmaCheck {
    /// Counterexamples for one block structure; empty when the property
    /// holds (or does not apply).
    pub fn run(&self, bd: &BaseData, sets: Option<&StructureSets>) -> Vec<String> {
        if self.anchored && sets.is_none() {
            return Vec::new();
        }
        (self.check)(bd, sets)
    }
}

pub fn all_checks() -> Vec<LemmaCheck> {
    vec![
        LemmaCheck { name: "base-antichain-rows-cols", anchored: false, check: base_rows_cols },
        LemmaCheck { name: "base-coverage", anchored: false, check: base_coverage },
        LemmaCheck { name: "base-row-successor", anchored: false, check: row_successor },
        LemmaCheck { name: "base-column-predecessor", anchored: false, check: column_predecessor },
        LemmaCheck { name: "base-corner-on-boundary", anchored: false, check: corner_boundary },
        LemmaCheck { name: "base-staircase-runs", anchored: false, check: staircase_runs },
        LemmaCheck { name: "generated-disjoint-injective", anchored: false, check: generated_disjoint },
        LemmaCheck { name: "multi-root-row-start", anchored: false, check: row_start },
        LemmaCheck { name: "multi-root-row-spread", anchored: false, check: row_spread },
        LemmaCheck { name: "chain-row-bound", anchored: true, check: chain_row_bound },
        LemmaCheck { name: "principal-row-roots", anchored: true, check: principal_row },
        LemmaCheck { name: "principal-minors-disjoint", anchored: true, check: minors_disjoint },
        LemmaCheck { name: "chain-column-below-literal", anchored: true, check: chain_column_literal },
        LemmaCheck { name: "chain-column-same-or-later-block", anchored: true, check: chain_column_by_block },
    ]
}

fn base_rows_cols(bd: &BaseData, _: Option<&StructureSets>) -> Vec<String> {
    let mut out = Vec::new();
    let mut rows = BTreeSet::new();
    let mut cols = BTreeSet::new();
    for g in &bd.base {
        if !rows.insert(g.row) {
            out.push(format!("row {} holds two base roots", g.row));
        }
        if !cols.insert(g.col) {
            out.push(format!("column {} holds two base roots", g.col));
        }
    }
    out
}

/// Every non-base root of `M` dominates some base root.
fn base_coverage(bd: &BaseData, _: Option<&StructureSets>) -> Vec<String> {
    bd.m_set
        .iter()
        .filter(|&&g| !bd.is_base(g) && !bd.base.iter().any(|&x| dominates(g, x)))
        .map(|g| format!("{g} dominates no base root"))
        .collect()
}

/// For a base root `(i, j)` with `i` not the last row of its block, row
/// `i + 1` holds a base root left of `j`.
fn row_successor(bd: &BaseData, _: Option<&StructureSets>) -> Vec<String> {
    let bounds = bd.bs.bounds();
    bd.base
        .iter()
        .filter(|g| !bounds.contains(&g.row))
        .filter(|g| !bd.base.iter().any(|x| x.row == g.row + 1 && x.col < g.col))
        .map(|g| format!("{g}: no base root in row {} left of column {}", g.row + 1, g.col))
        .collect()
}

/// For a base root `(i, j)` with `j - 1` not a block boundary, column
/// `j - 1` holds a base root below `i`.
fn column_predecessor(bd: &BaseData, _: Option<&StructureSets>) -> Vec<String> {
    let bounds = bd.bs.bounds();
    bd.base
        .iter()
        .filter(|g| !bounds.contains(&(g.col - 1)))
        .filter(|g| !bd.base.iter().any(|x| x.col == g.col - 1 && x.row > g.row))
        .map(|g| format!("{g}: no base root in column {} below row {}", g.col - 1, g.row))
        .collect()
}

/// A base root with no base root strictly up and to the right starts its
/// row block or ends its column block.
fn corner_boundary(bd: &BaseData, _: Option<&StructureSets>) -> Vec<String> {
    let bs = &bd.bs;
    bd.base
        .iter()
        .filter(|g| !bd.base.iter().any(|x| x.row < g.row && x.col > g.col))
        .filter(|g| {
            let a = bs.block_of(g.row);
            let b = bs.block_of(g.col);
            g.row != bs.bound(a - 1) + 1 && g.col != bs.bound(b)
        })
        .map(|g| format!("{g} is a corner away from block boundaries"))
        .collect()
}

/// From each base root, the staircase running down-left through columns
/// `j-1, j-2, ...` and the one running through rows `i+1, i+2, ...` have the
/// same length.
fn staircase_runs(bd: &BaseData, _: Option<&StructureSets>) -> Vec<String> {
    let row_of_col: BTreeMap<usize, usize> = bd.base.iter().map(|g| (g.col, g.row)).collect();
    let col_of_row: BTreeMap<usize, usize> = bd.base.iter().map(|g| (g.row, g.col)).collect();
    let mut out = Vec::new();
    for g in &bd.base {
        let mut by_cols = 1;
        while g.col > by_cols
            && matches!(
                (row_of_col.get(&(g.col - by_cols)), row_of_col.get(&(g.col - by_cols + 1))),
                (Some(a), Some(b)) if a > b
            )
        {
            by_cols += 1;
        }
        let mut by_rows = 1;
        while matches!(
            (col_of_row.get(&(g.row + by_rows)), col_of_row.get(&(g.row + by_rows - 1))),
            (Some(a), Some(b)) if a < b
        ) {
            by_rows += 1;
        }
        if by_cols != by_rows {
            out.push(format!("{g}: column run {by_cols} vs row run {by_rows}"));
        }
    }
    out
}

fn generated_disjoint(bd: &BaseData, _: Option<&StructureSets>) -> Vec<String> {
    let mut out = Vec::new();
    let distinct: BTreeSet<Root> = bd.phi.iter().copied().collect();
    if distinct.len() != bd.pairs.len() {
        out.push(format!("{} pairs but {} generated roots", bd.pairs.len(), distinct.len()));
    }
    out.extend(
        bd.phi
            .iter()
            .filter(|g| bd.is_base(**g))
            .map(|g| format!("{g} is both base and generated")),
    );
    out
}

fn rows_with_several_roots(bd: &BaseData) -> Vec<(usize, Vec<usize>)> {
    let mut by_row: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for g in bd.generator_roots() {
        by_row.entry(g.row).or_default().push(g.col);
    }
    by_row
        .into_iter()
        .filter(|(_, cols)| cols.len() > 1)
        .map(|(i, mut cols)| {
            cols.sort_unstable();
            (i, cols)
        })
        .collect()
}

/// In a row with several roots of `S ∪ Φ`, the first one sits in the first
/// column after the row's block.
fn row_start(bd: &BaseData, _: Option<&StructureSets>) -> Vec<String> {
    let bs = &bd.bs;
    rows_with_several_roots(bd)
        .into_iter()
        .filter(|(i, cols)| cols[0] != bs.bound(bs.block_of(*i)) + 1)
        .map(|(i, cols)| format!("row {i}: first root column {} not after its block", cols[0]))
        .collect()
}

/// In such a row with columns `j_1 < ... < j_t`, if a block boundary `R_k`
/// satisfies `j_1 <= R_k < j_b` then `r_k < b`.
fn row_spread(bd: &BaseData, _: Option<&StructureSets>) -> Vec<String> {
    let bs = &bd.bs;
    let mut out = Vec::new();
    for (i, cols) in rows_with_several_roots(bd) {
        for k in 1..=bs.num_blocks() {
            let rk = bs.bound(k);
            for (b, &jb) in cols.iter().enumerate().map(|(b, j)| (b + 1, j)) {
                if cols[0] <= rk && rk < jb && bs.size(k) >= b {
                    out.push(format!("row {i}: block {k} boundary {rk} before root {b} but r_k = {}", bs.size(k)));
                }
            }
        }
    }
    out
}

/// Chain roots in block `k > 1` lie in its first `min(r, r_k)` rows.
fn chain_row_bound(bd: &BaseData, sets: Option<&StructureSets>) -> Vec<String> {
    let sets = sets.expect("anchored");
    let bs = &bd.bs;
    let r = bs.last_size();
    sets.psi
        .iter()
        .filter(|g| {
            let k = bs.block_of(g.row);
            k > 1 && g.row > r.min(bs.size(k)) + bs.bound(k - 1)
        })
        .map(|g| format!("chain root {g} below the row bound of its block"))
        .collect()
}

/// For `k >= 2`, the first row of block `k` holds at least `min(r, r_k)`
/// roots of `S ∪ Φ`, the first `min(r, r_k)` of which are chain roots, and
/// every chain root of block `k` lies in the principal rows and in one of
/// those columns.
fn principal_row(bd: &BaseData, sets: Option<&StructureSets>) -> Vec<String> {
    let sets = sets.expect("anchored");
    let bs = &bd.bs;
    let r = bs.last_size();
    let mut out = Vec::new();
    for k in 2..bs.num_blocks() {
        let rt = r.min(bs.size(k));
        let row = bs.bound(k - 1) + 1;
        let mut cols: Vec<usize> = bd
            .generator_roots()
            .into_iter()
            .filter(|g| g.row == row)
            .map(|g| g.col)
            .collect();
        cols.sort_unstable();
        if cols.len() < rt {
            out.push(format!("row {row}: {} roots, expected at least {rt}", cols.len()));
            continue;
        }
        if let Some(j) = cols[..rt].iter().find(|&&j| !sets.psi.contains(&Root::new(row, j))) {
            out.push(format!("({row},{j}) is among the first {rt} roots but not a chain root"));
        }
        let row_cols: BTreeSet<usize> = sets.psi.iter().filter(|g| g.row == row).map(|g| g.col).collect();
        for g in sets.psi.iter().filter(|g| bs.block_of(g.row) == k) {
            if g.row > bs.bound(k - 1) + rt || !row_cols.contains(&g.col) {
                out.push(format!("chain root {g} outside the principal rows/columns of block {k}"));
            }
        }
    }
    out
}

fn minors_disjoint(_: &BaseData, sets: Option<&StructureSets>) -> Vec<String> {
    let sets = sets.expect("anchored");
    let mut out = Vec::new();
    let mut rows = BTreeSet::new();
    let mut cols = BTreeSet::new();
    for pm in &sets.minors {
        out.extend(pm.rows.iter().filter(|i| !rows.insert(**i)).map(|i| format!("row {i} shared")));
        out.extend(pm.cols.iter().filter(|j| !cols.insert(**j)).map(|j| format!("column {j} shared")));
    }
    out
}

/// Columns left of a chain root `(i, j)` and outside the block of `i`
/// carry a chain root, searched among rows satisfying `accept(i, row)`.
fn chain_column(
    bd: &BaseData,
    sets: &StructureSets,
    accept: impl Fn(usize, usize) -> bool,
) -> Vec<String> {
    let bs = &bd.bs;
    let mut out = Vec::new();
    for g in &sets.psi {
        for jt in g.row + 1..g.col {
            if bs.same_block(g.row, jt) {
                continue;
            }
            if !sets.psi.iter().any(|p| p.col == jt && accept(g.row, p.row)) {
                out.push(format!("chain root {g}: column {jt} has no qualifying chain root"));
            }
        }
    }
    out
}

/// The qualifying chain root must lie in row `i` or below.
fn chain_column_literal(bd: &BaseData, sets: Option<&StructureSets>) -> Vec<String> {
    chain_column(bd, sets.expect("anchored"), |i, row| row >= i)
}

/// The qualifying chain root must lie in the block of row `i` or a later one.
fn chain_column_by_block(bd: &BaseData, sets: Option<&StructureSets>) -> Vec<String> {
    let bs = &bd.bs;
    chain_column(bd, sets.expect("anchored"), |i, row| bs.block_of(row) >= bs.block_of(i))
}
