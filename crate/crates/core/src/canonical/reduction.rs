//! Constructive reduction of a generic matrix to its canonical point.
//!
//! The reduction peels off the last column: the top-left `(n-1) x (n-1)`
//! block is reduced recursively for the truncated structure, then the last
//! column is cleaned. Without a base root in the last column every entry
//! there is cleared against the base root of its row. With one, the entries
//! below the anchor and outside `S ∪ Φ` are cleared first; the remainder
//! splits as a canonical part `y` plus a last-column slice `z`. The slice is
//! absorbed by moving `y` into normal form (`g1`), pushing `z` onto the
//! shadow set (`g2`), stripping the shadow set column by column (`g3`), and
//! undoing `g1`.

use num_traits::Zero;

use crate::blocks::Root;
use crate::group::{adjoint_elementary, GroupElement};
use crate::linalg::{solve, Matrix, Scalar};
use crate::nilrad::NilradMatrix;
use crate::structure::{x_membership, StructureError, StructureSets};

use super::{CanonicalContext, CanonicalError, CanonicalPoint, DegenerateOrbit};

/// How many distinct parameter choices the normal-form step tries before
/// declaring the orbit degenerate.
const NORMAL_FORM_ATTEMPTS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionCase {
    /// A single block: nothing to do.
    Trivial,
    /// No base root in the last column.
    Unanchored,
    /// A base root sits in the last column.
    Anchored,
}

/// One level of the recursion, recorded after the level finished.
#[derive(Clone, Debug)]
pub struct ReductionFrame {
    /// Number of trailing columns already stripped (0 = full matrix).
    pub depth: usize,
    pub blocks: String,
    pub case: ReductionCase,
    /// The conjugator accumulated for this level's matrix.
    pub conjugator: GroupElement,
    /// Last-column entries after reducing the top-left block and before
    /// cleaning the column (rows `1..=n-r`).
    pub last_column: Vec<(Root, Scalar)>,
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub g: GroupElement,
    pub point: CanonicalPoint,
    /// Frames from the innermost level outwards.
    pub frames: Vec<ReductionFrame>,
}

pub fn canonicalize_witness(
    ctx: &CanonicalContext,
    x: &NilradMatrix,
) -> Result<Witness, CanonicalError> {
    let mut frames = Vec::new();
    let (g, y) = reduce(ctx, x, 0, &mut frames)?;
    let point = CanonicalPoint::from_matrix(&y).ok_or_else(|| {
        degenerate(ctx, "canonical support", y.support().into_iter().next())
    })?;
    if let Some((&r, _)) = point.coeffs.iter().find(|(_, v)| v.is_zero()) {
        return Err(degenerate(ctx, "canonical support", Some(r)));
    }
    Ok(Witness { g, point, frames })
}

fn degenerate(ctx: &CanonicalContext, stage: &'static str, position: Option<Root>) -> CanonicalError {
    CanonicalError::Degenerate(DegenerateOrbit {
        blocks: ctx.blocks().to_string(),
        stage,
        position,
    })
}

fn violation(ctx: &CanonicalContext, detail: String) -> CanonicalError {
    CanonicalError::Structure(StructureError::StructuralViolation {
        blocks: ctx.blocks().to_string(),
        detail,
    })
}

/// A matrix being reduced together with the accumulated conjugator.
struct Tracker {
    x: NilradMatrix,
    g: GroupElement,
}

impl Tracker {
    fn at(&self, i: usize, j: usize) -> &Scalar {
        self.x.at(i, j)
    }

    fn elementary(&mut self, u: usize, v: usize, t: Scalar) -> Result<(), CanonicalError> {
        let n = self.x.n();
        self.x = adjoint_elementary(u, v, &t, &self.x)?;
        self.g = GroupElement::elementary(u, v, t, n)?.compose(&self.g);
        Ok(())
    }

    fn apply(&mut self, h: &GroupElement) -> Result<(), CanonicalError> {
        self.x = h.adjoint(&self.x)?;
        self.g = h.compose(&self.g);
        Ok(())
    }
}

/// `E + Σ t_q E_{src_q, dst}`.
fn column_move(n: usize, sources: &[usize], dst: usize, t: &[Scalar]) -> Result<GroupElement, CanonicalError> {
    let entries = sources
        .iter()
        .zip(t)
        .map(|(&s, v)| (Root::new(s, dst), v.clone()));
    Ok(GroupElement::from_entries(n, entries)?)
}

fn embed(g: &GroupElement, n: usize) -> GroupElement {
    let inner = g.matrix();
    let m = Matrix::from_fn(n, n, |i, j| {
        if i < inner.rows() && j < inner.cols() {
            inner[(i, j)].clone()
        } else if i == j {
            Scalar::from_integer(1.into())
        } else {
            Scalar::zero()
        }
    });
    GroupElement::from_matrix(m).expect("embedding keeps unitriangularity")
}

fn reduce(
    ctx: &CanonicalContext,
    x: &NilradMatrix,
    depth: usize,
    frames: &mut Vec<ReductionFrame>,
) -> Result<(GroupElement, NilradMatrix), CanonicalError> {
    let bs = ctx.blocks();
    let n = bs.n();
    let Some(sub) = ctx.truncated.as_deref() else {
        frames.push(ReductionFrame {
            depth,
            blocks: bs.to_string(),
            case: ReductionCase::Trivial,
            conjugator: GroupElement::identity(n),
            last_column: Vec::new(),
        });
        return Ok((GroupElement::identity(n), x.clone()));
    };

    let head: Vec<usize> = (0..n - 1).collect();
    let x_head = NilradMatrix::from_matrix(sub.blocks(), x.matrix().select(&head, &head))
        .expect("top-left block of a nilradical matrix lies in the truncated nilradical");
    let (g_head, y_head) = reduce(sub, &x_head, depth + 1, frames)?;
    let g0 = embed(&g_head, n);
    let mut st = Tracker {
        x: g0.adjoint(x)?,
        g: g0,
    };
    debug_assert_eq!(
        st.x.matrix().select(&head, &head),
        *y_head.matrix(),
        "conjugating by the embedded witness must reproduce the reduced block"
    );

    let r = bs.last_size();
    let last_column: Vec<(Root, Scalar)> = (1..=n - r)
        .map(|i| (Root::new(i, n), st.at(i, n).clone()))
        .filter(|(_, v)| !v.is_zero())
        .collect();

    let case = match &ctx.structure {
        None => {
            clear_against_row_base(ctx, &mut st, (1..=n - r).rev())?;
            ReductionCase::Unanchored
        }
        Some(sets) => {
            reduce_anchored(ctx, sets, &mut st)?;
            ReductionCase::Anchored
        }
    };
    frames.push(ReductionFrame {
        depth,
        blocks: bs.to_string(),
        case,
        conjugator: st.g.clone(),
        last_column,
    });
    Ok((st.g, st.x))
}

/// Clears `(i, n)` using the base root `(i, a)` of row `i`, for the rows in
/// the given (bottom-up) order.
fn clear_against_row_base(
    ctx: &CanonicalContext,
    st: &mut Tracker,
    rows: impl Iterator<Item = usize>,
) -> Result<(), CanonicalError> {
    let n = ctx.blocks().n();
    for i in rows {
        let Some(base) = ctx.gens.bd.base_in_row(i) else {
            return Err(violation(ctx, format!("row {i} has no base root")));
        };
        let pivot = st.at(i, base.col).clone();
        if pivot.is_zero() {
            return Err(degenerate(ctx, "last-column pivot", Some(base)));
        }
        let t = st.at(i, n) / pivot;
        if !t.is_zero() {
            st.elementary(base.col, n, t)?;
        }
    }
    Ok(())
}

fn reduce_anchored(
    ctx: &CanonicalContext,
    sets: &StructureSets,
    st: &mut Tracker,
) -> Result<(), CanonicalError> {
    let bd = &ctx.gens.bd;
    let n = bd.bs.n();
    let r = bd.bs.last_size();
    let (m_tilde, m) = (sets.anchor.m_tilde, sets.anchor.m);

    clear_against_row_base(ctx, st, (m_tilde + 1..=n - r).rev())?;

    // entries strictly between rows m and m̃ outside S ∪ Φ, against the anchor
    for i in m + 1..m_tilde {
        if bd.is_generator_root(Root::new(i, n)) || st.at(i, n).is_zero() {
            continue;
        }
        let pivot = st.at(m_tilde, n).clone();
        if pivot.is_zero() {
            return Err(degenerate(ctx, "anchor pivot", Some(Root::new(m_tilde, n))));
        }
        let t = -(st.at(i, n) / pivot);
        st.elementary(i, m_tilde, t)?;
    }

    // split into the canonical part and the slice above row m
    let mut y = st.x.clone();
    for i in 1..m {
        y.set(Root::new(i, n), Scalar::zero())
            .expect("last-column positions above the last block lie in the nilradical");
    }
    for root in &bd.m_set {
        let v = y.get(*root);
        if bd.is_generator_root(*root) {
            if v.is_zero() {
                return Err(degenerate(ctx, "support split", Some(*root)));
            }
        } else if !v.is_zero() {
            return Err(violation(ctx, format!("residual entry at {root} after cleaning")));
        }
    }

    let g1 = to_normal_form(ctx, sets, &y)?;
    let y_nf = g1.adjoint(&y)?;
    let mut w = g1.adjoint(&st.x)?;

    // push the slice onto the shadow set
    let mut g2 = GroupElement::identity(n);
    for i in 1..m {
        if sets.shadow.contains(&Root::new(i, n)) || w.at(i, n).is_zero() {
            continue;
        }
        let pm = sets
            .minor_with_row(i)
            .ok_or_else(|| violation(ctx, format!("row {i} meets no principal minor")))?;
        if pm.cols.contains(&n) {
            return Err(violation(ctx, format!("row {i}: principal minor reaches column {n}")));
        }
        let a = Matrix::from_fn(pm.size(), pm.size(), |p, q| y_nf.at(pm.rows[p], pm.cols[q]).clone());
        let b: Vec<Scalar> = pm
            .rows
            .iter()
            .map(|&p| if p == i { w.at(i, n).clone() } else { Scalar::zero() })
            .collect();
        let t = solve(&a, &b).ok_or_else(|| degenerate(ctx, "shadow push", Some(Root::new(i, n))))?;
        let h = column_move(n, &pm.cols, n, &t)?;
        w = h.adjoint(&w)?;
        g2 = h.compose(&g2);
    }
    for root in &bd.m_set {
        if w.get(*root) != y_nf.get(*root) && !sets.shadow.contains(root) {
            return Err(violation(ctx, format!("residual {root} outside the shadow set")));
        }
    }

    // strip the shadow set right to left
    let mut g3 = GroupElement::identity(n);
    for j in (1..=n).rev() {
        for i in 1..=n {
            let d = w.at(i, j) - y_nf.at(i, j);
            if d.is_zero() {
                continue;
            }
            let pm = sets
                .minor_with_col(j)
                .ok_or_else(|| violation(ctx, format!("column {j} meets no principal minor")))?;
            let l = pm.cols.iter().position(|&c| c == j).unwrap();
            let pivot_row = pm.diagonal_row(l);
            let pivot = y_nf.at(pivot_row, j).clone();
            if pivot.is_zero() {
                return Err(degenerate(ctx, "shadow strip", Some(Root::new(pivot_row, j))));
            }
            let t = -(d / pivot);
            let h = GroupElement::elementary(i, pivot_row, t, n)?;
            w = h.adjoint(&w)?;
            g3 = h.compose(&g3);
        }
    }
    if w != y_nf {
        return Err(violation(ctx, "shadow strip left residual entries".to_string()));
    }

    let total = g1.inverse().compose(&g3).compose(&g2).compose(&g1);
    st.apply(&total)?;
    if st.x != y {
        return Err(violation(ctx, "undoing the normal form did not return to the split".to_string()));
    }
    Ok(())
}

/// Finds `g` with `Ad_g y` in normal form, retrying with different fill
/// parameters when a linear system turns out singular.
fn to_normal_form(
    ctx: &CanonicalContext,
    sets: &StructureSets,
    y: &NilradMatrix,
) -> Result<GroupElement, CanonicalError> {
    for attempt in 0..NORMAL_FORM_ATTEMPTS {
        if let Some(g) = normal_form_attempt(ctx, sets, y, attempt)? {
            if x_membership(&g.adjoint(y)?, &sets.minors, &sets.psi).is_ok() {
                return Ok(g);
            }
        }
    }
    Err(degenerate(ctx, "normal form", None))
}

fn normal_form_attempt(
    ctx: &CanonicalContext,
    sets: &StructureSets,
    y: &NilradMatrix,
    attempt: usize,
) -> Result<Option<GroupElement>, CanonicalError> {
    let bd = &ctx.gens.bd;
    let n = bd.bs.n();
    let psi = &sets.psi;
    let mut st = Tracker {
        x: y.clone(),
        g: GroupElement::identity(n),
    };

    // Fill positions on or above each secondary diagonal that are not chain
    // roots, using the base root below in the same column. Distinct values
    // keep the minors' rows from becoming proportional.
    let mut fill = 0i64;
    for pm in &sets.minors {
        let rt = pm.size();
        for (p, &i) in pm.rows.iter().enumerate() {
            for (q, &j) in pm.cols.iter().enumerate() {
                if p + q > rt - 1 || psi.contains(&Root::new(i, j)) {
                    continue;
                }
                if let Some(below) = bd.base_in_col(j).filter(|b| b.row > i) {
                    fill += 1;
                    let a = attempt as i64;
                    let t = Scalar::from_integer((fill + a * fill + a).into());
                    st.elementary(i, below.row, t)?;
                }
            }
        }
    }

    let sub_solve = |st: &Tracker, rows: &[usize], cols: &[usize], target: usize| {
        let a = Matrix::from_fn(rows.len(), cols.len(), |p, q| st.at(rows[p], cols[q]).clone());
        let b: Vec<Scalar> = rows.iter().map(|&p| st.at(p, target).clone()).collect();
        solve(&a, &b)
    };

    for pm in &sets.minors {
        let rt = pm.size();
        let (rows, cols) = (&pm.rows, &pm.cols);

        // anti-triangularize: clear column a against the earlier columns on
        // the bottom a-1 rows
        for a in 2..=rt {
            let sub_rows = &rows[rt - a + 1..];
            let Some(t) = sub_solve(&st, sub_rows, &cols[..a - 1], cols[a - 1]) else {
                return Ok(None);
            };
            st.apply(&column_move(n, &cols[..a - 1], cols[a - 1], &t)?)?;
        }

        // clear the minor's rows to the right of its last column
        for j in cols[rt - 1] + 1..=n {
            if rows.iter().all(|&i| st.at(i, j).is_zero()) {
                continue;
            }
            let Some(t) = sub_solve(&st, rows, cols, j) else {
                return Ok(None);
            };
            st.apply(&column_move(n, cols, j, &t)?)?;
        }

        // clear entries between consecutive minor columns below the diagonal
        for a in 2..=rt {
            let sub_rows = &rows[rt - a + 1..];
            for jj in cols[a - 2] + 1..cols[a - 1] {
                let dirty = sub_rows
                    .iter()
                    .any(|&p| !psi.contains(&Root::new(p, jj)) && !st.at(p, jj).is_zero());
                if !dirty {
                    continue;
                }
                let Some(t) = sub_solve(&st, sub_rows, &cols[..a - 1], jj) else {
                    return Ok(None);
                };
                st.apply(&column_move(n, &cols[..a - 1], jj, &t)?)?;
            }
        }
    }
    Ok(Some(st.g))
}
