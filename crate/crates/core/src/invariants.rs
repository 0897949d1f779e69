//! The invariant generators: one minor per base root and one sum of minor
//! products per admissible pair, plus the numeric rank oracles used to check
//! their independence and the generic orbit dimension.

use std::collections::HashMap;

use num_traits::Zero;

use crate::blocks::{BlockStructure, Root};
use crate::combinatorics::{compute_base, AdmissiblePair, BaseData};
use crate::linalg::{determinant, rank, Matrix, Scalar};
use crate::nilrad::NilradMatrix;

/// The minor attached to `gamma = (a, b)`: rows `a` and the rows of the base
/// roots strictly inside `gamma` (below `a`, left of `b`); columns those
/// roots' columns and `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorSpec {
    pub gamma: Root,
    pub s_gamma: Vec<Root>,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl MinorSpec {
    pub fn size(&self) -> usize {
        self.rows.len()
    }
}

pub fn minor_spec(gamma: Root, base: &[Root]) -> MinorSpec {
    let s_gamma: Vec<Root> = base
        .iter()
        .copied()
        .filter(|r| r.row > gamma.row && r.col < gamma.col)
        .collect();
    let mut rows: Vec<usize> = std::iter::once(gamma.row)
        .chain(s_gamma.iter().map(|r| r.row))
        .collect();
    let mut cols: Vec<usize> = s_gamma
        .iter()
        .map(|r| r.col)
        .chain(std::iter::once(gamma.col))
        .collect();
    rows.sort_unstable();
    cols.sort_unstable();
    MinorSpec {
        gamma,
        s_gamma,
        rows,
        cols,
    }
}

/// `Σ_{t=b}^{c} M_{(a,t)} · M_{(t,d)}` for the pair `((a,b), (c,d))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairSpec {
    pub pair: AdmissiblePair,
    pub terms: Vec<(MinorSpec, MinorSpec)>,
}

pub fn pair_spec(pair: &AdmissiblePair, base: &[Root]) -> PairSpec {
    let a = pair.xi.row;
    let d = pair.xi_prime.col;
    let terms = (pair.alpha.row..=pair.alpha.col)
        .map(|t| (minor_spec(Root::new(a, t), base), minor_spec(Root::new(t, d), base)))
        .collect();
    PairSpec { pair: *pair, terms }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    Minor(MinorSpec),
    Pair(PairSpec),
}

/// One coordinate of the generator tuple, labelled by its root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub root: Root,
    pub kind: GeneratorKind,
}

impl Generator {
    pub fn label(&self) -> String {
        match self.kind {
            GeneratorKind::Minor(_) => format!("M{}", self.root),
            GeneratorKind::Pair(_) => format!("L{}", self.root),
        }
    }

    pub fn eval(&self, x: &NilradMatrix) -> Scalar {
        match &self.kind {
            GeneratorKind::Minor(spec) => eval_minor(spec, x),
            GeneratorKind::Pair(spec) => eval_pair(spec, x),
        }
    }
}

/// Generators of a block structure: base minors then pair sums, each
/// lexicographic by root.
#[derive(Clone, Debug)]
pub struct Generators {
    pub bd: BaseData,
    pub list: Vec<Generator>,
}

impl Generators {
    pub fn new(bs: &BlockStructure) -> Self {
        Generators::from_base(compute_base(bs))
    }

    pub fn from_base(bd: BaseData) -> Self {
        let mut list: Vec<Generator> = bd
            .base
            .iter()
            .map(|&xi| Generator {
                root: xi,
                kind: GeneratorKind::Minor(minor_spec(xi, &bd.base)),
            })
            .collect();
        list.extend(bd.pairs.iter().map(|p| Generator {
            root: p.phi,
            kind: GeneratorKind::Pair(pair_spec(p, &bd.base)),
        }));
        Generators { bd, list }
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    /// The generator tuple at `x`.
    pub fn values(&self, x: &NilradMatrix) -> Vec<Scalar> {
        self.list.iter().map(|g| g.eval(x)).collect()
    }

    /// Rank of the Jacobian of the generator tuple at `x`, with respect to
    /// the coordinates on `M`.
    pub fn jacobian_rank(&self, x: &NilradMatrix) -> usize {
        let coords: HashMap<Root, usize> = self
            .bd
            .m_set
            .iter()
            .enumerate()
            .map(|(k, &r)| (r, k))
            .collect();
        let width = coords.len();
        let mut jac = Matrix::zeros(self.list.len(), width);
        for (row, g) in self.list.iter().enumerate() {
            let grad = match &g.kind {
                GeneratorKind::Minor(spec) => minor_gradient(spec, x),
                GeneratorKind::Pair(spec) => pair_gradient(spec, x),
            };
            for (root, v) in grad {
                if let Some(&c) = coords.get(&root) {
                    jac[(row, c)] += v;
                }
            }
        }
        rank(&jac)
    }
}

pub fn eval_minor(spec: &MinorSpec, x: &NilradMatrix) -> Scalar {
    let rows: Vec<usize> = spec.rows.iter().map(|i| i - 1).collect();
    let cols: Vec<usize> = spec.cols.iter().map(|j| j - 1).collect();
    determinant(&x.matrix().select(&rows, &cols)).expect("minor specs are square")
}

pub fn eval_pair(spec: &PairSpec, x: &NilradMatrix) -> Scalar {
    spec.terms
        .iter()
        .map(|(left, right)| eval_minor(left, x) * eval_minor(right, x))
        .fold(Scalar::zero(), |acc, v| acc + v)
}

/// `M_gamma(x)` computed from scratch.
pub fn eval_m(gamma: Root, base: &[Root], x: &NilradMatrix) -> Scalar {
    eval_minor(&minor_spec(gamma, base), x)
}

/// `L(x)` for an admissible pair.
pub fn eval_l(pair: &AdmissiblePair, base: &[Root], x: &NilradMatrix) -> Scalar {
    eval_pair(&pair_spec(pair, base), x)
}

/// The generator tuple at `x` for its own block structure.
pub fn varpi(x: &NilradMatrix) -> Vec<Scalar> {
    Generators::new(x.blocks()).values(x)
}

/// Partial derivatives of a minor: the signed cofactors at each selected
/// position. Positions off `M` are reported too and filtered by the caller.
fn minor_gradient(spec: &MinorSpec, x: &NilradMatrix) -> Vec<(Root, Scalar)> {
    let k = spec.size();
    let mut out = Vec::with_capacity(k * k);
    for p in 0..k {
        let rows: Vec<usize> = (0..k).filter(|&a| a != p).map(|a| spec.rows[a] - 1).collect();
        for q in 0..k {
            let cols: Vec<usize> = (0..k).filter(|&b| b != q).map(|b| spec.cols[b] - 1).collect();
            let mut c = determinant(&x.matrix().select(&rows, &cols)).expect("square");
            if c.is_zero() {
                continue;
            }
            if (p + q) % 2 == 1 {
                c = -c;
            }
            out.push((Root::new(spec.rows[p], spec.cols[q]), c));
        }
    }
    out
}

fn pair_gradient(spec: &PairSpec, x: &NilradMatrix) -> Vec<(Root, Scalar)> {
    let mut out = Vec::new();
    for (left, right) in &spec.terms {
        let lv = eval_minor(left, x);
        let rv = eval_minor(right, x);
        if !rv.is_zero() {
            out.extend(minor_gradient(left, x).into_iter().map(|(r, v)| (r, v * &rv)));
        }
        if !lv.is_zero() {
            out.extend(minor_gradient(right, x).into_iter().map(|(r, v)| (r, v * &lv)));
        }
    }
    out
}

pub fn jacobian_rank(bs: &BlockStructure, x: &NilradMatrix) -> usize {
    Generators::new(bs).jacobian_rank(x)
}

/// `dim m - |S| - |Φ|`.
pub fn orbit_dim_bound(bs: &BlockStructure) -> usize {
    let bd = compute_base(bs);
    bd.m_set.len() - bd.base.len() - bd.phi.len()
}

/// Rank of `u ↦ ux - xu` from strictly upper triangular `u` into `m`, i.e.
/// the dimension of the tangent space of the orbit through `x`.
pub fn tangent_rank(x: &NilradMatrix) -> usize {
    let n = x.n();
    let m_set = crate::combinatorics::roots_m(x.blocks());
    let xm = x.matrix();
    let mut rows = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            // [E_ab, x]: row a receives row b of x, column b loses column a of x
            let mut bracket = Matrix::zeros(n, n);
            for j in 0..n {
                bracket[(a, j)] += &xm[(b, j)];
            }
            for i in 0..n {
                bracket[(i, b)] -= &xm[(i, a)];
            }
            rows.push(
                m_set
                    .iter()
                    .map(|r| bracket[(r.row - 1, r.col - 1)].clone())
                    .collect::<Vec<_>>(),
            );
        }
    }
    if rows.is_empty() || m_set.is_empty() {
        return 0;
    }
    rank(&Matrix::from_rows(rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    fn ex1() -> BlockStructure {
        "1,3,2,1,3,2,2".parse().unwrap()
    }

    fn borel3_x() -> NilradMatrix {
        NilradMatrix::from_entries(
            &BlockStructure::borel(3),
            [
                (Root::new(1, 2), int(2)),
                (Root::new(1, 3), int(5)),
                (Root::new(2, 3), int(3)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn minor_spec_examples() {
        let bd = compute_base(&ex1());
        let s = minor_spec(Root::new(2, 6), &bd.base);
        assert_eq!(s.s_gamma, vec![Root::new(4, 5)]);
        assert_eq!((s.rows.as_slice(), s.cols.as_slice()), (&[2, 4][..], &[5, 6][..]));
        let s = minor_spec(Root::new(2, 10), &bd.base);
        assert_eq!(s.rows, vec![2, 3, 4, 5, 6, 7]);
        assert_eq!(s.cols, vec![5, 6, 7, 8, 9, 10]);
        let s = minor_spec(Root::new(12, 13), &bd.base);
        assert_eq!(s.size(), 1);
    }

    #[test]
    fn pair_spec_terms() {
        let bd = compute_base(&ex1());
        let spec = pair_spec(bd.pair_for(Root::new(2, 6)).unwrap(), &bd.base);
        let gammas: Vec<(Root, Root)> = spec.terms.iter().map(|(l, r)| (l.gamma, r.gamma)).collect();
        assert_eq!(
            gammas,
            vec![
                (Root::new(1, 2), Root::new(2, 6)),
                (Root::new(1, 3), Root::new(3, 6))
            ]
        );
        let spec = pair_spec(bd.pair_for(Root::new(8, 11)).unwrap(), &bd.base);
        let gammas: Vec<(Root, Root)> = spec.terms.iter().map(|(l, r)| (l.gamma, r.gamma)).collect();
        assert_eq!(
            gammas,
            vec![
                (Root::new(7, 8), Root::new(8, 11)),
                (Root::new(7, 9), Root::new(9, 11)),
                (Root::new(7, 10), Root::new(10, 11))
            ]
        );
    }

    #[test]
    fn evaluation_examples() {
        let x = borel3_x();
        let base = compute_base(x.blocks()).base;
        assert_eq!(eval_m(Root::new(1, 2), &base, &x), int(2));
        assert_eq!(eval_m(Root::new(1, 3), &[], &x), int(5));
        assert_eq!(varpi(&x), vec![int(2), int(3)]);

        let bs = ex1();
        let bd = compute_base(&bs);
        let x = NilradMatrix::from_entries(
            &bs,
            [
                (Root::new(2, 5), int(1)),
                (Root::new(4, 5), int(1)),
                (Root::new(2, 6), int(2)),
            ],
        )
        .unwrap();
        assert_eq!(eval_m(Root::new(2, 6), &bd.base, &x), int(-2));
        let zero = NilradMatrix::zero(&bs);
        assert!(varpi(&zero).iter().all(Zero::is_zero));
        assert_eq!(varpi(&zero).len(), 18);
        for p in &bd.pairs {
            assert!(eval_l(p, &bd.base, &zero).is_zero());
        }
    }

    #[test]
    fn rank_oracles() {
        let bs = BlockStructure::borel(3);
        assert_eq!(jacobian_rank(&bs, &borel3_x()), 2);
        assert_eq!(jacobian_rank(&bs, &NilradMatrix::zero(&bs)), 2);
        assert_eq!(orbit_dim_bound(&ex1()), 64);
        assert_eq!(orbit_dim_bound(&"5".parse().unwrap()), 0);
        for n in 1..=7 {
            assert_eq!(orbit_dim_bound(&BlockStructure::borel(n)), n * (n - 1) / 2 - (n - 1));
        }

        let bs: BlockStructure = "1,1".parse().unwrap();
        let x = NilradMatrix::from_entries(&bs, [(Root::new(1, 2), int(1))]).unwrap();
        assert_eq!(tangent_rank(&x), 0);
        let x = NilradMatrix::from_entries(
            &BlockStructure::borel(3),
            [(Root::new(1, 2), int(1)), (Root::new(2, 3), int(1))],
        )
        .unwrap();
        assert_eq!(tangent_rank(&x), 1);
    }
}
