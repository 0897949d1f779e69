//! Root combinatorics of the nilradical: the position set `M`, the
//! block-internal roots, the base `S`, admissible pairs and the roots they
//! generate (`Φ`), and the order used when solving for canonical coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use crate::blocks::{BlockStructure, Root};

/// Positions `(i, j)` with `block(i) < block(j)`, in lexicographic order.
pub fn roots_m(bs: &BlockStructure) -> Vec<Root> {
    let n = bs.n();
    (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| Root::new(i, j)))
        .filter(|&r| bs.block_of(r.row) < bs.block_of(r.col))
        .collect()
}

/// Positive roots inside the diagonal blocks, in lexicographic order.
pub fn delta_r_plus(bs: &BlockStructure) -> Vec<Root> {
    let n = bs.n();
    (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| Root::new(i, j)))
        .filter(|&r| bs.same_block(r.row, r.col))
        .collect()
}

/// Whether `gamma - xi` is a positive root: same row with `xi` further left,
/// or same column with `xi` further down.
pub fn dominates(gamma: Root, xi: Root) -> bool {
    (gamma.row == xi.row && xi.col < gamma.col) || (gamma.col == xi.col && xi.row > gamma.row)
}

/// Two base roots `xi = (a, b)`, `xi_prime = (c, d)` linked through the
/// block-internal root `alpha = (b, c)`; they produce `phi = (b, d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AdmissiblePair {
    pub xi: Root,
    pub xi_prime: Root,
    pub alpha: Root,
    pub phi: Root,
}

/// Everything derived from a block structure's root combinatorics.
#[derive(Clone, Debug)]
pub struct BaseData {
    pub bs: BlockStructure,
    pub m_set: Vec<Root>,
    pub delta_r: Vec<Root>,
    /// The base `S`, lexicographic.
    pub base: Vec<Root>,
    /// Admissible pairs sorted by their generated root.
    pub pairs: Vec<AdmissiblePair>,
    /// The roots generated by admissible pairs, lexicographic.
    pub phi: Vec<Root>,
    base_set: BTreeSet<Root>,
    phi_set: BTreeSet<Root>,
}

impl BaseData {
    pub fn is_base(&self, r: Root) -> bool {
        self.base_set.contains(&r)
    }

    pub fn is_phi(&self, r: Root) -> bool {
        self.phi_set.contains(&r)
    }

    pub fn is_generator_root(&self, r: Root) -> bool {
        self.is_base(r) || self.is_phi(r)
    }

    /// `S` followed by `Φ`: the coordinate order of the generator tuple.
    pub fn generator_roots(&self) -> Vec<Root> {
        self.base.iter().chain(&self.phi).copied().collect()
    }

    /// `S ∪ Φ` as a lexicographically ordered set.
    pub fn support(&self) -> BTreeSet<Root> {
        self.base_set.union(&self.phi_set).copied().collect()
    }

    /// The base root in row `i`, if any.
    pub fn base_in_row(&self, i: usize) -> Option<Root> {
        self.base.iter().copied().find(|r| r.row == i)
    }

    /// The base root in column `j`, if any.
    pub fn base_in_col(&self, j: usize) -> Option<Root> {
        self.base.iter().copied().find(|r| r.col == j)
    }

    pub fn pair_for(&self, phi: Root) -> Option<&AdmissiblePair> {
        self.pairs.iter().find(|p| p.phi == phi)
    }

    /// Compares two roots of `S ∪ Φ` in the solving order.
    pub fn order_cmp(&self, a: Root, b: Root) -> Ordering {
        order_cmp(a, b, &self.base_set, &self.phi_set)
    }

    pub fn order_lt(&self, a: Root, b: Root) -> bool {
        self.order_cmp(a, b) == Ordering::Less
    }

    /// `S ∪ Φ` sorted ascending in the solving order.
    pub fn solving_order(&self) -> Vec<Root> {
        let mut roots = self.generator_roots();
        roots.sort_by(|&a, &b| self.order_cmp(a, b));
        roots
    }
}

/// Builds the base by repeatedly extracting the minimal elements of what is
/// left of `M`, then discarding them together with everything dominating them.
pub fn compute_base(bs: &BlockStructure) -> BaseData {
    let m_set = roots_m(bs);
    let delta_r = delta_r_plus(bs);

    let mut rest: BTreeSet<Root> = m_set.iter().copied().collect();
    let mut base_set = BTreeSet::new();
    while !rest.is_empty() {
        let minimal: Vec<Root> = rest
            .iter()
            .copied()
            .filter(|&g| !rest.iter().any(|&x| dominates(g, x)))
            .collect();
        debug_assert!(!minimal.is_empty(), "domination must be acyclic");
        rest.retain(|&g| !minimal.contains(&g) && !minimal.iter().any(|&x| dominates(g, x)));
        base_set.extend(minimal);
    }
    let base: Vec<Root> = base_set.iter().copied().collect();
    let pairs = admissible_pairs(&base, bs);
    let phi: Vec<Root> = pairs.iter().map(|p| p.phi).collect();
    let phi_set: BTreeSet<Root> = phi.iter().copied().collect();
    assert!(
        phi_set.is_disjoint(&base_set),
        "generated roots meet the base for blocks {bs}"
    );
    BaseData {
        bs: bs.clone(),
        m_set,
        delta_r,
        base,
        pairs,
        phi,
        base_set,
        phi_set,
    }
}

/// All admissible pairs of `base`, sorted by generated root.
///
/// Panics if two pairs generate the same root: nothing downstream can
/// represent that, and silently merging them would hide it.
pub fn admissible_pairs(base: &[Root], bs: &BlockStructure) -> Vec<AdmissiblePair> {
    let mut by_phi: BTreeMap<Root, AdmissiblePair> = BTreeMap::new();
    for &xi in base {
        for &xi_prime in base {
            let (b, c) = (xi.col, xi_prime.row);
            if b < c && bs.same_block(b, c) {
                let pair = AdmissiblePair {
                    xi,
                    xi_prime,
                    alpha: Root::new(b, c),
                    phi: Root::new(b, xi_prime.col),
                };
                if let Some(prev) = by_phi.insert(pair.phi, pair) {
                    panic!(
                        "pairs {:?} and {:?} generate the same root {} for blocks {bs}",
                        prev, pair, pair.phi
                    );
                }
            }
        }
    }
    by_phi.into_values().collect()
}

/// The solving order on `S ∪ Φ`: every base root precedes every generated
/// root; otherwise `(p, q) < (c, d)` iff `c < p`, or `c = p` and `q < d`.
pub fn order_cmp(a: Root, b: Root, base: &BTreeSet<Root>, phi: &BTreeSet<Root>) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    match (base.contains(&a), phi.contains(&a), base.contains(&b), phi.contains(&b)) {
        (true, _, _, true) => return Ordering::Less,
        (_, true, true, _) => return Ordering::Greater,
        _ => {}
    }
    // descending row, then ascending column
    b.row.cmp(&a.row).then(a.col.cmp(&b.col))
}

pub fn order_lt(a: Root, b: Root, base: &BTreeSet<Root>, phi: &BTreeSet<Root>) -> bool {
    order_cmp(a, b, base, phi) == Ordering::Less
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roots(list: &[(usize, usize)]) -> Vec<Root> {
        list.iter().map(|&p| Root::from(p)).collect()
    }

    fn bs(s: &str) -> BlockStructure {
        s.parse().unwrap()
    }

    #[test]
    fn position_sets() {
        assert!(roots_m(&bs("4")).is_empty());
        assert_eq!(roots_m(&bs("1,1,1")), roots(&[(1, 2), (1, 3), (2, 3)]));
        assert_eq!(roots_m(&bs("1,3,2,1,3,2,2")).len(), 82);
        assert!(delta_r_plus(&bs("1,1,1")).is_empty());
        assert_eq!(delta_r_plus(&bs("2,2")), roots(&[(1, 2), (3, 4)]));
        let d = delta_r_plus(&bs("1,3,2"));
        for r in roots(&[(2, 3), (2, 4), (3, 4)]) {
            assert!(d.contains(&r));
        }
    }

    #[test]
    fn domination_examples() {
        assert!(dominates(Root::new(1, 3), Root::new(1, 2)));
        assert!(dominates(Root::new(2, 6), Root::new(3, 6)));
        assert!(!dominates(Root::new(1, 2), Root::new(2, 3)));
        assert!(!dominates(Root::new(3, 6), Root::new(2, 6)));
    }

    #[test]
    fn first_worked_example() {
        let bd = compute_base(&bs("1,3,2,1,3,2,2"));
        assert_eq!(
            bd.base,
            roots(&[
                (1, 2),
                (2, 10),
                (3, 6),
                (4, 5),
                (5, 9),
                (6, 7),
                (7, 8),
                (9, 12),
                (10, 11),
                (11, 14),
                (12, 13)
            ])
        );
        assert_eq!(
            bd.phi,
            roots(&[(2, 5), (2, 6), (5, 7), (8, 11), (8, 12), (9, 11), (11, 13)])
        );
        let pair = bd.pair_for(Root::new(2, 6)).unwrap();
        assert_eq!((pair.xi, pair.xi_prime), (Root::new(1, 2), Root::new(3, 6)));
        assert_eq!(pair.alpha, Root::new(2, 3));
    }

    #[test]
    fn small_examples() {
        let bd = compute_base(&bs("1,1,4,2"));
        assert_eq!(bd.base, roots(&[(1, 2), (2, 3), (5, 8), (6, 7)]));
        assert_eq!(bd.phi, roots(&[(3, 7), (3, 8)]));
        for n in 2..=8 {
            let bd = compute_base(&BlockStructure::borel(n));
            assert_eq!(bd.base, (1..n).map(|i| Root::new(i, i + 1)).collect::<Vec<_>>());
            assert!(bd.phi.is_empty());
        }
        let bd = compute_base(&bs("5"));
        assert!(bd.base.is_empty() && bd.phi.is_empty());
    }

    #[test]
    fn solving_order_examples() {
        let bd = compute_base(&bs("1,3,2,1,3,2,2"));
        assert!(bd.order_lt(Root::new(12, 13), Root::new(2, 5)));
        assert!(bd.order_lt(Root::new(9, 12), Root::new(3, 6)));
        assert!(bd.order_lt(Root::new(2, 5), Root::new(2, 6)));
        assert!(!bd.order_lt(Root::new(2, 5), Root::new(12, 13)));
        let order = bd.solving_order();
        assert_eq!(order.first(), Some(&Root::new(12, 13)));
        assert_eq!(order.last(), Some(&Root::new(2, 6)));
    }
}
