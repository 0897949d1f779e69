//! Generator values on a generic canonical matrix.
//!
//! Put an independent indeterminate `c_γ` at every root of `S ∪ Φ` and zero
//! elsewhere. Each generator then evaluates to a single signed monomial, and
//! these monomials are triangular with respect to the solving order, which is
//! what makes the projection to canonical coordinates solvable root by root.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::blocks::Root;
use crate::combinatorics::BaseData;
use crate::invariants::{GeneratorKind, Generators, MinorSpec};
use crate::poly::{sparse_determinant, Poly};

use super::CanonicalError;

/// `sign · Π c_γ^{e_γ}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedMonomial {
    pub sign: i8,
    pub exponents: BTreeMap<Root, u32>,
}

impl SignedMonomial {
    pub fn exponent(&self, r: Root) -> u32 {
        self.exponents.get(&r).copied().unwrap_or(0)
    }

    /// Roots other than `own` that occur, lexicographic.
    pub fn others(&self, own: Root) -> impl Iterator<Item = (Root, u32)> + '_ {
        self.exponents
            .iter()
            .filter(move |(&r, _)| r != own)
            .map(|(&r, &e)| (r, e))
    }

    pub fn render(&self) -> String {
        let factors: Vec<String> = self
            .exponents
            .iter()
            .map(|(r, &e)| {
                if e == 1 {
                    format!("c{r}")
                } else {
                    format!("c{r}^{e}")
                }
            })
            .collect();
        let body = if factors.is_empty() {
            "1".to_string()
        } else {
            factors.join("·")
        };
        if self.sign < 0 {
            format!("-{body}")
        } else {
            body
        }
    }
}

/// The generic value of every generator, keyed by the generator's root.
#[derive(Clone, Debug)]
pub struct MonomialTable {
    pub entries: BTreeMap<Root, SignedMonomial>,
}

impl MonomialTable {
    pub fn get(&self, r: Root) -> &SignedMonomial {
        &self.entries[&r]
    }
}

struct GenericMatrix {
    vars: Vec<Root>,
    index: BTreeMap<Root, usize>,
}

impl GenericMatrix {
    fn minor(&self, spec: &MinorSpec) -> Poly {
        let entries: Vec<Vec<Option<usize>>> = spec
            .rows
            .iter()
            .map(|&i| {
                spec.cols
                    .iter()
                    .map(|&j| self.index.get(&Root::new(i, j)).copied())
                    .collect()
            })
            .collect();
        sparse_determinant(&entries)
    }
}

pub fn monomial_table(bd: &BaseData) -> Result<MonomialTable, CanonicalError> {
    monomial_table_for(&Generators::from_base(bd.clone()))
}

pub fn monomial_table_for(gens: &Generators) -> Result<MonomialTable, CanonicalError> {
    let bd = &gens.bd;
    let vars = bd.generator_roots();
    let index: BTreeMap<Root, usize> = vars.iter().enumerate().map(|(k, &r)| (r, k)).collect();
    let generic = GenericMatrix { vars, index };

    let mut entries = BTreeMap::new();
    for g in &gens.list {
        let poly = match &g.kind {
            GeneratorKind::Minor(spec) => generic.minor(spec),
            GeneratorKind::Pair(spec) => spec
                .terms
                .iter()
                .map(|(l, r)| &generic.minor(l) * &generic.minor(r))
                .fold(Poly::zero(), |acc, t| &acc + &t),
        };
        let fail = |detail: String| CanonicalError::NotAMonomial {
            blocks: bd.bs.to_string(),
            root: g.root,
            detail,
        };
        if poly.num_terms() != 1 {
            return Err(fail(format!("{} terms", poly.num_terms())));
        }
        let (mono, coeff) = poly.terms().next().unwrap();
        if coeff.abs() != BigInt::one() {
            return Err(fail(format!("coefficient {coeff}")));
        }
        let signed = SignedMonomial {
            sign: if coeff.is_negative() { -1 } else { 1 },
            exponents: mono.iter().map(|&(v, e)| (generic.vars[v], e)).collect(),
        };
        if signed.exponent(g.root) != 1 {
            return Err(fail(format!(
                "own exponent {} in {}",
                signed.exponent(g.root),
                signed.render()
            )));
        }
        for (other, _) in signed.others(g.root) {
            let ok = match g.kind {
                GeneratorKind::Minor(_) => bd.order_lt(other, g.root),
                GeneratorKind::Pair(_) => bd.is_base(other),
            };
            if !ok {
                return Err(fail(format!("{} contains {other}", signed.render())));
            }
        }
        entries.insert(g.root, signed);
    }
    Ok(MonomialTable { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::BlockStructure;
    use crate::combinatorics::compute_base;

    fn table(s: &str) -> MonomialTable {
        monomial_table(&compute_base(&s.parse::<BlockStructure>().unwrap())).unwrap()
    }

    fn support(m: &SignedMonomial) -> Vec<(usize, usize)> {
        m.exponents.keys().map(|r| (r.row, r.col)).collect()
    }

    #[test]
    fn first_example_entries() {
        let t = table("1,3,2,1,3,2,2");
        let m = t.get(Root::new(12, 13));
        assert_eq!(support(m), vec![(12, 13)]);
        let m = t.get(Root::new(2, 10));
        assert_eq!(
            support(m),
            vec![(2, 10), (3, 6), (4, 5), (5, 9), (6, 7), (7, 8)]
        );
        assert!(m.exponents.values().all(|&e| e == 1));
        assert_eq!(m.sign, 1);
        assert_eq!(t.get(Root::new(3, 6)).sign, -1);
        assert_eq!(t.get(Root::new(9, 12)).sign, -1);
        assert_eq!(t.get(Root::new(11, 14)).sign, -1);
        assert_eq!(support(t.get(Root::new(2, 6))), vec![(1, 2), (2, 6), (4, 5)]);
        assert_eq!(t.get(Root::new(2, 6)).sign, -1);
        assert_eq!(
            support(t.get(Root::new(9, 11))),
            vec![(5, 9), (6, 7), (7, 8), (9, 11)]
        );
        assert_eq!(t.get(Root::new(9, 11)).sign, 1);
    }

    #[test]
    fn borel_entries_are_coordinates() {
        let t = table("1,1,1");
        for r in [Root::new(1, 2), Root::new(2, 3)] {
            assert_eq!(t.get(r).sign, 1);
            assert_eq!(t.get(r).exponents.len(), 1);
        }
    }
}
