//! Canonical representatives of generic orbits: matrices supported exactly
//! on `S ∪ Φ` with nonzero coefficients. The projection recovers the
//! representative from generator values alone; the reduction produces it
//! together with a conjugating group element.

mod monomial;
mod reduction;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::blocks::{BlockStructure, Root};
use crate::combinatorics::compute_base;
use crate::group::GroupError;
use crate::invariants::Generators;
use crate::linalg::Scalar;
use crate::nilrad::NilradMatrix;
use crate::structure::{StructureError, StructureSets};

pub use monomial::{monomial_table, monomial_table_for, MonomialTable, SignedMonomial};
pub use reduction::{canonicalize_witness, ReductionCase, ReductionFrame, Witness};

/// Where the reduction hit a vanishing pivot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegenerateOrbit {
    pub blocks: String,
    pub stage: &'static str,
    pub position: Option<Root>,
}

impl fmt::Display for DegenerateOrbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "degenerate orbit for blocks {} at stage `{}`", self.blocks, self.stage)?;
        if let Some(p) = self.position {
            write!(f, ", position {p}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CanonicalError {
    #[error("blocks {blocks}: generator {root} is not a single signed monomial on canonical matrices ({detail})")]
    NotAMonomial {
        blocks: String,
        root: Root,
        detail: String,
    },
    #[error("base minor M{root} vanishes; the matrix is outside the generic locus")]
    ZeroBaseMinor { root: Root },
    #[error("pair invariant L{root} vanishes; the projected point has a zero coefficient")]
    ZeroPhiInvariant { root: Root, point: CanonicalPoint },
    #[error("{0}")]
    Degenerate(DegenerateOrbit),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("matrix has blocks {got}, expected {expected}")]
    BlocksMismatch { expected: String, got: String },
}

/// Coefficients on `S ∪ Φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalPoint {
    pub bs: BlockStructure,
    pub coeffs: BTreeMap<Root, Scalar>,
}

impl CanonicalPoint {
    pub fn to_matrix(&self) -> NilradMatrix {
        NilradMatrix::from_entries(&self.bs, self.coeffs.iter().map(|(&r, v)| (r, v.clone())))
            .expect("S ∪ Φ lies in the nilradical")
    }

    /// Reads the coefficients of `x` on `S ∪ Φ`; `None` if `x` has support
    /// elsewhere.
    pub fn from_matrix(x: &NilradMatrix) -> Option<Self> {
        let bd = compute_base(x.blocks());
        if x.support().iter().any(|&r| !bd.is_generator_root(r)) {
            return None;
        }
        Some(CanonicalPoint {
            bs: x.blocks().clone(),
            coeffs: bd
                .generator_roots()
                .into_iter()
                .map(|r| (r, x.get(r).clone()))
                .collect(),
        })
    }

    /// Every coefficient nonzero, i.e. a genuine canonical matrix.
    pub fn is_canonical(&self) -> bool {
        self.coeffs.values().all(|v| !v.is_zero())
    }
}

/// Per-structure data shared by projection and reduction, including the
/// contexts of all truncations that the reduction recurses through.
#[derive(Clone, Debug)]
pub struct CanonicalContext {
    pub gens: Generators,
    pub table: MonomialTable,
    pub structure: Option<StructureSets>,
    truncated: Option<Box<CanonicalContext>>,
}

impl CanonicalContext {
    pub fn new(bs: &BlockStructure) -> Result<Self, CanonicalError> {
        let gens = Generators::new(bs);
        let table = monomial_table_for(&gens)?;
        let structure = if crate::structure::last_column_anchor(&gens.bd).is_some() {
            Some(StructureSets::new(&gens.bd)?)
        } else {
            None
        };
        let truncated = if bs.num_blocks() > 1 {
            let sub = bs.truncated().expect("more than one block means n >= 2");
            Some(Box::new(CanonicalContext::new(&sub)?))
        } else {
            None
        };
        Ok(CanonicalContext {
            gens,
            table,
            structure,
            truncated,
        })
    }

    pub fn blocks(&self) -> &BlockStructure {
        &self.gens.bd.bs
    }

    fn check_blocks(&self, x: &NilradMatrix) -> Result<(), CanonicalError> {
        if x.blocks() != self.blocks() {
            return Err(CanonicalError::BlocksMismatch {
                expected: self.blocks().to_string(),
                got: x.blocks().to_string(),
            });
        }
        Ok(())
    }

    /// Solves the monomial system root by root in the solving order.
    pub fn pi_map(&self, x: &NilradMatrix) -> Result<CanonicalPoint, CanonicalError> {
        self.check_blocks(x)?;
        let values: BTreeMap<Root, Scalar> = self
            .gens
            .list
            .iter()
            .map(|g| g.root)
            .zip(self.gens.values(x))
            .collect();
        let mut coeffs: BTreeMap<Root, Scalar> = BTreeMap::new();
        let mut zero_phi = None;
        for root in self.gens.bd.solving_order() {
            let mono = self.table.get(root);
            let mut known = if mono.sign < 0 {
                -Scalar::one()
            } else {
                Scalar::one()
            };
            for (other, e) in mono.others(root) {
                let c = &coeffs[&other];
                for _ in 0..e {
                    known *= c;
                }
            }
            let value = &values[&root];
            if value.is_zero() {
                if self.gens.bd.is_base(root) {
                    return Err(CanonicalError::ZeroBaseMinor { root });
                }
                zero_phi.get_or_insert(root);
            }
            // base coefficients solved so far are nonzero, so `known` is too
            coeffs.insert(root, value / known);
        }
        let point = CanonicalPoint {
            bs: self.blocks().clone(),
            coeffs,
        };
        match zero_phi {
            Some(root) => Err(CanonicalError::ZeroPhiInvariant { root, point }),
            None => Ok(point),
        }
    }

    /// Whether two points have the same generator values. Equal values force
    /// equal canonical points; a violation of that panics.
    pub fn uniqueness_probe(&self, y1: &CanonicalPoint, y2: &CanonicalPoint) -> bool {
        let same = self.gens.values(&y1.to_matrix()) == self.gens.values(&y2.to_matrix());
        if same && y1.is_canonical() && y2.is_canonical() {
            assert_eq!(y1, y2, "distinct canonical points share all generator values");
        }
        same
    }

    pub fn canonicalize_witness(&self, x: &NilradMatrix) -> Result<Witness, CanonicalError> {
        self.check_blocks(x)?;
        canonicalize_witness(self, x)
    }
}

/// One-shot projection; builds a fresh context.
pub fn pi_map(x: &NilradMatrix) -> Result<CanonicalPoint, CanonicalError> {
    CanonicalContext::new(x.blocks())?.pi_map(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

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
    fn projection_examples() {
        let p = pi_map(&borel3_x()).unwrap();
        assert_eq!(
            p.coeffs.into_iter().collect::<Vec<_>>(),
            vec![(Root::new(1, 2), int(2)), (Root::new(2, 3), int(3))]
        );

        let bs: BlockStructure = "1,3,2,1,3,2,2".parse().unwrap();
        let ctx = CanonicalContext::new(&bs).unwrap();
        let mut x = NilradMatrix::random(&bs, &mut crate::sampling::rng(5, 0));
        x.set(Root::new(4, 5), int(0)).unwrap();
        assert_eq!(
            ctx.pi_map(&x),
            Err(CanonicalError::ZeroBaseMinor {
                root: Root::new(4, 5)
            })
        );
    }

    #[test]
    fn probe_detects_changes() {
        let ctx = CanonicalContext::new(&BlockStructure::borel(3)).unwrap();
        let y1 = ctx.pi_map(&borel3_x()).unwrap();
        assert!(ctx.uniqueness_probe(&y1, &y1.clone()));
        let mut y2 = y1.clone();
        y2.coeffs.insert(Root::new(2, 3), int(4));
        assert!(!ctx.uniqueness_probe(&y1, &y2));
    }
}
