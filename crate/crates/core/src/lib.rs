//! Invariants and canonical forms for the unitriangular group acting on the
//! nilradical of a standard parabolic subalgebra of `gl(n)`, in exact
//! rational arithmetic.

pub mod blocks;
pub mod canonical;
pub mod combinatorics;
pub mod diagram;
pub mod fixtures;
pub mod group;
pub mod invariants;
pub mod io;
pub mod lemmas;
pub mod linalg;
pub mod nilrad;
pub mod poly;
pub mod sampling;
pub mod structure;
pub mod sweep;
pub mod verify;

pub use blocks::{BlockError, BlockStructure, Root};
pub use canonical::{CanonicalContext, CanonicalError, CanonicalPoint, MonomialTable, Witness};
pub use combinatorics::{compute_base, AdmissiblePair, BaseData};
pub use group::{GroupElement, GroupError};
pub use invariants::Generators;
pub use linalg::{Matrix, Scalar};
pub use nilrad::NilradMatrix;
pub use structure::StructureSets;
