//! Matrices of the nilradical: exact rational matrices supported on `M`.

use num_traits::Zero;
use rand::Rng;
use thiserror::Error;

use crate::blocks::{BlockStructure, Root};
use crate::linalg::{Matrix, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SupportError {
    #[error("entry at {root} lies outside the nilradical of blocks {blocks}")]
    OutsideNilradical { root: Root, blocks: String },
    #[error("matrix is {rows}x{cols}, blocks {blocks} need {n}x{n}")]
    WrongSize {
        rows: usize,
        cols: usize,
        n: usize,
        blocks: String,
    },
}

/// A matrix of the nilradical for a fixed block structure. Entries outside
/// `M` are always zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilradMatrix {
    bs: BlockStructure,
    m: Matrix,
}

impl NilradMatrix {
    pub fn zero(bs: &BlockStructure) -> Self {
        NilradMatrix {
            bs: bs.clone(),
            m: Matrix::zeros(bs.n(), bs.n()),
        }
    }

    /// Wraps a dense matrix after checking its support.
    pub fn from_matrix(bs: &BlockStructure, m: Matrix) -> Result<Self, SupportError> {
        let n = bs.n();
        if m.rows() != n || m.cols() != n {
            return Err(SupportError::WrongSize {
                rows: m.rows(),
                cols: m.cols(),
                n,
                blocks: bs.to_string(),
            });
        }
        if let Some((i, j, _)) = m
            .nonzeros()
            .find(|&(i, j, _)| !bs.in_nilradical(Root::new(i + 1, j + 1)))
        {
            return Err(SupportError::OutsideNilradical {
                root: Root::new(i + 1, j + 1),
                blocks: bs.to_string(),
            });
        }
        Ok(NilradMatrix { bs: bs.clone(), m })
    }

    pub fn from_entries(
        bs: &BlockStructure,
        entries: impl IntoIterator<Item = (Root, Scalar)>,
    ) -> Result<Self, SupportError> {
        let mut x = NilradMatrix::zero(bs);
        for (root, v) in entries {
            x.set(root, v)?;
        }
        Ok(x)
    }

    /// Random nonzero entries on every position of `M`; see
    /// [`crate::sampling::random_nonzero_scalar`]. Zero entries would only
    /// push samples onto special subvarieties.
    pub fn random<R: Rng>(bs: &BlockStructure, rng: &mut R) -> Self {
        let mut x = NilradMatrix::zero(bs);
        for root in crate::combinatorics::roots_m(bs) {
            x.m[(root.row - 1, root.col - 1)] = crate::sampling::random_nonzero_scalar(rng);
        }
        x
    }

    pub fn blocks(&self) -> &BlockStructure {
        &self.bs
    }

    pub fn n(&self) -> usize {
        self.bs.n()
    }

    /// The coordinate `x_{i,j}`; zero off `M`.
    pub fn get(&self, root: Root) -> &Scalar {
        &self.m[(root.row - 1, root.col - 1)]
    }

    /// 1-based entry access for arbitrary positions.
    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.m[(i - 1, j - 1)]
    }

    pub fn set(&mut self, root: Root, v: Scalar) -> Result<(), SupportError> {
        if !self.bs.in_nilradical(root) {
            if v.is_zero() && root.row >= 1 && root.col <= self.n() && root.row <= self.n() {
                return Ok(());
            }
            return Err(SupportError::OutsideNilradical {
                root,
                blocks: self.bs.to_string(),
            });
        }
        self.m[(root.row - 1, root.col - 1)] = v;
        Ok(())
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn into_matrix(self) -> Matrix {
        self.m
    }

    /// Nonzero entries in lexicographic order.
    pub fn entries(&self) -> Vec<(Root, Scalar)> {
        self.m
            .nonzeros()
            .map(|(i, j, v)| (Root::new(i + 1, j + 1), v.clone()))
            .collect()
    }

    pub fn support(&self) -> Vec<Root> {
        self.m
            .nonzeros()
            .map(|(i, j, _)| Root::new(i + 1, j + 1))
            .collect()
    }
}
