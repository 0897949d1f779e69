//! The unitriangular group `N` and its adjoint action on the nilradical.

use num_traits::Zero;
use rand::Rng;
use thiserror::Error;

use crate::blocks::Root;
use crate::linalg::{check_unitriangular, unitriangular_inverse, LinalgError, Matrix, Scalar};
use crate::nilrad::{NilradMatrix, SupportError};
use crate::sampling;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("elementary element needs 1 <= u < v <= n, got u={u}, v={v}, n={n}")]
    BadIndex { u: usize, v: usize, n: usize },
    #[error(transparent)]
    NotUnitriangular(#[from] LinalgError),
    #[error("group element is {g}x{g} but matrix is {x}x{x}")]
    SizeMismatch { g: usize, x: usize },
    /// The conjugate left the nilradical. `M` is stable under `N`, so this
    /// can only come from a bug.
    #[error("conjugate left the nilradical: {0}")]
    SupportViolation(SupportError),
}

/// A unitriangular `n x n` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    m: Matrix,
}

impl GroupElement {
    pub fn identity(n: usize) -> Self {
        GroupElement {
            m: Matrix::identity(n),
        }
    }

    pub fn from_matrix(m: Matrix) -> Result<Self, GroupError> {
        check_unitriangular(&m)?;
        Ok(GroupElement { m })
    }

    /// Builds `E + Σ v·E_{i,j}` from above-diagonal entries (1-based).
    pub fn from_entries(
        n: usize,
        entries: impl IntoIterator<Item = (Root, Scalar)>,
    ) -> Result<Self, GroupError> {
        let mut m = Matrix::identity(n);
        for (r, v) in entries {
            if r.row == 0 || r.row >= r.col || r.col > n {
                return Err(GroupError::BadIndex {
                    u: r.row,
                    v: r.col,
                    n,
                });
            }
            m[(r.row - 1, r.col - 1)] = v;
        }
        Ok(GroupElement { m })
    }

    /// `E + t·E_{u,v}`.
    pub fn elementary(u: usize, v: usize, t: Scalar, n: usize) -> Result<Self, GroupError> {
        if u == 0 || u >= v || v > n {
            return Err(GroupError::BadIndex { u, v, n });
        }
        let mut m = Matrix::identity(n);
        m[(u - 1, v - 1)] = t;
        Ok(GroupElement { m })
    }

    pub fn n(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    /// Above-diagonal nonzero entries, lexicographic.
    pub fn entries(&self) -> Vec<(Root, Scalar)> {
        self.m
            .nonzeros()
            .filter(|&(i, j, _)| i < j)
            .map(|(i, j, v)| (Root::new(i + 1, j + 1), v.clone()))
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.m == Matrix::identity(self.n())
    }

    /// The product `self · other`.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        GroupElement {
            m: &self.m * &other.m,
        }
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            m: unitriangular_inverse(&self.m).expect("group elements are unitriangular"),
        }
    }

    /// `g · x · g⁻¹` by full exact products.
    pub fn adjoint(&self, x: &NilradMatrix) -> Result<NilradMatrix, GroupError> {
        self.check_size(x)?;
        let conj = &(&self.m * x.matrix()) * &self.inverse().m;
        NilradMatrix::from_matrix(x.blocks(), conj).map_err(GroupError::SupportViolation)
    }

    fn check_size(&self, x: &NilradMatrix) -> Result<(), GroupError> {
        if self.n() != x.n() {
            return Err(GroupError::SizeMismatch {
                g: self.n(),
                x: x.n(),
            });
        }
        Ok(())
    }
}

/// The adjoint action of `E + t·E_{u,v}` as row and column operations:
/// add `t`·(row `v`) to row `u`, then add `-t`·(column `u`) to column `v`.
pub fn adjoint_elementary(
    u: usize,
    v: usize,
    t: &Scalar,
    x: &NilradMatrix,
) -> Result<NilradMatrix, GroupError> {
    let n = x.n();
    if u == 0 || u >= v || v > n {
        return Err(GroupError::BadIndex { u, v, n });
    }
    let mut m = x.matrix().clone();
    if !t.is_zero() {
        for j in 0..n {
            let add = &m[(v - 1, j)] * t;
            if !add.is_zero() {
                m[(u - 1, j)] += add;
            }
        }
        for i in 0..n {
            let sub = &m[(i, u - 1)] * t;
            if !sub.is_zero() {
                m[(i, v - 1)] -= sub;
            }
        }
    }
    NilradMatrix::from_matrix(x.blocks(), m).map_err(GroupError::SupportViolation)
}

/// A random unitriangular element: each above-diagonal entry is nonzero with
/// probability `density` (clamped to `[0, 1]`), drawn from the nonzero
/// rationals of the sampling distribution.
pub fn random_element<R: Rng>(n: usize, rng: &mut R, density: f64) -> GroupElement {
    let density = density.clamp(0.0, 1.0);
    let mut m = Matrix::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            if density >= 1.0 || (density > 0.0 && rng.gen_bool(density)) {
                m[(i, j)] = sampling::random_nonzero_scalar(rng);
            }
        }
    }
    GroupElement { m }
}

/// [`random_element`] driven by a fresh generator for `seed`.
pub fn random_element_seeded(n: usize, seed: u64, density: f64) -> GroupElement {
    random_element(n, &mut sampling::rng(seed, 0), density)
}
