//! Exact rational scalars and dense matrix kernels.
//!
//! Determinants and ranks run fraction-free over the integers: each row is
//! scaled by the lcm of its denominators and Bareiss elimination is applied,
//! which keeps intermediate entries bounded by minors of the input.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational number, always kept in lowest terms with positive denominator.
pub type Scalar = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NonSquare { rows: usize, cols: usize },
    #[error("index {index} out of range (limit {limit}) or not strictly increasing")]
    BadIndex { index: usize, limit: usize },
    #[error("row list has {rows} entries but column list has {cols}")]
    SizeMismatch { rows: usize, cols: usize },
    #[error("matrix is not unitriangular at ({row},{col})")]
    NotUnitriangular { row: usize, col: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse `{0}` as a rational number")]
pub struct ScalarParseError(pub String);

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p"` or `"p/q"` (sign on either part, normalized onto the numerator).
pub fn parse_scalar(s: &str) -> Result<Scalar, ScalarParseError> {
    let err = || ScalarParseError(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t, "1"),
    };
    let p: BigInt = num.parse().map_err(|_| err())?;
    let q: BigInt = den.parse().map_err(|_| err())?;
    if q.is_zero() {
        return Err(err());
    }
    Ok(Scalar::new(p, q))
}

/// Canonical text form: `"p/q"`, or `"p"` when the denominator is one.
pub fn format_scalar(v: &Scalar) -> String {
    v.to_string()
}

/// Dense row-major matrix of exact rationals. Indices are 0-based.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&v| int(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Copy of the submatrix on the given (0-based) rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(rows.len(), cols.len(), |a, b| self[(rows[a], cols[b])].clone())
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Nonzero entries as `(row, col, value)`, 0-based, row-major.
    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> + '_ {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(k, v)| (k / self.cols, k % self.cols, v))
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;

    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        assert!(i < self.rows && j < self.cols, "({i},{j}) out of range");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        assert!(i < self.rows && j < self.cols, "({i},{j}) out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(format_scalar).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Scales each row to integers; returns the integer rows and the product of
/// the scale factors.
fn integer_rows(m: &Matrix) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut scale = BigInt::one();
    let rows = (0..m.rows())
        .map(|i| {
            let row = m.row(i);
            let lcm = row
                .iter()
                .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            scale *= &lcm;
            row.iter()
                .map(|v| v.numer() * (&lcm / v.denom()))
                .collect()
        })
        .collect();
    (rows, scale)
}

fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Exact determinant; the empty matrix has determinant one.
pub fn determinant(m: &Matrix) -> Result<Scalar, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    match m.rows() {
        0 => return Ok(Scalar::one()),
        1 => return Ok(m[(0, 0)].clone()),
        2 => return Ok(&m[(0, 0)] * &m[(1, 1)] - &m[(0, 1)] * &m[(1, 0)]),
        _ => {}
    }
    let (rows, scale) = integer_rows(m);
    Ok(Scalar::new(bareiss_det(rows), scale))
}

fn check_indices(idx: &[usize], limit: usize) -> Result<(), LinalgError> {
    for (k, &i) in idx.iter().enumerate() {
        if i >= limit || (k > 0 && idx[k - 1] >= i) {
            return Err(LinalgError::BadIndex { index: i, limit });
        }
    }
    Ok(())
}

/// The minor on strictly increasing 0-based row list `rows` and column list `cols`.
pub fn minor(m: &Matrix, rows: &[usize], cols: &[usize]) -> Result<Scalar, LinalgError> {
    if rows.len() != cols.len() {
        return Err(LinalgError::SizeMismatch {
            rows: rows.len(),
            cols: cols.len(),
        });
    }
    check_indices(rows, m.rows())?;
    check_indices(cols, m.cols())?;
    determinant(&m.select(rows, cols))
}

/// Exact rank by fraction-free row reduction.
pub fn rank(m: &Matrix) -> usize {
    let (mut a, _) = integer_rows(m);
    let cols = m.cols();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let pivot_row = a[rank].clone();
        for row in a.iter_mut().skip(rank + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for j in c..cols {
                row[j] = &row[j] * &pivot_row[c] - &f * &pivot_row[j];
            }
            let g = row[c..]
                .iter()
                .fold(BigInt::zero(), |acc, v| acc.gcd(v));
            if !g.is_zero() && !g.is_one() {
                for v in row[c..].iter_mut() {
                    *v /= &g;
                }
            }
        }
        rank += 1;
        if rank == a.len() {
            break;
        }
    }
    rank
}

/// Checks unit diagonal and zeros below it.
pub fn check_unitriangular(g: &Matrix) -> Result<(), LinalgError> {
    if !g.is_square() {
        return Err(LinalgError::NonSquare {
            rows: g.rows(),
            cols: g.cols(),
        });
    }
    for i in 0..g.rows() {
        if !g[(i, i)].is_one() {
            return Err(LinalgError::NotUnitriangular { row: i + 1, col: i + 1 });
        }
        for j in 0..i {
            if !g[(i, j)].is_zero() {
                return Err(LinalgError::NotUnitriangular { row: i + 1, col: j + 1 });
            }
        }
    }
    Ok(())
}

/// Inverse of a unitriangular matrix by back substitution.
pub fn unitriangular_inverse(g: &Matrix) -> Result<Matrix, LinalgError> {
    check_unitriangular(g)?;
    let n = g.rows();
    let mut h = Matrix::identity(n);
    for j in 0..n {
        for i in (0..j).rev() {
            let mut acc = Scalar::zero();
            for k in i + 1..=j {
                if !g[(i, k)].is_zero() && !h[(k, j)].is_zero() {
                    acc += &g[(i, k)] * &h[(k, j)];
                }
            }
            h[(i, j)] = -acc;
        }
    }
    Ok(h)
}

/// Solves `a * x = b` for square nonsingular `a`; `None` when singular.
pub fn solve(a: &Matrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
    let n = a.rows();
    assert!(a.is_square() && b.len() == n, "solve needs a square system");
    let mut aug: Vec<Vec<Scalar>> = (0..n)
        .map(|i| {
            let mut row = a.row(i).to_vec();
            row.push(b[i].clone());
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !aug[r][c].is_zero())?;
        aug.swap(c, p);
        let inv = aug[c][c].recip();
        for v in aug[c][c..].iter_mut() {
            *v *= &inv;
        }
        let pivot = aug[c].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r == c || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for k in c..=n {
                if !pivot[k].is_zero() {
                    row[k] -= &f * &pivot[k];
                }
            }
        }
    }
    Some(aug.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

pub fn is_negative(v: &Scalar) -> bool {
    v.is_negative()
}
