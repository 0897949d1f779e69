//! Sparse multivariate polynomials with integer coefficients, just enough to
//! expand minors of a matrix whose entries are single indeterminates.

use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Mul, Neg};

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// A monomial as `(variable, exponent)` pairs sorted by variable, exponents
/// positive.
pub type Monomial = Vec<(usize, u32)>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Vec::new(), c);
        }
        p
    }

    pub fn var(v: usize) -> Self {
        let mut p = Poly::zero();
        p.terms.insert(vec![(v, 1)], BigInt::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                if !c.is_zero() {
                    e.insert(c);
                }
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Evaluates at the given point with an arbitrary commutative ring.
    pub fn eval<T>(&self, point: &dyn Fn(usize) -> T) -> T
    where
        T: Clone + Zero + One + Mul<Output = T> + From<BigInt>,
    {
        let mut acc = T::zero();
        for (m, c) in &self.terms {
            let mut t = T::from(c.clone());
            for &(v, e) in m {
                let x = point(v);
                for _ in 0..e {
                    t = t * x.clone();
                }
            }
            acc = acc + t;
        }
        acc
    }
}

fn mul_monomials(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(mul_monomials(ma, mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for Poly {
    type Output = Poly;

    fn neg(mut self) -> Poly {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

/// Determinant of a square matrix whose entries are each absent or a single
/// variable, by Laplace expansion along rows, memoized on the set of unused
/// columns. Handles up to 64 columns.
pub fn sparse_determinant(entries: &[Vec<Option<usize>>]) -> Poly {
    let k = entries.len();
    assert!(k <= 64, "sparse determinant limited to 64 columns");
    assert!(entries.iter().all(|row| row.len() == k), "square input required");
    let full: u64 = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let mut memo: HashMap<u64, Poly> = HashMap::new();
    expand(entries, 0, full, &mut memo)
}

fn expand(entries: &[Vec<Option<usize>>], row: usize, cols: u64, memo: &mut HashMap<u64, Poly>) -> Poly {
    if row == entries.len() {
        return Poly::one();
    }
    if let Some(p) = memo.get(&cols) {
        return p.clone();
    }
    let mut acc = Poly::zero();
    // sign of column c among the remaining ones = parity of remaining columns left of c
    let mut position = 0usize;
    for c in 0..entries.len() {
        if cols & (1u64 << c) == 0 {
            continue;
        }
        if let Some(v) = entries[row][c] {
            let rest = expand(entries, row + 1, cols & !(1u64 << c), memo);
            if !rest.is_zero() {
                let term = &Poly::var(v) * &rest;
                acc = if position.is_multiple_of(2) { &acc + &term } else { &acc + &(-term) };
            }
        }
        position += 1;
    }
    memo.insert(cols, acc.clone());
    acc
}
