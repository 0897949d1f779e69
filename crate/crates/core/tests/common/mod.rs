//! Shared strategies and independent reference computations.

#![allow(dead_code)]

use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use parinv_core::blocks::compositions;
use parinv_core::sampling::rng;
use parinv_core::{BlockStructure, NilradMatrix};

/// A composition of some `n` in `lo..=hi`, picked by index.
pub fn blocks_up_to(lo: usize, hi: usize) -> impl Strategy<Value = BlockStructure> {
    (lo..=hi)
        .prop_flat_map(|n| (Just(n), 0..(1usize << (n - 1))))
        .prop_map(|(n, k)| compositions(n).swap_remove(k))
}

pub fn random_x(bs: &BlockStructure, seed: u64) -> NilradMatrix {
    NilradMatrix::random(bs, &mut rng(seed, 0))
}

pub fn all_permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in all_permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

pub fn parity(p: &[usize]) -> bool {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    inv % 2 == 1
}

/// Leibniz expansion over all permutations.
pub fn leibniz(a: &[Vec<BigRational>]) -> BigRational {
    let k = a.len();
    let mut total = BigRational::zero();
    for p in all_permutations(k) {
        let mut term = BigRational::one();
        for (i, &j) in p.iter().enumerate() {
            term *= &a[i][j];
        }
        if parity(&p) {
            total -= term;
        } else {
            total += term;
        }
    }
    total
}

/// Reduced row echelon rank and consistency check for `A u = b` over the
/// rationals, by plain Gauss–Jordan elimination.
pub fn consistent(mut a: Vec<Vec<BigRational>>, b: Vec<BigRational>) -> bool {
    for (row, v) in a.iter_mut().zip(b) {
        row.push(v);
    }
    let cols = a.first().map_or(0, |r| r.len() - 1);
    let mut pivot_row = 0;
    for c in 0..cols {
        let Some(p) = (pivot_row..a.len()).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(pivot_row, p);
        let inv = a[pivot_row][c].recip();
        for v in a[pivot_row].iter_mut() {
            *v *= &inv;
        }
        for r in 0..a.len() {
            if r != pivot_row && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                let pivot = a[pivot_row].clone();
                for (v, p) in a[r].iter_mut().zip(&pivot) {
                    *v -= &f * p;
                }
            }
        }
        pivot_row += 1;
    }
    a[pivot_row..].iter().all(|r| r[cols].is_zero())
}
