//! Brute-force census of finite-index sublattices and ideals.
//!
//! Every full sublattice of `Z^r` of index `n` has a unique basis in
//! Hermite normal form: rows `h_0 .. h_{r-1}`, upper triangular, positive
//! diagonal `d_i` with `∏ d_i = n`, and each entry above `d_j` reduced into
//! `[0, d_j)`. Enumerating these and keeping the ones closed under
//! multiplication by the order counts its ideals of index `n` without
//! reference to any closed formula.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::arith;
use crate::orders::IntegralOrder;
use crate::series::DirichletCoefficients;

/// Upper-triangular Hermite basis of a sublattice; rows are basis vectors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HnfBasis {
    dim: usize,
    rows: Vec<i64>,
}

impl HnfBasis {
    fn with_diagonal(diagonal: &[i64]) -> Self {
        let dim = diagonal.len();
        let mut rows = vec![0; dim * dim];
        for (i, &d) in diagonal.iter().enumerate() {
            rows[i * dim + i] = d;
        }
        Self { dim, rows }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.rows[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.rows[i * self.dim..(i + 1) * self.dim]
    }

    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.dim).map(|i| self.entry(i, i)).collect()
    }

    /// Index of the sublattice, `∏ d_i`.
    pub fn index(&self) -> i64 {
        self.diagonal().iter().product()
    }

    /// Whether `v` lies in the lattice, by exact back-substitution.
    pub fn contains(&self, v: &[i64]) -> bool {
        let r = self.dim;
        let mut w = [0i64; MAX_STACK_RANK];
        if r > MAX_STACK_RANK {
            return self.contains_slow(v);
        }
        w[..r].copy_from_slice(v);
        for i in 0..r {
            let d = self.rows[i * r + i];
            let wi = w[i];
            if wi % d != 0 {
                return false;
            }
            let c = wi / d;
            if c != 0 {
                for j in i + 1..r {
                    w[j] -= c * self.rows[i * r + j];
                }
            }
        }
        true
    }

    fn contains_slow(&self, v: &[i64]) -> bool {
        let r = self.dim;
        let mut w = v.to_vec();
        for i in 0..r {
            let d = self.rows[i * r + i];
            if w[i] % d != 0 {
                return false;
            }
            let c = w[i] / d;
            for j in i + 1..r {
                w[j] -= c * self.rows[i * r + j];
            }
        }
        true
    }

    /// Steps the off-diagonal entries to the next filling in mixed-radix
    /// order (last position fastest). Returns `false` after the last one.
    fn advance(&mut self) -> bool {
        let r = self.dim;
        for i in (0..r).rev() {
            for j in (i + 1..r).rev() {
                let d = self.rows[j * r + j];
                let e = &mut self.rows[i * r + j];
                if *e + 1 < d {
                    *e += 1;
                    return true;
                }
                *e = 0;
            }
        }
        false
    }
}

const MAX_STACK_RANK: usize = 64;

impl fmt::Debug for HnfBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[i64]> = (0..self.dim).map(|i| self.row(i)).collect();
        write!(f, "HnfBasis{rows:?}")
    }
}

/// Ordered factorizations `d_0 ... d_{r-1} = n`, lexicographic.
pub fn diagonal_factorizations(rank: usize, n: u64) -> Vec<Vec<i64>> {
    fn go(rank: usize, n: u64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if rank == 1 {
            prefix.push(n as i64);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for d in 1..=n {
            if n.is_multiple_of(d) {
                prefix.push(d as i64);
                go(rank - 1, n / d, prefix, out);
                prefix.pop();
            }
        }
    }
    assert!(rank >= 1 && n >= 1);
    let mut out = Vec::new();
    go(rank, n, &mut Vec::with_capacity(rank), &mut out);
    out
}

/// Stream of all index-`n` sublattices of `Z^rank`, each exactly once.
pub struct Sublattices {
    shapes: std::vec::IntoIter<Vec<i64>>,
    current: Option<HnfBasis>,
}

impl Iterator for Sublattices {
    type Item = HnfBasis;

    fn next(&mut self) -> Option<HnfBasis> {
        loop {
            match &mut self.current {
                Some(basis) => {
                    let out = basis.clone();
                    if !basis.advance() {
                        self.current = None;
                    }
                    return Some(out);
                }
                None => {
                    let diag = self.shapes.next()?;
                    self.current = Some(HnfBasis::with_diagonal(&diag));
                }
            }
        }
    }
}

pub fn enumerate_sublattices(rank: usize, n: u64) -> Sublattices {
    Sublattices {
        shapes: diagonal_factorizations(rank, n).into_iter(),
        current: None,
    }
}

/// Which products an ideal must absorb.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdealSide {
    Left,
    Right,
    TwoSided,
}

/// Multiplication operators an ideal must be closed under, as flattened
/// `r x r` matrices acting on row vectors. The identity is dropped.
fn closure_operators(order: &IntegralOrder, side: IdealSide) -> Vec<Vec<i64>> {
    let r = order.rank();
    let mut ops = Vec::new();
    for i in 0..r {
        if order.basis(i) == order.identity() {
            continue;
        }
        if matches!(side, IdealSide::Left | IdealSide::TwoSided) {
            ops.push(order.left_multiplication(i));
        }
        if matches!(side, IdealSide::Right | IdealSide::TwoSided) {
            ops.push(order.right_multiplication(i));
        }
    }
    ops
}

fn is_closed(basis: &HnfBasis, ops: &[Vec<i64>], scratch: &mut [i64]) -> bool {
    let r = basis.dim;
    // the last rows carry the largest diagonal entries and fail most often
    for i in (0..r).rev() {
        let row = basis.row(i);
        for m in ops {
            scratch.iter_mut().for_each(|x| *x = 0);
            for (j, &h) in row.iter().enumerate().skip(i) {
                if h == 0 {
                    continue;
                }
                let mrow = &m[j * r..(j + 1) * r];
                for (k, s) in scratch.iter_mut().enumerate() {
                    *s += h * mrow[k];
                }
            }
            if !basis.contains(scratch) {
                return false;
            }
        }
    }
    true
}

fn count_for_shape(diag: &[i64], ops: &[Vec<i64>]) -> u64 {
    let mut basis = HnfBasis::with_diagonal(diag);
    let mut scratch = vec![0i64; diag.len()];
    let mut count = 0;
    loop {
        if is_closed(&basis, ops, &mut scratch) {
            count += 1;
        }
        if !basis.advance() {
            return count;
        }
    }
}

/// Number of ideals of index `n` of the given side. Shapes are counted in
/// parallel and summed.
pub fn count_ideals(order: &IntegralOrder, n: u64, side: IdealSide) -> u64 {
    let ops = closure_operators(order, side);
    diagonal_factorizations(order.rank(), n)
        .par_iter()
        .map(|diag| count_for_shape(diag, &ops))
        .sum()
}

pub fn count_left_ideals(order: &IntegralOrder, n: u64) -> u64 {
    count_ideals(order, n, IdealSide::Left)
}

/// Left-ideal counts `a_1 .. a_bound`. With `prime_powers_only`, only
/// prime-power indices are counted and the rest are filled in
/// multiplicatively.
pub fn ideal_series(
    order: &IntegralOrder,
    bound: usize,
    prime_powers_only: bool,
) -> DirichletCoefficients {
    assert!(bound >= 1, "series bound must be positive");
    let indices: Vec<u64> = (1..=bound as u64)
        .filter(|&n| !prime_powers_only || n == 1 || arith::prime_power(n).is_some())
        .collect();
    let counted: Vec<(u64, u64)> = indices
        .par_iter()
        .map(|&n| (n, count_left_ideals(order, n)))
        .collect();
    let mut values = vec![BigInt::zero(); bound];
    for (n, c) in counted {
        values[n as usize - 1] = BigInt::from(c);
    }
    if prime_powers_only {
        for n in 2..=bound as u64 {
            let parts = arith::factorize(n);
            if parts.len() > 1 {
                values[n as usize - 1] = parts
                    .iter()
                    .map(|&(p, k)| values[p.pow(k) as usize - 1].clone())
                    .product();
            }
        }
    }
    DirichletCoefficients::new(values).expect("nonempty")
}
