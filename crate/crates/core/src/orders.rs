//! Integral orders given by a multiplication table on a `Z`-basis.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith;
use crate::schemes::AssociationScheme;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("an order needs rank at least 1")]
    ZeroRank,
    #[error("multiplication table has {actual} entries, expected {expected}")]
    TableSize { expected: usize, actual: usize },
    #[error("identity vector has length {actual}, expected {expected}")]
    IdentitySize { expected: usize, actual: usize },
    #[error("multiplication is not associative on basis elements ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("the given identity is not a two-sided unit (fails on basis element {0})")]
    BadIdentity(usize),
    #[error("minimal polynomial must have degree at least 1")]
    ConstantPolynomial,
    #[error("the trace form is degenerate (discriminant 0)")]
    ZeroDiscriminant,
}

/// A ring that is free of rank `r` over `Z`, with basis `b_0 .. b_{r-1}`
/// and `b_i b_j = Σ_k c_{ijk} b_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralOrder {
    rank: usize,
    table: Vec<i64>,
    identity: Vec<i64>,
}

impl IntegralOrder {
    pub fn new(rank: usize, table: Vec<i64>, identity: Vec<i64>) -> Result<Self, OrderError> {
        if rank == 0 {
            return Err(OrderError::ZeroRank);
        }
        if table.len() != rank.pow(3) {
            return Err(OrderError::TableSize {
                expected: rank.pow(3),
                actual: table.len(),
            });
        }
        if identity.len() != rank {
            return Err(OrderError::IdentitySize {
                expected: rank,
                actual: identity.len(),
            });
        }
        let order = Self {
            rank,
            table,
            identity,
        };
        order.check_associative()?;
        order.check_identity()?;
        Ok(order)
    }

    fn check_associative(&self) -> Result<(), OrderError> {
        let r = self.rank;
        for i in 0..r {
            for j in 0..r {
                let ij = self.basis_product(i, j);
                for k in 0..r {
                    let left = self.multiply(&ij, &self.basis(k));
                    let jk = self.basis_product(j, k);
                    let right = self.multiply(&self.basis(i), &jk);
                    if left != right {
                        return Err(OrderError::NotAssociative(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_identity(&self) -> Result<(), OrderError> {
        for i in 0..self.rank {
            let b = self.basis(i);
            if self.multiply(&self.identity, &b) != b || self.multiply(&b, &self.identity) != b {
                return Err(OrderError::BadIdentity(i));
            }
        }
        Ok(())
    }

    /// The adjacency algebra `ZS` with the relation matrices as basis.
    pub fn from_scheme(scheme: &AssociationScheme) -> Self {
        let r = scheme.rank();
        let mut table = Vec::with_capacity(r * r * r);
        for s in 0..r {
            for t in 0..r {
                for u in 0..r {
                    table.push(scheme.structure_constant(s, t, u) as i64);
                }
            }
        }
        let mut identity = vec![0; r];
        identity[scheme.identity_index()] = 1;
        Self::new(r, table, identity).expect("scheme algebras are associative with unit")
    }

    /// `Z[x]/(m(x))` on the power basis `1, x, ..., x^{d-1}`, where `m` is
    /// monic of degree `d` with lower coefficients `low[0..d]`.
    pub fn monogenic(low: &[i64]) -> Result<Self, OrderError> {
        let d = low.len();
        if d == 0 {
            return Err(OrderError::ConstantPolynomial);
        }
        // powers[k] = coordinates of x^k for k < 2d - 1
        let mut powers: Vec<Vec<i64>> = (0..d)
            .map(|k| {
                let mut v = vec![0; d];
                v[k] = 1;
                v
            })
            .collect();
        for k in d..(2 * d - 1) {
            let prev = &powers[k - 1];
            let top = prev[d - 1];
            let mut v = vec![0; d];
            v[1..d].copy_from_slice(&prev[..d - 1]);
            for i in 0..d {
                v[i] -= top * low[i];
            }
            powers.push(v);
        }
        let mut table = Vec::with_capacity(d * d * d);
        for i in 0..d {
            for j in 0..d {
                table.extend_from_slice(&powers[i + j]);
            }
        }
        let mut identity = vec![0; d];
        identity[0] = 1;
        Self::new(d, table, identity)
    }

    /// `Z[x]/(x^2 - n x)`.
    pub fn quadratic(n: i64) -> Self {
        Self::monogenic(&[0, -n]).expect("degree 2")
    }

    /// `Z[ζ_ℓ] = Z[x]/(1 + x + ... + x^{ℓ-1})`; for `ℓ = 2` this is `Z`.
    pub fn cyclotomic_integers(ell: u64) -> Result<Self, OrderError> {
        if ell <= 2 {
            return Ok(Self::trivial());
        }
        Self::monogenic(&vec![1; (ell - 1) as usize])
    }

    /// `Z` as a rank-1 order.
    pub fn trivial() -> Self {
        Self::new(1, vec![1], vec![1]).expect("Z")
    }

    /// `A ⊗_Z B` on the basis `a_i ⊗ b_j`, indexed `i * rank(B) + j`.
    pub fn tensor(&self, other: &Self) -> Self {
        let (ra, rb) = (self.rank, other.rank);
        let r = ra * rb;
        let mut table = vec![0i64; r * r * r];
        for i1 in 0..ra {
            for i2 in 0..ra {
                for k1 in 0..ra {
                    let ca = self.constant(i1, i2, k1);
                    if ca == 0 {
                        continue;
                    }
                    for j1 in 0..rb {
                        for j2 in 0..rb {
                            for k2 in 0..rb {
                                let (a, b, c) = (i1 * rb + j1, i2 * rb + j2, k1 * rb + k2);
                                table[(a * r + b) * r + c] = ca * other.constant(j1, j2, k2);
                            }
                        }
                    }
                }
            }
        }
        let identity = self
            .identity
            .iter()
            .flat_map(|&x| other.identity.iter().map(move |&y| x * y))
            .collect();
        Self {
            rank: r,
            table,
            identity,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn identity(&self) -> &[i64] {
        &self.identity
    }

    /// `c_{ijk}`
    pub fn constant(&self, i: usize, j: usize, k: usize) -> i64 {
        self.table[(i * self.rank + j) * self.rank + k]
    }

    pub fn basis(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0; self.rank];
        v[i] = 1;
        v
    }

    fn basis_product(&self, i: usize, j: usize) -> Vec<i64> {
        let r = self.rank;
        self.table[(i * r + j) * r..(i * r + j + 1) * r].to_vec()
    }

    pub fn multiply(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        let r = self.rank;
        let mut out = vec![0i64; r];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let base = (i * r + j) * r;
                for (k, o) in out.iter_mut().enumerate() {
                    *o += xi * yj * self.table[base + k];
                }
            }
        }
        out
    }

    /// Matrix `M` with `(b_i · v)_k = Σ_j v_j M[j][k]`, flattened row-major.
    pub fn left_multiplication(&self, i: usize) -> Vec<i64> {
        let r = self.rank;
        self.table[i * r * r..(i + 1) * r * r].to_vec()
    }

    /// Matrix `M` with `(v · b_i)_k = Σ_j v_j M[j][k]`, flattened row-major.
    pub fn right_multiplication(&self, i: usize) -> Vec<i64> {
        let r = self.rank;
        let mut m = Vec::with_capacity(r * r);
        for j in 0..r {
            m.extend_from_slice(&self.table[(j * r + i) * r..(j * r + i + 1) * r]);
        }
        m
    }

    pub fn is_commutative(&self) -> bool {
        let r = self.rank;
        (0..r).all(|i| (0..r).all(|j| self.basis_product(i, j) == self.basis_product(j, i)))
    }

    /// Trace of left multiplication by `b_k` on the regular representation.
    fn basis_trace(&self, k: usize) -> i64 {
        (0..self.rank).map(|i| self.constant(k, i, i)).sum()
    }

    /// `det(Tr(b_i b_j))`.
    pub fn discriminant(&self) -> BigInt {
        let r = self.rank;
        let traces: Vec<i64> = (0..r).map(|k| self.basis_trace(k)).collect();
        let form: Vec<Vec<BigInt>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        let t: i64 = (0..r).map(|k| self.constant(i, j, k) * traces[k]).sum();
                        BigInt::from(t)
                    })
                    .collect()
            })
            .collect();
        determinant(form)
    }

    /// Primes dividing the discriminant: every prime at which the order can
    /// fail to be maximal.
    pub fn bad_primes(&self) -> Result<BadPrimeSet, OrderError> {
        let d = self.discriminant();
        if d.is_zero() {
            return Err(OrderError::ZeroDiscriminant);
        }
        Ok(BadPrimeSet(arith::big_prime_divisors(&d).into_iter().collect()))
    }
}

/// Fraction-free (Bareiss) elimination.
fn determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Primes at which an order may fail to be maximal.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BadPrimeSet(BTreeSet<u64>);

impl BadPrimeSet {
    pub fn new(primes: impl IntoIterator<Item = u64>) -> Self {
        let set: BTreeSet<u64> = primes.into_iter().collect();
        assert!(set.iter().all(|&p| arith::is_prime(p)), "bad primes must be prime");
        Self(set)
    }

    pub fn contains(&self, p: u64) -> bool {
        self.0.contains(&p)
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn intersection(&self, other: &Self) -> Vec<u64> {
        self.0.intersection(&other.0).copied().collect()
    }
}

impl fmt::Display for BadPrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Discriminant test for local coprimality: no prime divides both
/// discriminants. A `false` answer may be conservative.
pub fn locally_coprime(a: &IntegralOrder, b: &IntegralOrder) -> Result<bool, OrderError> {
    Ok(a.bad_primes()?.intersection(&b.bad_primes()?).is_empty())
}
