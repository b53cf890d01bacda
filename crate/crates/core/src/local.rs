//! Closed-form local zeta factors.
//!
//! All factors live at a rational prime `p` in the variable `u = p^{-s}`.
//! A coefficient ring `R` over `Z_p` with residue degree `f` enters only
//! through `q = p^f` and the substitution `p^{-fs} = u^f`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith;
use crate::series::{LocalFactor, UPolynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocalError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("ramification index and residue degree must be at least 1 (got e={e}, f={f})")]
    BadRingData { e: u64, f: u64 },
    #[error("Hey component parameters r, m, k must be at least 1")]
    BadHeyComponent,
    #[error("order parameter n must be positive")]
    NonPositiveOrder,
}

/// Ring of integers of a finite extension of `Q_p`, recorded by its
/// ramification index `e` and residue degree `f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PadicRing {
    p: u64,
    e: u64,
    f: u64,
}

impl PadicRing {
    pub fn new(p: u64, e: u64, f: u64) -> Result<Self, LocalError> {
        if !arith::is_prime(p) {
            return Err(LocalError::NotPrime(p));
        }
        if e == 0 || f == 0 {
            return Err(LocalError::BadRingData { e, f });
        }
        Ok(Self { p, e, f })
    }

    /// `Z_p` itself.
    pub fn integers(p: u64) -> Result<Self, LocalError> {
        Self::new(p, 1, 1)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn ramification(&self) -> u64 {
        self.e
    }

    pub fn residue_degree(&self) -> u64 {
        self.f
    }

    /// Size of the residue field, `p^f`.
    pub fn residue_size(&self) -> BigInt {
        arith::pow_big(self.p, self.f as u32)
    }
}

impl fmt::Display for PadicRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(p={}, e={}, f={})", self.p, self.e, self.f)
    }
}

/// `v_p(n)` for the parameter `n` of `R[x]/x(x-n)`; `n = 0` has infinite
/// valuation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Infinite,
    Finite(u32),
}

impl Valuation {
    pub fn of(n: u64, p: u64) -> Self {
        if n == 0 {
            Valuation::Infinite
        } else {
            Valuation::Finite(arith::valuation(n, p))
        }
    }
}

/// Zeta factor of `R[x]/x(x-n)R[x]` where `val = v_p(n)`.
///
/// With `q = p^f` and `v = e·val`, the finite case is
/// `[ (Σ_{r<v} q^r u^{2fr})(1 - u^f) + q^v u^{2fv} ] / (1 - u^f)^2`
/// and `n = 0` gives `(1 - q u^{2f})^{-1} (1 - u^f)^{-1}`.
pub fn rank2_local(ring: PadicRing, val: Valuation) -> LocalFactor {
    let p = ring.p;
    let f = ring.f as usize;
    let q = ring.residue_size();
    let one_minus_uf = UPolynomial::one_minus(BigInt::one(), f);
    match val {
        Valuation::Infinite => LocalFactor::geometric(p, q, 2 * f)
            .mul(&LocalFactor::geometric(p, BigInt::one(), f))
            .expect("same prime"),
        Valuation::Finite(val) => {
            let v = ring.e as usize * val as usize;
            let mut partial = UPolynomial::zero();
            let mut qr = BigInt::one();
            for r in 0..v {
                partial = partial + UPolynomial::monomial(qr.clone(), 2 * f * r);
                qr *= &q;
            }
            let numerator = &partial * &one_minus_uf + UPolynomial::monomial(qr, 2 * f * v);
            LocalFactor::new(p, numerator, one_minus_uf.pow(2)).expect("constant term 1")
        }
    }
}

/// Number of ideals of `R[x]/x(x-n)` with `R`-basis `{π^{r1} + a x, π^{r2} x}`,
/// i.e. the number of `a mod π^{r2}` with `π^{r1} + a n ∈ π^{r2} R`.
pub fn rank2_ideal_count(ring: PadicRing, val: Valuation, r1: u64, r2: u64) -> BigInt {
    let q_pow = |k: u64| arith::pow_big(ring.p, (ring.f * k) as u32);
    let bounded = match val {
        Valuation::Infinite => None,
        Valuation::Finite(val) => Some(ring.e * val as u64),
    };
    match bounded {
        Some(v) if r2 >= v => {
            if r1 >= v {
                q_pow(v)
            } else {
                BigInt::zero()
            }
        }
        _ => {
            if r1 >= r2 {
                q_pow(r2)
            } else {
                BigInt::zero()
            }
        }
    }
}

/// Local factor of the adjacency algebra of a rank-2 scheme of order `n`
/// over `ring`. The algebra is `R[x]/x(x-n)` after shifting `σ_1 ↦ x - 1`.
pub fn rank2_scheme_local(ring: PadicRing, n: u64) -> Result<LocalFactor, LocalError> {
    if n == 0 {
        return Err(LocalError::NonPositiveOrder);
    }
    Ok(rank2_local(ring, Valuation::of(n, ring.p)))
}

/// Full local factor of `Z_p C_p`: `(1 - u + p u^2) (1 - u)^{-2}`.
pub fn solomon_cp_local(p: u64) -> Result<LocalFactor, LocalError> {
    if !arith::is_prime(p) {
        return Err(LocalError::NotPrime(p));
    }
    Ok(solomon_cp_correction(p)
        .mul(&LocalFactor::geometric(p, BigInt::one(), 1).pow(2))
        .expect("same prime"))
}

/// The polynomial correction `1 - u + p u^2` relative to the maximal order.
pub fn solomon_cp_correction(p: u64) -> LocalFactor {
    let poly = UPolynomial::new(vec![BigInt::one(), -BigInt::one(), BigInt::from(p)]);
    LocalFactor::polynomial(p, poly).expect("valid prime")
}

/// A simple component `M_r(D)` of a local maximal order acting on `k`
/// copies of its irreducible module; `D` has index `m` and the ring of
/// integers of its center is `center`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HeyComponent {
    pub matrix_size: u64,
    pub index: u64,
    pub multiplicity: u64,
    pub center: PadicRing,
}

impl HeyComponent {
    pub fn new(
        matrix_size: u64,
        index: u64,
        multiplicity: u64,
        center: PadicRing,
    ) -> Result<Self, LocalError> {
        if matrix_size == 0 || index == 0 || multiplicity == 0 {
            return Err(LocalError::BadHeyComponent);
        }
        Ok(Self {
            matrix_size,
            index,
            multiplicity,
            center,
        })
    }
}

/// `∏_{j<k} (1 - q^{jm} u^{f r m})^{-1}` with `q = p^f` of the center.
pub fn hey_local(c: &HeyComponent) -> LocalFactor {
    let p = c.center.p;
    let q = c.center.residue_size();
    let degree = (c.center.f * c.matrix_size * c.index) as usize;
    (0..c.multiplicity).fold(LocalFactor::one(p), |acc, j| {
        let coeff = num_traits::pow(q.clone(), (j * c.index) as usize);
        acc.mul(&LocalFactor::geometric(p, coeff, degree))
            .expect("same prime")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, e: u64, f: u64) -> PadicRing {
        PadicRing::new(p, e, f).unwrap()
    }

    fn lf(p: u64, num: &[i64], den: &[i64]) -> LocalFactor {
        LocalFactor::new(p, UPolynomial::from_i64s(num), UPolynomial::from_i64s(den)).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn ring_validation() {
        assert_eq!(PadicRing::new(4, 1, 1), Err(LocalError::NotPrime(4)));
        assert_eq!(PadicRing::new(2, 0, 1), Err(LocalError::BadRingData { e: 0, f: 1 }));
        assert_eq!(ring(2, 1, 2).residue_size(), BigInt::from(4));
    }

    #[test]
    fn rank2_examples() {
        let solomon2 = lf(2, &[1, -1, 2], &[1, -2, 1]);
        assert_eq!(rank2_local(ring(2, 1, 1), Valuation::Finite(1)), solomon2);
        for (p, e, f) in [(2, 1, 1), (3, 2, 1), (5, 1, 3)] {
            let dedekind_sq = LocalFactor::geometric(p, BigInt::one(), f as usize).pow(2);
            assert_eq!(rank2_local(ring(p, e, f), Valuation::Finite(0)), dedekind_sq);
        }
        let val2 = rank2_local(ring(2, 1, 1), Valuation::Finite(2));
        assert_eq!(val2, lf(2, &[1, -1, 2, -2, 4], &[1, -2, 1]));
        assert_eq!(val2.expand(5), big(&[1, 1, 3, 3, 7, 11]));
        let nilpotent = rank2_local(ring(2, 1, 1), Valuation::Infinite);
        assert_eq!(nilpotent.expand(4), big(&[1, 1, 3, 3, 7]));
    }

    #[test]
    fn ideal_count_examples() {
        let r = ring(3, 1, 2);
        assert_eq!(rank2_ideal_count(r, Valuation::Infinite, 3, 2), BigInt::from(81));
        assert_eq!(rank2_ideal_count(r, Valuation::Infinite, 1, 2), BigInt::zero());
        assert_eq!(rank2_ideal_count(r, Valuation::Finite(1), 0, 0), BigInt::one());
        assert_eq!(rank2_ideal_count(ring(2, 1, 1), Valuation::Finite(1), 1, 2), BigInt::from(2));
    }

    /// Direct enumeration over `Z/p^{r2}` for `R = Z_p`: count `a` with
    /// `p^{r1} + a n ≡ 0 (mod p^{r2})`.
    #[test]
    fn ideal_count_matches_residue_enumeration() {
        for p in [2u64, 3] {
            for n in [1u64, 2, 3, 4, 6, 8, 9, 12] {
                for r1 in 0..5u32 {
                    for r2 in 0..5u32 {
                        let m = p.pow(r2);
                        let brute = (0..m)
                            .filter(|a| (p.pow(r1) + a * n) % m == 0)
                            .count();
                        let formula =
                            rank2_ideal_count(ring(p, 1, 1), Valuation::of(n, p), r1 as u64, r2 as u64);
                        assert_eq!(formula, BigInt::from(brute), "p={p} n={n} r1={r1} r2={r2}");
                    }
                }
            }
        }
    }

    #[test]
    fn expansion_matches_ideal_counts() {
        for p in [2u64, 3, 5] {
            for e in 1..=3 {
                for f in 1..=2 {
                    let r = ring(p, e, f);
                    for val in [Valuation::Infinite, Valuation::Finite(0), Valuation::Finite(1), Valuation::Finite(3)] {
                        let coeffs = rank2_local(r, val).expand(8 * f as usize);
                        for k in 0..=8u64 {
                            let total: BigInt =
                                (0..=k).map(|r1| rank2_ideal_count(r, val, r1, k - r1)).sum();
                            assert_eq!(coeffs[(f * k) as usize], total, "{r} {val:?} K={k}");
                        }
                        for (i, c) in coeffs.iter().enumerate() {
                            if !(i as u64).is_multiple_of(f) {
                                assert!(c.is_zero());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rank2_scheme_examples() {
        assert_eq!(
            rank2_scheme_local(ring(2, 1, 1), 2).unwrap(),
            lf(2, &[1, -1, 2], &[1, -2, 1])
        );
        assert_eq!(
            rank2_scheme_local(ring(2, 1, 2), 2).unwrap(),
            lf(2, &[1, 0, -1, 0, 4], &[1, 0, -2, 0, 1])
        );
        assert_eq!(
            rank2_scheme_local(ring(3, 1, 1), 6).unwrap(),
            lf(3, &[1, -1, 3], &[1, -2, 1])
        );
        assert_eq!(
            rank2_scheme_local(ring(5, 1, 1), 6).unwrap(),
            LocalFactor::geometric(5, BigInt::one(), 1).pow(2)
        );
        assert_eq!(rank2_scheme_local(ring(5, 1, 1), 0), Err(LocalError::NonPositiveOrder));
    }

    #[test]
    fn solomon_examples() {
        assert_eq!(
            solomon_cp_local(2).unwrap(),
            rank2_scheme_local(ring(2, 1, 1), 2).unwrap()
        );
        assert_eq!(solomon_cp_local(3).unwrap().expand(3), big(&[1, 1, 4, 7]));
        let dedekind = crate::fields::NumberField::Rational
            .dedekind_local(5)
            .unwrap()
            .mul(&crate::fields::NumberField::CyclotomicPrime(5).dedekind_local(5).unwrap())
            .unwrap();
        assert_eq!(
            solomon_cp_local(5).unwrap(),
            solomon_cp_correction(5).mul(&dedekind).unwrap()
        );
        assert_eq!(solomon_cp_local(9), Err(LocalError::NotPrime(9)));
    }

    #[test]
    fn hey_examples() {
        let z2 = ring(2, 1, 1);
        let field = HeyComponent::new(1, 1, 1, z2).unwrap();
        assert_eq!(hey_local(&field), LocalFactor::geometric(2, BigInt::one(), 1));
        let column = HeyComponent::new(1, 1, 2, z2).unwrap();
        let expected = LocalFactor::geometric(2, BigInt::one(), 1)
            .mul(&LocalFactor::geometric(2, BigInt::from(2), 1))
            .unwrap();
        assert_eq!(hey_local(&column), expected);
        assert_eq!(hey_local(&column).expand(3), big(&[1, 3, 7, 15]));
        let matrix = HeyComponent::new(2, 1, 1, z2).unwrap();
        assert_eq!(hey_local(&matrix), LocalFactor::geometric(2, BigInt::one(), 2));
        assert_eq!(HeyComponent::new(0, 1, 1, z2), Err(LocalError::BadHeyComponent));
    }

    #[test]
    fn hey_field_case_is_dedekind() {
        use crate::fields::NumberField;
        for ell in [3u64, 5, 7] {
            let field = NumberField::CyclotomicPrime(ell);
            for p in [2u64, 3, 5, 7, 11] {
                let split = field.splitting(p).unwrap();
                let mut product = LocalFactor::one(p);
                for place in &split.places {
                    let c = HeyComponent::new(1, 1, 1, ring(p, place.e, place.f)).unwrap();
                    product = product.mul(&hey_local(&c)).unwrap();
                }
                assert_eq!(product, field.dedekind_local(p).unwrap());
            }
        }
    }
}
