//! Number fields that occur as Wedderburn components: the rationals and the
//! prime cyclotomic fields `Q(ζ_ℓ)`, together with their prime-splitting
//! rules and Dedekind zeta factors.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::arith;
use crate::series::{euler_expand_by, DirichletCoefficients, LocalFactor, SeriesError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("cannot parse field `{0}` (expected `Q` or `Q(zeta_l)` with l prime)")]
    Parse(String),
    #[error("component multiplicity must be at least 1")]
    ZeroMultiplicity,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NumberField {
    Rational,
    /// `Q(ζ_ℓ)` for an odd prime `ℓ`.
    CyclotomicPrime(u64),
}

impl NumberField {
    /// `Q(ζ_ℓ)`; `ℓ = 2` gives the rationals.
    pub fn cyclotomic(ell: u64) -> Result<Self, FieldError> {
        if !arith::is_prime(ell) {
            return Err(FieldError::NotPrime(ell));
        }
        Ok(if ell == 2 {
            NumberField::Rational
        } else {
            NumberField::CyclotomicPrime(ell)
        })
    }

    pub fn degree(&self) -> u64 {
        match self {
            NumberField::Rational => 1,
            NumberField::CyclotomicPrime(ell) => ell - 1,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, NumberField::Rational)
    }

    /// How `p` decomposes in the ring of integers.
    pub fn splitting(&self, p: u64) -> Result<PrimeSplitting, FieldError> {
        if !arith::is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let places = match *self {
            NumberField::Rational => vec![Place { e: 1, f: 1 }],
            NumberField::CyclotomicPrime(ell) if p == ell => vec![Place { e: ell - 1, f: 1 }],
            NumberField::CyclotomicPrime(ell) => {
                let f = arith::multiplicative_order(p, ell);
                vec![Place { e: 1, f }; ((ell - 1) / f) as usize]
            }
        };
        Ok(PrimeSplitting { prime: p, places })
    }

    /// Local factor of the Dedekind zeta function at `p`:
    /// `∏ (1 - u^f)^{-1}` over the primes above `p`.
    pub fn dedekind_local(&self, p: u64) -> Result<LocalFactor, FieldError> {
        let split = self.splitting(p)?;
        Ok(split.places.iter().fold(LocalFactor::one(p), |acc, place| {
            acc.mul(&LocalFactor::geometric(p, BigInt::one(), place.f as usize))
                .expect("same prime")
        }))
    }
}

impl fmt::Display for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumberField::Rational => write!(f, "Q"),
            NumberField::CyclotomicPrime(ell) => write!(f, "Q(zeta_{ell})"),
        }
    }
}

impl FromStr for NumberField {
    type Err = FieldError;

    /// Accepts `Q`, `rational`, `Q(zeta_l)`, `Q(e_l)`, `Q(el)` and `cyc:l`.
    fn from_str(s: &str) -> Result<Self, FieldError> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") || t.eq_ignore_ascii_case("rational") {
            return Ok(NumberField::Rational);
        }
        let inner = t
            .strip_prefix("cyc:")
            .or_else(|| {
                t.strip_prefix("Q(")
                    .and_then(|r| r.strip_suffix(')'))
                    .map(|r| r.trim_start_matches("zeta").trim_start_matches('e'))
                    .map(|r| r.trim_start_matches('_'))
            })
            .ok_or_else(|| FieldError::Parse(s.to_string()))?;
        let ell: u64 = inner.parse().map_err(|_| FieldError::Parse(s.to_string()))?;
        NumberField::cyclotomic(ell)
    }
}

/// A prime of the field above `p`: ramification index `e`, residue degree `f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Place {
    pub e: u64,
    pub f: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeSplitting {
    pub prime: u64,
    pub places: Vec<Place>,
}

impl PrimeSplitting {
    /// `Σ e·f`, which equals the field degree.
    pub fn total_degree(&self) -> u64 {
        self.places.iter().map(|pl| pl.e * pl.f).sum()
    }
}

/// Euler factor of `∏ ζ_F(s)^k` at `p` over the given components.
pub fn dedekind_product_local(
    components: &[(NumberField, u32)],
    p: u64,
) -> Result<LocalFactor, FieldError> {
    let mut acc = LocalFactor::one(p);
    for (field, k) in components {
        if *k == 0 {
            return Err(FieldError::ZeroMultiplicity);
        }
        acc = acc.mul(&field.dedekind_local(p)?.pow(*k))?;
    }
    Ok(acc)
}

/// Coefficients of `∏ ζ_F(s)^k` up to `bound`.
pub fn dedekind_series(
    components: &[(NumberField, u32)],
    bound: usize,
) -> Result<DirichletCoefficients, FieldError> {
    euler_expand_by(bound, |p| dedekind_product_local(components, p))
}
