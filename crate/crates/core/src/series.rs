//! Exact arithmetic on local zeta factors and truncated Dirichlet series.
//!
//! A local factor at the prime `p` is a rational function in `u = p^{-s}`
//! with integer coefficients. Its power-series expansion in `u` lists the
//! numbers `a_{p^k}`; the Euler product glues the local expansions into the
//! global coefficient vector.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("local factors live at different primes ({0} and {1})")]
    PrimeMismatch(u64, u64),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("denominator constant term must be +1 or -1, got {0}")]
    BadDenominator(BigInt),
    #[error("numerator constant term is zero; not a zeta factor")]
    ZeroConstantTerm,
    #[error("no local factor assigned to the prime {0}")]
    MissingPrime(u64),
    #[error("series bounds differ ({0} and {1})")]
    BoundMismatch(usize, usize),
    #[error("series bound must be at least 1")]
    EmptyBound,
}

/// Polynomial in `u` with big-integer coefficients, lowest degree first.
/// Trailing zeros are always stripped; the zero polynomial is empty.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UPolynomial {
    coefficients: Vec<BigInt>,
}

impl UPolynomial {
    pub fn new(mut coefficients: Vec<BigInt>) -> Self {
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        Self { coefficients }
    }

    pub fn from_i64s(coefficients: &[i64]) -> Self {
        Self::new(coefficients.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c * u^degree`
    pub fn monomial(c: BigInt, degree: usize) -> Self {
        let mut v = vec![BigInt::zero(); degree + 1];
        v[degree] = c;
        Self::new(v)
    }

    /// `1 - c * u^degree`
    pub fn one_minus(c: BigInt, degree: usize) -> Self {
        Self::one() - Self::monomial(c, degree)
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coefficients.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coefficients.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Gcd of the coefficients (nonnegative; zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coefficients
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    fn leading(&self) -> &BigInt {
        self.coefficients.last().expect("nonzero polynomial")
    }

    fn primitive_part(&self) -> Self {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        Self::new(self.coefficients.iter().map(|x| x / &c).collect())
    }

    fn pseudo_remainder(&self, divisor: &Self) -> Self {
        let db = divisor.degree().expect("nonzero divisor");
        let lb = divisor.leading().clone();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.leading().clone();
            r = r.scale(&lb) - (divisor * &Self::monomial(lr, dr - db));
        }
        r
    }

    /// Greatest common divisor in `Z[u]`, normalized to a positive leading
    /// coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.normalize_sign();
        }
        if other.is_zero() {
            return self.normalize_sign();
        }
        let content = self.content().gcd(&other.content());
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_remainder(&b).primitive_part();
            a = b;
            b = r;
        }
        a.scale(&content).normalize_sign()
    }

    fn normalize_sign(&self) -> Self {
        if self.coefficients.last().is_some_and(Signed::is_negative) {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Exact quotient by a divisor whose constant term is `±1`, computed by
    /// low-order division. Returns `None` if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let d0 = divisor.coeff(0);
        if !d0.abs().is_one() {
            return None;
        }
        let (Some(dn), Some(dd)) = (self.degree(), divisor.degree()) else {
            return self.is_zero().then(Self::zero);
        };
        if dn < dd {
            return None;
        }
        let mut rest = self.coefficients.clone();
        let mut quotient = vec![BigInt::zero(); dn - dd + 1];
        for (i, q) in quotient.iter_mut().enumerate() {
            *q = &rest[i] * &d0;
            if q.is_zero() {
                continue;
            }
            for (j, c) in divisor.coefficients.iter().enumerate() {
                rest[i + j] -= &*q * c;
            }
        }
        rest.iter()
            .all(Zero::is_zero)
            .then(|| Self::new(quotient))
    }

    /// Coefficients of `self` truncated to `u^0 .. u^k`.
    fn truncated(&self, k: usize) -> Vec<BigInt> {
        (0..=k).map(|i| self.coeff(i)).collect()
    }
}

impl fmt::Debug for UPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UPolynomial({self})")
    }
}

impl fmt::Display for UPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "u")?,
                (1, false) => write!(f, "{mag}u")?,
                (_, true) => write!(f, "u^{i}")?,
                (_, false) => write!(f, "{mag}u^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &UPolynomial {
    type Output = UPolynomial;
    fn add(self, rhs: Self) -> UPolynomial {
        let n = self.coefficients.len().max(rhs.coefficients.len());
        UPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Add for UPolynomial {
    type Output = UPolynomial;
    fn add(self, rhs: Self) -> UPolynomial {
        &self + &rhs
    }
}

impl Sub for &UPolynomial {
    type Output = UPolynomial;
    fn sub(self, rhs: Self) -> UPolynomial {
        let n = self.coefficients.len().max(rhs.coefficients.len());
        UPolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Sub for UPolynomial {
    type Output = UPolynomial;
    fn sub(self, rhs: Self) -> UPolynomial {
        &self - &rhs
    }
}

impl Neg for UPolynomial {
    type Output = UPolynomial;
    fn neg(self) -> UPolynomial {
        UPolynomial::new(self.coefficients.into_iter().map(|c| -c).collect())
    }
}

impl Mul for &UPolynomial {
    type Output = UPolynomial;
    fn mul(self, rhs: Self) -> UPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return UPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coefficients.len() + rhs.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPolynomial::new(out)
    }
}

impl Mul for UPolynomial {
    type Output = UPolynomial;
    fn mul(self, rhs: Self) -> UPolynomial {
        &self * &rhs
    }
}

/// A rational function `numerator / denominator` in `u = p^{-s}` attached to
/// the rational prime `p`.
///
/// Values are kept in lowest terms with denominator constant term `+1`, so
/// structural equality is equality of rational functions. A genuine local
/// zeta factor also has a nonzero numerator constant term; values built with
/// [`LocalFactor::summand`] may not, and serve only as addends.
#[derive(Clone, PartialEq, Eq)]
pub struct LocalFactor {
    prime: u64,
    numerator: UPolynomial,
    denominator: UPolynomial,
}

impl LocalFactor {
    /// Builds a local zeta factor, checking both constant-term invariants.
    pub fn new(
        prime: u64,
        numerator: UPolynomial,
        denominator: UPolynomial,
    ) -> Result<Self, SeriesError> {
        let f = Self::summand(prime, numerator, denominator)?;
        f.check_zeta_factor()?;
        Ok(f)
    }

    /// Builds a rational function at `prime` that only needs an expandable
    /// denominator. The numerator may vanish at `u = 0`.
    pub fn summand(
        prime: u64,
        numerator: UPolynomial,
        denominator: UPolynomial,
    ) -> Result<Self, SeriesError> {
        if !arith::is_prime(prime) {
            return Err(SeriesError::NotPrime(prime));
        }
        let d0 = denominator.coeff(0);
        if !d0.abs().is_one() {
            return Err(SeriesError::BadDenominator(d0));
        }
        Ok(Self::reduced(prime, numerator, denominator))
    }

    fn reduced(prime: u64, numerator: UPolynomial, denominator: UPolynomial) -> Self {
        let g = numerator.gcd(&denominator);
        let (mut num, mut den) = if g.degree().unwrap_or(0) == 0 && g.coeff(0).abs().is_one() {
            (numerator, denominator)
        } else {
            (
                numerator.div_exact(&g).expect("gcd divides numerator"),
                denominator.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        if den.coeff(0).is_negative() {
            num = -num;
            den = -den;
        }
        Self {
            prime,
            numerator: num,
            denominator: den,
        }
    }

    /// The constant factor `1` at `prime`.
    pub fn one(prime: u64) -> Self {
        Self::summand(prime, UPolynomial::one(), UPolynomial::one()).expect("valid")
    }

    /// The additive zero at `prime` (a summand, not a zeta factor).
    pub fn zero(prime: u64) -> Self {
        Self::summand(prime, UPolynomial::zero(), UPolynomial::one()).expect("valid")
    }

    /// `(1 - c u^degree)^{-1}`
    pub fn geometric(prime: u64, c: BigInt, degree: usize) -> Self {
        assert!(degree > 0, "geometric factor needs positive degree");
        Self::summand(prime, UPolynomial::one(), UPolynomial::one_minus(c, degree))
            .expect("valid")
    }

    /// A polynomial factor `numerator / 1`.
    pub fn polynomial(prime: u64, numerator: UPolynomial) -> Result<Self, SeriesError> {
        Self::summand(prime, numerator, UPolynomial::one())
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn numerator(&self) -> &UPolynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &UPolynomial {
        &self.denominator
    }

    pub fn is_zeta_factor(&self) -> bool {
        !self.numerator.coeff(0).is_zero()
    }

    fn check_zeta_factor(&self) -> Result<(), SeriesError> {
        if self.is_zeta_factor() {
            Ok(())
        } else {
            Err(SeriesError::ZeroConstantTerm)
        }
    }

    fn same_prime(&self, other: &Self) -> Result<(), SeriesError> {
        if self.prime == other.prime {
            Ok(())
        } else {
            Err(SeriesError::PrimeMismatch(self.prime, other.prime))
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.same_prime(other)?;
        Ok(Self::reduced(
            self.prime,
            &self.numerator * &other.numerator,
            &self.denominator * &other.denominator,
        ))
    }

    /// Sum over a common denominator. Adding terms is how closed forms are
    /// assembled, so the result must again be a zeta factor.
    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        let sum = self.add_summand(other)?;
        sum.check_zeta_factor()?;
        Ok(sum)
    }

    /// Sum without the zeta-factor check on the result.
    pub fn add_summand(&self, other: &Self) -> Result<Self, SeriesError> {
        self.same_prime(other)?;
        let num = &(&self.numerator * &other.denominator) + &(&other.numerator * &self.denominator);
        Ok(Self::reduced(
            self.prime,
            num,
            &self.denominator * &other.denominator,
        ))
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::reduced(self.prime, self.numerator.scale(c), self.denominator.clone())
    }

    /// Multiplies the numerator by a polynomial in `u`.
    pub fn mul_poly(&self, poly: &UPolynomial) -> Self {
        Self::reduced(self.prime, &self.numerator * poly, self.denominator.clone())
    }

    pub fn pow(&self, k: u32) -> Self {
        Self::reduced(self.prime, self.numerator.pow(k), self.denominator.pow(k))
    }

    /// Power-series coefficients `c_0 .. c_k` of `numerator / denominator`.
    pub fn expand(&self, k: usize) -> Vec<BigInt> {
        let num = self.numerator.truncated(k);
        let den = self.denominator.coefficients();
        let mut out: Vec<BigInt> = Vec::with_capacity(k + 1);
        for i in 0..=k {
            let mut c = num[i].clone();
            for j in 1..den.len().min(i + 1) {
                c -= &den[j] * &out[i - j];
            }
            out.push(c);
        }
        out
    }
}

impl fmt::Debug for LocalFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LocalFactor(p={}: {self})", self.prime)
    }
}

impl fmt::Display for LocalFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator == UPolynomial::one() {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "({})/({})", self.numerator, self.denominator)
        }
    }
}

/// Truncated Dirichlet series `a_1 .. a_N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletCoefficients {
    values: Vec<BigInt>,
}

impl DirichletCoefficients {
    pub fn new(values: Vec<BigInt>) -> Result<Self, SeriesError> {
        if values.is_empty() {
            return Err(SeriesError::EmptyBound);
        }
        Ok(Self { values })
    }

    pub fn from_u64s(values: &[u64]) -> Result<Self, SeriesError> {
        Self::new(values.iter().map(|&v| BigInt::from(v)).collect())
    }

    /// The multiplicative identity `1, 0, 0, ...`.
    pub fn unit(bound: usize) -> Result<Self, SeriesError> {
        if bound == 0 {
            return Err(SeriesError::EmptyBound);
        }
        let mut values = vec![BigInt::zero(); bound];
        values[0] = BigInt::one();
        Ok(Self { values })
    }

    pub fn bound(&self) -> usize {
        self.values.len()
    }

    /// `a_n` for `1 <= n <= bound`.
    pub fn get(&self, n: usize) -> &BigInt {
        &self.values[n - 1]
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    /// Dirichlet convolution.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        if self.bound() != other.bound() {
            return Err(SeriesError::BoundMismatch(self.bound(), other.bound()));
        }
        let n = self.bound();
        let mut out = vec![BigInt::zero(); n];
        for d in 1..=n {
            let a = &self.values[d - 1];
            if a.is_zero() {
                continue;
            }
            for m in 1..=n / d {
                out[d * m - 1] += a * &other.values[m - 1];
            }
        }
        Ok(Self { values: out })
    }

    /// First coprime pair `(m, n)` with `mn <= bound` where
    /// `a_{mn} != a_m a_n`, if any.
    pub fn multiplicativity_violation(&self) -> Option<(usize, usize)> {
        let n = self.bound();
        for m in 2..=n {
            for k in m + 1..=n / m {
                if m.gcd(&k) == 1 && *self.get(m * k) != self.get(m) * self.get(k) {
                    return Some((m, k));
                }
            }
        }
        None
    }
}

/// Expands an Euler product up to `bound`, asking `factor_at` for the local
/// factor at each prime `p <= bound`.
pub fn euler_expand_by<F, E>(bound: usize, mut factor_at: F) -> Result<DirichletCoefficients, E>
where
    F: FnMut(u64) -> Result<LocalFactor, E>,
    E: From<SeriesError>,
{
    if bound == 0 {
        return Err(SeriesError::EmptyBound.into());
    }
    let mut local: HashMap<u64, Vec<BigInt>> = HashMap::new();
    for p in arith::primes_up_to(bound as u64) {
        let factor = factor_at(p)?;
        if factor.prime() != p {
            return Err(SeriesError::PrimeMismatch(p, factor.prime()).into());
        }
        let mut k = 0;
        let mut q = 1usize;
        while q * (p as usize) <= bound {
            q *= p as usize;
            k += 1;
        }
        local.insert(p, factor.expand(k));
    }
    let mut smallest = vec![0usize; bound + 1];
    for i in 2..=bound {
        if smallest[i] == 0 {
            for j in (i..=bound).step_by(i) {
                if smallest[j] == 0 {
                    smallest[j] = i;
                }
            }
        }
    }
    let mut values = vec![BigInt::zero(); bound];
    values[0] = BigInt::one();
    for n in 2..=bound {
        let p = smallest[n];
        let (mut m, mut k) = (n, 0);
        while m % p == 0 {
            m /= p;
            k += 1;
        }
        values[n - 1] = &values[m - 1] * &local[&(p as u64)][k];
    }
    Ok(DirichletCoefficients { values })
}

/// Expands the Euler product whose local factors are given explicitly for
/// every prime up to `bound`.
pub fn euler_expand(
    factors: &BTreeMap<u64, LocalFactor>,
    bound: usize,
) -> Result<DirichletCoefficients, SeriesError> {
    euler_expand_by(bound, |p| {
        factors.get(&p).cloned().ok_or(SeriesError::MissingPrime(p))
    })
}
