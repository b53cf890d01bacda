//! Small integer helpers: primality, factorization, valuations and
//! multiplicative orders. Everything here works on machine words; the
//! quantities involved (primes, series bounds, scheme orders) stay small.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// All primes `p <= bound`, ascending.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(k, &p)| p.then_some(k as u64))
        .collect()
}

/// Prime factorization as ascending `(prime, exponent)` pairs. `factorize(1)` is empty.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "cannot factor zero");
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut k = 0;
            while n.is_multiple_of(d) {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// Exponent of `p` in `n` (`n > 0`).
pub fn valuation(mut n: u64, p: u64) -> u32 {
    assert!(n > 0 && p > 1);
    let mut k = 0;
    while n.is_multiple_of(p) {
        n /= p;
        k += 1;
    }
    k
}

/// If `n = p^k` for a prime `p` and `k >= 1`, returns `(p, k)`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    match factorize(n).as_slice() {
        [(p, k)] => Some((*p, *k)),
        _ => None,
    }
}

/// Multiplicative order of `a` modulo `m`; requires `gcd(a, m) = 1` and `m > 1`.
pub fn multiplicative_order(a: u64, m: u64) -> u64 {
    assert!(m > 1 && a.gcd(&m) == 1);
    let a = a % m;
    let mut x = a;
    let mut k = 1;
    while x != 1 {
        x = x * a % m;
        k += 1;
    }
    k
}

/// Distinct prime divisors of a nonzero big integer, by trial division.
pub fn big_prime_divisors(n: &BigInt) -> Vec<u64> {
    assert!(!n.is_zero());
    let mut rest = n.abs();
    let mut out = Vec::new();
    let mut d: u64 = 2;
    loop {
        if let Some(r) = rest.to_u64() {
            if d.saturating_mul(d) > r {
                if r > 1 {
                    out.push(r);
                }
                return out;
            }
        }
        let big_d = BigInt::from(d);
        if (&rest % &big_d).is_zero() {
            out.push(d);
            while (&rest % &big_d).is_zero() {
                rest /= &big_d;
            }
            if rest.is_one() {
                return out;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
}

pub fn pow_big(base: u64, exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}
