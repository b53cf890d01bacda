//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Every comparison is exact integer equality.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use orderzeta::arith;
use orderzeta::catalog::{
    cp_catalog, global_zeta, rank2_catalog, tensor_global_zeta, Construction, GlobalZeta,
};
use orderzeta::fields::{dedekind_product_local, NumberField};
use orderzeta::local::{rank2_ideal_count, rank2_local, rank2_scheme_local};
use orderzeta::oracle::{count_left_ideals, enumerate_sublattices, ideal_series};
use orderzeta::series::euler_expand_by;
use orderzeta::{
    AssociationScheme, DirichletCoefficients, IntegralOrder, LocalFactor, PadicRing, UPolynomial,
    Valuation,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

fn ring(p: u64, e: u64, f: u64) -> PadicRing {
    PadicRing::new(p, e, f).expect("valid ring")
}

fn poly(coeffs: &[i64]) -> UPolynomial {
    UPolynomial::from_i64s(coeffs)
}

// Plain truncated power series in u, kept apart from the library's
// rational-function code.

fn ps_mul(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `1 / (1 - c u^d)` truncated to `len` terms.
fn ps_geometric(c: &BigInt, d: usize, len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    let mut term = BigInt::one();
    let mut i = 0;
    while i < len {
        out[i] = term.clone();
        term *= c;
        i += d;
    }
    out
}

fn ps_poly(coeffs: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (i, c) in coeffs.iter().enumerate().take(len) {
        out[i] = c.clone();
    }
    out
}

fn first_difference(a: &DirichletCoefficients, b: &DirichletCoefficients) -> Option<usize> {
    (1..=a.bound().min(b.bound())).find(|&n| a.get(n) != b.get(n))
}

fn check_series(label: &str, formula: &DirichletCoefficients, census: &DirichletCoefficients) -> Result<(), String> {
    match first_difference(formula, census) {
        None => Ok(()),
        Some(n) => Err(format!(
            "{label}: first mismatch at n = {n}: formula {} vs census {}",
            formula.get(n),
            census.get(n)
        )),
    }
}

fn check_at(
    label: &str,
    formula: &DirichletCoefficients,
    order: &IntegralOrder,
    indices: &[u64],
) -> Result<(), String> {
    for &n in indices {
        let census = big(count_left_ideals(order, n));
        if *formula.get(n as usize) != census {
            return Err(format!(
                "{label}: mismatch at n = {n}: formula {} vs census {census}",
                formula.get(n as usize)
            ));
        }
    }
    Ok(())
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn criterion_1() -> Outcome {
    let mut checked = 0;
    for n in [2i64, 3, 4, 6] {
        let order = IntegralOrder::quadratic(n);
        for p in arith::prime_divisors(n as u64) {
            let kmax = if p == 2 { 5 } else { 3 };
            let expected = rank2_local(ring(p, 1, 1), Valuation::of(n as u64, p)).expand(kmax);
            for k in 0..=kmax {
                let census = big(count_left_ideals(&order, p.pow(k as u32)));
                if census != expected[k] {
                    return Err(format!(
                        "Z[x]/(x^2 - {n}x) at {p}^{k}: census {census} vs formula {}",
                        expected[k]
                    ));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} prime-power indices"))
}

fn criterion_2() -> Outcome {
    let order = IntegralOrder::quadratic(0);
    for p in [2u64, 3] {
        let displayed = ps_mul(
            &ps_geometric(&big(p), 2, 6),
            &ps_geometric(&BigInt::one(), 1, 6),
            6,
        );
        let formula = rank2_local(ring(p, 1, 1), Valuation::Infinite).expand(5);
        if formula != displayed {
            return Err(format!("p = {p}: closed form {formula:?} vs displayed {displayed:?}"));
        }
        for k in 0..=5u32 {
            let census = big(count_left_ideals(&order, p.pow(k)));
            if census != displayed[k as usize] {
                return Err(format!(
                    "Z[x]/(x^2) at {p}^{k}: census {census} vs {}",
                    displayed[k as usize]
                ));
            }
        }
    }
    Ok("p in {2, 3}, k <= 5".to_string())
}

fn criterion_3() -> Outcome {
    let vals = [
        Valuation::Finite(0),
        Valuation::Finite(1),
        Valuation::Finite(2),
        Valuation::Infinite,
    ];
    let mut cells = 0;
    for p in [2u64, 3] {
        for e in [1u64, 2] {
            for f in [1u64, 2] {
                let r = ring(p, e, f);
                for val in vals {
                    let coeffs = rank2_local(r, val).expand(6 * f as usize);
                    for (idx, c) in coeffs.iter().enumerate() {
                        if idx % f as usize != 0 {
                            if !c.is_zero() {
                                return Err(format!("{r} {val:?}: nonzero coefficient at u^{idx}"));
                            }
                            continue;
                        }
                        let kk = idx as u64 / f;
                        let sum: BigInt = (0..=kk).map(|r1| rank2_ideal_count(r, val, r1, kk - r1)).sum();
                        if sum != *c {
                            return Err(format!(
                                "{r} {val:?} K = {kk}: ideal counts sum to {sum}, expansion gives {c}"
                            ));
                        }
                        cells += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{cells} grid cells"))
}

fn criterion_4() -> Outcome {
    for p in [2u64, 3] {
        let entry = cp_catalog(p).map_err(err)?;
        let formula = global_zeta(&entry).map_err(err)?.expand(20).map_err(err)?;
        let census = ideal_series(&entry.order, 20, false);
        check_series(&format!("Z C_{p}"), &formula, &census)?;
    }
    let entry = cp_catalog(5).map_err(err)?;
    let formula = global_zeta(&entry).map_err(err)?.expand(25).map_err(err)?;
    check_at("Z C_5", &formula, &entry.order, &[2, 4, 8, 16, 3, 9, 5, 25])?;
    Ok("C_2, C_3 to N = 20; C_5 at prime powers".to_string())
}

/// The ZC_6 formula exactly as displayed: `(1 - u + 3u^2)(1 - u^2 + 9u^4)`
/// at 3 and `(1 - u + 2u^2)^2` at 2, times the Dedekind factors.
fn displayed_zc6(components: &[(NumberField, u32)]) -> Result<GlobalZeta, String> {
    let at3 = dedekind_product_local(components, 3)
        .map_err(err)?
        .mul_poly(&(poly(&[1, -1, 3]) * poly(&[1, 0, -1, 0, 9])));
    let at2 = dedekind_product_local(components, 2)
        .map_err(err)?
        .mul_poly(&poly(&[1, -1, 2]).pow(2));
    GlobalZeta::new(
        components.iter().copied(),
        [(2, at2), (3, at3)].into_iter().collect(),
    )
    .map_err(err)
}

fn criterion_5() -> Outcome {
    let z = tensor_global_zeta(&cp_catalog(3).map_err(err)?, &rank2_catalog(2).map_err(err)?)
        .map_err(err)?;
    let formula = z.expand(12).map_err(err)?;

    let c2 = AssociationScheme::cyclic_group(2).map_err(err)?;
    let c3 = AssociationScheme::cyclic_group(3).map_err(err)?;
    let product = IntegralOrder::from_scheme(&c2.direct_product(&c3));
    let cyclic6 = IntegralOrder::from_scheme(&AssociationScheme::cyclic_group(6).map_err(err)?);
    check_series("Z[C_2 x C_3]", &formula, &ideal_series(&product, 12, false))?;
    let census = ideal_series(&cyclic6, 12, false);
    check_series("Z C_6", &formula, &census)?;

    let components = z.components();
    let at2 = dedekind_product_local(components, 2)
        .map_err(err)?
        .mul_poly(&(poly(&[1, -1, 2]) * poly(&[1, 0, -1, 0, 4])));
    let at3 = dedekind_product_local(components, 3)
        .map_err(err)?
        .mul_poly(&poly(&[1, -1, 3]).pow(2));
    if z.local_factor(2).map_err(err)? != at2 || z.local_factor(3).map_err(err)? != at3 {
        return Err("corrections are not (f = 2 at 2, squared f = 1 at 3)".to_string());
    }

    let displayed = displayed_zc6(components)?.expand(12).map_err(err)?;
    match first_difference(&displayed, &census) {
        None => Err("the displayed variant also matches the census; no adjudication".to_string()),
        Some(n) => Ok(format!(
            "n <= 12 on both rank-6 orders; displayed variant fails at n = {n} ({} vs census {})",
            displayed.get(n),
            census.get(n)
        )),
    }
}

/// `Σ_{r<v} p^r u^{2r} (1 - u) + p^v u^{2v}`, the simplified bracket.
fn bracket_simplified(p: u64, v: u32) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); 2 * v as usize + 1];
    for r in 0..v {
        let c = num_traits::pow(big(p), r as usize);
        out[2 * r as usize] += &c;
        out[2 * r as usize + 1] -= &c;
    }
    out[2 * v as usize] += num_traits::pow(big(p), v as usize);
    out
}

/// The unsimplified bracket: `(Σ_{r<v} p^r u^{2r} (1-u)^{-1} + p^v u^{2v} (1-u)^{-2}) (1-u)^2`.
fn bracket_unsimplified(p: u64, v: u32, len: usize) -> Vec<BigInt> {
    let one = BigInt::one();
    let inv1 = ps_geometric(&one, 1, len);
    let inv2 = ps_mul(&inv1, &inv1, len);
    let mut total = vec![BigInt::zero(); len];
    for r in 0..v {
        let mut mono = vec![BigInt::zero(); 2 * r as usize + 1];
        mono[2 * r as usize] = num_traits::pow(big(p), r as usize);
        for (t, x) in total.iter_mut().zip(ps_mul(&ps_poly(&mono, len), &inv1, len)) {
            *t += x;
        }
    }
    let mut mono = vec![BigInt::zero(); 2 * v as usize + 1];
    mono[2 * v as usize] = num_traits::pow(big(p), v as usize);
    for (t, x) in total.iter_mut().zip(ps_mul(&ps_poly(&mono, len), &inv2, len)) {
        *t += x;
    }
    let square = ps_poly(&[big(1), -big(2), big(1)], len);
    ps_mul(&total, &square, len)
}

fn criterion_6() -> Outcome {
    let (m, n, bound) = (2u64, 3u64, 16usize);
    let z = tensor_global_zeta(&rank2_catalog(m).map_err(err)?, &rank2_catalog(n).map_err(err)?)
        .map_err(err)?;
    let formula = z.expand(bound).map_err(err)?;

    let k2 = AssociationScheme::complete_graph(m as usize).map_err(err)?;
    let k3 = AssociationScheme::complete_graph(n as usize).map_err(err)?;
    let order = IntegralOrder::from_scheme(&k2.direct_product(&k3));
    check_series("Z[K_2 x K_3]", &formula, &ideal_series(&order, bound, false))?;

    let len = 64 - (bound as u64).leading_zeros() as usize + 1;
    for p in arith::prime_divisors(m * n) {
        let v = arith::valuation(m * n, p);
        if ps_poly(&bracket_simplified(p, v), len) != bracket_unsimplified(p, v, len) {
            return Err(format!("the two displayed brackets differ at p = {p}"));
        }
    }
    // ζ(s)^4 × ∏_{p | mn} bracket_p(u)^2, expanded prime by prime
    let transcribed = euler_expand_by(bound, |p| {
        let mut series = ps_geometric(&BigInt::one(), 1, len);
        series = ps_mul(&series, &series, len);
        series = ps_mul(&series, &series, len);
        let v = arith::valuation(m * n, p);
        if v > 0 {
            let bracket = ps_poly(&bracket_simplified(p, v), len);
            series = ps_mul(&series, &ps_mul(&bracket, &bracket, len), len);
        }
        // a polynomial truncated past u^len reproduces every coefficient used
        LocalFactor::polynomial(p, UPolynomial::new(series))
    })
    .map_err(err)?;
    check_series("displayed product", &formula, &transcribed)?;
    Ok("census n <= 16 and displayed product".to_string())
}

fn criterion_7() -> Outcome {
    let a = cp_catalog(3).map_err(err)?;
    let b = rank2_catalog(2).map_err(err)?;
    let formula = Construction::CpXKn(3, 2).zeta().map_err(err)?.expand(9).map_err(err)?;
    let direct = tensor_global_zeta(&a, &b).map_err(err)?.expand(9).map_err(err)?;
    check_series("construction vs tensor", &formula, &direct)?;
    check_at("Z[C_3 x K_2]", &formula, &a.order.tensor(&b.order), &[2, 4, 8, 3, 9])?;
    Ok("indices 2, 4, 8, 3, 9".to_string())
}

fn criterion_8() -> Outcome {
    let factor = rank2_scheme_local(ring(2, 1, 2), 2).map_err(err)?;
    let expected = LocalFactor::new(2, poly(&[1, 0, -1, 0, 4]), poly(&[1, 0, -2, 0, 1])).map_err(err)?;
    if factor != expected {
        return Err(format!("rank-2 rule over (2, 1, 2) is {factor}"));
    }
    let z = Construction::Zc6.zeta().map_err(err)?;
    let formula = z.expand(16).map_err(err)?;
    let displayed = displayed_zc6(z.components())?.expand(16).map_err(err)?;
    let order = Construction::Zc6.order().map_err(err)?;
    let mut displayed_fails = Vec::new();
    for k in 1..=4u32 {
        let n = 2u64.pow(k);
        let census = big(count_left_ideals(&order, n));
        if *formula.get(n as usize) != census {
            return Err(format!("Z C_6 at {n}: formula {} vs census {census}", formula.get(n as usize)));
        }
        if *displayed.get(n as usize) != census {
            displayed_fails.push(n);
        }
    }
    if !displayed_fails.contains(&16) {
        return Err("the displayed variant is not separated from the census at 16".to_string());
    }
    Ok(format!("census at 2^k, k <= 4; displayed variant fails at {displayed_fails:?}"))
}

fn criterion_9() -> Outcome {
    let constructions = [
        Construction::Cp(2),
        Construction::Cp(3),
        Construction::Cp(7),
        Construction::Kn(12),
        Construction::CpXKn(5, 6),
        Construction::KmXKn(4, 9),
        Construction::Zc6,
        Construction::Rank2Over(6, NumberField::CyclotomicPrime(5)),
    ];
    for c in &constructions {
        let series = c.zeta().map_err(err)?.expand(300).map_err(err)?;
        if let Some((m, n)) = series.multiplicativity_violation() {
            return Err(format!("{}: a_{{mn}} != a_m a_n at m = {m}, n = {n}", c.name()));
        }
    }

    for rank in 1..=4usize {
        for p in [2u64, 3] {
            let mut expected = ps_geometric(&BigInt::one(), 1, 5);
            for j in 1..rank {
                expected = ps_mul(&expected, &ps_geometric(&num_traits::pow(big(p), j), 1, 5), 5);
            }
            for k in 0..=4u32 {
                let count = big(enumerate_sublattices(rank, p.pow(k)).count() as u64);
                if count != expected[k as usize] {
                    return Err(format!(
                        "Z^{rank} at index {p}^{k}: {count} sublattices vs {}",
                        expected[k as usize]
                    ));
                }
            }
        }
    }

    let schemes = [
        AssociationScheme::trivial(),
        AssociationScheme::complete_graph(5).map_err(err)?,
        AssociationScheme::cyclic_group(4).map_err(err)?,
        AssociationScheme::cyclic_group(3)
            .map_err(err)?
            .direct_product(&AssociationScheme::complete_graph(2).map_err(err)?),
    ];
    for s in &schemes {
        let back = AssociationScheme::from_json(&s.to_json()).map_err(err)?;
        if &back != s {
            return Err(format!("round trip changed a scheme of order {}", s.size()));
        }
    }
    for a in &schemes {
        for b in &schemes {
            let via_scheme = IntegralOrder::from_scheme(&a.direct_product(b));
            let via_tensor = IntegralOrder::from_scheme(a).tensor(&IntegralOrder::from_scheme(b));
            if via_scheme != via_tensor {
                return Err(format!(
                    "product of schemes of orders {} and {} disagrees with the tensor order",
                    a.size(),
                    b.size()
                ));
            }
        }
    }
    Ok("multiplicativity, sublattice counts, round trips, product tables".to_string())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("rank-2 orders, finite valuation", criterion_1),
        ("Z[x]/(x^2)", criterion_2),
        ("ideal-count identity grid", criterion_3),
        ("Solomon Z C_p", criterion_4),
        ("Z C_6 assembly", criterion_5),
        ("Z[K_2 x K_3]", criterion_6),
        ("Z[C_3 x K_2]", criterion_7),
        ("rank-2 rule over an unramified quadratic ring", criterion_8),
        ("property suites", criterion_9),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail}) [{secs:.1}s]", i + 1),
            Err(reason) => {
                failures += 1;
                println!("criterion {}: FAIL  {name}: {reason} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
