//! Squarefree decomposition, factorization over finite fields and root finding.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Embedding, Field, Value};
use crate::poly::Poly;

/// Trial division bound used when enumerating rational root candidates.
const TRIAL_DIVISION_CAP: u64 = 1 << 24;

/// Each random candidate splits with probability at least 1/2.
const EQUAL_DEGREE_TRIES: usize = 256;

fn nonzero(f: &Poly) -> Result<()> {
    if f.is_zero() {
        Err(Error::Precondition("zero polynomial".into()))
    } else {
        Ok(())
    }
}

/// Coefficientwise p-th root of a polynomial in `T^p`.
fn pth_root_poly(f: &Poly) -> Poly {
    let field = f.field();
    let p = field.characteristic() as usize;
    let c = f
        .coeffs()
        .iter()
        .step_by(p)
        .map(|c| field.pth_root(c))
        .collect();
    Poly::new(field, c)
}

/// Monic squarefree factors with multiplicities, `f = lc * prod g_i^{m_i}`.
pub fn squarefree_decomposition(f: &Poly) -> Result<Vec<(Poly, u32)>> {
    nonzero(f)?;
    let mut out = sqf_inner(&f.monic())?;
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.coeffs().cmp(b.0.coeffs())));
    Ok(out)
}

fn sqf_inner(f: &Poly) -> Result<Vec<(Poly, u32)>> {
    let field = f.field();
    let mut out = Vec::new();
    if f.is_constant() {
        return Ok(out);
    }
    let mut g = f.gcd(&f.derivative())?;
    let mut w = f.div_exact(&g).unwrap();
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&g)?;
        let z = w.div_exact(&y).unwrap();
        if !z.is_constant() {
            out.push((z, i));
        }
        i += 1;
        g = g.div_exact(&y).unwrap();
        w = y;
    }
    if !g.is_constant() {
        let p = field.characteristic();
        debug_assert!(p > 0);
        for (h, m) in sqf_inner(&pth_root_poly(&g))? {
            out.push((h, m * p));
        }
    }
    Ok(out)
}

/// The squarefree kernel (product of the distinct monic irreducible factors).
pub fn radical(f: &Poly) -> Result<Poly> {
    let field = f.field().clone();
    Ok(squarefree_decomposition(f)?
        .into_iter()
        .fold(Poly::one(&field), |acc, (g, _)| &acc * &g))
}

fn field_order(f: &Field) -> Result<BigUint> {
    f.order()
        .map(BigUint::from)
        .ok_or_else(|| Error::WrongCharacteristic("operation requires a finite field".into()))
}

/// Distinct-degree factorization of a monic squarefree polynomial over `F_q`.
pub fn distinct_degree(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    let q = field_order(f.field())?;
    let field = f.field().clone();
    let x = Poly::t(&field);
    let mut rest = f.monic();
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut i = 0usize;
    while rest.deg_i() >= 2 * (i as i64 + 1) {
        i += 1;
        h = h.powmod(&q, &rest)?;
        let g = (&h - &x).gcd(&rest)?;
        if !g.is_one() {
            rest = rest.div_exact(&g).unwrap();
            h = h.rem(&rest)?;
            out.push((g, i));
        }
    }
    if rest.deg_i() > 0 {
        let d = rest.degree().unwrap();
        out.push((rest, d));
    }
    Ok(out)
}

/// Splitting candidates of degree `< n` from a fixed-seed stream, so
/// factorizations are reproducible.
fn candidate(field: &Field, rng: &mut ChaCha8Rng, n: usize) -> Poly {
    let q = field.order().unwrap();
    let c = (0..n)
        .map(|_| field.element(rng.random_range(0..q)))
        .collect();
    Poly::new(field, c)
}

/// Equal-degree factorization of a monic squarefree `f` whose irreducible
/// factors all have degree `d`.
pub fn equal_degree(f: &Poly, d: usize) -> Result<Vec<Poly>> {
    let field = f.field().clone();
    let n = f.degree().unwrap_or(0);
    if n == d {
        return Ok(vec![f.monic()]);
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let q = field_order(&field)?;
    let p = field.characteristic();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ n as u64);
    for _ in 0..EQUAL_DEGREE_TRIES {
        let a = candidate(&field, &mut rng, n);
        if a.is_constant() {
            continue;
        }
        let b = if p == 2 {
            let k = field.degree() as usize * d;
            let mut acc = Poly::zero(&field);
            let mut term = a.rem(f)?;
            for _ in 0..k {
                acc = &acc + &term;
                term = (&term * &term).rem(f)?;
            }
            acc
        } else {
            let e = (q.pow(d as u32) - 1u32) / 2u32;
            &a.powmod(&e, f)? - &Poly::one(&field)
        };
        let g = b.gcd(f)?;
        if !g.is_one() && g.degree() != f.degree() {
            let h = f.div_exact(&g).unwrap();
            let mut out = equal_degree(&g, d)?;
            out.extend(equal_degree(&h, d)?);
            return Ok(out);
        }
    }
    Err(Error::Precondition(
        "equal-degree splitting did not terminate".into(),
    ))
}

/// Full factorization over `F_q`: monic irreducible factors with multiplicity.
pub fn factor(f: &Poly) -> Result<Vec<(Poly, u32)>> {
    nonzero(f)?;
    field_order(f.field())?;
    let mut out = Vec::new();
    for (s, m) in squarefree_decomposition(f)? {
        for (g, d) in distinct_degree(&s)? {
            for h in equal_degree(&g, d)? {
                out.push((h, m));
            }
        }
    }
    out.sort_by(|a, b| {
        a.0.deg_i()
            .cmp(&b.0.deg_i())
            .then_with(|| a.0.coeffs().cmp(b.0.coeffs()))
    });
    Ok(out)
}

/// Rabin's irreducibility test over `F_q`.
pub fn is_irreducible(f: &Poly) -> Result<bool> {
    let q = field_order(f.field())?;
    let Some(n) = f.degree() else {
        return Ok(false);
    };
    if n == 0 {
        return Ok(false);
    }
    if n == 1 {
        return Ok(true);
    }
    let f = f.monic();
    let x = Poly::t(f.field());
    let mut primes = Vec::new();
    let mut m = n;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            primes.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        primes.push(m);
    }
    // h_k = T^{q^k} mod f
    let mut powers = vec![x.clone()];
    for k in 1..=n {
        let next = powers[k - 1].powmod(&q, &f)?;
        powers.push(next);
    }
    if powers[n] != x.rem(&f)? {
        return Ok(false);
    }
    for l in primes {
        let g = (&powers[n / l] - &x).gcd(&f)?;
        if !g.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Roots in the coefficient field with multiplicities (sorted by value), and the
/// cofactor without roots in the field.
pub fn roots(f: &Poly) -> Result<(Vec<(Value, u32)>, Poly)> {
    nonzero(f)?;
    if f.field().is_rational() {
        return rational_roots(f);
    }
    let field = f.field().clone();
    let q = field_order(&field)?;
    let x = Poly::t(&field);
    let mut found = Vec::new();
    for (s, m) in squarefree_decomposition(f)? {
        let h = x.powmod(&q, &s)?;
        let g = (&h - &x).gcd(&s)?;
        for lin in equal_degree(&g, 1)? {
            found.push((field.neg(&lin.coeff(0)), m));
        }
    }
    found.sort();
    let mut rest = f.clone();
    for (r, m) in &found {
        let lin = Poly::linear(&field, r);
        for _ in 0..*m {
            rest = rest.div_exact(&lin).unwrap();
        }
    }
    Ok((found, rest))
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n == 0 {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if d > TRIAL_DIVISION_CAP {
            return None;
        }
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small.into_iter().map(BigInt::from).collect())
}

fn rational_roots(f: &Poly) -> Result<(Vec<(Value, u32)>, Poly)> {
    let field = f.field().clone();
    let mut found = Vec::new();
    let mut rest = f.clone();
    // Roots at zero first.
    let z = rest.low_order().unwrap_or(0);
    if z > 0 {
        found.push((field.zero(), z as u32));
        rest = rest.unshift(z);
    }
    for (s, m) in squarefree_decomposition(&rest)? {
        let lcm = s
            .coeffs()
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.rat().denom()));
        let ints: Vec<BigInt> = s
            .coeffs()
            .iter()
            .map(|c| (c.rat() * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let (Some(a0), Some(an)) = (divisors(&ints[0]), divisors(ints.last().unwrap())) else {
            continue;
        };
        let mut cur = s.clone();
        for p in &a0 {
            for q in &an {
                if !p.gcd(q).is_one() {
                    continue;
                }
                for sign in [1, -1] {
                    let r = Value::Rat(BigRational::new(p * sign, q.clone()));
                    if cur.deg_i() >= 1 && field.is_zero(&cur.eval(&r)) {
                        cur = cur.div_exact(&Poly::linear(&field, &r)).unwrap();
                        found.push((r, m));
                    }
                }
            }
        }
    }
    found.sort();
    for (r, m) in &found {
        if field.is_zero(r) {
            continue;
        }
        let lin = Poly::linear(&field, r);
        for _ in 0..*m {
            rest = rest.div_exact(&lin).unwrap();
        }
    }
    Ok((found, rest))
}

/// Smallest extension of the coefficient field of `f` over which `f` splits,
/// with the canonical embedding. Returns the field itself when `f` already splits.
pub fn extend_field(f: &Poly) -> Result<(Field, Embedding)> {
    let field = f.field().clone();
    let l = splitting_degree(f)?;
    if l == 1 {
        let e = field.embedding_into(&field)?;
        return Ok((field, e));
    }
    let big = Field::finite(field.characteristic(), field.degree() * l)?;
    let e = field.embedding_into(&big)?;
    Ok((big, e))
}

/// Degree of the splitting field of `f` over its finite base field.
pub fn splitting_degree(f: &Poly) -> Result<u32> {
    if f.field().is_rational() {
        return Err(Error::WrongCharacteristic(
            "splitting fields are only computed over finite fields".into(),
        ));
    }
    let mut l = 1u32;
    if !f.is_constant() {
        for (s, _) in squarefree_decomposition(f)? {
            for (_, d) in distinct_degree(&s)? {
                l = l.lcm(&(d as u32));
            }
        }
    }
    Ok(l)
}

/// Integer content helper: `true` when every coefficient of `f` over `Q` is an integer.
pub fn is_integral(f: &Poly) -> bool {
    f.coeffs().iter().all(|c| match c {
        Value::Rat(q) => q.is_integer(),
        Value::Fin(_) => true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squarefree_in_char_p() {
        let f = Field::prime(3).unwrap();
        // (T+1)^3 (T+2)^2 T
        let a = &(&Poly::from_i64s(&f, &[1, 1]).pow(3) * &Poly::from_i64s(&f, &[2, 1]).pow(2))
            * &Poly::t(&f);
        let d = squarefree_decomposition(&a).unwrap();
        assert_eq!(
            d,
            vec![
                (Poly::t(&f), 1),
                (Poly::from_i64s(&f, &[2, 1]), 2),
                (Poly::from_i64s(&f, &[1, 1]), 3)
            ]
        );
    }

    #[test]
    fn factor_over_f2() {
        let f = Field::prime(2).unwrap();
        // T^4 + T = T (T+1) (T^2+T+1)
        let a = Poly::from_i64s(&f, &[0, 1, 0, 0, 1]);
        let fs = factor(&a).unwrap();
        assert_eq!(fs.len(), 3);
        assert_eq!(fs[2].0, Poly::from_i64s(&f, &[1, 1, 1]));
    }

    #[test]
    fn roots_over_f9() {
        let f9 = Field::finite(3, 2).unwrap();
        // T^2 + 1 splits over F_9
        let a = Poly::from_i64s(&f9, &[1, 0, 1]);
        let (r, rest) = roots(&a).unwrap();
        assert_eq!(r.len(), 2);
        assert!(rest.is_constant());
        for (x, _) in r {
            assert!(f9.is_zero(&a.eval(&x)));
        }
    }

    #[test]
    fn rational_roots_found() {
        let q = Field::rationals();
        // (2T - 3)(T + 1)^2 (T^2 + 1)
        let a = &(&Poly::from_i64s(&q, &[-3, 2]) * &Poly::from_i64s(&q, &[1, 1]).pow(2))
            * &Poly::from_i64s(&q, &[1, 0, 1]);
        let (r, rest) = roots(&a).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(rest.monic(), Poly::from_i64s(&q, &[1, 0, 1]));
    }

    #[test]
    fn splitting_field_of_cubic() {
        let f2 = Field::prime(2).unwrap();
        let (big, _) = extend_field(&Poly::from_i64s(&f2, &[1, 0, 0, 1])).unwrap();
        assert_eq!(big.order(), Some(4));
        let q = Field::prime(2).unwrap();
        let (big, _) = extend_field(&Poly::from_i64s(&q, &[1, 1, 1, 1, 1, 1, 1])).unwrap();
        // T^6+...+1 = (T^7 - 1)/(T - 1): cubic factors
        assert_eq!(big.order(), Some(8));
    }
}
