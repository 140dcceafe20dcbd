//! Exact coefficient fields: the rationals and finite fields `F_{p^n}`.
//!
//! A [`Field`] is a cheap, shareable handle. Elements are stored as bare
//! [`Value`]s inside polynomials and wrapped with their field as
//! [`FieldElem`] at API boundaries.
//!
//! Finite field elements are encoded as integers in `[0, q)`: the base-`p`
//! digits of the code are the coefficients of the residue polynomial in the
//! generator `z`, lowest degree first. Prime-field elements are therefore
//! their own residues, and the prime subfield of every extension is the set
//! of codes `0..p`.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;

/// Largest finite field order supported by the table-driven arithmetic.
pub const MAX_FIELD_ORDER: u64 = 1 << 22;

/// Raw element value; meaningful only together with its [`Field`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Rat(BigRational),
    Fin(u32),
}

#[derive(Debug)]
struct FiniteField {
    p: u32,
    degree: u32,
    order: u32,
    /// Monic modulus over `F_p`, lowest degree first (length `degree + 1`).
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

#[derive(Debug)]
enum Kind {
    Rational,
    Finite(FiniteField),
}

/// Descriptor of a coefficient field.
#[derive(Clone)]
pub struct Field(Arc<Kind>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        match (&*self.0, &*other.0) {
            (Kind::Rational, Kind::Rational) => true,
            (Kind::Finite(a), Kind::Finite(b)) => a.p == b.p && a.modulus == b.modulus,
            _ => false,
        }
    }
}

impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &*self.0 {
            Kind::Rational => 0u32.hash(state),
            Kind::Finite(f) => {
                f.p.hash(state);
                f.modulus.hash(state);
            }
        }
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Kind::Rational => write!(f, "Q"),
            Kind::Finite(ff) if ff.degree == 1 => write!(f, "F_{}", ff.p),
            Kind::Finite(ff) => {
                let m = self.format_digits(&ff.modulus, "z");
                write!(f, "F_{}^{} = F_{}[z]/({})", ff.p, ff.degree, ff.p, m)
            }
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl FiniteField {
    fn digits(&self, mut a: u32) -> Vec<u32> {
        let mut d = Vec::with_capacity(self.degree as usize);
        for _ in 0..self.degree {
            d.push(a % self.p);
            a /= self.p;
        }
        d
    }

    fn encode(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &x| acc * self.p + x)
    }

    /// Schoolbook product of residues modulo the defining polynomial; only
    /// used to build the log tables.
    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let n = self.degree as usize;
        let p = self.p as u64;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * n];
        for i in 0..n {
            for j in 0..n {
                prod[i + j] = (prod[i + j] + da[i] as u64 * db[j] as u64) % p;
            }
        }
        for k in (n..2 * n).rev() {
            let c = prod[k];
            if c != 0 {
                for (i, &m) in self.modulus[..n].iter().enumerate() {
                    let idx = k - n + i;
                    prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
                }
                prod[k] = 0;
            }
        }
        let d: Vec<u32> = prod[..n].iter().map(|&x| x as u32).collect();
        self.encode(&d)
    }

    fn slow_pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            base = self.slow_mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn build(p: u32, modulus: Vec<u32>) -> Result<FiniteField> {
        let degree = (modulus.len() - 1) as u32;
        let order = (p as u64).pow(degree);
        if order > MAX_FIELD_ORDER {
            return Err(Error::Unsupported(format!(
                "field of order {order} exceeds the supported maximum {MAX_FIELD_ORDER}"
            )));
        }
        let order = order as u32;
        let mut ff = FiniteField {
            p,
            degree,
            order,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
        };
        let group = (order - 1) as u64;
        let factors = prime_factors(group);
        let generator = (1..order)
            .find(|&g| factors.iter().all(|&l| ff.slow_pow(g, group / l) != 1))
            .ok_or_else(|| Error::InvalidField("modulus is not irreducible".into()))?;
        let mut exp = vec![0u32; 2 * group.max(1) as usize];
        let mut log = vec![0u32; order as usize];
        let mut x = 1u32;
        for k in 0..group as usize {
            exp[k] = x;
            log[x as usize] = k as u32;
            x = ff.slow_mul(x, generator);
        }
        if x != 1 {
            return Err(Error::InvalidField("modulus is not irreducible".into()));
        }
        for k in group as usize..exp.len() {
            exp[k] = exp[k - group as usize];
        }
        ff.exp = exp;
        ff.log = log;
        Ok(ff)
    }

    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.degree == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        let (mut a, mut b, mut out, mut place) = (a, b, 0u32, 1u32);
        while a > 0 || b > 0 {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * place;
            place *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    #[inline]
    fn neg(&self, a: u32) -> u32 {
        if self.p == 2 || a == 0 {
            return a;
        }
        if self.degree == 1 {
            return self.p - a;
        }
        let (mut a, mut out, mut place) = (a, 0u32, 1u32);
        while a > 0 {
            let d = (self.p - a % self.p) % self.p;
            out += d * place;
            place *= self.p;
            a /= self.p;
        }
        out
    }

    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let group = self.order - 1;
        Some(self.exp[((group - self.log[a as usize]) % group) as usize])
    }

    fn pow(&self, a: u32, e: &BigUint) -> u32 {
        if e.is_zero() {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let group = BigUint::from(self.order - 1);
        let k = (BigUint::from(self.log[a as usize]) * (e % &group)) % &group;
        self.exp[k.to_usize().unwrap()]
    }

    fn pth_root(&self, a: u32) -> u32 {
        if a == 0 {
            return 0;
        }
        // a^(p^(n-1)) inverts Frobenius.
        let e = BigUint::from(self.p).pow(self.degree - 1);
        self.pow(a, &e)
    }
}

impl Field {
    pub fn rationals() -> Field {
        Field(Arc::new(Kind::Rational))
    }

    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Ok(Field(Arc::new(Kind::Finite(FiniteField::build(
            p,
            vec![0, 1],
        )?))))
    }

    /// `F_p[z]/(modulus)`; the modulus (coefficients over `F_p`, lowest
    /// degree first) must be monic and irreducible.
    pub fn extension(p: u32, modulus: &[u32]) -> Result<Field> {
        let base = Field::prime(p)?;
        let m: Vec<u32> = modulus.iter().map(|&c| c % p).collect();
        let poly = Poly::new(&base, m.iter().map(|&c| Value::Fin(c)).collect());
        let deg = poly
            .degree()
            .ok_or_else(|| Error::InvalidField("zero modulus".into()))?;
        if deg == 0 {
            return Err(Error::InvalidField("constant modulus".into()));
        }
        if poly.lead() != Value::Fin(1) {
            return Err(Error::InvalidField("modulus is not monic".into()));
        }
        if deg == 1 {
            return Ok(base);
        }
        if !crate::factor::is_irreducible(&poly)? {
            return Err(Error::InvalidField(format!(
                "modulus {poly} is not irreducible over F_{p}"
            )));
        }
        let m: Vec<u32> = poly.coeffs().iter().map(|v| v.fin()).collect();
        Ok(Field(Arc::new(Kind::Finite(FiniteField::build(p, m)?))))
    }

    /// `F_{p^n}` with the first monic irreducible modulus of degree `n`
    /// in the order of the encoded lower coefficients.
    pub fn finite(p: u32, n: u32) -> Result<Field> {
        if n == 0 {
            return Err(Error::InvalidField("extension degree 0".into()));
        }
        if n == 1 {
            return Field::prime(p);
        }
        if (p as u64)
            .checked_pow(n)
            .is_none_or(|q| q > MAX_FIELD_ORDER)
        {
            return Err(Error::Unsupported(format!(
                "field F_{p}^{n} exceeds the supported maximum order {MAX_FIELD_ORDER}"
            )));
        }
        let base = Field::prime(p)?;
        let count = (p as u64).pow(n);
        for code in 1..count {
            let mut c = Vec::with_capacity(n as usize + 1);
            let mut x = code;
            for _ in 0..n {
                c.push((x % p as u64) as u32);
                x /= p as u64;
            }
            c.push(1);
            let poly = Poly::new(&base, c.iter().map(|&v| Value::Fin(v)).collect());
            if crate::factor::is_irreducible(&poly)? {
                return Ok(Field(Arc::new(Kind::Finite(FiniteField::build(p, c)?))));
            }
        }
        Err(Error::InvalidField(format!(
            "no irreducible of degree {n} over F_{p}"
        )))
    }

    fn ff(&self) -> Option<&FiniteField> {
        match &*self.0 {
            Kind::Finite(f) => Some(f),
            Kind::Rational => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(&*self.0, Kind::Rational)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_rational()
    }

    pub fn characteristic(&self) -> u32 {
        self.ff().map_or(0, |f| f.p)
    }

    /// Degree over the prime field (1 for `Q`).
    pub fn degree(&self) -> u32 {
        self.ff().map_or(1, |f| f.degree)
    }

    pub fn order(&self) -> Option<u64> {
        self.ff().map(|f| f.order as u64)
    }

    /// Modulus coefficients over `F_p`, lowest first (`None` for `Q` and prime fields).
    pub fn extension_modulus(&self) -> Option<Vec<u32>> {
        self.ff()
            .filter(|f| f.degree > 1)
            .map(|f| f.modulus.clone())
    }

    /// The prime subfield (`Q` for `Q`).
    pub fn prime_field(&self) -> Field {
        match self.ff() {
            None => self.clone(),
            Some(f) if f.degree == 1 => self.clone(),
            Some(f) => Field::prime(f.p).expect("characteristic is prime"),
        }
    }

    pub fn zero(&self) -> Value {
        match &*self.0 {
            Kind::Rational => Value::Rat(BigRational::zero()),
            Kind::Finite(_) => Value::Fin(0),
        }
    }

    pub fn one(&self) -> Value {
        match &*self.0 {
            Kind::Rational => Value::Rat(BigRational::one()),
            Kind::Finite(_) => Value::Fin(1),
        }
    }

    pub fn from_i64(&self, n: i64) -> Value {
        match self.ff() {
            None => Value::Rat(BigRational::from_integer(BigInt::from(n))),
            Some(f) => Value::Fin(n.rem_euclid(f.p as i64) as u32),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Value {
        match self.ff() {
            None => Value::Rat(BigRational::from_integer(n.clone())),
            Some(f) => {
                let r = n.mod_floor(&BigInt::from(f.p));
                Value::Fin(r.to_u32().unwrap())
            }
        }
    }

    /// Image of a rational number; fails when the denominator vanishes mod p.
    pub fn from_rational(&self, q: &BigRational) -> Result<Value> {
        match self.ff() {
            None => Ok(Value::Rat(q.clone())),
            Some(f) => {
                let den = self.from_bigint(q.denom());
                if self.is_zero(&den) {
                    return Err(Error::BadPrime {
                        p: f.p,
                        reason: format!("denominator of {q} is divisible by {}", f.p),
                    });
                }
                let num = self.from_bigint(q.numer());
                self.div(&num, &den)
            }
        }
    }

    /// Element with code `index` (finite fields only); `0..order` enumerates the field.
    pub fn element(&self, index: u64) -> Value {
        match self.ff() {
            Some(f) => {
                assert!(index < f.order as u64, "element index out of range");
                Value::Fin(index as u32)
            }
            None => Value::Rat(BigRational::from_integer(BigInt::from(index))),
        }
    }

    /// The generator `z` of `F_p[z]/(m)`.
    pub fn generator(&self) -> Option<Value> {
        self.ff().filter(|f| f.degree > 1).map(|f| Value::Fin(f.p))
    }

    /// All elements of a finite field, in code order.
    pub fn elements(&self) -> Vec<Value> {
        match self.ff() {
            Some(f) => (0..f.order).map(Value::Fin).collect(),
            None => panic!("elements() called on Q"),
        }
    }

    pub fn is_zero(&self, a: &Value) -> bool {
        match a {
            Value::Rat(q) => q.is_zero(),
            Value::Fin(x) => *x == 0,
        }
    }

    pub fn is_one(&self, a: &Value) -> bool {
        match a {
            Value::Rat(q) => q.is_one(),
            Value::Fin(x) => *x == 1,
        }
    }

    #[inline]
    pub fn add(&self, a: &Value, b: &Value) -> Value {
        match (a, b) {
            (Value::Fin(x), Value::Fin(y)) => Value::Fin(self.ff().unwrap().add(*x, *y)),
            (Value::Rat(x), Value::Rat(y)) => Value::Rat(x + y),
            _ => panic!("mixed element kinds"),
        }
    }

    #[inline]
    pub fn neg(&self, a: &Value) -> Value {
        match a {
            Value::Fin(x) => Value::Fin(self.ff().unwrap().neg(*x)),
            Value::Rat(x) => Value::Rat(-x),
        }
    }

    #[inline]
    pub fn sub(&self, a: &Value, b: &Value) -> Value {
        match (a, b) {
            (Value::Fin(x), Value::Fin(y)) => {
                let f = self.ff().unwrap();
                Value::Fin(f.add(*x, f.neg(*y)))
            }
            (Value::Rat(x), Value::Rat(y)) => Value::Rat(x - y),
            _ => panic!("mixed element kinds"),
        }
    }

    #[inline]
    pub fn mul(&self, a: &Value, b: &Value) -> Value {
        match (a, b) {
            (Value::Fin(x), Value::Fin(y)) => Value::Fin(self.ff().unwrap().mul(*x, *y)),
            (Value::Rat(x), Value::Rat(y)) => Value::Rat(x * y),
            _ => panic!("mixed element kinds"),
        }
    }

    pub fn inv(&self, a: &Value) -> Result<Value> {
        match a {
            Value::Fin(x) => self
                .ff()
                .unwrap()
                .inv(*x)
                .map(Value::Fin)
                .ok_or(Error::DivisionByZero),
            Value::Rat(x) => {
                if x.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Value::Rat(x.recip()))
                }
            }
        }
    }

    pub fn div(&self, a: &Value, b: &Value) -> Result<Value> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Value, e: u64) -> Value {
        match a {
            Value::Fin(x) => Value::Fin(self.ff().unwrap().pow(*x, &BigUint::from(e))),
            Value::Rat(x) => {
                let mut acc = BigRational::one();
                for _ in 0..e {
                    acc *= x;
                }
                Value::Rat(acc)
            }
        }
    }

    /// The unique `p`-th root (finite fields are perfect). Panics on `Q`.
    pub fn pth_root(&self, a: &Value) -> Value {
        match a {
            Value::Fin(x) => Value::Fin(self.ff().unwrap().pth_root(*x)),
            Value::Rat(_) => panic!("p-th root requested in characteristic 0"),
        }
    }

    /// Whether the element lies in the prime subfield (always true for `Q`).
    pub fn in_prime_field(&self, a: &Value) -> bool {
        match (a, self.ff()) {
            (Value::Fin(x), Some(f)) => *x < f.p,
            _ => true,
        }
    }

    pub fn elem(&self, v: Value) -> FieldElem {
        FieldElem {
            field: self.clone(),
            value: v,
        }
    }

    fn format_digits(&self, d: &[u32], var: &str) -> String {
        let mut terms = Vec::new();
        for (i, &c) in d.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            terms.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    /// Canonical text for an element: integers or `a/b` over `Q`, integers for
    /// prime fields, polynomials in `z` for extensions.
    pub fn format_value(&self, a: &Value) -> String {
        match (a, self.ff()) {
            (Value::Rat(q), _) => {
                if q.is_integer() {
                    q.numer().to_string()
                } else {
                    format!("{}/{}", q.numer(), q.denom())
                }
            }
            (Value::Fin(x), Some(f)) if f.degree == 1 => x.to_string(),
            (Value::Fin(x), Some(f)) => self.format_digits(&f.digits(*x), "z"),
            _ => unreachable!(),
        }
    }

    /// Coefficients of an element over `F_p` in the basis `1, z, z^2, ...`.
    pub fn digits(&self, a: &Value) -> Vec<u32> {
        match (a, self.ff()) {
            (Value::Fin(x), Some(f)) => f.digits(*x),
            _ => panic!("digits() requires a finite field element"),
        }
    }

    pub fn from_digits(&self, d: &[u32]) -> Value {
        let f = self.ff().expect("from_digits on Q");
        let mut full = vec![0u32; f.degree as usize];
        for (i, &x) in d.iter().enumerate() {
            if i < full.len() {
                full[i] = x % f.p;
            } else {
                // Reduce higher powers of z by the modulus.
                let mut acc = self.zero();
                let z = Value::Fin(f.p);
                for (j, &y) in d.iter().enumerate() {
                    let term = self.mul(&self.from_i64(y as i64), &self.pow(&z, j as u64));
                    acc = self.add(&acc, &term);
                }
                return acc;
            }
        }
        Value::Fin(f.encode(&full))
    }

    /// Canonical embedding of `self` into `target` (a finite field containing it).
    pub fn embedding_into(&self, target: &Field) -> Result<Embedding> {
        if self == target {
            return Ok(Embedding {
                source: self.clone(),
                target: target.clone(),
                gen_image: None,
            });
        }
        match (self.ff(), target.ff()) {
            (Some(s), Some(t)) if s.p == t.p && t.degree % s.degree == 0 => {
                if s.degree == 1 {
                    return Ok(Embedding {
                        source: self.clone(),
                        target: target.clone(),
                        gen_image: None,
                    });
                }
                let m = Poly::new(target, s.modulus.iter().map(|&c| Value::Fin(c)).collect());
                let (roots, _) = crate::factor::roots(&m)?;
                let root = roots
                    .into_iter()
                    .map(|(r, _)| r)
                    .min()
                    .ok_or_else(|| Error::InvalidField("no embedding found".into()))?;
                Ok(Embedding {
                    source: self.clone(),
                    target: target.clone(),
                    gen_image: Some(root),
                })
            }
            _ => Err(Error::FieldMismatch(self.to_string(), target.to_string())),
        }
    }
}

/// Field homomorphism `F_{p^a} -> F_{p^b}` fixed by the image of `z`.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: Field,
    target: Field,
    gen_image: Option<Value>,
}

impl Embedding {
    pub fn source(&self) -> &Field {
        &self.source
    }

    pub fn target(&self) -> &Field {
        &self.target
    }

    pub fn map(&self, a: &Value) -> Value {
        match &self.gen_image {
            None => a.clone(),
            Some(g) => {
                let digits = self.source.digits(a);
                let t = &self.target;
                digits
                    .iter()
                    .rev()
                    .fold(t.zero(), |acc, &d| t.add(&t.mul(&acc, g), &Value::Fin(d)))
            }
        }
    }

    pub fn map_poly(&self, p: &Poly) -> Poly {
        Poly::new(
            &self.target,
            p.coeffs().iter().map(|c| self.map(c)).collect(),
        )
    }

    /// Inverse image of `a`, if `a` lies in the image.
    pub fn preimage(&self, a: &Value) -> Option<Value> {
        if self.gen_image.is_none() {
            let inside = self.source == self.target || self.target.in_prime_field(a);
            return inside.then(|| a.clone());
        }
        self.source
            .elements()
            .into_iter()
            .find(|x| &self.map(x) == a)
    }
}

impl Value {
    /// Finite-field code; panics on rationals.
    pub fn fin(&self) -> u32 {
        match self {
            Value::Fin(x) => *x,
            Value::Rat(_) => panic!("rational value where a finite field value was expected"),
        }
    }

    pub fn rat(&self) -> &BigRational {
        match self {
            Value::Rat(q) => q,
            Value::Fin(_) => panic!("finite field value where a rational was expected"),
        }
    }
}

/// An element together with its field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    field: Field,
    value: Value,
}

impl FieldElem {
    pub fn new(field: &Field, value: Value) -> FieldElem {
        FieldElem {
            field: field.clone(),
            value,
        }
    }

    pub fn from_i64(field: &Field, n: i64) -> FieldElem {
        FieldElem::new(field, field.from_i64(n))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> &Value {
        &self.value
    }

    pub fn into_value(self) -> Value {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero(&self.value)
    }

    pub fn inv(&self) -> Result<FieldElem> {
        Ok(FieldElem::new(&self.field, self.field.inv(&self.value)?))
    }

    pub fn pow(&self, e: u64) -> FieldElem {
        FieldElem::new(&self.field, self.field.pow(&self.value, e))
    }

    fn check(&self, other: &FieldElem) {
        assert!(
            self.field == other.field,
            "field mismatch: {} vs {}",
            self.field,
            other.field
        );
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format_value(&self.value))
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.field)
    }
}

macro_rules! elem_binop {
    ($tr:ident, $m:ident, $op:ident) => {
        impl $tr<&FieldElem> for &FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: &FieldElem) -> FieldElem {
                self.check(rhs);
                FieldElem::new(&self.field, self.field.$op(&self.value, &rhs.value))
            }
        }
    };
}

elem_binop!(Add, add, add);
elem_binop!(Sub, sub, sub);
elem_binop!(Mul, mul, mul);

impl Div<&FieldElem> for &FieldElem {
    type Output = FieldElem;
    fn div(self, rhs: &FieldElem) -> FieldElem {
        self.check(rhs);
        FieldElem::new(
            &self.field,
            self.field
                .div(&self.value, &rhs.value)
                .expect("division by zero"),
        )
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem::new(&self.field, self.field.neg(&self.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let f = Field::prime(7).unwrap();
        let a = f.from_i64(3);
        let b = f.from_i64(5);
        assert_eq!(f.add(&a, &b), f.from_i64(1));
        assert_eq!(f.mul(&a, &b), f.from_i64(1));
        assert_eq!(f.inv(&a).unwrap(), b);
        assert_eq!(f.from_i64(-1), f.from_i64(6));
        assert!(Field::prime(9).is_err());
    }

    #[test]
    fn f4_and_f9_multiplication() {
        let f4 = Field::finite(2, 2).unwrap();
        assert_eq!(f4.extension_modulus(), Some(vec![1, 1, 1]));
        let z = f4.generator().unwrap();
        // z^2 = z + 1
        assert_eq!(f4.mul(&z, &z), f4.add(&z, &f4.one()));
        let f9 = Field::finite(3, 2).unwrap();
        assert_eq!(f9.extension_modulus(), Some(vec![1, 0, 1]));
        let i = f9.generator().unwrap();
        assert_eq!(f9.mul(&i, &i), f9.from_i64(-1));
    }

    #[test]
    fn frobenius_fixes_every_element() {
        for (p, n) in [(2, 4), (3, 2), (5, 2), (2, 3), (19, 1)] {
            let f = Field::finite(p, n).unwrap();
            let q = f.order().unwrap();
            for a in f.elements() {
                assert_eq!(f.pow(&a, q), a);
                let r = f.pth_root(&a);
                assert_eq!(f.pow(&r, p as u64), a);
            }
        }
    }

    #[test]
    fn reducible_modulus_rejected() {
        // z^2 + 1 = (z + 1)^2 over F_2
        assert!(Field::extension(2, &[1, 0, 1]).is_err());
        assert!(Field::extension(2, &[1, 1, 1]).is_ok());
        assert!(Field::extension(3, &[1, 0, 2]).is_err());
    }

    #[test]
    fn rational_images_and_bad_denominators() {
        let f = Field::prime(5).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(f.from_rational(&half).unwrap(), f.from_i64(3));
        let fifth = BigRational::new(1.into(), 5.into());
        assert!(matches!(
            f.from_rational(&fifth),
            Err(Error::BadPrime { .. })
        ));
    }

    #[test]
    fn embedding_f4_into_f16_is_a_homomorphism() {
        let f4 = Field::finite(2, 2).unwrap();
        let f16 = Field::finite(2, 4).unwrap();
        let e = f4.embedding_into(&f16).unwrap();
        for a in f4.elements() {
            for b in f4.elements() {
                assert_eq!(e.map(&f4.mul(&a, &b)), f16.mul(&e.map(&a), &e.map(&b)));
                assert_eq!(e.map(&f4.add(&a, &b)), f16.add(&e.map(&a), &e.map(&b)));
            }
            assert_eq!(e.preimage(&e.map(&a)), Some(a.clone()));
        }
    }
}
