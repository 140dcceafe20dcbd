//! Truncated Laurent series in a local parameter `π` at a place of `k(T)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, Value};
use crate::localfibre::Place;
use crate::poly::Poly;
use crate::ratfunc::RatFunc;

/// `Σ coeffs[i] π^(valuation + i) + O(π^precision)`.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentData {
    field: Field,
    valuation: i64,
    coeffs: Vec<Value>,
    precision: i64,
    exact_zero: bool,
}

impl LaurentData {
    /// Builds a series and normalizes it so the first stored coefficient is nonzero.
    pub fn new(field: &Field, valuation: i64, coeffs: Vec<Value>, precision: i64) -> LaurentData {
        let mut s = LaurentData {
            field: field.clone(),
            valuation,
            coeffs,
            precision,
            exact_zero: false,
        };
        s.normalize();
        s
    }

    /// The identically zero function (valuation undefined).
    pub fn exact_zero(field: &Field) -> LaurentData {
        LaurentData {
            field: field.clone(),
            valuation: 0,
            coeffs: Vec::new(),
            precision: i64::MAX,
            exact_zero: true,
        }
    }

    /// `O(π^precision)`.
    pub fn big_o(field: &Field, precision: i64) -> LaurentData {
        LaurentData {
            field: field.clone(),
            valuation: precision,
            coeffs: Vec::new(),
            precision,
            exact_zero: false,
        }
    }

    pub fn from_poly(p: &Poly, precision: i64) -> LaurentData {
        if p.is_zero() {
            return LaurentData::exact_zero(p.field());
        }
        let c: Vec<Value> = p
            .coeffs()
            .iter()
            .take(precision.max(0) as usize)
            .cloned()
            .collect();
        LaurentData::new(p.field(), 0, c, precision)
    }

    fn normalize(&mut self) {
        let f = &self.field;
        let keep = (self.precision - self.valuation).max(0) as usize;
        self.coeffs.truncate(keep);
        let lead = self.coeffs.iter().position(|c| !f.is_zero(c));
        match lead {
            Some(k) => {
                self.coeffs.drain(..k);
                self.valuation += k as i64;
            }
            None => {
                self.coeffs.clear();
                self.valuation = self.precision;
            }
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Exact valuation when the series is known to be nonzero; `None` for
    /// the exact zero and for `O(π^N)`.
    pub fn valuation(&self) -> Option<i64> {
        (!self.exact_zero && !self.coeffs.is_empty()).then_some(self.valuation)
    }

    pub fn coeffs(&self) -> &[Value] {
        &self.coeffs
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    pub fn is_exact_zero(&self) -> bool {
        self.exact_zero
    }

    pub fn leading(&self) -> Option<Value> {
        self.coeffs.first().cloned()
    }

    /// Coefficient of `π^k` (`None` beyond the precision).
    pub fn coefficient(&self, k: i64) -> Option<Value> {
        if self.exact_zero {
            return Some(self.field.zero());
        }
        if k >= self.precision {
            return None;
        }
        if k < self.valuation {
            return Some(self.field.zero());
        }
        Some(
            self.coeffs
                .get((k - self.valuation) as usize)
                .cloned()
                .unwrap_or_else(|| self.field.zero()),
        )
    }

    /// Multiply by `π^k`.
    pub fn shift(&self, k: i64) -> LaurentData {
        if self.exact_zero {
            return self.clone();
        }
        LaurentData {
            field: self.field.clone(),
            valuation: self.valuation + k,
            coeffs: self.coeffs.clone(),
            precision: self.precision.saturating_add(k),
            exact_zero: false,
        }
    }

    pub fn add(&self, other: &LaurentData) -> LaurentData {
        if self.exact_zero {
            return other.clone();
        }
        if other.exact_zero {
            return self.clone();
        }
        let f = &self.field;
        let prec = self.precision.min(other.precision);
        let lo = self.valuation.min(other.valuation);
        let n = (prec - lo).max(0) as usize;
        let c = (0..n)
            .map(|i| {
                let k = lo + i as i64;
                f.add(
                    &self.coefficient(k).unwrap(),
                    &other.coefficient(k).unwrap(),
                )
            })
            .collect();
        LaurentData::new(f, lo, c, prec)
    }

    pub fn neg(&self) -> LaurentData {
        let mut s = self.clone();
        s.coeffs = s.coeffs.iter().map(|c| self.field.neg(c)).collect();
        s
    }

    pub fn sub(&self, other: &LaurentData) -> LaurentData {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &LaurentData) -> LaurentData {
        if self.exact_zero || other.exact_zero {
            return LaurentData::exact_zero(&self.field);
        }
        let f = &self.field;
        let v = self.valuation + other.valuation;
        // Relative precision is limited by the less precise factor.
        let rel = (self.precision - self.valuation).min(other.precision - other.valuation);
        let prec = v.saturating_add(rel);
        let n = rel.max(0) as usize;
        let mut c = vec![f.zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            for (j, b) in other.coeffs.iter().enumerate().take(n - i) {
                c[i + j] = f.add(&c[i + j], &f.mul(a, b));
            }
        }
        LaurentData::new(f, v, c, prec)
    }

    pub fn inv(&self) -> Result<LaurentData> {
        let v = self.valuation().ok_or(Error::DivisionByZero)?;
        let f = &self.field;
        let n = (self.precision - v) as usize;
        let c = series_inverse(f, &self.coeffs, n)?;
        Ok(LaurentData::new(f, -v, c, -v + n as i64))
    }

    /// The truncation as a polynomial in `π` (requires valuation ≥ 0).
    pub fn to_poly(&self) -> Result<Poly> {
        if self.exact_zero || self.coeffs.is_empty() {
            return Ok(Poly::zero(&self.field));
        }
        if self.valuation < 0 {
            return Err(Error::NotIntegral(format!(
                "series has a pole of order {}",
                -self.valuation
            )));
        }
        Ok(Poly::new(&self.field, self.coeffs.clone()).shift(self.valuation as usize))
    }
}

impl fmt::Display for LaurentData {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exact_zero {
            return write!(out, "0");
        }
        let f = &self.field;
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            let k = self.valuation + i as i64;
            let cs = f.format_value(c);
            terms.push(match k {
                0 => cs,
                _ => format!("{cs}*pi^{k}"),
            });
        }
        terms.push(format!("O(pi^{})", self.precision));
        write!(out, "{}", terms.join(" + "))
    }
}

impl fmt::Debug for LaurentData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// First `n` coefficients of `1/a` for a power series `a` with `a[0] != 0`.
fn series_inverse(f: &Field, a: &[Value], n: usize) -> Result<Vec<Value>> {
    let a0 = a.first().ok_or(Error::DivisionByZero)?;
    let inv0 = f.inv(a0)?;
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        if k == 0 {
            out.push(inv0.clone());
            continue;
        }
        let mut s = f.zero();
        for i in 1..=k.min(a.len() - 1) {
            s = f.add(&s, &f.mul(&a[i], &out[k - i]));
        }
        out.push(f.neg(&f.mul(&s, &inv0)));
    }
    Ok(out)
}

/// Expansion of `r` at `place` with `terms` coefficients after the leading one
/// (so the result is known up to `O(π^(v + terms))`). At infinity `π = 1/T`.
pub fn laurent_expand(r: &RatFunc, place: &Place, terms: usize) -> Result<LaurentData> {
    let f = r.field();
    if r.is_zero() {
        return Ok(LaurentData::exact_zero(f));
    }
    if terms == 0 {
        return Err(Error::Precondition("precision must be positive".into()));
    }
    let (num, den, shift) = match place {
        Place::Finite(beta) => {
            if beta.field() != f {
                return Err(Error::FieldMismatch(
                    beta.field().to_string(),
                    f.to_string(),
                ));
            }
            (
                r.num().taylor_shift(beta.value()),
                r.den().taylor_shift(beta.value()),
                0i64,
            )
        }
        Place::Infinity => {
            let dn = r.num().degree().unwrap();
            let dd = r.den().degree().unwrap();
            (
                r.num().reverse(dn),
                r.den().reverse(dd),
                dd as i64 - dn as i64,
            )
        }
        Place::FiniteIrreducible(_) => {
            return Err(Error::Unsupported(
                "Laurent expansion at a place of degree > 1; extend the field first".into(),
            ))
        }
    };
    let vn = num.low_order().unwrap();
    let vd = den.low_order().unwrap();
    let n = num.unshift(vn);
    let d = den.unshift(vd);
    let dinv = series_inverse(f, d.coeffs(), terms)?;
    let mut c = vec![f.zero(); terms];
    for (i, a) in n.coeffs().iter().enumerate().take(terms) {
        for (j, b) in dinv.iter().enumerate().take(terms - i) {
            c[i + j] = f.add(&c[i + j], &f.mul(a, b));
        }
    }
    let v = vn as i64 - vd as i64 + shift;
    Ok(LaurentData::new(f, v, c, v + terms as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldElem;

    #[test]
    fn j_of_the_i9_surface_at_zero() {
        let f = Field::prime(2).unwrap();
        let j = RatFunc::new(
            Poly::monomial(&f, f.one(), 12),
            Poly::from_i64s(&f, &[1, 0, 0, 1]),
        )
        .unwrap();
        let s = laurent_expand(&j, &Place::Finite(FieldElem::from_i64(&f, 0)), 3).unwrap();
        assert_eq!(s.valuation(), Some(12));
        assert_eq!(s.precision(), 15);
    }

    #[test]
    fn pole_at_one() {
        let q = Field::rationals();
        let r = RatFunc::new(
            Poly::from_i64s(&q, &[1, 0, 1]),
            Poly::from_i64s(&q, &[-1, 1]),
        )
        .unwrap();
        let s = laurent_expand(&r, &Place::Finite(FieldElem::from_i64(&q, 1)), 4).unwrap();
        assert_eq!(s.valuation(), Some(-1));
        assert_eq!(s.leading(), Some(q.from_i64(2)));
        // (T^2+1)/(T-1) = 2/π + 2 + π exactly
        assert_eq!(s.coefficient(0), Some(q.from_i64(2)));
        assert_eq!(s.coefficient(1), Some(q.from_i64(1)));
        assert_eq!(s.coefficient(2), Some(q.from_i64(0)));
    }

    #[test]
    fn inverse_t_at_infinity() {
        let q = Field::rationals();
        let r = RatFunc::t(&q).inv().unwrap();
        let s = laurent_expand(&r, &Place::Infinity, 2).unwrap();
        assert_eq!(s.valuation(), Some(1));
    }

    #[test]
    fn mul_inv_roundtrip() {
        let f = Field::prime(3).unwrap();
        let a = LaurentData::new(&f, -2, vec![f.from_i64(1), f.from_i64(2), f.from_i64(1)], 5);
        let b = a.inv().unwrap();
        let one = a.mul(&b);
        assert_eq!(one.valuation(), Some(0));
        assert_eq!(one.coefficient(0), Some(f.one()));
        for k in 1..one.precision() {
            assert_eq!(one.coefficient(k), Some(f.zero()));
        }
    }
}
