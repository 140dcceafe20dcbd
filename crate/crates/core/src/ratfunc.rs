//! Rational functions `num/den` in `T`, kept reduced with a monic denominator.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{Field, Value};
use crate::poly::Poly;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.field() != den.field() {
            return Err(Error::FieldMismatch(
                num.field().to_string(),
                den.field().to_string(),
            ));
        }
        let f = num.field().clone();
        if num.is_zero() {
            return Ok(RatFunc {
                num,
                den: Poly::one(&f),
            });
        }
        let g = num.gcd(&den)?;
        let (mut n, mut d) = (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap());
        let lc = f.inv(&d.lead())?;
        n = n.scale(&lc);
        d = d.scale(&lc);
        Ok(RatFunc { num: n, den: d })
    }

    pub fn from_poly(p: Poly) -> RatFunc {
        let f = p.field().clone();
        RatFunc {
            num: p,
            den: Poly::one(&f),
        }
    }

    pub fn zero(f: &Field) -> RatFunc {
        RatFunc::from_poly(Poly::zero(f))
    }

    pub fn one(f: &Field) -> RatFunc {
        RatFunc::from_poly(Poly::one(f))
    }

    pub fn constant(f: &Field, c: Value) -> RatFunc {
        RatFunc::from_poly(Poly::constant(f, c))
    }

    pub fn t(f: &Field) -> RatFunc {
        RatFunc::from_poly(Poly::t(f))
    }

    pub fn field(&self) -> &Field {
        self.num.field()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.is_poly().then_some(&self.num)
    }

    pub fn is_constant(&self) -> bool {
        self.is_poly() && self.num.is_constant()
    }

    pub fn inv(&self) -> Result<RatFunc> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<RatFunc> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs() as u32;
        Ok(RatFunc {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    pub fn scale(&self, c: &Value) -> RatFunc {
        RatFunc::new(self.num.scale(c), self.den.clone()).unwrap()
    }

    /// `deg num - deg den`; `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.num.deg_i() - self.den.deg_i())
    }

    /// Valuation at a monic irreducible `pi`.
    pub fn valuation(&self, pi: &Poly) -> Option<i64> {
        let vn = self.num.valuation(pi)? as i64;
        Some(vn - self.den.valuation(pi).unwrap_or(0) as i64)
    }

    /// Valuation at infinity, `deg den - deg num`.
    pub fn valuation_infinity(&self) -> Option<i64> {
        self.degree().map(|d| -d)
    }

    /// `self(g)` for a rational function `g`.
    pub fn compose(&self, g: &RatFunc) -> Result<RatFunc> {
        let ev = |p: &Poly| -> Result<RatFunc> {
            let f = p.field();
            let mut acc = RatFunc::zero(f);
            for c in p.coeffs().iter().rev() {
                acc = &(&acc * g) + &RatFunc::constant(f, c.clone());
            }
            Ok(acc)
        };
        ev(&self.num)?.div(&ev(&self.den)?)
    }

    pub fn map_coeffs(&self, target: &Field, g: impl Fn(&Value) -> Value) -> Result<RatFunc> {
        RatFunc::new(
            self.num.map_coeffs(target, &g),
            self.den.map_coeffs(target, &g),
        )
    }

    pub fn derivative(&self) -> RatFunc {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RatFunc::new(n, &self.den * &self.den).unwrap()
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_poly() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &Poly| {
            let s = p.to_string();
            if p.is_constant()
                || (p.coeffs().iter().filter(|c| !p.field().is_zero(c)).count() == 1
                    && !s.starts_with('-'))
            {
                s
            } else {
                format!("({s})")
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self} over {})", self.field())
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        RatFunc::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .unwrap()
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_and_normalizes() {
        let f = Field::rationals();
        let n = Poly::from_i64s(&f, &[-1, 0, 1]);
        let d = Poly::from_i64s(&f, &[2, 2]);
        let r = RatFunc::new(n, d).unwrap();
        assert_eq!(r.den(), &Poly::one(&f));
        assert_eq!(
            r.num(),
            &Poly::from_i64s(&f, &[-1, 1]).scale(
                &f.from_rational(&num_rational::BigRational::new(1.into(), 2.into()))
                    .unwrap()
            )
        );
    }

    #[test]
    fn field_ops() {
        let f = Field::prime(5).unwrap();
        let t = RatFunc::t(&f);
        let inv = t.inv().unwrap();
        assert_eq!(&t * &inv, RatFunc::one(&f));
        let s = &t + &inv;
        assert_eq!(s.valuation(&Poly::t(&f)), Some(-1));
        assert_eq!(s.valuation_infinity(), Some(-1));
    }

    #[test]
    fn compose_inverts_mobius() {
        let f = Field::rationals();
        let t = RatFunc::t(&f);
        let g = t.inv().unwrap();
        let a = RatFunc::new(
            Poly::from_i64s(&f, &[1, 2, 3]),
            Poly::from_i64s(&f, &[5, 1]),
        )
        .unwrap();
        assert_eq!(a.compose(&g).unwrap().compose(&g).unwrap(), a);
    }
}
