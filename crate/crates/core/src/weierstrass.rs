//! Weierstrass models over `k(T)` and their standard invariants.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, Value};
use crate::poly::Poly;
use crate::ratfunc::RatFunc;

/// Index of `a_i` in the coefficient array and its weight `i`.
pub const WEIGHTS: [u32; 5] = [1, 2, 3, 4, 6];

/// `Y^2 + a1 XY + a3 Y = X^3 + a2 X^2 + a4 X + a6` with `a_i ∈ k[T]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WModel {
    field: Field,
    a: [Poly; 5],
    flip_weight: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StdInvariants {
    pub b2: Poly,
    pub b4: Poly,
    pub b6: Poly,
    pub b8: Poly,
    pub c4: Poly,
    pub c6: Poly,
    pub delta: Poly,
    pub j: RatFunc,
}

/// Smallest `m ≥ 1` with `deg a_i ≤ m·i` for all `i`.
pub fn default_flip_weight(a: &[Poly; 5]) -> u32 {
    a.iter()
        .zip(WEIGHTS)
        .filter_map(|(p, w)| p.degree().map(|d| (d as u32).div_ceil(w)))
        .max()
        .unwrap_or(1)
        .max(1)
}

/// Universal `b` and `c` invariants and discriminant, reduced into the base field.
pub(crate) fn invariants_of(a: &[Poly; 5]) -> (Poly, Poly, Poly, Poly, Poly, Poly, Poly) {
    let [a1, a2, a3, a4, a6] = a;
    let f = a1.field();
    let k = |n: i64| Poly::constant(f, f.from_i64(n));
    let b2 = &(a1 * a1) + &(&k(4) * a2);
    let b4 = &(&k(2) * a4) + &(a1 * a3);
    let b6 = &(a3 * a3) + &(&k(4) * a6);
    let b8 = &(&(&(&(&(a1 * a1) * a6) + &(&(&k(4) * a2) * a6)) - &(&(a1 * a3) * a4))
        + &(&(a2 * a3) * a3))
        - &(a4 * a4);
    let c4 = &(&b2 * &b2) - &(&k(24) * &b4);
    let c6 = &(&(-&(&(&b2 * &b2) * &b2)) + &(&(&k(36) * &b2) * &b4)) - &(&k(216) * &b6);
    let delta = &(&(&(-&(&(&b2 * &b2) * &b8)) - &(&k(8) * &(&(&b4 * &b4) * &b4)))
        - &(&k(27) * &(&b6 * &b6)))
        + &(&(&(&k(9) * &b2) * &b4) * &b6);
    (b2, b4, b6, b8, c4, c6, delta)
}

pub(crate) fn discriminant_of(a: &[Poly; 5]) -> Poly {
    invariants_of(a).6
}

/// `(X,Y) ↦ (X + r, Y + sX + t)` applied to raw coefficients.
pub(crate) fn rst_transform(a: &[Poly; 5], r: &Poly, s: &Poly, t: &Poly) -> [Poly; 5] {
    let [a1, a2, a3, a4, a6] = a;
    let f = a1.field();
    let k = |n: i64| Poly::constant(f, f.from_i64(n));
    let n1 = a1 + &(&k(2) * s);
    let n2 = &(&(a2 - &(s * a1)) + &(&k(3) * r)) - &(s * s);
    let n3 = &(a3 + &(r * a1)) + &(&k(2) * t);
    let n4 = &(&(&(&(a4 - &(s * a3)) + &(&(&k(2) * r) * a2)) - &(&(t + &(r * s)) * a1))
        + &(&(&k(3) * r) * r))
        - &(&(&k(2) * s) * t);
    let n6 = &(&(&(&(&(a6 + &(r * a4)) + &(&(r * r) * a2)) + &(&(r * r) * r)) - &(t * a3))
        - &(t * t))
        - &(&(r * t) * a1);
    [n1, n2, n3, n4, n6]
}

impl WModel {
    /// Validated model; `flip_weight = None` picks the smallest admissible weight.
    pub fn new(a: [Poly; 5], flip_weight: Option<u32>) -> Result<WModel> {
        let field = a[0].field().clone();
        if a.iter().any(|p| p.field() != &field) {
            return Err(Error::FieldMismatch(
                field.to_string(),
                "coefficients over different fields".into(),
            ));
        }
        let m = match flip_weight {
            Some(0) => return Err(Error::InvalidModel("flip weight must be positive".into())),
            Some(m) => {
                for (p, w) in a.iter().zip(WEIGHTS) {
                    if p.deg_i() > (m * w) as i64 {
                        return Err(Error::InvalidModel(format!(
                            "deg a{w} = {} exceeds {m}·{w}",
                            p.deg_i()
                        )));
                    }
                }
                m
            }
            None => default_flip_weight(&a),
        };
        if discriminant_of(&a).is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(WModel {
            field,
            a,
            flip_weight: m,
        })
    }

    pub fn long(
        a1: Poly,
        a2: Poly,
        a3: Poly,
        a4: Poly,
        a6: Poly,
        flip_weight: Option<u32>,
    ) -> Result<WModel> {
        WModel::new([a1, a2, a3, a4, a6], flip_weight)
    }

    /// `Y^2 = X^3 + A X^2 + B X + C`.
    pub fn extended(a: Poly, b: Poly, c: Poly, flip_weight: Option<u32>) -> Result<WModel> {
        let f = a.field().clone();
        WModel::new([Poly::zero(&f), a, Poly::zero(&f), b, c], flip_weight)
    }

    /// `Y^2 = X^3 + a4 X + a6`.
    pub fn short(a4: Poly, a6: Poly, flip_weight: Option<u32>) -> Result<WModel> {
        let f = a4.field().clone();
        WModel::new(
            [Poly::zero(&f), Poly::zero(&f), Poly::zero(&f), a4, a6],
            flip_weight,
        )
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Poly; 5] {
        &self.a
    }

    pub fn into_coeffs(self) -> [Poly; 5] {
        self.a
    }

    pub fn a1(&self) -> &Poly {
        &self.a[0]
    }
    pub fn a2(&self) -> &Poly {
        &self.a[1]
    }
    pub fn a3(&self) -> &Poly {
        &self.a[2]
    }
    pub fn a4(&self) -> &Poly {
        &self.a[3]
    }
    pub fn a6(&self) -> &Poly {
        &self.a[4]
    }

    pub fn flip_weight(&self) -> u32 {
        self.flip_weight
    }

    pub fn with_flip_weight(&self, m: u32) -> Result<WModel> {
        WModel::new(self.a.clone(), Some(m))
    }

    /// Same coefficients with the smallest admissible flip weight.
    pub fn with_default_weight(&self) -> WModel {
        WModel {
            field: self.field.clone(),
            a: self.a.clone(),
            flip_weight: default_flip_weight(&self.a),
        }
    }

    pub fn is_extended(&self) -> bool {
        self.a[0].is_zero() && self.a[2].is_zero()
    }

    pub fn is_short(&self) -> bool {
        self.is_extended() && self.a[1].is_zero()
    }

    pub fn invariants(&self) -> StdInvariants {
        let (b2, b4, b6, b8, c4, c6, delta) = invariants_of(&self.a);
        let j = RatFunc::new(c4.pow(3), delta.clone()).expect("discriminant is nonzero");
        StdInvariants {
            b2,
            b4,
            b6,
            b8,
            c4,
            c6,
            delta,
            j,
        }
    }

    pub fn discriminant(&self) -> Poly {
        discriminant_of(&self.a)
    }

    pub fn j_invariant(&self) -> RatFunc {
        self.invariants().j
    }

    /// The characteristic-2 discriminant
    /// `a1^4 (a1^2 a6 + a1 a3 a4 + a2 a3^2 + a4^2) + a3^4 + a1^3 a3^3`.
    pub fn discriminant_char2(&self) -> Result<Poly> {
        if self.field.characteristic() != 2 {
            return Err(Error::WrongCharacteristic(
                "the char-2 discriminant needs characteristic 2".into(),
            ));
        }
        let [a1, a2, a3, a4, a6] = &self.a;
        let inner = &(&(&(&(a1 * a1) * a6) + &(&(a1 * a3) * a4)) + &(&(a2 * a3) * a3)) + &(a4 * a4);
        Ok(&(&(&a1.pow(4) * &inner) + &a3.pow(4)) + &(&a1.pow(3) * &a3.pow(3)))
    }

    /// `a_i'(S) = S^{m i} a_i(1/S)`: the model over `k(S)`, `S = 1/T`.
    pub fn flip_to_infinity(&self) -> WModel {
        let m = self.flip_weight;
        let a = std::array::from_fn(|k| self.a[k].reverse((m * WEIGHTS[k]) as usize));
        WModel {
            field: self.field.clone(),
            a,
            flip_weight: m,
        }
    }

    /// Completes the square: `Y^2 = X^3 + (b2/4) X^2 + (b4/2) X + b6/4`.
    pub fn to_extended(&self) -> Result<WModel> {
        if self.field.characteristic() == 2 {
            return Err(Error::WrongCharacteristic(
                "extended form needs characteristic ≠ 2".into(),
            ));
        }
        if self.is_extended() {
            return Ok(self.clone());
        }
        let f = &self.field;
        let inv = |n: i64| f.inv(&f.from_i64(n)).unwrap();
        let (b2, b4, b6, ..) = invariants_of(&self.a);
        WModel::extended(
            b2.scale(&inv(4)),
            b4.scale(&inv(2)),
            b6.scale(&inv(4)),
            Some(self.flip_weight),
        )
    }

    /// Completes the cube: `Y^2 = X^3 - (c4/48) X - c6/864`.
    pub fn to_short(&self) -> Result<WModel> {
        let p = self.field.characteristic();
        if p == 2 || p == 3 {
            return Err(Error::WrongCharacteristic(
                "short form needs characteristic ∉ {2,3}".into(),
            ));
        }
        if self.is_short() {
            return Ok(self.clone());
        }
        let f = &self.field;
        let inv = |n: i64| f.inv(&f.from_i64(n)).unwrap();
        let (_, _, _, _, c4, c6, _) = invariants_of(&self.a);
        WModel::short(
            c4.scale(&f.neg(&inv(48))),
            c6.scale(&f.neg(&inv(864))),
            Some(self.flip_weight),
        )
    }

    /// Applies a field map to every coefficient.
    pub fn map_coeffs(&self, target: &Field, g: impl Fn(&Value) -> Value) -> Result<WModel> {
        let a = std::array::from_fn(|k| self.a[k].map_coeffs(target, &g));
        WModel::new(a, Some(self.flip_weight))
    }

    /// Raw constructor without validation, for internal pipelines.
    pub(crate) fn from_parts(a: [Poly; 5], flip_weight: u32) -> WModel {
        WModel {
            field: a[0].field().clone(),
            a,
            flip_weight,
        }
    }

    /// Whether `(x, y)` with coordinates in `k(T)` lies on the curve.
    pub fn contains_point(&self, x: &RatFunc, y: &RatFunc) -> bool {
        let c = |p: &Poly| RatFunc::from_poly(p.clone());
        let [a1, a2, a3, a4, a6] = &self.a;
        let lhs = &(&(y * y) + &(&(&c(a1) * x) * y)) + &(&c(a3) * y);
        let x2 = x * x;
        let rhs = &(&(&(&x2 * x) + &(&c(a2) * &x2)) + &(&c(a4) * x)) + &c(a6);
        lhs == rhs
    }
}

impl fmt::Display for WModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let term = |p: &Poly, mono: &str| -> Option<String> {
            if p.is_zero() {
                None
            } else if p.is_one() {
                Some(mono.to_string())
            } else if mono.is_empty() {
                Some(p.to_string())
            } else if p.coeffs().iter().filter(|c| !p.field().is_zero(c)).count() == 1
                && !p.to_string().starts_with('-')
            {
                Some(format!("{p}*{mono}"))
            } else {
                Some(format!("({p})*{mono}"))
            }
        };
        let [a1, a2, a3, a4, a6] = &self.a;
        let mut lhs = vec!["Y^2".to_string()];
        lhs.extend(term(a1, "X*Y"));
        lhs.extend(term(a3, "Y"));
        let mut rhs = vec!["X^3".to_string()];
        rhs.extend(term(a2, "X^2"));
        rhs.extend(term(a4, "X"));
        rhs.extend(term(a6, ""));
        let join = |v: Vec<String>| {
            let mut out = v[0].clone();
            for t in &v[1..] {
                match t.strip_prefix('-') {
                    Some(rest) => out += &format!(" - {rest}"),
                    None => out += &format!(" + {t}"),
                }
            }
            out
        };
        write!(f, "{} = {}", join(lhs), join(rhs))
    }
}

impl fmt::Debug for WModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "WModel({self} over {}, m={})",
            self.field, self.flip_weight
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prop31_discriminant() {
        let q = Field::rationals();
        let m = WModel::extended(
            Poly::from_i64s(&q, &[0, 2, 0, 1]),
            Poly::from_i64s(&q, &[-2, 0, -2]),
            Poly::from_i64s(&q, &[0, 1]),
            None,
        )
        .unwrap();
        assert_eq!(m.flip_weight(), 2);
        // 16 times the classical cubic discriminant
        assert_eq!(m.discriminant(), Poly::from_i64s(&q, &[512, 0, 208, 0, 64]));
    }

    #[test]
    fn e9_char2_discriminant() {
        let f2 = Field::prime(2).unwrap();
        let z = Poly::zero(&f2);
        let m = WModel::long(Poly::t(&f2), z.clone(), Poly::one(&f2), z.clone(), z, None).unwrap();
        let d = Poly::from_i64s(&f2, &[1, 0, 0, 1]);
        assert_eq!(m.discriminant(), d);
        assert_eq!(m.discriminant_char2().unwrap(), d);
        assert_eq!(m.flip_weight(), 1);
    }

    #[test]
    fn b8_identity() {
        let f = Field::prime(7).unwrap();
        let a = [
            Poly::from_i64s(&f, &[1, 2]),
            Poly::from_i64s(&f, &[3, 0, 1]),
            Poly::from_i64s(&f, &[0, 5]),
            Poly::from_i64s(&f, &[2, 2, 2]),
            Poly::from_i64s(&f, &[6, 1]),
        ];
        let m = WModel::new(a, None).unwrap();
        let inv = m.invariants();
        let k4 = Poly::constant(&f, f.from_i64(4));
        assert_eq!(&k4 * &inv.b8, &(&inv.b2 * &inv.b6) - &(&inv.b4 * &inv.b4));
        let k1728 = Poly::constant(&f, f.from_i64(1728));
        assert_eq!(&k1728 * &inv.delta, &inv.c4.pow(3) - &inv.c6.pow(2));
    }

    #[test]
    fn flip_is_an_involution_and_degenerate_rejected() {
        let f = Field::prime(3).unwrap();
        let m = WModel::extended(
            Poly::from_i64s(&f, &[1, 0, 2]),
            Poly::from_i64s(&f, &[0, 1]),
            Poly::from_i64s(&f, &[1, 1, 1]),
            Some(2),
        )
        .unwrap();
        assert_eq!(m.flip_to_infinity().flip_to_infinity(), m);
        let z = Poly::zero(&f);
        assert_eq!(
            WModel::extended(z.clone(), z.clone(), z, None),
            Err(Error::Degenerate)
        );
    }

    #[test]
    fn short_form_preserves_j() {
        let q = Field::rationals();
        let m = WModel::long(
            Poly::from_i64s(&q, &[0, 1]),
            Poly::zero(&q),
            Poly::one(&q),
            Poly::zero(&q),
            Poly::zero(&q),
            None,
        )
        .unwrap();
        assert_eq!(m.to_short().unwrap().j_invariant(), m.j_invariant());
        assert_eq!(m.to_extended().unwrap().j_invariant(), m.j_invariant());
    }
}
