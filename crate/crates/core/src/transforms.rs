//! Model-changing maps: coordinate changes, Möbius maps, twists, base changes,
//! minimalization and reduction modulo p.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::error::{Error, Result};
use crate::factor;
use crate::field::{Field, FieldElem, Value};
use crate::localfibre::{tate_at_factor, tate_with_model, Place};
use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::weierstrass::{WModel, WEIGHTS};

/// `X = u^2 X' + r`, `Y = u^3 Y' + u^2 s X' + t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordChange {
    pub u: RatFunc,
    pub r: RatFunc,
    pub s: RatFunc,
    pub t: RatFunc,
}

impl CoordChange {
    pub fn new(u: RatFunc, r: RatFunc, s: RatFunc, t: RatFunc) -> Result<CoordChange> {
        if u.is_zero() {
            return Err(Error::Precondition("u must be nonzero".into()));
        }
        Ok(CoordChange { u, r, s, t })
    }

    pub fn identity(f: &Field) -> CoordChange {
        CoordChange {
            u: RatFunc::one(f),
            r: RatFunc::zero(f),
            s: RatFunc::zero(f),
            t: RatFunc::zero(f),
        }
    }

    pub fn scaling(u: RatFunc) -> Result<CoordChange> {
        let f = u.field().clone();
        CoordChange::new(u, RatFunc::zero(&f), RatFunc::zero(&f), RatFunc::zero(&f))
    }

    /// `X ↦ X + r`, `Y ↦ Y + sX + t` with polynomial shifts.
    pub fn translation(r: Poly, s: Poly, t: Poly) -> CoordChange {
        let f = r.field().clone();
        CoordChange {
            u: RatFunc::one(&f),
            r: RatFunc::from_poly(r),
            s: RatFunc::from_poly(s),
            t: RatFunc::from_poly(t),
        }
    }

    pub fn inverse(&self) -> Result<CoordChange> {
        let ui = self.u.inv()?;
        let ui2 = &ui * &ui;
        let ui3 = &ui2 * &ui;
        CoordChange::new(
            ui.clone(),
            -&(&self.r * &ui2),
            -&(&self.s * &ui),
            &(&(&self.r * &self.s) - &self.t) * &ui3,
        )
    }
}

/// Coefficients `a1..a6` as rational functions (not necessarily integral).
pub type RatCoeffs = [RatFunc; 5];

pub fn rat_coeffs(model: &WModel) -> RatCoeffs {
    std::array::from_fn(|k| RatFunc::from_poly(model.coeffs()[k].clone()))
}

pub fn apply_to_coeffs(a: &RatCoeffs, c: &CoordChange) -> Result<RatCoeffs> {
    let [a1, a2, a3, a4, a6] = a;
    let f = a1.field();
    let k = |n: i64| RatFunc::constant(f, f.from_i64(n));
    let (r, s, t) = (&c.r, &c.s, &c.t);
    let n1 = a1 + &(&k(2) * s);
    let n2 = &(&(a2 - &(s * a1)) + &(&k(3) * r)) - &(s * s);
    let n3 = &(a3 + &(r * a1)) + &(&k(2) * t);
    let n4 = &(&(&(&(a4 - &(s * a3)) + &(&(&k(2) * r) * a2)) - &(&(t + &(r * s)) * a1))
        + &(&(&k(3) * r) * r))
        - &(&(&k(2) * s) * t);
    let n6 = &(&(&(&(&(a6 + &(r * a4)) + &(&(r * r) * a2)) + &(&(r * r) * r)) - &(t * a3))
        - &(t * t))
        - &(&(r * t) * a1);
    let out = [n1, n2, n3, n4, n6];
    let mut res = out.clone();
    for (k, w) in WEIGHTS.iter().enumerate() {
        res[k] = out[k].div(&c.u.pow(*w as i64)?)?;
    }
    Ok(res)
}

/// Polynomial model from rational coefficients (fails if some `a_i` is not a polynomial).
pub fn model_from_rat(a: &RatCoeffs) -> Result<WModel> {
    let mut polys = Vec::with_capacity(5);
    for (k, c) in a.iter().enumerate() {
        match c.as_poly() {
            Some(p) => polys.push(p.clone()),
            None => {
                return Err(Error::NotIntegral(format!(
                    "a{} = {c} is not a polynomial",
                    WEIGHTS[k]
                )))
            }
        }
    }
    let arr: [Poly; 5] = polys.try_into().unwrap();
    WModel::new(arr, None)
}

pub fn apply_coord_change(model: &WModel, c: &CoordChange) -> Result<WModel> {
    model_from_rat(&apply_to_coeffs(&rat_coeffs(model), c)?)
}

/// `T ↦ (aT + b)/(cT + d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MobiusMap {
    pub a: FieldElem,
    pub b: FieldElem,
    pub c: FieldElem,
    pub d: FieldElem,
}

impl MobiusMap {
    pub fn new(a: FieldElem, b: FieldElem, c: FieldElem, d: FieldElem) -> Result<MobiusMap> {
        let det = &(&a * &d) - &(&b * &c);
        if det.is_zero() {
            return Err(Error::Precondition(
                "Möbius map with zero determinant".into(),
            ));
        }
        Ok(MobiusMap { a, b, c, d })
    }

    pub fn from_i64(f: &Field, a: i64, b: i64, c: i64, d: i64) -> Result<MobiusMap> {
        let e = |n| FieldElem::from_i64(f, n);
        MobiusMap::new(e(a), e(b), e(c), e(d))
    }

    pub fn inverse(&self) -> MobiusMap {
        MobiusMap {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    /// Image of a place under `T ↦ (aT+b)/(cT+d)` read as a map of the line:
    /// the fibre of the new model at the returned place is the old fibre at `p`.
    pub fn pull_place(&self, p: &Place) -> Result<Place> {
        // New model at T0 sees old model at (a T0 + b)/(c T0 + d); invert.
        let inv = self.inverse();
        Ok(match p {
            Place::Infinity => {
                if inv.c.is_zero() {
                    Place::Infinity
                } else {
                    Place::Finite(&inv.a / &inv.c)
                }
            }
            Place::Finite(beta) => {
                let den = &(&inv.c * beta) + &inv.d;
                if den.is_zero() {
                    Place::Infinity
                } else {
                    Place::Finite(&(&(&inv.a * beta) + &inv.b) / &den)
                }
            }
            Place::FiniteIrreducible(_) => {
                return Err(Error::Unsupported("moving places of degree ≥ 2".into()));
            }
        })
    }
}

/// `a_i'(T) = (cT + d)^{m i} a_i((aT + b)/(cT + d))`, keeping the flip weight `m`.
pub fn apply_mobius(model: &WModel, mm: &MobiusMap) -> Result<WModel> {
    let f = model.field().clone();
    let m = model.flip_weight();
    let num = Poly::new(&f, vec![mm.b.value().clone(), mm.a.value().clone()]);
    let den = Poly::new(&f, vec![mm.d.value().clone(), mm.c.value().clone()]);
    let a = std::array::from_fn(|k| {
        let w = (m * WEIGHTS[k]) as usize;
        let p = &model.coeffs()[k];
        let mut acc = Poly::zero(&f);
        for (i, c) in p.coeffs().iter().enumerate() {
            let term = &(&num.pow(i as u32) * &den.pow((w - i) as u32)).scale(c);
            acc = &acc + term;
        }
        acc
    });
    WModel::new(a, Some(m))
}

/// Quadratic twist by `D` (characteristic ≠ 2): `(A, B, C) ↦ (DA, D²B, D³C)`.
pub fn quadratic_twist(model: &WModel, d: &Poly) -> Result<WModel> {
    if model.field().characteristic() == 2 {
        return Err(Error::WrongCharacteristic(
            "quadratic twists in characteristic 2 are Artin–Schreier twists".into(),
        ));
    }
    if d.is_zero() {
        return Err(Error::Precondition("twist by zero".into()));
    }
    let ext = model.to_extended()?;
    let d2 = d * d;
    WModel::extended(ext.a2() * d, ext.a4() * &d2, &(ext.a6() * &d2) * d, None)
}

/// `Y^2 + XY = X^3 + a2 X^2 + a6` over `k(T)` in characteristic 2 (`a6 = 1/j`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm2 {
    pub a2: RatFunc,
    pub a6: RatFunc,
}

impl NormalForm2 {
    pub fn coeffs(&self) -> RatCoeffs {
        let f = self.a2.field();
        [
            RatFunc::one(f),
            self.a2.clone(),
            RatFunc::zero(f),
            RatFunc::zero(f),
            self.a6.clone(),
        ]
    }

    /// The untwisted member of the family with this `j`: `a2 = 0`.
    pub fn untwisted(&self) -> NormalForm2 {
        NormalForm2 {
            a2: RatFunc::zero(self.a2.field()),
            a6: self.a6.clone(),
        }
    }
}

/// Brings a characteristic-2 model with `a1 ≠ 0` to normal form.
pub fn normal_form_char2(model: &WModel) -> Result<NormalForm2> {
    let f = model.field().clone();
    if f.characteristic() != 2 {
        return Err(Error::WrongCharacteristic(
            "normal form needs characteristic 2".into(),
        ));
    }
    if model.a1().is_zero() {
        return Err(Error::Precondition(
            "normal form needs a1 ≠ 0 (j ≠ 0)".into(),
        ));
    }
    let a = rat_coeffs(model);
    let zero = RatFunc::zero(&f);
    let a1 = a[0].clone();
    let step1 = CoordChange::new(RatFunc::one(&f), a[2].div(&a1)?, zero.clone(), zero.clone())?;
    let a = apply_to_coeffs(&a, &step1)?;
    let step2 = CoordChange::new(RatFunc::one(&f), zero.clone(), zero.clone(), a[3].div(&a1)?)?;
    let a = apply_to_coeffs(&a, &step2)?;
    let a = apply_to_coeffs(&a, &CoordChange::scaling(a1)?)?;
    debug_assert!(a[0] == RatFunc::one(&f) && a[2].is_zero() && a[3].is_zero());
    Ok(NormalForm2 {
        a2: a[1].clone(),
        a6: a[4].clone(),
    })
}

/// `a2 ↦ a2 + D`; preserves `j`.
pub fn artin_schreier_twist(nf: &NormalForm2, d: &RatFunc) -> Result<NormalForm2> {
    if nf.a2.field().characteristic() != 2 {
        return Err(Error::WrongCharacteristic(
            "Artin–Schreier twists need characteristic 2".into(),
        ));
    }
    if nf.a6.is_zero() {
        return Err(Error::Precondition("normal form requires j ≠ 0".into()));
    }
    Ok(NormalForm2 {
        a2: &nf.a2 + d,
        a6: nf.a6.clone(),
    })
}

/// Pairwise coprime refinement of a list of polynomials.
fn coprime_base(mut v: Vec<Poly>) -> Result<Vec<Poly>> {
    v.retain(|p| !p.is_constant());
    let mut base: Vec<Poly> = Vec::new();
    while let Some(p) = v.pop() {
        let mut p = p.monic();
        let mut i = 0;
        while i < base.len() && !p.is_constant() {
            let g = p.gcd(&base[i])?;
            if g.is_one() {
                i += 1;
                continue;
            }
            let b = base.swap_remove(i);
            let rb = b.div_exact(&g).unwrap();
            let rp = p.div_exact(&g).unwrap();
            v.push(g);
            if !rb.is_constant() {
                v.push(rb);
            }
            p = rp;
            i = 0;
        }
        if !p.is_constant() {
            base.push(p);
        }
    }
    let mut out = Vec::new();
    for b in base {
        out.push(factor::radical(&b)?);
    }
    out.sort_by(|a, b| a.coeffs().cmp(b.coeffs()));
    out.dedup();
    Ok(out)
}

/// Polynomial `u` making `u^i a_i` polynomial for all `i`, with the scaled model.
pub fn integralize(a: &RatCoeffs) -> Result<(Poly, WModel)> {
    let f = a[0].field().clone();
    let mut u = Poly::one(&f);
    let mut cur = a.clone();
    for _ in 0..8 {
        let dens: Vec<Poly> = cur.iter().map(|c| c.den().clone()).collect();
        if dens.iter().all(|d| d.is_one()) {
            return Ok((u, model_from_rat(&cur)?));
        }
        let mut step = Poly::one(&f);
        for b in coprime_base(dens.clone())? {
            let mut k = 0u32;
            for (d, w) in dens.iter().zip(WEIGHTS.iter()) {
                let mut v = 0u32;
                let mut x = d.clone();
                while let Some(q) = x.div_exact(&b) {
                    x = q;
                    v += 1;
                }
                k = k.max(v.div_ceil(*w));
            }
            step = &step * &b.pow(k);
        }
        let inv = RatFunc::from_poly(step.clone()).inv()?;
        cur = apply_to_coeffs(&cur, &CoordChange::scaling(inv)?)?;
        u = &u * &step;
    }
    Err(Error::NotIntegral(
        "integralization did not converge".into(),
    ))
}

/// `a_i(T) ↦ a_i(q(T))`, flip weight multiplied by `deg q`.
pub fn base_change(model: &WModel, q: &Poly) -> Result<WModel> {
    let dq = q
        .degree()
        .filter(|&d| d > 0)
        .ok_or_else(|| Error::Precondition("base change needs a nonconstant q".into()))?;
    let a = std::array::from_fn(|k| model.coeffs()[k].compose(q));
    WModel::new(a, Some(model.flip_weight() * dq as u32))
}

/// Pullback along `T ↦ T^p`.
pub fn frobenius_base_change(model: &WModel) -> Result<WModel> {
    let f = model.field();
    let p = f.characteristic();
    if p == 0 {
        return Err(Error::WrongCharacteristic(
            "Frobenius base change needs p > 0".into(),
        ));
    }
    base_change(model, &Poly::monomial(f, f.one(), p as usize))
}

/// Minimal model at one place and the number of `π`-divisions performed.
pub fn minimalize(model: &WModel, place: &Place) -> Result<(WModel, u32)> {
    let (r, m) = tate_with_model(model, place)?;
    if r.u_valuation == 0 {
        return Ok((model.clone(), 0));
    }
    Ok((WModel::new(m.coeffs().clone(), None)?, r.u_valuation))
}

/// Minimal at every place (finite places first, then infinity).
pub fn minimalize_all(model: &WModel) -> Result<WModel> {
    let field = model.field().clone();
    let mut cur = model.clone();
    let delta = cur.discriminant();
    let candidates: Vec<(Poly, u32)> = factor::squarefree_decomposition(&delta)?
        .into_iter()
        .filter(|(_, m)| *m >= 12)
        .collect();
    for (s, _) in candidates {
        if field.is_finite() {
            for (g, _) in factor::factor(&s)? {
                let place = if g.degree() == Some(1) {
                    Place::Finite(FieldElem::new(&field, field.neg(&g.coeff(0))))
                } else {
                    Place::FiniteIrreducible(g)
                };
                cur = minimalize(&cur, &place)?.0;
            }
        } else {
            let (roots, rest) = factor::roots(&s)?;
            for (beta, _) in roots {
                cur = minimalize(&cur, &Place::Finite(FieldElem::new(&field, beta)))?.0;
            }
            if !rest.is_constant() {
                for fr in tate_at_factor(cur.coeffs(), &rest.monic(), true)? {
                    if fr.result.u_valuation > 0 {
                        cur = WModel::new(fr.minimal_model, None)?;
                    }
                }
            }
        }
    }
    let cur = cur.with_default_weight();
    Ok(minimalize(&cur, &Place::Infinity)?.0)
}

/// Coefficientwise reduction of a model over `Q` into a field of characteristic `p`.
pub fn reduce_mod_p(model: &WModel, target: &Field) -> Result<WModel> {
    if !model.field().is_rational() {
        return Err(Error::WrongCharacteristic(
            "reduction starts from a model over Q".into(),
        ));
    }
    let p = target.characteristic();
    if p == 0 {
        return Err(Error::WrongCharacteristic(
            "reduction target must be a finite field".into(),
        ));
    }
    let mut a = Vec::with_capacity(5);
    for c in model.coeffs() {
        let mut v = Vec::with_capacity(c.coeffs().len());
        for x in c.coeffs() {
            v.push(target.from_rational(x.rat())?);
        }
        a.push(Poly::new(target, v));
    }
    let arr: [Poly; 5] = a.try_into().unwrap();
    WModel::new(arr, Some(model.flip_weight()))
}

/// Scales a model over `Q` by the least positive integer `u` that makes all
/// coefficients integral (`a_i ↦ u^i a_i`).
pub fn integralize_constants(model: &WModel) -> Result<(BigInt, WModel)> {
    if !model.field().is_rational() {
        return Ok((BigInt::one(), model.clone()));
    }
    let mut u = BigInt::one();
    for (c, w) in model.coeffs().iter().zip(WEIGHTS) {
        for x in c.coeffs() {
            let den = x.rat().denom().clone();
            // smallest k with den | k^w, taken over prime powers of den
            let mut need = BigInt::one();
            let mut d = den.clone();
            let mut q = BigInt::from(2);
            while d > BigInt::one() {
                if (&d % &q) == BigInt::from(0) {
                    let mut e = 0u32;
                    while (&d % &q) == BigInt::from(0) {
                        d /= &q;
                        e += 1;
                    }
                    need *= q.pow(e.div_ceil(w));
                }
                q += 1;
            }
            u = u.lcm(&need);
        }
    }
    let f = model.field();
    let uv = f.from_bigint(&u);
    let c = CoordChange::scaling(RatFunc::constant(f, f.inv(&uv)?))?;
    Ok((
        u,
        apply_coord_change(model, &c)?.with_flip_weight(model.flip_weight())?,
    ))
}

/// `a_i ↦ u^i a_i` for a constant `u` (the change `X ↦ X/u^2`).
pub fn scale(model: &WModel, u: &Value) -> Result<WModel> {
    let f = model.field();
    let c = CoordChange::scaling(RatFunc::constant(f, f.inv(u)?))?;
    apply_coord_change(model, &c)?.with_flip_weight(model.flip_weight())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfibre::{tate_at, KodairaType};
    use crate::surface::analyze;

    fn p(f: &Field, c: &[i64]) -> Poly {
        Poly::from_i64s(f, c)
    }

    fn e9(f: &Field) -> WModel {
        let z = Poly::zero(f);
        WModel::long(Poly::t(f), z.clone(), Poly::one(f), z.clone(), z, None).unwrap()
    }

    #[test]
    fn coord_change_roundtrip_and_delta_scaling() {
        let q = Field::rationals();
        let m = WModel::extended(
            p(&q, &[0, 2, 0, 1]),
            p(&q, &[-2, 0, -2]),
            p(&q, &[0, 1]),
            None,
        )
        .unwrap();
        let c = CoordChange::new(
            RatFunc::constant(&q, q.from_i64(2)),
            RatFunc::from_poly(p(&q, &[1, 1])),
            RatFunc::from_poly(p(&q, &[3])),
            RatFunc::from_poly(p(&q, &[0, 0, 1])),
        )
        .unwrap();
        let m2 = apply_coord_change(&m, &c).unwrap();
        assert_eq!(m2.j_invariant(), m.j_invariant());
        let u12 = q.inv(&q.from_i64(4096)).unwrap();
        assert_eq!(m2.discriminant(), m.discriminant().scale(&u12));
        let back = apply_coord_change(&m2, &c.inverse().unwrap()).unwrap();
        assert_eq!(back.coeffs(), m.coeffs());
    }

    #[test]
    fn mobius_moves_fibres() {
        let f2 = Field::prime(2).unwrap();
        let m = e9(&f2);
        let inv = MobiusMap::from_i64(&f2, 0, 1, 1, 0).unwrap();
        let flipped = apply_mobius(&m, &inv).unwrap();
        assert_eq!(flipped, m.flip_to_infinity());
        let r = tate_at(&flipped, &Place::Finite(FieldElem::from_i64(&f2, 0))).unwrap();
        assert_eq!(r.kodaira, KodairaType::I(9));
    }

    #[test]
    fn frobenius_of_e9() {
        let f2 = Field::prime(2).unwrap();
        let m = frobenius_base_change(&e9(&f2)).unwrap();
        assert_eq!(m.a1(), &p(&f2, &[0, 0, 1]));
        assert_eq!(analyze(&m).unwrap().configuration, "[18,2,2,2]");
    }

    #[test]
    fn normal_form_of_e9() {
        let f2 = Field::prime(2).unwrap();
        let nf = normal_form_char2(&e9(&f2)).unwrap();
        let t = RatFunc::t(&f2);
        assert_eq!(nf.a2, t.pow(-3).unwrap());
        assert_eq!(nf.a6, e9(&f2).j_invariant().inv().unwrap());
        let tw = artin_schreier_twist(&nf.untwisted(), &t.pow(-3).unwrap()).unwrap();
        assert_eq!(tw, nf);
    }

    #[test]
    fn twist_turns_i1_into_i1_star() {
        let q = Field::rationals();
        // y^2 = x^3 + x^2 + T: I_1 at T=0
        let m = WModel::extended(p(&q, &[1]), Poly::zero(&q), p(&q, &[0, 1]), None).unwrap();
        let at0 = Place::Finite(FieldElem::from_i64(&q, 0));
        assert_eq!(tate_at(&m, &at0).unwrap().kodaira, KodairaType::I(1));
        let tw = quadratic_twist(&m, &Poly::t(&q)).unwrap();
        assert_eq!(tate_at(&tw, &at0).unwrap().kodaira, KodairaType::IStar(1));
        assert_eq!(tw.j_invariant(), m.j_invariant());
    }

    #[test]
    fn reduction_refuses_bad_primes() {
        let q = Field::rationals();
        let half = q.inv(&q.from_i64(2)).unwrap();
        let m = WModel::extended(
            Poly::constant(&q, half),
            Poly::zero(&q),
            p(&q, &[0, 1]),
            None,
        )
        .unwrap();
        let f2 = Field::prime(2).unwrap();
        assert!(matches!(reduce_mod_p(&m, &f2), Err(Error::BadPrime { .. })));
        let (u, mi) = integralize_constants(&m).unwrap();
        assert_eq!(u, BigInt::from(2));
        assert!(reduce_mod_p(&mi, &Field::prime(3).unwrap()).is_ok());
    }

    #[test]
    fn minimalize_divides_out_sixth_powers() {
        let q = Field::rationals();
        let m = WModel::short(Poly::zero(&q), p(&q, &[0, 0, 0, 0, 0, 0, 0, 1]), None).unwrap();
        let mm = minimalize_all(&m).unwrap();
        assert_eq!(mm.a6(), &p(&q, &[0, 1]));
    }
}
