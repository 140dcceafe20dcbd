//! Tate's algorithm at a single place of `k(T)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElem, Value};
use crate::laurent::LaurentData;
use crate::poly::Poly;
use crate::weierstrass::{invariants_of, rst_transform, WModel};

/// A place of `k(T)`: `T = β`, an irreducible `π(T)` of degree ≥ 2, or `∞`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Place {
    Finite(FieldElem),
    FiniteIrreducible(Poly),
    Infinity,
}

impl Place {
    pub fn degree(&self) -> u32 {
        match self {
            Place::FiniteIrreducible(p) => p.degree().unwrap_or(0) as u32,
            _ => 1,
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(b) => write!(f, "T={b}"),
            Place::FiniteIrreducible(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum KodairaType {
    I(u32),
    II,
    III,
    IV,
    IStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl KodairaType {
    pub fn euler_number(self) -> u32 {
        match self {
            KodairaType::I(n) => n,
            KodairaType::II => 2,
            KodairaType::III => 3,
            KodairaType::IV => 4,
            KodairaType::IStar(n) => n + 6,
            KodairaType::IVStar => 8,
            KodairaType::IIIStar => 9,
            KodairaType::IIStar => 10,
        }
    }

    /// Number of irreducible components of the special fibre.
    pub fn components(self) -> u32 {
        match self {
            KodairaType::I(0) => 1,
            KodairaType::I(n) => n,
            KodairaType::II => 1,
            KodairaType::III => 2,
            KodairaType::IV => 3,
            KodairaType::IStar(n) => n + 5,
            KodairaType::IVStar => 7,
            KodairaType::IIIStar => 8,
            KodairaType::IIStar => 9,
        }
    }

    pub fn is_good(self) -> bool {
        self == KodairaType::I(0)
    }

    pub fn is_multiplicative(self) -> bool {
        matches!(self, KodairaType::I(n) if n > 0)
    }

    pub fn is_additive(self) -> bool {
        !matches!(self, KodairaType::I(_))
    }

    /// Short notation used in configurations: `19`, `14*`, `II`, `IV*`.
    pub fn short_name(self) -> String {
        match self {
            KodairaType::I(n) => n.to_string(),
            KodairaType::IStar(n) => format!("{n}*"),
            other => other.to_string(),
        }
    }
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::I(n) => write!(f, "I_{n}"),
            KodairaType::II => write!(f, "II"),
            KodairaType::III => write!(f, "III"),
            KodairaType::IV => write!(f, "IV"),
            KodairaType::IStar(n) => write!(f, "I_{n}*"),
            KodairaType::IVStar => write!(f, "IV*"),
            KodairaType::IIIStar => write!(f, "III*"),
            KodairaType::IIStar => write!(f, "II*"),
        }
    }
}

impl FromStr for KodairaType {
    type Err = Error;

    /// Accepts `I_19`, `I19`, `19`, `I_14*`, `14*`, `I0*`, `II`, `IV*`, ...
    fn from_str(s: &str) -> Result<KodairaType> {
        let t = s.trim();
        let (body, star) = match t.strip_suffix('*') {
            Some(b) => (b, true),
            None => (t, false),
        };
        let roman = match (body, star) {
            ("II", false) => Some(KodairaType::II),
            ("III", false) => Some(KodairaType::III),
            ("IV", false) => Some(KodairaType::IV),
            ("IV", true) => Some(KodairaType::IVStar),
            ("III", true) => Some(KodairaType::IIIStar),
            ("II", true) => Some(KodairaType::IIStar),
            _ => None,
        };
        if let Some(k) = roman {
            return Ok(k);
        }
        let digits = body
            .strip_prefix("I_")
            .or_else(|| body.strip_prefix('I'))
            .unwrap_or(body);
        let n: u32 = digits
            .parse()
            .map_err(|_| Error::Parse(format!("unknown Kodaira type `{s}`")))?;
        Ok(if star {
            KodairaType::IStar(n)
        } else {
            KodairaType::I(n)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalResult {
    pub kodaira: KodairaType,
    pub v_delta_min: u32,
    pub conductor_exp: u32,
    pub wild_index: u32,
    pub minimal: bool,
    pub u_valuation: u32,
    /// Degree of the residue field over the coefficient field.
    pub residue_degree: u32,
}

impl LocalResult {
    fn from_type(
        kodaira: KodairaType,
        vpd: u32,
        restarts: u32,
        residue_degree: u32,
    ) -> Result<LocalResult> {
        let e = kodaira.euler_number();
        if vpd < e {
            return Err(Error::InvalidModel(format!(
                "Tate produced {kodaira} with v(Δ) = {vpd} below its Euler number"
            )));
        }
        let f = if kodaira.is_good() {
            0
        } else {
            vpd + 1 - kodaira.components()
        };
        Ok(LocalResult {
            kodaira,
            v_delta_min: vpd,
            conductor_exp: f,
            wild_index: vpd - e,
            minimal: restarts == 0,
            u_valuation: restarts,
            residue_degree,
        })
    }
}

/// Lower bound for the wild index `w` from the residue characteristic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WildBound {
    AlwaysZero,
    AtLeast(u32),
}

impl WildBound {
    pub fn admits(self, w: u32) -> bool {
        match self {
            WildBound::AlwaysZero => w == 0,
            WildBound::AtLeast(n) => w >= n,
        }
    }
}

impl fmt::Display for WildBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WildBound::AlwaysZero => write!(f, "0"),
            WildBound::AtLeast(n) => write!(f, ">={n}"),
        }
    }
}

pub fn wild_table_bound(kodaira: KodairaType, p: u32) -> WildBound {
    use KodairaType::*;
    use WildBound::*;
    match p {
        2 => match kodaira {
            I(_) | IV | IVStar => AlwaysZero,
            II => AtLeast(2),
            III | IIIStar | IIStar => AtLeast(1),
            IStar(1) => AtLeast(1),
            IStar(_) => AtLeast(2),
        },
        3 => match kodaira {
            I(_) | III | IStar(_) | IIIStar => AlwaysZero,
            II | IV | IVStar | IIStar => AtLeast(1),
        },
        _ => AlwaysZero,
    }
}

enum TateErr {
    Split(Poly),
    E(Error),
}

impl From<Error> for TateErr {
    fn from(e: Error) -> TateErr {
        TateErr::E(e)
    }
}

type TR<T> = std::result::Result<T, TateErr>;

const INF: u32 = u32::MAX;

/// Arithmetic at the place `g` (monic). When `check_split` is set, `g` may be a
/// reducible squarefree polynomial; any zero divisor in `k[T]/g` is reported.
struct Local<'a> {
    field: &'a Field,
    g: Poly,
    is_t: bool,
    check_split: bool,
    p: u32,
    /// `|k[T]/g| / p`, the exponent computing p-th roots in the residue field.
    root_exp: Option<BigUint>,
}

impl<'a> Local<'a> {
    fn new(field: &'a Field, g: Poly, check_split: bool) -> Local<'a> {
        let is_t = g.degree() == Some(1) && field.is_zero(&g.coeff(0));
        let p = field.characteristic();
        let root_exp = field
            .order()
            .map(|q| BigUint::from(q).pow(g.degree().unwrap() as u32) / BigUint::from(p));
        Local {
            field,
            g,
            is_t,
            check_split,
            p,
            root_exp,
        }
    }

    fn k(&self, n: i64) -> Poly {
        Poly::constant(self.field, self.field.from_i64(n))
    }

    fn reduce(&self, x: &Poly) -> Poly {
        if self.is_t {
            Poly::constant(self.field, x.coeff(0))
        } else {
            x.rem(&self.g).expect("nonzero modulus")
        }
    }

    fn unit_check(&self, r: &Poly) -> TR<()> {
        if self.check_split && !self.is_t {
            let h = r.gcd(&self.g)?;
            if !h.is_one() {
                return Err(TateErr::Split(h));
            }
        }
        Ok(())
    }

    fn val(&self, x: &Poly) -> TR<u32> {
        if x.is_zero() {
            return Ok(INF);
        }
        if self.is_t {
            return Ok(x.low_order().unwrap() as u32);
        }
        let mut k = 0;
        let mut cur = x.clone();
        loop {
            let (q, r) = cur.divmod(&self.g)?;
            if r.is_zero() {
                cur = q;
                k += 1;
            } else {
                self.unit_check(&r)?;
                return Ok(k);
            }
        }
    }

    fn pdiv(&self, x: &Poly) -> TR<bool> {
        Ok(self.val(x)? > 0)
    }

    fn inv(&self, x: &Poly) -> TR<Poly> {
        let r = self.reduce(x);
        if r.is_zero() {
            return Err(TateErr::E(Error::DivisionByZero));
        }
        self.unit_check(&r)?;
        if self.is_t {
            return Ok(Poly::constant(self.field, self.field.inv(&r.coeff(0))?));
        }
        Ok(r.inv_mod(&self.g)?)
    }

    fn proot(&self, x: &Poly) -> TR<Poly> {
        let r = self.reduce(x);
        if self.is_t {
            return Ok(Poly::constant(self.field, self.field.pth_root(&r.coeff(0))));
        }
        let e = self
            .root_exp
            .as_ref()
            .ok_or_else(|| Error::WrongCharacteristic("p-th root in characteristic 0".into()))?;
        Ok(r.powmod(e, &self.g)?)
    }

    fn div_pi(&self, x: &Poly, k: u32) -> TR<Poly> {
        if self.is_t {
            if x.low_order().is_some_and(|l| l < k as usize) {
                return Err(TateErr::E(Error::NotIntegral(
                    "inexact division by π".into(),
                )));
            }
            return Ok(x.unshift(k as usize));
        }
        let mut cur = x.clone();
        for _ in 0..k {
            cur = cur
                .div_exact(&self.g)
                .ok_or_else(|| Error::NotIntegral("inexact division by π".into()))?;
        }
        Ok(cur)
    }

    fn pi_pow(&self, k: u32) -> Poly {
        if self.is_t {
            Poly::monomial(self.field, self.field.one(), k as usize)
        } else {
            self.g.pow(k)
        }
    }
}

struct TateOutcome {
    kodaira: KodairaType,
    vpd: u32,
    restarts: u32,
    minimal_model: [Poly; 5],
}

fn tate_loop(a0: &[Poly; 5], loc: &Local) -> TR<TateOutcome> {
    let p = loc.p;
    let zero = Poly::zero(loc.field);
    let mut a = a0.clone();
    let mut restarts = 0u32;
    let mut minimal_model = a0.clone();
    let half = if p == 2 {
        zero.clone()
    } else {
        loc.inv(&loc.k(2))?
    };
    let done = |kodaira, vpd, restarts, m: &[Poly; 5]| {
        Ok(TateOutcome {
            kodaira,
            vpd,
            restarts,
            minimal_model: m.clone(),
        })
    };
    loop {
        let (b2, b4, b6, _, c4, c6, delta) = invariants_of(&a);
        if delta.is_zero() {
            return Err(TateErr::E(Error::Degenerate));
        }
        let vpd = loc.val(&delta)?;
        if vpd == 0 {
            return done(KodairaType::I(0), 0, restarts, &minimal_model);
        }
        let [a1, a2, a3, a4, a6] = &a;
        let (r, t) = match p {
            2 => {
                if loc.pdiv(&b2)? {
                    let r = loc.proot(a4)?;
                    let t = loc.proot(&(&(&(&(&r + a2) * &r) + a4) * &r + a6.clone()))?;
                    (r, t)
                } else {
                    let temp = loc.inv(a1)?;
                    let r = &temp * a3;
                    let t = &temp * &(a4 + &(&r * &r));
                    (r, t)
                }
            }
            3 => {
                let r = if loc.pdiv(&b2)? {
                    loc.proot(&-&b6)?
                } else {
                    -&(&loc.inv(&b2)? * &b4)
                };
                let t = &(a1 * &r) + a3;
                (r, t)
            }
            _ => {
                let r = if loc.pdiv(&c4)? {
                    -&(&loc.inv(&loc.k(12))? * &b2)
                } else {
                    -&(&loc.inv(&(&loc.k(12) * &c4))? * &(&c6 + &(&b2 * &c4)))
                };
                let t = -&(&half * &(&(a1 * &r) + a3));
                (r, t)
            }
        };
        let (r, t) = (loc.reduce(&r), loc.reduce(&t));
        a = rst_transform(&a, &r, &zero, &t);
        let (b2, _, b6, b8, ..) = invariants_of(&a);
        if !loc.pdiv(&b2)? {
            return done(KodairaType::I(vpd), vpd, restarts, &minimal_model);
        }
        if loc.val(&a[4])? < 2 {
            return done(KodairaType::II, vpd, restarts, &minimal_model);
        }
        if loc.val(&b8)? < 3 {
            return done(KodairaType::III, vpd, restarts, &minimal_model);
        }
        if loc.val(&b6)? < 3 {
            return done(KodairaType::IV, vpd, restarts, &minimal_model);
        }
        let (s, t) = match p {
            2 => {
                let s = loc.proot(&a[1])?;
                let t = &loc.g * &loc.proot(&loc.div_pi(&a[4], 2)?)?;
                (s, t)
            }
            3 => (a[0].clone(), a[2].clone()),
            _ => (-&(&a[0] * &half), -&(&a[2] * &half)),
        };
        a = rst_transform(&a, &zero, &s, &t);
        let b = loc.reduce(&loc.div_pi(&a[1], 1)?);
        let c = loc.reduce(&loc.div_pi(&a[3], 2)?);
        let d = loc.reduce(&loc.div_pi(&a[4], 3)?);
        let (bb, cc, bc) = (&b * &b, &c * &c, &b * &c);
        let w = &(&(&(&(&loc.k(27) * &(&d * &d)) - &(&bb * &cc))
            + &(&(&loc.k(4) * &(&b * &bb)) * &d))
            - &(&(&loc.k(18) * &bc) * &d))
            + &(&loc.k(4) * &(&c * &cc));
        let x = &(&loc.k(3) * &c) - &bb;
        let sw = if loc.pdiv(&w)? {
            if loc.pdiv(&x)? {
                3
            } else {
                2
            }
        } else {
            1
        };
        if sw == 1 {
            return done(KodairaType::IStar(0), vpd, restarts, &minimal_model);
        }
        if sw == 2 {
            let r = match p {
                2 => loc.proot(&c)?,
                3 => &c * &loc.inv(&b)?,
                _ => &(&bc - &(&loc.k(9) * &d)) * &loc.inv(&(&loc.k(2) * &x))?,
            };
            let r = &loc.g * &loc.reduce(&r);
            a = rst_transform(&a, &r, &zero, &zero);
            let (mut ix, mut iy) = (3u32, 3u32);
            loop {
                let a2t = loc.reduce(&loc.div_pi(&a[1], 1)?);
                let a3t = loc.reduce(&loc.div_pi(&a[2], iy - 1)?);
                let a6t = loc.reduce(&loc.div_pi(&a[4], ix + iy - 2)?);
                if !loc.pdiv(&(&(&a3t * &a3t) + &(&loc.k(4) * &a6t)))? {
                    break;
                }
                let my = loc.pi_pow(iy - 1);
                let t = if p == 2 {
                    &my * &loc.proot(&a6t)?
                } else {
                    &my * &loc.reduce(&-&(&a3t * &half))
                };
                a = rst_transform(&a, &zero, &zero, &t);
                iy += 1;
                let a4t = loc.reduce(&loc.div_pi(&a[3], ix)?);
                let a6t = loc.reduce(&loc.div_pi(&a[4], ix + iy - 2)?);
                if !loc.pdiv(&(&(&a4t * &a4t) - &(&(&loc.k(4) * &a6t) * &a2t)))? {
                    break;
                }
                let mx = loc.pi_pow(ix - 1);
                let r = if p == 2 {
                    &mx * &loc.proot(&(&a6t * &loc.inv(&a2t)?))?
                } else {
                    &mx * &loc.reduce(&-&(&a4t * &loc.inv(&(&loc.k(2) * &a2t))?))
                };
                a = rst_transform(&a, &r, &zero, &zero);
                ix += 1;
            }
            return done(
                KodairaType::IStar(ix + iy - 5),
                vpd,
                restarts,
                &minimal_model,
            );
        }
        let rp = match p {
            2 => b.clone(),
            3 => loc.proot(&-&d)?,
            _ => -&(&b * &loc.inv(&loc.k(3))?),
        };
        let r = &loc.g * &loc.reduce(&rp);
        a = rst_transform(&a, &r, &zero, &zero);
        let x3 = loc.reduce(&loc.div_pi(&a[2], 2)?);
        let x6 = loc.reduce(&loc.div_pi(&a[4], 4)?);
        if !loc.pdiv(&(&(&x3 * &x3) + &(&loc.k(4) * &x6)))? {
            return done(KodairaType::IVStar, vpd, restarts, &minimal_model);
        }
        let pi2 = loc.pi_pow(2);
        let t = if p == 2 {
            -&(&pi2 * &loc.proot(&x6)?)
        } else {
            &pi2 * &loc.reduce(&-&(&x3 * &half))
        };
        a = rst_transform(&a, &zero, &zero, &t);
        if loc.val(&a[3])? < 4 {
            return done(KodairaType::IIIStar, vpd, restarts, &minimal_model);
        }
        if loc.val(&a[4])? < 6 {
            return done(KodairaType::IIStar, vpd, restarts, &minimal_model);
        }
        a = [
            loc.div_pi(&a[0], 1)?,
            loc.div_pi(&a[1], 2)?,
            loc.div_pi(&a[2], 3)?,
            loc.div_pi(&a[3], 4)?,
            loc.div_pi(&a[4], 6)?,
        ];
        restarts += 1;
        minimal_model = a.clone();
    }
}

/// Result of Tate's algorithm on one (possibly split) factor of the place polynomial.
pub(crate) struct FactorResult {
    pub factor: Poly,
    pub result: LocalResult,
    pub minimal_model: [Poly; 5],
}

/// Tate at the monic place polynomial `g`. Over `Q`, `g` may be a reducible
/// squarefree polynomial; it is split on demand whenever a residue turns out
/// to be a zero divisor, so each returned factor has uniform reduction.
pub(crate) fn tate_at_factor(
    a: &[Poly; 5],
    g: &Poly,
    check_split: bool,
) -> Result<Vec<FactorResult>> {
    let field = a[0].field();
    let mut pending = vec![g.monic()];
    let mut out = Vec::new();
    while let Some(h) = pending.pop() {
        let loc = Local::new(field, h.clone(), check_split);
        match tate_loop(a, &loc) {
            Ok(o) => {
                let deg = h.degree().unwrap() as u32;
                out.push(FactorResult {
                    factor: h,
                    result: LocalResult::from_type(o.kodaira, o.vpd, o.restarts, deg)?,
                    minimal_model: o.minimal_model,
                });
            }
            Err(TateErr::Split(s)) => {
                let rest = h.div_exact(&s).expect("split factor divides the place");
                pending.push(rest);
                pending.push(s);
            }
            Err(TateErr::E(e)) => return Err(e),
        }
    }
    out.sort_by(|x, y| x.factor.coeffs().cmp(y.factor.coeffs()));
    Ok(out)
}

fn shifted(model: &WModel, beta: &Value) -> [Poly; 5] {
    std::array::from_fn(|k| model.coeffs()[k].taylor_shift(beta))
}

/// Tate's algorithm at `place`, also returning a model minimal there.
///
/// At `T = β` and `∞` the returned model agrees with the input away from the
/// place; at infinity its flip weight drops by `u_valuation`.
pub fn tate_with_model(model: &WModel, place: &Place) -> Result<(LocalResult, WModel)> {
    let field = model.field().clone();
    let t = Poly::t(&field);
    match place {
        Place::Finite(beta) => {
            if beta.field() != &field {
                return Err(Error::FieldMismatch(
                    beta.field().to_string(),
                    field.to_string(),
                ));
            }
            let a = shifted(model, beta.value());
            let mut r = tate_at_factor(&a, &t, false)?;
            let fr = r.pop().unwrap();
            let back = field.neg(beta.value());
            let m = std::array::from_fn(|k| fr.minimal_model[k].taylor_shift(&back));
            let w = crate::weierstrass::default_flip_weight(&m)
                .max(model.flip_weight().saturating_sub(fr.result.u_valuation));
            Ok((fr.result, WModel::from_parts(m, w)))
        }
        Place::Infinity => {
            let flipped = model.flip_to_infinity();
            let mut r = tate_at_factor(flipped.coeffs(), &t, false)?;
            let fr = r.pop().unwrap();
            let m_new = model.flip_weight() - fr.result.u_valuation;
            if fr.result.u_valuation > 0 && m_new == 0 {
                return Err(Error::ConstantModel);
            }
            let back = WModel::from_parts(fr.minimal_model, m_new.max(1)).flip_to_infinity();
            Ok((fr.result, back))
        }
        Place::FiniteIrreducible(pi) => {
            if pi.field() != &field {
                return Err(Error::FieldMismatch(
                    pi.field().to_string(),
                    field.to_string(),
                ));
            }
            if pi.deg_i() < 2 {
                return Err(Error::Precondition(
                    "irreducible places have degree ≥ 2".into(),
                ));
            }
            if field.is_finite() && !crate::factor::is_irreducible(pi)? {
                return Err(Error::Precondition(format!("{pi} is reducible")));
            }
            let r = tate_at_factor(model.coeffs(), pi, field.is_rational())?;
            if r.len() != 1 {
                return Err(Error::Precondition(format!("{pi} is reducible")));
            }
            let fr = r.into_iter().next().unwrap();
            let m = WModel::from_parts(fr.minimal_model.clone(), 1).with_default_weight();
            Ok((fr.result, m))
        }
    }
}

pub fn tate_at(model: &WModel, place: &Place) -> Result<LocalResult> {
    Ok(tate_with_model(model, place)?.0)
}

/// `(ν, ω) = (8d − 4 − 6e + r, 4d − 2)` for the local twist in characteristic 2.
pub fn local_twist_fibre(e: i64, r: u32, d: u32) -> Result<(i64, i64)> {
    if r > 5 {
        return Err(Error::Precondition(format!("r = {r} outside 0..=5")));
    }
    if d == 0 || (d as i64) <= e {
        return Err(Error::Precondition(format!(
            "twist formula needs d > max(e, 0), got d = {d}, e = {e}"
        )));
    }
    let d = d as i64;
    Ok((8 * d - 4 - 6 * e + r as i64, 4 * d - 2))
}

/// The integral local model behind [`local_twist_fibre`], built from truncated series.
#[derive(Clone, Debug)]
pub struct TwistModel {
    pub model: WModel,
    /// Absolute precision `N` carried by the series coefficients.
    pub precision: i64,
}

/// Builds `Y^2 + XY = X^3 + D X^2 + π^{r−6e} Q` with
/// `D = δ π^{−(2d−1)} + d_tail` and a unit `Q`, scaled by `π^d` to an integral
/// model over `k[[π]]` (truncated to a polynomial in `π = T`).
pub fn twist_lemma_model(
    field: &Field,
    e: i64,
    r: u32,
    d: u32,
    delta: &Value,
    d_tail: &[Value],
    q_series: &[Value],
) -> Result<TwistModel> {
    if field.characteristic() != 2 {
        return Err(Error::WrongCharacteristic(
            "the twist model lives in characteristic 2".into(),
        ));
    }
    let (nu, omega) = local_twist_fibre(e, r, d)?;
    if field.is_zero(delta) {
        return Err(Error::Precondition("δ must be nonzero".into()));
    }
    if q_series.first().is_none_or(|q0| field.is_zero(q0)) {
        return Err(Error::Precondition("Q must be a unit".into()));
    }
    let d = d as i64;
    let v_delta = nu + 6 + omega;
    let n = v_delta + 12;
    let mut dc = vec![delta.clone()];
    dc.extend(d_tail.iter().cloned());
    let big_d = LaurentData::new(field, -(2 * d - 1), dc, n - 2 * d);
    let q = LaurentData::new(field, 0, q_series.to_vec(), n);
    let a1 = LaurentData::new(field, d, vec![field.one()], n);
    let a2 = big_d.shift(2 * d);
    let a6 = q.shift(6 * d + r as i64 - 6 * e);
    let zero = Poly::zero(field);
    let trunc = |s: &LaurentData| -> Result<Poly> {
        let p = s.to_poly()?;
        Ok(Poly::new(
            field,
            p.coeffs().iter().take(n as usize).cloned().collect(),
        ))
    };
    let a = [trunc(&a1)?, trunc(&a2)?, zero.clone(), zero, trunc(&a6)?];
    let model = WModel::new(a, None)?;
    Ok(TwistModel {
        model,
        precision: n,
    })
}

/// Runs Tate at `π = T` on a series-built model, refusing results whose
/// discriminant valuation is not covered by the carried precision.
pub fn tate_on_series_model(tm: &TwistModel) -> Result<LocalResult> {
    let field = tm.model.field().clone();
    let v = tm
        .model
        .discriminant()
        .low_order()
        .ok_or(Error::Degenerate)? as i64;
    if v + 12 > tm.precision {
        return Err(Error::Precision(format!(
            "v(Δ) = {v} needs {} coefficients, only {} carried",
            v + 12,
            tm.precision
        )));
    }
    tate_at(&tm.model, &Place::Finite(FieldElem::from_i64(&field, 0)))
}
