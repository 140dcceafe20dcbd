//! Global analysis of an elliptic surface: fibre configuration and invariants.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor;
use crate::field::{Embedding, Field, FieldElem};
use crate::localfibre::{tate_at, tate_at_factor, KodairaType, LocalResult, Place};
use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::weierstrass::WModel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FieldExtension {
    /// Extend a finite base field until the discriminant splits (up to
    /// `AUTO_EXTENSION_LIMIT`).
    #[default]
    Auto,
    /// Keep the given field; places of degree ≥ 2 are reported as such.
    Off,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SurfaceClass {
    Rational,
    K3,
    HonestlyElliptic(u32),
    Other,
}

impl fmt::Display for SurfaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceClass::Rational => write!(f, "rational"),
            SurfaceClass::K3 => write!(f, "K3"),
            SurfaceClass::HonestlyElliptic(e) => write!(f, "honestly elliptic (e={e})"),
            SurfaceClass::Other => write!(f, "other"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Fibre {
    pub place: Place,
    pub local: LocalResult,
}

#[derive(Clone, Debug)]
pub struct SurfaceReport {
    /// Singular fibres, finite places first (in root order), then infinity.
    pub fibres: Vec<Fibre>,
    pub euler_number: u32,
    pub surface_class: SurfaceClass,
    pub conductor_degree: u32,
    pub j: RatFunc,
    /// `None` when `j` is constant (isotrivial surface).
    pub insep_degree: Option<u32>,
    pub semistable: bool,
    pub configuration: String,
    /// Field the analysis ran over (after any automatic extension).
    pub working_field: Field,
    /// Embedding of the model's field into the working field.
    pub embedding: Embedding,
    /// Discriminant of a model minimal at every finite place (over the working field).
    pub delta_min: Poly,
    /// The analyzed model, over the working field.
    pub model: WModel,
}

impl SurfaceReport {
    /// Kodaira types with geometric multiplicity (a place of degree k counts k times).
    pub fn types(&self) -> Vec<KodairaType> {
        let mut out = Vec::new();
        for f in &self.fibres {
            for _ in 0..f.local.residue_degree {
                out.push(f.local.kodaira);
            }
        }
        sort_types(&mut out);
        out
    }

    pub fn fibre_at_infinity(&self) -> Option<&Fibre> {
        self.fibres.iter().find(|f| f.place == Place::Infinity)
    }

    /// Type at infinity (`I_0` when smooth there).
    pub fn type_at_infinity(&self) -> KodairaType {
        self.fibre_at_infinity()
            .map_or(KodairaType::I(0), |f| f.local.kodaira)
    }
}

/// Descending by Euler number, ties by notation.
pub fn sort_types(v: &mut [KodairaType]) {
    v.sort_by(|a, b| {
        b.euler_number()
            .cmp(&a.euler_number())
            .then_with(|| a.is_additive().cmp(&b.is_additive()))
            .then_with(|| a.short_name().cmp(&b.short_name()))
    });
}

/// `[14*,1,1,1,1]` style notation.
pub fn configuration_string(types: &[KodairaType]) -> String {
    let mut v = types.to_vec();
    sort_types(&mut v);
    let parts: Vec<String> = v.iter().map(|t| t.short_name()).collect();
    format!("[{}]", parts.join(","))
}

/// Parses a configuration string into a sorted multiset of types.
pub fn parse_configuration(s: &str) -> Result<Vec<KodairaType>> {
    let body = s
        .trim()
        .strip_prefix('[')
        .and_then(|b| b.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("configuration `{s}` must be bracketed")))?;
    let mut v = Vec::new();
    for part in body.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        v.push(part.parse()?);
    }
    sort_types(&mut v);
    Ok(v)
}

fn classify(e: u32) -> SurfaceClass {
    match e {
        12 => SurfaceClass::Rational,
        24 => SurfaceClass::K3,
        e if e > 24 && e % 12 == 0 => SurfaceClass::HonestlyElliptic(e),
        _ => SurfaceClass::Other,
    }
}

/// Largest field order `Auto` extends to; beyond it places of degree ≥ 2 are
/// analyzed over their residue fields as with `Off`.
pub const AUTO_EXTENSION_LIMIT: u64 = 1 << 20;

pub fn analyze(model: &WModel) -> Result<SurfaceReport> {
    analyze_with(model, FieldExtension::Auto)
}

pub fn analyze_with(model: &WModel, ext: FieldExtension) -> Result<SurfaceReport> {
    let delta0 = model.discriminant();
    if delta0.is_zero() {
        return Err(Error::Degenerate);
    }
    let base = model.field().clone();
    let auto = base.is_finite()
        && ext == FieldExtension::Auto
        && (base.order().unwrap() as f64).powi(factor::splitting_degree(&delta0)? as i32)
            <= AUTO_EXTENSION_LIMIT as f64;
    let (field, embedding) = if auto {
        factor::extend_field(&delta0)?
    } else {
        (base.clone(), base.embedding_into(&base)?)
    };
    let model = if field == base {
        model.clone()
    } else {
        model.map_coeffs(&field, |v| embedding.map(v))?
    };
    let delta = model.discriminant();
    let mut fibres = Vec::new();
    let mut delta_min = delta.clone();
    let twelve = |g: &Poly, u: u32| g.pow(12 * u);

    if field.is_finite() {
        for (g, _) in factor::factor(&delta)? {
            let place = if g.degree() == Some(1) {
                Place::Finite(FieldElem::new(&field, field.neg(&g.coeff(0))))
            } else {
                Place::FiniteIrreducible(g.clone())
            };
            let local = tate_at(&model, &place)?;
            if local.u_valuation > 0 {
                delta_min = delta_min.div_exact(&twelve(&g, local.u_valuation)).unwrap();
            }
            if !local.kodaira.is_good() {
                fibres.push(Fibre { place, local });
            }
        }
    } else {
        let (roots, rest) = factor::roots(&delta)?;
        for (beta, _) in roots {
            let place = Place::Finite(FieldElem::new(&field, beta.clone()));
            let local = tate_at(&model, &place)?;
            if local.u_valuation > 0 {
                let g = Poly::linear(&field, &beta);
                delta_min = delta_min.div_exact(&twelve(&g, local.u_valuation)).unwrap();
            }
            if !local.kodaira.is_good() {
                fibres.push(Fibre { place, local });
            }
        }
        if !rest.is_constant() {
            for (s, _) in factor::squarefree_decomposition(&rest)? {
                for fr in tate_at_factor(model.coeffs(), &s, true)? {
                    if fr.result.u_valuation > 0 {
                        delta_min = delta_min
                            .div_exact(&twelve(&fr.factor, fr.result.u_valuation))
                            .unwrap();
                    }
                    if !fr.result.kodaira.is_good() {
                        let place = if fr.factor.degree() == Some(1) {
                            Place::Finite(FieldElem::new(&field, field.neg(&fr.factor.coeff(0))))
                        } else {
                            Place::FiniteIrreducible(fr.factor)
                        };
                        fibres.push(Fibre {
                            place,
                            local: fr.result,
                        });
                    }
                }
            }
        }
    }
    let inf = tate_at(&model, &Place::Infinity)?;
    if !inf.kodaira.is_good() {
        fibres.push(Fibre {
            place: Place::Infinity,
            local: inf,
        });
    }

    let euler_number = fibres
        .iter()
        .map(|f| f.local.v_delta_min * f.local.residue_degree)
        .sum();
    let conductor_degree = fibres
        .iter()
        .map(|f| f.local.conductor_exp * f.local.residue_degree)
        .sum();
    let j = model.j_invariant();
    let insep = if j.is_constant() {
        None
    } else if field.characteristic() == 0 {
        Some(0)
    } else {
        Some(insep_degree(&j)?)
    };
    let semistable = fibres.iter().all(|f| f.local.kodaira.is_multiplicative());
    let mut report = SurfaceReport {
        fibres,
        euler_number,
        surface_class: classify(euler_number),
        conductor_degree,
        j,
        insep_degree: insep,
        semistable,
        configuration: String::new(),
        working_field: field,
        embedding,
        delta_min,
        model,
    };
    report.configuration = configuration_string(&report.types());
    Ok(report)
}

/// Largest `d` with `j ∈ k(T^{p^d})`.
pub fn insep_degree(j: &RatFunc) -> Result<u32> {
    let f = j.field();
    let p = f.characteristic() as usize;
    if p == 0 {
        return Err(Error::WrongCharacteristic(
            "inseparability needs positive characteristic".into(),
        ));
    }
    if j.is_constant() {
        return Err(Error::Isotrivial);
    }
    let in_tp = |q: &Poly| {
        q.coeffs()
            .iter()
            .enumerate()
            .all(|(i, c)| i % p == 0 || f.is_zero(c))
    };
    let root = |q: &Poly| {
        Poly::new(
            f,
            q.coeffs()
                .iter()
                .step_by(p)
                .map(|c| f.pth_root(c))
                .collect(),
        )
    };
    let (mut num, mut den) = (j.num().clone(), j.den().clone());
    let mut d = 0;
    while in_tp(&num) && in_tp(&den) {
        num = root(&num);
        den = root(&den);
        d += 1;
    }
    Ok(d)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsVerdict {
    pub holds: bool,
    pub euler_number: u32,
    /// `6 p^d (deg N − 2)`.
    pub bound: i64,
    pub p_power: u64,
    pub conductor_degree: u32,
}

/// Checks `e ≤ 6 p^d (deg N − 2)`, with `p^d = 1` in characteristic 0.
pub fn pesenti_szpiro_check(report: &SurfaceReport) -> Result<PsVerdict> {
    let d = report.insep_degree.ok_or(Error::Isotrivial)?;
    let p = report.working_field.characteristic() as u64;
    let p_power = if p == 0 { 1 } else { p.pow(d) };
    let bound = 6 * p_power as i64 * (report.conductor_degree as i64 - 2);
    Ok(PsVerdict {
        holds: report.euler_number as i64 <= bound,
        euler_number: report.euler_number,
        bound,
        p_power,
        conductor_degree: report.conductor_degree,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DsCheck {
    pub m: u32,
    pub f: Poly,
    pub g: Poly,
    /// `deg(f^3 − g^2)`, `None` when `f^3 = g^2`.
    pub degree: Option<u32>,
    pub holds: bool,
    pub attained: bool,
}

/// Writes the model as `Y^2 = X^3 − 3fX − 2g` and measures `deg(f^3 − g^2)`
/// against `M + 1`, where `deg f = 2M`, `deg g = 3M`.
pub fn ds_degree_check(model: &WModel) -> Result<DsCheck> {
    let short = model.to_short()?;
    let field = short.field().clone();
    let inv = |n: i64| field.inv(&field.from_i64(n)).unwrap();
    let f = short.a4().scale(&field.neg(&inv(3)));
    let g = short.a6().scale(&field.neg(&inv(2)));
    let df = f.deg_i();
    if df <= 0 || df % 2 != 0 || g.deg_i() != 3 * df / 2 {
        return Err(Error::Precondition(format!(
            "short form has deg f = {df}, deg g = {}; need 2M and 3M",
            g.deg_i()
        )));
    }
    let m = (df / 2) as u32;
    let diff = &f.pow(3) - &g.pow(2);
    let degree = diff.degree().map(|d| d as u32);
    Ok(DsCheck {
        m,
        f,
        g,
        degree,
        holds: degree.is_none_or(|d| d > m),
        attained: degree == Some(m + 1),
    })
}

#[derive(Clone, Debug)]
pub struct SupersingularPlace {
    pub place: Place,
    pub v_j: i64,
    /// `v(j)/12` (rounded down when 12 does not divide `v(j)`).
    pub e: u32,
    pub divisible_by_12: bool,
    /// Smallest `i` with `4 ∤ i` and `γ_i ≠ 0` in `G(T) = Σ γ_i (T − ϑ)^i`.
    pub c_g: Option<u32>,
    pub h_condition: bool,
    pub c_condition: bool,
}

#[derive(Clone, Debug)]
pub struct SchweizerData {
    pub g: Poly,
    pub h: Poly,
    /// `(place, r_i, s_i)` for each finite bad place.
    pub bad: Vec<(Place, u32, u32)>,
    pub supersingular: Vec<SupersingularPlace>,
    pub holds: bool,
    pub working_field: Field,
}

/// Characteristic-2 conditions at the finite supersingular places.
pub fn schweizer_check(model: &WModel) -> Result<SchweizerData> {
    if model.field().characteristic() != 2 {
        return Err(Error::WrongCharacteristic(
            "supersingular-place criteria are implemented in characteristic 2 only".into(),
        ));
    }
    let j0 = model.j_invariant();
    if j0.is_constant() {
        return Err(Error::Isotrivial);
    }
    if insep_degree(&j0)? > 0 {
        return Err(Error::Precondition(
            "j is inseparable; apply to the Frobenius-minimal surface".into(),
        ));
    }
    let split = &model.discriminant() * j0.num();
    let (field, emb) = factor::extend_field(&split)?;
    let model = if &field == model.field() {
        model.clone()
    } else {
        model.map_coeffs(&field, |v| emb.map(v))?
    };
    let report = analyze_with(&model, FieldExtension::Off)?;
    let j = report.j.clone();
    let mut g = Poly::one(&field);
    let mut h = Poly::one(&field);
    let mut bad = Vec::new();
    for fib in &report.fibres {
        let Place::Finite(beta) = &fib.place else {
            continue;
        };
        let lin = Poly::linear(&field, beta.value());
        let v = j.valuation(&lin).expect("j is nonzero");
        let r = (-v).rem_euclid(4) as u32;
        let s = (-v).rem_euclid(2) as u32;
        g = &g * &lin.pow(r);
        h = &h * &lin.pow(s);
        bad.push((fib.place.clone(), r, s));
    }
    let hp = h.derivative();
    let mut supersingular = Vec::new();
    let (zeros, _) = factor::roots(j.num())?;
    for (theta, _) in zeros {
        let place = Place::Finite(FieldElem::new(&field, theta.clone()));
        if report.fibres.iter().any(|f| f.place == place) {
            continue;
        }
        let lin = Poly::linear(&field, &theta);
        let v_j = j.valuation(&lin).unwrap();
        let e = (v_j / 12) as u32;
        let gs = g.taylor_shift(&theta);
        let c_g = gs
            .coeffs()
            .iter()
            .enumerate()
            .find(|(i, c)| i % 4 != 0 && !field.is_zero(c))
            .map(|(i, _)| i as u32);
        let need = (3 * e).saturating_sub(1);
        let h_condition = hp.is_zero() || lin.pow(need).divides(&hp);
        let c_condition = c_g.is_none_or(|c| 3 * e <= c);
        supersingular.push(SupersingularPlace {
            place,
            v_j,
            e,
            divisible_by_12: v_j % 12 == 0,
            c_g,
            h_condition,
            c_condition,
        });
    }
    let holds = supersingular
        .iter()
        .all(|s| s.divisible_by_12 && s.h_condition && s.c_condition);
    Ok(SchweizerData {
        g,
        h,
        bad,
        supersingular,
        holds,
        working_field: field,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e9(f: &Field) -> WModel {
        let z = Poly::zero(f);
        WModel::long(Poly::t(f), z.clone(), Poly::one(f), z.clone(), z, None).unwrap()
    }

    #[test]
    fn e9_is_rational_with_i9() {
        let q = Field::rationals();
        let r = analyze(&e9(&q)).unwrap();
        assert_eq!(r.configuration, "[9,1,1,1]");
        assert_eq!(r.surface_class, SurfaceClass::Rational);
        let f2 = Field::prime(2).unwrap();
        let r = analyze(&e9(&f2)).unwrap();
        assert_eq!(r.configuration, "[9,1,1,1]");
        assert_eq!(r.working_field.order(), Some(4));
        assert_eq!(r.insep_degree, Some(0));
    }

    #[test]
    fn field_extension_off_keeps_places() {
        let f2 = Field::prime(2).unwrap();
        let r = analyze_with(&e9(&f2), FieldExtension::Off).unwrap();
        assert_eq!(r.configuration, "[9,1,1,1]");
        assert!(r
            .fibres
            .iter()
            .any(|f| matches!(f.place, Place::FiniteIrreducible(_))));
    }

    #[test]
    fn configuration_parsing() {
        let a = parse_configuration("[I_19,II,III]").unwrap();
        let b = parse_configuration("[19,III,II]").unwrap();
        assert_eq!(a, b);
        assert_eq!(configuration_string(&a), "[19,III,II]");
    }

    #[test]
    fn insep_of_frobenius_pullback() {
        let f2 = Field::prime(2).unwrap();
        let j = RatFunc::new(
            Poly::monomial(&f2, f2.one(), 24),
            Poly::from_i64s(&f2, &[1, 0, 0, 0, 0, 0, 1]),
        )
        .unwrap();
        assert_eq!(insep_degree(&j).unwrap(), 1);
        assert_eq!(insep_degree(&RatFunc::t(&f2)).unwrap(), 0);
        assert_eq!(insep_degree(&RatFunc::one(&f2)), Err(Error::Isotrivial));
    }

    #[test]
    fn rational_boundary_of_pesenti_szpiro() {
        let q = Field::rationals();
        let r = analyze(&e9(&q)).unwrap();
        let v = pesenti_szpiro_check(&r).unwrap();
        assert_eq!(v.bound, 12);
        assert!(v.holds);
    }
}
