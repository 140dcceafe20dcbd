//! The versioned TOML model-description format.
//!
//! ```toml
//! version = 1
//! id = "P14"
//! characteristic = 0
//! form = "extended"
//! a2 = [0, 2, 0, 1]
//! a4 = [-2, 0, -2]
//! a6 = [0, 1]
//! ```
//!
//! Coefficient arrays list polynomial coefficients lowest degree first. Entries
//! are integers or expression strings (fractions, parameters, `z`).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr;
use crate::field::{Field, Value};
use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::weierstrass::WModel;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coef {
    Int(i64),
    Expr(String),
}

impl Coef {
    pub fn eval(&self, f: &Field, vars: &BTreeMap<String, Value>) -> Result<Value> {
        match self {
            Coef::Int(n) => Ok(f.from_i64(*n)),
            Coef::Expr(s) => expr::eval(s, f, vars),
        }
    }

    fn from_value(f: &Field, v: &Value) -> Coef {
        let s = f.format_value(v);
        s.parse::<i64>().map(Coef::Int).unwrap_or(Coef::Expr(s))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    Long,
    Extended,
    Short,
}

impl Form {
    /// Coefficient names allowed in this form.
    pub fn keys(self) -> &'static [&'static str] {
        match self {
            Form::Long => &["a1", "a2", "a3", "a4", "a6"],
            Form::Extended => &["a2", "a4", "a6"],
            Form::Short => &["a4", "a6"],
        }
    }
}

/// Either an explicit list of values or a keyword (`"nonzero"`, `"all"`)
/// enumerating a finite field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Sampling {
    List(Vec<Coef>),
    Keyword(String),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Special {
    pub parameters: BTreeMap<String, Coef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub configuration: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub infinity: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expect {
    /// Configuration of a generic sample.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub configuration: Option<String>,
    /// Exact fibre type at infinity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub infinity: Option<String>,
    /// Fibre at infinity of the same family with index at least this one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub infinity_at_least: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wild_at_infinity: Option<u32>,
    /// Minimal discriminant, compared up to a nonzero constant.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Vec<Coef>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_num: Option<Vec<Coef>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_den: Option<Vec<Coef>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler_number: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub insep_degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface_class: Option<String>,
    /// Constant points `(x, y)` that must lie on every sample.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<[Coef; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub special: Vec<Special>,
    /// Primes at which the reduction must show the same configuration and
    /// discriminant (models over `Q` only).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reduce_mod: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapeSlot {
    pub degree: u32,
    #[serde(default)]
    pub monic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchSection {
    /// Fibre type at infinity, e.g. `"14*"` or `"19"`.
    pub target: String,
    /// Require exactly the target instead of the target or larger in its family.
    #[serde(default)]
    pub exact: bool,
    pub shape: BTreeMap<String, ShapeSlot>,
    #[serde(default)]
    pub normalizations: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    /// Degree of the extension over which the normalization group acts.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit_extension: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub characteristic: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension_modulus: Option<Vec<u32>>,
    pub form: Form,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flip_weight: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a1: Option<Vec<Coef>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a2: Option<Vec<Coef>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a3: Option<Vec<Coef>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a4: Option<Vec<Coef>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a6: Option<Vec<Coef>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub parameters: BTreeMap<String, Sampling>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Expect>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchSection>,
}

pub type Bindings = BTreeMap<String, Value>;

pub fn poly_from_coefs(f: &Field, c: &[Coef], vars: &Bindings) -> Result<Poly> {
    let v = c
        .iter()
        .map(|x| x.eval(f, vars))
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::new(f, v))
}

pub fn coefs_from_poly(p: &Poly) -> Vec<Coef> {
    p.coeffs()
        .iter()
        .map(|v| Coef::from_value(p.field(), v))
        .collect()
}

impl ModelFile {
    pub fn parse(src: &str) -> Result<ModelFile> {
        let mf: ModelFile = toml::from_str(src).map_err(|e| Error::Parse(e.to_string()))?;
        mf.validate()?;
        Ok(mf)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("model files always serialize")
    }

    fn slot(&self, key: &str) -> Option<&Vec<Coef>> {
        match key {
            "a1" => self.a1.as_ref(),
            "a2" => self.a2.as_ref(),
            "a3" => self.a3.as_ref(),
            "a4" => self.a4.as_ref(),
            "a6" => self.a6.as_ref(),
            _ => None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.version != FORMAT_VERSION {
            return Err(Error::Parse(format!(
                "unsupported format version {} (expected {FORMAT_VERSION})",
                self.version
            )));
        }
        let allowed = self.form.keys();
        for k in ["a1", "a2", "a3", "a4", "a6"] {
            if self.slot(k).is_some() && !allowed.contains(&k) {
                return Err(Error::Parse(format!(
                    "coefficient {k} not allowed in {:?} form",
                    self.form
                )));
            }
        }
        if let Some(s) = &self.search {
            for k in s.shape.keys() {
                if !allowed.contains(&k.as_str()) {
                    return Err(Error::Parse(format!(
                        "search shape slot {k} not allowed in {:?} form",
                        self.form
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> Result<Field> {
        match (self.characteristic, &self.extension_modulus) {
            (0, None) => Ok(Field::rationals()),
            (0, Some(_)) => Err(Error::Parse(
                "extension_modulus needs a positive characteristic".into(),
            )),
            (p, None) => Field::prime(p),
            (p, Some(m)) => Field::extension(p, m),
        }
    }

    /// All parameter assignments (cartesian product, in key order).
    pub fn samples(&self, f: &Field) -> Result<Vec<Bindings>> {
        let mut out = vec![Bindings::new()];
        for (name, s) in &self.parameters {
            let values: Vec<Value> = match s {
                Sampling::List(v) => v
                    .iter()
                    .map(|c| c.eval(f, &Bindings::new()))
                    .collect::<Result<_>>()?,
                Sampling::Keyword(k) if f.is_finite() && (k == "all" || k == "nonzero") => {
                    let mut e = f.elements();
                    if k == "nonzero" {
                        e.retain(|x| !f.is_zero(x));
                    }
                    e
                }
                Sampling::Keyword(k) => {
                    return Err(Error::Parse(format!(
                        "unknown sampling {k:?} for parameter {name}"
                    )))
                }
            };
            let mut next = Vec::with_capacity(out.len() * values.len());
            for b in &out {
                for v in &values {
                    let mut nb = b.clone();
                    nb.insert(name.clone(), v.clone());
                    next.push(nb);
                }
            }
            out = next;
        }
        Ok(out)
    }

    pub fn poly(&self, key: &str, f: &Field, vars: &Bindings) -> Result<Poly> {
        match self.slot(key) {
            Some(c) => poly_from_coefs(f, c, vars),
            None => Ok(Poly::zero(f)),
        }
    }

    pub fn model_with(&self, vars: &Bindings) -> Result<WModel> {
        let f = self.field()?;
        let g = |k: &str| self.poly(k, &f, vars);
        match self.form {
            Form::Long => WModel::long(
                g("a1")?,
                g("a2")?,
                g("a3")?,
                g("a4")?,
                g("a6")?,
                self.flip_weight,
            ),
            Form::Extended => WModel::extended(g("a2")?, g("a4")?, g("a6")?, self.flip_weight),
            Form::Short => WModel::short(g("a4")?, g("a6")?, self.flip_weight),
        }
    }

    /// The model for a file without parameters.
    pub fn model(&self) -> Result<WModel> {
        if !self.parameters.is_empty() {
            return Err(Error::Parse("model has parameters; choose a sample".into()));
        }
        self.model_with(&Bindings::new())
    }

    pub fn expected_delta(&self, f: &Field, vars: &Bindings) -> Result<Option<Poly>> {
        self.expect
            .as_ref()
            .and_then(|e| e.delta.as_ref())
            .map(|c| poly_from_coefs(f, c, vars))
            .transpose()
    }

    pub fn expected_j(&self, f: &Field, vars: &Bindings) -> Result<Option<RatFunc>> {
        let Some(e) = &self.expect else {
            return Ok(None);
        };
        match (&e.j_num, &e.j_den) {
            (None, None) => Ok(None),
            (n, d) => {
                let num = match n {
                    Some(c) => poly_from_coefs(f, c, vars)?,
                    None => Poly::one(f),
                };
                let den = match d {
                    Some(c) => poly_from_coefs(f, c, vars)?,
                    None => Poly::one(f),
                };
                Ok(Some(RatFunc::new(num, den)?))
            }
        }
    }

    /// A file describing `model` (no parameters or expectations).
    pub fn from_model(model: &WModel, id: Option<String>) -> ModelFile {
        let f = model.field();
        let form = if model.is_short() {
            Form::Short
        } else if model.is_extended() {
            Form::Extended
        } else {
            Form::Long
        };
        let mut mf = ModelFile {
            version: FORMAT_VERSION,
            id,
            description: None,
            characteristic: f.characteristic(),
            extension_modulus: f.extension_modulus(),
            form,
            flip_weight: Some(model.flip_weight()),
            a1: None,
            a2: None,
            a3: None,
            a4: None,
            a6: None,
            parameters: BTreeMap::new(),
            expect: None,
            search: None,
        };
        for (k, key) in ["a1", "a2", "a3", "a4", "a6"].iter().enumerate() {
            let p = &model.coeffs()[k];
            if p.is_zero() || !form.keys().contains(key) {
                continue;
            }
            let c = Some(coefs_from_poly(p));
            match k {
                0 => mf.a1 = c,
                1 => mf.a2 = c,
                2 => mf.a3 = c,
                3 => mf.a4 = c,
                _ => mf.a6 = c,
            }
        }
        mf
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P14: &str = r#"
version = 1
id = "P14"
characteristic = 0
form = "extended"
a2 = [0, 2, 0, 1]
a4 = [-2, 0, -2]
a6 = [0, 1]
"#;

    #[test]
    fn parse_and_roundtrip() {
        let mf = ModelFile::parse(P14).unwrap();
        let m = mf.model().unwrap();
        assert_eq!(m.a2().to_string(), "T^3 + 2*T");
        let back = ModelFile::parse(&ModelFile::from_model(&m, mf.id.clone()).to_toml()).unwrap();
        assert_eq!(back.model().unwrap(), m);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let bad = format!("{P14}colour = \"red\"\n");
        assert!(matches!(ModelFile::parse(&bad), Err(Error::Parse(_))));
        let wrong_slot = P14.replace("a6 = [0, 1]", "a6 = [0, 1]\na1 = [1]");
        assert!(ModelFile::parse(&wrong_slot).is_err());
        assert!(ModelFile::parse(&P14.replace("version = 1", "version = 2")).is_err());
    }

    #[test]
    fn parameters_over_extension() {
        let src = r#"
version = 1
characteristic = 2
extension_modulus = [1, 1, 1]
form = "long"
a1 = [0, 1]
a2 = [0, 0, 0, "lambda"]
a3 = [1]
a6 = [0, "lambda"]

[parameters]
lambda = "nonzero"
"#;
        let mf = ModelFile::parse(src).unwrap();
        let f = mf.field().unwrap();
        let s = mf.samples(&f).unwrap();
        assert_eq!(s.len(), 3);
        let m = mf.model_with(&s[1]).unwrap();
        assert_eq!(m.a2().degree(), Some(3));
        assert!(mf.model().is_err());
    }
}
