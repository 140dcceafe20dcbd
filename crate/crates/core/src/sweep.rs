//! Randomized consistency sweeps: wild ramification bounds in residue
//! characteristics 2 and 3, the characteristic-2 discriminant formula, the
//! degree bound for `f^3 - g^2`, and the global Euler number and
//! Pesenti–Szpiro checks on every swept surface.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::localfibre::{wild_table_bound, KodairaType, WildBound};
use crate::poly::Poly;
use crate::surface::{analyze_with, pesenti_szpiro_check, ds_degree_check, FieldExtension};
use crate::transforms::minimalize_all;
use crate::weierstrass::{WModel, WEIGHTS};

fn rand_poly(f: &Field, rng: &mut ChaCha8Rng, deg: i64, lead_nonzero: bool) -> Poly {
    if deg < 0 {
        return Poly::zero(f);
    }
    let q = f.order().unwrap();
    let mut c: Vec<_> = (0..=deg).map(|_| f.element(rng.random_range(0..q))).collect();
    if lead_nonzero {
        c[deg as usize] = f.element(rng.random_range(1..q));
    }
    Poly::new(f, c)
}

/// Row of the wild-index table a fibre type belongs to, with its bound.
/// Rows whose bound is zero are not listed.
pub fn wild_row(t: KodairaType, p: u32) -> Option<(&'static str, u32)> {
    let WildBound::AtLeast(n) = wild_table_bound(t, p) else {
        return None;
    };
    let name = match t {
        KodairaType::II => "II",
        KodairaType::III => "III",
        KodairaType::IV => "IV",
        KodairaType::IStar(1) => "I1*",
        KodairaType::IStar(_) => "In* (n!=1)",
        KodairaType::IVStar => "IV*",
        KodairaType::IIIStar => "III*",
        KodairaType::IIStar => "II*",
        KodairaType::I(_) => return None,
    };
    Some((name, n))
}

/// Table rows with a positive bound in characteristic `p`.
pub fn wild_rows(p: u32) -> Vec<(&'static str, u32)> {
    let all = [
        KodairaType::II,
        KodairaType::III,
        KodairaType::IV,
        KodairaType::IStar(0),
        KodairaType::IStar(1),
        KodairaType::IVStar,
        KodairaType::IIIStar,
        KodairaType::IIStar,
    ];
    let mut rows: Vec<_> = all.into_iter().filter_map(|t| wild_row(t, p)).collect();
    rows.dedup();
    rows
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct WildSweep {
    pub field: String,
    pub characteristic: u32,
    pub models: usize,
    pub fibres: usize,
    /// Fibres whose wild index misses the table bound, or additive fibres
    /// with too small a discriminant valuation.
    pub violations: Vec<String>,
    /// For each row with a positive bound: a model where the bound is attained.
    pub witnesses: BTreeMap<String, String>,
    /// Models with `I_0*` attaining `w = 2` (characteristic 2 only).
    pub i0star_witness: Option<String>,
    /// Counts of fibre types seen, by short name.
    pub types_seen: BTreeMap<String, usize>,
    pub euler_violations: Vec<String>,
    pub ps_checked: usize,
    pub ps_violations: Vec<String>,
}

impl WildSweep {
    pub fn missing_rows(&self) -> Vec<&'static str> {
        wild_rows(self.characteristic)
            .into_iter()
            .map(|(r, _)| r)
            .filter(|r| !self.witnesses.contains_key(*r))
            .collect()
    }
}

/// Valuation profiles at `T = 0`: lower bounds for `v(a1), …, v(a6)`.
/// The second and third push towards `I_n*` and the starred exceptional types.
const PROFILES: [[u32; 5]; 4] = [
    [0, 0, 0, 0, 0],
    [1, 1, 1, 2, 2],
    [1, 1, 2, 2, 3],
    [1, 2, 2, 3, 5],
];

/// Random model with flip weight 2 and extra vanishing at `T = 0`.
fn biased_model(f: &Field, rng: &mut ChaCha8Rng) -> Option<WModel> {
    let profile = PROFILES[rng.random_range(0..PROFILES.len())];
    let even = f.characteristic() != 2;
    let a: [Poly; 5] = std::array::from_fn(|i| {
        if even && (i == 0 || i == 2) {
            return Poly::zero(f);
        }
        let w = WEIGHTS[i] as i64;
        let k = profile[i] + rng.random_range(0..=2u32);
        let k = (k as i64).min(2 * w);
        rand_poly(f, rng, 2 * w - k, false).shift(k as usize)
    });
    WModel::new(a, Some(2)).ok()
}

/// Draws `n` non-degenerate models over `field` (characteristic 2 or 3) and
/// checks every fibre of every model.
pub fn wild_sweep(field: &Field, n: usize, seed: u64) -> Result<WildSweep> {
    let p = field.characteristic();
    if p != 2 && p != 3 {
        return Err(Error::WrongCharacteristic(format!(
            "wild sweeps run in characteristic 2 or 3, not {p}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = WildSweep {
        field: field.to_string(),
        characteristic: p,
        ..Default::default()
    };
    let min_additive = if p == 2 { 4 } else { 3 };
    while out.models < n {
        let Some(model) = biased_model(field, &mut rng) else {
            continue;
        };
        out.models += 1;
        let rep = analyze_with(&model, FieldExtension::Off)?;
        for fib in &rep.fibres {
            let l = &fib.local;
            out.fibres += 1;
            *out.types_seen.entry(l.kodaira.short_name()).or_default() += 1;
            if !wild_table_bound(l.kodaira, p).admits(l.wild_index) {
                out.violations.push(format!(
                    "{model} at {}: {} with w = {}",
                    fib.place, l.kodaira, l.wild_index
                ));
            }
            if l.kodaira.is_additive() && l.v_delta_min < min_additive {
                out.violations.push(format!(
                    "{model} at {}: additive {} with v(Δ) = {}",
                    fib.place, l.kodaira, l.v_delta_min
                ));
            }
            if let Some((row, bound)) = wild_row(l.kodaira, p) {
                if l.wild_index == bound {
                    out.witnesses
                        .entry(row.to_string())
                        .or_insert_with(|| format!("{model} at {}: {}", fib.place, l.kodaira));
                }
            }
            if p == 2 && l.kodaira == KodairaType::IStar(0) && l.wild_index == 2 {
                out.i0star_witness
                    .get_or_insert_with(|| format!("{model} at {}", fib.place));
            }
        }
        let m = match minimalize_all(&model) {
            Ok(x) => x.flip_weight(),
            Err(Error::ConstantModel) => 0,
            Err(e) => return Err(e),
        };
        if rep.euler_number != 12 * m {
            out.euler_violations.push(format!(
                "{model}: Σ v(Δ) = {} but the minimal weight is {m}",
                rep.euler_number
            ));
        }
        if rep.insep_degree.is_some() {
            out.ps_checked += 1;
            let v = pesenti_szpiro_check(&rep)?;
            if !v.holds {
                out.ps_violations.push(format!(
                    "{model}: e = {} exceeds {}",
                    v.euler_number, v.bound
                ));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DiscriminantSweep {
    pub field: String,
    pub models: usize,
    pub mismatches: Vec<String>,
}

/// Compares the universal discriminant with the characteristic-2 formula on
/// random long-form models with flip weight 2.
pub fn char2_discriminant_sweep(field: &Field, n: usize, seed: u64) -> Result<DiscriminantSweep> {
    if field.characteristic() != 2 {
        return Err(Error::WrongCharacteristic("need characteristic 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = DiscriminantSweep {
        field: field.to_string(),
        ..Default::default()
    };
    while out.models < n {
        let a: [Poly; 5] =
            std::array::from_fn(|i| rand_poly(field, &mut rng, 2 * WEIGHTS[i] as i64, false));
        let Ok(model) = WModel::new(a, Some(2)) else {
            continue;
        };
        out.models += 1;
        let d2 = model.discriminant_char2()?;
        if d2 != model.discriminant() {
            out.mismatches.push(format!("{model}: {d2} vs {}", model.discriminant()));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DsSweep {
    pub field: String,
    pub m: u32,
    pub samples: usize,
    /// Draws with `f^3 = g^2`, which are excluded.
    pub degenerate: usize,
    /// Smallest `deg(f^3 - g^2)` seen.
    pub min_degree: Option<u32>,
    pub violations: Vec<String>,
}

/// Draws `(f, g)` with `deg f = 2M`, `deg g = 3M`, alternating between
/// uniform samples and near-cancelling ones built around `f ≈ h^2`, `g ≈ h^3`.
pub fn ds_sweep(field: &Field, m: u32, n: usize, seed: u64) -> Result<DsSweep> {
    let p = field.characteristic();
    if p == 0 || p == 2 || p == 3 {
        return Err(Error::WrongCharacteristic(format!(
            "degree sweeps need a finite field of characteristic at least 5, not {p}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = DsSweep {
        field: field.to_string(),
        m,
        ..Default::default()
    };
    let m_ = m as i64;
    let three_halves = field.div(&field.from_i64(3), &field.from_i64(2))?;
    let mut draws = 0usize;
    while out.samples < n {
        draws += 1;
        let (f, g) = if draws.is_multiple_of(2) {
            (
                rand_poly(field, &mut rng, 2 * m_, true),
                rand_poly(field, &mut rng, 3 * m_, true),
            )
        } else {
            let h = rand_poly(field, &mut rng, m_, true);
            let dd = rng.random_range(-1..m_);
            let delta = rand_poly(field, &mut rng, dd, false);
            let de = rng.random_range(-1..2 * m_);
            let eps = rand_poly(field, &mut rng, de, false);
            let f = &(&h * &h) + &delta;
            let g = &(&(&(&h * &h) * &h) + &(&h * &delta).scale(&three_halves)) + &eps;
            (f, g)
        };
        if f.deg_i() != 2 * m_ || g.deg_i() != 3 * m_ {
            continue;
        }
        let a4 = f.scale(&field.from_i64(-3));
        let a6 = g.scale(&field.from_i64(-2));
        let model = match WModel::short(a4, a6, Some(2)) {
            Ok(x) => x,
            Err(Error::Degenerate) => {
                out.degenerate += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        out.samples += 1;
        let c = ds_degree_check(&model)?;
        if let Some(d) = c.degree {
            out.min_degree = Some(out.min_degree.map_or(d, |x| x.min(d)));
        }
        if !c.holds {
            out.violations
                .push(format!("f = {}, g = {}: degree {:?}", c.f, c.g, c.degree));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_rows() {
        assert_eq!(
            wild_rows(2),
            vec![("II", 2), ("III", 1), ("In* (n!=1)", 2), ("I1*", 1), ("III*", 1), ("II*", 1)]
        );
        assert_eq!(wild_rows(3).len(), 4);
    }

    #[test]
    fn small_wild_sweeps_are_clean() {
        for (p, n) in [(2, 1), (3, 1), (2, 2)] {
            let f = Field::finite(p, n).unwrap();
            let s = wild_sweep(&f, 200, 7).unwrap();
            assert_eq!(s.models, 200);
            assert!(s.violations.is_empty(), "{:?}", s.violations);
            assert!(s.euler_violations.is_empty(), "{:?}", s.euler_violations);
            assert!(s.ps_violations.is_empty(), "{:?}", s.ps_violations);
        }
    }

    #[test]
    fn char2_formula_small() {
        let f = Field::finite(2, 2).unwrap();
        let s = char2_discriminant_sweep(&f, 30, 1).unwrap();
        assert!(s.mismatches.is_empty());
    }

    #[test]
    fn ds_small() {
        let f = Field::prime(7).unwrap();
        let s = ds_sweep(&f, 3, 300, 3).unwrap();
        assert!(s.violations.is_empty());
        assert!(s.min_degree.unwrap() > 3);
        assert!(ds_sweep(&Field::prime(3).unwrap(), 3, 1, 0).is_err());
    }
}
