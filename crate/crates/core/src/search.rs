//! Exhaustive searches over small finite fields for surfaces with a large
//! fibre at infinity, with orbit counting under coordinate normalizations.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Embedding, Field, Value};
use crate::localfibre::{tate_at, wild_table_bound, KodairaType, Place, WildBound};
use crate::modelfile::{Form, ModelFile};
use crate::poly::Poly;
use crate::transforms::{apply_coord_change, CoordChange};
use crate::weierstrass::{discriminant_of, WModel, WEIGHTS};

pub const DEFAULT_BUDGET: u64 = 100_000_000;
/// Environment variable that overrides [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "KODAIRA_SEARCH_BUDGET";
/// Candidates per work unit. Chunks are contiguous index ranges.
pub const CHUNK: u64 = 4096;

const KEYS: [&str; 5] = ["a1", "a2", "a3", "a4", "a6"];

/// Budget from the environment, falling back to the default.
pub fn default_budget() -> u64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    TTranslate,
    TScale,
    XTranslate,
    XyScale,
}

impl FromStr for Normalization {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "t-translate" => Normalization::TTranslate,
            "t-scale" => Normalization::TScale,
            "x-translate" => Normalization::XTranslate,
            "xy-scale" => Normalization::XyScale,
            _ => return Err(Error::Parse(format!("unknown normalization {s:?}"))),
        })
    }
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalization::TTranslate => "t-translate",
            Normalization::TScale => "t-scale",
            Normalization::XTranslate => "x-translate",
            Normalization::XyScale => "xy-scale",
        })
    }
}

/// Fibre condition at infinity: exactly `kodaira`, or the same family with
/// index at least that of `kodaira`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Target {
    pub kodaira: KodairaType,
    pub exact: bool,
}

impl Target {
    pub fn accepts(&self, t: KodairaType) -> bool {
        if self.exact {
            return t == self.kodaira;
        }
        match (self.kodaira, t) {
            (KodairaType::I(a), KodairaType::I(b)) => b >= a,
            (KodairaType::IStar(a), KodairaType::IStar(b)) => b >= a,
            (a, b) => a == b,
        }
    }

    /// Smallest `e + w` any accepted fibre can have in characteristic `p`.
    pub fn min_valuation(&self, p: u32) -> u32 {
        let cost = |t: KodairaType| {
            t.euler_number()
                + match wild_table_bound(t, p) {
                    WildBound::AlwaysZero => 0,
                    WildBound::AtLeast(n) => n,
                }
        };
        if self.exact {
            return cost(self.kodaira);
        }
        // wild bounds are constant from index 2 on, so two steps suffice
        match self.kodaira {
            KodairaType::I(n) => (n..n + 3).map(|k| cost(KodairaType::I(k))).min().unwrap(),
            KodairaType::IStar(n) => (n..n + 3)
                .map(|k| cost(KodairaType::IStar(k)))
                .min()
                .unwrap(),
            t => cost(t),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exact {
            write!(f, "{}", self.kodaira.short_name())
        } else {
            write!(f, ">={}", self.kodaira.short_name())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Slot {
    /// Position in `[a1, a2, a3, a4, a6]`.
    pub index: usize,
    pub degree: u32,
    pub monic: bool,
}

impl Slot {
    fn free(&self) -> u32 {
        self.degree + 1 - self.monic as u32
    }
}

#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub field: Field,
    pub flip_weight: u32,
    /// Free coefficients, in the order that defines the candidate index.
    pub slots: Vec<Slot>,
    /// Coefficients outside the slots.
    pub fixed: [Poly; 5],
    /// Whether `a1` and `a3` vanish identically on the whole shape.
    pub even_form: bool,
    pub normalizations: Vec<Normalization>,
    /// The normalization group acts with parameters from this extension.
    pub orbit_field: Field,
    pub target: Target,
    pub budget: u64,
}

impl SearchSpec {
    /// Reads the `search` section. `budget` overrides the file and the environment.
    pub fn from_model_file(mf: &ModelFile, budget: Option<u64>) -> Result<SearchSpec> {
        let s = mf
            .search
            .as_ref()
            .ok_or_else(|| Error::Precondition("model file has no search section".into()))?;
        let field = mf.field()?;
        if !field.is_finite() {
            return Err(Error::Precondition("searches need a finite field".into()));
        }
        if !mf.parameters.is_empty() {
            return Err(Error::Precondition(
                "search files cannot have parameters".into(),
            ));
        }
        let allowed = mf.form.keys();
        let mut slots = Vec::new();
        for (key, slot) in &s.shape {
            if !allowed.contains(&key.as_str()) {
                return Err(Error::Parse(format!(
                    "shape slot {key} is not a coefficient of the {:?} form",
                    mf.form
                )));
            }
            let index = KEYS.iter().position(|k| k == key).unwrap();
            slots.push(Slot {
                index,
                degree: slot.degree,
                monic: slot.monic,
            });
        }
        slots.sort_by_key(|s| s.index);
        let empty = BTreeMap::new();
        let mut fixed: [Poly; 5] = std::array::from_fn(|_| Poly::zero(&field));
        for (i, p) in fixed.iter_mut().enumerate() {
            if !slots.iter().any(|s| s.index == i) && allowed.contains(&KEYS[i]) {
                *p = mf.poly(KEYS[i], &field, &empty)?;
            }
        }
        let flip_weight = match mf.flip_weight {
            Some(m) => m,
            None => (0..5)
                .map(|i| {
                    let d = slots
                        .iter()
                        .find(|s| s.index == i)
                        .map(|s| s.degree as i64)
                        .unwrap_or(fixed[i].deg_i());
                    if d < 0 {
                        1
                    } else {
                        (d as u32).div_ceil(WEIGHTS[i])
                    }
                })
                .max()
                .unwrap()
                .max(1),
        };
        for sl in &slots {
            if sl.degree > flip_weight * WEIGHTS[sl.index] {
                return Err(Error::InvalidModel(format!(
                    "slot {} of degree {} exceeds flip weight {flip_weight}",
                    KEYS[sl.index], sl.degree
                )));
            }
        }
        let target = Target {
            kodaira: s.target.parse()?,
            exact: s.exact,
        };
        let normalizations = s
            .normalizations
            .iter()
            .map(|n| n.parse())
            .collect::<Result<Vec<Normalization>>>()?;
        let even_form = mf.form != Form::Long
            || [0, 2]
                .iter()
                .all(|&i| fixed[i].is_zero() && !slots.iter().any(|s| s.index == i));
        let k = s.orbit_extension.unwrap_or(1);
        if k == 0 {
            return Err(Error::Parse("orbit_extension must be positive".into()));
        }
        let orbit_field = if k == 1 {
            field.clone()
        } else {
            Field::finite(field.characteristic(), field.degree() * k)?
        };
        Ok(SearchSpec {
            orbit_field,
            field,
            flip_weight,
            slots,
            fixed,
            even_form,
            normalizations,
            target,
            budget: budget.or(s.budget).unwrap_or_else(default_budget),
        })
    }

    pub fn free_coefficients(&self) -> u32 {
        self.slots.iter().map(Slot::free).sum()
    }

    /// `q^free`, saturating into `u128`.
    pub fn candidate_count(&self) -> u128 {
        let q = self.field.order().unwrap() as u128;
        (0..self.free_coefficients()).fold(1u128, |acc, _| acc.saturating_mul(q))
    }

    /// Upper bound on `deg Δ` for any candidate that can meet the target.
    pub fn delta_degree_bound(&self) -> i64 {
        12 * self.flip_weight as i64 - self.target.min_valuation(self.field.characteristic()) as i64
    }

    /// Coefficients of candidate `idx`; the first free coefficient is the most significant digit.
    pub fn candidate(&self, mut idx: u64) -> [Poly; 5] {
        let q = self.field.order().unwrap();
        let n = self.free_coefficients() as usize;
        let mut digits = vec![0u64; n];
        for d in digits.iter_mut().rev() {
            *d = idx % q;
            idx /= q;
        }
        let mut a = self.fixed.clone();
        let mut pos = 0;
        for s in &self.slots {
            let mut c: Vec<Value> = digits[pos..pos + s.free() as usize]
                .iter()
                .map(|&d| self.field.element(d))
                .collect();
            pos += s.free() as usize;
            if s.monic {
                c.push(self.field.one());
            }
            a[s.index] = Poly::new(&self.field, c);
        }
        a
    }

    /// Inverse of [`Self::candidate`]; `None` if `a` is outside the shape.
    pub fn index_of(&self, a: &[Poly; 5]) -> Option<u64> {
        let q = self.field.order().unwrap();
        for i in 0..5 {
            if !self.slots.iter().any(|s| s.index == i) && a[i] != self.fixed[i] {
                return None;
            }
        }
        let mut idx = 0u64;
        for s in &self.slots {
            let p = &a[s.index];
            if p.deg_i() > s.degree as i64 {
                return None;
            }
            if s.monic && p.coeff(s.degree as usize) != self.field.one() {
                return None;
            }
            for k in 0..s.free() as usize {
                idx = idx * q + p.coeff(k).fin() as u64;
            }
        }
        Some(idx)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Survivor {
    pub index: u64,
    pub model: WModel,
    pub infinity: KodairaType,
    pub wild_index: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChunkOutcome {
    pub degenerate: u64,
    pub stage1: u64,
    pub survivors: Vec<Survivor>,
}

impl ChunkOutcome {
    fn merge(mut self, other: ChunkOutcome) -> ChunkOutcome {
        self.degenerate += other.degenerate;
        self.stage1 += other.stage1;
        self.survivors.extend(other.survivors);
        self
    }
}

/// Both filter stages on one contiguous index range.
pub fn scan_range(spec: &SearchSpec, range: std::ops::Range<u64>) -> Result<ChunkOutcome> {
    let bound = spec.delta_degree_bound();
    let mut out = ChunkOutcome::default();
    for idx in range {
        let a = spec.candidate(idx);
        let delta = discriminant_of(&a);
        if delta.is_zero() {
            out.degenerate += 1;
            continue;
        }
        if delta.deg_i() > bound {
            continue;
        }
        out.stage1 += 1;
        let model = WModel::new(a, Some(spec.flip_weight))?;
        let r = tate_at(&model, &Place::Infinity)?;
        if spec.target.accepts(r.kodaira) {
            out.survivors.push(Survivor {
                index: idx,
                model,
                infinity: r.kodaira,
                wild_index: r.wild_index,
            });
        }
    }
    Ok(out)
}

fn chunks(total: u64) -> Vec<std::ops::Range<u64>> {
    (0..total.div_ceil(CHUNK))
        .map(|c| c * CHUNK..((c + 1) * CHUNK).min(total))
        .collect()
}

fn checked_total(spec: &SearchSpec) -> Result<u64> {
    let needed = spec.candidate_count();
    if needed > spec.budget as u128 {
        return Err(Error::BudgetExceeded {
            needed,
            budget: spec.budget,
        });
    }
    Ok(needed as u64)
}

/// Single-threaded scan over all chunks in index order.
pub fn scan_sequential(spec: &SearchSpec) -> Result<ChunkOutcome> {
    let total = checked_total(spec)?;
    chunks(total)
        .into_iter()
        .try_fold(ChunkOutcome::default(), |acc, r| {
            Ok(acc.merge(scan_range(spec, r)?))
        })
}

/// Chunked scan on a rayon pool; `threads = 0` uses rayon's default.
/// Chunk results are merged in index order, so the outcome equals the sequential one.
#[cfg(feature = "parallel")]
pub fn scan_parallel(spec: &SearchSpec, threads: usize) -> Result<ChunkOutcome> {
    use rayon::prelude::*;
    let total = checked_total(spec)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?;
    let parts: Vec<Result<ChunkOutcome>> = pool.install(|| {
        chunks(total)
            .into_par_iter()
            .map(|r| scan_range(spec, r))
            .collect()
    });
    parts
        .into_iter()
        .try_fold(ChunkOutcome::default(), |acc, p| Ok(acc.merge(p?)))
}

fn scan(spec: &SearchSpec, threads: usize) -> Result<ChunkOutcome> {
    #[cfg(feature = "parallel")]
    {
        if threads != 1 {
            return scan_parallel(spec, threads);
        }
    }
    let _ = threads;
    scan_sequential(spec)
}

/// Substitution part of a group element: `T ↦ αT+β`, then `X ↦ X + r`.
/// The weight scaling `d` is solved for separately.
#[derive(Clone, Debug)]
struct Substitution {
    alpha: Value,
    beta: Value,
    r: Value,
}

fn substitutions(spec: &SearchSpec) -> Vec<Substitution> {
    let f = &spec.orbit_field;
    let has = |n| spec.normalizations.contains(&n);
    let all = f.elements();
    let units: Vec<Value> = all.iter().filter(|v| !f.is_zero(v)).cloned().collect();
    let alphas = if has(Normalization::TScale) {
        units
    } else {
        vec![f.one()]
    };
    let betas = if has(Normalization::TTranslate) {
        all.clone()
    } else {
        vec![f.zero()]
    };
    let rs = if has(Normalization::XTranslate) {
        all
    } else {
        vec![f.zero()]
    };
    let mut g = Vec::new();
    for a in &alphas {
        for b in &betas {
            for r in &rs {
                g.push(Substitution {
                    alpha: a.clone(),
                    beta: b.clone(),
                    r: r.clone(),
                });
            }
        }
    }
    g
}

/// Images of `model` under `g` composed with every admissible weight
/// scaling, pulled back to the search field. Images that leave the search
/// field are dropped; shape membership is left to [`SearchSpec::index_of`].
fn images(
    spec: &SearchSpec,
    emb: &Embedding,
    model: &WModel,
    g: &Substitution,
) -> Result<Vec<[Poly; 5]>> {
    let f = &spec.orbit_field;
    let lin = Poly::new(f, vec![g.beta.clone(), g.alpha.clone()]);
    let mut a: [Poly; 5] = std::array::from_fn(|i| emb.map_poly(&model.coeffs()[i]).compose(&lin));
    if !f.is_zero(&g.r) {
        let m = WModel::new(a, Some(spec.flip_weight))?;
        let c =
            CoordChange::translation(Poly::constant(f, g.r.clone()), Poly::zero(f), Poly::zero(f));
        a = apply_coord_change(&m, &c)?.into_coeffs();
    }
    let exps: [u64; 5] = std::array::from_fn(|i| {
        (if spec.even_form {
            WEIGHTS[i] / 2
        } else {
            WEIGHTS[i]
        }) as u64
    });
    let ds: Vec<Value> = if spec.normalizations.contains(&Normalization::XyScale) {
        f.elements().into_iter().filter(|v| !f.is_zero(v)).collect()
    } else {
        vec![f.one()]
    };
    let mut out = Vec::new();
    'd: for d in ds {
        // cheap rejection on monic leads before scaling everything
        for s in spec.slots.iter().filter(|s| s.monic) {
            let lead = f.mul(
                &a[s.index].coeff(s.degree as usize),
                &f.pow(&d, exps[s.index]),
            );
            if !f.is_one(&lead) {
                continue 'd;
            }
        }
        let mut img: [Poly; 5] = std::array::from_fn(|_| Poly::zero(&spec.field));
        for (i, o) in img.iter_mut().enumerate() {
            let c: Option<Vec<Value>> = a[i]
                .scale(&f.pow(&d, exps[i]))
                .coeffs()
                .iter()
                .map(|c| emb.preimage(c))
                .collect();
            match c {
                Some(c) => *o = Poly::new(&spec.field, c),
                None => continue 'd,
            }
        }
        out.push(img);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orbit {
    /// Lexicographically least coefficient vector, which is also the least index.
    pub representative: u64,
    pub model: String,
    pub size: usize,
    pub members: Vec<u64>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Partitions survivors under the normalization group. Images that stay in
/// the shape but were not among the survivors indicate a filter bug and are
/// reported as an error.
pub fn orbit_reduce(spec: &SearchSpec, survivors: &[Survivor]) -> Result<Vec<Orbit>> {
    let pos: HashMap<u64, usize> = survivors
        .iter()
        .enumerate()
        .map(|(i, s)| (s.index, i))
        .collect();
    let mut parent: Vec<usize> = (0..survivors.len()).collect();
    let g = substitutions(spec);
    let emb = spec.field.embedding_into(&spec.orbit_field)?;
    for (i, s) in survivors.iter().enumerate() {
        for image in g.iter().map(|h| images(spec, &emb, &s.model, h)) {
            for image in image? {
                let Some(idx) = spec.index_of(&image) else {
                    continue;
                };
                let Some(&j) = pos.get(&idx) else {
                    return Err(Error::InvalidModel(format!(
                        "orbit image {idx} of survivor {} was filtered out",
                        s.index
                    )));
                };
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    for i in 0..survivors.len() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(survivors[i].index);
    }
    let mut orbits: Vec<Orbit> = groups
        .into_values()
        .map(|mut members| {
            members.sort_unstable();
            let rep = members[0];
            Orbit {
                representative: rep,
                model: survivors[pos[&rep]].model.to_string(),
                size: members.len(),
                members,
            }
        })
        .collect();
    orbits.sort_by_key(|o| o.representative);
    Ok(orbits)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurvivorRecord {
    pub index: u64,
    pub model: String,
    pub infinity: String,
    pub wild_index: u32,
}

/// Search outcome. Timing is kept out of the serialized report so that
/// reports are byte-identical across runs and thread counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub field: String,
    pub target: String,
    pub flip_weight: u32,
    pub normalizations: Vec<Normalization>,
    pub candidates_scanned: u64,
    pub degenerate: u64,
    pub passed_degree_filter: u64,
    pub survivors: Vec<SurvivorRecord>,
    pub orbits: Vec<Orbit>,
    pub claim: String,
    #[serde(skip)]
    pub elapsed: std::time::Duration,
}

impl SearchResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("search result serializes")
    }
}

impl fmt::Display for SearchResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "field {} target {}", self.field, self.target)?;
        writeln!(
            f,
            "scanned {} candidates ({} degenerate, {} past the degree filter) in {:.2?}",
            self.candidates_scanned, self.degenerate, self.passed_degree_filter, self.elapsed
        )?;
        writeln!(
            f,
            "{} survivors in {} orbit(s)",
            self.survivors.len(),
            self.orbits.len()
        )?;
        for o in &self.orbits {
            writeln!(f, "  orbit of size {}: {}", o.size, o.model)?;
        }
        write!(f, "{}", self.claim)
    }
}

fn claim(spec: &SearchSpec, n_surv: usize, n_orb: usize) -> String {
    let norms: Vec<String> = spec.normalizations.iter().map(|n| n.to_string()).collect();
    let mut s = format!(
        "Over {}: every model in the shape with fibre {} at infinity is listed; \
         the {n_surv} survivors form {n_orb} orbit(s) under [{}] with parameters in {}.",
        spec.field,
        spec.target,
        norms.join(", "),
        spec.orbit_field
    );
    if spec.normalizations.contains(&Normalization::XyScale) {
        s.push_str(
            " Weight scalings by arbitrary units are included, so orbits are \
             isomorphism classes over the algebraic closure, restricted to the shape.",
        );
    }
    s.push_str(
        " Uniqueness over the algebraic closure follows only for surfaces \
         that admit a model in this shape over this field; other fields are not covered.",
    );
    s
}

/// Scans the whole shape, re-verifies every survivor with Tate's algorithm
/// and partitions survivors into orbits. `threads = 1` runs sequentially.
pub fn enumerate_and_filter(spec: &SearchSpec, threads: usize) -> Result<SearchResult> {
    let start = std::time::Instant::now();
    let out = scan(spec, threads)?;
    let orbits = orbit_reduce(spec, &out.survivors)?;
    let survivors = out
        .survivors
        .iter()
        .map(|s| SurvivorRecord {
            index: s.index,
            model: s.model.to_string(),
            infinity: s.infinity.short_name(),
            wild_index: s.wild_index,
        })
        .collect();
    Ok(SearchResult {
        field: spec.field.to_string(),
        target: spec.target.to_string(),
        flip_weight: spec.flip_weight,
        normalizations: spec.normalizations.clone(),
        candidates_scanned: spec.candidate_count() as u64,
        degenerate: out.degenerate,
        passed_degree_filter: out.stage1,
        claim: claim(spec, out.survivors.len(), orbits.len()),
        survivors,
        orbits,
        elapsed: start.elapsed(),
    })
}

/// Characteristic-2 families scanned by [`char2_family_scan`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Char2Family {
    #[serde(rename = "FAM13W")]
    Fam13W,
    #[serde(rename = "FAM18C2A")]
    Fam18C2A,
    #[serde(rename = "FAM18C2B")]
    Fam18C2B,
}

impl Char2Family {
    pub fn id(self) -> &'static str {
        match self {
            Char2Family::Fam13W => "FAM13W",
            Char2Family::Fam18C2A => "FAM18C2A",
            Char2Family::Fam18C2B => "FAM18C2B",
        }
    }
}

impl FromStr for Char2Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [Char2Family::Fam13W, Char2Family::Fam18C2A, Char2Family::Fam18C2B]
            .into_iter()
            .find(|f| f.id().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown family {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyMember {
    pub parameter: String,
    pub infinity: String,
    pub wild_index: u32,
    pub delta_matches: bool,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AmbientScan {
    pub candidates: u64,
    /// K3 surfaces in the shape with the target fibre at infinity.
    pub survivors: u64,
    /// Survivors whose twist class is not of the form `λT + T^-3`.
    pub outside_family: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyScan {
    pub family: Char2Family,
    pub field: String,
    pub members: Vec<FamilyMember>,
    pub ambient: Option<AmbientScan>,
    pub passed: bool,
}

impl fmt::Display for FamilyScan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ok = self.members.iter().filter(|m| m.passed).count();
        writeln!(
            f,
            "{} over {}: {ok}/{} members pass",
            self.family.id(),
            self.field,
            self.members.len()
        )?;
        for m in self.members.iter().filter(|m| !m.passed) {
            writeln!(f, "  FAIL {}: fibre {} at infinity", m.parameter, m.infinity)?;
        }
        if let Some(a) = &self.ambient {
            writeln!(
                f,
                "ambient shape: {} candidates, {} survivors, {} outside the family",
                a.candidates,
                a.survivors,
                a.outside_family.len()
            )?;
            for m in &a.outside_family {
                writeln!(f, "  outside: {m}")?;
            }
        }
        write!(f, "{}", if self.passed { "pass" } else { "FAIL" })
    }
}

/// Laurent polynomial `Σ c_k T^k` over a finite field of characteristic 2.
type Laurent = BTreeMap<i64, Value>;

/// Representative of `D` modulo `β^2 + β` over the algebraic closure:
/// even powers `c T^{2k}` become `√c T^k` and constants are dropped.
fn artin_schreier_reduce(f: &Field, d: &Laurent) -> Laurent {
    let mut d = d.clone();
    loop {
        d.retain(|_, c| !f.is_zero(c));
        d.remove(&0);
        let Some((&k, c)) = d.iter().find(|(k, _)| *k % 2 == 0) else {
            return d;
        };
        let r = f.pth_root(c);
        d.remove(&k);
        let e = d.entry(k / 2).or_insert_with(|| f.zero());
        *e = f.add(e, &r);
    }
}

fn family_file(family: Char2Family, field: &Field) -> Result<ModelFile> {
    let mut mf = crate::catalog::entry(family.id())
        .ok_or_else(|| Error::Parse(format!("catalog entry {} missing", family.id())))?
        .file;
    mf.characteristic = 2;
    mf.extension_modulus = field.extension_modulus();
    Ok(mf)
}

/// Checks every parameter value of a characteristic-2 family over `field`,
/// and for `FAM13W` also scans the twist shape
/// `a1 = 1, a2 = Σ_{k=-3}^{1} c_k T^k, a6 = ε(T^3+1)/T^12` for K3 surfaces
/// with a fibre `I_n*`, `n ≥ 13`, at infinity outside the family.
pub fn char2_family_scan(family: Char2Family, field: &Field, budget: u64) -> Result<FamilyScan> {
    if field.characteristic() != 2 || field.degree() > 6 {
        return Err(Error::Precondition(format!(
            "family scans need F_2^n with n <= 6, got {field}"
        )));
    }
    let mf = family_file(family, field)?;
    let expect = mf.expect.clone().unwrap_or_default();
    let target: KodairaType = expect
        .infinity
        .as_deref()
        .ok_or_else(|| Error::Parse("family entry lacks an infinity type".into()))?
        .parse()?;
    let mut members = Vec::new();
    for vars in mf.samples(field)? {
        let model = mf.model_with(&vars)?;
        let r = tate_at(&model, &Place::Infinity)?;
        let delta_matches = match mf.expected_delta(field, &vars)? {
            Some(d) => crate::catalog::equal_up_to_scalar(&model.discriminant(), &d),
            None => true,
        };
        let wild_ok = expect.wild_at_infinity.is_none_or(|w| w == r.wild_index);
        let parameter = vars
            .iter()
            .map(|(k, v)| format!("{k}={}", field.format_value(v)))
            .collect::<Vec<_>>()
            .join(",");
        members.push(FamilyMember {
            parameter,
            infinity: r.kodaira.short_name(),
            wild_index: r.wild_index,
            delta_matches,
            passed: r.kodaira == target && delta_matches && wild_ok,
        });
    }
    let ambient = match family {
        Char2Family::Fam13W => Some(ambient_13w(field, budget)?),
        _ => None,
    };
    let passed = !members.is_empty()
        && members.iter().all(|m| m.passed)
        && ambient.as_ref().is_none_or(|a| a.outside_family.is_empty());
    Ok(FamilyScan {
        family,
        field: field.to_string(),
        members,
        ambient,
        passed,
    })
}

fn ambient_13w(f: &Field, budget: u64) -> Result<AmbientScan> {
    use crate::ratfunc::RatFunc;
    use crate::transforms::integralize;
    let q = f.order().unwrap();
    let needed = (q as u128).pow(5) * (q as u128 - 1);
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let target = Target {
        kodaira: KodairaType::IStar(13),
        exact: false,
    };
    let t3 = Poly::monomial(f, f.one(), 3);
    let cubic = &t3 + &Poly::one(f);
    let t12 = Poly::monomial(f, f.one(), 12);
    let mut survivors = 0;
    let mut outside = Vec::new();
    for eps in f.elements().into_iter().filter(|e| !f.is_zero(e)) {
        let a6 = RatFunc::new(cubic.scale(&eps), t12.clone())?;
        for idx in 0..q.pow(5) {
            let mut d = Laurent::new();
            let mut rest = idx;
            for k in -3..=1 {
                d.insert(k, f.element(rest % q));
                rest /= q;
            }
            let num = Poly::new(f, (-3..=1).map(|k| d[&k].clone()).collect());
            let a2 = RatFunc::new(num, t3.clone())?;
            let a = [
                RatFunc::one(f),
                a2,
                RatFunc::zero(f),
                RatFunc::zero(f),
                a6.clone(),
            ];
            let (_, model) = integralize(&a)?;
            let r = tate_at(&model, &Place::Infinity)?;
            if !target.accepts(r.kodaira) {
                continue;
            }
            let rep = crate::surface::analyze_with(&model, crate::surface::FieldExtension::Off)?;
            if rep.euler_number != 24 {
                continue;
            }
            survivors += 1;
            let red = artin_schreier_reduce(f, &d);
            let in_family = f.is_one(&eps)
                && red.len() == 2
                && red.get(&-3).is_some_and(|c| f.is_one(c))
                && red.contains_key(&1);
            if !in_family {
                let terms: Vec<String> = d
                    .iter()
                    .filter(|(_, c)| !f.is_zero(c))
                    .map(|(k, c)| format!("{}*T^{k}", f.format_value(c)))
                    .collect();
                outside.push(format!(
                    "eps={} a2={} gives {}",
                    f.format_value(&eps),
                    terms.join(" + "),
                    r.kodaira.short_name()
                ));
            }
        }
    }
    Ok(AmbientScan {
        candidates: needed as u64,
        survivors,
        outside_family: outside,
    })
}

/// Bundled search specifications, by file stem.
pub const FIXTURES: [(&str, &str); 4] = [
    (
        "i14star_f3",
        include_str!("../fixtures/search/i14star_f3.toml"),
    ),
    (
        "i15star_f3",
        include_str!("../fixtures/search/i15star_f3.toml"),
    ),
    ("i19_f3", include_str!("../fixtures/search/i19_f3.toml")),
    ("i20_f3", include_str!("../fixtures/search/i20_f3.toml")),
];

pub fn fixture(name: &str) -> Result<SearchSpec> {
    let src = FIXTURES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Parse(format!("no bundled search named {name}")))?
        .1;
    SearchSpec::from_model_file(&ModelFile::parse(src)?, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::transforms::reduce_mod_p;

    #[test]
    fn artin_schreier_reduction() {
        let f = Field::finite(2, 2).unwrap();
        let z = f.generator().unwrap();
        // z T^-2 + T^-1 + 1 reduces to (√z + 1) T^-1
        let d: Laurent = [(-2, z.clone()), (-1, f.one()), (0, f.one())].into();
        let r = artin_schreier_reduce(&f, &d);
        assert_eq!(r.len(), 1);
        assert_eq!(r[&-1], f.add(&f.pth_root(&z), &f.one()));
    }

    #[test]
    fn fam13w_over_f4() {
        let f = Field::finite(2, 2).unwrap();
        let scan = char2_family_scan(Char2Family::Fam13W, &f, DEFAULT_BUDGET).unwrap();
        assert_eq!(scan.members.len(), 3);
        assert!(scan.passed, "{scan}");
        let amb = scan.ambient.unwrap();
        assert!(amb.survivors >= 3);
    }

    #[test]
    fn index_roundtrip() {
        let spec = fixture("i14star_f3").unwrap();
        assert_eq!(spec.candidate_count(), 6561);
        for idx in [0, 1, 17, 6560] {
            assert_eq!(spec.index_of(&spec.candidate(idx)), Some(idx));
        }
        assert!(spec.candidate(0)[1].is_monic());
    }

    #[test]
    fn budget_guard() {
        let mut spec = fixture("i19_f3").unwrap();
        spec.budget = 1000;
        assert!(matches!(
            enumerate_and_filter(&spec, 1),
            Err(Error::BudgetExceeded {
                needed: 177147,
                budget: 1000
            })
        ));
    }

    #[test]
    fn target_acceptance() {
        let t = Target {
            kodaira: KodairaType::IStar(14),
            exact: false,
        };
        assert!(t.accepts(KodairaType::IStar(15)));
        assert!(!t.accepts(KodairaType::I(20)));
        assert_eq!(t.min_valuation(3), 20);
        let t2 = Target {
            kodaira: KodairaType::IStar(0),
            exact: false,
        };
        assert_eq!(t2.min_valuation(2), 8);
    }

    #[test]
    fn i14star_single_orbit_contains_catalog_surface() {
        let spec = fixture("i14star_f3").unwrap();
        let res = enumerate_and_filter(&spec, 1).unwrap();
        assert!(!res.survivors.is_empty());
        assert_eq!(res.orbits.len(), 1, "{res}");
        let p14 = catalog::entry("P14").unwrap().file.model().unwrap();
        let red = reduce_mod_p(&p14, &spec.field).unwrap();
        let idx = spec.index_of(red.coeffs()).unwrap();
        assert!(res.orbits[0].members.contains(&idx));
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let spec = fixture("i14star_f3").unwrap();
        let a = enumerate_and_filter(&spec, 1).unwrap();
        let b = enumerate_and_filter(&spec, 4).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn two_survivors_related_by_translation_share_an_orbit() {
        let spec = fixture("i14star_f3").unwrap();
        let res = enumerate_and_filter(&spec, 1).unwrap();
        let s = &scan_sequential(&spec).unwrap().survivors[0];
        let g = Substitution {
            alpha: spec.field.one(),
            beta: spec.field.one(),
            r: spec.field.zero(),
        };
        let emb = spec.field.embedding_into(&spec.orbit_field).unwrap();
        for image in images(&spec, &emb, &s.model, &g).unwrap() {
            let idx = spec.index_of(&image).unwrap();
            assert!(res.orbits[0].members.contains(&idx));
        }
    }
}
