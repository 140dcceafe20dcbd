//! `kodaira`: analyze elliptic surfaces over k(T), verify the bundled
//! catalog, run exhaustive searches and apply transforms.
//!
//! Exit codes: 0 success, 1 parse error or failed check, 2 degenerate model
//! or violated precondition, 3 search budget exceeded.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use kodaira_core::catalog;
use kodaira_core::expr;
use kodaira_core::modelfile::ModelFile;
use kodaira_core::search::{self, Char2Family, SearchSpec};
use kodaira_core::surface::{analyze_with, FieldExtension, SurfaceReport};
use kodaira_core::sweep;
use kodaira_core::transforms::{self, MobiusMap};
use kodaira_core::{Error, Field, Poly, Value, WModel};

#[derive(Parser)]
#[command(name = "kodaira", version, about = "Elliptic surfaces over k(T): fibres, catalog, searches")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Ext {
    Auto,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Twist,
    Mobius,
    Basechange,
    Frobenius,
    Minimalize,
    ReduceModP,
}

#[derive(Subcommand)]
enum Cmd {
    /// Singular fibres and global invariants of a model file (`-` reads stdin).
    Analyze {
        path: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long, value_enum, default_value = "auto")]
        field_extension: Ext,
        #[arg(long)]
        flip_weight: Option<u32>,
        /// Parameter binding `name=value` for files with parameters.
        #[arg(long = "set", value_name = "NAME=VALUE")]
        set: Vec<String>,
    },
    /// Bundled catalog of surfaces.
    Catalog {
        #[command(subcommand)]
        cmd: CatalogCmd,
    },
    /// Exhaustive search described by the `search` section of a model file.
    Search {
        path: PathBuf,
        /// Worker threads; 0 lets the pool decide, 1 runs sequentially.
        #[arg(long, default_value_t = 0)]
        threads: usize,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Scan a characteristic-2 family (FAM13W, FAM18C2A, FAM18C2B) over F_2^n.
    FamilyScan {
        family: String,
        #[arg(long, default_value_t = 2)]
        degree: u32,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Randomized consistency sweeps.
    Sweep {
        #[command(subcommand)]
        cmd: SweepCmd,
    },
    /// Apply a transform and print the resulting model file.
    Transform {
        path: PathBuf,
        #[arg(long, value_enum)]
        op: Op,
        /// Twist polynomial, lowest degree first (`twist`).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        by: Vec<String>,
        /// Matrix entries `a,b,c,d` of `T ↦ (aT+b)/(cT+d)` (`mobius`).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        matrix: Vec<String>,
        /// Base-change polynomial, lowest degree first (`basechange`).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        poly: Vec<String>,
        /// Target characteristic (`reduce-mod-p`).
        #[arg(long)]
        p: Option<u32>,
        /// Extension degree of the target field (`reduce-mod-p`).
        #[arg(long, default_value_t = 1)]
        degree: u32,
        #[arg(long = "set", value_name = "NAME=VALUE")]
        set: Vec<String>,
        #[arg(long)]
        id: Option<String>,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// Verify entries against their recorded expectations.
    Verify {
        #[arg(long)]
        entry: Option<String>,
        /// Verify an external file with an `expect` section instead.
        #[arg(long, conflicts_with = "entry")]
        file: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Transform pipelines cross-checked against catalog equations.
    Pipelines,
    List,
    /// Print an entry's model file.
    Show { id: String },
}

#[derive(Subcommand)]
enum SweepCmd {
    /// Wild-index bounds in characteristic 2 or 3.
    Wild {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        degree: u32,
        #[arg(long, default_value_t = 10_000)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Degree of `f^3 - g^2` for short models.
    Ds {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 10_000)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

/// A failure with its exit code.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) => 1,
            Error::BudgetExceeded { .. } => 3,
            _ => 2,
        };
        Fail(code, e.to_string())
    }
}

type Out = Result<u8, Fail>;

fn read_source(path: &PathBuf) -> Result<String, Fail> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Fail(1, format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Fail(1, format!("{}: {e}", path.display())))
}

fn read_file(path: &PathBuf) -> Result<ModelFile, Fail> {
    ModelFile::parse(&read_source(path)?).map_err(|e| Fail(1, e.to_string()))
}

fn bindings(mf: &ModelFile, field: &Field, set: &[String]) -> Result<BTreeMap<String, Value>, Fail> {
    let mut vars = BTreeMap::new();
    for s in set {
        let (k, v) = s
            .split_once('=')
            .ok_or_else(|| Fail(1, format!("expected NAME=VALUE, got {s:?}")))?;
        let val = expr::eval(v, field, &BTreeMap::new()).map_err(|e| Fail(1, e.to_string()))?;
        vars.insert(k.trim().to_string(), val);
    }
    for name in mf.parameters.keys() {
        if !vars.contains_key(name) {
            return Err(Fail(1, format!("parameter {name} needs a value (--set {name}=...)")));
        }
    }
    Ok(vars)
}

fn load_model(path: &PathBuf, set: &[String]) -> Result<WModel, Fail> {
    let mf = read_file(path)?;
    let f = mf.field().map_err(|e| Fail(1, e.to_string()))?;
    let vars = bindings(&mf, &f, set)?;
    Ok(mf.model_with(&vars)?)
}

fn values(field: &Field, items: &[String]) -> Result<Vec<Value>, Fail> {
    items
        .iter()
        .map(|s| expr::eval(s, field, &BTreeMap::new()).map_err(|e| Fail(1, e.to_string())))
        .collect()
}

fn report_json(rep: &SurfaceReport) -> serde_json::Value {
    let fibres: Vec<_> = rep
        .fibres
        .iter()
        .map(|fb| {
            json!({
                "place": fb.place.to_string(),
                "degree": fb.local.residue_degree,
                "type": fb.local.kodaira.short_name(),
                "v_delta": fb.local.v_delta_min,
                "f": fb.local.conductor_exp,
                "w": fb.local.wild_index,
            })
        })
        .collect();
    json!({
        "model": rep.model.to_string(),
        "working_field": rep.working_field.to_string(),
        "configuration": rep.configuration,
        "euler_number": rep.euler_number,
        "surface_class": rep.surface_class.to_string(),
        "conductor_degree": rep.conductor_degree,
        "insep_degree": rep.insep_degree,
        "fibres": fibres,
    })
}

fn print_report(rep: &SurfaceReport) {
    println!("model          {}", rep.model);
    println!("field          {}", rep.working_field);
    println!("configuration  {}", rep.configuration);
    println!("euler number   {} ({})", rep.euler_number, rep.surface_class);
    println!("conductor deg  {}", rep.conductor_degree);
    match rep.insep_degree {
        Some(d) => println!("insep degree   {d}"),
        None => println!("insep degree   - (isotrivial)"),
    }
    println!("j              {}", rep.j);
    println!("{:<24} {:>5} {:>7} {:>3} {:>3}", "place", "type", "v(Δ)", "f", "w");
    for fb in &rep.fibres {
        let l = &fb.local;
        println!(
            "{:<24} {:>5} {:>7} {:>3} {:>3}",
            fb.place.to_string(),
            l.kodaira.short_name(),
            l.v_delta_min,
            l.conductor_exp,
            l.wild_index
        );
    }
}

fn cmd_analyze(path: &PathBuf, json: bool, ext: Ext, m: Option<u32>, set: &[String]) -> Out {
    let mut model = load_model(path, set)?;
    if let Some(m) = m {
        model = model.with_flip_weight(m)?;
    }
    let ext = match ext {
        Ext::Auto => FieldExtension::Auto,
        Ext::Off => FieldExtension::Off,
    };
    let rep = analyze_with(&model, ext)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&report_json(&rep)).unwrap());
    } else {
        print_report(&rep);
    }
    Ok(0)
}

fn cmd_catalog(cmd: CatalogCmd) -> Out {
    match cmd {
        CatalogCmd::Verify { entry, file, json } => {
            let reports = if let Some(path) = file {
                let mf = read_file(&path)?;
                let id = mf.id.clone().unwrap_or_else(|| path.display().to_string());
                vec![catalog::verify_file(&id, &mf)]
            } else if let Some(id) = entry {
                let e = catalog::entry(&id).ok_or_else(|| Fail(1, format!("no catalog entry {id}")))?;
                vec![catalog::verify_entry(&e)]
            } else {
                catalog::entries().iter().map(catalog::verify_entry).collect()
            };
            let passed = reports.iter().filter(|r| r.passed).count();
            if json {
                println!("{}", serde_json::to_string_pretty(&reports).unwrap());
            } else {
                for r in &reports {
                    print!("{r}");
                }
                println!("{passed}/{} entries pass", reports.len());
            }
            Ok(if passed == reports.len() { 0 } else { 1 })
        }
        CatalogCmd::Pipelines => {
            let ps = catalog::pipelines();
            for p in &ps {
                let v = if p.passed { "pass" } else { "FAIL" };
                println!("{v}  {}: {}", p.name, p.detail);
            }
            Ok(if ps.iter().all(|p| p.passed) { 0 } else { 1 })
        }
        CatalogCmd::List => {
            for e in catalog::entries() {
                let d = e.file.description.clone().unwrap_or_default();
                println!("{:<10} {d}", e.id);
            }
            Ok(0)
        }
        CatalogCmd::Show { id } => {
            let e = catalog::entry(&id).ok_or_else(|| Fail(1, format!("no catalog entry {id}")))?;
            print!("{}", catalog::fixture_source(&e.file_name).unwrap_or_default());
            Ok(0)
        }
    }
}

fn cmd_search(path: &PathBuf, threads: usize, budget: Option<u64>, json: bool) -> Out {
    let mf = read_file(path)?;
    let spec = SearchSpec::from_model_file(&mf, budget)?;
    let res = search::enumerate_and_filter(&spec, threads)?;
    if json {
        println!("{}", res.to_json());
    } else {
        println!("{res}");
    }
    Ok(0)
}

fn cmd_family(family: &str, degree: u32, budget: Option<u64>, json: bool) -> Out {
    let fam: Char2Family = family.parse().map_err(|e: Error| Fail(1, e.to_string()))?;
    let field = Field::finite(2, degree)?;
    let scan = search::char2_family_scan(fam, &field, budget.unwrap_or_else(search::default_budget))?;
    if json {
        println!("{}", serde_json::to_string_pretty(&scan).unwrap());
    } else {
        println!("{scan}");
    }
    Ok(if scan.passed { 0 } else { 1 })
}

fn cmd_sweep(cmd: SweepCmd) -> Out {
    match cmd {
        SweepCmd::Wild { p, degree, count, seed } => {
            let s = sweep::wild_sweep(&Field::finite(p, degree)?, count, seed)?;
            println!("{}", serde_json::to_string_pretty(&s).unwrap());
            let clean = s.violations.is_empty()
                && s.euler_violations.is_empty()
                && s.ps_violations.is_empty();
            Ok(if clean { 0 } else { 1 })
        }
        SweepCmd::Ds { p, m, count, seed } => {
            let s = sweep::ds_sweep(&Field::prime(p)?, m, count, seed)?;
            println!("{}", serde_json::to_string_pretty(&s).unwrap());
            Ok(if s.violations.is_empty() { 0 } else { 1 })
        }
    }
}

struct TransformArgs {
    op: Op,
    by: Vec<String>,
    matrix: Vec<String>,
    poly: Vec<String>,
    p: Option<u32>,
    degree: u32,
}

fn apply_op(model: &WModel, a: &TransformArgs) -> Result<WModel, Fail> {
    let f = model.field().clone();
    let need = |v: &Vec<String>, flag: &str| {
        if v.is_empty() {
            Err(Fail(2, format!("this transform needs --{flag}")))
        } else {
            Ok(())
        }
    };
    Ok(match a.op {
        Op::Twist => {
            need(&a.by, "by")?;
            transforms::quadratic_twist(model, &Poly::new(&f, values(&f, &a.by)?))?
        }
        Op::Mobius => {
            if a.matrix.len() != 4 {
                return Err(Fail(2, "--matrix takes four entries a,b,c,d".into()));
            }
            let v = values(&f, &a.matrix)?;
            let e = |i: usize| f.elem(v[i].clone());
            transforms::apply_mobius(model, &MobiusMap::new(e(0), e(1), e(2), e(3))?)?
        }
        Op::Basechange => {
            need(&a.poly, "poly")?;
            transforms::base_change(model, &Poly::new(&f, values(&f, &a.poly)?))?
        }
        Op::Frobenius => transforms::frobenius_base_change(model)?,
        Op::Minimalize => transforms::minimalize_all(model)?,
        Op::ReduceModP => {
            let p = a
                .p
                .ok_or_else(|| Fail(2, "reduce-mod-p needs --p".into()))?;
            transforms::reduce_mod_p(model, &Field::finite(p, a.degree)?)?
        }
    })
}

fn cmd_transform(path: &PathBuf, args: TransformArgs, set: &[String], id: Option<String>) -> Out {
    let model = load_model(path, set)?;
    let out = apply_op(&model, &args)?;
    print!("{}", ModelFile::from_model(&out, id).to_toml());
    Ok(0)
}

fn run(cli: Cli) -> Out {
    match cli.cmd {
        Cmd::Analyze {
            path,
            json,
            field_extension,
            flip_weight,
            set,
        } => cmd_analyze(&path, json, field_extension, flip_weight, &set),
        Cmd::Catalog { cmd } => cmd_catalog(cmd),
        Cmd::Search {
            path,
            threads,
            budget,
            json,
        } => cmd_search(&path, threads, budget, json),
        Cmd::FamilyScan {
            family,
            degree,
            budget,
            json,
        } => cmd_family(&family, degree, budget, json),
        Cmd::Sweep { cmd } => cmd_sweep(cmd),
        Cmd::Transform {
            path,
            op,
            by,
            matrix,
            poly,
            p,
            degree,
            set,
            id,
        } => {
            let args = TransformArgs {
                op,
                by,
                matrix,
                poly,
                p,
                degree,
            };
            cmd_transform(&path, args, &set, id)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("kodaira: {msg}");
            ExitCode::from(code)
        }
    }
}
