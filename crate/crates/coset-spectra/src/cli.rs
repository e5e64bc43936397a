//! Command-line front end: build -> spectrum -> predict -> certify pipelines
//! with machine-readable output.
//!
//! All state comes in through flags; reports are JSON with sorted keys and
//! floats rounded to 12 significant digits, so repeated runs are
//! byte-identical. Exit codes: 0 ok, 1 property violation, 2 usage error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cayley::{self, Family, Graph};
use crate::characters::{AddChar, Chars, MultChar, RepKind, TorusChar};
use crate::error::{Error, Result};
use crate::field::{Elem, ExtFieldTable, FieldTable};
use crate::kirillov::{self, RepInstance};
use crate::pgl2::{self, CosetSpace, SubgroupKind};
use crate::predicted::Predictor;
use crate::spectra::{self, SpectrumReport};

#[derive(Parser)]
#[command(
    name = "coset-spectra",
    version,
    about = "Cayley graphs on PGL2(Fq) coset spaces: spectra, predictions, Ramanujan certification"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct FamilyArgs {
    /// Graph family: k, u, a, or cusp.
    #[arg(long)]
    family: Family,
    /// Field size q = p^e (odd prime power).
    #[arg(long)]
    q: u32,
    /// Double-coset parameter (element index); ignored for cusp.
    #[arg(long)]
    param: Option<u32>,
    /// Run over every admissible parameter.
    #[arg(long, default_value_t = false)]
    all_params: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print field tables summary: p, e, q, modulus, generator, delta.
    FieldInfo {
        #[arg(long)]
        q: u32,
    },
    /// Character inventory for F_q.
    Chars {
        #[arg(long)]
        q: u32,
    },
    /// Coset representatives and double-coset decompositions.
    Cosets {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        param: Option<u32>,
    },
    /// Build a graph and write it as JSON (or DOT).
    Build {
        #[command(flatten)]
        sel: FamilyArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = false)]
        dot: bool,
    },
    /// Compute the spectrum of a graph JSON file.
    Spectrum {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Emit the predicted spectrum of a family at one parameter.
    Predict {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        param: u32,
    },
    /// Build, solve, predict, and match; exit 1 on mismatch or bound failure.
    Crosscheck {
        #[command(flatten)]
        sel: FamilyArgs,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Include wall-clock timings (makes output nondeterministic).
        #[arg(long, default_value_t = false)]
        timing: bool,
    },
    /// Build, solve, and certify the eigenvalue bounds only.
    Certify {
        #[command(flatten)]
        sel: FamilyArgs,
    },
    /// Kirillov-model integrity: homomorphism residuals and fixed ranks.
    Repcheck {
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Restrict to one kind: discrete, steinberg, or principal.
        #[arg(long)]
        kind: Option<String>,
    },
    /// Build the cusp graph X_P for q = p^e.
    CuspGraph {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = false)]
        dot: bool,
    },
    /// Full sweep over families and parameters for a list of q values.
    Suite {
        /// Comma-separated q values.
        #[arg(long, default_value = "3,5,7,9,11,13")]
        q: String,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = false)]
        json: bool,
    },
}

pub fn run() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}

/// Round to 12 significant digits, the report float format.
fn g12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap()
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) => {
            if n.is_f64() {
                *v = json!(g12(n.as_f64().unwrap()));
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

fn rounded<T: serde::Serialize>(t: &T) -> Result<Value> {
    let mut v = serde_json::to_value(t)?;
    round_floats(&mut v);
    Ok(v)
}

fn print_or_write(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => println!("{text}"),
    }
    Ok(())
}

/// Factor q as p^e with p prime, rejecting even q.
pub fn factor_prime_power(q: u32) -> Result<(u32, u32)> {
    if q < 2 {
        return Err(Error::InvalidInput(format!("q = {q} is not a prime power")));
    }
    if q % 2 == 0 {
        return Err(Error::EvenCharacteristic);
    }
    let mut p = 3;
    while p * p <= q {
        if q % p == 0 {
            break;
        }
        p += 2;
    }
    if q % p != 0 {
        p = q;
    }
    let mut e = 0;
    let mut rest = q;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    if rest != 1 {
        return Err(Error::InvalidInput(format!("q = {q} is not a prime power")));
    }
    Ok((p, e))
}

/// Field, extension, and delta for one q.
pub struct Tower {
    pub field: FieldTable,
    pub ext: ExtFieldTable,
}

impl Tower {
    pub fn new(q: u32) -> Result<Tower> {
        let (p, e) = factor_prime_power(q)?;
        let field = FieldTable::build(p, e)?;
        let delta = field.find_nonsquare();
        let ext = ExtFieldTable::build(&field, delta)?;
        Ok(Tower { field, ext })
    }
}

fn subgroup_of(family: Family) -> Result<SubgroupKind> {
    match family {
        Family::K => Ok(SubgroupKind::K),
        Family::U => Ok(SubgroupKind::U),
        Family::A => Ok(SubgroupKind::A),
        Family::Cusp => Err(Error::InvalidInput(
            "cusp graphs are not coset Cayley graphs".into(),
        )),
    }
}

pub fn build_double_coset(
    tower: &Tower,
    space: &CosetSpace,
    family: Family,
    param: Elem,
) -> Result<pgl2::DoubleCoset> {
    let f = &tower.field;
    let d = tower.ext.delta();
    match family {
        Family::K => pgl2::k_double_coset(f, d, space, param),
        Family::U => pgl2::u_double_coset(f, space, param),
        Family::A => pgl2::a_double_coset(f, d, space, param),
        Family::Cusp => Err(Error::InvalidInput(
            "cusp graphs are not coset Cayley graphs".into(),
        )),
    }
}

pub fn build_family_graph(tower: &Tower, family: Family, param: Elem) -> Result<Graph> {
    if family == Family::Cusp {
        return cayley::build_cusp_graph(&tower.field);
    }
    let space = CosetSpace::build(&tower.field, tower.ext.delta(), subgroup_of(family)?);
    let dc = build_double_coset(tower, &space, family, param)?;
    cayley::build_graph(&tower.field, &space, &dc, family, param)
}

fn params_for(
    tower: &Tower,
    family: Family,
    sel_param: Option<u32>,
    all: bool,
) -> Result<Vec<Elem>> {
    let f = &tower.field;
    if family == Family::Cusp {
        return Ok(vec![0]);
    }
    if let Some(p) = sel_param {
        if p >= f.q() {
            return Err(Error::InvalidInput(format!(
                "param {p} out of range for q = {}",
                f.q()
            )));
        }
        return Ok(vec![p]);
    }
    if !all {
        return Err(Error::InvalidInput("pass --param P or --all-params".into()));
    }
    let d = tower.ext.delta();
    Ok(match family {
        Family::K => f.elements().filter(|&c| c != 1 && c != f.neg(1)).collect(),
        Family::U => f.units().collect(),
        Family::A => f.elements().filter(|&c| c != 1 && c != d).collect(),
        Family::Cusp => vec![0],
    })
}

/// Everything the pipeline knows about one (family, q, param) run.
#[derive(serde::Serialize)]
pub struct PipelineReport {
    pub family: Family,
    pub q: u32,
    pub param: u32,
    pub structure: cayley::StructureReport,
    pub spectrum: SpectrumReport,
    pub predicted: Option<crate::predicted::PredictedSpectrum>,
    pub matched: Option<spectra::MatchReport>,
    pub certify: spectra::CertResult,
    pub moments_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl PipelineReport {
    pub fn passed(&self) -> bool {
        let matched_ok = self.matched.map_or(true, |m| m.success);
        let bound_ok = match self.family {
            // cusp graphs are certified against the Ramanujan bound
            Family::Cusp => self.certify.ramanujan,
            _ => self.certify.sqrt_q_bound_holds,
        };
        matched_ok && bound_ok && self.moments_ok
    }
}

pub fn run_pipeline(
    tower: &Tower,
    family: Family,
    param: Elem,
    tol: f64,
    timing: bool,
) -> Result<PipelineReport> {
    let start = std::time::Instant::now();
    let graph = build_family_graph(tower, family, param)?;
    let structure = cayley::analyze(&graph);
    let spectrum = SpectrumReport::from_graph(&graph)?;
    let moments_ok = spectra::moment_check(&graph, &spectrum.eigenvalues);
    let (predicted, matched) = if family == Family::Cusp {
        (None, None)
    } else {
        let chars = Chars::new(&tower.field, &tower.ext);
        let predictor = Predictor::new(&chars);
        let pred = predictor.assemble(family, param)?;
        let m = spectra::match_multiset(&spectrum.eigenvalues, &pred.expanded(), tol)?;
        (Some(pred), Some(m))
    };
    let certify = spectra::certify(&spectrum);
    Ok(PipelineReport {
        family,
        q: tower.field.q(),
        param,
        structure,
        spectrum,
        predicted,
        matched,
        certify,
        moments_ok,
        elapsed_ms: timing.then(|| start.elapsed().as_millis() as u64),
    })
}

fn dispatch(cmd: Cmd) -> Result<u8> {
    match cmd {
        Cmd::FieldInfo { q } => {
            let tower = Tower::new(q)?;
            let f = &tower.field;
            let out = json!({
                "p": f.p(),
                "e": f.e(),
                "q": f.q(),
                "modulus": f.modulus(),
                "generator": f.generator(),
                "delta": tower.ext.delta(),
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(0)
        }
        Cmd::Chars { q } => {
            // validates that q is an odd prime power within the cap
            let _ = Tower::new(q)?;
            let out = json!({
                "q": q,
                "multiplicative_characters": q - 1,
                "additive_characters": q,
                "torus_characters": q + 1,
                "one_dimensional_reps": 2,
                "steinberg_reps": 2,
                "principal_pairs": (q - 3) / 2,
                "discrete_pairs": (q - 1) / 2,
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(0)
        }
        Cmd::Cosets { family, q, param } => {
            let tower = Tower::new(q)?;
            let kind = subgroup_of(family)?;
            let space = CosetSpace::build(&tower.field, tower.ext.delta(), kind);
            let params = match param {
                Some(p) => vec![p],
                None => {
                    let chars = Chars::new(&tower.field, &tower.ext);
                    Predictor::new(&chars).admissible_params(family)
                }
            };
            let mut dcs = Vec::new();
            for p in params {
                let dc = build_double_coset(&tower, &space, family, p)?;
                let reps: Vec<[u32; 4]> = dc
                    .cosets
                    .iter()
                    .map(|&i| space.reps[i as usize].entries())
                    .collect();
                dcs.push(json!({
                    "param": p,
                    "coset_indices": dc.cosets,
                    "size": dc.cosets.len(),
                    "symmetric": dc.symmetric,
                    "coset_reps": reps,
                }));
            }
            let space_reps: Vec<[u32; 4]> = space.reps.iter().map(|r| r.entries()).collect();
            let out = json!({
                "family": family.as_str(),
                "q": q,
                "delta": tower.ext.delta(),
                "subgroup_order": kind.order(q),
                "coset_count": space.len(),
                "coset_reps": space_reps,
                "double_cosets": dcs,
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(0)
        }
        Cmd::Build { sel, out, dot } => {
            let tower = Tower::new(sel.q)?;
            let param = if sel.family == Family::Cusp {
                0
            } else {
                sel.param
                    .ok_or_else(|| Error::InvalidInput("pass --param P".into()))?
            };
            let graph = build_family_graph(&tower, sel.family, param)?;
            let text = if dot {
                graph.to_dot()
            } else {
                serde_json::to_string_pretty(&graph.to_json())?
            };
            print_or_write(&out, &text)?;
            Ok(0)
        }
        Cmd::Spectrum { input, csv } => {
            let text = std::fs::read_to_string(&input)?;
            let graph = Graph::from_json(&serde_json::from_str(&text)?)?;
            let report = SpectrumReport::from_graph(&graph)?;
            if let Some(path) = csv {
                let mut w = String::from("index,eigenvalue\n");
                for (i, ev) in report.eigenvalues.iter().enumerate() {
                    w.push_str(&format!("{i},{}\n", g12(*ev)));
                }
                std::fs::write(path, w)?;
            }
            println!("{}", serde_json::to_string_pretty(&rounded(&report)?)?);
            Ok(0)
        }
        Cmd::Predict { family, q, param } => {
            let tower = Tower::new(q)?;
            let chars = Chars::new(&tower.field, &tower.ext);
            let pred = Predictor::new(&chars).assemble(family, param)?;
            println!("{}", serde_json::to_string_pretty(&rounded(&pred)?)?);
            Ok(0)
        }
        Cmd::Crosscheck { sel, tol, timing } => {
            let tower = Tower::new(sel.q)?;
            let params = params_for(&tower, sel.family, sel.param, sel.all_params)?;
            let mut reports = Vec::new();
            let mut all_ok = true;
            for p in params {
                let rep = run_pipeline(&tower, sel.family, p, tol, timing)?;
                all_ok &= rep.passed();
                reports.push(rounded(&rep)?);
            }
            println!("{}", serde_json::to_string_pretty(&Value::Array(reports))?);
            Ok(if all_ok { 0 } else { 1 })
        }
        Cmd::Certify { sel } => {
            let tower = Tower::new(sel.q)?;
            let params = params_for(&tower, sel.family, sel.param, sel.all_params)?;
            let mut out = Vec::new();
            let mut all_ok = true;
            for p in params {
                let graph = build_family_graph(&tower, sel.family, p)?;
                let report = SpectrumReport::from_graph(&graph)?;
                let cert = spectra::certify(&report);
                let ok = match sel.family {
                    Family::Cusp => cert.ramanujan,
                    _ => cert.sqrt_q_bound_holds,
                };
                all_ok &= ok;
                out.push(json!({
                    "family": sel.family.as_str(),
                    "q": sel.q,
                    "param": p,
                    "n": report.n,
                    "k": report.k,
                    "max_nontrivial_abs": g12(report.max_nontrivial_abs),
                    "ramanujan_bound": g12(report.ramanujan_bound),
                    "sqrt_q_bound": g12(report.sqrt_q_bound),
                    "ramanujan": cert.ramanujan,
                    "sqrt_q_bound_holds": cert.sqrt_q_bound_holds,
                }));
            }
            println!("{}", serde_json::to_string_pretty(&Value::Array(out))?);
            Ok(if all_ok { 0 } else { 1 })
        }
        Cmd::Repcheck { q, trials, kind } => {
            let report = repcheck(q, trials, kind.as_deref())?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(0)
        }
        Cmd::CuspGraph { q, out, dot } => {
            let tower = Tower::new(q)?;
            let graph = cayley::build_cusp_graph(&tower.field)?;
            let text = if dot {
                graph.to_dot()
            } else {
                serde_json::to_string_pretty(&graph.to_json())?
            };
            print_or_write(&out, &text)?;
            Ok(0)
        }
        Cmd::Suite {
            q,
            tol,
            json: as_json,
        } => suite(&q, tol, as_json),
    }
}

fn repcheck(q: u32, trials: usize, kind_filter: Option<&str>) -> Result<Value> {
    let tower = Tower::new(q)?;
    let chars = Chars::new(&tower.field, &tower.ext);
    let group = pgl2::enumerate_group(&tower.field);
    let delta = tower.ext.delta();
    let mut kinds: Vec<RepKind> = Vec::new();
    for j in 1..(q + 1) / 2 {
        kinds.push(RepKind::Discrete(TorusChar { j }));
    }
    kinds.push(RepKind::Steinberg(MultChar { j: 0 }));
    kinds.push(RepKind::Steinberg(MultChar { j: (q - 1) / 2 }));
    for j in 1..(q - 1) / 2 {
        kinds.push(RepKind::Principal(MultChar { j }));
    }
    if let Some(filter) = kind_filter {
        kinds.retain(|k| match filter {
            "discrete" => matches!(k, RepKind::Discrete(_)),
            "steinberg" => matches!(k, RepKind::Steinberg(_)),
            "principal" => matches!(k, RepKind::Principal(_)),
            _ => true,
        });
        if kinds.is_empty() {
            return Err(Error::InvalidInput(format!(
                "no representations of kind '{filter}'"
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for kind in kinds {
        let rep = RepInstance::new(&chars, kind, AddChar { a: 1 })?;
        let mut max_resid = 0.0f64;
        for _ in 0..trials {
            let g1 = group[rng.random_range(0..group.len())];
            let g2 = group[rng.random_range(0..group.len())];
            let lhs = rep.matrix(pgl2::mul(&tower.field, g1, g2))?;
            let rhs = kirillov::mat_mul(&rep.matrix(g1)?, &rep.matrix(g2)?);
            max_resid = max_resid.max(kirillov::mat_max_diff(&lhs, &rhs));
        }
        worst = worst.max(max_resid);
        let mut ranks = serde_json::Map::new();
        for sub in [SubgroupKind::U, SubgroupKind::A, SubgroupKind::K] {
            let elems = pgl2::subgroup_elements(&tower.field, delta, sub);
            let expected = expected_rank(kind, sub);
            rep.fixed_vectors(&elems, expected)?;
            ranks.insert(sub.as_str().into(), json!(expected));
        }
        rows.push(json!({
            "kind": kind.label(),
            "degree": kind.degree(q),
            "max_homomorphism_residual": g12(max_resid),
            "fixed_ranks": ranks,
        }));
    }
    Ok(json!({
        "q": q,
        "trials": trials,
        "max_residual": g12(worst),
        "representations": rows,
    }))
}

/// Fixed-space dimensions per representation kind and subgroup.
pub fn expected_rank(kind: RepKind, sub: SubgroupKind) -> usize {
    match (sub, kind) {
        (SubgroupKind::U, RepKind::Discrete(_)) => 0,
        (SubgroupKind::U, RepKind::Steinberg(_)) => 1,
        (SubgroupKind::U, RepKind::Principal(_)) => 2,
        (SubgroupKind::A, RepKind::Steinberg(m)) if m.j == 0 => 2,
        (SubgroupKind::A, _) => 1,
        (SubgroupKind::K, RepKind::Steinberg(m)) if m.j == 0 => 0,
        (SubgroupKind::K, _) => 1,
    }
}

fn suite(q_list: &str, tol: f64, as_json: bool) -> Result<u8> {
    let qs: Vec<u32> = q_list
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<u32>()
                .map_err(|_| Error::InvalidInput(format!("bad q value '{s}'")))
        })
        .collect::<Result<_>>()?;
    let per_q: Vec<Result<Vec<PipelineReport>>> = qs
        .par_iter()
        .map(|&q| {
            let tower = Tower::new(q)?;
            let mut rows = Vec::new();
            for family in [Family::K, Family::U, Family::A] {
                for p in params_for(&tower, family, None, true)? {
                    rows.push(run_pipeline(&tower, family, p, tol, false)?);
                }
            }
            Ok(rows)
        })
        .collect();

    let mut rows = Vec::new();
    for r in per_q {
        rows.extend(r?);
    }
    let all_ok = rows.iter().all(|r| r.passed());

    if as_json {
        let vals: Vec<Value> = rows
            .iter()
            .map(|r| {
                Ok(json!({
                    "family": r.family.as_str(),
                    "q": r.q,
                    "param": r.param,
                    "n": r.spectrum.n,
                    "k": r.spectrum.k,
                    "max_nontrivial_abs": g12(r.spectrum.max_nontrivial_abs),
                    "sqrt_q_bound": g12(r.spectrum.sqrt_q_bound),
                    "ramanujan": r.certify.ramanujan,
                    "sqrt_q_bound_holds": r.certify.sqrt_q_bound_holds,
                    "matched": r.matched.map(|m| m.success),
                }))
            })
            .collect::<Result<_>>()?;
        println!("{}", serde_json::to_string_pretty(&Value::Array(vals))?);
    } else {
        let mut out = std::io::stdout().lock();
        writeln!(
            out,
            "{:<6} {:>4} {:>6} {:>6} {:>4} {:>14} {:>10} {:>10} {:>8}",
            "family", "q", "param", "n", "k", "max|nontriv|", "2sqrt(q)", "ramanujan", "matched"
        )?;
        for r in &rows {
            writeln!(
                out,
                "{:<6} {:>4} {:>6} {:>6} {:>4} {:>14.8} {:>10.6} {:>10} {:>8}",
                r.family.as_str(),
                r.q,
                r.param,
                r.spectrum.n,
                r.spectrum.k,
                r.spectrum.max_nontrivial_abs,
                r.spectrum.sqrt_q_bound,
                r.certify.ramanujan,
                r.matched.map_or("-".to_string(), |m| m.success.to_string()),
            )?;
        }
        writeln!(out, "{} graphs, all passed: {all_ok}", rows.len())?;
    }
    Ok(if all_ok { 0 } else { 1 })
}
