use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use eds_core::cartan::{cartan_verdict, CharacterReport, Verdict};
use eds_core::curvature::{dim_km, gauss_jacobian_rank, gauss_map, preimage_newton, random_h_in_h};
use eds_core::document::{from_json, CurvatureDoc, EdsDocument, LemmaDoc, SecondFundamentalDoc, System};
use eds_core::embedding::{certify, conformal_threshold, dims, sample_pair, BcjsSystem, Certificate, DimsReport};
use eds_core::ideal::polar_space;
use eds_core::lemma;
use eds_core::par::Execution;
use eds_core::{Error, Scalar};

const SCHEMA_VERSION: u32 = 1;
const NEWTON_ITERS: usize = 100;
const NEWTON_TOL: f64 = 1e-12;

#[derive(Parser)]
#[command(name = "eds", version, about = "Exact exterior differential systems at a point")]
struct Cli {
    /// Emit a single JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Close the system, check the structure data and, if a flag is given, run Cartan's test.
    Check { file: PathBuf },
    /// Polar space of the element spanned by the first K flag vectors.
    Polar {
        file: PathBuf,
        /// Number of flag vectors (default: all of them).
        #[arg(long)]
        k: Option<usize>,
    },
    /// Cartan characters, tableau characters and verdict along the flag.
    Characters { file: PathBuf },
    /// Build and certify the isometric embedding system.
    Bcjs {
        #[arg(long)]
        m: usize,
        #[arg(long = "N")]
        n: usize,
        /// Sample h in H with this seed and set R = γ(h).
        #[arg(long, conflicts_with = "curvature")]
        random: Option<u64>,
        /// Curvature file; h is found by Newton's method.
        #[arg(long)]
        curvature: Option<PathBuf>,
        /// Seed for the Newton starting point.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Dimension bookkeeping of the embedding problem.
    Dims {
        #[arg(long)]
        m: usize,
        #[arg(long = "N")]
        n: usize,
    },
    /// Rank of the Gauss map Jacobian at h.
    GaussRank {
        #[arg(long)]
        m: Option<usize>,
        #[arg(long = "N")]
        n: Option<usize>,
        file: PathBuf,
    },
    /// Solve Σ θ_i ∧ ω_i = 0 for symmetric h.
    CartanLemma { file: PathBuf },
    /// Dimension threshold for conformal embeddings.
    Conformal {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
}

struct Output {
    text: String,
    json: Value,
    code: u8,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output { text, json, code: 0 }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_system(path: &Path) -> Result<(EdsDocument, System)> {
    let text = read(path)?;
    let doc = EdsDocument::parse(&text).with_context(|| path.display().to_string())?;
    let sys = doc.build()?;
    Ok((doc, sys))
}

fn scalars(v: &[Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(Scalar::to_string).collect();
    format!("[{}]", parts.join(", "))
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::NotOrdinary => 1,
        _ => 0,
    }
}

fn report_text(out: &mut String, r: &CharacterReport) {
    let _ = writeln!(out, "ambient dimension: {}", r.ambient_dim);
    let _ = writeln!(out, "characters: {:?}", r.c);
    let _ = writeln!(out, "polar dimensions: {:?}", r.polar_dims);
    if let Some(t) = &r.tableau_c {
        let _ = writeln!(out, "tableau characters: {t:?}");
    }
    let _ = writeln!(out, "sum of characters: {}", r.sum_c);
    let _ = writeln!(out, "tangent codimension: {}", r.tangent_codim);
    let _ = writeln!(out, "verdict: {}", r.verdict);
}

fn dims_text(out: &mut String, d: &DimsReport) {
    let _ = writeln!(out, "m = {}, N = {}", d.m, d.n);
    let _ = writeln!(out, "dim Fm: {}", d.dim_fm);
    let _ = writeln!(out, "dim H: {}", d.dim_h);
    let _ = writeln!(out, "dim Km: {}", d.dim_km);
    let _ = writeln!(out, "dim Z: {}", d.dim_z);
    let _ = writeln!(out, "dim Grassmannian: {}", d.dim_grassmannian);
    let _ = writeln!(out, "Grassmannian codimension: {}", d.grassmannian_codim);
    let _ = writeln!(out, "closed-form character sum: {}", d.sum_c_closed_form);
}

fn characters(sys: &System, require_split: bool) -> Result<Output> {
    let gs = sys.gs.close()?;
    let flag = sys.flag.as_ref().ok_or_else(|| anyhow!("the document has no flag"))?;
    if require_split && sys.split.is_none() {
        bail!("the document has no split");
    }
    let report = cartan_verdict(flag, &gs, sys.split.as_ref(), Execution::default())?;
    let mut text = String::new();
    report_text(&mut text, &report);
    Ok(Output {
        text,
        code: verdict_code(report.verdict),
        json: json!({ "report": report }),
    })
}

fn cmd_check(path: &Path) -> Result<Output> {
    let (_, sys) = load_system(path)?;
    let closed = sys.gs.close()?;
    let defects = sys.sd.d_squared_defects()?;
    let mut text = String::new();
    let _ = writeln!(text, "dimension: {}", sys.coframe.dim());
    let _ = writeln!(text, "generators: {}", sys.gs.len());
    let _ = writeln!(text, "generators after closure: {}", closed.len());
    let _ = writeln!(text, "d² defects: {}", defects.len());
    for (name, f) in &defects {
        let _ = writeln!(text, "  d²{name} = {f}");
    }
    let mut json = json!({
        "dimension": sys.coframe.dim(),
        "generators": sys.gs.len(),
        "closed_generators": closed.len(),
        "d_squared_defects": defects.iter().map(|(n, f)| json!({"symbol": n, "value": f.to_string()})).collect::<Vec<_>>(),
    });
    let mut code = 0;
    if sys.flag.is_some() {
        let out = characters(&sys, false)?;
        text.push_str(&out.text);
        json["report"] = out.json["report"].clone();
        code = out.code;
    }
    Ok(Output { text, json, code })
}

fn cmd_polar(path: &Path, k: Option<usize>) -> Result<Output> {
    let (_, sys) = load_system(path)?;
    let gs = sys.gs.close()?;
    let available = sys.flag.as_ref().map_or(0, |f| f.len());
    let k = k.unwrap_or(available);
    if k > available {
        bail!("k = {k} exceeds the {available} flag vectors in the document");
    }
    let e = match &sys.flag {
        Some(f) => f.element(k),
        None => eds_core::ideal::IntegralElement::zero(),
    };
    let h = polar_space(&e, &gs)?;
    let n = sys.coframe.dim();
    let mut text = String::new();
    let _ = writeln!(text, "element dimension: {k}");
    let _ = writeln!(text, "polar dimension: {}", h.len());
    let _ = writeln!(text, "polar codimension: {}", n - h.len());
    for v in &h {
        let _ = writeln!(text, "  {}", scalars(&v.0));
    }
    let basis: Vec<Vec<String>> = h.iter().map(|v| v.0.iter().map(Scalar::to_string).collect()).collect();
    Ok(Output::ok(
        text,
        json!({ "k": k, "polar_dim": h.len(), "codim": n - h.len(), "basis": basis }),
    ))
}

fn cmd_characters(path: &Path) -> Result<Output> {
    let (_, sys) = load_system(path)?;
    characters(&sys, true)
}

fn certificate_text(out: &mut String, cert: &Certificate) {
    dims_text(out, &cert.dims);
    report_text(out, &cert.report);
    let _ = writeln!(out, "rank by family (tangent, normal, rotation, d tangent+normal, d rotation):");
    for row in &cert.family_ranks {
        let _ = writeln!(out, "  p = {}: {:?} total {}", row.p, row.counts, row.total);
    }
}

fn cmd_bcjs(m: usize, n: usize, random: Option<u64>, curvature: Option<&Path>, seed: u64) -> Result<Output> {
    let mut json = json!({ "m": m, "N": n });
    let mut text = String::new();
    let (r, h) = match curvature {
        None => {
            let seed = random.unwrap_or(seed);
            json["seed"] = json!(seed);
            sample_pair(m, n, seed, false)?
        }
        Some(path) => {
            let doc: CurvatureDoc = from_json(&read(path)?).with_context(|| path.display().to_string())?;
            if doc.m != m {
                bail!("curvature file has m = {}, expected {m}", doc.m);
            }
            let r = doc.to_tensor()?;
            let h0 = random_h_in_h(m, n, seed)?;
            let (h, pre) = preimage_newton(&r, &h0, NEWTON_ITERS, NEWTON_TOL)?;
            let _ = writeln!(text, "Newton: {} iterations, residual {:e}, exact {}", pre.iterations, pre.residual, pre.exact);
            json["preimage"] = serde_json::to_value(&pre)?;
            if !pre.exact {
                let _ = writeln!(text, "certifying with R replaced by γ(h) of the rounded iterate");
            }
            (gauss_map(&h), h)
        }
    };
    let sys = BcjsSystem::build(&r, &h)?;
    let cert = certify(&sys, Execution::default())?;
    certificate_text(&mut text, &cert);
    json["certificate"] = serde_json::to_value(&cert)?;
    Ok(Output::ok(text, json))
}

fn cmd_dims(m: usize, n: usize) -> Result<Output> {
    let d = dims(m, n)?;
    let mut text = String::new();
    dims_text(&mut text, &d);
    Ok(Output::ok(text, serde_json::to_value(&d)?))
}

fn cmd_gauss_rank(m: Option<usize>, n: Option<usize>, path: &Path) -> Result<Output> {
    let doc: SecondFundamentalDoc = from_json(&read(path)?).with_context(|| path.display().to_string())?;
    if m.is_some_and(|m| m != doc.m) || n.is_some_and(|n| n != doc.n) {
        bail!("file has m = {}, N = {}, which disagrees with the command line", doc.m, doc.n);
    }
    let h = doc.to_form()?;
    let rank = gauss_jacobian_rank(&h);
    let km = dim_km(doc.m);
    Ok(Output::ok(
        format!("rank: {rank}\ndim Km: {km}\nsubmersion: {}\n", rank == km),
        json!({ "m": doc.m, "N": doc.n, "rank": rank, "dim_Km": km, "submersion": rank == km }),
    ))
}

fn cmd_cartan_lemma(path: &Path) -> Result<Output> {
    let doc: LemmaDoc = from_json(&read(path)?).with_context(|| path.display().to_string())?;
    let (theta, omega) = doc.forms()?;
    let h = lemma::solve(&theta, &omega)?;
    let mut text = String::from("h:\n");
    for row in &h {
        let _ = writeln!(text, "  {}", scalars(row));
    }
    let rows: Vec<Vec<String>> = h.iter().map(|r| r.iter().map(Scalar::to_string).collect()).collect();
    Ok(Output::ok(text, json!({ "h": rows })))
}

fn cmd_conformal(m: usize, n: usize) -> Result<Output> {
    let r = conformal_threshold(m, n)?;
    let text = format!(
        "m = {}, n = {}\nrequired n: {}\nsatisfied: {}\ndeficit: {}\n1-form generators: {}\n",
        r.m, r.n, r.required, r.satisfied, r.deficit, r.generator_count
    );
    Ok(Output::ok(text, serde_json::to_value(&r)?))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Check { .. } => "check",
        Command::Polar { .. } => "polar",
        Command::Characters { .. } => "characters",
        Command::Bcjs { .. } => "bcjs",
        Command::Dims { .. } => "dims",
        Command::GaussRank { .. } => "gauss-rank",
        Command::CartanLemma { .. } => "cartan-lemma",
        Command::Conformal { .. } => "conformal",
    }
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Check { file } => cmd_check(file),
        Command::Polar { file, k } => cmd_polar(file, *k),
        Command::Characters { file } => cmd_characters(file),
        Command::Bcjs {
            m,
            n,
            random,
            curvature,
            seed,
        } => cmd_bcjs(*m, *n, *random, curvature.as_deref(), *seed),
        Command::Dims { m, n } => cmd_dims(*m, *n),
        Command::GaussRank { m, n, file } => cmd_gauss_rank(*m, *n, file),
        Command::CartanLemma { file } => cmd_cartan_lemma(file),
        Command::Conformal { m, n } => cmd_conformal(*m, *n),
    }
}

fn failure_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Certification { .. }) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.command);
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                let mut doc = json!({ "schema_version": SCHEMA_VERSION, "command": name });
                if let (Some(dst), Value::Object(src)) = (doc.as_object_mut(), out.json) {
                    dst.extend(src);
                }
                println!("{}", serde_json::to_string_pretty(&doc).expect("values serialize"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            let code = failure_code(&e);
            if cli.json {
                let doc = json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": name,
                    "error": format!("{e:#}"),
                    "exit_code": code,
                });
                println!("{}", serde_json::to_string_pretty(&doc).expect("values serialize"));
            }
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}
