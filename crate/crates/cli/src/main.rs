use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use skewalg::algebra::Certainty;
use skewalg::equivariant::skew_algebra;
use skewalg::grouprep::{character, irreducibles};
use skewalg::io::{matrix_strings, named_group, AlgebraSpec, FieldSpec, GroupSpec, ModuleSpec, Problem};
use skewalg::scalars::{Field, Scalar};
use skewalg::theorems::{
    basic_reduction, demonet_check, quiver_of_basic, validate_setup, verify_main_theorem, Check, Verdict,
};
use skewalg::{Error, Options};

#[derive(Parser)]
#[command(name = "skewalg", version, about = "Skew group algebras, induced exceptional collections and basic reductions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Seed for every randomized search
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Random candidates per splitting or zero-divisor search
    #[arg(long, global = true)]
    max_samples: Option<usize>,
    /// Largest polynomial degree handed to the factorizer
    #[arg(long, global = true)]
    degree_ceiling: Option<usize>,
    /// Largest number of grid points tried by the isomorphism test
    #[arg(long, global = true)]
    grid_budget: Option<usize>,
    /// Override the field of the problem file ("Q", "F5", …)
    #[arg(long, global = true)]
    field: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Validate the exceptional setup described by a problem file
    Check { path: PathBuf },
    /// Build the skew group algebra
    Skew { path: PathBuf },
    /// Basic reduction of the skew group algebra (or of the algebra itself with --plain)
    Basic {
        path: PathBuf,
        #[arg(long)]
        plain: bool,
    },
    /// Irreducible representations of a group: a name (S3, C3, 1) or a JSON file
    Irr { group: String },
    /// Compare End of the induced collection with the basic reduction of the skew algebra
    VerifyMain { path: PathBuf },
    /// Quiver of the basic reduction of the skew algebra, with the vertex count from stabilizers
    Quiver {
        path: PathBuf,
        /// Quiver of the algebra itself, which must be basic
        #[arg(long)]
        plain: bool,
    },
}

/// A finished command: JSON report, text report and exit code.
struct Report {
    json: Value,
    text: String,
    code: u8,
}

const FAILED: u8 = 1;
const UNDECIDED: u8 = 2;

fn code(ok: bool) -> u8 {
    if ok {
        0
    } else {
        FAILED
    }
}

/// Budget exhaustion rather than a wrong input or a negative answer.
fn undecided_kind(e: &Error) -> Option<&'static str> {
    match e {
        Error::Undecided(_) => Some("search_budget"),
        Error::DegreeCeiling { .. } => Some("degree_ceiling"),
        Error::SizeBudget(_) => Some("size_budget"),
        _ => None,
    }
}

fn emit(text: &str) {
    use std::io::Write;
    // a closed pipe is not an error worth reporting
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.global.output == Output::Json;
    match run(&cli) {
        Ok(r) => {
            if json {
                emit(&format!("{}\n", serde_json::to_string_pretty(&r.json).expect("reports serialize")));
            } else {
                emit(&r.text);
            }
            ExitCode::from(r.code)
        }
        Err(e) => match e.downcast_ref::<Error>().and_then(|inner| undecided_kind(inner).map(|k| (k, inner))) {
            Some((kind, inner)) => {
                if json {
                    let v = json!({"status": "undecided", "kind": kind, "reason": inner.to_string()});
                    emit(&format!("{}\n", serde_json::to_string_pretty(&v).expect("reports serialize")));
                } else {
                    emit(&format!("UNDECIDED ({kind}): {inner}\n"));
                }
                ExitCode::from(UNDECIDED)
            }
            None => {
                eprintln!("error: {e:#}");
                ExitCode::from(FAILED)
            }
        },
    }
}

fn run(cli: &Cli) -> anyhow::Result<Report> {
    let g = &cli.global;
    let field = g.field.as_deref().map(Field::from_descriptor).transpose().context("--field")?;
    let load = |path: &Path| -> anyhow::Result<(Problem, Options)> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let problem = Problem::from_json(&text, field).with_context(|| format!("{}", path.display()))?;
        let opts = options(g, problem.options.unwrap_or_default());
        Ok((problem, opts))
    };
    match &cli.command {
        Command::Check { path } => {
            let (p, opts) = load(path)?;
            check(&p, &opts)
        }
        Command::Skew { path } => skew(&load(path)?.0),
        Command::Basic { path, plain } => {
            let (p, opts) = load(path)?;
            basic(&p, *plain, &opts)
        }
        Command::Irr { group } => irr(group, field.unwrap_or(Field::Rationals), &options(g, Options::default())),
        Command::VerifyMain { path } => {
            let (p, opts) = load(path)?;
            verify(&p, &opts)
        }
        Command::Quiver { path, plain } => {
            let (p, opts) = load(path)?;
            quiver(&p, *plain, &opts)
        }
    }
}

fn options(g: &Global, base: Options) -> Options {
    Options {
        seed: g.seed.unwrap_or(base.seed),
        max_samples: g.max_samples.unwrap_or(base.max_samples),
        degree_ceiling: g.degree_ceiling.unwrap_or(base.degree_ceiling),
        grid_budget: g.grid_budget.unwrap_or(base.grid_budget),
    }
}

fn certainty_text(c: Certainty) -> String {
    match c {
        Certainty::Certified => "certified".into(),
        Certainty::Probable { samples } => format!("probable (no splitting found in {samples} samples)"),
    }
}

fn checks_text(out: &mut String, checks: &[Check]) {
    for c in checks {
        let mark = if c.passed { "ok  " } else { "FAIL" };
        if c.detail.is_empty() || c.passed {
            let _ = writeln!(out, "  [{mark}] {}", c.name);
        } else {
            let _ = writeln!(out, "  [{mark}] {}: {}", c.name, c.detail);
        }
    }
}

fn strings(v: &[Scalar]) -> Vec<String> {
    v.iter().map(Scalar::to_string).collect()
}

fn header(p: &Problem) -> Value {
    json!({
        "name": p.name,
        "field": FieldSpec::from(p.field),
        "group_order": p.action.group().order(),
        "algebra_dim": p.action.algebra().dim(),
    })
}

fn check(p: &Problem, opts: &Options) -> anyhow::Result<Report> {
    let setup = p.setup()?;
    let report = validate_setup(&setup, opts)?;
    let blocks: Vec<Value> = setup
        .blocks
        .iter()
        .map(|b| json!({"orbit": b.orbit, "representative": b.representative, "stabilizer_order": b.stabilizer.group().order()}))
        .collect();
    let mut text = String::new();
    let _ = writeln!(text, "{}", if report.passed() { "VALID" } else { "INVALID" });
    for (k, b) in setup.blocks.iter().enumerate() {
        let _ = writeln!(text, "block {k}: orbit {:?}, stabilizer of order {}", b.orbit, b.stabilizer.group().order());
    }
    checks_text(&mut text, &report.checks);
    Ok(Report {
        json: json!({"setup": header(p), "passed": report.passed(), "blocks": blocks, "checks": report.checks}),
        text,
        code: code(report.passed()),
    })
}

fn skew(p: &Problem) -> anyhow::Result<Report> {
    let s = skew_algebra(p.action.clone())?;
    let (n, d) = (p.action.group().order(), p.action.algebra().dim());
    let mut text = format!("dim {}\n", s.dim());
    let _ = writeln!(text, "|G| = {n}, dim A = {d}; basis (g, b_i) at index g·{d} + i");
    let _ = writeln!(text, "commutative: {}", s.algebra.is_commutative());
    Ok(Report {
        json: json!({
            "setup": header(p),
            "dim": s.dim(),
            "commutative": s.algebra.is_commutative(),
            "algebra": AlgebraSpec::from_algebra(&s.algebra),
        }),
        text,
        code: 0,
    })
}

fn basic(p: &Problem, plain: bool, opts: &Options) -> anyhow::Result<Report> {
    let source = if plain { p.action.algebra().clone() } else { skew_algebra(p.action.clone())?.algebra };
    let r = basic_reduction(source, opts)?;
    let b = r.algebra();
    let mut text = format!("dim {} -> basic dim {}\n", r.input_dim, b.dim());
    let _ = writeln!(text, "projective dims {:?}", r.projective_dims());
    let _ = writeln!(text, "multiplicities {:?}", r.multiplicities);
    let _ = writeln!(text, "cartan {:?}", r.cartan);
    let _ = writeln!(text, "certainty: {}", certainty_text(r.certainty));
    Ok(Report {
        json: json!({
            "setup": header(p),
            "of": if plain { "algebra" } else { "skew" },
            "input_dim": r.input_dim,
            "dim": b.dim(),
            "projective_dims": r.projective_dims(),
            "multiplicities": r.multiplicities,
            "cartan": r.cartan,
            "algebra": AlgebraSpec::from_algebra(b),
            "certainty": r.certainty,
        }),
        text,
        code: 0,
    })
}

fn irr(group: &str, field: Field, opts: &Options) -> anyhow::Result<Report> {
    let g = if Path::new(group).is_file() {
        let text = std::fs::read_to_string(group).with_context(|| format!("reading {group}"))?;
        let spec: GroupSpec = serde_json::from_str(&text).with_context(|| group.to_string())?;
        spec.build()?
    } else {
        named_group(group)?
    };
    let g = Arc::new(g);
    let table = irreducibles(g.clone(), field, opts)?;
    let mut text = format!("|G| = {} over {field}\n  dim  endo  mult\n", g.order());
    let mut rows = Vec::new();
    let mut total = 0;
    for e in &table.entries {
        let _ = writeln!(text, "  {:>3}  {:>4}  {:>4}", e.dim, e.endo_dim, e.multiplicity);
        total += e.dim * e.multiplicity;
        rows.push(json!({
            "dim": e.dim,
            "endo_dim": e.endo_dim,
            "multiplicity": e.multiplicity,
            "character": strings(&character(&e.module)),
            "module": ModuleSpec::from_module(&e.module),
        }));
    }
    let _ = writeln!(text, "sum of mult·dim = {total}");
    Ok(Report {
        json: json!({
            "group": {"degree": g.degree(), "generators": g.generators()},
            "order": g.order(),
            "field": FieldSpec::from(field),
            "rows": rows,
            "certainty": table.certainty,
        }),
        text,
        code: code(total == g.order()),
    })
}

fn verify(p: &Problem, opts: &Options) -> anyhow::Result<Report> {
    let setup = p.setup()?;
    let pre = validate_setup(&setup, opts)?;
    if !pre.passed() {
        let mut text = String::from("FAILED\nsetup does not validate\n");
        checks_text(&mut text, &pre.checks);
        return Ok(Report {
            json: json!({"setup": header(p), "verdict": Verdict::Failed, "checks": pre.checks}),
            text,
            code: FAILED,
        });
    }
    let r = verify_main_theorem(&setup, opts)?;
    let ok = r.verdict == Verdict::Verified;
    // a verdict resting on an exhausted search is not a certified one
    let probable = matches!(r.certainty, Certainty::Probable { .. });
    let mults = r.multiplicities();
    let mut text = match (ok, probable) {
        (true, false) => "VERIFIED\n".to_string(),
        (true, true) => "VERIFIED (probable)\n".to_string(),
        (false, _) => "FAILED\n".to_string(),
    };
    let _ = writeln!(text, "dims ({}, {})", r.skew_dim(), r.end_dim());
    let _ = writeln!(text, "dim G⋉A = {}, dim End(𝔽) = {}, dim basic = {}", r.skew_dim(), r.end_dim(), r.basic_dim());
    let _ = writeln!(text, "multiplicities ({})", mults.iter().map(usize::to_string).collect::<Vec<_>>().join(", "));
    let objects: Vec<Value> = r
        .collection
        .objects
        .iter()
        .map(|o| {
            let _ = writeln!(
                text,
                "  {}  dim {}  multiplicity {}  (ρ: dim {}, endo {})",
                o.label,
                o.module.dim(),
                o.multiplicity,
                o.rho_dim,
                o.rho_endo_dim
            );
            json!({
                "label": o.label,
                "vertex": o.vertex,
                "block": o.block,
                "dim": o.module.dim(),
                "rho_dim": o.rho_dim,
                "rho_endo_dim": o.rho_endo_dim,
                "multiplicity": o.multiplicity,
            })
        })
        .collect();
    checks_text(&mut text, &r.checks);
    let _ = writeln!(text, "certainty: {}", certainty_text(r.certainty));
    Ok(Report {
        json: json!({
            "setup": header(p),
            "verdict": r.verdict,
            "skew_dim": r.skew_dim(),
            "end_dim": r.end_dim(),
            "basic_dim": r.basic_dim(),
            "multiplicities": mults,
            "objects": objects,
            "checks": r.checks,
            "isomorphism": r.isomorphism.as_ref().map(matrix_strings),
            "certainty": r.certainty,
        }),
        text,
        code: if !ok { FAILED } else if probable { UNDECIDED } else { 0 },
    })
}

fn quiver_text(out: &mut String, q: &skewalg::theorems::BasicQuiver) {
    let _ = writeln!(out, "{} vertices, {} arrows", q.vertices, q.arrow_total());
    for (u, row) in q.arrows.iter().enumerate() {
        for (v, &n) in row.iter().enumerate().filter(|(_, &n)| n > 0) {
            let _ = writeln!(out, "  {u} -> {v}: {n}");
        }
    }
    if !q.is_split() {
        let _ = writeln!(out, "division dims at vertices {:?}", q.division_dims);
    }
}

fn quiver(p: &Problem, plain: bool, opts: &Options) -> anyhow::Result<Report> {
    let mut text = String::new();
    if plain {
        let q = quiver_of_basic(p.action.algebra().clone(), opts)?;
        quiver_text(&mut text, &q);
        return Ok(Report { json: json!({"setup": header(p), "quiver": q}), text, code: 0 });
    }
    let setup = p.setup()?;
    let r = verify_main_theorem(&setup, opts)?;
    let d = demonet_check(&setup, &r, opts)?;
    quiver_text(&mut text, &d.quiver);
    let parts: Vec<String> = d.orbit_counts.iter().map(|(_, n)| n.to_string()).collect();
    let _ = writeln!(
        text,
        "stabilizer irreducibles: {} = {} ({})",
        d.expected,
        parts.join(" + "),
        if d.passed { "matches" } else { "MISMATCH" }
    );
    Ok(Report { json: json!({"setup": header(p), "quiver": d.quiver, "stabilizers": d}), text, code: code(d.passed) })
}
