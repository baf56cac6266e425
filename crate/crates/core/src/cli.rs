//! Batch front end behind the `arrkit` binary.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use log::info;
use serde_json::{json, Value};

use crate::chromatic::{chromatic_euler_check, chromatic_model, export_presentation_json, export_presentation_text};
use crate::dga::Check;
use crate::error::{Error, Result};
use crate::examples;
use crate::graph::Graph;
use crate::mobius_inv::{named_diagram, verify_hat, CubicalDiagram, DIAGRAM_NAMES};
use crate::mvss::{
    build_e1_cubical, build_e1_lattice, cohomology, formality_report, poincare_polynomial, render_e_table, report_json,
    E1Algebra,
};
use crate::oscomplex::{os_algebra, verify_chain_algebra};
use crate::poset::{cubical_lattice, GradedPoset};
use crate::subspace::{complex_hyperplane_ring, formality_model, whitney_numbers, zaslavsky_regions, SubspaceArrangement};
use crate::supportcoh::{custom_support, GradedRing, SupportModule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    OsAlgebra,
    Mv,
    CubicalMv,
    Chromatic,
    Subspace,
    VerifyMobius,
    Examples,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "arrkit", version, about = "Rational models of arrangement complements")]
pub struct JobSpec {
    #[arg(value_enum)]
    pub command: Command,
    /// Input JSON file (support module, poset, graph, arrangement or diagram).
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Built-in example; see the `examples` command.
    #[arg(long)]
    pub example: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Graph name (k3, path4, c5, star3, empty2) or JSON file.
    #[arg(long)]
    pub graph: Option<String>,
    /// Space name (p1, p2, elliptic, point) or ring JSON file.
    #[arg(long)]
    pub space: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Picks the alternative section used for the independence check.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

const EXAMPLES: [(&str, &str); 9] = [
    ("mv --example lines-p2 --n N", "n lines through one point of P², 2 ≤ n ≤ 8"),
    ("mv --example quadric-p3", "quadric, tangent line and transversal line in P³"),
    ("mv --example braid --n N", "braid arrangement in C^n, n ≤ 5"),
    ("mv --example boolean --n N", "coordinate hyperplanes of C^n, n ≤ 6"),
    ("cubical-mv --example quadric-p3", "the quadric example over its atom subsets"),
    ("chromatic --graph G --space M", "F(M, G) for M in p1, p2, elliptic"),
    ("subspace --example braid --n N", "braid arrangement as a subspace arrangement"),
    ("os-algebra --example braid --n N", "Orlik-Solomon algebra of a built-in lattice"),
    ("verify-mobius --example D", "Möbius inversion algebra of a built-in diagram"),
];

fn read_input(job: &JobSpec) -> Result<Option<String>> {
    match &job.input {
        None => Ok(None),
        Some(p) => std::fs::read_to_string(p).map(Some).map_err(|e| Error::Schema(format!("{}: {e}", p.display()))),
    }
}

fn example_support(job: &JobSpec) -> Result<(String, SupportModule)> {
    let name = job.example.as_deref().ok_or_else(|| Error::Schema("give --input or --example".into()))?;
    let need_n = || job.n.ok_or_else(|| Error::Schema(format!("example {name} needs --n")));
    let supp = match name {
        "lines-p2" => examples::lines_p2(need_n()?)?,
        "quadric-p3" => examples::quadric_p3()?,
        "braid" => examples::braid(need_n()?)?,
        "boolean" => examples::boolean(need_n()?)?,
        _ => return Err(Error::Schema(format!("unknown example {name:?}; known: {}", ["lines-p2", "quadric-p3", "braid", "boolean"].join(", ")))),
    };
    let title = match job.n {
        Some(n) if name != "quadric-p3" => format!("{name} (n = {n})"),
        _ => name.to_string(),
    };
    Ok((title, supp))
}

fn support_for(job: &JobSpec) -> Result<(String, SupportModule)> {
    match read_input(job)? {
        Some(text) => Ok((job.input.as_ref().unwrap().display().to_string(), custom_support(&text)?)),
        None => example_support(job),
    }
}

fn poset_for(job: &JobSpec) -> Result<(String, GradedPoset)> {
    match read_input(job)? {
        Some(text) => Ok((job.input.as_ref().unwrap().display().to_string(), GradedPoset::from_json(&text)?)),
        None => example_support(job).map(|(t, s)| (t, s.poset().clone())),
    }
}

fn graph_for(job: &JobSpec) -> Result<Graph> {
    if let Some(text) = read_input(job)? {
        return Graph::from_json(&text);
    }
    let spec = job.graph.as_deref().ok_or_else(|| Error::Schema("chromatic needs --graph or --input".into()))?;
    if spec.ends_with(".json") {
        let text = std::fs::read_to_string(spec).map_err(|e| Error::Schema(format!("{spec}: {e}")))?;
        return Graph::from_json(&text);
    }
    Graph::named(spec)
}

fn ring_for(job: &JobSpec) -> Result<GradedRing> {
    let spec = job.space.as_deref().unwrap_or("p1");
    if spec.ends_with(".json") {
        let text = std::fs::read_to_string(spec).map_err(|e| Error::Schema(format!("{spec}: {e}")))?;
        return GradedRing::from_json(&text);
    }
    GradedRing::named(spec)
}

fn checks_text(out: &mut String, checks: &[Check]) {
    out.push_str("checks:\n");
    for c in checks {
        let _ = writeln!(out, "  {:<24} {}", c.name, if c.passed { "ok" } else { &c.detail });
    }
}

fn checks_json(checks: &[Check]) -> Value {
    json!(checks)
}

fn polynomial(c: &[i64]) -> String {
    let terms: Vec<String> = c
        .iter()
        .enumerate()
        .filter(|(_, a)| **a != 0)
        .map(|(k, a)| match k {
            0 => a.to_string(),
            1 if *a == 1 => "t".into(),
            1 => format!("{a}t"),
            _ if *a == 1 => format!("t^{k}"),
            _ => format!("{a}t^{k}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn spectral_report(title: &str, e1: &E1Algebra, job: &JobSpec) -> Result<String> {
    info!("E1 has dimension {}", e1.dim());
    let ring = cohomology(e1)?;
    let mut checks = e1.verify();
    checks.push(ring.check_section_independence(e1, job.seed));
    let formal = formality_report(e1, &ring);
    match job.format {
        Format::Json => {
            let mut v = report_json(e1, &ring);
            v["arrangement"] = json!(title);
            v["formality"] = json!(formal);
            v["checks"] = checks_json(&checks);
            Ok(serde_json::to_string_pretty(&v).unwrap() + "\n")
        }
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "arrangement: {title}");
            let _ = writeln!(out, "poset: {} elements, rank {}", e1.poset().len(), e1.poset().max_rank());
            let _ = writeln!(out, "\nE1\n{}", render_e_table(&e1.dims()));
            let _ = writeln!(out, "E2 = E∞\n{}", render_e_table(&ring.nonzero_dims()));
            let _ = writeln!(out, "Betti: {}", join(&ring.betti));
            let _ = writeln!(out, "Poincaré polynomial: {}", polynomial(&poincare_polynomial(&ring)));
            let _ = writeln!(out, "formality: {} ({})", formal.verdict, formal.detail);
            checks_text(&mut out, &checks);
            Ok(out)
        }
    }
}

fn run_mv(job: &JobSpec, cubical: bool) -> Result<String> {
    let (title, supp) = support_for(job)?;
    let e1 = if cubical {
        let p = supp.poset();
        if p.len() == 1 << p.atoms().len() {
            build_e1_cubical(&supp)?
        } else {
            let q = cubical_lattice(p)?;
            build_e1_cubical(&supp.pullback_to_cubical(&q)?)?
        }
    } else {
        build_e1_lattice(&os_algebra(supp.poset())?, &supp)?
    };
    spectral_report(&title, &e1, job)
}

fn run_os(job: &JobSpec) -> Result<String> {
    let (title, l) = poset_for(job)?;
    if !l.is_locally_geometric() {
        return Err(Error::NotLocallyGeometric(title));
    }
    let os = os_algebra(&l)?;
    let report = verify_chain_algebra(&os);
    match job.format {
        Format::Json => {
            let mut v: Value = serde_json::from_str(&os.to_json()).unwrap();
            v["poset"] = json!(title);
            v["checks"] = checks_json(&report.checks);
            Ok(serde_json::to_string_pretty(&v).unwrap() + "\n")
        }
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "poset: {title}");
            let _ = writeln!(out, "{:<20} {:>4} {:>6} {:>6}", "element", "rank", "mu", "dim");
            for x in 0..l.len() {
                let _ = writeln!(out, "{:<20} {:>4} {:>6} {:>6}", l.id(x), l.rank(x), l.moebius(x), os.dim(x));
            }
            let _ = writeln!(out, "dims by rank: {}", join(&os.dims_by_rank()));
            checks_text(&mut out, &report.checks);
            Ok(out)
        }
    }
}

fn run_chromatic(job: &JobSpec) -> Result<String> {
    let g = graph_for(job)?;
    let ring = ring_for(job)?;
    let model = chromatic_model(&ring, &g)?;
    let euler = chromatic_euler_check(&model)?;
    let title = format!("F({}, {})", ring.name, job.graph.as_deref().unwrap_or("graph"));
    match job.format {
        Format::Json => {
            let h = cohomology(&model.e1)?;
            let mut v = report_json(&model.e1, &h);
            v["model"] = export_presentation_json(&model);
            v["euler"] = json!(euler);
            v["checks"] = checks_json(&model.e1.verify());
            Ok(serde_json::to_string_pretty(&v).unwrap() + "\n")
        }
        Format::Text => {
            let mut out = spectral_report(&title, &model.e1, job)?;
            let _ = writeln!(out, "Euler check: ({}, {}, {})", euler.lhs, euler.rhs, euler.equal);
            out.push('\n');
            out.push_str(&export_presentation_text(&model));
            Ok(out)
        }
    }
}

fn run_subspace(job: &JobSpec) -> Result<String> {
    let (title, arr) = match read_input(job)? {
        Some(text) => (job.input.as_ref().unwrap().display().to_string(), SubspaceArrangement::from_json(&text)?),
        None => {
            let (t, s) = example_support(job)?;
            let n = job.n.unwrap_or(s.poset().max_rank());
            (t, SubspaceArrangement::from_poset(n, s.poset().clone())?)
        }
    };
    let e1 = formality_model(&arr)?;
    let h = cohomology(&e1)?;
    let regions = zaslavsky_regions(&arr.poset)?;
    let ring = if arr.is_hyperplane_arrangement() { Some(complex_hyperplane_ring(&arr)?) } else { None };
    let checks = e1.verify();
    match job.format {
        Format::Json => {
            let v = json!({
                "arrangement": title,
                "ambient_dim": arr.ambient_dim,
                "betti": h.betti,
                "poincare": poincare_polynomial(&h),
                "whitney": whitney_numbers(&arr.poset),
                "mu_sum": regions,
                "hyperplane_ring": ring.as_ref().map(poincare_polynomial),
                "checks": checks,
            });
            Ok(serde_json::to_string_pretty(&v).unwrap() + "\n")
        }
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "arrangement: {title} in C^{}", arr.ambient_dim);
            let _ = writeln!(out, "Betti: {}", join(&h.betti));
            let _ = writeln!(out, "Poincaré polynomial: {}", polynomial(&poincare_polynomial(&h)));
            let _ = writeln!(out, "Whitney numbers: {}", join(&whitney_numbers(&arr.poset)));
            let _ = writeln!(out, "Σ|μ(0,x)| (regions of a real form): {regions}");
            if let Some(r) = &ring {
                let _ = writeln!(out, "Orlik-Solomon ring: {}", polynomial(&poincare_polynomial(r)));
            }
            checks_text(&mut out, &checks);
            Ok(out)
        }
    }
}

fn run_mobius(job: &JobSpec) -> Result<String> {
    let (title, diag) = match read_input(job)? {
        Some(text) => (job.input.as_ref().unwrap().display().to_string(), CubicalDiagram::from_json(&text)?),
        None => {
            let name = job.example.as_deref().ok_or_else(|| {
                Error::Schema(format!("give --input or --example ({})", DIAGRAM_NAMES.join(", ")))
            })?;
            (name.to_string(), named_diagram(name)?)
        }
    };
    let report = verify_hat(&diag, diag.full())?;
    match job.format {
        Format::Json => {
            let v = json!({"diagram": title, "atoms": diag.atoms(), "report": report});
            Ok(serde_json::to_string_pretty(&v).unwrap() + "\n")
        }
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "diagram: {title}, {} atoms", diag.atoms());
            let _ = writeln!(out, "Â^{} has dimension {}", report.nset, report.dim);
            checks_text(&mut out, &report.checks);
            let _ = writeln!(out, "verdict: {}", if report.passed() { "all checks pass" } else { "FAILED" });
            Ok(out)
        }
    }
}

fn run_examples(job: &JobSpec) -> String {
    match job.format {
        Format::Json => {
            let v: Vec<Value> = EXAMPLES.iter().map(|(c, d)| json!({"command": c, "description": d})).collect();
            serde_json::to_string_pretty(&json!({"examples": v, "diagrams": DIAGRAM_NAMES})).unwrap() + "\n"
        }
        Format::Text => {
            let mut out = String::new();
            for (c, d) in EXAMPLES {
                let _ = writeln!(out, "{c:<36} {d}");
            }
            let _ = writeln!(out, "diagrams: {}", DIAGRAM_NAMES.join(", "));
            out
        }
    }
}

/// Runs one job and returns the rendered report.
pub fn run(job: &JobSpec) -> Result<String> {
    info!("running {:?}", job.command);
    match job.command {
        Command::OsAlgebra => run_os(job),
        Command::Mv => run_mv(job, false),
        Command::CubicalMv => run_mv(job, true),
        Command::Chromatic => run_chromatic(job),
        Command::Subspace => run_subspace(job),
        Command::VerifyMobius => run_mobius(job),
        Command::Examples => Ok(run_examples(job)),
    }
}

/// Machine-readable error block for stderr.
pub fn error_block(e: &Error) -> String {
    serde_json::to_string_pretty(&json!({"error": {"kind": e.kind(), "message": e.to_string(), "exit_code": e.exit_code()}}))
        .unwrap()
}

/// Parses arguments, runs the job and writes the output; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let job = match JobSpec::try_parse_from(args) {
        Ok(j) => j,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&job) {
        Ok(text) => {
            if let Some(p) = &job.out {
                if let Err(e) = std::fs::write(p, &text) {
                    eprintln!("{}", error_block(&Error::Schema(format!("{}: {e}", p.display()))));
                    return 2;
                }
            } else {
                print!("{text}");
            }
            0
        }
        Err(e) => {
            eprintln!("{}", error_block(&e));
            e.exit_code()
        }
    }
}
