//! Command-line front end.
//!
//! Exit codes: 0 when the property holds or the value was computed, 1 when
//! the property fails (the report carries the witness), 2 for bad input or
//! usage. Every report starts with the command, the seed and the
//! certification width.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::amalgam::{
    check_verdict, fiber_product_circle, hoehn_check, ArcMap, CircleMap, Verdict,
};
use crate::chain::{
    build_witness, extract_chain, find_chain_refinement, nerve_and_is_chain, prune_chain, psi0, psi1, psi2,
    sigma_parts, Cover, Obstruction, SearchBudget, SearchOutcome,
};
use crate::error::Error;
use crate::graph::MetricGraph;
use crate::io::{self, certified_json, point_json, Loader, MapValue};
use crate::logic::{bound_quantifier, eval_qf, parse_formula, projectionless_value, Assignment, Budget, Domain, Mode};
use crate::pl::PLFunction;
use crate::random;
use crate::rational::{fmt_q, parse_q, q, qi, Q};
use crate::sets::OpenSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "continua", version, about = "Exact chainability and amalgamation checks on PL models of continua")]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Width of certified intervals, as "p/q".
    #[arg(long, default_value = "1/1000000000", global = true)]
    pub width: String,
    /// Seed for every random choice.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a formula, optionally bounding a quantifier by sampling.
    Eval(EvalArgs),
    /// ψ₀ and ψ₁ of a tuple, and ψ₂ against a witness.
    Psi(TupleArgs),
    /// The σ body for a tuple and a witness.
    SigmaInner(TupleArgs),
    /// Build a witness from a nonnegative tuple on an arc.
    Witness(WitnessArgs),
    /// Turn a witness into a verified chain certificate.
    ExtractChain(TupleArgs),
    /// Search for a chain refinement of an open cover.
    Refine(RefineArgs),
    /// Nerve of a cover and whether it is a chain.
    Nerve(CoverArgs),
    /// Drop the gaps of a chain cover.
    Prune(CoverArgs),
    /// Run the amalgamation counterexample check on (W, r, s).
    Hoehn(HoehnArgs),
    /// Fiber product of two circle maps out of [0, 1].
    Fiber(FiberArgs),
    /// Sample the projectionless axiom on random norm-one functions.
    AxiomConn(AxiomArgs),
    /// Re-check a certificate or verdict file from scratch.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Formula text.
    #[arg(long, conflicts_with = "formula_file")]
    pub formula: Option<String>,
    #[arg(long)]
    pub formula_file: Option<PathBuf>,
    /// Assignment file.
    #[arg(long)]
    pub assignment: Option<PathBuf>,
    /// Graph for variables bound by --sup/--inf when no assignment is given.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Variables to bound from below by a supremum, e.g. 1,2.
    #[arg(long, value_delimiter = ',', conflicts_with = "inf")]
    pub sup: Vec<usize>,
    /// Variables to bound from above by an infimum.
    #[arg(long, value_delimiter = ',')]
    pub inf: Vec<usize>,
    /// Restrict bound variables to norm exactly one.
    #[arg(long)]
    pub sphere: bool,
    #[arg(long, default_value_t = 64)]
    pub samples: usize,
    #[arg(long, default_value_t = 4)]
    pub breakpoints: usize,
}

#[derive(Debug, Args)]
pub struct TupleArgs {
    /// Tuple file (graph plus functions).
    #[arg(long)]
    pub tuple: PathBuf,
    #[arg(long)]
    pub witness: Option<PathBuf>,
    /// Write the certificate here (extract-chain).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    #[arg(long)]
    pub tuple: PathBuf,
    /// Target δ as "p/q"; defaults to ψ₀(f)/2.
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RefineArgs {
    #[arg(long)]
    pub cover: PathBuf,
    #[arg(long, default_value_t = 3)]
    pub depth: i64,
    /// Labellings examined before giving up.
    #[arg(long, default_value_t = 200_000)]
    pub nodes: usize,
    /// Largest mesh handed to the exhaustive search.
    #[arg(long, default_value_t = 1024)]
    pub atoms: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CoverArgs {
    #[arg(long)]
    pub cover: PathBuf,
}

#[derive(Debug, Args)]
pub struct HoehnArgs {
    /// Graph file for W.
    #[arg(long)]
    pub w: PathBuf,
    /// Arc map file for r.
    #[arg(long)]
    pub r: PathBuf,
    /// Arc map file for s.
    #[arg(long)]
    pub s: PathBuf,
    #[command(flatten)]
    pub maps: CircleArgs,
    /// Write the verdict here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CircleArgs {
    /// Circle map file for f; defaults to x ↦ exp(2πi x).
    #[arg(long)]
    pub f: Option<PathBuf>,
    /// Circle map file for g; defaults to y ↦ exp(2πi (y + shift)).
    #[arg(long)]
    pub g: Option<PathBuf>,
    #[arg(long, default_value = "1/2")]
    pub shift: String,
}

#[derive(Debug, Args)]
pub struct FiberArgs {
    #[command(flatten)]
    pub maps: CircleArgs,
    /// Directory for fiber.json, r.json and s.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AxiomArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 4)]
    pub breakpoints: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Certificate or verdict file.
    #[arg(long)]
    pub file: PathBuf,
}

/// What a command produced.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub code: i32,
    pub body: Value,
}

impl Report {
    fn ok(body: Value) -> Self {
        Self { code: 0, body }
    }

    fn fails(body: Value) -> Self {
        Self { code: 1, body }
    }

    fn holds(holds: bool, body: Value) -> Self {
        Self { code: if holds { 0 } else { 1 }, body }
    }
}

fn input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Schema { .. }
            | Error::Parse { .. }
            | Error::InvalidGraph(_)
            | Error::InvalidFunction(_)
            | Error::UnknownEdge(_)
            | Error::PointOutOfRange { .. }
            | Error::GraphMismatch
            | Error::Dimension(_)
            | Error::Unassigned(_)
            | Error::DegreeCap(_)
    )
}

fn header(cli: &Cli, name: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("format".into(), json!(io::FORMAT));
    m.insert("command".into(), json!(name));
    m.insert("seed".into(), json!(cli.seed));
    m.insert("width".into(), json!(cli.width));
    m
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Eval(_) => "eval",
        Command::Psi(_) => "psi",
        Command::SigmaInner(_) => "sigma-inner",
        Command::Witness(_) => "witness",
        Command::ExtractChain(_) => "extract-chain",
        Command::Refine(_) => "refine",
        Command::Nerve(_) => "nerve",
        Command::Prune(_) => "prune",
        Command::Hoehn(_) => "hoehn",
        Command::Fiber(_) => "fiber",
        Command::AxiomConn(_) => "axiom-conn",
        Command::Verify(_) => "verify",
    }
}

/// Parse `args` (including the program name), run, and return the exit code
/// with the rendered report.
pub fn run_args<I, S>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            (code, e.to_string())
        }
    }
}

pub fn run(cli: &Cli) -> (i32, String) {
    let name = command_name(&cli.command);
    let mut body = header(cli, name);
    let report = dispatch(cli);
    let code = match report {
        Ok(r) => {
            if let Value::Object(m) = r.body {
                body.extend(m);
            }
            r.code
        }
        Err(e) => {
            body.insert("status".into(), json!("error"));
            body.insert("error".into(), json!(e.to_string()));
            if input_error(&e) {
                2
            } else {
                1
            }
        }
    };
    let body = Value::Object(body);
    let out = match cli.format {
        Format::Json => io::to_json(&body),
        Format::Text => render_text(&body),
    };
    (code, out)
}

fn render_text(v: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(m) = v {
        for (k, v) in m {
            let s = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{k}: {s}\n"));
        }
    }
    out
}

fn width(cli: &Cli) -> crate::Result<Q> {
    let w = parse_q(&cli.width).map_err(|_| Error::Schema { path: "--width".into(), message: format!("not a rational: {}", cli.width) })?;
    if w <= qi(0) {
        return Err(Error::Schema { path: "--width".into(), message: "width must be positive".into() });
    }
    Ok(w)
}

fn flag_q(name: &str, s: &str) -> crate::Result<Q> {
    parse_q(s).map_err(|_| Error::Schema { path: name.into(), message: format!("not a rational: {s}") })
}

fn dispatch(cli: &Cli) -> crate::Result<Report> {
    let w = width(cli)?;
    let loader = Loader::new();
    match &cli.command {
        Command::Eval(a) => eval(cli, a, &w, &loader),
        Command::Psi(a) => psi(a, &w, &loader),
        Command::SigmaInner(a) => sigma(a, &w, &loader),
        Command::Witness(a) => witness(a, &w, &loader),
        Command::ExtractChain(a) => extract(a, &w, &loader),
        Command::Refine(a) => refine(a, &loader),
        Command::Nerve(a) => nerve(a, &loader),
        Command::Prune(a) => prune(a, &loader),
        Command::Hoehn(a) => hoehn(a, &loader),
        Command::Fiber(a) => fiber(a, &loader),
        Command::AxiomConn(a) => axiom(cli, a, &w, &loader),
        Command::Verify(a) => verify(a, &loader),
    }
}

fn eval(cli: &Cli, a: &EvalArgs, w: &Q, loader: &Loader) -> crate::Result<Report> {
    let text = match (&a.formula, &a.formula_file) {
        (Some(t), _) => t.clone(),
        (None, Some(p)) => fs::read_to_string(p).map_err(|e| Error::Schema { path: p.display().to_string(), message: e.to_string() })?,
        (None, None) => return Err(Error::Schema { path: "--formula".into(), message: "give --formula or --formula-file".into() }),
    };
    let formula = parse_formula(text.trim())?;
    let (graph, fixed): (Option<Arc<MetricGraph>>, Assignment) = match (&a.assignment, &a.graph) {
        (Some(p), _) => {
            let (g, asg) = loader.assignment(p)?;
            (Some(g), asg)
        }
        (None, Some(p)) => (Some(loader.graph(p)?), Assignment::new()),
        (None, None) => (None, Assignment::new()),
    };
    let quantified = match (a.sup.is_empty(), a.inf.is_empty()) {
        (true, true) => None,
        (false, _) => Some((Mode::Sup, a.sup.clone())),
        (_, false) => Some((Mode::Inf, a.inf.clone())),
    };
    let mut out = json!({ "formula": formula.to_string() });
    match quantified {
        None => {
            let v = eval_qf(&formula, &fixed, w)?;
            out["status"] = json!("computed");
            out["value"] = certified_json(&v);
        }
        Some((mode, vars)) => {
            let graph = graph.ok_or_else(|| Error::Schema { path: "--graph".into(), message: "quantifiers need a graph".into() })?;
            let budget = Budget { breakpoints: a.breakpoints, samples: a.samples, seed: cli.seed };
            let domain = if a.sphere { Domain::UnitSphere } else { Domain::UnitBall };
            let b = bound_quantifier(mode, &formula, &vars, &graph, &fixed, domain, &budget, w)?;
            out["status"] = json!("computed");
            out["mode"] = json!(if mode == Mode::Sup { "sup" } else { "inf" });
            out["bound"] = json!(fmt_q(b.bound()));
            out["value"] = certified_json(&b.value);
            out["witness_index"] = json!(b.witness_index);
            out["candidates"] = json!(b.candidates);
            out["witness"] = Value::Object(
                b.witness
                    .iter()
                    .filter(|(v, _)| vars.contains(v))
                    .map(|(v, f)| (format!("x{v}"), serde_json::to_value(io::function_doc(f, None)).unwrap()))
                    .collect(),
            );
        }
    }
    Ok(Report::ok(out))
}

fn psi(a: &TupleArgs, w: &Q, loader: &Loader) -> crate::Result<Report> {
    let (_, fs) = loader.functions(&a.tuple)?;
    let mut out = json!({
        "status": "computed",
        "k": fs.len(),
        "psi0": certified_json(&psi0(&fs)?),
        "psi1": certified_json(&psi1(&fs, w)?),
    });
    if let Some(p) = &a.witness {
        let wit = loader.witness(p)?;
        out["psi0_g"] = certified_json(&psi0(&wit.g)?);
        out["psi1_g"] = certified_json(&psi1(&wit.g, w)?);
        out["psi2"] = certified_json(&psi2(&fs, &wit.g, &wit.h)?);
    }
    Ok(Report::ok(out))
}

fn need_witness(a: &TupleArgs) -> crate::Result<&Path> {
    a.witness
        .as_deref()
        .ok_or_else(|| Error::Schema { path: "--witness".into(), message: "a witness file is required".into() })
}

fn sigma(a: &TupleArgs, w: &Q, loader: &Loader) -> crate::Result<Report> {
    let (_, fs) = loader.functions(&a.tuple)?;
    let wit = loader.witness(need_witness(a)?)?;
    let p = sigma_parts(&fs, &wit, w)?;
    let holds = p.value.upper() <= &wit.delta;
    Ok(Report::holds(
        holds,
        json!({
            "status": if holds { "below-delta" } else { "above-delta" },
            "value": certified_json(&p.value),
            "delta": fmt_q(&wit.delta),
            "psi0_f": certified_json(&p.psi0_f),
            "psi0_g": certified_json(&p.psi0_g),
            "psi1": certified_json(&p.psi1),
            "psi2": certified_json(&p.psi2),
            "deficit": certified_json(&p.deficit),
        }),
    ))
}

fn write_out(path: &Path, text: &str) -> crate::Result<()> {
    fs::write(path, text).map_err(|e| Error::Schema { path: path.display().to_string(), message: e.to_string() })
}

fn witness(a: &WitnessArgs, w: &Q, loader: &Loader) -> crate::Result<Report> {
    let (_, fs) = loader.functions(&a.tuple)?;
    let delta = match &a.delta {
        Some(d) => flag_q("--delta", d)?,
        None => psi0(&fs)?.lower().clone() / qi(2),
    };
    let (wit, c) = build_witness(&fs, &delta)?;
    let p = sigma_parts(&fs, &wit, w)?;
    let holds = p.value.upper() <= &delta;
    if let Some(out) = &a.out {
        write_out(out, &io::to_json(&io::witness_doc(&wit)))?;
    }
    Ok(Report::holds(
        holds,
        json!({
            "status": if holds { "witness" } else { "sigma-above-delta" },
            "m": wit.m,
            "delta": fmt_q(&delta),
            "eps": fmt_q(&wit.eps),
            "eps_prime": fmt_q(&wit.eps_prime),
            "depth": c.depth,
            "assignment": c.assignment,
            "sigma_inner": certified_json(&p.value),
            "witness": serde_json::to_value(io::witness_doc(&wit)).unwrap(),
        }),
    ))
}

fn extract(a: &TupleArgs, w: &Q, loader: &Loader) -> crate::Result<Report> {
    let (graph, fs) = loader.functions(&a.tuple)?;
    let wit = loader.witness(need_witness(a)?)?;
    let ex = extract_chain(&fs, &wit, w)?;
    let doc = io::certificate_doc(&graph, &ex.certificate);
    if let Some(out) = &a.out {
        write_out(out, &io::to_json(&doc))?;
    }
    Ok(Report::ok(json!({
        "status": "chain",
        "links": ex.links.len(),
        "kept": ex.kept,
        "assignment": ex.certificate.assignment,
        "certificate": serde_json::to_value(doc).unwrap(),
    })))
}

fn obstruction_json(graph: &MetricGraph, o: &Obstruction) -> Value {
    match o {
        Obstruction::UncoveredCell(p) => json!({ "kind": "uncovered-cell", "point": point_json(graph, p) }),
        Obstruction::NerveCycle => json!({ "kind": "nerve-cycle" }),
        Obstruction::NoChain => json!({ "kind": "no-chain" }),
    }
}

fn refine(a: &RefineArgs, loader: &Loader) -> crate::Result<Report> {
    let (graph, fs) = loader.functions(&a.cover)?;
    let cover = Cover::new(&graph, fs.into_iter().map(OpenSet::new).collect())?;
    let budget = SearchBudget { nodes: a.nodes, atoms: a.atoms };
    Ok(match find_chain_refinement(&cover, a.depth, &budget)? {
        SearchOutcome::Found(c) => {
            let doc = io::certificate_doc(&graph, &c);
            if let Some(out) = &a.out {
                write_out(out, &io::to_json(&doc))?;
            }
            Report::ok(json!({
                "status": "found",
                "depth": a.depth,
                "links": c.chain.len(),
                "assignment": c.assignment,
                "certificate": serde_json::to_value(doc).unwrap(),
            }))
        }
        SearchOutcome::Exhausted { depth, reason } => Report::fails(json!({
            "status": "exhausted",
            "depth": depth,
            "reason": obstruction_json(&graph, &reason),
        })),
        SearchOutcome::Inconclusive { depth, reason } => Report::fails(json!({
            "status": "inconclusive",
            "depth": depth,
            "reason": reason,
        })),
    })
}

fn nerve(a: &CoverArgs, loader: &Loader) -> crate::Result<Report> {
    let (_, fs) = loader.functions(&a.cover)?;
    let sets: Vec<OpenSet> = fs.into_iter().map(OpenSet::new).collect();
    let (n, violation) = nerve_and_is_chain(&sets)?;
    let edges: Vec<[usize; 2]> = n.edges.iter().map(|&(i, j)| [i + 1, j + 1]).collect();
    Ok(Report::holds(
        violation.is_none(),
        json!({
            "status": if violation.is_none() { "chain" } else { "not-chain" },
            "sets": n.n,
            "edges": edges,
            "violation": violation.map(|v| format!("{v:?}")),
        }),
    ))
}

fn prune(a: &CoverArgs, loader: &Loader) -> crate::Result<Report> {
    let (graph, fs) = loader.functions(&a.cover)?;
    let sets: Vec<OpenSet> = fs.into_iter().map(OpenSet::new).collect();
    let kept = prune_chain(&graph, &sets)?;
    let pruned: Vec<PLFunction> = kept.iter().map(|&i| sets[i].generator().clone()).collect();
    Ok(Report::ok(json!({
        "status": "pruned",
        "kept": kept.iter().map(|i| i + 1).collect::<Vec<_>>(),
        "cover": serde_json::to_value(io::functions_doc(&graph, &pruned)).unwrap(),
    })))
}

fn circle_maps(a: &CircleArgs, loader: &Loader) -> crate::Result<(CircleMap, CircleMap)> {
    let load = |p: &Option<PathBuf>, default: CircleMap, name: &str| -> crate::Result<CircleMap> {
        match p {
            None => Ok(default),
            Some(p) => match loader.map(p)? {
                MapValue::Circle(c) => Ok(c),
                MapValue::Arc(_) => Err(Error::Schema { path: name.into(), message: "expected a circle map".into() }),
            },
        }
    };
    let shift = flag_q("--shift", &a.shift)?;
    Ok((load(&a.f, CircleMap::standard(), "--f")?, load(&a.g, CircleMap::shifted(&shift), "--g")?))
}

fn arc_map(loader: &Loader, p: &Path, w: &Arc<MetricGraph>, name: &str) -> crate::Result<ArcMap> {
    let m = match loader.map(p)? {
        MapValue::Arc(m) => m,
        MapValue::Circle(_) => return Err(Error::Schema { path: name.into(), message: "expected an arc map".into() }),
    };
    if **m.graph() != **w {
        return Err(Error::Schema { path: name.into(), message: "domain differs from W".into() });
    }
    // rebuild on W itself so every map shares one graph
    Ok(ArcMap::new(PLFunction::with_vertex_values(
        w.clone(),
        m.values().vertex_values().to_vec(),
        m.values().pieces().to_vec(),
    )?)?)
}

fn verdict_report(w: &MetricGraph, v: &Verdict, doc: &io::VerdictDoc) -> Report {
    let mut body = json!({ "status": v.outcome(), "verdict": io::verdict_json(w, v) });
    body["evidence"] = serde_json::to_value(doc).unwrap();
    Report::holds(matches!(v, Verdict::DisconnectionCertified { .. }), body)
}

fn hoehn(a: &HoehnArgs, loader: &Loader) -> crate::Result<Report> {
    let w = loader.graph(&a.w)?;
    let r = arc_map(loader, &a.r, &w, "--r")?;
    let s = arc_map(loader, &a.s, &w, "--s")?;
    let (f, g) = circle_maps(&a.maps, loader)?;
    let v = hoehn_check(&w, &r, &s, &f, &g)?;
    let doc = io::verdict_doc(&w, &r, &s, &f, &g, &v);
    if let Some(out) = &a.out {
        write_out(out, &io::to_json(&doc))?;
    }
    Ok(verdict_report(&w, &v, &doc))
}

fn fiber(a: &FiberArgs, loader: &Loader) -> crate::Result<Report> {
    let (f, g) = circle_maps(&a.maps, loader)?;
    let fp = fiber_product_circle(&f, &g)?;
    if let Some(dir) = &a.out {
        fs::create_dir_all(dir).map_err(|e| Error::Schema { path: dir.display().to_string(), message: e.to_string() })?;
        write_out(&dir.join("fiber.json"), &io::to_json(&io::graph_doc(&fp.graph)))?;
        for (name, m) in [("r.json", &fp.r), ("s.json", &fp.s)] {
            let mut doc = io::arc_map_doc(m);
            doc.domain = io::GraphRef::Path("fiber.json".into());
            write_out(&dir.join(name), &io::to_json(&doc))?;
        }
    }
    let coords: Vec<[String; 2]> = fp.coords.iter().map(|(x, y)| [fmt_q(x), fmt_q(y)]).collect();
    let segments: Vec<[[String; 2]; 2]> = fp
        .graph
        .edges()
        .iter()
        .map(|e| [coords[e.u].clone(), coords[e.v].clone()])
        .collect();
    Ok(Report::ok(json!({
        "status": "computed",
        "components": fp.components(),
        "vertices": coords,
        "segments": segments,
        "r_surjective": fp.r.is_surjective(),
        "s_surjective": fp.s.is_surjective(),
    })))
}

fn axiom(cli: &Cli, a: &AxiomArgs, w: &Q, loader: &Loader) -> crate::Result<Report> {
    let graph = loader.graph(&a.graph)?;
    let comps = graph.components();
    let mut candidates = Vec::new();
    if comps.count > 1 {
        let vals = comps.vertex_component.iter().map(|&c| if c == 0 { qi(1) } else { qi(0) }).collect();
        let pieces = graph
            .edges()
            .iter()
            .enumerate()
            .map(|(e, edge)| {
                let v = if comps.edge_component[e] == 0 { qi(1) } else { qi(0) };
                vec![(qi(0), v.clone()), (edge.len.clone(), v)]
            })
            .collect();
        candidates.push(PLFunction::with_vertex_values(graph.clone(), vals, pieces)?);
    }
    let mut rng = random::rng(cli.seed);
    for _ in 0..a.samples {
        candidates.push(random::normalized_pl(&mut rng, &graph, a.breakpoints));
    }
    let mut worst: Option<(usize, crate::CertifiedValue)> = None;
    for (i, f) in candidates.iter().enumerate() {
        let v = projectionless_value(f, w)?;
        if worst.as_ref().map_or(true, |(_, b)| v.upper() > b.upper()) {
            worst = Some((i, v));
        }
    }
    let tol = q(1, 1_000_000_000);
    let (idx, v) = worst.ok_or_else(|| Error::Precondition("no samples".into()))?;
    let holds = v.upper() <= &tol;
    Ok(Report::holds(
        holds,
        json!({
            "status": if holds { "holds" } else { "violated" },
            "connected": comps.count == 1,
            "samples": candidates.len(),
            "max_value": certified_json(&v),
            "max_index": idx,
            "max_function": serde_json::to_value(io::function_doc(&candidates[idx], None)).unwrap(),
        }),
    ))
}

fn verify(a: &VerifyArgs, loader: &Loader) -> crate::Result<Report> {
    let origin = a.file.display().to_string();
    let text = fs::read_to_string(&a.file).map_err(|e| Error::Schema { path: origin.clone(), message: e.to_string() })?;
    let raw: Value = io::parse_json(&origin, &text)?;
    let base = a.file.parent().map(Path::to_path_buf).unwrap_or_default();
    match raw.get("kind").and_then(Value::as_str) {
        Some("certificate") => {
            let doc: io::CertificateDoc = io::parse_json(&origin, &text)?;
            let (graph, cert) = loader.certificate_doc(&base, &origin, &doc)?;
            Ok(match cert.verify(&graph) {
                Ok(()) => Report::ok(json!({ "status": "verified", "kind": "certificate", "links": cert.chain.len() })),
                Err(e) => Report::fails(json!({ "status": "rejected", "kind": "certificate", "reason": e.to_string() })),
            })
        }
        Some("verdict") => {
            let doc: io::VerdictDoc = io::parse_json(&origin, &text)?;
            let inp = loader.verdict_inputs(&base, &origin, &doc)?;
            let fresh = hoehn_check(&inp.w, &inp.r, &inp.s, &inp.f, &inp.g)?;
            let agrees = io::verdict_json(&inp.w, &fresh) == doc.verdict;
            let evidence = check_verdict(&fresh, &inp.w, &inp.r, &inp.s, &inp.f, &inp.g)?;
            let ok = agrees && evidence;
            Ok(Report::holds(
                ok,
                json!({
                    "status": if ok { "verified" } else { "rejected" },
                    "kind": "verdict",
                    "outcome": fresh.outcome(),
                    "agrees": agrees,
                    "evidence_checks": evidence,
                }),
            ))
        }
        other => Err(Error::Schema {
            path: format!("{origin}/kind"),
            message: format!("expected \"certificate\" or \"verdict\", got {other:?}"),
        }),
    }
}
