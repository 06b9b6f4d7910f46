//! JSON documents for graphs, functions, covers, maps, witnesses,
//! certificates and verdicts. The layouts are described in `docs/schemas.md`.
//!
//! Rationals are always strings `"p/q"` (a bare integer `"p"` is accepted on
//! input). Every top-level document carries `"format": 1`. A graph or
//! function may be given inline or as a path relative to the referencing
//! file.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::amalgam::{ArcMap, CircleMap, Verdict};
use crate::certified::CertifiedValue;
use crate::chain::{ChainCertificate, Witness};
use crate::error::{Error, Result};
use crate::graph::{MetricGraph, Point};
use crate::pl::PLFunction;
use crate::rational::{fmt_q, parse_q, Q};
use crate::sets::OpenSet;

pub const FORMAT: u32 = 1;

fn schema(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema { path: path.into(), message: message.into() }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub id: String,
    pub u: String,
    pub v: String,
    pub len: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<u32>,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphRef {
    Path(String),
    Inline(Box<GraphDoc>),
}

/// Per-edge breakpoints `[t, value]` keyed by edge id. `vertices` is only
/// needed for vertices without incident edges.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphRef>,
    pub edges: BTreeMap<String, Vec<[String; 2]>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub vertices: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FunctionRef {
    Path(String),
    Inline(Box<FunctionDoc>),
}

/// A cover (open sets `{f > 0}`) or a plain tuple of functions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionsDoc {
    pub format: u32,
    pub graph: GraphRef,
    pub functions: Vec<FunctionRef>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub format: u32,
    /// `"circle"` or `"arc"`.
    pub kind: String,
    pub domain: GraphRef,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lift: Option<FunctionRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<FunctionRef>,
}

/// Variables `x1, x2, …` assigned to functions on one graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignmentDoc {
    pub format: u32,
    pub graph: GraphRef,
    pub assignment: BTreeMap<String, FunctionRef>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDoc {
    pub format: u32,
    pub kind: String,
    pub graph: GraphRef,
    pub m: usize,
    pub eps: String,
    pub eps_prime: String,
    pub delta: String,
    pub g: Vec<FunctionRef>,
    pub h: Vec<Vec<FunctionRef>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDoc {
    pub format: u32,
    pub kind: String,
    pub graph: GraphRef,
    pub target: Vec<FunctionRef>,
    pub chain: Vec<FunctionRef>,
    pub assignment: Vec<usize>,
}

/// A Hoehn verdict together with everything needed to re-check it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictDoc {
    pub format: u32,
    pub kind: String,
    pub w: GraphRef,
    pub r: FunctionRef,
    pub s: FunctionRef,
    pub f: MapDoc,
    pub g: MapDoc,
    pub verdict: Value,
}

// ---------------------------------------------------------------- output

pub fn q_str(x: &Q) -> String {
    fmt_q(x)
}

pub fn certified_json(v: &CertifiedValue) -> Value {
    json!({ "lower": fmt_q(v.lower()), "upper": fmt_q(v.upper()) })
}

pub fn point_json(graph: &MetricGraph, p: &Point) -> Value {
    match p {
        Point::Vertex(v) => json!({ "vertex": graph.vertices()[*v] }),
        Point::Edge { edge, t } => json!({ "edge": graph.edge(*edge).id, "t": fmt_q(t) }),
    }
}

pub fn graph_doc(g: &MetricGraph) -> GraphDoc {
    GraphDoc {
        format: Some(FORMAT),
        vertices: g.vertices().to_vec(),
        edges: g
            .edges()
            .iter()
            .map(|e| EdgeDoc {
                id: e.id.clone(),
                u: g.vertices()[e.u].clone(),
                v: g.vertices()[e.v].clone(),
                len: fmt_q(&e.len),
            })
            .collect(),
    }
}

fn pieces_doc(graph: &MetricGraph, pieces: &[Vec<(Q, Q)>], vertex: &[Q]) -> (BTreeMap<String, Vec<[String; 2]>>, BTreeMap<String, String>) {
    let edges = graph
        .edges()
        .iter()
        .zip(pieces)
        .map(|(e, pts)| (e.id.clone(), pts.iter().map(|(t, v)| [fmt_q(t), fmt_q(v)]).collect()))
        .collect();
    let vertices = (0..graph.vertex_count())
        .filter(|&v| graph.incidences(v).is_empty())
        .map(|v| (graph.vertices()[v].clone(), fmt_q(&vertex[v])))
        .collect();
    (edges, vertices)
}

/// A function document; `graph` is embedded when given.
pub fn function_doc(f: &PLFunction, graph: Option<GraphRef>) -> FunctionDoc {
    let (edges, vertices) = pieces_doc(f.graph(), f.pieces(), f.vertex_values());
    FunctionDoc { format: Some(FORMAT), graph, edges, vertices }
}

fn inline_fn(f: &PLFunction) -> FunctionRef {
    let mut d = function_doc(f, None);
    d.format = None;
    FunctionRef::Inline(Box::new(d))
}

fn inline_graph(g: &MetricGraph) -> GraphRef {
    GraphRef::Inline(Box::new(graph_doc(g)))
}

pub fn functions_doc(graph: &MetricGraph, fs: &[PLFunction]) -> FunctionsDoc {
    FunctionsDoc { format: FORMAT, graph: inline_graph(graph), functions: fs.iter().map(inline_fn).collect() }
}

pub fn arc_map_doc(m: &ArcMap) -> MapDoc {
    MapDoc {
        format: FORMAT,
        kind: "arc".into(),
        domain: inline_graph(m.graph()),
        lift: None,
        values: Some(inline_fn(m.values())),
    }
}

pub fn circle_map_doc(m: &CircleMap) -> MapDoc {
    let vertex: Vec<Q> = (0..m.graph().vertex_count())
        .map(|v| m.lift_at(&Point::Vertex(v)).expect("vertex exists"))
        .collect();
    let (edges, vertices) = pieces_doc(m.graph(), m.pieces(), &vertex);
    MapDoc {
        format: FORMAT,
        kind: "circle".into(),
        domain: inline_graph(m.graph()),
        lift: Some(FunctionRef::Inline(Box::new(FunctionDoc { format: None, graph: None, edges, vertices }))),
        values: None,
    }
}

pub fn witness_doc(w: &Witness) -> WitnessDoc {
    WitnessDoc {
        format: FORMAT,
        kind: "witness".into(),
        graph: inline_graph(w.g[0].graph()),
        m: w.m,
        eps: fmt_q(&w.eps),
        eps_prime: fmt_q(&w.eps_prime),
        delta: fmt_q(&w.delta),
        g: w.g.iter().map(inline_fn).collect(),
        h: w.h.iter().map(|row| row.iter().map(inline_fn).collect()).collect(),
    }
}

pub fn certificate_doc(graph: &MetricGraph, c: &ChainCertificate) -> CertificateDoc {
    let gens = |sets: &[OpenSet]| sets.iter().map(|s| inline_fn(s.generator())).collect();
    CertificateDoc {
        format: FORMAT,
        kind: "certificate".into(),
        graph: inline_graph(graph),
        target: gens(&c.target),
        chain: gens(&c.chain),
        assignment: c.assignment.clone(),
    }
}

pub fn verdict_json(w: &MetricGraph, v: &Verdict) -> Value {
    let mut out = match v {
        Verdict::DisconnectionCertified { shift, components, a_point, b_point, a_components, b_components } => json!({
            "shift": fmt_q(shift),
            "components": components,
            "a_point": point_json(w, a_point),
            "b_point": point_json(w, b_point),
            "a_components": a_components,
            "b_components": b_components,
        }),
        Verdict::CompositionMismatch(m) => json!({
            "point": point_json(w, &m.point),
            "left": fmt_q(&m.left),
            "right": fmt_q(&m.right),
        }),
        Verdict::NotSurjective { side, min, max } => json!({
            "side": side.name(),
            "min": fmt_q(min),
            "max": fmt_q(max),
        }),
        Verdict::DichotomyViolation { failure, point } => json!({
            "failure": format!("{failure:?}"),
            "point": point_json(w, point),
        }),
    };
    out["outcome"] = json!(v.outcome());
    out
}

pub fn verdict_doc(w: &MetricGraph, r: &ArcMap, s: &ArcMap, f: &CircleMap, g: &CircleMap, v: &Verdict) -> VerdictDoc {
    VerdictDoc {
        format: FORMAT,
        kind: "verdict".into(),
        w: inline_graph(w),
        r: inline_fn(r.values()),
        s: inline_fn(s.values()),
        f: circle_map_doc(f),
        g: circle_map_doc(g),
        verdict: verdict_json(w, v),
    }
}

/// Pretty JSON with a trailing newline; key order is fixed, so equal inputs
/// give equal bytes.
pub fn to_json<T: Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("serializable");
    s.push('\n');
    s
}

// ----------------------------------------------------------------- input

/// Reads documents, resolving relative references against the directory of
/// the file that contains them.
#[derive(Clone, Debug, Default)]
pub struct Loader;

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| schema(path.display().to_string(), e.to_string()))?;
    parse_json(&path.display().to_string(), &text)
}

/// Parse `text`; errors carry `origin` and the line and column.
pub fn parse_json<T: for<'de> Deserialize<'de>>(origin: &str, text: &str) -> Result<T> {
    serde_json::from_str(text)
        .map_err(|e| schema(format!("{origin}:{}:{}", e.line(), e.column()), e.to_string()))
}

fn check_format(origin: &str, f: Option<u32>) -> Result<()> {
    match f {
        Some(FORMAT) => Ok(()),
        Some(v) => Err(schema(origin, format!("unsupported format {v}, expected {FORMAT}"))),
        None => Err(schema(origin, "missing \"format\" field")),
    }
}

fn rational(at: &str, s: &str) -> Result<Q> {
    parse_q(s).map_err(|_| schema(at, format!("expected a rational \"p/q\", got {s:?}")))
}

fn base_of(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

impl Loader {
    pub fn new() -> Self {
        Self
    }

    pub fn graph(&self, path: &Path) -> Result<Arc<MetricGraph>> {
        let doc: GraphDoc = read_json(path)?;
        let origin = path.display().to_string();
        check_format(&origin, doc.format)?;
        build_graph(&origin, &doc)
    }

    fn graph_ref(&self, base: &Path, at: &str, r: &GraphRef) -> Result<Arc<MetricGraph>> {
        match r {
            GraphRef::Path(p) => self.graph(&base.join(p)),
            GraphRef::Inline(doc) => build_graph(at, doc),
        }
    }

    /// A stand-alone function file.
    pub fn function(&self, path: &Path) -> Result<PLFunction> {
        let doc: FunctionDoc = read_json(path)?;
        let origin = path.display().to_string();
        check_format(&origin, doc.format)?;
        let Some(g) = &doc.graph else {
            return Err(schema(origin, "function file needs a \"graph\""));
        };
        let graph = self.graph_ref(&base_of(path), &format!("{origin}/graph"), g)?;
        build_function(&origin, &graph, &doc)
    }

    fn function_ref(&self, base: &Path, at: &str, graph: &Arc<MetricGraph>, r: &FunctionRef) -> Result<PLFunction> {
        let f = match r {
            FunctionRef::Path(p) => self.function(&base.join(p))?,
            FunctionRef::Inline(doc) => {
                let g = match &doc.graph {
                    Some(gr) => self.graph_ref(base, &format!("{at}/graph"), gr)?,
                    None => graph.clone(),
                };
                build_function(at, &g, doc)?
            }
        };
        if **f.graph() != **graph {
            return Err(schema(at, "function lives on a different graph"));
        }
        Ok(f)
    }

    /// A cover or tuple file: the graph and its functions.
    pub fn functions(&self, path: &Path) -> Result<(Arc<MetricGraph>, Vec<PLFunction>)> {
        let doc: FunctionsDoc = read_json(path)?;
        let origin = path.display().to_string();
        check_format(&origin, Some(doc.format))?;
        let base = base_of(path);
        let graph = self.graph_ref(&base, &format!("{origin}/graph"), &doc.graph)?;
        let fs = doc
            .functions
            .iter()
            .enumerate()
            .map(|(i, r)| self.function_ref(&base, &format!("{origin}/functions/{i}"), &graph, r))
            .collect::<Result<Vec<_>>>()?;
        Ok((graph, fs))
    }

    pub fn assignment(&self, path: &Path) -> Result<(Arc<MetricGraph>, BTreeMap<usize, PLFunction>)> {
        let doc: AssignmentDoc = read_json(path)?;
        let origin = path.display().to_string();
        check_format(&origin, Some(doc.format))?;
        let base = base_of(path);
        let graph = self.graph_ref(&base, &format!("{origin}/graph"), &doc.graph)?;
        let mut out = BTreeMap::new();
        for (name, r) in &doc.assignment {
            let at = format!("{origin}/assignment/{name}");
            let idx = name
                .strip_prefix('x')
                .and_then(|n| n.parse::<usize>().ok())
                .ok_or_else(|| schema(&at, format!("variable names look like x1, x2, …; got {name:?}")))?;
            out.insert(idx, self.function_ref(&base, &at, &graph, r)?);
        }
        Ok((graph, out))
    }

    pub fn map(&self, path: &Path) -> Result<MapValue> {
        let doc: MapDoc = read_json(path)?;
        let origin = path.display().to_string();
        self.map_doc(&base_of(path), &origin, &doc)
    }

    fn map_doc(&self, base: &Path, origin: &str, doc: &MapDoc) -> Result<MapValue> {
        check_format(origin, Some(doc.format))?;
        let graph = self.graph_ref(base, &format!("{origin}/domain"), &doc.domain)?;
        match (doc.kind.as_str(), &doc.lift, &doc.values) {
            ("circle", Some(l), None) => {
                let at = format!("{origin}/lift");
                let fdoc = match l {
                    FunctionRef::Path(p) => {
                        let p = base.join(p);
                        let d: FunctionDoc = read_json(&p)?;
                        check_format(&p.display().to_string(), d.format)?;
                        d
                    }
                    FunctionRef::Inline(d) => (**d).clone(),
                };
                let (pieces, vertex) = parse_pieces(&at, &graph, &fdoc)?;
                let m = CircleMap::from_pieces(graph, pieces, vertex).map_err(|e| schema(&at, e.to_string()))?;
                Ok(MapValue::Circle(m))
            }
            ("arc", None, Some(v)) => {
                let at = format!("{origin}/values");
                let f = self.function_ref(base, &at, &graph, v)?;
                Ok(MapValue::Arc(ArcMap::new(f).map_err(|e| schema(&at, e.to_string()))?))
            }
            ("circle", _, _) => Err(schema(origin, "a circle map needs \"lift\" and no \"values\"")),
            ("arc", _, _) => Err(schema(origin, "an arc map needs \"values\" and no \"lift\"")),
            (k, _, _) => Err(schema(format!("{origin}/kind"), format!("expected \"circle\" or \"arc\", got {k:?}"))),
        }
    }

    pub fn witness(&self, path: &Path) -> Result<Witness> {
        let doc: WitnessDoc = read_json(path)?;
        let origin = path.display().to_string();
        check_format(&origin, Some(doc.format))?;
        let base = base_of(path);
        let graph = self.graph_ref(&base, &format!("{origin}/graph"), &doc.graph)?;
        let g = doc
            .g
            .iter()
            .enumerate()
            .map(|(j, r)| self.function_ref(&base, &format!("{origin}/g/{j}"), &graph, r))
            .collect::<Result<Vec<_>>>()?;
        let h = doc
            .h
            .iter()
            .enumerate()
            .map(|(j, row)| {
                row.iter()
                    .enumerate()
                    .map(|(i, r)| self.function_ref(&base, &format!("{origin}/h/{j}/{i}"), &graph, r))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Witness {
            m: doc.m,
            g,
            h,
            eps: rational(&format!("{origin}/eps"), &doc.eps)?,
            eps_prime: rational(&format!("{origin}/eps_prime"), &doc.eps_prime)?,
            delta: rational(&format!("{origin}/delta"), &doc.delta)?,
        })
    }

    pub fn certificate_doc(&self, base: &Path, origin: &str, doc: &CertificateDoc) -> Result<(Arc<MetricGraph>, ChainCertificate)> {
        check_format(origin, Some(doc.format))?;
        let graph = self.graph_ref(base, &format!("{origin}/graph"), &doc.graph)?;
        let sets = |name: &str, v: &[FunctionRef]| -> Result<Vec<OpenSet>> {
            v.iter()
                .enumerate()
                .map(|(i, r)| Ok(OpenSet::new(self.function_ref(base, &format!("{origin}/{name}/{i}"), &graph, r)?)))
                .collect()
        };
        let cert = ChainCertificate {
            target: sets("target", &doc.target)?,
            chain: sets("chain", &doc.chain)?,
            assignment: doc.assignment.clone(),
        };
        Ok((graph, cert))
    }

    /// The inputs of a verdict document: `(W, r, s, f, g)`.
    pub fn verdict_inputs(&self, base: &Path, origin: &str, doc: &VerdictDoc) -> Result<VerdictInputs> {
        check_format(origin, Some(doc.format))?;
        let w = self.graph_ref(base, &format!("{origin}/w"), &doc.w)?;
        let arc = |name: &str, r: &FunctionRef| -> Result<ArcMap> {
            let at = format!("{origin}/{name}");
            ArcMap::new(self.function_ref(base, &at, &w, r)?).map_err(|e| schema(at, e.to_string()))
        };
        let circle = |name: &str, d: &MapDoc| -> Result<CircleMap> {
            match self.map_doc(base, &format!("{origin}/{name}"), d)? {
                MapValue::Circle(c) => Ok(c),
                MapValue::Arc(_) => Err(schema(format!("{origin}/{name}"), "expected a circle map")),
            }
        };
        Ok(VerdictInputs { r: arc("r", &doc.r)?, s: arc("s", &doc.s)?, f: circle("f", &doc.f)?, g: circle("g", &doc.g)?, w })
    }
}

pub struct VerdictInputs {
    pub w: Arc<MetricGraph>,
    pub r: ArcMap,
    pub s: ArcMap,
    pub f: CircleMap,
    pub g: CircleMap,
}

#[derive(Clone, Debug)]
pub enum MapValue {
    Circle(CircleMap),
    Arc(ArcMap),
}

pub fn build_graph(origin: &str, doc: &GraphDoc) -> Result<Arc<MetricGraph>> {
    let edges = doc
        .edges
        .iter()
        .enumerate()
        .map(|(i, e)| Ok((e.id.clone(), e.u.clone(), e.v.clone(), rational(&format!("{origin}/edges/{i}/len"), &e.len)?)))
        .collect::<Result<Vec<_>>>()?;
    MetricGraph::new(doc.vertices.clone(), edges)
        .map(Arc::new)
        .map_err(|e| schema(origin, e.to_string()))
}

type Pieces = (Vec<Vec<(Q, Q)>>, Vec<Option<Q>>);

fn parse_pieces(origin: &str, graph: &MetricGraph, doc: &FunctionDoc) -> Result<Pieces> {
    for id in doc.edges.keys() {
        if graph.edge_index(id).is_none() {
            return Err(schema(format!("{origin}/edges/{id}"), "no such edge in the graph"));
        }
    }
    let mut pieces = Vec::with_capacity(graph.edge_count());
    for e in graph.edges() {
        let at = format!("{origin}/edges/{}", e.id);
        let pts = doc.edges.get(&e.id).ok_or_else(|| schema(&at, "missing breakpoints for edge"))?;
        let pts = pts
            .iter()
            .enumerate()
            .map(|(k, [t, v])| Ok((rational(&format!("{at}/{k}/0"), t)?, rational(&format!("{at}/{k}/1"), v)?)))
            .collect::<Result<Vec<_>>>()?;
        pieces.push(pts);
    }
    let mut vertex = vec![None; graph.vertex_count()];
    for (name, v) in &doc.vertices {
        let at = format!("{origin}/vertices/{name}");
        let i = graph.vertex_index(name).ok_or_else(|| schema(&at, "no such vertex in the graph"))?;
        vertex[i] = Some(rational(&at, v)?);
    }
    Ok((pieces, vertex))
}

pub fn build_function(origin: &str, graph: &Arc<MetricGraph>, doc: &FunctionDoc) -> Result<PLFunction> {
    let (pieces, explicit) = parse_pieces(origin, graph, doc)?;
    let mut vertex = explicit;
    for (e, pts) in graph.edges().iter().zip(&pieces) {
        if let (Some(a), Some(b)) = (pts.first(), pts.last()) {
            vertex[e.u].get_or_insert_with(|| a.1.clone());
            vertex[e.v].get_or_insert_with(|| b.1.clone());
        }
    }
    let vertex = vertex
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| schema(format!("{origin}/vertices"), format!("no value for vertex {}", graph.vertices()[i]))))
        .collect::<Result<Vec<_>>>()?;
    PLFunction::with_vertex_values(graph.clone(), vertex, pieces).map_err(|e| schema(origin, e.to_string()))
}
