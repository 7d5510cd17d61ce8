//! JSON documents, schema `smith/1`.
//!
//! Every document carries `"schema": "smith/1"` and a `"kind"`. Maps list
//! vertices with optional a priori coordinates, the marked pair, edges, and
//! for each vertex id the counterclockwise list of half-edge ids leaving it;
//! half-edge `2 * edge_id` leaves the tail and `2 * edge_id + 1` the head.
//! Floats are written in the shortest form that parses back to the same value.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::f64::consts::TAU;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::electrical::{Conjugate, Voltage};
use crate::error::{Error, Result, SchemaErrors};
use crate::map::{CombMap, CylinderEmbedding, MapParts};
use crate::mated_crt::{excursion_from_increments, Excursion};
use crate::tiling::{HSeg, Rect, SmithDiagram, VSeg};
use crate::verify::{Law, VerifyReport};

pub const SCHEMA: &str = "smith/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    pub id: u64,
    #[serde(default)]
    pub theta: Option<f64>,
    #[serde(default)]
    pub height: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkedDoc {
    pub v0: u64,
    pub v1: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub id: u64,
    pub tail: u64,
    pub head: u64,
    pub conductance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dtheta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub schema: String,
    #[serde(default = "kind_map")]
    pub kind: String,
    pub vertices: Vec<VertexDoc>,
    pub marked: MarkedDoc,
    pub edges: Vec<EdgeDoc>,
    pub rotation: BTreeMap<u64, Vec<u64>>,
}

fn kind_map() -> String {
    "map".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionDoc {
    pub schema: String,
    pub kind: String,
    pub map: MapDoc,
    /// Voltage by vertex id.
    pub h: BTreeMap<u64, f64>,
    pub eta: f64,
    pub residual: f64,
    /// Conjugate in `[0, eta)` by dual vertex (face index).
    pub w: BTreeMap<u64, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RectDoc {
    pub edge: u64,
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HSegDoc {
    pub vertex: u64,
    pub x0: f64,
    pub len: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VSegDoc {
    pub face: u64,
    pub x: f64,
    pub y0: f64,
    pub y1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramDoc {
    pub schema: String,
    pub kind: String,
    pub eta: f64,
    pub rects: Vec<RectDoc>,
    pub hsegs: Vec<HSegDoc>,
    pub vsegs: Vec<VSegDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyDoc {
    pub schema: String,
    pub kind: String,
    pub pass: bool,
    pub laws: Vec<Law>,
}

/// Increments for a mated-CRT excursion, one entry per step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IncrementsDoc {
    pub schema: String,
    #[serde(default = "kind_increments")]
    pub kind: String,
    pub dl: Vec<f64>,
    pub dr: Vec<f64>,
}

fn kind_increments() -> String {
    "increments".into()
}

/// Deserializes `text`, reporting the JSON path and byte offset of the
/// first problem.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let at = byte_offset(text, inner.line(), inner.column());
        schema_error(format!("{path}: {inner} (byte {at})"))
    })?;
    de.end().map_err(|e| {
        let at = byte_offset(text, e.line(), e.column());
        schema_error(format!("trailing input: {e} (byte {at})"))
    })?;
    Ok(value)
}

fn schema_error(msg: String) -> Error {
    Error::Schema(SchemaErrors(vec![msg]))
}

// serde_json reports 1-based lines and columns counted in bytes.
fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let start: usize = text
        .split_inclusive('\n')
        .take(line.saturating_sub(1))
        .map(str::len)
        .sum();
    (start + column.saturating_sub(1)).min(text.len())
}

/// Kind of a document, from its `kind` field or, for maps written by hand,
/// its shape.
pub fn document_kind(text: &str) -> Result<String> {
    let v: serde_json::Value = parse(text)?;
    let Some(obj) = v.as_object() else {
        return Err(schema_error("document is not a JSON object".into()));
    };
    Ok(match obj.get("kind").and_then(|k| k.as_str()) {
        Some(k) => k.to_string(),
        None if obj.contains_key("map") => "solution".into(),
        None => "map".into(),
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

fn check_header(errors: &mut Vec<String>, schema: &str, kind: &str, want: &str) {
    if schema != SCHEMA {
        errors.push(format!("schema: expected \"{SCHEMA}\", got \"{schema}\""));
    }
    if kind != want {
        errors.push(format!("kind: expected \"{want}\", got \"{kind}\""));
    }
}

pub fn map_doc(map: &CombMap, emb: Option<&CylinderEmbedding>) -> MapDoc {
    let vertices = (0..map.num_vertices())
        .map(|v| {
            let c = emb.and_then(|e| e.coords[v]);
            VertexDoc {
                id: map.vertex_id(v),
                theta: c.map(|c| c.0),
                height: c.map(|c| c.1),
            }
        })
        .collect();
    let edges = (0..map.num_edges())
        .map(|e| EdgeDoc {
            id: map.edge_id(e),
            tail: map.vertex_id(map.tail(e)),
            head: map.vertex_id(map.head(e)),
            conductance: map.conductance(e),
            dtheta: emb.map(|m| m.dtheta[e]),
        })
        .collect();
    let half_id = |h: usize| 2 * map.edge_id(h / 2) + (h & 1) as u64;
    let rotation = (0..map.num_vertices())
        .map(|v| {
            (
                map.vertex_id(v),
                map.rotation(v).iter().map(|&h| half_id(h)).collect(),
            )
        })
        .collect();
    MapDoc {
        schema: SCHEMA.into(),
        kind: kind_map(),
        vertices,
        marked: MarkedDoc {
            v0: map.vertex_id(map.v0()),
            v1: map.vertex_id(map.v1()),
        },
        edges,
        rotation,
    }
}

pub fn write_map(map: &CombMap, emb: Option<&CylinderEmbedding>) -> String {
    to_json(&map_doc(map, emb))
}

pub fn read_map(text: &str) -> Result<(CombMap, Option<CylinderEmbedding>)> {
    map_from_doc(&parse::<MapDoc>(text)?)
}

/// Checks a parsed map document and builds the map. All schema problems are
/// collected before giving up; structural ones (planarity, connectivity)
/// come from the map constructor afterwards.
pub fn map_from_doc(doc: &MapDoc) -> Result<(CombMap, Option<CylinderEmbedding>)> {
    let mut err = Vec::new();
    check_header(&mut err, &doc.schema, &doc.kind, "map");

    let mut vindex = HashMap::new();
    for (i, v) in doc.vertices.iter().enumerate() {
        if vindex.insert(v.id, i).is_some() {
            err.push(format!("vertices[{i}].id: duplicate vertex id {}", v.id));
        }
    }
    let mut eindex = HashMap::new();
    for (i, e) in doc.edges.iter().enumerate() {
        if eindex.insert(e.id, i).is_some() {
            err.push(format!("edges[{i}].id: duplicate edge id {}", e.id));
        }
        for (field, id) in [("tail", e.tail), ("head", e.head)] {
            if !vindex.contains_key(&id) {
                err.push(format!("edges[{i}].{field}: unknown vertex {id}"));
            }
        }
        if !(e.conductance > 0.0 && e.conductance.is_finite()) {
            err.push(format!(
                "edges[{i}].conductance: {} is not positive and finite",
                e.conductance
            ));
        }
    }
    for (field, id) in [("v0", doc.marked.v0), ("v1", doc.marked.v1)] {
        if !vindex.contains_key(&id) {
            err.push(format!("marked.{field}: unknown vertex {id}"));
        }
    }
    if doc.marked.v0 == doc.marked.v1 {
        err.push(format!("marked: v0 and v1 are both {}", doc.marked.v0));
    }

    let mut seen = HashSet::new();
    let mut rotation = vec![Vec::new(); doc.vertices.len()];
    for (&vid, halves) in &doc.rotation {
        let Some(&v) = vindex.get(&vid) else {
            err.push(format!("rotation.{vid}: unknown vertex"));
            continue;
        };
        for (j, &hid) in halves.iter().enumerate() {
            let Some(&e) = eindex.get(&(hid / 2)) else {
                err.push(format!(
                    "rotation.{vid}[{j}]: half-edge {hid} of unknown edge {}",
                    hid / 2
                ));
                continue;
            };
            let ed = &doc.edges[e];
            let origin = if hid & 1 == 0 { ed.tail } else { ed.head };
            if origin != vid {
                err.push(format!(
                    "rotation.{vid}[{j}]: half-edge {hid} leaves vertex {origin}"
                ));
            }
            if !seen.insert(hid) {
                err.push(format!("rotation.{vid}[{j}]: half-edge {hid} listed twice"));
            }
            rotation[v].push(2 * e + (hid & 1) as usize);
        }
    }
    let ids: BTreeSet<u64> = doc.vertices.iter().map(|v| v.id).collect();
    for id in ids.into_iter().filter(|id| !doc.rotation.contains_key(id)) {
        err.push(format!("rotation: no entry for vertex {id}"));
    }
    for (i, e) in doc.edges.iter().enumerate() {
        for side in 0..2 {
            let hid = 2 * e.id + side;
            if !seen.contains(&hid) && vindex.contains_key(&e.tail) && vindex.contains_key(&e.head)
            {
                err.push(format!(
                    "rotation: half-edge {hid} of edges[{i}] is missing"
                ));
            }
        }
    }

    let marked = |id: u64| id == doc.marked.v0 || id == doc.marked.v1;
    let placed = doc
        .vertices
        .iter()
        .filter(|v| !marked(v.id) && (v.theta.is_some() || v.height.is_some()))
        .count();
    let unmarked = doc.vertices.iter().filter(|v| !marked(v.id)).count();
    let with_dtheta = doc.edges.iter().filter(|e| e.dtheta.is_some()).count();
    let embedded = placed > 0 || with_dtheta > 0;
    if embedded {
        for (i, v) in doc.vertices.iter().enumerate() {
            if marked(v.id) {
                if v.theta.is_some() || v.height.is_some() {
                    err.push(format!(
                        "vertices[{i}]: marked vertex {} must have null theta and height",
                        v.id
                    ));
                }
                continue;
            }
            match (v.theta, v.height) {
                (Some(t), Some(_)) if !(0.0..TAU).contains(&t) => {
                    err.push(format!("vertices[{i}].theta: {t} is not in [0, 2pi)"));
                }
                (Some(_), Some(_)) => {}
                _ => err.push(format!(
                    "vertices[{i}]: vertex {} needs both theta and height ({placed} of {unmarked} vertices are placed)",
                    v.id
                )),
            }
        }
        for (i, e) in doc.edges.iter().enumerate() {
            if e.dtheta.is_none() {
                err.push(format!(
                    "edges[{i}].dtheta: missing while vertices are placed"
                ));
            }
        }
    }
    if !err.is_empty() {
        return Err(Error::Schema(SchemaErrors(err)));
    }

    let parts = MapParts {
        vertex_ids: doc.vertices.iter().map(|v| v.id).collect(),
        edge_ids: doc.edges.iter().map(|e| e.id).collect(),
        ends: doc
            .edges
            .iter()
            .map(|e| [vindex[&e.tail], vindex[&e.head]])
            .collect(),
        conductance: doc.edges.iter().map(|e| e.conductance).collect(),
        rotation,
    };
    let map = CombMap::build(parts, vindex[&doc.marked.v0], vindex[&doc.marked.v1])?;
    let emb = embedded.then(|| CylinderEmbedding {
        coords: doc.vertices.iter().map(|v| v.theta.zip(v.height)).collect(),
        dtheta: doc.edges.iter().map(|e| e.dtheta.unwrap_or(0.0)).collect(),
    });
    if let Some(e) = &emb {
        e.validate(&map)?;
    }
    Ok((map, emb))
}

pub fn solution_doc(
    map: &CombMap,
    emb: Option<&CylinderEmbedding>,
    v: &Voltage,
    conj: &Conjugate,
) -> SolutionDoc {
    SolutionDoc {
        schema: SCHEMA.into(),
        kind: "solution".into(),
        map: map_doc(map, emb),
        h: (0..map.num_vertices())
            .map(|x| (map.vertex_id(x), v.h[x]))
            .collect(),
        eta: v.eta,
        residual: v.residual,
        w: (0..conj.w.len())
            .map(|f| (f as u64, conj.value(f)))
            .collect(),
    }
}

/// The map inside a map or solution document.
pub fn read_map_or_solution(text: &str) -> Result<(CombMap, Option<CylinderEmbedding>)> {
    match document_kind(text)?.as_str() {
        "solution" => {
            let doc: SolutionDoc = parse(text)?;
            let mut err = Vec::new();
            check_header(&mut err, &doc.schema, &doc.kind, "solution");
            if !err.is_empty() {
                return Err(Error::Schema(SchemaErrors(err)));
            }
            map_from_doc(&doc.map)
        }
        _ => read_map(text),
    }
}

pub fn diagram_doc(map: &CombMap, d: &SmithDiagram) -> DiagramDoc {
    DiagramDoc {
        schema: SCHEMA.into(),
        kind: "diagram".into(),
        eta: d.eta,
        rects: d
            .rects
            .iter()
            .map(|r| RectDoc {
                edge: map.edge_id(r.edge),
                x0: r.x0,
                x1: r.x1,
                y0: r.y0,
                y1: r.y1,
                degenerate: r.degenerate,
            })
            .collect(),
        hsegs: d
            .hsegs
            .iter()
            .map(|s| HSegDoc {
                vertex: map.vertex_id(s.vertex),
                x0: s.x0,
                len: s.len,
                y: s.y,
            })
            .collect(),
        vsegs: d
            .vsegs
            .iter()
            .map(|s| VSegDoc {
                face: s.face as u64,
                x: s.x,
                y0: s.y0,
                y1: s.y1,
            })
            .collect(),
    }
}

pub fn write_diagram(map: &CombMap, d: &SmithDiagram) -> String {
    to_json(&diagram_doc(map, d))
}

/// A diagram for drawing. Edge and vertex ids stand in for indices and the
/// per-half-edge offsets are not stored.
pub fn read_diagram(text: &str) -> Result<SmithDiagram> {
    let doc: DiagramDoc = parse(text)?;
    let mut err = Vec::new();
    check_header(&mut err, &doc.schema, &doc.kind, "diagram");
    if !(doc.eta > 0.0 && doc.eta.is_finite()) {
        err.push(format!("eta: {} is not positive and finite", doc.eta));
    }
    for (i, r) in doc.rects.iter().enumerate() {
        if !(r.x0 <= r.x1 && r.y0 <= r.y1) {
            err.push(format!("rects[{i}]: corners out of order"));
        }
    }
    if !err.is_empty() {
        return Err(Error::Schema(SchemaErrors(err)));
    }
    Ok(SmithDiagram {
        eta: doc.eta,
        rects: doc
            .rects
            .iter()
            .map(|r| Rect {
                edge: r.edge as usize,
                x0: r.x0,
                x1: r.x1,
                y0: r.y0,
                y1: r.y1,
                degenerate: r.degenerate,
            })
            .collect(),
        hsegs: doc
            .hsegs
            .iter()
            .map(|s| HSeg {
                vertex: s.vertex as usize,
                x0: s.x0,
                len: s.len,
                y: s.y,
            })
            .collect(),
        vsegs: doc
            .vsegs
            .iter()
            .map(|s| VSeg {
                face: s.face as usize,
                x: s.x,
                y0: s.y0,
                y1: s.y1,
            })
            .collect(),
        offset: Vec::new(),
    })
}

pub fn write_report(rep: &VerifyReport) -> String {
    to_json(&VerifyDoc {
        schema: SCHEMA.into(),
        kind: "verify-report".into(),
        pass: rep.pass,
        laws: rep.laws.clone(),
    })
}

pub fn read_report(text: &str) -> Result<VerifyReport> {
    let doc: VerifyDoc = parse(text)?;
    let mut err = Vec::new();
    check_header(&mut err, &doc.schema, &doc.kind, "verify-report");
    if !err.is_empty() {
        return Err(Error::Schema(SchemaErrors(err)));
    }
    Ok(VerifyReport {
        pass: doc.pass,
        laws: doc.laws,
    })
}

pub fn write_increments(exc: &Excursion) -> String {
    to_json(&IncrementsDoc {
        schema: SCHEMA.into(),
        kind: kind_increments(),
        dl: exc.dl.clone(),
        dr: exc.dr.clone(),
    })
}

pub fn read_increments(text: &str) -> Result<Excursion> {
    let doc: IncrementsDoc = parse(text)?;
    let mut err = Vec::new();
    check_header(&mut err, &doc.schema, &doc.kind, "increments");
    if !err.is_empty() {
        return Err(Error::Schema(SchemaErrors(err)));
    }
    excursion_from_increments(doc.dl, doc.dr)
}
