//! File formats. All indices in files are 1-based: vertices `a_i`, `b_j`,
//! family members, and inner network vertices. Path indices in regimentation
//! certificates are 0-based positions in the `paths` array.
//!
//! Instance:
//! ```json
//! {
//!   "left": 2,
//!   "right": 2,
//!   "sets": [
//!     [[1, 1], [2, 2]],
//!     [[1, 2]]
//!   ]
//! }
//! ```
//! Network: `{"inner": 2, "sets": [[["s", 1], [1, "t"]], [[2, 1]]]}`.
//! Regimentation: `{"paths": [["s", 1, "t"]], "assignment": {"1": 0}}`.
//! Matching certificate: `{"schema": "rainbow/1", "size": 2, "assignment":
//! [{"set": 1, "edge": [2, 2]}, ...], "trail": [...]}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::graph::{BipartiteGraph, Edge, EdgeFamily, EdgeSet, RainbowMatching};
use crate::network::{Arc, ArcSet, Network, NetworkFamily, StPath, Vertex};
use crate::regimentation::{backward_arcs, Regimentation};
use crate::solver::TrailStep;

pub const SCHEMA: &str = "rainbow/1";

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("{0}")]
    Invalid(String),
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Json(e.to_string())
    }
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError::Invalid(msg.into()))
}

/// A family together with its ambient graph `K_{left,right}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub left: usize,
    pub right: usize,
    pub family: EdgeFamily,
}

impl Instance {
    pub fn graph(&self) -> BipartiteGraph {
        BipartiteGraph::complete(self.left, self.right).expect("sides checked on construction")
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    left: usize,
    right: usize,
    sets: Vec<Vec<[usize; 2]>>,
}

pub fn parse_instance(text: &str) -> Result<Instance, FormatError> {
    let raw: InstanceFile = serde_json::from_str(text)?;
    if raw.left == 0 || raw.right == 0 {
        return invalid("left and right must be positive");
    }
    if raw.sets.is_empty() {
        return invalid("family has no sets");
    }
    let mut sets = Vec::with_capacity(raw.sets.len());
    for (i, set) in raw.sets.iter().enumerate() {
        let mut edges = EdgeSet::new();
        for &[a, b] in set {
            if a == 0 || b == 0 || a > raw.left || b > raw.right {
                return invalid(format!("set {}: edge [{a}, {b}] is outside K_{{{},{}}}", i + 1, raw.left, raw.right));
            }
            if !edges.insert(Edge::new(a, b)) {
                return invalid(format!("set {}: edge [{a}, {b}] appears twice", i + 1));
            }
        }
        sets.push(edges);
    }
    Ok(Instance {
        left: raw.left,
        right: raw.right,
        family: EdgeFamily::new(sets),
    })
}

/// Canonical form: 2-space indent, one set per line, edges sorted, LF endings.
pub fn write_instance(inst: &Instance) -> String {
    let mut out = format!("{{\n  \"left\": {},\n  \"right\": {},\n  \"sets\": [\n", inst.left, inst.right);
    let n = inst.family.len();
    for (i, set) in inst.family.sets().iter().enumerate() {
        let edges: Vec<String> = set.iter().map(|e| format!("[{}, {}]", e.a, e.b)).collect();
        let sep = if i + 1 < n { "," } else { "" };
        let _ = writeln!(out, "    [{}]{sep}", edges.join(", "));
    }
    out.push_str("  ]\n}\n");
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignmentEntry {
    pub set: usize,
    pub edge: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TrailEntry {
    Augment {
        path: Vec<[usize; 2]>,
        size: usize,
    },
    Swap {
        released: usize,
        taken_by: usize,
        edge: [usize; 2],
    },
    DirectAdd {
        set: usize,
        edge: [usize; 2],
        size: usize,
    },
    Rectify {
        path: Vec<[usize; 2]>,
        cycle: Vec<[usize; 2]>,
        size: usize,
    },
    Oracle {
        from_size: usize,
        size: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatchingCertificate {
    pub schema: String,
    pub size: usize,
    pub assignment: Vec<AssignmentEntry>,
    #[serde(default)]
    pub trail: Vec<TrailEntry>,
}

fn pair(e: &Edge) -> [usize; 2] {
    [e.a, e.b]
}

fn pairs(edges: &[Edge]) -> Vec<[usize; 2]> {
    edges.iter().map(pair).collect()
}

fn trail_entry(step: &TrailStep) -> TrailEntry {
    match step {
        TrailStep::Augment { path, size } => TrailEntry::Augment {
            path: pairs(path),
            size: *size,
        },
        TrailStep::Swap {
            released,
            taken_by,
            edge,
        } => TrailEntry::Swap {
            released: released + 1,
            taken_by: taken_by + 1,
            edge: pair(edge),
        },
        TrailStep::DirectAdd { member, edge, size } => TrailEntry::DirectAdd {
            set: member + 1,
            edge: pair(edge),
            size: *size,
        },
        TrailStep::Rectify { path, cycle, size } => TrailEntry::Rectify {
            path: pairs(path),
            cycle: pairs(cycle),
            size: *size,
        },
        TrailStep::Oracle { from_size, size } => TrailEntry::Oracle {
            from_size: *from_size,
            size: *size,
        },
    }
}

pub fn matching_certificate(rm: &RainbowMatching, trail: &[TrailStep]) -> MatchingCertificate {
    MatchingCertificate {
        schema: SCHEMA.to_string(),
        size: rm.len(),
        assignment: rm
            .assignment()
            .iter()
            .map(|(&m, e)| AssignmentEntry { set: m + 1, edge: pair(e) })
            .collect(),
        trail: trail.iter().map(trail_entry).collect(),
    }
}

pub fn write_matching_certificate(rm: &RainbowMatching, trail: &[TrailStep]) -> String {
    let value = serde_json::to_value(matching_certificate(rm, trail)).expect("serializable");
    let mut out = String::new();
    write_value(&mut out, &value, 0);
    out.push('\n');
    out
}

/// Pretty JSON with 2-space indent in which arrays holding no objects stay
/// on one line.
pub fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = |d: usize| "  ".repeat(d);
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (key, item)) in map.iter().enumerate() {
                let _ = write!(out, "{}{}: ", pad(depth + 1), Value::from(key.as_str()));
                write_value(out, item, depth + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{}}}", pad(depth));
        }
        Value::Array(items) if items.iter().any(has_object) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                write_value(out, item, depth + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{}]", pad(depth));
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(out, item, depth);
            }
            out.push(']');
        }
        other => out.push_str(&other.to_string()),
    }
}

fn has_object(v: &Value) -> bool {
    match v {
        Value::Object(_) => true,
        Value::Array(items) => items.iter().any(has_object),
        _ => false,
    }
}

/// Parses a matching certificate and checks it against `fam`.
pub fn parse_matching_certificate(text: &str, fam: &EdgeFamily) -> Result<RainbowMatching, FormatError> {
    let cert: MatchingCertificate = serde_json::from_str(text)?;
    if cert.schema != SCHEMA {
        return invalid(format!("unsupported schema {:?}", cert.schema));
    }
    let mut assignment = BTreeMap::new();
    for entry in &cert.assignment {
        if entry.set == 0 {
            return invalid("set indices start at 1");
        }
        let [a, b] = entry.edge;
        if assignment.insert(entry.set - 1, Edge::new(a, b)).is_some() {
            return invalid(format!("set {} appears twice", entry.set));
        }
    }
    let rm = RainbowMatching::new(fam, assignment).map_err(|e| FormatError::Invalid(e.to_string()))?;
    if rm.len() != cert.size {
        return invalid(format!("size {} does not match {} assignments", cert.size, rm.len()));
    }
    Ok(rm)
}

fn vertex_json(v: Vertex) -> Value {
    match v {
        Vertex::Source => Value::from("s"),
        Vertex::Target => Value::from("t"),
        Vertex::Inner(i) => Value::from(i + 1),
    }
}

fn parse_vertex(v: &Value, inner: usize) -> Result<Vertex, FormatError> {
    match v {
        Value::String(s) if s == "s" => Ok(Vertex::Source),
        Value::String(s) if s == "t" => Ok(Vertex::Target),
        Value::Number(n) => match n.as_u64() {
            Some(i) if i >= 1 && (i as usize) <= inner => Ok(Vertex::Inner(i as usize - 1)),
            _ => invalid(format!("vertex {n} is not in 1..={inner}")),
        },
        other => invalid(format!("vertex {other} must be \"s\", \"t\" or a positive integer")),
    }
}

/// A standalone network file: the network is the union of the sets.
pub fn parse_network(text: &str) -> Result<(Network, NetworkFamily), FormatError> {
    let v: Value = serde_json::from_str(text)?;
    let obj = v.as_object().ok_or(FormatError::Invalid("expected an object".into()))?;
    if let Some(key) = obj.keys().find(|k| *k != "inner" && *k != "sets") {
        return invalid(format!("unknown field {key:?}"));
    }
    let inner = obj
        .get("inner")
        .and_then(Value::as_u64)
        .ok_or(FormatError::Invalid("missing integer field \"inner\"".into()))? as usize;
    let sets = obj
        .get("sets")
        .and_then(Value::as_array)
        .ok_or(FormatError::Invalid("missing array field \"sets\"".into()))?;
    let mut out = Vec::with_capacity(sets.len());
    for (i, set) in sets.iter().enumerate() {
        let arcs = set
            .as_array()
            .ok_or_else(|| FormatError::Invalid(format!("set {} is not an array", i + 1)))?;
        let mut parsed = ArcSet::new();
        for a in arcs {
            let ends = a.as_array().filter(|e| e.len() == 2).ok_or_else(|| {
                FormatError::Invalid(format!("set {}: arc {a} must be a pair", i + 1))
            })?;
            let arc = Arc::new(parse_vertex(&ends[0], inner)?, parse_vertex(&ends[1], inner)?)
                .map_err(|e| FormatError::Invalid(format!("set {}: {e}", i + 1)))?;
            if !parsed.insert(arc) {
                return invalid(format!("set {}: arc {a} appears twice", i + 1));
            }
        }
        out.push(parsed);
    }
    let nf = NetworkFamily::standalone(out);
    let net = Network::from_family(inner, &nf).map_err(|e| FormatError::Invalid(e.to_string()))?;
    Ok((net, nf))
}

pub fn write_network(net: &Network, nf: &NetworkFamily) -> String {
    let sets: Vec<Value> = nf
        .sets()
        .iter()
        .map(|s| {
            Value::Array(
                s.iter()
                    .map(|a| Value::Array(vec![vertex_json(a.from), vertex_json(a.to)]))
                    .collect(),
            )
        })
        .collect();
    let mut out = format!("{{\n  \"inner\": {},\n  \"sets\": [\n", net.inner_count());
    for (i, s) in sets.iter().enumerate() {
        let sep = if i + 1 < sets.len() { "," } else { "" };
        let _ = writeln!(out, "    {s}{sep}");
    }
    out.push_str("  ]\n}\n");
    out
}

/// Parses a regimentation certificate. Assignment keys are 1-based family
/// member ids; the result is keyed by family member ids (0-based), see
/// [`Regimentation::from_member_ids`].
pub fn parse_regimentation(text: &str, inner: usize) -> Result<Regimentation, FormatError> {
    let v: Value = serde_json::from_str(text)?;
    let obj = v.as_object().ok_or(FormatError::Invalid("expected an object".into()))?;
    if let Some(key) = obj.keys().find(|k| *k != "paths" && *k != "assignment") {
        return invalid(format!("unknown field {key:?}"));
    }
    let raw_paths = obj
        .get("paths")
        .and_then(Value::as_array)
        .ok_or(FormatError::Invalid("missing array field \"paths\"".into()))?;
    let mut paths = Vec::with_capacity(raw_paths.len());
    for p in raw_paths {
        let vs = p
            .as_array()
            .ok_or_else(|| FormatError::Invalid(format!("path {p} is not an array")))?;
        let vertices = vs.iter().map(|v| parse_vertex(v, inner)).collect::<Result<Vec<_>, _>>()?;
        paths.push(StPath::new(vertices).map_err(|e| FormatError::Invalid(e.to_string()))?);
    }
    let raw_assignment = obj
        .get("assignment")
        .and_then(Value::as_object)
        .ok_or(FormatError::Invalid("missing object field \"assignment\"".into()))?;
    let mut assignment = BTreeMap::new();
    for (member, path) in raw_assignment {
        let m: usize = member
            .parse()
            .ok()
            .filter(|&m| m >= 1)
            .ok_or_else(|| FormatError::Invalid(format!("member key {member:?} must be a positive integer")))?;
        let q = path
            .as_u64()
            .ok_or_else(|| FormatError::Invalid(format!("path index {path} must be a non-negative integer")))?;
        assignment.insert(m - 1, q as usize);
    }
    Ok(Regimentation { paths, assignment })
}

/// Writes `r`, whose assignment is keyed by family member ids.
pub fn write_regimentation(r: &Regimentation) -> String {
    let paths: Vec<String> = r
        .paths
        .iter()
        .map(|p| Value::Array(p.vertices().iter().map(|&v| vertex_json(v)).collect()).to_string())
        .collect();
    let assignment: Vec<String> = r.assignment.iter().map(|(m, q)| format!("\"{}\": {q}", m + 1)).collect();
    format!(
        "{{\n  \"paths\": [{}],\n  \"assignment\": {{{}}}\n}}\n",
        paths.join(", "),
        assignment.join(", ")
    )
}

fn dot_name(v: Vertex) -> String {
    match v {
        Vertex::Source => "s".into(),
        Vertex::Target => "t".into(),
        Vertex::Inner(i) => format!("v{}", i + 1),
    }
}

/// Graphviz rendering. Inner vertices show their matching edge, arcs list
/// the (1-based) members containing them, and arcs backward on a path of `r`
/// are drawn dashed and red.
pub fn to_dot(net: &Network, nf: &NetworkFamily, r: Option<&Regimentation>) -> String {
    let backward: BTreeSet<Arc> = r
        .map(|r| r.paths.iter().flat_map(|q| backward_arcs(net, q)).collect())
        .unwrap_or_default();
    let mut out = String::from("digraph network {\n  rankdir=LR;\n  s [shape=box];\n  t [shape=box];\n");
    for v in net.inner_vertices() {
        let label = match net.label(v) {
            Some(e) => format!("{}\\n{e}", dot_name(v)),
            None => dot_name(v),
        };
        let _ = writeln!(out, "  {} [label=\"{label}\"];", dot_name(v));
    }
    for a in net.arcs() {
        let members: Vec<String> = (0..nf.len())
            .filter(|&p| nf.set(p).contains(a))
            .map(|p| (nf.member_id(p) + 1).to_string())
            .collect();
        let style = if backward.contains(a) { ", style=dashed, color=red" } else { "" };
        let _ = writeln!(
            out,
            "  {} -> {} [label=\"{}\"{style}];",
            dot_name(a.from),
            dot_name(a.to),
            members.join(",")
        );
    }
    out.push_str("}\n");
    out
}
