//! JSON file formats and DOT export.
//!
//! All files carry a top-level `"schema": 1`. Systems list involution
//! pairs and base order relations; trees list vertices and edges;
//! presentations wrap a tree skeleton plus per-edge labels keyed by the
//! `u-v` edge id.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bridge::BuiltTree;
use crate::presented::{ChainTreePresentation, EdgeLabel, LabelKind};
use crate::system::SeparationSystem;
use crate::tls::{PresentedTls, VertexFamily};
use crate::tree::Tree;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("parse error: {detail}")]
    Parse { detail: String },
    #[error("schema error: {detail}")]
    Schema { detail: String },
    #[error("invariant violation: {detail}")]
    InvariantViolation { detail: String },
}

fn parse_err(e: serde_json::Error) -> IoError {
    IoError::Parse {
        detail: format!("{e} (line {}, column {})", e.line(), e.column()),
    }
}

fn invariant(e: impl std::fmt::Display) -> IoError {
    IoError::InvariantViolation {
        detail: e.to_string(),
    }
}

fn check_schema(schema: u32) -> Result<(), IoError> {
    if schema != SCHEMA_VERSION {
        return Err(IoError::Schema {
            detail: format!("unsupported schema {schema}, expected {SCHEMA_VERSION}"),
        });
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
pub struct SystemFile {
    pub schema: u32,
    pub elements: Vec<(String, String)>,
    #[serde(default)]
    pub order: Vec<(String, String)>,
}

#[derive(Serialize, Deserialize)]
pub struct TreeFile {
    pub schema: u32,
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<(String, String)>,
}

#[derive(Serialize, Deserialize)]
pub struct PresentationFile {
    pub schema: u32,
    pub skeleton: TreeBody,
    pub labels: BTreeMap<String, LabelSpec>,
}

#[derive(Serialize, Deserialize)]
pub struct TreeBody {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<(String, String)>,
}

#[derive(Serialize, Deserialize)]
pub struct LabelSpec {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    pub start: String,
}

pub fn system_from_str(s: &str) -> Result<SeparationSystem, IoError> {
    let file: SystemFile = serde_json::from_str(s).map_err(parse_err)?;
    check_schema(file.schema)?;
    SeparationSystem::build(&file.elements, &file.order).map_err(invariant)
}

pub fn system_to_string(sys: &SeparationSystem) -> String {
    let elements: Vec<(String, String)> = sys
        .separations()
        .map(|s| {
            let (a, b) = sys.orientations(s);
            (sys.id(a).to_owned(), sys.id(b).to_owned())
        })
        .collect();
    let mut order = Vec::new();
    for a in sys.elements() {
        for b in sys.elements() {
            if sys.lt(a, b) {
                order.push((sys.id(a).to_owned(), sys.id(b).to_owned()));
            }
        }
    }
    serde_json::to_string_pretty(&SystemFile {
        schema: SCHEMA_VERSION,
        elements,
        order,
    })
    .expect("system serializes")
}

pub fn tree_from_str(s: &str) -> Result<Tree, IoError> {
    let file: TreeFile = serde_json::from_str(s).map_err(parse_err)?;
    check_schema(file.schema)?;
    Tree::new(file.vertices, file.edges).map_err(invariant)
}

pub fn tree_to_string(tree: &Tree) -> String {
    let edges = tree
        .edges()
        .iter()
        .map(|&(u, v)| (tree.vertex_id(u).to_owned(), tree.vertex_id(v).to_owned()))
        .collect();
    serde_json::to_string_pretty(&TreeFile {
        schema: SCHEMA_VERSION,
        vertices: tree.vertex_ids().to_vec(),
        edges,
    })
    .expect("tree serializes")
}

pub fn presentation_from_str(s: &str) -> Result<ChainTreePresentation, IoError> {
    let file: PresentationFile = serde_json::from_str(s).map_err(parse_err)?;
    check_schema(file.schema)?;
    let tree = Tree::new(file.skeleton.vertices, file.skeleton.edges).map_err(invariant)?;
    let mut labels = BTreeMap::new();
    for (id, spec) in &file.labels {
        let kind = match spec.kind.as_str() {
            "finite" => LabelKind::Finite(spec.k.ok_or_else(|| IoError::Schema {
                detail: format!("finite label on {id} needs \"k\""),
            })?),
            "omega" => LabelKind::Omega,
            "omega_plus_one" => LabelKind::OmegaPlusOne,
            other => {
                return Err(IoError::Schema {
                    detail: format!("unknown label kind {other:?} on {id}"),
                })
            }
        };
        labels.insert(
            id.clone(),
            EdgeLabel {
                kind,
                start: spec.start.clone(),
            },
        );
    }
    ChainTreePresentation::new(tree, &labels).map_err(invariant)
}

pub fn presentation_to_string(pres: &ChainTreePresentation) -> String {
    let skeleton = TreeBody {
        vertices: pres.skeleton().vertex_ids().to_vec(),
        edges: pres
            .skeleton()
            .edges()
            .iter()
            .map(|&(u, v)| {
                (
                    pres.skeleton().vertex_id(u).to_owned(),
                    pres.skeleton().vertex_id(v).to_owned(),
                )
            })
            .collect(),
    };
    let labels = pres
        .labels()
        .into_iter()
        .map(|(id, label)| {
            let (kind, k) = match label.kind {
                LabelKind::Finite(k) => ("finite", Some(k)),
                LabelKind::Omega => ("omega", None),
                LabelKind::OmegaPlusOne => ("omega_plus_one", None),
            };
            (
                id,
                LabelSpec {
                    kind: kind.to_owned(),
                    k,
                    start: label.start,
                },
            )
        })
        .collect();
    serde_json::to_string_pretty(&PresentationFile {
        schema: SCHEMA_VERSION,
        skeleton,
        labels,
    })
    .expect("presentation serializes")
}

fn read(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_system(path: &Path) -> Result<SeparationSystem, IoError> {
    system_from_str(&read(path)?)
}

pub fn load_tree(path: &Path) -> Result<Tree, IoError> {
    tree_from_str(&read(path)?)
}

pub fn load_presentation(path: &Path) -> Result<ChainTreePresentation, IoError> {
    presentation_from_str(&read(path)?)
}

/// Input kinds recognizable from the top-level fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FileKind {
    System,
    Tree,
    Presentation,
}

pub fn sniff_kind(s: &str) -> Result<FileKind, IoError> {
    let value: serde_json::Value = serde_json::from_str(s).map_err(parse_err)?;
    let obj = value.as_object().ok_or_else(|| IoError::Schema {
        detail: "top level must be an object".into(),
    })?;
    if obj.contains_key("elements") {
        Ok(FileKind::System)
    } else if obj.contains_key("skeleton") {
        Ok(FileKind::Presentation)
    } else if obj.contains_key("vertices") {
        Ok(FileKind::Tree)
    } else {
        Err(IoError::Schema {
            detail: "cannot tell system / tree / presentation apart".into(),
        })
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn abbreviate(s: &str, width: usize) -> String {
    if width == 0 || s.chars().count() <= width {
        s.to_owned()
    } else {
        let mut out: String = s.chars().take(width.saturating_sub(1)).collect();
        out.push('\u{2026}');
        out
    }
}

/// DOT rendering of a tree; vertex labels are truncated at `label_width`
/// characters (0 = no truncation).
pub fn tree_to_dot(tree: &Tree, label_width: usize) -> String {
    let mut out = String::from("graph tree {\n  node [shape=ellipse];\n");
    for (i, id) in tree.vertex_ids().iter().enumerate() {
        out.push_str(&format!(
            "  n{i} [label=\"{}\"];\n",
            dot_escape(&abbreviate(id, label_width))
        ));
    }
    for &(u, v) in tree.edges() {
        out.push_str(&format!("  n{u} -- n{v};\n"));
    }
    out.push_str("}\n");
    out
}

/// DOT rendering of the tree of a tree set, edges labeled by their
/// separations.
pub fn built_tree_to_dot(built: &BuiltTree, label_width: usize) -> String {
    let tree = &built.tree;
    let mut out = String::from("graph tree {\n  node [shape=ellipse];\n");
    for (i, id) in tree.vertex_ids().iter().enumerate() {
        out.push_str(&format!(
            "  n{i} [label=\"{}\"];\n",
            dot_escape(&abbreviate(id, label_width))
        ));
    }
    for (i, &(u, v)) in tree.edges().iter().enumerate() {
        out.push_str(&format!(
            "  n{u} -- n{v} [label=\"{}\"];\n",
            dot_escape(&abbreviate(&built.edge_seps[i], label_width))
        ));
    }
    out.push_str("}\n");
    out
}

/// DOT rendering of a presented tree-like space: one node per descriptor
/// family, each chain drawn through its families, limit edges dashed.
pub fn tls_to_dot(tls: &PresentedTls) -> String {
    let pres = tls.presentation();
    let mut out = String::from("graph tls {\n  node [shape=ellipse];\n");
    let node_name = |fam: &VertexFamily| -> String {
        match fam {
            VertexFamily::Single(loc) => format!("\"{}\"", dot_escape(&loc.to_string())),
            VertexFamily::CutRange { edge, from, to } => {
                let hi = to.map_or("".to_string(), |t| t.to_string());
                format!("\"{}:cut:{from}..{hi}\"", dot_escape(edge))
            }
        }
    };
    for fam in &tls.vertices {
        let shape = match fam {
            VertexFamily::Single(_) => "ellipse",
            VertexFamily::CutRange { .. } => "box",
        };
        out.push_str(&format!("  {} [shape={shape}];\n", node_name(fam)));
    }
    for e in pres.edges() {
        let start = VertexFamily::Single(crate::tls::Location::Vertex(
            pres.skeleton().vertex_id(e.start).to_owned(),
        ));
        let far = VertexFamily::Single(crate::tls::Location::Vertex(
            pres.skeleton().vertex_id(e.far).to_owned(),
        ));
        match e.kind {
            LabelKind::Finite(1) => {
                out.push_str(&format!(
                    "  {} -- {} [label=\"{}\"];\n",
                    node_name(&start),
                    node_name(&far),
                    dot_escape(&e.id)
                ));
            }
            LabelKind::Finite(k) => {
                let mids = VertexFamily::CutRange {
                    edge: e.id.clone(),
                    from: 1,
                    to: Some(k - 1),
                };
                out.push_str(&format!(
                    "  {} -- {} [label=\"{}[0..{}]\"];\n",
                    node_name(&start),
                    node_name(&mids),
                    dot_escape(&e.id),
                    k - 1
                ));
                out.push_str(&format!("  {} -- {};\n", node_name(&mids), node_name(&far)));
            }
            LabelKind::Omega => {
                let mids = VertexFamily::CutRange {
                    edge: e.id.clone(),
                    from: 1,
                    to: None,
                };
                out.push_str(&format!(
                    "  {} -- {} [label=\"{}[0..]\"];\n",
                    node_name(&start),
                    node_name(&mids),
                    dot_escape(&e.id)
                ));
                out.push_str(&format!(
                    "  {} -- {} [style=dotted];\n",
                    node_name(&mids),
                    node_name(&far)
                ));
            }
            LabelKind::OmegaPlusOne => {
                let mids = VertexFamily::CutRange {
                    edge: e.id.clone(),
                    from: 1,
                    to: None,
                };
                let omega = VertexFamily::Single(crate::tls::Location::OmegaCut {
                    edge: e.id.clone(),
                });
                out.push_str(&format!(
                    "  {} -- {} [label=\"{}[0..]\"];\n",
                    node_name(&start),
                    node_name(&mids),
                    dot_escape(&e.id)
                ));
                out.push_str(&format!(
                    "  {} -- {} [style=dotted];\n",
                    node_name(&mids),
                    node_name(&omega)
                ));
                out.push_str(&format!(
                    "  {} -- {} [style=dashed,label=\"{}[top]\"];\n",
                    node_name(&omega),
                    node_name(&far),
                    dot_escape(&e.id)
                ));
            }
        }
    }
    out.push_str("}\n");
    out
}
