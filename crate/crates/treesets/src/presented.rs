//! Finitely presented infinite tree sets.
//!
//! A chain-tree presentation is a finite tree skeleton whose edges carry
//! order-type labels: a finite chain of length k, a chain of order type ω,
//! or one of order type ω+1. Each labeled edge stands for a chain of
//! separations read from the label's `start` endpoint toward the other one;
//! the presented tree set is the union of these chains under the
//! path-induced order of the skeleton. All presented tree sets are regular.
//!
//! Positions within an edge are addressed as `At(n)` (n = 0, 1, ...) plus
//! `Top` for the final element of an ω+1 chain. The textual form of an
//! element is `edge[n]+`, `edge[top]-` and so on, `+` meaning the forward
//! orientation (pointing away from `start`).

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::system::{SeparationSystem, SystemError};
use crate::tree::{Tree, TreeError};

#[derive(Debug, Error)]
pub enum PresentError {
    #[error("unknown edge {id}")]
    UnknownEdge { id: String },
    #[error("edge {id} has no label")]
    UnlabeledEdge { id: String },
    #[error("bad label on edge {id}: {detail}")]
    BadLabel { id: String, detail: String },
    #[error("invalid index for {element}: {detail}")]
    InvalidIndex { element: String, detail: String },
    #[error("cannot parse element address {input}")]
    ParseElement { input: String },
    #[error("presentation is not tame: {detail}")]
    NotTame { detail: String },
    #[error("unknown descriptor: {detail}")]
    UnknownDescriptor { detail: String },
    #[error("invalid coordinate: {detail}")]
    InvalidCoordinate { detail: String },
    #[error("interval set not expressible in the label vocabulary: {detail}")]
    InvalidIntervalSet { detail: String },
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    System(#[from] SystemError),
}

/// Order type of one labeled edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LabelKind {
    /// A finite chain of k ≥ 1 separations.
    Finite(u32),
    Omega,
    OmegaPlusOne,
}

/// An edge label: its order type and the endpoint the chain is read from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeLabel {
    pub kind: LabelKind,
    pub start: String,
}

/// Position of a separation within its edge's chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ElemIndex {
    At(u32),
    /// The final element of an ω+1 chain.
    Top,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dir {
    Forward,
    Backward,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::Forward => Dir::Backward,
            Dir::Backward => Dir::Forward,
        }
    }
}

/// One oriented separation of a presented tree set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PresentedElement {
    /// Presentation edge index.
    pub edge: usize,
    pub index: ElemIndex,
    pub dir: Dir,
}

impl PresentedElement {
    pub fn inverse(self) -> PresentedElement {
        PresentedElement {
            dir: self.dir.flip(),
            ..self
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    Lt,
    Gt,
    Eq,
    Incomparable,
}

/// A labeled skeleton edge, reading from `start` to `far`.
#[derive(Clone, Debug)]
pub struct PresEdge {
    pub id: String,
    pub start: usize,
    pub far: usize,
    pub kind: LabelKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TameWitnessKind {
    /// An edge labeled ω+1 carries the obstructing chain by itself.
    OmegaPlusOneLabel,
    /// An ω-labeled edge whose head endpoint has a further edge; the
    /// continuation element is an upper bound of the ω-chain.
    OmegaIntoBranch,
}

#[derive(Clone, Debug, Serialize)]
pub struct TameWitness {
    pub kind: TameWitnessKind,
    pub edges: Vec<String>,
    pub description: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TameReport {
    pub tame: bool,
    pub witness: Option<TameWitness>,
}

/// A finite tree skeleton with order-type edge labels, presenting a
/// possibly infinite tree set.
#[derive(Clone)]
pub struct ChainTreePresentation {
    skeleton: Tree,
    edges: Vec<PresEdge>,
    by_id: BTreeMap<String, usize>,
}

impl fmt::Debug for ChainTreePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self
            .edges
            .iter()
            .map(|e| format!("{}: {:?} from {}", e.id, e.kind, self.skeleton.vertex_id(e.start)))
            .collect();
        f.debug_struct("ChainTreePresentation")
            .field("edges", &labels)
            .finish()
    }
}

/// Edge id convention: `u-v` with the endpoints as listed in the skeleton.
pub fn edge_id(u: &str, v: &str) -> String {
    format!("{u}-{v}")
}

impl ChainTreePresentation {
    pub fn new(
        skeleton: Tree,
        labels: &BTreeMap<String, EdgeLabel>,
    ) -> Result<Self, PresentError> {
        let mut edges = Vec::with_capacity(skeleton.edge_count());
        let mut by_id = BTreeMap::new();
        for &(u, v) in skeleton.edges() {
            let id = edge_id(skeleton.vertex_id(u), skeleton.vertex_id(v));
            let label = labels
                .get(&id)
                .ok_or_else(|| PresentError::UnlabeledEdge { id: id.clone() })?;
            let start = skeleton.vertex(&label.start).ok_or_else(|| {
                PresentError::BadLabel {
                    id: id.clone(),
                    detail: format!("start {} is not a vertex", label.start),
                }
            })?;
            if start != u && start != v {
                return Err(PresentError::BadLabel {
                    id: id.clone(),
                    detail: format!("start {} is not an endpoint", label.start),
                });
            }
            if let LabelKind::Finite(k) = label.kind {
                if k == 0 {
                    return Err(PresentError::BadLabel {
                        id: id.clone(),
                        detail: "finite label must have k >= 1".into(),
                    });
                }
            }
            let far = if start == u { v } else { u };
            by_id.insert(id.clone(), edges.len());
            edges.push(PresEdge {
                id,
                start,
                far,
                kind: label.kind,
            });
        }
        for id in labels.keys() {
            if !by_id.contains_key(id) {
                return Err(PresentError::UnknownEdge { id: id.clone() });
            }
        }
        Ok(ChainTreePresentation {
            skeleton,
            edges,
            by_id,
        })
    }

    pub fn skeleton(&self) -> &Tree {
        &self.skeleton
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[PresEdge] {
        &self.edges
    }

    pub fn edge(&self, idx: usize) -> &PresEdge {
        &self.edges[idx]
    }

    pub fn edge_by_id(&self, id: &str) -> Result<usize, PresentError> {
        self.by_id
            .get(id)
            .copied()
            .ok_or_else(|| PresentError::UnknownEdge { id: id.to_owned() })
    }

    pub fn labels(&self) -> BTreeMap<String, EdgeLabel> {
        self.edges
            .iter()
            .map(|e| {
                (
                    e.id.clone(),
                    EdgeLabel {
                        kind: e.kind,
                        start: self.skeleton.vertex_id(e.start).to_owned(),
                    },
                )
            })
            .collect()
    }

    pub fn index_valid(&self, edge: usize, index: ElemIndex) -> bool {
        match (index, self.edges[edge].kind) {
            (ElemIndex::At(n), LabelKind::Finite(k)) => n < k,
            (ElemIndex::At(_), _) => true,
            (ElemIndex::Top, LabelKind::OmegaPlusOne) => true,
            (ElemIndex::Top, _) => false,
        }
    }

    /// Builds and validates an element from its parts.
    pub fn element(
        &self,
        edge_id: &str,
        index: ElemIndex,
        dir: Dir,
    ) -> Result<PresentedElement, PresentError> {
        let edge = self.edge_by_id(edge_id)?;
        let x = PresentedElement { edge, index, dir };
        self.check_element(&x)?;
        Ok(x)
    }

    pub fn check_element(&self, x: &PresentedElement) -> Result<(), PresentError> {
        if x.edge >= self.edges.len() {
            return Err(PresentError::UnknownEdge {
                id: format!("#{}", x.edge),
            });
        }
        if !self.index_valid(x.edge, x.index) {
            return Err(PresentError::InvalidIndex {
                element: self.element_id(x),
                detail: format!("label is {:?}", self.edges[x.edge].kind),
            });
        }
        Ok(())
    }

    /// Textual address, e.g. `e[3]+` or `e[top]-`.
    pub fn element_id(&self, x: &PresentedElement) -> String {
        let idx = match x.index {
            ElemIndex::At(n) => n.to_string(),
            ElemIndex::Top => "top".to_owned(),
        };
        let dir = match x.dir {
            Dir::Forward => '+',
            Dir::Backward => '-',
        };
        format!("{}[{}]{}", self.edges[x.edge].id, idx, dir)
    }

    /// Parses `edge[n]+` / `edge[top]-` addresses.
    pub fn parse_element(&self, input: &str) -> Result<PresentedElement, PresentError> {
        let bad = || PresentError::ParseElement {
            input: input.to_owned(),
        };
        let dir = match input.chars().last() {
            Some('+') => Dir::Forward,
            Some('-') => Dir::Backward,
            _ => return Err(bad()),
        };
        let rest = &input[..input.len() - 1];
        if !rest.ends_with(']') {
            return Err(bad());
        }
        let open = rest.rfind('[').ok_or_else(bad)?;
        let edge_part = &rest[..open];
        let idx_part = &rest[open + 1..rest.len() - 1];
        let index = if idx_part == "top" {
            ElemIndex::Top
        } else {
            ElemIndex::At(idx_part.parse().map_err(|_| bad())?)
        };
        self.element(edge_part, index, dir)
    }

    fn skeleton_oriented(&self, x: &PresentedElement) -> (usize, usize) {
        let e = &self.edges[x.edge];
        match x.dir {
            Dir::Forward => (e.start, e.far),
            Dir::Backward => (e.far, e.start),
        }
    }

    /// Order of two presented elements: within an edge by position, across
    /// edges by the skeleton's oriented-edge order.
    pub fn compare(
        &self,
        x: &PresentedElement,
        y: &PresentedElement,
    ) -> Result<Comparison, PresentError> {
        self.check_element(x)?;
        self.check_element(y)?;
        if x.edge == y.edge {
            if x.index == y.index && x.dir == y.dir {
                return Ok(Comparison::Eq);
            }
            return Ok(match (x.dir, y.dir) {
                (Dir::Forward, Dir::Forward) => cmp_by_index(x.index, y.index),
                (Dir::Backward, Dir::Backward) => cmp_by_index(y.index, x.index),
                _ => Comparison::Incomparable,
            });
        }
        let sx = self.skeleton_oriented(x);
        let sy = self.skeleton_oriented(y);
        if self.skeleton.oriented_edge_le(sx, sy) {
            Ok(Comparison::Lt)
        } else if self.skeleton.oriented_edge_le(sy, sx) {
            Ok(Comparison::Gt)
        } else {
            Ok(Comparison::Incomparable)
        }
    }

    pub fn le(&self, x: &PresentedElement, y: &PresentedElement) -> Result<bool, PresentError> {
        Ok(matches!(
            self.compare(x, y)?,
            Comparison::Lt | Comparison::Eq
        ))
    }

    /// Decides tameness: the presented tree set contains an ascending chain
    /// with a top element exactly when some edge is labeled ω+1, or some
    /// ω edge runs into a branching head endpoint.
    pub fn tame_check(&self) -> TameReport {
        for e in &self.edges {
            match e.kind {
                LabelKind::OmegaPlusOne => {
                    return TameReport {
                        tame: false,
                        witness: Some(TameWitness {
                            kind: TameWitnessKind::OmegaPlusOneLabel,
                            edges: vec![e.id.clone()],
                            description: format!(
                                "{}[0]+ < {}[1]+ < ... < {}[top]+ is an ascending chain of order type \u{3c9}+1",
                                e.id, e.id, e.id
                            ),
                        }),
                    };
                }
                LabelKind::Omega => {
                    if self.skeleton.degree(e.far) >= 2 {
                        let cont = self
                            .skeleton
                            .neighbors(e.far)
                            .map(|(_, ei)| &self.edges[ei])
                            .find(|other| other.id != e.id)
                            .expect("degree >= 2 gives a second edge");
                        let above = if cont.start == e.far {
                            format!("{}[0]+", cont.id)
                        } else {
                            format!("{}[0]-", cont.id)
                        };
                        return TameReport {
                            tame: false,
                            witness: Some(TameWitness {
                                kind: TameWitnessKind::OmegaIntoBranch,
                                edges: vec![e.id.clone(), cont.id.clone()],
                                description: format!(
                                    "{}[0]+ < {}[1]+ < ... is an ascending chain of order type \u{3c9} with upper bound {above}",
                                    e.id, e.id
                                ),
                            }),
                        };
                    }
                }
                LabelKind::Finite(_) => {}
            }
        }
        TameReport {
            tame: true,
            witness: None,
        }
    }

    /// Re-validates a tameness witness against this presentation.
    pub fn verify_tame_witness(&self, w: &TameWitness) -> bool {
        match w.kind {
            TameWitnessKind::OmegaPlusOneLabel => {
                w.edges.len() == 1
                    && self
                        .edge_by_id(&w.edges[0])
                        .map(|i| self.edges[i].kind == LabelKind::OmegaPlusOne)
                        .unwrap_or(false)
            }
            TameWitnessKind::OmegaIntoBranch => {
                if w.edges.len() != 2 || w.edges[0] == w.edges[1] {
                    return false;
                }
                let (Ok(a), Ok(b)) = (self.edge_by_id(&w.edges[0]), self.edge_by_id(&w.edges[1]))
                else {
                    return false;
                };
                let head = self.edges[a].far;
                self.edges[a].kind == LabelKind::Omega
                    && (self.edges[b].start == head || self.edges[b].far == head)
            }
        }
    }

    /// Whether the unique consistent orientation with `x` maximal is
    /// splitting. It fails to be exactly when the positions on the far
    /// side of the cut just above `x` have no first element: either `x` is
    /// the top of an ω+1 chain read backward, or the cut sits at a skeleton
    /// vertex into which some ω edge runs head-on.
    pub fn splitting_status(&self, x: &PresentedElement) -> Result<bool, PresentError> {
        self.check_element(x)?;
        let e = &self.edges[x.edge];
        let vertex_case = |w: usize| -> bool {
            !self
                .skeleton
                .neighbors(w)
                .map(|(_, ei)| &self.edges[ei])
                .any(|other| {
                    other.id != e.id && other.kind == LabelKind::Omega && other.far == w
                })
        };
        Ok(match (x.index, x.dir) {
            (ElemIndex::At(n), Dir::Forward) => match e.kind {
                LabelKind::Finite(k) if n + 1 == k => vertex_case(e.far),
                _ => true,
            },
            (ElemIndex::Top, Dir::Forward) => vertex_case(e.far),
            (ElemIndex::At(0), Dir::Backward) => vertex_case(e.start),
            (ElemIndex::At(_), Dir::Backward) => true,
            (ElemIndex::Top, Dir::Backward) => false,
        })
    }

    /// The presented tree of a tame presentation: finite labels become
    /// paths of unit edges, ω labels stay as rays.
    pub fn realize_tame_tree(&self) -> Result<ChainTreePresentation, PresentError> {
        let report = self.tame_check();
        if let Some(w) = report.witness {
            return Err(PresentError::NotTame {
                detail: w.description,
            });
        }
        let mut vertices: Vec<String> = self.skeleton.vertex_ids().to_vec();
        let mut edges: Vec<(String, String)> = Vec::new();
        let mut labels: BTreeMap<String, EdgeLabel> = BTreeMap::new();
        for e in &self.edges {
            let start_id = self.skeleton.vertex_id(e.start).to_owned();
            let far_id = self.skeleton.vertex_id(e.far).to_owned();
            match e.kind {
                LabelKind::Finite(1) | LabelKind::Omega => {
                    edges.push((start_id.clone(), far_id.clone()));
                    labels.insert(
                        edge_id(&start_id, &far_id),
                        EdgeLabel {
                            kind: if e.kind == LabelKind::Omega {
                                LabelKind::Omega
                            } else {
                                LabelKind::Finite(1)
                            },
                            start: start_id.clone(),
                        },
                    );
                }
                LabelKind::Finite(k) => {
                    let mut prev = start_id.clone();
                    for j in 1..=k {
                        let next = if j == k {
                            far_id.clone()
                        } else {
                            format!("{}#{}", e.id, j)
                        };
                        if j != k {
                            vertices.push(next.clone());
                        }
                        edges.push((prev.clone(), next.clone()));
                        labels.insert(
                            edge_id(&prev, &next),
                            EdgeLabel {
                                kind: LabelKind::Finite(1),
                                start: prev.clone(),
                            },
                        );
                        prev = next;
                    }
                }
                LabelKind::OmegaPlusOne => unreachable!("tame presentations have no \u{3c9}+1 label"),
            }
        }
        let tree = Tree::new(vertices, edges)?;
        ChainTreePresentation::new(tree, &labels)
    }

    /// Indices kept by a depth-n truncation of one edge.
    pub fn truncated_indices(&self, edge: usize, depth: u32) -> Vec<ElemIndex> {
        let mut out = Vec::new();
        match self.edges[edge].kind {
            LabelKind::Finite(k) => {
                for n in 0..k.min(depth) {
                    out.push(ElemIndex::At(n));
                }
            }
            LabelKind::Omega => {
                for n in 0..depth {
                    out.push(ElemIndex::At(n));
                }
            }
            LabelKind::OmegaPlusOne => {
                for n in 0..depth {
                    out.push(ElemIndex::At(n));
                }
                out.push(ElemIndex::Top);
            }
        }
        out
    }

    /// The finite tree set keeping the first `depth` elements of each
    /// chain (and the top of every ω+1 label), with the induced order.
    /// Element ids follow the `edge[n]+` convention.
    pub fn truncate(&self, depth: u32) -> SeparationSystem {
        assert!(depth >= 1, "truncation depth must be at least 1");
        let mut all: Vec<PresentedElement> = Vec::new();
        let mut elements = Vec::new();
        for edge in 0..self.edges.len() {
            for index in self.truncated_indices(edge, depth) {
                let fwd = PresentedElement {
                    edge,
                    index,
                    dir: Dir::Forward,
                };
                elements.push((self.element_id(&fwd), self.element_id(&fwd.inverse())));
                all.push(fwd);
                all.push(fwd.inverse());
            }
        }
        let mut relations = Vec::new();
        for x in &all {
            for y in &all {
                if x != y && self.compare(x, y).expect("validated elements") == Comparison::Lt
                {
                    relations.push((self.element_id(x), self.element_id(y)));
                }
            }
        }
        SeparationSystem::build(&elements, &relations)
            .expect("truncation of a presented tree set is a tree set")
    }
}

fn cmp_by_index(a: ElemIndex, b: ElemIndex) -> Comparison {
    use std::cmp::Ordering;
    match a.cmp(&b) {
        Ordering::Less => Comparison::Lt,
        Ordering::Greater => Comparison::Gt,
        Ordering::Equal => Comparison::Eq,
    }
}
