//! Combinatorial skeleton of the tree-like space of a presented tree set.
//!
//! The vertices of the space are the consistent orientations of the
//! presented tree set. Each one is identified by a *cut descriptor*: a
//! skeleton vertex, an interior cut after j elements of one edge's chain,
//! or the limit cut of an ω+1 chain sitting between all its At positions
//! and its top element. Edges are the presented separations; the top of an
//! ω+1 label is a *limit edge*, joining the limit cut to the far endpoint.
//!
//! Sub-base sets S(e⃗, r), pseudo-arcs between descriptors, and contraction
//! of edge regions are all computed on these finite descriptions.

use num_rational::Ratio;
use serde::Serialize;

use crate::presented::{
    edge_id, ChainTreePresentation, Comparison, Dir, EdgeLabel, ElemIndex, LabelKind,
    PresentError, PresentedElement,
};
use crate::tree::Tree;

pub type Coord = Ratio<i64>;

/// Descriptor of one consistent orientation of a presented tree set.
///
/// Boundary cuts are canonicalized to skeleton vertices: the cut before
/// position 0 is the start vertex, the cut after a whole chain is the far
/// vertex. `Cut` is therefore always interior (`after ≥ 1`), and `OmegaCut`
/// exists only on ω+1 edges, strictly between the At positions and the top.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Location {
    Vertex(String),
    Cut { edge: String, after: u32 },
    OmegaCut { edge: String },
}

impl std::fmt::Display for Location {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Location::Vertex(v) => write!(f, "v:{v}"),
            Location::Cut { edge, after } => write!(f, "{edge}:cut:{after}"),
            Location::OmegaCut { edge } => write!(f, "{edge}:cut:omega"),
        }
    }
}

/// A finitely described family of vertex descriptors.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum VertexFamily {
    Single(Location),
    /// Interior cuts `after = from, from+1, ...` of one edge; `to` is
    /// inclusive, `None` meaning the family is infinite.
    CutRange {
        edge: String,
        from: u32,
        to: Option<u32>,
    },
}

/// A limit edge: the top separation of an ω+1 chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LimitEdge {
    pub edge: String,
    /// Canonical forward element id, e.g. `e[top]+`.
    pub element: String,
    /// Endpoints (O(s̄), O(s⃗)): the limit cut and the far vertex.
    pub endpoints: (Location, Location),
}

/// A point of the tree-like space: a vertex descriptor or an inner point
/// of an edge with an exact rational coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TlsPoint {
    At(Location),
    Inner {
        edge: String,
        index: ElemIndex,
        coord: Coord,
    },
}

/// Positions of one edge covered by a pseudo-arc.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ArcSpan {
    /// At positions from..=to.
    Ats { from: u32, to: u32 },
    /// All At positions ≥ from, no top.
    AtsFrom { from: u32 },
    /// All At positions ≥ from plus the top element.
    AtsFromWithTop { from: u32 },
    /// Only the top element.
    TopOnly,
}

impl ArcSpan {
    pub fn contains(&self, index: ElemIndex) -> bool {
        match (*self, index) {
            (ArcSpan::Ats { from, to }, ElemIndex::At(n)) => from <= n && n <= to,
            (ArcSpan::AtsFrom { from }, ElemIndex::At(n))
            | (ArcSpan::AtsFromWithTop { from }, ElemIndex::At(n)) => n >= from,
            (ArcSpan::AtsFromWithTop { .. }, ElemIndex::Top) => true,
            (ArcSpan::TopOnly, ElemIndex::Top) => true,
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArcInterval {
    pub edge: String,
    pub span: ArcSpan,
}

/// The pseudo-arc between two vertex descriptors: the separations oriented
/// differently by the two orientations, as per-edge index intervals, plus
/// the vertex descriptors in the arc's closure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArcDescription {
    pub intervals: Vec<ArcInterval>,
    pub closure: Vec<VertexFamily>,
}

/// A prefix, whole-chain or all-At region of one edge, the shapes whose
/// contraction stays inside the label vocabulary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractRegion {
    pub edge: String,
    pub from: u32,
    pub to: RegionEnd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegionEnd {
    /// Inclusive last At position.
    At(u32),
    /// Every At position.
    LastAt,
    /// Everything including the top element.
    Top,
}

impl ContractRegion {
    /// The region covering a whole edge, phrased per its label.
    pub fn whole(pres: &ChainTreePresentation, edge_id: &str) -> Result<Self, PresentError> {
        let idx = pres.edge_by_id(edge_id)?;
        let to = match pres.edge(idx).kind {
            LabelKind::Finite(k) => RegionEnd::At(k - 1),
            LabelKind::Omega => RegionEnd::LastAt,
            LabelKind::OmegaPlusOne => RegionEnd::Top,
        };
        Ok(ContractRegion {
            edge: edge_id.to_owned(),
            from: 0,
            to,
        })
    }
}

/// Ordered cut positions along one edge, including the two boundary ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum CutPos {
    Count(u32),
    OmegaPos,
    AfterTop,
}

/// The tree-like space of a chain-tree presentation.
#[derive(Clone, Debug)]
pub struct PresentedTls {
    pres: ChainTreePresentation,
    pub vertices: Vec<VertexFamily>,
    pub limit_edges: Vec<LimitEdge>,
}

/// Builds the vertex-descriptor families and limit edges of the tree-like
/// space of `pres`.
pub fn build_tls(pres: &ChainTreePresentation) -> PresentedTls {
    let mut vertices = Vec::new();
    for v in pres.skeleton().vertex_ids() {
        vertices.push(VertexFamily::Single(Location::Vertex(v.clone())));
    }
    let mut limit_edges = Vec::new();
    for e in pres.edges() {
        match e.kind {
            LabelKind::Finite(k) => {
                if k >= 2 {
                    vertices.push(VertexFamily::CutRange {
                        edge: e.id.clone(),
                        from: 1,
                        to: Some(k - 1),
                    });
                }
            }
            LabelKind::Omega => {
                vertices.push(VertexFamily::CutRange {
                    edge: e.id.clone(),
                    from: 1,
                    to: None,
                });
            }
            LabelKind::OmegaPlusOne => {
                vertices.push(VertexFamily::CutRange {
                    edge: e.id.clone(),
                    from: 1,
                    to: None,
                });
                vertices.push(VertexFamily::Single(Location::OmegaCut {
                    edge: e.id.clone(),
                }));
                let top = PresentedElement {
                    edge: pres.edge_by_id(&e.id).unwrap(),
                    index: ElemIndex::Top,
                    dir: Dir::Forward,
                };
                limit_edges.push(LimitEdge {
                    edge: e.id.clone(),
                    element: pres.element_id(&top),
                    endpoints: (
                        Location::OmegaCut { edge: e.id.clone() },
                        Location::Vertex(pres.skeleton().vertex_id(e.far).to_owned()),
                    ),
                });
            }
        }
    }
    PresentedTls {
        pres: pres.clone(),
        vertices,
        limit_edges,
    }
}

impl PresentedTls {
    pub fn presentation(&self) -> &ChainTreePresentation {
        &self.pres
    }

    /// Validates a descriptor, insisting on the canonical form.
    pub fn check_location(&self, loc: &Location) -> Result<(), PresentError> {
        let unknown = |detail: String| Err(PresentError::UnknownDescriptor { detail });
        match loc {
            Location::Vertex(v) => {
                if self.pres.skeleton().vertex(v).is_none() {
                    return unknown(format!("no skeleton vertex {v}"));
                }
            }
            Location::Cut { edge, after } => {
                let idx = self.pres.edge_by_id(edge)?;
                if *after == 0 {
                    return unknown(format!(
                        "cut 0 of {edge} is the start vertex; use the vertex descriptor"
                    ));
                }
                if let LabelKind::Finite(k) = self.pres.edge(idx).kind {
                    if *after >= k {
                        return unknown(format!(
                            "cut {after} of {edge} is not interior to a chain of length {k}"
                        ));
                    }
                }
            }
            Location::OmegaCut { edge } => {
                let idx = self.pres.edge_by_id(edge)?;
                if self.pres.edge(idx).kind != LabelKind::OmegaPlusOne {
                    return unknown(format!("{edge} has no limit cut"));
                }
            }
        }
        Ok(())
    }

    /// Orientation the descriptor gives to the separation at
    /// (`edge`, `index`): every separation points toward the location.
    pub fn dir_at(&self, loc: &Location, edge: usize, index: ElemIndex) -> Dir {
        let e = self.pres.edge(edge);
        match loc {
            Location::Cut {
                edge: eid,
                after,
            } if *eid == e.id => match index {
                ElemIndex::At(n) => {
                    if n < *after {
                        Dir::Forward
                    } else {
                        Dir::Backward
                    }
                }
                ElemIndex::Top => Dir::Backward,
            },
            Location::OmegaCut { edge: eid } if *eid == e.id => match index {
                ElemIndex::At(_) => Dir::Forward,
                ElemIndex::Top => Dir::Backward,
            },
            _ => {
                let anchor = match loc {
                    Location::Vertex(v) => self.pres.skeleton().vertex(v).expect("validated"),
                    Location::Cut { edge: eid, .. } | Location::OmegaCut { edge: eid } => {
                        let other = self.pres.edge_by_id(eid).expect("validated");
                        self.pres.edge(other).start
                    }
                };
                if self.pres.skeleton().side(edge, e.far)[anchor] {
                    Dir::Forward
                } else {
                    Dir::Backward
                }
            }
        }
    }

    /// The orientation of a descriptor restricted to a depth-n truncation,
    /// as element ids.
    pub fn orientation_ids_at(&self, loc: &Location, depth: u32) -> Vec<String> {
        let mut out = Vec::new();
        for edge in 0..self.pres.edge_count() {
            for index in self.pres.truncated_indices(edge, depth) {
                let dir = self.dir_at(loc, edge, index);
                out.push(self.pres.element_id(&PresentedElement { edge, index, dir }));
            }
        }
        out.sort();
        out
    }

    /// The canonical descriptor of the cut after `j` elements of `edge`.
    pub fn cut_location(&self, edge: usize, j: u32) -> Location {
        let e = self.pres.edge(edge);
        if j == 0 {
            return Location::Vertex(self.pres.skeleton().vertex_id(e.start).to_owned());
        }
        if let LabelKind::Finite(k) = e.kind {
            if j == k {
                return Location::Vertex(self.pres.skeleton().vertex_id(e.far).to_owned());
            }
        }
        Location::Cut {
            edge: e.id.clone(),
            after: j,
        }
    }

    /// Endpoints (O(s̄), O(s⃗)) of the separation at (`edge`, `index`).
    pub fn endpoints(
        &self,
        edge: usize,
        index: ElemIndex,
    ) -> Result<(Location, Location), PresentError> {
        let e = self.pres.edge(edge);
        self.pres.check_element(&PresentedElement {
            edge,
            index,
            dir: Dir::Forward,
        })?;
        Ok(match index {
            ElemIndex::At(n) => (self.cut_location(edge, n), self.cut_location(edge, n + 1)),
            ElemIndex::Top => (
                Location::OmegaCut { edge: e.id.clone() },
                Location::Vertex(self.pres.skeleton().vertex_id(e.far).to_owned()),
            ),
        })
    }

    /// Membership in the sub-base set S(e⃗, r): vertices whose orientation
    /// contains e⃗, inner points of edges strictly above e⃗ in some
    /// orientation, and inner points of e's own edge beyond coordinate r.
    pub fn subbase_member(
        &self,
        point: &TlsPoint,
        e: &PresentedElement,
        r: Coord,
    ) -> Result<bool, PresentError> {
        self.pres.check_element(e)?;
        let unit = |c: Coord, what: &str| -> Result<(), PresentError> {
            if c <= Ratio::from_integer(0) || c >= Ratio::from_integer(1) {
                return Err(PresentError::InvalidCoordinate {
                    detail: format!("{what} {c} is not strictly between 0 and 1"),
                });
            }
            Ok(())
        };
        unit(r, "radius")?;
        match point {
            TlsPoint::At(loc) => {
                self.check_location(loc)?;
                Ok(self.dir_at(loc, e.edge, e.index) == e.dir)
            }
            TlsPoint::Inner { edge, index, coord } => {
                unit(*coord, "coordinate")?;
                let idx = self.pres.edge_by_id(edge)?;
                let probe = PresentedElement {
                    edge: idx,
                    index: *index,
                    dir: Dir::Forward,
                };
                self.pres.check_element(&probe)?;
                if idx == e.edge && *index == e.index {
                    // The coordinate scale runs from O(s̄) at 0 to O(s⃗) at 1.
                    return Ok(match e.dir {
                        Dir::Forward => *coord > r,
                        Dir::Backward => *coord < r,
                    });
                }
                let above_fwd = self.pres.compare(e, &probe)? == Comparison::Lt;
                let above_bwd = self.pres.compare(e, &probe.inverse())? == Comparison::Lt;
                Ok(above_fwd || above_bwd)
            }
        }
    }

    fn cut_pos(&self, loc: &Location, edge: usize) -> CutPos {
        let e = self.pres.edge(edge);
        match loc {
            Location::Cut { edge: eid, after } if *eid == e.id => CutPos::Count(*after),
            Location::OmegaCut { edge: eid } if *eid == e.id => CutPos::OmegaPos,
            _ => {
                let anchor = match loc {
                    Location::Vertex(v) => self.pres.skeleton().vertex(v).expect("validated"),
                    Location::Cut { edge: eid, .. } | Location::OmegaCut { edge: eid } => {
                        let other = self.pres.edge_by_id(eid).expect("validated");
                        self.pres.edge(other).start
                    }
                };
                if self.pres.skeleton().side(edge, e.start)[anchor] {
                    CutPos::Count(0)
                } else {
                    match e.kind {
                        LabelKind::Finite(k) => CutPos::Count(k),
                        LabelKind::Omega => CutPos::OmegaPos,
                        LabelKind::OmegaPlusOne => CutPos::AfterTop,
                    }
                }
            }
        }
    }

    /// The pseudo-arc between two descriptors: per edge, the positions
    /// between the two cut positions, with the closure descriptors.
    /// Symmetric in its arguments.
    pub fn pseudo_arc(
        &self,
        u: &Location,
        v: &Location,
    ) -> Result<ArcDescription, PresentError> {
        self.check_location(u)?;
        self.check_location(v)?;
        let mut intervals = Vec::new();
        let mut closure = vec![
            VertexFamily::Single(u.clone()),
            VertexFamily::Single(v.clone()),
        ];
        for edge in 0..self.pres.edge_count() {
            let e = self.pres.edge(edge);
            let (a, b) = (self.cut_pos(u, edge), self.cut_pos(v, edge));
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            if lo == hi {
                continue;
            }
            let span = match (lo, hi) {
                (CutPos::Count(a), CutPos::Count(b)) => ArcSpan::Ats { from: a, to: b - 1 },
                (CutPos::Count(a), CutPos::OmegaPos) => ArcSpan::AtsFrom { from: a },
                (CutPos::Count(a), CutPos::AfterTop) => ArcSpan::AtsFromWithTop { from: a },
                (CutPos::OmegaPos, CutPos::AfterTop) => ArcSpan::TopOnly,
                _ => unreachable!("lo < hi"),
            };
            intervals.push(ArcInterval {
                edge: e.id.clone(),
                span,
            });
            // Closure: every cut position between the two boundaries.
            if let CutPos::Count(a) = lo {
                if a == 0 {
                    closure.push(VertexFamily::Single(self.cut_location(edge, 0)));
                }
                let from = a.max(1);
                match hi {
                    CutPos::Count(b) => {
                        let interior_max = match e.kind {
                            LabelKind::Finite(k) => b.min(k - 1),
                            _ => b,
                        };
                        if from <= interior_max {
                            closure.push(VertexFamily::CutRange {
                                edge: e.id.clone(),
                                from,
                                to: Some(interior_max),
                            });
                        }
                        if let LabelKind::Finite(k) = e.kind {
                            if b == k {
                                closure.push(VertexFamily::Single(self.cut_location(edge, k)));
                            }
                        }
                    }
                    CutPos::OmegaPos | CutPos::AfterTop => {
                        closure.push(VertexFamily::CutRange {
                            edge: e.id.clone(),
                            from,
                            to: None,
                        });
                    }
                }
            }
            match hi {
                CutPos::OmegaPos => match e.kind {
                    LabelKind::Omega => closure.push(VertexFamily::Single(Location::Vertex(
                        self.pres.skeleton().vertex_id(e.far).to_owned(),
                    ))),
                    LabelKind::OmegaPlusOne => {
                        closure.push(VertexFamily::Single(Location::OmegaCut {
                            edge: e.id.clone(),
                        }))
                    }
                    LabelKind::Finite(_) => unreachable!("finite edges have no limit cut"),
                },
                CutPos::AfterTop => {
                    closure.push(VertexFamily::Single(Location::OmegaCut {
                        edge: e.id.clone(),
                    }));
                    closure.push(VertexFamily::Single(Location::Vertex(
                        self.pres.skeleton().vertex_id(e.far).to_owned(),
                    )));
                }
                CutPos::Count(_) => {}
            }
        }
        closure.sort();
        closure.dedup();
        Ok(ArcDescription { intervals, closure })
    }

    /// Contracts the given regions, yielding the presentation of the
    /// quotient space.
    pub fn contract(
        &self,
        regions: &[ContractRegion],
    ) -> Result<ChainTreePresentation, PresentError> {
        contract(&self.pres, regions)
    }
}

enum EdgeOutcome {
    Keep,
    Shorten(LabelKind),
    Collapse,
}

/// Contracts per-edge regions of a presentation. Only whole edges, finite
/// prefixes and all-At segments are expressible back in the label
/// vocabulary; anything else is rejected.
pub fn contract(
    pres: &ChainTreePresentation,
    regions: &[ContractRegion],
) -> Result<ChainTreePresentation, PresentError> {
    let mut outcome: Vec<EdgeOutcome> = (0..pres.edge_count()).map(|_| EdgeOutcome::Keep).collect();
    for region in regions {
        let idx = pres.edge_by_id(&region.edge)?;
        if !matches!(outcome[idx], EdgeOutcome::Keep) {
            return Err(PresentError::InvalidIntervalSet {
                detail: format!("two regions on edge {}", region.edge),
            });
        }
        if region.from != 0 {
            return Err(PresentError::InvalidIntervalSet {
                detail: format!(
                    "region on {} starts at {}; only prefixes are expressible",
                    region.edge, region.from
                ),
            });
        }
        let kind = pres.edge(idx).kind;
        outcome[idx] = match (kind, region.to) {
            (LabelKind::Finite(k), RegionEnd::At(m)) if m + 1 < k => {
                EdgeOutcome::Shorten(LabelKind::Finite(k - m - 1))
            }
            (LabelKind::Finite(k), RegionEnd::At(m)) if m + 1 == k => EdgeOutcome::Collapse,
            (LabelKind::Finite(k), RegionEnd::At(m)) => {
                return Err(PresentError::InvalidIntervalSet {
                    detail: format!(
                        "region [0..={m}] exceeds chain of length {k} on {}",
                        region.edge
                    ),
                })
            }
            (LabelKind::Finite(_), RegionEnd::LastAt) => EdgeOutcome::Collapse,
            (LabelKind::Finite(_) | LabelKind::Omega, RegionEnd::Top) => {
                return Err(PresentError::InvalidIntervalSet {
                    detail: format!("{} has no top element", region.edge),
                })
            }
            (LabelKind::Omega, RegionEnd::At(_)) => EdgeOutcome::Shorten(LabelKind::Omega),
            (LabelKind::Omega, RegionEnd::LastAt) => EdgeOutcome::Collapse,
            (LabelKind::OmegaPlusOne, RegionEnd::At(_)) => {
                EdgeOutcome::Shorten(LabelKind::OmegaPlusOne)
            }
            (LabelKind::OmegaPlusOne, RegionEnd::LastAt) => {
                EdgeOutcome::Shorten(LabelKind::Finite(1))
            }
            (LabelKind::OmegaPlusOne, RegionEnd::Top) => EdgeOutcome::Collapse,
        };
    }

    // Union-find over skeleton vertices along collapsed edges.
    let skel = pres.skeleton();
    let n = skel.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    for (idx, out) in outcome.iter().enumerate() {
        if matches!(out, EdgeOutcome::Collapse) {
            let e = pres.edge(idx);
            let (a, b) = (find(&mut parent, e.start), find(&mut parent, e.far));
            parent[a] = b;
        }
    }
    // Lexicographically smallest id represents each class.
    let mut rep_id: Vec<Option<String>> = vec![None; n];
    for v in 0..n {
        let r = find(&mut parent, v);
        let id = skel.vertex_id(v);
        match &rep_id[r] {
            Some(cur) if cur.as_str() <= id => {}
            _ => rep_id[r] = Some(id.to_owned()),
        }
    }
    let class_id = |parent: &mut Vec<usize>, rep_id: &[Option<String>], v: usize| {
        rep_id[find(parent, v)].clone().expect("class has a representative")
    };

    let mut vertices: Vec<String> = Vec::new();
    for v in 0..n {
        if find(&mut parent, v) == v {
            vertices.push(rep_id[v].clone().unwrap());
        }
    }
    vertices.sort();
    let mut edges = Vec::new();
    let mut labels = std::collections::BTreeMap::new();
    for (idx, out) in outcome.iter().enumerate() {
        let e = pres.edge(idx);
        let kind = match out {
            EdgeOutcome::Keep => e.kind,
            EdgeOutcome::Shorten(k) => *k,
            EdgeOutcome::Collapse => continue,
        };
        let su = class_id(&mut parent, &rep_id, e.start);
        let sv = class_id(&mut parent, &rep_id, e.far);
        edges.push((su.clone(), sv.clone()));
        labels.insert(
            edge_id(&su, &sv),
            EdgeLabel {
                kind,
                start: su,
            },
        );
    }
    let tree = Tree::new(vertices, edges)?;
    ChainTreePresentation::new(tree, &labels)
}
