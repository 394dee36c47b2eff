//! Finite bridge between trees and regular tree sets.
//!
//! The oriented edges of a tree form a regular tree set under the
//! path-induced order ([`edge_tree_set`]); conversely every finite regular
//! tree set is the edge tree set of a tree whose vertices are its splitting
//! orientations ([`tree_of`]). The two [`roundtrip_tree`]/[`roundtrip_tau`]
//! operations certify both directions, and [`subset_minor`]/[`minor_subset`]
//! realize the correspondence between subsets of tree sets and tree minors.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::orientation::{OrientError, Orientation};
use crate::system::{check_isomorphism, Elem, SeparationSystem, SystemError};
use crate::tree::{Tree, TreeError};

#[derive(Debug, Error)]
pub enum BridgeError {
    #[error("not a tree set: {detail}")]
    NotATreeSet { detail: String },
    #[error("not a regular tree set: {detail}")]
    NotRegular { detail: String },
    #[error("orientation is not splitting")]
    NotSplitting,
    #[error("inclusion does not realize a sub-tree-set: {detail}")]
    NotASubset { detail: String },
    #[error("invalid minor model: {detail}")]
    InvalidModel { detail: String },
    #[error("construction falsified an expected invariant: {detail}")]
    Falsified { detail: String },
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Orient(#[from] OrientError),
}

/// Id of the oriented edge x→y.
pub fn oriented_edge_id(x: &str, y: &str) -> String {
    format!("{x}->{y}")
}

/// The edge tree set of a tree: one element per oriented edge, with
/// (x,y) < (v,w) iff the unique path between the two edges joins y to v.
pub fn edge_tree_set(tree: &Tree) -> SeparationSystem {
    let mut elements = Vec::with_capacity(tree.edge_count());
    let mut oriented: Vec<(usize, usize)> = Vec::with_capacity(tree.edge_count() * 2);
    for &(u, v) in tree.edges() {
        elements.push((
            oriented_edge_id(tree.vertex_id(u), tree.vertex_id(v)),
            oriented_edge_id(tree.vertex_id(v), tree.vertex_id(u)),
        ));
        oriented.push((u, v));
        oriented.push((v, u));
    }
    let mut relations = Vec::new();
    for &a in &oriented {
        for &b in &oriented {
            if a != b && tree.oriented_edge_le(a, b) {
                relations.push((
                    oriented_edge_id(tree.vertex_id(a.0), tree.vertex_id(a.1)),
                    oriented_edge_id(tree.vertex_id(b.0), tree.vertex_id(b.1)),
                ));
            }
        }
    }
    SeparationSystem::build(&elements, &relations)
        .expect("edge order of a tree is a partial order")
}

/// The tree of a finite regular tree set, with one vertex per splitting
/// orientation and one edge per separation.
#[derive(Clone, Debug)]
pub struct BuiltTree {
    pub tree: Tree,
    /// Vertex id (canonical orientation label) → the orientation itself.
    pub orientations: BTreeMap<String, Orientation>,
    /// Per tree edge, the canonical id of the separation it represents.
    pub edge_seps: Vec<String>,
}

impl BuiltTree {
    /// Vertex id of the splitting orientation `o`.
    pub fn vertex_of(&self, sys: &SeparationSystem, o: &Orientation) -> Option<usize> {
        self.tree.vertex(&o.label(sys))
    }
}

/// Builds the tree whose vertices are the splitting orientations of `tau`
/// and whose edges are {O(s⃗), O(s̄)} for each separation s.
///
/// `tau` must be a finite regular tree set. Acyclicity and connectivity of
/// the result are re-checked; a failure there would falsify the
/// construction and is reported as [`BridgeError::Falsified`].
pub fn tree_of(tau: &SeparationSystem) -> Result<BuiltTree, BridgeError> {
    let report = tau.validate_tree_set();
    if !report.is_tree_set {
        return Err(BridgeError::NotATreeSet {
            detail: format!(
                "crossing pairs: {:?}, trivial elements: {:?}",
                report.crossing_pairs, report.trivial_elements
            ),
        });
    }
    if !report.is_regular {
        return Err(BridgeError::NotRegular {
            detail: format!("small elements: {:?}", report.small_elements),
        });
    }
    if tau.is_empty() {
        let tree = Tree::new(vec!["{}".to_owned()], vec![])?;
        let mut orientations = BTreeMap::new();
        orientations.insert("{}".to_owned(), tau.make_orientation([])?);
        return Ok(BuiltTree {
            tree,
            orientations,
            edge_seps: vec![],
        });
    }

    let mut orientation_of: BTreeMap<Elem, Orientation> = BTreeMap::new();
    for e in tau.elements() {
        let o = tau.orientation_of(e)?;
        if !o.is_splitting() {
            return Err(BridgeError::Falsified {
                detail: format!(
                    "consistent orientation of finite tree set not splitting at {}",
                    tau.id(e)
                ),
            });
        }
        orientation_of.insert(e, o);
    }
    let mut orientations: BTreeMap<String, Orientation> = BTreeMap::new();
    for o in orientation_of.values() {
        orientations.insert(o.label(tau), o.clone());
    }
    let mut edges = Vec::new();
    let mut edge_seps = Vec::new();
    for s in tau.separations() {
        let (f, b) = tau.orientations(s);
        let lf = orientation_of[&f].label(tau);
        let lb = orientation_of[&b].label(tau);
        if lf == lb {
            return Err(BridgeError::Falsified {
                detail: format!("separation {} yields a loop", tau.id(f)),
            });
        }
        edges.push((lb, lf));
        edge_seps.push(tau.id(f).to_owned());
    }
    let vertices: Vec<String> = orientations.keys().cloned().collect();
    let tree = Tree::new(vertices, edges).map_err(|e| BridgeError::Falsified {
        detail: format!("orientation graph is not a tree: {e}"),
    })?;
    Ok(BuiltTree {
        tree,
        orientations,
        edge_seps,
    })
}

/// The flipping path from one splitting orientation to another: each step
/// inverts the unique maximal element whose inverse belongs to the target.
/// The returned sequence starts at `from` and ends at `to`.
pub fn flip_path(
    tau: &SeparationSystem,
    from: &Orientation,
    to: &Orientation,
) -> Result<Vec<Orientation>, BridgeError> {
    for o in [from, to] {
        if !o.is_splitting() {
            return Err(BridgeError::NotSplitting);
        }
    }
    let mut path = vec![from.clone()];
    let mut current = from.clone();
    for _ in 0..=tau.sep_count() {
        if current.elements() == to.elements() {
            return Ok(path);
        }
        let star = tau.star_of(&current)?;
        let mut flips = star
            .members()
            .iter()
            .copied()
            .filter(|&m| to.contains(tau.inverse(m)));
        let flip = flips.next().ok_or_else(|| BridgeError::Falsified {
            detail: "no maximal element to flip toward the target".into(),
        })?;
        if flips.next().is_some() {
            return Err(BridgeError::Falsified {
                detail: "two maximal elements flip toward the target".into(),
            });
        }
        let next: Vec<Elem> = current
            .elements()
            .iter()
            .map(|&e| if e == flip { tau.inverse(e) } else { e })
            .collect();
        current = tau.make_orientation(next)?;
        path.push(current.clone());
    }
    Err(BridgeError::Falsified {
        detail: "flipping did not terminate within the separation count".into(),
    })
}

/// An order- and involution-preserving bijection between tree sets,
/// re-verified by the generic isomorphism checker.
#[derive(Clone, Debug, Serialize)]
pub struct TreeSetIso {
    pub map: BTreeMap<String, String>,
    pub certified: bool,
}

/// An edge-preserving bijection between trees.
#[derive(Clone, Debug, Serialize)]
pub struct TreeIso {
    pub map: BTreeMap<String, String>,
    pub certified: bool,
}

/// Certifies τ ≅ τ(T(τ)) via s⃗ ↦ (O(s̄), O(s⃗)).
pub fn roundtrip_tau(tau: &SeparationSystem) -> Result<TreeSetIso, BridgeError> {
    let built = tree_of(tau)?;
    let ets = edge_tree_set(&built.tree);
    let mut map = BTreeMap::new();
    for e in tau.elements() {
        let fwd = tau.orientation_of(e)?.label(tau);
        let bwd = tau.orientation_of(tau.inverse(e))?.label(tau);
        map.insert(tau.id(e).to_owned(), oriented_edge_id(&bwd, &fwd));
    }
    let verdict = check_isomorphism(&map, tau, &ets)?;
    Ok(TreeSetIso {
        map,
        certified: verdict.accepted && verdict.inverse_order_preserving,
    })
}

/// Certifies T ≅ T(τ(T)) via v ↦ O((w,v)) for any edge (w,v) at v.
pub fn roundtrip_tree(tree: &Tree) -> Result<TreeIso, BridgeError> {
    let tau = edge_tree_set(tree);
    let built = tree_of(&tau)?;
    let mut map = BTreeMap::new();
    if tree.vertex_count() == 1 {
        map.insert(tree.vertex_id(0).to_owned(), "{}".to_owned());
    } else {
        for v in 0..tree.vertex_count() {
            // All inward edges at v induce the same orientation; take the
            // first and let certification catch any disagreement.
            let (w, _) = tree.neighbors(v).next().expect("tree is connected");
            let toward =
                tau.element(&oriented_edge_id(tree.vertex_id(w), tree.vertex_id(v)))?;
            let o = tau.orientation_of(toward)?;
            map.insert(tree.vertex_id(v).to_owned(), o.label(&tau));
        }
    }
    let mut image: BTreeSet<&String> = BTreeSet::new();
    let mut certified = map.len() == tree.vertex_count()
        && built.tree.vertex_count() == tree.vertex_count()
        && map.values().all(|l| {
            image.insert(l) && built.tree.vertex(l).is_some()
        });
    if certified {
        let mapped = |v: usize| built.tree.vertex(&map[tree.vertex_id(v)]).unwrap();
        certified &= tree
            .edges()
            .iter()
            .all(|&(u, v)| built.tree.edge_between(mapped(u), mapped(v)).is_some())
            && tree.edge_count() == built.tree.edge_count();
    }
    Ok(TreeIso { map, certified })
}

/// A contraction-only minor model: every host vertex lies in exactly one
/// branch set, each branch set induces a connected subtree, and each minor
/// edge maps to the host edge joining its two branch sets.
#[derive(Clone, Debug, Serialize)]
pub struct MinorModel {
    /// Minor vertex id → host vertex ids of its branch set.
    pub branch_sets: BTreeMap<String, BTreeSet<String>>,
    /// Minor edge → host edge, both as sorted vertex id pairs.
    pub edge_map: BTreeMap<(String, String), (String, String)>,
}

fn edge_key(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_owned(), b.to_owned())
    } else {
        (b.to_owned(), a.to_owned())
    }
}

/// Checks the [`MinorModel`] invariants against concrete minor and host trees.
pub fn validate_minor_model(
    model: &MinorModel,
    minor: &Tree,
    host: &Tree,
) -> Result<(), BridgeError> {
    let fail = |detail: String| Err(BridgeError::InvalidModel { detail });
    if model.branch_sets.len() != minor.vertex_count() {
        return fail(format!(
            "{} branch sets for {} minor vertices",
            model.branch_sets.len(),
            minor.vertex_count()
        ));
    }
    let mut covered: BTreeMap<&str, &str> = BTreeMap::new();
    for (m, set) in &model.branch_sets {
        if minor.vertex(m).is_none() {
            return fail(format!("branch set key {m} is not a minor vertex"));
        }
        if set.is_empty() {
            return fail(format!("branch set of {m} is empty"));
        }
        for v in set {
            if host.vertex(v).is_none() {
                return fail(format!("branch set of {m} contains unknown host vertex {v}"));
            }
            if covered.insert(v, m).is_some() {
                return fail(format!("host vertex {v} lies in two branch sets"));
            }
        }
        // Connectivity of the branch set inside the host tree.
        let start = host.vertex(set.iter().next().unwrap()).unwrap();
        let mut seen = BTreeSet::from([start]);
        let mut queue = vec![start];
        while let Some(x) = queue.pop() {
            for (y, _) in host.neighbors(x) {
                if set.contains(host.vertex_id(y)) && seen.insert(y) {
                    queue.push(y);
                }
            }
        }
        if seen.len() != set.len() {
            return fail(format!("branch set of {m} is not connected"));
        }
    }
    if covered.len() != host.vertex_count() {
        return fail("branch sets do not cover every host vertex".into());
    }
    if model.edge_map.len() != minor.edge_count() {
        return fail(format!(
            "{} mapped edges for {} minor edges",
            model.edge_map.len(),
            minor.edge_count()
        ));
    }
    let mut used = BTreeSet::new();
    for ((a, b), (u, v)) in &model.edge_map {
        let (Some(ai), Some(bi)) = (minor.vertex(a), minor.vertex(b)) else {
            return fail(format!("minor edge {a}-{b} has unknown endpoints"));
        };
        if minor.edge_between(ai, bi).is_none() {
            return fail(format!("{a}-{b} is not a minor edge"));
        }
        let (Some(ui), Some(vi)) = (host.vertex(u), host.vertex(v)) else {
            return fail(format!("host edge {u}-{v} has unknown endpoints"));
        };
        if host.edge_between(ui, vi).is_none() {
            return fail(format!("{u}-{v} is not a host edge"));
        }
        if !used.insert(edge_key(u, v)) {
            return fail(format!("host edge {u}-{v} used twice"));
        }
        let bu = covered[u.as_str()];
        let bv = covered[v.as_str()];
        if edge_key(bu, bv) != edge_key(a, b) {
            return fail(format!(
                "host edge {u}-{v} joins branches {bu}/{bv}, expected {a}/{b}"
            ));
        }
    }
    Ok(())
}

/// The minor construction for a sub-tree-set: trees of both sets plus the
/// verified model exhibiting the first tree as a minor of the second.
#[derive(Debug)]
pub struct MinorConstruction {
    pub model: MinorModel,
    pub minor: BuiltTree,
    pub host: BuiltTree,
}

/// Given an order- and involution-compatible injection realizing
/// `sub ⊆ host`, contracts all host-tree edges outside the image and
/// returns the resulting minor model of `tree_of(sub)` in `tree_of(host)`.
pub fn subset_minor(
    sub: &SeparationSystem,
    host: &SeparationSystem,
    inclusion: &BTreeMap<String, String>,
) -> Result<MinorConstruction, BridgeError> {
    // The inclusion must embed sub into host with the induced order.
    let mut fwd: BTreeMap<Elem, Elem> = BTreeMap::new();
    let mut image = BTreeSet::new();
    for e in sub.elements() {
        let id = sub.id(e);
        let img_id = inclusion
            .get(id)
            .ok_or_else(|| BridgeError::NotASubset {
                detail: format!("no image for {id}"),
            })?;
        let img = host.element(img_id).map_err(|_| BridgeError::NotASubset {
            detail: format!("image {img_id} of {id} is not in the host system"),
        })?;
        if !image.insert(img) {
            return Err(BridgeError::NotASubset {
                detail: format!("two elements map to {img_id}"),
            });
        }
        fwd.insert(e, img);
    }
    for e in sub.elements() {
        if host.inverse(fwd[&e]) != fwd[&sub.inverse(e)] {
            return Err(BridgeError::NotASubset {
                detail: format!("inclusion does not commute with involution at {}", sub.id(e)),
            });
        }
        for f in sub.elements() {
            if sub.le(e, f) != host.le(fwd[&e], fwd[&f]) {
                return Err(BridgeError::NotASubset {
                    detail: format!(
                        "order mismatch between {} and {}",
                        sub.id(e),
                        sub.id(f)
                    ),
                });
            }
        }
    }

    let minor = tree_of(sub)?;
    let host_built = tree_of(host)?;

    // Host edges that survive: those of image separations.
    let image_sep_ids: BTreeSet<String> = image
        .iter()
        .map(|&e| {
            let (a, b) = host.orientations(host.separation(e));
            let _ = b;
            host.id(a).to_owned()
        })
        .collect();

    // Union-find over host vertices along contracted edges.
    let hn = host_built.tree.vertex_count();
    let mut parent: Vec<usize> = (0..hn).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    for (i, &(u, v)) in host_built.tree.edges().iter().enumerate() {
        if !image_sep_ids.contains(&host_built.edge_seps[i]) {
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            parent[ru] = rv;
        }
    }

    // Each class corresponds to the minor vertex obtained by restricting
    // any of its orientations through the inclusion.
    let mut class_vertex: BTreeMap<usize, String> = BTreeMap::new();
    let mut branch_sets: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for v in 0..hn {
        let o2 = &host_built.orientations[host_built.tree.vertex_id(v)];
        let restricted: Vec<Elem> = sub
            .elements()
            .filter(|&e| o2.contains(fwd[&e]))
            .collect();
        let o1 = sub.make_orientation(restricted).map_err(|e| {
            BridgeError::Falsified {
                detail: format!("restriction of a host orientation is not total: {e}"),
            }
        })?;
        let label = o1.label(sub);
        if minor.tree.vertex(&label).is_none() {
            return Err(BridgeError::Falsified {
                detail: format!("restricted orientation {label} is not a minor vertex"),
            });
        }
        let class = find(&mut parent, v);
        if let Some(prev) = class_vertex.get(&class) {
            if *prev != label {
                return Err(BridgeError::Falsified {
                    detail: "one contraction class restricts to two orientations".into(),
                });
            }
        } else {
            class_vertex.insert(class, label.clone());
        }
        branch_sets
            .entry(label)
            .or_default()
            .insert(host_built.tree.vertex_id(v).to_owned());
    }
    if branch_sets.len() != minor.tree.vertex_count() {
        return Err(BridgeError::Falsified {
            detail: format!(
                "{} contraction classes for {} minor vertices",
                branch_sets.len(),
                minor.tree.vertex_count()
            ),
        });
    }

    let mut edge_map = BTreeMap::new();
    for (i, sep_id) in minor.edge_seps.iter().enumerate() {
        let (a, b) = minor.tree.edges()[i];
        let e1 = sub.element(sep_id)?;
        let host_sep_id = {
            let img = fwd[&e1];
            let (can, _) = host.orientations(host.separation(img));
            host.id(can).to_owned()
        };
        let j = host_built
            .edge_seps
            .iter()
            .position(|s| *s == host_sep_id)
            .ok_or_else(|| BridgeError::Falsified {
                detail: format!("no host edge for separation {host_sep_id}"),
            })?;
        let (u, v) = host_built.tree.edges()[j];
        edge_map.insert(
            edge_key(minor.tree.vertex_id(a), minor.tree.vertex_id(b)),
            edge_key(host_built.tree.vertex_id(u), host_built.tree.vertex_id(v)),
        );
    }

    let model = MinorModel {
        branch_sets,
        edge_map,
    };
    validate_minor_model(&model, &minor.tree, &host_built.tree)?;
    Ok(MinorConstruction {
        model,
        minor,
        host: host_built,
    })
}

/// From a contraction-only minor model of `minor` in `host`, recovers the
/// injection of edge tree sets and certifies it as an isomorphism onto its
/// image.
pub fn minor_subset(
    model: &MinorModel,
    minor: &Tree,
    host: &Tree,
) -> Result<TreeSetIso, BridgeError> {
    validate_minor_model(model, minor, host)?;
    let ets_minor = edge_tree_set(minor);
    let ets_host = edge_tree_set(host);
    let mut in_branch: BTreeMap<&str, &str> = BTreeMap::new();
    for (m, set) in &model.branch_sets {
        for v in set {
            in_branch.insert(v, m);
        }
    }
    let mut map = BTreeMap::new();
    for &(a, b) in minor.edges() {
        let (aid, bid) = (minor.vertex_id(a), minor.vertex_id(b));
        let (u, v) = &model.edge_map[&edge_key(aid, bid)];
        let (hu, hv) = if in_branch[u.as_str()] == aid {
            (u, v)
        } else {
            (v, u)
        };
        map.insert(oriented_edge_id(aid, bid), oriented_edge_id(hu, hv));
        map.insert(oriented_edge_id(bid, aid), oriented_edge_id(hv, hu));
    }
    let image: Vec<String> = map.values().cloned().collect();
    let sub_host = ets_host.restrict(&image)?;
    let verdict = check_isomorphism(&map, &ets_minor, &sub_host)?;
    Ok(TreeSetIso {
        map,
        certified: verdict.accepted && verdict.inverse_order_preserving,
    })
}
