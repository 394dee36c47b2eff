//! Shared corpus builders for the integration suites.

use std::collections::BTreeMap;

use rand::Rng;
use treesets::{ChainTreePresentation, EdgeLabel, LabelKind, SeparationSystem, Tree};

/// Decodes a Prüfer sequence over 0..n into the edge list of a labeled tree.
pub fn prufer_decode(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    assert_eq!(seq.len() + 2, n);
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut used = vec![false; n];
    for &s in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1 && !used[v]).unwrap();
        edges.push((leaf, s));
        used[leaf] = true;
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let mut last = (0..n).filter(|&v| degree[v] == 1 && !used[v]);
    let a = last.next().unwrap();
    let b = last.next().unwrap();
    edges.push((a, b));
    edges
}

pub fn tree_from_edges(n: usize, edges: &[(usize, usize)]) -> Tree {
    let vertices: Vec<String> = (0..n).map(|v| format!("v{v}")).collect();
    let edge_ids = edges
        .iter()
        .map(|&(a, b)| (format!("v{a}"), format!("v{b}")))
        .collect();
    Tree::new(vertices, edge_ids).expect("decoded tree is valid")
}

/// Every labeled tree with at most `max_edges` edges (so at most
/// `max_edges + 1` vertices), enumerated via Prüfer sequences.
pub fn exhaustive_trees(max_edges: usize) -> Vec<Tree> {
    let mut out = vec![tree_from_edges(1, &[])];
    for n in 2..=(max_edges + 1) {
        if n == 2 {
            out.push(tree_from_edges(2, &[(0, 1)]));
            continue;
        }
        let len = n - 2;
        let mut seq = vec![0usize; len];
        loop {
            out.push(tree_from_edges(n, &prufer_decode(&seq, n)));
            let mut i = 0;
            loop {
                if i == len {
                    break;
                }
                seq[i] += 1;
                if seq[i] < n {
                    break;
                }
                seq[i] = 0;
                i += 1;
            }
            if i == len {
                break;
            }
        }
    }
    out
}

pub fn random_tree<R: Rng>(rng: &mut R, n: usize) -> Tree {
    if n == 1 {
        return tree_from_edges(1, &[]);
    }
    if n == 2 {
        return tree_from_edges(2, &[(0, 1)]);
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    tree_from_edges(n, &prufer_decode(&seq, n))
}

/// Renames every element of a system to `eK` / `eK*`, returning the new
/// system and the old-to-new id map.
pub fn relabel(sys: &SeparationSystem) -> (SeparationSystem, BTreeMap<String, String>) {
    let mut map = BTreeMap::new();
    let mut elements = Vec::new();
    for (k, s) in sys.separations().enumerate() {
        let (a, b) = sys.orientations(s);
        map.insert(sys.id(a).to_owned(), format!("e{k}"));
        map.insert(sys.id(b).to_owned(), format!("e{k}*"));
        elements.push((format!("e{k}"), format!("e{k}*")));
    }
    let mut relations = Vec::new();
    for a in sys.elements() {
        for b in sys.elements() {
            if sys.lt(a, b) {
                relations.push((map[sys.id(a)].clone(), map[sys.id(b)].clone()));
            }
        }
    }
    (
        SeparationSystem::build(&elements, &relations).expect("relabeling preserves the order"),
        map,
    )
}

/// Shorthand presentation builder; edges are (u, v, kind, start).
pub fn presentation(
    vertices: &[&str],
    edges: &[(&str, &str, LabelKind, &str)],
) -> ChainTreePresentation {
    let tree = Tree::new(
        vertices.iter().map(|s| s.to_string()).collect(),
        edges
            .iter()
            .map(|(u, v, _, _)| (u.to_string(), v.to_string()))
            .collect(),
    )
    .expect("valid skeleton");
    let mut labels = BTreeMap::new();
    for (u, v, kind, start) in edges {
        labels.insert(
            format!("{u}-{v}"),
            EdgeLabel {
                kind: *kind,
                start: start.to_string(),
            },
        );
    }
    ChainTreePresentation::new(tree, &labels).expect("valid presentation")
}

/// The suite of presentations used by the truncation and sub-base criteria:
/// at least twenty, covering every label kind and skeleton shapes up to
/// five edges.
pub fn presentation_suite() -> Vec<ChainTreePresentation> {
    use LabelKind::*;
    let f = Finite;
    vec![
        // Single-edge presentations, one per label kind.
        presentation(&["u", "v"], &[("u", "v", OmegaPlusOne, "u")]),
        presentation(&["u", "v"], &[("u", "v", Omega, "u")]),
        presentation(&["u", "v"], &[("u", "v", f(1), "u")]),
        presentation(&["u", "v"], &[("u", "v", f(3), "u")]),
        presentation(&["u", "v"], &[("u", "v", f(7), "v")]),
        // Two-edge paths.
        presentation(
            &["a", "b", "c"],
            &[("a", "b", f(2), "a"), ("b", "c", f(2), "b")],
        ),
        // Tame ray out of a path: the ω edge ends in a leaf.
        presentation(
            &["a", "b", "c"],
            &[("a", "b", f(1), "a"), ("b", "c", Omega, "b")],
        ),
        // Ray into a branch: not tame.
        presentation(
            &["a", "b", "c"],
            &[("a", "b", Omega, "a"), ("b", "c", f(1), "b")],
        ),
        presentation(
            &["a", "b", "c"],
            &[("a", "b", OmegaPlusOne, "a"), ("b", "c", f(2), "b")],
        ),
        presentation(
            &["a", "b", "c", "d"],
            &[
                ("a", "b", f(2), "a"),
                ("b", "c", f(1), "b"),
                ("c", "d", Omega, "c"),
            ],
        ),
        // Stars.
        presentation(
            &["c", "x", "y", "z"],
            &[
                ("c", "x", f(1), "c"),
                ("c", "y", f(1), "c"),
                ("c", "z", f(1), "c"),
            ],
        ),
        presentation(
            &["c", "x", "y", "z"],
            &[
                ("c", "x", f(2), "x"),
                ("c", "y", f(2), "c"),
                ("c", "z", f(3), "c"),
            ],
        ),
        // All rays point out of the centre: tame.
        presentation(
            &["c", "x", "y", "z"],
            &[
                ("c", "x", Omega, "c"),
                ("c", "y", Omega, "c"),
                ("c", "z", f(2), "c"),
            ],
        ),
        // One ray points into the centre: not tame.
        presentation(
            &["c", "x", "y", "z"],
            &[
                ("c", "x", Omega, "x"),
                ("c", "y", f(1), "c"),
                ("c", "z", f(1), "c"),
            ],
        ),
        presentation(
            &["c", "x", "y", "z"],
            &[
                ("c", "x", OmegaPlusOne, "c"),
                ("c", "y", f(2), "c"),
                ("c", "z", Omega, "c"),
            ],
        ),
        // Longer paths.
        presentation(
            &["a", "b", "c", "d", "e", "g"],
            &[
                ("a", "b", f(1), "a"),
                ("b", "c", f(1), "b"),
                ("c", "d", f(1), "c"),
                ("d", "e", f(1), "d"),
                ("e", "g", f(1), "e"),
            ],
        ),
        presentation(
            &["a", "b", "c", "d", "e", "g"],
            &[
                ("a", "b", f(1), "a"),
                ("b", "c", f(2), "b"),
                ("c", "d", f(3), "c"),
                ("d", "e", f(4), "d"),
                ("e", "g", f(5), "e"),
            ],
        ),
        presentation(
            &["a", "b", "c", "d", "e"],
            &[
                ("a", "b", f(1), "a"),
                ("b", "c", OmegaPlusOne, "b"),
                ("c", "d", f(2), "c"),
                ("d", "e", f(1), "d"),
            ],
        ),
        // Spider with mixed labels.
        presentation(
            &["c", "p", "q", "x", "y"],
            &[
                ("c", "p", f(2), "c"),
                ("p", "x", Omega, "p"),
                ("c", "q", f(1), "c"),
                ("q", "y", OmegaPlusOne, "q"),
            ],
        ),
        // Broom: path body with ray tips.
        presentation(
            &["a", "b", "c", "x", "y"],
            &[
                ("a", "b", f(3), "a"),
                ("b", "c", f(1), "b"),
                ("c", "x", Omega, "c"),
                ("c", "y", Omega, "c"),
            ],
        ),
        // Two ω+1 edges.
        presentation(
            &["u", "v", "w"],
            &[("u", "v", OmegaPlusOne, "u"), ("v", "w", OmegaPlusOne, "v")],
        ),
        // ω+1 next to a finite chain, read backward.
        presentation(
            &["u", "v", "w"],
            &[("u", "v", f(2), "v"), ("v", "w", OmegaPlusOne, "w")],
        ),
    ]
}
