//! Acceptance suite: one test per criterion, each printing a pass line.
//!
//! The corpus is every labeled tree with up to five edges plus two hundred
//! seeded random trees with up to ten edges, and a fixed suite of twenty-two
//! chain-tree presentations covering all label kinds and skeleton shapes up
//! to five edges.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use treesets::{
    build_tls, contract, edge_tree_set, flip_path, minor_subset, roundtrip_tau, roundtrip_tree,
    subset_minor, tree_of, validate_minor_model, ChainTreePresentation, ContractRegion, Dir,
    ElemIndex, LabelKind, Location, PresentedElement, RegionEnd, SeparationSystem, TameWitnessKind,
    TlsPoint, Tree, VertexFamily,
};

fn tree_corpus() -> Vec<Tree> {
    let mut trees = common::exhaustive_trees(5);
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    for i in 0..200 {
        let n = 2 + (i % 10);
        trees.push(common::random_tree(&mut rng, n));
    }
    trees
}

#[test]
fn criterion_1_roundtrip_tree_fidelity() {
    let start = Instant::now();
    let trees = tree_corpus();
    for t in &trees {
        let iso = roundtrip_tree(t).unwrap();
        assert!(iso.certified, "tree roundtrip not certified for {t:?}");
        let built = tree_of(&edge_tree_set(t)).unwrap();
        assert_eq!(
            built.tree.vertex_count(),
            t.vertex_count(),
            "vertex count mismatch for {t:?}"
        );
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < 30,
        "criterion 1 exceeded its 30 s budget: {elapsed:?}"
    );
    println!(
        "[criterion 1] PASS: {} trees round-tripped with certified isomorphisms in {elapsed:?}",
        trees.len()
    );
}

#[test]
fn criterion_2_roundtrip_tree_set_fidelity() {
    let trees = tree_corpus();
    let mut count = 0;
    for (i, t) in trees.iter().enumerate() {
        let tau = edge_tree_set(t);
        let tau = if i % 5 == 0 {
            common::relabel(&tau).0
        } else {
            tau
        };
        let iso = roundtrip_tau(&tau).unwrap();
        assert!(iso.certified, "tree set roundtrip not certified for {t:?}");
        count += 1;
    }
    println!("[criterion 2] PASS: {count} edge tree sets certified isomorphic to their reconstructions");
}

/// Tree edge tree sets (all nested) plus a few non-nested systems.
fn extension_corpus() -> Vec<SeparationSystem> {
    let mut systems: Vec<SeparationSystem> =
        tree_corpus().iter().map(edge_tree_set).collect();
    systems.retain(|s| s.sep_count() <= 10);
    let pairs = |ids: &[&str]| -> Vec<(String, String)> {
        ids.iter()
            .map(|id| (id.to_string(), format!("{id}*")))
            .collect()
    };
    // Antichain: every pair crosses.
    systems.push(SeparationSystem::build(&pairs(&["p", "q", "r"]), &[]).unwrap());
    // One comparable pair plus a crossing third.
    systems.push(
        SeparationSystem::build(
            &pairs(&["p", "q", "r"]),
            &[("p".into(), "q".into())],
        )
        .unwrap(),
    );
    systems
}

#[test]
fn criterion_3_extension_lemma_oracle_equivalence() {
    let systems = extension_corpus();
    let mut checks = 0usize;
    for sys in &systems {
        let all = sys.enumerate_orientations().unwrap();
        let consistent: Vec<Vec<String>> = all.iter().map(|o| o.ids(sys)).collect();
        let nested = sys.validate_tree_set().is_nested;
        let empty = sys.partial_orientation([]).unwrap();

        let check_extension =
            |p: &treesets::PartialOrientation, pin: treesets::Elem| {
                let ext = sys.extend_orientation(p, Some(pin)).unwrap();
                let o = &ext.orientation;
                assert!(
                    consistent.contains(&o.ids(sys)),
                    "extension is not among the enumerated consistent orientations"
                );
                for &e in p.elements() {
                    assert!(o.contains(e), "extension does not contain the input");
                }
                for e in sys.elements() {
                    assert!(
                        !(o.contains(e) && sys.lt(pin, e)),
                        "pin is not maximal in the extension"
                    );
                }
                if nested {
                    assert!(ext.unique);
                    let with_pin_maximal: Vec<&treesets::Orientation> = all
                        .iter()
                        .filter(|cand| {
                            cand.contains(pin)
                                && sys.elements().all(|e| !(cand.contains(e) && sys.lt(pin, e)))
                        })
                        .collect();
                    assert_eq!(
                        with_pin_maximal.len(),
                        1,
                        "nested system must have a unique orientation with the pin maximal"
                    );
                    assert_eq!(with_pin_maximal[0].ids(sys), o.ids(sys));
                }
            };

        for pin in sys.elements() {
            if sys.is_trivial(pin) || sys.is_co_trivial(pin) {
                continue;
            }
            check_extension(&empty, pin);
            checks += 1;
        }
        // Richer inputs: subsample each enumerated orientation and pin one
        // of the sample's maximal elements.
        for o in &all {
            let sample: Vec<treesets::Elem> =
                o.elements().iter().copied().step_by(2).collect();
            if sample.is_empty() {
                continue;
            }
            let p = sys.partial_orientation(sample.iter().copied()).unwrap();
            let pin = sample
                .iter()
                .copied()
                .find(|&c| sample.iter().all(|&d| !sys.lt(c, d)))
                .unwrap();
            if sys.is_trivial(pin) {
                continue;
            }
            check_extension(&p, pin);
            checks += 1;
        }
    }
    println!(
        "[criterion 3] PASS: {checks} extensions matched the brute-force oracle over {} systems",
        systems.len()
    );
}

#[test]
fn criterion_4_star_and_flipping_properties() {
    let trees = tree_corpus();
    let mut star_checks = 0usize;
    let mut pair_checks = 0usize;
    let mut flip_checks = 0usize;
    for t in &trees {
        let tau = edge_tree_set(t);
        if tau.sep_count() > 12 {
            continue;
        }
        let orientations = tau.enumerate_orientations().unwrap();
        let built = tree_of(&tau).unwrap();
        for o in &orientations {
            let star = tau.star_of(o).unwrap();
            assert!(
                tau.is_star(star.members()),
                "maximal elements do not form a star"
            );
            assert!(o.is_splitting(), "finite consistent orientation must split");
            star_checks += 1;
        }
        for o1 in &orientations {
            for o2 in &orientations {
                if o1.elements() == o2.elements() {
                    continue;
                }
                let sigma1 = tau.star_of(o1).unwrap();
                let flips = sigma1
                    .members()
                    .iter()
                    .filter(|&&m| o2.contains(tau.inverse(m)))
                    .count();
                assert_eq!(
                    flips, 1,
                    "exactly one member of a splitting star may invert toward another"
                );
                pair_checks += 1;

                let path = flip_path(&tau, o1, o2).unwrap();
                let v1 = built.vertex_of(&tau, o1).unwrap();
                let v2 = built.vertex_of(&tau, o2).unwrap();
                assert_eq!(
                    path.len() - 1,
                    built.tree.distance(v1, v2),
                    "flip path length differs from tree distance"
                );
                flip_checks += 1;
            }
        }
    }
    println!(
        "[criterion 4] PASS: {star_checks} stars, {pair_checks} star pairs, {flip_checks} flip paths verified"
    );
}

#[test]
fn criterion_5_omega_plus_one_example() {
    let pres = common::presentation(
        &["u", "v"],
        &[("u", "v", LabelKind::OmegaPlusOne, "u")],
    );
    let report = pres.tame_check();
    assert!(!report.tame);
    let witness = report.witness.expect("non-tame needs a witness");
    assert_eq!(witness.kind, TameWitnessKind::OmegaPlusOneLabel);
    assert!(pres.verify_tame_witness(&witness));
    // Replay the witness on truncations: an ascending chain bounded by the
    // top at every depth.
    for depth in 1..=8u32 {
        let sys = pres.truncate(depth);
        let top = sys.element("u-v[top]+").unwrap();
        let mut prev: Option<treesets::Elem> = None;
        for i in 0..depth {
            let e = sys.element(&format!("u-v[{i}]+")).unwrap();
            if let Some(p) = prev {
                assert!(sys.lt(p, e));
            }
            assert!(sys.lt(e, top));
            prev = Some(e);
        }
    }

    let t_bwd = pres.parse_element("u-v[top]-").unwrap();
    assert!(!pres.splitting_status(&t_bwd).unwrap());
    assert!(pres
        .splitting_status(&pres.parse_element("u-v[top]+").unwrap())
        .unwrap());
    for n in 0..=50u32 {
        for dir in [Dir::Forward, Dir::Backward] {
            let x = pres.element("u-v", ElemIndex::At(n), dir).unwrap();
            assert!(pres.splitting_status(&x).unwrap());
        }
    }

    let tls = build_tls(&pres);
    assert_eq!(tls.limit_edges.len(), 1);
    let le = &tls.limit_edges[0];
    assert_eq!(le.element, "u-v[top]+");
    assert_eq!(
        le.endpoints,
        (
            Location::OmegaCut { edge: "u-v".into() },
            Location::Vertex("v".into())
        )
    );
    println!(
        "[criterion 5] PASS: \u{3c9}+1 presentation reproduced (non-tame witness, one non-splitting element, one limit edge cut-\u{3c9}/cut-\u{22a4})"
    );
}

/// Sample descriptors: skeleton vertices, interior cuts up to `cut_cap`,
/// and limit cuts.
fn sample_locations(tls: &treesets::PresentedTls, cut_cap: u32) -> Vec<Location> {
    let mut out = Vec::new();
    for fam in &tls.vertices {
        match fam {
            VertexFamily::Single(loc) => out.push(loc.clone()),
            VertexFamily::CutRange { edge, from, to } => {
                let hi = to.unwrap_or(*from + cut_cap - 1).min(*from + cut_cap - 1);
                for j in *from..=hi {
                    out.push(Location::Cut {
                        edge: edge.clone(),
                        after: j,
                    });
                }
            }
        }
    }
    out
}

#[test]
fn criterion_6_truncation_coherence() {
    let start = Instant::now();
    let suite = common::presentation_suite();
    assert!(suite.len() >= 20);
    let mut order_pairs = 0usize;
    let mut orientation_checks = 0usize;
    let mut enumeration_matches = 0usize;
    let mut realize_checks = 0usize;
    let mut contract_checks = 0usize;

    for pres in &suite {
        let tame = pres.tame_check();
        let tls = build_tls(pres);
        for depth in 1..=8u32 {
            let sys = pres.truncate(depth);
            let report = sys.validate_tree_set();
            assert!(report.is_regular, "truncation must be a regular tree set");

            // Order agreement: presented compare vs the finite closure.
            let mut elements = Vec::new();
            for edge in 0..pres.edge_count() {
                for index in pres.truncated_indices(edge, depth) {
                    for dir in [Dir::Forward, Dir::Backward] {
                        elements.push(PresentedElement { edge, index, dir });
                    }
                }
            }
            for x in &elements {
                for y in &elements {
                    let presented = pres.le(x, y).unwrap();
                    let finite = sys.le(
                        sys.element(&pres.element_id(x)).unwrap(),
                        sys.element(&pres.element_id(y)).unwrap(),
                    );
                    assert_eq!(
                        presented,
                        finite,
                        "order mismatch at {} vs {} (depth {depth})",
                        pres.element_id(x),
                        pres.element_id(y)
                    );
                    order_pairs += 1;
                }
            }

            // Every descriptor restricts to a consistent orientation whose
            // maximal elements form a star.
            let locations = sample_locations(&tls, depth + 2);
            let mut seen_orientations: BTreeSet<Vec<String>> = BTreeSet::new();
            for loc in &locations {
                let ids = tls.orientation_ids_at(loc, depth);
                let elems: Vec<treesets::Elem> =
                    ids.iter().map(|id| sys.element(id).unwrap()).collect();
                let o = sys.make_orientation(elems).unwrap();
                assert!(o.is_consistent(), "descriptor {loc} restricts inconsistently");
                let star = sys.star_of(&o).unwrap();
                assert!(sys.is_star(star.members()));
                seen_orientations.insert(o.ids(&sys));
                orientation_checks += 1;
            }
            // On small systems the sampled descriptors hit every consistent
            // orientation of the truncation.
            if sys.sep_count() <= 10 {
                let enumerated: BTreeSet<Vec<String>> = sys
                    .enumerate_orientations()
                    .unwrap()
                    .iter()
                    .map(|o| o.ids(&sys))
                    .collect();
                assert_eq!(
                    seen_orientations, enumerated,
                    "descriptor orientations differ from the enumerated ones at depth {depth}"
                );
                enumeration_matches += 1;
            }

            // The tameness witness restricts to a bounded ascending chain.
            if let Some(w) = &tame.witness {
                let chain_edge = pres.edge_by_id(&w.edges[0]).unwrap();
                let bound = match w.kind {
                    TameWitnessKind::OmegaPlusOneLabel => PresentedElement {
                        edge: chain_edge,
                        index: ElemIndex::Top,
                        dir: Dir::Forward,
                    },
                    TameWitnessKind::OmegaIntoBranch => {
                        let cont = pres.edge_by_id(&w.edges[1]).unwrap();
                        let head = pres.edge(chain_edge).far;
                        PresentedElement {
                            edge: cont,
                            index: ElemIndex::At(0),
                            dir: if pres.edge(cont).start == head {
                                Dir::Forward
                            } else {
                                Dir::Backward
                            },
                        }
                    }
                };
                let bound = sys.element(&pres.element_id(&bound)).unwrap();
                let mut prev: Option<treesets::Elem> = None;
                for i in 0..depth {
                    let c = PresentedElement {
                        edge: chain_edge,
                        index: ElemIndex::At(i),
                        dir: Dir::Forward,
                    };
                    let c = sys.element(&pres.element_id(&c)).unwrap();
                    if let Some(p) = prev {
                        assert!(sys.lt(p, c), "witness chain not ascending");
                    }
                    assert!(sys.lt(c, bound), "witness chain not bounded");
                    prev = Some(c);
                }
            }

            // Realization agrees with the presentation on truncations, via
            // the per-position map onto the subdivided edges.
            if tame.tame {
                let realized = pres.realize_tame_tree().unwrap();
                let realized_sys = realized.truncate(depth);
                let mut map = BTreeMap::new();
                let mut offset = 0usize;
                for edge in 0..pres.edge_count() {
                    match pres.edge(edge).kind {
                        LabelKind::Finite(k) if k >= 2 => {
                            for i in 0..k.min(depth) {
                                for dir in [Dir::Forward, Dir::Backward] {
                                    let from = PresentedElement {
                                        edge,
                                        index: ElemIndex::At(i),
                                        dir,
                                    };
                                    let to = PresentedElement {
                                        edge: offset + i as usize,
                                        index: ElemIndex::At(0),
                                        dir,
                                    };
                                    map.insert(
                                        pres.element_id(&from),
                                        realized.element_id(&to),
                                    );
                                }
                            }
                            offset += k as usize;
                        }
                        _ => {
                            for index in pres.truncated_indices(edge, depth) {
                                for dir in [Dir::Forward, Dir::Backward] {
                                    let from = PresentedElement { edge, index, dir };
                                    let to = PresentedElement {
                                        edge: offset,
                                        index,
                                        dir,
                                    };
                                    map.insert(
                                        pres.element_id(&from),
                                        realized.element_id(&to),
                                    );
                                }
                            }
                            offset += 1;
                        }
                    }
                }
                let image: Vec<String> = map.values().cloned().collect();
                let restricted = realized_sys.restrict(&image).unwrap();
                let verdict =
                    treesets::check_isomorphism(&map, &sys, &restricted).unwrap();
                assert!(
                    verdict.accepted && verdict.inverse_order_preserving,
                    "realized tree disagrees with its presentation at depth {depth}"
                );
                realize_checks += 1;
            }

            // Whole-edge contraction commutes with truncation.
            if pres.edge_count() >= 2 {
                for drop_edge in 0..pres.edge_count() {
                    let region =
                        ContractRegion::whole(pres, &pres.edge(drop_edge).id).unwrap();
                    let contracted = contract(pres, &[region]).unwrap();
                    let survivors: Vec<usize> =
                        (0..pres.edge_count()).filter(|&j| j != drop_edge).collect();
                    let mut map = BTreeMap::new();
                    for (new_idx, &old_idx) in survivors.iter().enumerate() {
                        for index in pres.truncated_indices(old_idx, depth) {
                            for dir in [Dir::Forward, Dir::Backward] {
                                let from = PresentedElement {
                                    edge: old_idx,
                                    index,
                                    dir,
                                };
                                let to = PresentedElement {
                                    edge: new_idx,
                                    index,
                                    dir,
                                };
                                map.insert(
                                    pres.element_id(&from),
                                    contracted.element_id(&to),
                                );
                            }
                        }
                    }
                    let kept: Vec<String> = map.keys().cloned().collect();
                    let finite_side = sys.restrict(&kept).unwrap();
                    let contracted_side = contracted.truncate(depth);
                    let verdict =
                        treesets::check_isomorphism(&map, &finite_side, &contracted_side)
                            .unwrap();
                    assert!(
                        verdict.accepted && verdict.inverse_order_preserving,
                        "contraction does not commute with truncation at depth {depth}"
                    );
                    contract_checks += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < 120,
        "criterion 6 exceeded its 2 min budget: {elapsed:?}"
    );
    println!(
        "[criterion 6] PASS: {} presentations, depths 1..=8: {order_pairs} order pairs, \
         {orientation_checks} descriptor orientations ({enumeration_matches} full enumeration matches), \
         {realize_checks} realizations, {contract_checks} contractions in {elapsed:?}",
        suite.len()
    );
}

fn random_connected_subtree<R: Rng>(rng: &mut R, tree: &Tree, edges_wanted: usize) -> Tree {
    let start = rng.gen_range(0..tree.vertex_count());
    let mut vertices = BTreeSet::from([start]);
    let mut chosen: Vec<usize> = Vec::new();
    while chosen.len() < edges_wanted {
        let frontier: Vec<usize> = (0..tree.edge_count())
            .filter(|&e| {
                let (u, v) = tree.edges()[e];
                vertices.contains(&u) != vertices.contains(&v)
            })
            .collect();
        if frontier.is_empty() {
            break;
        }
        let e = frontier[rng.gen_range(0..frontier.len())];
        let (u, v) = tree.edges()[e];
        vertices.insert(u);
        vertices.insert(v);
        chosen.push(e);
    }
    chosen.sort();
    let vertex_ids: Vec<String> = vertices
        .iter()
        .map(|&v| tree.vertex_id(v).to_owned())
        .collect();
    let edge_ids: Vec<(String, String)> = chosen
        .iter()
        .map(|&e| {
            let (u, v) = tree.edges()[e];
            (tree.vertex_id(u).to_owned(), tree.vertex_id(v).to_owned())
        })
        .collect();
    Tree::new(vertex_ids, edge_ids).expect("grown subtree is connected")
}

#[test]
fn criterion_7_minor_theorems_at_desk_scale() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    let mut pairs = 0usize;
    while pairs < 50 {
        let host_tree = common::random_tree(&mut rng, rng.gen_range(3..=9));
        let want = rng.gen_range(0..=host_tree.edge_count());
        let sub_tree = random_connected_subtree(&mut rng, &host_tree, want);
        let tau_host = edge_tree_set(&host_tree);
        let tau_sub = edge_tree_set(&sub_tree);
        let inclusion: BTreeMap<String, String> = tau_sub
            .elements()
            .map(|e| (tau_sub.id(e).to_owned(), tau_sub.id(e).to_owned()))
            .collect();
        let built = subset_minor(&tau_sub, &tau_host, &inclusion).unwrap();
        validate_minor_model(&built.model, &built.minor.tree, &built.host.tree).unwrap();
        let iso = minor_subset(&built.model, &built.minor.tree, &built.host.tree).unwrap();
        assert!(iso.certified, "minor injection not certified");
        assert_eq!(iso.map.len(), tau_sub.len());
        pairs += 1;
    }

    // Contracting every At position of the ω+1 example leaves the single
    // finite edge carried by its top element.
    let pres = common::presentation(
        &["u", "v"],
        &[("u", "v", LabelKind::OmegaPlusOne, "u")],
    );
    let collapsed = contract(
        &pres,
        &[ContractRegion {
            edge: "u-v".into(),
            from: 0,
            to: RegionEnd::LastAt,
        }],
    )
    .unwrap();
    assert_eq!(collapsed.skeleton().vertex_count(), 2);
    assert_eq!(collapsed.edge_count(), 1);
    assert_eq!(collapsed.edges()[0].kind, LabelKind::Finite(1));
    println!("[criterion 7] PASS: {pairs} sub-tree-set pairs yielded valid minor models and certified injections; \u{3c9}+1 contraction collapses to one finite edge");
}

#[test]
fn criterion_8_subbase_disconnection() {
    let suite = common::presentation_suite();
    let half = Ratio::new(1, 2);
    let mut points_checked = 0usize;
    let mut edges_checked = 0usize;
    for pres in &suite {
        let tls = build_tls(pres);
        let locations = sample_locations(&tls, 4);
        // Sampled separations: the first few positions of each edge plus
        // the top where present.
        let mut seps: Vec<PresentedElement> = Vec::new();
        for edge in 0..pres.edge_count() {
            for index in pres.truncated_indices(edge, 4) {
                seps.push(PresentedElement {
                    edge,
                    index,
                    dir: Dir::Forward,
                });
            }
        }
        for e in &seps {
            edges_checked += 1;
            let fwd = *e;
            let bwd = e.inverse();
            for loc in &locations {
                let point = TlsPoint::At(loc.clone());
                let in_fwd = tls.subbase_member(&point, &fwd, half).unwrap();
                let in_bwd = tls.subbase_member(&point, &bwd, half).unwrap();
                assert!(
                    in_fwd ^ in_bwd,
                    "descriptor {loc} not in exactly one side of {}",
                    pres.element_id(&fwd)
                );
                points_checked += 1;
            }
            for s in &seps {
                for coord in [Ratio::new(1, 4), half, Ratio::new(3, 4)] {
                    let point = TlsPoint::Inner {
                        edge: pres.edge(s.edge).id.clone(),
                        index: s.index,
                        coord,
                    };
                    let in_fwd = tls.subbase_member(&point, &fwd, half).unwrap();
                    let in_bwd = tls.subbase_member(&point, &bwd, half).unwrap();
                    if s.edge == e.edge && s.index == e.index && coord == half {
                        assert!(
                            !in_fwd && !in_bwd,
                            "the point (r, e) itself must lie in neither side"
                        );
                    } else {
                        assert!(
                            in_fwd ^ in_bwd,
                            "inner point not in exactly one side of {}",
                            pres.element_id(&fwd)
                        );
                    }
                    points_checked += 1;
                }
            }
        }
    }
    println!(
        "[criterion 8] PASS: {points_checked} points partitioned by S(e\u{20d7},\u{00bd})/S(\u{0113},\u{00bd}) over {edges_checked} sampled edges"
    );
}
