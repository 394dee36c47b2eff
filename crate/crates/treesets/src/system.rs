//! Separation systems: finite posets with an order-reversing involution.
//!
//! Elements are *oriented separations*; the involution pairs each element
//! with its inverse, and the pair is the underlying *unoriented separation*.
//! The order is stored as its full reflexive-transitive closure so that all
//! predicates are simple lookups.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// Handle to an oriented separation of a [`SeparationSystem`].
///
/// Only valid for the system that produced it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub(crate) usize);

/// Handle to an unoriented separation (an involution pair).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sep(pub(crate) usize);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SystemError {
    #[error("not a partial order: {x} \u{2264} {y} and {y} \u{2264} {x} for distinct elements")]
    NotAPartialOrder { x: String, y: String },
    #[error("involution clash at {id}: element paired with itself or paired twice")]
    InvolutionClash { id: String },
    #[error("unknown element {id}")]
    UnknownElement { id: String },
    #[error("mapping is not a bijection: {detail}")]
    NotBijective { detail: String },
    #[error("mapping does not commute with the involution at {id}")]
    InvolutionNotPreserved { id: String },
    #[error("mapping is not order-preserving: {x} \u{2264} {y} but images are not comparable that way")]
    OrderNotPreserved { x: String, y: String },
    #[error("restriction is not closed under the involution: {id} without its inverse")]
    NotInvolutionClosed { id: String },
}

/// Smallness, triviality and regularity of one oriented separation.
///
/// `trivial` and `co_trivial` carry the id of a witnessing orientation of
/// the witness separation when they hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub small: bool,
    pub co_small: bool,
    pub trivial: Option<String>,
    pub co_trivial: Option<String>,
    pub regular: bool,
}

/// Result of [`SeparationSystem::validate_tree_set`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeSetReport {
    pub is_nested: bool,
    pub is_tree_set: bool,
    pub is_regular: bool,
    /// Crossing pairs, one oriented id per separation.
    pub crossing_pairs: Vec<(String, String)>,
    /// Trivial elements with their witnesses.
    pub trivial_elements: Vec<(String, String)>,
    /// Small elements.
    pub small_elements: Vec<String>,
}

/// A finite partially ordered set with an order-reversing involution.
#[derive(Clone)]
pub struct SeparationSystem {
    ids: Vec<String>,
    index: BTreeMap<String, usize>,
    inverse: Vec<usize>,
    /// Row-major n×n reflexive-transitive closure; `le[a * n + b]` iff a ≤ b.
    le: Vec<bool>,
    /// One canonical orientation per separation, ordered by smallest id.
    sep_reps: Vec<usize>,
    /// Element index → separation index.
    sep_of: Vec<usize>,
}

impl fmt::Debug for SeparationSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SeparationSystem")
            .field("elements", &self.ids)
            .finish()
    }
}

impl SeparationSystem {
    /// Builds a system from involution pairs and base order relations.
    ///
    /// The stored order is the reflexive-transitive closure of the input
    /// relations together with their images under the order-reversing rule
    /// (each declared `x ≤ y` also yields `y* ≤ x*`). Construction fails if
    /// the strict closure contains a cycle.
    pub fn build(
        elements: &[(String, String)],
        relations: &[(String, String)],
    ) -> Result<Self, SystemError> {
        let mut ids = Vec::with_capacity(elements.len() * 2);
        let mut index = BTreeMap::new();
        for (a, b) in elements {
            if a == b {
                return Err(SystemError::InvolutionClash { id: a.clone() });
            }
            for id in [a, b] {
                if index.insert(id.clone(), ids.len()).is_some() {
                    return Err(SystemError::InvolutionClash { id: id.clone() });
                }
                ids.push(id.clone());
            }
        }
        let n = ids.len();
        let mut inverse = vec![0usize; n];
        for k in 0..elements.len() {
            inverse[2 * k] = 2 * k + 1;
            inverse[2 * k + 1] = 2 * k;
        }

        let mut le = vec![false; n * n];
        for i in 0..n {
            le[i * n + i] = true;
        }
        for (x, y) in relations {
            let xi = *index
                .get(x)
                .ok_or_else(|| SystemError::UnknownElement { id: x.clone() })?;
            let yi = *index
                .get(y)
                .ok_or_else(|| SystemError::UnknownElement { id: y.clone() })?;
            le[xi * n + yi] = true;
            // order-reversing rule
            le[inverse[yi] * n + inverse[xi]] = true;
        }
        // Floyd-Warshall transitive closure.
        for k in 0..n {
            for i in 0..n {
                if le[i * n + k] {
                    for j in 0..n {
                        if le[k * n + j] {
                            le[i * n + j] = true;
                        }
                    }
                }
            }
        }
        // Antisymmetry: a cycle in the strict closure is a hard error.
        for i in 0..n {
            for j in (i + 1)..n {
                if le[i * n + j] && le[j * n + i] {
                    return Err(SystemError::NotAPartialOrder {
                        x: ids[i].clone(),
                        y: ids[j].clone(),
                    });
                }
            }
        }
        debug_assert!((0..n).all(|i| {
            (0..n).all(|j| le[i * n + j] == le[inverse[j] * n + inverse[i]])
        }));

        let mut sep_reps = Vec::with_capacity(n / 2);
        let mut sep_of = vec![0usize; n];
        let mut pairs: Vec<usize> = (0..elements.len()).map(|k| 2 * k).collect();
        pairs.sort_by(|&a, &b| {
            let ka = ids[a].clone().min(ids[a + 1].clone());
            let kb = ids[b].clone().min(ids[b + 1].clone());
            ka.cmp(&kb)
        });
        for (s, rep) in pairs.into_iter().enumerate() {
            let canonical = if ids[rep] <= ids[rep + 1] { rep } else { rep + 1 };
            sep_reps.push(canonical);
            sep_of[rep] = s;
            sep_of[rep + 1] = s;
        }

        Ok(SeparationSystem {
            ids,
            index,
            inverse,
            le,
            sep_reps,
            sep_of,
        })
    }

    /// Number of oriented separations.
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Number of unoriented separations.
    pub fn sep_count(&self) -> usize {
        self.sep_reps.len()
    }

    pub fn element(&self, id: &str) -> Result<Elem, SystemError> {
        self.index
            .get(id)
            .map(|&i| Elem(i))
            .ok_or_else(|| SystemError::UnknownElement { id: id.to_owned() })
    }

    pub fn id(&self, e: Elem) -> &str {
        &self.ids[e.0]
    }

    pub fn inverse(&self, e: Elem) -> Elem {
        Elem(self.inverse[e.0])
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.ids.len()).map(Elem)
    }

    pub fn separations(&self) -> impl Iterator<Item = Sep> + '_ {
        (0..self.sep_reps.len()).map(Sep)
    }

    /// The two orientations of a separation, canonical one first.
    pub fn orientations(&self, s: Sep) -> (Elem, Elem) {
        let rep = self.sep_reps[s.0];
        (Elem(rep), Elem(self.inverse[rep]))
    }

    pub fn separation(&self, e: Elem) -> Sep {
        Sep(self.sep_of[e.0])
    }

    pub fn le(&self, a: Elem, b: Elem) -> bool {
        self.le[a.0 * self.ids.len() + b.0]
    }

    pub fn lt(&self, a: Elem, b: Elem) -> bool {
        a != b && self.le(a, b)
    }

    pub fn comparable(&self, a: Elem, b: Elem) -> bool {
        self.le(a, b) || self.le(b, a)
    }

    /// Classifies one element: small, trivial (with witness), regular.
    pub fn classify(&self, e: Elem) -> Classification {
        let inv = self.inverse(e);
        let small = self.le(e, inv);
        let co_small = self.le(inv, e);
        let trivial = self.trivial_witness(e).map(|w| self.id(w).to_owned());
        let co_trivial = self.trivial_witness(inv).map(|w| self.id(w).to_owned());
        Classification {
            small,
            co_small,
            trivial,
            co_trivial,
            regular: !small && !co_small,
        }
    }

    /// Some orientation `r` of a separation distinct from `e`'s with
    /// `e ≤ r` and `e ≤ r*`, if one exists.
    pub fn trivial_witness(&self, e: Elem) -> Option<Elem> {
        let own = self.separation(e);
        self.elements().find(|&r| {
            self.separation(r) != own && self.le(e, r) && self.le(e, self.inverse(r))
        })
    }

    pub fn is_trivial(&self, e: Elem) -> bool {
        self.trivial_witness(e).is_some()
    }

    pub fn is_co_trivial(&self, e: Elem) -> bool {
        self.is_trivial(self.inverse(e))
    }

    pub fn is_small(&self, e: Elem) -> bool {
        self.le(e, self.inverse(e))
    }

    /// Two separations are nested iff they have comparable orientations.
    pub fn nested(&self, a: Elem, b: Elem) -> bool {
        let (a1, a2) = (a, self.inverse(a));
        let (b1, b2) = (b, self.inverse(b));
        for x in [a1, a2] {
            for y in [b1, b2] {
                if self.comparable(x, y) {
                    return true;
                }
            }
        }
        false
    }

    /// Checks nestedness, triviality and regularity of the whole system.
    pub fn validate_tree_set(&self) -> TreeSetReport {
        let mut crossing_pairs = Vec::new();
        for s in self.separations() {
            for t in self.separations() {
                if s.0 < t.0 {
                    let (a, _) = self.orientations(s);
                    let (b, _) = self.orientations(t);
                    if !self.nested(a, b) {
                        crossing_pairs.push((self.id(a).to_owned(), self.id(b).to_owned()));
                    }
                }
            }
        }
        let mut trivial_elements = Vec::new();
        let mut small_elements = Vec::new();
        for e in self.elements() {
            if let Some(w) = self.trivial_witness(e) {
                trivial_elements.push((self.id(e).to_owned(), self.id(w).to_owned()));
            }
            if self.is_small(e) {
                small_elements.push(self.id(e).to_owned());
            }
        }
        let is_nested = crossing_pairs.is_empty();
        let is_tree_set = is_nested && trivial_elements.is_empty();
        TreeSetReport {
            is_nested,
            is_tree_set,
            is_regular: is_tree_set && small_elements.is_empty(),
            crossing_pairs,
            trivial_elements,
            small_elements,
        }
    }

    /// The subsystem induced on `ids`, which must be closed under the
    /// involution; the order is inherited.
    pub fn restrict(&self, ids: &[String]) -> Result<SeparationSystem, SystemError> {
        let mut elems = Vec::new();
        for id in ids {
            elems.push(self.element(id)?);
        }
        elems.sort();
        elems.dedup();
        let in_set = |e: Elem| elems.binary_search(&e).is_ok();
        let mut pairs = Vec::new();
        let mut seen = vec![false; self.len()];
        for &e in &elems {
            if !in_set(self.inverse(e)) {
                return Err(SystemError::NotInvolutionClosed {
                    id: self.id(e).to_owned(),
                });
            }
            if !seen[e.0] {
                seen[e.0] = true;
                seen[self.inverse(e).0] = true;
                pairs.push((self.id(e).to_owned(), self.id(self.inverse(e)).to_owned()));
            }
        }
        let mut relations = Vec::new();
        for &a in &elems {
            for &b in &elems {
                if a != b && self.le(a, b) {
                    relations.push((self.id(a).to_owned(), self.id(b).to_owned()));
                }
            }
        }
        SeparationSystem::build(&pairs, &relations)
    }
}

/// Outcome of [`check_isomorphism`].
///
/// `accepted` holds exactly when the map is a bijective homomorphism, the
/// domain is nested and the codomain regular; under those conditions the
/// inverse map is itself order-preserving, which is re-checked directly and
/// reported in `inverse_order_preserving`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoVerdict {
    pub accepted: bool,
    pub domain_nested: bool,
    pub codomain_regular: bool,
    pub inverse_order_preserving: bool,
}

/// Verifies that `f` is an isomorphism of tree sets from `r` onto `s`.
///
/// Map-level failures (not bijective, involution or order not preserved)
/// are errors; system-level failures (domain not nested, codomain not
/// regular) yield a rejecting verdict.
pub fn check_isomorphism(
    f: &BTreeMap<String, String>,
    r: &SeparationSystem,
    s: &SeparationSystem,
) -> Result<IsoVerdict, SystemError> {
    let mut fwd = vec![usize::MAX; r.len()];
    let mut hit = vec![false; s.len()];
    for e in r.elements() {
        let img_id = f
            .get(r.id(e))
            .ok_or_else(|| SystemError::NotBijective {
                detail: format!("no image for {}", r.id(e)),
            })?;
        let img = s.element(img_id)?;
        if hit[img.0] {
            return Err(SystemError::NotBijective {
                detail: format!("two elements map to {img_id}"),
            });
        }
        hit[img.0] = true;
        fwd[e.0] = img.0;
    }
    if r.len() != s.len() {
        return Err(SystemError::NotBijective {
            detail: format!("domain has {} elements, codomain {}", r.len(), s.len()),
        });
    }
    for e in r.elements() {
        let img = Elem(fwd[e.0]);
        if s.inverse(img) != Elem(fwd[r.inverse(e).0]) {
            return Err(SystemError::InvolutionNotPreserved {
                id: r.id(e).to_owned(),
            });
        }
    }
    for a in r.elements() {
        for b in r.elements() {
            if r.le(a, b) && !s.le(Elem(fwd[a.0]), Elem(fwd[b.0])) {
                return Err(SystemError::OrderNotPreserved {
                    x: r.id(a).to_owned(),
                    y: r.id(b).to_owned(),
                });
            }
        }
    }
    let domain_nested = r.validate_tree_set().is_nested;
    let codomain_regular = s.validate_tree_set().is_regular;
    let mut inverse_order_preserving = true;
    'outer: for a in r.elements() {
        for b in r.elements() {
            if s.le(Elem(fwd[a.0]), Elem(fwd[b.0])) && !r.le(a, b) {
                inverse_order_preserving = false;
                break 'outer;
            }
        }
    }
    Ok(IsoVerdict {
        accepted: domain_nested && codomain_regular,
        domain_nested,
        codomain_regular,
        inverse_order_preserving,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(ps: &[(&str, &str)]) -> Vec<(String, String)> {
        ps.iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect()
    }

    /// The edge tree set of the path a-b-c, built by hand.
    fn p3_system() -> SeparationSystem {
        SeparationSystem::build(
            &pairs(&[("a->b", "b->a"), ("b->c", "c->b")]),
            &pairs(&[("a->b", "b->c")]),
        )
        .unwrap()
    }

    #[test]
    fn discrete_order_only_reflexive() {
        let sys =
            SeparationSystem::build(&pairs(&[("a", "a*"), ("b", "b*")]), &[]).unwrap();
        for x in sys.elements() {
            for y in sys.elements() {
                assert_eq!(sys.le(x, y), x == y);
            }
        }
    }

    #[test]
    fn closure_is_transitive_and_order_reversing() {
        let sys = SeparationSystem::build(
            &pairs(&[("s1", "s1*"), ("s2", "s2*"), ("t", "t*")]),
            &pairs(&[("s1", "s2"), ("s2", "t")]),
        )
        .unwrap();
        let e = |id: &str| sys.element(id).unwrap();
        assert!(sys.le(e("s1"), e("t")));
        assert!(sys.le(e("t*"), e("s1*")));
        assert!(sys.le(e("s2*"), e("s1*")));
        assert!(!sys.le(e("t"), e("s1")));
    }

    #[test]
    fn antisymmetry_violation_is_an_error() {
        let err = SeparationSystem::build(
            &pairs(&[("a", "a*"), ("b", "b*")]),
            &pairs(&[("a", "b"), ("b", "a")]),
        )
        .unwrap_err();
        assert!(matches!(err, SystemError::NotAPartialOrder { .. }));
    }

    #[test]
    fn self_paired_element_is_a_clash() {
        let err = SeparationSystem::build(&pairs(&[("a", "a")]), &[]).unwrap_err();
        assert_eq!(err, SystemError::InvolutionClash { id: "a".into() });
        let err =
            SeparationSystem::build(&pairs(&[("a", "b"), ("b", "c")]), &[]).unwrap_err();
        assert_eq!(err, SystemError::InvolutionClash { id: "b".into() });
    }

    #[test]
    fn classify_p3_element_is_regular() {
        let sys = p3_system();
        let c = sys.classify(sys.element("a->b").unwrap());
        assert!(!c.small && !c.co_small);
        assert_eq!(c.trivial, None);
        assert!(c.regular);
    }

    #[test]
    fn classify_small_element() {
        let sys = SeparationSystem::build(
            &pairs(&[("x", "x*")]),
            &pairs(&[("x", "x*")]),
        )
        .unwrap();
        let c = sys.classify(sys.element("x").unwrap());
        assert!(c.small);
        assert!(!c.regular);
        assert!(sys.classify(sys.element("x*").unwrap()).co_small);
    }

    #[test]
    fn classify_trivial_element_reports_witness() {
        let sys = SeparationSystem::build(
            &pairs(&[("x", "x*"), ("r", "r*")]),
            &pairs(&[("x", "r"), ("x", "r*")]),
        )
        .unwrap();
        let c = sys.classify(sys.element("x").unwrap());
        assert!(c.trivial.is_some());
        assert!(c.small, "trivial implies small");
        assert_eq!(
            sys.classify(sys.element("x*").unwrap()).co_trivial,
            c.trivial
        );
    }

    #[test]
    fn nested_p3_and_crossing_discrete() {
        let sys = p3_system();
        let ab = sys.element("a->b").unwrap();
        let bc = sys.element("b->c").unwrap();
        assert!(sys.nested(ab, bc));
        assert!(sys.nested(ab, ab), "a separation is nested with itself");

        let free =
            SeparationSystem::build(&pairs(&[("s", "s*"), ("r", "r*")]), &[]).unwrap();
        assert!(!free.nested(free.element("s").unwrap(), free.element("r").unwrap()));
    }

    #[test]
    fn validate_tree_set_reports() {
        let sys = p3_system();
        let rep = sys.validate_tree_set();
        assert!(rep.is_tree_set && rep.is_regular);

        let crossing =
            SeparationSystem::build(&pairs(&[("s", "s*"), ("r", "r*")]), &[]).unwrap();
        let rep = crossing.validate_tree_set();
        assert!(!rep.is_nested);
        assert_eq!(rep.crossing_pairs.len(), 1);

        let empty = SeparationSystem::build(&[], &[]).unwrap();
        let rep = empty.validate_tree_set();
        assert!(rep.is_tree_set && rep.is_regular);
    }

    #[test]
    fn every_element_below_a_small_one_is_trivial() {
        let sys = SeparationSystem::build(
            &pairs(&[("s", "s*"), ("r", "r*")]),
            &pairs(&[("s", "s*"), ("r", "s")]),
        )
        .unwrap();
        assert!(sys.is_small(sys.element("s").unwrap()));
        assert!(sys.is_trivial(sys.element("r").unwrap()));
    }

    #[test]
    fn isomorphism_identity_and_relabel() {
        let sys = p3_system();
        let ident: BTreeMap<String, String> = sys
            .elements()
            .map(|e| (sys.id(e).to_owned(), sys.id(e).to_owned()))
            .collect();
        let v = check_isomorphism(&ident, &sys, &sys).unwrap();
        assert!(v.accepted && v.inverse_order_preserving);

        // Swap the roles of the two separations consistently: a->b maps to
        // c->b's chain reversed, which is again the same order type.
        let other = SeparationSystem::build(
            &pairs(&[("p", "p*"), ("q", "q*")]),
            &pairs(&[("p", "q")]),
        )
        .unwrap();
        let map: BTreeMap<String, String> = [
            ("a->b", "p"),
            ("b->a", "p*"),
            ("b->c", "q"),
            ("c->b", "q*"),
        ]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
        let v = check_isomorphism(&map, &sys, &other).unwrap();
        assert!(v.accepted && v.inverse_order_preserving);
    }

    #[test]
    fn isomorphism_collapse_is_not_bijective() {
        let sys = p3_system();
        let map: BTreeMap<String, String> = [
            ("a->b", "a->b"),
            ("b->a", "b->a"),
            ("b->c", "a->b"),
            ("c->b", "b->a"),
        ]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
        let err = check_isomorphism(&map, &sys, &sys).unwrap_err();
        assert!(matches!(err, SystemError::NotBijective { .. }));
    }

    #[test]
    fn isomorphism_order_violation_detected() {
        let sys = p3_system();
        // Map that reverses one separation only: breaks order preservation.
        let map: BTreeMap<String, String> = [
            ("a->b", "b->a"),
            ("b->a", "a->b"),
            ("b->c", "b->c"),
            ("c->b", "c->b"),
        ]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
        let err = check_isomorphism(&map, &sys, &sys).unwrap_err();
        assert!(matches!(err, SystemError::OrderNotPreserved { .. }));
    }

    #[test]
    fn restrict_inherits_order() {
        let sys = SeparationSystem::build(
            &pairs(&[("s1", "s1*"), ("s2", "s2*"), ("t", "t*")]),
            &pairs(&[("s1", "s2"), ("s2", "t")]),
        )
        .unwrap();
        let sub = sys
            .restrict(&["s1".into(), "s1*".into(), "t".into(), "t*".into()])
            .unwrap();
        assert_eq!(sub.sep_count(), 2);
        let a = sub.element("s1").unwrap();
        let b = sub.element("t").unwrap();
        assert!(sub.le(a, b));
        assert!(!sub.le(b, a));

        let err = sys.restrict(&["s1".into()]).unwrap_err();
        assert!(matches!(err, SystemError::NotInvolutionClosed { .. }));
    }
}
