//! Consistent orientations of separation systems.
//!
//! An orientation picks one orientation per separation; it is consistent if
//! no two chosen elements point away from each other, i.e. there are no
//! distinct separations r ≠ s with chosen r⃗, s⃗ and s̄ ≤ r⃗. The maximal
//! elements of a consistent orientation always form a star, and an
//! orientation is *splitting* if every element lies below a maximal one.

use thiserror::Error;

use crate::system::{Elem, Sep, SeparationSystem};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrientError {
    #[error("unknown element {id}")]
    UnknownElement { id: String },
    #[error("both orientations of one separation chosen: {id} and {other}")]
    DoubleOriented { id: String, other: String },
    #[error("partial orientation is not consistent: {x} and {y} point away from each other")]
    InconsistentInput { x: String, y: String },
    #[error("element {id} of the input is co-trivial (witness {witness}); no consistent extension exists")]
    CoTrivialElement { id: String, witness: String },
    #[error("pin {id} is trivial (witness {witness}); it is maximal in no consistent orientation")]
    PinTrivial { id: String, witness: String },
    #[error("pin {id} is not maximal in the input: {above} lies strictly above it")]
    PinNotMaximalInP { id: String, above: String },
    #[error("orientation is not consistent: {x} and {y} point away from each other")]
    InconsistentOrientation { x: String, y: String },
    #[error("orientation misses separation with orientations {id}/{other}")]
    NotTotal { id: String, other: String },
    #[error("system has {seps} separations; enumeration is capped at {cap}")]
    TooLarge { seps: usize, cap: usize },
    #[error("orientation is not splitting")]
    NotSplitting,
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// At most one orientation per separation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialOrientation {
    chosen: Vec<Elem>,
}

impl PartialOrientation {
    pub fn elements(&self) -> &[Elem] {
        &self.chosen
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.chosen.binary_search(&e).is_ok()
    }

    pub fn len(&self) -> usize {
        self.chosen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chosen.is_empty()
    }
}

/// Exactly one orientation per separation, with its consistency and
/// splitting flags computed on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    chosen: Vec<Elem>,
    consistent: bool,
    splitting: bool,
}

impl Orientation {
    pub fn elements(&self) -> &[Elem] {
        &self.chosen
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.chosen.binary_search(&e).is_ok()
    }

    pub fn is_consistent(&self) -> bool {
        self.consistent
    }

    pub fn is_splitting(&self) -> bool {
        self.splitting
    }

    /// Sorted element ids, the canonical serialized form.
    pub fn ids(&self, sys: &SeparationSystem) -> Vec<String> {
        let mut ids: Vec<String> = self.chosen.iter().map(|&e| sys.id(e).to_owned()).collect();
        ids.sort();
        ids
    }

    /// Canonical one-line label, used as a tree vertex id.
    pub fn label(&self, sys: &SeparationSystem) -> String {
        format!("{{{}}}", self.ids(sys).join(","))
    }
}

/// A set σ with r⃗ ≤ s̄ for all distinct members r⃗, s⃗.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Star {
    members: Vec<Elem>,
}

impl Star {
    pub fn members(&self) -> &[Elem] {
        &self.members
    }
}

/// Result of [`SeparationSystem::extend_orientation`].
#[derive(Clone, Debug)]
pub struct Extension {
    pub orientation: Orientation,
    /// True when the system is nested and a pin was given, in which case
    /// the returned orientation is the only consistent one with the pin
    /// maximal.
    pub unique: bool,
}

impl SeparationSystem {
    /// Two chosen elements are inconsistent iff they belong to distinct
    /// separations and the inverse of one lies below the other.
    fn pair_inconsistent(&self, x: Elem, y: Elem) -> bool {
        self.separation(x) != self.separation(y) && self.le(self.inverse(x), y)
    }

    fn first_conflict(&self, elems: &[Elem]) -> Option<(Elem, Elem)> {
        for (i, &x) in elems.iter().enumerate() {
            for &y in &elems[i + 1..] {
                if self.pair_inconsistent(x, y) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    /// Validates and sorts a choice of elements into a partial orientation.
    pub fn partial_orientation(
        &self,
        elems: impl IntoIterator<Item = Elem>,
    ) -> Result<PartialOrientation, OrientError> {
        let mut chosen: Vec<Elem> = elems.into_iter().collect();
        chosen.sort();
        chosen.dedup();
        let mut seen: Vec<Option<Elem>> = vec![None; self.sep_count()];
        for &e in &chosen {
            let s = self.separation(e);
            if let Some(other) = seen[s.0] {
                return Err(OrientError::DoubleOriented {
                    id: self.id(e).to_owned(),
                    other: self.id(other).to_owned(),
                });
            }
            seen[s.0] = Some(e);
        }
        Ok(PartialOrientation { chosen })
    }

    /// Parses a list of element ids into a partial orientation.
    pub fn partial_orientation_from_ids(
        &self,
        ids: &[String],
    ) -> Result<PartialOrientation, OrientError> {
        let mut elems = Vec::with_capacity(ids.len());
        for id in ids {
            elems.push(
                self.element(id)
                    .map_err(|_| OrientError::UnknownElement { id: id.clone() })?,
            );
        }
        self.partial_orientation(elems)
    }

    pub fn is_consistent(&self, p: &PartialOrientation) -> bool {
        self.first_conflict(&p.chosen).is_none()
    }

    /// Builds a total orientation from one element per separation and
    /// computes its consistency and splitting flags.
    pub fn make_orientation(
        &self,
        elems: impl IntoIterator<Item = Elem>,
    ) -> Result<Orientation, OrientError> {
        let p = self.partial_orientation(elems)?;
        if p.len() != self.sep_count() {
            let missing = self
                .separations()
                .find(|&s| {
                    let (a, b) = self.orientations(s);
                    !p.contains(a) && !p.contains(b)
                })
                .ok_or_else(|| OrientError::Internal("incomplete but nothing missing".into()))?;
            let (a, b) = self.orientations(missing);
            return Err(OrientError::NotTotal {
                id: self.id(a).to_owned(),
                other: self.id(b).to_owned(),
            });
        }
        Ok(self.finish_orientation(p.chosen))
    }

    fn finish_orientation(&self, chosen: Vec<Elem>) -> Orientation {
        let consistent = self.first_conflict(&chosen).is_none();
        let splitting = consistent && self.all_below_maximal(&chosen);
        Orientation {
            chosen,
            consistent,
            splitting,
        }
    }

    fn maximal_in(&self, chosen: &[Elem]) -> Vec<Elem> {
        chosen
            .iter()
            .copied()
            .filter(|&e| !chosen.iter().any(|&f| self.lt(e, f)))
            .collect()
    }

    fn all_below_maximal(&self, chosen: &[Elem]) -> bool {
        let maximal = self.maximal_in(chosen);
        chosen
            .iter()
            .all(|&e| maximal.iter().any(|&m| self.le(e, m)))
    }

    /// Extends a consistent partial orientation to a consistent orientation
    /// of the whole system; with a pin, the pin is maximal in the result.
    ///
    /// Undetermined separations are processed in ascending id order. Each is
    /// oriented away from co-trivial orientations and never strictly above
    /// the pin; among the remaining consistent choices the one below the pin
    /// is preferred when comparable, then the lexicographically smaller id.
    pub fn extend_orientation(
        &self,
        p: &PartialOrientation,
        pin: Option<Elem>,
    ) -> Result<Extension, OrientError> {
        let mut chosen = p.chosen.clone();
        if let Some(pin) = pin {
            if !chosen.contains(&pin) {
                chosen.push(pin);
                chosen.sort();
            }
            let base = self.partial_orientation(chosen.iter().copied())?;
            chosen = base.chosen;
        }
        if let Some((x, y)) = self.first_conflict(&chosen) {
            return Err(OrientError::InconsistentInput {
                x: self.id(x).to_owned(),
                y: self.id(y).to_owned(),
            });
        }
        for &e in &chosen {
            if let Some(w) = self.trivial_witness(self.inverse(e)) {
                return Err(OrientError::CoTrivialElement {
                    id: self.id(e).to_owned(),
                    witness: self.id(w).to_owned(),
                });
            }
        }
        if let Some(pin) = pin {
            if let Some(w) = self.trivial_witness(pin) {
                return Err(OrientError::PinTrivial {
                    id: self.id(pin).to_owned(),
                    witness: self.id(w).to_owned(),
                });
            }
            if let Some(&above) = chosen.iter().find(|&&e| self.lt(pin, e)) {
                return Err(OrientError::PinNotMaximalInP {
                    id: self.id(pin).to_owned(),
                    above: self.id(above).to_owned(),
                });
            }
        }

        let mut determined = vec![false; self.sep_count()];
        for &e in &chosen {
            determined[self.separation(e).0] = true;
        }
        let mut todo: Vec<Sep> = self
            .separations()
            .filter(|s| !determined[s.0])
            .collect();
        todo.sort_by(|&a, &b| {
            let (ra, _) = self.orientations(a);
            let (rb, _) = self.orientations(b);
            self.id(ra).cmp(self.id(rb))
        });

        for s in todo {
            let (a, b) = self.orientations(s);
            let legal = |cand: Elem| -> bool {
                if self.is_co_trivial(cand) {
                    return false;
                }
                if let Some(pin) = pin {
                    if self.lt(pin, cand) {
                        return false;
                    }
                }
                chosen.iter().all(|&e| !self.pair_inconsistent(cand, e))
            };
            let pick = match (legal(a), legal(b)) {
                (true, false) => a,
                (false, true) => b,
                (true, true) => {
                    let below_pin = |cand: Elem| pin.is_some_and(|p| self.le(cand, p));
                    match (below_pin(a), below_pin(b)) {
                        (true, false) => a,
                        (false, true) => b,
                        _ => {
                            if self.id(a) <= self.id(b) {
                                a
                            } else {
                                b
                            }
                        }
                    }
                }
                (false, false) => {
                    return Err(OrientError::Internal(format!(
                        "no consistent orientation for separation {}/{}",
                        self.id(a),
                        self.id(b)
                    )))
                }
            };
            chosen.push(pick);
        }
        chosen.sort();
        let orientation = self.finish_orientation(chosen);
        debug_assert!(orientation.consistent);
        let unique = pin.is_some() && self.validate_tree_set().is_nested;
        Ok(Extension { orientation, unique })
    }

    /// The unique consistent orientation in which `e` is maximal.
    pub fn orientation_of(&self, e: Elem) -> Result<Orientation, OrientError> {
        let p = self.partial_orientation([e])?;
        Ok(self.extend_orientation(&p, Some(e))?.orientation)
    }

    /// The maximal elements of a consistent orientation.
    pub fn star_of(&self, o: &Orientation) -> Result<Star, OrientError> {
        if let Some((x, y)) = self.first_conflict(&o.chosen) {
            return Err(OrientError::InconsistentOrientation {
                x: self.id(x).to_owned(),
                y: self.id(y).to_owned(),
            });
        }
        Ok(Star {
            members: self.maximal_in(&o.chosen),
        })
    }

    pub fn is_splitting(&self, o: &Orientation) -> bool {
        o.splitting
    }

    /// Checks the star condition r⃗ ≤ s̄ on all distinct pairs.
    pub fn is_star(&self, members: &[Elem]) -> bool {
        members.iter().all(|&r| {
            members
                .iter()
                .all(|&s| r == s || self.le(r, self.inverse(s)))
        })
    }

    /// All consistent orientations, each tagged splitting or not, in a
    /// deterministic order. Capped at 20 separations.
    pub fn enumerate_orientations(&self) -> Result<Vec<Orientation>, OrientError> {
        const CAP: usize = 20;
        if self.sep_count() > CAP {
            return Err(OrientError::TooLarge {
                seps: self.sep_count(),
                cap: CAP,
            });
        }
        // Per separation, candidates in id order; depth-first over the
        // choice vector, pruning as soon as a prefix is inconsistent.
        let slots: Vec<(Elem, Elem)> = self
            .separations()
            .map(|s| {
                let (a, b) = self.orientations(s);
                if self.id(a) <= self.id(b) {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        let mut out = Vec::new();
        let mut stack: Vec<Elem> = Vec::with_capacity(slots.len());
        fn dfs(
            sys: &SeparationSystem,
            slots: &[(Elem, Elem)],
            stack: &mut Vec<Elem>,
            out: &mut Vec<Orientation>,
        ) {
            if stack.len() == slots.len() {
                let mut chosen = stack.clone();
                chosen.sort();
                out.push(sys.finish_orientation(chosen));
                return;
            }
            let (a, b) = slots[stack.len()];
            for cand in [a, b] {
                if stack.iter().all(|&e| !sys.pair_inconsistent(cand, e)) {
                    stack.push(cand);
                    dfs(sys, slots, stack, out);
                    stack.pop();
                }
            }
        }
        dfs(self, &slots, &mut stack, &mut out);
        debug_assert!(out.iter().all(|o| o.consistent));
        Ok(out)
    }

    /// Whether `e` lies in a splitting star, i.e. whether the unique
    /// consistent orientation with `e` maximal is splitting.
    pub fn lies_in_splitting_star(&self, e: Elem) -> Result<bool, OrientError> {
        Ok(self.orientation_of(e)?.splitting)
    }
}
