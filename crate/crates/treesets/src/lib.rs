//! Abstract separation systems and tree sets.
//!
//! A separation system is a finite partially ordered set with an
//! order-reversing involution. This crate implements the element and pair
//! predicates on such systems (small, trivial, regular, nested), consistent
//! orientations and their stars, the two constructions relating finite
//! regular tree sets to graph-theoretic trees, and a finitely presented
//! layer for infinite tree sets built from chains of order type ω and ω+1,
//! including the combinatorial skeleton of their tree-like space with limit
//! edges.
//!
//! The modules mirror the layers of the theory:
//!
//! * [`system`] — separation systems and their element/pair predicates;
//! * [`orientation`] — consistent (partial) orientations, extension,
//!   splitting stars, and a brute-force enumeration oracle;
//! * [`tree`] — finite graph-theoretic trees;
//! * [`bridge`] — edge tree sets of trees, trees of regular tree sets,
//!   round-trip isomorphisms, and the minor correspondence;
//! * [`presented`] — chain-tree presentations of infinite tree sets;
//! * [`tls`] — the presented tree-like space: cut descriptors, limit
//!   edges, sub-base membership, pseudo-arcs, and contraction;
//! * [`json`] — file formats and DOT export.

pub mod bridge;
pub mod json;
pub mod orientation;
pub mod presented;
pub mod system;
pub mod tls;
pub mod tree;

pub use bridge::{
    edge_tree_set, flip_path, minor_subset, oriented_edge_id, roundtrip_tau, roundtrip_tree,
    subset_minor, tree_of, validate_minor_model, BridgeError, BuiltTree, MinorConstruction,
    MinorModel, TreeIso, TreeSetIso,
};
pub use orientation::{Extension, OrientError, Orientation, PartialOrientation, Star};
pub use presented::{
    ChainTreePresentation, Comparison, Dir, EdgeLabel, ElemIndex, LabelKind, PresentError,
    PresentedElement, TameReport, TameWitness,
};
pub use system::{
    check_isomorphism, Classification, Elem, IsoVerdict, Sep, SeparationSystem, SystemError,
    TreeSetReport,
};
pub use tls::{
    build_tls, contract, ArcDescription, ArcInterval, ArcSpan, ContractRegion, LimitEdge,
    Location, PresentedTls, RegionEnd, TlsPoint, VertexFamily,
};
pub use tree::{Tree, TreeError};
