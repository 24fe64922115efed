//! Retracts of height one in finite posets.
//!
//! Given a finite poset `P` and a set `Z` of its extremal points inducing a
//! connected height-one subposet `C`, this crate finds the improper 4-crowns
//! of `P`, groups their inner points into bundles, builds the two-colour
//! bundle multigraph `F(P)` and the pattern multigraphs `C(C)` and
//! `C_max(C)`, and searches for separating homomorphisms between them. For
//! ordinal sums `C = L ⊕ U` such a homomorphism exists exactly when `C` is a
//! retract of `P`, and a verified retraction is built from it.
//!
//! ```
//! use retract_core::{decide_retract, fixtures, Decision, PointSet};
//!
//! let p = fixtures::crown4_mid();
//! let z: PointSet = [0, 1, 2, 3].iter().collect();
//! assert_eq!(decide_retract(&p, z).unwrap(), Decision::NotRetract);
//!
//! let c = fixtures::crown4();
//! assert!(decide_retract(&c, c.carrier()).unwrap().is_retract());
//! ```

pub mod cli;
pub mod crown;
pub mod fixtures;
pub mod format;
pub mod multigraph;
pub mod oracle;
pub mod pointset;
pub mod poset;
pub mod retract;
pub mod search;
pub mod verify;

pub use crown::{
    bundle_family, classify, enumerate_crowns_in_e, inner, shadow, BundleFamily, Crown4, CrownKind,
};
pub use format::{parse_poset, write_poset, ParseError};
pub use multigraph::{
    build_c_graph, build_c_max, build_f_graph, export_dot, theta, CMaxVertex, CVertex, Color, Side,
    TwoColorMultigraph,
};
pub use pointset::{PointSet, MAX_POINTS};
pub use poset::{HeightOne, Levels, Poset, PosetError, ShapeError, SubPoset};
pub use retract::{
    decide_retract, extend_from_extremals, strictify, Decision, OrderMap, RetractError,
    RetractionWitness,
};
pub use search::{
    check_witness, find_separating, find_z_separating, BundleGraph, SearchError, SearchTarget,
    SeparatingOptions, SeparatingWitness,
};
