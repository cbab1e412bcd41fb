//! Exact planar geometry for a family of slit/tent domains, effective-set
//! enumerations, boundary connectivity analysis, and a numerical conformal
//! map of the unit disk onto the bounded component, with checks of the
//! geometric statements that tie the two worlds together.
//!
//! The exact layer (`geom`, `staged`, `domain`, `effective`, `crosscut`,
//! `connectivity`) computes with arbitrary-precision rationals; every
//! predicate there is decidable and reproducible. The numeric layer
//! (`conformal`) is a Schwarz-Christoffel style solver whose verdicts are
//! three-valued wherever map error competes with a margin.

pub mod conformal;
pub mod connectivity;
pub mod crosscut;
pub mod domain;
pub mod effective;
pub mod geom;
pub mod staged;
pub mod verify;

pub use domain::{Constituent, ConstituentKind, DomainModel};
pub use geom::{QPoint, QRect, RectKind, Segment, TaxicabArc};
pub use staged::StagedSet;
