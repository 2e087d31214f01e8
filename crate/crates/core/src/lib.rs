//! Menger continuum approximants and cubical lattice knots.
//!
//! The crate builds the cubulation of [0,1]^m, decides membership in the
//! Menger approximants M^m_n by exact base-3 digit arithmetic, manipulates
//! closed lattice knots through a spike/unspike/slide move calculus, and
//! isotopes a knot into the Menger sponge while emitting a replayable move
//! log and a machine-checkable containment certificate.

pub mod error;
pub mod invariants;
pub mod knot;
pub mod lattice;
pub mod menger;
pub mod mesh;
pub mod moves;
pub mod pipeline;

pub use error::{Error, Result};
pub use invariants::{fox_colorings, invariant_report, project, KnotDiagram};
pub use knot::{CubicalKnot, KnotViolation, Point3};
pub use lattice::{Cell, CubeAddress, LatticePoint};
pub use menger::{MengerParams, RefinementReport, RetentionReport};
pub use moves::{MoveKind, MoveRecord};
pub use pipeline::{
    embed_in_menger, verify_certificate, LogEntry, MengerCertificate, PipelineConfig,
};
