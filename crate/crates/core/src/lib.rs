//! Disk diagrams over finite presentations and the spectral, isoperimetric
//! and filling invariants attached to them.
//!
//! A [`DiskDiagram`] is a labelled half-edge complex. Every cycle keeps the
//! region it bounds on its right: face cycles run clockwise and the outer
//! cycle runs counterclockwise with the diagram on its left.

pub mod diagram;
pub mod eigen;
pub mod families;
pub mod fillarea;
pub mod fixtures;
pub mod hqm;
pub mod io;
pub mod isoperimetry;
pub mod profiles;
pub mod resistance;
pub mod shelling;
pub mod spectra;
pub mod suite;
pub mod value;
pub mod word;

mod heisenberg;

pub use diagram::{Builder, DiskDiagram, Face, FaceKind, HalfEdge, ValidationReport};
pub use value::ExtendedValue;
pub use word::{Letter, Presentation, Word};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid presentation: {0}")]
    Presentation(String),
    #[error("schema error at {path}: {msg}")]
    Schema { path: String, msg: String },
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("unknown face {0}")]
    UnknownFace(usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("enumeration cap exceeded: {size} > {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("solver did not converge: residual {residual:e} after {iterations} iterations")]
    NoConvergence { residual: f64, iterations: usize },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
