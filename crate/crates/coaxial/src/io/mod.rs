//! File formats, the built-in catalog, DOT output and analysis reports.

mod catalog;
mod document;
mod dot;
mod report;

pub use catalog::{catalog, lookup, CatalogEntry};
pub use document::{
    parse_polyhedron_document, parse_tuple_document, polyhedron_document, tuple_document, PolyhedronDocument,
    Scalar, TupleDocument, SCHEMA_VERSION,
};
pub use dot::graph_dot;
pub use report::{
    analyze, groups_summary, hyperbolic_report, smoothings_summary, AnalysisReport, FacesReport, GroupsReport,
    HomologyReport, HyperbolicReport, KernelSummary, Sections, SingularityRow, SmoothingsReport, Subject,
};

use thiserror::Error;

use crate::groups::GroupError;
use crate::hyperbolic::HyperbolicError;
use crate::reflection::ReflectionError;
use crate::smoothing::SmoothingError;
use crate::tuple::TupleError;
use crate::types::TypeError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("unsupported schema version {0}; expected {SCHEMA_VERSION}")]
    UnknownVersion(u32),
    #[error("unknown catalog entry `{0}`")]
    UnknownCatalog(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("tuple: {0}")]
    Tuple(#[from] TupleError),
    #[error("smoothing: {0}")]
    Smoothing(#[from] SmoothingError),
    #[error("reflection complex: {0}")]
    Reflection(#[from] ReflectionError),
    #[error("groups: {0}")]
    Group(#[from] GroupError),
    #[error("type namer: {0}")]
    Type(#[from] TypeError),
    #[error("hyperbolic: {0}")]
    Hyperbolic(#[from] HyperbolicError),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    SizeGuard,
    Invariant,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use ErrorKind::*;
        match self {
            Error::Tuple(TupleError::BoundExceeded { .. })
            | Error::Reflection(ReflectionError::TooLarge(_))
            | Error::Reflection(ReflectionError::Tuple(TupleError::BoundExceeded { .. }))
            | Error::Group(GroupError::TooLarge(_))
            | Error::Smoothing(SmoothingError::TooManyVertices(_)) => SizeGuard,
            Error::Invariant(_)
            | Error::Tuple(TupleError::Invariant(_))
            | Error::Reflection(ReflectionError::Stabilizer { .. })
            | Error::Type(TypeError::Disagreement(..))
            | Error::Hyperbolic(HyperbolicError::RouteDisagreement(..))
            | Error::Hyperbolic(HyperbolicError::DecompositionMismatch(..)) => Invariant,
            _ => Parse,
        }
    }

    /// `2` parse or input error, `3` size guard, `4` invariant violation.
    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            ErrorKind::Parse => 2,
            ErrorKind::SizeGuard => 3,
            ErrorKind::Invariant => 4,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json { line: e.line(), column: e.column(), message: e.to_string() }
    }
}
