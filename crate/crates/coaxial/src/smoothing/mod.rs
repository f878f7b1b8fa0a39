//! Smoothings of 3-polytopes whose vertices lie on at most four facets.
//!
//! Each 4-vertex is resolved into an edge by pairing two opposite facets
//! of its star. The automorphism group acts on the `2^l` choices; the flip
//! graph modulo that action is the decorated graph.

pub mod catalog;
pub mod polyhedron;
mod smooth;
pub mod symmetry;

pub use polyhedron::{build, edge, CombPolyhedron3, Edge, IncidenceDocument};
pub use smooth::{
    apply_automorphism, decorated_graph, flip, four_vertices, orbits, smooth, DecoratedGraph, FourVertex,
    GraphEdge, GraphVertex, Orbit, Smoothing, SmoothingChoice,
};
pub use symmetry::{automorphisms, canonical_form, Automorphism, CanonicalKey};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SmoothingError {
    #[error("invalid polyhedron: {0}")]
    InvalidPolyhedron(String),
    #[error("hyperplane {0} does not contain a facet")]
    NotGeometric(usize),
    #[error("vertex {0} is not simple")]
    NotSimpleVertex(usize),
    #[error("vertices {0} and {1} are not adjacent")]
    NotAnEdge(usize, usize),
    #[error("vertex {vertex} lies on {facets} facets; at most 4 supported")]
    HighValence { vertex: usize, facets: usize },
    #[error("choice has {found} bits, polyhedron has {expected} 4-vertices")]
    ChoiceLength { expected: usize, found: usize },
    #[error("{0} 4-vertices exceed the enumeration bound")]
    TooManyVertices(usize),
}
