//! Exact combinatorics and topology of intersections of coaxial ellipsoids.
//!
//! A tuple of rational vectors `A_1, ..., A_n` in `Q^m` cuts out the real
//! variety `Z = { x : sum A_i x_i^2 = 0, |x| = 1 }` inside `S^{n-1}`. Its
//! quotient by the coordinate reflections is the polytope
//! `P = { r >= 0 : sum A_i r_i = 0, sum r_i = 1 }`.

pub mod exact;
pub mod groups;
pub mod hyperbolic;
pub mod io;
pub mod reflection;
pub mod smoothing;
pub mod tuple;
pub mod types;
