//! Face lattice of `P`, depths and singular faces.

use std::collections::{BTreeMap, HashSet};

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{indices_of, Mask, Tuple, TupleError};
use crate::exact::{rational_rank, relative_interior_point, solve_unique, Rational};

pub const DEFAULT_ENUMERATION_BOUND: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FaceDescriptor {
    /// Indices `i` with `r_i > 0` on the open face.
    pub support: Mask,
    pub dim: usize,
    pub depth: usize,
}

/// The faces of `P`, sorted by dimension and then by support.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceLattice {
    pub n: usize,
    pub m: usize,
    pub faces: Vec<FaceDescriptor>,
}

impl FaceLattice {
    /// Builds a lattice from `(support, dim)` pairs, computing depths for the given `m`.
    pub fn from_supports(n: usize, m: usize, supports: impl IntoIterator<Item = (Mask, usize)>) -> Result<Self, TupleError> {
        let mut faces = Vec::new();
        for (support, dim) in supports {
            let d = dim as i64 - support.count_ones() as i64 + m as i64 + 1;
            if d < 0 {
                return Err(TupleError::Invariant(format!(
                    "negative depth {d} at support {support:#b}"
                )));
            }
            faces.push(FaceDescriptor { support, dim, depth: d as usize });
        }
        faces.sort_by_key(|f| (f.dim, f.support));
        faces.dedup();
        Ok(FaceLattice { n, m, faces })
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// Dimension of `P` (the largest face dimension), `None` for an empty intersection.
    pub fn dim(&self) -> Option<usize> {
        self.faces.iter().map(|f| f.dim).max()
    }

    pub fn get(&self, support: Mask) -> Option<&FaceDescriptor> {
        self.faces.iter().find(|f| f.support == support)
    }

    pub fn of_dim(&self, d: usize) -> impl Iterator<Item = &FaceDescriptor> {
        self.faces.iter().filter(move |f| f.dim == d)
    }

    /// Face counts by dimension `0..=dim P`.
    pub fn census(&self) -> Vec<usize> {
        let Some(top) = self.dim() else { return Vec::new() };
        (0..=top).map(|d| self.of_dim(d).count()).collect()
    }

    pub fn vertices(&self) -> impl Iterator<Item = &FaceDescriptor> {
        self.of_dim(0)
    }

    /// `F_a` is a face of `F_b` exactly when the supports are nested.
    pub fn contains(outer: &FaceDescriptor, inner: &FaceDescriptor) -> bool {
        inner.support & !outer.support == 0
    }
}

/// Largest support of a point of `P` inside `J`, or `None` if `P` misses
/// the coordinate face spanned by `J`.
fn max_support(t: &Tuple, j: Mask) -> Result<Option<Mask>, TupleError> {
    let Some((a, b)) = t.system(j) else { return Ok(None) };
    let Some(p) = relative_interior_point(&a, &b)? else { return Ok(None) };
    let idx = indices_of(j);
    Ok(Some(idx.iter().zip(&p).filter(|(_, v)| v.is_positive()).fold(0, |m, (&i, _)| m | 1 << i)))
}

fn face_dim(t: &Tuple, j: Mask) -> usize {
    let (a, _) = t.system(j).expect("face supports are nonempty");
    j.count_ones() as usize - rational_rank(&a)
}

pub fn enumerate_faces(t: &Tuple) -> Result<FaceLattice, TupleError> {
    enumerate_faces_with_bound(t, DEFAULT_ENUMERATION_BOUND)
}

/// Enumerates every `J` with `C_J` nonempty.
///
/// Starting from the support of an interior point, the faces of `F_J` are the
/// maximal supports inside `J \ {i}`; unreachable subsets are never tested.
pub fn enumerate_faces_with_bound(t: &Tuple, bound: usize) -> Result<FaceLattice, TupleError> {
    if t.n() > bound {
        return Err(TupleError::BoundExceeded { n: t.n(), bound });
    }
    let mut seen: HashSet<Mask> = HashSet::new();
    let mut faces: Vec<Mask> = Vec::new();
    let mut tested: BTreeMap<Mask, Option<Mask>> = BTreeMap::new();
    let mut stack: Vec<Mask> = Vec::new();
    if let Some(top) = max_support(t, t.full_mask())? {
        if seen.insert(top) {
            faces.push(top);
            stack.push(top);
        }
    }
    while let Some(j) = stack.pop() {
        for i in indices_of(j) {
            let sub = j & !(1 << i);
            let k = match tested.get(&sub) {
                Some(k) => *k,
                None => {
                    let k = max_support(t, sub)?;
                    tested.insert(sub, k);
                    k
                }
            };
            if let Some(k) = k {
                if seen.insert(k) {
                    faces.push(k);
                    stack.push(k);
                }
            }
        }
    }
    FaceLattice::from_supports(t.n(), t.m(), faces.into_iter().map(|j| (j, face_dim(t, j))))
}

/// `d_{F_S} = dim F_S - #S + m + 1`.
pub fn depth(t: &Tuple, lattice: &FaceLattice, support: Mask) -> Result<usize, TupleError> {
    let f = lattice.get(support).ok_or(TupleError::NotAFace(support))?;
    let d = f.dim as i64 - support.count_ones() as i64 + t.m() as i64 + 1;
    usize::try_from(d).map_err(|_| TupleError::Invariant(format!("negative depth at {support:#b}")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Singularity {
    pub face: FaceDescriptor,
    pub depth: usize,
    pub is_isolated: bool,
    pub is_generic: bool,
}

/// Faces of positive depth. A vertex is generic when `#S = m` and the depth
/// is one; it is isolated when no strictly larger face is singular.
pub fn classify_singularities(lattice: &FaceLattice) -> Vec<Singularity> {
    let singular: Vec<&FaceDescriptor> = lattice.faces.iter().filter(|f| f.depth > 0).collect();
    singular
        .iter()
        .map(|&&face| {
            let vertex = face.dim == 0;
            let is_isolated = vertex
                && !singular.iter().any(|g| g.support != face.support && FaceLattice::contains(g, &face));
            let is_generic = vertex && face.support.count_ones() as usize == lattice.m && face.depth == 1;
            Singularity { face, depth: face.depth, is_isolated, is_generic }
        })
        .collect()
}

/// The unique point of `P` supported on the vertex support `s`, in `Q^n`.
pub fn vertex_coordinates(t: &Tuple, lattice: &FaceLattice, s: Mask) -> Result<Vec<Rational>, TupleError> {
    match lattice.get(s) {
        Some(f) if f.dim == 0 => {}
        _ => return Err(TupleError::NotAVertex(s)),
    }
    let (a, b) = t.system(s).expect("vertex supports are nonempty");
    let sol = solve_unique(&a, &b)?.ok_or(TupleError::NotAVertex(s))?;
    let mut x = vec![Rational::zero(); t.n()];
    for (i, v) in indices_of(s).into_iter().zip(sol) {
        x[i] = v;
    }
    Ok(x)
}

/// Average of the vertices of `F_J`: a rational point of the open face.
pub fn face_barycenter(t: &Tuple, lattice: &FaceLattice, support: Mask) -> Result<Vec<Rational>, TupleError> {
    lattice.get(support).ok_or(TupleError::NotAFace(support))?;
    let verts: Vec<Mask> =
        lattice.vertices().map(|v| v.support).filter(|&s| s & !support == 0).collect();
    let mut acc = vec![Rational::zero(); t.n()];
    for &s in &verts {
        for (a, v) in acc.iter_mut().zip(vertex_coordinates(t, lattice, s)?) {
            *a += v;
        }
    }
    let k = Rational::from_integer(verts.len().into());
    Ok(acc.into_iter().map(|a| a / &k).collect())
}
