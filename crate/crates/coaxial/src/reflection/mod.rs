//! The reflected complex: `2^n` copies of the barycentric subdivision of `P`,
//! glued along the coordinate mirrors, triangulating `Z`.

pub mod homology;

use std::collections::{BTreeMap, HashMap, HashSet};

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{ExactError, Rational};
use crate::smoothing::{CombPolyhedron3, Edge, SmoothingError};
use crate::tuple::{face_barycenter, FaceDescriptor, FaceLattice, Mask, Tuple, TupleError};
pub use homology::{homology, ChainComplex, Homology};

/// Largest `n` for which the complex is built explicitly.
pub const MAX_REFLECTED_N: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReflectionError {
    #[error("n = {0} exceeds the reflected-complex bound {MAX_REFLECTED_N}")]
    TooLarge(usize),
    #[error("empty polytope")]
    Empty,
    #[error("({0}, {1}) is not an edge")]
    NotAnEdge(usize, usize),
    #[error(transparent)]
    Smoothing(#[from] SmoothingError),
    #[error("vertex copies are not distinct: expected {expected}, found {found}")]
    Stabilizer { expected: usize, found: usize },
    #[error(transparent)]
    Tuple(#[from] TupleError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// How the face lattice is realized for vertex coordinates.
#[derive(Clone, Copy, Debug)]
pub enum Realization<'a> {
    /// Barycenters of the faces of the tuple's polytope.
    Tuple(&'a Tuple),
    /// `1_J / |J|` for the face with support `J`.
    Combinatorial,
}

/// Cells of the CW structure of `Z`: `2^{|J|}` copies of each open face `F_J`.
pub fn count_cells(lattice: &FaceLattice) -> Vec<usize> {
    let mut out = vec![0; lattice.dim().map_or(0, |d| d + 1)];
    for f in &lattice.faces {
        out[f.dim] += 1usize << f.support.count_ones();
    }
    out
}

pub fn euler_characteristic(lattice: &FaceLattice) -> i64 {
    count_cells(lattice).iter().enumerate().map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
}

/// Number of singular points of `Z` lying over singular vertices of `P`.
pub fn singular_point_count(lattice: &FaceLattice) -> usize {
    lattice.vertices().filter(|v| v.depth > 0).map(|v| 1usize << v.support.count_ones()).sum()
}

#[derive(Clone, Debug)]
struct Flag {
    chain: Vec<usize>,
    top: Mask,
    /// Flag id (one dimension down) obtained by deleting position `i`.
    faces: Vec<usize>,
}

/// Bits of `s` inside `j`, packed.
fn compress(s: Mask, j: Mask) -> usize {
    let (mut out, mut bit, mut rest) = (0usize, 0, j);
    while rest != 0 {
        let low = rest.trailing_zeros();
        if s >> low & 1 == 1 {
            out |= 1 << bit;
        }
        bit += 1;
        rest &= rest - 1;
    }
    out
}

fn expand(k: usize, j: Mask) -> Mask {
    let (mut out, mut bit, mut rest) = (0, 0, j);
    while rest != 0 {
        let low = rest.trailing_zeros();
        if k >> bit & 1 == 1 {
            out |= 1 << low;
        }
        bit += 1;
        rest &= rest - 1;
    }
    out
}

/// The simplicial complex of pairs (flag of faces, sign vector on the top face).
#[derive(Clone, Debug)]
pub struct ReflectedComplex {
    n: usize,
    faces: Vec<FaceDescriptor>,
    flags: Vec<Vec<Flag>>,
    offsets: Vec<Vec<usize>>,
    counts: Vec<usize>,
}

impl ReflectedComplex {
    pub fn build(lattice: &FaceLattice, realization: Realization<'_>) -> Result<Self, ReflectionError> {
        if lattice.n > MAX_REFLECTED_N {
            return Err(ReflectionError::TooLarge(lattice.n));
        }
        let dim = lattice.dim().ok_or(ReflectionError::Empty)?;
        let faces = lattice.faces.clone();
        let below: Vec<Vec<usize>> = (0..faces.len())
            .map(|i| {
                (0..faces.len())
                    .filter(|&j| j != i && FaceLattice::contains(&faces[i], &faces[j]))
                    .collect()
            })
            .collect();
        // Chains are stored ascending; extend downwards from each top face.
        let mut flags: Vec<Vec<Flag>> = vec![Vec::new(); dim + 1];
        let mut index: Vec<HashMap<Vec<usize>, usize>> = vec![HashMap::new(); dim + 1];
        let mut stack: Vec<Vec<usize>> = (0..faces.len()).map(|i| vec![i]).collect();
        let mut all: Vec<Vec<usize>> = Vec::new();
        while let Some(chain) = stack.pop() {
            for &j in &below[chain[0]] {
                let mut c = vec![j];
                c.extend(&chain);
                stack.push(c);
            }
            all.push(chain);
        }
        all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        for chain in all {
            let k = chain.len() - 1;
            let top = faces[*chain.last().unwrap()].support;
            let sub_faces = if k == 0 {
                Vec::new()
            } else {
                (0..=k)
                    .map(|i| {
                        let mut c = chain.clone();
                        c.remove(i);
                        index[k - 1][&c]
                    })
                    .collect()
            };
            index[k].insert(chain.clone(), flags[k].len());
            flags[k].push(Flag { chain, top, faces: sub_faces });
        }
        let mut offsets = Vec::with_capacity(dim + 1);
        let mut counts = Vec::with_capacity(dim + 1);
        for fl in &flags {
            let mut off = Vec::with_capacity(fl.len());
            let mut total = 0;
            for f in fl {
                off.push(total);
                total += 1usize << f.top.count_ones();
            }
            offsets.push(off);
            counts.push(total);
        }
        let complex = ReflectedComplex { n: lattice.n, faces, flags, offsets, counts };
        complex.check_vertex_copies(lattice, realization)?;
        Ok(complex)
    }

    /// Every face's copies must be distinct points: the stabilizer of `C_J` has order `2^{n-|J|}`.
    fn check_vertex_copies(&self, lattice: &FaceLattice, realization: Realization<'_>) -> Result<(), ReflectionError> {
        let mut points = HashSet::new();
        for f in &self.faces {
            let base: Vec<Rational> = match realization {
                Realization::Tuple(t) => face_barycenter(t, lattice, f.support)?,
                Realization::Combinatorial => {
                    let w = Rational::new(1.into(), (f.support.count_ones() as i64).into());
                    (0..self.n).map(|i| if f.support >> i & 1 == 1 { w.clone() } else { Rational::zero() }).collect()
                }
            };
            for k in 0..1usize << f.support.count_ones() {
                let s = expand(k, f.support);
                let p: Vec<Rational> =
                    base.iter().enumerate().map(|(i, x)| if s >> i & 1 == 1 { -x.clone() } else { x.clone() }).collect();
                points.insert(p);
            }
        }
        let expected = self.counts[0];
        if points.len() != expected {
            return Err(ReflectionError::Stabilizer { expected, found: points.len() });
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.counts.len() - 1
    }

    /// Number of simplices in each dimension.
    pub fn simplex_counts(&self) -> &[usize] {
        &self.counts
    }

    /// Number of flags of each length (simplices of one copy of the subdivision).
    pub fn flag_counts(&self) -> Vec<usize> {
        self.flags.iter().map(Vec::len).collect()
    }

    fn simplex_id(&self, k: usize, flag: usize, s: Mask) -> usize {
        self.offsets[k][flag] + compress(s, self.flags[k][flag].top)
    }

    /// Complex vertex id of the copy of face `face` (index into the lattice) with signs `s`.
    pub fn vertex_id(&self, face: usize, s: Mask) -> usize {
        let flag = self.flags[0].iter().position(|f| f.chain[0] == face).expect("face index");
        self.simplex_id(0, flag, s & self.faces[face].support)
    }

    pub fn face_index(&self, support: Mask) -> Option<usize> {
        self.faces.iter().position(|f| f.support == support)
    }

    /// Vertex ids of the `id`-th `k`-simplex, ordered by face dimension.
    pub fn simplex(&self, k: usize, id: usize) -> Vec<usize> {
        let flag = self.offsets[k].partition_point(|&o| o <= id) - 1;
        let f = &self.flags[k][flag];
        let s = expand(id - self.offsets[k][flag], f.top);
        f.chain.iter().map(|&face| self.vertex_id(face, s)).collect()
    }

    /// The simplicial chain complex, cells numbered by dimension.
    pub fn chain_complex(&self) -> ChainComplex {
        let mut cc = ChainComplex::new();
        let mut base = vec![0u32; self.dim() + 1];
        for k in 0..=self.dim() {
            if k > 0 {
                base[k] = base[k - 1] + self.counts[k - 1] as u32;
            }
            for (fi, f) in self.flags[k].iter().enumerate() {
                for code in 0..1usize << f.top.count_ones() {
                    let s = expand(code, f.top);
                    let bd = f
                        .faces
                        .iter()
                        .enumerate()
                        .map(|(i, &g)| {
                            let top = self.flags[k - 1][g].top;
                            let id = base[k - 1] + self.simplex_id(k - 1, g, s & top) as u32;
                            (id, if i % 2 == 0 { 1 } else { -1 })
                        })
                        .collect();
                    let id = cc.push(k, bd);
                    debug_assert_eq!(id, base[k] + self.simplex_id(k, fi, s) as u32);
                }
            }
        }
        cc
    }

    pub fn homology(&self, torsion: bool) -> Result<Homology, ReflectionError> {
        Ok(homology(self.chain_complex(), torsion)?)
    }

    /// Connected components of the union of all copies of the given edges
    /// (as lattice supports of 1-dimensional faces).
    pub fn edge_copy_components(&self, edges: &[Mask]) -> usize {
        let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
        fn find(p: &mut BTreeMap<usize, usize>, x: usize) -> usize {
            let up = *p.entry(x).or_insert(x);
            if up == x {
                return x;
            }
            let r = find(p, up);
            p.insert(x, r);
            r
        }
        for &e in edges {
            let ei = self.face_index(e).expect("edge support");
            let ends: Vec<usize> = (0..self.faces.len())
                .filter(|&i| self.faces[i].dim == 0 && self.faces[i].support & !e == 0)
                .collect();
            for code in 0..1usize << e.count_ones() {
                let s = expand(code, e);
                let mid = self.vertex_id(ei, s);
                let r = find(&mut parent, mid);
                for &v in &ends {
                    let x = find(&mut parent, self.vertex_id(v, s));
                    parent.insert(x, r);
                }
            }
        }
        let keys: Vec<usize> = parent.keys().copied().collect();
        let mut roots: Vec<usize> = keys.into_iter().map(|k| find(&mut parent, k)).collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LinkComponents {
    pub copies: usize,
    pub circles: usize,
}

/// The reflected copies of the closed edges `edges` of `p` inside `Z(p)`, with facet
/// `i` the hyperplane `r_i = 0`: how many copies there are and how many circles they form.
pub fn red_link_components(p: &CombPolyhedron3, edges: &[Edge]) -> Result<LinkComponents, ReflectionError> {
    let mut supports = Vec::with_capacity(edges.len());
    for &(u, v) in edges {
        let (a, b) = p.edge_facets(crate::smoothing::edge(u, v)).ok_or(ReflectionError::NotAnEdge(u, v))?;
        supports.push(p.support_of(&[a, b]));
    }
    let lattice = p.face_lattice()?;
    let complex = ReflectedComplex::build(&lattice, Realization::Combinatorial)?;
    Ok(LinkComponents {
        copies: supports.iter().map(|s| 1usize << s.count_ones()).sum(),
        circles: complex.edge_copy_components(&supports),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplexSummary {
    pub cells: Vec<usize>,
    pub simplices: Vec<usize>,
    pub singular_points: usize,
    pub euler_characteristic: i64,
}

pub fn summarize(lattice: &FaceLattice, complex: &ReflectedComplex) -> ComplexSummary {
    ComplexSummary {
        cells: count_cells(lattice),
        simplices: complex.simplex_counts().to_vec(),
        singular_points: singular_point_count(lattice),
        euler_characteristic: euler_characteristic(lattice),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smoothing::build;
    use crate::tuple::enumerate_faces;

    #[test]
    fn compress_round_trip() {
        let j = 0b1011_0110;
        for k in 0..16 {
            assert_eq!(compress(expand(k, j), j), k);
        }
    }

    #[test]
    fn one_dimensional_polytope() {
        // P is a segment with vertex supports {0,2} and {1,2}: Z is two circles.
        let t = Tuple::from_ints(1, &[vec![1], vec![1], vec![-1]]).unwrap();
        let l = enumerate_faces(&t).unwrap();
        assert_eq!(count_cells(&l), vec![8, 8]);
        let c = ReflectedComplex::build(&l, Realization::Tuple(&t)).unwrap();
        let h = c.homology(true).unwrap();
        assert_eq!(h.euler_characteristic(), euler_characteristic(&l));
        assert_eq!(h.betti, vec![2, 2]);
    }

    #[test]
    fn pyramid_and_bipyramid_singular_points() {
        let p = build::pyramid(4).face_lattice().unwrap();
        assert_eq!(singular_point_count(&p), 2);
        let b = build::bipyramid(3).face_lattice().unwrap();
        assert_eq!(singular_point_count(&b), 12);
    }

    #[test]
    fn cube_reflection_is_torus() {
        let l = build::cube().face_lattice().unwrap();
        let c = ReflectedComplex::build(&l, Realization::Combinatorial).unwrap();
        let cc = c.chain_complex();
        assert!(cc.is_chain_complex());
        let h = homology(cc, true).unwrap();
        assert_eq!(h.betti, vec![1, 3, 3, 1]);
        assert!(h.is_torsion_free());
        assert_eq!(c.simplex_counts()[3], 48 * 64);
    }

    #[test]
    fn prism_edge_link() {
        let p = build::prism(3);
        let e = p.edges()[0];
        let l = red_link_components(&p, &[e]).unwrap();
        assert_eq!(l.copies, 8);
        assert_eq!(l.circles, 2);
        assert_eq!(red_link_components(&p, &[(0, 0)]), Err(ReflectionError::NotAnEdge(0, 0)));
    }

    #[test]
    fn simplex_vertices_are_distinct() {
        let l = build::tetrahedron().face_lattice().unwrap();
        let c = ReflectedComplex::build(&l, Realization::Combinatorial).unwrap();
        for id in 0..c.simplex_counts()[3] {
            let mut v = c.simplex(3, id);
            v.sort_unstable();
            v.dedup();
            assert_eq!(v.len(), 4);
        }
        assert_eq!(c.homology(false).unwrap().betti, vec![1, 0, 0, 1]);
    }
}
