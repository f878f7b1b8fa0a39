//! Combinatorial 3-polytopes as oriented facet cycles.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::SmoothingError;
use crate::tuple::{FaceLattice, Mask, TupleError};

/// A 3-polytope given by its facets as cyclically ordered vertex lists.
///
/// Facet cycles are stored with a consistent orientation: every edge is
/// traversed once in each direction. Darts are the oriented edges
/// `facets[f][k] -> facets[f][k + 1]`, numbered facet by facet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombPolyhedron3 {
    facets: Vec<Vec<usize>>,
    vertex_count: usize,
    offsets: Vec<usize>,
    dart_facet: Vec<usize>,
    twin: Vec<usize>,
}

/// An undirected edge as a sorted vertex pair.
pub type Edge = (usize, usize);

pub fn edge(u: usize, v: usize) -> Edge {
    if u < v { (u, v) } else { (v, u) }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidenceDocument {
    pub facets: Vec<Vec<usize>>,
}

impl CombPolyhedron3 {
    /// Validates and orients the facet cycles. Vertex ids must be `0..V`.
    pub fn new(mut facets: Vec<Vec<usize>>) -> Result<Self, SmoothingError> {
        let bad = |msg: String| Err(SmoothingError::InvalidPolyhedron(msg));
        if facets.len() < 4 {
            return bad(format!("{} facets", facets.len()));
        }
        let vertex_count = facets.iter().flatten().max().map_or(0, |&v| v + 1);
        let mut used = vec![false; vertex_count];
        for (f, cyc) in facets.iter().enumerate() {
            if cyc.len() < 3 {
                return bad(format!("facet {f} has {} vertices", cyc.len()));
            }
            let distinct: BTreeSet<usize> = cyc.iter().copied().collect();
            if distinct.len() != cyc.len() {
                return bad(format!("facet {f} repeats a vertex"));
            }
            for &v in cyc {
                used[v] = true;
            }
        }
        if let Some(v) = used.iter().position(|u| !u) {
            return bad(format!("vertex {v} lies on no facet"));
        }
        // Each undirected edge must lie in exactly two facets.
        let mut edge_facets: BTreeMap<Edge, Vec<usize>> = BTreeMap::new();
        for (f, cyc) in facets.iter().enumerate() {
            for k in 0..cyc.len() {
                edge_facets.entry(edge(cyc[k], cyc[(k + 1) % cyc.len()])).or_default().push(f);
            }
        }
        for (e, fs) in &edge_facets {
            if fs.len() != 2 {
                return bad(format!("edge {e:?} lies in {} facets", fs.len()));
            }
        }
        let directed = |cyc: &[usize], u: usize, v: usize| {
            (0..cyc.len()).any(|k| cyc[k] == u && cyc[(k + 1) % cyc.len()] == v)
        };
        // Orient by breadth-first search over facet adjacency.
        let mut done = vec![false; facets.len()];
        let mut queue = VecDeque::from([0usize]);
        done[0] = true;
        while let Some(f) = queue.pop_front() {
            let cyc = facets[f].clone();
            for k in 0..cyc.len() {
                let (u, v) = (cyc[k], cyc[(k + 1) % cyc.len()]);
                let g = *edge_facets[&edge(u, v)].iter().find(|&&g| g != f).unwrap();
                if done[g] {
                    if directed(&facets[g], u, v) {
                        return bad("facet cycles are not orientable".into());
                    }
                    continue;
                }
                if directed(&facets[g], u, v) {
                    facets[g].reverse();
                }
                done[g] = true;
                queue.push_back(g);
            }
        }
        if done.iter().any(|d| !d) {
            return bad("facet adjacency graph is disconnected".into());
        }
        let mut offsets = Vec::with_capacity(facets.len());
        let mut dart_facet = Vec::new();
        for (f, cyc) in facets.iter().enumerate() {
            offsets.push(dart_facet.len());
            dart_facet.extend(std::iter::repeat_n(f, cyc.len()));
        }
        let mut by_pair: HashMap<(usize, usize), usize> = HashMap::new();
        for (f, cyc) in facets.iter().enumerate() {
            for k in 0..cyc.len() {
                by_pair.insert((cyc[k], cyc[(k + 1) % cyc.len()]), offsets[f] + k);
            }
        }
        let mut twin = vec![0; dart_facet.len()];
        for (f, cyc) in facets.iter().enumerate() {
            for k in 0..cyc.len() {
                twin[offsets[f] + k] = by_pair[&(cyc[(k + 1) % cyc.len()], cyc[k])];
            }
        }
        let p = CombPolyhedron3 { facets, vertex_count, offsets, dart_facet, twin };
        let (v, e, f) = (p.vertex_count(), p.edge_count(), p.facet_count());
        if v + f != e + 2 {
            return bad(format!("Euler relation fails: V={v}, E={e}, F={f}"));
        }
        for v in 0..v {
            let star = p.vertex_star(v);
            let incident = p.facets.iter().filter(|c| c.contains(&v)).count();
            if star.len() != incident {
                return bad(format!("vertex {v} has a non-disk neighbourhood"));
            }
            if incident < 3 {
                return bad(format!("vertex {v} lies on {incident} facets"));
            }
        }
        // Two facets of a polytope share at most one edge.
        let mut pairs = BTreeSet::new();
        for fs in edge_facets.values() {
            if !pairs.insert((fs[0].min(fs[1]), fs[0].max(fs[1]))) {
                return bad(format!("facets {} and {} share two edges", fs[0], fs[1]));
            }
        }
        Ok(p)
    }

    pub fn from_document(doc: &IncidenceDocument) -> Result<Self, SmoothingError> {
        Self::new(doc.facets.clone())
    }

    pub fn to_document(&self) -> IncidenceDocument {
        IncidenceDocument { facets: self.facets.clone() }
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn dart_count(&self) -> usize {
        self.twin.len()
    }

    pub fn edge_count(&self) -> usize {
        self.dart_count() / 2
    }

    pub fn dart_facet(&self, d: usize) -> usize {
        self.dart_facet[d]
    }

    fn dart_pos(&self, d: usize) -> (usize, usize) {
        let f = self.dart_facet[d];
        (f, d - self.offsets[f])
    }

    pub fn tail(&self, d: usize) -> usize {
        let (f, k) = self.dart_pos(d);
        self.facets[f][k]
    }

    pub fn head(&self, d: usize) -> usize {
        let (f, k) = self.dart_pos(d);
        self.facets[f][(k + 1) % self.facets[f].len()]
    }

    pub fn next(&self, d: usize) -> usize {
        let (f, k) = self.dart_pos(d);
        self.offsets[f] + (k + 1) % self.facets[f].len()
    }

    pub fn prev(&self, d: usize) -> usize {
        let (f, k) = self.dart_pos(d);
        let len = self.facets[f].len();
        self.offsets[f] + (k + len - 1) % len
    }

    pub fn twin(&self, d: usize) -> usize {
        self.twin[d]
    }

    /// Rotation around the tail vertex.
    pub fn rotate(&self, d: usize) -> usize {
        self.twin[self.prev(d)]
    }

    pub fn edges(&self) -> Vec<Edge> {
        let mut out: Vec<Edge> =
            (0..self.dart_count()).map(|d| edge(self.tail(d), self.head(d))).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// The two facets on either side of an edge.
    pub fn edge_facets(&self, e: Edge) -> Option<(usize, usize)> {
        let d = (0..self.dart_count()).find(|&d| edge(self.tail(d), self.head(d)) == e)?;
        let (a, b) = (self.dart_facet[d], self.dart_facet[self.twin[d]]);
        Some((a.min(b), a.max(b)))
    }

    /// Facets around `v` in cyclic order.
    pub fn vertex_star(&self, v: usize) -> Vec<usize> {
        let Some(start) = (0..self.dart_count()).find(|&d| self.tail(d) == v) else { return Vec::new() };
        let mut out = vec![self.dart_facet[start]];
        let mut d = self.rotate(start);
        while d != start && out.len() <= self.facets.len() {
            out.push(self.dart_facet[d]);
            d = self.rotate(d);
        }
        out
    }

    pub fn vertex_degree(&self, v: usize) -> usize {
        self.facets.iter().filter(|c| c.contains(&v)).count()
    }

    pub fn is_simple(&self) -> bool {
        (0..self.vertex_count).all(|v| self.vertex_degree(v) == 3)
    }

    /// Neighbouring vertices of `v` in the 1-skeleton.
    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> =
            (0..self.dart_count()).filter(|&d| self.tail(d) == v).map(|d| self.head(d)).collect();
        out.sort_unstable();
        out
    }

    /// Facet-degree sequence sorted descending, e.g. `[6, 5, 5, 5, 4, 4, 4, 3]`.
    pub fn facet_degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.facets.iter().map(Vec::len).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    /// The same polyhedron with every facet cycle reversed.
    pub fn mirror(&self) -> CombPolyhedron3 {
        let facets = self
            .facets
            .iter()
            .map(|c| {
                let mut r = c.clone();
                r.reverse();
                r
            })
            .collect();
        CombPolyhedron3::new(facets).expect("mirror of a valid polyhedron")
    }

    /// Support of the face with the given facet set, for the geometric embedding
    /// where facet `i` is the hyperplane `r_i = 0`.
    pub fn support_of(&self, facet_set: &[usize]) -> Mask {
        let full: Mask = (1 << self.facet_count()) - 1;
        facet_set.iter().fold(full, |m, &f| m & !(1 << f))
    }

    pub fn vertex_facets(&self, v: usize) -> Vec<usize> {
        (0..self.facets.len()).filter(|&f| self.facets[f].contains(&v)).collect()
    }

    /// Face lattice of the geometric embedding in `R^F` (so `m = F - 4`).
    pub fn face_lattice(&self) -> Result<FaceLattice, TupleError> {
        let n = self.facet_count();
        if n > 63 {
            return Err(TupleError::BoundExceeded { n, bound: 63 });
        }
        let full: Mask = (1 << n) - 1;
        let mut faces: Vec<(Mask, usize)> = vec![(full, 3)];
        faces.extend((0..n).map(|f| (full & !(1 << f), 2)));
        for e in self.edges() {
            let (a, b) = self.edge_facets(e).expect("edge of the polyhedron");
            faces.push((self.support_of(&[a, b]), 1));
        }
        for v in 0..self.vertex_count {
            faces.push((self.support_of(&self.vertex_facets(v)), 0));
        }
        FaceLattice::from_supports(n, n - 4, faces)
    }

    /// Rebuilds a polyhedron from a 3-dimensional face lattice: facet `i` is `r_i = 0`.
    pub fn from_lattice(lattice: &FaceLattice) -> Result<Self, SmoothingError> {
        let bad = |msg: &str| Err(SmoothingError::InvalidPolyhedron(msg.to_string()));
        if lattice.dim() != Some(3) {
            return bad("face lattice is not 3-dimensional");
        }
        let n = lattice.n;
        let full: Mask = (1 << n) - 1;
        for i in 0..n {
            if lattice.get(full & !(1 << i)).map(|f| f.dim) != Some(2) {
                return Err(SmoothingError::NotGeometric(i));
            }
        }
        let verts: Vec<Mask> = lattice.vertices().map(|f| f.support).collect();
        let edges: Vec<(usize, usize)> = lattice
            .of_dim(1)
            .map(|e| {
                let ends: Vec<usize> =
                    (0..verts.len()).filter(|&v| verts[v] & !e.support == 0).collect();
                (ends[0], ends[1])
            })
            .collect();
        let edge_support: Vec<Mask> = lattice.of_dim(1).map(|e| e.support).collect();
        let mut facets = Vec::with_capacity(n);
        for i in 0..n {
            let in_facet: Vec<usize> =
                (0..edges.len()).filter(|&k| edge_support[k] >> i & 1 == 0).collect();
            let mut cyc = vec![edges[in_facet[0]].0, edges[in_facet[0]].1];
            let mut used = vec![in_facet[0]];
            while cyc.len() < in_facet.len() {
                let last = *cyc.last().unwrap();
                let Some(&k) = in_facet
                    .iter()
                    .find(|&&k| !used.contains(&k) && (edges[k].0 == last || edges[k].1 == last))
                else {
                    return bad("facet boundary is not a cycle");
                };
                used.push(k);
                cyc.push(if edges[k].0 == last { edges[k].1 } else { edges[k].0 });
            }
            facets.push(cyc);
        }
        Self::new(facets)
    }
}

/// Rebuilds facet cycles after renumbering vertices to `0..V` in first-seen order.
pub(crate) fn compact(facets: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    let mut map: BTreeMap<usize, usize> = BTreeMap::new();
    let mut seen: Vec<usize> = facets.iter().flatten().copied().collect();
    seen.sort_unstable();
    seen.dedup();
    for (i, v) in seen.into_iter().enumerate() {
        map.insert(v, i);
    }
    facets.into_iter().map(|c| c.into_iter().map(|v| map[&v]).collect()).collect()
}

/// Standard families and operations used to build reference polyhedra.
pub mod build {
    use super::*;

    /// Prism over a `k`-gon: bottom facet 0, top facet 1, then the sides.
    pub fn prism(k: usize) -> CombPolyhedron3 {
        let mut f = vec![(0..k).collect::<Vec<_>>(), (k..2 * k).collect()];
        for i in 0..k {
            let j = (i + 1) % k;
            f.push(vec![i, j, k + j, k + i]);
        }
        CombPolyhedron3::new(f).expect("prism")
    }

    /// Pyramid over a `k`-gon; apex is vertex `k`, base is facet 0.
    pub fn pyramid(k: usize) -> CombPolyhedron3 {
        let mut f = vec![(0..k).collect::<Vec<_>>()];
        for i in 0..k {
            f.push(vec![i, (i + 1) % k, k]);
        }
        CombPolyhedron3::new(f).expect("pyramid")
    }

    /// Bipyramid over a `k`-gon; apexes are vertices `k` and `k + 1`.
    pub fn bipyramid(k: usize) -> CombPolyhedron3 {
        let mut f = Vec::new();
        for i in 0..k {
            f.push(vec![i, (i + 1) % k, k]);
        }
        for i in 0..k {
            f.push(vec![i, (i + 1) % k, k + 1]);
        }
        CombPolyhedron3::new(f).expect("bipyramid")
    }

    pub fn tetrahedron() -> CombPolyhedron3 {
        pyramid(3)
    }

    pub fn cube() -> CombPolyhedron3 {
        prism(4)
    }

    /// Regular octahedron with vertices `A..F = 0..5` and facets
    /// `ABC, ABD, ADE, ACE, BDF, BCF, CEF, DEF` in that order.
    pub fn octahedron_labelled() -> CombPolyhedron3 {
        let (a, b, c, d, e, f) = (0, 1, 2, 3, 4, 5);
        CombPolyhedron3::new(vec![
            vec![a, b, c],
            vec![a, b, d],
            vec![a, d, e],
            vec![a, c, e],
            vec![b, d, f],
            vec![b, c, f],
            vec![c, e, f],
            vec![d, e, f],
        ])
        .expect("octahedron")
    }

    /// Rhombic dodecahedron: vertices `0..6` are `+-e_i` (the 4-valent ones),
    /// vertices `6..14` are the cube points `(+-1, +-1, +-1)`.
    pub fn rhombic_dodecahedron() -> CombPolyhedron3 {
        let axis = |i: usize, s: i32| 2 * i + usize::from(s < 0);
        let cube = |signs: [i32; 3]| {
            6 + signs.iter().enumerate().map(|(k, &s)| usize::from(s < 0) << k).sum::<usize>()
        };
        let mut facets = Vec::new();
        for i in 0..3 {
            for j in i + 1..3 {
                let k = 3 - i - j;
                for si in [1, -1] {
                    for sj in [1, -1] {
                        let mut up = [0; 3];
                        up[i] = si;
                        up[j] = sj;
                        up[k] = 1;
                        let mut down = up;
                        down[k] = -1;
                        facets.push(vec![axis(i, si), cube(up), axis(j, sj), cube(down)]);
                    }
                }
            }
        }
        CombPolyhedron3::new(facets).expect("rhombic dodecahedron")
    }

    /// Replaces the new vertices' boundary by a fresh facet traced from `new_edges`.
    fn close_with_facet(mut facets: Vec<Vec<usize>>, new_edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
        let mut cyc = vec![new_edges[0].0, new_edges[0].1];
        let mut used = vec![0];
        while cyc.len() < new_edges.len() {
            let last = *cyc.last().unwrap();
            let k = (0..new_edges.len())
                .find(|&k| !used.contains(&k) && (new_edges[k].0 == last || new_edges[k].1 == last))
                .expect("new edges form a cycle");
            used.push(k);
            cyc.push(if new_edges[k].0 == last { new_edges[k].1 } else { new_edges[k].0 });
        }
        facets.push(cyc);
        facets
    }

    /// Cuts off a simple vertex, adding a triangular facet last.
    pub fn truncate_vertex(p: &CombPolyhedron3, v: usize) -> Result<CombPolyhedron3, SmoothingError> {
        if p.vertex_degree(v) != 3 {
            return Err(SmoothingError::NotSimpleVertex(v));
        }
        let base = p.vertex_count();
        let nbrs = p.neighbours(v);
        let on_edge = |w: usize| base + nbrs.iter().position(|&x| x == w).unwrap();
        let mut new_edges = Vec::new();
        let facets: Vec<Vec<usize>> = p
            .facets()
            .iter()
            .map(|cyc| {
                let Some(k) = cyc.iter().position(|&x| x == v) else { return cyc.clone() };
                let len = cyc.len();
                let (before, after) = (cyc[(k + len - 1) % len], cyc[(k + 1) % len]);
                let (x, y) = (on_edge(before), on_edge(after));
                new_edges.push((x, y));
                let mut out = cyc.clone();
                out.splice(k..=k, [x, y]);
                out
            })
            .collect();
        CombPolyhedron3::new(compact(close_with_facet(facets, &new_edges)))
    }

    /// Replaces the edge `uv` between two simple vertices by a quadrilateral facet.
    pub fn truncate_edge(p: &CombPolyhedron3, u: usize, v: usize) -> Result<CombPolyhedron3, SmoothingError> {
        for w in [u, v] {
            if p.vertex_degree(w) != 3 {
                return Err(SmoothingError::NotSimpleVertex(w));
            }
        }
        if !p.neighbours(u).contains(&v) {
            return Err(SmoothingError::NotAnEdge(u, v));
        }
        let base = p.vertex_count();
        // New vertex on edge (end, other) for each end in {u, v} and other neighbour.
        let mut ids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (end, skip) in [(u, v), (v, u)] {
            for w in p.neighbours(end) {
                if w != skip {
                    let id = base + ids.len();
                    ids.insert((end, w), id);
                }
            }
        }
        let mut new_edges = Vec::new();
        let facets: Vec<Vec<usize>> = p
            .facets()
            .iter()
            .map(|cyc| {
                let len = cyc.len();
                let mut out = Vec::with_capacity(len + 2);
                for k in 0..len {
                    let x = cyc[k];
                    if x != u && x != v {
                        out.push(x);
                        continue;
                    }
                    let (before, after) = (cyc[(k + len - 1) % len], cyc[(k + 1) % len]);
                    let other = if x == u { v } else { u };
                    match (before == other, after == other) {
                        // Facet contains the whole edge: keep one new vertex per end.
                        (true, false) => out.push(ids[&(x, after)]),
                        (false, true) => out.push(ids[&(x, before)]),
                        _ => {
                            let (a, b) = (ids[&(x, before)], ids[&(x, after)]);
                            new_edges.push((a, b));
                            out.extend([a, b]);
                        }
                    }
                }
                if cyc.contains(&u) && cyc.contains(&v) {
                    let a = out.iter().copied().filter(|&y| y >= base).collect::<Vec<_>>();
                    new_edges.push((a[0], a[1]));
                }
                out
            })
            .collect();
        CombPolyhedron3::new(compact(close_with_facet(facets, &new_edges)))
    }
}

#[cfg(test)]
mod tests {
    use super::build::*;
    use super::*;

    #[test]
    fn basic_counts() {
        let c = cube();
        assert_eq!((c.vertex_count(), c.edge_count(), c.facet_count()), (8, 12, 6));
        assert!(c.is_simple());
        let o = octahedron_labelled();
        assert_eq!((o.vertex_count(), o.edge_count(), o.facet_count()), (6, 12, 8));
        assert!((0..6).all(|v| o.vertex_degree(v) == 4));
        let rd = rhombic_dodecahedron();
        assert_eq!((rd.vertex_count(), rd.edge_count(), rd.facet_count()), (14, 24, 12));
        assert_eq!((0..14).filter(|&v| rd.vertex_degree(v) == 4).count(), 6);
    }

    #[test]
    fn stars_are_cyclic() {
        let o = octahedron_labelled();
        let star = o.vertex_star(0);
        assert_eq!(star.len(), 4);
        // Consecutive facets in the star share an edge.
        for k in 0..4 {
            let (f, g) = (star[k], star[(k + 1) % 4]);
            let shared = o.facets()[f].iter().filter(|v| o.facets()[g].contains(v)).count();
            assert_eq!(shared, 2);
        }
    }

    #[test]
    fn truncations() {
        let t = truncate_vertex(&tetrahedron(), 0).unwrap();
        assert_eq!(t.facet_degrees(), vec![4, 4, 4, 3, 3]);
        let s = truncate_vertex(&prism(5), 0).unwrap();
        assert_eq!(s.facet_degrees(), vec![6, 5, 5, 5, 4, 4, 4, 3]);
        let g = truncate_edge(&prism(5), 0, 1).unwrap();
        assert_eq!(g.facet_degrees(), vec![5, 5, 5, 5, 4, 4, 4, 4]);
        assert!(g.is_simple());
        assert!(truncate_vertex(&octahedron_labelled(), 0).is_err());
    }

    #[test]
    fn lattice_round_trip() {
        let o = octahedron_labelled();
        let l = o.face_lattice().unwrap();
        assert_eq!(l.census(), vec![6, 12, 8, 1]);
        assert!(l.vertices().all(|v| v.depth == 1));
        let back = CombPolyhedron3::from_lattice(&l).unwrap();
        assert_eq!((back.vertex_count(), back.edge_count()), (6, 12));
    }

    #[test]
    fn invalid_inputs() {
        assert!(CombPolyhedron3::new(vec![vec![0, 1, 2]]).is_err());
        // Two triangles glued along their boundary: not a polytope.
        assert!(CombPolyhedron3::new(vec![vec![0, 1, 2], vec![0, 2, 1], vec![0, 1, 3], vec![1, 2, 3]]).is_err());
    }
}
