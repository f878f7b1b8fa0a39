//! Symbolic topological types of `Z(P)` in a connected-sum algebra.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::exact::{rational_rank, Rational, RatMatrix};
use crate::smoothing::catalog::catalog_name;
use crate::smoothing::{canonical_form, CanonicalKey, CombPolyhedron3};
use crate::tuple::{detect_suspension, enumerate_faces, is_weakly_hyperbolic, Tuple};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TypeError {
    #[error("polygon needs at least 3 sides, got {0}")]
    PolygonTooSmall(usize),
    #[error("recognition paths disagree: {0} vs {1}")]
    Disagreement(String, String),
    #[error("cannot predict Betti numbers of an unrecognized type")]
    Unrecognized,
}

/// `g_n = 2^{n-3}(n-4) + 1`: genus of the surface over an `n`-gon with `m = 2`.
pub fn surface_genus(n: usize) -> Result<u64, TypeError> {
    if n < 3 {
        return Err(TypeError::PolygonTooSmall(n));
    }
    // For n = 3 the formula gives 2^0 * (-1) + 1 = 0.
    Ok(((1i64 << (n - 3)) * (n as i64 - 4) + 1) as u64)
}

/// Plumbing data for a graph manifold built from circle bundles over surfaces.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct GraphManifoldDescriptor {
    /// Genus of the base surface of each piece.
    pub genus: Vec<u64>,
    /// `(piece, boundary index, piece, boundary index)`; gluings exchange fiber and section.
    pub gluings: Vec<(usize, usize, usize, usize)>,
}

impl GraphManifoldDescriptor {
    pub fn piece_count(&self) -> usize {
        self.genus.len()
    }

    pub fn boundary_count(&self, piece: usize) -> usize {
        self.gluings.iter().map(|g| usize::from(g.0 == piece) + usize::from(g.2 == piece)).sum()
    }

    /// First Betti number by Mayer-Vietoris over the gluing tori.
    pub fn first_betti(&self) -> usize {
        // Piece basis: 2g genus classes, boundary sections c_1..c_{b-1} (c_b = -sum), fiber.
        let mut base = Vec::new();
        let mut total = 0;
        for p in 0..self.piece_count() {
            base.push(total);
            total += 2 * self.genus[p] as usize + self.boundary_count(p);
        }
        let width = |p: usize| 2 * self.genus[p] as usize + self.boundary_count(p);
        let section = |p: usize, i: usize| -> Vec<(usize, i64)> {
            let b = self.boundary_count(p);
            let off = base[p] + 2 * self.genus[p] as usize;
            if i + 1 < b { vec![(off + i, 1)] } else { (0..b - 1).map(|k| (off + k, -1)).collect() }
        };
        let fiber = |p: usize| vec![(base[p] + width(p) - 1, 1i64)];
        let mut rows = Vec::new();
        for &(p, i, q, j) in &self.gluings {
            for (here, there) in [(section(p, i), fiber(q)), (fiber(p), section(q, j))] {
                let mut row = vec![Rational::from_integer(0.into()); total];
                for (k, v) in here {
                    row[k] += Rational::from_integer(v.into());
                }
                for (k, v) in there {
                    row[k] -= Rational::from_integer(v.into());
                }
                rows.push(row);
            }
        }
        let image = RatMatrix::from_rows(rows).map_or(0, |m| rational_rank(&m));
        // Kernel of H_0 of the tori onto H_0 of the pieces: cycles of the plumbing graph.
        let cycles = self.gluings.len() + 1 - self.piece_count();
        total - image + cycles
    }
}

/// Eight `(4-holed torus) x S^1` pieces plumbed along `K_{4,4}`.
pub fn gbp5_descriptor() -> GraphManifoldDescriptor {
    let mut gluings = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            gluings.push((i, j, 4 + j, i));
        }
    }
    GraphManifoldDescriptor { genus: vec![1; 8], gluings }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Atom {
    /// Closed orientable surface of genus `g` times a circle.
    SurfaceTimesCircle(u64),
    Torus3,
    GraphManifold(GraphManifoldDescriptor),
    Suspension(Box<TypeExpr>),
    /// `S^a x S^b`; sorts last so handles print at the end.
    SphereProduct(usize, usize),
}

impl Atom {
    fn normalize(self) -> Option<Atom> {
        match self {
            Atom::SurfaceTimesCircle(0) => Some(Atom::SphereProduct(2, 1)),
            Atom::SurfaceTimesCircle(1) => Some(Atom::Torus3),
            Atom::SphereProduct(a, b) => Some(Atom::SphereProduct(a.max(b), a.min(b))),
            other => Some(other),
        }
    }

    fn dim(&self) -> usize {
        match self {
            Atom::SphereProduct(a, b) => a + b,
            Atom::Suspension(t) => t.dim + 1,
            _ => 3,
        }
    }

    fn betti(&self) -> Vec<usize> {
        match self {
            Atom::SphereProduct(a, b) => {
                let mut v = vec![0; a + b + 1];
                v[0] += 1;
                v[*a] += 1;
                v[*b] += 1;
                v[a + b] += 1;
                v
            }
            Atom::SurfaceTimesCircle(g) => vec![1, 2 * *g as usize + 1, 2 * *g as usize + 1, 1],
            Atom::Torus3 => vec![1, 3, 3, 1],
            Atom::Suspension(t) => {
                let inner = t.betti();
                let mut v = vec![1];
                v.extend(inner.iter().enumerate().map(|(k, &b)| if k == 0 { b - 1 } else { b }));
                v
            }
            Atom::GraphManifold(d) => {
                let b1 = d.first_betti();
                vec![1, b1, b1, 1]
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::SphereProduct(a, b) => write!(f, "S^{a} x S^{b}"),
            Atom::SurfaceTimesCircle(g) => write!(f, "S_{g} x S^1"),
            Atom::Torus3 => write!(f, "T^3"),
            Atom::Suspension(t) => write!(f, "Susp({t})"),
            Atom::GraphManifold(d) => write!(f, "graph manifold ({} pieces, {} tori)", d.piece_count(), d.gluings.len()),
        }
    }
}

/// A connected sum of atoms of dimension `dim`; the empty sum is the sphere.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TypeExpr {
    pub dim: usize,
    pub summands: BTreeMap<Atom, usize>,
}

impl TypeExpr {
    pub fn sphere(dim: usize) -> Self {
        TypeExpr { dim, summands: BTreeMap::new() }
    }

    pub fn atom(a: Atom) -> Self {
        let dim = a.dim();
        Self::sum(dim, [(a, 1)])
    }

    pub fn sum(dim: usize, parts: impl IntoIterator<Item = (Atom, usize)>) -> Self {
        let mut summands = BTreeMap::new();
        for (a, k) in parts {
            if let Some(a) = a.normalize() {
                if k > 0 {
                    *summands.entry(a).or_insert(0) += k;
                }
            }
        }
        TypeExpr { dim, summands }
    }

    pub fn connect(&self, other: &TypeExpr) -> TypeExpr {
        let parts = self.summands.iter().chain(&other.summands).map(|(a, &k)| (a.clone(), k));
        Self::sum(self.dim, parts)
    }

    pub fn times(&self, k: usize) -> TypeExpr {
        Self::sum(self.dim, self.summands.iter().map(|(a, &c)| (a.clone(), c * k)))
    }

    pub fn is_sphere(&self) -> bool {
        self.summands.is_empty()
    }

    /// Betti numbers; connected sums add them in the middle degrees.
    pub fn betti(&self) -> Vec<usize> {
        // A lone atom may be disconnected (S^a x S^0), so take its numbers directly.
        if let [(a, 1)] = self.summands.iter().map(|(a, &k)| (a, k)).collect::<Vec<_>>()[..] {
            return a.betti();
        }
        let mut v = vec![0; self.dim + 1];
        v[0] = 1;
        v[self.dim] += 1;
        for (a, &k) in &self.summands {
            let b = a.betti();
            for i in 1..self.dim {
                v[i] += k * b[i];
            }
        }
        v
    }
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return write!(f, "S^{}", self.dim);
        }
        let parts: Vec<String> = self
            .summands
            .iter()
            .map(|(a, &k)| if k == 1 { a.to_string() } else { format!("{k}({a})") })
            .collect();
        write!(f, "{}", parts.join(" # "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Naming {
    Known(TypeExpr),
    Unrecognized,
}

impl Naming {
    pub fn known(&self) -> Option<&TypeExpr> {
        match self {
            Naming::Known(t) => Some(t),
            Naming::Unrecognized => None,
        }
    }
}

impl fmt::Display for Naming {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Naming::Known(t) => write!(f, "{t}"),
            Naming::Unrecognized => write!(f, "unrecognized"),
        }
    }
}

/// `Z # Z # (2^{n-d} - 1)(S^{d-1} x S^1)`.
pub fn truncate_type(z: &TypeExpr, n: usize, d: usize) -> TypeExpr {
    let extra = (1usize << (n - d)) - 1;
    z.times(2).connect(&TypeExpr::sum(z.dim, [(Atom::SphereProduct(d - 1, 1), extra)]))
}

pub fn predicted_betti(t: &Naming) -> Result<Vec<usize>, TypeError> {
    t.known().map(TypeExpr::betti).ok_or(TypeError::Unrecognized)
}

/// Recognizer with memoization on unmarked canonical keys.
#[derive(Default)]
pub struct Namer {
    memo: HashMap<CanonicalKey, Naming>,
}

/// Two disjoint `k`-gons joined by `k` quadrilaterals.
fn prism_order(p: &CombPolyhedron3) -> Option<usize> {
    let k = p.facet_count().checked_sub(2)?;
    if k < 3 || p.vertex_count() != 2 * k || !p.is_simple() {
        return None;
    }
    let big: Vec<&Vec<usize>> = p.facets().iter().filter(|f| f.len() == k).collect();
    let quads = p.facets().iter().filter(|f| f.len() == 4).count();
    for (i, a) in big.iter().enumerate() {
        for b in &big[i + 1..] {
            let disjoint = a.iter().all(|v| !b.contains(v));
            if disjoint && (quads == k || (k == 4 && quads == 6)) {
                return Some(k);
            }
        }
    }
    None
}

/// Collapses a triangular facet of trivalent vertices to a single vertex.
fn contract_triangle(p: &CombPolyhedron3, t: usize) -> Option<CombPolyhedron3> {
    let tri = &p.facets()[t];
    if tri.len() != 3 || tri.iter().any(|&v| p.vertex_degree(v) != 3) {
        return None;
    }
    let w = p.vertex_count();
    let facets: Vec<Vec<usize>> = p
        .facets()
        .iter()
        .enumerate()
        .filter(|&(f, _)| f != t)
        .map(|(_, cyc)| {
            let mut out: Vec<usize> = Vec::with_capacity(cyc.len());
            for &v in cyc {
                let v = if tri.contains(&v) { w } else { v };
                if out.last() != Some(&v) {
                    out.push(v);
                }
            }
            if out.len() > 1 && out.first() == out.last() {
                out.pop();
            }
            out
        })
        .collect();
    CombPolyhedron3::new(crate::smoothing::polyhedron::compact(facets)).ok()
}

impl Namer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn name_polyhedron(&mut self, p: &CombPolyhedron3) -> Result<Naming, TypeError> {
        let key = canonical_form(p, &BTreeSet::new());
        if let Some(n) = self.memo.get(&key) {
            return Ok(n.clone());
        }
        let out = self.recognize(p)?;
        self.memo.insert(key, out.clone());
        Ok(out)
    }

    fn recognize(&mut self, p: &CombPolyhedron3) -> Result<Naming, TypeError> {
        if !p.is_simple() {
            return Ok(Naming::Unrecognized);
        }
        if p.facet_count() == 4 {
            return Ok(Naming::Known(TypeExpr::sphere(3)));
        }
        if let Some(k) = prism_order(p) {
            return Ok(Naming::Known(TypeExpr::atom(Atom::SurfaceTimesCircle(surface_genus(k)?))));
        }
        let mut found: Option<TypeExpr> = None;
        for t in 0..p.facet_count() {
            let Some(q) = contract_triangle(p, t) else { continue };
            let Naming::Known(z) = self.name_polyhedron(&q)? else { continue };
            let r = truncate_type(&z, q.facet_count(), 3);
            match &found {
                Some(prev) if *prev != r => return Err(TypeError::Disagreement(prev.to_string(), r.to_string())),
                _ => found = Some(r),
            }
        }
        if let Some(r) = found {
            return Ok(Naming::Known(r));
        }
        if catalog_name(p) == Some("GBP5") {
            return Ok(Naming::Known(TypeExpr::atom(Atom::GraphManifold(gbp5_descriptor()))));
        }
        Ok(Naming::Unrecognized)
    }

    pub fn name_tuple(&mut self, t: &Tuple) -> Result<Naming, TypeError> {
        let susp = detect_suspension(t);
        if susp.zero_count > 0 {
            let Some(reduced) = susp.reduced else { return Ok(Naming::Unrecognized) };
            let mut inner = self.name_tuple(&reduced)?;
            for _ in 0..susp.zero_count {
                inner = match inner {
                    Naming::Known(e) => Naming::Known(TypeExpr::atom(Atom::Suspension(Box::new(e)))),
                    Naming::Unrecognized => Naming::Unrecognized,
                };
            }
            return Ok(inner);
        }
        let Ok(wh) = is_weakly_hyperbolic(t) else { return Ok(Naming::Unrecognized) };
        if !wh.holds {
            return Ok(Naming::Unrecognized);
        }
        if t.m() == 1 {
            let pos = t.vectors().iter().filter(|v| v[0] > Rational::from_integer(0.into())).count();
            let (p, q) = (pos, t.n() - pos);
            return Ok(Naming::Known(TypeExpr::atom(Atom::SphereProduct(p - 1, q - 1))));
        }
        let Ok(lattice) = enumerate_faces(t) else { return Ok(Naming::Unrecognized) };
        let Some(d) = lattice.dim() else { return Ok(Naming::Unrecognized) };
        if lattice.of_dim(d.saturating_sub(1)).count() == d + 1 && lattice.vertices().count() == d + 1 {
            return Ok(Naming::Known(TypeExpr::sphere(t.n() - t.m() - 1)));
        }
        if d == 3 {
            if let Ok(p) = CombPolyhedron3::from_lattice(&lattice) {
                return self.name_polyhedron(&p);
            }
        }
        Ok(Naming::Unrecognized)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smoothing::build::*;
    use crate::smoothing::catalog::simple_catalog;

    fn s2s1(k: usize) -> TypeExpr {
        TypeExpr::sum(3, [(Atom::SphereProduct(2, 1), k)])
    }

    #[test]
    fn genus_values() {
        assert_eq!(surface_genus(3).unwrap(), 0);
        assert_eq!(surface_genus(4).unwrap(), 1);
        assert_eq!(surface_genus(5).unwrap(), 5);
        assert_eq!(surface_genus(6).unwrap(), 17);
        assert!(surface_genus(2).is_err());
    }

    #[test]
    fn truncation_formula() {
        let s3 = TypeExpr::sphere(3);
        assert_eq!(truncate_type(&s3, 4, 3), s2s1(1));
        assert_eq!(truncate_type(&s2s1(1), 5, 3), s2s1(5));
        let mut z = s3;
        for n in 4..8 {
            z = truncate_type(&z, n, 3);
        }
        assert_eq!(z, s2s1(49));
        assert_eq!(z.to_string(), "49(S^2 x S^1)");
    }

    #[test]
    fn gbp5_plumbing() {
        let d = gbp5_descriptor();
        assert_eq!(d.piece_count(), 8);
        assert!((0..8).all(|p| d.boundary_count(p) == 4));
        assert_eq!(d.gluings.len(), 16);
        assert_eq!(d.first_betti(), 31);
    }

    #[test]
    fn catalog_names() {
        let mut namer = Namer::new();
        let names: BTreeMap<&str, String> = simple_catalog()
            .iter()
            .map(|e| (e.label, namer.name_polyhedron(&e.polyhedron).unwrap().to_string()))
            .collect();
        assert_eq!(names["C"], "T^3");
        assert_eq!(names["T2"], "5(S^2 x S^1)");
        assert_eq!(names["Scutoid"], "2(S_5 x S^1) # 15(S^2 x S^1)");
        assert_eq!(names["Dürer solid"], "4(T^3) # 29(S^2 x S^1)");
        assert_eq!(names["cube truncated at two adjacent vertices"], names["Dürer solid"]);
        assert_eq!(names["Hexagonal prism"], "S_17 x S^1");
        assert_eq!(names["4-truncated tetrahedron"], "49(S^2 x S^1)");
        assert_eq!(names["triangular prism"], "S^2 x S^1");
        assert!(names["GBP5"].starts_with("graph manifold"));
    }

    #[test]
    fn betti_predictions() {
        assert_eq!(s2s1(5).betti(), vec![1, 5, 5, 1]);
        assert_eq!(TypeExpr::atom(Atom::SurfaceTimesCircle(17)).betti(), vec![1, 35, 35, 1]);
        assert_eq!(TypeExpr::atom(Atom::GraphManifold(gbp5_descriptor())).betti(), vec![1, 31, 31, 1]);
        assert!(predicted_betti(&Naming::Unrecognized).is_err());
    }

    #[test]
    fn m1_and_suspension() {
        let mut namer = Namer::new();
        let t = Tuple::from_ints(1, &[vec![-1], vec![-1], vec![1], vec![1]]).unwrap();
        assert_eq!(namer.name_tuple(&t).unwrap().to_string(), "S^1 x S^1");
        let s = Tuple::from_ints(1, &[vec![-1], vec![-1], vec![1], vec![1], vec![0]]).unwrap();
        let n = namer.name_tuple(&s).unwrap();
        assert_eq!(n.to_string(), "Susp(S^1 x S^1)");
        assert_eq!(predicted_betti(&n).unwrap(), vec![1, 0, 2, 1]);
        let two = Tuple::from_ints(1, &[vec![-1], vec![1], vec![1]]).unwrap();
        assert_eq!(predicted_betti(&namer.name_tuple(&two).unwrap()).unwrap(), vec![2, 2]);
        assert_eq!(namer.name_polyhedron(&prism(7)).unwrap().to_string(), "S_49 x S^1");
        assert_eq!(namer.name_polyhedron(&octahedron_labelled()).unwrap(), Naming::Unrecognized);
    }
}
