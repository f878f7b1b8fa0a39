//! Right-angled polyhedra in the Klein model of hyperbolic 3-space.
//!
//! Planes of `H^3` are Euclidean planes `n . x = c` meeting the open unit
//! ball. Right angles are decided exactly, twice: by the tangent vectors of
//! the two boundary circles at an ideal endpoint of the edge, and by the
//! Lorentzian product of the dual vectors `(c, n)` under `diag(-1, 1, 1, 1)`.

mod ledger;
mod lobachevsky;
mod volume;

pub use ledger::{volume_ledger, LedgerEntry, VolumeLedger};
pub use lobachevsky::{fourier_partial_sum, lobachevsky, LobachevskyValue};
pub use volume::{ideal_polyhedron_volume, ideal_polyhedron_volume_from, ideal_tetrahedron_volume};

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact::{int, rat, Rational};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HyperbolicError {
    #[error("vertex {0} lies outside the closed unit ball")]
    Hyperideal(usize),
    #[error("facet {0} has fewer than three vertices or collinear vertices")]
    DegenerateFacet(usize),
    #[error("vertex {vertex} is not on the plane of facet {facet}")]
    NotPlanar { facet: usize, vertex: usize },
    #[error("plane of facet {0} misses the open ball")]
    PlaneMissesBall(usize),
    #[error("edge {0}-{1} lies on {2} facets")]
    BadEdge(usize, usize, usize),
    #[error("vertex index {0} out of range")]
    VertexIndex(usize),
    #[error("tangent and Lorentzian tests disagree on edge {0}-{1}")]
    RouteDisagreement(usize, usize),
    #[error("vertex {0} is not ideal")]
    NotIdeal(usize),
    #[error("degenerate ideal tetrahedron")]
    DegenerateTetrahedron,
    #[error("point is not on the unit sphere")]
    NotOnSphere,
    #[error("fan volumes disagree: {0} vs {1}")]
    DecompositionMismatch(f64, f64),
}

pub type Point = [Rational; 3];

fn dot(a: &Point, b: &Point) -> Rational {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

fn cross(a: &Point, b: &Point) -> Point {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn sub(a: &Point, b: &Point) -> Point {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
}

pub fn point(x: Rational, y: Rational, z: Rational) -> Point {
    [x, y, z]
}

/// The plane `normal . x = offset`, oriented so the polyhedron lies on the
/// side `normal . x <= offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plane {
    pub normal: Point,
    pub offset: Rational,
}

impl Plane {
    /// Lorentzian product of the dual vectors `(c, n)`.
    pub fn lorentz(&self, other: &Plane) -> Rational {
        dot(&self.normal, &other.normal) - &self.offset * &other.offset
    }
}

impl fmt::Display for Plane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.normal;
        write!(f, "{a}x + {b}y + {c}z = {}", self.offset)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexClass {
    Ideal,
    Finite,
}

#[derive(Debug, Clone)]
pub struct KleinPolyhedron {
    pub vertices: Vec<Point>,
    pub labels: Vec<String>,
    pub facets: Vec<Vec<usize>>,
    pub planes: Vec<Plane>,
    /// Edges `(u, v)` with `u < v`, mapped to the two facets containing them.
    pub edges: BTreeMap<(usize, usize), (usize, usize)>,
}

impl KleinPolyhedron {
    /// Facets are cyclic vertex lists. Labels default to the vertex index.
    pub fn new(
        vertices: Vec<Point>,
        facets: Vec<Vec<usize>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self, HyperbolicError> {
        let one = int(1);
        for (i, v) in vertices.iter().enumerate() {
            if dot(v, v) > one {
                return Err(HyperbolicError::Hyperideal(i));
            }
        }
        let zero = Rational::zero();
        let n = vertices.len();
        let centroid = {
            let s = vertices.iter().fold([zero.clone(), zero.clone(), zero.clone()], |acc, v| {
                [&acc[0] + &v[0], &acc[1] + &v[1], &acc[2] + &v[2]]
            });
            let k = int(n.max(1) as i64);
            [&s[0] / &k, &s[1] / &k, &s[2] / &k]
        };
        let mut planes = Vec::with_capacity(facets.len());
        let mut edge_facets: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (fi, f) in facets.iter().enumerate() {
            if let Some(&bad) = f.iter().find(|&&v| v >= n) {
                return Err(HyperbolicError::VertexIndex(bad));
            }
            if f.len() < 3 {
                return Err(HyperbolicError::DegenerateFacet(fi));
            }
            let p0 = &vertices[f[0]];
            let mut normal = None;
            'outer: for j in 1..f.len() {
                for k in j + 1..f.len() {
                    let c = cross(&sub(&vertices[f[j]], p0), &sub(&vertices[f[k]], p0));
                    if c.iter().any(|x| !x.is_zero()) {
                        normal = Some(c);
                        break 'outer;
                    }
                }
            }
            let mut normal = normal.ok_or(HyperbolicError::DegenerateFacet(fi))?;
            let mut offset = dot(&normal, p0);
            for &v in f {
                if dot(&normal, &vertices[v]) != offset {
                    return Err(HyperbolicError::NotPlanar { facet: fi, vertex: v });
                }
            }
            if dot(&normal, &centroid) > offset {
                normal = normal.map(|x| -x);
                offset = -offset;
            }
            let plane = Plane { normal, offset };
            if plane.lorentz(&plane) <= zero {
                return Err(HyperbolicError::PlaneMissesBall(fi));
            }
            planes.push(plane);
            for i in 0..f.len() {
                let (a, b) = (f[i], f[(i + 1) % f.len()]);
                edge_facets.entry((a.min(b), a.max(b))).or_default().push(fi);
            }
        }
        let mut edges = BTreeMap::new();
        for ((a, b), fs) in edge_facets {
            if fs.len() != 2 {
                return Err(HyperbolicError::BadEdge(a, b, fs.len()));
            }
            edges.insert((a, b), (fs[0], fs[1]));
        }
        let labels = labels.unwrap_or_else(|| (0..n).map(|i| i.to_string()).collect());
        Ok(KleinPolyhedron { vertices, labels, facets, planes, edges })
    }

    pub fn vertex_class(&self, v: usize) -> Result<VertexClass, HyperbolicError> {
        let p = self.vertices.get(v).ok_or(HyperbolicError::VertexIndex(v))?;
        let r = dot(p, p);
        let one = int(1);
        if r == one {
            Ok(VertexClass::Ideal)
        } else if r < one {
            Ok(VertexClass::Finite)
        } else {
            Err(HyperbolicError::Hyperideal(v))
        }
    }

    pub fn vertex_classes(&self) -> Vec<VertexClass> {
        (0..self.vertices.len()).map(|v| self.vertex_class(v).expect("checked on construction")).collect()
    }

    pub fn edge_label(&self, (a, b): (usize, usize)) -> String {
        format!("{}{}", self.labels[a], self.labels[b])
    }

    pub fn vertex_f64(&self, v: usize) -> [f64; 3] {
        self.vertices[v].clone().map(|x| x.to_f64().unwrap_or(f64::NAN))
    }

    pub fn is_right_angled(&self) -> Result<RightAngleReport, HyperbolicError> {
        let mut edges = Vec::with_capacity(self.edges.len());
        for (&(a, b), &(f, g)) in &self.edges {
            let (p1, p2) = (&self.planes[f], &self.planes[g]);
            let l = p1.lorentz(p2);
            let cos_sq = &l * &l / (p1.lorentz(p1) * p2.lorentz(p2));
            let lorentz_orthogonal = l.is_zero();
            let mut tangent_products = Vec::new();
            for v in [a, b] {
                if self.vertex_class(v)? == VertexClass::Ideal {
                    let p = &self.vertices[v];
                    let t = dot(&cross(&p1.normal, p), &cross(&p2.normal, p));
                    tangent_products.push(t);
                }
            }
            let tangent_orthogonal = if tangent_products.is_empty() {
                None
            } else {
                let z = tangent_products.iter().all(Zero::is_zero);
                if tangent_products.iter().any(Zero::is_zero) != z || z != lorentz_orthogonal {
                    return Err(HyperbolicError::RouteDisagreement(a, b));
                }
                Some(z)
            };
            edges.push(EdgeAngle {
                edge: (a, b),
                label: self.edge_label((a, b)),
                facets: (f, g),
                tangent_product: tangent_products.first().map(|t| t.to_string()),
                tangent_orthogonal,
                cos_squared: cos_sq.to_string(),
                orthogonal: lorentz_orthogonal,
            });
        }
        Ok(RightAngleReport { edges })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgeAngle {
    pub edge: (usize, usize),
    pub label: String,
    pub facets: (usize, usize),
    /// `<n_1 x p, n_2 x p>` at the first ideal endpoint `p`, if any.
    pub tangent_product: Option<String>,
    pub tangent_orthogonal: Option<bool>,
    /// Squared cosine of the dihedral angle, from the Lorentzian route.
    pub cos_squared: String,
    pub orthogonal: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RightAngleReport {
    pub edges: Vec<EdgeAngle>,
}

impl RightAngleReport {
    pub fn all_orthogonal(&self) -> bool {
        self.edges.iter().all(|e| e.orthogonal)
    }

    pub fn failing(&self) -> Vec<String> {
        self.edges.iter().filter(|e| !e.orthogonal).map(|e| e.label.clone()).collect()
    }
}

fn labels(s: &str) -> Option<Vec<String>> {
    Some(s.chars().map(String::from).collect())
}

/// Triangular bipyramid with ideal equator `B = e_3`, `C = e_2`, `D = e_1`
/// and finite apices `A = 0`, `E = (a, a, a)`.
pub fn bipyramid(a: Rational) -> Result<KleinPolyhedron, HyperbolicError> {
    let (z, o) = (int(0), int(1));
    let vertices = vec![
        point(z.clone(), z.clone(), z.clone()),
        point(z.clone(), z.clone(), o.clone()),
        point(z.clone(), o.clone(), z.clone()),
        point(o, z.clone(), z),
        point(a.clone(), a.clone(), a),
    ];
    let facets = vec![vec![0, 1, 2], vec![0, 2, 3], vec![0, 1, 3], vec![4, 1, 2], vec![4, 2, 3], vec![4, 1, 3]];
    KleinPolyhedron::new(vertices, facets, labels("ABCDE"))
}

/// Regular octahedron with vertices `±e_i`, labelled `A..F` with facets
/// `ABC, ABD, ADE, ACE, BDF, BCF, CEF, DEF`.
pub fn octahedron() -> KleinPolyhedron {
    let (z, o, m) = (int(0), int(1), int(-1));
    let vertices = vec![
        point(z.clone(), z.clone(), o.clone()),
        point(o.clone(), z.clone(), z.clone()),
        point(z.clone(), o, z.clone()),
        point(z.clone(), m.clone(), z.clone()),
        point(m.clone(), z.clone(), z.clone()),
        point(z.clone(), z, m),
    ];
    let facets = vec![
        vec![0, 1, 2],
        vec![0, 1, 3],
        vec![0, 3, 4],
        vec![0, 2, 4],
        vec![1, 3, 5],
        vec![1, 2, 5],
        vec![2, 4, 5],
        vec![3, 4, 5],
    ];
    KleinPolyhedron::new(vertices, facets, labels("ABCDEF")).expect("octahedron")
}

/// Rhombic dodecahedron with ideal vertices `±e_i` and finite vertices
/// `(±1/2, ±1/2, ±1/2)`.
pub fn rhombic_dodecahedron() -> KleinPolyhedron {
    let h = rat(1, 2);
    let mut vertices = Vec::new();
    for i in 0..3 {
        for s in [1, -1] {
            let mut p = [int(0), int(0), int(0)];
            p[i] = int(s);
            vertices.push(p);
        }
    }
    let cube_index = |s: [i64; 3]| 6 + s.iter().fold(0, |acc, &x| 2 * acc + usize::from(x < 0));
    for k in 0..8usize {
        let s = [(k >> 2) & 1, (k >> 1) & 1, k & 1].map(|b| if b == 1 { -1 } else { 1 });
        vertices.push(s.map(|x| &h * int(x)));
    }
    let mut facets = Vec::new();
    for i in 0..3 {
        for j in i + 1..3 {
            let k = 3 - i - j;
            for si in [1i64, -1] {
                for sj in [1i64, -1] {
                    let ideal = |axis: usize, s: i64| 2 * axis + usize::from(s < 0);
                    let corner = |sk: i64| {
                        let mut s = [0i64; 3];
                        s[i] = si;
                        s[j] = sj;
                        s[k] = sk;
                        cube_index(s)
                    };
                    facets.push(vec![ideal(i, si), corner(1), ideal(j, sj), corner(-1)]);
                }
            }
        }
    }
    let mut names: Vec<String> = ["+x", "-x", "+y", "-y", "+z", "-z"].iter().map(|s| s.to_string()).collect();
    for k in 0..8usize {
        let s: String = (0..3).map(|b| if (k >> (2 - b)) & 1 == 1 { '-' } else { '+' }).collect();
        names.push(format!("({s})"));
    }
    KleinPolyhedron::new(vertices, facets, Some(names)).expect("rhombic dodecahedron")
}
