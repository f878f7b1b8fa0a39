//! Volumes of ideal polyhedra.

use num_complex::Complex64 as C;

use super::lobachevsky::lobachevsky;
use super::{HyperbolicError, KleinPolyhedron, VertexClass};

const TOL: f64 = 1e-15;
const SPHERE_TOL: f64 = 1e-12;

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn unit(a: [f64; 3]) -> [f64; 3] {
    let n = dot(a, a).sqrt();
    a.map(|x| x / n)
}

/// Orthonormal frame `(u, v)` completing `pole` to a basis.
fn frame(pole: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let axis = if pole[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let u = unit(cross(pole, axis));
    (u, cross(pole, u))
}

/// Stereographic projection from `pole`. `None` for the pole itself.
fn project(pole: [f64; 3], frame: ([f64; 3], [f64; 3]), p: [f64; 3]) -> Option<C> {
    let d = 1.0 - dot(p, pole);
    (d > SPHERE_TOL).then(|| C::new(dot(p, frame.0) / d, dot(p, frame.1) / d))
}

/// Shape `z` of the tetrahedron with vertices `w1, w2, w3, w4`, the image of
/// `w3` under the Möbius map sending `w1, w2, w4` to `0, 1, ∞`.
fn shape(w: [Option<C>; 4]) -> Option<C> {
    match w {
        [Some(a), Some(b), Some(c), None] => Some((c - a) / (b - a)),
        [Some(a), Some(b), Some(c), Some(d)] => Some((c - a) * (b - d) / ((c - d) * (b - a))),
        _ => None,
    }
}

fn volume_of_shape(z: C) -> Result<f64, HyperbolicError> {
    if z.im.abs() <= 1e-12 * z.norm().max(1.0) {
        return Err(HyperbolicError::DegenerateTetrahedron);
    }
    let one = C::new(1.0, 0.0);
    let a = z.arg();
    let b = (one / (one - z)).arg();
    let c = (one - one / z).arg();
    Ok((lobachevsky(a, TOL).value + lobachevsky(b, TOL).value + lobachevsky(c, TOL).value).abs())
}

fn volume_from_pole(p: &[[f64; 3]; 4], pole: [f64; 3]) -> Result<f64, HyperbolicError> {
    let f = frame(pole);
    let w = p.map(|q| project(pole, f, q));
    let z = shape(w).ok_or(HyperbolicError::DegenerateTetrahedron)?;
    volume_of_shape(z)
}

/// Volume of the ideal tetrahedron with the given vertices on the unit sphere.
///
/// Two normalizations are computed, one sending `p4` to `∞`, one projecting
/// from a pole away from all four points, and they must agree.
pub fn ideal_tetrahedron_volume(p: [[f64; 3]; 4]) -> Result<f64, HyperbolicError> {
    for q in &p {
        if (dot(*q, *q) - 1.0).abs() > SPHERE_TOL {
            return Err(HyperbolicError::NotOnSphere);
        }
    }
    for i in 0..4 {
        for j in i + 1..4 {
            if dot(p[i], p[j]) > 1.0 - SPHERE_TOL {
                return Err(HyperbolicError::DegenerateTetrahedron);
            }
        }
    }
    let v1 = volume_from_pole(&p, p[3])?;
    // A second pole: the unit vector farthest from the four points among a few candidates.
    let candidates = [
        unit([0.31, -0.47, 0.83]),
        unit([-0.61, 0.29, -0.74]),
        unit([0.7, 0.7, -0.14]),
        unit([-0.2, -0.9, -0.38]),
    ];
    let pole = candidates
        .into_iter()
        .min_by(|a, b| {
            let ma = p.iter().map(|q| dot(*q, *a)).fold(f64::MIN, f64::max);
            let mb = p.iter().map(|q| dot(*q, *b)).fold(f64::MIN, f64::max);
            ma.total_cmp(&mb)
        })
        .expect("candidates");
    let v2 = volume_from_pole(&p, pole)?;
    if (v1 - v2).abs() > 1e-10 {
        return Err(HyperbolicError::DecompositionMismatch(v1, v2));
    }
    Ok(v1)
}

/// Fan volume from `apex`: cone over every facet missing the apex, each
/// facet triangulated from its first vertex.
pub fn ideal_polyhedron_volume_from(p: &KleinPolyhedron, apex: usize) -> Result<f64, HyperbolicError> {
    for (v, c) in p.vertex_classes().into_iter().enumerate() {
        if c != VertexClass::Ideal {
            return Err(HyperbolicError::NotIdeal(v));
        }
    }
    if apex >= p.vertices.len() {
        return Err(HyperbolicError::VertexIndex(apex));
    }
    let a = p.vertex_f64(apex);
    let mut total = 0.0;
    for f in p.facets.iter().filter(|f| !f.contains(&apex)) {
        let b = p.vertex_f64(f[0]);
        for w in f[1..].windows(2) {
            total += ideal_tetrahedron_volume([a, b, p.vertex_f64(w[0]), p.vertex_f64(w[1])])?;
        }
    }
    Ok(total)
}

/// Fan volume from every apex; they must agree within `1e-9`.
pub fn ideal_polyhedron_volume(p: &KleinPolyhedron) -> Result<f64, HyperbolicError> {
    let first = ideal_polyhedron_volume_from(p, 0)?;
    for apex in 1..p.vertices.len() {
        let v = ideal_polyhedron_volume_from(p, apex)?;
        if (v - first).abs() > 1e-9 {
            return Err(HyperbolicError::DecompositionMismatch(first, v));
        }
    }
    Ok(first)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::{octahedron, rhombic_dodecahedron};
    use std::f64::consts::PI;

    fn regular() -> [[f64; 3]; 4] {
        let s = 1.0 / 3f64.sqrt();
        [[s, s, s], [s, -s, -s], [-s, s, -s], [-s, -s, s]]
    }

    #[test]
    fn regular_ideal_tetrahedron() {
        let v = ideal_tetrahedron_volume(regular()).unwrap();
        assert!((v - 3.0 * lobachevsky(PI / 3.0, 1e-15).value).abs() < 1e-12);
        assert!((v - 1.014_941_6).abs() < 1e-7);
    }

    #[test]
    fn permutations_agree() {
        let p = regular();
        let base = ideal_tetrahedron_volume(p).unwrap();
        let q = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, -1.0]];
        let other = ideal_tetrahedron_volume(q).unwrap();
        let perms = [[1, 0, 2, 3], [3, 2, 1, 0], [2, 3, 0, 1], [0, 2, 3, 1]];
        for s in perms {
            assert!((ideal_tetrahedron_volume(s.map(|i| p[i])).unwrap() - base).abs() < 1e-12);
            assert!((ideal_tetrahedron_volume(s.map(|i| q[i])).unwrap() - other).abs() < 1e-12);
        }
    }

    #[test]
    fn octahedron_quarter() {
        let q = [[0.0, 0.0, 1.0], [0.0, 0.0, -1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]];
        let v = ideal_tetrahedron_volume(q).unwrap();
        assert!((v - 2.0 * lobachevsky(PI / 4.0, 1e-15).value).abs() < 1e-12);
        assert!((v - 0.915_965_6).abs() < 1e-7);
    }

    #[test]
    fn octahedron_volume() {
        let o = octahedron();
        let v = ideal_polyhedron_volume(&o).unwrap();
        assert!((v - 8.0 * lobachevsky(PI / 4.0, 1e-15).value).abs() < 1e-9);
        assert!((v - 3.663_862_3).abs() < 1e-7);
    }

    #[test]
    fn rejects_finite_vertices_and_degenerate() {
        assert!(matches!(
            ideal_polyhedron_volume(&rhombic_dodecahedron()),
            Err(HyperbolicError::NotIdeal(6))
        ));
        let flat = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, -1.0, 0.0]];
        assert_eq!(ideal_tetrahedron_volume(flat), Err(HyperbolicError::DegenerateTetrahedron));
        let off = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.5]];
        assert_eq!(ideal_tetrahedron_volume(off), Err(HyperbolicError::NotOnSphere));
    }
}
