use std::collections::BTreeSet;

use coaxial::groups::{
    abelianization, coloring_ends, commutator, commuting_pairs, kernel_presentation, orbifold_group,
    recognize_elementary_abelian, small_cover_colorings, Presentation, TwoGroupEpimorphism,
};
use coaxial::io::lookup;
use coaxial::smoothing::build;
use coaxial::tuple::{enumerate_faces, FaceLattice};
use num_bigint::BigInt;

/// Facets numbered from one, as in the usual picture of the octahedron.
fn octahedron() -> FaceLattice {
    build::octahedron_labelled().face_lattice().unwrap()
}

fn one_based(pairs: &[(usize, usize)]) -> BTreeSet<(usize, usize)> {
    pairs.iter().map(|&(a, b)| (a.min(b) - 1, a.max(b) - 1)).collect()
}

const EDGE_PAIRS: [(usize, usize); 12] =
    [(1, 2), (2, 3), (3, 4), (4, 1), (5, 6), (6, 7), (7, 8), (8, 5), (1, 6), (2, 5), (3, 8), (4, 7)];

#[test]
fn octahedron_punctured_pairs_are_the_edges() {
    assert_eq!(commuting_pairs(&octahedron(), true), one_based(&EDGE_PAIRS));
}

#[test]
fn octahedron_unpunctured_pairs() {
    let extra = [
        (1, 3), (2, 4), (5, 7), (6, 8), (1, 7), (4, 6), (1, 5), (2, 6), (3, 7), (4, 8), (3, 8), (4, 7), (3, 5), (2, 8),
    ];
    let mut want = one_based(&EDGE_PAIRS);
    want.extend(one_based(&extra));
    // (3,8) and (4,7) are already edges, so 24 pairs commute and the 4 antipodal ones do not.
    assert_eq!(want.len(), 24);
    let got = commuting_pairs(&octahedron(), false);
    assert_eq!(got, want);
    let missing: Vec<_> = (0..8).flat_map(|i| (i + 1..8).map(move |j| (i, j))).filter(|p| !got.contains(p)).collect();
    assert_eq!(missing.len(), 4);
    let covered: BTreeSet<usize> = missing.iter().flat_map(|&(a, b)| [a, b]).collect();
    assert_eq!(covered.len(), 8);
    assert_eq!(recognize_elementary_abelian(&orbifold_group(&octahedron(), false).unwrap()), None);
}

#[test]
fn bipyramid_unpunctured_is_elementary_abelian() {
    let l = build::bipyramid(3).face_lattice().unwrap();
    assert_eq!(commuting_pairs(&l, false).len(), 15);
    let g = orbifold_group(&l, false).unwrap();
    assert_eq!(recognize_elementary_abelian(&g), Some(64));
    let k = kernel_presentation(&g, &TwoGroupEpimorphism::natural(6)).unwrap();
    assert_eq!(k.reduced.generator_count, 0);
}

#[test]
fn schreier_generator_count() {
    for l in [octahedron(), build::bipyramid(3).face_lattice().unwrap(), build::cube().face_lattice().unwrap()] {
        for punctured in [true, false] {
            let p = orbifold_group(&l, punctured).unwrap();
            let k = kernel_presentation(&p, &TwoGroupEpimorphism::natural(l.n)).unwrap();
            assert_eq!(k.schreier_generators, k.index * l.n - k.index + 1);
            assert_eq!(abelianization(&k.unreduced).unwrap(), abelianization(&k.reduced).unwrap());
        }
    }
}

#[test]
fn three_commutator_group_kernel() {
    // x, y, z = 1, 2, 3; inverses negative.
    let comm = |a: i32, w: &[i32]| {
        let inv: Vec<i32> = w.iter().rev().map(|x| -x).collect();
        [vec![-a], inv, vec![a], w.to_vec()].concat()
    };
    let g = Presentation::new(
        3,
        vec![comm(1, &commutator(2, 3)), comm(2, &commutator(3, 1)), comm(3, &commutator(1, 2))],
    );
    let k = kernel_presentation(&g, &TwoGroupEpimorphism::natural(3)).unwrap();
    assert_eq!(k.index, 8);
    let ab = abelianization(&k.reduced).unwrap();
    assert_eq!((ab.free_rank, ab.torsion.len()), (12, 0));

    let t = lookup("bipyramid3").unwrap().subject.tuple.clone().unwrap();
    let l = enumerate_faces(&t).unwrap();
    let p = orbifold_group(&l, true).unwrap();
    let direct = abelianization(&kernel_presentation(&p, &TwoGroupEpimorphism::natural(6)).unwrap().reduced).unwrap();
    assert_eq!(direct, ab);
}

fn images(l: &FaceLattice, classes: [&[usize]; 2]) -> TwoGroupEpimorphism {
    let mut images = vec![0; l.n];
    for (bit, class) in classes.iter().enumerate() {
        for &f in *class {
            images[f - 1] = 1 << bit;
        }
    }
    TwoGroupEpimorphism { k: 2, images }
}

fn is_proper(l: &FaceLattice, e: &TwoGroupEpimorphism) -> bool {
    coaxial::groups::edge_adjacent_pairs(l).iter().all(|&(i, j)| e.images[i] != e.images[j])
}

#[test]
fn octahedron_checkerboard_cover() {
    let l = octahedron();
    // The assignment 1,3,6,8 / 2,4,5,7 puts e1 on both sides of the edge between facets 1 and 6.
    let printed = images(&l, [&[1, 3, 6, 8], &[2, 4, 5, 7]]);
    assert!(!is_proper(&l, &printed));
    let e = images(&l, [&[1, 3, 5, 7], &[2, 4, 6, 8]]);
    assert!(is_proper(&l, &e));
    let ends = coloring_ends(&l, &e);
    assert_eq!(ends.len(), 6);
    assert!(ends.iter().all(|x| x.torus && x.count == 1));

    let p = orbifold_group(&l, true).unwrap();
    let ab = abelianization(&kernel_presentation(&p, &e).unwrap().reduced).unwrap();
    // The six-generator presentation with relators [a1,a2], [a3,a4], [a5,a4a1], [a6,a2a3],
    // a4a6a5a3 = a5a4a3a6 abelianizes to Z^6; agreement is only a consistency check.
    let w = |xs: &[i32]| xs.to_vec();
    let printed_group = Presentation::new(
        6,
        vec![
            commutator(1, 2),
            commutator(3, 4),
            [w(&[-5, -1, -4, 5]), w(&[4, 1])].concat(),
            [w(&[-6, -3, -2, 6]), w(&[2, 3])].concat(),
            w(&[4, 6, 5, 3, -6, -3, -4, -5]),
        ],
    );
    assert_eq!(ab, abelianization(&printed_group).unwrap());
}

#[test]
fn octahedron_has_checkerboard_among_colorings() {
    let l = octahedron();
    let all = small_cover_colorings(&l, 2);
    assert!(all.iter().all(|e| is_proper(&l, e)));
    let e = images(&l, [&[1, 3, 5, 7], &[2, 4, 6, 8]]);
    assert!(all.contains(&e));
}

#[test]
fn bipyramid_small_covers() {
    let t = lookup("bipyramid3").unwrap().subject.tuple.clone().unwrap();
    let l = enumerate_faces(&t).unwrap();
    let p = orbifold_group(&l, true).unwrap();
    let two = small_cover_colorings(&l, 2);
    assert!(!two.is_empty());
    // Upper and lower triangles each use all three colors, and opposite facets at a
    // 4-vertex then never agree on both pairs: every end is a Klein bottle. The apices
    // carry (Z/2)^3 isotropy, so the kernel keeps torsion.
    for e in &two {
        let ends = coloring_ends(&l, e);
        assert_eq!(ends.len(), 3);
        assert!(ends.iter().all(|x| !x.torus));
        let ab = abelianization(&kernel_presentation(&p, e).unwrap().reduced).unwrap();
        assert!(!ab.torsion.is_empty());
    }

    let three = small_cover_colorings(&l, 3);
    let torus_covers: Vec<_> = three
        .iter()
        .filter(|e| coloring_ends(&l, e).iter().all(|x| x.torus))
        .map(|e| abelianization(&kernel_presentation(&p, e).unwrap().reduced).unwrap())
        .collect();
    assert!(!torus_covers.is_empty());
    assert!(torus_covers.iter().any(|ab| ab.free_rank == 3 && ab.torsion.is_empty()));

    // The four-generator presentation a1^2, [a2, a1 a3], [a3, a1 a4], [a4, a1 a2]
    // abelianizes to Z^3 + Z/2, as do the (Z/2)^3 covers with six distinct colors.
    let c = |a: i32, b: i32, d: i32| vec![-a, -d, -b, a, b, d];
    let printed = Presentation::new(4, vec![vec![1, 1], c(2, 1, 3), c(3, 1, 4), c(4, 1, 2)]);
    let ab = abelianization(&printed).unwrap();
    assert_eq!((ab.free_rank, ab.torsion.clone()), (3, vec![BigInt::from(2)]));
    assert!(torus_covers.contains(&ab));
}
