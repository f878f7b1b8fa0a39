use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use coaxial::exact::{
    affine_solution_dimension, rat, rational_rank, smith_normal_form, solve_unique, strictly_positive_solution,
    IntMatrix, RatMatrix, Rational,
};
use coaxial::hyperbolic::{self, fourier_partial_sum, ideal_tetrahedron_volume, lobachevsky, HyperbolicError};
use coaxial::io::{parse_tuple_document, tuple_document};
use coaxial::reflection::{euler_characteristic, ReflectedComplex, Realization};
use coaxial::smoothing::{automorphisms, build, flip, orbits, smooth, CombPolyhedron3, SmoothingChoice};
use coaxial::tuple::{check_normalization, enumerate_faces, is_weakly_hyperbolic, FaceLattice, Tuple};
use coaxial::types::{truncate_type, Atom, TypeExpr};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-5i64..=5, 1i64..=3).prop_map(|(p, q)| rat(p, q))
}

fn rat_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    (1..=max_rows, 1..=max_cols)
        .prop_flat_map(|(r, c)| proptest::collection::vec(proptest::collection::vec(small_rational(), c), r))
}

fn tuple(max_n: usize, max_m: usize) -> impl Strategy<Value = Tuple> {
    (2..=max_n, 1..=max_m)
        .prop_flat_map(|(n, m)| proptest::collection::vec(proptest::collection::vec(small_rational(), m), n))
        .prop_map(|v| {
            let m = v[0].len();
            Tuple::new(m, v).unwrap()
        })
}

fn transpose(rows: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    (0..rows[0].len()).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Basic feasible solutions of `{t >= 0 : M t = b}`, by trying every column subset.
fn vertices(rows: &[Vec<Rational>], b: &[Rational]) -> Vec<Vec<Rational>> {
    let cols = rows[0].len();
    let mut out = Vec::new();
    for s in 1u32..(1 << cols) {
        let idx: Vec<usize> = (0..cols).filter(|&j| s >> j & 1 == 1).collect();
        let sub: Vec<Vec<Rational>> = rows.iter().map(|r| idx.iter().map(|&j| r[j].clone()).collect()).collect();
        let m = RatMatrix::from_rows(sub).unwrap();
        if rational_rank(&m) != idx.len() {
            continue;
        }
        if let Some(x) = solve_unique(&m, b).unwrap() {
            if x.iter().all(|v| !v.is_negative()) {
                let mut t = vec![Rational::zero(); cols];
                for (k, &j) in idx.iter().enumerate() {
                    t[j] = x[k].clone();
                }
                out.push(t);
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn rank_of_transpose(rows in rat_matrix(5, 5)) {
        let a = RatMatrix::from_rows(rows.clone()).unwrap();
        let t = RatMatrix::from_rows(transpose(&rows)).unwrap();
        prop_assert_eq!(rational_rank(&a), rational_rank(&t));
    }

    #[test]
    fn positive_solutions_against_vertices(rows in rat_matrix(3, 6)) {
        // Appending sum t = 1 keeps the feasible set bounded, so it is the hull of its vertices.
        let mut rows = rows;
        let cols = rows[0].len();
        rows.push(vec![Rational::one(); cols]);
        let mut b = vec![Rational::zero(); rows.len() - 1];
        b.push(Rational::one());
        let m = RatMatrix::from_rows(rows.clone()).unwrap();
        let vs = vertices(&rows, &b);
        let any_positive = (0..cols).all(|j| vs.iter().any(|v| v[j].is_positive()));
        match strictly_positive_solution(&m, &b).unwrap() {
            Some(t) => {
                prop_assert!(t.iter().all(Signed::is_positive));
                prop_assert_eq!(m.mul_vec(&t).unwrap(), b.clone());
                prop_assert!(any_positive);
            }
            None => prop_assert!(!any_positive || vs.is_empty()),
        }
    }

    #[test]
    fn affine_dimension_is_rank_nullity(rows in rat_matrix(4, 5), b in proptest::collection::vec(small_rational(), 4)) {
        let m = RatMatrix::from_rows(rows.clone()).unwrap();
        let b = &b[..rows.len()];
        let mut aug = rows.clone();
        for (r, x) in aug.iter_mut().zip(b) {
            r.push(x.clone());
        }
        let consistent = rational_rank(&RatMatrix::from_rows(aug).unwrap()) == rational_rank(&m);
        let got = affine_solution_dimension(&m, b).unwrap();
        prop_assert_eq!(got, consistent.then(|| m.cols() - rational_rank(&m)));
    }

    #[test]
    fn smith_normal_form_transforms(rows in (1usize..5, 1usize..5).prop_flat_map(|(r, c)|
        proptest::collection::vec(proptest::collection::vec(-12i64..=12, c), r))) {
        let m = IntMatrix::from_rows(&rows);
        let r = smith_normal_form(&m, true);
        let (u, v) = (r.left.clone().unwrap(), r.right.clone().unwrap());
        prop_assert_eq!(u.determinant().abs(), BigInt::one());
        prop_assert_eq!(v.determinant().abs(), BigInt::one());
        let d = u.mul(&m).mul(&v);
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let want = if i == j && i < r.rank { r.elementary_divisors[i].clone() } else { BigInt::zero() };
                prop_assert_eq!(&d[(i, j)], &want);
            }
        }
        for w in r.elementary_divisors.windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
    }

    #[test]
    fn depth_and_weak_hyperbolicity(t in tuple(7, 3)) {
        let l = enumerate_faces(&t).unwrap();
        let wh = is_weakly_hyperbolic(&t).unwrap().holds;
        if !l.is_empty() {
            // Depth is stored unsigned, so nonnegativity is enforced at construction.
            prop_assert_eq!(l.faces.iter().all(|f| f.depth == 0), wh);
        }
        if wh {
            for v in l.vertices() {
                prop_assert_eq!(v.support.count_ones() as usize, t.m() + 1);
            }
        }
        for a in &l.faces {
            for b in &l.faces {
                if a.support & !b.support == 0 {
                    prop_assert!(a.dim <= b.dim);
                }
            }
        }
    }

    #[test]
    fn tuple_documents_round_trip(t in tuple(6, 3)) {
        let doc = tuple_document(&t, Some("x"));
        let text = serde_json::to_string(&doc).unwrap();
        let (back, name) = parse_tuple_document(&text).unwrap();
        prop_assert_eq!(back, t);
        prop_assert_eq!(name.as_deref(), Some("x"));
    }

    #[test]
    fn lobachevsky_against_partial_sums(theta in -4.0f64..4.0, n in 5usize..200) {
        let v = lobachevsky(theta, 1e-14).value;
        prop_assert!((v - fourier_partial_sum(theta, n)).abs() <= 1.0 / (2.0 * n as f64) + 1e-12);
        prop_assert!((v - fourier_partial_sum(theta, 10 * n)).abs() <= 1.0 / (20.0 * n as f64) + 1e-12);
        prop_assert!((v + lobachevsky(-theta, 1e-14).value).abs() < 1e-12);
        prop_assert!((v - lobachevsky(theta + PI, 1e-14).value).abs() < 1e-12);
    }

    #[test]
    fn generic_tetrahedra_never_mismatch(z in proptest::array::uniform4(-1.0f64..1.0), phi in proptest::array::uniform4(0.0f64..std::f64::consts::TAU)) {
        let p: [[f64; 3]; 4] = std::array::from_fn(|i| {
            let r = (1.0 - z[i] * z[i]).sqrt();
            [r * phi[i].cos(), r * phi[i].sin(), z[i]]
        });
        match ideal_tetrahedron_volume(p) {
            Ok(v) => prop_assert!(v > 0.0 && v <= 3.0 * lobachevsky(PI / 3.0, 1e-15).value + 1e-9),
            Err(e) => prop_assert_eq!(e, HyperbolicError::DegenerateTetrahedron),
        }
    }

    #[test]
    fn bipyramid_right_angled_only_at_one_half(p in 35i64..57) {
        // a = p / 100 ranges over (1/3, sqrt(3)/3).
        let a = rat(p, 100);
        let r = hyperbolic::bipyramid(a).unwrap().is_right_angled().unwrap();
        prop_assert_eq!(r.all_orthogonal(), p == 50);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn lattice_matches_oracle_up_to_ten(t in tuple(10, 3)) {
        let l = enumerate_faces(&t).unwrap();
        let got: BTreeSet<(u64, usize)> = l.faces.iter().map(|f| (f.support, f.dim)).collect();
        let mut want = BTreeSet::new();
        for j in 1u64..(1 << t.n()) {
            let cols: Vec<usize> = (0..t.n()).filter(|&i| j >> i & 1 == 1).collect();
            let mut rows: Vec<Vec<Rational>> =
                (0..t.m()).map(|k| cols.iter().map(|&i| t.vectors()[i][k].clone()).collect()).collect();
            rows.push(vec![Rational::one(); cols.len()]);
            let mut b = vec![Rational::zero(); t.m()];
            b.push(Rational::one());
            let m = RatMatrix::from_rows(rows).unwrap();
            if strictly_positive_solution(&m, &b).unwrap().is_some() {
                want.insert((j, cols.len() - rational_rank(&m)));
            }
        }
        prop_assert_eq!(got, want);
    }

    #[test]
    fn euler_characteristic_and_connectedness(t in tuple(6, 2)) {
        let l = enumerate_faces(&t).unwrap();
        prop_assume!(!l.is_empty());
        let h = ReflectedComplex::build(&l, Realization::Tuple(&t)).unwrap().homology(false).unwrap();
        prop_assert_eq!(h.euler_characteristic(), euler_characteristic(&l));
        if check_normalization(&t).unwrap().n3.holds {
            prop_assert_eq!(h.betti[0], 1);
        }
    }
}

fn reference_polyhedra() -> Vec<(&'static str, CombPolyhedron3)> {
    vec![
        ("pyramid", build::pyramid(4)),
        ("bipyramid", build::bipyramid(3)),
        ("octahedron", build::octahedron_labelled()),
        ("rhombic dodecahedron", build::rhombic_dodecahedron()),
    ]
}

#[test]
fn orbits_partition_choices() {
    for (name, p) in reference_polyhedra() {
        let orbs = orbits(&p).unwrap();
        let ell = orbs[0].representative.len;
        let group = automorphisms(&p).len();
        assert_eq!(orbs.iter().map(|o| o.members.len()).sum::<usize>(), 1 << ell, "{name}");
        assert!(orbs.iter().all(|o| group.is_multiple_of(o.members.len())), "{name}");
    }
}

#[test]
fn smoothings_are_simple_with_expected_counts() {
    for (name, p) in reference_polyhedra() {
        let ell = coaxial::smoothing::four_vertices(&p).unwrap().len();
        let simple_vertices = p.vertex_count() - ell;
        for c in SmoothingChoice::all(ell) {
            let q = smooth(&p, c).unwrap().polyhedron;
            assert!(q.is_simple(), "{name} {c}");
            assert_eq!(q.facet_count(), p.facet_count());
            assert_eq!(q.edge_count(), p.edge_count() + ell);
            assert_eq!(q.vertex_count(), 2 * ell + simple_vertices);
        }
    }
    let o = smooth(&build::octahedron_labelled(), SmoothingChoice { bits: 0, len: 6 }).unwrap().polyhedron;
    assert_eq!((o.facet_count(), o.edge_count(), o.vertex_count()), (8, 18, 12));
}

#[test]
fn graph_independent_of_representatives() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for (name, p) in reference_polyhedra() {
        let g = coaxial::smoothing::decorated_graph(&p).unwrap();
        let orbs = orbits(&p).unwrap();
        let owner: BTreeMap<u64, usize> =
            orbs.iter().enumerate().flat_map(|(i, o)| o.members.iter().map(move |m| (m.bits, i))).collect();
        for _ in 0..3 {
            for (i, o) in orbs.iter().enumerate() {
                let c = o.members[rng.gen_range(0..o.members.len())];
                let mut counts = vec![0usize; orbs.len()];
                for k in 0..c.len {
                    counts[owner[&flip(c, k).bits]] += 1;
                }
                assert_eq!(counts[i], g.vertices[i].loop_count, "{name}");
                for e in &g.edges {
                    if e.from == i {
                        assert_eq!(counts[e.to], e.beta1, "{name}");
                    }
                    if e.to == i {
                        assert_eq!(counts[e.from], e.beta2, "{name}");
                    }
                }
            }
        }
    }
}

#[test]
fn type_normal_forms() {
    let t3 = TypeExpr::atom(Atom::SphereProduct(2, 1));
    assert_eq!(t3.connect(&TypeExpr::sphere(3)), t3);
    assert_eq!(TypeExpr::sphere(3).connect(&t3).connect(&TypeExpr::sphere(3)), t3);
    let sum = t3.times(3).connect(&t3);
    assert_eq!(sum, t3.times(4));
    assert_eq!(sum.connect(&TypeExpr::sphere(3)), sum);
    // Truncating the tetrahedron (n = 4) from the sphere: S^3 # S^3 # (S^2 x S^1).
    assert_eq!(truncate_type(&TypeExpr::sphere(3), 4, 3).betti(), vec![1, 1, 1, 1]);
}

#[test]
fn truncation_does_not_depend_on_the_vertex() {
    let mut namer = coaxial::types::Namer::new();
    for p in [build::cube(), build::prism(5), build::prism(3)] {
        let names: BTreeSet<String> = (0..p.vertex_count())
            .map(|v| namer.name_polyhedron(&build::truncate_vertex(&p, v).unwrap()).unwrap().to_string())
            .collect();
        assert_eq!(names.len(), 1, "{names:?}");
    }
}

#[test]
fn euler_characteristic_on_lattices_of_polyhedra() {
    for (_, p) in reference_polyhedra() {
        let l: FaceLattice = p.face_lattice().unwrap();
        let c = ReflectedComplex::build(&l, Realization::Combinatorial).unwrap();
        assert_eq!(c.homology(false).unwrap().euler_characteristic(), euler_characteristic(&l));
    }
}
