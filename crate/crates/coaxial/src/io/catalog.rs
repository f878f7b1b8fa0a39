//! Built-in inputs, resolvable by name from every command.

use std::sync::OnceLock;

use super::report::Subject;
use crate::exact::{int, Rational};
use crate::hyperbolic::{self, KleinPolyhedron};
use crate::smoothing::catalog::simple_catalog;
use crate::tuple::{from_inequalities, Tuple};

pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    /// Why the entry deliberately violates a normalization or WH check.
    pub note: Option<&'static str>,
    pub subject: Subject,
}

fn m1(values: &[i64]) -> Tuple {
    Tuple::from_ints(1, &values.iter().map(|&v| vec![v]).collect::<Vec<_>>()).expect("m = 1 tuple")
}

fn from_klein(p: &KleinPolyhedron) -> Tuple {
    let rows: Vec<(Vec<Rational>, Rational)> =
        p.planes.iter().map(|pl| (pl.normal.to_vec(), pl.offset.clone())).collect();
    from_inequalities(&rows).expect("planes of a polyhedron")
}

fn cube_tuple() -> Tuple {
    let mut rows = Vec::new();
    for k in 0..3 {
        for s in [1, -1] {
            let mut a = vec![int(0); 3];
            a[k] = int(s);
            rows.push((a, int(1)));
        }
    }
    from_inequalities(&rows).expect("cube")
}

fn slug(label: &str) -> Option<&'static str> {
    Some(match label {
        "tetrahedron" => "tetrahedron",
        "triangular prism" => "triangular_prism",
        "pentagonal prism" => "pentagonal_prism",
        "T2" => "t2",
        "Scutoid" => "scutoid",
        "4-truncated tetrahedron" => "truncated_tetrahedron_4",
        "Dürer solid" => "durer_solid",
        "Hexagonal prism" => "hexagonal_prism",
        "GBP5" => "gbp5",
        "cube truncated at two adjacent vertices" => "cube_truncated_adjacent",
        "cube truncated along a face diagonal" => "cube_truncated_diagonal",
        _ => return None,
    })
}

fn build_catalog() -> Vec<CatalogEntry> {
    let subject = |tuple, polyhedron, klein| Subject { name: None, tuple, polyhedron, klein };
    let bp_klein = hyperbolic::bipyramid(Rational::new(1.into(), 2.into())).expect("a = 1/2");
    let rd_klein = hyperbolic::rhombic_dodecahedron();
    let mut out = vec![
        CatalogEntry {
            name: "minimal_m1",
            description: "m = 1 tuple (-1, 1, 0)",
            note: Some("the zero vector breaks weak hyperbolicity"),
            subject: subject(Some(m1(&[-1, 1, 0])), None, None),
        },
        CatalogEntry {
            name: "pyramid",
            description: "square pyramid, tuple ((-1)^2, 0, (1)^2)",
            note: Some("the zero vector makes P a pyramid with one 4-vertex"),
            subject: subject(Some(m1(&[-1, -1, 0, 1, 1])), None, None),
        },
        CatalogEntry {
            name: "bipyramid3",
            description: "triangular bipyramid, m = 2",
            note: Some("three antipodal pairs break weak hyperbolicity"),
            subject: subject(
                Some(
                    Tuple::from_ints(2, &[vec![-1, -1], vec![1, -1], vec![1, 0], vec![1, 1], vec![-1, 1], vec![-1, 0]])
                        .expect("bipyramid"),
                ),
                None,
                Some(bp_klein),
            ),
        },
        CatalogEntry {
            name: "octahedron",
            description: "octahedron, m = 4",
            note: Some("six generic singular vertices"),
            subject: subject(
                Some(
                    Tuple::from_ints(
                        4,
                        &[
                            vec![1, 0, 0, 0],
                            vec![0, 1, 0, 0],
                            vec![0, 0, 1, 0],
                            vec![0, 0, 0, 1],
                            vec![-1, -1, -1, 0],
                            vec![-1, -1, 0, -1],
                            vec![-1, 0, -1, -1],
                            vec![2, 1, 1, 1],
                        ],
                    )
                    .expect("octahedron"),
                ),
                None,
                Some(hyperbolic::octahedron()),
            ),
        },
        CatalogEntry {
            name: "rhombic_dodecahedron",
            description: "rhombic dodecahedron from the planes |x| + |y| = 1 and permutations, m = 8",
            note: Some("six generic singular vertices"),
            subject: subject(Some(from_klein(&rd_klein)), None, Some(rd_klein)),
        },
        CatalogEntry {
            name: "cube",
            description: "cube from the planes |x_i| = 1, m = 2",
            note: None,
            subject: subject(Some(cube_tuple()), None, None),
        },
    ];
    for e in simple_catalog() {
        if let Some(name) = slug(e.label) {
            out.push(CatalogEntry {
                name,
                description: e.label,
                note: None,
                subject: subject(None, Some(e.polyhedron), None),
            });
        }
    }
    for e in &mut out {
        e.subject.name = Some(e.name.to_string());
    }
    out
}

pub fn catalog() -> &'static [CatalogEntry] {
    static C: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    C.get_or_init(build_catalog)
}

pub fn lookup(name: &str) -> Option<&'static CatalogEntry> {
    catalog().iter().find(|e| e.name == name)
}
