//! Named simple polyhedra used to label smoothings.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use super::polyhedron::build::*;
use super::polyhedron::CombPolyhedron3;
use super::symmetry::{canonical_form, CanonicalKey};

pub struct CatalogEntry {
    pub label: &'static str,
    pub polyhedron: CombPolyhedron3,
}

fn truncate_all(p: CombPolyhedron3, vertices: &[usize]) -> CombPolyhedron3 {
    // Truncation appends new vertices, so cut from the highest id down.
    let mut vs = vertices.to_vec();
    vs.sort_unstable_by(|a, b| b.cmp(a));
    vs.into_iter().fold(p, |q, v| truncate_vertex(&q, v).expect("simple vertex"))
}

/// Catalog of simple polyhedra, in display order.
pub fn simple_catalog() -> Vec<CatalogEntry> {
    let cube = cube();
    // In the cube, vertex 0 is adjacent to 1, shares a face diagonal with 2 and is antipodal to 6.
    vec![
        CatalogEntry { label: "tetrahedron", polyhedron: tetrahedron() },
        CatalogEntry { label: "triangular prism", polyhedron: prism(3) },
        CatalogEntry { label: "C", polyhedron: cube.clone() },
        CatalogEntry { label: "pentagonal prism", polyhedron: prism(5) },
        CatalogEntry { label: "T2", polyhedron: truncate_all(tetrahedron(), &[0, 1]) },
        CatalogEntry { label: "Scutoid", polyhedron: truncate_all(prism(5), &[0]) },
        CatalogEntry { label: "4-truncated tetrahedron", polyhedron: truncate_all(tetrahedron(), &[0, 1, 2, 3]) },
        CatalogEntry { label: "Dürer solid", polyhedron: truncate_all(cube.clone(), &[0, 6]) },
        CatalogEntry { label: "Hexagonal prism", polyhedron: prism(6) },
        CatalogEntry { label: "GBP5", polyhedron: truncate_edge(&prism(5), 0, 1).expect("prism edge") },
        CatalogEntry { label: "cube truncated at two adjacent vertices", polyhedron: truncate_all(cube.clone(), &[0, 1]) },
        CatalogEntry { label: "cube truncated along a face diagonal", polyhedron: truncate_all(cube, &[0, 2]) },
    ]
}

fn keys() -> &'static Vec<(&'static str, CanonicalKey)> {
    static KEYS: OnceLock<Vec<(&'static str, CanonicalKey)>> = OnceLock::new();
    KEYS.get_or_init(|| {
        simple_catalog()
            .into_iter()
            .map(|e| (e.label, canonical_form(&e.polyhedron, &BTreeSet::new())))
            .collect()
    })
}

/// Catalog label of an unmarked canonical key, if any.
pub fn name_of_key(key: &CanonicalKey) -> Option<&'static str> {
    keys().iter().find(|(_, k)| k == key).map(|(l, _)| *l)
}

pub fn catalog_name(p: &CombPolyhedron3) -> Option<&'static str> {
    name_of_key(&canonical_form(p, &BTreeSet::new()))
}

/// Reference polyhedra with 4-vertices, by command-line name.
pub fn reference_polyhedron(name: &str) -> Option<CombPolyhedron3> {
    Some(match name {
        "pyramid" | "square-pyramid" => pyramid(4),
        "bipyramid" | "triangular-bipyramid" => bipyramid(3),
        "octahedron" => octahedron_labelled(),
        "rhombic-dodecahedron" => rhombic_dodecahedron(),
        "cube" => cube(),
        "tetrahedron" => tetrahedron(),
        _ => return None,
    })
}

pub const REFERENCE_NAMES: [&str; 6] =
    ["pyramid", "bipyramid", "octahedron", "rhombic-dodecahedron", "cube", "tetrahedron"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_entries_are_distinct() {
        let k = keys();
        let distinct: BTreeSet<_> = k.iter().map(|(_, key)| key.clone()).collect();
        assert_eq!(distinct.len(), k.len());
    }

    #[test]
    fn names_found() {
        assert_eq!(catalog_name(&prism(4)), Some("C"));
        assert_eq!(catalog_name(&prism(7)), None);
        let d = catalog_name(&truncate_all(cube(), &[3, 5])).unwrap();
        assert_eq!(d, "Dürer solid");
    }
}
