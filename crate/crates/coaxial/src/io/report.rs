//! The analysis pipeline behind the `analyze` command.

use rayon::prelude::*;
use serde::Serialize;

use super::Error;
use crate::groups::{
    abelianization, coloring_ends, kernel_presentation, orbifold_group, recognize_elementary_abelian,
    small_cover_colorings, EndInfo, TwoGroupEpimorphism,
};
use crate::hyperbolic::{ideal_polyhedron_volume, volume_ledger, KleinPolyhedron, RightAngleReport, VertexClass};
use crate::reflection::{summarize, ComplexSummary, ReflectedComplex, Realization};
use crate::smoothing::catalog::name_of_key;
use crate::smoothing::{decorated_graph, orbits, smooth, CombPolyhedron3, DecoratedGraph};
use crate::tuple::{
    check_normalization, classify_singularities, enumerate_faces, indices_of, is_weakly_hyperbolic, FaceLattice,
    NormalizationReport, Tuple,
};
use crate::types::{predicted_betti, Namer, Naming};

/// Something to analyze: a tuple, a combinatorial 3-polyhedron, or both
/// (with matching facet order), plus an optional Klein-model realization.
#[derive(Debug, Clone, Default)]
pub struct Subject {
    pub name: Option<String>,
    pub tuple: Option<Tuple>,
    pub polyhedron: Option<CombPolyhedron3>,
    pub klein: Option<KleinPolyhedron>,
}

impl Subject {
    pub fn lattice(&self) -> Result<FaceLattice, Error> {
        match (&self.tuple, &self.polyhedron) {
            (Some(t), _) => Ok(enumerate_faces(t)?),
            (None, Some(p)) => Ok(p.face_lattice()?),
            (None, None) => Err(Error::Unsupported("nothing to analyze".into())),
        }
    }

    pub fn polyhedron3(&self, lattice: &FaceLattice) -> Result<CombPolyhedron3, Error> {
        if let Some(p) = &self.polyhedron {
            return Ok(p.clone());
        }
        if lattice.dim() != Some(3) {
            return Err(Error::Unsupported(format!(
                "a 3-dimensional polytope is required, this one has dimension {:?}",
                lattice.dim()
            )));
        }
        Ok(CombPolyhedron3::from_lattice(lattice)?)
    }

    fn realization(&self) -> Realization<'_> {
        match &self.tuple {
            Some(t) => Realization::Tuple(t),
            None => Realization::Combinatorial,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Sections {
    pub faces: bool,
    pub singularities: bool,
    pub homology: bool,
    pub torsion: bool,
    pub groups: bool,
    pub smoothings: bool,
    pub types: bool,
    pub hyperbolic: bool,
    /// Re-check module invariants and fail on a violation.
    pub paranoid: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeakHyperbolicityRow {
    pub holds: bool,
    pub witnesses: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FacesReport {
    pub census: Vec<usize>,
    pub face_count: usize,
    /// Cells of `Z` by dimension: `2^{|J|}` copies of each open face.
    pub cells: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SingularityRow {
    pub support: Vec<usize>,
    pub dim: usize,
    pub depth: usize,
    pub generic: bool,
    pub isolated: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SingularitiesReport {
    pub faces: Vec<SingularityRow>,
    pub singular_points: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct HomologyReport {
    pub complex: ComplexSummary,
    pub betti: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub torsion: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelSummary {
    pub generators: usize,
    pub relators: usize,
    pub index: usize,
    pub schreier_generators: usize,
    pub reduced_generators: usize,
    pub reduced_relators: usize,
    pub free_rank: usize,
    pub torsion: Vec<String>,
    /// Order of the whole group when its presentation is visibly elementary abelian.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elementary_abelian_order: Option<String>,
    /// Set when the group is elementary abelian of order equal to the index.
    pub trivial_kernel: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ColoringRow {
    pub images: Vec<u64>,
    pub ends: Vec<EndInfo>,
    pub torus_ends: usize,
    pub klein_bottle_ends: usize,
    pub free_rank: usize,
    pub torsion: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupsReport {
    pub punctured: KernelSummary,
    pub unpunctured: KernelSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub colorings: Option<Vec<ColoringRow>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitRow {
    pub representative: String,
    pub size: usize,
    pub loop_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub marked_key: String,
    pub unmarked_key: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub type_name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted_betti: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub betti: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgeRow {
    pub from: usize,
    pub to: usize,
    pub beta1: usize,
    pub beta2: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SmoothingsReport {
    pub four_vertices: usize,
    pub choices: usize,
    pub orbits: Vec<OrbitRow>,
    pub edges: Vec<EdgeRow>,
    pub unmarked_types: usize,
    pub double_counting: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TypesReport {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted_betti: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LedgerRow {
    pub name: &'static str,
    pub exponent: u32,
    pub chain: String,
    pub volume: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HyperbolicReport {
    pub right_angles: RightAngleReport,
    pub all_right: bool,
    pub vertex_classes: Vec<VertexClass>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ideal_volume: Option<f64>,
    pub ledger: Vec<LedgerRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub n: usize,
    pub m: usize,
    pub dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalization: Option<NormalizationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weak_hyperbolicity: Option<WeakHyperbolicityRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub faces: Option<FacesReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub singularities: Option<SingularitiesReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub homology: Option<HomologyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub groups: Option<GroupsReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub smoothings: Option<SmoothingsReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub types: Option<TypesReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hyperbolic: Option<HyperbolicReport>,
}

fn homology_report(
    lattice: &FaceLattice,
    realization: Realization<'_>,
    torsion: bool,
    paranoid: bool,
) -> Result<HomologyReport, Error> {
    let complex = ReflectedComplex::build(lattice, realization)?;
    if paranoid && !complex.chain_complex().is_chain_complex() {
        return Err(Error::Invariant("boundary of boundary is nonzero".into()));
    }
    let h = complex.homology(torsion)?;
    let summary = summarize(lattice, &complex);
    if paranoid && h.euler_characteristic() != summary.euler_characteristic {
        return Err(Error::Invariant("Euler characteristic of cells and Betti numbers differ".into()));
    }
    Ok(HomologyReport {
        complex: summary,
        betti: h.betti.clone(),
        torsion: torsion.then(|| h.torsion.iter().map(|t| t.iter().map(|x| x.to_string()).collect()).collect()),
    })
}

fn kernel_summary(lattice: &FaceLattice, punctured: bool) -> Result<KernelSummary, Error> {
    let p = orbifold_group(lattice, punctured)?;
    let e = TwoGroupEpimorphism::natural(lattice.n);
    let k = kernel_presentation(&p, &e)?;
    let ab = abelianization(&k.reduced)?;
    let order = recognize_elementary_abelian(&p);
    Ok(KernelSummary {
        generators: p.generator_count,
        relators: p.relators.len(),
        index: k.index,
        schreier_generators: k.schreier_generators,
        reduced_generators: k.reduced.generator_count,
        reduced_relators: k.reduced.relators.len(),
        free_rank: ab.free_rank,
        torsion: ab.torsion.iter().map(|x| x.to_string()).collect(),
        elementary_abelian_order: order.map(|o| o.to_string()),
        trivial_kernel: order == Some(k.index as u128),
    })
}

/// Kernels of the natural map onto `(Z/2)^n`, with and without the
/// non-simple vertices, and optionally the `(Z/2)^k` colorings.
pub fn groups_summary(lattice: &FaceLattice, colorings: Option<usize>) -> Result<GroupsReport, Error> {
    let colorings = match colorings {
        None => None,
        Some(k) => {
            let p = orbifold_group(lattice, true)?;
            let mut rows = Vec::new();
            for e in small_cover_colorings(lattice, k) {
                let ends = coloring_ends(lattice, &e);
                let ab = abelianization(&kernel_presentation(&p, &e)?.reduced)?;
                let torus_ends = ends.iter().filter(|x| x.torus).map(|x| x.count).sum();
                let klein_bottle_ends = ends.iter().filter(|x| !x.torus).map(|x| x.count).sum();
                rows.push(ColoringRow {
                    images: e.images.clone(),
                    ends,
                    torus_ends,
                    klein_bottle_ends,
                    free_rank: ab.free_rank,
                    torsion: ab.torsion.iter().map(|x| x.to_string()).collect(),
                });
            }
            Some(rows)
        }
    };
    Ok(GroupsReport { punctured: kernel_summary(lattice, true)?, unpunctured: kernel_summary(lattice, false)?, colorings })
}

/// Orbits of smoothings and the decorated graph; per-orbit types and
/// homology on request, computed in parallel and reported in orbit order.
pub fn smoothings_summary(
    p: &CombPolyhedron3,
    with_types: bool,
    with_homology: bool,
    paranoid: bool,
) -> Result<(SmoothingsReport, DecoratedGraph), Error> {
    let graph = decorated_graph(p)?;
    let orbs = orbits(p)?;
    let smoothed: Vec<CombPolyhedron3> =
        orbs.iter().map(|o| smooth(p, o.representative).map(|s| s.polyhedron)).collect::<Result<_, _>>()?;
    let mut names: Vec<(Option<String>, Option<Vec<usize>>)> = vec![(None, None); orbs.len()];
    if with_types {
        let mut namer = Namer::new();
        for (i, q) in smoothed.iter().enumerate() {
            let n = namer.name_polyhedron(q)?;
            names[i] = (Some(n.to_string()), predicted_betti(&n).ok());
        }
    }
    let betti: Vec<Option<Vec<usize>>> = if with_homology {
        smoothed
            .par_iter()
            .map(|q| {
                let l = q.face_lattice()?;
                homology_report(&l, Realization::Combinatorial, false, paranoid).map(|h| Some(h.betti))
            })
            .collect::<Result<_, Error>>()?
    } else {
        vec![None; orbs.len()]
    };
    let mut rows = Vec::with_capacity(orbs.len());
    for (i, o) in orbs.iter().enumerate() {
        let (type_name, predicted) = names[i].clone();
        if paranoid {
            if let (Some(b), Some(pb)) = (&betti[i], &predicted) {
                if b != pb {
                    return Err(Error::Invariant(format!("orbit {i}: Betti numbers {b:?}, type predicts {pb:?}")));
                }
            }
        }
        rows.push(OrbitRow {
            representative: o.representative.to_string(),
            size: o.members.len(),
            loop_count: graph.vertices[i].loop_count,
            name: name_of_key(&o.unmarked_key).map(str::to_string),
            marked_key: o.key.digest(),
            unmarked_key: o.unmarked_key.digest(),
            type_name,
            predicted_betti: predicted,
            betti: betti[i].clone(),
        });
    }
    if paranoid && !graph.double_counting_holds() {
        return Err(Error::Invariant("double counting fails on an edge of the decorated graph".into()));
    }
    let mut unmarked: Vec<_> = orbs.iter().map(|o| &o.unmarked_key).collect();
    unmarked.sort();
    unmarked.dedup();
    let report = SmoothingsReport {
        four_vertices: graph.four_vertex_count,
        choices: 1 << graph.four_vertex_count,
        orbits: rows,
        edges: graph.edges.iter().map(|e| EdgeRow { from: e.from, to: e.to, beta1: e.beta1, beta2: e.beta2 }).collect(),
        unmarked_types: unmarked.len(),
        double_counting: graph.double_counting_holds(),
    };
    Ok((report, graph))
}

pub fn hyperbolic_report(k: &KleinPolyhedron) -> Result<HyperbolicReport, Error> {
    let right_angles = k.is_right_angled()?;
    let vertex_classes = k.vertex_classes();
    let ideal_volume = if vertex_classes.iter().all(|&c| c == VertexClass::Ideal) {
        Some(ideal_polyhedron_volume(k)?)
    } else {
        None
    };
    let l = volume_ledger();
    let ledger = l
        .entries
        .iter()
        .map(|e| LedgerRow {
            name: e.name,
            exponent: l.exponent(e.name).expect("ledger entry"),
            chain: l.render_chain(e.name).expect("ledger entry"),
            volume: l.volume(e.name).expect("ledger entry"),
        })
        .collect();
    Ok(HyperbolicReport { all_right: right_angles.all_orthogonal(), right_angles, vertex_classes, ideal_volume, ledger })
}

pub fn analyze(subject: &Subject, s: &Sections) -> Result<AnalysisReport, Error> {
    let lattice = subject.lattice()?;
    let mut r = AnalysisReport {
        schema_version: super::SCHEMA_VERSION,
        name: subject.name.clone(),
        n: lattice.n,
        m: lattice.m,
        dim: lattice.dim(),
        normalization: None,
        weak_hyperbolicity: None,
        faces: None,
        singularities: None,
        homology: None,
        groups: None,
        smoothings: None,
        types: None,
        hyperbolic: None,
    };
    if let Some(t) = &subject.tuple {
        r.normalization = Some(check_normalization(t)?);
        let wh = is_weakly_hyperbolic(t)?;
        r.weak_hyperbolicity =
            Some(WeakHyperbolicityRow { holds: wh.holds, witnesses: wh.witnesses.iter().map(|&w| indices_of(w)).collect() });
    }
    if s.faces {
        r.faces = Some(FacesReport {
            census: lattice.census(),
            face_count: lattice.faces.len(),
            cells: crate::reflection::count_cells(&lattice),
        });
    }
    if s.singularities {
        let faces = classify_singularities(&lattice)
            .into_iter()
            .map(|x| SingularityRow {
                support: indices_of(x.face.support),
                dim: x.face.dim,
                depth: x.depth,
                generic: x.is_generic,
                isolated: x.is_isolated,
            })
            .collect();
        r.singularities =
            Some(SingularitiesReport { faces, singular_points: crate::reflection::singular_point_count(&lattice) });
    }
    if s.homology {
        let h = homology_report(&lattice, subject.realization(), s.torsion, s.paranoid)?;
        if s.paranoid && h.complex.singular_points == 0 {
            let b = &h.betti;
            if (0..b.len()).any(|i| b[i] != b[b.len() - 1 - i]) {
                return Err(Error::Invariant(format!("Poincare duality fails: {b:?}")));
            }
        }
        r.homology = Some(h);
    }
    if s.groups {
        r.groups = Some(groups_summary(&lattice, None)?);
    }
    if s.types {
        let mut namer = Namer::new();
        let naming = match (&subject.tuple, &subject.polyhedron) {
            (Some(t), _) => namer.name_tuple(t)?,
            (None, Some(p)) => namer.name_polyhedron(p)?,
            _ => Naming::Unrecognized,
        };
        r.types = Some(TypesReport { name: naming.to_string(), predicted_betti: predicted_betti(&naming).ok() });
    }
    if s.smoothings {
        let p = subject.polyhedron3(&lattice)?;
        r.smoothings = Some(smoothings_summary(&p, s.types, s.homology, s.paranoid)?.0);
    }
    if s.hyperbolic {
        let k = subject
            .klein
            .as_ref()
            .ok_or_else(|| Error::Unsupported("no Klein-model realization for this input".into()))?;
        r.hyperbolic = Some(hyperbolic_report(k)?);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::lookup;

    #[test]
    fn octahedron_smoothings_report() {
        let s = &lookup("octahedron").unwrap().subject;
        let sec = Sections { smoothings: true, types: true, ..Default::default() };
        let r = analyze(s, &sec).unwrap();
        let sm = r.smoothings.unwrap();
        let mut sizes: Vec<usize> = sm.orbits.iter().map(|o| o.size).collect();
        sizes.sort();
        assert_eq!(sizes, vec![2, 4, 4, 6, 12, 12, 24]);
        assert_eq!(sm.unmarked_types, 6);
        assert!(sm.double_counting);
    }

    #[test]
    fn minimal_faces_report() {
        let s = &lookup("minimal_m1").unwrap().subject;
        let r = analyze(s, &Sections { faces: true, singularities: true, ..Default::default() }).unwrap();
        let f = r.faces.unwrap();
        assert_eq!(f.census, vec![2, 1]);
        // K_{2,4}: six vertices, eight edges.
        assert_eq!(f.cells, vec![6, 8]);
        assert!(!r.weak_hyperbolicity.unwrap().holds);
    }

    #[test]
    fn report_is_deterministic() {
        let s = &lookup("bipyramid3").unwrap().subject;
        let sec = Sections {
            faces: true,
            singularities: true,
            homology: true,
            groups: true,
            smoothings: true,
            types: true,
            hyperbolic: true,
            paranoid: true,
            torsion: true,
        };
        let a = serde_json::to_string(&analyze(s, &sec).unwrap()).unwrap();
        let b = serde_json::to_string(&analyze(s, &sec).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
