use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::polyhedron::{edge, CombPolyhedron3, Edge};
use super::symmetry::{automorphisms, canonical_form, Automorphism, CanonicalKey};
use super::SmoothingError;

/// Largest number of 4-vertices whose `2^l` choices are enumerated.
pub const MAX_FOUR_VERTICES: usize = 20;

/// A vertex on four facets, with its star rotated so the least facet comes first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FourVertex {
    pub vertex: usize,
    pub star: [usize; 4],
}

impl FourVertex {
    /// The opposite pair of facets selected by `bit`.
    pub fn pair(&self, bit: bool) -> (usize, usize) {
        let k = usize::from(bit);
        (self.star[k], self.star[k + 2])
    }
}

/// The 4-vertices of `p` in increasing vertex order.
pub fn four_vertices(p: &CombPolyhedron3) -> Result<Vec<FourVertex>, SmoothingError> {
    let mut out = Vec::new();
    for v in 0..p.vertex_count() {
        let star = p.vertex_star(v);
        match star.len() {
            3 => {}
            4 => {
                let k = (0..4).min_by_key(|&k| star[k]).unwrap();
                let star = [star[k], star[(k + 1) % 4], star[(k + 2) % 4], star[(k + 3) % 4]];
                out.push(FourVertex { vertex: v, star });
            }
            facets => return Err(SmoothingError::HighValence { vertex: v, facets }),
        }
    }
    Ok(out)
}

/// One bit per 4-vertex; bit `i` clear selects the pair holding the least facet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SmoothingChoice {
    pub bits: u64,
    pub len: usize,
}

impl SmoothingChoice {
    pub fn bit(&self, i: usize) -> bool {
        self.bits >> i & 1 == 1
    }

    pub fn all(len: usize) -> impl Iterator<Item = SmoothingChoice> {
        (0..1u64 << len).map(move |bits| SmoothingChoice { bits, len })
    }
}

impl std::fmt::Display for SmoothingChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.bit(i)))?;
        }
        Ok(())
    }
}

/// The flip of type `i`: change the smoothing at the `i`-th 4-vertex only.
pub fn flip(c: SmoothingChoice, i: usize) -> SmoothingChoice {
    SmoothingChoice { bits: c.bits ^ (1 << i), len: c.len }
}

/// A simple polyhedron obtained by smoothing, with the new ("red") edges.
#[derive(Clone, Debug)]
pub struct Smoothing {
    pub polyhedron: CombPolyhedron3,
    pub red_edges: BTreeSet<Edge>,
}

impl Smoothing {
    pub fn key(&self) -> CanonicalKey {
        canonical_form(&self.polyhedron, &self.red_edges)
    }

    pub fn unmarked_key(&self) -> CanonicalKey {
        canonical_form(&self.polyhedron, &BTreeSet::new())
    }
}

/// Resolves every 4-vertex: the chosen facet pair becomes adjacent across a new edge.
///
/// Facet ids are preserved. The vertex `v` keeps its id on the side of `star[k+1]`;
/// the other endpoint gets a fresh id.
pub fn smooth(p: &CombPolyhedron3, c: SmoothingChoice) -> Result<Smoothing, SmoothingError> {
    let fv = four_vertices(p)?;
    if c.len != fv.len() {
        return Err(SmoothingError::ChoiceLength { expected: fv.len(), found: c.len });
    }
    let mut facets = p.facets().to_vec();
    let mut red = BTreeSet::new();
    for (fresh, (i, w)) in (p.vertex_count()..).zip(fv.iter().enumerate()) {
        let k = usize::from(c.bit(i));
        let (a, b, cc, d) = (w.star[k], w.star[k + 1], w.star[(k + 2) % 4], w.star[(k + 3) % 4]);
        let v = w.vertex;
        let (v1, v2) = (v, fresh);
        red.insert(edge(v1, v2));
        for f in [b, d] {
            let new = if f == b { v1 } else { v2 };
            for x in facets[f].iter_mut() {
                if *x == v {
                    *x = new;
                }
            }
        }
        for f in [a, cc] {
            let len = facets[f].len();
            let pos = facets[f].iter().position(|&x| x == v).expect("vertex lies on its star");
            let before = facets[f][(pos + len - 1) % len];
            // The edge towards `before` is shared with `b` or with `d`.
            let before_on_b = facets[b].contains(&before);
            let pair = if before_on_b { [v1, v2] } else { [v2, v1] };
            facets[f].splice(pos..=pos, pair);
        }
    }
    let polyhedron = CombPolyhedron3::new(facets)?;
    debug_assert!(polyhedron.is_simple());
    Ok(Smoothing { polyhedron, red_edges: red })
}

/// How an automorphism moves choice bits: bit `i` goes to `target[i]`, xor `toggle[i]`.
fn choice_action(fv: &[FourVertex], g: &Automorphism) -> (Vec<usize>, Vec<bool>) {
    let index: BTreeMap<usize, usize> = fv.iter().enumerate().map(|(i, w)| (w.vertex, i)).collect();
    let mut target = Vec::with_capacity(fv.len());
    let mut toggle = Vec::with_capacity(fv.len());
    for w in fv {
        let j = index[&g.vertex[w.vertex]];
        let (p, q) = w.pair(false);
        let (gp, gq) = (g.facet[p], g.facet[q]);
        let least = fv[j].star[0];
        target.push(j);
        toggle.push(gp != least && gq != least);
    }
    (target, toggle)
}

/// Image of a choice under an automorphism.
pub fn apply_automorphism(p: &CombPolyhedron3, g: &Automorphism, c: SmoothingChoice) -> Result<SmoothingChoice, SmoothingError> {
    let fv = four_vertices(p)?;
    let (target, toggle) = choice_action(&fv, g);
    Ok(act(&target, &toggle, c))
}

fn act(target: &[usize], toggle: &[bool], c: SmoothingChoice) -> SmoothingChoice {
    let mut bits = 0;
    for i in 0..c.len {
        if c.bit(i) ^ toggle[i] {
            bits |= 1 << target[i];
        }
    }
    SmoothingChoice { bits, len: c.len }
}

#[derive(Clone, Debug, Serialize)]
pub struct Orbit {
    /// Least member in the bit order.
    pub representative: SmoothingChoice,
    pub members: Vec<SmoothingChoice>,
    pub key: CanonicalKey,
    pub unmarked_key: CanonicalKey,
}

/// Orbits of the automorphism group on all choices, sorted by representative.
pub fn orbits(p: &CombPolyhedron3) -> Result<Vec<Orbit>, SmoothingError> {
    let fv = four_vertices(p)?;
    if fv.len() > MAX_FOUR_VERTICES {
        return Err(SmoothingError::TooManyVertices(fv.len()));
    }
    let actions: Vec<_> = automorphisms(p).iter().map(|g| choice_action(&fv, g)).collect();
    let ell = fv.len();
    let mut owner = vec![usize::MAX; 1 << ell];
    let mut out: Vec<Orbit> = Vec::new();
    for c in SmoothingChoice::all(ell) {
        if owner[c.bits as usize] != usize::MAX {
            continue;
        }
        let mut members = BTreeSet::new();
        for (t, s) in &actions {
            members.insert(act(t, s, c));
        }
        for m in &members {
            owner[m.bits as usize] = out.len();
        }
        let s = smooth(p, c)?;
        out.push(Orbit {
            representative: c,
            members: members.into_iter().collect(),
            key: s.key(),
            unmarked_key: s.unmarked_key(),
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphVertex {
    pub representative: SmoothingChoice,
    /// Orbit size.
    pub alpha: usize,
    /// Flips from the representative that stay in the orbit.
    pub loop_count: usize,
    pub key: CanonicalKey,
    pub unmarked_key: CanonicalKey,
}

/// An oriented edge `from -> to` decorated `(beta1, -beta2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
    pub beta1: usize,
    pub beta2: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecoratedGraph {
    pub four_vertex_count: usize,
    pub vertices: Vec<GraphVertex>,
    /// Oriented from larger to smaller orbit, ties by canonical key.
    pub edges: Vec<GraphEdge>,
}

impl DecoratedGraph {
    /// Per-vertex invariant: loops plus outgoing flips add up to `l`.
    pub fn flip_totals(&self) -> Vec<usize> {
        (0..self.vertices.len())
            .map(|i| {
                self.vertices[i].loop_count
                    + self
                        .edges
                        .iter()
                        .map(|e| if e.from == i { e.beta1 } else if e.to == i { e.beta2 } else { 0 })
                        .sum::<usize>()
            })
            .collect()
    }

    pub fn double_counting_holds(&self) -> bool {
        self.edges
            .iter()
            .all(|e| self.vertices[e.from].alpha * e.beta1 == self.vertices[e.to].alpha * e.beta2)
    }
}

/// Quotient of the flip graph on `{0,1}^l` by the automorphism group.
pub fn decorated_graph(p: &CombPolyhedron3) -> Result<DecoratedGraph, SmoothingError> {
    let orbs = orbits(p)?;
    let ell = four_vertices(p)?.len();
    let mut owner = vec![0usize; 1 << ell];
    for (k, o) in orbs.iter().enumerate() {
        for m in &o.members {
            owner[m.bits as usize] = k;
        }
    }
    let flips_into = |from: usize| {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for i in 0..ell {
            *counts.entry(owner[flip(orbs[from].representative, i).bits as usize]).or_default() += 1;
        }
        counts
    };
    let table: Vec<BTreeMap<usize, usize>> = (0..orbs.len()).map(flips_into).collect();
    let vertices: Vec<GraphVertex> = orbs
        .iter()
        .enumerate()
        .map(|(k, o)| GraphVertex {
            representative: o.representative,
            alpha: o.members.len(),
            loop_count: table[k].get(&k).copied().unwrap_or(0),
            key: o.key.clone(),
            unmarked_key: o.unmarked_key.clone(),
        })
        .collect();
    let mut edges = Vec::new();
    for a in 0..orbs.len() {
        for (&b, &beta) in &table[a] {
            if b <= a {
                continue;
            }
            let back = table[b].get(&a).copied().unwrap_or(0);
            let a_first = (vertices[a].alpha, &vertices[b].key) > (vertices[b].alpha, &vertices[a].key);
            edges.push(if a_first {
                GraphEdge { from: a, to: b, beta1: beta, beta2: back }
            } else {
                GraphEdge { from: b, to: a, beta1: back, beta2: beta }
            });
        }
    }
    Ok(DecoratedGraph { four_vertex_count: ell, vertices, edges })
}
