//! Combinatorial automorphisms and canonical forms via dart codes.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::polyhedron::{edge, CombPolyhedron3, Edge};

/// A combinatorial symmetry, possibly orientation reversing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Automorphism {
    pub vertex: Vec<usize>,
    pub facet: Vec<usize>,
    pub preserves_orientation: bool,
}

/// Isomorphism-invariant code of a polyhedron with marked edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalKey(pub Vec<u32>);

impl CanonicalKey {
    /// Short stable hex digest, for display only.
    pub fn digest(&self) -> String {
        // FNV-1a over the code words.
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for &w in &self.0 {
            for b in w.to_le_bytes() {
                h ^= u64::from(b);
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        }
        format!("{h:016x}")
    }
}

/// Breadth-first labelling of darts from `start` using `next` and `twin`.
fn bfs_order(p: &CombPolyhedron3, start: usize) -> (Vec<usize>, Vec<u32>) {
    let mut label = vec![u32::MAX; p.dart_count()];
    let mut order = Vec::with_capacity(p.dart_count());
    label[start] = 0;
    order.push(start);
    let mut i = 0;
    while i < order.len() {
        let d = order[i];
        for e in [p.next(d), p.twin(d)] {
            if label[e] == u32::MAX {
                label[e] = order.len() as u32;
                order.push(e);
            }
        }
        i += 1;
    }
    (order, label)
}

fn code(p: &CombPolyhedron3, start: usize, marked: &BTreeSet<Edge>) -> Vec<u32> {
    let (order, label) = bfs_order(p, start);
    let mut out = Vec::with_capacity(3 * order.len() + 3);
    out.extend([p.vertex_count() as u32, p.edge_count() as u32, p.facet_count() as u32]);
    for d in order {
        out.push(label[p.next(d)]);
        out.push(label[p.twin(d)]);
        out.push(u32::from(marked.contains(&edge(p.tail(d), p.head(d)))));
    }
    out
}

/// Lexicographically least dart code over all starting darts and both orientations.
pub fn canonical_form(p: &CombPolyhedron3, marked: &BTreeSet<Edge>) -> CanonicalKey {
    let m = p.mirror();
    let best = (0..p.dart_count())
        .map(|d| code(p, d, marked))
        .chain((0..m.dart_count()).map(|d| code(&m, d, marked)))
        .min()
        .expect("polyhedron has darts");
    CanonicalKey(best)
}

/// Tries to extend `0 -> target` to a dart isomorphism `p -> q`.
fn extend(p: &CombPolyhedron3, q: &CombPolyhedron3, target: usize) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; p.dart_count()];
    let mut hit = vec![false; q.dart_count()];
    map[0] = target;
    hit[target] = true;
    let mut stack = vec![0usize];
    while let Some(d) = stack.pop() {
        let img = map[d];
        for (e, ie) in [(p.next(d), q.next(img)), (p.twin(d), q.twin(img))] {
            if map[e] == usize::MAX {
                if hit[ie] {
                    return None;
                }
                map[e] = ie;
                hit[ie] = true;
                stack.push(e);
            } else if map[e] != ie {
                return None;
            }
        }
    }
    Some(map)
}

/// All combinatorial automorphisms, including orientation-reversing ones.
pub fn automorphisms(p: &CombPolyhedron3) -> Vec<Automorphism> {
    let mirror = p.mirror();
    let mut out = BTreeSet::new();
    for (q, preserves) in [(p, true), (&mirror, false)] {
        for t in 0..q.dart_count() {
            let Some(map) = extend(p, q, t) else { continue };
            let mut vertex = vec![usize::MAX; p.vertex_count()];
            let mut facet = vec![usize::MAX; p.facet_count()];
            let mut ok = true;
            for (d, &md) in map.iter().enumerate() {
                let (v, f) = (p.tail(d), p.dart_facet(d));
                let (iv, i_f) = (q.tail(md), q.dart_facet(md));
                ok &= vertex[v] == usize::MAX || vertex[v] == iv;
                ok &= facet[f] == usize::MAX || facet[f] == i_f;
                vertex[v] = iv;
                facet[f] = i_f;
            }
            if ok {
                out.insert(Automorphism { vertex, facet, preserves_orientation: preserves });
            }
        }
    }
    out.into_iter().collect()
}
