//! Orbifold fundamental groups of polytopes and their kernels onto `(Z/2)^k`.
//!
//! Words are sequences of nonzero `i32`: `g + 1` for generator `g`,
//! `-(g + 1)` for its inverse.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{abelian_invariants, ExactError};
use crate::tuple::{FaceLattice, Mask};

pub type Word = Vec<i32>;

/// Largest target rank handled by the explicit coset table.
pub const MAX_TARGET_RANK: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("hyperplane {0} does not cut out a facet")]
    NotGeometric(usize),
    #[error("images span a space of rank {rank}, target rank is {k}")]
    NotSurjective { rank: usize, k: usize },
    #[error("relator {0} does not map to the identity")]
    NotAHomomorphism(usize),
    #[error("expected {expected} images, found {found}")]
    ImageCount { expected: usize, found: usize },
    #[error("target rank {0} exceeds the bound {MAX_TARGET_RANK}")]
    TooLarge(usize),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

fn letter(g: usize, inverse: bool) -> i32 {
    let x = g as i32 + 1;
    if inverse { -x } else { x }
}

fn gen_of(x: i32) -> usize {
    (x.unsigned_abs() - 1) as usize
}

/// Cancels adjacent inverse pairs.
pub fn free_reduce(w: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &x in w {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

/// Free reduction followed by removal of inverse pairs at the two ends.
pub fn cyclic_reduce(w: &[i32]) -> Word {
    let mut w = free_reduce(w);
    let mut start = 0;
    while w.len() >= start + 2 && w[start] == -w[w.len() - 1] {
        start += 1;
        w.pop();
    }
    w.drain(..start);
    w
}

pub fn commutator(a: i32, b: i32) -> Word {
    vec![a, b, -a, -b]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub generator_count: usize,
    pub relators: Vec<Word>,
    pub involutive: Vec<bool>,
}

impl Presentation {
    pub fn new(generator_count: usize, relators: Vec<Word>) -> Self {
        let relators = relators.iter().map(|r| cyclic_reduce(r)).filter(|r| !r.is_empty()).collect();
        let mut p = Presentation { generator_count, relators, involutive: vec![false; generator_count] };
        p.mark_involutions();
        p
    }

    fn mark_involutions(&mut self) {
        for r in &self.relators {
            if r.len() == 2 && r[0] == r[1] {
                self.involutive[gen_of(r[0])] = true;
            }
        }
    }

    /// Pairs `(i, j)`, `i < j`, with an explicit commutator relator.
    pub fn commuting_pairs(&self) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for r in &self.relators {
            if r.len() != 4 {
                continue;
            }
            let g: Vec<usize> = r.iter().map(|&x| gen_of(x)).collect();
            let alternating = g[0] == g[2] && g[1] == g[3] && g[0] != g[1];
            let balanced = r[0] == -r[2] && r[1] == -r[3];
            let inv = self.involutive[g[0]] && self.involutive[g[1]];
            if alternating && (balanced || inv) {
                out.insert((g[0].min(g[1]), g[0].max(g[1])));
            }
        }
        out
    }
}

/// Presentation of the reflection orbifold group of `P` (or of `P` minus its
/// non-simple vertices when `punctured`).
pub fn orbifold_group(lattice: &FaceLattice, punctured: bool) -> Result<Presentation, GroupError> {
    let n = lattice.n;
    let d = lattice.dim().unwrap_or(0);
    let full: Mask = (1 << n) - 1;
    for i in 0..n {
        if lattice.get(full & !(1 << i)).map(|f| f.dim + 1) != Some(d) {
            return Err(GroupError::NotGeometric(i));
        }
    }
    let mut relators: Vec<Word> = (0..n).map(|i| vec![letter(i, false), letter(i, false)]).collect();
    for (i, j) in commuting_pairs(lattice, punctured) {
        relators.push(commutator(letter(i, false), letter(j, false)));
    }
    Ok(Presentation::new(n, relators))
}

/// Pairs of facets that meet in `P` (in `P` without non-simple vertices when punctured).
pub fn commuting_pairs(lattice: &FaceLattice, punctured: bool) -> BTreeSet<(usize, usize)> {
    let n = lattice.n;
    let d = lattice.dim().unwrap_or(0);
    let mut out = BTreeSet::new();
    for f in &lattice.faces {
        let on = n - f.support.count_ones() as usize;
        if punctured && f.dim == 0 && on > d {
            continue;
        }
        for i in 0..n {
            for j in i + 1..n {
                if f.support >> i & 1 == 0 && f.support >> j & 1 == 0 {
                    out.insert((i, j));
                }
            }
        }
    }
    out
}

/// A homomorphism onto `(Z/2)^k`, one image (as a bit vector) per generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TwoGroupEpimorphism {
    pub k: usize,
    pub images: Vec<u64>,
}

fn gf2_rank(vs: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for &v in vs {
        let mut x = v;
        for &b in &basis {
            x = x.min(x ^ b);
        }
        if x != 0 {
            basis.push(x);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

impl TwoGroupEpimorphism {
    /// Generator `i` maps to `e_i`.
    pub fn natural(n: usize) -> Self {
        TwoGroupEpimorphism { k: n, images: (0..n).map(|i| 1 << i).collect() }
    }

    pub fn validate(&self, p: &Presentation) -> Result<(), GroupError> {
        if self.k > MAX_TARGET_RANK {
            return Err(GroupError::TooLarge(self.k));
        }
        if self.images.len() != p.generator_count {
            return Err(GroupError::ImageCount { expected: p.generator_count, found: self.images.len() });
        }
        let rank = gf2_rank(&self.images);
        if rank != self.k {
            return Err(GroupError::NotSurjective { rank, k: self.k });
        }
        for (r, w) in p.relators.iter().enumerate() {
            if w.iter().fold(0, |acc, &x| acc ^ self.images[gen_of(x)]) != 0 {
                return Err(GroupError::NotAHomomorphism(r));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelPresentation {
    pub index: usize,
    /// Schreier generators before reduction: `index * g - index + 1`.
    pub schreier_generators: usize,
    pub unreduced: Presentation,
    pub reduced: Presentation,
}

/// Reidemeister-Schreier presentation of the kernel, with a shortlex Schreier transversal.
pub fn kernel_presentation(p: &Presentation, e: &TwoGroupEpimorphism) -> Result<KernelPresentation, GroupError> {
    e.validate(p)?;
    let index = 1usize << e.k;
    let g = p.generator_count;
    // Breadth-first search from the trivial coset gives shortlex-least representatives.
    let mut seen = vec![false; index];
    let mut tree = vec![false; index * g];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(c) = queue.pop_front() {
        for x in 0..g {
            let d = c ^ e.images[x] as usize;
            if !seen[d] {
                seen[d] = true;
                tree[c * g + x] = true;
                queue.push_back(d);
            }
        }
    }
    let mut id = vec![usize::MAX; index * g];
    let mut count = 0;
    for (k, slot) in id.iter_mut().enumerate() {
        if !tree[k] {
            *slot = count;
            count += 1;
        }
    }
    let mut relators = Vec::with_capacity(index * p.relators.len());
    for r in &p.relators {
        for start in 0..index {
            let mut c = start;
            let mut w = Vec::with_capacity(r.len());
            for &x in r {
                let gx = gen_of(x);
                if x > 0 {
                    let s = id[c * g + gx];
                    if s != usize::MAX {
                        w.push(letter(s, false));
                    }
                    c ^= e.images[gx] as usize;
                } else {
                    c ^= e.images[gx] as usize;
                    let s = id[c * g + gx];
                    if s != usize::MAX {
                        w.push(letter(s, true));
                    }
                }
            }
            debug_assert_eq!(c, start);
            relators.push(w);
        }
    }
    let unreduced = Presentation::new(count, relators);
    let reduced = tietze_reduce(&unreduced);
    Ok(KernelPresentation { index, schreier_generators: count, unreduced, reduced })
}

/// Generator aliases `g = root^sign`, or `g = 1` when `root` is `None`.
struct Aliases {
    parent: Vec<(Option<usize>, i32)>,
}

impl Aliases {
    fn find(&mut self, g: usize) -> (Option<usize>, i32) {
        let (p, s) = self.parent[g];
        match p {
            Some(q) if q == g => (Some(g), 1),
            None => (None, 1),
            Some(q) => {
                let (r, t) = self.find(q);
                self.parent[g] = (r, s * t);
                (r, s * t)
            }
        }
    }

    fn rewrite(&mut self, w: &[i32]) -> Word {
        let mut out = Vec::with_capacity(w.len());
        for &x in w {
            let (r, s) = self.find(gen_of(x));
            if let Some(r) = r {
                out.push(letter(r, (s * x.signum()) < 0));
            }
        }
        cyclic_reduce(&out)
    }
}

/// Free and cyclic reduction plus elimination through relators of length one and two,
/// iterated to a fixpoint; surviving generators are renumbered in order.
pub fn tietze_reduce(p: &Presentation) -> Presentation {
    let g = p.generator_count;
    let mut al = Aliases { parent: (0..g).map(|i| (Some(i), 1)).collect() };
    let mut relators: Vec<Word> = p.relators.clone();
    loop {
        let mut changed = false;
        for r in &relators {
            let r = al.rewrite(r);
            match r.len() {
                1 => {
                    let (root, _) = al.find(gen_of(r[0]));
                    if let Some(root) = root {
                        al.parent[root] = (None, 1);
                        changed = true;
                    }
                }
                2 if gen_of(r[0]) != gen_of(r[1]) => {
                    // s^a t^b = 1 gives s = t^{-ab}.
                    let (s, t) = (gen_of(r[0]), gen_of(r[1]));
                    let (a, b) = (r[0].signum(), r[1].signum());
                    al.parent[s] = (Some(t), -a * b);
                    changed = true;
                }
                _ => {}
            }
        }
        let mut next: Vec<Word> = relators.iter().map(|r| al.rewrite(r)).filter(|r| !r.is_empty()).collect();
        next.sort();
        next.dedup();
        relators = next;
        if !changed {
            break;
        }
    }
    let mut roots: Vec<usize> = (0..g).filter(|&i| al.find(i) == (Some(i), 1)).collect();
    roots.sort_unstable();
    let renumber: BTreeMap<usize, usize> = roots.iter().enumerate().map(|(k, &r)| (r, k)).collect();
    let relators = relators
        .iter()
        .map(|r| r.iter().map(|&x| letter(renumber[&gen_of(x)], x < 0)).collect())
        .collect();
    Presentation::new(roots.len(), relators)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianizationResult {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

/// Smith normal form of the exponent-sum matrix.
pub fn abelianization(p: &Presentation) -> Result<AbelianizationResult, GroupError> {
    let rows = p
        .relators
        .iter()
        .map(|r| r.iter().map(|&x| (gen_of(x) as u32, i64::from(x.signum()))).collect())
        .collect();
    let inv = abelian_invariants(rows, p.generator_count)?;
    Ok(AbelianizationResult { free_rank: inv.free_rank, torsion: inv.torsion })
}

/// `2^g` when every generator is an involution and every pair commutes explicitly.
pub fn recognize_elementary_abelian(p: &Presentation) -> Option<u128> {
    if !p.involutive.iter().all(|&b| b) {
        return None;
    }
    let pairs = p.commuting_pairs();
    let g = p.generator_count;
    (pairs.len() == g * g.saturating_sub(1) / 2).then(|| 1u128 << g)
}

/// Ends of the cover at one removed vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndInfo {
    pub vertex: Mask,
    pub count: usize,
    /// The end's cross-section is a torus (otherwise a Klein bottle).
    pub torus: bool,
}

/// Colorings `facets -> (Z/2)^k \ {0}` with distinct images on edge-adjacent facets
/// and surjective image, one per `GL(k, 2)` orbit.
pub fn small_cover_colorings(lattice: &FaceLattice, k: usize) -> Vec<TwoGroupEpimorphism> {
    let n = lattice.n;
    let adjacent = edge_adjacent_pairs(lattice);
    let mut out = Vec::new();
    let mut images = vec![0u64; n];
    fn search(
        i: usize,
        rank: usize,
        k: usize,
        images: &mut Vec<u64>,
        adjacent: &BTreeSet<(usize, usize)>,
        out: &mut Vec<TwoGroupEpimorphism>,
    ) {
        let n = images.len();
        if i == n {
            if rank == k {
                out.push(TwoGroupEpimorphism { k, images: images.clone() });
            }
            return;
        }
        // Remaining facets must be able to raise the rank to k.
        if k - rank > n - i {
            return;
        }
        let mut candidates: Vec<(u64, usize)> = (1..1u64 << rank).map(|v| (v, rank)).collect();
        if rank < k {
            candidates.push((1 << rank, rank + 1));
        }
        for (v, r) in candidates {
            if (0..i).any(|j| images[j] == v && adjacent.contains(&(j, i))) {
                continue;
            }
            images[i] = v;
            search(i + 1, r, k, images, adjacent, out);
        }
    }
    search(0, 0, k, &mut images, &adjacent, &mut out);
    out
}

/// Facet pairs `(i, j)`, `i < j`, sharing a codimension-two face.
pub fn edge_adjacent_pairs(lattice: &FaceLattice) -> BTreeSet<(usize, usize)> {
    let n = lattice.n;
    let d = lattice.dim().unwrap_or(0);
    let mut out = BTreeSet::new();
    if d < 2 {
        return out;
    }
    for f in lattice.of_dim(d - 2) {
        let off: Vec<usize> = (0..n).filter(|&i| f.support >> i & 1 == 0).collect();
        if off.len() == 2 {
            out.insert((off[0], off[1]));
        }
    }
    out
}

/// Ends over the non-simple vertices for a coloring: `2^k / |image|` each, torus type
/// when some functional is one on every facet image at the vertex.
pub fn coloring_ends(lattice: &FaceLattice, e: &TwoGroupEpimorphism) -> Vec<EndInfo> {
    let n = lattice.n;
    let d = lattice.dim().unwrap_or(0);
    lattice
        .vertices()
        .filter(|v| n - v.support.count_ones() as usize > d)
        .map(|v| {
            let imgs: Vec<u64> = (0..n).filter(|&i| v.support >> i & 1 == 0).map(|i| e.images[i]).collect();
            let rank = gf2_rank(&imgs);
            let torus = (0..1u64 << e.k).any(|phi| imgs.iter().all(|&x| (phi & x).count_ones() % 2 == 1));
            EndInfo { vertex: v.support, count: 1 << (e.k - rank), torus }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smoothing::build;

    fn involutions(n: usize, pairs: &[(usize, usize)]) -> Presentation {
        let mut rel: Vec<Word> = (0..n).map(|i| vec![letter(i, false); 2]).collect();
        rel.extend(pairs.iter().map(|&(i, j)| commutator(letter(i, false), letter(j, false))));
        Presentation::new(n, rel)
    }

    #[test]
    fn reductions() {
        assert_eq!(free_reduce(&[1, 2, -2, -1, 3]), vec![3]);
        assert_eq!(cyclic_reduce(&[-1, 2, 3, 1]), vec![2, 3]);
    }

    #[test]
    fn cyclic_group_abelianization() {
        let p = Presentation::new(1, vec![vec![1, 1]]);
        let a = abelianization(&p).unwrap();
        assert_eq!((a.free_rank, a.torsion), (0, vec![BigInt::from(2)]));
    }

    #[test]
    fn infinite_dihedral_kernel() {
        let p = involutions(2, &[]);
        let k = kernel_presentation(&p, &TwoGroupEpimorphism::natural(2)).unwrap();
        assert_eq!(k.schreier_generators, 4 * 2 - 4 + 1);
        assert_eq!(abelianization(&k.reduced).unwrap().free_rank, 1);
        assert_eq!(k.reduced.generator_count, 1);
    }

    #[test]
    fn elementary_abelian() {
        let p = involutions(2, &[(0, 1)]);
        assert_eq!(recognize_elementary_abelian(&p), Some(4));
        assert_eq!(recognize_elementary_abelian(&involutions(3, &[(0, 1)])), None);
        let k = kernel_presentation(&p, &TwoGroupEpimorphism::natural(2)).unwrap();
        assert_eq!(k.reduced.generator_count, 0);
    }

    #[test]
    fn triangle_has_no_one_bit_coloring() {
        // Pairwise adjacent facets need distinct nonzero images.
        let l = build::tetrahedron().face_lattice().unwrap();
        assert!(small_cover_colorings(&l, 1).is_empty());
        // e1, e2, e3 plus any of the four other nonzero vectors, or e1, e2, e1+e2, e3.
        assert_eq!(small_cover_colorings(&l, 3).len(), 5);
    }

    #[test]
    fn surjectivity_checked() {
        let p = involutions(2, &[(0, 1)]);
        let e = TwoGroupEpimorphism { k: 2, images: vec![1, 1] };
        assert!(matches!(kernel_presentation(&p, &e), Err(GroupError::NotSurjective { .. })));
    }

    #[test]
    fn tietze_preserves_abelianization() {
        let l = build::bipyramid(3).face_lattice().unwrap();
        let p = orbifold_group(&l, true).unwrap();
        let k = kernel_presentation(&p, &TwoGroupEpimorphism::natural(6)).unwrap();
        let a = abelianization(&k.unreduced).unwrap();
        let b = abelianization(&k.reduced).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.free_rank, 12);
        assert!(a.torsion.is_empty());
    }
}
