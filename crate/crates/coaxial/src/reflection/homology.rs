//! Integral homology of finite chain complexes by unit-pivot reduction.
//!
//! Phase one pairs cells only when the pairing causes no fill-in outside a
//! set of cells declared critical (collapses and coreductions). Phase two
//! runs Markowitz-ordered elimination on the small remainder, and the last
//! step takes Smith normal forms of whatever is left.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::exact::{smith_normal_form, ExactError, IntMatrix};

/// Cells numbered so that dimensions are non-decreasing, with signed boundaries.
#[derive(Clone, Debug, Default)]
pub struct ChainComplex {
    dims: Vec<u8>,
    boundary: Vec<Vec<(u32, i32)>>,
}

impl ChainComplex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a cell; boundary entries must refer to earlier cells of dimension `dim - 1`.
    pub fn push(&mut self, dim: usize, mut boundary: Vec<(u32, i32)>) -> u32 {
        debug_assert!(self.dims.last().is_none_or(|&d| usize::from(d) <= dim));
        boundary.sort_unstable_by_key(|e| e.0);
        let mut merged: Vec<(u32, i32)> = Vec::with_capacity(boundary.len());
        for (c, v) in boundary {
            match merged.last_mut() {
                Some(last) if last.0 == c => last.1 += v,
                _ => merged.push((c, v)),
            }
        }
        merged.retain(|e| e.1 != 0);
        self.dims.push(dim as u8);
        self.boundary.push(merged);
        (self.dims.len() - 1) as u32
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn top_dim(&self) -> Option<usize> {
        self.dims.last().map(|&d| usize::from(d))
    }

    pub fn cell_counts(&self) -> Vec<usize> {
        let mut out = vec![0; self.top_dim().map_or(0, |d| d + 1)];
        for &d in &self.dims {
            out[usize::from(d)] += 1;
        }
        out
    }

    pub fn boundary(&self, cell: u32) -> &[(u32, i32)] {
        &self.boundary[cell as usize]
    }

    /// Checks `d o d = 0` on every cell.
    pub fn is_chain_complex(&self) -> bool {
        self.boundary.iter().all(|bd| {
            let mut acc: std::collections::BTreeMap<u32, i64> = Default::default();
            for &(f, c) in bd {
                for &(g, e) in &self.boundary[f as usize] {
                    *acc.entry(g).or_default() += i64::from(c) * i64::from(e);
                }
            }
            acc.values().all(|&v| v == 0)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Homology {
    pub betti: Vec<usize>,
    /// Torsion coefficients of `H_k`, empty when not requested.
    pub torsion: Vec<Vec<BigInt>>,
}

impl Homology {
    pub fn euler_characteristic(&self) -> i64 {
        self.betti.iter().enumerate().map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) }).sum()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.iter().all(Vec::is_empty)
    }
}

struct Reducer {
    bd: Vec<Vec<(u32, i32)>>,
    cobd: Vec<Vec<u32>>,
    alive: Vec<bool>,
    crit: Vec<bool>,
    ncb: Vec<u32>,
    queue: VecDeque<u32>,
}

fn coef(list: &[(u32, i32)], b: u32) -> i32 {
    list.binary_search_by_key(&b, |e| e.0).map_or(0, |k| list[k].1)
}

fn remove_from(list: &mut Vec<u32>, x: u32) {
    if let Some(k) = list.iter().position(|&y| y == x) {
        list.swap_remove(k);
    }
}

impl Reducer {
    fn new(cc: ChainComplex) -> Self {
        let n = cc.len();
        let mut cobd = vec![Vec::new(); n];
        for (a, bd) in cc.boundary.iter().enumerate() {
            for &(b, _) in bd {
                cobd[b as usize].push(a as u32);
            }
        }
        let ncb = cc.boundary.iter().map(|b| b.len() as u32).collect();
        Reducer { bd: cc.boundary, cobd, alive: vec![true; n], crit: vec![false; n], ncb, queue: VecDeque::new() }
    }

    fn tracked(&self, c: u32) -> bool {
        !self.crit[c as usize]
    }

    fn recount(&mut self, x: u32) {
        let crit = &self.crit;
        let n = self.bd[x as usize].iter().filter(|e| !crit[e.0 as usize]).count() as u32;
        self.ncb[x as usize] = n;
        if n == 1 {
            self.queue.push_back(x);
        }
    }

    /// Cancels the pair `(a, b)` where `b` appears in the boundary of `a` with a unit.
    fn eliminate(&mut self, a: u32, b: u32) -> Result<(), ExactError> {
        let u = coef(&self.bd[a as usize], b);
        debug_assert!(u == 1 || u == -1);
        let da = std::mem::take(&mut self.bd[a as usize]);
        let xs: Vec<u32> = self.cobd[b as usize].iter().copied().filter(|&x| x != a).collect();
        for x in xs {
            let old = std::mem::take(&mut self.bd[x as usize]);
            let f = -(coef(&old, b) * u);
            let mut out = Vec::with_capacity(old.len() + da.len());
            let (mut i, mut j) = (0, 0);
            while i < old.len() || j < da.len() {
                let (oc, dc) = (old.get(i).map(|e| e.0), da.get(j).map(|e| e.0));
                match (oc, dc) {
                    (Some(p), Some(q)) if p == q => {
                        let v = f
                            .checked_mul(da[j].1)
                            .and_then(|t| t.checked_add(old[i].1))
                            .ok_or(ExactError::Overflow)?;
                        if v != 0 {
                            out.push((p, v));
                        } else if self.tracked(p) {
                            remove_from(&mut self.cobd[p as usize], x);
                            if self.cobd[p as usize].len() == 1 {
                                self.queue.push_back(p);
                            }
                        }
                        i += 1;
                        j += 1;
                    }
                    (Some(p), q) if q.is_none_or(|q| p < q) => {
                        out.push(old[i]);
                        i += 1;
                    }
                    _ => {
                        let q = da[j].0;
                        let v = f.checked_mul(da[j].1).ok_or(ExactError::Overflow)?;
                        out.push((q, v));
                        if self.tracked(q) {
                            self.cobd[q as usize].push(x);
                        }
                        j += 1;
                    }
                }
            }
            self.bd[x as usize] = out;
            self.recount(x);
        }
        for &(y, _) in &da {
            if y != b && self.tracked(y) {
                remove_from(&mut self.cobd[y as usize], a);
                if self.cobd[y as usize].len() == 1 {
                    self.queue.push_back(y);
                }
            }
        }
        for z in std::mem::take(&mut self.cobd[a as usize]) {
            let list = &mut self.bd[z as usize];
            if let Ok(k) = list.binary_search_by_key(&a, |e| e.0) {
                list.remove(k);
            }
            self.recount(z);
        }
        for (y, _) in std::mem::take(&mut self.bd[b as usize]) {
            if self.tracked(y) {
                remove_from(&mut self.cobd[y as usize], b);
                if self.cobd[y as usize].len() == 1 {
                    self.queue.push_back(y);
                }
            }
        }
        self.cobd[b as usize].clear();
        self.alive[a as usize] = false;
        self.alive[b as usize] = false;
        Ok(())
    }

    /// Collapses and coreductions, declaring a new critical cell when both run dry.
    fn phase_one(&mut self) -> Result<(), ExactError> {
        let n = self.bd.len();
        self.queue.extend(0..n as u32);
        let mut pointer = 0;
        loop {
            while let Some(c) = self.queue.pop_front() {
                let ci = c as usize;
                if !self.alive[ci] || self.crit[ci] {
                    continue;
                }
                if self.ncb[ci] == 1 {
                    let crit = &self.crit;
                    let &(b, v) = self.bd[ci].iter().find(|e| !crit[e.0 as usize]).expect("one free face");
                    if v.abs() == 1 {
                        self.eliminate(c, b)?;
                        continue;
                    }
                }
                if self.cobd[ci].len() == 1 {
                    let a = self.cobd[ci][0];
                    if !self.crit[a as usize] && coef(&self.bd[a as usize], c).abs() == 1 {
                        self.eliminate(a, c)?;
                    }
                }
            }
            while pointer < n && (!self.alive[pointer] || self.crit[pointer]) {
                pointer += 1;
            }
            if pointer == n {
                return Ok(());
            }
            self.crit[pointer] = true;
            for x in std::mem::take(&mut self.cobd[pointer]) {
                self.recount(x);
            }
        }
    }

    /// General elimination on the critical cells, cheapest fill-in first.
    fn phase_two(&mut self) -> Result<(), ExactError> {
        let cells: Vec<u32> = (0..self.bd.len() as u32).filter(|&c| self.alive[c as usize]).collect();
        for &c in &cells {
            self.crit[c as usize] = false;
            self.cobd[c as usize].clear();
        }
        for &a in &cells {
            for &(b, _) in &self.bd[a as usize] {
                self.cobd[b as usize].push(a);
            }
        }
        loop {
            let mut best: Option<(usize, u32, u32)> = None;
            for &a in &cells {
                if !self.alive[a as usize] {
                    continue;
                }
                let la = self.bd[a as usize].len();
                for &(b, v) in &self.bd[a as usize] {
                    if v.abs() != 1 {
                        continue;
                    }
                    let cost = (self.cobd[b as usize].len() - 1) * (la - 1);
                    if best.is_none_or(|(c, _, _)| cost < c) {
                        best = Some((cost, a, b));
                    }
                }
                if best.is_some_and(|b| b.0 == 0) {
                    break;
                }
            }
            let Some((_, a, b)) = best else { return Ok(()) };
            self.eliminate(a, b)?;
            self.queue.clear();
        }
    }
}

/// Betti numbers, and torsion coefficients when `torsion` is set.
pub fn homology(cc: ChainComplex, torsion: bool) -> Result<Homology, ExactError> {
    let Some(top) = cc.top_dim() else { return Ok(Homology { betti: Vec::new(), torsion: Vec::new() }) };
    let dims = cc.dims.clone();
    let mut r = Reducer::new(cc);
    r.phase_one()?;
    r.phase_two()?;
    let mut by_dim: Vec<Vec<u32>> = vec![Vec::new(); top + 1];
    for c in 0..r.bd.len() {
        if r.alive[c] {
            by_dim[usize::from(dims[c])].push(c as u32);
        }
    }
    // ranks[k] and divisors[k] describe the boundary map from dimension k to k - 1.
    let mut ranks = vec![0usize; top + 2];
    let mut divisors: Vec<Vec<BigInt>> = vec![Vec::new(); top + 2];
    for k in 1..=top {
        let (rows, cols) = (&by_dim[k - 1], &by_dim[k]);
        if rows.is_empty() || cols.is_empty() || cols.iter().all(|&c| r.bd[c as usize].is_empty()) {
            continue;
        }
        let entries: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|&y| cols.iter().map(|&x| BigInt::from(coef(&r.bd[x as usize], y))).collect())
            .collect();
        let snf = smith_normal_form(&IntMatrix::from_rows(&entries), false);
        ranks[k] = snf.rank;
        divisors[k] = snf.elementary_divisors.into_iter().filter(|d| !d.abs().is_one()).map(|d| d.abs()).collect();
    }
    let betti = (0..=top).map(|k| by_dim[k].len() - ranks[k] - ranks[k + 1]).collect();
    let torsion = if torsion { (0..=top).map(|k| divisors[k + 1].clone()).collect() } else { Vec::new() };
    Ok(Homology { betti, torsion })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Boundary of the standard `d`-simplex as a simplicial complex.
    fn sphere(d: usize) -> ChainComplex {
        let n = d + 2;
        let mut cc = ChainComplex::new();
        let mut ids = std::collections::BTreeMap::new();
        for k in 1..=n - 1 {
            for mask in 1u32..(1 << n) {
                if mask.count_ones() as usize != k {
                    continue;
                }
                let verts: Vec<u32> = (0..n as u32).filter(|i| mask >> i & 1 == 1).collect();
                let bd = if k == 1 {
                    Vec::new()
                } else {
                    verts.iter().enumerate().map(|(i, v)| (ids[&(mask & !(1 << v))], if i % 2 == 0 { 1 } else { -1 })).collect()
                };
                ids.insert(mask, cc.push(k - 1, bd));
            }
        }
        cc
    }

    #[test]
    fn spheres() {
        for d in 1..=4 {
            let cc = sphere(d);
            assert!(cc.is_chain_complex());
            let h = homology(cc, true).unwrap();
            let mut expect = vec![0; d + 1];
            expect[0] = 1;
            expect[d] = 1;
            assert_eq!(h.betti, expect, "S^{d}");
            assert!(h.is_torsion_free());
        }
    }

    #[test]
    fn projective_plane_has_torsion() {
        // Minimal CW structure: one cell per dimension, the 2-cell attached by degree 2.
        let mut cc = ChainComplex::new();
        let v = cc.push(0, vec![]);
        let e = cc.push(1, vec![(v, 1), (v, -1)]);
        cc.push(2, vec![(e, 2)]);
        let h = homology(cc, true).unwrap();
        assert_eq!(h.betti, vec![1, 0, 0]);
        assert_eq!(h.torsion[1], vec![BigInt::from(2)]);
    }

    #[test]
    fn torus_cw() {
        let mut cc = ChainComplex::new();
        let v = cc.push(0, vec![]);
        let a = cc.push(1, vec![]);
        let b = cc.push(1, vec![]);
        cc.push(2, vec![(a, 1), (b, 1), (a, -1), (b, -1)]);
        let _ = v;
        assert_eq!(homology(cc, true).unwrap().betti, vec![1, 2, 1]);
    }
}
