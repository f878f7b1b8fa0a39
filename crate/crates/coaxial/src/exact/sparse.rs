//! Abelian group invariants of `Z^cols / rowspace`, for large sparse relation matrices.
//!
//! Unit pivots are eliminated first with checked `i64` arithmetic; whatever
//! is left goes through the dense [`smith_normal_form`].

use std::collections::{BTreeSet, BinaryHeap};
use std::cmp::Reverse;

use num_bigint::BigInt;
use num_traits::One;

use super::snf::{smith_normal_form, IntMatrix};
use super::ExactError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    /// Invariant factors greater than one, each dividing the next.
    pub torsion: Vec<BigInt>,
    /// Rank of the relation matrix.
    pub relation_rank: usize,
}

type Row = Vec<(u32, i64)>;

fn normalize(mut row: Row) -> Row {
    row.sort_unstable_by_key(|e| e.0);
    let mut out: Row = Vec::with_capacity(row.len());
    for (c, v) in row {
        match out.last_mut() {
            Some(last) if last.0 == c => last.1 += v,
            _ => out.push((c, v)),
        }
    }
    out.retain(|e| e.1 != 0);
    out
}

/// `x - f * y`
fn combine(x: &[(u32, i64)], f: i64, y: &[(u32, i64)]) -> Result<Row, ExactError> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let ord = match (x.get(i), y.get(j)) {
            (Some(a), Some(b)) => a.0.cmp(&b.0),
            (Some(_), None) => std::cmp::Ordering::Less,
            _ => std::cmp::Ordering::Greater,
        };
        match ord {
            std::cmp::Ordering::Less => {
                out.push(x[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                let v = f.checked_mul(y[j].1).and_then(i64::checked_neg).ok_or(ExactError::Overflow)?;
                out.push((y[j].0, v));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let v = f
                    .checked_mul(y[j].1)
                    .and_then(|p| x[i].1.checked_sub(p))
                    .ok_or(ExactError::Overflow)?;
                if v != 0 {
                    out.push((x[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    Ok(out)
}

/// Invariants of the abelian group with `cols` generators and the given relation rows.
///
/// Rows are lists of `(column, coefficient)`; duplicates are summed.
pub fn abelian_invariants(rows: Vec<Vec<(u32, i64)>>, cols: usize) -> Result<AbelianInvariants, ExactError> {
    let mut rows: Vec<Option<Row>> = rows.into_iter().map(|r| Some(normalize(r))).collect();
    for r in rows.iter().flatten() {
        if let Some(&(c, _)) = r.last() {
            if c as usize >= cols {
                return Err(ExactError::DimensionMismatch { expected: cols, found: c as usize + 1 });
            }
        }
    }
    let mut col_rows: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); cols];
    for (i, r) in rows.iter().enumerate() {
        for &(c, _) in r.as_ref().unwrap() {
            col_rows[c as usize].insert(i as u32);
        }
    }
    let mut heap: BinaryHeap<Reverse<(usize, u32)>> = rows
        .iter()
        .enumerate()
        .filter_map(|(i, r)| r.as_ref().filter(|r| !r.is_empty()).map(|r| Reverse((r.len(), i as u32))))
        .collect();
    let mut unit_pivots = 0usize;
    while let Some(Reverse((len, ri))) = heap.pop() {
        let ri = ri as usize;
        let Some(row) = rows[ri].as_ref() else { continue };
        if row.len() != len || row.is_empty() {
            // Stale heap entry; the current length was pushed separately.
            continue;
        }
        let pivot = row
            .iter()
            .filter(|e| e.1.abs() == 1)
            .min_by_key(|e| (col_rows[e.0 as usize].len(), e.0))
            .copied();
        let Some((pc, pv)) = pivot else { continue };
        let prow = rows[ri].take().unwrap();
        for &(c, _) in &prow {
            col_rows[c as usize].remove(&(ri as u32));
        }
        let others: Vec<u32> = col_rows[pc as usize].iter().copied().collect();
        for oi in others {
            let oi = oi as usize;
            let orow = rows[oi].take().unwrap();
            let coef = orow.iter().find(|e| e.0 == pc).unwrap().1;
            // pv is +-1, so coef / pv == coef * pv.
            let new = combine(&orow, coef * pv, &prow)?;
            for &(c, _) in &orow {
                col_rows[c as usize].remove(&(oi as u32));
            }
            for &(c, _) in &new {
                col_rows[c as usize].insert(oi as u32);
            }
            if !new.is_empty() {
                heap.push(Reverse((new.len(), oi as u32)));
            }
            rows[oi] = Some(new);
        }
        debug_assert!(col_rows[pc as usize].is_empty());
        unit_pivots += 1;
    }
    // Dense remainder over the columns that still occur.
    let live: Vec<Row> = rows.into_iter().flatten().filter(|r| !r.is_empty()).collect();
    let used: BTreeSet<u32> = live.iter().flat_map(|r| r.iter().map(|e| e.0)).collect();
    let index: std::collections::HashMap<u32, usize> = used.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let mut divisors: Vec<BigInt> = Vec::new();
    if !live.is_empty() {
        let mut dense = IntMatrix::zeros(live.len(), used.len());
        for (i, r) in live.iter().enumerate() {
            for &(c, v) in r {
                dense[(i, index[&c])] = BigInt::from(v);
            }
        }
        divisors = smith_normal_form(&dense, false).elementary_divisors;
    }
    let relation_rank = unit_pivots + divisors.len();
    Ok(AbelianInvariants {
        free_rank: cols - relation_rank,
        torsion: divisors.into_iter().filter(|d| !d.is_one()).collect(),
        relation_rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_of_order_two() {
        let inv = abelian_invariants(vec![vec![(0, 2)]], 1).unwrap();
        assert_eq!(inv.free_rank, 0);
        assert_eq!(inv.torsion, vec![BigInt::from(2)]);
    }

    #[test]
    fn free_when_no_relations() {
        let inv = abelian_invariants(vec![], 3).unwrap();
        assert_eq!((inv.free_rank, inv.torsion.len()), (3, 0));
    }

    #[test]
    fn mixed_unit_and_dense() {
        // x + y = 0, 2x + 4z = 0, 6z = 0 on three generators.
        let rows = vec![vec![(0, 1), (1, 1)], vec![(0, 2), (2, 4)], vec![(2, 6)]];
        let inv = abelian_invariants(rows, 3).unwrap();
        assert_eq!(inv.free_rank, 0);
        // Relation lattice has SNF (1, 2, 12) after eliminating x.
        let mut t = inv.torsion.clone();
        t.sort();
        let snf = smith_normal_form(&IntMatrix::from_rows(&[vec![1, 1, 0], vec![2, 0, 4], vec![0, 0, 6]]), false);
        let want: Vec<BigInt> = snf.elementary_divisors.into_iter().filter(|d| !d.is_one()).collect();
        assert_eq!(t, want);
    }

    #[test]
    fn duplicates_summed_and_bounds_checked() {
        let inv = abelian_invariants(vec![vec![(0, 1), (0, 1)]], 1).unwrap();
        assert_eq!(inv.torsion, vec![BigInt::from(2)]);
        assert!(abelian_invariants(vec![vec![(5, 1)]], 2).is_err());
    }
}
