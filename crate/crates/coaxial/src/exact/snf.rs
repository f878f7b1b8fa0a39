//! Smith normal form over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// # Panics
    ///
    /// Panics on ragged input.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged integer matrix");
            data.extend(r.iter().cloned().map(Into::into));
        }
        IntMatrix { rows: rows.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "incompatible shapes");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else { return BigInt::zero() };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * &a[(n - 1, n - 1)]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[dst] += f * row[src]`
    fn add_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * f;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// `col[dst] += f * col[src]`
    fn add_col(&mut self, dst: usize, src: usize, f: &BigInt) {
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * f;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self.data[r * self.cols + j]);
            self.data[r * self.cols + j] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub rank: usize,
    /// Positive, each dividing the next; one per nonzero diagonal entry.
    pub elementary_divisors: Vec<BigInt>,
    /// `U` with `U M V = D`, when requested.
    pub left: Option<IntMatrix>,
    pub right: Option<IntMatrix>,
}

struct Work {
    a: IntMatrix,
    u: Option<IntMatrix>,
    v: Option<IntMatrix>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        if let Some(u) = &mut self.u {
            u.swap_rows(i, j);
        }
    }
    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        if let Some(v) = &mut self.v {
            v.swap_cols(i, j);
        }
    }
    fn add_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        self.a.add_row(dst, src, f);
        if let Some(u) = &mut self.u {
            u.add_row(dst, src, f);
        }
    }
    fn add_col(&mut self, dst: usize, src: usize, f: &BigInt) {
        self.a.add_col(dst, src, f);
        if let Some(v) = &mut self.v {
            v.add_col(dst, src, f);
        }
    }
    fn negate_row(&mut self, r: usize) {
        self.a.negate_row(r);
        if let Some(u) = &mut self.u {
            u.negate_row(r);
        }
    }

    /// Smallest nonzero |entry| in the trailing block; ties go to the lowest row, then column.
    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows {
            for j in t..self.a.cols {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs() < self.a[(bi, bj)].abs()) {
                    best = Some((i, j));
                    if x.is_one() || (-x).is_one() {
                        return best;
                    }
                }
            }
        }
        best
    }
}

/// Smith normal form with deterministic minimal-entry pivoting.
pub fn smith_normal_form(m: &IntMatrix, transforms: bool) -> SnfResult {
    let mut w = Work {
        a: m.clone(),
        u: transforms.then(|| IntMatrix::identity(m.rows)),
        v: transforms.then(|| IntMatrix::identity(m.cols)),
    };
    let (r, c) = (m.rows, m.cols);
    let mut t = 0;
    while t < r.min(c) {
        let Some((pi, pj)) = w.min_entry(t) else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let p = w.a[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..r {
                if !w.a[(i, t)].is_zero() {
                    let q = w.a[(i, t)].div_floor(&p);
                    w.add_row(i, t, &-q);
                    clean &= w.a[(i, t)].is_zero();
                }
            }
            for j in t + 1..c {
                if !w.a[(t, j)].is_zero() {
                    let q = w.a[(t, j)].div_floor(&p);
                    w.add_col(j, t, &-q);
                    clean &= w.a[(t, j)].is_zero();
                }
            }
            if !clean {
                let (pi, pj) = w.min_entry(t).expect("pivot block is nonzero");
                w.swap_rows(t, pi);
                w.swap_cols(t, pj);
                continue;
            }
            // Enforce the divisibility chain before moving on.
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !w.a[(i, j)].is_multiple_of(&p)));
            match bad {
                Some(i) => w.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if w.a[(t, t)].is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }
    let elementary_divisors: Vec<BigInt> = (0..t).map(|i| w.a[(i, i)].clone()).collect();
    SnfResult { rank: elementary_divisors.len(), elementary_divisors, left: w.u, right: w.v }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn divisors(rows: &[Vec<i64>]) -> Vec<i64> {
        smith_normal_form(&IntMatrix::from_rows(rows), false)
            .elementary_divisors
            .iter()
            .map(|d| i64::try_from(d).unwrap())
            .collect()
    }

    #[test]
    fn diag_two_three() {
        assert_eq!(divisors(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
    }

    #[test]
    fn zero_matrix() {
        let s = smith_normal_form(&IntMatrix::zeros(3, 2), true);
        assert_eq!(s.rank, 0);
        assert!(s.elementary_divisors.is_empty());
    }

    #[test]
    fn transforms_reproduce_diagonal() {
        let m = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = smith_normal_form(&m, true);
        let d = s.left.as_ref().unwrap().mul(&m).mul(s.right.as_ref().unwrap());
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j && i < s.rank { s.elementary_divisors[i].clone() } else { BigInt::zero() };
                assert_eq!(d[(i, j)], want);
            }
        }
        assert_eq!(s.elementary_divisors, vec![2.into(), 6.into(), 12.into()]);
        assert_eq!(s.left.unwrap().determinant().abs(), BigInt::one());
        assert_eq!(s.right.unwrap().determinant().abs(), BigInt::one());
    }

    #[test]
    fn determinant_small() {
        assert_eq!(IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).determinant(), BigInt::from(-1));
        assert_eq!(
            IntMatrix::from_rows(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 2]]).determinant(),
            BigInt::from(6)
        );
    }
}
