use num_traits::{One, Zero};

use super::{ExactError, Rational};

/// Matrices with at least this many columns default to sparse storage.
pub const SPARSE_COLUMN_THRESHOLD: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Storage {
    Dense,
    Sparse,
}

#[derive(Clone, Debug)]
enum Data {
    Dense(Vec<Rational>),
    /// Rows of `(column, value)` with strictly increasing columns and no zeros.
    Sparse(Vec<Vec<(usize, Rational)>>),
}

/// A rational matrix with dense or sparse row storage.
#[derive(Clone, Debug)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Data,
}

impl RatMatrix {
    /// Builds a matrix from rows, choosing sparse storage for wide matrices.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, ExactError> {
        let cols = rows.first().map_or(0, Vec::len);
        let storage = if cols >= SPARSE_COLUMN_THRESHOLD { Storage::Sparse } else { Storage::Dense };
        Self::from_rows_with(rows, storage)
    }

    pub fn from_rows_with(rows: Vec<Vec<Rational>>, storage: Storage) -> Result<Self, ExactError> {
        let nrows = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        if nrows == 0 || cols == 0 {
            return Err(ExactError::EmptyMatrix);
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(ExactError::Ragged { row: i, expected: cols, found: r.len() });
            }
        }
        let data = match storage {
            Storage::Dense => Data::Dense(rows.into_iter().flatten().collect()),
            Storage::Sparse => Data::Sparse(
                rows.into_iter()
                    .map(|r| r.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect())
                    .collect(),
            ),
        };
        Ok(RatMatrix { rows: nrows, cols, data })
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self, ExactError> {
        Self::from_rows(
            rows.iter().map(|r| r.iter().map(|&v| super::int(v)).collect()).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn storage(&self) -> Storage {
        match self.data {
            Data::Dense(_) => Storage::Dense,
            Data::Sparse(_) => Storage::Sparse,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        match &self.data {
            Data::Dense(v) => v[i * self.cols + j].clone(),
            Data::Sparse(r) => match r[i].binary_search_by_key(&j, |(c, _)| *c) {
                Ok(k) => r[i][k].1.clone(),
                Err(_) => Rational::zero(),
            },
        }
    }

    pub fn to_dense_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j)).collect()).collect()
    }

    pub fn to_storage(&self, storage: Storage) -> RatMatrix {
        Self::from_rows_with(self.to_dense_rows(), storage).expect("shape already validated")
    }

    pub fn transpose(&self) -> RatMatrix {
        let rows = (0..self.cols).map(|j| (0..self.rows).map(|i| self.get(i, j)).collect()).collect();
        Self::from_rows_with(rows, self.storage()).expect("shape already validated")
    }

    pub fn mul_vec(&self, t: &[Rational]) -> Result<Vec<Rational>, ExactError> {
        if t.len() != self.cols {
            return Err(ExactError::DimensionMismatch { expected: self.cols, found: t.len() });
        }
        Ok(match &self.data {
            Data::Dense(v) => (0..self.rows)
                .map(|i| {
                    v[i * self.cols..(i + 1) * self.cols]
                        .iter()
                        .zip(t)
                        .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
                })
                .collect(),
            Data::Sparse(r) => r
                .iter()
                .map(|row| row.iter().fold(Rational::zero(), |acc, (c, a)| acc + a * &t[*c]))
                .collect(),
        })
    }

    /// The submatrix formed by the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Result<RatMatrix, ExactError> {
        let rows = (0..self.rows).map(|i| cols.iter().map(|&j| self.get(i, j)).collect()).collect();
        Self::from_rows_with(rows, self.storage())
    }

    pub fn with_row(&self, row: Vec<Rational>) -> Result<RatMatrix, ExactError> {
        let mut rows = self.to_dense_rows();
        rows.push(row);
        Self::from_rows_with(rows, self.storage())
    }
}

/// Reduced row echelon form; returns the nonzero rows and their pivot columns.
pub fn rref_rows(mut a: Vec<Vec<Rational>>) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = Rational::one() / &a[r][c];
        for v in a[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    a.truncate(r);
    (a, pivots)
}

fn sparse_rank(rows: &[Vec<(usize, Rational)>]) -> usize {
    // Incremental elimination: each stored pivot row has a distinct leading column.
    let mut pivots: std::collections::BTreeMap<usize, Vec<(usize, Rational)>> = Default::default();
    for row in rows {
        let mut cur = row.clone();
        while let Some((lead, lv)) = cur.first().cloned() {
            let Some(p) = pivots.get(&lead) else {
                pivots.insert(lead, cur);
                break;
            };
            let f = lv / &p[0].1;
            cur = axpy(&cur, &f, p);
        }
    }
    pivots.len()
}

/// `x - f * y` on sorted sparse rows.
fn axpy(x: &[(usize, Rational)], f: &Rational, y: &[(usize, Rational)]) -> Vec<(usize, Rational)> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take = match (x.get(i), y.get(j)) {
            (Some(a), Some(b)) => a.0.cmp(&b.0),
            (Some(_), None) => std::cmp::Ordering::Less,
            _ => std::cmp::Ordering::Greater,
        };
        match take {
            std::cmp::Ordering::Less => {
                out.push(x[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push((y[j].0, -(f * &y[j].1)));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let v = &x[i].1 - f * &y[j].1;
                if !v.is_zero() {
                    out.push((x[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Pivot columns of the reduced row echelon form: a basis of the column space.
pub fn rref_basis(m: &RatMatrix) -> Vec<usize> {
    rref_rows(m.to_dense_rows()).1
}

/// Rank over the rationals.
pub fn rational_rank(m: &RatMatrix) -> usize {
    match &m.data {
        Data::Dense(_) => rref_rows(m.to_dense_rows()).1.len(),
        Data::Sparse(rows) => sparse_rank(rows),
    }
}

fn augmented(m: &RatMatrix, b: &[Rational]) -> Result<Vec<Vec<Rational>>, ExactError> {
    if b.len() != m.rows() {
        return Err(ExactError::DimensionMismatch { expected: m.rows(), found: b.len() });
    }
    Ok(m.to_dense_rows()
        .into_iter()
        .zip(b)
        .map(|(mut r, bi)| {
            r.push(bi.clone());
            r
        })
        .collect())
}

/// Dimension of the affine space `{t : M t = b}`, or `None` when it is empty.
pub fn affine_solution_dimension(m: &RatMatrix, b: &[Rational]) -> Result<Option<usize>, ExactError> {
    let (_, pivots) = rref_rows(augmented(m, b)?);
    if pivots.last() == Some(&m.cols()) {
        return Ok(None);
    }
    Ok(Some(m.cols() - pivots.len()))
}

/// The unique solution of `M t = b`, if the system has exactly one.
pub fn solve_unique(m: &RatMatrix, b: &[Rational]) -> Result<Option<Vec<Rational>>, ExactError> {
    let (red, pivots) = rref_rows(augmented(m, b)?);
    if pivots.len() != m.cols() || pivots.last() == Some(&m.cols()) {
        return Ok(None);
    }
    Ok(Some(red.iter().map(|r| r[m.cols()].clone()).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn m(rows: &[Vec<i64>]) -> RatMatrix {
        RatMatrix::from_int_rows(rows).unwrap()
    }

    #[test]
    fn identity_and_zero_ranks() {
        assert_eq!(rational_rank(&m(&[vec![1, 0], vec![0, 1]])), 2);
        assert_eq!(rational_rank(&m(&[vec![0; 4], vec![0; 4], vec![0; 4]])), 0);
    }

    #[test]
    fn octahedron_vectors_have_rank_four() {
        let rows = vec![
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
            vec![-1, -1, -1, 0],
            vec![-1, -1, 0, -1],
            vec![-1, 0, -1, -1],
            vec![2, 1, 1, 1],
        ];
        let a = m(&rows);
        assert_eq!(rational_rank(&a), 4);
        assert_eq!(rational_rank(&a.to_storage(Storage::Sparse)), 4);
    }

    #[test]
    fn storage_choice_follows_width() {
        assert_eq!(m(&[vec![1; 3]]).storage(), Storage::Dense);
        assert_eq!(m(&[vec![1; 64]]).storage(), Storage::Sparse);
    }

    #[test]
    fn affine_dimensions() {
        let id = m(&[vec![1, 0], vec![0, 1]]);
        assert_eq!(affine_solution_dimension(&id, &[int(0), int(0)]).unwrap(), Some(0));
        let bad = m(&[vec![1, 1], vec![1, 1]]);
        assert_eq!(affine_solution_dimension(&bad, &[int(0), int(1)]).unwrap(), None);
        // The six bipyramid vectors with the row of ones: a 3 x 6 system of rank 3.
        let bp = m(&[vec![-1, 1, 1, 1, -1, -1], vec![-1, -1, 0, 1, 1, 0], vec![1; 6]]);
        assert_eq!(affine_solution_dimension(&bp, &[int(0), int(0), int(1)]).unwrap(), Some(3));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let id = m(&[vec![1, 0], vec![0, 1]]);
        assert!(matches!(
            affine_solution_dimension(&id, &[int(0)]),
            Err(ExactError::DimensionMismatch { expected: 2, found: 1 })
        ));
        assert!(id.mul_vec(&[int(1)]).is_err());
    }

    #[test]
    fn empty_and_ragged_rejected() {
        assert_eq!(RatMatrix::from_rows(vec![]).unwrap_err(), ExactError::EmptyMatrix);
        assert!(matches!(
            RatMatrix::from_int_rows(&[vec![1, 2], vec![1]]),
            Err(ExactError::Ragged { row: 1, .. })
        ));
    }
}
