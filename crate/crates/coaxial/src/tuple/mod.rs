//! The defining tuple `A_1, ..., A_n` and the checks on it that do not need
//! the face lattice: normalization conditions, weak hyperbolicity, zeros.

mod faces;

pub use faces::{
    classify_singularities, depth, enumerate_faces, enumerate_faces_with_bound, face_barycenter,
    vertex_coordinates, FaceDescriptor, FaceLattice, Singularity, DEFAULT_ENUMERATION_BOUND,
};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact::{
    int, nonnegative_solution, rational_rank, rref_basis, strictly_positive_solution, ExactError,
    RatMatrix, Rational,
};

/// Subsets of `[n]` as bitmasks; bit `i` is index `i` (zero based).
pub type Mask = u64;

pub fn mask_of(indices: &[usize]) -> Mask {
    indices.iter().fold(0, |m, &i| m | (1 << i))
}

pub fn indices_of(mask: Mask) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TupleError {
    #[error("a tuple needs at least one vector")]
    Empty,
    #[error("vector {index} has length {found}, expected {expected}")]
    Ragged { index: usize, expected: usize, found: usize },
    #[error("tuple has {n} vectors, enumeration bound is {bound}")]
    BoundExceeded { n: usize, bound: usize },
    #[error("support {0:#b} is not a face of P")]
    NotAFace(Mask),
    #[error("support {0:#b} is not a vertex of P")]
    NotAVertex(Mask),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// The tuple `A = (A_1, ..., A_n)` of rational vectors in `Q^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tuple {
    m: usize,
    vectors: Vec<Vec<Rational>>,
}

impl Tuple {
    pub fn new(m: usize, vectors: Vec<Vec<Rational>>) -> Result<Self, TupleError> {
        if vectors.is_empty() {
            return Err(TupleError::Empty);
        }
        if vectors.len() > 64 {
            return Err(TupleError::BoundExceeded { n: vectors.len(), bound: 64 });
        }
        for (index, v) in vectors.iter().enumerate() {
            if v.len() != m {
                return Err(TupleError::Ragged { index, expected: m, found: v.len() });
            }
        }
        Ok(Tuple { m, vectors })
    }

    pub fn from_ints(m: usize, vectors: &[Vec<i64>]) -> Result<Self, TupleError> {
        Self::new(m, vectors.iter().map(|v| v.iter().map(|&x| int(x)).collect()).collect())
    }

    /// Expands the `v^k` notation: each vector is repeated `k` times in order.
    pub fn with_multiplicities(m: usize, groups: &[(Vec<Rational>, usize)]) -> Result<Self, TupleError> {
        let vectors =
            groups.iter().flat_map(|(v, k)| std::iter::repeat_n(v.clone(), *k)).collect();
        Self::new(m, vectors)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<Rational>] {
        &self.vectors
    }

    pub fn full_mask(&self) -> Mask {
        if self.n() == 64 { Mask::MAX } else { (1 << self.n()) - 1 }
    }

    /// Columns `A_i` (i in `support`) stacked over a row of ones, with right-hand side `(0, 1)`.
    pub(crate) fn system(&self, support: Mask) -> Option<(RatMatrix, Vec<Rational>)> {
        let idx = indices_of(support);
        if idx.is_empty() {
            return None;
        }
        let mut rows: Vec<Vec<Rational>> =
            (0..self.m).map(|r| idx.iter().map(|&i| self.vectors[i][r].clone()).collect()).collect();
        rows.push(vec![Rational::one(); idx.len()]);
        let mut b = vec![Rational::zero(); self.m];
        b.push(Rational::one());
        Some((RatMatrix::from_rows(rows).expect("nonempty system"), b))
    }

    /// The `m x n` matrix whose columns are the vectors, or `None` when `m = 0`.
    fn column_matrix(&self, support: Mask) -> Option<RatMatrix> {
        let idx = indices_of(support);
        if self.m == 0 || idx.is_empty() {
            return None;
        }
        RatMatrix::from_rows(
            (0..self.m).map(|r| idx.iter().map(|&i| self.vectors[i][r].clone()).collect()).collect(),
        )
        .ok()
    }

    pub fn rank(&self) -> usize {
        self.column_matrix(self.full_mask()).map_or(0, |a| rational_rank(&a))
    }

    /// Whether `0` is a convex combination of the vectors indexed by `support`.
    pub fn origin_in_hull(&self, support: Mask) -> Result<bool, TupleError> {
        let Some((a, b)) = self.system(support) else { return Ok(false) };
        Ok(nonnegative_solution(&a, &b)?.is_some())
    }

    /// Whether `0` is a convex combination with all coefficients positive.
    pub fn origin_in_relative_interior(&self, support: Mask) -> Result<bool, TupleError> {
        let Some((a, b)) = self.system(support) else { return Ok(false) };
        Ok(strictly_positive_solution(&a, &b)?.is_some())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct N1Check {
    pub holds: bool,
    pub rank: usize,
    /// Indices of vectors forming a basis of their span.
    pub basis: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct N2Check {
    pub holds: bool,
    /// A primitive integer functional `f != 0` with `f . A_i >= 0` for all `i`, when N2 fails.
    pub separating_functional: Option<Vec<BigInt>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct N3Check {
    pub holds: bool,
    /// The first index whose removal leaves `0` outside the convex hull.
    pub failing_index: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalizationReport {
    pub n1: N1Check,
    pub n2: N2Check,
    pub n3: N3Check,
}

fn primitive(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() { ints } else { ints.into_iter().map(|x| x / &g).collect() }
}

/// A nonzero `f` with `f . A_i >= 0` for all `i`, found by an LP: split
/// `f = p - q` and ask for slacks `s_i = f . A_i >= 0` summing to one.
fn separating_functional(t: &Tuple) -> Result<Option<Vec<BigInt>>, TupleError> {
    let (m, n) = (t.m(), t.n());
    if m == 0 {
        return Ok(None);
    }
    let cols = 2 * m + n;
    let mut rows = Vec::with_capacity(n + 1);
    for (i, a) in t.vectors().iter().enumerate() {
        let mut row = vec![Rational::zero(); cols];
        for k in 0..m {
            row[k] = a[k].clone();
            row[m + k] = -a[k].clone();
        }
        row[2 * m + i] = -Rational::one();
        rows.push(row);
    }
    let mut last = vec![Rational::zero(); cols];
    for s in last.iter_mut().skip(2 * m) {
        *s = Rational::one();
    }
    rows.push(last);
    let mut b = vec![Rational::zero(); n];
    b.push(Rational::one());
    let a = RatMatrix::from_rows(rows)?;
    let Some(x) = nonnegative_solution(&a, &b)? else { return Ok(None) };
    let f: Vec<Rational> = (0..m).map(|k| &x[k] - &x[m + k]).collect();
    Ok(Some(primitive(&f)))
}

/// A nonzero vector orthogonal to every `A_i`, when the vectors do not span.
fn orthogonal_functional(t: &Tuple) -> Option<Vec<BigInt>> {
    let a = t.column_matrix(t.full_mask())?;
    // f . A_i = 0 for all i means f is in the kernel of A^T.
    let at = a.transpose();
    let (red, pivots) = crate::exact::rref_rows(at.to_dense_rows());
    let free = (0..t.m()).find(|c| !pivots.contains(c))?;
    let mut f = vec![Rational::zero(); t.m()];
    f[free] = Rational::one();
    for (row, &p) in red.iter().zip(&pivots) {
        f[p] = -row[free].clone();
    }
    Some(primitive(&f))
}

/// Conditions N1 (spanning), N2 (no closed half-space contains the tuple) and
/// N3 (removing any single vector keeps `0` in the convex hull).
pub fn check_normalization(t: &Tuple) -> Result<NormalizationReport, TupleError> {
    let basis = match t.column_matrix(t.full_mask()) {
        Some(a) => rref_basis(&a),
        None => Vec::new(),
    };
    let n1 = N1Check { holds: basis.len() == t.m(), rank: basis.len(), basis };
    let n2 = if !n1.holds {
        N2Check { holds: false, separating_functional: orthogonal_functional(t) }
    } else if t.m() == 0 || t.origin_in_relative_interior(t.full_mask())? {
        N2Check { holds: true, separating_functional: None }
    } else {
        N2Check { holds: false, separating_functional: separating_functional(t)? }
    };
    let mut failing_index = None;
    for i in 0..t.n() {
        if !t.origin_in_hull(t.full_mask() & !(1 << i))? {
            failing_index = Some(i);
            break;
        }
    }
    let n3 = N3Check { holds: failing_index.is_none(), failing_index };
    Ok(NormalizationReport { n1, n2, n3 })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeakHyperbolicity {
    pub holds: bool,
    /// Inclusion-minimal subsets of size at most `m` with `0` in their convex hull.
    pub witnesses: Vec<Mask>,
}

/// Weak hyperbolicity: `0` is not a convex combination of any `<= m` of the vectors.
pub fn is_weakly_hyperbolic(t: &Tuple) -> Result<WeakHyperbolicity, TupleError> {
    let mut witnesses: Vec<Mask> = Vec::new();
    for size in 1..=t.m().min(t.n()) {
        for s in subsets_of_size(t.n(), size) {
            if witnesses.iter().any(|&w| w & !s == 0) {
                continue;
            }
            if t.origin_in_hull(s)? {
                witnesses.push(s);
            }
        }
    }
    witnesses.sort_unstable();
    Ok(WeakHyperbolicity { holds: witnesses.is_empty(), witnesses })
}

pub(crate) fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = Mask> {
    let full: Mask = if n == 64 { Mask::MAX } else { (1 << n) - 1 };
    (0..=full).filter(move |s| s.count_ones() as usize == k)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuspensionReduction {
    pub zero_count: usize,
    /// The tuple with the zero vectors removed; `None` if every vector is zero.
    pub reduced: Option<Tuple>,
}

/// Splits off the zero vectors: `Z(A)` is the iterated suspension of `Z(reduced)`.
pub fn detect_suspension(t: &Tuple) -> SuspensionReduction {
    let (zeros, rest): (Vec<_>, Vec<_>) =
        t.vectors().iter().cloned().partition(|v| v.iter().all(Zero::is_zero));
    SuspensionReduction {
        zero_count: zeros.len(),
        reduced: if rest.is_empty() { None } else { Tuple::new(t.m(), rest).ok() },
    }
}

/// Tuple whose polytope is `{ x : a_i . x <= b_i }`, the facet `i` becoming
/// the hyperplane `r_i = 0` of the slack `r_i = b_i - a_i . x`.
///
/// The slacks of the cone over the polytope span the column space `V` of
/// `[b | -a]`; the vectors `A_i` are the columns of an integral basis of
/// `V^perp`, so `sum A_i r_i = 0` exactly cuts out `V`.
pub fn from_inequalities(rows: &[(Vec<Rational>, Rational)]) -> Result<Tuple, TupleError> {
    let n = rows.len();
    let d = rows.first().map_or(0, |r| r.0.len());
    if n == 0 {
        return Err(TupleError::Empty);
    }
    let mut system: Vec<Vec<Rational>> = vec![rows.iter().map(|r| r.1.clone()).collect()];
    for k in 0..d {
        system.push(rows.iter().map(|r| -r.0[k].clone()).collect());
    }
    let (rref, pivots) = crate::exact::rref_rows(system);
    let mut basis: Vec<Vec<Rational>> = Vec::new();
    for f in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); n];
        v[f] = Rational::one();
        for (row, &p) in rref.iter().zip(&pivots) {
            v[p] = -row[f].clone();
        }
        basis.push(primitive(&v).into_iter().map(Rational::from_integer).collect());
    }
    let m = basis.len();
    Tuple::new(m, (0..n).map(|i| basis.iter().map(|b| b[i].clone()).collect()).collect())
}

/// Whether some coordinate is negative; handy for the catalog sanity checks.
pub fn has_negative_entry(t: &Tuple) -> bool {
    t.vectors().iter().flatten().any(Signed::is_negative)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn octahedron() -> Tuple {
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
        .unwrap()
    }

    fn m1(values: &[i64]) -> Tuple {
        Tuple::from_ints(1, &values.iter().map(|&v| vec![v]).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn octahedron_is_normalized() {
        let r = check_normalization(&octahedron()).unwrap();
        assert!(r.n1.holds && r.n2.holds && r.n3.holds);
    }

    #[test]
    fn positive_tuple_fails_n2_with_identity_functional() {
        let r = check_normalization(&m1(&[1, 1])).unwrap();
        assert!(r.n1.holds);
        assert!(!r.n2.holds);
        assert_eq!(r.n2.separating_functional, Some(vec![BigInt::from(1)]));
    }

    #[test]
    fn removing_minus_one_breaks_n3() {
        let r = check_normalization(&m1(&[-1, 1])).unwrap();
        assert!(r.n2.holds);
        assert_eq!(r.n3.failing_index, Some(0));
    }

    #[test]
    fn non_spanning_tuple_gets_orthogonal_functional() {
        let t = Tuple::from_ints(2, &[vec![1, 0], vec![-1, 0]]).unwrap();
        let r = check_normalization(&t).unwrap();
        assert!(!r.n1.holds);
        assert_eq!(r.n1.rank, 1);
        let f = r.n2.separating_functional.unwrap();
        assert_eq!(f, vec![BigInt::from(0), BigInt::from(1)]);
    }

    #[test]
    fn weak_hyperbolicity_examples() {
        let w = is_weakly_hyperbolic(&m1(&[-1, 1, 0])).unwrap();
        assert!(!w.holds);
        assert_eq!(w.witnesses, vec![mask_of(&[2])]);
        for (p, q) in [(1, 1), (2, 2), (3, 2)] {
            let t = Tuple::with_multiplicities(1, &[(vec![int(-1)], p), (vec![int(1)], q)]).unwrap();
            assert!(is_weakly_hyperbolic(&t).unwrap().holds);
        }
        let bp = Tuple::from_ints(2, &[vec![-1, -1], vec![1, -1], vec![1, 0], vec![1, 1], vec![-1, 1], vec![-1, 0]])
            .unwrap();
        let w = is_weakly_hyperbolic(&bp).unwrap();
        assert_eq!(w.witnesses, vec![mask_of(&[0, 3]), mask_of(&[1, 4]), mask_of(&[2, 5])]);
    }

    #[test]
    fn inequalities_realize_cube_and_octahedron() {
        let mut cube = Vec::new();
        for k in 0..3 {
            for s in [1, -1] {
                let mut a = vec![int(0); 3];
                a[k] = int(s);
                cube.push((a, int(1)));
            }
        }
        let t = from_inequalities(&cube).unwrap();
        assert_eq!((t.m(), t.n()), (2, 6));
        assert_eq!(enumerate_faces(&t).unwrap().census(), vec![8, 12, 6, 1]);
        let mut oct = Vec::new();
        for k in 0..8 {
            let a = (0..3).map(|b| int(if (k >> b) & 1 == 1 { -1 } else { 1 })).collect();
            oct.push((a, int(1)));
        }
        let t = from_inequalities(&oct).unwrap();
        assert_eq!(t.m(), 4);
        let l = enumerate_faces(&t).unwrap();
        assert_eq!(l.census(), vec![6, 12, 8, 1]);
        assert!(l.vertices().all(|v| v.depth == 1));
    }

    #[test]
    fn suspension_counts_zeros() {
        let s = detect_suspension(&m1(&[-1, -1, 0, 1, 1]));
        assert_eq!(s.zero_count, 1);
        assert_eq!(s.reduced.unwrap(), m1(&[-1, -1, 1, 1]));
        assert_eq!(detect_suspension(&octahedron()).zero_count, 0);
        assert_eq!(detect_suspension(&m1(&[-1, 1, 0, 0])).zero_count, 2);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Tuple::new(1, vec![]).unwrap_err(), TupleError::Empty);
        assert!(matches!(Tuple::from_ints(2, &[vec![1]]), Err(TupleError::Ragged { index: 0, .. })));
    }
}
