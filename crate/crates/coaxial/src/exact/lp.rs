//! Exact two-phase simplex on `M t = b, t >= 0` with Bland's rule.

use num_traits::{One, Signed, Zero};

use super::{ExactError, RatMatrix, Rational};

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Optimal { value: Rational, point: Vec<Rational> },
    /// `point + s * ray` is feasible for every `s >= 0` and the objective grows along `ray`.
    Unbounded { point: Vec<Rational>, ray: Vec<Rational> },
}

struct Tableau {
    /// `rows x (cols + 1)`; the last column is the right-hand side.
    t: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    cols: usize,
}

enum Run {
    Optimal,
    Unbounded(usize),
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = Rational::one() / &self.t[r][c];
        for v in self.t[r].iter_mut() {
            *v *= &inv;
        }
        let pr = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pr) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        self.basis[r] = c;
    }

    fn reduced_costs(&self, c: &[Rational]) -> Vec<Rational> {
        (0..self.cols)
            .map(|j| {
                let mut d = c[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !c[b].is_zero() && !self.t[i][j].is_zero() {
                        d -= &c[b] * &self.t[i][j];
                    }
                }
                d
            })
            .collect()
    }

    /// Maximizes `c` over the current basis; `allowed[j]` gates entering columns.
    fn run(&mut self, c: &[Rational], allowed: &[bool]) -> Run {
        loop {
            let d = self.reduced_costs(c);
            let Some(enter) = (0..self.cols).find(|&j| allowed[j] && d[j].is_positive()) else {
                return Run::Optimal;
            };
            let rhs = self.cols;
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.t.len() {
                let a = &self.t[i][enter];
                if a.is_positive() {
                    let ratio = &self.t[i][rhs] / a;
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                None => return Run::Unbounded(enter),
                Some((r, _)) => self.pivot(r, enter),
            }
        }
    }

    fn point(&self, n: usize) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < n {
                x[b] = self.t[i][self.cols].clone();
            }
        }
        x
    }
}

/// Finds a feasible basis for `M t = b, t >= 0`; `None` when infeasible.
fn phase_one(m: &RatMatrix, b: &[Rational]) -> Result<Option<Tableau>, ExactError> {
    if b.len() != m.rows() {
        return Err(ExactError::DimensionMismatch { expected: m.rows(), found: b.len() });
    }
    let (rows, n) = (m.rows(), m.cols());
    let cols = n + rows;
    let mut t = Vec::with_capacity(rows);
    for (i, bi) in b.iter().enumerate() {
        let flip = bi.is_negative();
        let mut row: Vec<Rational> = (0..n).map(|j| if flip { -m.get(i, j) } else { m.get(i, j) }).collect();
        row.extend((0..rows).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
        row.push(if flip { -bi.clone() } else { bi.clone() });
        t.push(row);
    }
    let mut tab = Tableau { t, basis: (n..cols).collect(), cols };
    let c: Vec<Rational> =
        (0..cols).map(|j| if j < n { Rational::zero() } else { -Rational::one() }).collect();
    let allowed = vec![true; cols];
    // Phase one is bounded above by zero, so it always ends optimal.
    let _ = tab.run(&c, &allowed);
    let infeas: Rational = tab
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &bv)| bv >= n)
        .fold(Rational::zero(), |acc, (i, _)| acc + &tab.t[i][cols]);
    if infeas.is_positive() {
        return Ok(None);
    }
    // Drive zero-valued artificials out of the basis, dropping redundant rows.
    let mut i = 0;
    while i < tab.t.len() {
        if tab.basis[i] >= n {
            match (0..n).find(|&j| !tab.t[i][j].is_zero()) {
                Some(j) => {
                    tab.pivot(i, j);
                    i += 1;
                }
                None => {
                    tab.t.remove(i);
                    tab.basis.remove(i);
                }
            }
        } else {
            i += 1;
        }
    }
    Ok(Some(tab))
}

/// Maximizes `c . t` subject to `M t = b`, `t >= 0`.
pub fn maximize(m: &RatMatrix, b: &[Rational], c: &[Rational]) -> Result<LpOutcome, ExactError> {
    let n = m.cols();
    if c.len() != n {
        return Err(ExactError::DimensionMismatch { expected: n, found: c.len() });
    }
    let Some(mut tab) = phase_one(m, b)? else { return Ok(LpOutcome::Infeasible) };
    let mut full_c = c.to_vec();
    full_c.resize(tab.cols, Rational::zero());
    let allowed: Vec<bool> = (0..tab.cols).map(|j| j < n).collect();
    match tab.run(&full_c, &allowed) {
        Run::Optimal => {
            let point = tab.point(n);
            let value = point.iter().zip(c).fold(Rational::zero(), |acc, (x, y)| acc + x * y);
            Ok(LpOutcome::Optimal { value, point })
        }
        Run::Unbounded(enter) => {
            let point = tab.point(n);
            let mut ray = vec![Rational::zero(); n];
            ray[enter] = Rational::one();
            for (i, &bv) in tab.basis.iter().enumerate() {
                if bv < n {
                    ray[bv] = -tab.t[i][enter].clone();
                }
            }
            Ok(LpOutcome::Unbounded { point, ray })
        }
    }
}

/// Some `t >= 0` with `M t = b`, if one exists.
pub fn nonnegative_solution(m: &RatMatrix, b: &[Rational]) -> Result<Option<Vec<Rational>>, ExactError> {
    Ok(phase_one(m, b)?.map(|tab| tab.point(m.cols())))
}

/// A point in the relative interior of `{t >= 0 : M t = b}`, if that set is nonempty.
///
/// Each coordinate not yet seen positive is maximized separately; the average
/// of the maximizers has the largest possible support.
pub fn relative_interior_point(
    m: &RatMatrix,
    b: &[Rational],
) -> Result<Option<Vec<Rational>>, ExactError> {
    let n = m.cols();
    let Some(first) = nonnegative_solution(m, b)? else { return Ok(None) };
    let mut seen: Vec<bool> = first.iter().map(Signed::is_positive).collect();
    let mut points = vec![first];
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let mut c = vec![Rational::zero(); n];
        c[i] = Rational::one();
        let p = match maximize(m, b, &c)? {
            LpOutcome::Infeasible => unreachable!("feasibility already established"),
            LpOutcome::Optimal { value, point } => {
                if !value.is_positive() {
                    continue;
                }
                point
            }
            LpOutcome::Unbounded { point, ray } => {
                point.iter().zip(&ray).map(|(x, r)| x + r).collect()
            }
        };
        for (s, v) in seen.iter_mut().zip(&p) {
            *s |= v.is_positive();
        }
        points.push(p);
    }
    let k = Rational::from_integer(points.len().into());
    let avg = (0..n)
        .map(|j| points.iter().fold(Rational::zero(), |acc, p| acc + &p[j]) / &k)
        .collect();
    Ok(Some(avg))
}

/// A solution of `M t = b` with every `t_i > 0`, if one exists.
pub fn strictly_positive_solution(
    m: &RatMatrix,
    b: &[Rational],
) -> Result<Option<Vec<Rational>>, ExactError> {
    Ok(relative_interior_point(m, b)?.filter(|t| t.iter().all(Signed::is_positive)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn m(rows: &[Vec<i64>]) -> RatMatrix {
        RatMatrix::from_int_rows(rows).unwrap()
    }

    #[test]
    fn symmetric_one_by_two() {
        let t = strictly_positive_solution(&m(&[vec![1, -1]]), &[int(0)]).unwrap().unwrap();
        assert_eq!(t[0], t[1]);
        assert!(t[0].is_positive());
    }

    #[test]
    fn minimal_m1_edge() {
        // Columns (-1), (1) with the ones row: the midpoint of the segment.
        let t = strictly_positive_solution(&m(&[vec![-1, 1], vec![1, 1]]), &[int(0), int(1)])
            .unwrap()
            .unwrap();
        assert_eq!(t, vec![rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn two_positive_numbers_never_cancel() {
        assert_eq!(
            strictly_positive_solution(&m(&[vec![1, 1], vec![1, 1]]), &[int(0), int(1)]).unwrap(),
            None
        );
    }

    #[test]
    fn unbounded_direction_still_gives_positive_witness() {
        // t0 - t1 = 0 with no upper bound.
        let t = strictly_positive_solution(&m(&[vec![1, -1, 0]]), &[int(0)]).unwrap().unwrap();
        assert!(t.iter().all(Signed::is_positive));
        let t = strictly_positive_solution(&m(&[vec![1, -1, 1]]), &[int(1)]).unwrap().unwrap();
        assert!(t.iter().all(Signed::is_positive));
    }

    #[test]
    fn maximize_reports_values() {
        let a = m(&[vec![1, 1, 1]]);
        match maximize(&a, &[int(3)], &[int(1), int(2), int(0)]).unwrap() {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, int(6));
                assert_eq!(point, vec![int(0), int(3), int(0)]);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(maximize(&m(&[vec![1, 1]]), &[int(-1)], &[int(0), int(0)]).unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn redundant_rows_are_fine() {
        let a = m(&[vec![1, -1], vec![2, -2], vec![1, 1]]);
        let t = strictly_positive_solution(&a, &[int(0), int(0), int(1)]).unwrap().unwrap();
        assert_eq!(t, vec![rat(1, 2), rat(1, 2)]);
    }
}
