//! The Lobachevsky function `Λ(θ) = ½ Σ_{k≥1} sin(2kθ)/k²`.
//!
//! The Fourier series converges like `1/N`, so values come from the
//! Bernoulli expansion of the Clausen function instead:
//! `Cl_2(x) = x - x ln|x| + Σ_{k≥1} |B_2k| x^{2k+1} / (2k (2k+1)!)` for
//! `|x| < 2π`, with `Λ(θ) = Cl_2(2θ) / 2` after reducing `θ` mod `π`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::exact::Rational;

const TERMS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LobachevskyValue {
    pub theta: f64,
    pub value: f64,
    /// Bound on the truncated series tail (rounding excluded).
    pub error_bound: f64,
    pub terms: usize,
}

/// `|B_2k| / (2k (2k+1)!)` for `k = 1..TERMS`.
fn coefficients() -> &'static [f64] {
    static C: OnceLock<Vec<f64>> = OnceLock::new();
    C.get_or_init(|| {
        let n = 2 * TERMS + 1;
        // B_m = -1/(m+1) sum_{j<m} C(m+1, j) B_j
        let mut b: Vec<Rational> = vec![Rational::one()];
        let mut row = vec![BigInt::one(), BigInt::one()];
        for m in 1..=n {
            let mut next = vec![BigInt::one(); row.len() + 1];
            for j in 1..row.len() {
                next[j] = &row[j - 1] + &row[j];
            }
            row = next;
            let s: Rational = b.iter().enumerate().map(|(j, bj)| Rational::from_integer(row[j].clone()) * bj).sum();
            b.push(-s / Rational::from_integer(BigInt::from(m as u64 + 1)));
        }
        let mut fact = BigInt::one();
        let mut out = Vec::with_capacity(TERMS);
        let mut k = 1;
        for i in 1..=n {
            fact *= BigInt::from(i as u64);
            if i == 2 * k + 1 && k <= TERMS {
                let two_k = BigInt::from(2 * k as u64);
                let c = b[2 * k].clone() / Rational::from_integer(&two_k * &fact);
                out.push(c.to_f64().expect("finite").abs());
                k += 1;
            }
        }
        out
    })
}

fn clausen(x: f64, tol: f64) -> (f64, f64, usize) {
    if x == 0.0 {
        return (0.0, 0.0, 0);
    }
    let c = coefficients();
    let x2 = x * x;
    let mut sum = x - x * x.abs().ln();
    let mut pw = x * x2;
    let ratio = x2 / (4.0 * PI * PI);
    for (k, &ck) in c.iter().enumerate() {
        sum += ck * pw;
        pw *= x2;
        // |B_2k|/(2k)! <= 4/(2π)^{2k}, so the tail is dominated by a
        // geometric series of ratio (x/2π)^2 <= 1/4.
        let kk = (k + 2) as f64;
        let next = 4.0 * (pw.abs()) / ((2.0 * PI).powi(2 * (k as i32 + 2)) * 2.0 * kk * (2.0 * kk + 1.0));
        let bound = next / (1.0 - ratio);
        if bound <= tol {
            return (sum, bound, k + 1);
        }
    }
    (sum, f64::EPSILON, c.len())
}

/// `Λ(θ)` with a tail bound below `tol`.
///
/// # Panics
///
/// Panics if `tol` is not positive.
pub fn lobachevsky(theta: f64, tol: f64) -> LobachevskyValue {
    assert!(tol > 0.0, "tolerance must be positive");
    let mut t = theta.rem_euclid(PI);
    if t > PI / 2.0 {
        t -= PI;
    }
    let (c, bound, terms) = clausen(2.0 * t, 2.0 * tol);
    LobachevskyValue { theta, value: c / 2.0, error_bound: bound / 2.0, terms }
}

/// Partial sum `S_N(θ) = ½ Σ_{k≤N} sin(2kθ)/k²`, whose tail is at most `1/(2N)`.
pub fn fourier_partial_sum(theta: f64, n: usize) -> f64 {
    (1..=n).map(|k| (2.0 * k as f64 * theta).sin() / (k as f64 * k as f64)).sum::<f64>() / 2.0
}
