//! Dense tableau simplex for `max c.x` subject to `A x <= b`, `x >= 0`,
//! with `b >= 0` so the origin is a feasible start. Bland's rule.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub value: f64,
    pub x: Vec<f64>,
    pub pivots: usize,
}

pub fn maximize(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Result<LpSolution> {
    let n = c.len();
    let m = a.len();
    if b.len() != m || a.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgument("LP dimensions disagree".into()));
    }
    if b.iter().any(|&v| v < 0.0 || !v.is_finite()) {
        return Err(Error::InvalidArgument("LP right-hand side must be nonnegative".into()));
    }
    // rows: [A | I | b], objective row: [-c | 0 | 0]
    let w = n + m + 1;
    let mut t = vec![0.0; (m + 1) * w];
    for i in 0..m {
        t[i * w..i * w + n].copy_from_slice(&a[i]);
        t[i * w + n + i] = 1.0;
        t[i * w + w - 1] = b[i];
    }
    for j in 0..n {
        t[m * w + j] = -c[j];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    let scale = c.iter().fold(1.0f64, |s, v| s.max(v.abs()));
    let eps = 1e-11 * scale;
    let mut pivots = 0;
    loop {
        // Dantzig pricing, Bland's rule once many pivots suggest cycling
        let bland = pivots > 10 * (n + m);
        let mut col = None;
        let mut most = -eps;
        for j in 0..n + m {
            let rc = t[m * w + j];
            if rc < most {
                col = Some(j);
                if bland {
                    break;
                }
                most = rc;
            }
        }
        let Some(col) = col else { break };
        let cmax = (0..m).map(|i| t[i * w + col].abs()).fold(0.0f64, f64::max);
        let piv_tol = 1e-9 * cmax.max(1e-300);
        let mut best = f64::INFINITY;
        for i in 0..m {
            let v = t[i * w + col];
            if v > piv_tol {
                best = best.min(t[i * w + w - 1].max(0.0) / v);
            }
        }
        if !best.is_finite() {
            return Err(Error::NoConvergence("LP is unbounded".into()));
        }
        // among near-minimal ratios take the largest pivot (Bland: lowest basis index)
        let mut row: Option<usize> = None;
        for i in 0..m {
            let v = t[i * w + col];
            if v > piv_tol && t[i * w + w - 1].max(0.0) / v <= best + 1e-12 * (1.0 + best) {
                let better = match row {
                    None => true,
                    Some(r) if bland => basis[i] < basis[r],
                    Some(r) => v > t[r * w + col],
                };
                if better {
                    row = Some(i);
                }
            }
        }
        let row = row.expect("ratio test");
        let p = t[row * w + col];
        for j in 0..w {
            t[row * w + j] /= p;
        }
        for i in 0..=m {
            if i != row {
                let f = t[i * w + col];
                if f != 0.0 {
                    for j in 0..w {
                        t[i * w + j] -= f * t[row * w + j];
                    }
                }
            }
        }
        basis[row] = col;
        pivots += 1;
        if pivots > 50 * (n + m) {
            return Err(Error::NoConvergence("simplex pivot limit".into()));
        }
    }
    let mut x = vec![0.0; n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i * w + w - 1];
        }
    }
    Ok(LpSolution { value: t[m * w + w - 1], x, pivots })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6)
        let s = maximize(&[3.0, 5.0], &[vec![1.0, 0.0], vec![0.0, 2.0], vec![3.0, 2.0]], &[4.0, 12.0, 18.0]).unwrap();
        assert!((s.value - 36.0).abs() < 1e-12);
        assert!((s.x[0] - 2.0).abs() < 1e-12 && (s.x[1] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn unbounded_and_degenerate() {
        assert!(maximize(&[1.0], &[vec![-1.0]], &[1.0]).is_err());
        // degenerate vertex at the origin
        let s = maximize(&[1.0, 1.0], &[vec![1.0, -1.0], vec![-1.0, 1.0], vec![1.0, 1.0]], &[0.0, 0.0, 2.0]).unwrap();
        assert!((s.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn beats_random_feasible_points() {
        let mut st = 7u64;
        let mut rnd = || {
            st = st.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (st >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..20 {
            let (n, m) = (4, 7);
            let a: Vec<Vec<f64>> = (0..m).map(|_| (0..n).map(|_| rnd() + 0.1).collect()).collect();
            let b: Vec<f64> = (0..m).map(|_| rnd() + 0.5).collect();
            let c: Vec<f64> = (0..n).map(|_| rnd()).collect();
            let s = maximize(&c, &a, &b).unwrap();
            for (row, bi) in a.iter().zip(&b) {
                let lhs: f64 = row.iter().zip(&s.x).map(|(p, q)| p * q).sum();
                assert!(lhs <= bi + 1e-9);
            }
            for _ in 0..200 {
                let x: Vec<f64> = (0..n).map(|_| rnd() * 2.0).collect();
                let feasible = a.iter().zip(&b).all(|(row, bi)| row.iter().zip(&x).map(|(p, q)| p * q).sum::<f64>() <= *bi);
                if feasible {
                    let v: f64 = c.iter().zip(&x).map(|(p, q)| p * q).sum();
                    assert!(v <= s.value + 1e-9);
                }
            }
        }
    }
}
