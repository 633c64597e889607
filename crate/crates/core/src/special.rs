//! Special functions and small numerical building blocks.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};

pub use libm::{lgamma, tgamma};

/// Regularized lower incomplete gamma `P(a, x)`.
pub fn gamma_p(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        gamma_p_series(a, x)
    } else {
        1.0 - gamma_q_cf(a, x)
    }
}

/// Regularized upper incomplete gamma `Q(a, x) = Gamma(a, x)/Gamma(a)`.
pub fn gamma_q(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        1.0 - gamma_p_series(a, x)
    } else {
        gamma_q_cf(a, x)
    }
}

fn prefactor(a: f64, x: f64) -> f64 {
    libm::exp(-x + a * libm::log(x) - lgamma(a))
}

fn gamma_p_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut del = 1.0 / a;
    let mut sum = del;
    for _ in 0..10_000 {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * 1e-17 {
            break;
        }
    }
    sum * prefactor(a, x)
}

// Modified Lentz evaluation of the continued fraction.
fn gamma_q_cf(a: f64, x: f64) -> f64 {
    let tiny = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    prefactor(a, x) * h
}

/// Volume of the unit ball in `R^r`.
pub fn unit_ball_volume(r: usize) -> f64 {
    libm::pow(PI, r as f64 / 2.0) / tgamma(r as f64 / 2.0 + 1.0)
}

/// Gauss-Hermite nodes and weights for the weight `exp(-z^2)`.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let pim4 = libm::pow(PI, -0.25);
    let m = n.div_ceil(2);
    let mut z = 0.0;
    for i in 0..m {
        z = match i {
            0 => libm::sqrt(2.0 * n as f64 + 1.0) - 1.85575 * libm::pow(2.0 * n as f64 + 1.0, -1.0 / 6.0),
            1 => z - 1.14 * libm::pow(n as f64, 0.426) / z,
            2 => 1.86 * z - 0.86 * nodes[0],
            3 => 1.91 * z - 0.91 * nodes[1],
            _ => 2.0 * z - nodes[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            // orthonormal recurrence
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * libm::sqrt(2.0 / (jf + 1.0)) * p2 - libm::sqrt(jf / (jf + 1.0)) * p3;
            }
            pp = libm::sqrt(2.0 * n as f64) * p2;
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() < 1e-15 * (1.0 + z.abs()) {
                break;
            }
        }
        nodes[i] = z;
        nodes[n - 1 - i] = -z;
        weights[i] = 2.0 / (pp * pp);
        weights[n - 1 - i] = weights[i];
    }
    (nodes, weights)
}

/// Golden-section maximization of a unimodal function on `[a, b]`.
pub fn golden_max<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let g = (libm::sqrt(5.0) - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol * (1.0 + c.abs()) {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc > fd { (c, fc) } else { (d, fd) }
}

/// Scan `n` points of `[a, b]`, then refine the best bracket by golden section.
pub fn scan_max<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, n: usize, tol: f64) -> (f64, f64) {
    let h = (b - a) / n as f64;
    let mut best = (a, f(a));
    for i in 1..=n {
        let x = a + h * i as f64;
        let v = f(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    let lo = (best.0 - h).max(a);
    let hi = (best.0 + h).min(b);
    let refined = golden_max(&mut f, lo, hi, tol);
    if refined.1 >= best.1 { refined } else { best }
}

/// Neumaier-compensated sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct Compensated {
    sum: f64,
    c: f64,
}

impl Compensated {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.c
    }
}

/// Neville extrapolation to `h = 0` of samples `(h_i, v_i)`; returns the
/// estimate and the last correction as an error indicator.
pub fn neville_zero(h: &[f64], v: &[f64]) -> Result<(f64, f64)> {
    if h.len() != v.len() || h.is_empty() {
        return Err(Error::InvalidArgument("extrapolation needs matching nonempty samples".into()));
    }
    let mut p = v.to_vec();
    let n = p.len();
    let mut last = 0.0;
    for m in 1..n {
        for i in 0..n - m {
            let num = h[i + m] * p[i] - h[i] * p[i + 1];
            let next = num / (h[i + m] - h[i]);
            if i == 0 {
                last = next - p[0];
            }
            p[i] = next;
        }
    }
    Ok((p[0], last.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn incomplete_gamma() {
        // P(1,x) = 1-e^{-x}
        for x in [0.1, 1.0, 3.0, 12.0] {
            assert!((gamma_p(1.0, x) - (1.0 - libm::exp(-x))).abs() < 1e-14);
        }
        // P(1/2, x) = erf(sqrt x)
        for x in [0.2, 2.0, 9.0] {
            assert!((gamma_p(0.5, x) - libm::erf(libm::sqrt(x))).abs() < 1e-13);
        }
        // Q(2,x) = (1+x)e^{-x}
        for x in [0.5, 4.0, 30.0] {
            let q = (1.0 + x) * libm::exp(-x);
            assert!((gamma_q(2.0, x) - q).abs() < 1e-14 * (1.0 + 1.0 / q.max(1e-300)) * q.max(1e-15));
        }
    }

    #[test]
    fn hermite_rule_is_exact_on_polynomials() {
        let (z, w) = gauss_hermite(20);
        let moment = |k: i32| -> f64 { z.iter().zip(&w).map(|(a, b)| b * libm::pow(*a, k as f64)).sum() };
        let sp = libm::sqrt(PI);
        assert!((moment(0) - sp).abs() < 1e-13);
        assert!((moment(2) - sp / 2.0).abs() < 1e-13);
        assert!((moment(10) - sp * 945.0 / 32.0).abs() < 1e-9);
        assert!(moment(3).abs() < 1e-12);
    }

    #[test]
    fn golden_section() {
        let (x, v) = golden_max(|x| -(x - 0.3) * (x - 0.3) + 2.0, -1.0, 2.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-6 && (v - 2.0).abs() < 1e-12);
        let (x, _) = scan_max(|x| libm::sin(x), 0.0, 10.0, 100, 1e-12);
        assert!((x - PI / 2.0).abs() < 1e-6 || (x - 5.0 * PI / 2.0).abs() < 1e-6);
    }

    #[test]
    fn neville_polynomial_exact() {
        let h = [0.4, 0.2, 0.1, 0.05];
        let v: Vec<f64> = h.iter().map(|x| 3.0 + 2.0 * x - x * x * x).collect();
        let (e, _) = neville_zero(&h, &v).unwrap();
        assert!((e - 3.0).abs() < 1e-12);
    }

    #[test]
    fn compensated_sum() {
        let mut c = Compensated::default();
        c.add(1e16);
        c.add(1.0);
        c.add(-1e16);
        assert_eq!(c.value(), 1.0);
    }
}
