//! Explicit constants: the lower bound for `c(G)` in terms of `d = dim G`,
//! the chain `R_G -> M_G -> D_G -> E_G -> C(G)`, the one-variable Fourier
//! constants `M_n`, `C_N`, and `K = 4/pi^2`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::dhspline;
use crate::lp;
use crate::rootsys::RootSystem;
use crate::special::{self, gamma_p, gamma_q, lgamma, tgamma};
use crate::{Error, Result};

/// Closed-form lower bound `e^-1 (1-e^-1)^{d/2+1} / ((d/2+1)^{d/2+1} log(d/2+1)^{d/2})`.
pub fn theorem1_lower_bound(d: f64) -> f64 {
    let h = d / 2.0 + 1.0;
    let e1 = libm::exp(-1.0);
    e1 * libm::pow(1.0 - e1, h) / (libm::pow(h, h) * libm::pow(libm::log(h), d / 2.0))
}

/// `c_d(L, v)`.
pub fn c_d(d: f64, l: f64, v: f64) -> f64 {
    let (p, q) = (gamma_p(d / 2.0, d * v / 2.0), gamma_q(d / 2.0, d * v / 2.0));
    ((1.0 - l) * p - libm::exp(-l / v)) / q
}

/// Optimal `L_0(v)`; `None` when it leaves `(0, 1)`.
pub fn l0(d: f64, v: f64) -> Option<f64> {
    let p = gamma_p(d / 2.0, d * v / 2.0);
    let l = -v * libm::log(v * p);
    (l > 0.0 && l < 1.0).then_some(l)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CdOptimum {
    pub value: f64,
    pub v: f64,
    pub l: f64,
}

/// `max_v c_d(L_0(v), v)` over `0 < v < min(1, v_d)`.
pub fn c_d_optimized(d: f64) -> Result<CdOptimum> {
    if d < 3.0 {
        return Err(Error::InvalidArgument("d must be at least 3".into()));
    }
    let f = |v: f64| match l0(d, v) {
        Some(l) => c_d(d, l, v),
        None => f64::NEG_INFINITY,
    };
    // the admissible window shrinks like 1/d, so scan in log v
    let (u, value) = special::scan_max(|u| f(libm::exp(u)), libm::log(1e-8), libm::log(1.0 - 1e-9), 4000, 1e-12);
    let v = libm::exp(u);
    let l = l0(d, v).ok_or_else(|| Error::NoConvergence("no admissible v".into()))?;
    Ok(CdOptimum { value, v, l })
}

/// Inverse of `b -> 1/b + log b - 1` on `(0, 1)`.
pub fn b0(z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::InvalidArgument("b0 needs z > 0".into()));
    }
    let g = |b: f64| 1.0 / b + libm::log(b) - 1.0 - z;
    // g is decreasing; g(1/(z+1)) > 0 and the root lies below 1
    let (mut lo, mut hi) = (1e-300f64.max(1.0 / (z + 1.0) * 1e-3), 1.0);
    while g(lo) < 0.0 {
        lo *= 1e-3;
    }
    let mut b = 1.0 / (z + 1.0);
    for _ in 0..200 {
        let gb = g(b);
        if gb == 0.0 {
            break;
        }
        if gb > 0.0 {
            lo = b;
        } else {
            hi = b;
        }
        let nb = b - gb / (-1.0 / (b * b) + 1.0 / b);
        let next = if nb > lo && nb < hi { nb } else { 0.5 * (lo + hi) };
        let done = (next - b).abs() <= 1e-16 * b;
        b = next;
        if done {
            break;
        }
    }
    Ok(b)
}

/// `min_{b in (0,1)} (M/b)^{1/(1-b)}`, attained at `b0(log M)`.
pub fn d_from_m(m: f64) -> Result<f64> {
    if !(m > 1.0) {
        return Err(Error::InvalidArgument("M must exceed 1".into()));
    }
    Ok(libm::exp(log_d_from_log_m(libm::log(m))?))
}

/// `log D` as a function of `z = log M`, usable when `M` overflows.
pub fn log_d_from_log_m(z: f64) -> Result<f64> {
    let b = b0(z)?;
    Ok((z - libm::log(b)) / (1.0 - b))
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeometricConstants {
    pub r_g: f64,
    pub h: u64,
    pub m_g: f64,
    pub b0: f64,
    pub d_g: f64,
    pub e_g: f64,
    /// Lower end `e^-1 (h+1)^{r/2} / (r/2 + 1)` of the bracket for `B`.
    pub b_lower: f64,
}

pub fn geometric_constants(rs: &RootSystem) -> Result<GeometricConstants> {
    if !rs.cartan_type().is_crystallographic() {
        return Err(Error::NonCrystallographic(rs.label()));
    }
    let r = rs.rank() as f64;
    let h = rs.coxeter_number();
    let r_g = dhspline::r_g(rs);
    let m_g = libm::sqrt(h as f64 + 1.0) / r_g;
    let z = libm::log(m_g);
    let b = b0(z)?;
    let d_g = d_from_m(m_g)?;
    let e_g = 1e5 * libm::pow(r, 1.0 / z) * libm::pow(d_g, r);
    let b_lower = libm::exp(-1.0) * libm::pow(h as f64 + 1.0, r / 2.0) / (r / 2.0 + 1.0);
    Ok(GeometricConstants { r_g, h, m_g, b0: b, d_g, e_g, b_lower })
}

/// `n! (T_n(x) - e^{-ix}) / x^n`, `T_n` the Taylor polynomial of `e^{-ix}`.
pub fn taylor_remainder_ratio(n: usize, x: f64) -> Complex64 {
    let mi = Complex64::new(0.0, -1.0);
    let ax = x.abs();
    if ax == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    if ax <= n as f64 + 1.0 {
        // -sum_{j>n} (-i)^j x^{j-n} n!/j!
        let mut term = mi.powu(n as u32 + 1) * (x / (n as f64 + 1.0));
        let mut sum = term;
        let mut j = n + 1;
        loop {
            j += 1;
            term = term * mi * (x / j as f64);
            sum += term;
            if term.norm() < 1e-18 * sum.norm() || j > n + 400 {
                break;
            }
        }
        -sum
    } else {
        // sum_{j<=n} (-i)^j n!/(j! x^{n-j}) - n! e^{-ix}/x^n
        let mut term = mi.powu(n as u32);
        let mut sum = term;
        for j in (1..=n).rev() {
            term = term * Complex64::new(0.0, 1.0) * (j as f64 / x);
            sum += term;
        }
        let lead = libm::exp(lgamma(n as f64 + 1.0) - n as f64 * libm::log(ax));
        let lead = if x < 0.0 && n % 2 == 1 { -lead } else { lead };
        sum - Complex64::new(libm::cos(x), -libm::sin(x)) * lead
    }
}

/// `M_n = sup_x |n! (T_n(x) - e^{-ix}) / x^n|`; the ratio tends to 1 at infinity
/// and is even in absolute value, so `x >= 0` on a long window suffices.
pub fn m_n(n: usize) -> f64 {
    let f = |x: f64| taylor_remainder_ratio(n, x).norm();
    let top = 60.0 * (n as f64 + 1.0);
    let steps = (top / 0.02) as usize;
    let (_, v) = special::scan_max(f, 1e-9, top, steps, 1e-13);
    v.max(1.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CnReport {
    pub n: usize,
    pub m: Vec<f64>,
    /// Per sign pattern: active constraint points at termination and LP value.
    pub grid_values: Vec<(usize, f64)>,
    /// Size of the Chebyshev-extrema grid on which `|Q| <= 1` is enforced.
    pub grid: usize,
    pub value: f64,
    /// Sign patterns searched; `1` means only the alternating pattern.
    pub patterns: usize,
    /// `sum M_n |t_n|` for the shifted Chebyshev polynomial of degree N-1,
    /// the extremal polynomial for endpoint coefficient bounds.
    pub chebyshev_value: f64,
}

/// Monomial coefficients of `T_k(2p - 1)`, `k < n`, as columns.
fn shifted_chebyshev(n: usize) -> Vec<Vec<f64>> {
    // rows: polynomials T*_k, entries: coefficient of p^j
    let mut t: Vec<Vec<f64>> = vec![vec![0.0; n.max(1)]; n.max(1)];
    t[0][0] = 1.0;
    if n > 1 {
        t[1][0] = -1.0;
        t[1][1] = 2.0;
    }
    for k in 2..n {
        for j in 0..n {
            let mut v = -2.0 * t[k - 1][j] - t[k - 2][j];
            if j > 0 {
                v += 4.0 * t[k - 1][j - 1];
            }
            t[k][j] = v;
        }
    }
    t
}

/// Operator norm of `Q -> sum M_n |a_n|` on real polynomials of degree
/// `< N` with `max_[0,1] |Q| <= 1`, by LP on a Chebyshev-extrema grid.
pub fn c_n(n: usize) -> Result<CnReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    let m: Vec<f64> = (0..n).map(m_n).collect();
    let cheb = shifted_chebyshev(n);
    let chebyshev_value = m.iter().zip(&cheb[n - 1]).map(|(a, t)| a * t.abs()).sum();
    if n > 16 {
        return Ok(CnReport { n, m, grid_values: Vec::new(), grid: 0, value: chebyshev_value, patterns: 0, chebyshev_value });
    }
    let patterns: Vec<Vec<f64>> = if n <= 8 {
        (0..1usize << (n - 1))
            .map(|bits| (0..n).map(|k| if k > 0 && bits >> (k - 1) & 1 == 1 { -1.0 } else { 1.0 }).collect())
            .collect()
    } else {
        vec![(0..n).map(|k| if (n - 1 - k) % 2 == 0 { 1.0 } else { -1.0 }).collect()]
    };
    // Fine Chebyshev-extrema grid; constraints enter by cutting planes.
    let g = 64 * n;
    let basis: Vec<Vec<f64>> = (0..=g)
        .map(|j| {
            let th = core::f64::consts::PI * j as f64 / g as f64;
            (0..n).map(|k| libm::cos(k as f64 * th)).collect()
        })
        .collect();
    let mut grid_values = Vec::new();
    let mut value = f64::NEG_INFINITY;
    for s in &patterns {
        // objective: sum_j s_j M_j a_j with a_j = sum_k c_k cheb[k][j]
        let w: Vec<f64> = (0..n).map(|k| (0..n).map(|j| s[j] * m[j] * cheb[k][j]).sum()).collect();
        let mut c = w.clone();
        c.extend(w.iter().map(|v| -v));
        let mut active: Vec<usize> = (0..=g).step_by(16).collect();
        let mut rounds = 0;
        let best = loop {
            let mut a = Vec::with_capacity(2 * active.len());
            for &j in &active {
                let mut row = basis[j].clone();
                row.extend(basis[j].iter().map(|v| -v));
                a.push(row.clone());
                a.push(row.iter().map(|v| -v).collect());
            }
            let b = vec![1.0; a.len()];
            let sol = lp::maximize(&c, &a, &b)?;
            let coef: Vec<f64> = (0..n).map(|k| sol.x[k] - sol.x[n + k]).collect();
            let q: Vec<f64> = basis.iter().map(|row| row.iter().zip(&coef).map(|(x, y)| x * y).sum::<f64>().abs()).collect();
            let mut viol: Vec<(f64, usize)> = (0..=g)
                .filter(|&j| q[j] > 1.0 + 1e-10 && (j == 0 || q[j] >= q[j - 1]) && (j == g || q[j] >= q[j + 1]))
                .map(|j| (q[j], j))
                .collect();
            rounds += 1;
            if viol.is_empty() {
                break sol.value;
            }
            if rounds > 200 {
                return Err(Error::NoConvergence("cutting-plane LP".into()));
            }
            viol.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
            let before = active.len();
            for v in viol.iter().take(2 * n) {
                if !active.contains(&v.1) {
                    active.push(v.1);
                }
            }
            if active.len() == before {
                return Err(Error::NoConvergence("LP solution violates its own constraints".into()));
            }
        };
        grid_values.push((active.len(), best));
        value = value.max(best);
    }
    let patterns = patterns.len();
    Ok(CnReport { n, m, grid_values, grid: g + 1, value, patterns, chebyshev_value })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CgReport {
    pub geometric: GeometricConstants,
    pub c_n: CnReport,
    pub weyl_order: u64,
    pub value: f64,
}

/// `C(G) = Gamma(r/2+1)/(sqrt(pi) Gamma((r+1)/2)) C_{|R+|} E_G (|W|-1)`.
pub fn c_of_g(rs: &RootSystem) -> Result<CgReport> {
    let geometric = geometric_constants(rs)?;
    let c_n = c_n(rs.num_positive_roots())?;
    let r = rs.rank() as f64;
    let w = rs.weyl_order();
    let pref = tgamma(r / 2.0 + 1.0) / (libm::sqrt(core::f64::consts::PI) * tgamma((r + 1.0) / 2.0));
    let value = pref * c_n.value * geometric.e_g * (w as f64 - 1.0);
    Ok(CgReport { geometric, c_n, weyl_order: w, value })
}

/// `max_{0<a<pi} sin^2 a / (a (pi - a))` and its argmax.
pub fn k_constant() -> (f64, f64) {
    let pi = core::f64::consts::PI;
    let g = |a: f64| {
        let s = libm::sin(a);
        s * s / (a * (pi - a))
    };
    let (a, _) = special::golden_max(g, 1e-6, pi - 1e-6, 1e-12);
    (g(a), a)
}

/// `c(SL_n) <= K^{n-2}`.
pub fn sln_upper(n: u32) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument("n must be at least 2".into()));
    }
    Ok(libm::pow(k_constant().0, n as f64 - 2.0))
}
