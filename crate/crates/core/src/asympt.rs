//! The asymptotic character
//! `X(lambda, x) = i^{-N} delta_*(rho) sum_w det(w) e^{i(lambda, w x)} / (delta(x) delta_*(lambda))`
//! with `delta = prod alpha`, `delta_* = prod alpha^vee` over positive roots.
//!
//! Vectors are frame coordinates (see [`RootSystem`]). Away from root
//! hyperplanes the alternating sum is divided directly. Near them the value
//! is continued analytically from the nearest point `(lambda_s, y_s)` of the
//! offending walls along the segment `(lambda_s + h d_lambda, y_s + h d_y)`:
//! the alternating sum is expanded as a power series in `h`, whose leading
//! coefficients vanish identically and are discarded before dividing.
//! Factors that vanish exactly are resolved by an extra generic perturbation
//! `s` and taking the appropriate coefficient in `s`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg;
use crate::rootsys::RootSystem;
use crate::special::{gauss_hermite, Compensated};
use crate::weyl::FrameWeylGroup;

type C = Complex64;

/// Largest Weyl group handled by alternating sums.
pub const DEFAULT_GROUP_CAP: u64 = 100_000;

// Factors with normalized size below this count as exactly zero.
const EXACT_TOL: f64 = 1e-12;
// Largest normalized size put on the series path.
const NEAR_MAX: f64 = 4.0;
// Acceptable estimated absolute error of the direct quotient.
const DIRECT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalMode {
    /// `lambda = 0` or `x = 0`.
    Trivial,
    /// Direct quotient of the alternating sum.
    Generic,
    /// Series continuation from the singular locus.
    NearSingular,
}

fn cdot(a: &[f64], b: &[C]) -> C {
    a.iter().zip(b).map(|(x, y)| y * *x).sum()
}

fn cnorm(v: &[C]) -> f64 {
    libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum())
}

/// Orthonormal basis of the span of `vs`.
fn orthonormal_basis(vs: &[&[f64]]) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vs {
        let mut u = v.to_vec();
        for b in &basis {
            let c = linalg::dot(&u, b);
            u.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        let n = linalg::norm(&u);
        if n > 1e-9 * linalg::norm(v) {
            basis.push(u.iter().map(|x| x / n).collect());
        }
    }
    basis
}

fn project_c(basis: &[Vec<f64>], v: &[C]) -> Vec<C> {
    let mut out = vec![C::zero(); v.len()];
    for b in basis {
        let c = cdot(b, v);
        out.iter_mut().zip(b).for_each(|(o, x)| *o += c * *x);
    }
    out
}

/// Fixed generic direction used to resolve exactly vanishing factors.
fn generic_direction(r: usize, salt: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..r)
        .map(|k| {
            let s = libm::sqrt((2 + 3 * k + 7 * salt) as f64 + 0.5);
            s - libm::floor(s) - 0.5 + 0.1 * (k + 1) as f64
        })
        .collect();
    let n = linalg::norm(&v);
    v.iter().map(|x| x / n).collect()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Class {
    Exact,
    Near,
    Far,
}

#[derive(Clone, Copy, Debug)]
struct Factor {
    on_x: bool,
    root: usize,
    size: f64,
    class: Class,
}

/// Evaluator for `X(lambda, x)` on a fixed root system.
pub struct AsymptoticCharacter<'a> {
    rs: &'a RootSystem,
    group: FrameWeylGroup,
    roots: Vec<Vec<f64>>,
    coroots: Vec<Vec<f64>>,
    root_norms: Vec<f64>,
    prefactor: C,
}

impl<'a> AsymptoticCharacter<'a> {
    pub fn new(rs: &'a RootSystem) -> Result<Self> {
        Self::with_cap(rs, DEFAULT_GROUP_CAP)
    }

    pub fn with_cap(rs: &'a RootSystem, cap: u64) -> Result<Self> {
        let group = FrameWeylGroup::new(rs, cap)?;
        let roots = rs.roots_frame().to_vec();
        let coroots = rs.coroots_frame().to_vec();
        let root_norms = roots.iter().map(|a| linalg::norm(a)).collect();
        let n = rs.num_positive_roots();
        // delta_*(rho) = product of coroot heights.
        let dstar_rho: f64 = rs.positive_coroots().iter().map(|c| c.iter().sum::<i64>() as f64).product();
        let prefactor = C::i().powi(-(n as i32)) * dstar_rho;
        Ok(AsymptoticCharacter { rs, group, roots, coroots, root_norms, prefactor })
    }

    pub fn root_system(&self) -> &RootSystem {
        self.rs
    }

    pub fn group(&self) -> &FrameWeylGroup {
        &self.group
    }

    /// `X(lambda, x)` for real `lambda` and complex `x`.
    pub fn eval(&self, lambda: &[f64], x: &[C]) -> Result<C> {
        Ok(self.eval_with_mode(lambda, x)?.0)
    }

    /// `X(lambda, x)` for real arguments.
    pub fn eval_real(&self, lambda: &[f64], x: &[f64]) -> Result<C> {
        let xc: Vec<C> = x.iter().map(|&v| C::new(v, 0.0)).collect();
        self.eval(lambda, &xc)
    }

    pub fn eval_with_mode(&self, lambda: &[f64], x: &[C]) -> Result<(C, EvalMode)> {
        let (v, mode, _) = self.eval_with_error(lambda, x)?;
        Ok((v, mode))
    }

    /// Value, evaluation path and an estimate of the absolute rounding error.
    pub fn eval_with_error(&self, lambda: &[f64], x: &[C]) -> Result<(C, EvalMode, f64)> {
        let r = self.rs.rank();
        if lambda.len() != r {
            return Err(Error::Dimension { expected: r, got: lambda.len() });
        }
        if x.len() != r {
            return Err(Error::Dimension { expected: r, got: x.len() });
        }
        if lambda.iter().any(|v| !v.is_finite()) || x.iter().any(|z| !z.is_finite()) {
            return Err(Error::InvalidArgument("non-finite argument".into()));
        }
        let ln = linalg::norm(lambda);
        if ln == 0.0 || cnorm(x) * ln < 1e-300 {
            return Ok((C::new(1.0, 0.0), EvalMode::Trivial, 0.0));
        }
        // X(s lambda, x/s) = X(lambda, x): use |lambda| = 1 when |lambda||x| >= 1
        // and |lambda| = |x| below.
        let scale = libm::sqrt(cnorm(x) * ln).min(1.0) / ln;
        let lhat: Vec<f64> = lambda.iter().map(|v| v * scale).collect();
        let y: Vec<C> = x.iter().map(|z| z / scale).collect();
        let (value, loss) = self.direct(&lhat, &y);
        if loss < DIRECT_TOL && value.is_finite() {
            return Ok((value, EvalMode::Generic, loss));
        }
        let (cv, closs) = self.continued(&lhat, &y);
        if value.is_finite() && loss <= closs {
            return Ok((value, EvalMode::Generic, loss));
        }
        Ok((cv, EvalMode::NearSingular, closs))
    }

    /// Direct quotient and an estimate of its absolute rounding error.
    fn direct(&self, lhat: &[f64], y: &[C]) -> (C, f64) {
        let mut re = Compensated::default();
        let mut im = Compensated::default();
        let mut mag = 0.0;
        let mut phase_max = 0.0f64;
        for k in 0..self.group.order() {
            let wl = self.group.apply(k, lhat);
            let phase = cdot(&wl, y);
            phase_max = phase_max.max(phase.norm());
            let t = (phase * C::i()).exp() * self.group.signs[k];
            mag += t.norm();
            re.add(t.re);
            im.add(t.im);
        }
        let mut den = C::new(1.0, 0.0);
        for (a, ac) in self.roots.iter().zip(&self.coroots) {
            den *= cdot(a, y) * linalg::dot(lhat, ac);
        }
        let p = self.prefactor / den;
        let err = f64::EPSILON * (4.0 + phase_max) * mag * p.norm();
        (p * C::new(re.value(), im.value()), if err.is_finite() { err } else { f64::INFINITY })
    }

    fn classify(&self, lhat: &[f64], y: &[C]) -> Vec<Factor> {
        let yn = cnorm(y);
        let ln = linalg::norm(lhat);
        let mut factors = Vec::with_capacity(2 * self.roots.len());
        for (k, a) in self.roots.iter().enumerate() {
            let nx = cdot(a, y).norm() / self.root_norms[k] * ln;
            let nl = linalg::dot(lhat, a).abs() / self.root_norms[k] * yn;
            factors.push(Factor { on_x: true, root: k, size: nx, class: Class::Far });
            factors.push(Factor { on_x: false, root: k, size: nl, class: Class::Far });
        }
        let exact = EXACT_TOL * (yn * ln).max(1e-300);
        let mut sizes: Vec<f64> = Vec::new();
        for f in factors.iter_mut() {
            if f.size <= exact {
                f.class = Class::Exact;
            } else {
                sizes.push(f.size);
            }
        }
        sizes.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // Trade the spread inside the near set against small far factors.
        let tail_cost = |k: usize| -> f64 { sizes[k..].iter().filter(|&&v| v < 1.0).map(|v| -libm::log(*v)).sum() };
        let mut best = (tail_cost(0), 0usize);
        for k in 1..=sizes.len() {
            if sizes[k - 1] > NEAR_MAX {
                break;
            }
            let top = sizes[k - 1];
            let spread: f64 = sizes[..k].iter().map(|v| libm::log(top / v)).sum();
            let cost = spread + tail_cost(k);
            if cost < best.0 - 1e-12 {
                best = (cost, k);
            }
        }
        let cut = if best.1 == 0 { 0.0 } else { sizes[best.1 - 1] };
        for f in factors.iter_mut() {
            if f.class == Class::Far && f.size <= cut {
                f.class = Class::Near;
            }
        }
        factors
    }

    /// Series continuation from the nearest singular point.
    pub(crate) fn continued(&self, lhat: &[f64], y: &[C]) -> (C, f64) {
        let r = self.rs.rank();
        let yn = cnorm(y);
        let ln = linalg::norm(lhat);
        let mut factors = self.classify(lhat, y);

        // Orthonormal bases of span(exact) and of its complement in
        // span(exact + near). Components along exactly vanishing roots are
        // dropped: they are below the exactness tolerance and would otherwise
        // couple with the near factors.
        let bases = |factors: &[Factor], on_x: bool| -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
            let pick = |class: Class| -> Vec<&[f64]> {
                factors
                    .iter()
                    .filter(|f| f.on_x == on_x && f.class == class)
                    .map(|f| self.roots[f.root].as_slice())
                    .collect()
            };
            let mut all = pick(Class::Exact);
            let ne = orthonormal_basis(&all).len();
            all.extend(pick(Class::Near));
            let mut b = orthonormal_basis(&all);
            let near = b.split_off(ne);
            (b, near)
        };
        let (ex, nx) = bases(&factors, true);
        let (el, nl) = bases(&factors, false);
        let dy = project_c(&nx, y);
        let ey = project_c(&ex, y);
        let ys: Vec<C> = y.iter().zip(&dy).zip(&ey).map(|((a, b), c)| a - b - c).collect();
        let lc: Vec<C> = lhat.iter().map(|&v| C::new(v, 0.0)).collect();
        let dl: Vec<f64> = project_c(&nl, &lc).iter().map(|z| z.re).collect();
        let el_part: Vec<f64> = project_c(&el, &lc).iter().map(|z| z.re).collect();
        let ls: Vec<f64> = lhat.iter().zip(&dl).zip(&el_part).map(|((a, b), c)| a - b - c).collect();

        // Roots lying in the span of the near walls vanish at the base point too.
        for f in factors.iter_mut().filter(|f| f.class == Class::Far) {
            let base = if f.on_x {
                cdot(&self.roots[f.root], &ys).norm() / self.root_norms[f.root] * ln
            } else {
                linalg::dot(&ls, &self.roots[f.root]).abs() / self.root_norms[f.root] * yn
            };
            if base <= EXACT_TOL * (yn * ln).max(1.0) {
                f.class = Class::Near;
            }
        }

        // Perturbations sized like their own side, with phase effect at most O(1).
        // Only sides with exactly vanishing factors are perturbed.
        let big = (yn * ln).max(1.0);
        let exact_x = factors.iter().any(|f| f.on_x && f.class == Class::Exact);
        let exact_l = factors.iter().any(|f| !f.on_x && f.class == Class::Exact);
        let sx = if exact_x { yn / big } else { 0.0 };
        let sl = if exact_l { ln / big } else { 0.0 };
        let gx: Vec<f64> = generic_direction(r, 1).iter().map(|v| v * sx).collect();
        let gl: Vec<f64> = generic_direction(r, 2).iter().map(|v| v * sl).collect();
        let gxc: Vec<C> = gx.iter().map(|&v| C::new(v, 0.0)).collect();
        let mut den = C::new(1.0, 0.0);
        let (mut m0, mut m1) = (0usize, 0usize);
        for f in &factors {
            let (c, a, b) = if f.on_x {
                let al = &self.roots[f.root];
                (cdot(al, &ys), cdot(al, &dy), C::new(linalg::dot(al, &gx), 0.0))
            } else {
                let co = &self.coroots[f.root];
                (
                    C::new(linalg::dot(&ls, co), 0.0),
                    C::new(linalg::dot(&dl, co), 0.0),
                    C::new(linalg::dot(&gl, co), 0.0),
                )
            };
            match f.class {
                Class::Exact => {
                    m0 += 1;
                    den *= b;
                }
                Class::Near => {
                    m1 += 1;
                    den *= a;
                }
                Class::Far => den *= c + a,
            }
        }

        // Truncation order of the h-series.
        let b1 = linalg::norm(&dl) * cnorm(&ys) + linalg::norm(&ls) * cnorm(&dy);
        let b2 = linalg::norm(&dl) * cnorm(&dy);
        let beta = b1 + 2.0 * libm::sqrt(b2) + b2 + 1e-300;
        let mut terms = 8usize;
        let mut t = 1.0f64;
        for j in 1..600 {
            t *= beta / j as f64;
            if j >= 8 && t < 1e-18 {
                terms = j;
                break;
            }
            terms = j;
        }
        let order = m1 + terms + 1;

        let mut acc = vec![C::zero(); order + 1];
        let mut mag = 0.0;
        let mut phase_max = 0.0f64;
        let mut prev = vec![C::zero(); m0 + 1];
        let mut cur = vec![C::zero(); m0 + 1];
        let mut next = vec![C::zero(); m0 + 1];
        let i = C::i();
        for k in 0..self.group.order() {
            let sign = self.group.signs[k];
            let wl = self.group.apply(k, &ls);
            let wd = self.group.apply(k, &dl);
            let wg = self.group.apply(k, &gl);
            let q00 = cdot(&wl, &ys);
            phase_max = phase_max.max(q00.norm());
            let q01 = cdot(&wg, &ys) + cdot(&wl, &gxc);
            let q02 = cdot(&wg, &gxc);
            let q10 = i * (cdot(&wd, &ys) + cdot(&wl, &dy));
            let q11 = i * (cdot(&wd, &gxc) + cdot(&wg, &dy));
            let q20 = i * cdot(&wd, &dy) * 2.0;
            // exp(i Q0(s)) as a series in s
            let g = [C::zero(), i * q01, i * q02];
            cur[0] = (i * q00).exp();
            for n in 1..=m0 {
                let mut s = C::zero();
                for kk in 1..=n.min(2) {
                    s += g[kk] * cur[n - kk] * kk as f64;
                }
                cur[n] = s / n as f64;
            }
            prev.iter_mut().for_each(|z| *z = C::zero());
            acc[0] += cur[m0] * sign;
            if m1 == 0 {
                mag += cur[m0].norm();
            }
            for j in 0..order {
                let inv = 1.0 / (j + 1) as f64;
                for n in 0..=m0 {
                    let mut v = q10 * cur[n] + q20 * prev[n];
                    if n > 0 {
                        v += q11 * cur[n - 1];
                    }
                    next[n] = v * inv;
                }
                core::mem::swap(&mut prev, &mut cur);
                core::mem::swap(&mut cur, &mut next);
                acc[j + 1] += cur[m0] * sign;
                if j + 1 >= m1 {
                    mag += cur[m0].norm();
                }
            }
        }
        let mut num = C::zero();
        for a in acc.iter().skip(m1) {
            num += *a;
        }
        let p = (self.prefactor / den).norm();
        (self.prefactor * num / den, f64::EPSILON * (4.0 + phase_max) * mag * p)
    }

    /// `chi_{[N lambda]}(e^{i x/N}) / dim L_{[N lambda]}` computed as
    /// `X(mu + rho, x/N) / X(rho, x/N)` with `mu = [N lambda]`.
    pub fn normalized_character(&self, mu: &[i64], x: &[C]) -> Result<C> {
        let shifted: Vec<f64> = mu.iter().map(|&m| m as f64 + 1.0).collect();
        let num = self.eval(&self.rs.frame_from_dynkin(&shifted), x)?;
        let den = self.eval(&self.rs.rho_frame(), x)?;
        Ok(num / den)
    }

    /// Errors `|chi_{[N lambda]}(e^{ix/N})/chi_{[N lambda]}(1) - X(lambda, x)|`
    /// for each `N`. `lambda_dynkin` are fundamental-weight coordinates.
    pub fn char_ratio_convergence(&self, lambda_dynkin: &[f64], x: &[C], ns: &[u64]) -> Result<Vec<(u64, f64)>> {
        if lambda_dynkin.iter().any(|&v| v < 0.0) {
            return Err(Error::InvalidArgument("lambda needs nonnegative fundamental coordinates".into()));
        }
        let target = self.eval(&self.rs.frame_from_dynkin(lambda_dynkin), x)?;
        ns.iter()
            .map(|&n| {
                let mu: Vec<i64> = lambda_dynkin.iter().map(|v| libm::floor(v * n as f64) as i64).collect();
                let xs: Vec<C> = x.iter().map(|z| z / n as f64).collect();
                Ok((n, (self.normalized_character(&mu, &xs)? - target).norm()))
            })
            .collect()
    }

    /// Heat-kernel check: `|int K(x,t) X(lambda,x) dx - e^{-t|lambda|^2}|`, with the
    /// integral over the Lie algebra reduced to the Cartan by the weight
    /// `delta(x)^2` and normalized so that `lambda = 0` gives exactly 1.
    pub fn heat_identity_residual(&self, lambda: &[f64], t: f64, max_nodes: usize) -> Result<f64> {
        if t <= 0.0 {
            return Err(Error::InvalidArgument("t must be positive".into()));
        }
        let target = libm::exp(-t * linalg::dot(lambda, lambda));
        let integral = self.heat_integral(lambda, t, max_nodes)?;
        Ok((integral - target).abs())
    }

    /// `int K(x,t) X(lambda,x) delta(x)^2 dx / int K(x,t) delta(x)^2 dx`.
    pub fn heat_integral(&self, lambda: &[f64], t: f64, max_nodes: usize) -> Result<f64> {
        let r = self.rs.rank();
        if linalg::norm(lambda) == 0.0 {
            return Ok(1.0);
        }
        let regular = self.coroots.iter().all(|c| linalg::dot(lambda, c).abs() > 1e-9);
        let dstar: f64 = self.coroots.iter().map(|c| linalg::dot(lambda, c)).product();
        let scale = 2.0 * libm::sqrt(t);
        let delta = |y: &[f64]| -> f64 { self.roots.iter().map(|a| linalg::dot(a, y)).product() };
        let integrand = |y: &[f64]| -> Result<f64> {
            let d = delta(y);
            if regular {
                // X delta^2 = pref delta(y) sum_w det(w) e^{i(w lambda, y)} / delta_*(lambda)
                let mut s = C::zero();
                for k in 0..self.group.order() {
                    let wl = self.group.apply(k, lambda);
                    s += C::new(0.0, linalg::dot(&wl, y)).exp() * self.group.signs[k];
                }
                Ok((self.prefactor * s * d / dstar).re)
            } else {
                Ok(self.eval_real(lambda, y)?.re * d * d)
            }
        };
        let mut previous: Option<f64> = None;
        let mut n = 8usize;
        while n <= max_nodes {
            let (z, w) = gauss_hermite(n);
            let total = n.pow(r as u32);
            let mut num = Compensated::default();
            let mut den = Compensated::default();
            let mut idx = vec![0usize; r];
            let mut y = vec![0.0; r];
            for _ in 0..total {
                let mut weight = 1.0;
                for k in 0..r {
                    y[k] = scale * z[idx[k]];
                    weight *= w[idx[k]];
                }
                let d = delta(&y);
                num.add(weight * integrand(&y)?);
                den.add(weight * d * d);
                for k in 0..r {
                    idx[k] += 1;
                    if idx[k] < n {
                        break;
                    }
                    idx[k] = 0;
                }
            }
            let value = num.value() / den.value();
            if let Some(p) = previous {
                if (p - value).abs() < 1e-13 {
                    return Ok(value);
                }
            }
            previous = Some(value);
            n += 8;
        }
        Err(Error::NoConvergence("heat-kernel quadrature".into()))
    }
}

/// Closed form of `X(omega_1, t omega_1^vee)` for `SL_n`:
/// `(n-1) e^{-it/n} int_0^1 (1-p)^{n-2} e^{ipt} dp
///  = (n-1)! e^{-it/n} (e^{it} - S_{n-2}(t)) / (it)^{n-1}`,
/// where `S_m` is the degree-`m` Taylor polynomial of `e^{it}`.
pub fn closed_form_sl_n_vector(n: usize, t: f64) -> Result<C> {
    if n < 2 {
        return Err(Error::InvalidArgument("n must be at least 2".into()));
    }
    let m = (n - 1) as i32;
    let phase = C::new(0.0, -t / n as f64).exp();
    let it = C::new(0.0, t);
    if t.abs() < 4.0 {
        // sum_j (it)^j (n-1)!/(n-1+j)!
        let mut s = C::zero();
        let mut term = C::new(1.0, 0.0);
        for j in 0..200 {
            s += term;
            term = term * it / (m + j + 1) as f64;
            if term.norm() < 1e-18 {
                break;
            }
        }
        return Ok(s * phase);
    }
    let mut taylor = C::zero();
    let mut term = C::new(1.0, 0.0);
    for k in 0..m {
        taylor += term;
        term = term * it / (k + 1) as f64;
    }
    let fact: f64 = (1..n).map(|k| k as f64).product();
    Ok(((it.exp() - taylor) * fact / it.powi(m)) * phase)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rs(f: &str, r: usize) -> RootSystem {
        RootSystem::from_label(f, r).unwrap()
    }

    fn sinc(u: f64) -> f64 {
        if u == 0.0 { 1.0 } else { libm::sin(u) / u }
    }

    #[test]
    fn sl2_is_sinc() {
        let a1 = rs("A", 1);
        let ev = AsymptoticCharacter::new(&a1).unwrap();
        for (l, x) in [(1.0, 0.3), (0.7, -4.1), (2.0, 13.0), (1.0, 0.0), (0.0, 5.0), (1.0, 1e-9)] {
            let v = ev.eval_real(&[l], &[x]).unwrap();
            assert!((v.re - sinc(l * x)).abs() < 1e-12 && v.im.abs() < 1e-12, "{l} {x} {v}");
        }
    }

    // The Sp4 formula in Cartesian coordinates.
    fn sp4(l: [f64; 2], x: [f64; 2]) -> f64 {
        let s = libm::sin;
        6.0 * (s(l[0] * x[1]) * s(l[1] * x[0]) - s(l[0] * x[0]) * s(l[1] * x[1]))
            / (l[0] * l[1] * (l[0] * l[0] - l[1] * l[1]) * x[0] * x[1] * (x[0] * x[0] - x[1] * x[1]))
    }

    fn sp4_on_axis(l: [f64; 2], x1: f64) -> f64 {
        let s = libm::sin;
        6.0 * (l[0] * s(l[1] * x1) - l[1] * s(l[0] * x1)) / (l[0] * l[1] * (l[0] * l[0] - l[1] * l[1]) * x1 * x1 * x1)
    }

    #[test]
    fn sp4_matches_cartesian_formula() {
        let c2 = rs("C", 2);
        let ev = AsymptoticCharacter::new(&c2).unwrap();
        let mut seed = 12345u64;
        let mut rnd = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64 / (1u64 << 53) as f64) * 6.0 - 3.0
        };
        for _ in 0..100 {
            let l = [rnd(), rnd()];
            let x = [rnd() * 3.0, rnd() * 3.0];
            let lf = c2.frame_from_cartesian_weight(&l).unwrap();
            let xf = c2.frame_from_cartesian_coweight(&x).unwrap();
            let v = ev.eval_real(&lf, &xf).unwrap();
            assert!((v.re - sp4(l, x)).abs() < 1e-10, "{l:?} {x:?}: {} vs {}", v.re, sp4(l, x));
            assert!(v.im.abs() < 1e-12);
        }
        // exactly on a wall
        let l = [libm::sqrt(2.0) - 1.0, 1.0];
        for x1 in [0.5, 3.0, 8.2517, 40.0] {
            let lf = c2.frame_from_cartesian_weight(&l).unwrap();
            let xf = c2.frame_from_cartesian_coweight(&[x1, 0.0]).unwrap();
            let (v, mode) = ev.eval_with_mode(&lf, &xf.iter().map(|&a| C::new(a, 0.0)).collect::<Vec<_>>()).unwrap();
            assert_eq!(mode, EvalMode::NearSingular);
            assert!((v.re - sp4_on_axis(l, x1)).abs() < 1e-10, "{x1}: {} vs {}", v.re, sp4_on_axis(l, x1));
        }
    }

    #[test]
    fn sl_n_closed_form() {
        let c = closed_form_sl_n_vector(2, 3.0).unwrap();
        assert!((c.re - sinc(1.5)).abs() < 1e-14 && c.im.abs() < 1e-14);
        assert!((closed_form_sl_n_vector(5, 0.0).unwrap() - C::new(1.0, 0.0)).norm() < 1e-15);
        // both branches agree at the switch
        for n in 2..7 {
            let a = closed_form_sl_n_vector(n, 3.999_999_9).unwrap();
            let b = closed_form_sl_n_vector(n, 4.000_000_1).unwrap();
            assert!((a - b).norm() < 1e-6);
        }
        for n in 2..=6 {
            let s = rs("A", n - 1);
            let ev = AsymptoticCharacter::new(&s).unwrap();
            let l = s.fundamental_weight_frame(0);
            let w = s.fundamental_coweight_frame(0);
            for t in [0.01, 0.7, 3.0, 37.0, 1000.0] {
                let x: Vec<f64> = w.iter().map(|v| v * t).collect();
                let xc: Vec<C> = x.iter().map(|&a| C::new(a, 0.0)).collect();
                let (v, _, err) = ev.eval_with_error(&l, &xc).unwrap();
                let c = closed_form_sl_n_vector(n, t).unwrap();
                assert!((v - c).norm() < 1e-10f64.max(10.0 * err), "n={n} t={t}: {v} vs {c} (est {err})");
                // many exactly vanishing factors cost accuracy only at large t
                if (t < 40.0 && n <= 5) || n <= 4 {
                    assert!(err < 1e-10, "n={n} t={t}: est {err}");
                }
            }
        }
    }

    #[test]
    fn series_path_agrees_with_direct_quotient() {
        // moderately close to walls the direct quotient is still accurate
        for (f, r) in [("A", 2), ("B", 2), ("G", 2), ("A", 3), ("B", 3)] {
            let s = rs(f, r);
            let ev = AsymptoticCharacter::new(&s).unwrap();
            let l = generic_direction(r, 5);
            let mut x = s.fundamental_coweight_frame(0);
            let off = generic_direction(r, 9);
            x.iter_mut().zip(&off).for_each(|(a, b)| *a = 2.0 * *a + 0.4 * b);
            let xc: Vec<C> = x.iter().map(|&a| C::new(a, 0.0)).collect();
            let (d, loss) = ev.direct(&l, &xc);
            assert!(loss < 1e-10);
            let (c, _) = ev.continued(&l, &xc);
            assert!((d - c).norm() < 1e-10 + 10.0 * loss, "{f}{r}: {d} vs {c}");
        }
    }

    #[test]
    fn continuity_across_walls() {
        for (f, r) in [("A", 2), ("C", 2), ("G", 2), ("A", 3)] {
            let s = rs(f, r);
            let ev = AsymptoticCharacter::new(&s).unwrap();
            let l = s.rho_frame();
            let a = &s.roots_frame()[0];
            let mut base = s.fundamental_coweight_frame(r - 1);
            base.iter_mut().for_each(|v| *v *= 3.0);
            // base lies on the wall of the first simple root; cross it
            let n2 = linalg::dot(a, a);
            let f0 = ev.eval_real(&l, &base).unwrap();
            let mut last = f0;
            for k in [-12i32, -10, -8, -6, -4, -3, -2, -1] {
                let eps = libm::pow(10.0, k as f64);
                let x: Vec<f64> = base.iter().zip(a).map(|(b, c)| b + eps * c / n2).collect();
                let v = ev.eval_real(&l, &x).unwrap();
                // Lipschitz bound |grad X| <= |lambda|
                assert!((v - f0).norm() <= 1.5 * eps * linalg::norm(&l) / libm::sqrt(n2) + 1e-11, "{f}{r} eps={eps}");
                last = v;
            }
            assert!(last.norm() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn character_ratio_limit() {
        let a1 = rs("A", 1);
        let ev = AsymptoticCharacter::new(&a1).unwrap();
        let alpha = a1.roots_frame()[0][0];
        let x = [C::new(5.0 / alpha, 0.0)];
        let errs = ev.char_ratio_convergence(&[1.0], &x, &[10, 40, 160]).unwrap();
        assert!(errs[0].1 > errs[1].1 && errs[1].1 > errs[2].1 && errs[2].1 < 1e-2);
        let zero = ev.char_ratio_convergence(&[0.0], &x, &[10, 20]).unwrap();
        assert!(zero.iter().all(|e| e.1 < 1e-14));

        // the ratio identity against explicit characters at small N
        let a2 = rs("A", 2);
        let ev = AsymptoticCharacter::new(&a2).unwrap();
        let chars = crate::repr::CharacterEvaluator::new(&a2).unwrap();
        let x = [C::new(0.9, 0.0), C::new(-0.35, 0.0)];
        for mu in [[1i64, 0], [2, 1], [3, 3]] {
            let dim = crate::repr::dim_irrep(&a2, &mu).unwrap() as f64;
            let direct = chars.eval(&mu, &x).unwrap() / dim;
            assert!((ev.normalized_character(&mu, &x).unwrap() - direct).norm() < 1e-10);
        }
        let rho = [1.0, 1.0];
        let x = [C::new(1.3, 0.0), C::new(0.4, 0.0)];
        let errs = ev.char_ratio_convergence(&rho, &x, &[25, 50, 100, 200]).unwrap();
        assert!(errs.windows(2).all(|w| w[1].1 < w[0].1));
        assert!(errs[3].1 < 1e-2);
    }

    #[test]
    fn heat_identity() {
        let a1 = rs("A", 1);
        let ev = AsymptoticCharacter::new(&a1).unwrap();
        let l = [1.0];
        assert!(ev.heat_identity_residual(&[0.0], 0.3, 64).unwrap() == 0.0);
        assert!(ev.heat_identity_residual(&l, 0.3, 128).unwrap() < 1e-6);
        let c2 = rs("C", 2);
        let ev = AsymptoticCharacter::new(&c2).unwrap();
        let rho = c2.rho_frame();
        let n = linalg::norm(&rho);
        let l: Vec<f64> = rho.iter().map(|v| v / n).collect();
        assert!(ev.heat_identity_residual(&l, 0.5, 96).unwrap() < 1e-4);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn bounded_scaled_and_invariant(
            l in proptest::collection::vec(-3.0f64..3.0, 2),
            x in proptest::collection::vec(-6.0f64..6.0, 2),
            t in 0.2f64..4.0,
            ty in 0usize..3,
            w in 0usize..12,
        ) {
            let (f, _) = [("A", 0), ("C", 0), ("G", 0)][ty];
            let s = rs(f, 2);
            let ev = AsymptoticCharacter::new(&s).unwrap();
            let v = ev.eval_real(&l, &x).unwrap();
            let xc: Vec<C> = x.iter().map(|&a| a.into()).collect();
            let (_, _, err) = ev.eval_with_error(&l, &xc).unwrap();
            prop_assert!(err < 1e-8);
            prop_assert!(v.norm() <= 1.0 + 1e-12 + err);
            // -1 lies in W for C2 and G2, making X real there
            if ty > 0 {
                prop_assert!(v.im.abs() < 1e-12 + err);
            }
            let tl: Vec<f64> = l.iter().map(|a| a * t).collect();
            let tx: Vec<f64> = x.iter().map(|a| a * t).collect();
            prop_assert!((ev.eval_real(&tl, &x).unwrap() - ev.eval_real(&l, &tx).unwrap()).norm() < 1e-10);
            let k = w % ev.group().order();
            let wl = ev.group().apply(k, &l);
            let wx = ev.group().apply(k, &x);
            prop_assert!((ev.eval_real(&wl, &x).unwrap() - v).norm() < 1e-10);
            prop_assert!((ev.eval_real(&l, &wx).unwrap() - v).norm() < 1e-10);
        }
    }
}
