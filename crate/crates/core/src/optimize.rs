//! Global minimization of `Re X(lambda, .)`, the constants `c(G, lambda)`
//! and `c(G)`, decay-exponent fits and the character-ratio search.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64 as C;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::asympt::AsymptoticCharacter;
use crate::bounds;
use crate::linalg;
use crate::repr::{self, CharacterEvaluator};
use crate::{Error, Result, RootSystem};

/// Multistart budget.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Budget {
    /// Number of starting points; `0` selects `64 r^2`.
    pub starts: usize,
    /// Objective evaluations per start, all restarts included.
    pub max_evals: usize,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { starts: 0, max_evals: 2000, seed: 0 }
    }
}

impl Budget {
    pub fn starts_for(&self, rank: usize) -> usize {
        if self.starts == 0 { 64 * rank * rank } else { self.starts }
    }
}

/// Outcome of one local descent.
#[derive(Clone, Debug)]
pub struct LocalResult {
    pub start: Vec<f64>,
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
}

/// Runs local descents for a batch of starts; implemented sequentially here
/// and in parallel by the std companion crate.
pub trait StartRunner {
    fn run(&self, starts: &[Vec<f64>], f: &(dyn Fn(&[f64]) -> LocalResult + Sync)) -> Vec<LocalResult>;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl StartRunner for Sequential {
    fn run(&self, starts: &[Vec<f64>], f: &(dyn Fn(&[f64]) -> LocalResult + Sync)) -> Vec<LocalResult> {
        starts.iter().map(|s| f(s)).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinimizationResult {
    /// Frame coordinates, as supplied.
    pub lambda: Vec<f64>,
    /// `c(G, lambda) = -min Re X(lambda, .)`.
    pub c: f64,
    /// Minimizer in the closed dominant chamber (frame coordinates).
    pub minimizer: Vec<f64>,
    pub radius: f64,
    pub starts: usize,
    pub evals: usize,
    /// Best value reached from each start, in start order.
    pub best_per_start: Vec<f64>,
    /// Gap between the best and the fifth best local minimum.
    pub spread: f64,
    pub low_confidence: bool,
}

/// Radius of the ball searched for minimizers.
///
/// Minimizers sit near the first trough of the slowest oscillation, so
/// `|lambda||x*|` is a small multiple of `2 pi`; the margin grows with the
/// number of positive roots since each contributes a factor to the
/// denominator of the Weyl-type formula.
pub fn search_radius(rs: &RootSystem, lambda: &[f64]) -> f64 {
    (2.0 * PI + 2.0 * rs.num_positive_roots() as f64) / linalg::norm(lambda)
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Randomly shifted Halton points in the ball of radius `radius`, folded
/// into the closed dominant chamber.
pub fn start_points(rs: &RootSystem, radius: f64, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let r = rs.rank();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: Vec<f64> = (0..r).map(|_| (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64).collect();
    let mut out = Vec::with_capacity(count);
    let mut i = 1u64;
    while out.len() < count {
        let p: Vec<f64> = (0..r)
            .map(|k| {
                let u = (radical_inverse(i, PRIMES[k % PRIMES.len()]) + shift[k]) % 1.0;
                radius * (2.0 * u - 1.0)
            })
            .collect();
        i += 1;
        if linalg::norm(&p) <= radius {
            out.push(rs.dominant_frame(&p));
        }
    }
    out
}

/// Nelder-Mead with adaptive coefficients. Returns `(x, f(x), evals)`.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], step: f64, max_evals: usize, ftol: f64) -> (Vec<f64>, f64, usize) {
    let n = x0.len();
    let nf = n as f64;
    let (alpha, beta, gamma, delta) = (1.0, 1.0 + 2.0 / nf, 0.75 - 1.0 / (2.0 * nf), 1.0 - 1.0 / nf);
    let mut pts: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += step;
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| f(p)).collect();
    let mut evals = n + 1;
    while evals < max_evals {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        pts = order.iter().map(|&i| pts[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();
        let size = pts[1..].iter().map(|p| linalg::norm(&linalg::sub(p, &pts[0]))).fold(0.0, f64::max);
        if (vals[n] - vals[0]).abs() <= ftol * (1.0 + vals[0].abs()) && size < 1e-9 * (1.0 + linalg::norm(&pts[0])) {
            break;
        }
        if size < 1e-13 * (1.0 + linalg::norm(&pts[0])) {
            break;
        }
        let mut cen = vec![0.0; n];
        for p in &pts[..n] {
            for k in 0..n {
                cen[k] += p[k] / nf;
            }
        }
        let along = |t: f64| -> Vec<f64> { (0..n).map(|k| cen[k] + t * (pts[n][k] - cen[k])).collect() };
        let xr = along(-alpha);
        let fr = f(&xr);
        evals += 1;
        if fr < vals[0] {
            let xe = along(-alpha * beta);
            let fe = f(&xe);
            evals += 1;
            if fe < fr {
                pts[n] = xe;
                vals[n] = fe;
            } else {
                pts[n] = xr;
                vals[n] = fr;
            }
            continue;
        }
        if fr < vals[n - 1] {
            pts[n] = xr;
            vals[n] = fr;
            continue;
        }
        let (xc, fc) = if fr < vals[n] {
            let xc = along(-alpha * gamma);
            let fc = f(&xc);
            (xc, fc)
        } else {
            let xc = along(gamma);
            let fc = f(&xc);
            (xc, fc)
        };
        evals += 1;
        if fc < vals[n].min(fr) {
            pts[n] = xc;
            vals[n] = fc;
            continue;
        }
        for i in 1..=n {
            pts[i] = (0..n).map(|k| pts[0][k] + delta * (pts[i][k] - pts[0][k])).collect();
            vals[i] = f(&pts[i]);
        }
        evals += n;
    }
    let best = (0..=n).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap_or(0);
    (pts[best].clone(), vals[best], evals)
}

/// Simplex descent with three restarts of shrinking size, applied to `f`
/// composed with the fold into the dominant chamber.
pub fn local_descent<F: Fn(&[f64]) -> f64>(rs: &RootSystem, f: F, x0: &[f64], step: f64, max_evals: usize) -> LocalResult {
    let folded = |x: &[f64]| f(&rs.dominant_frame(x));
    let mut x = x0.to_vec();
    let mut fx = folded(&x);
    let mut evals = 1;
    let mut s = step;
    for _ in 0..4 {
        if evals >= max_evals {
            break;
        }
        let (y, fy, e) = nelder_mead(folded, &x, s, (max_evals - evals) / 2 + rs.rank() + 2, 1e-14);
        evals += e;
        if fy <= fx {
            x = y;
            fx = fy;
        }
        s *= 0.5;
    }
    LocalResult { start: x0.to_vec(), x: rs.dominant_frame(&x), value: fx, evals }
}

fn re_x(ev: &AsymptoticCharacter<'_>, lambda: &[f64], x: &[f64]) -> f64 {
    match ev.eval_real(lambda, x) {
        Ok(v) if v.re.is_finite() => v.re,
        _ => f64::INFINITY,
    }
}

fn merge(lambda: &[f64], radius: f64, results: Vec<LocalResult>) -> Result<MinimizationResult> {
    let best = results
        .iter()
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .ok_or_else(|| Error::InvalidArgument("no starting points".into()))?;
    if !best.value.is_finite() {
        return Err(Error::NoConvergence("objective undefined at every start".into()));
    }
    let mut sorted: Vec<f64> = results.iter().map(|r| r.value).collect();
    sorted.sort_by(f64::total_cmp);
    let spread = sorted[sorted.len().min(5) - 1] - sorted[0];
    Ok(MinimizationResult {
        lambda: lambda.to_vec(),
        c: -best.value,
        minimizer: best.x.clone(),
        radius,
        starts: results.len(),
        evals: results.iter().map(|r| r.evals).sum(),
        best_per_start: results.iter().map(|r| r.value).collect(),
        spread,
        low_confidence: spread > 1e-3,
    })
}

/// `c(G, lambda)` by multistart simplex descent over the dominant chamber.
pub fn minimize_re_x_with<R: StartRunner>(rs: &RootSystem, lambda: &[f64], budget: &Budget, runner: &R) -> Result<MinimizationResult> {
    if lambda.len() != rs.rank() {
        return Err(Error::Dimension { expected: rs.rank(), got: lambda.len() });
    }
    if linalg::norm(lambda) == 0.0 || lambda.iter().any(|v| !v.is_finite()) {
        return Err(Error::ZeroWeight);
    }
    let ev = AsymptoticCharacter::new(rs)?;
    let radius = search_radius(rs, lambda);
    let starts = start_points(rs, radius, budget.starts_for(rs.rank()), budget.seed);
    let step = 0.1 * radius / libm::cbrt(starts.len() as f64);
    let f = |x0: &[f64]| local_descent(rs, |x| re_x(&ev, lambda, x), x0, step, budget.max_evals);
    merge(lambda, radius, runner.run(&starts, &f))
}

pub fn minimize_re_x(rs: &RootSystem, lambda: &[f64], budget: &Budget) -> Result<MinimizationResult> {
    minimize_re_x_with(rs, lambda, budget, &Sequential)
}

#[derive(Clone, Debug)]
pub struct CgEstimate {
    pub c: f64,
    /// Unit `lambda` (frame) attaining the estimate.
    pub lambda: Vec<f64>,
    pub at_best: MinimizationResult,
    /// `(barycentric grid point, c(G, lambda))` for the grid stage.
    pub grid: Vec<(Vec<f64>, f64)>,
    pub low_confidence: bool,
}

fn unit_lambda(dirs: &[Vec<f64>], bary: &[f64]) -> Vec<f64> {
    let r = dirs[0].len();
    let mut v = vec![0.0; r];
    for (d, &b) in dirs.iter().zip(bary) {
        for k in 0..r {
            v[k] += b * d[k];
        }
    }
    let n = linalg::norm(&v);
    linalg::scale(&v, 1.0 / n)
}

fn simplex_grid(r: usize, m: usize) -> Vec<Vec<usize>> {
    if r == 1 {
        return vec![vec![m]];
    }
    let mut out = Vec::new();
    for first in 0..=m {
        for mut rest in simplex_grid(r - 1, m - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `c(G) = min over unit dominant lambda of c(G, lambda)`: barycentric grid
/// on the unit fundamental-weight directions with spacing `step`, then a
/// pattern search from the best grid point.
pub fn estimate_cg_with<R: StartRunner>(rs: &RootSystem, budget: &Budget, step: f64, runner: &R) -> Result<CgEstimate> {
    let r = rs.rank();
    if r > 3 {
        return Err(Error::InvalidArgument("c(G) search is limited to rank <= 3".into()));
    }
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::InvalidArgument("lambda grid step must lie in (0, 1]".into()));
    }
    let dirs: Vec<Vec<f64>> = (0..r)
        .map(|j| {
            let w = rs.fundamental_weight_frame(j);
            linalg::scale(&w, 1.0 / linalg::norm(&w))
        })
        .collect();
    let c_at = |bary: &[f64]| -> Result<MinimizationResult> { minimize_re_x_with(rs, &unit_lambda(&dirs, bary), budget, runner) };
    if r == 1 {
        let m = c_at(&[1.0])?;
        return Ok(CgEstimate { c: m.c, lambda: m.lambda.clone(), low_confidence: m.low_confidence, grid: vec![(vec![1.0], m.c)], at_best: m });
    }
    let m = libm::round(1.0 / step) as usize;
    let mut grid = Vec::new();
    let mut best: Option<(Vec<f64>, MinimizationResult)> = None;
    for g in simplex_grid(r, m) {
        let bary: Vec<f64> = g.iter().map(|&k| k as f64 / m as f64).collect();
        let res = c_at(&bary)?;
        grid.push((bary.clone(), res.c));
        if best.as_ref().map_or(true, |b| res.c < b.1.c) {
            best = Some((bary, res));
        }
    }
    let (mut bary, mut res) = best.expect("nonempty grid");
    // pattern search along edges of the barycentric simplex
    let mut h = 0.5 / m as f64;
    while h > 1e-5 {
        let mut improved = false;
        for i in 0..r {
            for j in 0..r {
                if i == j || bary[i] < h {
                    continue;
                }
                let mut b = bary.clone();
                b[i] -= h;
                b[j] += h;
                let cand = c_at(&b)?;
                if cand.c < res.c - 1e-13 {
                    bary = b;
                    res = cand;
                    improved = true;
                }
            }
        }
        if !improved {
            h *= 0.5;
        }
    }
    let low = res.low_confidence;
    Ok(CgEstimate { c: res.c, lambda: res.lambda.clone(), at_best: res, grid, low_confidence: low })
}

pub fn estimate_cg(rs: &RootSystem, budget: &Budget, step: f64) -> Result<CgEstimate> {
    estimate_cg_with(rs, budget, step, &Sequential)
}

#[derive(Clone, Debug)]
pub struct DecayFit {
    pub exponent: f64,
    /// `(t, envelope)` pairs used in the regression.
    pub envelope: Vec<(f64, f64)>,
}

/// Fits `|X(lambda, t x)| ~ t^{-gamma}` on `t in [t0, t1]` by least squares
/// on the log of the windowed maximum of `|X|`.
pub fn decay_rate_fit(rs: &RootSystem, lambda: &[f64], x: &[f64], t0: f64, t1: f64) -> Result<DecayFit> {
    if !(t0 > 0.0 && t1 > 2.0 * t0) {
        return Err(Error::InvalidArgument("need 0 < t0 and t1 > 2 t0".into()));
    }
    if linalg::norm(lambda) == 0.0 || linalg::norm(x) == 0.0 {
        return Err(Error::ZeroWeight);
    }
    let ev = AsymptoticCharacter::new(rs)?;
    let windows = 24;
    let per = 200;
    let ratio = libm::pow(t1 / t0, 1.0 / windows as f64);
    let mut envelope = Vec::with_capacity(windows);
    for w in 0..windows {
        let a = t0 * libm::pow(ratio, w as f64);
        let b = a * ratio;
        let mut best = (a, 0.0f64);
        for k in 0..=per {
            let t = a + (b - a) * k as f64 / per as f64;
            let xt: Vec<C> = x.iter().map(|&v| C::new(t * v, 0.0)).collect();
            let (v, _, _) = ev.eval_with_error(lambda, &xt)?;
            if v.norm() > best.1 {
                best = (t, v.norm());
            }
        }
        if best.1 <= 0.0 {
            return Err(Error::InvalidArgument("envelope vanishes".into()));
        }
        envelope.push(best);
    }
    let pts: Vec<(f64, f64)> = envelope.iter().map(|&(t, v)| (libm::log(t), libm::log(v))).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let exponent = -sxy / sxx;
    if exponent < 0.05 {
        return Err(Error::InvalidArgument("envelope does not decay; singular input?".into()));
    }
    Ok(DecayFit { exponent, envelope })
}

#[derive(Clone, Debug)]
pub struct GgrCheck {
    pub threshold: f64,
    pub lambda_rho_norm: f64,
    pub threshold_passed: bool,
    /// Minimum of `Re chi_lambda(e^{ix}) / dim` found by the search.
    pub min_ratio: f64,
    pub argmin: Vec<f64>,
    /// The same ratio recomputed from the Weyl character formula.
    pub direct_ratio: f64,
    pub witness: Option<Vec<f64>>,
}

/// Threshold `|lambda + rho| > C(G)|rho| / (c(G) sqrt(2d))` and a direct
/// search for `x` with `Re chi_lambda(e^{ix})/chi_lambda(1) <= -c(G)`.
pub fn ggr_check_with<R: StartRunner>(
    rs: &RootSystem,
    lambda: &[i64],
    c_g: f64,
    big_c: f64,
    budget: &Budget,
    runner: &R,
) -> Result<GgrCheck> {
    if lambda.len() != rs.rank() {
        return Err(Error::Dimension { expected: rs.rank(), got: lambda.len() });
    }
    if lambda.iter().any(|&v| v < 0) {
        return Err(Error::NotDominantIntegral);
    }
    let rho = rs.rho_frame();
    let shifted: Vec<f64> = lambda.iter().map(|&v| v as f64 + 1.0).collect();
    let lr = rs.frame_from_dynkin(&shifted);
    let d = rs.dim() as f64;
    let threshold = big_c * linalg::norm(&rho) / (c_g * libm::sqrt(2.0 * d));
    let ev = AsymptoticCharacter::new(rs)?;
    let ratio = |x: &[f64]| -> f64 {
        let num = re_or_inf(ev.eval_real(&lr, x));
        let den = re_or_inf(ev.eval_real(&rho, x));
        if den.abs() < 1e-12 { f64::INFINITY } else { num / den }
    };
    // the ratio is only meaningful where X(rho, x) is nonzero: stay inside
    // the first alcove scale, where the denominator has no zeros before |x| ~ 2 pi / |rho|
    let radius = search_radius(rs, &lr).min(2.0 * PI / linalg::norm(&rho));
    let starts = start_points(rs, radius, budget.starts_for(rs.rank()), budget.seed);
    let step = 0.1 * radius / libm::cbrt(starts.len() as f64);
    let f = |x0: &[f64]| {
        local_descent(rs, |x| if linalg::norm(x) > radius { f64::INFINITY } else { ratio(x) }, x0, step, budget.max_evals)
    };
    let results = runner.run(&starts, &f);
    let best = results
        .iter()
        .filter(|r| r.value.is_finite())
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .ok_or_else(|| Error::NoConvergence("character-ratio search found no finite value".into()))?;
    let ce = CharacterEvaluator::new(rs)?;
    let xc: Vec<C> = best.x.iter().map(|&v| C::new(v, 0.0)).collect();
    let dim = repr::dim_irrep(rs, lambda)? as f64;
    let direct_ratio = ce.eval(lambda, &xc)?.re / dim;
    let witness = (best.value <= -c_g).then(|| best.x.clone());
    Ok(GgrCheck {
        threshold,
        lambda_rho_norm: linalg::norm(&lr),
        threshold_passed: linalg::norm(&lr) > threshold,
        min_ratio: best.value,
        argmin: best.x.clone(),
        direct_ratio,
        witness,
    })
}

fn re_or_inf(v: Result<C>) -> f64 {
    match v {
        Ok(z) if z.re.is_finite() => z.re,
        _ => f64::INFINITY,
    }
}

pub fn ggr_check(rs: &RootSystem, lambda: &[i64], c_g: f64, big_c: f64, budget: &Budget) -> Result<GgrCheck> {
    ggr_check_with(rs, lambda, c_g, big_c, budget, &Sequential)
}

/// `C(G)` for use with [`ggr_check`].
pub fn big_c(rs: &RootSystem) -> Result<f64> {
    Ok(bounds::c_of_g(rs)?.value)
}
