//! Duistermaat-Heckman densities.
//!
//! `DH_rho` is the centered box spline with direction multiset `R+`, so its
//! `k`-fold convolution is the box spline of `k R+`. Box splines are
//! evaluated with de Boor's recurrence in simple-root coordinates, where all
//! directions are integral. Values are densities against the measure giving
//! the root-lattice cell volume 1; divide by [`root_covolume`] for the
//! measure induced by the invariant form.
//!
//! Points on mesh walls are evaluated as the limit from the side of a fixed
//! direction `theta` whose coordinates decrease geometrically; only the
//! parallelepiped membership test of the base case sees `theta`
//! (lexicographically), the recurrence weights use the point itself.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;
use core::ops::Neg;

use hashbrown::HashMap;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};

use crate::linalg::{self, Q};
use crate::repr;
use crate::rootsys::RootSystem;
use crate::special;
use crate::weyl::{self, FrameWeylGroup};
use crate::{Error, Result};

/// Arithmetic usable by the box-spline recurrence.
pub trait SplineScalar: Clone + Num + Neg<Output = Self> + Debug {
    fn from_ratio(n: i64, d: i64) -> Self;
    /// Sign, with a tolerance for inexact arithmetic.
    fn sign(&self) -> i8;
    fn as_f64(&self) -> f64;
}

impl SplineScalar for f64 {
    fn from_ratio(n: i64, d: i64) -> Self {
        n as f64 / d as f64
    }
    fn sign(&self) -> i8 {
        if *self > 1e-11 {
            1
        } else if *self < -1e-11 {
            -1
        } else {
            0
        }
    }
    fn as_f64(&self) -> f64 {
        *self
    }
}

impl SplineScalar for BigRational {
    fn from_ratio(n: i64, d: i64) -> Self {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }
    fn sign(&self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

pub fn q_to_big(q: &Q) -> BigRational {
    BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
}

/// Box spline with integral directions, evaluated centered at the origin.
#[derive(Clone, Debug)]
pub struct BoxSpline<T> {
    r: usize,
    dirs: Vec<Vec<i64>>,
    mult: Vec<u32>,
    center: Vec<T>,
    theta: Vec<T>,
    /// Discontinuous splines take the mean of the two one-sided limits.
    two_sided: bool,
    /// Facet normals of the zonotopes spanned by sub-multisets, with their
    /// pairings against each direction.
    normals: Vec<Vec<i64>>,
    pairings: Vec<Vec<i64>>,
}

#[derive(Clone)]
struct Frame<T> {
    basis: Vec<usize>,
    inv: Vec<Vec<T>>,
    inv_det: T,
}

impl<T: SplineScalar> BoxSpline<T> {
    pub fn new(dirs: Vec<Vec<i64>>, mult: Vec<u32>) -> Result<Self> {
        let r = dirs.first().map(|d| d.len()).unwrap_or(0);
        if r == 0 || dirs.len() != mult.len() || dirs.iter().any(|d| d.len() != r) {
            return Err(Error::InvalidArgument("box spline needs directions of equal positive length".into()));
        }
        if dirs.len() > 64 {
            return Err(Error::InvalidArgument("at most 64 distinct directions".into()));
        }
        if mult.iter().any(|&m| m == 0) || dirs.iter().any(|d| d.iter().all(|&x| x == 0)) {
            return Err(Error::InvalidArgument("zero direction or multiplicity".into()));
        }
        if int_rank(&dirs) < r {
            return Err(Error::InvalidArgument("directions do not span".into()));
        }
        let mut center = vec![T::zero(); r];
        for (d, &m) in dirs.iter().zip(&mult) {
            for (c, &x) in center.iter_mut().zip(d) {
                *c = c.clone() + T::from_ratio(x * m as i64, 2);
            }
        }
        // 2^-10 geometric: no small integral normal is orthogonal to it.
        let theta = (0..r).map(|i| T::from_ratio(1, 1i64 << (10 * i))).collect();
        let two_sided = (0..dirs.len()).any(|i| {
            mult[i] == 1 && {
                let rest: Vec<Vec<i64>> = (0..dirs.len()).filter(|&j| j != i).map(|j| dirs[j].clone()).collect();
                int_rank(&rest) < r
            }
        });
        let mut normals = facet_normals(&dirs, r);
        for j in 0..r {
            let mut e = vec![0; r];
            e[j] = 1;
            if !normals.contains(&e) {
                normals.push(e);
            }
        }
        let pairings = normals
            .iter()
            .map(|n| dirs.iter().map(|d| n.iter().zip(d).map(|(a, b)| a * b).sum()).collect())
            .collect();
        Ok(BoxSpline { r, dirs, mult, center, theta, two_sided, normals, pairings })
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn num_directions(&self) -> u32 {
        self.mult.iter().sum()
    }

    /// Value of the centered spline at `p`.
    pub fn eval(&self, p: &[T]) -> Result<T> {
        let mut tr = self.translates(p)?;
        Ok(tr.eval_at(&vec![0; self.r]))
    }

    /// Evaluates many points; each point gets its own memo table.
    pub fn eval_many(&self, points: &[Vec<T>]) -> Result<Vec<T>> {
        points.iter().map(|p| self.eval(p)).collect()
    }

    /// Evaluator for the points `base + j`, `j` integral, sharing memo
    /// tables between them.
    pub fn translates(&self, base: &[T]) -> Result<Translates<'_, T>> {
        if base.len() != self.r {
            return Err(Error::Dimension { expected: self.r, got: base.len() });
        }
        let x0: Vec<T> = base.iter().zip(&self.center).map(|(a, b)| a.clone() + b.clone()).collect();
        let proj: Vec<f64> = self
            .normals
            .iter()
            .map(|n| n.iter().zip(&x0).map(|(&a, b)| a as f64 * b.as_f64()).sum())
            .collect();
        let mk = |theta: Vec<T>| Evaluator {
            s: self,
            x0: x0.clone(),
            proj: proj.clone(),
            theta,
            memo: HashMap::new(),
            frames: HashMap::new(),
        };
        let down = self.two_sided.then(|| mk(self.theta.iter().map(|t| -t.clone()).collect()));
        Ok(Translates { up: mk(self.theta.clone()), down })
    }

    /// Bounding box of the centered support in these coordinates.
    pub fn support_box(&self) -> Vec<(f64, f64)> {
        (0..self.r)
            .map(|j| {
                let h: f64 = self.dirs.iter().zip(&self.mult).map(|(d, &m)| (d[j].abs() * m as i64) as f64).sum::<f64>() / 2.0;
                (-h, h)
            })
            .collect()
    }
}

/// Shared-memo evaluation at lattice translates of a base point.
pub struct Translates<'a, T> {
    up: Evaluator<'a, T>,
    down: Option<Evaluator<'a, T>>,
}

impl<T: SplineScalar> Translates<'_, T> {
    /// Value of the centered spline at `base + offset`.
    pub fn eval_at(&mut self, offset: &[i64]) -> T {
        let run = |ev: &mut Evaluator<'_, T>| {
            let mut counts = ev.s.mult.clone();
            let mut shift: Vec<i64> = offset.iter().map(|&j| -j).collect();
            ev.rec(&mut counts, &mut shift)
        };
        let up = run(&mut self.up);
        match &mut self.down {
            None => up,
            Some(d) => (up + run(d)) / T::from_ratio(2, 1),
        }
    }
}

struct Evaluator<'a, T> {
    s: &'a BoxSpline<T>,
    x0: Vec<T>,
    theta: Vec<T>,
    proj: Vec<f64>,
    memo: HashMap<(Vec<u32>, Vec<i64>), T>,
    frames: HashMap<u64, Option<Frame<T>>>,
}

impl<T: SplineScalar> Evaluator<'_, T> {
    fn frame(&mut self, mask: u64) -> Option<Frame<T>> {
        if let Some(f) = self.frames.get(&mask) {
            return f.clone();
        }
        let s = self.s;
        let mut basis = Vec::new();
        let mut rows: Vec<Vec<i64>> = Vec::new();
        for i in 0..s.dirs.len() {
            if mask >> i & 1 == 1 {
                rows.push(s.dirs[i].clone());
                if int_rank(&rows) == rows.len() {
                    basis.push(i);
                } else {
                    rows.pop();
                }
                if basis.len() == s.r {
                    break;
                }
            }
        }
        let f = if basis.len() < s.r {
            None
        } else {
            // columns = basis directions
            let m: Vec<Vec<T>> = (0..s.r)
                .map(|a| basis.iter().map(|&b| T::from_ratio(s.dirs[b][a], 1)).collect())
                .collect();
            let (inv, det) = invert(&m).expect("independent basis");
            let inv_det = T::one() / if det.sign() < 0 { -det } else { det };
            Some(Frame { basis, inv, inv_det })
        };
        self.frames.insert(mask, f.clone());
        f
    }

    fn rec(&mut self, counts: &mut Vec<u32>, shift: &mut Vec<i64>) -> T {
        let s = self.s;
        let n: u32 = counts.iter().sum();
        // strictly outside the zonotope of the remaining directions
        for (k, nrm) in s.normals.iter().enumerate() {
            let v = self.proj[k] - nrm.iter().zip(shift.iter()).map(|(a, b)| (a * b) as f64).sum::<f64>();
            let (mut lo, mut hi) = (0i64, 0i64);
            for (&p, &c) in s.pairings[k].iter().zip(counts.iter()) {
                lo += (c as i64) * p.min(0);
                hi += (c as i64) * p.max(0);
            }
            let margin = 1e-9 * (1.0 + v.abs());
            if v < lo as f64 - margin || v > hi as f64 + margin {
                return T::zero();
            }
        }
        let key = (counts.clone(), shift.clone());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let mask = counts.iter().enumerate().filter(|(_, &c)| c > 0).fold(0u64, |m, (i, _)| m | 1 << i);
        let x: Vec<T> = self.x0.iter().zip(shift.iter()).map(|(a, &b)| a.clone() - T::from_ratio(b, 1)).collect();
        let value = match self.frame(mask) {
            None => T::zero(),
            Some(f) if n as usize == s.r => {
                let c0 = matvec(&f.inv, &x);
                let c1 = matvec(&f.inv, &self.theta);
                let inside = c0.iter().zip(&c1).all(|(a, b)| {
                    let lower = match a.sign() {
                        0 => b.sign() > 0,
                        sg => sg > 0,
                    };
                    let am1 = a.clone() - T::one();
                    let upper = match am1.sign() {
                        0 => b.sign() < 0,
                        sg => sg < 0,
                    };
                    lower && upper
                });
                if inside {
                    f.inv_det
                } else {
                    T::zero()
                }
            }
            Some(f) => {
                let u = matvec(&f.inv, &x);
                let mut acc = T::zero();
                for i in 0..counts.len() {
                    let c = counts[i];
                    if c == 0 {
                        continue;
                    }
                    let ub = f.basis.iter().position(|&b| b == i).map(|k| u[k].clone());
                    counts[i] -= 1;
                    if let Some(ub) = &ub {
                        if ub.sign() != 0 {
                            acc = acc + ub.clone() * self.rec(counts, shift);
                        }
                    }
                    let w = match ub {
                        Some(ub) => T::from_ratio(c as i64, 1) - ub,
                        None => T::from_ratio(c as i64, 1),
                    };
                    if w.sign() != 0 {
                        for (sh, d) in shift.iter_mut().zip(&s.dirs[i]) {
                            *sh += d;
                        }
                        acc = acc + w * self.rec(counts, shift);
                        for (sh, d) in shift.iter_mut().zip(&s.dirs[i]) {
                            *sh -= d;
                        }
                    }
                    counts[i] += 1;
                }
                acc / T::from_ratio(n as i64 - s.r as i64, 1)
            }
        };
        self.memo.insert(key, value.clone());
        value
    }
}

fn matvec<T: SplineScalar>(m: &[Vec<T>], v: &[T]) -> Vec<T> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(T::zero(), |a, (x, y)| a + x.clone() * y.clone()))
        .collect()
}

/// Inverse and determinant by Gauss-Jordan elimination.
fn invert<T: SplineScalar>(m: &[Vec<T>]) -> Option<(Vec<Vec<T>>, T)> {
    let n = m.len();
    let mut a: Vec<Vec<T>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { T::one() } else { T::zero() }));
            r
        })
        .collect();
    let mut det = T::one();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].as_f64().abs().partial_cmp(&a[j][col].as_f64().abs()).unwrap())?;
        if a[piv][col].sign() == 0 {
            return None;
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det = det * p.clone();
        for x in a[col].iter_mut() {
            *x = x.clone() / p.clone();
        }
        for i in 0..n {
            if i != col && a[i][col].sign() != 0 {
                let f = a[i][col].clone();
                for j in 0..2 * n {
                    let v = a[col][j].clone() * f.clone();
                    a[i][j] = a[i][j].clone() - v;
                }
            }
        }
    }
    Some((a.into_iter().map(|r| r[n..].to_vec()).collect(), det))
}

/// Primitive normals (up to sign) of hyperplanes spanned by directions.
fn facet_normals(dirs: &[Vec<i64>], r: usize) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = Vec::new();
    let mut subset: Vec<usize> = Vec::new();
    fn walk(dirs: &[Vec<i64>], r: usize, start: usize, subset: &mut Vec<usize>, out: &mut Vec<Vec<i64>>) {
        if out.len() > 4096 {
            return;
        }
        if subset.len() + 1 == r {
            let cols: Vec<&Vec<i64>> = subset.iter().map(|&i| &dirs[i]).collect();
            let mut n: Vec<i64> = (0..r)
                .map(|i| {
                    let m: Vec<Vec<i128>> = (0..r).filter(|&a| a != i).map(|a| cols.iter().map(|c| c[a] as i128).collect()).collect();
                    let d = int_det(m);
                    (if i % 2 == 0 { d } else { -d }) as i64
                })
                .collect();
            let g = n.iter().fold(0i64, |m, &x| num_integer::gcd(m, x));
            if g == 0 {
                return;
            }
            n.iter_mut().for_each(|x| *x /= g);
            if n.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                n.iter_mut().for_each(|x| *x = -*x);
            }
            if !out.contains(&n) {
                out.push(n);
            }
            return;
        }
        for i in start..dirs.len() {
            subset.push(i);
            walk(dirs, r, i + 1, subset, out);
            subset.pop();
        }
    }
    walk(dirs, r, 0, &mut subset, &mut out);
    out
}

/// Determinant by Bareiss elimination.
fn int_det(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| a[i][k] != 0) else { return 0 };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    if n == 0 {
        1
    } else {
        sign * a[n - 1][n - 1]
    }
}

/// Rank of integer vectors (fraction-free elimination in i128).
fn int_rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let cols = a.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(rank, p);
        for i in rank + 1..a.len() {
            if a[i][c] != 0 {
                let (f, g) = (a[i][c], a[rank][c]);
                for j in 0..cols {
                    a[i][j] = a[i][j] * g - a[rank][j] * f;
                }
                let gcd = a[i].iter().fold(0i128, |m, &x| num_integer::gcd(m, x));
                if gcd > 1 {
                    a[i].iter_mut().for_each(|x| *x /= gcd);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Box spline of `k R+` in simple-root coordinates, i.e. `(DH_rho)^{*k}`.
pub fn rho_box_spline<T: SplineScalar>(rs: &RootSystem, k: u32) -> Result<BoxSpline<T>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let dirs = rs.positive_roots().to_vec();
    let n = dirs.len();
    BoxSpline::new(dirs, vec![k; n])
}

/// `(DH_rho)^{*k}(p)` for `p` in simple-root coordinates, against the
/// root-lattice measure.
pub fn dh_rho_convolution_eval<T: SplineScalar>(rs: &RootSystem, k: u32, p: &[T]) -> Result<T> {
    rho_box_spline(rs, k)?.eval(p)
}

/// Exact `(DH_rho)^{*k}` at a weight given by Dynkin labels.
pub fn dh_rho_at_weight(rs: &RootSystem, k: u32, mu: &[Q]) -> Result<BigRational> {
    check_len(rs, mu.len())?;
    let p: Vec<BigRational> = rs.dynkin_to_root(mu).iter().map(q_to_big).collect();
    dh_rho_convolution_eval(rs, k, &p)
}

/// Volume of a root-lattice cell under the invariant form.
pub fn root_covolume(rs: &RootSystem) -> f64 {
    let g = rs.gram();
    libm::sqrt(linalg::q_to_f64(&linalg::det_q(g)))
}

/// Simple-root coordinates of a frame vector.
pub fn root_coords_from_frame(rs: &RootSystem, v: &[f64]) -> Result<Vec<f64>> {
    check_len(rs, v.len())?;
    let s = rs.simple_roots_frame();
    let r = rs.rank();
    let m: Vec<Vec<f64>> = (0..r).map(|a| (0..r).map(|b| s[b][a]).collect()).collect();
    linalg::solve(&m, v).ok_or_else(|| Error::Consistency("singular simple-root frame".into()))
}

/// `(DH_rho)^{*k}` at a frame point, as a density for the invariant form.
pub fn dh_rho_density(rs: &RootSystem, k: u32, p: &[f64]) -> Result<f64> {
    let c = root_coords_from_frame(rs, p)?;
    Ok(dh_rho_convolution_eval::<f64>(rs, k, &c)? / root_covolume(rs))
}

fn check_len(rs: &RootSystem, n: usize) -> Result<()> {
    if n != rs.rank() {
        return Err(Error::Dimension { expected: rs.rank(), got: n });
    }
    Ok(())
}

/// The polytope `conv(W lambda)`, cut out by `(p, w w_j^vee) <= (lambda, w_j^vee)`.
#[derive(Clone, Debug)]
pub struct DhPolytope {
    pub lambda: Vec<f64>,
    pub normals: Vec<Vec<f64>>,
    pub offsets: Vec<f64>,
    pub vertices: Vec<Vec<f64>>,
}

impl DhPolytope {
    /// `lambda` in frame coordinates (any chamber).
    pub fn new(rs: &RootSystem, lambda: &[f64]) -> Result<Self> {
        check_len(rs, lambda.len())?;
        let group = FrameWeylGroup::new(rs, weyl_cap())?;
        let lam = rs.dominant_frame(lambda);
        let mut normals = Vec::new();
        let mut offsets = Vec::new();
        for j in 0..rs.rank() {
            let w = rs.fundamental_coweight_frame(j);
            let off = linalg::dot(&lam, &w);
            for v in dedup_orbit(&group, &w) {
                normals.push(v);
                offsets.push(off);
            }
        }
        let vertices = dedup_orbit(&group, &lam);
        Ok(DhPolytope { lambda: lam, normals, offsets, vertices })
    }

    pub fn contains(&self, p: &[f64], tol: f64) -> bool {
        self.normals.iter().zip(&self.offsets).all(|(n, &o)| linalg::dot(p, n) <= o + tol)
    }
}

fn weyl_cap() -> u64 {
    crate::asympt::DEFAULT_GROUP_CAP
}

fn dedup_orbit(group: &FrameWeylGroup, v: &[f64]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for k in 0..group.order() {
        let w = group.apply(k, v);
        if !out.iter().any(|u| linalg::norm(&linalg::sub(u, &w)) < 1e-9) {
            out.push(w);
        }
    }
    out
}

/// Radius of the largest centered ball inside `conv(W lambda)`.
pub fn inradius(rs: &RootSystem, lambda: &[f64]) -> Result<f64> {
    check_len(rs, lambda.len())?;
    if linalg::norm(lambda) == 0.0 {
        return Err(Error::ZeroWeight);
    }
    let lam = rs.dominant_frame(lambda);
    Ok((0..rs.rank())
        .map(|j| {
            let w = rs.fundamental_coweight_frame(j);
            linalg::dot(&lam, &w) / linalg::norm(&w)
        })
        .fold(f64::INFINITY, f64::min))
}

/// Minimum of `R(lambda)/|lambda|` over the dominant chamber. The function
/// is a concave homogeneous minimum divided by the norm, so the minimum sits
/// on an extreme ray of the chamber.
pub fn r_g(rs: &RootSystem) -> f64 {
    (0..rs.rank())
        .map(|i| {
            let w = rs.fundamental_weight_frame(i);
            inradius(rs, &w).expect("nonzero") / linalg::norm(&w)
        })
        .fold(f64::INFINITY, f64::min)
}

fn integral_scaled(v: &[Q], n: u64) -> Option<Vec<i64>> {
    v.iter()
        .map(|q| {
            let s = *q * Q::from_integer(n as i64);
            s.is_integer().then(|| s.to_integer())
        })
        .collect()
}

/// `N^r dim L_{N lambda}[N mu] / dim L_{N lambda}` divided by the root
/// covolume, extrapolated to `N -> infinity`. Returns value and error
/// indicator. `lambda`, `mu` in Dynkin labels.
pub fn dh_eval_finite_n(rs: &RootSystem, lambda: &[Q], mu: &[Q], ns: &[u64]) -> Result<(f64, f64)> {
    check_len(rs, lambda.len())?;
    check_len(rs, mu.len())?;
    if lambda.iter().any(|q| *q <= Q::zero()) {
        return Err(Error::SingularWeight);
    }
    let r = rs.rank() as i32;
    let covol = root_covolume(rs);
    let mut hs = Vec::new();
    let mut vs = Vec::new();
    for &n in ns {
        let (Some(ln), Some(mn)) = (integral_scaled(lambda, n), integral_scaled(mu, n)) else {
            return Err(Error::InvalidArgument(alloc::format!("N = {n} does not clear denominators")));
        };
        let diff: Vec<Q> = ln.iter().zip(&mn).map(|(a, b)| Q::from_integer(a - b)).collect();
        if rs.dynkin_to_root(&diff).iter().any(|c| !c.is_integer()) {
            return Err(Error::InvalidArgument(alloc::format!("N lambda - N mu not in the root lattice at N = {n}")));
        }
        let mult = repr::weight_multiplicity(rs, &ln, &mn)? as f64;
        let dim = repr::dim_irrep(rs, &ln)? as f64;
        hs.push(1.0 / n as f64);
        vs.push(libm::pow(n as f64, r as f64) * mult / dim / covol);
    }
    special::neville_zero(&hs, &vs)
}

/// Exact second moment of `DH_{rho/|rho|}`: each direction contributes a
/// centered uniform law of variance `|a|^2/12`.
pub fn second_moment_rho(rs: &RootSystem) -> Q {
    rs.sum_positive_root_norms() / Q::from_integer(12) / rs.rho_norm_sq()
}

/// Second moment of `DH_{lambda/|lambda|}` from the weights of `L_{N lambda}`,
/// extrapolated in `1/N`.
pub fn second_moment_finite_n(rs: &RootSystem, lambda: &[i64], ns: &[u64]) -> Result<(f64, f64)> {
    check_len(rs, lambda.len())?;
    if lambda.iter().all(|&x| x == 0) {
        return Err(Error::ZeroWeight);
    }
    let lq: Vec<Q> = lambda.iter().map(|&x| Q::from_integer(x)).collect();
    let lnorm = linalg::q_to_f64(&rs.inner_dynkin(&lq, &lq));
    let mut hs = Vec::new();
    let mut vs = Vec::new();
    for &n in ns {
        let ln: Vec<i64> = lambda.iter().map(|&x| x * n as i64).collect();
        let dom = repr::dominant_multiplicities(rs, &ln)?;
        let mut acc = special::Compensated::default();
        let mut total = 0.0;
        for (mu, m) in &dom {
            let orbit = weyl::dominant_orbit(rs, mu).len() as f64;
            let mq: Vec<Q> = mu.iter().map(|&x| Q::from_integer(x)).collect();
            let nsq = linalg::q_to_f64(&rs.inner_dynkin(&mq, &mq));
            acc.add(*m as f64 * orbit * nsq);
            total += *m as f64 * orbit;
        }
        hs.push(1.0 / n as f64);
        vs.push(acc.value() / total / (lnorm * (n * n) as f64));
    }
    special::neville_zero(&hs, &vs)
}

/// `B(lambda) = vol(unit r-ball) * DH_{lambda/|lambda|}(0)`, `lambda` dominant
/// regular in Dynkin labels. Multiples of `rho` use the exact box spline.
pub fn b_value(rs: &RootSystem, lambda: &[i64]) -> Result<f64> {
    check_len(rs, lambda.len())?;
    if lambda.iter().any(|&x| x <= 0) {
        return Err(Error::SingularWeight);
    }
    let r = rs.rank();
    let lq: Vec<Q> = lambda.iter().map(|&x| Q::from_integer(x)).collect();
    let norm = libm::sqrt(linalg::q_to_f64(&rs.inner_dynkin(&lq, &lq)));
    let dh0 = if lambda.iter().all(|&x| x == lambda[0]) {
        // DH_{c rho}(0) = c^-r DH_rho(0)
        let zero = vec![BigRational::zero(); r];
        let m = dh_rho_convolution_eval(rs, 1, &zero)?;
        m.as_f64() / root_covolume(rs) / libm::pow(lambda[0] as f64, r as f64)
    } else {
        let idx = index_of_root_lattice(rs);
        let zero = vec![Q::zero(); r];
        let ns: Vec<u64> = [4u64, 6, 8, 10, 12].iter().map(|m| m * idx).collect();
        dh_eval_finite_n(rs, &lq, &zero, &ns)?.0
    };
    Ok(special::unit_ball_volume(r) * libm::pow(norm, r as f64) * dh0)
}

/// `[P : Q]`, the determinant of the Cartan matrix.
pub fn index_of_root_lattice(rs: &RootSystem) -> u64 {
    let c: Vec<Vec<Q>> = rs.cartan().iter().map(|r| r.iter().map(|&x| Q::from_integer(x)).collect()).collect();
    linalg::det_q(&c).to_integer().unsigned_abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    #[test]
    fn sl2_values() {
        let s = RootSystem::from_label("A", 1).unwrap();
        let covol = root_covolume(&s);
        assert!((covol - libm::sqrt(0.5)).abs() < 1e-15);
        // k = 1: uniform on [-rho, rho], boundary gets the mean of the limits
        let m = dh_rho_convolution_eval(&s, 1, &[big(0, 1)]).unwrap();
        assert_eq!(m, big(1, 1));
        assert!((m.as_f64() / covol - libm::sqrt(2.0)).abs() < 1e-14);
        assert_eq!(dh_rho_convolution_eval(&s, 1, &[big(1, 2)]).unwrap(), big(1, 2));
        assert_eq!(dh_rho_convolution_eval(&s, 1, &[big(-1, 2)]).unwrap(), big(1, 2));
        // k = 2: hat with peak 1
        assert_eq!(dh_rho_convolution_eval(&s, 2, &[big(0, 1)]).unwrap(), big(1, 1));
        assert_eq!(dh_rho_convolution_eval(&s, 2, &[big(1, 4)]).unwrap(), big(3, 4));
        assert_eq!(dh_rho_convolution_eval(&s, 2, &[big(1, 1)]).unwrap(), big(0, 1));
        // k = 3: quadratic B-spline, 3/4 at the center, 1/8 at the knots +-1
        assert_eq!(dh_rho_convolution_eval(&s, 3, &[big(0, 1)]).unwrap(), big(3, 4));
        assert_eq!(dh_rho_convolution_eval(&s, 3, &[big(1, 1)]).unwrap(), big(1, 8));
        assert_eq!(dh_rho_convolution_eval(&s, 3, &[big(3, 2)]).unwrap(), big(0, 1));
    }

    #[test]
    fn outside_support_is_zero() {
        for (t, r) in [("A", 2), ("B", 2), ("G", 2), ("A", 3)] {
            let s = RootSystem::from_label(t, r).unwrap();
            let sp = rho_box_spline::<f64>(&s, 1).unwrap();
            let bx = sp.support_box();
            let p: Vec<f64> = bx.iter().map(|b| b.1 + 0.1).collect();
            assert_eq!(sp.eval(&p).unwrap(), 0.0);
        }
    }

    /// Sum over translates by the lattice of the coordinates is the mass.
    fn periodized_mass(s: &RootSystem, k: u32, x0: &[BigRational]) -> BigRational {
        let sp = rho_box_spline::<BigRational>(s, k).unwrap();
        let bx = sp.support_box();
        let r = s.rank();
        let ranges: Vec<(i64, i64)> = bx.iter().map(|b| (b.0.floor() as i64 - 1, b.1.ceil() as i64 + 1)).collect();
        let mut idx: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        let mut total = BigRational::zero();
        let mut tr = sp.translates(x0).unwrap();
        loop {
            total += tr.eval_at(&idx);
            let mut i = 0;
            loop {
                if i == r {
                    return total;
                }
                idx[i] += 1;
                if idx[i] <= ranges[i].1 {
                    break;
                }
                idx[i] = ranges[i].0;
                i += 1;
            }
        }
    }

    #[test]
    fn exact_total_mass() {
        for (t, r, ks) in [("A", 1, 1..=3), ("A", 2, 1..=3), ("B", 2, 1..=3), ("G", 2, 1..=2), ("A", 3, 1..=2), ("B", 3, 1..=1)] {
            let s = RootSystem::from_label(t, r).unwrap();
            for k in ks {
                for x0 in [vec![big(1, 3), big(2, 7), big(1, 5)], vec![big(0, 1); 3], vec![big(1, 2), big(1, 2), big(0, 1)]] {
                    assert_eq!(periodized_mass(&s, k, &x0[..r]), big(1, 1), "{t}{r} k={k} {x0:?}");
                }
            }
        }
    }

    #[test]
    fn exact_and_float_agree() {
        let s = RootSystem::from_label("B", 2).unwrap();
        for p in [[big(1, 3), big(-1, 4)], [big(1, 1), big(0, 1)], [big(-2, 1), big(1, 2)]] {
            let e = dh_rho_convolution_eval(&s, 2, &p).unwrap().as_f64();
            let pf: Vec<f64> = p.iter().map(|q| q.as_f64()).collect();
            let f = dh_rho_convolution_eval(&s, 2, &pf).unwrap();
            assert!((e - f).abs() < 1e-12, "{e} {f}");
        }
    }

    /// Riemann sum on a grid of step `1/m` in root coordinates, compared with
    /// `X(rho, x)^k`; the aliased copies at distance `2 pi m` are negligible
    /// for `k = 3`.
    #[test]
    fn fourier_transform() {
        for (t, r) in [("A", 1), ("A", 2), ("B", 2)] {
            let s = RootSystem::from_label(t, r).unwrap();
            let k = 3;
            let sp = rho_box_spline::<f64>(&s, k).unwrap();
            let ev = crate::asympt::AsymptoticCharacter::new(&s).unwrap();
            let m = if r == 1 { 64.0 } else { 16.0 };
            let bx = sp.support_box();
            let mut pts = Vec::new();
            let mut idx: Vec<i64> = bx.iter().map(|b| (b.0 * m).floor() as i64).collect();
            'grid: loop {
                pts.push(idx.iter().map(|&j| j as f64 / m).collect::<Vec<f64>>());
                let mut i = 0;
                loop {
                    if i == r {
                        break 'grid;
                    }
                    idx[i] += 1;
                    if (idx[i] as f64) <= bx[i].1 * m {
                        break;
                    }
                    idx[i] = (bx[i].0 * m).floor() as i64;
                    i += 1;
                }
            }
            let vals = sp.eval_many(&pts).unwrap();
            let rho = s.rho_frame();
            for x in [vec![0.7, -1.3, 0.4], vec![2.1, 0.3, -0.9], vec![-4.0, 3.3, 1.0]] {
                let x = &x[..r];
                let mut re = 0.0;
                let mut im = 0.0;
                for (p, v) in pts.iter().zip(&vals) {
                    let ph = linalg::dot(&s.frame_from_root(p), x);
                    re += v * libm::cos(ph);
                    im += v * libm::sin(ph);
                }
                let w = 1.0 / libm::pow(m, r as f64);
                let want = num_complex::Complex64::new(ev.eval_real(&rho, x).unwrap().re, 0.0).powu(k);
                let got = num_complex::Complex64::new(re * w, im * w);
                assert!((got - want).norm() < 1e-6, "{t}{r} x={x:?} {got} {want}");
            }
        }
    }

    #[test]
    fn moments() {
        for (t, r) in [("A", 1), ("A", 2), ("B", 2), ("C", 3), ("G", 2), ("F", 4), ("E", 8)] {
            let s = RootSystem::from_label(t, r).unwrap();
            let h = s.coxeter_number() as i64;
            assert_eq!(second_moment_rho(&s), Q::new(1, h + 1));
        }
        let s = RootSystem::from_label("C", 2).unwrap();
        let (m, _) = second_moment_finite_n(&s, &[1, 2], &[4, 8, 16]).unwrap();
        assert!((m - 0.2).abs() < 0.2 * 0.02, "{m}");
        let (m, _) = second_moment_finite_n(&s, &[1, 1], &[4, 8, 16]).unwrap();
        assert!((m - 0.2).abs() < 1e-6, "{m}");
    }

    #[test]
    fn finite_n_route() {
        let s = RootSystem::from_label("A", 1).unwrap();
        // lambda = rho/|rho|: uniform on [-1, 1]; DH_rho(0) = 1/(2|rho|)
        let (v, _) = dh_eval_finite_n(&s, &[Q::from_integer(1)], &[Q::zero()], &[8, 16, 32, 64, 128]).unwrap();
        assert!((v - libm::sqrt(2.0)).abs() < 1e-6, "{v}");
        let (v, _) = dh_eval_finite_n(&s, &[Q::from_integer(1)], &[Q::from_integer(3)], &[2, 4, 8]).unwrap();
        assert_eq!(v, 0.0);
        let s = RootSystem::from_label("A", 2).unwrap();
        let one = Q::from_integer(1);
        let (v, _) = dh_eval_finite_n(&s, &[one, one], &[Q::zero(), Q::zero()], &[3, 6, 9, 12]).unwrap();
        let exact = dh_rho_density(&s, 1, &[0.0, 0.0]).unwrap();
        assert!((v - exact).abs() < 0.02 * exact, "{v} {exact}");
        let (v, _) = dh_eval_finite_n(&s, &[one, one], &[Q::new(1, 3), Q::new(1, 3)], &[3, 6, 9, 12]).unwrap();
        let p = s.frame_from_dynkin(&[1.0 / 3.0, 1.0 / 3.0]);
        let exact = dh_rho_density(&s, 1, &p).unwrap();
        assert!((v - exact).abs() < 0.02 * exact, "{v} {exact}");
        assert!(dh_eval_finite_n(&s, &[one, Q::zero()], &[Q::zero(), Q::zero()], &[3]).is_err());
    }

    #[test]
    fn inradius_and_r_g() {
        for n in 2..=7 {
            let s = RootSystem::from_label("A", n - 1).unwrap();
            assert!((r_g(&s) - 1.0 / (n as f64 - 1.0)).abs() < 1e-12, "n={n}");
        }
        let s = RootSystem::from_label("A", 1).unwrap();
        let l = s.fundamental_weight_frame(0);
        assert!((inradius(&s, &l).unwrap() - linalg::norm(&l)).abs() < 1e-15);
        // grid search over the chamber never beats the extreme rays
        for (t, r) in [("B", 2), ("G", 2), ("A", 3), ("C", 3)] {
            let s = RootSystem::from_label(t, r).unwrap();
            let rg = r_g(&s);
            assert!(rg > 0.0);
            let mut state = 12345u64;
            for _ in 0..500 {
                let c: Vec<f64> = (0..r)
                    .map(|_| {
                        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                        (state >> 11) as f64 / (1u64 << 53) as f64
                    })
                    .collect();
                let l = s.frame_from_dynkin(&c);
                assert!(inradius(&s, &l).unwrap() / linalg::norm(&l) >= rg - 1e-12);
            }
        }
    }

    /// Points at distance `R - eps` in every direction are in the hull of the
    /// orbit; some point at `R + eps` is not.
    #[test]
    fn inradius_against_hull() {
        for (t, r) in [("B", 2), ("G", 2), ("A", 2)] {
            let s = RootSystem::from_label(t, r).unwrap();
            let lam = s.frame_from_dynkin(&[1.0, 0.35]);
            let poly = DhPolytope::new(&s, &lam).unwrap();
            let rad = inradius(&s, &lam).unwrap();
            let mut min_support = f64::INFINITY;
            for i in 0..3600 {
                let a = i as f64 * core::f64::consts::PI / 1800.0;
                let u = [libm::cos(a), libm::sin(a)];
                // support function of the vertex hull
                let h = poly.vertices.iter().map(|v| linalg::dot(v, &u)).fold(f64::NEG_INFINITY, f64::max);
                min_support = min_support.min(h);
                let inner = [u[0] * (rad - 1e-6), u[1] * (rad - 1e-6)];
                assert!(poly.contains(&inner, 0.0));
            }
            assert!((min_support - rad).abs() < 1e-6, "{t}{r} {min_support} {rad}");
        }
    }

    #[test]
    fn polytope_membership_matches_vertex_hull() {
        let s = RootSystem::from_label("G", 2).unwrap();
        let lam = s.frame_from_dynkin(&[0.6, 1.0]);
        let poly = DhPolytope::new(&s, &lam).unwrap();
        assert_eq!(poly.vertices.len(), 12);
        assert!(poly.contains(&[0.0, 0.0], 0.0));
        let mut state = 99u64;
        let big_r = linalg::norm(&lam);
        for _ in 0..2000 {
            let mut u = [0.0; 2];
            for c in &mut u {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                *c = ((state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0) * big_r;
            }
            // hull membership: inside every supporting half-plane of the vertex polygon
            let mut angles: Vec<(f64, &Vec<f64>)> = poly.vertices.iter().map(|v| (libm::atan2(v[1], v[0]), v)).collect();
            angles.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            let n = angles.len();
            let inside = (0..n).all(|i| {
                let a = angles[i].1;
                let b = angles[(i + 1) % n].1;
                (b[0] - a[0]) * (u[1] - a[1]) - (b[1] - a[1]) * (u[0] - a[0]) >= 0.0
            });
            assert_eq!(inside, poly.contains(&u, 0.0), "{u:?}");
        }
    }

    #[test]
    fn b_values() {
        let s = RootSystem::from_label("A", 1).unwrap();
        assert!((b_value(&s, &[1]).unwrap() - 1.0).abs() < 1e-12);
        assert!((b_value(&s, &[3]).unwrap() - 1.0).abs() < 1e-12);
        for (t, r) in [("A", 2), ("B", 2), ("G", 2)] {
            let s = RootSystem::from_label(t, r).unwrap();
            let b = b_value(&s, &vec![1; r]).unwrap();
            assert!(b >= 1.0, "{t}{r} {b}");
            let b2 = b_value(&s, &[1, 2]).unwrap();
            assert!(b2 >= 1.0, "{t}{r} {b2}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn log_concave(a in -1.0f64..1.0, b in -1.0f64..1.0, c in -1.0f64..1.0, d in -1.0f64..1.0, t in 0.0f64..1.0) {
            let s = RootSystem::from_label("B", 2).unwrap();
            let sp = rho_box_spline::<f64>(&s, 1).unwrap();
            let p = [a * 1.5, b * 1.5];
            let q = [c * 1.5, d * 1.5];
            let (fp, fq) = (sp.eval(&p).unwrap(), sp.eval(&q).unwrap());
            prop_assume!(fp > 0.0 && fq > 0.0);
            let m = [t * p[0] + (1.0 - t) * q[0], t * p[1] + (1.0 - t) * q[1]];
            let fm = sp.eval(&m).unwrap();
            prop_assert!(fm >= libm::pow(fp, t) * libm::pow(fq, 1.0 - t) - 1e-9);
        }

        #[test]
        fn decreasing_along_rays(a in -1.0f64..1.0, b in -1.0f64..1.0, s1 in 0.0f64..1.0, s2 in 0.0f64..1.0) {
            let s = RootSystem::from_label("G", 2).unwrap();
            let sp = rho_box_spline::<f64>(&s, 1).unwrap();
            let (lo, hi) = if s1 < s2 { (s1, s2) } else { (s2, s1) };
            let p = [a * 4.0, b * 4.0];
            let v_lo = sp.eval(&[p[0] * lo, p[1] * lo]).unwrap();
            let v_hi = sp.eval(&[p[0] * hi, p[1] * hi]).unwrap();
            prop_assert!(v_hi <= v_lo + 1e-9);
        }
    }
}
