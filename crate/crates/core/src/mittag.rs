//! Twisted coweight-lattice sums `F_{k,xi}(x) = sum_a xi(a) f(x+a)^k`,
//! `f(x) = X(rho, 2 pi x)`, and their exact expansion into irreducible
//! characters.
//!
//! Poisson summation turns `F` into `sum_nu g(nu) e^{2 pi i (nu, x)}`, with `g`
//! the box spline `(DH_rho)^{*k}` measured against the root lattice and `nu`
//! running over the coset `-xi + Q` (translating `x` by `b` in `P^vee`
//! multiplies `F` by `xi(b)^{-1}`). Character coefficients then follow from
//! `C(lambda) = sum_w det(w) g(lambda + rho - w rho)`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::Complex64 as C;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::dhspline::{self, q_to_big};
use crate::linalg::{self, q_to_f64, Q};
use crate::repr::{self, CharacterEvaluator, Weight};
use crate::weyl;
use crate::{special, Error, Result, RootSystem};

/// A coset of `Q` in `P`, i.e. a character of the center.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralCharacter {
    /// Position in [`central_characters`].
    pub index: usize,
    /// Representative, Dynkin labels.
    pub rep: Weight,
}

impl CentralCharacter {
    /// `(xi, a)` modulo 1 for `a` given by fundamental-coweight coordinates.
    pub fn pairing(&self, rs: &RootSystem, a: &[i64]) -> Q {
        let root = rs.dynkin_to_root(&to_q(&self.rep));
        let s = root.iter().zip(a).fold(Q::zero(), |s, (c, &n)| s + c * Q::from_integer(n));
        s - s.floor()
    }
}

fn to_q(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| Q::from_integer(x)).collect()
}

fn frac(q: &Q) -> Q {
    q - q.floor()
}

/// Coset key: fractional parts of the simple-root coordinates.
fn coset_key(rs: &RootSystem, lambda: &[Q]) -> Vec<Q> {
    rs.dynkin_to_root(lambda).iter().map(frac).collect()
}

/// All cosets of `P/Q`, index 0 the trivial one, then in order of first
/// appearance among `0, omega_1, ..., omega_r, omega_1 + omega_1, ...`.
pub fn central_characters(rs: &RootSystem) -> Vec<CentralCharacter> {
    let r = rs.rank();
    let order = dhspline::index_of_root_lattice(rs) as usize;
    let mut reps: Vec<Weight> = vec![vec![0; r]];
    let mut keys = vec![coset_key(rs, &to_q(&reps[0]))];
    let mut frontier = reps.clone();
    while reps.len() < order {
        let mut next = Vec::new();
        for f in &frontier {
            for j in 0..r {
                let mut w = f.clone();
                w[j] += 1;
                let key = coset_key(rs, &to_q(&w));
                if !keys.contains(&key) {
                    keys.push(key);
                    reps.push(w.clone());
                }
                next.push(w);
            }
        }
        frontier = next;
    }
    reps.into_iter().enumerate().map(|(index, rep)| CentralCharacter { index, rep }).collect()
}

pub fn central_character(rs: &RootSystem, index: usize) -> Result<CentralCharacter> {
    let all = central_characters(rs);
    let n = all.len();
    all.into_iter()
        .nth(index)
        .ok_or_else(|| Error::InvalidArgument(format!("central character index {index} out of range (|P/Q| = {n})")))
}

/// `xi` as a class in `P/Q` given by any weight.
fn class_of(rs: &RootSystem, lambda: &[i64]) -> CentralCharacter {
    let key = coset_key(rs, &to_q(lambda));
    central_characters(rs)
        .into_iter()
        .find(|c| coset_key(rs, &to_q(&c.rep)) == key)
        .expect("every weight lies in some coset")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Beta {
    /// `m_i in (0, 1]`, `m_i = (xi, omega_i^vee) mod 1`.
    pub m: Vec<Q>,
    /// `beta = sum m_i alpha_i`, Dynkin labels.
    pub dynkin: Vec<Q>,
}

/// `beta_xi` for a class given by a representative weight.
pub fn beta_xi(rs: &RootSystem, xi: &[i64]) -> Beta {
    let m: Vec<Q> = rs
        .dynkin_to_root(&to_q(xi))
        .iter()
        .map(|c| {
            let f = frac(c);
            if f.is_zero() { Q::one() } else { f }
        })
        .collect();
    let dynkin = rs.root_to_dynkin(&m);
    Beta { m, dynkin }
}

/// Class of `k rho - lambda` for the characters `lambda` occurring in
/// `F_{k,xi}`: `lambda = -xi mod Q`, so this is `k rho + xi`.
pub fn support_class(rs: &RootSystem, k: u32, xi: &CentralCharacter) -> CentralCharacter {
    let w: Weight = xi.rep.iter().map(|&v| v + k as i64).collect();
    class_of(rs, &w)
}

fn in_class_neg(rs: &RootSystem, lambda: &[i64], xi: &CentralCharacter) -> bool {
    let s: Vec<Q> = lambda.iter().zip(&xi.rep).map(|(&a, &b)| Q::from_integer(a + b)).collect();
    rs.dynkin_to_root(&s).iter().all(|c| c.is_integer())
}

fn dominant_box(rs: &RootSystem, k: u32) -> Vec<Weight> {
    let r = rs.rank();
    // labels of points of conv(W k rho) are bounded by <k rho, theta^vee>
    let bound: i64 = k as i64 * rs.positive_coroots().iter().map(|c| c.iter().sum::<i64>()).max().unwrap_or(1);
    let mut out = Vec::new();
    let mut idx = vec![0i64; r];
    loop {
        out.push(idx.clone());
        let mut i = 0;
        loop {
            if i == r {
                return out;
            }
            idx[i] += 1;
            if idx[i] <= bound {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// Dominant `lambda = -xi mod Q` strictly inside `conv(W k rho)`.
fn support_interior(rs: &RootSystem, k: u32, xi: &CentralCharacter) -> Vec<Weight> {
    let rho_root = rs.rho_root();
    let kq = Q::from_integer(k as i64);
    dominant_box(rs, k)
        .into_iter()
        .filter(|l| in_class_neg(rs, l, xi))
        .filter(|l| rs.dynkin_to_root(&to_q(l)).iter().zip(&rho_root).all(|(c, p)| *c < kq * p))
        .collect()
}

/// Dominant `lambda = -xi mod Q` with `lambda <= k rho - beta` in the
/// dominance order, `beta` taken for the class of `k rho - lambda`.
fn support_dominance(rs: &RootSystem, k: u32, xi: &CentralCharacter) -> Vec<Weight> {
    let cls = support_class(rs, k, xi);
    let beta = beta_xi(rs, &cls.rep);
    let top: Vec<Q> = (0..rs.rank()).map(|j| Q::from_integer(k as i64) - beta.dynkin[j]).collect();
    dominant_box(rs, k)
        .into_iter()
        .filter(|l| in_class_neg(rs, l, xi))
        .filter(|l| {
            let d: Vec<Q> = top.iter().zip(l).map(|(t, &v)| t - Q::from_integer(v)).collect();
            rs.dynkin_to_root(&d).iter().all(|c| c.is_integer() && *c >= Q::zero())
        })
        .collect()
}

/// Characters occurring in `F_{k,xi}`, by the interior criterion, checked
/// against the dominance criterion.
pub fn support_set(rs: &RootSystem, k: u32, xi: &CentralCharacter) -> Result<Vec<Weight>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let a = support_interior(rs, k, xi);
    let b = support_dominance(rs, k, xi);
    if a != b {
        return Err(Error::Consistency(format!("support criteria disagree: {a:?} vs {b:?}")));
    }
    Ok(a)
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub k: u32,
    pub xi: CentralCharacter,
    /// `C_{k,xi}(lambda)`, keyed by Dynkin labels.
    pub coefficients: BTreeMap<Weight, BigRational>,
    /// `sum C dim L`, which must be 1.
    pub mass: BigRational,
}

fn is_sl2(rs: &RootSystem) -> bool {
    rs.rank() == 1
}

/// Exact expansion of `F_{k,xi}` into irreducible characters.
pub fn decompose(rs: &RootSystem, k: u32, xi: &CentralCharacter) -> Result<Decomposition> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    if is_sl2(rs) && k == 1 {
        // principal values: F = 1 and F = cos(pi x) = chi_{omega_1} / 2
        let (lam, c) = if xi.index == 0 { (vec![0], BigRational::one()) } else { (vec![1], half) };
        let coefficients: BTreeMap<Weight, BigRational> = [(lam, c)].into_iter().collect();
        let mass = repr::dims_weighted_sum(rs, &coefficients)?;
        return Ok(Decomposition { k, xi: xi.clone(), coefficients, mass });
    }
    let support = support_set(rs, k, xi)?;
    let coefficients = character_coefficients(rs, k, xi, &support)?;
    for (lam, c) in &coefficients {
        if !c.is_positive() {
            return Err(Error::Consistency(format!("nonpositive coefficient {c} at {lam:?}")));
        }
    }
    let mass = repr::dims_weighted_sum(rs, &coefficients)?;
    if !mass.is_one() {
        return Err(Error::Consistency(format!("sum C dim = {mass}, expected 1")));
    }
    Ok(Decomposition { k, xi: xi.clone(), coefficients, mass })
}

/// `C(lambda) = sum_w det(w) g(lambda + rho - w rho)` for the given weights,
/// which must all lie in `-xi + Q`.
pub fn character_coefficients(rs: &RootSystem, k: u32, xi: &CentralCharacter, weights: &[Weight]) -> Result<BTreeMap<Weight, BigRational>> {
    let r = rs.rank();
    let spline = dhspline::rho_box_spline::<BigRational>(rs, k)?;
    let neg: Vec<Q> = xi.rep.iter().map(|&v| Q::from_integer(-v)).collect();
    let base_q = rs.dynkin_to_root(&neg);
    let base: Vec<BigRational> = base_q.iter().map(q_to_big).collect();
    let mut tr = spline.translates(&base)?;
    let group = weyl::enumerate_elements(rs, 100_000)?;
    let rho = vec![1i64; r];
    let shifts: Vec<(Weight, i64)> = group
        .iter()
        .map(|w| {
            let wr = w.apply(rs, &rho);
            (rho.iter().zip(&wr).map(|(a, b)| a - b).collect(), w.sign())
        })
        .collect();
    let mut out = BTreeMap::new();
    for lam in weights {
        if !in_class_neg(rs, lam, xi) {
            return Err(Error::InvalidArgument(format!("{lam:?} is not in the coset of -xi")));
        }
        let mut c = BigRational::zero();
        for (s, sign) in &shifts {
            let p: Vec<Q> = lam.iter().zip(s).map(|(&a, &b)| Q::from_integer(a + b)).collect();
            let off: Vec<i64> = rs
                .dynkin_to_root(&p)
                .iter()
                .zip(&base_q)
                .map(|(a, b)| {
                    let d = a - b;
                    debug_assert!(d.is_integer());
                    d.to_integer()
                })
                .collect();
            let v = tr.eval_at(&off);
            if *sign > 0 {
                c += v;
            } else {
                c -= v;
            }
        }
        out.insert(lam.clone(), c);
    }
    Ok(out)
}

/// Monomial coefficient `g(nu)` of `F_{k,xi}` (root-lattice density), `nu`
/// in Dynkin labels.
pub fn monomial_coefficient(rs: &RootSystem, k: u32, nu: &[i64]) -> Result<BigRational> {
    dhspline::dh_rho_at_weight(rs, k, &to_q(nu))
}

/// `g(nu)` from `N^r dim (L_{N rho}^{(x) k})[N nu] / dim^k`, extrapolated in `1/N`.
pub fn monomial_coefficient_finite_n(rs: &RootSystem, k: u32, nu: &[i64], ns: &[u64]) -> Result<(f64, f64)> {
    let r = rs.rank();
    let mut hs = Vec::new();
    let mut vs = Vec::new();
    for &n in ns {
        let top: Weight = vec![n as i64; r];
        let single = repr::weight_diagram(rs, &top)?;
        let mut diag = single.clone();
        for _ in 1..k {
            diag = repr::convolve(&diag, &single);
        }
        let target: Weight = nu.iter().map(|&v| v * n as i64).collect();
        let mult = diag.get(&target).copied().unwrap_or(0) as f64;
        let dim = libm::pow(repr::dim_irrep(rs, &top)? as f64, k as f64);
        hs.push(1.0 / n as f64);
        vs.push(libm::pow(n as f64, r as f64) * mult / dim);
    }
    special::neville_zero(&hs, &vs)
}

/// `f(y)^k` with `f(y) = prod sin(pi (alpha, y)) / (pi (alpha, y))`, `y` frame.
fn f_pow(roots: &[Vec<f64>], y: &[f64], k: u32) -> f64 {
    let mut p = 1.0;
    for a in roots {
        let t = core::f64::consts::PI * linalg::dot(a, y);
        if t != 0.0 {
            p *= libm::sin(t) / t;
        }
    }
    libm::pow(p, k as f64)
}

/// Product of `min(1, 1/(pi |(alpha, y)|))^k`.
fn f_majorant(roots: &[Vec<f64>], y: &[f64], k: u32) -> f64 {
    let mut p = 1.0;
    for a in roots {
        let t = core::f64::consts::PI * linalg::dot(a, y).abs();
        if t > 1.0 {
            p /= t;
        }
    }
    libm::pow(p, k as f64)
}

#[derive(Clone, Copy, Debug)]
pub struct LatticeSum {
    pub value: C,
    /// Estimated size of the omitted terms.
    pub tail: f64,
    pub terms: usize,
}

fn for_box<F: FnMut(&[i64])>(r: usize, lo: i64, hi: i64, skip_inner: Option<i64>, mut f: F) {
    let mut idx = vec![lo; r];
    loop {
        let inner = skip_inner.map_or(false, |s| idx.iter().all(|v| v.abs() <= s));
        if !inner {
            f(&idx);
        }
        let mut i = 0;
        loop {
            if i == r {
                return;
            }
            idx[i] += 1;
            if idx[i] <= hi {
                break;
            }
            idx[i] = lo;
            i += 1;
        }
    }
}

/// `sum xi(a) f(x + a)^k` over `a = sum n_j omega_j^vee` with `|n_j| <= radius`,
/// `x` in frame coordinates. The tail estimate is four times the majorant
/// summed over the next dyadic shell `radius < max |n_j| <= 2 radius` (shell
/// sums decay at least like `1/radius`, which alone gives a factor 2); for `SL2` with `k = 1` the shell is
/// summed over symmetric pairs, which is the principal value.
pub fn lattice_sum_eval(rs: &RootSystem, k: u32, xi: &CentralCharacter, x: &[f64], radius: i64) -> Result<LatticeSum> {
    let r = rs.rank();
    if x.len() != r {
        return Err(Error::Dimension { expected: r, got: x.len() });
    }
    if k == 0 || radius < 1 {
        return Err(Error::InvalidArgument("need k >= 1 and radius >= 1".into()));
    }
    let roots = rs.roots_frame();
    let cow: Vec<Vec<f64>> = (0..r).map(|j| rs.fundamental_coweight_frame(j)).collect();
    let xi_root: Vec<f64> = rs.dynkin_to_root(&to_q(&xi.rep)).iter().map(q_to_f64).collect();
    let point = |n: &[i64]| -> Vec<f64> {
        let mut y = x.to_vec();
        for (j, &nj) in n.iter().enumerate() {
            for t in 0..r {
                y[t] += nj as f64 * cow[j][t];
            }
        }
        y
    };
    let phase = |n: &[i64]| -> C {
        let s: f64 = n.iter().zip(&xi_root).map(|(&a, b)| a as f64 * b).sum();
        C::new(0.0, 2.0 * core::f64::consts::PI * s).exp()
    };
    let mut re = special::Compensated::default();
    let mut im = special::Compensated::default();
    let mut terms = 0;
    for_box(r, -radius, radius, None, |n| {
        let v = phase(n) * f_pow(roots, &point(n), k);
        re.add(v.re);
        im.add(v.im);
        terms += 1;
    });
    let principal = r == 1 && k == 1;
    let mut shell = 0.0;
    for_box(r, -2 * radius, 2 * radius, Some(radius), |n| {
        if principal {
            if n[0] > 0 {
                let m = [-n[0]];
                shell += (phase(n) * f_pow(roots, &point(n), k) + phase(&m) * f_pow(roots, &point(&m), k)).norm();
            }
        } else {
            shell += f_majorant(roots, &point(n), k);
        }
    });
    Ok(LatticeSum { value: C::new(re.value(), im.value()), tail: 4.0 * shell, terms })
}

/// `sum_lambda C(lambda) chi_lambda(e^{2 pi i x})`, `x` frame.
pub fn eval_decomposition(rs: &RootSystem, dec: &Decomposition, x: &[f64]) -> Result<C> {
    let ev = CharacterEvaluator::new(rs)?;
    let xc: Vec<C> = x.iter().map(|&v| C::new(2.0 * core::f64::consts::PI * v, 0.0)).collect();
    let mut s = C::zero();
    for (lam, c) in &dec.coefficients {
        let cf = num_traits::ToPrimitive::to_f64(c).unwrap_or(f64::NAN);
        s += ev.eval(lam, &xc)? * cf;
    }
    Ok(s)
}
