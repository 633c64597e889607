//! Finite-dimensional representations: Weyl dimension, Freudenthal weight
//! multiplicities, character values, Brauer-Klimyk tensor products and the
//! contraction multiplicities of N-divisible weight spaces.
//!
//! Weights are Dynkin labels (`Vec<i64>`).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{AddAssign, Neg};

use hashbrown::HashMap;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::Q;
use crate::rootsys::RootSystem;
use crate::weyl::{self, FrameWeylGroup};

pub type Weight = Vec<i64>;
pub type WeightDiagram = HashMap<Weight, u64>;

fn check_dominant(lambda: &[i64], rank: usize) -> Result<()> {
    if lambda.len() != rank {
        return Err(Error::Dimension { expected: rank, got: lambda.len() });
    }
    if lambda.iter().any(|&x| x < 0) {
        return Err(Error::NotDominantIntegral);
    }
    Ok(())
}

/// Integer-scaled inner product on Dynkin labels.
#[derive(Clone, Debug)]
pub struct ScaledForm {
    matrix: Vec<Vec<i64>>,
}

impl ScaledForm {
    pub fn new(rs: &RootSystem) -> Self {
        let r = rs.rank();
        let inv = rs.inverse_cartan();
        let g = rs.gram();
        let mut q = vec![vec![Q::zero(); r]; r];
        for j in 0..r {
            for l in 0..r {
                let mut s = Q::zero();
                for k in 0..r {
                    for m in 0..r {
                        s += inv[k][j] * g[k][m] * inv[m][l];
                    }
                }
                q[j][l] = s;
            }
        }
        let den = q.iter().flatten().fold(1i64, |acc, x| acc.lcm(x.denom()));
        let matrix = q
            .iter()
            .map(|row| row.iter().map(|x| (x * Q::from_integer(den)).to_integer()).collect())
            .collect();
        ScaledForm { matrix }
    }

    pub fn eval(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for (i, ai) in a.iter().enumerate() {
            if *ai == 0 {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                s += ai * self.matrix[i][j] * bj;
            }
        }
        s
    }
}

/// Weyl dimension formula `prod (lambda+rho, alpha^vee)/(rho, alpha^vee)`.
pub fn dim_irrep(rs: &RootSystem, lambda: &[i64]) -> Result<u128> {
    check_dominant(lambda, rs.rank())?;
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    let shifted: Vec<i64> = lambda.iter().map(|x| x + 1).collect();
    let rho = vec![1i64; rs.rank()];
    for k in 0..rs.num_positive_roots() {
        num *= rs.coroot_pairing(&shifted, k);
        den *= rs.coroot_pairing(&rho, k);
    }
    let (q, r) = num.div_rem(&den);
    if !r.is_zero() {
        return Err(Error::Consistency("Weyl dimension not integral".into()));
    }
    q.to_u128().ok_or_else(|| Error::InvalidArgument("dimension overflows u128".into()))
}

/// `lambda - mu` in simple-root coordinates, if integral.
fn root_coords_int(rs: &RootSystem, diff: &[i64]) -> Option<Vec<i64>> {
    let q: Vec<Q> = diff.iter().map(|&x| Q::from_integer(x)).collect();
    rs.dynkin_to_root(&q)
        .into_iter()
        .map(|c| if c.is_integer() { Some(c.to_integer()) } else { None })
        .collect()
}

/// Multiplicities of the dominant weights of `L_lambda` by Freudenthal's
/// recursion.
pub fn dominant_multiplicities(rs: &RootSystem, lambda: &[i64]) -> Result<BTreeMap<Weight, u64>> {
    check_dominant(lambda, rs.rank())?;
    if rs.rank() == 1 {
        // L_n has weights n, n - 2, ..., -n, each once
        return Ok((0..=lambda[0] / 2).map(|k| (vec![lambda[0] - 2 * k], 1)).collect());
    }
    let form = ScaledForm::new(rs);
    let roots = rs.positive_roots_dynkin();
    // Dominant weights below lambda, by successive subtraction of positive roots.
    let mut dom: HashMap<Weight, i64> = HashMap::new();
    let mut stack = vec![lambda.to_vec()];
    dom.insert(lambda.to_vec(), 0);
    while let Some(mu) = stack.pop() {
        for a in roots {
            let nu: Weight = mu.iter().zip(a).map(|(x, y)| x - y).collect();
            if nu.iter().all(|&x| x >= 0) && !dom.contains_key(&nu) {
                let h: i64 = root_coords_int(rs, &lambda.iter().zip(&nu).map(|(x, y)| x - y).collect::<Vec<_>>())
                    .expect("root lattice")
                    .iter()
                    .sum();
                dom.insert(nu.clone(), h);
                stack.push(nu);
            }
        }
    }
    let mut order: Vec<(Weight, i64)> = dom.into_iter().collect();
    order.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    let lr: Weight = lambda.iter().map(|x| x + 1).collect();
    let top = form.eval(&lr, &lr);
    let mut mult: HashMap<Weight, i128> = HashMap::new();
    for (mu, _) in &order {
        if mu.as_slice() == lambda {
            mult.insert(mu.clone(), 1);
            continue;
        }
        let mut acc: i128 = 0;
        let mut nu = mu.clone();
        let mut d = mu.clone();
        for a in roots {
            nu.copy_from_slice(mu);
            loop {
                nu.iter_mut().zip(a).for_each(|(x, y)| *x += y);
                d.copy_from_slice(&nu);
                weyl::dominant_with_sign(rs, &mut d);
                match mult.get(d.as_slice()) {
                    Some(&m) => acc += m * form.eval(&nu, a) as i128,
                    None => break,
                }
            }
        }
        let mr: Weight = mu.iter().map(|x| x + 1).collect();
        let gap = (top - form.eval(&mr, &mr)) as i128;
        let num = 2 * acc;
        if gap <= 0 || num % gap != 0 {
            return Err(Error::Consistency(format!("Freudenthal recursion failed at {mu:?}")));
        }
        mult.insert(mu.clone(), num / gap);
    }
    Ok(mult.into_iter().filter(|(_, m)| *m > 0).map(|(w, m)| (w, m as u64)).collect())
}

/// Full weight diagram of `L_lambda`.
pub fn weight_diagram(rs: &RootSystem, lambda: &[i64]) -> Result<WeightDiagram> {
    let dom = dominant_multiplicities(rs, lambda)?;
    let mut out = HashMap::new();
    for (mu, m) in dom {
        for w in weyl::dominant_orbit(rs, &mu) {
            out.insert(w, m);
        }
    }
    Ok(out)
}

/// `dim L_lambda[mu]`.
pub fn weight_multiplicity(rs: &RootSystem, lambda: &[i64], mu: &[i64]) -> Result<u64> {
    check_dominant(lambda, rs.rank())?;
    let diff: Vec<i64> = lambda.iter().zip(mu).map(|(a, b)| a - b).collect();
    if root_coords_int(rs, &diff).is_none() {
        return Ok(0);
    }
    let mut d = mu.to_vec();
    weyl::dominant_with_sign(rs, &mut d);
    Ok(dominant_multiplicities(rs, lambda)?.get(&d).copied().unwrap_or(0))
}

/// Pointwise product of weight diagrams (tensor product of modules).
pub fn convolve(a: &WeightDiagram, b: &WeightDiagram) -> WeightDiagram {
    let mut out: WeightDiagram = HashMap::new();
    for (u, m) in a {
        for (v, n) in b {
            let w: Weight = u.iter().zip(v).map(|(x, y)| x + y).collect();
            *out.entry(w).or_insert(0) += m * n;
        }
    }
    out
}

/// Weight diagram of a tensor product of irreducibles.
pub fn tensor_diagram(rs: &RootSystem, factors: &[Weight]) -> Result<WeightDiagram> {
    let mut acc: WeightDiagram = HashMap::new();
    acc.insert(vec![0; rs.rank()], 1);
    for f in factors {
        acc = convolve(&acc, &weight_diagram(rs, f)?);
    }
    Ok(acc)
}

/// Where `mu + rho` lands after reflecting into the dominant chamber:
/// `None` when it is singular, otherwise the dominant weight `w(mu+rho)-rho`
/// and `det(w)`.
pub fn dot_action_dominant(rs: &RootSystem, mu: &[i64]) -> Option<(Weight, i64)> {
    let mut v: Weight = mu.iter().map(|x| x + 1).collect();
    let sign = weyl::dominant_with_sign(rs, &mut v);
    if v.iter().any(|&x| x == 0) {
        return None;
    }
    Some((v.iter().map(|x| x - 1).collect(), sign))
}

/// Converts a W-invariant sum of monomials `sum f(mu) e^mu` into irreducible
/// characters: the coefficient of `chi_lambda` is
/// `sum_mu f(mu) det(w)` over the `mu` with `w(mu+rho)-rho = lambda`.
pub fn monomials_to_characters<T>(rs: &RootSystem, f: &HashMap<Weight, T>) -> BTreeMap<Weight, T>
where
    T: Clone + Zero + AddAssign + Neg<Output = T>,
{
    let mut out: BTreeMap<Weight, T> = BTreeMap::new();
    for (mu, c) in f {
        if let Some((lam, sign)) = dot_action_dominant(rs, mu) {
            let e = out.entry(lam).or_insert_with(T::zero);
            if sign > 0 {
                *e += c.clone();
            } else {
                *e += -c.clone();
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Multiplicity of `L_nu` in `L_lambda (x) L_mu` (Brauer-Klimyk).
pub fn tensor_multiplicity(rs: &RootSystem, lambda: &[i64], mu: &[i64], nu: &[i64]) -> Result<u64> {
    check_dominant(lambda, rs.rank())?;
    check_dominant(mu, rs.rank())?;
    check_dominant(nu, rs.rank())?;
    let diag = weight_diagram(rs, mu)?;
    brauer_klimyk(rs, lambda, &diag, nu)
}

fn brauer_klimyk(rs: &RootSystem, lambda: &[i64], diag: &WeightDiagram, nu: &[i64]) -> Result<u64> {
    let mut acc: i128 = 0;
    for (kappa, m) in diag {
        let v: Weight = lambda.iter().zip(kappa).map(|(a, b)| a + b).collect();
        if let Some((lam, sign)) = dot_action_dominant(rs, &v) {
            if lam.as_slice() == nu {
                acc += sign as i128 * *m as i128;
            }
        }
    }
    if acc < 0 {
        return Err(Error::Consistency("negative tensor multiplicity".into()));
    }
    Ok(acc as u64)
}

/// Full decomposition of `L_lambda (x) L_mu`.
pub fn tensor_decompose(rs: &RootSystem, lambda: &[i64], mu: &[i64]) -> Result<BTreeMap<Weight, u64>> {
    check_dominant(lambda, rs.rank())?;
    let diag = weight_diagram(rs, mu)?;
    let shifted: HashMap<Weight, i64> = diag
        .iter()
        .map(|(k, &m)| (lambda.iter().zip(k).map(|(a, b)| a + b).collect(), m as i64))
        .collect();
    Ok(monomials_to_characters(rs, &shifted).into_iter().map(|(k, v)| (k, v as u64)).collect())
}

/// Multiplicity of `chi_lambda` in the contracted character
/// `chi_{V,N} = sum_mu dim V[N mu] e^mu`, where `V` is the tensor product of
/// the irreducibles in `factors`. Computed by extracting the N-divisible
/// weight spaces and decomposing, and independently as the multiplicity of
/// `L_{N lambda + (N-1) rho}` in `V (x) L_{(N-1) rho}`; the two must agree.
pub fn contraction_multiplicity(rs: &RootSystem, factors: &[Weight], n: i64, lambda: &[i64]) -> Result<u64> {
    if n < 1 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    check_dominant(lambda, rs.rank())?;
    let diag = tensor_diagram(rs, factors)?;
    let (a, b) = contraction_routes(rs, &diag, n, lambda);
    if a != b {
        return Err(Error::Consistency(format!(
            "contraction routes disagree for lambda={lambda:?}, N={n}: {a} vs {b}"
        )));
    }
    if a < 0 {
        return Err(Error::Consistency("negative contraction multiplicity".into()));
    }
    Ok(a as u64)
}

/// Both contraction routes on a precomputed weight diagram of `V`.
pub fn contraction_routes(rs: &RootSystem, diag: &WeightDiagram, n: i64, lambda: &[i64]) -> (i64, i64) {
    let r = rs.rank();
    let mut route_a = 0i64;
    for (w, m) in diag {
        if w.iter().all(|x| x % n == 0) {
            let mu: Weight = w.iter().map(|x| x / n).collect();
            if let Some((lam, sign)) = dot_action_dominant(rs, &mu) {
                if lam.as_slice() == lambda {
                    route_a += sign * *m as i64;
                }
            }
        }
    }
    let base: Weight = vec![n - 1; r];
    let target: Weight = lambda.iter().map(|x| n * x + n - 1).collect();
    let mut route_b = 0i64;
    for (kappa, m) in diag {
        let v: Weight = base.iter().zip(kappa).map(|(a, b)| a + b).collect();
        if let Some((lam, sign)) = dot_action_dominant(rs, &v) {
            if lam == target {
                route_b += sign * *m as i64;
            }
        }
    }
    (route_a, route_b)
}

/// Both contraction routes for every `lambda` at once, as signed
/// multiplicity tables with zero entries dropped.
pub fn contraction_tables(rs: &RootSystem, diag: &WeightDiagram, n: i64) -> (BTreeMap<Weight, i64>, BTreeMap<Weight, i64>) {
    let r = rs.rank();
    let mut route_a: BTreeMap<Weight, i64> = BTreeMap::new();
    let mut route_b: BTreeMap<Weight, i64> = BTreeMap::new();
    for (w, m) in diag {
        if w.iter().all(|x| x % n == 0) {
            let mu: Weight = w.iter().map(|x| x / n).collect();
            if let Some((lam, sign)) = dot_action_dominant(rs, &mu) {
                *route_a.entry(lam).or_insert(0) += sign * *m as i64;
            }
        }
        let v: Weight = w.iter().map(|x| x + n - 1).collect();
        if let Some((lam, sign)) = dot_action_dominant(rs, &v) {
            // only highest weights N lambda + (N-1) rho are read off
            if lam.iter().all(|x| (x - (n - 1)) % n == 0) {
                let l: Weight = lam.iter().map(|x| (x - (n - 1)) / n).collect();
                *route_b.entry(l).or_insert(0) += sign * *m as i64;
            }
        }
    }
    route_a.retain(|_, v| *v != 0);
    route_b.retain(|_, v| *v != 0);
    debug_assert!(route_a.keys().chain(route_b.keys()).all(|l| l.len() == r));
    (route_a, route_b)
}

/// Kostant's partition function: number of ways to write `beta` (simple-root
/// coordinates) as a sum of positive roots.
pub struct KostantPartition<'a> {
    roots: &'a [Vec<i64>],
    memo: HashMap<(Vec<i64>, usize), u128>,
}

impl<'a> KostantPartition<'a> {
    pub fn new(rs: &'a RootSystem) -> Self {
        KostantPartition { roots: rs.positive_roots(), memo: HashMap::new() }
    }

    pub fn count(&mut self, beta: &[i64]) -> u128 {
        self.count_from(beta.to_vec(), 0)
    }

    fn count_from(&mut self, beta: Vec<i64>, start: usize) -> u128 {
        if beta.iter().any(|&x| x < 0) {
            return 0;
        }
        if beta.iter().all(|&x| x == 0) {
            return 1;
        }
        if start == self.roots.len() {
            return 0;
        }
        if let Some(&v) = self.memo.get(&(beta.clone(), start)) {
            return v;
        }
        let root = self.roots[start].clone();
        let mut total = 0;
        let mut cur = beta.clone();
        loop {
            total += self.count_from(cur.clone(), start + 1);
            cur.iter_mut().zip(&root).for_each(|(c, r)| *c -= r);
            if cur.iter().any(|&x| x < 0) {
                break;
            }
        }
        self.memo.insert((beta, start), total);
        total
    }
}

/// Kostant's alternating formula for `dim L_lambda[mu]`; exponential cost,
/// kept as an independent check of [`weight_multiplicity`].
pub fn kostant_multiplicity(rs: &RootSystem, lambda: &[i64], mu: &[i64]) -> Result<u64> {
    check_dominant(lambda, rs.rank())?;
    let elems = weyl::enumerate_elements(rs, 5000)?;
    let mut kp = KostantPartition::new(rs);
    let lr: Weight = lambda.iter().map(|x| x + 1).collect();
    let mr: Weight = mu.iter().map(|x| x + 1).collect();
    let mut acc: i128 = 0;
    for w in &elems {
        let img = w.apply(rs, &lr);
        let diff: Weight = img.iter().zip(&mr).map(|(a, b)| a - b).collect();
        if let Some(beta) = root_coords_int(rs, &diff) {
            acc += w.sign() as i128 * kp.count(&beta) as i128;
        }
    }
    Ok(acc as u64)
}

/// Character evaluation on the torus, with the Weyl group materialized.
pub struct CharacterEvaluator<'a> {
    rs: &'a RootSystem,
    group: FrameWeylGroup,
}

impl<'a> CharacterEvaluator<'a> {
    pub fn new(rs: &'a RootSystem) -> Result<Self> {
        Ok(CharacterEvaluator { rs, group: FrameWeylGroup::new(rs, 100_000)? })
    }

    fn alternant(&self, v: &[f64], x: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::zero();
        for k in 0..self.group.order() {
            let wv = self.group.apply(k, v);
            let phase: Complex64 = wv.iter().zip(x).map(|(a, b)| b * *a).sum();
            acc += (phase * Complex64::i()).exp() * self.group.signs[k];
        }
        acc
    }

    /// `chi_lambda(e^{ix})` for `x` a (complex) frame vector.
    pub fn eval(&self, lambda: &[i64], x: &[Complex64]) -> Result<Complex64> {
        check_dominant(lambda, self.rs.rank())?;
        let rho = self.rs.rho_frame();
        let lr: Vec<f64> = lambda.iter().map(|&v| v as f64 + 1.0).collect();
        let num = self.alternant(&self.rs.frame_from_dynkin(&lr), x);
        let den = self.alternant(&rho, x);
        if den.norm() > 1e-8 * self.group.order() as f64 {
            return Ok(num / den);
        }
        self.eval_by_diagram(lambda, x)
    }

    /// Same value through the weight diagram (no division).
    pub fn eval_by_diagram(&self, lambda: &[i64], x: &[Complex64]) -> Result<Complex64> {
        let diag = weight_diagram(self.rs, lambda)?;
        Ok(eval_diagram(self.rs, &diag, x))
    }
}

/// `sum_mu m_mu e^{i (mu, x)}`.
pub fn eval_diagram(rs: &RootSystem, diag: &WeightDiagram, x: &[Complex64]) -> Complex64 {
    let mut terms: Vec<(&Weight, &u64)> = diag.iter().collect();
    terms.sort_unstable();
    terms
        .into_iter()
        .map(|(mu, &m)| {
            let f: Vec<f64> = mu.iter().map(|&v| v as f64).collect();
            let v = rs.frame_from_dynkin(&f);
            let phase: Complex64 = v.iter().zip(x).map(|(a, b)| b * *a).sum();
            (phase * Complex64::i()).exp() * m as f64
        })
        .sum()
}

/// Rational helper used by the exact Mittag-Leffler decomposition.
pub fn dims_weighted_sum(rs: &RootSystem, coeffs: &BTreeMap<Weight, BigRational>) -> Result<BigRational> {
    let mut s = BigRational::zero();
    for (lam, c) in coeffs {
        s += c * BigRational::from_integer(BigInt::from(dim_irrep(rs, lam)?));
    }
    Ok(s)
}
