//! Root-system data for the finite crystallographic types, in the
//! normalization where the inner product on the Cartan dual is the one dual
//! to the Killing form: `(rho, rho) = dim G / 24` and the positive roots
//! satisfy `sum (alpha, alpha) = rank / 2`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, q_to_f64, Q};

/// Finite Cartan/Coxeter type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CartanType {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    E(usize),
    F4,
    G2,
    H3,
    H4,
    /// Dihedral group of order `2m`.
    I2(u32),
}

impl CartanType {
    /// Parses a family letter and rank. `I` takes the dihedral parameter
    /// as `rank` (so `I`, 8 means I2(8)).
    pub fn new(family: &str, rank: usize) -> Result<Self> {
        let bad = || Error::InvalidType { ty: family.to_string(), rank };
        let ty = match family.trim().to_ascii_uppercase().as_str() {
            "A" if rank >= 1 => CartanType::A(rank),
            "B" if rank >= 2 => CartanType::B(rank),
            "C" if rank >= 2 => CartanType::C(rank),
            "D" if rank >= 3 => CartanType::D(rank),
            "E" if (6..=8).contains(&rank) => CartanType::E(rank),
            "F" if rank == 4 => CartanType::F4,
            "G" if rank == 2 => CartanType::G2,
            "H" if rank == 3 => CartanType::H3,
            "H" if rank == 4 => CartanType::H4,
            "I" if rank >= 3 => CartanType::I2(rank as u32),
            _ => return Err(bad()),
        };
        Ok(ty)
    }

    pub fn rank(&self) -> usize {
        match *self {
            CartanType::A(n) | CartanType::B(n) | CartanType::C(n) | CartanType::D(n) | CartanType::E(n) => n,
            CartanType::F4 | CartanType::H4 => 4,
            CartanType::G2 | CartanType::I2(_) => 2,
            CartanType::H3 => 3,
        }
    }

    pub fn family(&self) -> char {
        match self {
            CartanType::A(_) => 'A',
            CartanType::B(_) => 'B',
            CartanType::C(_) => 'C',
            CartanType::D(_) => 'D',
            CartanType::E(_) => 'E',
            CartanType::F4 => 'F',
            CartanType::G2 => 'G',
            CartanType::H3 | CartanType::H4 => 'H',
            CartanType::I2(_) => 'I',
        }
    }

    pub fn is_crystallographic(&self) -> bool {
        match *self {
            CartanType::H3 | CartanType::H4 => false,
            // I2(3), I2(4), I2(6) are A2, B2, G2.
            CartanType::I2(m) => matches!(m, 3 | 4 | 6),
            _ => true,
        }
    }

    /// Order of the Weyl (Coxeter) group.
    pub fn weyl_order(&self) -> u64 {
        fn fact(n: u64) -> u64 {
            (1..=n).product()
        }
        match *self {
            CartanType::A(n) => fact(n as u64 + 1),
            CartanType::B(n) | CartanType::C(n) => (1u64 << n) * fact(n as u64),
            CartanType::D(n) => (1u64 << (n - 1)) * fact(n as u64),
            CartanType::E(6) => 51_840,
            CartanType::E(7) => 2_903_040,
            CartanType::E(_) => 696_729_600,
            CartanType::F4 => 1152,
            CartanType::G2 => 12,
            CartanType::H3 => 120,
            CartanType::H4 => 14_400,
            CartanType::I2(m) => 2 * m as u64,
        }
    }

    /// Cartan matrix `C[i][j] = <alpha_i^vee, alpha_j>` in Bourbaki numbering.
    pub fn cartan_matrix(&self) -> Result<Vec<Vec<i64>>> {
        let r = self.rank();
        let mut c = vec![vec![0i64; r]; r];
        for (i, row) in c.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |i: usize, j: usize, cij: i64, cji: i64| {
            c[i][j] = cij;
            c[j][i] = cji;
        };
        match *self {
            CartanType::A(n) => (0..n - 1).for_each(|i| link(i, i + 1, -1, -1)),
            CartanType::B(n) => {
                (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
                link(n - 2, n - 1, -1, -2);
            }
            CartanType::C(n) => {
                (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
                link(n - 2, n - 1, -2, -1);
            }
            CartanType::D(n) => {
                (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
                link(n - 3, n - 1, -1, -1);
            }
            CartanType::E(n) => {
                link(0, 2, -1, -1);
                link(1, 3, -1, -1);
                (2..n - 1).for_each(|i| link(i, i + 1, -1, -1));
            }
            CartanType::F4 => {
                link(0, 1, -1, -1);
                link(1, 2, -1, -2);
                link(2, 3, -1, -1);
            }
            CartanType::G2 => link(0, 1, -3, -1),
            CartanType::I2(3) => link(0, 1, -1, -1),
            CartanType::I2(4) => link(0, 1, -1, -2),
            CartanType::I2(6) => link(0, 1, -3, -1),
            _ => return Err(Error::NonCrystallographic(self.to_string())),
        }
        Ok(c)
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CartanType::I2(m) => write!(f, "I2({m})"),
            t => write!(f, "{}{}", t.family(), t.rank()),
        }
    }
}

/// Immutable root datum of a crystallographic simple Lie algebra.
///
/// Coordinates used throughout:
/// * roots: integer coefficients on the simple roots;
/// * weights: Dynkin labels `lambda_j = <lambda, alpha_j^vee>`;
/// * real vectors: an orthonormal frame of the Killing metric, in which
///   weights and coweights live in the same `R^r` and the natural pairing is
///   the dot product.
#[derive(Clone, Debug)]
pub struct RootSystem {
    ty: CartanType,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    half_norm: Vec<Q>,
    coxeter: u64,
    dual_coxeter: u64,
    gram: Vec<Vec<Q>>,
    inv_cartan: Vec<Vec<Q>>,
    pos_roots: Vec<Vec<i64>>,
    pos_roots_dyn: Vec<Vec<i64>>,
    pos_coroots: Vec<Vec<i64>>,
    frame: Vec<Vec<f64>>,
    roots_frame: Vec<Vec<f64>>,
    coroots_frame: Vec<Vec<f64>>,
}

impl RootSystem {
    pub fn build(ty: CartanType) -> Result<Self> {
        let cartan = ty.cartan_matrix()?;
        let rank = ty.rank();
        let half_norm = symmetrizer(&cartan)?;
        let pos_roots = positive_roots(&cartan);
        let highest = pos_roots.last().expect("nonempty root system");
        // h^vee = 1 + <rho, theta^vee>, theta long so its coroot has
        // coefficients c_i D_i.
        let dual = Q::one()
            + highest
                .iter()
                .zip(&half_norm)
                .map(|(&c, d)| d * Q::from_integer(c))
                .fold(Q::zero(), |a, b| a + b);
        if !dual.is_integer() {
            return Err(Error::Consistency(format!("non-integral dual Coxeter number for {ty}")));
        }
        let dual_coxeter = dual.to_integer() as u64;
        let coxeter = (2 * pos_roots.len() / rank) as u64;
        let two_hv = Q::from_integer(2 * dual_coxeter as i64);
        let gram: Vec<Vec<Q>> = (0..rank)
            .map(|i| (0..rank).map(|j| half_norm[i] * Q::from_integer(cartan[i][j]) / two_hv).collect())
            .collect();
        let cq: Vec<Vec<Q>> = cartan.iter().map(|r| r.iter().map(|&x| Q::from_integer(x)).collect()).collect();
        let inv_cartan = linalg::inverse_q(&cq).ok_or_else(|| Error::Consistency("singular Cartan matrix".into()))?;
        let pos_roots_dyn = pos_roots
            .iter()
            .map(|c| (0..rank).map(|j| (0..rank).map(|i| c[i] * cartan[j][i]).sum()).collect())
            .collect();
        let pos_coroots = pos_roots
            .iter()
            .map(|c| {
                let d_alpha = root_half_norm(c, &half_norm, &cartan);
                c.iter()
                    .zip(&half_norm)
                    .map(|(&ci, di)| {
                        let v = Q::from_integer(ci) * di / d_alpha;
                        debug_assert!(v.is_integer());
                        v.to_integer()
                    })
                    .collect()
            })
            .collect();
        let gf: Vec<Vec<f64>> = gram.iter().map(|r| r.iter().map(q_to_f64).collect()).collect();
        let frame = linalg::cholesky(&gf).ok_or_else(|| Error::Consistency("gram not positive definite".into()))?;
        let mut rs = RootSystem {
            ty,
            rank,
            cartan,
            half_norm,
            coxeter,
            dual_coxeter,
            gram,
            inv_cartan,
            pos_roots,
            pos_roots_dyn,
            pos_coroots,
            frame,
            roots_frame: Vec::new(),
            coroots_frame: Vec::new(),
        };
        rs.roots_frame = rs.pos_roots.iter().map(|c| rs.frame_from_root_int(c)).collect();
        rs.coroots_frame = rs
            .roots_frame
            .iter()
            .map(|a| linalg::scale(a, 2.0 / linalg::dot(a, a)))
            .collect();
        Ok(rs)
    }

    pub fn from_label(family: &str, rank: usize) -> Result<Self> {
        Self::build(CartanType::new(family, rank)?)
    }

    pub fn cartan_type(&self) -> CartanType {
        self.ty
    }

    pub fn label(&self) -> String {
        self.ty.to_string()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `dim G = r + 2 |R_+|`.
    pub fn dim(&self) -> usize {
        self.rank + 2 * self.pos_roots.len()
    }

    pub fn num_positive_roots(&self) -> usize {
        self.pos_roots.len()
    }

    pub fn coxeter_number(&self) -> u64 {
        self.coxeter
    }

    pub fn dual_coxeter_number(&self) -> u64 {
        self.dual_coxeter
    }

    pub fn weyl_order(&self) -> u64 {
        self.ty.weyl_order()
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// `(alpha_i, alpha_i)/2` with long roots of squared length 2.
    pub fn half_norms(&self) -> &[Q] {
        &self.half_norm
    }

    /// Killing-normalized gram matrix of the simple roots.
    pub fn gram(&self) -> &[Vec<Q>] {
        &self.gram
    }

    pub fn inverse_cartan(&self) -> &[Vec<Q>] {
        &self.inv_cartan
    }

    /// Positive roots in simple-root coordinates, sorted by height.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.pos_roots
    }

    /// Positive roots as Dynkin labels.
    pub fn positive_roots_dynkin(&self) -> &[Vec<i64>] {
        &self.pos_roots_dyn
    }

    /// Positive coroots in simple-coroot coordinates.
    pub fn positive_coroots(&self) -> &[Vec<i64>] {
        &self.pos_coroots
    }

    /// Positive roots in the orthonormal frame.
    pub fn roots_frame(&self) -> &[Vec<f64>] {
        &self.roots_frame
    }

    /// Positive coroots `2 alpha / |alpha|^2` in the orthonormal frame.
    pub fn coroots_frame(&self) -> &[Vec<f64>] {
        &self.coroots_frame
    }

    /// `<lambda, alpha^vee>` for a weight in Dynkin labels and the `k`-th
    /// positive coroot.
    pub fn coroot_pairing(&self, lambda: &[i64], k: usize) -> i64 {
        self.pos_coroots[k].iter().zip(lambda).map(|(a, b)| a * b).sum()
    }

    pub fn coroot_pairing_q(&self, lambda: &[Q], k: usize) -> Q {
        self.pos_coroots[k]
            .iter()
            .zip(lambda)
            .fold(Q::zero(), |acc, (&a, b)| acc + Q::from_integer(a) * b)
    }

    /// Converts Dynkin labels to simple-root coordinates.
    pub fn dynkin_to_root(&self, lambda: &[Q]) -> Vec<Q> {
        (0..self.rank)
            .map(|k| (0..self.rank).fold(Q::zero(), |acc, j| acc + self.inv_cartan[k][j] * lambda[j]))
            .collect()
    }

    /// Converts simple-root coordinates to Dynkin labels.
    pub fn root_to_dynkin(&self, c: &[Q]) -> Vec<Q> {
        (0..self.rank)
            .map(|j| (0..self.rank).fold(Q::zero(), |acc, i| acc + c[i] * Q::from_integer(self.cartan[j][i])))
            .collect()
    }

    /// Killing-dual inner product of two vectors in simple-root coordinates.
    pub fn inner_root(&self, a: &[Q], b: &[Q]) -> Q {
        let mut s = Q::zero();
        for i in 0..self.rank {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..self.rank {
                s += a[i] * self.gram[i][j] * b[j];
            }
        }
        s
    }

    /// Inner product of two weights in Dynkin labels.
    pub fn inner_dynkin(&self, a: &[Q], b: &[Q]) -> Q {
        self.inner_root(&self.dynkin_to_root(a), &self.dynkin_to_root(b))
    }

    /// `rho` in simple-root coordinates.
    pub fn rho_root(&self) -> Vec<Q> {
        let mut s = vec![Q::zero(); self.rank];
        for r in &self.pos_roots {
            for (acc, &c) in s.iter_mut().zip(r) {
                *acc += Q::new(c, 2);
            }
        }
        s
    }

    /// `(rho, rho)`; equals `dim G / 24`.
    pub fn rho_norm_sq(&self) -> Q {
        let rho = self.rho_root();
        self.inner_root(&rho, &rho)
    }

    /// `sum_{alpha > 0} (alpha, alpha)`; equals `rank / 2`.
    pub fn sum_positive_root_norms(&self) -> Q {
        self.pos_roots
            .iter()
            .map(|r| {
                let q: Vec<Q> = r.iter().map(|&x| Q::from_integer(x)).collect();
                self.inner_root(&q, &q)
            })
            .fold(Q::zero(), |a, b| a + b)
    }

    /// Fundamental weight `omega_j` in simple-root coordinates.
    pub fn fundamental_weight_root(&self, j: usize) -> Vec<Q> {
        (0..self.rank).map(|k| self.inv_cartan[k][j]).collect()
    }

    /// Fundamental coweight `omega_j^vee`, transported to the weight space by
    /// the Killing form, in simple-root coordinates.
    pub fn fundamental_coweight_root(&self, j: usize) -> Vec<Q> {
        let inv = linalg::inverse_q(&self.gram).expect("gram invertible");
        (0..self.rank).map(|k| inv[k][j]).collect()
    }

    /// Vector with integer simple-root coordinates in the orthonormal frame.
    pub fn frame_from_root_int(&self, c: &[i64]) -> Vec<f64> {
        let cf: Vec<f64> = c.iter().map(|&x| x as f64).collect();
        self.frame_from_root(&cf)
    }

    /// Vector with real simple-root coordinates in the orthonormal frame.
    pub fn frame_from_root(&self, c: &[f64]) -> Vec<f64> {
        let mut v = vec![0.0; self.rank];
        for (i, ci) in c.iter().enumerate() {
            for k in 0..self.rank {
                v[k] += ci * self.frame[i][k];
            }
        }
        v
    }

    /// Weight with real Dynkin labels in the orthonormal frame.
    pub fn frame_from_dynkin(&self, lambda: &[f64]) -> Vec<f64> {
        let c: Vec<f64> = (0..self.rank)
            .map(|k| (0..self.rank).map(|j| q_to_f64(&self.inv_cartan[k][j]) * lambda[j]).sum())
            .collect();
        self.frame_from_root(&c)
    }

    /// Dynkin labels of a frame vector.
    pub fn dynkin_from_frame(&self, v: &[f64]) -> Vec<f64> {
        (0..self.rank)
            .map(|j| {
                let a = self.frame_from_root_int(&unit(self.rank, j));
                2.0 * linalg::dot(v, &a) / linalg::dot(&a, &a)
            })
            .collect()
    }

    /// Coweight `x = sum x_j omega_j^vee` (so `<alpha_j, x> = x_j`) in the frame.
    pub fn frame_from_fundamental_coweight(&self, x: &[f64]) -> Vec<f64> {
        let a: Vec<Vec<f64>> = (0..self.rank).map(|i| self.frame[i].clone()).collect();
        linalg::solve(&a, x).expect("simple roots form a basis")
    }

    /// Fundamental-coweight coordinates `<alpha_j, x>` of a frame vector.
    pub fn fundamental_coweight_from_frame(&self, x: &[f64]) -> Vec<f64> {
        (0..self.rank).map(|i| linalg::dot(&self.frame[i], x)).collect()
    }

    /// Frame vectors of the simple roots.
    pub fn simple_roots_frame(&self) -> &[Vec<f64>] {
        &self.frame
    }

    /// Frame vector of the fundamental coweight `omega_j^vee`.
    pub fn fundamental_coweight_frame(&self, j: usize) -> Vec<f64> {
        self.frame_from_fundamental_coweight(&unit_f(self.rank, j))
    }

    /// Frame vector of the fundamental weight `omega_j`.
    pub fn fundamental_weight_frame(&self, j: usize) -> Vec<f64> {
        self.frame_from_dynkin(&unit_f(self.rank, j))
    }

    pub fn rho_frame(&self) -> Vec<f64> {
        self.frame_from_dynkin(&vec![1.0; self.rank])
    }

    /// Cartesian model for the classical types: simple roots as vectors of
    /// `R^n` (`R^{n+1}` for type A). The standard dot product is a multiple
    /// of the Killing form.
    pub fn cartesian_simple_roots(&self) -> Option<Vec<Vec<f64>>> {
        let e = |n: usize, i: usize| unit_f(n, i);
        let roots = match self.ty {
            CartanType::A(n) => (0..n).map(|i| linalg::sub(&e(n + 1, i), &e(n + 1, i + 1))).collect(),
            CartanType::B(n) => {
                let mut v: Vec<Vec<f64>> = (0..n - 1).map(|i| linalg::sub(&e(n, i), &e(n, i + 1))).collect();
                v.push(e(n, n - 1));
                v
            }
            CartanType::C(n) => {
                let mut v: Vec<Vec<f64>> = (0..n - 1).map(|i| linalg::sub(&e(n, i), &e(n, i + 1))).collect();
                v.push(linalg::scale(&e(n, n - 1), 2.0));
                v
            }
            CartanType::D(n) => {
                let mut v: Vec<Vec<f64>> = (0..n - 1).map(|i| linalg::sub(&e(n, i), &e(n, i + 1))).collect();
                v.push(linalg::add(&e(n, n - 2), &e(n, n - 1)));
                v
            }
            _ => return None,
        };
        Some(roots)
    }

    /// Maps a Cartesian weight to the frame (via its Dynkin labels).
    pub fn frame_from_cartesian_weight(&self, v: &[f64]) -> Option<Vec<f64>> {
        let simple = self.cartesian_simple_roots()?;
        let labels: Vec<f64> = simple
            .iter()
            .map(|a| 2.0 * linalg::dot(v, a) / linalg::dot(a, a))
            .collect();
        Some(self.frame_from_dynkin(&labels))
    }

    /// Maps a Cartesian coweight (pairing = dot product) to the frame.
    pub fn frame_from_cartesian_coweight(&self, x: &[f64]) -> Option<Vec<f64>> {
        let simple = self.cartesian_simple_roots()?;
        let pairings: Vec<f64> = simple.iter().map(|a| linalg::dot(a, x)).collect();
        Some(self.frame_from_fundamental_coweight(&pairings))
    }

    /// Inverse of [`Self::frame_from_cartesian_coweight`] (for types B, C, D
    /// where the Cartesian space has dimension `r`).
    pub fn cartesian_coweight_from_frame(&self, x: &[f64]) -> Option<Vec<f64>> {
        let simple = self.cartesian_simple_roots()?;
        if simple[0].len() != self.rank {
            return None;
        }
        let pairings = self.fundamental_coweight_from_frame(x);
        linalg::solve(&simple, &pairings)
    }

    /// `<alpha_i, v>` for all simple roots, for a frame vector `v` viewed as
    /// a coweight; nonnegative entries mean `v` is in the closed dominant chamber.
    pub fn simple_pairings_frame(&self, v: &[f64]) -> Vec<f64> {
        self.frame.iter().map(|a| linalg::dot(a, v)).collect()
    }

    /// Reflects a frame vector into the closed dominant chamber.
    pub fn dominant_frame(&self, v: &[f64]) -> Vec<f64> {
        let mut v = v.to_vec();
        for _ in 0..10_000 {
            let Some(i) = (0..self.rank).find(|&i| linalg::dot(&self.frame[i], &v) < -1e-15 * (1.0 + linalg::norm(&v)))
            else {
                break;
            };
            let a = &self.frame[i];
            let c = 2.0 * linalg::dot(a, &v) / linalg::dot(a, a);
            for k in 0..self.rank {
                v[k] -= c * a[k];
            }
        }
        v
    }
}

/// Symmetrizer `D_i` with `D_i C[i][j] = D_j C[j][i]`, normalized so the
/// longest simple roots have `D = 1`.
fn symmetrizer(c: &[Vec<i64>]) -> Result<Vec<Q>> {
    let r = c.len();
    let mut d: Vec<Option<Q>> = vec![None; r];
    d[0] = Some(Q::one());
    let mut stack = vec![0usize];
    while let Some(i) = stack.pop() {
        let di = d[i].unwrap();
        for j in 0..r {
            if i != j && c[i][j] != 0 && d[j].is_none() {
                d[j] = Some(di * Q::new(c[i][j], c[j][i]));
                stack.push(j);
            }
        }
    }
    let d: Vec<Q> = d
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Consistency("disconnected Dynkin diagram".into()))?;
    let max = d.iter().copied().fold(Q::zero(), |a, b| if b > a { b } else { a });
    Ok(d.into_iter().map(|x| x / max).collect())
}

fn root_half_norm(c: &[i64], d: &[Q], cartan: &[Vec<i64>]) -> Q {
    let mut s = Q::zero();
    for i in 0..c.len() {
        for j in 0..c.len() {
            s += Q::from_integer(c[i] * c[j] * cartan[i][j]) * d[i];
        }
    }
    s / Q::from_integer(2)
}

/// Positive roots by the root-string algorithm, ordered by height.
fn positive_roots(c: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let r = c.len();
    let mut roots: Vec<Vec<i64>> = (0..r).map(|i| unit(r, i)).collect();
    let mut set: hashbrown::HashSet<Vec<i64>> = roots.iter().cloned().collect();
    let mut level_start = 0;
    loop {
        let level_end = roots.len();
        let mut next = Vec::new();
        for idx in level_start..level_end {
            let beta = roots[idx].clone();
            for i in 0..r {
                // p = largest k with beta - k alpha_i a root.
                let mut p = 0;
                let mut probe = beta.clone();
                loop {
                    probe[i] -= 1;
                    if probe[i] >= 0 && set.contains(&probe) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let pairing: i64 = (0..r).map(|j| beta[j] * c[i][j]).sum();
                let q = p - pairing;
                if q > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if set.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort();
        level_start = level_end;
        roots.extend(next);
    }
    roots
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

pub(crate) fn unit_f(n: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[i] = 1.0;
    v
}



#[cfg(test)]
mod tests {
    use super::*;

    fn all_types() -> Vec<CartanType> {
        let mut v = Vec::new();
        for n in 1..=7 {
            v.push(CartanType::A(n));
        }
        for n in 2..=6 {
            v.push(CartanType::B(n));
            v.push(CartanType::C(n));
        }
        for n in 3..=7 {
            v.push(CartanType::D(n));
        }
        v.extend([CartanType::E(6), CartanType::E(7), CartanType::E(8), CartanType::F4, CartanType::G2]);
        v
    }

    #[test]
    fn strange_formula_and_killing_normalization() {
        for ty in all_types() {
            let rs = RootSystem::build(ty).unwrap();
            let d = rs.dim() as i64;
            assert_eq!(rs.rho_norm_sq(), Q::new(d, 24), "{ty}");
            assert_eq!(rs.sum_positive_root_norms(), Q::new(rs.rank() as i64, 2), "{ty}");
            assert_eq!(d as u64, rs.rank() as u64 * (rs.coxeter_number() + 1), "{ty}");
            // leading principal minors
            for k in 1..=rs.rank() {
                let m: Vec<Vec<Q>> = rs.gram()[..k].iter().map(|r| r[..k].to_vec()).collect();
                assert!(linalg::det_q(&m) > Q::zero());
            }
        }
    }

    #[test]
    fn known_invariants() {
        let a1 = RootSystem::from_label("A", 1).unwrap();
        assert_eq!((a1.dim(), a1.num_positive_roots(), a1.coxeter_number()), (3, 1, 2));
        assert_eq!(a1.rho_norm_sq(), Q::new(1, 8));
        let c2 = RootSystem::from_label("C", 2).unwrap();
        assert_eq!((c2.rank(), c2.num_positive_roots(), c2.dim(), c2.weyl_order()), (2, 4, 10, 8));
        let a4 = RootSystem::from_label("A", 4).unwrap();
        assert_eq!((a4.coxeter_number(), a4.dim()), (5, 24));
        let expect = [
            (CartanType::E(6), 36, 12, 12),
            (CartanType::E(7), 63, 18, 18),
            (CartanType::E(8), 120, 30, 30),
            (CartanType::F4, 24, 12, 9),
            (CartanType::G2, 6, 6, 4),
            (CartanType::B(3), 9, 6, 5),
            (CartanType::C(3), 9, 6, 4),
            (CartanType::D(5), 20, 8, 8),
        ];
        for (ty, np, h, hv) in expect {
            let rs = RootSystem::build(ty).unwrap();
            assert_eq!(rs.num_positive_roots(), np, "{ty}");
            assert_eq!(rs.coxeter_number(), h, "{ty}");
            assert_eq!(rs.dual_coxeter_number(), hv, "{ty}");
        }
    }

    #[test]
    fn coweights_dual_to_simple_roots() {
        for ty in all_types() {
            let rs = RootSystem::build(ty).unwrap();
            for j in 0..rs.rank() {
                let w = rs.fundamental_coweight_root(j);
                for i in 0..rs.rank() {
                    let a = unit(rs.rank(), i).into_iter().map(Q::from_integer).collect::<Vec<_>>();
                    let p = rs.inner_root(&a, &w);
                    assert_eq!(p, if i == j { Q::one() } else { Q::zero() });
                }
            }
        }
    }

    #[test]
    fn basis_round_trip_exact() {
        let rs = RootSystem::from_label("F", 4).unwrap();
        let lam = vec![Q::new(1, 2), Q::from_integer(3), Q::new(-2, 7), Q::one()];
        assert_eq!(rs.root_to_dynkin(&rs.dynkin_to_root(&lam)), lam);
    }

    #[test]
    fn invalid_types_rejected() {
        assert!(CartanType::new("E", 9).is_err());
        assert!(CartanType::new("X", 2).is_err());
        assert!(CartanType::new("B", 1).is_err());
        assert!(matches!(
            RootSystem::build(CartanType::H3),
            Err(Error::NonCrystallographic(_))
        ));
    }

    #[test]
    fn cartesian_model_c2() {
        let rs = RootSystem::from_label("C", 2).unwrap();
        let x = rs.frame_from_cartesian_coweight(&[0.3, -1.2]).unwrap();
        let back = rs.cartesian_coweight_from_frame(&x).unwrap();
        assert!((back[0] - 0.3).abs() < 1e-12 && (back[1] + 1.2).abs() < 1e-12);
        // pairing is the dot product
        let lam = rs.frame_from_cartesian_weight(&[0.7, 0.2]).unwrap();
        assert!((linalg::dot(&lam, &x) - (0.7 * 0.3 - 0.2 * 1.2)).abs() < 1e-12);
    }
}
