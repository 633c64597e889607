//! `mu(G)`: the least number of positive roots off a union of two
//! hyperplanes. The minimum is taken with one normal fixed to a fundamental
//! coweight `omega_i` and the other running over a full orbit `W omega_j`.
//!
//! Normals are stored through their pairings with the simple roots, so that
//! `(alpha, nu) = sum_k c_k(alpha) p_k(nu)` is an exact dot product: over
//! `Z` for crystallographic types and over `Z[phi]` for `H3`, `H4`.
//! Dihedral types use an integer model of root lines.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Display;
use core::hash::Hash;
use core::ops::{Add, Mul, Neg, Sub};

use hashbrown::HashSet;
use num_traits::Zero;

use crate::golden::Zphi;
use crate::rootsys::CartanType;
use crate::{Error, Result, RootSystem};

pub trait Exact: Copy + Eq + Hash + Zero + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self> + Display + From<i64> + Ord + Send + Sync {
    fn sgn(&self) -> i8;
}

impl Exact for i64 {
    fn sgn(&self) -> i8 {
        self.signum() as i8
    }
}

impl Exact for Zphi {
    fn sgn(&self) -> i8 {
        self.signum()
    }
}

/// Positive roots and the simple-reflection action on normals.
#[derive(Clone, Debug)]
pub struct CoverTables<T> {
    pub rank: usize,
    /// Positive roots, simple-root coordinates.
    pub roots: Vec<Vec<T>>,
    /// `m[i][k] = <alpha_k, alpha_i^vee>`.
    pub m: Vec<Vec<T>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverWitness {
    pub i: usize,
    pub j: usize,
    /// Simple-root pairings of the fixed normal `omega_i`.
    pub mu: Vec<String>,
    /// Simple-root pairings of the orbit element `nu` in `W omega_j`.
    pub nu: Vec<String>,
    /// Surviving positive roots (simple-root coordinates).
    pub surviving: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuResult {
    pub value: usize,
    pub witness: CoverWitness,
}

impl CoverTables<i64> {
    pub fn crystallographic(rs: &RootSystem) -> Self {
        let r = rs.rank();
        let g = rs.gram();
        let m = (0..r)
            .map(|i| {
                (0..r)
                    .map(|k| {
                        let v = g[k][i] * 2 / g[i][i];
                        debug_assert!(v.is_integer());
                        v.to_integer()
                    })
                    .collect()
            })
            .collect();
        CoverTables { rank: r, roots: rs.positive_roots().to_vec(), m }
    }
}

impl CoverTables<Zphi> {
    /// `H3` or `H4` with unit roots; the `5` bond has `-phi` off the diagonal.
    pub fn icosahedral(ty: CartanType) -> Result<Self> {
        let r = match ty {
            CartanType::H3 => 3,
            CartanType::H4 => 4,
            _ => return Err(Error::InvalidArgument(format!("{ty} is not of type H"))),
        };
        let mut m = vec![vec![Zphi::zero(); r]; r];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = Zphi::from(2);
        }
        m[0][1] = -Zphi::PHI;
        m[1][0] = -Zphi::PHI;
        for i in 1..r - 1 {
            m[i][i + 1] = Zphi::from(-1);
            m[i + 1][i] = Zphi::from(-1);
        }
        let roots = root_closure(&m);
        let expected = if r == 3 { 15 } else { 60 };
        if roots.len() != expected {
            return Err(Error::Consistency(format!("{ty}: found {} positive roots", roots.len())));
        }
        Ok(CoverTables { rank: r, roots, m })
    }
}

/// Positive roots from the simple ones by closure under simple reflections.
fn root_closure<T: Exact>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    let r = m.len();
    let simple: Vec<Vec<T>> = (0..r).map(|i| (0..r).map(|k| T::from((i == k) as i64)).collect()).collect();
    let mut seen: HashSet<Vec<T>> = simple.iter().cloned().collect();
    let mut out = simple.clone();
    let mut frontier = simple;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for i in 0..r {
                // s_i a = a - <a, alpha_i^vee> alpha_i
                let pair = (0..r).fold(T::zero(), |s, k| s + a[k] * m[i][k]);
                if pair.is_zero() {
                    continue;
                }
                let mut b = a.clone();
                b[i] = b[i] - pair;
                if b.iter().all(|c| c.sgn() >= 0) && seen.insert(b.clone()) {
                    next.push(b.clone());
                    out.push(b);
                }
            }
        }
        frontier = next;
    }
    out
}

impl<T: Exact> CoverTables<T> {
    /// Pairing vectors of the orbit `W omega_j`, walked downward from the
    /// dominant element.
    pub fn orbit(&self, j: usize) -> Vec<Vec<T>> {
        let r = self.rank;
        let start: Vec<T> = (0..r).map(|k| T::from((k == j) as i64)).collect();
        let mut out = vec![start.clone()];
        let mut level = vec![start];
        while !level.is_empty() {
            let mut next: HashSet<Vec<T>> = HashSet::new();
            for p in &level {
                for i in 0..r {
                    if p[i].sgn() > 0 {
                        let q: Vec<T> = (0..r).map(|k| p[k] - p[i] * self.m[i][k]).collect();
                        next.insert(q);
                    }
                }
            }
            level = next.into_iter().collect();
            // hash order is seeded per process; witnesses must not depend on it
            level.sort_unstable();
            out.extend(level.iter().cloned());
        }
        out
    }

    fn pairing(&self, root: &[T], p: &[T]) -> T {
        root.iter().zip(p).fold(T::zero(), |s, (&a, &b)| s + a * b)
    }

    /// Roots with nonzero `i`-th coordinate, i.e. off the hyperplane of `omega_i`.
    pub fn off_fundamental(&self, i: usize) -> Vec<usize> {
        (0..self.roots.len()).filter(|&a| !self.roots[a][i].is_zero()).collect()
    }

    /// `#{alpha in subset : (alpha, nu) != 0}`, or `None` once it exceeds `bound`.
    pub fn count(&self, subset: &[usize], p: &[T], bound: usize) -> Option<usize> {
        let mut c = 0;
        for &a in subset {
            if !self.pairing(&self.roots[a], p).is_zero() {
                c += 1;
                if c > bound {
                    return None;
                }
            }
        }
        Some(c)
    }

    pub fn witness(&self, i: usize, j: usize, p: &[T]) -> CoverWitness {
        let mu: Vec<T> = (0..self.rank).map(|k| T::from((k == i) as i64)).collect();
        let surviving = self
            .roots
            .iter()
            .filter(|a| !self.pairing(a, &mu).is_zero() && !self.pairing(a, p).is_zero())
            .map(|a| a.iter().map(|c| c.to_string()).collect())
            .collect();
        CoverWitness {
            i,
            j,
            mu: mu.iter().map(|c| c.to_string()).collect(),
            nu: p.iter().map(|c| c.to_string()).collect(),
            surviving,
        }
    }

    /// Checks the witness from scratch: every positive root either survives
    /// or pairs to zero with `mu` or `nu`, and survivors pair nonzero with both.
    pub fn verify(&self, w: &CoverWitness, nu: &[T]) -> bool {
        let mu: Vec<T> = (0..self.rank).map(|k| T::from((k == w.i) as i64)).collect();
        let as_str = |a: &[T]| -> Vec<String> { a.iter().map(|c| c.to_string()).collect() };
        if as_str(nu) != w.nu {
            return false;
        }
        self.roots.iter().all(|a| {
            let off = !self.pairing(a, &mu).is_zero() && !self.pairing(a, nu).is_zero();
            off == w.surviving.contains(&as_str(a))
        })
    }

    /// Sequential exact scan.
    pub fn mu(&self) -> MuResult {
        let mut best: Option<(usize, usize, usize, Vec<T>)> = None;
        for j in 0..self.rank {
            let orbit = self.orbit(j);
            for i in 0..self.rank {
                let subset = self.off_fundamental(i);
                for p in &orbit {
                    let bound = best.as_ref().map_or(usize::MAX, |b| b.0);
                    if let Some(c) = self.count(&subset, p, bound) {
                        if best.as_ref().map_or(true, |b| c < b.0) {
                            best = Some((c, i, j, p.clone()));
                        }
                    }
                }
            }
        }
        let (value, i, j, p) = best.expect("rank >= 1");
        MuResult { value, witness: self.witness(i, j, &p) }
    }
}

/// Dihedral `I2(m)`: root lines at angles `k pi / m`, each normal in an
/// orbit `W omega_j` orthogonal to exactly one root line, labelled by it.
/// The reflection in line `a` sends line `k` to `2a - k mod m`.
pub fn mu_dihedral(m: u32) -> Result<MuResult> {
    if m < 3 {
        return Err(Error::InvalidArgument("dihedral parameter must be at least 3".into()));
    }
    let m = m as i64;
    // simple roots: lines 0 and m - 1; omega_1 is orthogonal to alpha_2
    let fixed = [m - 1, 0];
    let orbit = |start: i64| -> Vec<i64> {
        let mut seen = vec![start];
        let mut i = 0;
        while i < seen.len() {
            for a in [0, m - 1] {
                let k = (2 * a - seen[i]).rem_euclid(m);
                if !seen.contains(&k) {
                    seen.push(k);
                }
            }
            i += 1;
        }
        seen
    };
    let mut best: Option<(usize, usize, usize, i64)> = None;
    for j in 0..2 {
        for nu in orbit(fixed[j]) {
            for i in 0..2 {
                let c = (0..m).filter(|&k| k != fixed[i] && k != nu).count();
                if best.map_or(true, |b| c < b.0) {
                    best = Some((c, i, j, nu));
                }
            }
        }
    }
    let (value, i, j, nu) = best.expect("nonempty orbit");
    let line = |k: i64| format!("{k}pi/{m}");
    Ok(MuResult {
        value,
        witness: CoverWitness {
            i,
            j,
            mu: vec![format!("perp {}", line(fixed[i]))],
            nu: vec![format!("perp {}", line(nu))],
            surviving: (0..m).filter(|&k| k != fixed[i] && k != nu).map(|k| vec![line(k)]).collect(),
        },
    })
}

/// `mu(G)` for any finite type.
pub fn mu(ty: CartanType) -> Result<MuResult> {
    match ty {
        CartanType::I2(m) => mu_dihedral(m),
        CartanType::H3 | CartanType::H4 => Ok(CoverTables::icosahedral(ty)?.mu()),
        _ => Ok(CoverTables::crystallographic(&RootSystem::build(ty)?).mu()),
    }
}

fn det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|c| {
            let minor: Vec<Vec<i64>> = m[1..].iter().map(|row| row.iter().enumerate().filter(|&(k, _)| k != c).map(|(_, &v)| v).collect()).collect();
            let s = if c % 2 == 0 { 1 } else { -1 };
            s * m[0][c] * det(&minor)
        })
        .sum()
}

/// Brute force over all pairs of hyperplanes spanned by positive roots,
/// for small crystallographic types.
pub fn mu_brute_force(rs: &RootSystem) -> Result<usize> {
    let r = rs.rank();
    let roots = rs.positive_roots();
    if roots.len() > 24 || r < 2 {
        return Err(Error::InvalidArgument("brute force is for rank >= 2 with at most 24 positive roots".into()));
    }
    let mut normals: Vec<Vec<i64>> = Vec::new();
    let mut choice: Vec<usize> = (0..r - 1).collect();
    loop {
        let rows: Vec<&Vec<i64>> = choice.iter().map(|&c| &roots[c]).collect();
        let p: Vec<i64> = (0..r)
            .map(|k| {
                let minor: Vec<Vec<i64>> = rows.iter().map(|row| row.iter().enumerate().filter(|&(c, _)| c != k).map(|(_, &v)| v).collect()).collect();
                if k % 2 == 0 { det(&minor) } else { -det(&minor) }
            })
            .collect();
        if p.iter().any(|&v| v != 0) {
            let g = p.iter().fold(0i64, |g, &v| num_integer::gcd(g, v));
            let lead = *p.iter().find(|&&v| v != 0).unwrap_or(&1);
            let p: Vec<i64> = p.iter().map(|&v| v / g * lead.signum()).collect();
            if !normals.contains(&p) {
                normals.push(p);
            }
        }
        // next combination
        let mut k = r - 1;
        loop {
            if k == 0 {
                let best = normals
                    .iter()
                    .flat_map(|a| normals.iter().map(move |b| (a, b)))
                    .map(|(a, b)| {
                        roots
                            .iter()
                            .filter(|c| {
                                let pa: i64 = c.iter().zip(a).map(|(x, y)| x * y).sum();
                                let pb: i64 = c.iter().zip(b).map(|(x, y)| x * y).sum();
                                pa != 0 && pb != 0
                            })
                            .count()
                    })
                    .min()
                    .unwrap_or(roots.len());
                return Ok(best);
            }
            k -= 1;
            if choice[k] < roots.len() - (r - 1 - k) {
                choice[k] += 1;
                for t in k + 1..r - 1 {
                    choice[t] = choice[t - 1] + 1;
                }
                break;
            }
        }
    }
}
