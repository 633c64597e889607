//! Weyl group actions on weights in Dynkin labels: reflections, orbits,
//! dominant representatives and (for small groups) full enumeration.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::hash::Hash;

use hashbrown::{HashMap, HashSet};
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::rootsys::RootSystem;

/// Coordinate types the Weyl group can act on exactly.
pub trait Coord: Clone + Eq + Hash + Signed + From<i64> {}
impl<T: Clone + Eq + Hash + Signed + From<i64>> Coord for T {}

/// Simple reflection `s_i` on Dynkin labels.
pub fn reflect<T: Coord>(rs: &RootSystem, v: &mut [T], i: usize) {
    let vi = v[i].clone();
    if vi.is_zero() {
        return;
    }
    for (j, vj) in v.iter_mut().enumerate() {
        let c = rs.cartan()[j][i];
        if c != 0 {
            *vj = vj.clone() - vi.clone() * T::from(c);
        }
    }
}

/// Weyl group element, stored by a reduced word together with its action on
/// the full root list (`k` is the `k`-th positive root, `k + |R_+|` its negative).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    /// Reduced word; the rightmost reflection acts first.
    pub word: Vec<usize>,
    pub root_perm: Vec<usize>,
}

impl WeylElement {
    pub fn identity(rs: &RootSystem) -> Self {
        Self::from_word(rs, Vec::new())
    }

    pub fn from_word(rs: &RootSystem, word: Vec<usize>) -> Self {
        let np = rs.num_positive_roots();
        let index: HashMap<&[i64], usize> = rs
            .positive_roots_dynkin()
            .iter()
            .enumerate()
            .map(|(k, r)| (r.as_slice(), k))
            .collect();
        let root_perm = (0..2 * np)
            .map(|k| {
                let mut v: Vec<i64> = rs.positive_roots_dynkin()[k % np].clone();
                if k >= np {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
                for &i in word.iter().rev() {
                    reflect(rs, &mut v, i);
                }
                if let Some(&p) = index.get(v.as_slice()) {
                    p
                } else {
                    let neg: Vec<i64> = v.iter().map(|x| -x).collect();
                    index[neg.as_slice()] + np
                }
            })
            .collect();
        WeylElement { word, root_perm }
    }

    /// `det(w) = (-1)^{length}`.
    pub fn sign(&self) -> i64 {
        if self.word.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn apply<T: Coord>(&self, rs: &RootSystem, v: &[T]) -> Vec<T> {
        let mut out = v.to_vec();
        for &i in self.word.iter().rev() {
            reflect(rs, &mut out, i);
        }
        out
    }

    /// Number of positive roots sent to negative roots; equals the length.
    pub fn inversions(&self) -> usize {
        let np = self.root_perm.len() / 2;
        self.root_perm[..np].iter().filter(|&&p| p >= np).count()
    }
}

/// The full Weyl orbit of `v`, generated by closure under simple reflections.
pub fn weyl_orbit<T: Coord>(rs: &RootSystem, v: &[T]) -> Vec<Vec<T>> {
    let mut seen: HashSet<Vec<T>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(v.to_vec());
    queue.push_back(v.to_vec());
    let mut out = Vec::new();
    while let Some(u) = queue.pop_front() {
        for i in 0..rs.rank() {
            if u[i].is_zero() {
                continue;
            }
            let mut w = u.clone();
            reflect(rs, &mut w, i);
            if seen.insert(w.clone()) {
                queue.push_back(w);
            }
        }
        out.push(u);
    }
    out
}

/// Orbit of a dominant integral weight, generated level by level: `s_i` is
/// only applied where the label is positive, which walks the orbit downward
/// from the dominant element without revisiting earlier levels.
pub fn dominant_orbit(rs: &RootSystem, dominant: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![dominant.to_vec()];
    let mut level = vec![dominant.to_vec()];
    while !level.is_empty() {
        let mut next: HashSet<Vec<i64>> = HashSet::new();
        for u in &level {
            for i in 0..rs.rank() {
                if u[i] > 0 {
                    let mut w = u.clone();
                    reflect(rs, &mut w, i);
                    next.insert(w);
                }
            }
        }
        let mut next: Vec<Vec<i64>> = next.into_iter().collect();
        next.sort();
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

/// Dominant representative of `v` and an element `w` with `w v` dominant.
pub fn dominant_representative<T: Coord>(rs: &RootSystem, v: &[T]) -> (Vec<T>, WeylElement) {
    let mut u = v.to_vec();
    let mut word = Vec::new();
    while let Some(i) = (0..rs.rank()).find(|&i| u[i].is_negative()) {
        reflect(rs, &mut u, i);
        word.push(i);
    }
    word.reverse();
    let w = WeylElement::from_word(rs, word);
    (u, w)
}

/// Dominant representative only, plus the parity of the word used.
pub fn dominant_with_sign(rs: &RootSystem, v: &mut [i64]) -> i64 {
    let mut sign = 1;
    while let Some(i) = (0..rs.rank()).find(|&i| v[i] < 0) {
        reflect(rs, v, i);
        sign = -sign;
    }
    sign
}

/// All group elements, materialized as orthogonal matrices on the frame
/// together with their signs. Refuses groups larger than `cap`.
#[derive(Clone, Debug)]
pub struct FrameWeylGroup {
    pub rank: usize,
    /// Row-major `r x r` matrices.
    pub matrices: Vec<Vec<f64>>,
    pub signs: Vec<f64>,
}

impl FrameWeylGroup {
    pub fn new(rs: &RootSystem, cap: u64) -> Result<Self> {
        let order = rs.weyl_order();
        if order > cap {
            return Err(Error::WeylGroupTooLarge(order));
        }
        let r = rs.rank();
        let simple = rs.simple_roots_frame();
        let refl: Vec<Vec<f64>> = simple
            .iter()
            .map(|a| {
                let n2: f64 = a.iter().map(|x| x * x).sum();
                let mut m = vec![0.0; r * r];
                for p in 0..r {
                    for q in 0..r {
                        m[p * r + q] = if p == q { 1.0 } else { 0.0 } - 2.0 * a[p] * a[q] / n2;
                    }
                }
                m
            })
            .collect();
        let rho = vec![1i64; r];
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        seen.insert(rho.clone());
        let mut ident = vec![0.0; r * r];
        (0..r).for_each(|p| ident[p * r + p] = 1.0);
        let mut queue = VecDeque::new();
        queue.push_back((rho, ident, 1.0));
        let mut matrices = Vec::with_capacity(order as usize);
        let mut signs = Vec::with_capacity(order as usize);
        while let Some((img, m, s)) = queue.pop_front() {
            for i in 0..r {
                let mut nimg = img.clone();
                reflect(rs, &mut nimg, i);
                if seen.insert(nimg.clone()) {
                    let mut nm = vec![0.0; r * r];
                    for p in 0..r {
                        for q in 0..r {
                            nm[p * r + q] = (0..r).map(|k| refl[i][p * r + k] * m[k * r + q]).sum();
                        }
                    }
                    queue.push_back((nimg, nm, -s));
                }
            }
            matrices.push(m);
            signs.push(s);
        }
        debug_assert_eq!(matrices.len() as u64, order);
        Ok(FrameWeylGroup { rank: r, matrices, signs })
    }

    pub fn order(&self) -> usize {
        self.matrices.len()
    }

    pub fn apply(&self, k: usize, v: &[f64]) -> Vec<f64> {
        let r = self.rank;
        let m = &self.matrices[k];
        (0..r).map(|p| (0..r).map(|q| m[p * r + q] * v[q]).sum()).collect()
    }
}

/// All Weyl group elements with reduced words (small groups only).
pub fn enumerate_elements(rs: &RootSystem, cap: u64) -> Result<Vec<WeylElement>> {
    let order = rs.weyl_order();
    if order > cap {
        return Err(Error::WeylGroupTooLarge(order));
    }
    let r = rs.rank();
    let rho = vec![1i64; r];
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    seen.insert(rho.clone());
    let mut queue = VecDeque::new();
    queue.push_back((rho, Vec::<usize>::new()));
    let mut out = Vec::new();
    while let Some((img, word)) = queue.pop_front() {
        for i in 0..r {
            let mut nimg = img.clone();
            reflect(rs, &mut nimg, i);
            if seen.insert(nimg.clone()) {
                let mut nw = vec![i];
                nw.extend_from_slice(&word);
                queue.push_back((nimg, nw));
            }
        }
        out.push(WeylElement::from_word(rs, word));
    }
    Ok(out)
}
