//! Thread-parallel drivers for the core searches.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};

use asymchar_core::asympt::AsymptoticCharacter;
use asymchar_core::golden::Zphi;
use asymchar_core::linalg;
use asymchar_core::mucover::{self, CoverTables, Exact, MuResult};
use asymchar_core::optimize::{LocalResult, StartRunner};
use asymchar_core::repr::{self, Weight};
use asymchar_core::{CartanType, Result, RootSystem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

/// Runs multistart descents on the rayon pool. Output order follows the
/// input order, so reductions over it are schedule independent.
#[derive(Clone, Copy, Debug, Default)]
pub struct Parallel;

impl StartRunner for Parallel {
    fn run(&self, starts: &[Vec<f64>], f: &(dyn Fn(&[f64]) -> LocalResult + Sync)) -> Vec<LocalResult> {
        starts.par_iter().map(|s| f(s)).collect()
    }
}

/// `mu(G)` with the orbit scan spread over threads.
///
/// Candidates are pruned against a shared running minimum but ties are
/// kept, and the final pick is the least `(count, j, i, position)`, which
/// is what the sequential scan returns.
pub fn par_mu(ty: CartanType) -> Result<MuResult> {
    match ty {
        CartanType::I2(m) => mucover::mu_dihedral(m),
        CartanType::H3 | CartanType::H4 => Ok(scan(&CoverTables::<Zphi>::icosahedral(ty)?)),
        _ => Ok(scan(&CoverTables::crystallographic(&RootSystem::build(ty)?))),
    }
}

fn scan<T: Exact>(t: &CoverTables<T>) -> MuResult {
    let r = t.rank;
    let orbits: Vec<Vec<Vec<T>>> = (0..r).into_par_iter().map(|j| t.orbit(j)).collect();
    let subsets: Vec<Vec<usize>> = (0..r).map(|i| t.off_fundamental(i)).collect();
    let best = AtomicUsize::new(usize::MAX);
    let mut hits = Vec::new();
    for (j, orbit) in orbits.iter().enumerate() {
        for (i, subset) in subsets.iter().enumerate() {
            let hit = orbit
                .par_iter()
                .enumerate()
                .filter_map(|(pos, p)| {
                    let c = t.count(subset, p, best.load(Ordering::Relaxed))?;
                    best.fetch_min(c, Ordering::Relaxed);
                    Some((c, j, i, pos))
                })
                .min();
            hits.extend(hit);
        }
    }
    let (value, j, i, pos) = hits.into_iter().min().expect("rank >= 1");
    MuResult { value, witness: t.witness(i, j, &orbits[j][pos]) }
}

/// Outcome of checking `|X(lambda, x)| |lambda| |x| <= bound` on random pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct DecaySample {
    pub points: usize,
    pub bound: f64,
    pub violations: usize,
    pub max_product: f64,
    /// `(lambda, x)` in the orthonormal frame at the largest product.
    pub argmax: (Vec<f64>, Vec<f64>),
    /// Points where the evaluator failed; counted as violations.
    pub failures: usize,
}

/// Samples `count` pairs: `lambda` a Gaussian direction folded into the
/// dominant chamber with `|lambda|` log-uniform in `[0.1, 10]`, `x` a
/// Gaussian direction with `|lambda||x|` log-uniform in `[1e-2, 1e3]`.
/// Point `k` draws from its own ChaCha stream, so the result does not
/// depend on the thread count.
pub fn sample_decay_bound(rs: &RootSystem, bound: f64, count: usize, seed: u64) -> Result<DecaySample> {
    let ev = AsymptoticCharacter::new(rs)?;
    let r = rs.rank();
    let point = |k: usize| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        let dir = |rng: &mut ChaCha8Rng| -> Vec<f64> {
            loop {
                let v: Vec<f64> = (0..r).map(|_| rng.sample(StandardNormal)).collect();
                let n = linalg::norm(&v);
                if n > 1e-9 {
                    return linalg::scale(&v, 1.0 / n);
                }
            }
        };
        let l_norm = 10f64.powf(rng.gen_range(-1.0..1.0));
        let lambda = linalg::scale(&rs.dominant_frame(&dir(&mut rng)), l_norm);
        let prod = 10f64.powf(rng.gen_range(-2.0..3.0));
        let x = linalg::scale(&dir(&mut rng), prod / l_norm);
        let value = ev.eval_real(&lambda, &x).ok().map(|z| z.norm() * prod).filter(|v| v.is_finite());
        (value, lambda, x)
    };
    let results: Vec<_> = (0..count).into_par_iter().map(point).collect();
    let mut out = DecaySample {
        points: count,
        bound,
        violations: 0,
        max_product: 0.0,
        argmax: (vec![0.0; r], vec![0.0; r]),
        failures: 0,
    };
    for (value, lambda, x) in results {
        match value {
            None => {
                out.failures += 1;
                out.violations += 1;
            }
            Some(v) => {
                if v > bound {
                    out.violations += 1;
                }
                if v > out.max_product {
                    out.max_product = v;
                    out.argmax = (lambda, x);
                }
            }
        }
    }
    Ok(out)
}

/// Result of comparing both contraction routes over a grid of irreducibles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionGrid {
    pub representations: usize,
    /// `(mu, N, lambda)` triples where either route is nonzero.
    pub cases: usize,
    pub agreements: usize,
    pub first_disagreement: Option<String>,
}

/// Both contraction routes for `V = L_mu` over every `mu` with
/// `dim V <= max_dim` and every `1 <= N <= n_max`.
pub fn contraction_grid(rs: &RootSystem, n_max: i64, max_dim: u128) -> Result<ContractionGrid> {
    let r = rs.rank();
    let mut caps = vec![0i64; r];
    for (i, cap) in caps.iter_mut().enumerate() {
        let mut e = vec![0i64; r];
        loop {
            e[i] = *cap + 1;
            if repr::dim_irrep(rs, &e)? > max_dim {
                break;
            }
            *cap += 1;
        }
    }
    let mut reps = Vec::new();
    let mut mu = vec![0i64; r];
    loop {
        if repr::dim_irrep(rs, &mu)? <= max_dim {
            reps.push(mu.clone());
        }
        let Some(i) = (0..r).find(|&i| mu[i] < caps[i]) else { break };
        mu[i] += 1;
        mu[..i].iter_mut().for_each(|v| *v = 0);
    }
    let per_rep: Vec<(usize, usize, Option<String>)> = reps
        .par_iter()
        .map(|mu| {
            let diag = repr::weight_diagram(rs, mu)?;
            let mut out = (0, 0, None);
            for n in 1..=n_max {
                let (a, b) = repr::contraction_tables(rs, &diag, n);
                let keys: BTreeSet<&Weight> = a.keys().chain(b.keys()).collect();
                for lam in keys {
                    out.0 += 1;
                    let (x, y) = (a.get(lam).copied().unwrap_or(0), b.get(lam).copied().unwrap_or(0));
                    if x == y {
                        out.1 += 1;
                    } else if out.2.is_none() {
                        out.2 = Some(format!("mu={mu:?} N={n} lambda={lam:?}: {x} vs {y}"));
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut grid = ContractionGrid { representations: reps.len(), cases: 0, agreements: 0, first_disagreement: None };
    for (c, a, d) in per_rep {
        grid.cases += c;
        grid.agreements += a;
        if grid.first_disagreement.is_none() {
            grid.first_disagreement = d;
        }
    }
    Ok(grid)
}
