//! One function per subcommand. Each returns the `results` value of the
//! report and the names of the methods used.

use asymchar_core::asympt::AsymptoticCharacter;
use asymchar_core::linalg::{self, Q};
use asymchar_core::mittag::{self, CentralCharacter};
use asymchar_core::optimize::{self, Budget, MinimizationResult};
use asymchar_core::repr;
use asymchar_core::{bounds, dhspline, CartanType, Error, Result, RootSystem};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::config::Coords;
use crate::par::{self, Parallel};
use crate::report::{rational, rational_i64};

pub type Outcome = (Value, Vec<&'static str>);

fn weight_key(w: &[i64]) -> String {
    w.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

fn rationals(v: &[Q]) -> Value {
    v.iter().map(rational_i64).collect()
}

/// Reads a weight in the chosen coordinates into the frame.
pub fn weight_to_frame(rs: &RootSystem, v: &[f64], coords: Coords) -> Result<Vec<f64>> {
    let out = match coords {
        Coords::Dynkin => check(rs, v).map(|_| rs.frame_from_dynkin(v))?,
        Coords::Frame => check(rs, v).map(|_| v.to_vec())?,
        Coords::Cartesian => rs.frame_from_cartesian_weight(v).ok_or_else(no_cartesian(rs))?,
    };
    Ok(out)
}

/// Reads a point of the Cartan subalgebra (a coweight) into the frame.
pub fn coweight_to_frame(rs: &RootSystem, x: &[f64], coords: Coords) -> Result<Vec<f64>> {
    let out = match coords {
        Coords::Dynkin => check(rs, x).map(|_| rs.frame_from_fundamental_coweight(x))?,
        Coords::Frame => check(rs, x).map(|_| x.to_vec())?,
        Coords::Cartesian => rs.frame_from_cartesian_coweight(x).ok_or_else(no_cartesian(rs))?,
    };
    Ok(out)
}

fn check(rs: &RootSystem, v: &[f64]) -> Result<()> {
    if v.len() != rs.rank() {
        return Err(Error::Dimension { expected: rs.rank(), got: v.len() });
    }
    Ok(())
}

fn no_cartesian(rs: &RootSystem) -> impl FnOnce() -> Error + '_ {
    move || Error::InvalidArgument(format!("no Cartesian model for {}, or wrong vector length", rs.label()))
}

/// A frame point written in every coordinate system that applies.
fn point_json(rs: &RootSystem, x: &[f64]) -> Value {
    let mut m = Map::new();
    m.insert("frame".into(), json!(x));
    m.insert("coweight".into(), json!(rs.fundamental_coweight_from_frame(x)));
    if let Some(c) = rs.cartesian_coweight_from_frame(x) {
        m.insert("cartesian".into(), json!(c));
    }
    Value::Object(m)
}

fn weight_json(rs: &RootSystem, l: &[f64]) -> Value {
    json!({ "frame": l, "dynkin": rs.dynkin_from_frame(l), "norm": linalg::norm(l) })
}

pub fn info(ty: CartanType) -> Result<Outcome> {
    let mut m = Map::new();
    m.insert("label".into(), json!(format!("{}{}", ty.family(), ty.rank())));
    m.insert("rank".into(), json!(ty.rank()));
    m.insert("crystallographic".into(), json!(ty.is_crystallographic()));
    m.insert("weyl_order".into(), json!(ty.weyl_order()));
    if let CartanType::I2(k) = ty {
        m.insert("dihedral_parameter".into(), json!(k));
    }
    if !matches!(ty, CartanType::H3 | CartanType::H4 | CartanType::I2(_)) {
        let rs = RootSystem::build(ty)?;
        let r = rs.rank();
        m.insert("dim".into(), json!(rs.dim()));
        m.insert("positive_roots".into(), json!(rs.num_positive_roots()));
        m.insert("coxeter_number".into(), json!(rs.coxeter_number()));
        m.insert("dual_coxeter_number".into(), json!(rs.dual_coxeter_number()));
        m.insert("index_p_over_q".into(), json!(dhspline::index_of_root_lattice(&rs)));
        m.insert("cartan_matrix".into(), json!(rs.cartan()));
        m.insert("inverse_cartan".into(), rs.inverse_cartan().iter().map(|row| rationals(row)).collect());
        m.insert("gram".into(), rs.gram().iter().map(|row| rationals(row)).collect());
        m.insert("rho_dynkin".into(), json!(vec![1; r]));
        m.insert("rho_norm_sq".into(), json!(rational_i64(&rs.rho_norm_sq())));
        m.insert("positive_roots_simple_coordinates".into(), json!(rs.positive_roots()));
        let cc: Vec<Value> = mittag::central_characters(&rs).iter().map(|c| json!({"index": c.index, "rep": c.rep})).collect();
        m.insert("central_characters".into(), Value::Array(cc));
    }
    Ok((Value::Object(m), vec!["Cartan matrix", "Killing-form Gram matrix", "coset enumeration of P/Q"]))
}

pub fn xeval(rs: &RootSystem, lambda: &[f64], x: &[f64], heat: &[f64], nodes: usize) -> Result<Outcome> {
    let ev = AsymptoticCharacter::new(rs)?;
    let xc: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let (v, mode, err) = ev.eval_with_error(lambda, &xc)?;
    let mut res = json!({
        "lambda": weight_json(rs, lambda),
        "x": point_json(rs, x),
        "re": v.re,
        "im": v.im,
        "abs": v.norm(),
        "mode": format!("{mode:?}"),
        "error_estimate": err,
    });
    let mut tags = vec!["Harish-Chandra alternating sum", "series continuation near walls"];
    if !heat.is_empty() {
        let rows: Result<Vec<Value>> = heat
            .iter()
            .map(|&t| Ok(json!({"t": t, "residual": ev.heat_identity_residual(lambda, t, nodes)?})))
            .collect();
        res["heat"] = Value::Array(rows?);
        tags.push("Gauss-Hermite heat-kernel quadrature");
    }
    Ok((res, tags))
}

fn minimization_json(rs: &RootSystem, m: &MinimizationResult) -> Value {
    json!({
        "c": m.c,
        "lambda": weight_json(rs, &m.lambda),
        "minimizer": point_json(rs, &m.minimizer),
        "minimizer_norm": linalg::norm(&m.minimizer),
        "radius": m.radius,
        "starts": m.starts,
        "evals": m.evals,
        "spread": m.spread,
        "low_confidence": m.low_confidence,
        "best_per_start": m.best_per_start,
    })
}

pub fn cmin(rs: &RootSystem, lambda: &[f64], budget: &Budget) -> Result<Outcome> {
    let m = optimize::minimize_re_x_with(rs, lambda, budget, &Parallel)?;
    Ok((minimization_json(rs, &m), vec!["Halton multistart", "adaptive Nelder-Mead", "dominant-chamber folding"]))
}

pub fn cg(rs: &RootSystem, budget: &Budget, step: f64) -> Result<Outcome> {
    let e = optimize::estimate_cg_with(rs, budget, step, &Parallel)?;
    let grid: Vec<Value> = e
        .grid
        .iter()
        .map(|(l, c)| json!({"lambda_dynkin": rs.dynkin_from_frame(l), "c": c}))
        .collect();
    let res = json!({
        "c": e.c,
        "lambda": weight_json(rs, &e.lambda),
        "low_confidence": e.low_confidence,
        "at_best": minimization_json(rs, &e.at_best),
        "grid": grid,
    });
    Ok((res, vec!["barycentric grid over the chamber", "pattern search", "Halton multistart", "adaptive Nelder-Mead"]))
}

pub fn bounds(rs: &RootSystem, d: Option<f64>, with_cg: bool) -> Result<Outcome> {
    let d = d.unwrap_or(rs.dim() as f64);
    let opt = bounds::c_d_optimized(d)?;
    let g = bounds::geometric_constants(rs)?;
    let (k, k_arg) = bounds::k_constant();
    let mut res = json!({
        "d": d,
        "lower_bound_closed_form": bounds::theorem1_lower_bound(d),
        "lower_bound_optimized": {"value": opt.value, "v": opt.v, "l": opt.l},
        "geometric": {
            "r_g": g.r_g, "h": g.h, "m_g": g.m_g, "b0": g.b0, "d_g": g.d_g, "e_g": g.e_g, "b_lower": g.b_lower,
        },
        "k_constant": {"value": k, "argmax": k_arg, "four_over_pi_sq": 4.0 / (std::f64::consts::PI * std::f64::consts::PI)},
    });
    if let CartanType::A(n) = rs.cartan_type() {
        res["sl_n_upper"] = json!(bounds::sln_upper(n as u32 + 1)?);
    }
    let mut tags = vec!["closed-form lower bound", "golden-section optimization over (v, l)", "inradius of the DH polytope", "regularized incomplete gamma"];
    if with_cg {
        let c = bounds::c_of_g(rs)?;
        res["big_c"] = json!({
            "value": c.value,
            "weyl_order": c.weyl_order,
            "c_n": {
                "n": c.c_n.n,
                "value": c.c_n.value,
                "chebyshev_value": c.c_n.chebyshev_value,
                "grid": c.c_n.grid,
                "patterns": c.c_n.patterns,
                "m": c.c_n.m,
            },
        });
        tags.push("cutting-plane LP on a Chebyshev grid");
    }
    Ok((res, tags))
}

pub fn dh(rs: &RootSystem, k: u32, lambda: Option<&[i64]>, grid: usize, ns: &[u64]) -> Result<Outcome> {
    let r = rs.rank();
    let exact = dhspline::second_moment_rho(rs);
    let target = Q::new(1, rs.coxeter_number() as i64 + 1);
    let ones = vec![1i64; r];
    let (fin, fin_err) = dhspline::second_moment_finite_n(rs, &ones, ns)?;
    let g = bounds::geometric_constants(rs)?;
    let b_rho = dhspline::b_value(rs, &ones)?;
    let mut res = json!({
        "second_moment": {
            "box_spline": rational_i64(&exact),
            "one_over_h_plus_one": rational_i64(&target),
            "equal": exact == target,
            "finite_n": fin,
            "finite_n_error": fin_err,
            "finite_n_relative_deviation": (fin * (rs.coxeter_number() as f64 + 1.0) - 1.0).abs(),
            "n_values": ns,
        },
        "b_rho": {"value": b_rho, "lower": g.b_lower, "upper": g.e_g, "inside": g.b_lower <= b_rho && b_rho <= g.e_g},
        "density_at_zero": dhspline::dh_rho_density(rs, k, &vec![0.0; r])?,
        "k": k,
    });
    let tags = vec!["box-spline de Boor recurrence", "Freudenthal multiplicities with Richardson extrapolation"];
    if let Some(l) = lambda {
        res["b_lambda"] = json!({"lambda": l, "value": dhspline::b_value(rs, l)?});
    }
    if grid > 0 {
        if r > 2 {
            return Err(Error::InvalidArgument("density grids are for rank <= 2".into()));
        }
        let sp = dhspline::rho_box_spline::<f64>(rs, k)?;
        let bx = sp.support_box();
        let covol = dhspline::root_covolume(rs);
        let simple = rs.simple_roots_frame();
        let mut rows = Vec::new();
        let steps: Vec<Vec<f64>> = bx.iter().map(|&(lo, hi)| (0..=grid).map(|i| lo + (hi - lo) * i as f64 / grid as f64).collect()).collect();
        let mut idx = vec![0usize; r];
        loop {
            let c: Vec<f64> = (0..r).map(|a| steps[a][idx[a]]).collect();
            let p: Vec<f64> = (0..r).map(|t| (0..r).map(|a| c[a] * simple[a][t]).sum()).collect();
            let v = sp.eval(&c)? / covol;
            let mut row = Map::new();
            for (t, pt) in p.iter().enumerate() {
                row.insert(format!("p{t}"), json!(pt));
            }
            row.insert("density".into(), json!(v));
            rows.push(Value::Object(row));
            let Some(a) = (0..r).find(|&a| idx[a] < grid) else { break };
            idx[a] += 1;
            idx[..a].iter_mut().for_each(|i| *i = 0);
        }
        res["table"] = Value::Array(rows);
    }
    Ok((res, tags))
}

pub fn mu(ty: CartanType) -> Result<Outcome> {
    let m = par::par_mu(ty)?;
    let w = &m.witness;
    let res = json!({
        "mu": m.value,
        "witness": {
            "i": w.i,
            "j": w.j,
            "mu": w.mu,
            "nu": w.nu,
            "surviving_roots": w.surviving,
        },
    });
    Ok((res, vec!["Weyl orbit walk of fundamental coweights", "exact hyperplane counting", "parallel min-reduction"]))
}

pub fn mittag(rs: &RootSystem, k: u32, xi: usize, points: usize, radius: i64, seed: u64) -> Result<Outcome> {
    let c: CentralCharacter = mittag::central_character(rs, xi)?;
    let dec = mittag::decompose(rs, k, &c)?;
    let beta = mittag::beta_xi(rs, &c.rep);
    let coeffs: Map<String, Value> = dec.coefficients.iter().map(|(l, q)| (weight_key(l), json!(rational(q)))).collect();
    let positive = dec.coefficients.values().all(|q| *q > BigRational::zero());
    let mut res = json!({
        "k": k,
        "xi": {"index": c.index, "rep": c.rep},
        "beta": {"m": rationals(&beta.m), "dynkin": rationals(&beta.dynkin)},
        "coefficients": coeffs,
        "all_positive": positive,
        "dim_weighted_sum": rational(&dec.mass),
        "dim_weighted_sum_is_one": dec.mass == BigRational::one(),
    });
    let mut tags = vec!["box-spline values at lattice points", "Weyl alternation to character coefficients"];
    if points > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rows = Vec::with_capacity(points);
        let mut within = 0;
        for _ in 0..points {
            let x: Vec<f64> = (0..rs.rank()).map(|_| rng.gen_range(0.0..3.0)).collect();
            let ls = mittag::lattice_sum_eval(rs, k, &c, &x, radius)?;
            let tp = mittag::eval_decomposition(rs, &dec, &x)?;
            let diff = (ls.value - tp).norm();
            within += (diff <= ls.tail) as usize;
            rows.push(json!({
                "x": x, "lattice_re": ls.value.re, "lattice_im": ls.value.im,
                "reconstructed_re": tp.re, "reconstructed_im": tp.im,
                "difference": diff, "tail": ls.tail, "terms": ls.terms,
            }));
        }
        res["checks"] = json!({"radius": radius, "points": points, "within_tail": within, "samples": rows});
        tags.push("truncated coweight-lattice sum with dyadic-shell tail");
    }
    Ok((res, tags))
}

/// `c(G)` used by the `ggr` check when none is supplied.
fn c_g_for(rs: &RootSystem, budget: &Budget) -> Result<f64> {
    if rs.rank() > 3 {
        return Err(Error::InvalidArgument("pass --cg for rank > 3".into()));
    }
    Ok(optimize::estimate_cg_with(rs, budget, 0.1, &Parallel)?.c)
}

pub fn ggr(rs: &RootSystem, lambda: &[i64], c_g: Option<f64>, budget: &Budget) -> Result<Outcome> {
    let c_g = match c_g {
        Some(c) => c,
        None => c_g_for(rs, budget)?,
    };
    let big = optimize::big_c(rs)?;
    let g = optimize::ggr_check_with(rs, lambda, c_g, big, budget, &Parallel)?;
    let res = json!({
        "lambda_dynkin": lambda,
        "dim": repr::dim_irrep(rs, lambda)?.to_string(),
        "c_g": c_g,
        "big_c": big,
        "threshold": g.threshold,
        "lambda_plus_rho_norm": g.lambda_rho_norm,
        "threshold_passed": g.threshold_passed,
        "min_ratio": g.min_ratio,
        "argmin": point_json(rs, &g.argmin),
        "direct_ratio": g.direct_ratio,
        "witness": g.witness.as_ref().map(|w| point_json(rs, w)),
    });
    Ok((res, vec!["asymptotic character ratio search", "Weyl character formula cross-check"]))
}

pub fn decay(rs: &RootSystem, lambda: &[f64], x: &[f64], t0: f64, t1: f64, samples: usize, seed: u64) -> Result<Outcome> {
    let fit = optimize::decay_rate_fit(rs, lambda, x, t0, t1)?;
    let mut res = json!({
        "lambda": weight_json(rs, lambda),
        "x": point_json(rs, x),
        "t0": t0,
        "t1": t1,
        "exponent": fit.exponent,
        "envelope": fit.envelope.iter().map(|&(t, v)| json!([t, v])).collect::<Vec<_>>(),
    });
    if rs.cartan_type().is_crystallographic() {
        res["mu"] = json!(par::par_mu(rs.cartan_type())?.value);
    }
    let mut tags = vec!["windowed envelope maxima", "log-log least squares"];
    if samples > 0 {
        let big = optimize::big_c(rs)?;
        let s = par::sample_decay_bound(rs, big, samples, seed)?;
        res["sampling"] = json!({
            "points": s.points,
            "bound": s.bound,
            "violations": s.violations,
            "failures": s.failures,
            "max_product": s.max_product,
            "argmax_lambda": s.argmax.0,
            "argmax_x": s.argmax.1,
        });
        tags.push("seeded random sampling of |X| |lambda| |x|");
    }
    Ok((res, tags))
}
