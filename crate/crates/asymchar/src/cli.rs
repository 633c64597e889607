//! Command-line front end.

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use asymchar_core::optimize::Budget;
use asymchar_core::{CartanType, RootSystem};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cache::{Cache, CacheError};
use crate::commands::{self, coweight_to_frame, weight_to_frame};
use crate::config::{Coords, OutputFormat, RunConfig};
use crate::report::{Document, Provenance};

pub const CACHE_ENV: &str = "ASYMCHAR_CACHE_DIR";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] asymchar_core::Error),
    #[error(transparent)]
    Cache(#[from] CacheError),
}

#[derive(Parser, Debug)]
#[command(name = "asymchar", version, about = "Asymptotic characters, Duistermaat-Heckman densities, bound constants, mu(G) and Mittag-Leffler decompositions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Cartan family letter (A-I).
    #[arg(long = "type", value_name = "FAMILY")]
    pub family: String,
    /// Rank; for family I the dihedral parameter m of I2(m).
    #[arg(long)]
    pub rank: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Result cache directory; no caching when unset.
    #[arg(long, env = CACHE_ENV)]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct XevalArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
    /// Weight, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub lambda: Vec<f64>,
    /// Point of the Cartan subalgebra, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub x: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Coords::Dynkin)]
    pub coords: Coords,
    /// Heat-kernel identity residuals at these times.
    #[arg(long, value_delimiter = ',')]
    pub heat: Vec<f64>,
    /// Quadrature nodes per axis for the heat check.
    #[arg(long, default_value_t = 96)]
    pub nodes: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CminArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub lambda: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Coords::Dynkin)]
    pub coords: Coords,
    /// Multistart count; 0 selects 64 r^2.
    #[arg(long, default_value_t = 0)]
    pub starts: usize,
    #[arg(long, default_value_t = 2000)]
    pub max_evals: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CgArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
    #[arg(long, default_value_t = 0)]
    pub starts: usize,
    #[arg(long, default_value_t = 2000)]
    pub max_evals: usize,
    /// Barycentric grid step over the chamber.
    #[arg(long, default_value_t = 0.1)]
    pub step: f64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct BoundsArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
    /// Dimension for the lower bound; defaults to dim G.
    #[arg(long)]
    pub d: Option<f64>,
    /// Also compute C(G), which solves an LP in |R+| variables.
    #[arg(long)]
    pub with_big_c: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DhArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
    /// Convolution power of DH_rho.
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    /// Dominant regular weight (Dynkin labels) for B(lambda).
    #[arg(long, value_delimiter = ',')]
    pub lambda: Option<Vec<i64>>,
    /// Points per axis of a density grid (rank <= 2); 0 for none.
    #[arg(long, default_value_t = 0)]
    pub grid: usize,
    /// Scales N for the finite-N second moment.
    #[arg(long, value_delimiter = ',', default_values_t = vec![4u64, 8, 16])]
    pub ns: Vec<u64>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct MuArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct InfoArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct MittagArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
    #[arg(long)]
    pub k: u32,
    /// Index into P/Q as listed by `info`.
    #[arg(long, default_value_t = 0)]
    pub xi: usize,
    /// Random points at which to compare with the truncated lattice sum.
    #[arg(long, default_value_t = 0)]
    pub points: usize,
    #[arg(long, default_value_t = 40)]
    pub radius: i64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GgrArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
    /// Dominant integral weight, Dynkin labels.
    #[arg(long, value_delimiter = ',', required = true)]
    pub lambda: Vec<i64>,
    /// c(G); estimated when omitted (rank <= 3).
    #[arg(long)]
    pub cg: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub starts: usize,
    #[arg(long, default_value_t = 2000)]
    pub max_evals: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DecayArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub lambda: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub x: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Coords::Dynkin)]
    pub coords: Coords,
    #[arg(long, default_value_t = 20.0)]
    pub t0: f64,
    #[arg(long, default_value_t = 400.0)]
    pub t1: f64,
    /// Random (lambda, x) pairs for the |X| |lambda| |x| <= C(G) check.
    #[arg(long, default_value_t = 0)]
    pub samples: usize,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Root system data.
    Info(InfoArgs),
    /// Evaluate X(lambda, x).
    Xeval(XevalArgs),
    /// c(G, lambda) by multistart minimization of Re X(lambda, .).
    Cmin(CminArgs),
    /// c(G), minimized over lambda as well (rank <= 3).
    Cg(CgArgs),
    /// Explicit bound constants.
    Bounds(BoundsArgs),
    /// Duistermaat-Heckman densities and moments.
    Dh(DhArgs),
    /// The root-cover invariant mu(G).
    Mu(MuArgs),
    /// Character decomposition of the Mittag-Leffler sum F_{k,xi}.
    Mittag(MittagArgs),
    /// Character-ratio lower bound check for an irreducible.
    Ggr(GgrArgs),
    /// Decay exponent of |X(lambda, t x)|.
    Decay(DecayArgs),
}

impl Command {
    fn parts(&self) -> (&'static str, &Common, Value) {
        let v = |a: &dyn erased::Ser| a.value();
        match self {
            Command::Info(a) => ("info", &a.common, v(a)),
            Command::Xeval(a) => ("xeval", &a.common, v(a)),
            Command::Cmin(a) => ("cmin", &a.common, v(a)),
            Command::Cg(a) => ("cg", &a.common, v(a)),
            Command::Bounds(a) => ("bounds", &a.common, v(a)),
            Command::Dh(a) => ("dh", &a.common, v(a)),
            Command::Mu(a) => ("mu", &a.common, v(a)),
            Command::Mittag(a) => ("mittag", &a.common, v(a)),
            Command::Ggr(a) => ("ggr", &a.common, v(a)),
            Command::Decay(a) => ("decay", &a.common, v(a)),
        }
    }
}

mod erased {
    pub trait Ser {
        fn value(&self) -> serde_json::Value;
    }
    impl<T: serde::Serialize> Ser for T {
        fn value(&self) -> serde_json::Value {
            serde_json::to_value(self).expect("argument structs serialize")
        }
    }
}

fn budget(starts: usize, max_evals: usize, seed: u64) -> Budget {
    Budget { starts, max_evals, seed }
}

fn compute(cmd: &Command, ty: CartanType) -> Result<commands::Outcome, CliError> {
    let build = || RootSystem::build(ty);
    let out = match cmd {
        Command::Info(_) => commands::info(ty)?,
        Command::Mu(_) => commands::mu(ty)?,
        Command::Xeval(a) => {
            let rs = build()?;
            let l = weight_to_frame(&rs, &a.lambda, a.coords)?;
            let x = coweight_to_frame(&rs, &a.x, a.coords)?;
            commands::xeval(&rs, &l, &x, &a.heat, a.nodes)?
        }
        Command::Cmin(a) => {
            let rs = build()?;
            let l = weight_to_frame(&rs, &a.lambda, a.coords)?;
            commands::cmin(&rs, &l, &budget(a.starts, a.max_evals, a.common.seed))?
        }
        Command::Cg(a) => commands::cg(&build()?, &budget(a.starts, a.max_evals, a.common.seed), a.step)?,
        Command::Bounds(a) => commands::bounds(&build()?, a.d, a.with_big_c)?,
        Command::Dh(a) => commands::dh(&build()?, a.k, a.lambda.as_deref(), a.grid, &a.ns)?,
        Command::Mittag(a) => commands::mittag(&build()?, a.k, a.xi, a.points, a.radius, a.common.seed)?,
        Command::Ggr(a) => commands::ggr(&build()?, &a.lambda, a.cg, &budget(a.starts, a.max_evals, a.common.seed))?,
        Command::Decay(a) => {
            let rs = build()?;
            let l = weight_to_frame(&rs, &a.lambda, a.coords)?;
            let x = coweight_to_frame(&rs, &a.x, a.coords)?;
            commands::decay(&rs, &l, &x, a.t0, a.t1, a.samples, a.common.seed)?
        }
    };
    Ok(out)
}

/// Runs one parsed command and returns the report and its format.
pub fn run(cli: &Cli) -> Result<(Document, OutputFormat), CliError> {
    let (name, common, params) = cli.command.parts();
    let ty = CartanType::new(&common.family, common.rank)?;
    let params = match params {
        Value::Object(m) => m,
        _ => unreachable!("argument structs are records"),
    };
    let config = RunConfig {
        command: name.to_string(),
        family: common.family.trim().to_ascii_uppercase(),
        rank: common.rank,
        params,
        seed: common.seed,
        format: common.format,
        cache_dir: common.cache_dir.as_ref().map(|p| p.display().to_string()),
    };
    let cache = common.cache_dir.as_ref().map(Cache::open).transpose()?;
    let key = Cache::key(&config.cache_key_material());
    let cached = match &cache {
        Some(c) => c.load(&key)?,
        None => None,
    };
    let (results, tags) = match cached {
        Some(v) => {
            let tags = v["formula_tags"].as_array().map(|a| a.iter().filter_map(|t| t.as_str().map(String::from)).collect());
            match (v.get("results"), tags) {
                (Some(r), Some(t)) => (r.clone(), t),
                _ => return Err(CacheError::Corrupt(cache.as_ref().expect("hit implies cache").path(&key)).into()),
            }
        }
        None => {
            let (r, t) = compute(&cli.command, ty)?;
            let t: Vec<String> = t.into_iter().map(String::from).collect();
            if let Some(c) = &cache {
                c.store(&key, &json!({"results": r, "formula_tags": t}))?;
            }
            (r, t)
        }
    };
    let doc = Document {
        config: serde_json::to_value(&config).expect("config serializes"),
        results,
        provenance: Provenance::new(&tags),
    };
    Ok((doc, common.format))
}

/// Parses `args` (program name first) and renders the report.
pub fn run_args<I, T>(args: I) -> Result<String, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Usage(e.to_string()))?;
    let (doc, format) = run(&cli)?;
    Ok(doc.render(format))
}

/// Process entry point: report on stdout, diagnostics on stderr.
pub fn main_entry<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(&cli) {
        Ok((doc, format)) => {
            print!("{}", doc.render(format));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("asymchar: error: {e}");
            ExitCode::FAILURE
        }
    }
}
