//! Command-line surface: argument parsing, JSON ingestion, and report
//! emission. Every command prints one schema-versioned JSON envelope to
//! stdout; `--report` duplicates it to a file and `--csv` adds a flat table
//! where the command produces one. Output files are written only after the
//! computation has finished, so a failing run leaves nothing behind.
//!
//! Exit codes: 0 success/PASS, 1 FAIL, 2 INCONCLUSIVE, 3 usage or input
//! error.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::basis::{enumerate, BasisKind};
use crate::harness::{
    generate_pairs, verify_ainf_extrapolation, verify_ainf_vector_valued,
    verify_bfs_extrapolation, verify_limited_range, verify_modular_ainf,
    verify_modular_extrapolation, verify_modular_vector_valued, verify_vector_valued,
    ExtrapolationReport, FamilyKind,
};
use crate::maximal::{dual_maximal, iterate_maximal, orlicz_maximal};
use crate::muckenhoupt::{
    a1_constant, ainf_constant, ap_constant, apq_constant, bmo_norm, rh_constant,
};
use crate::operators::{
    calderon_commutator, commutator, hilbert, make_order_m_measure, nontangential_maximal,
    poisson_extend, solve_dirichlet, solve_dirichlet_modular, square_function, ConeSpec,
};
use crate::rdf::{
    build_ap_weight, build_limited_range_weight, build_modular_weight, check, dual_rdf_majorant,
    estimate_maximal_norm, rdf_majorant, RdfConfig, WeightBuild,
};
use crate::report::{envelope, to_csv, to_json_string};
use crate::space::{GridFunction, MeasureSpace, SpaceRef, Weight};
use crate::spaces::{SpaceFamily, SpaceSpec};
use crate::suite::run_preset;
use crate::young::YoungFunction;
use crate::{tol, Error, Result};

#[derive(Parser, Debug)]
#[command(name = "wfx", version, about = "weighted extrapolation toolbox on finite grids")]
struct Cli {
    /// Extra seed folded into every seeded battery.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Default, Clone)]
struct OutputArgs {
    /// Also write the JSON envelope to this file.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Write the command's table as CSV (errors if the command has none).
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Describe a function or space file: sizes, masses, value range.
    Space {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Maximal operator of a function over a basis.
    Maximal {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "intervals")]
        basis: String,
        /// Weighted dual variant M' with this weight file.
        #[arg(long)]
        dual: Option<PathBuf>,
        /// Iterate the plain maximal operator k times.
        #[arg(long)]
        iterate: Option<usize>,
        /// Orlicz maximal operator with this Young function.
        #[arg(long)]
        orlicz: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// A_p characteristic of a weight.
    Ap {
        #[arg(long)]
        weight: PathBuf,
        #[arg(long, default_value = "intervals")]
        basis: String,
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// A_1 characteristic of a weight.
    A1 {
        #[arg(long)]
        weight: PathBuf,
        #[arg(long, default_value = "intervals")]
        basis: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// A_infinity characteristic (infimum of A_p over p).
    Ainf {
        #[arg(long)]
        weight: PathBuf,
        #[arg(long, default_value = "intervals")]
        basis: String,
        /// Right end of the p-search interval.
        #[arg(long, default_value_t = tol::AINF_P_MAX)]
        pmax: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Reverse Holder constant RH_s.
    Rh {
        #[arg(long)]
        weight: PathBuf,
        #[arg(long, default_value = "intervals")]
        basis: String,
        #[arg(long)]
        s: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// A_{p,q} characteristic.
    Apq {
        #[arg(long)]
        weight: PathBuf,
        #[arg(long, default_value = "intervals")]
        basis: String,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// BMO norm of a function (mean oscillation over the basis).
    Bmo {
        #[arg(long)]
        weight: PathBuf,
        #[arg(long, default_value = "intervals")]
        basis: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Norm of a function in a weighted function space.
    Norm {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        space: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Evaluate a Young function: table, indices, doubling, complementary.
    Young {
        #[arg(long)]
        phi: String,
        /// Comma-separated evaluation points (default: log grid).
        #[arg(long)]
        points: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Rubio de Francia constructions.
    Rdf {
        #[command(subcommand)]
        sub: RdfCmd,
    },
    /// End-to-end extrapolation verification on an operator pair family.
    Extrapolate {
        /// identity | hilbert | maximal | commutator[:k] | calderon |
        /// sqfn[:t0[:m]] | poisson[:kappa] | ainf
        #[arg(long)]
        family: String,
        #[arg(long)]
        space: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        p0: f64,
        /// bfs | vector | ainf | ainf-vector | modular | modular-vector |
        /// modular-ainf | limited
        #[arg(long, default_value = "bfs")]
        mode: String,
        /// Aggregation exponent for the vector-valued modes.
        #[arg(long)]
        q: Option<f64>,
        /// Young function for the modular modes.
        #[arg(long)]
        phi: Option<String>,
        /// Lower endpoint for limited-range mode.
        #[arg(long)]
        pminus: Option<f64>,
        /// Upper endpoint for limited-range mode.
        #[arg(long)]
        pplus: Option<f64>,
        #[arg(long, default_value_t = 8)]
        count: usize,
        #[arg(long, default_value = "intervals")]
        basis: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Solve the Dirichlet problem by Poisson extension and certify the
    /// two-sided estimate.
    Dirichlet {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        space: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        #[arg(long, default_value = "intervals")]
        basis: String,
        /// Check the modular estimate instead of the norm estimate.
        #[arg(long)]
        modular: bool,
        /// Young function for --modular.
        #[arg(long)]
        phi: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Apply a single operator to a function.
    Op {
        /// hilbert | commutator | calderon | poisson | ntg | sqfn
        name: String,
        #[arg(long = "in")]
        input: PathBuf,
        /// Symbol function for commutator.
        #[arg(long)]
        b: Option<PathBuf>,
        /// Commutator order.
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Lipschitz profile for calderon.
        #[arg(long)]
        profile: Option<PathBuf>,
        /// Comma-separated t-levels for poisson (default geometric).
        #[arg(long)]
        levels: Option<String>,
        /// Cone aperture for ntg.
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        /// Truncation for sqfn.
        #[arg(long, default_value_t = 0.05)]
        t0: f64,
        /// Kernel order for sqfn.
        #[arg(long, default_value_t = 1.0)]
        m: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run a named verification battery.
    Suite {
        #[arg(long, default_value = "paper-core")]
        preset: String,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Subcommand, Debug)]
enum RdfCmd {
    /// Truncated series majorant R h with its certificate.
    Majorize {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        space: PathBuf,
        #[arg(long = "K", alias = "k", default_value_t = 40)]
        k: usize,
        /// Use the weighted dual iteration R'.
        #[arg(long)]
        dual: bool,
        #[arg(long, default_value = "intervals")]
        basis: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// A_{p0} weight adapted to a pair (f, g).
    Weight {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        space: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        p0: f64,
        #[arg(long = "K", alias = "k", default_value_t = 40)]
        k: usize,
        #[arg(long, default_value = "intervals")]
        basis: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Modular variant of the weight construction.
    WeightModular {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        phi: String,
        #[arg(long, default_value_t = 2.0)]
        p0: f64,
        #[arg(long, default_value_t = 1.0)]
        theta: f64,
        #[arg(long = "K", alias = "k", default_value_t = 40)]
        k: usize,
        #[arg(long, default_value = "intervals")]
        basis: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Limited-range weight construction between two exponents.
    WeightLimited {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        pminus: f64,
        #[arg(long)]
        pplus: f64,
        /// Intermediate exponent (default: geometric mean of the endpoints).
        #[arg(long)]
        pstar: Option<f64>,
        #[arg(long = "K", alias = "k", default_value_t = 40)]
        k: usize,
        #[arg(long, default_value = "intervals")]
        basis: String,
        #[command(flatten)]
        out: OutputArgs,
    },
}

// ---------------------------------------------------------------------------
// input files

#[derive(Deserialize, Debug, Clone)]
#[serde(untagged)]
enum NField {
    One(usize),
    Axes(Vec<usize>),
}

#[derive(Deserialize, Debug, Clone)]
#[serde(untagged)]
enum MuField {
    Named(String),
    Masses(Vec<f64>),
}

#[derive(Deserialize, Debug, Default, Clone)]
#[serde(deny_unknown_fields)]
struct SpaceFile {
    dim: Option<u8>,
    /// Cell count: a plain number or one entry per axis.
    n: Option<NField>,
    nx: Option<usize>,
    ny: Option<usize>,
    h: Option<f64>,
    /// "lebesgue" (default) or explicit per-cell masses.
    mu: Option<MuField>,
    masses: Option<Vec<f64>>,
    /// Shortcut: order-m line measure with mass profile x^m.
    m: Option<f64>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct FunctionFile {
    values: Vec<f64>,
    space: Option<SpaceFile>,
}

#[derive(Deserialize, Debug)]
#[serde(untagged)]
enum DataFile {
    Function(FunctionFile),
    Space(SpaceFile),
}

#[derive(Deserialize, Debug)]
#[serde(untagged)]
enum WeightField {
    /// Path to a function file holding the weight values.
    Path(String),
    Power { power: f64 },
    Values { values: Vec<f64> },
    Constant { constant: f64 },
}

#[derive(Deserialize, Debug)]
#[serde(untagged)]
enum PField {
    Scalar(f64),
    PerCell(Vec<f64>),
}

#[derive(Deserialize, Debug, Clone)]
#[serde(untagged)]
enum YoungField {
    /// Inline spec string (`plog:2:1`) or path to a descriptor file.
    Text(String),
    Object(YoungFile),
}

#[derive(Deserialize, Debug, Clone)]
#[serde(tag = "family", rename_all = "lowercase")]
enum YoungFile {
    Power { p: f64 },
    Scaled { c: f64, p: f64 },
    PLog { p: f64, alpha: Option<f64> },
    MinPow { p: f64, q: f64 },
    Linf,
    Expm1,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    /// lp | lorentz | orlicz | varexp
    family: String,
    p: Option<PField>,
    q: Option<f64>,
    phi: Option<YoungField>,
    /// Alternative per-cell exponent layout: [[fraction, p], ...].
    pieces: Option<Vec<(f64, f64)>>,
    space: Option<SpaceFile>,
    u: Option<WeightField>,
    v: Option<WeightField>,
    /// Power-scale X^r.
    r: Option<f64>,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::invalid("input", format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::invalid("input", format!("{}: {e}", path.display())))
}

fn build_space(sf: &SpaceFile, n_hint: Option<usize>) -> Result<SpaceRef> {
    let axes: Option<(usize, Option<usize>)> = match (&sf.n, sf.nx, sf.ny) {
        (Some(NField::One(n)), None, None) => Some((*n, None)),
        (Some(NField::Axes(v)), None, None) => match v.as_slice() {
            [n] => Some((*n, None)),
            [nx, ny] => Some((*nx, Some(*ny))),
            _ => {
                return Err(Error::invalid(
                    "space",
                    format!("n must have 1 or 2 axes, got {}", v.len()),
                ))
            }
        },
        (None, Some(nx), ny) => Some((nx, ny)),
        (None, None, None) => None,
        _ => {
            return Err(Error::invalid(
                "space",
                "give the grid size as either `n` or `nx`/`ny`, not both".to_string(),
            ))
        }
    };
    let masses = match (&sf.mu, &sf.masses) {
        (Some(MuField::Masses(_)) | Some(MuField::Named(_)), Some(_)) => {
            return Err(Error::invalid(
                "space",
                "give the measure as either `mu` or `masses`, not both".to_string(),
            ))
        }
        (Some(MuField::Masses(v)), None) => Some(v.clone()),
        (Some(MuField::Named(name)), None) => {
            if name != "lebesgue" {
                return Err(Error::invalid("mu", format!("unknown measure `{name}`")));
            }
            None
        }
        (None, m) => m.clone(),
    };
    if let Some((nx, Some(ny))) = axes {
        if sf.dim.is_some_and(|d| d != 2) {
            return Err(Error::invalid("space", "dim disagrees with a 2-axis n".to_string()));
        }
        let h = sf.h.unwrap_or(1.0 / nx as f64);
        return match masses {
            Some(mu) => MeasureSpace::plane_with_masses(nx, ny, h, mu),
            None => MeasureSpace::plane(nx, ny, h),
        };
    }
    if sf.dim.is_some_and(|d| d != 1) {
        return Err(Error::invalid("space", "2D needs a 2-axis n or nx/ny".to_string()));
    }
    let n = axes
        .map(|(nx, _)| nx)
        .or(n_hint)
        .or(masses.as_ref().map(Vec::len))
        .ok_or_else(|| Error::invalid("space", "cannot infer the grid size".to_string()))?;
    if let Some(m) = sf.m {
        if masses.is_some() {
            return Err(Error::invalid("space", "give either a measure or m, not both".to_string()));
        }
        return make_order_m_measure(n, m);
    }
    let h = sf.h.unwrap_or(1.0 / n as f64);
    match masses {
        Some(mu) => MeasureSpace::line_with_masses(n, h, mu),
        None => MeasureSpace::line(n, h),
    }
}

fn load_function(path: &Path) -> Result<GridFunction> {
    let file: FunctionFile = read_json(path)?;
    let sf = file.space.clone().unwrap_or_default();
    let space = build_space(&sf, Some(file.values.len()))?;
    GridFunction::new(space, file.values)
}

fn load_weight(path: &Path) -> Result<Weight> {
    Weight::new(load_function(path)?)
}

/// Resolve a path mentioned inside a file: as given first, then relative to
/// the referencing file's directory.
fn sibling(path: &str, base: &Path) -> PathBuf {
    let direct = PathBuf::from(path);
    if direct.exists() {
        return direct;
    }
    match base.parent() {
        Some(dir) => dir.join(path),
        None => direct,
    }
}

fn materialize_weight(
    field: Option<&WeightField>,
    space: &SpaceRef,
    base: &Path,
) -> Result<Weight> {
    match field {
        None => Weight::constant(space.clone(), 1.0),
        Some(WeightField::Constant { constant }) => Weight::constant(space.clone(), *constant),
        Some(WeightField::Power { power }) => {
            crate::muckenhoupt::make_power_weight(space, *power)
        }
        Some(WeightField::Values { values }) => {
            Weight::new(GridFunction::new(space.clone(), values.clone())?)
        }
        Some(WeightField::Path(p)) => {
            let w = load_weight(&sibling(p, base))?;
            if !w.space().same_grid(space) {
                return Err(Error::SpaceMismatch(format!(
                    "weight file {p} lives on a different grid"
                )));
            }
            Weight::new(GridFunction::new(space.clone(), w.values().to_vec())?)
        }
    }
}

fn young_from_file(file: YoungFile) -> Result<YoungFunction> {
    match file {
        YoungFile::Power { p } => YoungFunction::power(p),
        YoungFile::Scaled { c, p } => YoungFunction::scaled_power(c, p),
        YoungFile::PLog { p, alpha } => YoungFunction::plog(p, alpha.unwrap_or(1.0)),
        YoungFile::MinPow { p, q } => YoungFunction::min_of_powers(p, q),
        YoungFile::Linf => Ok(YoungFunction::sup_norm()),
        YoungFile::Expm1 => Ok(YoungFunction::exp_minus_one()),
    }
}

/// A Young function given either inline (`plog:2:1`) or as a JSON descriptor
/// file ({"family":"plog","p":2,"alpha":1}).
fn load_young(s: &str) -> Result<YoungFunction> {
    let p = Path::new(s);
    if s.ends_with(".json") || p.exists() {
        return young_from_file(read_json(p)?);
    }
    s.parse()
}

fn expand_pieces(pieces: &[(f64, f64)], n: usize) -> Result<Vec<f64>> {
    let total: f64 = pieces.iter().map(|(frac, _)| frac).sum();
    if pieces.is_empty() || (total - 1.0).abs() > 1e-9 {
        return Err(Error::invalid("pieces", format!("fractions must sum to 1, got {total}")));
    }
    let mut out = Vec::with_capacity(n);
    for (i, (frac, p)) in pieces.iter().enumerate() {
        let len = if i + 1 == pieces.len() {
            n - out.len()
        } else {
            ((frac * n as f64).round() as usize).min(n - out.len())
        };
        out.extend(std::iter::repeat(*p).take(len));
    }
    if out.len() != n {
        return Err(Error::invalid("pieces", "piece expansion did not cover the grid".to_string()));
    }
    Ok(out)
}

fn load_spec(path: &Path, space_hint: Option<&SpaceRef>) -> Result<SpaceSpec> {
    let file: SpecFile = read_json(path)?;
    let space = match (&file.space, space_hint) {
        (Some(sf), hint) => {
            let s = build_space(sf, hint.map(|h| h.len()))?;
            if let Some(h) = hint {
                if !s.same_grid(h) {
                    return Err(Error::SpaceMismatch(
                        "spec space disagrees with the input grid".into(),
                    ));
                }
            }
            s
        }
        (None, Some(hint)) => hint.clone(),
        (None, None) => {
            return Err(Error::invalid(
                "space",
                format!("{}: spec file needs a space block", path.display()),
            ))
        }
    };
    let scalar_p = || -> Result<f64> {
        match &file.p {
            Some(PField::Scalar(p)) => Ok(*p),
            _ => Err(Error::invalid("p", format!("family {} needs a scalar p", file.family))),
        }
    };
    let family = match file.family.as_str() {
        "lp" => SpaceFamily::Lp { p: scalar_p()? },
        "lorentz" => SpaceFamily::Lorentz {
            p: scalar_p()?,
            q: file.q.ok_or_else(|| Error::invalid("q", "lorentz needs q".to_string()))?,
        },
        "orlicz" => {
            let phi = match &file.phi {
                Some(YoungField::Text(s)) => {
                    if s.ends_with(".json") || Path::new(s).exists() {
                        young_from_file(read_json(&sibling(s, path))?)?
                    } else {
                        s.parse()?
                    }
                }
                Some(YoungField::Object(o)) => young_from_file(o.clone())?,
                None => return Err(Error::invalid("phi", "orlicz needs phi".to_string())),
            };
            SpaceFamily::Orlicz { phi }
        }
        "varexp" => match (&file.p, &file.pieces) {
            (Some(PField::PerCell(p)), None) => {
                if p.len() != space.len() {
                    return Err(Error::invalid(
                        "varexp",
                        format!("expected {} exponents, got {}", space.len(), p.len()),
                    ));
                }
                SpaceFamily::VarExp { p: p.clone() }
            }
            (None, Some(pieces)) => SpaceFamily::VarExp { p: expand_pieces(pieces, space.len())? },
            _ => {
                return Err(Error::invalid(
                    "varexp",
                    "give exactly one of `p` (per cell) or `pieces`".to_string(),
                ))
            }
        },
        other => {
            return Err(Error::invalid(
                "family",
                format!("unknown family `{other}` (lp|lorentz|orlicz|varexp)"),
            ))
        }
    };
    let u = materialize_weight(file.u.as_ref(), &space, path)?;
    let v = materialize_weight(file.v.as_ref(), &space, path)?;
    let spec = SpaceSpec::with_weights(family, u, v)?;
    match file.r {
        Some(r) if r != 1.0 => spec.power_scale(r),
        _ => Ok(spec),
    }
}

fn parse_basis(s: &str) -> Result<BasisKind> {
    match s {
        "dyadic" => Ok(BasisKind::Dyadic),
        "intervals" => Ok(BasisKind::Intervals),
        "cubes" => Ok(BasisKind::Cubes),
        "rectangles" => Ok(BasisKind::Rectangles),
        other => Err(Error::invalid(
            "basis",
            format!("unknown basis `{other}` (dyadic|intervals|cubes|rectangles)"),
        )),
    }
}

fn parse_family(s: &str) -> Result<FamilyKind> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |x: &str| -> Result<f64> {
        x.parse::<f64>().map_err(|_| Error::invalid("family", format!("bad number `{x}` in `{s}`")))
    };
    Ok(match parts.as_slice() {
        ["identity"] => FamilyKind::Identity,
        ["hilbert"] => FamilyKind::Hilbert,
        ["maximal"] => FamilyKind::MaximalPair,
        ["commutator"] => FamilyKind::Commutator { k: 1 },
        ["commutator", k] => FamilyKind::Commutator {
            k: k.parse()
                .map_err(|_| Error::invalid("family", format!("bad order `{k}` in `{s}`")))?,
        },
        ["calderon"] => FamilyKind::Calderon,
        ["sqfn"] => FamilyKind::SquareFunction { t0: 0.05, m: 1.0 },
        ["sqfn", t0] => FamilyKind::SquareFunction { t0: num(t0)?, m: 1.0 },
        ["sqfn", t0, m] => FamilyKind::SquareFunction { t0: num(t0)?, m: num(m)? },
        ["poisson"] => FamilyKind::Poisson { kappa: 1.0 },
        ["poisson", kappa] => FamilyKind::Poisson { kappa: num(kappa)? },
        ["ainf"] => FamilyKind::AinfPair,
        _ => {
            return Err(Error::invalid(
                "family",
                format!(
                    "unknown family `{s}` (identity|hilbert|maximal|commutator[:k]|calderon|sqfn[:t0[:m]]|poisson[:kappa]|ainf)"
                ),
            ))
        }
    })
}

fn parse_levels(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| Error::invalid("levels", format!("bad level `{x}`")))
        })
        .collect()
}

fn grid_payload(f: &GridFunction) -> Value {
    let s = f.space();
    json!({
        "values": f.values(),
        "space": { "n": s.len(), "h": s.cell_width() },
    })
}

fn build_payload(label: &str, b: &WeightBuild) -> Value {
    let class_check = b.checks.iter().find(|c| {
        c.label.starts_with("ap_bound: [w]")
            || c.label.starts_with("a1_bound: [w]")
            || c.label.starts_with("tau_bound:")
    });
    let ap = b
        .details
        .get("ap_constant")
        .or_else(|| b.details.get("a1_constant"))
        .or_else(|| b.details.get("ap_pstar"))
        .copied()
        .or_else(|| class_check.map(|c| c.lhs));
    let embeddings: serde_json::Map<String, Value> = b
        .checks
        .iter()
        .filter(|c| c.label.starts_with("embedding_") || c.label.starts_with("mod_"))
        .map(|c| {
            let short = c.label.split(':').next().unwrap_or(&c.label).to_string();
            (short, json!({ "lhs": c.lhs, "bound": c.bound, "pass": c.pass }))
        })
        .collect();
    json!({
        "construction": label,
        "weight": b.w.values(),
        "p0": b.p0,
        "n1": b.n1,
        "n2": b.n2,
        "ap_constant": ap,
        "paper_bound": class_check.map(|c| c.bound),
        "embeddings": embeddings,
        "passed": b.passed(),
        "checks": b.checks,
        "details": b.details,
    })
}

fn checks_csv(checks: &[crate::rdf::InequalityCheck]) -> Vec<Vec<String>> {
    let mut rows = vec![vec!["label".into(), "lhs".into(), "bound".into(), "pass".into()]];
    for c in checks {
        rows.push(vec![c.label.clone(), c.lhs.to_string(), c.bound.to_string(), c.pass.to_string()]);
    }
    rows
}

fn pairs_csv(rep: &ExtrapolationReport) -> Vec<Vec<String>> {
    let mut rows = vec![vec!["index".into(), "lhs".into(), "bound".into(), "pass".into()]];
    for p in &rep.pairs {
        rows.push(vec![p.index.to_string(), p.lhs.to_string(), p.bound.to_string(), p.pass.to_string()]);
    }
    rows
}

/// One finished command: the envelope body plus exit code and optional table.
struct Execution {
    command: String,
    payload: Value,
    exit: i32,
    table: Option<Vec<Vec<String>>>,
}

impl Execution {
    fn ok(command: impl Into<String>, payload: Value) -> Self {
        Execution { command: command.into(), payload, exit: 0, table: None }
    }
}

fn base_cfg(seed: u64) -> RdfConfig {
    let mut cfg = RdfConfig::default();
    cfg.seed ^= seed;
    cfg
}

fn execute(cli: &Cli) -> Result<Execution> {
    match &cli.cmd {
        Cmd::Space { input, .. } => {
            let file: DataFile = read_json(input)?;
            let (space, stats) = match file {
                DataFile::Function(f) => {
                    let sf = f.space.clone().unwrap_or_default();
                    let space = build_space(&sf, Some(f.values.len()))?;
                    let g = GridFunction::new(space.clone(), f.values)?;
                    let mean = g.integrate(None)? / space.total_mass();
                    let stats = json!({
                        "min": g.values().iter().cloned().fold(f64::INFINITY, f64::min),
                        "max": g.values().iter().cloned().fold(f64::NEG_INFINITY, f64::max),
                        "mean": mean,
                    });
                    (space, Some(stats))
                }
                DataFile::Space(sf) => (build_space(&sf, None)?, None),
            };
            let masses = space.masses();
            let mut payload = json!({
                "dim": space.dim(),
                "n": space.len(),
                "nx": space.nx(),
                "ny": space.ny(),
                "cell_width": space.cell_width(),
                "total_mass": space.total_mass(),
                "mass_min": masses.iter().cloned().fold(f64::INFINITY, f64::min),
                "mass_max": masses.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            });
            if let Some(stats) = stats {
                payload["values"] = stats;
            }
            Ok(Execution::ok("space", payload))
        }

        Cmd::Maximal { input, basis, dual, iterate, orlicz, .. } => {
            let f = load_function(input)?;
            let b = enumerate(f.space(), parse_basis(basis)?)?;
            if dual.is_some() && orlicz.is_some() {
                return Err(Error::invalid(
                    "maximal",
                    "--dual and --orlicz cannot be combined".to_string(),
                ));
            }
            let g = if let Some(vpath) = dual {
                if iterate.is_some() {
                    return Err(Error::invalid(
                        "maximal",
                        "--iterate applies to the plain operator only".to_string(),
                    ));
                }
                dual_maximal(&f, &b, &load_weight(vpath)?)?
            } else if let Some(phi) = orlicz {
                if iterate.is_some() {
                    return Err(Error::invalid(
                        "maximal",
                        "--iterate applies to the plain operator only".to_string(),
                    ));
                }
                orlicz_maximal(&f, &b, &load_young(phi)?)?
            } else {
                iterate_maximal(&f, &b, iterate.unwrap_or(1))?
            };
            Ok(Execution::ok("maximal", grid_payload(&g)))
        }

        Cmd::Ap { weight, basis, p, .. } => {
            let w = load_weight(weight)?;
            let b = enumerate(w.space(), parse_basis(basis)?)?;
            Ok(Execution::ok("ap", serde_json::to_value(ap_constant(&w, &b, *p)?)?))
        }
        Cmd::A1 { weight, basis, .. } => {
            let w = load_weight(weight)?;
            let b = enumerate(w.space(), parse_basis(basis)?)?;
            Ok(Execution::ok("a1", serde_json::to_value(a1_constant(&w, &b)?)?))
        }
        Cmd::Ainf { weight, basis, pmax, .. } => {
            let w = load_weight(weight)?;
            let b = enumerate(w.space(), parse_basis(basis)?)?;
            Ok(Execution::ok("ainf", serde_json::to_value(ainf_constant(&w, &b, *pmax)?)?))
        }
        Cmd::Rh { weight, basis, s, .. } => {
            let w = load_weight(weight)?;
            let b = enumerate(w.space(), parse_basis(basis)?)?;
            Ok(Execution::ok("rh", serde_json::to_value(rh_constant(&w, &b, *s)?)?))
        }
        Cmd::Apq { weight, basis, p, q, .. } => {
            let w = load_weight(weight)?;
            let b = enumerate(w.space(), parse_basis(basis)?)?;
            Ok(Execution::ok("apq", serde_json::to_value(apq_constant(&w, &b, *p, *q)?)?))
        }
        Cmd::Bmo { weight, basis, .. } => {
            let f = load_function(weight)?;
            let b = enumerate(f.space(), parse_basis(basis)?)?;
            Ok(Execution::ok("bmo", serde_json::to_value(bmo_norm(&f, &b)?)?))
        }

        Cmd::Norm { input, space, .. } => {
            let f = load_function(input)?;
            let spec = load_spec(space, Some(f.space()))?;
            let value = spec.norm(&f)?;
            Ok(Execution::ok("norm", json!({ "space": spec.name(), "value": value })))
        }

        Cmd::Young { phi, points, .. } => {
            let phi = load_young(phi)?;
            let ts: Vec<f64> = match points {
                Some(s) => parse_levels(s)?,
                None => (-4..=4).map(|k| 10f64.powi(k)).collect(),
            };
            let bar = phi.complementary()?;
            let (ilo, ihi) = phi.dilation_indices();
            let mut table = Vec::new();
            let mut rows = vec![vec![
                "t".to_string(),
                "phi".to_string(),
                "inv".to_string(),
                "conj_inv".to_string(),
            ]];
            for &t in &ts {
                let row = json!({
                    "t": t,
                    "phi": phi.eval(t),
                    "inv": phi.inv(t),
                    "conj_inv": bar.inv(t),
                });
                rows.push(vec![
                    t.to_string(),
                    phi.eval(t).to_string(),
                    phi.inv(t).to_string(),
                    bar.inv(t).to_string(),
                ]);
                table.push(row);
            }
            let delta2 = phi
                .delta2_constant()
                .map(|d| json!({ "constant": d.constant, "doubling": d.doubling }))
                .unwrap_or(Value::Null);
            let payload = json!({
                "name": phi.name(),
                "complementary": bar.name(),
                "dilation_indices": [ilo, ihi],
                "delta2": delta2,
                "table": table,
            });
            Ok(Execution { command: "young".into(), payload, exit: 0, table: Some(rows) })
        }

        Cmd::Rdf { sub } => execute_rdf(sub, cli.seed),

        Cmd::Extrapolate {
            family,
            space,
            p0,
            mode,
            q,
            phi,
            pminus,
            pplus,
            count,
            basis,
            ..
        } => {
            let spec = load_spec(space, None)?;
            let b = enumerate(spec.space(), parse_basis(basis)?)?;
            let kind = parse_family(family)?;
            let fam = generate_pairs(spec.space(), &b, &kind, *count, cli.seed)?;
            let cfg = base_cfg(cli.seed);
            let need_q = || q.ok_or_else(|| Error::invalid("q", "mode needs --q".to_string()));
            let need_phi = || -> Result<YoungFunction> {
                load_young(
                    phi.as_deref()
                        .ok_or_else(|| Error::invalid("phi", "mode needs --phi".to_string()))?,
                )
            };
            let rep = match mode.as_str() {
                "bfs" => verify_bfs_extrapolation(&fam, &spec, &b, *p0, &cfg)?,
                "vector" => verify_vector_valued(&fam, &spec, &b, *p0, need_q()?, &cfg)?,
                "ainf" => verify_ainf_extrapolation(&fam, &spec, &b, *p0, &cfg)?,
                "ainf-vector" => verify_ainf_vector_valued(&fam, &spec, &b, need_q()?, &cfg)?,
                "modular" => verify_modular_extrapolation(
                    &fam,
                    &need_phi()?,
                    spec.u(),
                    spec.v(),
                    &b,
                    *p0,
                    &cfg,
                )?,
                "modular-vector" => verify_modular_vector_valued(
                    &fam,
                    &need_phi()?,
                    spec.u(),
                    spec.v(),
                    &b,
                    *p0,
                    &cfg,
                )?,
                "modular-ainf" => verify_modular_ainf(
                    &fam,
                    &need_phi()?,
                    spec.u(),
                    spec.v(),
                    &b,
                    *p0,
                    &cfg,
                )?,
                "limited" => {
                    let lo = pminus
                        .ok_or_else(|| Error::invalid("pminus", "limited mode needs --pminus".to_string()))?;
                    let hi = pplus
                        .ok_or_else(|| Error::invalid("pplus", "limited mode needs --pplus".to_string()))?;
                    verify_limited_range(&fam, &spec, &b, lo, hi, &cfg)?
                }
                other => {
                    return Err(Error::invalid("mode", format!("unknown mode `{other}`")))
                }
            };
            let exit = rep.exit_code();
            let table = pairs_csv(&rep);
            Ok(Execution {
                command: "extrapolate".into(),
                payload: serde_json::to_value(&rep)?,
                exit,
                table: Some(table),
            })
        }

        Cmd::Dirichlet { data, space, kappa, basis, modular, phi, .. } => {
            let f = load_function(data)?;
            let spec = load_spec(space, Some(f.space()))?;
            let b = enumerate(f.space(), parse_basis(basis)?)?;
            let h = f.space().cell_width();
            let cone = ConeSpec::geometric(*kappa, h / 2.0, 2.0, 24)?;
            let cfg = base_cfg(cli.seed);
            let (field, cert) = if *modular {
                let phi = load_young(
                    phi.as_deref()
                        .ok_or_else(|| Error::invalid("phi", "--modular needs --phi".to_string()))?,
                )?;
                solve_dirichlet_modular(&f, &phi, spec.u(), spec.v(), &cone, &b, &cfg)?
            } else {
                solve_dirichlet(&f, &spec, &cone, &b, &cfg)?
            };
            let exit = cert.verdict.exit_code();
            let table = checks_csv(&cert.checks);
            let payload = json!({
                "verdict": cert.verdict,
                "checks": cert.checks,
                "details": cert.details,
                "levels": field.ts(),
            });
            Ok(Execution { command: "dirichlet".into(), payload, exit, table: Some(table) })
        }

        Cmd::Op { name, input, b, k, profile, levels, kappa, t0, m, .. } => {
            let f = load_function(input)?;
            match name.as_str() {
                "hilbert" => Ok(Execution::ok("op hilbert", grid_payload(&hilbert(&f)?))),
                "commutator" => {
                    let bpath = b.as_ref().ok_or_else(|| {
                        Error::invalid("b", "commutator needs --b symbol.json".to_string())
                    })?;
                    let sym = load_function(bpath)?;
                    Ok(Execution::ok("op commutator", grid_payload(&commutator(&sym, *k, &f)?)))
                }
                "calderon" => {
                    let ppath = profile.as_ref().ok_or_else(|| {
                        Error::invalid("profile", "calderon needs --profile F.json".to_string())
                    })?;
                    let prof = load_function(ppath)?;
                    let (g, residual) = calderon_commutator(&prof, &f)?;
                    let mut payload = grid_payload(&g);
                    payload["decomposition_residual"] = json!(residual);
                    Ok(Execution::ok("op calderon", payload))
                }
                "poisson" => {
                    let ts = match levels {
                        Some(s) => parse_levels(s)?,
                        None => {
                            let h = f.space().cell_width();
                            ConeSpec::geometric(1.0, h / 2.0, 2.0, 24)?.ts
                        }
                    };
                    let field = poisson_extend(&f, &ts)?;
                    let levels: Vec<&[f64]> =
                        (0..ts.len()).map(|i| field.level(i).values()).collect();
                    Ok(Execution::ok("op poisson", json!({
                        "ts": field.ts(),
                        "levels": levels,
                        "space": { "n": f.space().len(), "h": f.space().cell_width() },
                    })))
                }
                "ntg" => {
                    let ts = match levels {
                        Some(s) => parse_levels(s)?,
                        None => {
                            let h = f.space().cell_width();
                            ConeSpec::geometric(*kappa, h / 2.0, 2.0, 24)?.ts
                        }
                    };
                    let field = poisson_extend(&f, &ts)?;
                    let g = nontangential_maximal(&field, *kappa)?;
                    Ok(Execution::ok("op ntg", grid_payload(&g)))
                }
                "sqfn" => {
                    Ok(Execution::ok("op sqfn", grid_payload(&square_function(&f, *t0, *m)?)))
                }
                other => Err(Error::invalid(
                    "op",
                    format!("unknown operator `{other}` (hilbert|commutator|calderon|poisson|ntg|sqfn)"),
                )),
            }
        }

        Cmd::Suite { preset, .. } => {
            let outcomes = run_preset(preset)?;
            for o in &outcomes {
                eprintln!("{}", o.line());
            }
            let all = outcomes.iter().all(|o| o.pass);
            let mut rows = vec![vec![
                "index".to_string(),
                "name".to_string(),
                "pass".to_string(),
                "seconds".to_string(),
            ]];
            for o in &outcomes {
                rows.push(vec![
                    o.index.to_string(),
                    o.name.to_string(),
                    o.pass.to_string(),
                    format!("{:.3}", o.seconds),
                ]);
            }
            let payload = json!({
                "preset": preset,
                "pass": all,
                "criteria": outcomes,
            });
            Ok(Execution {
                command: "suite".into(),
                payload,
                exit: if all { 0 } else { 1 },
                table: Some(rows),
            })
        }
    }
}

fn execute_rdf(sub: &RdfCmd, seed: u64) -> Result<Execution> {
    match sub {
        RdfCmd::Majorize { f, space, k, dual, basis, .. } => {
            let h = load_function(f)?.abs();
            let spec = load_spec(space, Some(h.space()))?;
            let b = enumerate(h.space(), parse_basis(basis)?)?;
            let cfg = base_cfg(seed);
            let est = estimate_maximal_norm(&spec, &b, *dual, &cfg)?;
            let maj = if *dual {
                dual_rdf_majorant(&h, &b, spec.v(), est.used, *k)?
            } else {
                rdf_majorant(&h, &b, est.used, *k)?
            };
            let tail = 1.0 + maj.tail_rel;
            let mut checks = Vec::new();
            let dom = h.zip_map(&maj.r, |a, b| a / b)?.max_abs();
            checks.push(check("majorant_dominates: h <= R h", dom, 1.0, 1.0 + 1e-12));
            let a1 = if *dual {
                let rv = Weight::new(maj.r.zip_map(spec.v().function(), |a, b| a * b)?)?;
                a1_constant(&rv, &b)?.value
            } else {
                a1_constant(&Weight::new(maj.r.clone())?, &b)?.value
            };
            checks.push(check("a1_bound: [R h]_{A1} <= 2 N", a1, 2.0 * est.used, tail));
            let eval_spec = if *dual { spec.associate()? } else { spec.clone() };
            let lhs = eval_spec.norm(&maj.r)?;
            let rhs = eval_spec.norm(&h)?;
            checks.push(check("series_norm: ||R h|| <= 2 ||h||", lhs, 2.0 * rhs, tail));
            let passed = checks.iter().all(|c| c.pass);
            let table = checks_csv(&checks);
            let payload = json!({
                "mode": if *dual { "dual" } else { "plain" },
                "majorant": maj.r.values(),
                "terms": maj.terms,
                "tail_rel": maj.tail_rel,
                "last_term_sup": maj.last_term_sup,
                "n": est.used,
                "n_converged": est.converged,
                "a1_constant": a1,
                "passed": passed,
                "checks": checks,
            });
            Ok(Execution {
                command: "rdf majorize".into(),
                payload,
                exit: i32::from(!passed),
                table: Some(table),
            })
        }
        RdfCmd::Weight { f, g, space, p0, k, basis, .. } => {
            let f = load_function(f)?;
            let g = load_function(g)?;
            let spec = load_spec(space, Some(f.space()))?;
            let b = enumerate(f.space(), parse_basis(basis)?)?;
            let mut cfg = base_cfg(seed);
            cfg.k = *k;
            let build = build_ap_weight(&f, &g, &spec, &b, *p0, &cfg)?;
            Ok(Execution {
                command: "rdf weight".into(),
                payload: build_payload("ap", &build),
                exit: i32::from(!build.passed()),
                table: Some(checks_csv(&build.checks)),
            })
        }
        RdfCmd::WeightModular { f, g, space, phi, p0, theta, k, basis, .. } => {
            let f = load_function(f)?;
            let g = load_function(g)?;
            let spec = load_spec(space, Some(f.space()))?;
            let b = enumerate(f.space(), parse_basis(basis)?)?;
            let phi = load_young(phi)?;
            let mut cfg = base_cfg(seed);
            cfg.k = *k;
            let build =
                build_modular_weight(&f, &g, &phi, spec.u(), spec.v(), &b, *p0, *theta, &cfg)?;
            Ok(Execution {
                command: "rdf weight-modular".into(),
                payload: build_payload("modular", &build),
                exit: i32::from(!build.passed()),
                table: Some(checks_csv(&build.checks)),
            })
        }
        RdfCmd::WeightLimited { f, g, space, pminus, pplus, pstar, k, basis, .. } => {
            let f = load_function(f)?;
            let g = load_function(g)?;
            let spec = load_spec(space, Some(f.space()))?;
            let b = enumerate(f.space(), parse_basis(basis)?)?;
            let ps = pstar.unwrap_or((pminus * pplus).sqrt());
            let mut cfg = base_cfg(seed);
            cfg.k = *k;
            let build =
                build_limited_range_weight(&f, &g, &spec, &b, *pminus, *pplus, ps, &cfg)?;
            Ok(Execution {
                command: "rdf weight-limited".into(),
                payload: build_payload("limited", &build),
                exit: i32::from(!build.passed()),
                table: Some(checks_csv(&build.checks)),
            })
        }
    }
}

fn output_args(cmd: &Cmd) -> &OutputArgs {
    match cmd {
        Cmd::Space { out, .. }
        | Cmd::Maximal { out, .. }
        | Cmd::Ap { out, .. }
        | Cmd::A1 { out, .. }
        | Cmd::Ainf { out, .. }
        | Cmd::Rh { out, .. }
        | Cmd::Apq { out, .. }
        | Cmd::Bmo { out, .. }
        | Cmd::Norm { out, .. }
        | Cmd::Young { out, .. }
        | Cmd::Extrapolate { out, .. }
        | Cmd::Dirichlet { out, .. }
        | Cmd::Op { out, .. }
        | Cmd::Suite { out, .. } => out,
        Cmd::Rdf { sub } => match sub {
            RdfCmd::Majorize { out, .. }
            | RdfCmd::Weight { out, .. }
            | RdfCmd::WeightModular { out, .. }
            | RdfCmd::WeightLimited { out, .. } => out,
        },
    }
}

/// Entry point used by the binary; takes the argument list without the
/// program name and returns the process exit code.
pub fn run<I: IntoIterator<Item = String>>(args: I) -> i32 {
    let argv = std::iter::once("wfx".to_string()).chain(args);
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    eprint!("{e}");
                    3
                }
            };
        }
    };
    let out = output_args(&cli.cmd).clone();
    match execute(&cli) {
        Ok(ex) => {
            let text = to_json_string(&envelope(&ex.command, ex.payload));
            print!("{text}");
            if let Some(path) = &out.report {
                if let Err(e) = fs::write(path, &text) {
                    eprintln!("wfx: cannot write {}: {e}", path.display());
                    return 3;
                }
            }
            if let Some(path) = &out.csv {
                match &ex.table {
                    Some(rows) => {
                        if let Err(e) = fs::write(path, to_csv(rows)) {
                            eprintln!("wfx: cannot write {}: {e}", path.display());
                            return 3;
                        }
                    }
                    None => {
                        eprintln!("wfx: this command has no tabular output");
                        return 3;
                    }
                }
            }
            ex.exit
        }
        Err(e) => {
            eprintln!("wfx: {e}");
            3
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_tmp(dir: &tempfile::TempDir, name: &str, content: &str) -> PathBuf {
        let path = dir.path().join(name);
        fs::write(&path, content).unwrap();
        path
    }

    fn cli(args: &[&str]) -> Cli {
        let argv = std::iter::once("wfx".to_string()).chain(args.iter().map(|s| s.to_string()));
        Cli::try_parse_from(argv).unwrap()
    }

    #[test]
    fn ap_of_ones_is_one() {
        let dir = tempfile::tempdir().unwrap();
        let ones = write_tmp(&dir, "ones.json", r#"{"values":[1,1,1,1,1,1,1,1]}"#);
        let c = cli(&["ap", "--weight", ones.to_str().unwrap(), "--basis", "intervals", "--p", "2"]);
        let ex = execute(&c).unwrap();
        assert_eq!(ex.exit, 0);
        assert_eq!(ex.payload["value"], json!(1.0));
        let env = envelope(&ex.command, ex.payload);
        assert!(to_json_string(&env).contains("\"value\": 1.0"));
        assert_eq!(env["schema"], json!("wfx/1"));
    }

    #[test]
    fn malformed_json_exits_3() {
        let dir = tempfile::tempdir().unwrap();
        let bad = write_tmp(&dir, "bad.json", r#"{"values":[1,1"#);
        let code = run(["ap", "--weight", bad.to_str().unwrap(), "--p", "2"]
            .iter()
            .map(|s| s.to_string()));
        assert_eq!(code, 3);
    }

    #[test]
    fn unknown_flag_exits_3_without_files() {
        let dir = tempfile::tempdir().unwrap();
        let report = dir.path().join("out.json");
        let code = run([
            "ap",
            "--weight",
            "whatever.json",
            "--p",
            "2",
            "--definitely-not-a-flag",
            "--report",
            report.to_str().unwrap(),
        ]
        .iter()
        .map(|s| s.to_string()));
        assert_eq!(code, 3);
        assert!(!report.exists());
    }

    #[test]
    fn help_exits_0() {
        let code = run(["--help".to_string()]);
        assert_eq!(code, 0);
    }

    #[test]
    fn norm_and_young_payloads() {
        let dir = tempfile::tempdir().unwrap();
        let f =
            write_tmp(&dir, "f.json", r#"{"values":[1,2,3,4,3,2,1,0.5]}"#);
        let spec = write_tmp(&dir, "spec.json", r#"{"family":"lp","p":2}"#);
        let c = cli(&["norm", "--in", f.to_str().unwrap(), "--space", spec.to_str().unwrap()]);
        let ex = execute(&c).unwrap();
        let got = ex.payload["value"].as_f64().unwrap();
        let want = (0..8)
            .map(|i| [1.0f64, 2.0, 3.0, 4.0, 3.0, 2.0, 1.0, 0.5][i].powi(2) / 8.0)
            .sum::<f64>()
            .sqrt();
        assert!((got - want).abs() < 1e-12);

        let c = cli(&["young", "--phi", "plog:2:1"]);
        let ex = execute(&c).unwrap();
        assert_eq!(ex.payload["dilation_indices"], json!([2.0, 2.0]));
        assert!(ex.table.unwrap().len() > 1);
    }

    #[test]
    fn varexp_pieces_and_weight_fields() {
        let dir = tempfile::tempdir().unwrap();
        let f = write_tmp(&dir, "f.json", r#"{"values":[1,1,1,1,1,1,1,1]}"#);
        let spec = write_tmp(
            &dir,
            "spec.json",
            r#"{"family":"varexp","pieces":[[0.5,1.5],[0.5,3.0]],"u":{"power":0.1},"v":{"constant":1.0}}"#,
        );
        let c = cli(&["norm", "--in", f.to_str().unwrap(), "--space", spec.to_str().unwrap()]);
        let ex = execute(&c).unwrap();
        assert!(ex.payload["value"].as_f64().unwrap() > 0.0);
    }

    #[test]
    fn extrapolate_identity_passes_and_is_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let spec = write_tmp(
            &dir,
            "spec.json",
            r#"{"family":"lp","p":2,"space":{"n":[32]}}"#,
        );
        let args = [
            "extrapolate",
            "--family",
            "identity",
            "--space",
            spec.to_str().unwrap(),
            "--p0",
            "2",
            "--count",
            "2",
        ];
        let ex1 = execute(&cli(&args)).unwrap();
        let ex2 = execute(&cli(&args)).unwrap();
        assert_eq!(ex1.exit, 0);
        assert_eq!(to_json_string(&ex1.payload), to_json_string(&ex2.payload));
    }

    #[test]
    fn documented_descriptor_forms() {
        let dir = tempfile::tempdir().unwrap();
        let f = write_tmp(
            &dir,
            "f.json",
            r#"{"values":[1,2,1,0,1,2,1,0],"space":{"dim":1,"n":[8],"h":0.125,"mu":"lebesgue"}}"#,
        );
        let _u = write_tmp(&dir, "u.json", r#"{"values":[1,1,1,1,2,2,2,2]}"#);
        let phi = write_tmp(&dir, "phi.json", r#"{"family":"plog","p":2,"alpha":1}"#);
        let spec = write_tmp(
            &dir,
            "spec.json",
            &format!(
                r#"{{"family":"orlicz","phi":"{}","u":"u.json","r":1.0}}"#,
                phi.to_str().unwrap()
            ),
        );
        let report = dir.path().join("out.json");
        let csv = dir.path().join("out.csv");
        let code = run([
            "norm",
            "--in",
            f.to_str().unwrap(),
            "--space",
            spec.to_str().unwrap(),
            "--report",
            report.to_str().unwrap(),
        ]
        .iter()
        .map(|s| s.to_string()));
        assert_eq!(code, 0);
        let text = fs::read_to_string(&report).unwrap();
        assert!(text.contains("\"schema\": \"wfx/1\""));
        assert!(text.contains("orlicz"));

        let code = run([
            "young",
            "--phi",
            phi.to_str().unwrap(),
            "--csv",
            csv.to_str().unwrap(),
        ]
        .iter()
        .map(|s| s.to_string()));
        assert_eq!(code, 0);
        assert!(fs::read_to_string(&csv).unwrap().starts_with("t,phi,inv,conj_inv"));
    }

    #[test]
    fn rdf_accepts_capital_k_flag() {
        let c = cli(&[
            "rdf", "weight", "--f", "f.json", "--g", "g.json", "--space", "s.json", "--K", "30",
        ]);
        match c.cmd {
            Cmd::Rdf { sub: RdfCmd::Weight { k, .. } } => assert_eq!(k, 30),
            _ => panic!("parsed into the wrong command"),
        }
    }

    #[test]
    fn op_hilbert_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let f = write_tmp(&dir, "f.json", r#"{"values":[0,0,0,1,1,0,0,0]}"#);
        let c = cli(&["op", "hilbert", "--in", f.to_str().unwrap()]);
        let ex = execute(&c).unwrap();
        assert_eq!(ex.payload["values"].as_array().unwrap().len(), 8);
    }

    #[test]
    fn rdf_weight_small_grid() {
        let dir = tempfile::tempdir().unwrap();
        let f = write_tmp(&dir, "f.json", r#"{"values":[0,1,1,0,0,0,0,0,0,0,0,0,0,0,0,0]}"#);
        let g = write_tmp(&dir, "g.json", r#"{"values":[1,1,1,1,0.5,0.5,0.5,0.5,0.5,0.5,0.5,0.5,0.5,0.5,0.5,0.5]}"#);
        let spec = write_tmp(&dir, "spec.json", r#"{"family":"lp","p":2}"#);
        let c = cli(&[
            "rdf",
            "weight",
            "--f",
            f.to_str().unwrap(),
            "--g",
            g.to_str().unwrap(),
            "--space",
            spec.to_str().unwrap(),
            "--p0",
            "2",
        ]);
        let ex = execute(&c).unwrap();
        assert_eq!(ex.exit, 0, "{}", ex.payload);
        assert!(ex.payload["details"]["ap_constant"].as_f64().unwrap() >= 1.0);
    }
}
