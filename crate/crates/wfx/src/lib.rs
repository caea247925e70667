//! Weighted harmonic-analysis toolbox on finite grids.
//!
//! Everything operates on finite discretized measure spaces (1D or 2D uniform
//! grids with per-cell masses), so suprema over a basis of boxes, Muckenhoupt
//! constants, Luxemburg norms, and the Rubio de Francia iteration are all
//! computed exactly (up to floating point and explicitly reported truncation
//! tails) rather than sampled.
//!
//! Module map:
//! - [`space`]: measure spaces, grid functions, weights, integration.
//! - [`basis`]: families of cell boxes (dyadic, intervals, cubes, rectangles)
//!   with prefix-sum averages.
//! - [`maximal`]: maximal operators over a basis, the dual (weighted) variant,
//!   iterates, the centered maximal function, and the Orlicz maximal operator.
//! - [`muckenhoupt`]: A_p / A_1 / A_inf / RH_s / A_{p,q} constants and BMO.
//! - [`young`]: Young functions, complementary functions, dilation indices,
//!   Delta_2 constants, modulars.
//! - [`spaces`]: Banach function space norms (L^p, Lorentz, Orlicz, variable
//!   exponent) with a measure weight v, an outer multiplier u, and the r-power
//!   scale; associate norms and duality witnesses.
//! - [`rdf`]: the Rubio de Francia algorithm and the explicit A_p / A_1 /
//!   modular / limited-range weight constructions with their certified bounds.
//! - [`harness`]: end-to-end extrapolation verification on operator-generated
//!   pair families with calibrated monotone constants.
//! - [`operators`]: discrete Hilbert transform, commutators, the Calderon
//!   commutator, Poisson extension / nontangential maximal / Dirichlet
//!   certificates, and square functions over general measures.
//! - [`suite`]: the self-check battery behind `wfx suite`.

pub mod basis;
pub mod cli;
pub mod harness;
pub mod maximal;
pub mod muckenhoupt;
pub mod operators;
pub(crate) mod numeric;
pub mod rdf;
pub mod report;
pub mod spaces;
pub mod space;
pub mod suite;
pub mod tol;
pub mod young;

use thiserror::Error;

/// Crate-wide error type. Numeric routines return these rather than panicking
/// so the CLI and the C ABI can map every failure to a stable code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("index {index} out of range: space has {len} cells")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("empty cell set")]
    EmptySet,

    #[error("non-finite value at cell {index}: {value}")]
    NonFinite { index: usize, value: f64 },

    #[error("weight must be strictly positive and finite; cell {index} has {value}")]
    BadWeight { index: usize, value: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("basis kind `{kind}` is not available in dimension {dim}")]
    BasisDimension { kind: &'static str, dim: u8 },

    #[error("basis would contain {requested} elements, over the cap of {cap}")]
    BasisCap { requested: usize, cap: usize },

    #[error("bracket exhausted while {context}")]
    BracketExhausted { context: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Configure the global thread pool once, honoring `WFX_THREADS` when set.
/// Safe to call from every parallel entry point.
pub(crate) fn ensure_thread_pool() {
    static INIT: std::sync::Once = std::sync::Once::new();
    INIT.call_once(|| {
        if let Ok(spec) = std::env::var("WFX_THREADS") {
            if let Ok(n) = spec.parse::<usize>() {
                if n > 0 {
                    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
                }
            }
        }
    });
}
