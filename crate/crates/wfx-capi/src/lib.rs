//! C ABI for the wfx toolbox.
//!
//! Every object crossing the boundary is an opaque handle created by a
//! `wfx_*_new`-style constructor and released by the matching `wfx_*_free`.
//! Every fallible call returns a `WfxStatus`; on failure a human-readable
//! message is stored per thread and can be fetched with
//! `wfx_last_error_message`.
//!
//! Scalars are returned through out-pointers so the status code never
//! collides with a value. All handles are immutable after construction and
//! may be shared across threads; the last-error buffer is the only
//! thread-local state.

use std::cell::RefCell;
use std::ffi::{c_char, CString};

use wfx::basis::{enumerate, Basis, BasisKind};
use wfx::muckenhoupt::{
    a1_constant, ainf_constant, ap_constant, apq_constant, bmo_norm, rh_constant,
};
use wfx::operators::{hilbert, make_order_m_measure, square_function};
use wfx::rdf::{build_ap_weight, rdf_majorant, RdfConfig};
use wfx::space::{GridFunction, MeasureSpace, SpaceRef, Weight};
use wfx::spaces::{SpaceFamily, SpaceSpec};

/// Status code returned by every fallible function.
#[repr(C)]
#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WfxStatus {
    /// Success.
    WFX_OK = 0,
    /// A required pointer argument was null.
    WFX_NULL_ARGUMENT = 1,
    /// A parameter was out of range or otherwise rejected.
    WFX_INVALID_ARGUMENT = 2,
    /// Two objects live on different grids.
    WFX_SPACE_MISMATCH = 3,
    /// A computation produced or received a non-finite value, or an
    /// iterative bracket failed to close.
    WFX_NUMERIC = 4,
    /// The requested combination is outside the implemented range.
    WFX_UNSUPPORTED = 5,
    /// Serialization or I/O failure.
    WFX_IO = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn fail(e: wfx::Error) -> WfxStatus {
    use wfx::Error as E;
    let code = match &e {
        E::SpaceMismatch(_) => WfxStatus::WFX_SPACE_MISMATCH,
        E::NonFinite { .. } | E::BracketExhausted { .. } => WfxStatus::WFX_NUMERIC,
        E::Unsupported(_) => WfxStatus::WFX_UNSUPPORTED,
        E::Json(_) | E::Io(_) => WfxStatus::WFX_IO,
        _ => WfxStatus::WFX_INVALID_ARGUMENT,
    };
    set_last_error(e.to_string());
    code
}

fn null_arg(name: &str) -> WfxStatus {
    set_last_error(format!("null argument: {name}"));
    WfxStatus::WFX_NULL_ARGUMENT
}

/// Opaque handle to a finite measure space.
pub struct WfxSpace(SpaceRef);

/// Opaque handle to a per-cell real function.
pub struct WfxFunction(GridFunction);

/// Opaque handle to a strictly positive weight.
pub struct WfxWeight(Weight);

/// Opaque handle to an enumerated Muckenhoupt basis.
pub struct WfxBasis(Basis);

/// Basis family selector for `wfx_basis_new`.
#[repr(C)]
#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WfxBasisKind {
    /// Dyadic cubes.
    WFX_BASIS_DYADIC = 0,
    /// All 1D cell intervals.
    WFX_BASIS_INTERVALS = 1,
    /// All square boxes.
    WFX_BASIS_CUBES = 2,
    /// All axis-parallel boxes.
    WFX_BASIS_RECTANGLES = 3,
}

impl WfxBasisKind {
    fn to_kind(self) -> BasisKind {
        match self {
            WfxBasisKind::WFX_BASIS_DYADIC => BasisKind::Dyadic,
            WfxBasisKind::WFX_BASIS_INTERVALS => BasisKind::Intervals,
            WfxBasisKind::WFX_BASIS_CUBES => BasisKind::Cubes,
            WfxBasisKind::WFX_BASIS_RECTANGLES => BasisKind::Rectangles,
        }
    }
}

unsafe fn opt<'a, T>(p: *const T) -> Option<&'a T> {
    if p.is_null() {
        None
    } else {
        Some(&*p)
    }
}

fn give<T>(out: *mut *mut T, value: T) -> WfxStatus {
    // Caller guarantees `out` is valid; null was already rejected.
    unsafe { *out = Box::into_raw(Box::new(value)) };
    WfxStatus::WFX_OK
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn wfx_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message for the most recent failure on this thread, or null if the last
/// call succeeded. The pointer stays valid until the next failing call on
/// the same thread.
#[no_mangle]
pub extern "C" fn wfx_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|c| c.as_ptr())
            .unwrap_or(std::ptr::null())
    })
}

/// Create a 1D space of `n` cells of width `h` with Lebesgue masses.
/// `n` must be a power of two.
///
/// # Safety
/// `out` must be a valid pointer; the result must be released with
/// `wfx_space_free`.
#[no_mangle]
pub unsafe extern "C" fn wfx_space_line(
    n: usize,
    h: f64,
    out: *mut *mut WfxSpace,
) -> WfxStatus {
    if out.is_null() {
        return null_arg("out");
    }
    match MeasureSpace::line(n, h) {
        Ok(s) => give(out, WfxSpace(s)),
        Err(e) => fail(e),
    }
}

/// Create a 1D space with explicit per-cell masses (`masses` has length `n`).
///
/// # Safety
/// `masses` must point to `n` readable doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wfx_space_line_with_masses(
    n: usize,
    h: f64,
    masses: *const f64,
    out: *mut *mut WfxSpace,
) -> WfxStatus {
    if out.is_null() {
        return null_arg("out");
    }
    if masses.is_null() {
        return null_arg("masses");
    }
    let mu = std::slice::from_raw_parts(masses, n).to_vec();
    match MeasureSpace::line_with_masses(n, h, mu) {
        Ok(s) => give(out, WfxSpace(s)),
        Err(e) => fail(e),
    }
}

/// Create the 1D measure of order `m` on `n` cells (mass profile x^m).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wfx_space_order_m(
    n: usize,
    m: f64,
    out: *mut *mut WfxSpace,
) -> WfxStatus {
    if out.is_null() {
        return null_arg("out");
    }
    match make_order_m_measure(n, m) {
        Ok(s) => give(out, WfxSpace(s)),
        Err(e) => fail(e),
    }
}

/// Number of cells.
///
/// # Safety
/// `space` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wfx_space_len(space: *const WfxSpace, out: *mut usize) -> WfxStatus {
    let Some(s) = opt(space) else { return null_arg("space") };
    if out.is_null() {
        return null_arg("out");
    }
    *out = s.0.len();
    WfxStatus::WFX_OK
}

/// Total measure of the space.
///
/// # Safety
/// `space` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wfx_space_total_mass(
    space: *const WfxSpace,
    out: *mut f64,
) -> WfxStatus {
    let Some(s) = opt(space) else { return null_arg("space") };
    if out.is_null() {
        return null_arg("out");
    }
    *out = s.0.total_mass();
    WfxStatus::WFX_OK
}

/// Release a space handle. Null is a no-op.
///
/// # Safety
/// `space` must be null or a pointer from a `wfx_space_*` constructor that
/// has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn wfx_space_free(space: *mut WfxSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Create a function on `space` from `len` values (one per cell).
///
/// # Safety
/// `values` must point to `len` readable doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wfx_function_new(
    space: *const WfxSpace,
    values: *const f64,
    len: usize,
    out: *mut *mut WfxFunction,
) -> WfxStatus {
    let Some(s) = opt(space) else { return null_arg("space") };
    if values.is_null() {
        return null_arg("values");
    }
    if out.is_null() {
        return null_arg("out");
    }
    let vals = std::slice::from_raw_parts(values, len).to_vec();
    match GridFunction::new(s.0.clone(), vals) {
        Ok(f) => give(out, WfxFunction(f)),
        Err(e) => fail(e),
    }
}

/// Number of cells the function is defined on.
///
/// # Safety
/// `f` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wfx_function_len(f: *const WfxFunction, out: *mut usize) -> WfxStatus {
    let Some(f) = opt(f) else { return null_arg("f") };
    if out.is_null() {
        return null_arg("out");
    }
    *out = f.0.len();
    WfxStatus::WFX_OK
}

/// Copy the function's values into `buf` (capacity `cap` doubles); fails if
/// `cap` is too small.
///
/// # Safety
/// `buf` must point to `cap` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn wfx_function_copy_values(
    f: *const WfxFunction,
    buf: *mut f64,
    cap: usize,
) -> WfxStatus {
    let Some(f) = opt(f) else { return null_arg("f") };
    if buf.is_null() {
        return null_arg("buf");
    }
    let vals = f.0.values();
    if cap < vals.len() {
        set_last_error(format!("buffer holds {cap} values, need {}", vals.len()));
        return WfxStatus::WFX_INVALID_ARGUMENT;
    }
    std::ptr::copy_nonoverlapping(vals.as_ptr(), buf, vals.len());
    WfxStatus::WFX_OK
}

/// Release a function handle. Null is a no-op.
///
/// # Safety
/// `f` must be null or an unfreed pointer from this library.
#[no_mangle]
pub unsafe extern "C" fn wfx_function_free(f: *mut WfxFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Create a weight (strictly positive function) on `space`.
///
/// # Safety
/// `values` must point to `len` readable doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wfx_weight_new(
    space: *const WfxSpace,
    values: *const f64,
    len: usize,
    out: *mut *mut WfxWeight,
) -> WfxStatus {
    let Some(s) = opt(space) else { return null_arg("space") };
    if values.is_null() {
        return null_arg("values");
    }
    if out.is_null() {
        return null_arg("out");
    }
    let vals = std::slice::from_raw_parts(values, len).to_vec();
    match Weight::from_values(s.0.clone(), vals) {
        Ok(w) => give(out, WfxWeight(w)),
        Err(e) => fail(e),
    }
}

/// Release a weight handle. Null is a no-op.
///
/// # Safety
/// `w` must be null or an unfreed pointer from this library.
#[no_mangle]
pub unsafe extern "C" fn wfx_weight_free(w: *mut WfxWeight) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// Enumerate a basis over `space`.
///
/// # Safety
/// `space` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wfx_basis_new(
    space: *const WfxSpace,
    kind: WfxBasisKind,
    out: *mut *mut WfxBasis,
) -> WfxStatus {
    let Some(s) = opt(space) else { return null_arg("space") };
    if out.is_null() {
        return null_arg("out");
    }
    match enumerate(&s.0, kind.to_kind()) {
        Ok(b) => give(out, WfxBasis(b)),
        Err(e) => fail(e),
    }
}

/// Number of basis elements.
///
/// # Safety
/// `basis` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wfx_basis_len(basis: *const WfxBasis, out: *mut usize) -> WfxStatus {
    let Some(b) = opt(basis) else { return null_arg("basis") };
    if out.is_null() {
        return null_arg("out");
    }
    *out = b.0.len();
    WfxStatus::WFX_OK
}

/// Release a basis handle. Null is a no-op.
///
/// # Safety
/// `basis` must be null or an unfreed pointer from this library.
#[no_mangle]
pub unsafe extern "C" fn wfx_basis_free(basis: *mut WfxBasis) {
    if !basis.is_null() {
        drop(Box::from_raw(basis));
    }
}

unsafe fn unary_op(
    f: *const WfxFunction,
    out: *mut *mut WfxFunction,
    op: impl FnOnce(&GridFunction) -> wfx::Result<GridFunction>,
) -> WfxStatus {
    let Some(f) = opt(f) else { return null_arg("f") };
    if out.is_null() {
        return null_arg("out");
    }
    match op(&f.0) {
        Ok(g) => give(out, WfxFunction(g)),
        Err(e) => fail(e),
    }
}

/// Basis maximal operator M f.
///
/// # Safety
/// All handles must be live; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wfx_maximal(
    f: *const WfxFunction,
    basis: *const WfxBasis,
    out: *mut *mut WfxFunction,
) -> WfxStatus {
    let Some(b) = opt(basis) else { return null_arg("basis") };
    unary_op(f, out, |f| wfx::maximal::maximal(f, &b.0))
}

/// Discrete Hilbert transform H f.
///
/// # Safety
/// `f` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wfx_hilbert(
    f: *const WfxFunction,
    out: *mut *mut WfxFunction,
) -> WfxStatus {
    unary_op(f, out, hilbert)
}

/// Truncated square function of order `m` with lower cutoff `t0` in (0,1).
///
/// # Safety
/// `f` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wfx_square_function(
    f: *const WfxFunction,
    t0: f64,
    m: f64,
    out: *mut *mut WfxFunction,
) -> WfxStatus {
    unary_op(f, out, |f| square_function(f, t0, m))
}

unsafe fn weight_stat(
    w: *const WfxWeight,
    basis: *const WfxBasis,
    out: *mut f64,
    stat: impl FnOnce(&Weight, &Basis) -> wfx::Result<f64>,
) -> WfxStatus {
    let Some(w) = opt(w) else { return null_arg("w") };
    let Some(b) = opt(basis) else { return null_arg("basis") };
    if out.is_null() {
        return null_arg("out");
    }
    match stat(&w.0, &b.0) {
        Ok(v) => {
            *out = v;
            WfxStatus::WFX_OK
        }
        Err(e) => fail(e),
    }
}

/// Muckenhoupt constant [w]_{A_p}.
///
/// # Safety
/// All handles must be live; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wfx_ap_constant(
    w: *const WfxWeight,
    basis: *const WfxBasis,
    p: f64,
    out: *mut f64,
) -> WfxStatus {
    weight_stat(w, basis, out, |w, b| Ok(ap_constant(w, b, p)?.value))
}

/// Muckenhoupt constant [w]_{A_1}.
///
/// # Safety
/// All handles must be live; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wfx_a1_constant(
    w: *const WfxWeight,
    basis: *const WfxBasis,
    out: *mut f64,
) -> WfxStatus {
    weight_stat(w, basis, out, |w, b| Ok(a1_constant(w, b)?.value))
}

/// A_infinity constant: the infimum of [w]_{A_p} over 1 < p <= p_max.
///
/// # Safety
/// All handles must be live; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wfx_ainf_constant(
    w: *const WfxWeight,
    basis: *const WfxBasis,
    p_max: f64,
    out: *mut f64,
) -> WfxStatus {
    weight_stat(w, basis, out, |w, b| Ok(ainf_constant(w, b, p_max)?.value))
}

/// Reverse Holder constant [w]_{RH_s}, s > 1.
///
/// # Safety
/// All handles must be live; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wfx_rh_constant(
    w: *const WfxWeight,
    basis: *const WfxBasis,
    s: f64,
    out: *mut f64,
) -> WfxStatus {
    weight_stat(w, basis, out, |w, b| Ok(rh_constant(w, b, s)?.value))
}

/// Off-diagonal constant [w]_{A_{p,q}}.
///
/// # Safety
/// All handles must be live; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wfx_apq_constant(
    w: *const WfxWeight,
    basis: *const WfxBasis,
    p: f64,
    q: f64,
    out: *mut f64,
) -> WfxStatus {
    weight_stat(w, basis, out, |w, b| Ok(apq_constant(w, b, p, q)?.value))
}

/// BMO norm of `f` (sup over basis elements of the mean oscillation).
///
/// # Safety
/// All handles must be live; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wfx_bmo_norm(
    f: *const WfxFunction,
    basis: *const WfxBasis,
    out: *mut f64,
) -> WfxStatus {
    let Some(f) = opt(f) else { return null_arg("f") };
    let Some(b) = opt(basis) else { return null_arg("basis") };
    if out.is_null() {
        return null_arg("out");
    }
    match bmo_norm(&f.0, &b.0) {
        Ok(r) => {
            *out = r.value;
            WfxStatus::WFX_OK
        }
        Err(e) => fail(e),
    }
}

/// Damped Rubio de Francia series R h = sum_k M^k h / (2 n1)^k truncated at
/// `k` terms, for a caller-supplied maximal-operator bound `n1 >= 1`.
/// On success `*out` satisfies h <= *out pointwise and
/// [*out]_{A_1} <= 2 n1 up to the reported tail. If `tail_rel` is non-null
/// it receives the relative tail bound of the truncation.
///
/// # Safety
/// All handles must be live; `out` must be valid; `tail_rel` may be null.
#[no_mangle]
pub unsafe extern "C" fn wfx_rdf_majorant(
    h: *const WfxFunction,
    basis: *const WfxBasis,
    n1: f64,
    k: usize,
    out: *mut *mut WfxFunction,
    tail_rel: *mut f64,
) -> WfxStatus {
    let Some(h) = opt(h) else { return null_arg("h") };
    let Some(b) = opt(basis) else { return null_arg("basis") };
    if out.is_null() {
        return null_arg("out");
    }
    match rdf_majorant(&h.0.abs(), &b.0, n1, k) {
        Ok(maj) => {
            if !tail_rel.is_null() {
                *tail_rel = maj.tail_rel;
            }
            give(out, WfxFunction(maj.r))
        }
        Err(e) => fail(e),
    }
}

/// Build an A_{p0} weight adapted to the pair (f, g) with X = L^p (unit
/// weights), as in the norm-extrapolation construction. Returns the weight,
/// its A_{p0} constant, and whether every certificate inequality passed
/// (1 = yes).
///
/// # Safety
/// All handles must be live and on one grid; out-pointers may be null when
/// the corresponding value is not wanted, except `out_w`.
#[no_mangle]
pub unsafe extern "C" fn wfx_build_ap_weight_lp(
    f: *const WfxFunction,
    g: *const WfxFunction,
    basis: *const WfxBasis,
    x_p: f64,
    p0: f64,
    out_w: *mut *mut WfxWeight,
    out_ap: *mut f64,
    out_passed: *mut i32,
) -> WfxStatus {
    let Some(f) = opt(f) else { return null_arg("f") };
    let Some(g) = opt(g) else { return null_arg("g") };
    let Some(b) = opt(basis) else { return null_arg("basis") };
    if out_w.is_null() {
        return null_arg("out_w");
    }
    let spec = match SpaceSpec::new(SpaceFamily::Lp { p: x_p }, f.0.space()) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let cfg = RdfConfig::default();
    match build_ap_weight(&f.0, &g.0, &spec, &b.0, p0, &cfg) {
        Ok(build) => {
            if !out_ap.is_null() {
                *out_ap = build
                    .details
                    .get("ap_constant")
                    .or_else(|| build.details.get("a1_constant"))
                    .copied()
                    .unwrap_or(f64::NAN);
            }
            if !out_passed.is_null() {
                *out_passed = i32::from(build.passed());
            }
            give(out_w, WfxWeight(build.w))
        }
        Err(e) => fail(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    #[test]
    fn lifecycle_and_constants() {
        unsafe {
            let mut space: *mut WfxSpace = ptr::null_mut();
            assert_eq!(wfx_space_line(8, 0.125, &mut space), WfxStatus::WFX_OK);
            let mut n = 0usize;
            assert_eq!(wfx_space_len(space, &mut n), WfxStatus::WFX_OK);
            assert_eq!(n, 8);

            let mut basis: *mut WfxBasis = ptr::null_mut();
            assert_eq!(
                wfx_basis_new(space, WfxBasisKind::WFX_BASIS_INTERVALS, &mut basis),
                WfxStatus::WFX_OK
            );

            let ones = [1.0f64; 8];
            let mut w: *mut WfxWeight = ptr::null_mut();
            assert_eq!(wfx_weight_new(space, ones.as_ptr(), 8, &mut w), WfxStatus::WFX_OK);
            let mut value = 0.0f64;
            assert_eq!(wfx_ap_constant(w, basis, 2.0, &mut value), WfxStatus::WFX_OK);
            assert!((value - 1.0).abs() < 1e-12);

            let vals = [0.0, 1.0, 2.0, 1.0, 0.0, 0.0, 0.0, 0.0];
            let mut f: *mut WfxFunction = ptr::null_mut();
            assert_eq!(wfx_function_new(space, vals.as_ptr(), 8, &mut f), WfxStatus::WFX_OK);
            let mut mf: *mut WfxFunction = ptr::null_mut();
            assert_eq!(wfx_maximal(f, basis, &mut mf), WfxStatus::WFX_OK);
            let mut buf = [0.0f64; 8];
            assert_eq!(wfx_function_copy_values(mf, buf.as_mut_ptr(), 8), WfxStatus::WFX_OK);
            assert!(buf.iter().all(|&x| x >= 0.0));
            assert!((buf[2] - 2.0).abs() < 1e-12);

            wfx_function_free(mf);
            wfx_function_free(f);
            wfx_weight_free(w);
            wfx_basis_free(basis);
            wfx_space_free(space);
        }
    }

    #[test]
    fn errors_set_message_and_code() {
        unsafe {
            let mut space: *mut WfxSpace = ptr::null_mut();
            // 12 is not a power of two.
            let st = wfx_space_line(12, 0.125, &mut space);
            assert_eq!(st, WfxStatus::WFX_INVALID_ARGUMENT);
            let msg = wfx_last_error_message();
            assert!(!msg.is_null());

            assert_eq!(
                wfx_space_len(ptr::null(), &mut 0usize),
                WfxStatus::WFX_NULL_ARGUMENT
            );

            // Weight with a zero entry is rejected.
            let mut ok_space: *mut WfxSpace = ptr::null_mut();
            assert_eq!(wfx_space_line(4, 0.25, &mut ok_space), WfxStatus::WFX_OK);
            let bad = [1.0, 0.0, 1.0, 1.0];
            let mut w: *mut WfxWeight = ptr::null_mut();
            assert_eq!(
                wfx_weight_new(ok_space, bad.as_ptr(), 4, &mut w),
                WfxStatus::WFX_INVALID_ARGUMENT
            );
            wfx_space_free(ok_space);
        }
    }

    #[test]
    fn rdf_majorant_dominates() {
        unsafe {
            let mut space: *mut WfxSpace = ptr::null_mut();
            assert_eq!(wfx_space_line(16, 1.0 / 16.0, &mut space), WfxStatus::WFX_OK);
            let mut basis: *mut WfxBasis = ptr::null_mut();
            assert_eq!(
                wfx_basis_new(space, WfxBasisKind::WFX_BASIS_INTERVALS, &mut basis),
                WfxStatus::WFX_OK
            );
            let mut vals = [0.0f64; 16];
            vals[3] = 1.0;
            vals[4] = 2.0;
            let mut h: *mut WfxFunction = ptr::null_mut();
            assert_eq!(wfx_function_new(space, vals.as_ptr(), 16, &mut h), WfxStatus::WFX_OK);

            let mut r: *mut WfxFunction = ptr::null_mut();
            let mut tail = f64::NAN;
            assert_eq!(
                wfx_rdf_majorant(h, basis, 1.5, 40, &mut r, &mut tail),
                WfxStatus::WFX_OK
            );
            assert!(tail.is_finite() && tail < 1e-6);
            let mut buf = [0.0f64; 16];
            assert_eq!(wfx_function_copy_values(r, buf.as_mut_ptr(), 16), WfxStatus::WFX_OK);
            for i in 0..16 {
                assert!(buf[i] + 1e-12 >= vals[i]);
            }

            wfx_function_free(r);
            wfx_function_free(h);
            wfx_basis_free(basis);
            wfx_space_free(space);
        }
    }
}
