//! C ABI over the traceform library.
//!
//! Conventions:
//! * Every constructor hands back an opaque handle through an out-pointer
//!   and returns a [`TfStatus`]; handles are released with the matching
//!   `tf_*_free` (safe on NULL).
//! * Buffers are caller-allocated; length arguments are checked.
//! * On any non-OK status, `tf_last_error_message()` returns a
//!   NUL-terminated description valid until the next failing call on the
//!   same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use traceform::ball;
use traceform::error::Error;
use traceform::graph1d;
use traceform::kernels::Kernel;
use traceform::measures::{AtomicMeasure, Measure, SphereFamilyMeasure};
use traceform::potentials::{
    hardy_constant_bounds, operator_matrix, potential_apply, potential_one_sup, resolvent_apply,
    EvaluationGrid, SymmetricOperator,
};
use traceform::spectra::{eigendecompose, SpectralResult};
use traceform::stationary::{stationary_solve, StationarySolutionField};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    CoincidentPoints = 3,
    DimensionMismatch = 4,
    InadmissibleMeasure = 5,
    SingularSystem = 6,
    ConvergenceFailure = 7,
    BracketFailure = 8,
    InternalError = 9,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let cstring = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(cstring));
}

fn status_from(err: &Error) -> TfStatus {
    set_error(&err.to_string());
    match err {
        Error::CoincidentPoints => TfStatus::CoincidentPoints,
        Error::DimensionMismatch { .. } => TfStatus::DimensionMismatch,
        Error::PolarAtomicSupport | Error::SphereKernelUnsupported => TfStatus::InadmissibleMeasure,
        Error::SingularSystem | Error::SingularMass(_) => TfStatus::SingularSystem,
        Error::ConvergenceFailure(_) | Error::NonpositiveEigenvalue(_) => {
            TfStatus::ConvergenceFailure
        }
        Error::BracketFailure { .. } => TfStatus::BracketFailure,
        _ => TfStatus::InvalidArgument,
    }
}

fn guarded(f: impl FnOnce() -> TfStatus) -> TfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            TfStatus::InternalError
        }
    }
}

/// Last error description for this thread, or NULL when no error occurred.
#[no_mangle]
pub extern "C" fn tf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |s| s.as_ptr())
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

// ---------------------------------------------------------------------------
// Kernels
// ---------------------------------------------------------------------------

/// Opaque Green-kernel handle.
pub struct TfKernel {
    inner: Kernel,
}

unsafe fn out_handle<T>(out: *mut *mut T, value: T) -> TfStatus {
    if out.is_null() {
        set_error("output pointer is NULL");
        return TfStatus::NullPointer;
    }
    *out = Box::into_raw(Box::new(value));
    TfStatus::Ok
}

/// `G(x,y) = e^{-|x-y|}/2` on the line.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn tf_kernel_exponential1d(out: *mut *mut TfKernel) -> TfStatus {
    guarded(|| {
        out_handle(
            out,
            TfKernel {
                inner: Kernel::Exponential1D,
            },
        )
    })
}

/// Newtonian kernel in dimension `d >= 3`.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn tf_kernel_newtonian(d: u32, out: *mut *mut TfKernel) -> TfStatus {
    guarded(|| match Kernel::newtonian(d) {
        Ok(k) => out_handle(out, TfKernel { inner: k }),
        Err(e) => status_from(&e),
    })
}

/// Riesz kernel of order `alpha` in dimension `d`.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn tf_kernel_riesz(d: u32, alpha: f64, out: *mut *mut TfKernel) -> TfStatus {
    guarded(|| match Kernel::riesz(d, alpha) {
        Ok(k) => out_handle(out, TfKernel { inner: k }),
        Err(e) => status_from(&e),
    })
}

/// Ambient dimension of the kernel (0 on NULL).
///
/// # Safety
/// `kernel` must be a live handle from a `tf_kernel_*` constructor or NULL.
#[no_mangle]
pub unsafe extern "C" fn tf_kernel_dim(kernel: *const TfKernel) -> usize {
    if kernel.is_null() {
        return 0;
    }
    (*kernel).inner.dim()
}

/// Evaluate `G(x, y)` for `dim`-dimensional points.
///
/// # Safety
/// `x` and `y` must point to `dim` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tf_kernel_eval(
    kernel: *const TfKernel,
    x: *const f64,
    y: *const f64,
    dim: usize,
    out: *mut f64,
) -> TfStatus {
    guarded(|| {
        if kernel.is_null() || x.is_null() || y.is_null() || out.is_null() {
            set_error("NULL argument");
            return TfStatus::NullPointer;
        }
        let xs = std::slice::from_raw_parts(x, dim);
        let ys = std::slice::from_raw_parts(y, dim);
        match (*kernel).inner.eval(xs, ys) {
            Ok(v) => {
                *out = v;
                TfStatus::Ok
            }
            Err(e) => status_from(&e),
        }
    })
}

/// Singularity triple `(beta, c, r0)` with `G <= c rho^{-beta}` below `r0`.
///
/// # Safety
/// All out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tf_kernel_singularity(
    kernel: *const TfKernel,
    beta: *mut f64,
    c_bound: *mut f64,
    r0: *mut f64,
) -> TfStatus {
    guarded(|| {
        if kernel.is_null() || beta.is_null() || c_bound.is_null() || r0.is_null() {
            set_error("NULL argument");
            return TfStatus::NullPointer;
        }
        let s = (*kernel).inner.singularity();
        *beta = s.beta;
        *c_bound = s.c_bound;
        *r0 = s.r0;
        TfStatus::Ok
    })
}

/// # Safety
/// `kernel` must come from a `tf_kernel_*` constructor (NULL is a no-op).
#[no_mangle]
pub unsafe extern "C" fn tf_kernel_free(kernel: *mut TfKernel) {
    if !kernel.is_null() {
        drop(Box::from_raw(kernel));
    }
}

// ---------------------------------------------------------------------------
// Measures
// ---------------------------------------------------------------------------

/// Opaque measure handle (atomic or concentric spheres).
pub struct TfMeasure {
    inner: Measure,
}

/// Finite atomic measure from `len` points of dimension `dim` (row-major)
/// with strictly positive weights.
///
/// # Safety
/// `points` must hold `len * dim` doubles, `weights` `len` doubles, and
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tf_measure_atomic(
    points: *const f64,
    weights: *const f64,
    len: usize,
    dim: usize,
    out: *mut *mut TfMeasure,
) -> TfStatus {
    guarded(|| {
        if points.is_null() || weights.is_null() || out.is_null() {
            set_error("NULL argument");
            return TfStatus::NullPointer;
        }
        let flat = std::slice::from_raw_parts(points, len * dim);
        let w = std::slice::from_raw_parts(weights, len);
        let pts: Vec<Vec<f64>> = flat.chunks(dim).map(|c| c.to_vec()).collect();
        match AtomicMeasure::new(pts, w.to_vec()) {
            Ok(m) => out_handle(
                out,
                TfMeasure {
                    inner: Measure::Atomic(m),
                },
            ),
            Err(e) => status_from(&e),
        }
    })
}

/// Concentric-sphere measure in R^3 from radii and masses.
///
/// # Safety
/// `radii` and `masses` must hold `len` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tf_measure_spheres(
    radii: *const f64,
    masses: *const f64,
    len: usize,
    out: *mut *mut TfMeasure,
) -> TfStatus {
    guarded(|| {
        if radii.is_null() || masses.is_null() || out.is_null() {
            set_error("NULL argument");
            return TfStatus::NullPointer;
        }
        let r = std::slice::from_raw_parts(radii, len);
        let m = std::slice::from_raw_parts(masses, len);
        match SphereFamilyMeasure::new(r.to_vec(), m.to_vec()) {
            Ok(s) => out_handle(
                out,
                TfMeasure {
                    inner: Measure::Spheres(s),
                },
            ),
            Err(e) => status_from(&e),
        }
    })
}

/// Total mass (NaN on NULL).
///
/// # Safety
/// `measure` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn tf_measure_total_mass(measure: *const TfMeasure) -> f64 {
    if measure.is_null() {
        return f64::NAN;
    }
    (*measure).inner.total_mass()
}

/// Number of atoms / spheres (0 on NULL).
///
/// # Safety
/// `measure` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn tf_measure_support_len(measure: *const TfMeasure) -> usize {
    if measure.is_null() {
        return 0;
    }
    (*measure).inner.support_len()
}

/// # Safety
/// `measure` must come from a `tf_measure_*` constructor (NULL is a no-op).
#[no_mangle]
pub unsafe extern "C" fn tf_measure_free(measure: *mut TfMeasure) {
    if !measure.is_null() {
        drop(Box::from_raw(measure));
    }
}

// ---------------------------------------------------------------------------
// Evaluation grids
// ---------------------------------------------------------------------------

/// Opaque evaluation-grid handle.
pub struct TfGrid {
    inner: EvaluationGrid,
}

/// Uniform 1-D grid on `[lo, hi]`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tf_grid_line(
    lo: f64,
    hi: f64,
    step: f64,
    out: *mut *mut TfGrid,
) -> TfStatus {
    guarded(|| match EvaluationGrid::line(lo, hi, step) {
        Ok(g) => out_handle(out, TfGrid { inner: g }),
        Err(e) => status_from(&e),
    })
}

/// Radial grid `(r, 0, 0)` in R^3 for `r` on `[lo, hi]`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tf_grid_radial(
    lo: f64,
    hi: f64,
    step: f64,
    out: *mut *mut TfGrid,
) -> TfStatus {
    guarded(|| match EvaluationGrid::radial(lo, hi, step) {
        Ok(g) => out_handle(out, TfGrid { inner: g }),
        Err(e) => status_from(&e),
    })
}

/// # Safety
/// `grid` must come from a `tf_grid_*` constructor (NULL is a no-op).
#[no_mangle]
pub unsafe extern "C" fn tf_grid_free(grid: *mut TfGrid) {
    if !grid.is_null() {
        drop(Box::from_raw(grid));
    }
}

// ---------------------------------------------------------------------------
// Potentials and the operator matrix
// ---------------------------------------------------------------------------

/// Opaque handle to the symmetric potential matrix `S = D^{1/2} G D^{1/2}`.
pub struct TfOperator {
    inner: SymmetricOperator,
}

/// Assemble the potential matrix of an admissible (kernel, measure) pair.
///
/// # Safety
/// `kernel` and `measure` must be live handles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tf_operator_new(
    kernel: *const TfKernel,
    measure: *const TfMeasure,
    out: *mut *mut TfOperator,
) -> TfStatus {
    guarded(|| {
        if kernel.is_null() || measure.is_null() || out.is_null() {
            set_error("NULL argument");
            return TfStatus::NullPointer;
        }
        match operator_matrix(&(*kernel).inner, &(*measure).inner) {
            Ok(op) => out_handle(out, TfOperator { inner: op }),
            Err(e) => status_from(&e),
        }
    })
}

/// Matrix size (0 on NULL).
///
/// # Safety
/// `op` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn tf_operator_size(op: *const TfOperator) -> usize {
    if op.is_null() {
        return 0;
    }
    (*op).inner.size()
}

/// Entry `S[i][j]`.
///
/// # Safety
/// `op` must be live; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tf_operator_entry(
    op: *const TfOperator,
    i: usize,
    j: usize,
    out: *mut f64,
) -> TfStatus {
    guarded(|| {
        if op.is_null() || out.is_null() {
            set_error("NULL argument");
            return TfStatus::NullPointer;
        }
        let n = (*op).inner.size();
        if i >= n || j >= n {
            set_error("index out of range");
            return TfStatus::InvalidArgument;
        }
        *out = (*op).inner.entry(i, j);
        TfStatus::Ok
    })
}

/// # Safety
/// `op` must come from `tf_operator_new` (NULL is a no-op).
#[no_mangle]
pub unsafe extern "C" fn tf_operator_free(op: *mut TfOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// `G^mu u(x)`: potential of the density `u` (one value per support
/// element) at a `dim`-dimensional point `x`.
///
/// # Safety
/// `u` must hold `u_len` doubles, `x` `dim` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tf_potential_apply(
    kernel: *const TfKernel,
    measure: *const TfMeasure,
    u: *const f64,
    u_len: usize,
    x: *const f64,
    dim: usize,
    out: *mut f64,
) -> TfStatus {
    guarded(|| {
        if kernel.is_null() || measure.is_null() || u.is_null() || x.is_null() || out.is_null() {
            set_error("NULL argument");
            return TfStatus::NullPointer;
        }
        let uu = std::slice::from_raw_parts(u, u_len);
        let xx = std::slice::from_raw_parts(x, dim);
        match potential_apply(&(*kernel).inner, &(*measure).inner, uu, xx) {
            Ok(v) => {
                *out = v;
                TfStatus::Ok
            }
            Err(e) => status_from(&e),
        }
    })
}

/// `max_grid G^mu 1` — the potential sup-norm over the grid.
///
/// # Safety
/// All handles must be live; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tf_potential_one_sup(
    kernel: *const TfKernel,
    measure: *const TfMeasure,
    grid: *const TfGrid,
    out: *mut f64,
) -> TfStatus {
    guarded(|| {
        if kernel.is_null() || measure.is_null() || grid.is_null() || out.is_null() {
            set_error("NULL argument");
            return TfStatus::NullPointer;
        }
        match potential_one_sup(&(*kernel).inner, &(*measure).inner, &(*grid).inner) {
            Ok(v) => {
                *out = v;
                TfStatus::Ok
            }
            Err(e) => status_from(&e),
        }
    })
}

/// Two-sided bracket of the best Hardy constant: exact `||K||` below, the
/// potential sup-norm above.
///
/// # Safety
/// All handles must be live; `lower` and `upper` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tf_hardy_bounds(
    kernel: *const TfKernel,
    measure: *const TfMeasure,
    grid: *const TfGrid,
    lower: *mut f64,
    upper: *mut f64,
) -> TfStatus {
    guarded(|| {
        if kernel.is_null()
            || measure.is_null()
            || grid.is_null()
            || lower.is_null()
            || upper.is_null()
        {
            set_error("NULL argument");
            return TfStatus::NullPointer;
        }
        match hardy_constant_bounds(&(*kernel).inner, &(*measure).inner, &(*grid).inner) {
            Ok((lo, hi)) => {
                *lower = lo;
                *upper = hi;
                TfStatus::Ok
            }
            Err(e) => status_from(&e),
        }
    })
}

/// Apply the resolvent `(I + alpha S)^{-1} S` to `psi` (length = matrix
/// size), writing the result into `out`.
///
/// # Safety
/// `psi` and `out` must hold `len` doubles matching the operator size.
#[no_mangle]
pub unsafe extern "C" fn tf_resolvent_apply(
    op: *const TfOperator,
    alpha: f64,
    psi: *const f64,
    len: usize,
    out: *mut f64,
) -> TfStatus {
    guarded(|| {
        if op.is_null() || psi.is_null() || out.is_null() {
            set_error("NULL argument");
            return TfStatus::NullPointer;
        }
        if len != (*op).inner.size() {
            set_error("length does not match the operator size");
            return TfStatus::DimensionMismatch;
        }
        let p = std::slice::from_raw_parts(psi, len);
        match resolvent_apply(&(*op).inner, alpha, p) {
            Ok(v) => {
                std::ptr::copy_nonoverlapping(v.as_ptr(), out, len);
                TfStatus::Ok
            }
            Err(e) => status_from(&e),
        }
    })
}

// ---------------------------------------------------------------------------
// Spectra
// ---------------------------------------------------------------------------

/// Opaque spectral-decomposition handle.
pub struct TfSpectrum {
    inner: SpectralResult,
}

/// Full eigendecomposition of the operator with the given multiplicity
/// clustering tolerance.
///
/// # Safety
/// `op` must be live; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tf_spectrum_new(
    op: *const TfOperator,
    multiplicity_tol: f64,
    out: *mut *mut TfSpectrum,
) -> TfStatus {
    guarded(|| {
        if op.is_null() || out.is_null() {
            set_error("NULL argument");
            return TfStatus::NullPointer;
        }
        match eigendecompose(&(*op).inner, multiplicity_tol) {
            Ok(s) => out_handle(out, TfSpectrum { inner: s }),
            Err(e) => status_from(&e),
        }
    })
}

/// Number of eigenvalues (0 on NULL).
///
/// # Safety
/// `spectrum` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn tf_spectrum_size(spectrum: *const TfSpectrum) -> usize {
    if spectrum.is_null() {
        return 0;
    }
    (*spectrum).inner.len()
}

unsafe fn copy_out(src: &[f64], buf: *mut f64, len: usize) -> TfStatus {
    if buf.is_null() {
        set_error("NULL buffer");
        return TfStatus::NullPointer;
    }
    if len < src.len() {
        set_error("buffer too small");
        return TfStatus::InvalidArgument;
    }
    std::ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
    TfStatus::Ok
}

/// Copy the descending eigenvalues of the potential operator.
///
/// # Safety
/// `buf` must hold at least `len >= tf_spectrum_size` doubles.
#[no_mangle]
pub unsafe extern "C" fn tf_spectrum_lambdas(
    spectrum: *const TfSpectrum,
    buf: *mut f64,
    len: usize,
) -> TfStatus {
    guarded(|| {
        if spectrum.is_null() {
            set_error("NULL spectrum");
            return TfStatus::NullPointer;
        }
        copy_out((*spectrum).inner.lambdas(), buf, len)
    })
}

/// Copy the ascending trace-form energies `E = 1/lambda`.
///
/// # Safety
/// `buf` must hold at least `len >= tf_spectrum_size` doubles.
#[no_mangle]
pub unsafe extern "C" fn tf_spectrum_energies(
    spectrum: *const TfSpectrum,
    buf: *mut f64,
    len: usize,
) -> TfStatus {
    guarded(|| {
        if spectrum.is_null() {
            set_error("NULL spectrum");
            return TfStatus::NullPointer;
        }
        copy_out((*spectrum).inner.energies(), buf, len)
    })
}

/// Copy the orthonormal eigenvector paired with `lambdas[k]`.
///
/// # Safety
/// `buf` must hold at least `len >= tf_spectrum_size` doubles.
#[no_mangle]
pub unsafe extern "C" fn tf_spectrum_eigenvector(
    spectrum: *const TfSpectrum,
    k: usize,
    buf: *mut f64,
    len: usize,
) -> TfStatus {
    guarded(|| {
        if spectrum.is_null() {
            set_error("NULL spectrum");
            return TfStatus::NullPointer;
        }
        if k >= (*spectrum).inner.len() {
            set_error("eigenvector index out of range");
            return TfStatus::InvalidArgument;
        }
        copy_out((*spectrum).inner.eigenvector(k), buf, len)
    })
}

/// # Safety
/// `spectrum` must come from `tf_spectrum_new` (NULL is a no-op).
#[no_mangle]
pub unsafe extern "C" fn tf_spectrum_free(spectrum: *mut TfSpectrum) {
    if !spectrum.is_null() {
        drop(Box::from_raw(spectrum));
    }
}

// ---------------------------------------------------------------------------
// Ball spectrum and lattice validation
// ---------------------------------------------------------------------------

/// First `count` positive zeros of the order-`m` spherical Bessel function.
///
/// # Safety
/// `buf` must hold `count` doubles.
#[no_mangle]
pub unsafe extern "C" fn tf_spherical_bessel_zeros(
    m: u32,
    count: usize,
    buf: *mut f64,
) -> TfStatus {
    guarded(|| {
        if buf.is_null() {
            set_error("NULL buffer");
            return TfStatus::NullPointer;
        }
        match ball::spherical_bessel_zeros(m, count) {
            Ok(z) => {
                std::ptr::copy_nonoverlapping(z.as_ptr(), buf, count);
                TfStatus::Ok
            }
            Err(e) => status_from(&e),
        }
    })
}

/// Degree-`m` eigenvalue of the unit-ball limit spectrum, certified to
/// absolute accuracy `tol`.
///
/// # Safety
/// All out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tf_ball_eigenvalue(
    m: u32,
    tol: f64,
    value: *mut f64,
    tail_bound: *mut f64,
    multiplicity: *mut u32,
) -> TfStatus {
    guarded(|| {
        if value.is_null() || tail_bound.is_null() || multiplicity.is_null() {
            set_error("NULL argument");
            return TfStatus::NullPointer;
        }
        match ball::ball_eigenvalue(m, tol) {
            Ok(e) => {
                *value = e.value;
                *tail_bound = e.tail_bound;
                *multiplicity = e.multiplicity;
                TfStatus::Ok
            }
            Err(e) => status_from(&e),
        }
    })
}

/// Estimate of the boundary-shell potential gap for shell index `n`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tf_annulus_potential_gap(
    n: u32,
    quadrature_points: usize,
    out: *mut f64,
) -> TfStatus {
    guarded(|| {
        if out.is_null() {
            set_error("NULL argument");
            return TfStatus::NullPointer;
        }
        match ball::annulus_potential_gap(n, quadrature_points) {
            Ok(v) => {
                *out = v;
                TfStatus::Ok
            }
            Err(e) => status_from(&e),
        }
    })
}

/// Cross-validate the lattice trace form against the kernel matrix for
/// weights `a_k` indexed `k = -n..n` (length `2n + 1`).
///
/// # Safety
/// `weights` must hold `len` doubles; out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tf_graph1d_cross_validate(
    weights: *const f64,
    len: usize,
    tol: f64,
    max_rel_discrepancy: *mut f64,
    pass: *mut bool,
) -> TfStatus {
    guarded(|| {
        if weights.is_null() || max_rel_discrepancy.is_null() || pass.is_null() {
            set_error("NULL argument");
            return TfStatus::NullPointer;
        }
        let w = std::slice::from_raw_parts(weights, len);
        match graph1d::cross_validate(w, tol) {
            Ok(report) => {
                *max_rel_discrepancy = report.max_rel_discrepancy;
                *pass = report.pass;
                TfStatus::Ok
            }
            Err(e) => status_from(&e),
        }
    })
}

// ---------------------------------------------------------------------------
// Stationary fields
// ---------------------------------------------------------------------------

/// Opaque stationary-solution handle.
pub struct TfStationaryField {
    inner: StationarySolutionField,
}

/// Solve `-Δu + alpha u mu = f mu` for a concentric-sphere measure with
/// radial data `f` (one value per sphere).
///
/// # Safety
/// `radii`, `masses`, and `data` must hold `len` doubles; `out` must be
/// valid.
#[no_mangle]
pub unsafe extern "C" fn tf_stationary_solve(
    radii: *const f64,
    masses: *const f64,
    data: *const f64,
    len: usize,
    alpha: f64,
    out: *mut *mut TfStationaryField,
) -> TfStatus {
    guarded(|| {
        if radii.is_null() || masses.is_null() || data.is_null() || out.is_null() {
            set_error("NULL argument");
            return TfStatus::NullPointer;
        }
        let r = std::slice::from_raw_parts(radii, len);
        let m = std::slice::from_raw_parts(masses, len);
        let f = std::slice::from_raw_parts(data, len);
        let spheres = match SphereFamilyMeasure::new(r.to_vec(), m.to_vec()) {
            Ok(s) => s,
            Err(e) => return status_from(&e),
        };
        match stationary_solve(&spheres, alpha, f) {
            Ok(field) => out_handle(out, TfStationaryField { inner: field }),
            Err(e) => status_from(&e),
        }
    })
}

/// Field value at radius `r` (NaN on NULL).
///
/// # Safety
/// `field` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn tf_stationary_eval_radial(field: *const TfStationaryField, r: f64) -> f64 {
    if field.is_null() {
        return f64::NAN;
    }
    (*field).inner.evaluate_radial(r)
}

/// # Safety
/// `field` must come from `tf_stationary_solve` (NULL is a no-op).
#[no_mangle]
pub unsafe extern "C" fn tf_stationary_free(field: *mut TfStationaryField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}
