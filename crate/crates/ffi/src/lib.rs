//! C ABI over `spade-core`.
//!
//! Every fallible function returns a [`SpadeStatus`] and writes its result
//! through an out-pointer. On failure a description is available from
//! [`spade_last_error`] on the same thread until the next call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use spade::estimate::invert_ratio;
use spade::fisher::{classical_fisher_exact, classical_fisher_smalld, pixelated_classical_fisher, qcrlb, quantum_fisher};
use spade::harness::SweepConfig;
use spade::{Error, ProjectionModel, PsfModel};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpadeStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    DataError = 3,
    NumericalError = 4,
    ModelError = 5,
    ConfigError = 6,
    IoError = 7,
    Panic = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpadePsfKind {
    Gaussian = 0,
    Sinc = 1,
}

/// Outcome probabilities of the two-mode projection at one separation.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SpadeProbabilities {
    pub delta: f64,
    pub p_0: f64,
    pub p_a: f64,
    pub p_lost: f64,
}

/// Opaque point-spread function.
pub struct SpadePsf(PsfModel);

/// Opaque two-mode projection measurement.
pub struct SpadeProjection(ProjectionModel);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> SpadeStatus {
    match err {
        Error::Parameter(_) => SpadeStatus::InvalidParameter,
        Error::Data(_) => SpadeStatus::DataError,
        Error::Numerical { .. } | Error::Bracket { .. } | Error::Degenerate(_) => SpadeStatus::NumericalError,
        Error::Model(_) => SpadeStatus::ModelError,
        Error::Config(_) => SpadeStatus::ConfigError,
        Error::Io(_) => SpadeStatus::IoError,
        Error::AtSeparation { source, .. } => status_of(source),
    }
}

fn guard<F: FnOnce() -> Result<(), SpadeStatus>>(f: F) -> SpadeStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SpadeStatus::Ok,
        Ok(Err(status)) => status,
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("internal panic: {msg}"));
            SpadeStatus::Panic
        }
    }
}

fn check<T>(r: spade::Result<T>) -> Result<T, SpadeStatus> {
    r.map_err(|e| {
        let status = status_of(&e);
        set_last_error(e.to_string());
        status
    })
}

fn null_error(what: &str) -> SpadeStatus {
    set_last_error(format!("null pointer: {what}"));
    SpadeStatus::NullPointer
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, SpadeStatus> {
    p.as_ref().ok_or_else(|| null_error(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), SpadeStatus> {
    if out.is_null() {
        return Err(null_error(what));
    }
    out.write(value);
    Ok(())
}

/// Message for the last failed call on this thread, or NULL.
///
/// The pointer stays valid until the next call into this library on the
/// same thread.
#[no_mangle]
pub extern "C" fn spade_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn spade_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates a built-in PSF of width σ (Gaussian) or w (sinc).
///
/// # Safety
/// `out` must be valid for writes. Release the handle with [`spade_psf_free`].
#[no_mangle]
pub unsafe extern "C" fn spade_psf_new(kind: SpadePsfKind, width: f64, out: *mut *mut SpadePsf) -> SpadeStatus {
    guard(|| {
        let psf = check(match kind {
            SpadePsfKind::Gaussian => PsfModel::gaussian(width),
            SpadePsfKind::Sinc => PsfModel::sinc(width),
        })?;
        write_out(out, Box::into_raw(Box::new(SpadePsf(psf))), "out")
    })
}

/// Creates a PSF from `n` amplitude samples `amps[i]` at positions `xs[i]`.
///
/// # Safety
/// `xs` and `amps` must point to `n` readable doubles; `out` must be valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn spade_psf_tabulated(
    xs: *const f64,
    amps: *const f64,
    n: usize,
    out: *mut *mut SpadePsf,
) -> SpadeStatus {
    guard(|| {
        if xs.is_null() || amps.is_null() {
            return Err(null_error("samples"));
        }
        let xs = std::slice::from_raw_parts(xs, n);
        let amps = std::slice::from_raw_parts(amps, n);
        let samples: Vec<(f64, f64)> = xs.iter().copied().zip(amps.iter().copied()).collect();
        let psf = check(PsfModel::tabulated(&samples))?;
        write_out(out, Box::into_raw(Box::new(SpadePsf(psf))), "out")
    })
}

/// # Safety
/// `psf` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn spade_psf_free(psf: *mut SpadePsf) {
    if !psf.is_null() {
        drop(Box::from_raw(psf));
    }
}

/// # Safety
/// `psf` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn spade_psf_width(psf: *const SpadePsf, out: *mut f64) -> SpadeStatus {
    guard(|| {
        let psf = deref(psf, "psf")?;
        write_out(out, psf.0.width(), "out")
    })
}

/// Quantum Fisher information per photon with respect to the separation.
///
/// # Safety
/// `psf` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn spade_quantum_fisher(psf: *const SpadePsf, out: *mut f64) -> SpadeStatus {
    guard(|| {
        let psf = deref(psf, "psf")?;
        write_out(out, check(quantum_fisher(&psf.0))?, "out")
    })
}

/// # Safety
/// `psf` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn spade_qcrlb(psf: *const SpadePsf, n_photons: u64, out: *mut f64) -> SpadeStatus {
    guard(|| {
        let psf = deref(psf, "psf")?;
        write_out(out, check(qcrlb(&psf.0, n_photons))?, "out")
    })
}

/// Classical Fisher information per photon of ideal direct imaging.
///
/// # Safety
/// `psf` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn spade_classical_fisher(psf: *const SpadePsf, delta: f64, out: *mut f64) -> SpadeStatus {
    guard(|| {
        let psf = deref(psf, "psf")?;
        write_out(out, check(classical_fisher_exact(&psf.0, delta))?, "out")
    })
}

/// Coefficient c in F_cl(δ) ≈ c·δ²; `divergent` is set to 1 when the
/// integral does not converge.
///
/// # Safety
/// `psf` must be a live handle; `out` and `divergent` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn spade_classical_fisher_smalld(
    psf: *const SpadePsf,
    out: *mut f64,
    divergent: *mut i32,
) -> SpadeStatus {
    guard(|| {
        let psf = deref(psf, "psf")?;
        let c = check(classical_fisher_smalld(&psf.0))?;
        write_out(divergent, c.divergent as i32, "divergent")?;
        write_out(out, c.value, "out")
    })
}

/// Classical Fisher information of a camera with `n_pixels` pixels of
/// width `pixel_width` centred on the axis.
///
/// # Safety
/// `psf` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn spade_pixelated_fisher(
    psf: *const SpadePsf,
    delta: f64,
    pixel_width: f64,
    n_pixels: usize,
    out: *mut f64,
) -> SpadeStatus {
    guard(|| {
        let psf = deref(psf, "psf")?;
        write_out(out, check(pixelated_classical_fisher(&psf.0, delta, pixel_width, n_pixels))?, "out")
    })
}

/// Builds the PSF-mode / antisymmetric-mode projection for `psf`.
///
/// # Safety
/// `psf` must be a live handle and `out` valid for writes. Release the
/// result with [`spade_projection_free`].
#[no_mangle]
pub unsafe extern "C" fn spade_projection_new(psf: *const SpadePsf, out: *mut *mut SpadeProjection) -> SpadeStatus {
    guard(|| {
        let psf = deref(psf, "psf")?;
        let model = check(ProjectionModel::new(&psf.0))?;
        write_out(out, Box::into_raw(Box::new(SpadeProjection(model))), "out")
    })
}

/// # Safety
/// `model` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn spade_projection_free(model: *mut SpadeProjection) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn spade_projection_probabilities(
    model: *const SpadeProjection,
    delta: f64,
    out: *mut SpadeProbabilities,
) -> SpadeStatus {
    guard(|| {
        let model = deref(model, "model")?;
        let p = check(model.0.probabilities(delta))?;
        write_out(
            out,
            SpadeProbabilities {
                delta: p.delta,
                p_0: p.p_0,
                p_a: p.p_a,
                p_lost: p.p_lost,
            },
            "out",
        )
    })
}

/// Per-photon Fisher information of the binary antisymmetric projection.
///
/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn spade_projection_binary_fisher(
    model: *const SpadeProjection,
    delta: f64,
    out: *mut f64,
) -> SpadeStatus {
    guard(|| {
        let model = deref(model, "model")?;
        write_out(out, check(model.0.binary_fisher(delta))?, "out")
    })
}

/// Upper end of the separation range the estimator can return.
///
/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn spade_projection_branch_peak(model: *const SpadeProjection, out: *mut f64) -> SpadeStatus {
    guard(|| {
        let model = deref(model, "model")?;
        write_out(out, model.0.branch_peak(), "out")
    })
}

/// Separation estimate from the counts in the two monitored modes.
///
/// # Safety
/// `model` must be a live handle; `delta_hat` and `clamped` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn spade_estimate_projection(
    model: *const SpadeProjection,
    n_0: u64,
    n_a: u64,
    delta_hat: *mut f64,
    clamped: *mut i32,
) -> SpadeStatus {
    guard(|| {
        let model = deref(model, "model")?;
        let denom = n_0
            .checked_add(n_a)
            .ok_or_else(|| {
                set_last_error("count overflow".into());
                SpadeStatus::DataError
            })?;
        if denom == 0 {
            set_last_error("invalid data: no photons in either monitored channel".into());
            return Err(SpadeStatus::DataError);
        }
        let (d, c) = check(invert_ratio(n_a as f64 / denom as f64, &model.0))?;
        write_out(clamped, c as i32, "clamped")?;
        write_out(delta_hat, d, "delta_hat")
    })
}

/// Runs a sweep described by a configuration text and returns the CSV
/// table. `workers` = 0 uses the default worker count.
///
/// # Safety
/// `config` must be a NUL-terminated string and `out` valid for writes. The
/// returned string must be released with [`spade_string_free`].
#[no_mangle]
pub unsafe extern "C" fn spade_sweep_csv(config: *const c_char, workers: usize, out: *mut *mut c_char) -> SpadeStatus {
    guard(|| {
        if config.is_null() {
            return Err(null_error("config"));
        }
        if out.is_null() {
            return Err(null_error("out"));
        }
        let text = CStr::from_ptr(config).to_str().map_err(|_| {
            set_last_error("configuration is not valid UTF-8".into());
            SpadeStatus::ConfigError
        })?;
        let cfg = check(SweepConfig::parse(text))?;
        let workers = if workers == 0 {
            check(spade::harness::worker_count())?
        } else {
            workers
        };
        let result = check(spade::harness::run_sweep_with_workers(&cfg, workers))?;
        let csv = CString::new(result.to_csv()).map_err(|_| SpadeStatus::DataError)?;
        write_out(out, csv.into_raw(), "out")
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn spade_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
