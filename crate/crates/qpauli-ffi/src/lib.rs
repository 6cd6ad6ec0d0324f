//! C ABI over the exact-moment library: status codes, JSON string results,
//! and an opaque sampler handle, so other languages can bind without
//! touching Rust types.
//!
//! Conventions:
//! - every function returns a [`QpStatus`]; out-parameters are written only
//!   on `Ok`;
//! - strings returned through `char**` are NUL-terminated, UTF-8, owned by
//!   the library, and must be released with [`qp_string_free`];
//! - on failure, a thread-local message is readable via
//!   [`qp_last_error_message`] until the next failing call on that thread;
//! - exact rationals serialize as `"numerator/denominator"` inside the JSON
//!   payloads, never as floating point.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::str::FromStr;

use qpauli::error::Error;
use qpauli::exact::Rational;
use qpauli::laws::mc::{mc_law, McLawReport};
use qpauli::laws::{exact_moments_up_to, VariableKind, VariableSpec};
use qpauli::output;
use qpauli::report::{run_suite, Suite};
use qpauli::weingarten::gram;

/// Result of every C-ABI call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum QpStatus {
    QpOk = 0,
    /// A required pointer argument was NULL.
    QpNullPointer = 1,
    /// Arguments were syntactically or semantically invalid.
    QpInvalidArgument = 2,
    /// The computation itself failed (singular matrix, cap exceeded, ...).
    QpComputeError = 3,
    /// A string argument was not valid UTF-8.
    QpUtf8Error = 4,
    /// Internal panic; the library state is still consistent.
    QpInternalError = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: QpStatus, msg: impl Into<String>) -> QpStatus {
    set_error(msg.into());
    status
}

fn fail_with(err: Error) -> QpStatus {
    let status = match err {
        Error::InvalidArgument(_)
        | Error::MissingParameter(_)
        | Error::OrderOutOfRange { .. }
        | Error::InvalidPartition(_) => QpStatus::QpInvalidArgument,
        _ => QpStatus::QpComputeError,
    };
    fail(status, err.to_string())
}

/// Message of the last failure on this thread, or NULL when the last call
/// succeeded. The pointer stays valid until the next failing call on the
/// same thread; do not free it.
#[no_mangle]
pub extern "C" fn qp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |c| c.as_ptr())
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be a pointer previously returned via a `char**` out-parameter
/// of this library, not yet freed; NULL is accepted and ignored.
#[no_mangle]
pub unsafe extern "C" fn qp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, QpStatus> {
    if ptr.is_null() {
        return Err(QpStatus::QpNullPointer);
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| QpStatus::QpUtf8Error)
}

fn write_string(out: *mut *mut c_char, s: String) -> QpStatus {
    let c = match CString::new(s) {
        Ok(c) => c,
        Err(_) => return fail(QpStatus::QpInternalError, "interior NUL in output"),
    };
    unsafe { *out = c.into_raw() };
    QpStatus::QpOk
}

fn parse_spec(variable: &str, t: Option<&str>) -> Result<VariableSpec, QpStatus> {
    let kind = VariableKind::from_str(variable).map_err(|e| fail_with(e))?;
    let t = match t {
        Some(s) => Some(Rational::from_str(s).map_err(|e| fail_with(e))?),
        None => None,
    };
    VariableSpec::new(kind, t).map_err(|e| fail_with(e))
}

fn guarded(f: impl FnOnce() -> QpStatus) -> QpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(QpStatus::QpInternalError, "internal panic"),
    }
}

/// Exact moment table as JSON (the same payload as `qpauli moments`).
///
/// `t` may be NULL for the parameter-free variables and must be an exact
/// rational like `"1/2"` for the interpolants.
///
/// # Safety
/// `variable` (and `t` when non-NULL) must be NUL-terminated strings;
/// `out_json` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qp_moments_json(
    variable: *const c_char,
    order: u32,
    t: *const c_char,
    out_json: *mut *mut c_char,
) -> QpStatus {
    if out_json.is_null() {
        return fail(QpStatus::QpNullPointer, "out_json is NULL");
    }
    let variable = match read_str(variable) {
        Ok(s) => s,
        Err(st) => return fail(st, "bad variable argument"),
    };
    let t = if t.is_null() {
        None
    } else {
        match read_str(t) {
            Ok(s) => Some(s),
            Err(st) => return fail(st, "bad t argument"),
        }
    };
    guarded(|| {
        let spec = match parse_spec(variable, t) {
            Ok(s) => s,
            Err(st) => return st,
        };
        if order == 0 {
            return fail(QpStatus::QpInvalidArgument, "order must be at least 1");
        }
        let symbolic =
            match exact_moments_up_to(spec.kind, order, spec.kind.moment_order_cap()) {
                Ok(m) => m,
                Err(e) => return fail_with(e),
            };
        let mut rows = Vec::with_capacity(symbolic.len());
        for (i, m) in symbolic.iter().enumerate() {
            let value = match (m.as_constant(), &spec.t) {
                (Some(c), _) => c,
                (None, Some(t)) => m.eval(t),
                (None, None) => {
                    return fail(QpStatus::QpInvalidArgument, "variable requires t")
                }
            };
            rows.push((i as u32 + 1, value));
        }
        write_string(
            out_json,
            output::moments_json(spec.kind.name(), spec.t.as_ref(), &rows),
        )
    })
}

/// Gram matrix and its exact inverse as JSON (same payload as
/// `qpauli weingarten`).
///
/// # Safety
/// `out_json` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qp_weingarten_json(k: u32, out_json: *mut *mut c_char) -> QpStatus {
    if out_json.is_null() {
        return fail(QpStatus::QpNullPointer, "out_json is NULL");
    }
    guarded(|| {
        let g = match gram(k as usize) {
            Ok(g) => g,
            Err(e) => return fail_with(e),
        };
        let inverse = match g.matrix().invert_fraction_free() {
            Ok(w) => w,
            Err(e) => return fail_with(e),
        };
        write_string(out_json, output::weingarten_json(&g, &inverse))
    })
}

/// Exact law of a weighted diagonal sum over the symmetric group, as JSON.
/// `weights` is four comma-separated rationals summing to one.
///
/// # Safety
/// `weights` must be a NUL-terminated string; `out_json` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qp_s4_law_json(
    weights: *const c_char,
    out_json: *mut *mut c_char,
) -> QpStatus {
    if out_json.is_null() {
        return fail(QpStatus::QpNullPointer, "out_json is NULL");
    }
    let weights = match read_str(weights) {
        Ok(s) => s,
        Err(st) => return fail(st, "bad weights argument"),
    };
    guarded(|| {
        let parts: Vec<&str> = weights.split(',').collect();
        if parts.len() != 4 {
            return fail(
                QpStatus::QpInvalidArgument,
                "weights must be four comma-separated rationals",
            );
        }
        let mut t = Vec::with_capacity(4);
        for p in parts {
            match Rational::from_str(p) {
                Ok(r) => t.push(r),
                Err(e) => return fail_with(e),
            }
        }
        let t: [Rational; 4] = t.try_into().expect("length checked");
        let law = match qpauli::s4::classical_law(&t) {
            Ok(l) => l,
            Err(e) => return fail_with(e),
        };
        write_string(out_json, output::s4_json(&t, &law))
    })
}

/// Runs a verification suite; on `Ok`, `failures_out` (when non-NULL)
/// receives the number of failed checks, and the status is `Ok` even when
/// checks fail — inspect the count.
///
/// # Safety
/// `suite` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn qp_verify(
    suite: *const c_char,
    max_k: u32,
    failures_out: *mut u32,
) -> QpStatus {
    let suite = match read_str(suite) {
        Ok(s) => s,
        Err(st) => return fail(st, "bad suite argument"),
    };
    guarded(|| {
        let suite = match Suite::from_str(suite) {
            Ok(s) => s,
            Err(e) => return fail_with(e),
        };
        if max_k == 0 {
            return fail(QpStatus::QpInvalidArgument, "max_k must be at least 1");
        }
        let checks = run_suite(suite, max_k as usize);
        let failures = checks.iter().filter(|c| !c.passed).count() as u32;
        if !failures_out.is_null() {
            *failures_out = failures;
        }
        QpStatus::QpOk
    })
}

/// Opaque seeded sampler for the spectral laws.
pub struct QpSampler {
    spec: VariableSpec,
    seed: u64,
    report: Option<McLawReport>,
}

/// Creates a sampler; `t` may be NULL exactly as in [`qp_moments_json`].
///
/// # Safety
/// `variable` (and `t` when non-NULL) must be NUL-terminated strings;
/// `out_sampler` must be a valid pointer. The handle must be released with
/// [`qp_sampler_free`].
#[no_mangle]
pub unsafe extern "C" fn qp_sampler_new(
    variable: *const c_char,
    t: *const c_char,
    seed: u64,
    out_sampler: *mut *mut QpSampler,
) -> QpStatus {
    if out_sampler.is_null() {
        return fail(QpStatus::QpNullPointer, "out_sampler is NULL");
    }
    let variable = match read_str(variable) {
        Ok(s) => s,
        Err(st) => return fail(st, "bad variable argument"),
    };
    let t = if t.is_null() {
        None
    } else {
        match read_str(t) {
            Ok(s) => Some(s),
            Err(st) => return fail(st, "bad t argument"),
        }
    };
    guarded(|| {
        let spec = match parse_spec(variable, t) {
            Ok(s) => s,
            Err(st) => return st,
        };
        let handle = Box::new(QpSampler {
            spec,
            seed,
            report: None,
        });
        *out_sampler = Box::into_raw(handle);
        QpStatus::QpOk
    })
}

/// Runs (or re-runs) the sampler with the stored seed; deterministic for a
/// fixed handle configuration.
///
/// # Safety
/// `sampler` must be a live handle from [`qp_sampler_new`].
#[no_mangle]
pub unsafe extern "C" fn qp_sampler_run(
    sampler: *mut QpSampler,
    samples: u64,
    max_order: u32,
) -> QpStatus {
    let Some(sampler) = sampler.as_mut() else {
        return fail(QpStatus::QpNullPointer, "sampler is NULL");
    };
    guarded(|| {
        match mc_law(&sampler.spec, samples, sampler.seed, max_order, 50) {
            Ok(report) => {
                sampler.report = Some(report);
                QpStatus::QpOk
            }
            Err(e) => fail_with(e),
        }
    })
}

/// Reads an empirical moment from the last run.
///
/// # Safety
/// `sampler` must be a live handle; `mean_out` and `stderr_out` must be
/// valid pointers.
#[no_mangle]
pub unsafe extern "C" fn qp_sampler_moment(
    sampler: *const QpSampler,
    order: u32,
    mean_out: *mut f64,
    stderr_out: *mut f64,
) -> QpStatus {
    let Some(sampler) = sampler.as_ref() else {
        return fail(QpStatus::QpNullPointer, "sampler is NULL");
    };
    if mean_out.is_null() || stderr_out.is_null() {
        return fail(QpStatus::QpNullPointer, "output pointer is NULL");
    }
    let Some(report) = &sampler.report else {
        return fail(QpStatus::QpInvalidArgument, "sampler has not been run");
    };
    if order == 0 || order as usize > report.moments.len() {
        return fail(
            QpStatus::QpInvalidArgument,
            format!("order must be in 1..={}", report.moments.len()),
        );
    }
    let m = &report.moments[order as usize - 1];
    *mean_out = m.mean;
    *stderr_out = m.stderr;
    QpStatus::QpOk
}

/// Full JSON payload of the last run (same as `qpauli mc`).
///
/// # Safety
/// `sampler` must be a live handle; `out_json` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qp_sampler_report_json(
    sampler: *const QpSampler,
    out_json: *mut *mut c_char,
) -> QpStatus {
    let Some(sampler) = sampler.as_ref() else {
        return fail(QpStatus::QpNullPointer, "sampler is NULL");
    };
    if out_json.is_null() {
        return fail(QpStatus::QpNullPointer, "out_json is NULL");
    }
    let Some(report) = &sampler.report else {
        return fail(QpStatus::QpInvalidArgument, "sampler has not been run");
    };
    write_string(out_json, output::mc_json(report, sampler.spec.t.as_ref()))
}

/// Releases a sampler handle; NULL is accepted and ignored.
///
/// # Safety
/// `sampler` must be a handle from [`qp_sampler_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qp_sampler_free(sampler: *mut QpSampler) {
    if !sampler.is_null() {
        drop(Box::from_raw(sampler));
    }
}
