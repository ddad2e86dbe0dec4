//! C ABI over the tauhurwitz engine.
//!
//! Every fallible function returns a [`ThStatus`]; on failure the message is
//! available from [`th_last_error`] on the same thread. Strings returned
//! through `char **` out-parameters are owned by the caller and released with
//! [`th_string_free`]. Rationals cross the boundary as `"p/q"` strings.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tauhurwitz::hurwitz::{pure_hurwitz_frobenius, weighted_hurwitz_direct, ProfileTuple};
use tauhurwitz::matrix::{tau_at_x_determinant, tau_at_x_series, tau_at_x_wronskian, theorem_check, DiagonalMatrix};
use tauhurwitz::meijer::{mellin_barnes_phi, ComplexValue, ContourSpec};
use tauhurwitz::rational::{format_rational, parse_rational};
use tauhurwitz::spectral::phi_series;
use tauhurwitz::tau::extract_weighted_hurwitz;
use tauhurwitz::weights::DEFAULT_GUARD_BOUND;
use tauhurwitz::{Error, ErrorCode, Partition, WeightData};

/// Status codes; the nonzero values match the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThStatus {
    Ok = 0,
    /// A panic was caught inside the library.
    Internal = 1,
    /// Invalid argument or null pointer.
    Usage = 2,
    Domain = 3,
    Accuracy = 4,
    Capacity = 5,
}

/// Which evaluation path `th_tau_at_x` uses.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThTauMethod {
    Series = 0,
    Determinant = 1,
    Wronskian = 2,
}

/// Opaque weight data `(c, d, β, guard bound)`.
pub struct ThWeights {
    inner: WeightData,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let clean = msg.replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(clean).expect("no interior nul"));
}

fn status_of(e: &Error) -> ThStatus {
    match e.code() {
        ErrorCode::Success => ThStatus::Ok,
        ErrorCode::Usage => ThStatus::Usage,
        ErrorCode::Domain => ThStatus::Domain,
        ErrorCode::Accuracy => ThStatus::Accuracy,
        ErrorCode::Capacity => ThStatus::Capacity,
    }
}

fn guard(f: impl FnOnce() -> Result<(), Error>) -> ThStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ThStatus::Ok,
        Ok(Err(e)) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            ThStatus::Internal
        }
    }
}

fn null(what: &str) -> Error {
    Error::Argument(format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Error> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Error::Argument(format!("{what} is not UTF-8")))
}

unsafe fn slice_arg<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Error> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn weights_arg<'a>(w: *const ThWeights) -> Result<&'a WeightData, Error> {
    w.as_ref().map(|w| &w.inner).ok_or_else(|| null("weights"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Error> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = CString::new(s).expect("no interior nul").into_raw();
    Ok(())
}

unsafe fn write<T>(out: *mut T, v: T, what: &str) -> Result<(), Error> {
    if out.is_null() {
        return Err(null(what));
    }
    *out = v;
    Ok(())
}

/// Message of the last failure on this thread; empty after a success. The
/// pointer stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn th_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn th_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn th_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds weight data from `"p/q"` strings. `guard_bound = 0` selects the default.
///
/// # Safety
/// `c` and `d` point to `nc` and `nd` valid C strings; `beta` is a C string;
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn th_weights_new(
    c: *const *const c_char,
    nc: usize,
    d: *const *const c_char,
    nd: usize,
    beta: *const c_char,
    guard_bound: usize,
    out: *mut *mut ThWeights,
) -> ThStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        *out = ptr::null_mut();
        let parse_all = |p: *const *const c_char, n: usize, what: &str| -> Result<Vec<_>, Error> {
            slice_arg(p, n, what)?
                .iter()
                .map(|&s| parse_rational(str_arg(s, what)?))
                .collect()
        };
        let c = parse_all(c, nc, "c")?;
        let d = parse_all(d, nd, "d")?;
        let beta = parse_rational(str_arg(beta, "beta")?)?;
        let bound = if guard_bound == 0 { DEFAULT_GUARD_BOUND } else { guard_bound };
        let inner = WeightData::with_guard_bound(c, d, beta, bound)?;
        *out = Box::into_raw(Box::new(ThWeights { inner }));
        Ok(())
    })
}

/// Releases weight data. Null is ignored.
///
/// # Safety
/// `w` must come from `th_weights_new` and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn th_weights_free(w: *mut ThWeights) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

unsafe fn partition_arg(parts: *const usize, len: usize) -> Result<Partition, Error> {
    Partition::new(slice_arg(parts, len, "partition")?.to_vec())
}

/// `H^d(μ)` from the direct weighted sum, as a `"p/q"` string.
///
/// # Safety
/// `w` is a live handle, `mu` points to `mu_len` parts, `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn th_weighted_hurwitz(
    w: *const ThWeights,
    d: usize,
    mu: *const usize,
    mu_len: usize,
    out: *mut *mut c_char,
) -> ThStatus {
    guard(|| {
        let h = weighted_hurwitz_direct(weights_arg(w)?, d, &partition_arg(mu, mu_len)?)?;
        write_string(out, format_rational(&h))
    })
}

/// `H^d(μ)` read off the power-sum expansion of τ, as a `"p/q"` string.
///
/// # Safety
/// As for [`th_weighted_hurwitz`].
#[no_mangle]
pub unsafe extern "C" fn th_extract_weighted_hurwitz(
    w: *const ThWeights,
    d: usize,
    mu: *const usize,
    mu_len: usize,
    out: *mut *mut c_char,
) -> ThStatus {
    guard(|| {
        let h = extract_weighted_hurwitz(weights_arg(w)?, d, &partition_arg(mu, mu_len)?)?;
        write_string(out, format_rational(&h))
    })
}

/// Pure Hurwitz number of `k` profiles stored back to back in `parts`, the
/// `i`-th having `lengths[i]` parts.
///
/// # Safety
/// `lengths` has `k` entries and `parts` has their sum; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn th_pure_hurwitz(
    parts: *const usize,
    lengths: *const usize,
    k: usize,
    out: *mut *mut c_char,
) -> ThStatus {
    guard(|| {
        let lengths = slice_arg(lengths, k, "lengths")?;
        let flat = slice_arg(parts, lengths.iter().sum(), "parts")?;
        let mut profiles = Vec::with_capacity(k);
        let mut at = 0;
        for &len in lengths {
            profiles.push(Partition::new(flat[at..at + len].to_vec())?);
            at += len;
        }
        let h = pure_hurwitz_frobenius(&ProfileTuple::new(profiles)?)?;
        write_string(out, format_rational(&h))
    })
}

/// The `j`-th coefficient of `φ_k` and the power of `x` it multiplies.
///
/// # Safety
/// `exponent` and `out` are writable.
#[no_mangle]
pub unsafe extern "C" fn th_phi_coefficient(
    w: *const ThWeights,
    k: i64,
    j: usize,
    exponent: *mut i64,
    out: *mut *mut c_char,
) -> ThStatus {
    guard(|| {
        let phi = phi_series(weights_arg(w)?, k, j)?;
        write(exponent, phi.base_exponent + j as i64, "exponent")?;
        write_string(out, format_rational(&phi.coefficients[j]))
    })
}

/// `φ̃_k(x)` by contour quadrature. `tolerance <= 0` selects the default.
///
/// # Safety
/// `w` is a live handle; the output pointers are writable.
#[no_mangle]
pub unsafe extern "C" fn th_meijer_phi(
    w: *const ThWeights,
    k: i64,
    x_re: f64,
    x_im: f64,
    tolerance: f64,
    out_re: *mut f64,
    out_im: *mut f64,
    error_estimate: *mut f64,
) -> ThStatus {
    guard(|| {
        let mut spec = ContourSpec::default();
        if tolerance > 0.0 {
            spec.tolerance = tolerance;
        }
        let v = mellin_barnes_phi(weights_arg(w)?, k, ComplexValue::new(x_re, x_im), &spec)?;
        write(out_re, v.value.re, "out_re")?;
        write(out_im, v.value.im, "out_im")?;
        write(error_estimate, v.error_estimate, "error_estimate")
    })
}

/// `τ` at the diagonal matrix with eigenvalues `x[0..n]`. `level` is the
/// Schur truncation for the series path and the series order otherwise.
///
/// # Safety
/// `x` has `n` entries; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn th_tau_at_x(
    w: *const ThWeights,
    x: *const f64,
    n: usize,
    method: ThTauMethod,
    level: usize,
    out: *mut f64,
) -> ThStatus {
    guard(|| {
        let w = weights_arg(w)?;
        let m = DiagonalMatrix::new(slice_arg(x, n, "x")?.to_vec())?;
        let v = match method {
            ThTauMethod::Series => tau_at_x_series(w, &m, level, 1e-6)?.value,
            ThTauMethod::Determinant => tau_at_x_determinant(w, &m, level)?,
            ThTauMethod::Wronskian => tau_at_x_wronskian(w, &m, level)?,
        };
        write(out, v, "out")
    })
}

/// Relative discrepancy between `τ([X])` and its matrix-integral form.
///
/// # Safety
/// `x` has `n` positive entries; `discrepancy` is writable.
#[no_mangle]
pub unsafe extern "C" fn th_theorem_check(
    w: *const ThWeights,
    x: *const f64,
    n: usize,
    n_max: usize,
    discrepancy: *mut f64,
) -> ThStatus {
    guard(|| {
        let m = DiagonalMatrix::new(slice_arg(x, n, "x")?.to_vec())?;
        let r = theorem_check(weights_arg(w)?, &m, n_max, 1e-6)?;
        write(discrepancy, r.relative_discrepancy, "discrepancy")
    })
}
