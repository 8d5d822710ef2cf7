//! C ABI over generated-function artifacts.
//!
//! A handle is created from an artifact file or string, evaluated with raw bit
//! patterns, and released with [`oddlibm_free`]. Every fallible call returns an
//! [`OddlibmStatus`]; on failure the message is available from
//! [`oddlibm_last_error`] on the same thread until the next failing call.
//!
//! Inputs and outputs are the low `k` bits of a `uint64_t`, where `k` is the
//! width of the target format `F(k, ebits)`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use oddlibm::artifact;
use oddlibm::error::Error;
use oddlibm::formats::{FPBits, FPFormat};
use oddlibm::funcgen::GeneratedFunction;
use oddlibm::rounding::RoundingMode;

/// Status of a call. Zero is success.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OddlibmStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The artifact file could not be read.
    Io = 3,
    /// The artifact text is malformed.
    Parse = 4,
    /// The target width is outside `ebits + 2 ..= n`.
    UnsupportedTarget = 5,
    /// Unknown rounding mode, or round-to-odd where a standard mode is required.
    InvalidMode = 6,
    /// Verification found at least one incorrectly rounded result.
    VerificationFailed = 7,
    /// Any other failure, including a caught panic.
    Internal = 8,
}

/// Rounding mode codes accepted by [`oddlibm_evaluate`].
pub const ODDLIBM_RN: u32 = 0;
pub const ODDLIBM_RA: u32 = 1;
pub const ODDLIBM_RZ: u32 = 2;
pub const ODDLIBM_RU: u32 = 3;
pub const ODDLIBM_RD: u32 = 4;

/// Opaque handle to a loaded function.
pub struct OddlibmFunction {
    inner: GeneratedFunction,
    name: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).expect("no interior nul"));
}

fn status_of(e: &Error) -> OddlibmStatus {
    match e {
        Error::Io(_) => OddlibmStatus::Io,
        Error::Parse(_) | Error::InvalidFormat { .. } => OddlibmStatus::Parse,
        Error::TargetFormat { .. } => OddlibmStatus::UnsupportedTarget,
        _ => OddlibmStatus::Internal,
    }
}

fn fail(status: OddlibmStatus, msg: impl Into<String>) -> OddlibmStatus {
    set_error(msg);
    status
}

/// Runs `body`, turning errors and panics into statuses.
fn guard(body: impl FnOnce() -> Result<(), (OddlibmStatus, String)>) -> OddlibmStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => OddlibmStatus::Ok,
        Ok(Err((s, m))) => fail(s, m),
        Err(_) => fail(OddlibmStatus::Internal, "internal panic"),
    }
}

fn lift(e: Error) -> (OddlibmStatus, String) {
    (status_of(&e), e.to_string())
}

/// # Safety
/// `p` must be null or point to a nul-terminated string.
unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, (OddlibmStatus, String)> {
    if p.is_null() {
        return Err((OddlibmStatus::NullArgument, "null string argument".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (OddlibmStatus::InvalidUtf8, "string argument is not UTF-8".into()))
}

fn handle_ref<'a>(f: *const OddlibmFunction) -> Result<&'a OddlibmFunction, (OddlibmStatus, String)> {
    // SAFETY: non-null handles come from `into_handle` and stay valid until freed.
    unsafe { f.as_ref() }.ok_or((OddlibmStatus::NullArgument, "null function handle".into()))
}

fn out_ref<'a, T>(p: *mut T) -> Result<&'a mut T, (OddlibmStatus, String)> {
    // SAFETY: the caller passes a writable location or null.
    unsafe { p.as_mut() }.ok_or((OddlibmStatus::NullArgument, "null output pointer".into()))
}

fn into_handle(g: GeneratedFunction, out: *mut *mut OddlibmFunction) -> Result<(), (OddlibmStatus, String)> {
    let slot = out_ref(out)?;
    let name = CString::new(g.func.name()).expect("function names have no nul");
    *slot = Box::into_raw(Box::new(OddlibmFunction { inner: g, name }));
    Ok(())
}

/// Loads an artifact file. On success `*out` owns a new handle.
///
/// # Safety
/// `path` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn oddlibm_load(path: *const c_char, out: *mut *mut OddlibmFunction) -> OddlibmStatus {
    guard(|| {
        let p = str_arg(path)?;
        let g = artifact::load(Path::new(p)).map_err(lift)?;
        into_handle(g, out)
    })
}

/// Loads an artifact from its text. On success `*out` owns a new handle.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn oddlibm_load_str(text: *const c_char, out: *mut *mut OddlibmFunction) -> OddlibmStatus {
    guard(|| {
        let t = str_arg(text)?;
        let g = artifact::from_text(t).map_err(lift)?;
        into_handle(g, out)
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `f` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn oddlibm_free(f: *mut OddlibmFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Correctly rounded `f(x)` in `F(k, ebits)` under `mode` (an `ODDLIBM_R*`
/// code). `x` holds a `k`-bit pattern.
///
/// # Safety
/// `f` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn oddlibm_evaluate(
    f: *const OddlibmFunction,
    x: u64,
    k: u32,
    mode: u32,
    out: *mut u64,
) -> OddlibmStatus {
    guard(|| {
        let h = handle_ref(f)?;
        let mode = match RoundingMode::from_code(mode) {
            Some(m) if m != RoundingMode::Ro => m,
            _ => return Err((OddlibmStatus::InvalidMode, format!("unsupported rounding mode code {mode}"))),
        };
        let g = &h.inner;
        let tk = FPFormat::new(k, g.tn.exponent_bits()).map_err(|_| {
            (
                OddlibmStatus::UnsupportedTarget,
                format!("F({k},{}) is not a valid format", g.tn.exponent_bits()),
            )
        })?;
        g.check_target(tk).map_err(lift)?;
        let y = g.evaluate(FPBits::new(tk, x & tk.mask()), mode).map_err(lift)?;
        *out_ref(out)? = y.bits();
        Ok(())
    })
}

/// Round-to-odd result in `F(n + 2, ebits)` for an `n`-bit input pattern.
///
/// # Safety
/// `f` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn oddlibm_evaluate_rno(f: *const OddlibmFunction, x: u64, out: *mut u64) -> OddlibmStatus {
    guard(|| {
        let g = &handle_ref(f)?.inner;
        let y = g.evaluate_rno(FPBits::new(g.tn, x & g.tn.mask()));
        *out_ref(out)? = y.bits();
        Ok(())
    })
}

/// Design format `F(n, ebits)` and the supported target widths `k_min..=k_max`.
///
/// # Safety
/// `f` must be a live handle; every output pointer must be writable.
#[no_mangle]
pub unsafe extern "C" fn oddlibm_format(
    f: *const OddlibmFunction,
    n: *mut u32,
    ebits: *mut u32,
    k_min: *mut u32,
    k_max: *mut u32,
) -> OddlibmStatus {
    guard(|| {
        let g = &handle_ref(f)?.inner;
        let range = g.target_range();
        *out_ref(n)? = g.tn.total_bits();
        *out_ref(ebits)? = g.tn.exponent_bits();
        *out_ref(k_min)? = *range.start();
        *out_ref(k_max)? = *range.end();
        Ok(())
    })
}

/// Function name such as `ln`, owned by the handle.
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn oddlibm_function_name(f: *const OddlibmFunction) -> *const c_char {
    match f.as_ref() {
        Some(h) => h.name.as_ptr(),
        None => std::ptr::null(),
    }
}

/// Exhaustively checks every target and mode; `*all_pass` is 1 when every
/// result is correctly rounded. Returns `VerificationFailed` otherwise.
///
/// # Safety
/// `f` must be a live handle and `all_pass` writable.
#[no_mangle]
pub unsafe extern "C" fn oddlibm_verify(f: *const OddlibmFunction, all_pass: *mut i32) -> OddlibmStatus {
    guard(|| {
        let g = &handle_ref(f)?.inner;
        let report = oddlibm::verify::check_all(g).map_err(lift)?;
        let pass = report.all_pass();
        *out_ref(all_pass)? = pass as i32;
        if pass {
            Ok(())
        } else {
            Err((
                OddlibmStatus::VerificationFailed,
                format!("{} incorrectly rounded results", report.mismatches()),
            ))
        }
    })
}

/// Message of the last failing call on this thread; empty if none. Valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn oddlibm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
