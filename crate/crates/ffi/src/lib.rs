//! C ABI over `taulab`.
//!
//! Every fallible function returns a [`TaulabStatus`] and writes its result
//! through an out pointer. On failure a message is kept per thread and can be
//! read with [`taulab_last_error`]. Strings handed out by this library must be
//! released with [`taulab_string_free`], instances with
//! [`taulab_instance_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_bigint::BigUint;
use taulab::cnf::{build_circuit, emit_dimacs, tseitin};
use taulab::format::{deserialize, serialize};
use taulab::lab::preimage::brute_force_preimage;
use taulab::tau::{format_hex, parse_value};
use taulab::{Error, Limits, TauInstance};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TaulabStatus {
    Ok = 0,
    NullPointer = 1,
    Utf8 = 2,
    InvalidArgument = 3,
    OutOfRange = 4,
    Parse = 5,
    Version = 6,
    Guard = 7,
    Invariant = 8,
    Sampling = 9,
    Panic = 10,
}

/// Opaque instance handle.
pub struct TaulabInstance {
    inner: TauInstance,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(TaulabStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Guard { .. } => TaulabStatus::Guard,
            Error::Invariant(_) => TaulabStatus::Invariant,
            Error::Parse(_) => TaulabStatus::Parse,
            Error::Version(_) => TaulabStatus::Version,
            Error::OutOfRange { .. } | Error::EmptyRange { .. } => TaulabStatus::OutOfRange,
            Error::SamplingExhausted { .. } | Error::ConstraintExhausted { .. } => TaulabStatus::Sampling,
            _ => TaulabStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(TaulabStatus::NullPointer, format!("{what} is null"))
}

fn run(f: impl FnOnce() -> Result<(), Failure>) -> TaulabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            TaulabStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            TaulabStatus::Panic
        }
    }
}

unsafe fn instance<'a>(p: *const TaulabInstance) -> Result<&'a TauInstance, Failure> {
    p.as_ref().map(|i| &i.inner).ok_or_else(|| null("instance"))
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(TaulabStatus::Utf8, format!("{what} is not UTF-8")))
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(v);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(TaulabStatus::Invariant, "string holds a nul byte".into()))?;
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(c.into_raw());
    Ok(())
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn taulab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn taulab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Samples an instance. `prime_width = 0` selects the default width.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn taulab_construct(
    n: u32,
    seed: u64,
    prime_width: u32,
    out: *mut *mut TaulabInstance,
) -> TaulabStatus {
    run(|| {
        let width = (prime_width != 0).then_some(prime_width);
        let inner = TauInstance::construct(n, seed, width)?;
        put(out, Box::into_raw(Box::new(TaulabInstance { inner })))
    })
}

/// Releases an instance; null is ignored.
///
/// # Safety
/// `p` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn taulab_instance_free(p: *mut TaulabInstance) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn taulab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Security parameter of an instance.
///
/// # Safety
/// `tau` must be a live instance and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn taulab_instance_n(tau: *const TaulabInstance, out: *mut u32) -> TaulabStatus {
    run(|| put(out, instance(tau)?.n()))
}

/// Writes the taulab-1 text of an instance.
///
/// # Safety
/// `tau` must be a live instance and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn taulab_serialize(tau: *const TaulabInstance, out: *mut *mut c_char) -> TaulabStatus {
    run(|| put_string(out, serialize(instance(tau)?)))
}

/// Parses and validates taulab-1 text.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn taulab_deserialize(text: *const c_char, out: *mut *mut TaulabInstance) -> TaulabStatus {
    run(|| {
        let inner = deserialize(c_str(text, "text")?)?;
        put(out, Box::into_raw(Box::new(TaulabInstance { inner })))
    })
}

/// Evaluates an instance with `n <= 64`.
///
/// # Safety
/// `tau` must be a live instance and `y` writable.
#[no_mangle]
pub unsafe extern "C" fn taulab_evaluate_u64(tau: *const TaulabInstance, x: u64, y: *mut u64) -> TaulabStatus {
    run(|| put(y, instance(tau)?.evaluate_u64(x)?))
}

/// Evaluates at `x` given in decimal or 0x-hex; `y` receives 0x-hex padded
/// to `n/4` digits.
///
/// # Safety
/// `tau` must be a live instance, `x` a nul-terminated string, `y` writable.
#[no_mangle]
pub unsafe extern "C" fn taulab_evaluate_str(
    tau: *const TaulabInstance,
    x: *const c_char,
    y: *mut *mut c_char,
) -> TaulabStatus {
    run(|| {
        let tau = instance(tau)?;
        let x = parse_value(c_str(x, "x")?)?;
        let v = tau.evaluate(&x)?;
        put_string(y, format_hex(&v, tau.n()))
    })
}

/// Number of preimages of `y` by exhaustive search, under the default guards
/// as raised by `TAULAB_MAX_N`.
///
/// # Safety
/// `tau` must be a live instance and `count` writable.
#[no_mangle]
pub unsafe extern "C" fn taulab_preimage_count(
    tau: *const TaulabInstance,
    y: u64,
    count: *mut u64,
) -> TaulabStatus {
    run(|| {
        let set = brute_force_preimage(instance(tau)?, y, &Limits::from_env()?)?;
        put(count, set.len() as u64)
    })
}

/// DIMACS text of the Tseitin CNF. `fixed_y` may be null; otherwise the
/// outputs are pinned to it (decimal or 0x-hex). The prime-width guard
/// applies.
///
/// # Safety
/// `tau` must be a live instance, `fixed_y` null or a nul-terminated string,
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn taulab_emit_dimacs(
    tau: *const TaulabInstance,
    fixed_y: *const c_char,
    out: *mut *mut c_char,
) -> TaulabStatus {
    run(|| {
        let tau = instance(tau)?;
        let y: Option<BigUint> = if fixed_y.is_null() {
            None
        } else {
            Some(parse_value(c_str(fixed_y, "fixed_y")?)?)
        };
        let cnf = tseitin(&build_circuit(tau, &Limits::from_env()?)?);
        put_string(out, emit_dimacs(&cnf, y.as_ref())?)
    })
}
