//! C ABI for the menger-knots engine. All functions return an [`MkStatus`];
//! results come back through out-pointers to opaque handles. On any non-Ok
//! status, `mk_last_error` returns a human-readable message for the calling
//! thread. The generated header lives at `include/menger_knots.h`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use menger_knots::pipeline::LogEntry;
use menger_knots::{
    embed_in_menger, invariant_report, verify_certificate, CubicalKnot, Error,
    MengerCertificate, PipelineConfig,
};

/// Status codes shared by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MkStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidArgument = 2,
    InvalidKnot = 3,
    Degenerate = 4,
    PipelineFailed = 5,
    CertificateInvalid = 6,
    Utf8 = 7,
    Internal = 8,
}

/// Opaque handle to a validated cubical knot.
pub struct MkKnot {
    inner: CubicalKnot,
}

/// Opaque handle to a containment certificate.
pub struct MkCertificate {
    inner: MengerCertificate,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', "?")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> MkStatus {
    match err {
        Error::Parameter(_) | Error::OutOfBounds(_) | Error::Resource(_) => {
            MkStatus::InvalidArgument
        }
        Error::InvalidKnot(_) | Error::IllegalMove(_) => MkStatus::InvalidKnot,
        Error::Degenerate(_) => MkStatus::Degenerate,
        Error::Pipeline(_) => MkStatus::PipelineFailed,
        Error::Certificate(_) => MkStatus::CertificateInvalid,
        Error::Parse(_) => MkStatus::InvalidArgument,
        Error::Io(_) => MkStatus::Internal,
    }
}

fn fail(err: Error) -> MkStatus {
    set_error(&err.to_string());
    status_of(&err)
}

fn guarded<F: FnOnce() -> MkStatus>(f: F) -> MkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            MkStatus::Internal
        }
    }
}

/// Message describing the most recent error on this thread. The pointer is
/// owned by the library and valid until the next failing call on the same
/// thread.
#[no_mangle]
pub extern "C" fn mk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses and validates a knot from the ASCII knot file format.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mk_knot_parse(
    text: *const c_char,
    out: *mut *mut MkKnot,
) -> MkStatus {
    if text.is_null() || out.is_null() {
        set_error("null argument");
        return MkStatus::NullArgument;
    }
    guarded(|| {
        let s = match CStr::from_ptr(text).to_str() {
            Ok(s) => s,
            Err(_) => {
                set_error("knot text is not valid UTF-8");
                return MkStatus::Utf8;
            }
        };
        match CubicalKnot::from_file_str(s).and_then(CubicalKnot::validated) {
            Ok(k) => {
                *out = Box::into_raw(Box::new(MkKnot { inner: k }));
                MkStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Releases a knot handle. NULL is ignored.
///
/// # Safety
/// `knot` must have come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mk_knot_free(knot: *mut MkKnot) {
    if !knot.is_null() {
        drop(Box::from_raw(knot));
    }
}

/// Number of edges (= vertices) of the closed knot.
///
/// # Safety
/// `knot` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn mk_knot_edge_count(knot: *const MkKnot, out: *mut usize) -> MkStatus {
    if knot.is_null() || out.is_null() {
        set_error("null argument");
        return MkStatus::NullArgument;
    }
    *out = (*knot).inner.vertices.len();
    MkStatus::Ok
}

/// Scale exponent s: coordinates are integers in [0, 3^s].
///
/// # Safety
/// `knot` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn mk_knot_scale_exp(knot: *const MkKnot, out: *mut usize) -> MkStatus {
    if knot.is_null() || out.is_null() {
        set_error("null argument");
        return MkStatus::NullArgument;
    }
    *out = (*knot).inner.scale_exp;
    MkStatus::Ok
}

/// Fox p-coloring count from a seeded generic projection.
///
/// # Safety
/// `knot` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn mk_knot_fox_colorings(
    knot: *const MkKnot,
    prime: u64,
    seed: u64,
    out: *mut u64,
) -> MkStatus {
    if knot.is_null() || out.is_null() {
        set_error("null argument");
        return MkStatus::NullArgument;
    }
    guarded(|| match invariant_report(&(*knot).inner, &[prime], seed) {
        Ok(map) => {
            *out = map[&prime];
            MkStatus::Ok
        }
        Err(e) => fail(e),
    })
}

/// Runs the containment pipeline at the given depth and yields a
/// certificate handle.
///
/// # Safety
/// `knot` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn mk_pipeline_run(
    knot: *const MkKnot,
    target_depth: usize,
    seed: u64,
    out: *mut *mut MkCertificate,
) -> MkStatus {
    if knot.is_null() || out.is_null() {
        set_error("null argument");
        return MkStatus::NullArgument;
    }
    guarded(|| {
        let cfg = PipelineConfig { target_depth, seed, ..PipelineConfig::default() };
        match embed_in_menger(&(*knot).inner, &cfg) {
            Ok(cert) => {
                *out = Box::into_raw(Box::new(MkCertificate { inner: cert }));
                MkStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Releases a certificate handle. NULL is ignored.
///
/// # Safety
/// `cert` must have come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mk_certificate_free(cert: *mut MkCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// Parses a certificate from JSON.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mk_certificate_parse(
    text: *const c_char,
    out: *mut *mut MkCertificate,
) -> MkStatus {
    if text.is_null() || out.is_null() {
        set_error("null argument");
        return MkStatus::NullArgument;
    }
    guarded(|| {
        let s = match CStr::from_ptr(text).to_str() {
            Ok(s) => s,
            Err(_) => {
                set_error("certificate text is not valid UTF-8");
                return MkStatus::Utf8;
            }
        };
        match MengerCertificate::from_json(s) {
            Ok(c) => {
                *out = Box::into_raw(Box::new(MkCertificate { inner: c }));
                MkStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Serializes a certificate to JSON. Free the result with `mk_string_free`.
///
/// # Safety
/// `cert` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn mk_certificate_to_json(
    cert: *const MkCertificate,
    out: *mut *mut c_char,
) -> MkStatus {
    if cert.is_null() || out.is_null() {
        set_error("null argument");
        return MkStatus::NullArgument;
    }
    guarded(|| {
        let json = (*cert).inner.to_json();
        match CString::new(json) {
            Ok(c) => {
                *out = c.into_raw();
                MkStatus::Ok
            }
            Err(_) => {
                set_error("certificate JSON contained NUL");
                MkStatus::Internal
            }
        }
    })
}

/// Full independent re-check of a certificate.
///
/// # Safety
/// `cert` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mk_certificate_verify(cert: *const MkCertificate) -> MkStatus {
    if cert.is_null() {
        set_error("null argument");
        return MkStatus::NullArgument;
    }
    guarded(|| match verify_certificate(&(*cert).inner) {
        Ok(()) => MkStatus::Ok,
        Err(e) => fail(e),
    })
}

/// Number of elementary isotopy moves in the certificate log.
///
/// # Safety
/// `cert` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn mk_certificate_move_count(
    cert: *const MkCertificate,
    out: *mut usize,
) -> MkStatus {
    if cert.is_null() || out.is_null() {
        set_error("null argument");
        return MkStatus::NullArgument;
    }
    *out = (*cert)
        .inner
        .log
        .iter()
        .filter(|e| matches!(e, LogEntry::Move { .. }))
        .count();
    MkStatus::Ok
}

/// The isotoped knot, as a new handle.
///
/// # Safety
/// `cert` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn mk_certificate_final_knot(
    cert: *const MkCertificate,
    out: *mut *mut MkKnot,
) -> MkStatus {
    if cert.is_null() || out.is_null() {
        set_error("null argument");
        return MkStatus::NullArgument;
    }
    *out = Box::into_raw(Box::new(MkKnot { inner: (*cert).inner.final_knot.clone() }));
    MkStatus::Ok
}

/// Frees a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must have been returned by this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
