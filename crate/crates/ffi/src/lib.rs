//! C ABI over `projcong`.
//!
//! Every call returns a [`PcStatus`]. On failure the message is kept per
//! thread and read back with [`pc_last_error`]. Strings returned through
//! out-parameters are owned by the caller and released with
//! [`pc_string_free`]; polytopes with [`pc_polytope_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use projcong::direction_space::Mode;
use projcong::io::{parse_polytope, parse_vector_arg};
use projcong::pipeline::{decide_report, Config};
use projcong::shadow::planar_body;
use projcong::{Error, Polytope};

/// Opaque handle to an exact convex polytope.
pub struct PcPolytope(Polytope);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed file, bad dimension, degenerate or non-origin-interior input.
    InvalidInput = 3,
    /// Sampling or patching failed; another seed or more samples may help.
    Retryable = 4,
    /// The direction lies on the exceptional set or another precondition failed.
    Precondition = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PcMode {
    Projections = 0,
    Sections = 1,
}

impl From<PcMode> for Mode {
    fn from(m: PcMode) -> Mode {
        match m {
            PcMode::Projections => Mode::Projections,
            PcMode::Sections => Mode::Sections,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PcStatus {
    if e.is_retryable() {
        return PcStatus::Retryable;
    }
    match e {
        Error::ExceptionalDirection(_) | Error::Precondition(_) | Error::ZeroDirection => PcStatus::Precondition,
        _ => PcStatus::InvalidInput,
    }
}

struct Fail(PcStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> PcStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PcStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            PcStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(s: *const c_char) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(Fail(PcStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Fail(PcStatus::InvalidUtf8, e.to_string()))
}

unsafe fn handle<'a>(p: *const PcPolytope) -> Result<&'a Polytope, Fail> {
    p.as_ref()
        .map(|h| &h.0)
        .ok_or_else(|| Fail(PcStatus::NullPointer, "null polytope handle".into()))
}

fn check_out<T>(out: *mut T) -> Result<(), Fail> {
    if out.is_null() {
        Err(Fail(PcStatus::NullPointer, "null output pointer".into()))
    } else {
        Ok(())
    }
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("JSON has no interior nul").into_raw()
}

/// Parses `{"dim": 3, "vertices": [...]}` and takes the convex hull.
/// `float_tol <= 0` rejects floating-point coordinates.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pc_polytope_from_json(json: *const c_char, float_tol: f64, out: *mut *mut PcPolytope) -> PcStatus {
    guard(|| {
        check_out(out)?;
        let text = str_arg(json)?;
        let tol = (float_tol > 0.0).then_some(float_tol);
        let p = parse_polytope(text, tol)?;
        *out = Box::into_raw(Box::new(PcPolytope(p)));
        Ok(())
    })
}

/// # Safety
/// `p` must come from [`pc_polytope_from_json`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pc_polytope_free(p: *mut PcPolytope) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pc_polytope_vertex_count(p: *const PcPolytope, out: *mut usize) -> PcStatus {
    guard(|| {
        check_out(out)?;
        *out = handle(p)?.vertices().len();
        Ok(())
    })
}

/// Runs the full decision and writes the JSON report to `*out_json`.
/// `jobs == 0` uses the available parallelism.
///
/// A negative verdict is still `PC_STATUS_OK`; inspect `verdict.kind`.
///
/// # Safety
/// `p` and `q` must be live handles; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pc_decide(
    p: *const PcPolytope,
    q: *const PcPolytope,
    mode: PcMode,
    samples_per_cell: usize,
    seed: u64,
    jobs: usize,
    out_json: *mut *mut c_char,
) -> PcStatus {
    guard(|| {
        check_out(out_json)?;
        let cfg = Config {
            mode: mode.into(),
            samples_per_cell,
            seed,
            float_tol: None,
            jobs: (jobs > 0).then_some(jobs),
        };
        let report = decide_report(handle(p)?, handle(q)?, &cfg)?;
        *out_json = into_c_string(serde_json::to_string(&report).expect("reports serialize"));
        Ok(())
    })
}

/// Projection (or section) along `xi`, given as `"p,q,r"`, as PlanarBody JSON.
///
/// # Safety
/// `p` must be a live handle, `xi` a nul-terminated string and `out_json`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn pc_planar_body(
    p: *const PcPolytope,
    xi: *const c_char,
    mode: PcMode,
    out_json: *mut *mut c_char,
) -> PcStatus {
    guard(|| {
        check_out(out_json)?;
        let xi = parse_vector_arg(str_arg(xi)?)?;
        let body = planar_body(handle(p)?, &xi, mode.into())?;
        *out_json = into_c_string(serde_json::to_string(&body).expect("bodies serialize"));
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call on the same thread.
#[no_mangle]
pub extern "C" fn pc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
