//! C interface to `solvlck`.
//!
//! Algebras live behind the opaque [`SlkAlgebra`] handle. Every fallible call
//! returns an [`SlkStatus`]; after a failure, [`slk_last_error_message`]
//! describes it until the next call on the same thread. Strings handed out
//! through `char **` parameters are owned by the caller and must be released
//! with [`slk_string_free`].
//!
//! Inputs use the same JSON documents as the command-line tool.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use serde_json::{json, Value};
use solvlck::catalog;
use solvlck::cohomology::{betti, twisted_cohomology};
use solvlck::io::{
    algebra_spec, canonical, certificate_json, form_json, formality_json, parse_algebra_spec, parse_form,
    parse_metric,
};
use solvlck::lck::{formality_check, lee_form, vaisman_obstruction, InvariantMetric};
use solvlck::ot::{build_ot, FieldInput};
use solvlck::{Backend, Error, ErrorClass, LieAlgebra, MetaAbelianSplit, Rational, RealScalar};

/// Tolerance used when `tol` is passed as `0`.
pub const SLK_DEFAULT_TOLERANCE: f64 = 1e-9;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlkStatus {
    Ok = 0,
    /// Malformed or inconsistent input.
    InvalidInput = 2,
    /// A mathematical precondition does not hold.
    Precondition = 3,
    /// The number-field pipeline could not complete.
    Pipeline = 4,
    NullArgument = 10,
    /// The output buffer is too short; nothing was written.
    BufferTooSmall = 11,
    Internal = 12,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlkBackend {
    /// The scalar declared by the input document.
    FromInput = 0,
    Rational = 1,
    Float = 2,
}

enum Inner {
    Rational(LieAlgebra<Rational>, Option<MetaAbelianSplit<Rational>>),
    Float(LieAlgebra<f64>, Option<MetaAbelianSplit<f64>>),
}

/// A Lie algebra, optionally with a meta-abelian split.
pub struct SlkAlgebra {
    inner: Inner,
    tol: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

enum Failure {
    Lib(Error),
    Null(&'static str),
    Buffer { needed: usize, got: usize },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type FfiResult<T> = std::result::Result<T, Failure>;

fn guard(f: impl FnOnce() -> FfiResult<()>) -> SlkStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SlkStatus::Ok,
        Ok(Err(Failure::Lib(e))) => {
            set_error(format!("{}: {e}", e.kind()));
            match e.class() {
                ErrorClass::Input => SlkStatus::InvalidInput,
                ErrorClass::Precondition => SlkStatus::Precondition,
                ErrorClass::Pipeline => SlkStatus::Pipeline,
            }
        }
        Ok(Err(Failure::Null(name))) => {
            set_error(format!("null argument: {name}"));
            SlkStatus::NullArgument
        }
        Ok(Err(Failure::Buffer { needed, got })) => {
            set_error(format!("buffer holds {got} entries, {needed} needed"));
            SlkStatus::BufferTooSmall
        }
        Err(_) => {
            set_error("internal panic".into());
            SlkStatus::Internal
        }
    }
}

unsafe fn json_arg(p: *const c_char, name: &'static str) -> FfiResult<Value> {
    if p.is_null() {
        return Err(Failure::Null(name));
    }
    let s = CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Error::Parse(format!("{name} is not valid UTF-8")))?;
    Ok(serde_json::from_str(s).map_err(|e| Error::Parse(format!("{name}: {e}")))?)
}

unsafe fn str_arg<'a>(p: *const c_char, name: &'static str) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err(Failure::Null(name));
    }
    Ok(CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Error::Parse(format!("{name} is not valid UTF-8")))?)
}

unsafe fn algebra_arg<'a>(p: *const SlkAlgebra) -> FfiResult<&'a SlkAlgebra> {
    p.as_ref().ok_or(Failure::Null("algebra"))
}

unsafe fn out_arg<'a, T>(p: *mut T, name: &'static str) -> FfiResult<&'a mut T> {
    p.as_mut().ok_or(Failure::Null(name))
}

fn resolve_tol(tol: f64) -> FfiResult<f64> {
    if tol == 0.0 {
        Ok(SLK_DEFAULT_TOLERANCE)
    } else if tol.is_finite() && tol > 0.0 {
        Ok(tol)
    } else {
        Err(Error::Parse(format!("tolerance must be positive, got {tol}")).into())
    }
}

fn resolve_backend(b: SlkBackend, declared: Backend) -> Backend {
    match b {
        SlkBackend::FromInput => declared,
        SlkBackend::Rational => Backend::Rational,
        SlkBackend::Float => Backend::Float,
    }
}

fn write_string(out: &mut *mut c_char, v: &Value) {
    let text = CString::new(canonical(v)).expect("JSON has no interior NUL");
    *out = text.into_raw();
}

fn write_dims(dims: &[usize], out: *mut usize, len: usize) -> FfiResult<()> {
    if out.is_null() {
        return Err(Failure::Null("out"));
    }
    if len < dims.len() {
        return Err(Failure::Buffer {
            needed: dims.len(),
            got: len,
        });
    }
    // SAFETY: the caller guarantees `out` points to `len` writable entries.
    let buf = unsafe { std::slice::from_raw_parts_mut(out, dims.len()) };
    buf.copy_from_slice(dims);
    Ok(())
}

macro_rules! on_algebra {
    ($alg:expr, |$g:ident, $split:ident| $body:expr) => {
        match &$alg.inner {
            Inner::Rational($g, $split) => $body,
            Inner::Float($g, $split) => $body,
        }
    };
}

fn boxed(inner: Inner, tol: f64) -> *mut SlkAlgebra {
    Box::into_raw(Box::new(SlkAlgebra { inner, tol }))
}

/// Parses a `lie_algebra` document. `tol` of `0` selects the default.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn slk_algebra_from_json(
    json: *const c_char,
    backend: SlkBackend,
    tol: f64,
    out: *mut *mut SlkAlgebra,
) -> SlkStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let tol = resolve_tol(tol)?;
        let spec = parse_algebra_spec(json_arg(json, "json")?)?;
        let inner = match resolve_backend(backend, spec.scalar) {
            Backend::Rational => Inner::Rational(spec.to_algebra(tol)?, spec.to_split()?),
            Backend::Float => Inner::Float(spec.to_algebra(tol)?, spec.to_split()?),
        };
        *out = boxed(inner, tol);
        Ok(())
    })
}

/// Builds a catalog entry such as `"heisenberg:2"` or `"ot:3"`.
/// `SLK_BACKEND_FROM_INPUT` means rational.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn slk_algebra_catalog(
    name: *const c_char,
    backend: SlkBackend,
    tol: f64,
    out: *mut *mut SlkAlgebra,
) -> SlkStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let tol = resolve_tol(tol)?;
        let name = str_arg(name, "name")?;
        let inner = match resolve_backend(backend, Backend::Rational) {
            Backend::Rational => {
                let (g, split, _) = catalog::by_name::<Rational>(name, tol)?;
                Inner::Rational(g, split)
            }
            Backend::Float => {
                let (g, split, _) = catalog::by_name::<f64>(name, tol)?;
                Inner::Float(g, split)
            }
        };
        *out = boxed(inner, tol);
        Ok(())
    })
}

/// # Safety
/// `alg` must come from this library and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn slk_algebra_free(alg: *mut SlkAlgebra) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

/// Dimension of the algebra, or 0 for a null handle.
///
/// # Safety
/// `alg` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn slk_algebra_dim(alg: *const SlkAlgebra) -> usize {
    match alg.as_ref() {
        Some(a) => on_algebra!(a, |g, _s| g.dim()),
        None => 0,
    }
}

/// Serializes the algebra (with its split) as a `lie_algebra` document.
///
/// # Safety
/// `alg` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn slk_algebra_to_json(alg: *const SlkAlgebra, out: *mut *mut c_char) -> SlkStatus {
    guard(|| {
        let a = algebra_arg(alg)?;
        let out = out_arg(out, "out")?;
        let spec = on_algebra!(a, |g, s| algebra_spec(g, s.as_ref()));
        write_string(out, &serde_json::to_value(spec).expect("serializable"));
        Ok(())
    })
}

/// Writes the `dim + 1` Betti numbers to `out`.
///
/// # Safety
/// `alg` must be a live handle and `out` must hold `len` entries.
#[no_mangle]
pub unsafe extern "C" fn slk_betti(alg: *const SlkAlgebra, out: *mut usize, len: usize) -> SlkStatus {
    guard(|| {
        let a = algebra_arg(alg)?;
        let dims = on_algebra!(a, |g, _s| betti(g));
        write_dims(&dims, out, len)
    })
}

/// Writes the `dim + 1` dimensions of the cohomology twisted by the closed
/// 1-form given as a `form` document.
///
/// # Safety
/// `alg` must be a live handle, `theta_json` a NUL-terminated string and
/// `out` must hold `len` entries.
#[no_mangle]
pub unsafe extern "C" fn slk_twisted_betti(
    alg: *const SlkAlgebra,
    theta_json: *const c_char,
    out: *mut usize,
    len: usize,
) -> SlkStatus {
    guard(|| {
        let a = algebra_arg(alg)?;
        let theta = json_arg(theta_json, "theta_json")?;
        let dims = on_algebra!(a, |g, _s| twisted_cohomology(g, &parse_form(theta, g.dim())?)?);
        write_dims(&dims, out, len)
    })
}

/// Lee form of a non-degenerate 2-form, as `{"theta": form, "unique": bool}`.
///
/// # Safety
/// `alg` must be a live handle, `omega_json` a NUL-terminated string and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn slk_lee_form(
    alg: *const SlkAlgebra,
    omega_json: *const c_char,
    out: *mut *mut c_char,
) -> SlkStatus {
    guard(|| {
        let a = algebra_arg(alg)?;
        let omega = json_arg(omega_json, "omega_json")?;
        let out = out_arg(out, "out")?;
        let v = on_algebra!(a, |g, _s| {
            let lee = lee_form(g, &parse_form(omega, g.dim())?)?;
            json!({"theta": form_json(&lee.theta), "unique": lee.unique})
        });
        write_string(out, &v);
        Ok(())
    })
}

fn vaisman_value<S: RealScalar>(
    g: &LieAlgebra<S>,
    split: &Option<MetaAbelianSplit<S>>,
    omega: Value,
    theta: Option<Value>,
) -> FfiResult<Value> {
    let split = split
        .as_ref()
        .ok_or_else(|| Error::Parse("the algebra has no meta-abelian split".into()))?;
    let omega = parse_form::<S>(omega, g.dim())?;
    let theta = match theta {
        Some(v) => parse_form::<S>(v, g.dim())?,
        None => lee_form(g, &omega)?.theta,
    };
    let cert = vaisman_obstruction(g, split, &omega, &theta)?;
    Ok(certificate_json(g, &cert))
}

/// Runs the Vaisman obstruction check and returns the certificate.
/// `theta_json` may be null, in which case the Lee form of `ω` is used.
///
/// # Safety
/// `alg` must be a live handle, the JSON arguments NUL-terminated strings
/// (or null for `theta_json`) and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn slk_check_vaisman(
    alg: *const SlkAlgebra,
    omega_json: *const c_char,
    theta_json: *const c_char,
    out: *mut *mut c_char,
) -> SlkStatus {
    guard(|| {
        let a = algebra_arg(alg)?;
        let omega = json_arg(omega_json, "omega_json")?;
        let theta = if theta_json.is_null() {
            None
        } else {
            Some(json_arg(theta_json, "theta_json")?)
        };
        let out = out_arg(out, "out")?;
        let v = on_algebra!(a, |g, s| vaisman_value(g, s, omega, theta)?);
        write_string(out, &v);
        Ok(())
    })
}

/// Checks whether products of harmonic forms are harmonic for the given
/// `metric` document. `out_json` may be null.
///
/// # Safety
/// `alg` must be a live handle, `metric_json` a NUL-terminated string,
/// `formal` a valid pointer and `out_json` null or valid.
#[no_mangle]
pub unsafe extern "C" fn slk_formality(
    alg: *const SlkAlgebra,
    metric_json: *const c_char,
    formal: *mut bool,
    out_json: *mut *mut c_char,
) -> SlkStatus {
    guard(|| {
        let a = algebra_arg(alg)?;
        let metric = json_arg(metric_json, "metric_json")?;
        let formal = out_arg(formal, "formal")?;
        let (is_formal, v) = on_algebra!(a, |g, _s| {
            let m = InvariantMetric::new(parse_metric(metric, g.dim())?, a.tol)?;
            let r = formality_check(g, &m)?;
            (r.formal, formality_json(&r))
        });
        *formal = is_formal;
        if let Some(out) = out_json.as_mut() {
            write_string(out, &v);
        }
        Ok(())
    })
}

/// Runs the number-field pipeline on a `field_input` document. The report
/// (field data, algebra, `ω`, `θ`) goes to `out_json`. If `out_alg` is not
/// null it receives the algebra as a float handle.
///
/// # Safety
/// `field_json` must be a NUL-terminated string, `out_json` a valid pointer
/// and `out_alg` null or valid.
#[no_mangle]
pub unsafe extern "C" fn slk_build_ot(
    field_json: *const c_char,
    tol: f64,
    out_json: *mut *mut c_char,
    out_alg: *mut *mut SlkAlgebra,
) -> SlkStatus {
    guard(|| {
        let tol = resolve_tol(tol)?;
        let mut raw = json_arg(field_json, "field_json")?;
        let out = out_arg(out_json, "out_json")?;
        if let Some(kind) = raw.as_object_mut().and_then(|o| o.remove("kind")) {
            if kind != json!("field_input") {
                return Err(Error::Parse(format!("expected kind 'field_input', found {kind}")).into());
            }
        }
        let input: FieldInput =
            serde_json::from_value(raw).map_err(|e| Error::Parse(format!("field input: {e}")))?;
        let (data, ot) = build_ot(&input, tol)?;
        let mut field = serde_json::to_value(&data).expect("serializable");
        field["kind"] = json!("ot_field_data");
        let v = json!({
            "kind": "ot_build_report",
            "field": field,
            "algebra": serde_json::to_value(algebra_spec(&ot.algebra, Some(&ot.split))).expect("serializable"),
            "omega": ot.omega.as_ref().map(form_json),
            "theta": ot.theta.as_ref().map(form_json),
        });
        write_string(out, &v);
        if let Some(alg) = out_alg.as_mut() {
            *alg = boxed(Inner::Float(ot.algebra, Some(ot.split)), tol);
        }
        Ok(())
    })
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn slk_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, freed only once.
#[no_mangle]
pub unsafe extern "C" fn slk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn slk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
