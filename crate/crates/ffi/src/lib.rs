//! C ABI for `mzv-hopf`.
//!
//! Fallible functions return an [`MzvStatus`]. On failure the message can be
//! read with [`mzv_last_error`] on the same thread. Strings handed out through
//! `char **` belong to the caller and are released with [`mzv_string_free`].
//! Handles are released with their `_free` function; passing `NULL` to any
//! `_free` function is a no-op.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mzv_hopf::cli::{eval_object, EvalObject, Format, RunConfig};
use mzv_hopf::numeric::LimitPolicy;
use mzv_hopf::qexp::fourier_expansion;
use mzv_hopf::regularization::reg_decompose_poly;
use mzv_hopf::{hopf, Error, EvalContext, FreePoly, Index, Mode, NumericConfig, StuffleDiamond};
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MzvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Subspace = 4,
    Pole = 5,
    InvalidArgument = 6,
    NonConvergence = 7,
    Tolerance = 8,
    Invariant = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MzvMode {
    Stuffle = 0,
    Shuffle = 1,
}

/// Numeric objects accepted by [`mzv_eval`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MzvObject {
    Mzv = 0,
    HurwitzTrunc = 1,
    HurwitzReg = 2,
    MultitangentTrunc = 3,
    MultitangentReg = 4,
    MesTrunc = 5,
    GhatTrunc = 6,
    Gstar = 7,
    ZetaStar = 8,
    MesStar = 9,
    Fourier = 10,
}

/// A complex value with an absolute error estimate.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MzvEstimate {
    pub re: f64,
    pub im: f64,
    pub error: f64,
}

/// Evaluation settings: `τ`, truncations, tolerance and limit policy.
pub struct MzvContext {
    rc: RunConfig,
}

/// A finite rational combination of index words.
pub struct MzvPoly {
    poly: FreePoly<Index>,
}

struct Failure(MzvStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse(_) => MzvStatus::Parse,
            Error::Subspace { .. } => MzvStatus::Subspace,
            Error::Pole(_) => MzvStatus::Pole,
            Error::InvalidArgument(_) => MzvStatus::InvalidArgument,
            Error::NonConvergence(_) => MzvStatus::NonConvergence,
            Error::Tolerance { .. } => MzvStatus::Tolerance,
            Error::Invariant(_) => MzvStatus::Invariant,
        };
        Failure(status, e.to_string())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> MzvStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            MzvStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            MzvStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(MzvStatus::NullPointer, format!("{what} is NULL"))
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn borrow_mut<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(MzvStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn read_index(s: *const c_char) -> Result<Index, Failure> {
    Ok(read_str(s, "word")?.parse::<Index>()?)
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    let c = CString::new(s).map_err(|_| Failure(MzvStatus::Invariant, "interior NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn write_poly(out: *mut *mut MzvPoly, poly: FreePoly<Index>) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(MzvPoly { poly }));
    Ok(())
}

fn json(v: &impl serde::Serialize) -> Result<String, Failure> {
    serde_json::to_string(v).map_err(|e| Failure(MzvStatus::Invariant, e.to_string()))
}

fn mode(m: MzvMode) -> Mode {
    match m {
        MzvMode::Stuffle => Mode::Stuffle,
        MzvMode::Shuffle => Mode::Shuffle,
    }
}

fn object(o: MzvObject) -> EvalObject {
    match o {
        MzvObject::Mzv => EvalObject::Mzv,
        MzvObject::HurwitzTrunc => EvalObject::HurwitzTrunc,
        MzvObject::HurwitzReg => EvalObject::HurwitzReg,
        MzvObject::MultitangentTrunc => EvalObject::MultitangentTrunc,
        MzvObject::MultitangentReg => EvalObject::MultitangentReg,
        MzvObject::MesTrunc => EvalObject::MesTrunc,
        MzvObject::GhatTrunc => EvalObject::GhatTrunc,
        MzvObject::Gstar => EvalObject::Gstar,
        MzvObject::ZetaStar => EvalObject::ZetaStar,
        MzvObject::MesStar => EvalObject::MesStar,
        MzvObject::Fourier => EvalObject::Fourier,
    }
}

/// Message of the last failed call on this thread, or `NULL` if the last call
/// succeeded. The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn mzv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be `NULL` or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mzv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// A context with default settings: `τ = i`, `N = 1000`, `M = 20`,
/// tolerance `1e-8`, adaptive limit in `M`.
#[no_mangle]
pub extern "C" fn mzv_context_new() -> *mut MzvContext {
    let rc = RunConfig {
        format: Format::Json,
        output: None,
        ctx: EvalContext::default(),
        cfg: NumericConfig::default(),
    };
    Box::into_raw(Box::new(MzvContext { rc }))
}

/// # Safety
/// `ctx` must be `NULL` or a handle from [`mzv_context_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mzv_context_free(ctx: *mut MzvContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// # Safety
/// `ctx` must be a live context handle.
#[no_mangle]
pub unsafe extern "C" fn mzv_context_set_tau(ctx: *mut MzvContext, re: f64, im: f64) -> MzvStatus {
    guard(|| {
        let ctx = borrow_mut(ctx, "ctx")?;
        let mut next = ctx.rc.ctx.clone();
        next.tau = Complex64::new(re, im);
        next.validate()?;
        ctx.rc.ctx = next;
        Ok(())
    })
}

/// Sets the inner truncation `N` and the outer truncation `M`.
///
/// # Safety
/// `ctx` must be a live context handle.
#[no_mangle]
pub unsafe extern "C" fn mzv_context_set_truncation(
    ctx: *mut MzvContext,
    n: usize,
    m: usize,
) -> MzvStatus {
    guard(|| {
        let ctx = borrow_mut(ctx, "ctx")?;
        let mut next = ctx.rc.ctx.clone();
        next.n = n;
        next.m = m;
        next.m_budget = next.m_budget.max(m);
        next.validate()?;
        ctx.rc.ctx = next;
        Ok(())
    })
}

/// # Safety
/// `ctx` must be a live context handle.
#[no_mangle]
pub unsafe extern "C" fn mzv_context_set_tolerance(
    ctx: *mut MzvContext,
    tolerance: f64,
) -> MzvStatus {
    guard(|| {
        let ctx = borrow_mut(ctx, "ctx")?;
        let mut next = ctx.rc.ctx.clone();
        next.tolerance = tolerance;
        next.validate()?;
        ctx.rc.ctx = next;
        ctx.rc.cfg = NumericConfig::with_tolerance(tolerance);
        Ok(())
    })
}

/// Chooses the limit policy in `M`. With `adaptive`, `M` grows up to
/// `m_budget` until the value is stable.
///
/// # Safety
/// `ctx` must be a live context handle.
#[no_mangle]
pub unsafe extern "C" fn mzv_context_set_policy(
    ctx: *mut MzvContext,
    adaptive: bool,
    m_budget: usize,
) -> MzvStatus {
    guard(|| {
        let ctx = borrow_mut(ctx, "ctx")?;
        let mut next = ctx.rc.ctx.clone();
        next.policy = if adaptive {
            LimitPolicy::Adaptive
        } else {
            LimitPolicy::Fixed
        };
        next.m_budget = m_budget;
        next.validate()?;
        ctx.rc.ctx = next;
        Ok(())
    })
}

/// Value substituted for `T` in regularized multiple zeta values.
///
/// # Safety
/// `ctx` must be a live context handle.
#[no_mangle]
pub unsafe extern "C" fn mzv_context_set_t_value(
    ctx: *mut MzvContext,
    re: f64,
    im: f64,
) -> MzvStatus {
    guard(|| {
        borrow_mut(ctx, "ctx")?.rc.ctx.t_value = Complex64::new(re, im);
        Ok(())
    })
}

/// Parses a word such as `"3,2"` or `"z3z2"` into a one-term polynomial.
///
/// # Safety
/// `word` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mzv_poly_from_word(
    word: *const c_char,
    out: *mut *mut MzvPoly,
) -> MzvStatus {
    guard(|| write_poly(out, FreePoly::from_word(read_index(word)?)))
}

/// # Safety
/// `p` must be `NULL` or a polynomial handle, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mzv_poly_free(p: *mut MzvPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// `a + b`.
///
/// # Safety
/// `a` and `b` must be live polynomial handles and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mzv_poly_add(
    a: *const MzvPoly,
    b: *const MzvPoly,
    out: *mut *mut MzvPoly,
) -> MzvStatus {
    guard(|| {
        let (a, b) = (borrow(a, "a")?, borrow(b, "b")?);
        write_poly(out, &a.poly + &b.poly)
    })
}

/// Stuffle or shuffle product of two polynomials.
///
/// # Safety
/// `a` and `b` must be live polynomial handles and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mzv_poly_product(
    a: *const MzvPoly,
    b: *const MzvPoly,
    m: MzvMode,
    out: *mut *mut MzvPoly,
) -> MzvStatus {
    guard(|| {
        let (a, b) = (borrow(a, "a")?, borrow(b, "b")?);
        write_poly(out, mode(m).product_poly(&a.poly, &b.poly))
    })
}

/// Antipode of the stuffle Hopf algebra.
///
/// # Safety
/// `p` must be a live polynomial handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mzv_poly_antipode(p: *const MzvPoly, out: *mut *mut MzvPoly) -> MzvStatus {
    guard(|| {
        let p = borrow(p, "p")?;
        let mut acc = FreePoly::zero();
        for (w, c) in p.poly.terms() {
            acc.add_scaled(&hopf::antipode(w, &StuffleDiamond), c);
        }
        write_poly(out, acc)
    })
}

/// Text form, e.g. `"z2z3 + z3z2 + z5"`.
///
/// # Safety
/// `p` must be a live polynomial handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mzv_poly_to_string(p: *const MzvPoly, out: *mut *mut c_char) -> MzvStatus {
    guard(|| write_string(out, borrow(p, "p")?.poly.to_string()))
}

/// JSON list of `{"word": [...], "coeff": "p/q"}` terms.
///
/// # Safety
/// `p` must be a live polynomial handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mzv_poly_to_json(p: *const MzvPoly, out: *mut *mut c_char) -> MzvStatus {
    guard(|| write_string(out, json(&borrow(p, "p")?.poly)?))
}

/// Regularization of `p` as a polynomial in `T` with coefficients in `H^0`,
/// as JSON.
///
/// # Safety
/// `p` must be a live polynomial handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mzv_reg_json(
    p: *const MzvPoly,
    m: MzvMode,
    out: *mut *mut c_char,
) -> MzvStatus {
    guard(|| {
        let reg = reg_decompose_poly(&borrow(p, "p")?.poly, mode(m))?;
        write_string(out, json(&reg)?)
    })
}

/// Fourier expansion of `G(word)` up to `q^order`, as JSON.
///
/// # Safety
/// `ctx` must be a live context handle, `word` a NUL-terminated string and
/// `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mzv_fourier_json(
    ctx: *const MzvContext,
    word: *const c_char,
    order: usize,
    out: *mut *mut c_char,
) -> MzvStatus {
    guard(|| {
        let ctx = borrow(ctx, "ctx")?;
        let f = fourier_expansion(&read_index(word)?, order, &ctx.rc.cfg)?;
        write_string(out, json(&f)?)
    })
}

/// Numeric value of `object` at `word`. `x` is the argument of Hurwitz and
/// multitangent objects; `order` is the q-order for [`MzvObject::Fourier`].
/// Other inputs come from `ctx`.
///
/// # Safety
/// `ctx` must be a live context handle, `word` a NUL-terminated string and
/// `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mzv_eval(
    ctx: *const MzvContext,
    object_kind: MzvObject,
    word: *const c_char,
    x_re: f64,
    x_im: f64,
    order: usize,
    out: *mut MzvEstimate,
) -> MzvStatus {
    guard(|| {
        let ctx = borrow(ctx, "ctx")?;
        let out = borrow_mut(out, "out")?;
        let k = read_index(word)?;
        let e = eval_object(
            object(object_kind),
            &k,
            Complex64::new(x_re, x_im),
            order,
            &ctx.rc,
        )?;
        *out = MzvEstimate {
            re: e.value.re,
            im: e.value.im,
            error: e.error,
        };
        Ok(())
    })
}
