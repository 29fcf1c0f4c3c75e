//! C ABI over `opfact`.
//!
//! Every function returns an [`OpfactStatus`]; on failure a message is kept
//! per thread and can be read with [`opfact_last_error_message`]. Objects are
//! handed out as opaque pointers and must be released with the matching
//! `*_free` function. Output pointers are written only on success.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_complex::Complex64;
use opfact::algebra::cases::IdentityCase;
use opfact::algebra::{builtin_table, verify_jacobi, AlgebraError, BuiltinTable, CommutationTable, Scalar};
use opfact::gaussian::{
    apply, evolve_harmonic, program_constant_force, run_program, ComplexGaussian, ElementaryExponential,
    ExponentialKind, GaussianError, HarmonicOrdering, PhysicalParameters,
};
use opfact::grid::{paradox_report, GridError, SpatialGrid};
use opfact::solver::{closed_form, compare, CaseId, CaseParameters, SolverError};

#[repr(i32)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpfactStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidUtf8 = 3,
    Parse = 4,
    Algebra = 5,
    Solver = 6,
    PoleGuard = 7,
    Gaussian = 8,
    Grid = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

struct Failure {
    status: OpfactStatus,
    message: String,
}

impl Failure {
    fn new(status: OpfactStatus, message: impl Into<String>) -> Self {
        Failure { status, message: message.into() }
    }
}

impl From<AlgebraError> for Failure {
    fn from(e: AlgebraError) -> Self {
        Failure::new(OpfactStatus::Algebra, e.to_string())
    }
}

impl From<SolverError> for Failure {
    fn from(e: SolverError) -> Self {
        let status = match e {
            SolverError::PoleGuard { .. } => OpfactStatus::PoleGuard,
            SolverError::UnknownCase(_) | SolverError::BadStep(_) | SolverError::BadEnd(_) => {
                OpfactStatus::InvalidArgument
            }
            _ => OpfactStatus::Solver,
        };
        Failure::new(status, e.to_string())
    }
}

impl From<GaussianError> for Failure {
    fn from(e: GaussianError) -> Self {
        let status = match e {
            GaussianError::PoleGuard { .. } => OpfactStatus::PoleGuard,
            GaussianError::InvalidParameter(_) => OpfactStatus::InvalidArgument,
            _ => OpfactStatus::Gaussian,
        };
        Failure::new(status, e.to_string())
    }
}

impl From<GridError> for Failure {
    fn from(e: GridError) -> Self {
        Failure::new(OpfactStatus::Grid, e.to_string())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

fn run(f: impl FnOnce() -> Result<(), Failure>) -> OpfactStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            OpfactStatus::Ok
        }
        Ok(Err(failure)) => {
            set_error(&failure.message);
            failure.status
        }
        Err(_) => {
            set_error("internal panic");
            OpfactStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure::new(OpfactStatus::NullPointer, "null pointer argument")
}

unsafe fn text<'a>(ptr: *const c_char) -> Result<&'a str, Failure> {
    if ptr.is_null() {
        return Err(null());
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| Failure::new(OpfactStatus::InvalidUtf8, "string is not valid UTF-8"))
}

unsafe fn optional_scalar(ptr: *const c_char) -> Result<Scalar, Failure> {
    if ptr.is_null() {
        return Ok(Scalar::from_int(1));
    }
    text(ptr)?.parse::<Scalar>().map_err(|e| Failure::new(OpfactStatus::Parse, e.to_string()))
}

unsafe fn out<'a, T>(ptr: *mut T) -> Result<&'a mut T, Failure> {
    ptr.as_mut().ok_or_else(null)
}

unsafe fn input<'a, T>(ptr: *const T) -> Result<&'a T, Failure> {
    ptr.as_ref().ok_or_else(null)
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next `opfact_*` call on the same thread.
#[no_mangle]
pub extern "C" fn opfact_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn opfact_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Frees a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from an `opfact_*` function that documents ownership transfer.
#[no_mangle]
pub unsafe extern "C" fn opfact_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---- commutation tables -------------------------------------------------

/// A commutation table.
pub struct OpfactTable {
    inner: CommutationTable,
}

/// Builds one of `bch`, `case1`, `case2`, `heisenberg_force`,
/// `sl2_realization`. `param` is a rational such as `"3/2"` and is required
/// by the first three (ignored otherwise; may be NULL).
///
/// # Safety
/// `name` must be a NUL-terminated string, `param` NULL or NUL-terminated,
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn opfact_table_builtin(
    name: *const c_char,
    param: *const c_char,
    out_table: *mut *mut OpfactTable,
) -> OpfactStatus {
    run(|| {
        let name = text(name)?;
        let param = if param.is_null() { None } else { Some(optional_scalar(param)?) };
        let which = BuiltinTable::from_name(name, param)?;
        let table = builtin_table(&which)?;
        *out(out_table)? = Box::into_raw(Box::new(OpfactTable { inner: table }));
        Ok(())
    })
}

/// Parses a table from its JSON document.
///
/// # Safety
/// `json` must be NUL-terminated and `out_table` valid.
#[no_mangle]
pub unsafe extern "C" fn opfact_table_from_json(json: *const c_char, out_table: *mut *mut OpfactTable) -> OpfactStatus {
    run(|| {
        let table = CommutationTable::from_json(text(json)?)?;
        *out(out_table)? = Box::into_raw(Box::new(OpfactTable { inner: table }));
        Ok(())
    })
}

/// Serializes a table to JSON. Free the result with `opfact_string_free`.
///
/// # Safety
/// `table` must be a live handle and `out_json` valid.
#[no_mangle]
pub unsafe extern "C" fn opfact_table_to_json(table: *const OpfactTable, out_json: *mut *mut c_char) -> OpfactStatus {
    run(|| {
        let json = input(table)?.inner.to_json();
        let s = CString::new(json).map_err(|e| Failure::new(OpfactStatus::InvalidArgument, e.to_string()))?;
        *out(out_json)? = s.into_raw();
        Ok(())
    })
}

/// # Safety
/// `table` must be a live handle and `out_n` valid.
#[no_mangle]
pub unsafe extern "C" fn opfact_table_n_generators(table: *const OpfactTable, out_n: *mut usize) -> OpfactStatus {
    run(|| {
        *out(out_n)? = input(table)?.inner.n_generators();
        Ok(())
    })
}

/// Writes whether the Jacobi identity holds for every generator triple.
///
/// # Safety
/// `table` must be a live handle and `out_ok` valid.
#[no_mangle]
pub unsafe extern "C" fn opfact_table_verify_jacobi(table: *const OpfactTable, out_ok: *mut bool) -> OpfactStatus {
    run(|| {
        *out(out_ok)? = verify_jacobi(&input(table)?.inner);
        Ok(())
    })
}

/// # Safety
/// `table` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn opfact_table_free(table: *mut OpfactTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

// ---- identity verification ----------------------------------------------

/// Exact rational parameters as strings (`"p/q"`, `"1/2+3/4 i"`); NULL means 1.
#[repr(C)]
pub struct OpfactCaseParams {
    pub delta: *const c_char,
    pub k: *const c_char,
    pub gamma: *const c_char,
    pub kappa: *const c_char,
    pub m: *const c_char,
    pub omega: *const c_char,
    pub hbar: *const c_char,
    pub force: *const c_char,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct OpfactVerifyResult {
    pub equal: bool,
    /// Lowest order with a differing coefficient, or −1.
    pub mismatch_order: i32,
}

unsafe fn identity_case(name: &str, p: Option<&OpfactCaseParams>) -> Result<IdentityCase, Failure> {
    let get = |f: fn(&OpfactCaseParams) -> *const c_char| match p {
        Some(p) => optional_scalar(f(p)),
        None => Ok(Scalar::from_int(1)),
    };
    Ok(match name {
        "bch" => IdentityCase::Bch { delta: get(|p| p.delta)? },
        "case1" => IdentityCase::Case1 { k: get(|p| p.k)? },
        "case2-bab" => IdentityCase::Case2Bab { gamma: get(|p| p.gamma)? },
        "case2-aba" => IdentityCase::Case2Aba { gamma: get(|p| p.gamma)? },
        "case2-cab" => IdentityCase::Case2Cab { gamma: get(|p| p.gamma)? },
        "case2-cab-hyperbolic" => IdentityCase::Case2CabHyperbolic { kappa: get(|p| p.kappa)? },
        "ho-bab" => IdentityCase::HarmonicBab { m: get(|p| p.m)?, omega: get(|p| p.omega)?, hbar: get(|p| p.hbar)? },
        "ho-aba" => IdentityCase::HarmonicAba { m: get(|p| p.m)?, omega: get(|p| p.omega)?, hbar: get(|p| p.hbar)? },
        "ho-cab" => IdentityCase::HarmonicCab { m: get(|p| p.m)?, omega: get(|p| p.omega)?, hbar: get(|p| p.hbar)? },
        "force" => IdentityCase::ForcePxp { m: get(|p| p.m)?, hbar: get(|p| p.hbar)?, force: get(|p| p.force)? },
        "force-xpp" => IdentityCase::ForceXpp { m: get(|p| p.m)?, hbar: get(|p| p.hbar)?, force: get(|p| p.force)? },
        other => return Err(Failure::new(OpfactStatus::InvalidArgument, format!("unknown identity case {other:?}"))),
    })
}

/// Checks a named factorization identity exactly to `order` (at most 12).
/// `params` may be NULL (all parameters 1).
///
/// # Safety
/// `case_name` must be NUL-terminated, `params` NULL or valid, `out_result` valid.
#[no_mangle]
pub unsafe extern "C" fn opfact_verify_case(
    case_name: *const c_char,
    params: *const OpfactCaseParams,
    order: u32,
    out_result: *mut OpfactVerifyResult,
) -> OpfactStatus {
    run(|| {
        if order > 12 {
            return Err(Failure::new(OpfactStatus::InvalidArgument, "order must be at most 12"));
        }
        let case = identity_case(text(case_name)?, params.as_ref())?;
        let report = case.factorization(order as usize)?.verify()?;
        *out(out_result)? = OpfactVerifyResult {
            equal: report.equal,
            mismatch_order: report.first_mismatch.map_or(-1, |m| m.order as i32),
        };
        Ok(())
    })
}

// ---- coefficient ODEs -----------------------------------------------------

/// Integrates `case` (`bch`, `case1`, `case2-bab`, `case2-aba`,
/// `appendix-cab`) to `xi_end` with RK4 and writes the largest deviation from
/// the closed form.
///
/// # Safety
/// `case_name` must be NUL-terminated and `out_max_error` valid.
#[no_mangle]
pub unsafe extern "C" fn opfact_solver_compare(
    case_name: *const c_char,
    delta: f64,
    k: f64,
    gamma: f64,
    xi_end: f64,
    step: f64,
    out_max_error: *mut f64,
) -> OpfactStatus {
    run(|| {
        let case: CaseId = text(case_name)?.parse()?;
        let cmp = compare(case, &CaseParameters { delta, k, gamma }, xi_end, step)?;
        *out(out_max_error)? = cmp.max_abs_error;
        Ok(())
    })
}

/// Closed-form coefficient values at `xi`. Writes the component count to
/// `out_len`; fails with `BufferTooSmall` if `capacity` is insufficient.
///
/// # Safety
/// `case_name` NUL-terminated; `out_values` valid for `capacity` doubles; `out_len` valid.
#[no_mangle]
pub unsafe extern "C" fn opfact_solver_closed_form(
    case_name: *const c_char,
    delta: f64,
    k: f64,
    gamma: f64,
    xi: f64,
    out_values: *mut f64,
    capacity: usize,
    out_len: *mut usize,
) -> OpfactStatus {
    run(|| {
        let case: CaseId = text(case_name)?.parse()?;
        let values = closed_form(case, &CaseParameters { delta, k, gamma }, xi)?.values;
        *out(out_len)? = values.len();
        if capacity < values.len() {
            return Err(Failure::new(OpfactStatus::BufferTooSmall, format!("need {} values", values.len())));
        }
        if out_values.is_null() {
            return Err(null());
        }
        std::slice::from_raw_parts_mut(out_values, values.len()).copy_from_slice(&values);
        Ok(())
    })
}

// ---- Gaussian packets -----------------------------------------------------

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct OpfactComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for OpfactComplex {
    fn from(c: Complex64) -> Self {
        OpfactComplex { re: c.re, im: c.im }
    }
}

impl From<OpfactComplex> for Complex64 {
    fn from(c: OpfactComplex) -> Self {
        Complex64::new(c.re, c.im)
    }
}

/// `ψ(x) = exp(a2·x² + a1·x + a0)`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct OpfactGaussianCoefficients {
    pub a2: OpfactComplex,
    pub a1: OpfactComplex,
    pub a0: OpfactComplex,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OpfactPhysicalParams {
    pub m: f64,
    pub omega: f64,
    pub force: f64,
    pub hbar: f64,
    pub t: f64,
    pub sigma: f64,
}

impl From<&OpfactPhysicalParams> for PhysicalParameters {
    fn from(p: &OpfactPhysicalParams) -> Self {
        PhysicalParameters { m: p.m, omega: p.omega, force: p.force, hbar: p.hbar, t: p.t, sigma: p.sigma }
    }
}

/// Elementary exponential `exp(c·G)`.
#[repr(i32)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpfactExponentialKind {
    /// `G = x²`
    MultiplyX2 = 0,
    /// `G = x`
    MultiplyX1 = 1,
    /// `G = d²/dx²`
    Diffuse = 2,
    /// `G = d/dx`
    Shift = 3,
    /// `G = x·d/dx + 1/2`
    Dilate = 4,
}

#[repr(i32)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpfactOrdering {
    Bab = 0,
    Aba = 1,
    Cab = 2,
}

/// A Gaussian wave packet.
pub struct OpfactGaussian {
    inner: ComplexGaussian,
}

fn boxed(g: ComplexGaussian) -> *mut OpfactGaussian {
    Box::into_raw(Box::new(OpfactGaussian { inner: g }))
}

/// Fails unless `Re a2 < 0`.
///
/// # Safety
/// `out_gaussian` must be valid.
#[no_mangle]
pub unsafe extern "C" fn opfact_gaussian_new(
    coeffs: OpfactGaussianCoefficients,
    out_gaussian: *mut *mut OpfactGaussian,
) -> OpfactStatus {
    run(|| {
        let g = ComplexGaussian::new(coeffs.a2.into(), coeffs.a1.into(), coeffs.a0.into())?;
        *out(out_gaussian)? = boxed(g);
        Ok(())
    })
}

/// Unit-norm packet of width `sigma` centred at `x0` with mean wavenumber `k0`.
///
/// # Safety
/// `out_gaussian` must be valid.
#[no_mangle]
pub unsafe extern "C" fn opfact_gaussian_displaced(
    sigma: f64,
    x0: f64,
    k0: f64,
    out_gaussian: *mut *mut OpfactGaussian,
) -> OpfactStatus {
    run(|| {
        if !(sigma > 0.0 && sigma.is_finite() && x0.is_finite() && k0.is_finite()) {
            return Err(Failure::new(OpfactStatus::InvalidArgument, "sigma must be positive and all inputs finite"));
        }
        *out(out_gaussian)? = boxed(ComplexGaussian::displaced(sigma, x0, k0));
        Ok(())
    })
}

/// # Safety
/// `g` must be a live handle and `out_coeffs` valid.
#[no_mangle]
pub unsafe extern "C" fn opfact_gaussian_coefficients(
    g: *const OpfactGaussian,
    out_coeffs: *mut OpfactGaussianCoefficients,
) -> OpfactStatus {
    run(|| {
        let g = input(g)?.inner;
        *out(out_coeffs)? = OpfactGaussianCoefficients { a2: g.a2.into(), a1: g.a1.into(), a0: g.a0.into() };
        Ok(())
    })
}

/// Replaces `g` by `exp(c·G)g`. On failure `g` is left unchanged.
///
/// # Safety
/// `g` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn opfact_gaussian_apply(
    g: *mut OpfactGaussian,
    kind: OpfactExponentialKind,
    c: OpfactComplex,
) -> OpfactStatus {
    run(|| {
        let g = out(g)?;
        let kind = match kind {
            OpfactExponentialKind::MultiplyX2 => ExponentialKind::MultiplyX2,
            OpfactExponentialKind::MultiplyX1 => ExponentialKind::MultiplyX1,
            OpfactExponentialKind::Diffuse => ExponentialKind::Diffuse,
            OpfactExponentialKind::Shift => ExponentialKind::Shift,
            OpfactExponentialKind::Dilate => ExponentialKind::Dilate,
        };
        g.inner = apply(&ElementaryExponential::new(kind, c.into()), &g.inner)?;
        Ok(())
    })
}

/// Harmonic-oscillator evolution of `g` to time `params.t` (any t) using the
/// chosen factor ordering. `params.sigma` is not used.
///
/// # Safety
/// `g` must be a live handle and `params` valid.
#[no_mangle]
pub unsafe extern "C" fn opfact_gaussian_evolve_harmonic(
    g: *mut OpfactGaussian,
    params: *const OpfactPhysicalParams,
    ordering: OpfactOrdering,
) -> OpfactStatus {
    run(|| {
        let p = PhysicalParameters::from(input(params)?);
        let g = out(g)?;
        let ordering = match ordering {
            OpfactOrdering::Bab => HarmonicOrdering::Bab,
            OpfactOrdering::Aba => HarmonicOrdering::Aba,
            OpfactOrdering::Cab => HarmonicOrdering::Cab,
        };
        g.inner = evolve_harmonic(&p, ordering, &g.inner)?;
        Ok(())
    })
}

/// Constant-force evolution of `g` to time `params.t` (`force = 0` is free motion).
///
/// # Safety
/// `g` must be a live handle and `params` valid.
#[no_mangle]
pub unsafe extern "C" fn opfact_gaussian_evolve_force(
    g: *mut OpfactGaussian,
    params: *const OpfactPhysicalParams,
) -> OpfactStatus {
    run(|| {
        let p = PhysicalParameters::from(input(params)?);
        let g = out(g)?;
        g.inner = run_program(&program_constant_force(&p)?, &g.inner)?;
        Ok(())
    })
}

/// # Safety
/// `g` must be a live handle and `out_value` valid.
#[no_mangle]
pub unsafe extern "C" fn opfact_gaussian_evaluate(
    g: *const OpfactGaussian,
    x: f64,
    out_value: *mut OpfactComplex,
) -> OpfactStatus {
    run(|| {
        *out(out_value)? = input(g)?.inner.evaluate(x).into();
        Ok(())
    })
}

/// `∫|ψ|² dx`.
///
/// # Safety
/// `g` must be a live handle and `out_norm` valid.
#[no_mangle]
pub unsafe extern "C" fn opfact_gaussian_norm(g: *const OpfactGaussian, out_norm: *mut f64) -> OpfactStatus {
    run(|| {
        *out(out_norm)? = input(g)?.inner.norm()?;
        Ok(())
    })
}

/// # Safety
/// `g` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn opfact_gaussian_free(g: *mut OpfactGaussian) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

// ---- truncated Taylor vs split-step ---------------------------------------

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct OpfactParadoxReport {
    pub support_bound: f64,
    pub max_support_taylor: f64,
    pub mass_outside_support_taylor: f64,
    pub mass_outside_a_taylor: f64,
    pub norm_taylor: f64,
    pub mass_outside_a_splitstep: f64,
    pub norm_splitstep: f64,
    pub splitstep_boundary_warning: bool,
}

/// Propagates the compact bump of half-width `a` freely to `t` with an
/// order-`order` Taylor series and with split-step on the grid
/// `[x_min, x_max]` of `n` points (power of two).
///
/// # Safety
/// `out_report` must be valid.
#[no_mangle]
pub unsafe extern "C" fn opfact_paradox(
    a: f64,
    t: f64,
    order: u32,
    m: f64,
    hbar: f64,
    x_min: f64,
    x_max: f64,
    n: usize,
    dt: f64,
    out_report: *mut OpfactParadoxReport,
) -> OpfactStatus {
    run(|| {
        let grid = SpatialGrid::new(x_min, x_max, n)?;
        let r = paradox_report(a, &grid, m, hbar, t, order as usize, dt)?;
        *out(out_report)? = OpfactParadoxReport {
            support_bound: r.support_bound,
            max_support_taylor: r.max_support_taylor,
            mass_outside_support_taylor: r.mass_outside_support_taylor,
            mass_outside_a_taylor: r.mass_outside_a_taylor,
            norm_taylor: r.norm_taylor,
            mass_outside_a_splitstep: r.mass_outside_a_splitstep,
            norm_splitstep: r.norm_splitstep,
            splitstep_boundary_warning: r.splitstep_boundary_warning,
        };
        Ok(())
    })
}
