//! C ABI over `holder-bounds`.
//!
//! Instances live behind an opaque `HbInstance` handle created by
//! [`hb_instance_new`] and released by [`hb_instance_free`]. Every fallible
//! call returns an [`HbStatus`]; results are written through out-pointers.
//! After a non-`Ok` status, [`hb_last_error_message`] describes the failure
//! for the calling thread.
//!
//! The header `include/holder_bounds.h` is regenerated by `build.rs`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use holder_bounds::bounds::{bound_report, cs_identity_report, holder_rhs, maxmin_bound, symmetrized_bound};
use holder_bounds::family::{self, FamilyParams};
use holder_bounds::search::{random_search_with_threads, SearchConfig};
use holder_bounds::transforms::transformed_holder_bound;
use holder_bounds::{DiscreteMeasure, Error, ExponentPair, SampledFunction, TransformSpec};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HbStatus {
    Ok = 0,
    NullPointer = 1,
    Dimension = 2,
    Domain = 3,
    Usage = 4,
    ExceptionalExponent = 5,
    SignCondition = 6,
    InvalidInput = 7,
    TransformParse = 8,
    Invariant = 9,
    Panic = 10,
}

impl From<&Error> for HbStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Dimension { .. } => HbStatus::Dimension,
            Error::Domain(_) => HbStatus::Domain,
            Error::Usage(_) => HbStatus::Usage,
            Error::ExceptionalExponent => HbStatus::ExceptionalExponent,
            Error::SignCondition { .. } => HbStatus::SignCondition,
            Error::Input { .. } => HbStatus::InvalidInput,
            Error::TransformParse { .. } => HbStatus::TransformParse,
            Error::Invariant(_) => HbStatus::Invariant,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

/// Runs `body`, mapping errors and panics to status codes.
fn guard(body: impl FnOnce() -> Result<(), HbFailure>) -> HbStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => HbStatus::Ok,
        Ok(Err(HbFailure::Null(what))) => {
            set_last_error(format!("null pointer: {what}"));
            HbStatus::NullPointer
        }
        Ok(Err(HbFailure::Core(e))) => {
            set_last_error(e.to_string());
            HbStatus::from(&e)
        }
        Err(_) => {
            set_last_error("internal panic".into());
            HbStatus::Panic
        }
    }
}

enum HbFailure {
    Null(&'static str),
    Core(Error),
}

impl From<Error> for HbFailure {
    fn from(e: Error) -> Self {
        HbFailure::Core(e)
    }
}

fn non_null<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, HbFailure> {
    // SAFETY: callers pass pointers that are either null or valid for reads.
    unsafe { p.as_ref() }.ok_or(HbFailure::Null(what))
}

fn out_ref<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, HbFailure> {
    // SAFETY: callers pass pointers that are either null or valid for writes.
    unsafe { p.as_mut() }.ok_or(HbFailure::Null(what))
}

/// Opaque instance: a discrete measure with two functions on its atoms.
pub struct HbInstance {
    mu: DiscreteMeasure,
    f: SampledFunction,
    g: SampledFunction,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct HbBoundReport {
    pub mu_fg: f64,
    pub holder: f64,
    pub b_p: f64,
    pub b_q: f64,
    pub symmetrized: f64,
    pub improves_holder: bool,
    pub violates_holder_order: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct HbCsIdentityReport {
    pub lhs: f64,
    pub rhs_main: f64,
    pub improvement: f64,
    pub residual: f64,
    pub eps_bound: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct HbGapPoint {
    pub t: f64,
    pub d1: f64,
    pub d2: f64,
    pub min_gap: f64,
}

/// `t`, `min_gap` and `holder` are meaningful only when `found` is true.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct HbScanResult {
    pub found: bool,
    pub t: f64,
    pub min_gap: f64,
    pub holder: f64,
    pub max_min_gap: f64,
    pub t_at_max: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct HbSearchSummary {
    pub best_gap: f64,
    pub best_trial: u64,
    pub violations_found: u64,
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn hb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds an instance from `len` weights and function values.
///
/// # Safety
/// `weights`, `f` and `g` must each point to `len` readable doubles, and
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn hb_instance_new(
    weights: *const f64,
    f: *const f64,
    g: *const f64,
    len: usize,
    out: *mut *mut HbInstance,
) -> HbStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let read = |p: *const f64, what| -> Result<Vec<f64>, HbFailure> {
            if p.is_null() {
                return Err(HbFailure::Null(what));
            }
            // SAFETY: caller guarantees `len` readable doubles.
            Ok(unsafe { std::slice::from_raw_parts(p, len) }.to_vec())
        };
        let mu = DiscreteMeasure::new(read(weights, "weights")?)?;
        let f = SampledFunction::new(read(f, "f")?)?;
        let g = SampledFunction::new(read(g, "g")?)?;
        *out = Box::into_raw(Box::new(HbInstance { mu, f, g }));
        Ok(())
    })
}

/// Releases an instance. NULL is ignored.
///
/// # Safety
/// `inst` must be NULL or a handle from [`hb_instance_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hb_instance_free(inst: *mut HbInstance) {
    if !inst.is_null() {
        // SAFETY: handle came from Box::into_raw in hb_instance_new.
        drop(unsafe { Box::from_raw(inst) });
    }
}

/// Number of atoms, or 0 for NULL.
///
/// # Safety
/// `inst` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hb_instance_len(inst: *const HbInstance) -> usize {
    // SAFETY: see function contract.
    unsafe { inst.as_ref() }.map_or(0, |i| i.mu.len())
}

type BoundFn = fn(&DiscreteMeasure, &SampledFunction, &SampledFunction, ExponentPair) -> holder_bounds::Result<f64>;

unsafe fn scalar_bound(inst: *const HbInstance, p: f64, out: *mut f64, bound: BoundFn) -> HbStatus {
    guard(|| {
        let inst = non_null(inst, "inst")?;
        let out = out_ref(out, "out")?;
        *out = bound(&inst.mu, &inst.f, &inst.g, ExponentPair::new(p)?)?;
        Ok(())
    })
}

/// Hölder bound `μ(f^p)^{1/p} μ(g^q)^{1/q}`.
///
/// # Safety
/// `inst` must be a live handle and `out` valid for writing one double.
#[no_mangle]
pub unsafe extern "C" fn hb_holder_rhs(inst: *const HbInstance, p: f64, out: *mut f64) -> HbStatus {
    unsafe { scalar_bound(inst, p, out, holder_rhs) }
}

/// Max-min bound `B_p`.
///
/// # Safety
/// `inst` must be a live handle and `out` valid for writing one double.
#[no_mangle]
pub unsafe extern "C" fn hb_maxmin_bound(inst: *const HbInstance, p: f64, out: *mut f64) -> HbStatus {
    unsafe { scalar_bound(inst, p, out, maxmin_bound) }
}

/// `B_p ∧ B_q`.
///
/// # Safety
/// `inst` must be a live handle and `out` valid for writing one double.
#[no_mangle]
pub unsafe extern "C" fn hb_symmetrized_bound(inst: *const HbInstance, p: f64, out: *mut f64) -> HbStatus {
    unsafe { scalar_bound(inst, p, out, symmetrized_bound) }
}

/// Bound induced by a product-preserving transform given in text form
/// (`scale:k`, `swap`, `maxmin`, `a>b>c`).
///
/// # Safety
/// `inst` must be a live handle, `spec` a NUL-terminated string and `out`
/// valid for writing one double.
#[no_mangle]
pub unsafe extern "C" fn hb_transformed_bound(
    inst: *const HbInstance,
    p: f64,
    spec: *const c_char,
    out: *mut f64,
) -> HbStatus {
    guard(|| {
        let inst = non_null(inst, "inst")?;
        if spec.is_null() {
            return Err(HbFailure::Null("spec"));
        }
        // SAFETY: caller guarantees a NUL-terminated string.
        let text = unsafe { CStr::from_ptr(spec) }.to_str().map_err(|_| Error::TransformParse {
            token: "<non-utf8>".into(),
            reason: "transform text must be UTF-8".into(),
        })?;
        let t: TransformSpec = text.parse()?;
        let out = out_ref(out, "out")?;
        *out = transformed_holder_bound(&inst.mu, &inst.f, &inst.g, ExponentPair::new(p)?, &t)?;
        Ok(())
    })
}

/// # Safety
/// `inst` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn hb_bound_report(inst: *const HbInstance, p: f64, out: *mut HbBoundReport) -> HbStatus {
    guard(|| {
        let inst = non_null(inst, "inst")?;
        let out = out_ref(out, "out")?;
        let r = bound_report(&inst.mu, &inst.f, &inst.g, ExponentPair::new(p)?)?;
        *out = HbBoundReport {
            mu_fg: r.mu_fg,
            holder: r.holder,
            b_p: r.b_p,
            b_q: r.b_q,
            symmetrized: r.symmetrized,
            improves_holder: r.improves_holder,
            violates_holder_order: r.violates_holder_order,
        };
        Ok(())
    })
}

/// The `p = 2` improvement identity with `a = f²`, `b = g²`.
///
/// # Safety
/// `inst` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn hb_cs_identity(inst: *const HbInstance, out: *mut HbCsIdentityReport) -> HbStatus {
    guard(|| {
        let inst = non_null(inst, "inst")?;
        let out = out_ref(out, "out")?;
        let r = cs_identity_report(&inst.mu, &inst.f, &inst.g)?;
        *out = HbCsIdentityReport {
            lhs: r.lhs,
            rhs_main: r.rhs_main,
            improvement: r.improvement,
            residual: r.residual,
            eps_bound: r.eps_bound,
        };
        Ok(())
    })
}

/// Closed-form gap pair of the counterexample family at `t`.
///
/// # Safety
/// `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn hb_family_gap(p: f64, m: f64, w: f64, t: f64, out: *mut HbGapPoint) -> HbStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let g = family::gap_pair(&FamilyParams::new(p, m, w)?, t)?;
        *out = HbGapPoint {
            t: g.t,
            d1: g.d1,
            d2: g.d2,
            min_gap: g.min_gap,
        };
        Ok(())
    })
}

/// Closed-form `d'(0)`.
///
/// # Safety
/// `out` must be valid for writing one double.
#[no_mangle]
pub unsafe extern "C" fn hb_family_derivative(p: f64, m: f64, w: f64, out: *mut f64) -> HbStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = family::derivative_at_zero(&FamilyParams::new(p, m, w)?);
        Ok(())
    })
}

/// Finite-difference `d'_j(0)` with step `h`, `j` in {1, 2}.
///
/// # Safety
/// `out` must be valid for writing one double.
#[no_mangle]
pub unsafe extern "C" fn hb_family_fd_derivative(
    p: f64,
    m: f64,
    w: f64,
    h: f64,
    j: u8,
    out: *mut f64,
) -> HbStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = family::fd_derivative_at_zero(&FamilyParams::new(p, m, w)?, h, j)?;
        Ok(())
    })
}

/// Smallest log-grid `t` in `[1e-6, t_max]` where `B_p ∧ B_q` beats Hölder.
///
/// # Safety
/// `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn hb_family_scan(
    p: f64,
    m: f64,
    w: f64,
    t_max: f64,
    steps: usize,
    out: *mut HbScanResult,
) -> HbStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let s = family::find_violation_t(&FamilyParams::new(p, m, w)?, t_max, steps)?;
        *out = HbScanResult {
            found: s.found,
            t: s.t.unwrap_or(f64::NAN),
            min_gap: s.min_gap.unwrap_or(f64::NAN),
            holder: s.holder.unwrap_or(f64::NAN),
            max_min_gap: s.max_min_gap,
            t_at_max: s.t_at_max,
        };
        Ok(())
    })
}

/// Seeded random search over `trials` instances with values in `[low, high)`.
/// `threads = 0` selects one worker per core; the result does not depend on it.
///
/// # Safety
/// `out` must be valid for writing.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn hb_search(
    p: f64,
    atoms: usize,
    trials: u64,
    seed: u64,
    low: f64,
    high: f64,
    threads: usize,
    out: *mut HbSearchSummary,
) -> HbStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let mut cfg = SearchConfig::new(p, atoms, trials, seed);
        cfg.value_range = (low, high);
        let r = random_search_with_threads(&cfg, threads)?;
        *out = HbSearchSummary {
            best_gap: r.best_gap,
            best_trial: r.best_trial,
            violations_found: r.violations_found,
        };
        Ok(())
    })
}
