//! C interface to fblab.
//!
//! Every function returns an `FblabStatus`; results go through out-pointers. Systems
//! are opaque handles created by `fblab_system_new` / `fblab_system_jacobi` and released
//! with `fblab_system_free`. The message of the last error on the calling thread is
//! available from `fblab_last_error`.

use fblab::bessel::{compute_zeros, Order};
use fblab::operators::heat::{diff_heat_kernel, heat_kernel, KernelConfig};
use fblab::systems::{DerivativeKind, Setting, SystemSpec};
use fblab::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FblabStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Certification = 3,
    Inconclusive = 4,
    Unsupported = 5,
    Config = 6,
    TimeTooSmall = 7,
    NonFinite = 8,
    Panic = 9,
    Other = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FblabSetting {
    Natural = 0,
    Lebesgue = 1,
    Essential = 2,
    EssentialProbabilistic = 3,
    Modified = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FblabKernel {
    Heat = 0,
    Differentiated = 1,
}

/// Opaque system handle.
pub struct FblabSystem {
    spec: SystemSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn remember(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> FblabStatus {
    match e {
        Error::Domain(_) => FblabStatus::Domain,
        Error::Certification(_) | Error::Quadrature { .. } => FblabStatus::Certification,
        Error::Inconclusive(_) => FblabStatus::Inconclusive,
        Error::Unsupported(_) => FblabStatus::Unsupported,
        Error::Config(_) => FblabStatus::Config,
        Error::TimeTooSmall { .. } => FblabStatus::TimeTooSmall,
        Error::NonFinite { .. } => FblabStatus::NonFinite,
        _ => FblabStatus::Other,
    }
}

fn guarded(f: impl FnOnce() -> Result<(), FblabStatus>) -> FblabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FblabStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            remember("internal panic".into());
            FblabStatus::Panic
        }
    }
}

fn lift<T>(r: fblab::Result<T>) -> Result<T, FblabStatus> {
    r.map_err(|e| {
        remember(e.to_string());
        status_of(&e)
    })
}

fn non_null<T>(p: *const T) -> Result<(), FblabStatus> {
    if p.is_null() {
        remember("null pointer argument".into());
        Err(FblabStatus::NullPointer)
    } else {
        Ok(())
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fblab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copy the last error message of this thread into `buf` (NUL-terminated, truncated to
/// `len`). Returns the full message length without the terminator.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn fblab_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let bytes = e.borrow();
        let bytes = bytes.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// First `count` positive zeros of J_nu into `out`.
///
/// # Safety
/// `out` must point to `count` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn fblab_zeros(nu: f64, count: usize, out: *mut f64) -> FblabStatus {
    guarded(|| {
        non_null(out)?;
        let t = lift(Order::new(nu).and_then(|o| compute_zeros(o, count)))?;
        std::ptr::copy_nonoverlapping(t.zeros().as_ptr(), out, count);
        Ok(())
    })
}

/// Fourier-Bessel system with room for `capacity` functions.
///
/// # Safety
/// `out` must be a valid pointer; on success it receives a handle to free with
/// `fblab_system_free`.
#[no_mangle]
pub unsafe extern "C" fn fblab_system_new(
    setting: FblabSetting,
    nu: f64,
    capacity: usize,
    out: *mut *mut FblabSystem,
) -> FblabStatus {
    guarded(|| {
        non_null(out)?;
        let s = match setting {
            FblabSetting::Natural => Setting::Natural,
            FblabSetting::Lebesgue => Setting::Lebesgue,
            FblabSetting::Essential => Setting::Essential,
            FblabSetting::EssentialProbabilistic => Setting::EssentialProbabilistic,
            FblabSetting::Modified => Setting::ModifiedEssential,
        };
        let spec = lift(SystemSpec::new(s, nu, capacity))?;
        *out = Box::into_raw(Box::new(FblabSystem { spec }));
        Ok(())
    })
}

/// Jacobi trigonometric system with parameters (alpha, beta).
///
/// # Safety
/// As for `fblab_system_new`.
#[no_mangle]
pub unsafe extern "C" fn fblab_system_jacobi(alpha: f64, beta: f64, out: *mut *mut FblabSystem) -> FblabStatus {
    guarded(|| {
        non_null(out)?;
        let spec = lift(SystemSpec::jacobi(alpha, beta))?;
        *out = Box::into_raw(Box::new(FblabSystem { spec }));
        Ok(())
    })
}

/// Release a handle; null is ignored.
///
/// # Safety
/// `sys` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fblab_system_free(sys: *mut FblabSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

unsafe fn with_system(
    sys: *const FblabSystem,
    out: *mut f64,
    f: impl FnOnce(&SystemSpec) -> fblab::Result<f64>,
) -> FblabStatus {
    guarded(|| {
        non_null(sys)?;
        non_null(out)?;
        *out = lift(f(&(*sys).spec))?;
        Ok(())
    })
}

/// Eigenvalue of function `n` (1-based; 0-based for Jacobi).
///
/// # Safety
/// `sys` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fblab_system_eigenvalue(sys: *const FblabSystem, n: usize, out: *mut f64) -> FblabStatus {
    with_system(sys, out, |s| s.eigenvalue(n))
}

/// Value of function `n` at `x`.
///
/// # Safety
/// `sys` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fblab_system_eval(sys: *const FblabSystem, n: usize, x: f64, out: *mut f64) -> FblabStatus {
    with_system(sys, out, |s| s.eval(n, x))
}

/// New derivative of function `n` at `x`.
///
/// # Safety
/// `sys` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fblab_system_derivative(
    sys: *const FblabSystem,
    n: usize,
    x: f64,
    out: *mut f64,
) -> FblabStatus {
    with_system(sys, out, |s| s.derivative(DerivativeKind::New, n, x))
}

/// Heat or differentiated heat kernel at (t, x, y) with the default truncation policy.
/// The system needs enough capacity for t; otherwise the call reports a domain error.
///
/// # Safety
/// `sys` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fblab_heat_kernel(
    sys: *const FblabSystem,
    kind: FblabKernel,
    t: f64,
    x: f64,
    y: f64,
    out: *mut f64,
) -> FblabStatus {
    let cfg = KernelConfig::default();
    with_system(sys, out, |s| match kind {
        FblabKernel::Heat => heat_kernel(s, &cfg, t, x, y),
        FblabKernel::Differentiated => diff_heat_kernel(s, &cfg, t, x, y),
    })
}

/// Capacity a system of order `nu` needs for kernels at every t above the default t_min.
#[no_mangle]
pub extern "C" fn fblab_kernel_capacity(nu: f64) -> usize {
    KernelConfig::default().capacity_for(nu)
}
