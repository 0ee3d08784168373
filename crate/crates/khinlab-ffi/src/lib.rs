//! C ABI over the khinlab library.
//!
//! Conventions:
//! - every fallible call returns a [`KhStatus`]; outputs go through pointers
//!   that are written only on `KH_STATUS_OK`,
//! - `double` exponents use C `INFINITY` where the library takes `inf`,
//! - handles (`KhTensor`, `KhForm`) are opaque and must be released with the
//!   matching `_free` function, which accepts null,
//! - after a failure, [`kh_last_error_message`] returns a description valid
//!   on the calling thread until its next failing call.
//!
//! Pointer safety contracts are the usual ones (valid, aligned, sized as
//! documented per argument) and are stated here once rather than per function.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use libc::{c_char, c_int};

use khinlab::{
    binomial_moment, block_ones_witness, breakpoint, equivalence_report_with, exact_moment_with,
    form_norm_with, gaussian_moment_limit, haagerup_constant, littlewood_form_construction_with,
    mixed_lhs_inner, mixed_lhs_outer, mixed_littlewood_constant, multiple_khintchine_constant,
    solve_p0, uniform_witness, verify_mixed_littlewood_with, Branch, CoefficientTensor,
    EnumConfig, Error, Exponent, MixedTheorem, MultilinearForm,
};

/// Result of every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum KhStatus {
    /// Success; outputs were written.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Input outside the mathematical domain (bad exponent, shape, zero array).
    Domain = 2,
    /// Enumeration would exceed the sign-bit budget.
    Budget = 3,
    /// Malformed input text or I/O failure.
    Parse = 4,
    /// Internal invariant failure.
    Panic = 5,
}

/// Exact Rademacher moments and witness reports for a coefficient array.
pub struct KhTensor {
    inner: CoefficientTensor,
}

/// A multilinear form together with the exponent of its first slot.
pub struct KhForm {
    inner: MultilinearForm,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(status: KhStatus, message: &str) -> KhStatus {
    let sanitized: String = message.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
    status
}

fn fail_with(err: &Error) -> KhStatus {
    let status = match err.exit_code() {
        3 => KhStatus::Budget,
        4 => KhStatus::Parse,
        _ => KhStatus::Domain,
    };
    fail(status, &err.to_string())
}

fn guarded(f: impl FnOnce() -> KhStatus) -> KhStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(KhStatus::Panic, "internal panic"),
    }
}

fn exponent_from(p: f64) -> Result<Exponent, Error> {
    if p.is_infinite() && p > 0.0 {
        Ok(Exponent::Infinity)
    } else {
        Exponent::new(p)
    }
}

fn config(bit_budget: u32, threads: usize) -> EnumConfig {
    EnumConfig {
        bit_budget,
        threads,
    }
}

unsafe fn write_out<T>(out: *mut T, value: T) -> KhStatus {
    if out.is_null() {
        return fail(KhStatus::NullPointer, "output pointer is null");
    }
    *out = value;
    KhStatus::Ok
}

/// Message for the most recent failure on this thread. Never null; empty
/// before the first failure. Valid until the next failing call here.
#[no_mangle]
pub extern "C" fn kh_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn kh_status_name(status: KhStatus) -> *const c_char {
    let name: &'static [u8] = match status {
        KhStatus::Ok => b"ok\0",
        KhStatus::NullPointer => b"null pointer\0",
        KhStatus::Domain => b"domain\0",
        KhStatus::Budget => b"budget\0",
        KhStatus::Parse => b"parse\0",
        KhStatus::Panic => b"panic\0",
    };
    name.as_ptr() as *const c_char
}

/// Locate the branch point p0 of the constant family to `tolerance`
/// (clamped to at least 1e-14). Either output may be null.
#[no_mangle]
pub unsafe extern "C" fn kh_p0(
    tolerance: f64,
    out_p0: *mut f64,
    out_residual: *mut f64,
) -> KhStatus {
    guarded(|| match solve_p0(tolerance) {
        Ok(bp) => {
            if !out_p0.is_null() {
                *out_p0 = bp.p0;
            }
            if !out_residual.is_null() {
                *out_residual = bp.residual;
            }
            KhStatus::Ok
        }
        Err(e) => fail_with(&e),
    })
}

/// Sharp Khintchine constant A_p. `out_branch` (nullable) receives
/// 0 = flat, 1 = gaussian, 2 = dyadic.
#[no_mangle]
pub unsafe extern "C" fn kh_haagerup_constant(
    p: f64,
    out_value: *mut f64,
    out_branch: *mut c_int,
) -> KhStatus {
    guarded(|| {
        let result = exponent_from(p).and_then(haagerup_constant);
        match result {
            Ok(a) => {
                if !out_branch.is_null() {
                    *out_branch = match a.branch {
                        Branch::Flat => 0,
                        Branch::Gaussian => 1,
                        Branch::Dyadic => 2,
                    };
                }
                write_out(out_value, a.value)
            }
            Err(e) => fail_with(&e),
        }
    })
}

/// Conjugate exponent p/(p-1); `INFINITY` maps to 1 and back.
#[no_mangle]
pub unsafe extern "C" fn kh_conjugate_exponent(p: f64, out: *mut f64) -> KhStatus {
    guarded(|| {
        let result = exponent_from(p).and_then(|e| e.conjugate());
        match result {
            Ok(q) => write_out(out, q.get()),
            Err(e) => fail_with(&e),
        }
    })
}

/// Limit value of the normalized Rademacher moment for 0 < r < 2.
#[no_mangle]
pub unsafe extern "C" fn kh_gaussian_moment_limit(r: f64, out: *mut f64) -> KhStatus {
    guarded(|| match gaussian_moment_limit(r) {
        Ok(v) => write_out(out, v),
        Err(e) => fail_with(&e),
    })
}

/// Multiple Khintchine constant K_{m,r} = (A_r)^m.
#[no_mangle]
pub unsafe extern "C" fn kh_multiple_khintchine_constant(
    m: u32,
    r: f64,
    out: *mut f64,
) -> KhStatus {
    guarded(|| match multiple_khintchine_constant(m, r) {
        Ok(v) => write_out(out, v),
        Err(e) => fail_with(&e),
    })
}

/// Mixed Littlewood constant (A_{p/(p-1)})^{M-1} for p >= 2 (or `INFINITY`).
#[no_mangle]
pub unsafe extern "C" fn kh_mixed_littlewood_constant(
    m_linear: u32,
    p: f64,
    out: *mut f64,
) -> KhStatus {
    guarded(|| {
        let result = exponent_from(p).and_then(|e| mixed_littlewood_constant(m_linear, e));
        match result {
            Ok(v) => write_out(out, v),
            Err(e) => fail_with(&e),
        }
    })
}

/// Normalized r-th moment of a length-n uniform sum, in closed binomial form.
#[no_mangle]
pub unsafe extern "C" fn kh_binomial_moment(n: u64, r: f64, out: *mut f64) -> KhStatus {
    guarded(|| match binomial_moment(n, r) {
        Ok(v) => write_out(out, v),
        Err(e) => fail_with(&e),
    })
}

/// Build a coefficient tensor from `shape[0..order]` and row-major
/// `entries[0..len]`; `len` must equal the product of the dims.
#[no_mangle]
pub unsafe extern "C" fn kh_tensor_new(
    shape: *const usize,
    order: usize,
    entries: *const f64,
    len: usize,
    out: *mut *mut KhTensor,
) -> KhStatus {
    guarded(|| {
        if shape.is_null() || entries.is_null() {
            return fail(KhStatus::NullPointer, "shape or entries pointer is null");
        }
        let shape = std::slice::from_raw_parts(shape, order).to_vec();
        let entries = std::slice::from_raw_parts(entries, len).to_vec();
        match CoefficientTensor::new(shape, entries) {
            Ok(t) => write_out(out, Box::into_raw(Box::new(KhTensor { inner: t }))),
            Err(e) => fail_with(&e),
        }
    })
}

/// Parse a tensor from JSON text `{"shape":[...],"entries":[...]}`.
#[no_mangle]
pub unsafe extern "C" fn kh_tensor_parse(json: *const c_char, out: *mut *mut KhTensor) -> KhStatus {
    guarded(|| {
        if json.is_null() {
            return fail(KhStatus::NullPointer, "json pointer is null");
        }
        let text = match CStr::from_ptr(json).to_str() {
            Ok(t) => t,
            Err(_) => return fail(KhStatus::Parse, "json text is not valid UTF-8"),
        };
        match khinlab::io::parse_tensor(text) {
            Ok(t) => write_out(out, Box::into_raw(Box::new(KhTensor { inner: t }))),
            Err(e) => fail_with(&e),
        }
    })
}

/// Release a tensor handle. Accepts null.
#[no_mangle]
pub unsafe extern "C" fn kh_tensor_free(tensor: *mut KhTensor) {
    if !tensor.is_null() {
        drop(Box::from_raw(tensor));
    }
}

/// Number of axes of the tensor.
#[no_mangle]
pub unsafe extern "C" fn kh_tensor_order(tensor: *const KhTensor, out: *mut usize) -> KhStatus {
    guarded(|| match tensor.as_ref() {
        Some(t) => write_out(out, t.inner.shape().len()),
        None => fail(KhStatus::NullPointer, "tensor handle is null"),
    })
}

/// Euclidean norm of the tensor entries.
#[no_mangle]
pub unsafe extern "C" fn kh_tensor_l2(tensor: *const KhTensor, out: *mut f64) -> KhStatus {
    guarded(|| match tensor.as_ref() {
        Some(t) => write_out(out, khinlab::l2_of_tensor(&t.inner)),
        None => fail(KhStatus::NullPointer, "tensor handle is null"),
    })
}

/// Exact Rademacher r-th moment by full sign enumeration subject to
/// `bit_budget` (1..=62); `threads` 0 picks the parallelism automatically.
/// `out_configurations` (nullable) receives the number of sign patterns.
#[no_mangle]
pub unsafe extern "C" fn kh_exact_moment(
    tensor: *const KhTensor,
    r: f64,
    bit_budget: u32,
    threads: usize,
    out_value: *mut f64,
    out_configurations: *mut u64,
) -> KhStatus {
    guarded(|| {
        let t = match tensor.as_ref() {
            Some(t) => t,
            None => return fail(KhStatus::NullPointer, "tensor handle is null"),
        };
        match exact_moment_with(&t.inner, r, &config(bit_budget, threads)) {
            Ok(result) => {
                if !out_configurations.is_null() {
                    *out_configurations = result.configurations_enumerated;
                }
                write_out(out_value, result.value)
            }
            Err(e) => fail_with(&e),
        }
    })
}

/// Order-m block-ones witness array of side n (n >= 2).
#[no_mangle]
pub unsafe extern "C" fn kh_block_ones_witness(
    m: u32,
    n: usize,
    out: *mut *mut KhTensor,
) -> KhStatus {
    guarded(|| match block_ones_witness(m, n) {
        Ok(t) => write_out(out, Box::into_raw(Box::new(KhTensor { inner: t }))),
        Err(e) => fail_with(&e),
    })
}

/// Order-m uniform witness array of side n (n >= 1), entries n^{-m/2}.
#[no_mangle]
pub unsafe extern "C" fn kh_uniform_witness(
    m: u32,
    n: usize,
    out: *mut *mut KhTensor,
) -> KhStatus {
    guarded(|| match uniform_witness(m, n) {
        Ok(t) => write_out(out, Box::into_raw(Box::new(KhTensor { inner: t }))),
        Err(e) => fail_with(&e),
    })
}

/// Wrap coefficients (copied) as a multilinear form whose first slot
/// carries exponent `p` (a real >= 1, or `INFINITY`).
#[no_mangle]
pub unsafe extern "C" fn kh_form_new(
    coefficients: *const KhTensor,
    p: f64,
    out: *mut *mut KhForm,
) -> KhStatus {
    guarded(|| {
        let t = match coefficients.as_ref() {
            Some(t) => t,
            None => return fail(KhStatus::NullPointer, "tensor handle is null"),
        };
        let result = exponent_from(p).and_then(|e| MultilinearForm::new(t.inner.clone(), e));
        match result {
            Ok(f) => write_out(out, Box::into_raw(Box::new(KhForm { inner: f }))),
            Err(e) => fail_with(&e),
        }
    })
}

/// Release a form handle. Accepts null.
#[no_mangle]
pub unsafe extern "C" fn kh_form_free(form: *mut KhForm) {
    if !form.is_null() {
        drop(Box::from_raw(form));
    }
}

/// Exact norm of the form on the unit ball of l_p x l_inf x ... x l_inf.
#[no_mangle]
pub unsafe extern "C" fn kh_form_norm(
    form: *const KhForm,
    bit_budget: u32,
    threads: usize,
    out: *mut f64,
) -> KhStatus {
    guarded(|| {
        let f = match form.as_ref() {
            Some(f) => f,
            None => return fail(KhStatus::NullPointer, "form handle is null"),
        };
        match form_norm_with(&f.inner, &config(bit_budget, threads)) {
            Ok(v) => write_out(out, v),
            Err(e) => fail_with(&e),
        }
    })
}

/// Outer-first mixed norm of the coefficients: l_{p/(p-1)} over the first
/// index of the l_2 norms of the rest.
#[no_mangle]
pub unsafe extern "C" fn kh_mixed_lhs_outer(form: *const KhForm, out: *mut f64) -> KhStatus {
    guarded(|| {
        let f = match form.as_ref() {
            Some(f) => f,
            None => return fail(KhStatus::NullPointer, "form handle is null"),
        };
        match mixed_lhs_outer(&f.inner) {
            Ok(v) => write_out(out, v),
            Err(e) => fail_with(&e),
        }
    })
}

/// Inner-first mixed norm: l_2 over the trailing indices of the
/// l_{p/(p-1)} norms of the first-index columns.
#[no_mangle]
pub unsafe extern "C" fn kh_mixed_lhs_inner(form: *const KhForm, out: *mut f64) -> KhStatus {
    guarded(|| {
        let f = match form.as_ref() {
            Some(f) => f,
            None => return fail(KhStatus::NullPointer, "form handle is null"),
        };
        match mixed_lhs_inner(&f.inner) {
            Ok(v) => write_out(out, v),
            Err(e) => fail_with(&e),
        }
    })
}

/// Check the mixed Littlewood inequality for the form; `inner_first`
/// selects the inner-first nesting. Output pointers are nullable except
/// `out_holds`.
#[no_mangle]
pub unsafe extern "C" fn kh_verify_mixed_littlewood(
    form: *const KhForm,
    inner_first: bool,
    bit_budget: u32,
    threads: usize,
    out_lhs: *mut f64,
    out_norm: *mut f64,
    out_constant: *mut f64,
    out_holds: *mut bool,
) -> KhStatus {
    guarded(|| {
        let f = match form.as_ref() {
            Some(f) => f,
            None => return fail(KhStatus::NullPointer, "form handle is null"),
        };
        let theorem = if inner_first {
            MixedTheorem::MixedD
        } else {
            MixedTheorem::MixedC
        };
        match verify_mixed_littlewood_with(&f.inner, theorem, &config(bit_budget, threads)) {
            Ok(rep) => {
                if !out_lhs.is_null() {
                    *out_lhs = rep.lhs;
                }
                if !out_norm.is_null() {
                    *out_norm = rep.norm;
                }
                if !out_constant.is_null() {
                    *out_constant = rep.constant;
                }
                write_out(out_holds, rep.holds)
            }
            Err(e) => fail_with(&e),
        }
    })
}

/// Build the extremal (m+1)-linear form of a witness array y for
/// 1 <= p <= 2; its norm equals the exact r-th moment of y at r = p.
#[no_mangle]
pub unsafe extern "C" fn kh_littlewood_construction(
    y: *const KhTensor,
    p: f64,
    bit_budget: u32,
    threads: usize,
    out: *mut *mut KhForm,
) -> KhStatus {
    guarded(|| {
        let t = match y.as_ref() {
            Some(t) => t,
            None => return fail(KhStatus::NullPointer, "tensor handle is null"),
        };
        match littlewood_form_construction_with(&t.inner, p, &config(bit_budget, threads)) {
            Ok(f) => write_out(out, Box::into_raw(Box::new(KhForm { inner: f }))),
            Err(e) => fail_with(&e),
        }
    })
}

/// Equivalence-response check: lhs, norm, constant and verdict for the
/// construction built from y at exponent p in [1, 2].
#[no_mangle]
pub unsafe extern "C" fn kh_equivalence_report(
    y: *const KhTensor,
    p: f64,
    bit_budget: u32,
    threads: usize,
    out_lhs: *mut f64,
    out_norm: *mut f64,
    out_constant: *mut f64,
    out_holds: *mut bool,
) -> KhStatus {
    guarded(|| {
        let t = match y.as_ref() {
            Some(t) => t,
            None => return fail(KhStatus::NullPointer, "tensor handle is null"),
        };
        match equivalence_report_with(&t.inner, p, &config(bit_budget, threads)) {
            Ok(rep) => {
                if !out_lhs.is_null() {
                    *out_lhs = rep.lhs;
                }
                if !out_norm.is_null() {
                    *out_norm = rep.norm;
                }
                if !out_constant.is_null() {
                    *out_constant = rep.constant;
                }
                write_out(out_holds, rep.holds)
            }
            Err(e) => fail_with(&e),
        }
    })
}

/// Branch point of the constant family, at the library's cached precision.
#[no_mangle]
pub extern "C" fn kh_breakpoint() -> f64 {
    breakpoint().p0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_round_trip() {
        let mut value = 0.0;
        let mut branch = -1;
        let status = unsafe { kh_haagerup_constant(1.0, &mut value, &mut branch) };
        assert_eq!(status, KhStatus::Ok);
        assert!((value - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert_eq!(branch, 2);

        let status = unsafe { kh_haagerup_constant(f64::INFINITY, &mut value, &mut branch) };
        assert_eq!(status, KhStatus::Ok);
        assert_eq!(value, 1.0);
        assert_eq!(branch, 0);
    }

    #[test]
    fn null_and_domain_failures_set_messages() {
        let mut value = 0.0;
        assert_eq!(
            unsafe { kh_haagerup_constant(1.5, std::ptr::null_mut(), std::ptr::null_mut()) },
            KhStatus::NullPointer
        );
        assert_eq!(
            unsafe { kh_haagerup_constant(-2.0, &mut value, std::ptr::null_mut()) },
            KhStatus::Domain
        );
        let msg = unsafe { CStr::from_ptr(kh_last_error_message()) };
        assert!(!msg.to_bytes().is_empty());
    }

    #[test]
    fn tensor_moment_matches_library() {
        let shape = [2usize, 2];
        let entries = [1.0, 1.0, 1.0, 1.0];
        let mut tensor: *mut KhTensor = std::ptr::null_mut();
        let status = unsafe {
            kh_tensor_new(shape.as_ptr(), 2, entries.as_ptr(), 4, &mut tensor)
        };
        assert_eq!(status, KhStatus::Ok);

        let mut value = 0.0;
        let mut configs = 0u64;
        let status = unsafe { kh_exact_moment(tensor, 1.0, 26, 1, &mut value, &mut configs) };
        assert_eq!(status, KhStatus::Ok);
        assert_eq!(configs, 16);
        assert!((value - 1.0).abs() < 1e-15);

        let mut l2 = 0.0;
        assert_eq!(unsafe { kh_tensor_l2(tensor, &mut l2) }, KhStatus::Ok);
        assert!((l2 - 2.0).abs() < 1e-15);

        unsafe { kh_tensor_free(tensor) };
    }

    #[test]
    fn budget_maps_to_status() {
        let mut tensor: *mut KhTensor = std::ptr::null_mut();
        assert_eq!(
            unsafe { kh_block_ones_witness(1, 40, &mut tensor) },
            KhStatus::Ok
        );
        let mut value = 0.0;
        let status = unsafe {
            kh_exact_moment(tensor, 1.0, 26, 1, &mut value, std::ptr::null_mut())
        };
        assert_eq!(status, KhStatus::Budget);
        unsafe { kh_tensor_free(tensor) };
    }

    #[test]
    fn form_verification_for_identity_matrix() {
        let shape = [2usize, 2];
        let entries = [1.0, 0.0, 0.0, 1.0];
        let mut tensor: *mut KhTensor = std::ptr::null_mut();
        unsafe { kh_tensor_new(shape.as_ptr(), 2, entries.as_ptr(), 4, &mut tensor) };
        let mut form: *mut KhForm = std::ptr::null_mut();
        assert_eq!(
            unsafe { kh_form_new(tensor, f64::INFINITY, &mut form) },
            KhStatus::Ok
        );
        let (mut lhs, mut norm, mut constant, mut holds) = (0.0, 0.0, 0.0, false);
        let status = unsafe {
            kh_verify_mixed_littlewood(form, false, 26, 1, &mut lhs, &mut norm, &mut constant, &mut holds)
        };
        assert_eq!(status, KhStatus::Ok);
        assert!(holds);
        assert!((lhs - 2.0).abs() < 1e-12);
        assert!((norm - 2.0).abs() < 1e-12);
        assert!((constant - std::f64::consts::SQRT_2).abs() < 1e-12);
        unsafe { kh_form_free(form) };
        unsafe { kh_tensor_free(tensor) };
    }
}
