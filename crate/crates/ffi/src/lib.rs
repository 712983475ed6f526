//! C ABI for the octokernel toolkit.
//!
//! Every fallible function returns an [`OkStatus`]; on failure a message is
//! available from [`ok_last_error_message`] on the same thread. Octonions
//! cross the boundary by value as [`OkOctonion`]. Suite configurations and
//! reports are opaque handles owned by the caller and released with their
//! `_free` functions. Strings returned by the library are released with
//! [`ok_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use octokernel::harness::{run_suite, Format, Suite, SuiteConfig, VerificationReport};
use octokernel::{associator, kernels, Error, KernelParams, Octonion, Strategy};

/// Coefficients of `e0..e7`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct OkOctonion {
    pub c: [f64; 8],
}

impl From<OkOctonion> for Octonion {
    fn from(o: OkOctonion) -> Octonion {
        Octonion::new(o.c)
    }
}

impl From<Octonion> for OkOctonion {
    fn from(o: Octonion) -> OkOctonion {
        OkOctonion { c: o.into_array() }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ZeroDivisor = 3,
    Singularity = 4,
    Domain = 5,
    UnsupportedDimension = 6,
    IllConditioned = 7,
    Io = 8,
    Serialization = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OkStrategy {
    MonteCarlo = 0,
    QuasiMonteCarlo = 1,
    Exact = 2,
}

impl From<OkStrategy> for Strategy {
    fn from(s: OkStrategy) -> Strategy {
        match s {
            OkStrategy::MonteCarlo => Strategy::MonteCarlo,
            OkStrategy::QuasiMonteCarlo => Strategy::QuasiMonteCarlo,
            OkStrategy::Exact => Strategy::ExactMoments,
        }
    }
}

/// Suite configuration handle.
pub struct OkConfig {
    inner: SuiteConfig,
}

/// Verification report handle.
pub struct OkReport {
    inner: VerificationReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> OkStatus {
    match e {
        Error::ZeroDivisor => OkStatus::ZeroDivisor,
        Error::Singularity { .. } => OkStatus::Singularity,
        Error::UnsupportedDimension(_) => OkStatus::UnsupportedDimension,
        Error::Domain(_) | Error::NotPolynomial(_) | Error::DivergentMoment(_) => OkStatus::Domain,
        Error::IllConditioned { .. } => OkStatus::IllConditioned,
        Error::Sample { source, .. } => status_of(source),
        Error::Config(_) => OkStatus::InvalidArgument,
        Error::Io { .. } => OkStatus::Io,
        Error::Serialization(_) => OkStatus::Serialization,
    }
}

fn fail(status: OkStatus, msg: impl Into<String>) -> OkStatus {
    set_last_error(msg.into());
    status
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), OkStatus>) -> OkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OkStatus::Ok,
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(OkStatus::Panic, format!("internal panic: {msg}"))
        }
    }
}

fn lift(e: Error) -> OkStatus {
    fail(status_of(&e), e.to_string())
}

unsafe fn out_ref<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, OkStatus> {
    p.as_mut().ok_or_else(|| fail(OkStatus::NullPointer, format!("`{name}` is null")))
}

unsafe fn in_ref<'a, T>(p: *const T, name: &str) -> Result<&'a T, OkStatus> {
    p.as_ref().ok_or_else(|| fail(OkStatus::NullPointer, format!("`{name}` is null")))
}

unsafe fn in_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, OkStatus> {
    if p.is_null() {
        return Err(fail(OkStatus::NullPointer, format!("`{name}` is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(OkStatus::InvalidArgument, format!("`{name}` is not UTF-8")))
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ok_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ok_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ok_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub extern "C" fn ok_octonion_mul(x: OkOctonion, y: OkOctonion) -> OkOctonion {
    Octonion::from(x).mul(&y.into()).into()
}

#[no_mangle]
pub extern "C" fn ok_octonion_conj(x: OkOctonion) -> OkOctonion {
    Octonion::from(x).conj().into()
}

#[no_mangle]
pub extern "C" fn ok_octonion_norm(x: OkOctonion) -> f64 {
    Octonion::from(x).norm()
}

/// `(xy)z - x(yz)`.
#[no_mangle]
pub extern "C" fn ok_octonion_associator(x: OkOctonion, y: OkOctonion, z: OkOctonion) -> OkOctonion {
    associator(&x.into(), &y.into(), &z.into()).into()
}

/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ok_octonion_inverse(x: OkOctonion, out: *mut OkOctonion) -> OkStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = Octonion::from(x).inverse().map_err(lift)?.into();
        Ok(())
    })
}

unsafe fn kernel_call(out: *mut OkOctonion, f: impl FnOnce() -> octokernel::Result<Octonion>) -> OkStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = f().map_err(lift)?.into();
        Ok(())
    })
}

/// Cauchy kernel `E(x)`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ok_cauchy(x: OkOctonion, out: *mut OkOctonion) -> OkStatus {
    kernel_call(out, || kernels::cauchy_e(x.into()))
}

/// Cauchy kernel `E(x, a)`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ok_cauchy_at(x: OkOctonion, a: OkOctonion, out: *mut OkOctonion) -> OkStatus {
    kernel_call(out, || kernels::cauchy_e2(x.into(), a.into()))
}

/// Szego kernel `S(x, a)`, or its dilation `S^r` for `r < 1`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ok_szego(x: OkOctonion, a: OkOctonion, r: f64, out: *mut OkOctonion) -> OkStatus {
    kernel_call(out, || {
        let p = KernelParams::new(a.into()).with_radius(r);
        if r == 1.0 {
            kernels::szego_s(x.into(), &p)
        } else {
            kernels::szego_sr(x.into(), &p)
        }
    })
}

/// Bergman kernel `B(x, a)`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ok_bergman(x: OkOctonion, a: OkOctonion, out: *mut OkOctonion) -> OkStatus {
    kernel_call(out, || kernels::bergman_b(x.into(), &KernelParams::new(a.into())))
}

/// Unified kernel `K_m(x, a)` for `m` in {2, 8}.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ok_unified(x: OkOctonion, a: OkOctonion, m: u32, out: *mut OkOctonion) -> OkStatus {
    kernel_call(out, || kernels::unified_kernel(x.into(), a.into(), m))
}

/// New configuration with default settings.
#[no_mangle]
pub extern "C" fn ok_config_new() -> *mut OkConfig {
    Box::into_raw(Box::new(OkConfig {
        inner: SuiteConfig::default(),
    }))
}

/// # Safety
/// `cfg` must be null or a handle from [`ok_config_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ok_config_free(cfg: *mut OkConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

unsafe fn with_config(cfg: *mut OkConfig, f: impl FnOnce(&mut SuiteConfig) -> Result<(), OkStatus>) -> OkStatus {
    guard(|| f(&mut out_ref(cfg, "cfg")?.inner))
}

/// # Safety
/// `cfg` must be null or a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn ok_config_set_seed(cfg: *mut OkConfig, seed: u64) -> OkStatus {
    with_config(cfg, |c| {
        c.seed = seed;
        Ok(())
    })
}

/// # Safety
/// `cfg` must be null or a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn ok_config_set_samples(cfg: *mut OkConfig, n: u64) -> OkStatus {
    with_config(cfg, |c| {
        if n == 0 {
            return Err(fail(OkStatus::InvalidArgument, "sample count must be at least 1"));
        }
        c.n_samples = n;
        Ok(())
    })
}

/// `strategy` is one of the `OkStrategy` values.
///
/// # Safety
/// `cfg` must be null or a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn ok_config_set_strategy(cfg: *mut OkConfig, strategy: u32) -> OkStatus {
    with_config(cfg, |c| {
        let s = match strategy {
            0 => OkStrategy::MonteCarlo,
            1 => OkStrategy::QuasiMonteCarlo,
            2 => OkStrategy::Exact,
            other => return Err(fail(OkStatus::InvalidArgument, format!("unknown strategy {other}"))),
        };
        c.strategy = s.into();
        Ok(())
    })
}

/// Finite-difference step and whether to apply Richardson extrapolation.
///
/// # Safety
/// `cfg` must be null or a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn ok_config_set_step(cfg: *mut OkConfig, h: f64, richardson: bool) -> OkStatus {
    with_config(cfg, |c| {
        if !(h > 0.0 && h.is_finite()) {
            return Err(fail(OkStatus::InvalidArgument, format!("h must be positive, got {h}")));
        }
        c.h = h;
        c.richardson = richardson;
        Ok(())
    })
}

/// # Safety
/// `cfg` must be null or a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn ok_config_set_max_degree(cfg: *mut OkConfig, k: u32) -> OkStatus {
    with_config(cfg, |c| {
        c.max_degree = k as usize;
        Ok(())
    })
}

/// Replace the kernel base points with `points[0..n]`.
///
/// # Safety
/// `cfg` must be null or a live configuration handle; `points` must be null
/// or valid for `n` reads.
#[no_mangle]
pub unsafe extern "C" fn ok_config_set_points(cfg: *mut OkConfig, points: *const OkOctonion, n: usize) -> OkStatus {
    with_config(cfg, |c| {
        if n == 0 {
            return Err(fail(OkStatus::InvalidArgument, "at least one point is required"));
        }
        in_ref(points, "points")?;
        let pts = std::slice::from_raw_parts(points, n);
        c.points = pts.iter().map(|&p| p.into()).collect();
        Ok(())
    })
}

/// Run the suite named `suite` (`algebra`, `analyticity`, `szego`,
/// `bergman`, `parseval`, `counterexample`, `unified` or `all`). On success
/// `*out` receives a report handle; a report with failing checks is still a
/// success.
///
/// # Safety
/// `cfg` must be a live configuration handle, `suite` a NUL-terminated
/// string, and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ok_run_suite(cfg: *const OkConfig, suite: *const c_char, out: *mut *mut OkReport) -> OkStatus {
    guard(|| {
        let cfg = in_ref(cfg, "cfg")?;
        let name = in_str(suite, "suite")?;
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let suite: Suite = name.parse().map_err(lift)?;
        let report = run_suite(suite, &cfg.inner).map_err(lift)?;
        *out = Box::into_raw(Box::new(OkReport { inner: report }));
        Ok(())
    })
}

/// # Safety
/// `report` must be null or a handle from [`ok_run_suite`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ok_report_free(report: *mut OkReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// 1 if every check passed, 0 if any failed, -1 for a null handle.
///
/// # Safety
/// `report` must be null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn ok_report_passed(report: *const OkReport) -> c_int {
    report.as_ref().map_or(-1, |r| c_int::from(r.inner.passed))
}

/// Number of check rows, 0 for a null handle.
///
/// # Safety
/// `report` must be null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn ok_report_check_count(report: *const OkReport) -> usize {
    report.as_ref().map_or(0, |r| r.inner.checks.len())
}

/// Number of failing check rows, 0 for a null handle.
///
/// # Safety
/// `report` must be null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn ok_report_failure_count(report: *const OkReport) -> usize {
    report.as_ref().map_or(0, |r| r.inner.failures().count())
}

/// Serialize the report; `*out` receives a string to release with
/// [`ok_string_free`].
///
/// # Safety
/// `report` must be a live report handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ok_report_serialize(report: *const OkReport, csv: bool, out: *mut *mut c_char) -> OkStatus {
    guard(|| {
        let r = in_ref(report, "report")?;
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let text = match if csv { Format::Csv } else { Format::Json } {
            Format::Json => r.inner.to_json(),
            Format::Csv => r.inner.to_csv(),
        }
        .map_err(lift)?;
        *out = CString::new(text)
            .map_err(|_| fail(OkStatus::Serialization, "report contains NUL"))?
            .into_raw();
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize) -> OkOctonion {
        Octonion::basis(i).into()
    }

    #[test]
    fn status_codes_follow_error_kind() {
        assert_eq!(status_of(&Error::ZeroDivisor), OkStatus::ZeroDivisor);
        let nested = Error::Sample {
            index: 3,
            source: Box::new(Error::UnsupportedDimension(4)),
        };
        assert_eq!(status_of(&nested), OkStatus::UnsupportedDimension);
    }

    #[test]
    fn product_convention() {
        let p = ok_octonion_mul(e(1), e(6));
        assert_eq!(p, OkOctonion::from(-Octonion::basis(7)));
    }

    #[test]
    fn panics_become_status() {
        let s = guard(|| panic!("boom"));
        assert_eq!(s, OkStatus::Panic);
        let msg = unsafe { CStr::from_ptr(ok_last_error_message()) };
        assert!(msg.to_str().unwrap().contains("boom"));
    }
}
