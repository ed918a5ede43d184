//! C ABI for `lsstat`.
//!
//! Objects are opaque heap handles created by `lsstat_*` constructors and
//! released with the matching `*_free` function. Every fallible call returns
//! an [`LsstatStatus`]; on failure the message is available from
//! [`lsstat_last_error`] on the same thread until the next failing call.
//! Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lsstat::bootstrap::{run_test, BootstrapConfig, OrderMode};
use lsstat::deviation::{build_grid, deviation_field, statistic};
use lsstat::identify::{identify, IdentificationResult};
use lsstat::models::{generate, ModelSpec};
use lsstat::report::{Payload, Report, TestPayload};
use lsstat::series::{load_csv, MultivariateSeries};
use lsstat::var::Estimator;
use lsstat::{rng, Error};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LsstatStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    TooShort = 4,
    Domain = 5,
    Degenerate = 6,
    Numerical = 7,
    UnstableModel = 8,
    Io = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LsstatEstimator {
    YuleWalker = 0,
    LeastSquares = 1,
}

/// Test settings. Obtain defaults from [`lsstat_test_config_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct LsstatTestConfig {
    pub replicates: usize,
    pub alpha: f64,
    pub seed: u64,
    /// Fixed sieve order, or -1 for AIC selection.
    pub order: i64,
    /// Largest order searched when `order` is -1; 0 means min(T/10, 15).
    pub p_max: usize,
    pub estimator: LsstatEstimator,
    /// Worker threads; 0 uses all cores. Results do not depend on it.
    pub threads: usize,
}

/// A `T × d` series.
pub struct LsstatSeries(MultivariateSeries);

/// Result of [`lsstat_run_test`].
pub struct LsstatReport(Report);

/// Result of [`lsstat_identify`].
pub struct LsstatIdentification(IdentificationResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> LsstatStatus {
    match e.root() {
        Error::Parse { .. } | Error::Ragged { .. } => LsstatStatus::Parse,
        Error::TooShort { .. } => LsstatStatus::TooShort,
        Error::Domain(_) => LsstatStatus::Domain,
        Error::Degenerate(_) => LsstatStatus::Degenerate,
        Error::Numerical(_) => LsstatStatus::Numerical,
        Error::UnstableModel { .. } => LsstatStatus::UnstableModel,
        Error::Io(_) => LsstatStatus::Io,
        Error::Replicate { .. } => LsstatStatus::Numerical,
    }
}

/// Runs `f`, converting errors and panics to status codes.
fn guard<F>(f: F) -> LsstatStatus
where
    F: FnOnce() -> Result<(), (LsstatStatus, String)>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LsstatStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            LsstatStatus::Panic
        }
    }
}

fn lib(e: Error) -> (LsstatStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (LsstatStatus, String) {
    (LsstatStatus::NullPointer, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (LsstatStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (LsstatStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, (LsstatStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

/// Message of the last failure on this thread, or NULL. Owned by the library.
#[no_mangle]
pub extern "C" fn lsstat_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lsstat_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn lsstat_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a series from a row-major `t × d` buffer.
///
/// # Safety
/// `data` must point to `t * d` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lsstat_series_from_buffer(
    data: *const f64,
    t: usize,
    d: usize,
    center: bool,
    out: *mut *mut LsstatSeries,
) -> LsstatStatus {
    guard(|| {
        if data.is_null() {
            return Err(null("data"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let n = t.checked_mul(d).ok_or_else(|| lib(Error::Domain("t * d overflows".into())))?;
        let slice = std::slice::from_raw_parts(data, n);
        let x = MultivariateSeries::from_row_major(t, d, slice).map_err(lib)?;
        put(out, LsstatSeries(if center { x.center() } else { x }));
        Ok(())
    })
}

/// Reads a CSV file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lsstat_series_load_csv(
    path: *const c_char,
    header: bool,
    center: bool,
    out: *mut *mut LsstatSeries,
) -> LsstatStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        if out.is_null() {
            return Err(null("out"));
        }
        put(out, LsstatSeries(load_csv(path, header, center).map_err(lib)?));
        Ok(())
    })
}

/// Simulates a model preset such as `"ar1:0.5"` or `"tv-scale"`.
///
/// # Safety
/// `model` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lsstat_simulate(
    model: *const c_char,
    t: usize,
    seed: u64,
    out: *mut *mut LsstatSeries,
) -> LsstatStatus {
    guard(|| {
        let spec = ModelSpec::preset(str_arg(model, "model")?).map_err(lib)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let mut stream = rng::derived_stream(seed, rng::domain::SIMULATE, 0);
        put(out, LsstatSeries(generate(&spec, t, &mut stream).map_err(lib)?));
        Ok(())
    })
}

/// # Safety
/// `series` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn lsstat_series_len(series: *const LsstatSeries) -> usize {
    series.as_ref().map_or(0, |s| s.0.len())
}

/// # Safety
/// `series` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn lsstat_series_dim(series: *const LsstatSeries) -> usize {
    series.as_ref().map_or(0, |s| s.0.dim())
}

/// Copies the observations row-major into `buf`, which holds `len` doubles.
///
/// # Safety
/// `series` must be a live handle and `buf` writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn lsstat_series_copy(series: *const LsstatSeries, buf: *mut f64, len: usize) -> LsstatStatus {
    guard(|| {
        let s = &handle(series, "series")?.0;
        if buf.is_null() {
            return Err(null("buf"));
        }
        let (t, d) = (s.len(), s.dim());
        if len < t * d {
            return Err((LsstatStatus::BufferTooSmall, format!("need {} doubles", t * d)));
        }
        let dst = std::slice::from_raw_parts_mut(buf, t * d);
        for i in 0..t {
            for j in 0..d {
                dst[i * d + j] = s.column(j)[i];
            }
        }
        Ok(())
    })
}

/// # Safety
/// `series` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn lsstat_series_free(series: *mut LsstatSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// Test statistic without the bootstrap.
///
/// # Safety
/// `series` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lsstat_statistic(series: *const LsstatSeries, out: *mut f64) -> LsstatStatus {
    guard(|| {
        let s = &handle(series, "series")?.0;
        if out.is_null() {
            return Err(null("out"));
        }
        s.check_testable().map_err(lib)?;
        let grid = build_grid(s.len()).map_err(lib)?;
        *out = statistic(s, &grid).map_err(lib)?;
        Ok(())
    })
}

#[no_mangle]
pub extern "C" fn lsstat_test_config_default() -> LsstatTestConfig {
    let c = BootstrapConfig::default();
    LsstatTestConfig {
        replicates: c.replicates,
        alpha: c.alpha,
        seed: c.seed,
        order: -1,
        p_max: 0,
        estimator: LsstatEstimator::YuleWalker,
        threads: 0,
    }
}

fn to_config(c: &LsstatTestConfig) -> Result<BootstrapConfig, (LsstatStatus, String)> {
    let order = match c.order {
        -1 => OrderMode::Auto {
            p_min: 0,
            p_max: (c.p_max > 0).then_some(c.p_max),
        },
        p if p >= 0 => OrderMode::Fixed(p as usize),
        p => return Err(lib(Error::Domain(format!("order {p} must be -1 or non-negative")))),
    };
    Ok(BootstrapConfig {
        replicates: c.replicates,
        alpha: c.alpha,
        seed: c.seed,
        order,
        estimator: match c.estimator {
            LsstatEstimator::YuleWalker => Estimator::YuleWalker,
            LsstatEstimator::LeastSquares => Estimator::LeastSquares,
        },
        threads: (c.threads > 0).then_some(c.threads),
        ..BootstrapConfig::default()
    })
}

/// Runs the bootstrap test. `config` may be NULL for defaults.
///
/// # Safety
/// `series` must be a live handle, `config` valid or NULL, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lsstat_run_test(
    series: *const LsstatSeries,
    config: *const LsstatTestConfig,
    out: *mut *mut LsstatReport,
) -> LsstatStatus {
    guard(|| {
        let s = &handle(series, "series")?.0;
        if out.is_null() {
            return Err(null("out"));
        }
        let c = config.as_ref().copied().unwrap_or_else(|| lsstat_test_config_default());
        let config = to_config(&c)?;
        let report = run_test(s, &config).map_err(lib)?;
        put(
            out,
            LsstatReport(Report::new(Payload::Test(TestPayload {
                input: None,
                config,
                report,
            }))),
        );
        Ok(())
    })
}

fn test_of(r: &LsstatReport) -> &lsstat::TestReport {
    match &r.0.payload {
        Payload::Test(p) => &p.report,
        _ => unreachable!("report handles always hold test results"),
    }
}

/// # Safety
/// `report` must be a live handle or NULL (returns NaN).
#[no_mangle]
pub unsafe extern "C" fn lsstat_report_statistic(report: *const LsstatReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| test_of(r).statistic)
}

/// # Safety
/// `report` must be a live handle or NULL (returns NaN).
#[no_mangle]
pub unsafe extern "C" fn lsstat_report_quantile(report: *const LsstatReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| test_of(r).quantile)
}

/// # Safety
/// `report` must be a live handle or NULL (returns NaN).
#[no_mangle]
pub unsafe extern "C" fn lsstat_report_p_value(report: *const LsstatReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| test_of(r).p_value)
}

/// # Safety
/// `report` must be a live handle or NULL (returns false).
#[no_mangle]
pub unsafe extern "C" fn lsstat_report_reject(report: *const LsstatReport) -> bool {
    report.as_ref().is_some_and(|r| test_of(r).reject)
}

/// Selected sieve order.
///
/// # Safety
/// `report` must be a live handle or NULL (returns 0).
#[no_mangle]
pub unsafe extern "C" fn lsstat_report_order(report: *const LsstatReport) -> usize {
    report.as_ref().map_or(0, |r| test_of(r).order)
}

/// Copies the `d × d` sup matrix row-major into `buf`.
///
/// # Safety
/// `report` must be a live handle and `buf` writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn lsstat_report_sup_matrix(report: *const LsstatReport, buf: *mut f64, len: usize) -> LsstatStatus {
    guard(|| {
        let m = &test_of(handle(report, "report")?).sup_matrix;
        if buf.is_null() {
            return Err(null("buf"));
        }
        let flat: Vec<f64> = m.iter().flatten().copied().collect();
        if len < flat.len() {
            return Err((LsstatStatus::BufferTooSmall, format!("need {} doubles", flat.len())));
        }
        std::slice::from_raw_parts_mut(buf, flat.len()).copy_from_slice(&flat);
        Ok(())
    })
}

/// Full JSON report; release with [`lsstat_string_free`].
///
/// # Safety
/// `report` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lsstat_report_to_json(report: *const LsstatReport, out: *mut *mut c_char) -> LsstatStatus {
    guard(|| {
        let r = handle(report, "report")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let text = r.0.to_json().map_err(lib)?;
        *out = CString::new(text)
            .map_err(|_| (LsstatStatus::Numerical, "report contains NUL".to_string()))?
            .into_raw();
        Ok(())
    })
}

/// # Safety
/// `report` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn lsstat_report_free(report: *mut LsstatReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Stationary-subset identification with tuning parameter `gamma` in (0, 1/2).
///
/// # Safety
/// `series` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lsstat_identify(
    series: *const LsstatSeries,
    gamma: f64,
    out: *mut *mut LsstatIdentification,
) -> LsstatStatus {
    guard(|| {
        let s = &handle(series, "series")?.0;
        if out.is_null() {
            return Err(null("out"));
        }
        s.check_testable().map_err(lib)?;
        let field = deviation_field(s, &build_grid(s.len()).map_err(lib)?).map_err(lib)?;
        put(out, LsstatIdentification(identify(s, &field, gamma).map_err(lib)?));
        Ok(())
    })
}

/// Size `d'` of the largest subsets.
///
/// # Safety
/// `id` must be a live handle or NULL (returns 0).
#[no_mangle]
pub unsafe extern "C" fn lsstat_identification_d_prime(id: *const LsstatIdentification) -> usize {
    id.as_ref().map_or(0, |r| r.0.d_prime)
}

/// Number of maximum subsets.
///
/// # Safety
/// `id` must be a live handle or NULL (returns 0).
#[no_mangle]
pub unsafe extern "C" fn lsstat_identification_subset_count(id: *const LsstatIdentification) -> usize {
    id.as_ref().map_or(0, |r| r.0.subsets.len())
}

/// Copies the 0-based component indices of subset `index` into `buf`
/// (capacity `cap`); `len` receives the subset size.
///
/// # Safety
/// `id` must be a live handle, `buf` writable for `cap` entries, `len` writable.
#[no_mangle]
pub unsafe extern "C" fn lsstat_identification_subset(
    id: *const LsstatIdentification,
    index: usize,
    buf: *mut usize,
    cap: usize,
    len: *mut usize,
) -> LsstatStatus {
    guard(|| {
        let r = &handle(id, "identification")?.0;
        if buf.is_null() || len.is_null() {
            return Err(null("buf or len"));
        }
        let subset = r.subsets.get(index).ok_or_else(|| {
            lib(Error::Domain(format!("subset {index} out of range ({} subsets)", r.subsets.len())))
        })?;
        *len = subset.len();
        if cap < subset.len() {
            return Err((LsstatStatus::BufferTooSmall, format!("need {} entries", subset.len())));
        }
        std::slice::from_raw_parts_mut(buf, subset.len()).copy_from_slice(subset);
        Ok(())
    })
}

/// # Safety
/// `id` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn lsstat_identification_free(id: *mut LsstatIdentification) {
    if !id.is_null() {
        drop(Box::from_raw(id));
    }
}
