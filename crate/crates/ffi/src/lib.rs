//! C interface to `semidist`.
//!
//! Every function returns an [`SdStatus`]; on failure a description is kept
//! per thread and can be copied out with [`sd_last_error_message`]. Problems
//! are opaque handles created by [`sd_problem_new`] and released with
//! [`sd_problem_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use semidist::distributions::Distribution;
use semidist::framework::{confidence_region, run_test, CatalogTest, Hypothesis, Nuisance, TestProblem};
use semidist::measurement::{Measured, Sample, State, Truth, TwoSampleState};
use semidist::montecarlo::{coverage_experiment, size_experiment, ExperimentPlan, ExperimentReport};
use semidist::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    NoConvergence = 4,
    DegenerateSample = 5,
    MissingNuisance = 6,
    InvalidPlan = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdDistribution {
    Normal = 0,
    ChiSquared = 1,
    StudentT = 2,
    FisherF = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdHypothesis {
    /// `{θ₀}`
    Point = 0,
    /// `θ ≤ θ₀`
    LowerHalfLine = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SdTestResult {
    pub reject: bool,
    pub statistic: f64,
    pub eta: f64,
    pub alpha: f64,
    pub estimate: f64,
}

/// `hi` is `+INFINITY` for the one-sided tests.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SdInterval {
    pub lo: f64,
    pub hi: f64,
    pub gamma: f64,
    pub eta: f64,
    pub estimate: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SdReport {
    pub hits: u64,
    pub replications: u64,
    pub rate: f64,
    pub band_lo: f64,
    pub band_hi: f64,
    pub pass: bool,
    pub seed: u64,
}

/// Opaque handle to a configured catalog test.
pub struct SdProblem {
    inner: TestProblem,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> SdStatus {
    match e {
        Error::Domain { .. } | Error::ProbabilityOutOfRange(_) | Error::TailUnderflow(_) | Error::InvalidLevel(_) => SdStatus::Domain,
        Error::NoRoot(_) | Error::ConvergenceFailure(_) => SdStatus::NoConvergence,
        Error::DegenerateSample(_) => SdStatus::DegenerateSample,
        Error::MissingNuisance(_) => SdStatus::MissingNuisance,
        Error::InvalidPlan(_) | Error::NullViolated(_) => SdStatus::InvalidPlan,
        _ => SdStatus::InvalidArgument,
    }
}

/// Runs `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), (SdStatus, String)>) -> SdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SdStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            SdStatus::Panic
        }
    }
}

fn lib(e: Error) -> (SdStatus, String) {
    (status_of(&e), e.to_string())
}

fn null_ptr(what: &str) -> (SdStatus, String) {
    (SdStatus::NullPointer, format!("{what} is null"))
}

/// Copies the calling thread's last error message into `buf` (always
/// NUL-terminated when `len > 0`) and returns the full message length
/// excluding the terminator.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn sd_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

fn distribution(kind: SdDistribution, dof1: u32, dof2: u32) -> Result<Distribution, (SdStatus, String)> {
    let d = match kind {
        SdDistribution::Normal => Distribution::Normal,
        SdDistribution::ChiSquared => Distribution::ChiSquared { dof: dof1 },
        SdDistribution::StudentT => Distribution::StudentT { dof: dof1 },
        SdDistribution::FisherF => Distribution::FisherF { dof1, dof2 },
    };
    d.validated().map_err(lib)
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), (SdStatus, String)> {
    if out.is_null() {
        return Err(null_ptr("output pointer"));
    }
    out.write(value);
    Ok(())
}

/// Density at `x`. `dof2` is read only for the F distribution.
///
/// # Safety
/// `out` must be null or valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn sd_pdf(kind: SdDistribution, dof1: u32, dof2: u32, x: f64, out: *mut f64) -> SdStatus {
    guard(|| write_out(out, distribution(kind, dof1, dof2)?.pdf(x).map_err(lib)?))
}

/// Distribution function at `x`.
///
/// # Safety
/// `out` must be null or valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn sd_cdf(kind: SdDistribution, dof1: u32, dof2: u32, x: f64, out: *mut f64) -> SdStatus {
    guard(|| write_out(out, distribution(kind, dof1, dof2)?.cdf(x).map_err(lib)?))
}

/// Quantile at probability `p` in (0, 1).
///
/// # Safety
/// `out` must be null or valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn sd_quantile(kind: SdDistribution, dof1: u32, dof2: u32, p: f64, out: *mut f64) -> SdStatus {
    guard(|| write_out(out, distribution(kind, dof1, dof2)?.quantile(p).map_err(lib)?))
}

/// Creates a problem for the catalog test named `test` (e.g. `"mean-t"`).
/// `m` is the second sample size (0 for one-sample tests). `sigma1` and
/// `sigma2` are the known sigmas where the test needs them; pass 0 when a
/// value is not known.
///
/// # Safety
/// `test` must be a NUL-terminated string; `out` must be valid for writing
/// one pointer.
#[no_mangle]
pub unsafe extern "C" fn sd_problem_new(
    test: *const c_char,
    n: usize,
    m: usize,
    sigma1: f64,
    sigma2: f64,
    out: *mut *mut SdProblem,
) -> SdStatus {
    guard(|| {
        if test.is_null() {
            return Err(null_ptr("test name"));
        }
        let name = CStr::from_ptr(test).to_str().map_err(|_| (SdStatus::InvalidArgument, "test name is not UTF-8".to_string()))?;
        let test: CatalogTest = name.parse().map_err(lib)?;
        let known = |s: f64| s != 0.0 && !s.is_nan();
        let nuisance = match (test.known_sigmas(), known(sigma1), known(sigma2)) {
            (1, true, _) => Nuisance::Sigma(sigma1),
            (2, true, true) => Nuisance::Sigmas(sigma1, sigma2),
            _ => Nuisance::None,
        };
        let problem = TestProblem::new(test, n, (m > 0).then_some(m), nuisance).map_err(lib)?;
        write_out(out, Box::into_raw(Box::new(SdProblem { inner: problem })))
    })
}

/// Releases a problem; null is ignored.
///
/// # Safety
/// `problem` must be null or a handle from [`sd_problem_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sd_problem_free(problem: *mut SdProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

unsafe fn problem_ref<'a>(p: *const SdProblem) -> Result<&'a TestProblem, (SdStatus, String)> {
    p.as_ref().map(|p| &p.inner).ok_or_else(|| null_ptr("problem"))
}

unsafe fn slice<'a>(data: *const f64, len: usize, what: &str) -> Result<&'a [f64], (SdStatus, String)> {
    if data.is_null() {
        return Err(null_ptr(what));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

unsafe fn measured(problem: &TestProblem, x: *const f64, nx: usize, y: *const f64, ny: usize) -> Result<Measured, (SdStatus, String)> {
    let first = Sample::try_from(slice(x, nx, "x")?).map_err(lib)?;
    if problem.test().is_two_sample() {
        let second = Sample::try_from(slice(y, ny, "y")?).map_err(lib)?;
        Ok(Measured::Two(first, second))
    } else {
        Ok(Measured::One(first))
    }
}

fn hypothesis(kind: SdHypothesis, value: f64) -> Hypothesis {
    match kind {
        SdHypothesis::Point => Hypothesis::Point(value),
        SdHypothesis::LowerHalfLine => Hypothesis::LowerHalfLine(value),
    }
}

/// Runs the test on `x` (and `y` for two-sample tests; otherwise `y` may be
/// null).
///
/// # Safety
/// `x` must point to `nx` doubles, `y` to `ny` doubles when read, and `out`
/// must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn sd_run_test(
    problem: *const SdProblem,
    kind: SdHypothesis,
    null_value: f64,
    alpha: f64,
    x: *const f64,
    nx: usize,
    y: *const f64,
    ny: usize,
    out: *mut SdTestResult,
) -> SdStatus {
    guard(|| {
        let p = problem_ref(problem)?;
        let data = measured(p, x, nx, y, ny)?;
        let r = run_test(p, hypothesis(kind, null_value), alpha, &data).map_err(lib)?;
        write_out(out, SdTestResult { reject: r.reject, statistic: r.statistic, eta: r.eta, alpha: r.alpha, estimate: r.estimate })
    })
}

/// The `gamma`-confidence interval for `x` (and `y`).
///
/// # Safety
/// As for [`sd_run_test`].
#[no_mangle]
pub unsafe extern "C" fn sd_confidence_interval(
    problem: *const SdProblem,
    gamma: f64,
    x: *const f64,
    nx: usize,
    y: *const f64,
    ny: usize,
    out: *mut SdInterval,
) -> SdStatus {
    guard(|| {
        let p = problem_ref(problem)?;
        let data = measured(p, x, nx, y, ny)?;
        let ci = confidence_region(p, &data, gamma).map_err(lib)?;
        write_out(out, SdInterval { lo: ci.lo, hi: ci.hi, gamma: ci.gamma, eta: ci.eta, estimate: ci.estimate })
    })
}

fn truth(p: &TestProblem, mu1: f64, sigma1: f64, mu2: f64, sigma2: f64) -> Result<Truth, (SdStatus, String)> {
    let first = State::new(mu1, sigma1).map_err(lib)?;
    if p.test().is_two_sample() {
        Ok(Truth::Two(TwoSampleState::new(first, State::new(mu2, sigma2).map_err(lib)?).map_err(lib)?))
    } else {
        Ok(Truth::One(first))
    }
}

fn to_report(r: ExperimentReport) -> SdReport {
    SdReport {
        hits: r.hits,
        replications: r.replications,
        rate: r.rate,
        band_lo: r.band.0,
        band_hi: r.band.1,
        pass: r.pass,
        seed: r.seed,
    }
}

/// Coverage of the `gamma`-confidence interval at the true state
/// `(mu1, sigma1)` (and `(mu2, sigma2)` for two-sample tests).
///
/// # Safety
/// `problem` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn sd_coverage_experiment(
    problem: *const SdProblem,
    mu1: f64,
    sigma1: f64,
    mu2: f64,
    sigma2: f64,
    gamma: f64,
    replications: u64,
    seed: u64,
    workers: usize,
    out: *mut SdReport,
) -> SdStatus {
    guard(|| {
        let p = problem_ref(problem)?;
        let plan = ExperimentPlan {
            problem: *p,
            truth: truth(p, mu1, sigma1, mu2, sigma2)?,
            hypothesis: None,
            level: gamma,
            replications,
            seed,
            workers,
        };
        write_out(out, to_report(coverage_experiment(&plan).map_err(lib)?))
    })
}

/// Rejection rate at a true state inside the null.
///
/// # Safety
/// As for [`sd_coverage_experiment`].
#[no_mangle]
pub unsafe extern "C" fn sd_size_experiment(
    problem: *const SdProblem,
    mu1: f64,
    sigma1: f64,
    mu2: f64,
    sigma2: f64,
    kind: SdHypothesis,
    null_value: f64,
    alpha: f64,
    replications: u64,
    seed: u64,
    workers: usize,
    out: *mut SdReport,
) -> SdStatus {
    guard(|| {
        let p = problem_ref(problem)?;
        let plan = ExperimentPlan {
            problem: *p,
            truth: truth(p, mu1, sigma1, mu2, sigma2)?,
            hypothesis: Some(hypothesis(kind, null_value)),
            level: alpha,
            replications,
            seed,
            workers,
        };
        write_out(out, to_report(size_experiment(&plan).map_err(lib)?))
    })
}
