use std::ffi::{c_char, CStr};
use std::process::Command;
use std::ptr;

use semidist_ffi::*;

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    unsafe {
        sd_last_error_message(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

fn problem(name: &CStr, n: usize, m: usize, s1: f64, s2: f64) -> *mut SdProblem {
    let mut p = ptr::null_mut();
    let st = unsafe { sd_problem_new(name.as_ptr(), n, m, s1, s2, &mut p) };
    assert_eq!(st, SdStatus::Ok, "{}", last_error());
    p
}

#[test]
fn quantiles_round_trip() {
    let mut q = 0.0;
    let mut p = 0.0;
    unsafe {
        assert_eq!(sd_quantile(SdDistribution::Normal, 0, 0, 0.975, &mut q), SdStatus::Ok);
        assert!((q - 1.959_963_984_540_054).abs() < 1e-12);
        assert_eq!(sd_quantile(SdDistribution::FisherF, 3, 7, 0.9, &mut q), SdStatus::Ok);
        assert_eq!(sd_cdf(SdDistribution::FisherF, 3, 7, q, &mut p), SdStatus::Ok);
        assert!((p - 0.9).abs() < 1e-10);
        assert_eq!(sd_pdf(SdDistribution::ChiSquared, 2, 0, 1.0, &mut p), SdStatus::Ok);
        assert!((p - 0.5 * (-0.5f64).exp()).abs() < 1e-15);
        assert_eq!(sd_pdf(SdDistribution::ChiSquared, 2, 0, 0.0, &mut p), SdStatus::Domain);
    }
}

#[test]
fn errors_are_reported() {
    let mut q = 0.0;
    unsafe {
        assert_eq!(sd_quantile(SdDistribution::StudentT, 0, 0, 0.5, &mut q), SdStatus::InvalidArgument);
        assert!(!last_error().is_empty());
        assert_eq!(sd_quantile(SdDistribution::Normal, 0, 0, 1.5, &mut q), SdStatus::Domain);
        assert_eq!(sd_quantile(SdDistribution::Normal, 0, 0, 0.5, ptr::null_mut()), SdStatus::NullPointer);
        assert_eq!(last_error(), "output pointer is null");

        let mut p = ptr::null_mut();
        assert_eq!(sd_problem_new(c"mean-z".as_ptr(), 10, 0, 0.0, 0.0, &mut p), SdStatus::MissingNuisance);
        assert!(p.is_null());
        assert_eq!(sd_problem_new(c"nope".as_ptr(), 10, 0, 1.0, 0.0, &mut p), SdStatus::InvalidArgument);
        assert_eq!(sd_problem_new(ptr::null(), 10, 0, 1.0, 0.0, &mut p), SdStatus::NullPointer);
        sd_problem_free(ptr::null_mut());
    }
}

#[test]
fn error_message_is_truncated_safely() {
    let mut q = 0.0;
    unsafe {
        sd_quantile(SdDistribution::Normal, 0, 0, 0.5, ptr::null_mut());
        let full = sd_last_error_message(ptr::null_mut(), 0);
        assert_eq!(full, "output pointer is null".len());
        let mut buf = [1 as c_char; 4];
        sd_last_error_message(buf.as_mut_ptr(), buf.len());
        assert_eq!(CStr::from_ptr(buf.as_ptr()).to_bytes(), b"out");
        let _ = sd_quantile(SdDistribution::Normal, 0, 0, 0.5, &mut q);
    }
}

#[test]
fn test_and_interval_agree_with_library() {
    let x = [4.9, 5.3, 5.1, 4.7, 5.6, 5.2, 4.8, 5.0];
    let p = problem(c"mean-t", x.len(), 0, 0.0, 0.0);
    let mut r = SdTestResult::default();
    let mut ci = SdInterval::default();
    unsafe {
        assert_eq!(sd_run_test(p, SdHypothesis::Point, 5.0, 0.05, x.as_ptr(), x.len(), ptr::null(), 0, &mut r), SdStatus::Ok);
        assert_eq!(sd_confidence_interval(p, 0.95, x.as_ptr(), x.len(), ptr::null(), 0, &mut ci), SdStatus::Ok);
        sd_problem_free(p);
    }
    let lib = semidist::framework::TestProblem::new(semidist::framework::CatalogTest::MeanT, 8, None, semidist::framework::Nuisance::None).unwrap();
    let data = semidist::measurement::Measured::One(semidist::measurement::Sample::new(x.to_vec()).unwrap());
    let want = semidist::framework::run_test(&lib, semidist::framework::Hypothesis::Point(5.0), 0.05, &data).unwrap();
    assert_eq!(r.reject, want.reject);
    assert_eq!(r.statistic, want.statistic);
    assert_eq!(r.eta, want.eta);
    assert!(ci.lo < r.estimate && r.estimate < ci.hi);
    assert!((ci.hi + ci.lo - 2.0 * ci.estimate).abs() < 1e-12);
    // 5.0 is inside the interval exactly when the test does not reject
    assert_eq!(ci.lo < 5.0 && 5.0 < ci.hi, !r.reject);
}

#[test]
fn two_sample_and_one_sided() {
    let x = [1.0, 2.0, 3.0, 4.0];
    let y = [0.5, 1.5, 2.5];
    let p = problem(c"diff-means", 4, 3, 1.0, 2.0);
    let mut r = SdTestResult::default();
    unsafe {
        assert_eq!(sd_run_test(p, SdHypothesis::Point, 0.0, 0.05, x.as_ptr(), 4, y.as_ptr(), 3, &mut r), SdStatus::Ok);
        assert!((r.estimate - 1.0).abs() < 1e-12);
        assert_eq!(sd_run_test(p, SdHypothesis::Point, 0.0, 0.05, x.as_ptr(), 4, ptr::null(), 0, &mut r), SdStatus::NullPointer);
        sd_problem_free(p);
    }
    let p = problem(c"mean-z-upper", 4, 0, 1.0, 0.0);
    let mut ci = SdInterval::default();
    unsafe {
        assert_eq!(sd_confidence_interval(p, 0.95, x.as_ptr(), 4, ptr::null(), 0, &mut ci), SdStatus::Ok);
        sd_problem_free(p);
    }
    assert_eq!(ci.hi, f64::INFINITY);
    assert!((ci.lo - (2.5 - 1.644_853_626_951_472_2 / 2.0)).abs() < 1e-9);
}

#[test]
fn experiments() {
    let p = problem(c"mean-z", 5, 0, 1.0, 0.0);
    let mut a = SdReport::default();
    let mut b = SdReport::default();
    unsafe {
        assert_eq!(sd_coverage_experiment(p, 0.0, 1.0, 0.0, 0.0, 0.9, 4000, 3, 1, &mut a), SdStatus::Ok);
        assert_eq!(sd_coverage_experiment(p, 0.0, 1.0, 0.0, 0.0, 0.9, 4000, 3, 4, &mut b), SdStatus::Ok);
        assert_eq!(a, b);
        assert!(a.pass && a.band_lo < 0.9 && 0.9 < a.band_hi);
        assert_eq!(sd_size_experiment(p, 0.0, 1.0, 0.0, 0.0, SdHypothesis::Point, 0.0, 0.05, 4000, 3, 2, &mut a), SdStatus::Ok);
        assert!(a.pass);
        assert_eq!(sd_size_experiment(p, 1.0, 1.0, 0.0, 0.0, SdHypothesis::Point, 0.0, 0.05, 100, 3, 1, &mut a), SdStatus::InvalidPlan);
        assert_eq!(sd_coverage_experiment(p, 0.0, 1.0, 0.0, 0.0, 0.9, 0, 3, 1, &mut a), SdStatus::InvalidPlan);
        sd_problem_free(p);
    }
}

#[test]
fn header_is_current_and_compiles() {
    let dir = env!("CARGO_MANIFEST_DIR");
    let header = std::fs::read_to_string(format!("{dir}/include/semidist.h")).unwrap();
    for name in ["sd_problem_new", "sd_run_test", "sd_confidence_interval", "sd_size_experiment", "SD_STATUS_OK", "SEMIDIST_H"] {
        assert!(header.contains(name), "{name}");
    }
    // syntax check only when a C compiler is around
    if let Ok(out) = Command::new("cc").args(["-fsyntax-only", "-std=c11", "-x", "c", &format!("{dir}/include/semidist.h")]).output() {
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
}
