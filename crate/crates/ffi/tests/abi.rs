use std::ffi::{CStr, CString};
use std::ptr;

use lsstat_ffi::*;

fn series(t: usize, d: usize) -> *mut LsstatSeries {
    let data: Vec<f64> = (0..t * d).map(|i| ((i * 7919) % 23) as f64 - 11.0).collect();
    let mut out = ptr::null_mut();
    let st = unsafe { lsstat_series_from_buffer(data.as_ptr(), t, d, true, &mut out) };
    assert_eq!(st, LsstatStatus::Ok);
    out
}

fn last_error() -> String {
    let p = lsstat_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn series_round_trip() {
    let data = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(lsstat_series_from_buffer(data.as_ptr(), 3, 2, false, &mut s), LsstatStatus::Ok);
        assert_eq!(lsstat_series_len(s), 3);
        assert_eq!(lsstat_series_dim(s), 2);
        let mut buf = [0.0; 6];
        assert_eq!(lsstat_series_copy(s, buf.as_mut_ptr(), 6), LsstatStatus::Ok);
        assert_eq!(buf, data);
        assert_eq!(lsstat_series_copy(s, buf.as_mut_ptr(), 5), LsstatStatus::BufferTooSmall);
        lsstat_series_free(s);
    }
}

#[test]
fn errors_map_to_codes() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(lsstat_series_from_buffer(ptr::null(), 3, 1, false, &mut s), LsstatStatus::NullPointer);
        let bad = [1.0, f64::NAN];
        assert_eq!(lsstat_series_from_buffer(bad.as_ptr(), 2, 1, false, &mut s), LsstatStatus::Parse);

        let short = series(4, 1);
        let mut stat = 0.0;
        assert_eq!(lsstat_statistic(short, &mut stat), LsstatStatus::TooShort);
        assert!(last_error().contains("TooShort"));
        lsstat_series_free(short);

        let path = CString::new("/nonexistent/file.csv").unwrap();
        assert_eq!(lsstat_series_load_csv(path.as_ptr(), false, true, &mut s), LsstatStatus::Io);

        let model = CString::new("no-such-model").unwrap();
        assert_eq!(lsstat_simulate(model.as_ptr(), 64, 1, &mut s), LsstatStatus::Domain);

        let uni = series(64, 1);
        let mut id = ptr::null_mut();
        assert_eq!(lsstat_identify(uni, 0.25, &mut id), LsstatStatus::Domain);
        lsstat_series_free(uni);
    }
}

#[test]
fn test_report_accessors_and_json() {
    let s = series(64, 2);
    unsafe {
        let mut cfg = lsstat_test_config_default();
        cfg.replicates = 39;
        cfg.seed = 3;
        let mut r = ptr::null_mut();
        assert_eq!(lsstat_run_test(s, &cfg, &mut r), LsstatStatus::Ok);
        let stat = lsstat_report_statistic(r);
        let mut direct = 0.0;
        assert_eq!(lsstat_statistic(s, &mut direct), LsstatStatus::Ok);
        assert_eq!(stat, direct);
        let p = lsstat_report_p_value(r);
        assert!((0.0..=1.0).contains(&p));
        assert_eq!(lsstat_report_reject(r), stat > lsstat_report_quantile(r));

        let mut sup = [0.0; 4];
        assert_eq!(lsstat_report_sup_matrix(r, sup.as_mut_ptr(), 4), LsstatStatus::Ok);
        let frob = sup.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((frob - stat).abs() <= 1e-12 * stat.max(1.0));

        let mut json = ptr::null_mut();
        assert_eq!(lsstat_report_to_json(r, &mut json), LsstatStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        lsstat_string_free(json);
        assert!(text.contains("\"command\": \"test\""));

        // same inputs, different thread count: identical JSON
        cfg.threads = 1;
        let mut r1 = ptr::null_mut();
        assert_eq!(lsstat_run_test(s, &cfg, &mut r1), LsstatStatus::Ok);
        let mut json1 = ptr::null_mut();
        assert_eq!(lsstat_report_to_json(r1, &mut json1), LsstatStatus::Ok);
        assert_eq!(CStr::from_ptr(json1).to_str().unwrap(), text);
        lsstat_string_free(json1);

        lsstat_report_free(r);
        lsstat_report_free(r1);
        lsstat_series_free(s);
    }
}

#[test]
fn identification_subsets() {
    unsafe {
        let zeros = vec![0.0; 64 * 3];
        let mut s = ptr::null_mut();
        assert_eq!(lsstat_series_from_buffer(zeros.as_ptr(), 64, 3, false, &mut s), LsstatStatus::Ok);
        let mut id = ptr::null_mut();
        assert_eq!(lsstat_identify(s, 0.25, &mut id), LsstatStatus::Ok);
        assert_eq!(lsstat_identification_d_prime(id), 3);
        assert_eq!(lsstat_identification_subset_count(id), 1);
        let mut buf = [99usize; 3];
        let mut len = 0;
        assert_eq!(lsstat_identification_subset(id, 0, buf.as_mut_ptr(), 3, &mut len), LsstatStatus::Ok);
        assert_eq!((len, buf), (3, [0, 1, 2]));
        assert_eq!(lsstat_identification_subset(id, 0, buf.as_mut_ptr(), 2, &mut len), LsstatStatus::BufferTooSmall);
        assert_eq!(lsstat_identification_subset(id, 1, buf.as_mut_ptr(), 3, &mut len), LsstatStatus::Domain);
        lsstat_identification_free(id);
        lsstat_series_free(s);
    }
}

#[test]
fn simulate_is_deterministic() {
    let model = CString::new("var1").unwrap();
    let draw = || unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(lsstat_simulate(model.as_ptr(), 32, 11, &mut s), LsstatStatus::Ok);
        let mut buf = vec![0.0; 64];
        assert_eq!(lsstat_series_copy(s, buf.as_mut_ptr(), 64), LsstatStatus::Ok);
        lsstat_series_free(s);
        buf
    };
    assert_eq!(draw(), draw());
}

#[test]
fn null_handles_are_tolerated() {
    unsafe {
        lsstat_series_free(ptr::null_mut());
        lsstat_report_free(ptr::null_mut());
        lsstat_identification_free(ptr::null_mut());
        lsstat_string_free(ptr::null_mut());
        assert_eq!(lsstat_series_len(ptr::null()), 0);
        assert!(lsstat_report_statistic(ptr::null()).is_nan());
        let mut out = 0.0;
        assert_eq!(lsstat_statistic(ptr::null(), &mut out), LsstatStatus::NullPointer);
    }
    let v = unsafe { CStr::from_ptr(lsstat_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
