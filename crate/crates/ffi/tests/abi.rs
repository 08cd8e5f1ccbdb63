use std::ffi::{CStr, CString};
use std::ptr;

use fmaca::experiment::{synthetic_benchmark, train_model, Algorithm, TrainOptions};
use fmaca::io::save_model;
use fmaca_ffi::*;

fn last_error() -> String {
    let p = fmaca_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn automaton(rules: &[u32]) -> *mut FmacaAutomaton {
    let mut a = ptr::null_mut();
    assert_eq!(unsafe { fmaca_automaton_new(rules.as_ptr(), rules.len(), &mut a) }, FmacaStatus::Ok);
    a
}

#[test]
fn trajectory_through_the_abi() {
    let a = automaton(&[238, 254, 238, 252]);
    assert_eq!(unsafe { fmaca_automaton_cells(a) }, 4);
    let mut codes = [0u32; 4];
    assert_eq!(unsafe { fmaca_automaton_rules(a, codes.as_mut_ptr(), 4) }, FmacaStatus::Ok);
    assert_eq!(codes, [238, 254, 238, 252]);

    let mut state = [0.8, 0.2, 0.2, 0.0];
    let expected = [[1.0, 1.0, 0.2, 0.2], [1.0, 1.0, 0.4, 0.4], [1.0, 1.0, 0.8, 0.8], [1.0, 1.0, 1.0, 1.0]];
    for want in expected {
        let mut next = [0.0; 4];
        assert_eq!(unsafe { fmaca_automaton_step(a, state.as_ptr(), next.as_mut_ptr(), 4) }, FmacaStatus::Ok);
        for (x, y) in next.iter().zip(want) {
            assert!((x - y).abs() < 1e-12, "{next:?} vs {want:?}");
        }
        state = next;
    }

    let mut info = FmacaAttractor::default();
    let p0 = [0.8, 0.2, 0.2, 0.0];
    assert_eq!(unsafe { fmaca_automaton_run(a, p0.as_ptr(), 4, 0, &mut info) }, FmacaStatus::Ok);
    assert_eq!((info.transient_length, info.period), (4, 1));
    unsafe { fmaca_automaton_free(a) };
}

#[test]
fn in_place_step_is_allowed() {
    let a = automaton(&[51]);
    let mut s = [0.3];
    assert_eq!(unsafe { fmaca_automaton_step(a, s.as_ptr(), s.as_mut_ptr(), 1) }, FmacaStatus::Ok);
    assert!((s[0] - 0.7).abs() < 1e-12);
    unsafe { fmaca_automaton_free(a) };
}

#[test]
fn error_codes_and_messages() {
    let mut a = ptr::null_mut();
    let bad = [999u32];
    assert_eq!(unsafe { fmaca_automaton_new(bad.as_ptr(), 1, &mut a) }, FmacaStatus::UnsupportedRule);
    assert!(a.is_null());
    assert!(last_error().contains("999"));
    assert_eq!(unsafe { fmaca_automaton_new(ptr::null(), 3, &mut a) }, FmacaStatus::NullPointer);

    let a = automaton(&[204, 204]);
    let mut next = [0.0; 2];
    let s = [0.5, 1.5];
    assert_eq!(unsafe { fmaca_automaton_step(a, s.as_ptr(), next.as_mut_ptr(), 2) }, FmacaStatus::InvalidState);
    let s3 = [0.5; 3];
    let mut next3 = [0.0; 3];
    assert_eq!(
        unsafe { fmaca_automaton_step(a, s3.as_ptr(), next3.as_mut_ptr(), 3) },
        FmacaStatus::DimensionMismatch
    );
    let mut info = FmacaAttractor::default();
    assert_eq!(unsafe { fmaca_automaton_run(a, s3.as_ptr(), 2, 0, ptr::null_mut()) }, FmacaStatus::NullPointer);
    unsafe { fmaca_automaton_free(a) };

    // A shift register needs more steps than this budget allows.
    let shift = automaton(&[170; 6]);
    let p = [0.0, 0.0, 0.0, 0.0, 0.0, 1.0];
    assert_eq!(unsafe { fmaca_automaton_run(shift, p.as_ptr(), 6, 2, &mut info) }, FmacaStatus::NonConvergent);
    unsafe { fmaca_automaton_free(shift) };
    unsafe { fmaca_automaton_free(ptr::null_mut()) };
}

#[test]
fn model_round_trip_through_the_abi() {
    let (train, test, _) = synthetic_benchmark(54, 30, 10, 3).unwrap();
    let file = train_model(Algorithm::Lp, &train, &TrainOptions::default()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lp.json");
    save_model(&file, &path).unwrap();

    let c_path = CString::new(path.to_str().unwrap()).unwrap();
    let mut model = ptr::null_mut();
    assert_eq!(unsafe { fmaca_model_load(c_path.as_ptr(), &mut model) }, FmacaStatus::Ok);
    assert_eq!(unsafe { fmaca_model_window_length(model) }, 54);
    for w in &test {
        let mut label = FmacaLabel::Noncoding;
        let status = unsafe { fmaca_model_classify(model, w.bases.as_ptr().cast(), w.len(), &mut label) };
        assert_eq!(status, FmacaStatus::Ok);
        let expected = file.classify(&w.bases).unwrap();
        assert_eq!(label as i32, expected.index() as i32);
    }
    let mut label = FmacaLabel::Noncoding;
    let short = b"ACGTAC";
    assert_eq!(
        unsafe { fmaca_model_classify(model, short.as_ptr().cast(), short.len(), &mut label) },
        FmacaStatus::DimensionMismatch
    );
    unsafe { fmaca_model_free(model) };

    let missing = CString::new(dir.path().join("none.json").to_str().unwrap()).unwrap();
    let mut model = ptr::null_mut();
    assert_eq!(unsafe { fmaca_model_load(missing.as_ptr(), &mut model) }, FmacaStatus::Io);
    assert!(model.is_null());
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(fmaca_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
