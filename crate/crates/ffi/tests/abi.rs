use std::ffi::{CStr, CString};
use std::ptr;

use oddlibm::artifact;
use oddlibm::formats::{FPBits, FPFormat};
use oddlibm::funcgen::{generate, GenConfig};
use oddlibm::oracle::Func;
use oddlibm::rational::ratio;
use oddlibm_ffi::*;

fn worked_example_text() -> String {
    let mut cfg = GenConfig::new(Func::Ln, FPFormat::new(5, 2).unwrap());
    cfg.max_degree = 4;
    cfg.max_pieces = 1;
    artifact::to_text(&generate(&cfg).unwrap().0)
}

fn load(text: &str) -> *mut OddlibmFunction {
    let c = CString::new(text).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { oddlibm_load_str(c.as_ptr(), &mut h) }, OddlibmStatus::Ok);
    assert!(!h.is_null());
    h
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(oddlibm_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn evaluates_like_the_library() {
    let text = worked_example_text();
    let g = artifact::from_text(&text).unwrap();
    let h = load(&text);
    unsafe {
        assert_eq!(CStr::from_ptr(oddlibm_function_name(h)).to_str().unwrap(), "ln");
        let (mut n, mut e, mut lo, mut hi) = (0, 0, 0, 0);
        assert_eq!(oddlibm_format(h, &mut n, &mut e, &mut lo, &mut hi), OddlibmStatus::Ok);
        assert_eq!((n, e, lo, hi), (5, 2, 4, 5));

        // ln 1.5 in F(5,2) under rn is 0.5
        let tk = FPFormat::new(5, 2).unwrap();
        let x = FPBits::encode_exact(tk, &ratio(3, 2)).unwrap().bits();
        let mut y = 0;
        assert_eq!(oddlibm_evaluate(h, x, 5, ODDLIBM_RN, &mut y), OddlibmStatus::Ok);
        assert_eq!(FPBits::new(tk, y).finite_value(), Some(ratio(1, 2)));

        for k in [4u32, 5] {
            let tk = FPFormat::new(k, 2).unwrap();
            for x in tk.patterns() {
                for m in [ODDLIBM_RN, ODDLIBM_RA, ODDLIBM_RZ, ODDLIBM_RU, ODDLIBM_RD] {
                    let mut y = 0;
                    assert_eq!(oddlibm_evaluate(h, x.bits(), k, m, &mut y), OddlibmStatus::Ok);
                    let mode = oddlibm::rounding::RoundingMode::from_code(m).unwrap();
                    assert_eq!(y, g.evaluate(x, mode).unwrap().bits());
                }
            }
        }
        for x in g.tn.patterns() {
            let mut y = 0;
            assert_eq!(oddlibm_evaluate_rno(h, x.bits(), &mut y), OddlibmStatus::Ok);
            assert_eq!(y, g.evaluate_rno(x).bits());
        }
        let mut pass = 0;
        assert_eq!(oddlibm_verify(h, &mut pass), OddlibmStatus::Ok);
        assert_eq!(pass, 1);
        oddlibm_free(h);
    }
}

#[test]
fn errors_are_reported() {
    let h = load(&worked_example_text());
    unsafe {
        let mut y = 0;
        assert_eq!(oddlibm_evaluate(h, 0, 6, ODDLIBM_RN, &mut y), OddlibmStatus::UnsupportedTarget);
        assert!(!last_error().is_empty());
        assert_eq!(oddlibm_evaluate(h, 0, 3, ODDLIBM_RN, &mut y), OddlibmStatus::UnsupportedTarget);
        assert_eq!(oddlibm_evaluate(h, 0, 5, 5, &mut y), OddlibmStatus::InvalidMode);
        assert_eq!(oddlibm_evaluate(h, 0, 5, 99, &mut y), OddlibmStatus::InvalidMode);
        assert_eq!(oddlibm_evaluate(h, 0, 5, ODDLIBM_RN, ptr::null_mut()), OddlibmStatus::NullArgument);
        assert_eq!(oddlibm_evaluate(ptr::null(), 0, 5, ODDLIBM_RN, &mut y), OddlibmStatus::NullArgument);
        assert!(oddlibm_function_name(ptr::null()).is_null());
        oddlibm_free(h);
        oddlibm_free(ptr::null_mut());

        let mut h = ptr::null_mut();
        let bad = CString::new("garbage").unwrap();
        assert_eq!(oddlibm_load_str(bad.as_ptr(), &mut h), OddlibmStatus::Parse);
        assert!(h.is_null());
        assert!(last_error().contains("header"));
        let missing = CString::new("/nonexistent/ln.artifact").unwrap();
        assert_eq!(oddlibm_load(missing.as_ptr(), &mut h), OddlibmStatus::Io);
        assert_eq!(oddlibm_load(ptr::null(), &mut h), OddlibmStatus::NullArgument);
        let invalid = [0xffu8, 0];
        assert_eq!(oddlibm_load_str(invalid.as_ptr().cast(), &mut h), OddlibmStatus::InvalidUtf8);
    }
}

#[test]
fn loads_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ln.artifact");
    std::fs::write(&path, worked_example_text()).unwrap();
    let c = CString::new(path.to_str().unwrap()).unwrap();
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(oddlibm_load(c.as_ptr(), &mut h), OddlibmStatus::Ok);
        oddlibm_free(h);
    }
}
