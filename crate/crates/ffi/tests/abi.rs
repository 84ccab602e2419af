use std::ffi::{CStr, CString};
use std::ptr;

use dispersion_ffi::*;

const T4: &str = "4 3\n0 1 1\n0 2 2\n0 3 3\n1 2 4\n1 3 5\n2 3 6\n";

fn t4() -> *mut DispersionInstance {
    let text = CString::new(T4).unwrap();
    let mut inst = ptr::null_mut();
    assert_eq!(unsafe { dispersion_instance_parse(text.as_ptr(), &mut inst) }, DispersionError::Ok);
    inst
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(dispersion_last_error()) }.to_string_lossy().into_owned()
}

fn subset(res: *const DispersionResult) -> Vec<usize> {
    let len = unsafe { dispersion_result_subset_len(res) };
    let mut buf = vec![usize::MAX; len];
    assert_eq!(unsafe { dispersion_result_subset(res, buf.as_mut_ptr(), len) }, DispersionError::Ok);
    buf
}

#[test]
fn solve_t4_maxmin() {
    let inst = t4();
    assert_eq!(unsafe { dispersion_instance_n(inst) }, 4);
    let mut res = ptr::null_mut();
    let code = unsafe { dispersion_solve(inst, DispersionObjective::MaxMin as u32, 3, ptr::null(), &mut res) };
    assert_eq!(code, DispersionError::Ok);
    assert_eq!(unsafe { dispersion_result_status(res) }, DispersionStatus::Optimal);
    let mut v = 0.0;
    assert_eq!(unsafe { dispersion_result_value(res, &mut v) }, DispersionError::Ok);
    assert_eq!(v, 4.0);
    assert_eq!(subset(res), vec![1, 2, 3]);
    assert_eq!(unsafe { dispersion_result_d_star(res, &mut v) }, DispersionError::InvalidArgument);
    let mut small = [0usize; 2];
    assert_eq!(unsafe { dispersion_result_subset(res, small.as_mut_ptr(), 2) }, DispersionError::BufferTooSmall);
    unsafe {
        dispersion_result_free(res);
        dispersion_instance_free(inst);
    }
}

#[test]
fn bilevel_and_evaluate() {
    let inst = t4();
    let budget = DispersionBudget { time_limit_secs: 5.0, max_nodes: 0 };
    let mut res = ptr::null_mut();
    let code = unsafe { dispersion_solve_bilevel(inst, DispersionObjective::MaxSum as u32, 3, 1000, true, &budget, &mut res) };
    assert_eq!(code, DispersionError::Ok);
    let (mut d, mut v) = (0.0, 0.0);
    unsafe {
        assert_eq!(dispersion_result_d_star(res, &mut d), DispersionError::Ok);
        assert_eq!(dispersion_result_value(res, &mut v), DispersionError::Ok);
    }
    assert_eq!((d, v), (4.0, 15.0));
    unsafe { dispersion_result_free(res) };

    let idx = [1usize, 2, 3];
    let mut out = 0.0;
    let code = unsafe { dispersion_evaluate(inst, DispersionObjective::MinDiff as u32, idx.as_ptr(), 3, &mut out) };
    assert_eq!((code, out), (DispersionError::Ok, 2.0));
    let code = unsafe { dispersion_evaluate(inst, 99, idx.as_ptr(), 3, &mut out) };
    assert_eq!(code, DispersionError::InvalidArgument);
    assert!(last_error().contains("99"));
    let bad = [0usize, 7];
    let code = unsafe { dispersion_evaluate(inst, DispersionObjective::MaxSum as u32, bad.as_ptr(), 2, &mut out) };
    assert_eq!(code, DispersionError::InvalidArgument);
    unsafe { dispersion_instance_free(inst) };
}

#[test]
fn errors_are_codes() {
    let mut inst = ptr::null_mut();
    let text = CString::new("2 1\n0 1 -3\n").unwrap();
    assert_eq!(unsafe { dispersion_instance_parse(text.as_ptr(), &mut inst) }, DispersionError::InvalidInstance);
    assert!(!last_error().is_empty());
    let text = CString::new("garbage").unwrap();
    assert_eq!(unsafe { dispersion_instance_parse(text.as_ptr(), &mut inst) }, DispersionError::Parse);
    assert_eq!(unsafe { dispersion_instance_parse(ptr::null(), &mut inst) }, DispersionError::NullPointer);
    assert!(inst.is_null());
    let mut res = ptr::null_mut();
    assert_eq!(
        unsafe { dispersion_solve(ptr::null(), 0, 2, ptr::null(), &mut res) },
        DispersionError::NullPointer
    );
    let t = t4();
    let neg = DispersionBudget { time_limit_secs: -1.0, max_nodes: 0 };
    assert_eq!(unsafe { dispersion_solve(t, 0, 2, &neg, &mut res) }, DispersionError::InvalidArgument);
    assert_eq!(unsafe { dispersion_solve(t, 0, 9, ptr::null(), &mut res) }, DispersionError::InvalidArgument);
    let mut d = 0.0;
    assert_eq!(unsafe { dispersion_instance_distance(t, 0, 4, &mut d) }, DispersionError::InvalidArgument);
    assert_eq!(unsafe { dispersion_instance_distance(t, 2, 3, &mut d) }, DispersionError::Ok);
    assert_eq!(d, 6.0);
    unsafe {
        dispersion_instance_free(t);
        dispersion_instance_free(ptr::null_mut());
        dispersion_result_free(ptr::null_mut());
        dispersion_string_free(ptr::null_mut());
    }
}

#[test]
fn generate_write_roundtrip_and_lp() {
    let fam = CString::new("GKD_D").unwrap();
    let mut inst = ptr::null_mut();
    assert_eq!(unsafe { dispersion_instance_generate(fam.as_ptr(), 12, 3, 7, &mut inst) }, DispersionError::Ok);
    let mut text = ptr::null_mut();
    assert_eq!(unsafe { dispersion_instance_write(inst, &mut text) }, DispersionError::Ok);
    let mut again = ptr::null_mut();
    assert_eq!(unsafe { dispersion_instance_parse(text, &mut again) }, DispersionError::Ok);
    let (mut a, mut b) = (0.0, 0.0);
    unsafe {
        dispersion_instance_distance(inst, 3, 8, &mut a);
        dispersion_instance_distance(again, 3, 8, &mut b);
        dispersion_string_free(text);
    }
    assert_eq!(a, b);

    let kind = CString::new("packing-feasibility").unwrap();
    let mut lp = ptr::null_mut();
    assert_eq!(unsafe { dispersion_export_lp(again, kind.as_ptr(), 3, f64::NAN, &mut lp) }, DispersionError::InvalidArgument);
    assert_eq!(unsafe { dispersion_export_lp(again, kind.as_ptr(), 3, 30.0, &mut lp) }, DispersionError::Ok);
    let s = unsafe { CStr::from_ptr(lp) }.to_str().unwrap().to_string();
    assert!(s.contains("Subject To") && s.ends_with("End\n"));
    let bad = CString::new("GKD_Q").unwrap();
    let mut none = ptr::null_mut();
    assert_eq!(unsafe { dispersion_instance_generate(bad.as_ptr(), 12, 3, 7, &mut none) }, DispersionError::InvalidArgument);
    unsafe {
        dispersion_string_free(lp);
        dispersion_instance_free(inst);
        dispersion_instance_free(again);
    }
}
