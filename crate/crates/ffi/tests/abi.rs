use std::ffi::{c_char, CStr, CString};
use std::ptr;

use poissonlab_ffi::*;

fn last_error() -> String {
    let mut needed = 0usize;
    unsafe { pl_last_error_message(ptr::null_mut(), 0, &mut needed) };
    let mut buf = vec![0 as c_char; needed];
    assert_eq!(unsafe { pl_last_error_message(buf.as_mut_ptr(), needed, &mut needed) }, PlStatus::Ok);
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

fn read_text(f: impl Fn(*mut c_char, usize, *mut usize) -> PlStatus) -> String {
    let mut needed = 0usize;
    assert_eq!(f(ptr::null_mut(), 0, &mut needed), PlStatus::BufferTooSmall);
    let mut buf = vec![0 as c_char; needed];
    assert_eq!(f(buf.as_mut_ptr(), needed, &mut needed), PlStatus::Ok);
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

#[test]
fn algebra_handles() {
    let name = CString::new("so3").unwrap();
    let mut g: *mut PlAlgebra = ptr::null_mut();
    assert_eq!(unsafe { pl_algebra_by_name(name.as_ptr(), &mut g) }, PlStatus::Ok);
    let mut dim = 0usize;
    assert_eq!(unsafe { pl_algebra_dim(g, &mut dim) }, PlStatus::Ok);
    assert_eq!(dim, 3);
    let (x, y) = ([0.0, 1.0, 0.0], [0.0, 0.0, 1.0]);
    let mut z = [0.0; 3];
    assert_eq!(unsafe { pl_algebra_bracket(g, x.as_ptr(), y.as_ptr(), 3, z.as_mut_ptr(), 3) }, PlStatus::Ok);
    assert_eq!(z, [1.0, 0.0, 0.0]);
    assert_eq!(
        unsafe { pl_algebra_bracket(g, x.as_ptr(), y.as_ptr(), 3, z.as_mut_ptr(), 2) },
        PlStatus::BufferTooSmall
    );
    let mut r = 1.0;
    assert_eq!(unsafe { pl_algebra_jacobi_residual(g, &mut r) }, PlStatus::Ok);
    assert_eq!(r, 0.0);
    unsafe { pl_algebra_free(g) };
}

#[test]
fn custom_constants_and_errors() {
    let name = CString::new("broken").unwrap();
    let rows = [1.0, 2.0, 3.0, 1.0, 2.0, 3.0, 1.0, 1.0, 3.0, 1.0, 1.0, 1.0];
    let mut g: *mut PlAlgebra = ptr::null_mut();
    assert_eq!(unsafe { pl_algebra_from_constants(name.as_ptr(), 3, rows.as_ptr(), 3, &mut g) }, PlStatus::Ok);
    let mut r = 0.0;
    unsafe { pl_algebra_jacobi_residual(g, &mut r) };
    assert!((r - 1.0).abs() < 1e-12, "{r}");
    unsafe { pl_algebra_free(g) };

    let bad_index = [0.0, 2.0, 3.0, 1.0];
    let status = unsafe { pl_algebra_from_constants(name.as_ptr(), 3, bad_index.as_ptr(), 1, &mut g) };
    assert_eq!(status, PlStatus::Config);
    assert!(last_error().contains("positive integer"));

    let unknown = CString::new("gl7").unwrap();
    assert_eq!(unsafe { pl_algebra_by_name(unknown.as_ptr(), &mut g) }, PlStatus::Unknown);
    assert!(last_error().contains("gl7"));
    assert_eq!(unsafe { pl_algebra_by_name(ptr::null(), &mut g) }, PlStatus::NullPointer);
    assert_eq!(unsafe { pl_algebra_dim(ptr::null(), ptr::null_mut()) }, PlStatus::NullPointer);
    let not_utf8 = [0xffu8 as c_char, 0];
    assert_eq!(unsafe { pl_algebra_by_name(not_utf8.as_ptr(), &mut g) }, PlStatus::InvalidUtf8);
    unsafe { pl_algebra_free(ptr::null_mut()) };
}

#[test]
fn group_exponential_is_row_major() {
    let name = CString::new("h3").unwrap();
    let mut g: *mut PlGroup = ptr::null_mut();
    assert_eq!(unsafe { pl_group_by_name(name.as_ptr(), &mut g) }, PlStatus::Ok);
    let (mut dim, mut size) = (0usize, 0usize);
    unsafe {
        pl_group_dim(g, &mut dim);
        pl_group_matrix_size(g, &mut size);
    }
    assert_eq!((dim, size), (3, 3));
    let x = [1.0, 0.0, 0.0];
    let mut m = [0.0; 9];
    assert_eq!(unsafe { pl_group_exp(g, x.as_ptr(), 3, m.as_mut_ptr(), 9) }, PlStatus::Ok);
    let nonzero: Vec<usize> = (0..9).filter(|&i| m[i] != 0.0 && ![0, 4, 8].contains(&i)).collect();
    assert_eq!(nonzero.len(), 1);
    assert!(nonzero[0] % 3 > nonzero[0] / 3, "strictly upper triangular entry");
    assert_eq!(unsafe { pl_group_exp(g, x.as_ptr(), 2, m.as_mut_ptr(), 9) }, PlStatus::DimensionMismatch);
    unsafe { pl_group_free(g) };
}

#[test]
fn poisson_structures() {
    let name = CString::new("so3").unwrap();
    let mut g: *mut PlAlgebra = ptr::null_mut();
    let mut pi: *mut PlPoisson = ptr::null_mut();
    unsafe {
        pl_algebra_by_name(name.as_ptr(), &mut g);
        assert_eq!(pl_poisson_lie(g, &mut pi), PlStatus::Ok);
    }
    let x = [1.0, 2.0, 3.0];
    let mut m = [0.0; 9];
    assert_eq!(unsafe { pl_poisson_eval(pi, x.as_ptr(), 3, m.as_mut_ptr(), 9) }, PlStatus::Ok);
    assert_eq!(m[1], 3.0);
    assert_eq!(m[3], -3.0);
    let pts = [0.1, 0.2, 0.3, -1.0, 0.5, 0.25];
    let mut r = 1.0;
    assert_eq!(unsafe { pl_poisson_jacobi_residual(pi, pts.as_ptr(), 2, &mut r) }, PlStatus::Ok);
    assert!(r < 1e-12);
    let mut sym: *mut PlPoisson = ptr::null_mut();
    assert_eq!(unsafe { pl_poisson_symplectic(2, &mut sym) }, PlStatus::Ok);
    let mut dim = 0usize;
    unsafe { pl_poisson_dim(sym, &mut dim) };
    assert_eq!(dim, 4);
    assert_eq!(unsafe { pl_poisson_symplectic(0, &mut sym) }, PlStatus::DimensionMismatch);
    unsafe {
        pl_poisson_free(pi);
        pl_poisson_free(sym);
        pl_algebra_free(g);
    }
}

#[test]
fn running_suites() {
    let config = CString::new("suites = [\"lie-algebra\"]\n[suite.lie-algebra]\nalgebras = [\"so3\", \"broken\"]\n").unwrap();
    let seed = 5u64;
    let mut report: *mut PlReport = ptr::null_mut();
    assert_eq!(unsafe { pl_run(config.as_ptr(), &seed, &mut report) }, PlStatus::Ok);
    let mut n = 0usize;
    unsafe { pl_report_len(report, &mut n) };
    assert_eq!(n, 4);
    assert_eq!(unsafe { pl_report_exit_code(report) }, 1);
    let names: Vec<String> = (0..n)
        .map(|i| read_text(|b, c, need| unsafe { pl_report_check_name(report, i, b, c, need) }))
        .collect();
    assert_eq!(
        names,
        [
            "lie-algebra/antisymmetry/broken",
            "lie-algebra/antisymmetry/so3",
            "lie-algebra/jacobi/broken",
            "lie-algebra/jacobi/so3"
        ]
    );
    let mut rec = PlRecord {
        residual: 0.0,
        tolerance: 0.0,
        passed: true,
        samples: 0,
        seed: 0,
    };
    assert_eq!(unsafe { pl_report_record(report, 2, &mut rec) }, PlStatus::Ok);
    assert!(!rec.passed && rec.residual >= 1.0 && rec.seed == 5);
    assert_eq!(unsafe { pl_report_record(report, 9, &mut rec) }, PlStatus::IndexOutOfRange);
    let jsonl = read_text(|b, c, need| unsafe { pl_report_jsonl(report, b, c, need) });
    assert_eq!(jsonl.lines().count(), 4);
    unsafe { pl_report_free(report) };

    let bad = CString::new("suites = [\"nope\"]").unwrap();
    assert_eq!(unsafe { pl_run(bad.as_ptr(), ptr::null(), &mut report) }, PlStatus::Config);
    assert!(last_error().contains("nope"));
    assert_eq!(unsafe { pl_report_exit_code(ptr::null()) }, -1);
}

#[test]
fn catalog_and_version() {
    let text = read_text(|b, c, need| unsafe { pl_catalog(b, c, need) });
    assert!(text.contains("eq10-lagrangian-graph"));
    let v = unsafe { CStr::from_ptr(pl_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_abi() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/poissonlab.h")).unwrap();
    for symbol in [
        "POISSONLAB_H",
        "PL_STATUS_OK",
        "PL_STATUS_BUFFER_TOO_SMALL",
        "typedef struct PlAlgebra PlAlgebra;",
        "PlStatus pl_run(",
        "void pl_report_free(",
        "PlRecord",
    ] {
        assert!(header.contains(symbol), "missing {symbol}");
    }
}
