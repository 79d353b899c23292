use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use latdeform_ffi::*;

unsafe fn last_error() -> String {
    let p = ld_last_error();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_string_lossy().into_owned()
}

#[test]
fn lattice_to_resolution() {
    unsafe {
        let rows: [i64; 6] = [-1, 3, -2, -1, -1, 2];
        let mut l = ptr::null_mut();
        assert_eq!(ld_lattice_new(rows.as_ptr(), 2, 3, &mut l), LdStatus::Ok);
        let mut index = 0;
        assert_eq!(ld_lattice_index(l, &mut index), LdStatus::Ok);
        assert_eq!(index, 4);

        let mut p = ptr::null_mut();
        assert_eq!(ld_laplacianize(l, &mut p), LdStatus::Ok);
        assert_eq!(ld_presentation_size(p), 3);
        let mut sigma = [0i64; 3];
        let mut len = 0;
        assert_eq!(ld_presentation_sigma(p, sigma.as_mut_ptr(), 3, &mut len), LdStatus::Ok);
        assert_eq!(len, 3);
        assert_eq!(sigma[0], 1);

        let mut r = ptr::null_mut();
        assert_eq!(ld_resolve(p, 1, 1, 0, &mut r), LdStatus::Ok);
        assert_eq!(ld_resolution_is_exact(r), 1);
        let mut betti = [0usize; 4];
        assert_eq!(ld_resolution_betti(r, betti.as_mut_ptr(), 4, &mut len), LdStatus::Ok);
        assert_eq!(&betti[..len], &[1, 2, 1]);

        let mut js = ptr::null_mut();
        assert_eq!(ld_resolution_json(r, &mut js), LdStatus::Ok);
        let doc: serde_json::Value = serde_json::from_str(CStr::from_ptr(js).to_str().unwrap()).unwrap();
        assert_eq!(doc["betti"], serde_json::json!(["1", "2", "1"]));
        ld_string_free(js);

        ld_resolution_free(r);
        ld_presentation_free(p);
        ld_lattice_free(l);
    }
}

#[test]
fn explicit_laplacian() {
    unsafe {
        let q: [i64; 9] = [5, -3, -2, -1, 3, -2, -1, -1, 2];
        let mut p = ptr::null_mut();
        assert_eq!(ld_presentation_from_laplacian(q.as_ptr(), 3, &mut p), LdStatus::Ok);
        let mut sigma = [0i64; 3];
        ld_presentation_sigma(p, sigma.as_mut_ptr(), 3, ptr::null_mut());
        assert_eq!(sigma, [1, 2, 3]);
        let mut small = [0i64; 4];
        let mut len = 0;
        assert_eq!(
            ld_presentation_laplacian(p, small.as_mut_ptr(), 4, &mut len),
            LdStatus::BufferTooSmall
        );
        assert_eq!(len, 9);
        ld_presentation_free(p);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let rows: [i64; 6] = [1, -1, 0, 2, -2, 0];
        let mut l = ptr::null_mut();
        assert_eq!(ld_lattice_new(rows.as_ptr(), 2, 3, &mut l), LdStatus::NotFiniteIndex);
        assert!(l.is_null());
        assert!(last_error().contains("finite-index"));
        assert_eq!(ld_lattice_new(ptr::null(), 2, 3, &mut l), LdStatus::NullPointer);
        assert_eq!(ld_resolution_is_exact(ptr::null()), -1);
        ld_lattice_free(ptr::null_mut());
    }
}

#[test]
fn json_entry_point() {
    unsafe {
        let cmd = CString::new("grobner").unwrap();
        let opts = CString::new(r#"{"check_spairs": true}"#).unwrap();
        let input = CString::new("[[5,-3,-2],[-1,3,-2],[-1,-1,2]]").unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(ld_run_json(cmd.as_ptr(), opts.as_ptr(), input.as_ptr(), &mut out), LdStatus::Ok);
        let doc: serde_json::Value = serde_json::from_str(CStr::from_ptr(out).to_str().unwrap()).unwrap();
        assert_eq!(doc["count"], serde_json::json!("11"));
        assert_eq!(doc["spairs_reduce_to_zero"], serde_json::json!(true));
        ld_string_free(out);

        let cmd = CString::new("resolve").unwrap();
        let opts = CString::new(r#"{"template": [[1, 2]], "epsilon": ["1/2"]}"#).unwrap();
        assert_eq!(ld_run_json(cmd.as_ptr(), opts.as_ptr(), input.as_ptr(), &mut out), LdStatus::Ok);
        let doc: serde_json::Value = serde_json::from_str(CStr::from_ptr(out).to_str().unwrap()).unwrap();
        assert_eq!(doc["ranks"], serde_json::json!(["1", "3", "2"]));
        ld_string_free(out);

        let bad = CString::new("[[1, 2]]").unwrap();
        let cmd = CString::new("laplacianize").unwrap();
        let st = ld_run_json(cmd.as_ptr(), ptr::null(), bad.as_ptr(), &mut out);
        assert_ne!(st, LdStatus::Ok);
        let doc: serde_json::Value = serde_json::from_str(CStr::from_ptr(out).to_str().unwrap()).unwrap();
        assert!(doc["error"]["kind"].is_string());
        ld_string_free(out);

        let cmd = CString::new("nope").unwrap();
        assert_eq!(ld_run_json(cmd.as_ptr(), ptr::null(), input.as_ptr(), &mut out), LdStatus::InvalidInput);
        ld_string_free(out);
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(ld_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/latdeform.h");
    let Ok(out) = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-x", "c", header])
        .output()
    else {
        eprintln!("no C compiler; skipping");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
