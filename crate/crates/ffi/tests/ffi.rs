use std::ffi::{c_char, CStr};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use qgpkp_ffi::*;

fn reference() -> *mut QgpkpMedium {
    let mut h = ptr::null_mut();
    let s = unsafe { qgpkp_medium_new(1.15, 460.0, 0.0, 1.0, &mut h) };
    assert_eq!(s, QgpkpStatus::Ok);
    assert!(!h.is_null());
    h
}

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    unsafe { qgpkp_last_error_message(buf.as_mut_ptr(), buf.len()) };
    unsafe { CStr::from_ptr(buf.as_ptr()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn coefficients_through_handle() {
    let h = reference();
    let mut c = QgpkpCoefficients::default();
    assert_eq!(
        unsafe { qgpkp_medium_coefficients(h, &mut c) },
        QgpkpStatus::Ok
    );
    assert!((c.cs - 0.639369).abs() < 1e-6);
    assert!((c.cs2 - c.cs * c.cs).abs() < 1e-15);
    let mut w = QgpkpWaveSpec::default();
    assert_eq!(
        unsafe { qgpkp_wave_spec(h, QgpkpEquation::Kdv, &mut w) },
        QgpkpStatus::Ok
    );
    assert_eq!(w.transverse_coeff, 0.0);
    assert_eq!(w.alpha, c.alpha);
    unsafe { qgpkp_medium_free(h) };
}

#[test]
fn errors_set_status_and_message() {
    let mut h = ptr::null_mut();
    let s = unsafe { qgpkp_medium_new(1.15, 460.0, 0.0, -1.0, &mut h) };
    assert_eq!(s, QgpkpStatus::Domain);
    assert!(h.is_null());
    assert!(qgpkp_last_error_length() > 0);
    assert!(last_error().contains("domain"));

    let mut c = QgpkpCoefficients::default();
    let s = unsafe { qgpkp_medium_coefficients(ptr::null(), &mut c) };
    assert_eq!(s, QgpkpStatus::NullPointer);

    let h = reference();
    let mut out = [0.0; 1];
    let s = unsafe {
        qgpkp_ckp_eval(
            h,
            0.6,
            0.5,
            [20.0].as_ptr(),
            [0.0].as_ptr(),
            [0.0].as_ptr(),
            18.0,
            1,
            out.as_mut_ptr(),
        )
    };
    assert_eq!(s, QgpkpStatus::NonexistentSoliton);
    let mut e = QgpkpExistence::default();
    assert_eq!(
        unsafe { qgpkp_existence_cyl(h, 0.6, 0.73, &mut e) },
        QgpkpStatus::Ok
    );
    assert_eq!(qgpkp_last_error_length(), 0);
    assert_eq!(e.admissible, 1);
    assert!((e.margin_speed - 0.0054).abs() < 1e-3);
    unsafe { qgpkp_medium_free(h) };
    unsafe { qgpkp_medium_free(ptr::null_mut()) };
}

#[test]
fn buffers_match_library() {
    let h = reference();
    let x: Vec<f64> = (0..50).map(|i| 50.0 + i as f64 * 0.5).collect();
    let zeros = vec![0.0; x.len()];
    let mut out = vec![0.0; x.len()];
    let s = unsafe {
        qgpkp_kp_eval(
            h,
            0.6,
            0.5,
            0.66,
            0,
            x.as_ptr(),
            zeros.as_ptr(),
            zeros.as_ptr(),
            60.0,
            x.len(),
            out.as_mut_ptr(),
        )
    };
    assert_eq!(s, QgpkpStatus::Ok);
    let p = qgpkp::EosParameters::reference();
    let spec = qgpkp::build_wave_spec(&p, qgpkp::WaveEquationKind::KpCart).unwrap();
    let sol = qgpkp::solitons::SolitonCart::from_a_c(0.6, 0.5, 0.66).unwrap();
    for (xi, v) in x.iter().zip(&out) {
        assert_eq!(
            *v,
            qgpkp::solitons::kp_solution(&sol, &spec, *xi, 0.0, 0.0, 60.0).unwrap()
        );
    }

    let n = 256;
    let length = 100.0;
    let mut values: Vec<f64> = (0..n)
        .map(|i| {
            let s = (i as f64 * length / n as f64 - 50.0) / 5.0;
            0.01 * (-s * s).exp()
        })
        .collect();
    let mass0: f64 = values.iter().sum();
    let s = unsafe { qgpkp_kdv_evolve(h, values.as_mut_ptr(), n, length, 0.05, 5.0) };
    assert_eq!(s, QgpkpStatus::Ok, "{}", last_error());
    let mass1: f64 = values.iter().sum();
    assert!((mass1 - mass0).abs() < 1e-12 * mass0);
    let s = unsafe { qgpkp_kdv_evolve(h, values.as_mut_ptr(), 100, length, 0.05, 5.0) };
    assert_eq!(s, QgpkpStatus::Config);
    unsafe { qgpkp_medium_free(h) };
}

#[test]
fn static_strings() {
    let v = unsafe { CStr::from_ptr(qgpkp_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    let n = unsafe { CStr::from_ptr(qgpkp_status_name(QgpkpStatus::NonexistentSoliton)) };
    assert_eq!(n.to_str().unwrap(), "nonexistent_soliton");
}

const C_SOURCE: &str = r#"
#include <stdio.h>
#include <math.h>
#include "qgpkp.h"

int main(void) {
    QgpkpMedium *m = NULL;
    if (qgpkp_medium_new(1.15, 460.0, 0.0, 1.0, &m) != QGPKP_STATUS_OK) return 10;
    QgpkpCoefficients c;
    if (qgpkp_medium_coefficients(m, &c) != QGPKP_STATUS_OK) return 11;
    if (fabs(c.cs - 0.639369) > 1e-6) return 12;
    QgpkpExistence e;
    if (qgpkp_existence_cart(m, 0.6, 0.5, 0.66, &e) != QGPKP_STATUS_OK) return 13;
    if (!e.admissible) return 14;
    QgpkpStatus s = qgpkp_existence_cyl(m, 2.0, 0.7, &e);
    if (s != QGPKP_STATUS_DOMAIN) return 15;
    char buf[128];
    if (qgpkp_last_error_message(buf, sizeof buf) == 0) return 16;
    qgpkp_medium_free(m);
    printf("%s %.6f\n", qgpkp_status_name(s), c.cs);
    return 0;
}
"#;

/// Compiles and runs a C program against the generated header and the static
/// library.
#[test]
fn c_program_links_against_header() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = profile_dir.join("libqgpkp_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!(
            "skipping: no C compiler or static library at {}",
            lib.display()
        );
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(&src, C_SOURCE).unwrap();
    let bin = dir.path().join("main");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(
        out.status.success(),
        "C program exited with {:?}",
        out.status.code()
    );
    assert_eq!(
        String::from_utf8_lossy(&out.stdout).trim(),
        "domain 0.639369"
    );
}
