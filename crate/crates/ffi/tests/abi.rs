use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use chiral_cp_ffi::*;

fn dmds() -> *mut CcpMolecule {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { ccp_molecule_dimethyl_disulphide(&mut m) }, CcpStatus::Ok);
    m
}

fn last_error() -> String {
    let p = ccp_last_error_message();
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { ccp_string_free(p) };
    s
}

#[test]
fn static_force_and_enantiomer() {
    let m = dmds();
    let mut e = ptr::null_mut();
    assert_eq!(unsafe { ccp_molecule_enantiomer(m, &mut e) }, CcpStatus::Ok);
    let (mut f, mut g) = (0.0, 0.0);
    let mut regime = CcpRegime::LimitRetarded;
    assert_eq!(
        unsafe { ccp_static_force(m, 1e-7, -1, &mut f, &mut regime) },
        CcpStatus::Ok
    );
    assert_eq!(regime, CcpRegime::Static);
    assert!(f > 0.0);
    assert_eq!(
        unsafe { ccp_static_force(e, 1e-7, -1, &mut g, ptr::null_mut()) },
        CcpStatus::Ok
    );
    assert_eq!(f.to_bits(), (-g).to_bits());
    let expected = chiral_cp::mirror::static_chiral_force(
        &chiral_cp::molecule::dimethyl_disulphide(),
        1e-7,
        chiral_cp::mirror::MirrorSpec::Negative,
    )
    .unwrap()
    .value;
    assert_eq!(f, expected);
    unsafe {
        ccp_molecule_free(e);
        ccp_molecule_free(m);
    }
}

#[test]
fn molecule_from_arrays() {
    let label = CString::new("two level").unwrap();
    let omega = [9e15, 4e15];
    let d2 = [1e-59, 2e-59];
    let r = [1e-64, 0.0];
    let mut m = ptr::null_mut();
    let s = unsafe {
        ccp_molecule_new(
            label.as_ptr(),
            omega.as_ptr(),
            d2.as_ptr(),
            r.as_ptr(),
            ptr::null(),
            2,
            &mut m,
        )
    };
    assert_eq!(s, CcpStatus::Ok);
    assert_eq!(unsafe { ccp_molecule_len(m) }, 2);
    unsafe { ccp_molecule_free(m) };

    let bad = [-1.0, 4e15];
    let mut m = ptr::null_mut();
    let s = unsafe {
        ccp_molecule_new(
            label.as_ptr(),
            bad.as_ptr(),
            d2.as_ptr(),
            r.as_ptr(),
            ptr::null(),
            2,
            &mut m,
        )
    };
    assert_eq!(s, CcpStatus::Validation);
    assert!(m.is_null());
    assert!(last_error().contains("omega"));
}

#[test]
fn dynamic_force_and_light_cone() {
    let m = dmds();
    let (mut f, mut lc) = (f64::NAN, 0.0);
    let mut regime = CcpRegime::Static;
    let s = unsafe { ccp_dynamic_force(m, 1e-7, 0.0, 1, &mut f, &mut regime, &mut lc) };
    assert_eq!(s, CcpStatus::Ok);
    assert_eq!(f, 0.0);
    assert_eq!(regime, CcpRegime::PreLightcone);
    let tc = 2e-7 / chiral_cp::constants::SPEED_OF_LIGHT;
    f = 42.0;
    let s = unsafe { ccp_dynamic_force(m, 1e-7, tc, 1, &mut f, ptr::null_mut(), ptr::null_mut()) };
    assert_eq!(s, CcpStatus::LightCone);
    assert_eq!(f, 42.0, "out-parameter untouched on failure");
    assert!(last_error().contains("light-cone"));
    unsafe { ccp_molecule_free(m) };
}

#[test]
fn quadrature_matches_closed_form() {
    let m = dmds();
    let (mut q, mut err, mut closed) = (0.0, 0.0, 0.0);
    assert_eq!(
        unsafe { ccp_quadrature_chiral_force(m, 1e-7, 2e-15, 0.0, -1, &mut q, &mut err) },
        CcpStatus::Ok
    );
    assert_eq!(
        unsafe { ccp_dynamic_force(m, 1e-7, 2e-15, -1, &mut closed, ptr::null_mut(), ptr::null_mut()) },
        CcpStatus::Ok
    );
    assert!(((q - closed) / closed).abs() < 1e-4);
    assert!(err >= 0.0);
    unsafe { ccp_molecule_free(m) };
}

#[test]
fn null_handles_and_bad_arguments() {
    let mut f = 0.0;
    assert_eq!(
        unsafe { ccp_static_force(ptr::null(), 1e-7, 1, &mut f, ptr::null_mut()) },
        CcpStatus::NullPointer
    );
    assert_eq!(unsafe { ccp_molecule_len(ptr::null()) }, 0);
    unsafe { ccp_molecule_free(ptr::null_mut()) };
    unsafe { ccp_string_free(ptr::null_mut()) };
    let m = dmds();
    assert_eq!(
        unsafe { ccp_static_force(m, -1.0, 1, &mut f, ptr::null_mut()) },
        CcpStatus::Domain
    );
    assert_eq!(
        unsafe { ccp_static_force(m, 1e-7, 3, &mut f, ptr::null_mut()) },
        CcpStatus::Validation
    );
    let missing = CString::new("/nonexistent/molecule.json").unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { ccp_molecule_load(missing.as_ptr(), &mut h) }, CcpStatus::Io);
    unsafe { ccp_molecule_free(m) };
}

#[test]
fn special_functions() {
    let mut v = 0.0;
    assert_eq!(unsafe { ccp_sin_integral(1.0, &mut v) }, CcpStatus::Ok);
    assert!((v - 0.946_083_070_367_183).abs() < 1e-14);
    assert_eq!(unsafe { ccp_cos_integral(0.0, &mut v) }, CcpStatus::Domain);
    let version = unsafe { CStr::from_ptr(ccp_version()) };
    assert_eq!(version.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn target_dir() -> PathBuf {
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn header_declares_the_interface() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/chiral_cp.h");
    let text = std::fs::read_to_string(&header).expect("header generated by build script");
    for name in [
        "ccp_molecule_new",
        "ccp_molecule_free",
        "ccp_static_force",
        "ccp_dynamic_force",
        "ccp_quadrature_chiral_force",
        "ccp_last_error_message",
        "typedef struct CcpMolecule CcpMolecule",
        "CCP_STATUS_LIGHT_CONE",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }
}

#[test]
fn c_program_links_against_static_library() {
    let lib = target_dir().join("libchiral_cp_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler on PATH; C link test not run");
        return;
    }
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let dir = tempfile_dir();
    let exe = dir.join("smoke");
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}

fn tempfile_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("chiral-cp-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
