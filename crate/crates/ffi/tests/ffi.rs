use dawk_ffi::*;
use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

fn cs(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    dawk_string_free(s);
    out
}

unsafe fn group(id: &str) -> *mut DawkGroup {
    let mut g = ptr::null_mut();
    assert_eq!(dawk_group_new(cs(id).as_ptr(), &mut g), DawkStatus::Ok);
    g
}

unsafe fn element(g: *const DawkGroup, w: &str) -> *mut DawkElement {
    let mut e = ptr::null_mut();
    assert_eq!(
        dawk_element_from_word(g, cs(w).as_ptr(), &mut e),
        DawkStatus::Ok
    );
    e
}

#[test]
fn element_arithmetic() {
    unsafe {
        let g = group("A2~1");
        assert_eq!(dawk_group_rank(g), 2);
        let central = element(g, "s01 s02 s03 s1 s2 s1");
        let tau = element(g, "tau");
        assert_eq!(dawk_element_equal(central, tau), 1);
        let mut inv = ptr::null_mut();
        assert_eq!(dawk_element_inverse(g, tau, &mut inv), DawkStatus::Ok);
        let mut prod = ptr::null_mut();
        assert_eq!(
            dawk_element_multiply(g, tau, inv, &mut prod),
            DawkStatus::Ok
        );
        assert_eq!(dawk_element_is_identity(prod), 1);
        assert_eq!(dawk_element_is_identity(tau), 0);

        let mut json = ptr::null_mut();
        assert_eq!(dawk_element_to_json(tau, &mut json), DawkStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(v["c"], "1/1");

        assert_eq!(dawk_element_rho_json(g, prod, &mut json), DawkStatus::Ok);
        let rows: Vec<Vec<String>> = serde_json::from_str(&take(json)).unwrap();
        for (i, r) in rows.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                assert_eq!(x, if i == j { "1/1" } else { "0/1" }, "{rows:?}");
            }
        }
        for e in [central, tau, inv, prod] {
            dawk_element_free(e);
        }
        dawk_group_free(g);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(
            dawk_group_new(cs("X9~1").as_ptr(), &mut g),
            DawkStatus::UnknownType
        );
        assert!(g.is_null());
        assert!(take(dawk_last_error()).contains("X9~1"));
        assert_eq!(dawk_group_new(ptr::null(), &mut g), DawkStatus::NullPointer);

        let g = group("A2~1");
        let mut e = ptr::null_mut();
        assert_eq!(
            dawk_element_from_word(g, cs("s7").as_ptr(), &mut e),
            DawkStatus::UnknownGenerator
        );
        let bad = [0xffu8, 0];
        assert_eq!(
            dawk_element_from_word(g, bad.as_ptr() as *const c_char, &mut e),
            DawkStatus::InvalidUtf8
        );

        // an element of rank 3 cannot be multiplied in a rank 2 group
        let g3 = group("A3~1");
        let x = element(g3, "s1");
        let y = element(g, "s1");
        assert_eq!(
            dawk_element_multiply(g, x, y, &mut e),
            DawkStatus::MismatchedType
        );

        // a successful call clears the message
        assert_eq!(dawk_element_inverse(g, y, &mut e), DawkStatus::Ok);
        assert!(dawk_last_error().is_null());

        assert_eq!(dawk_element_is_identity(ptr::null()), -1);
        assert_eq!(dawk_group_rank(ptr::null()), 0);
        dawk_element_free(ptr::null_mut());
        for p in [x, y, e] {
            dawk_element_free(p);
        }
        dawk_group_free(g);
        dawk_group_free(g3);
    }
}

#[test]
fn presentations_verify_and_round_trip() {
    unsafe {
        let g = group("A4~2");
        let mut p = ptr::null_mut();
        assert_eq!(
            dawk_presentation_new(g, cs("triple").as_ptr(), 1, &mut p),
            DawkStatus::Ok
        );
        let mut text = ptr::null_mut();
        assert_eq!(dawk_presentation_to_text(p, &mut text), DawkStatus::Ok);
        let text = take(text);
        let mut q = ptr::null_mut();
        assert_eq!(
            dawk_presentation_from_text(cs(&text).as_ptr(), &mut q),
            DawkStatus::Ok
        );

        let (mut json, mut passed) = (ptr::null_mut(), false);
        assert_eq!(dawk_verify(g, q, 2, &mut json, &mut passed), DawkStatus::Ok);
        assert!(passed);
        let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(v["schema"], "dawk-report/1");

        let lhs = cs("T1 T01 T02 T1 T02");
        let rhs = cs("T02 T1 T01 T02 T1");
        assert_eq!(
            dawk_prove(q, lhs.as_ptr(), rhs.as_ptr(), 0, &mut json, &mut passed),
            DawkStatus::Ok
        );
        assert!(passed);
        dawk_string_free(json);

        assert_eq!(
            dawk_presentation_new(g, cs("nonsense").as_ptr(), 1, &mut q),
            DawkStatus::ParseError
        );
        dawk_presentation_free(p);
        dawk_presentation_free(q);
        dawk_group_free(g);
    }
}

#[test]
fn failing_relations_are_reported_not_raised() {
    unsafe {
        let g = group("A2~2");
        let mut p = ptr::null_mut();
        assert_eq!(
            dawk_presentation_new(g, cs("daw").as_ptr(), 1, &mut p),
            DawkStatus::Ok
        );
        let (mut json, mut passed) = (ptr::null_mut(), true);
        assert_eq!(dawk_verify(g, p, 1, &mut json, &mut passed), DawkStatus::Ok);
        assert!(!passed);
        assert!(take(json).contains("\"fail\""));
        dawk_presentation_free(p);
        dawk_group_free(g);
    }
}

#[test]
fn paper_suite_runs() {
    unsafe {
        let (mut json, mut passed) = (ptr::null_mut(), false);
        assert_eq!(
            dawk_paper_suite(cs("A4~2").as_ptr(), 0xDA57, 1, &mut json, &mut passed),
            DawkStatus::Ok
        );
        assert!(passed);
        dawk_string_free(json);
        let v = CStr::from_ptr(dawk_version()).to_str().unwrap();
        assert_eq!(v, env!("CARGO_PKG_VERSION"));
    }
}

fn header() -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/dawk.h")).unwrap()
}

#[test]
fn header_declares_the_api() {
    let h = header();
    for name in [
        "typedef struct DawkGroup DawkGroup;",
        "DAWK_STATUS_OK = 0",
        "DAWK_STATUS_INTERNAL",
        "dawk_last_error(void)",
        "dawk_string_free(",
        "dawk_group_new(",
        "dawk_element_from_word(",
        "dawk_element_rho_json(",
        "dawk_presentation_from_text(",
        "dawk_verify(",
        "dawk_prove(",
        "dawk_paper_suite(",
    ] {
        assert!(h.contains(name), "{name} missing from dawk.h");
    }
}

/// Compiles a small C program against the header and static library.
/// Skipped when no C compiler is on the PATH.
#[test]
fn c_program_links_and_runs() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    // integration tests live in target/<profile>/deps; the library sits one level up
    let exe = std::env::current_exe().unwrap();
    let lib_dir = exe.parent().and_then(Path::parent).unwrap();
    let lib = lib_dir.join("libdawk_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipping", lib.display());
        return;
    }
    let out: PathBuf = std::env::temp_dir().join(format!("dawk-smoke-{}", std::process::id()));
    let status = Command::new(&cc)
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success(), "compiling the C smoke test failed");
    let run = Command::new(&out).output().unwrap();
    std::fs::remove_file(&out).ok();
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}

fn which_cc() -> Result<String, ()> {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    match Command::new(&cc).arg("--version").output() {
        Ok(o) if o.status.success() => Ok(cc),
        _ => Err(()),
    }
}
