use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use retract_ffi::*;

fn parse(text: &str) -> *mut RetractPoset {
    let text = CString::new(text).unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(
        unsafe { retract_poset_parse(text.as_ptr(), &mut p) },
        RetractStatus::Ok
    );
    p
}

fn last_error() -> String {
    let s = retract_last_error_message();
    assert!(!s.is_null());
    unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string()
}

const CROWN_MID: &str = "points 5\nlabel 4 m\nedge 0 4\nedge 1 4\nedge 4 2\nedge 4 3\n";

#[test]
fn parse_and_query() {
    let p = parse(CROWN_MID);
    assert_eq!(unsafe { retract_poset_point_count(p) }, 5);
    let (mut lower, mut upper) = (0u64, 0u64);
    assert_eq!(
        unsafe { retract_poset_levels(p, &mut lower, &mut upper) },
        RetractStatus::Ok
    );
    assert_eq!((lower, upper), (0b00011, 0b01100));
    unsafe { retract_poset_free(p) };
    assert_eq!(unsafe { retract_poset_point_count(ptr::null()) }, 0);
}

#[test]
fn parse_errors() {
    let text = CString::new("points 2\nedge 0 5\n").unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(
        unsafe { retract_poset_parse(text.as_ptr(), &mut p) },
        RetractStatus::ParseError
    );
    assert!(p.is_null());
    assert!(last_error().contains("line 2"));
    assert_eq!(
        unsafe { retract_poset_parse(ptr::null(), &mut p) },
        RetractStatus::NullArgument
    );

    let cycle = [0usize, 1, 1, 0];
    assert_eq!(
        unsafe { retract_poset_from_edges(2, cycle.as_ptr(), 2, &mut p) },
        RetractStatus::InvalidPoset
    );
}

#[test]
fn decide_through_the_abi() {
    let p = parse(CROWN_MID);
    let (lower, upper) = ([0usize, 1], [2usize, 3]);
    let mut yes = true;
    let status = unsafe {
        retract_decide(
            p,
            lower.as_ptr(),
            2,
            upper.as_ptr(),
            2,
            &mut yes,
            ptr::null_mut(),
        )
    };
    assert_eq!(status, RetractStatus::Ok);
    assert!(!yes);

    let out_of_range = [0usize, 9];
    let status = unsafe {
        retract_decide(
            p,
            out_of_range.as_ptr(),
            2,
            upper.as_ptr(),
            2,
            &mut yes,
            ptr::null_mut(),
        )
    };
    assert_eq!(status, RetractStatus::UnknownPoint);
    unsafe { retract_poset_free(p) };

    let edges = [0usize, 2, 0, 3, 1, 2, 1, 3, 4, 2];
    let mut p = ptr::null_mut();
    assert_eq!(
        unsafe { retract_poset_from_edges(5, edges.as_ptr(), 5, &mut p) },
        RetractStatus::Ok
    );
    let mut map = [usize::MAX; 5];
    let status = unsafe {
        retract_decide(
            p,
            lower.as_ptr(),
            2,
            upper.as_ptr(),
            2,
            &mut yes,
            map.as_mut_ptr(),
        )
    };
    assert_eq!(status, RetractStatus::Ok);
    assert!(yes);
    assert_eq!(&map[..4], &[0, 1, 2, 3]);
    assert!(map[4] < 2);
    unsafe { retract_poset_free(p) };
}

#[test]
fn strings_round_trip() {
    let p = parse(CROWN_MID);
    let mut json = ptr::null_mut();
    assert_eq!(
        unsafe { retract_analyze_json(p, &mut json) },
        RetractStatus::Ok
    );
    let text = unsafe { CStr::from_ptr(json) }
        .to_str()
        .unwrap()
        .to_string();
    unsafe { retract_string_free(json) };
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["inner_points"][0], "m");

    let mut dot = ptr::null_mut();
    let status = unsafe {
        retract_graph_dot(
            p,
            RetractGraph::Bundles,
            ptr::null(),
            0,
            ptr::null(),
            0,
            &mut dot,
        )
    };
    assert_eq!(status, RetractStatus::Ok);
    let text = unsafe { CStr::from_ptr(dot) }.to_str().unwrap().to_string();
    unsafe { retract_string_free(dot) };
    assert!(text.contains("label=\"{0,1,2,3}\""));

    let (lower, upper) = ([0usize, 4], [2usize, 3]);
    let status = unsafe {
        retract_graph_dot(
            p,
            RetractGraph::Pattern,
            lower.as_ptr(),
            2,
            upper.as_ptr(),
            2,
            &mut dot,
        )
    };
    assert_eq!(status, RetractStatus::BadPattern);
    unsafe { retract_poset_free(p) };
}

#[test]
fn status_messages_are_static() {
    let msg = unsafe { CStr::from_ptr(retract_status_message(RetractStatus::BadPattern)) };
    assert_eq!(msg.to_str().unwrap(), "pattern violates a precondition");
    assert_eq!(retract_max_points(), 64);
}

fn have_cc() -> bool {
    Command::new("cc")
        .arg("--version")
        .output()
        .is_ok_and(|o| o.status.success())
}

#[test]
fn header_compiles_as_c_and_cpp() {
    if !have_cc() {
        eprintln!("skipping: no C compiler");
        return;
    }
    let dir = env!("CARGO_MANIFEST_DIR");
    for lang in ["c", "c++"] {
        let out = Command::new("cc")
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang])
            .arg(format!("{dir}/include/retract.h"))
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "{lang}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn c_program_links_against_the_static_library() {
    if !have_cc() {
        eprintln!("skipping: no C compiler");
        return;
    }
    // target/<profile>/deps/<this test> -> target/<profile>/libretract_ffi.a
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = profile_dir.join("libretract_ffi.a");
    if !lib.exists() {
        eprintln!("skipping: {} not built", lib.display());
        return;
    }
    let dir = env!("CARGO_MANIFEST_DIR");
    let tmp = std::env::temp_dir().join(format!("retract-smoke-{}", std::process::id()));
    let out = Command::new("cc")
        .args(["-std=c11", "-Wall", "-Werror", "-I"])
        .arg(format!("{dir}/include"))
        .arg(format!("{dir}/tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&tmp)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let run = Command::new(&tmp).output().unwrap();
    let _ = std::fs::remove_file(&tmp);
    assert!(run.status.success(), "exit {:?}", run.status.code());
    assert_eq!(String::from_utf8_lossy(&run.stdout), "ok\n");
}
