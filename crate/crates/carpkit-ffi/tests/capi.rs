//! Exercises the C entry points the way a foreign binding would: through
//! raw pointers and status codes.

use std::ffi::{CStr, CString};
use std::ptr;

use carpkit_ffi::*;

const SHORTCUT_TRIANGLE: &str = "\
carp 1
vertices 3 depot 1 capacity 1
1 2 2 0
2 3 3 0
1 3 10 1
";

fn parse(text: &str) -> *mut CarpInstance {
    let c = CString::new(text).unwrap();
    let mut handle = ptr::null_mut();
    let status = unsafe { carp_instance_parse(c.as_ptr(), &mut handle) };
    assert_eq!(status, CarpStatus::CarpOk);
    assert!(!handle.is_null());
    handle
}

fn take_string(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { carp_string_free(s) };
    text
}

#[test]
fn abi_version_is_one() {
    assert_eq!(carp_abi_version(), 1);
}

#[test]
fn parse_inspect_write_free() {
    let inst = parse(SHORTCUT_TRIANGLE);
    unsafe {
        assert_eq!(carp_instance_vertex_count(inst), 3);
        assert_eq!(carp_instance_edge_count(inst), 3);
        assert_eq!(carp_instance_required_count(inst), 1);
        assert_eq!(carp_instance_capacity(inst), 1);

        let mut text = ptr::null_mut();
        assert_eq!(carp_instance_write(inst, &mut text), CarpStatus::CarpOk);
        assert_eq!(take_string(text), SHORTCUT_TRIANGLE);
        carp_instance_free(inst);
    }
}

#[test]
fn parse_error_sets_message() {
    let c = CString::new("carp 1\nvertices 2 depot 1 capacity 1\n1 1 4 0\n").unwrap();
    let mut handle = ptr::null_mut();
    let status = unsafe { carp_instance_parse(c.as_ptr(), &mut handle) };
    assert_eq!(status, CarpStatus::CarpParseError);
    let msg = unsafe { CStr::from_ptr(carp_last_error_message()) }
        .to_str()
        .unwrap();
    assert!(msg.contains("line 3"), "got: {msg}");
}

#[test]
fn solve_reports_and_validates() {
    let inst = parse(SHORTCUT_TRIANGLE);
    unsafe {
        let mut solution = ptr::null_mut();
        let mut report = ptr::null_mut();
        let status = carp_solve(inst, 8, &mut solution, &mut report);
        assert_eq!(status, CarpStatus::CarpOk);
        let report = take_string(report);
        assert!(report.contains("final_cost 15\n"), "got:\n{report}");
        assert!(report.contains("identity ok\n"));

        assert_eq!(
            carp_validate(inst, solution, ptr::null_mut()),
            CarpStatus::CarpOk
        );
        assert_eq!(carp_solution_route_count(solution), 1);

        let mut cost = 0u64;
        assert_eq!(
            carp_solution_cost(inst, solution, CarpCostMode::CarpCostOriginal, &mut cost),
            CarpStatus::CarpOk
        );
        assert_eq!(cost, 15);
        assert_eq!(
            carp_solution_cost(
                inst,
                solution,
                CarpCostMode::CarpCostFullTriangle,
                &mut cost
            ),
            CarpStatus::CarpOk
        );
        assert_eq!(cost, 10);

        let mut text = ptr::null_mut();
        assert_eq!(
            carp_solution_write(solution, inst, &mut text),
            CarpStatus::CarpOk
        );
        let rendered = take_string(text);
        let c = CString::new(rendered).unwrap();
        let mut reparsed = ptr::null_mut();
        assert_eq!(
            carp_solution_parse(c.as_ptr(), inst, &mut reparsed),
            CarpStatus::CarpOk
        );
        carp_solution_free(reparsed);
        carp_solution_free(solution);
        carp_instance_free(inst);
    }
}

#[test]
fn infeasible_solution_yields_violation_report() {
    let inst = parse(SHORTCUT_TRIANGLE);
    let text = CString::new("solution 1\nroute\n3 1 3 1\n3 3 1 1\n").unwrap();
    unsafe {
        let mut sol = ptr::null_mut();
        assert_eq!(
            carp_solution_parse(text.as_ptr(), inst, &mut sol),
            CarpStatus::CarpOk
        );
        let mut report = ptr::null_mut();
        assert_eq!(
            carp_validate(inst, sol, &mut report),
            CarpStatus::CarpInfeasible
        );
        let report = take_string(report);
        assert!(report.contains("served twice"), "got: {report}");
        carp_solution_free(sol);
        carp_instance_free(inst);
    }
}

#[test]
fn exact_and_bound_agree_with_the_library() {
    let inst = parse(SHORTCUT_TRIANGLE);
    unsafe {
        let mut optimum = 0u64;
        let mut witness = ptr::null_mut();
        assert_eq!(
            carp_solve_exact(inst, 8, &mut optimum, &mut witness),
            CarpStatus::CarpOk
        );
        assert_eq!(optimum, 15);
        assert_eq!(
            carp_validate(inst, witness, ptr::null_mut()),
            CarpStatus::CarpOk
        );
        carp_solution_free(witness);

        // Limit of zero is a refusal, not a crash.
        assert_eq!(
            carp_solve_exact(inst, 0, &mut optimum, ptr::null_mut()),
            CarpStatus::CarpUnsupported
        );

        let mut bound = 0u64;
        assert_eq!(carp_lower_bound(inst, &mut bound), CarpStatus::CarpOk);
        assert_eq!(bound, 10);
        carp_instance_free(inst);
    }
}

#[test]
fn generated_and_fig1_instances_come_through() {
    unsafe {
        let mut inst = ptr::null_mut();
        assert_eq!(
            carp_instance_generate(1, 8, 0.5, 20, 3, 5, &mut inst),
            CarpStatus::CarpOk
        );
        assert_eq!(carp_instance_vertex_count(inst), 8);
        carp_instance_free(inst);

        let mut fig1 = ptr::null_mut();
        assert_eq!(carp_instance_fig1(1000, 8, &mut fig1), CarpStatus::CarpOk);
        let mut optimum = 0u64;
        assert_eq!(
            carp_solve_exact(fig1, 8, &mut optimum, ptr::null_mut()),
            CarpStatus::CarpOk
        );
        assert_eq!(optimum, 6);
        carp_instance_free(fig1);
    }
}

#[test]
fn solutions_from_another_instance_are_rejected_not_indexed() {
    let big = parse(SHORTCUT_TRIANGLE);
    let small = parse("carp 1\nvertices 2 depot 1 capacity 1\n1 2 4 1\n");
    // Parsed against the 3-edge instance; edge id 3 does not exist in the
    // 1-edge instance.
    let text = CString::new("solution 1\nroute\n3 1 3 1\n3 3 1 0\n").unwrap();
    unsafe {
        let mut sol = ptr::null_mut();
        assert_eq!(
            carp_solution_parse(text.as_ptr(), big, &mut sol),
            CarpStatus::CarpOk
        );
        let mut cost = 0u64;
        assert_eq!(
            carp_solution_cost(small, sol, CarpCostMode::CarpCostOriginal, &mut cost),
            CarpStatus::CarpParseError
        );
        let mut rendered = ptr::null_mut();
        assert_eq!(
            carp_solution_write(sol, small, &mut rendered),
            CarpStatus::CarpParseError
        );
        carp_solution_free(sol);
        carp_instance_free(big);
        carp_instance_free(small);
    }
}

#[test]
fn null_pointers_are_rejected() {
    unsafe {
        let mut handle = ptr::null_mut();
        assert_eq!(
            carp_instance_parse(ptr::null(), &mut handle),
            CarpStatus::CarpNullPointer
        );
        assert_eq!(carp_instance_vertex_count(ptr::null()), 0);
        let mut cost = 0u64;
        assert_eq!(
            carp_solution_cost(
                ptr::null(),
                ptr::null(),
                CarpCostMode::CarpCostOriginal,
                &mut cost
            ),
            CarpStatus::CarpNullPointer
        );
        carp_instance_free(ptr::null_mut());
        carp_solution_free(ptr::null_mut());
        carp_string_free(ptr::null_mut());
    }
}

#[test]
fn generated_header_exists() {
    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("include")
        .join("carpkit.h");
    let text = std::fs::read_to_string(header).expect("cbindgen must emit the header");
    assert!(text.contains("CarpStatus"));
    assert!(text.contains("carp_solve"));
    assert!(text.contains("typedef struct CarpInstance CarpInstance;"));
}
