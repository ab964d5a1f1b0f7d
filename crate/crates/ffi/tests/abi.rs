use std::ffi::{CStr, CString};
use std::ptr;

use cops_ffi::*;

fn fixture(name: &str) -> *mut CopsGraph {
    let name = CString::new(name).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { cops_graph_fixture(name.as_ptr(), &mut g) },
        CopsStatus::Ok
    );
    assert!(!g.is_null());
    g
}

fn last_error() -> String {
    let p = cops_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn petersen_round_trip() {
    let g = fixture("petersen");
    let (mut n, mut m) = (0, 0);
    let mut girth = 0;
    let mut k = 0;
    let mut bound = 0;
    unsafe {
        assert_eq!(cops_graph_size(g, &mut n, &mut m), CopsStatus::Ok);
        assert_eq!(cops_graph_girth(g, &mut girth), CopsStatus::Ok);
        assert_eq!(cops_cop_number(g, 4, &mut k), CopsStatus::Ok);
        assert_eq!(cops_girth5_bound(g, &mut bound), CopsStatus::Ok);
        cops_graph_free(g);
    }
    assert_eq!((n, m, girth, k, bound), (10, 15, 5, 3, 3));
}

#[test]
fn edges_and_text_agree() {
    let edges: [u32; 8] = [0, 1, 1, 2, 2, 3, 3, 0];
    let mut a = ptr::null_mut();
    let mut b = ptr::null_mut();
    let text = CString::new("4 4\n0 1\n1 2\n2 3\n3 0\n").unwrap();
    let (mut ka, mut kb) = (0, 0);
    unsafe {
        assert_eq!(
            cops_graph_from_edges(4, edges.as_ptr(), 4, &mut a),
            CopsStatus::Ok
        );
        assert_eq!(cops_graph_parse(text.as_ptr(), &mut b), CopsStatus::Ok);
        assert_eq!(cops_cop_number(a, 3, &mut ka), CopsStatus::Ok);
        assert_eq!(cops_cop_number(b, 3, &mut kb), CopsStatus::Ok);
        cops_graph_free(a);
        cops_graph_free(b);
    }
    assert_eq!((ka, kb), (2, 2));
}

#[test]
fn errors_are_reported() {
    let mut g = ptr::null_mut();
    let bad: [u32; 2] = [0, 7];
    unsafe {
        assert_eq!(
            cops_graph_from_edges(3, bad.as_ptr(), 1, &mut g),
            CopsStatus::InvalidArgument
        );
        assert!(g.is_null());
        assert!(last_error().contains('7'));

        let text = CString::new("3 1\n0 x\n").unwrap();
        assert_eq!(cops_graph_parse(text.as_ptr(), &mut g), CopsStatus::Parse);

        let name = CString::new("no-such-graph").unwrap();
        assert_eq!(
            cops_graph_fixture(name.as_ptr(), &mut g),
            CopsStatus::InvalidArgument
        );

        assert_eq!(
            cops_graph_fixture(ptr::null(), &mut g),
            CopsStatus::NullPointer
        );
        let mut n = 0;
        assert_eq!(
            cops_graph_girth(ptr::null(), &mut n),
            CopsStatus::NullPointer
        );
        assert!(last_error().contains("graph"));
        cops_graph_free(ptr::null_mut());
    }
}

#[test]
fn undefined_quantities() {
    let path: [u32; 4] = [0, 1, 1, 2];
    let mut g = ptr::null_mut();
    let mut out = 99;
    unsafe {
        assert_eq!(
            cops_graph_from_edges(3, path.as_ptr(), 2, &mut g),
            CopsStatus::Ok
        );
        assert_eq!(cops_graph_girth(g, &mut out), CopsStatus::Undefined);
        cops_graph_free(g);
    }
    assert_eq!(out, 99);
    let square: [u32; 8] = [0, 1, 1, 2, 2, 3, 3, 0];
    unsafe {
        assert_eq!(
            cops_graph_from_edges(4, square.as_ptr(), 4, &mut g),
            CopsStatus::Ok
        );
        assert_eq!(cops_girth5_bound(g, &mut out), CopsStatus::Undefined);
        cops_graph_free(g);
    }
    assert_eq!(out, 99);
}

#[test]
fn gnp_bounds_and_sampling() {
    let (mut lo, mut hi) = (0.0, 0.0);
    let mut g = ptr::null_mut();
    let (mut n, mut m) = (0, 0);
    unsafe {
        assert_eq!(cops_gnp_lower(1e6, 1e-3, &mut lo), CopsStatus::Ok);
        assert_eq!(cops_gnp_upper(1e6, 1e-3, 0.5, &mut hi), CopsStatus::Ok);
        assert_eq!(
            cops_gnp_upper(1e6, 1e-3, 2.0, &mut hi),
            CopsStatus::InvalidArgument
        );
        assert_eq!(cops_graph_gnp(50, 0.2, 7, &mut g), CopsStatus::Ok);
        assert_eq!(cops_graph_size(g, &mut n, &mut m), CopsStatus::Ok);
        cops_graph_free(g);
    }
    assert!(lo > 0.0 && hi > lo);
    assert_eq!(n, 50);
    assert!(m > 0);
}

#[test]
fn play_a_game() {
    let g = fixture("petersen");
    let cops = CString::new("optimal:k=3").unwrap();
    let robber = CString::new("greedy-avoid").unwrap();
    let mut outcome = CopsOutcome::Aborted;
    let mut rounds = 0;
    unsafe {
        let status = cops_play(
            g,
            cops.as_ptr(),
            robber.as_ptr(),
            1,
            0,
            &mut outcome,
            &mut rounds,
        );
        assert_eq!(status, CopsStatus::Ok);
        let bogus = CString::new("teleport").unwrap();
        let status = cops_play(
            g,
            bogus.as_ptr(),
            robber.as_ptr(),
            1,
            0,
            &mut outcome,
            &mut rounds,
        );
        assert_eq!(status, CopsStatus::InvalidArgument);
        cops_graph_free(g);
    }
    assert_eq!(outcome, CopsOutcome::Caught);
}

#[test]
fn version_is_set() {
    let v = unsafe { CStr::from_ptr(cops_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
