//! Exercises the C ABI from Rust, then from a C program built against the
//! generated header.

use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use trimcolor_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(tc_last_error()) }.to_string_lossy().into_owned()
}

fn graph(n: usize, edges: &[(usize, usize)]) -> *mut TcGraph {
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(tc_graph_new(n, &mut g), TcStatus::Ok);
        for &(u, v) in edges {
            assert_eq!(tc_graph_add_edge(g, u, v), TcStatus::Ok);
        }
    }
    g
}

fn petersen_edges() -> Vec<(usize, usize)> {
    let mut e = Vec::new();
    for i in 0..5 {
        e.push((i, (i + 1) % 5));
        e.push((i, i + 5));
        e.push((i + 5, (i + 2) % 5 + 5));
    }
    e
}

#[test]
fn decide_and_color_petersen() {
    let g = graph(10, &petersen_edges());
    unsafe {
        assert_eq!(tc_graph_edge_count(g), 15);
        for alg in [TcDecideAlgorithm::Bhk, TcDecideAlgorithm::Trimmed, TcDecideAlgorithm::Bounded] {
            let mut yes = false;
            assert_eq!(tc_decide(g, 3, alg, TC_DEFAULT_DELTA, &mut yes), TcStatus::Ok);
            assert!(yes, "{alg:?}");
            assert_eq!(tc_decide(g, 2, alg, 3, &mut yes), TcStatus::Ok);
            assert!(!yes, "{alg:?}");
        }
        let mut chi = 0;
        assert_eq!(tc_chromatic_number(g, &mut chi), TcStatus::Ok);
        assert_eq!(chi, 3);
        for alg in [TcColorAlgorithm::Bhk, TcColorAlgorithm::Trimmed, TcColorAlgorithm::Reduction] {
            let mut colors = [u32::MAX; 10];
            let mut found = false;
            assert_eq!(tc_color(g, 3, alg, 0, colors.as_mut_ptr(), colors.len(), &mut found), TcStatus::Ok);
            assert!(found);
            for (u, v) in petersen_edges() {
                assert_ne!(colors[u], colors[v]);
            }
            assert!(colors.iter().all(|&c| c < 3));
        }
        tc_graph_free(g);
    }
}

#[test]
fn a3_is_seed_deterministic() {
    let g = graph(7, &(0..7).map(|i| (i, (i + 1) % 7)).collect::<Vec<_>>());
    let run = || {
        let mut colors = [0u32; 7];
        let mut found = false;
        let st = unsafe { tc_color(g, 6, TcColorAlgorithm::A3, 11, colors.as_mut_ptr(), 7, &mut found) };
        assert_eq!(st, TcStatus::Ok, "{}", last_error());
        (found, colors)
    };
    assert_eq!(run(), run());
    unsafe { tc_graph_free(g) };
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut out = false;
        assert_eq!(tc_decide(ptr::null(), 3, TcDecideAlgorithm::Bhk, 0, &mut out), TcStatus::NullPointer);
        assert!(last_error().contains("graph"));

        let mut g = ptr::null_mut();
        let bad = CString::new("p edge 2 1\ne 1 5\n").unwrap();
        assert_eq!(tc_graph_from_dimacs(bad.as_ptr(), &mut g), TcStatus::Parse);
        assert!(g.is_null());

        assert_eq!(tc_graph_new(500, &mut g), TcStatus::Contract);

        let g = graph(3, &[(0, 1)]);
        assert_eq!(tc_graph_add_edge(g, 1, 1), TcStatus::Contract);
        let mut buf = [0u32; 2];
        let mut found = false;
        assert_eq!(tc_color(g, 2, TcColorAlgorithm::Bhk, 0, buf.as_mut_ptr(), 2, &mut found), TcStatus::BufferTooSmall);
        assert_eq!(tc_decide(g, 2, TcDecideAlgorithm::Bhk, 0, &mut out), TcStatus::Ok);
        assert!(out);
        assert!(last_error().is_empty());
        tc_graph_free(g);
        tc_graph_free(ptr::null_mut());
        assert_eq!(tc_graph_vertex_count(ptr::null()), 0);
    }
}

#[test]
fn list_coloring_of_k33() {
    let mut edges = Vec::new();
    for a in 0..3 {
        for b in 3..6 {
            edges.push((a, b));
        }
    }
    let g = graph(6, &edges);
    let palette = [0, 1, 0, 2, 1, 2, 0, 1, 0, 2, 1, 2];
    let offsets = [0, 2, 4, 6, 8, 10, 12];
    let mut yes = true;
    unsafe {
        assert_eq!(tc_list_color(g, offsets.as_ptr(), palette.as_ptr(), &mut yes), TcStatus::Ok);
        assert!(!yes);
        let wide = [0, 1, 2, 0, 1, 2, 0, 1, 2, 0, 1, 2, 0, 1, 2, 0, 1, 2];
        let offsets = [0, 3, 6, 9, 12, 15, 18];
        assert_eq!(tc_list_color(g, offsets.as_ptr(), wide.as_ptr(), &mut yes), TcStatus::Ok);
        assert!(yes);
        let unsorted = [0, 3, 1, 9, 12, 15, 18];
        assert_eq!(tc_list_color(g, unsorted.as_ptr(), wide.as_ptr(), &mut yes), TcStatus::Contract);
        tc_graph_free(g);
    }
}

#[test]
fn c_program_links_against_header() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // test binaries live in <target>/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libtrimcolor_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let out_dir = tempfile::tempdir().unwrap();
    let bin = out_dir.path().join("smoke");
    let status = Command::new(std::env::var("CC").unwrap_or_else(|_| "cc".into()))
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("C compiler");
    assert!(status.success());
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok "));
}
