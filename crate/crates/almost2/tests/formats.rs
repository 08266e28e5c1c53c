use std::collections::BTreeMap;
use std::io::Cursor;
use std::sync::Arc;

use almost2::core::exploration::{explore, explore_lazy};
use almost2::core::kernel::contract;
use almost2::core::sampler::sample;
use almost2::core::{analyze, DegreeSequence};
use almost2::io;
use almost2::Error;
use proptest::prelude::*;

fn fig1() -> DegreeSequence {
    io::sequence_from_shorthand(9970, &[(3, 30)]).unwrap()
}

fn sorted_edges(g: &almost2::core::MultiGraph) -> Vec<(u32, u32)> {
    let mut e: Vec<_> = g.edges().map(|(u, v)| (u.min(v), u.max(v))).collect();
    e.sort_unstable();
    e
}

#[test]
fn degree_file_with_comments() {
    let text = "# degrees\n2\n2\n\n3 # hub\n3\n";
    let seq = io::read_degrees(Cursor::new(text)).unwrap();
    assert_eq!(seq.degrees(), &[2, 2, 3, 3]);
    let mut buf = Vec::new();
    io::write_degrees(&seq, &mut buf).unwrap();
    assert_eq!(io::read_degrees(Cursor::new(buf)).unwrap(), seq);
}

#[test]
fn degree_file_errors() {
    let err = io::read_degrees(Cursor::new("2\nx\n")).unwrap_err();
    assert!(matches!(err, Error::Parse { line: 2, .. }));
    let err = io::read_degrees(Cursor::new("2\n0\n")).unwrap_err();
    assert_eq!(err.kind(), "InvalidDegree");
    let err = io::read_degrees(Cursor::new("2\n3\n")).unwrap_err();
    assert_eq!(err.kind(), "OddTotalDegree");
}

#[test]
fn shorthand() {
    let seq = fig1();
    assert_eq!((seq.n(), seq.ell(), seq.ell_ne2()), (10_000, 20_030, 90));
    assert_eq!(io::parse_degree_count("3:30"), Ok((3, 30)));
    assert!(io::parse_degree_count("3").is_err());
    assert!(io::parse_degree_count("a:1").is_err());
    let merged = io::sequence_from_shorthand(2, &[(1, 1), (1, 1)]).unwrap();
    assert_eq!(merged.count(1), 2);
}

#[test]
fn half_edges_round_trip_exactly() {
    let g = sample(&fig1(), 7);
    let mut buf = Vec::new();
    io::write_half_edges(&g, &mut buf).unwrap();
    let back = io::read_half_edges(Cursor::new(&buf)).unwrap();
    assert_eq!(back.mates(), g.mates());
    let with = io::read_half_edges_with(g.seq_arc().clone(), Cursor::new(&buf)).unwrap();
    assert_eq!(with, g);
}

#[test]
fn half_edge_errors() {
    let seq = Arc::new(DegreeSequence::from_degrees(vec![2]).unwrap());
    assert!(io::read_half_edges_with(seq.clone(), Cursor::new("0:0 0:0\n")).is_err());
    assert!(io::read_half_edges_with(seq.clone(), Cursor::new("0:0 0:2\n")).is_err());
    assert!(io::read_half_edges_with(seq.clone(), Cursor::new("0:0\n")).is_err());
    assert!(io::read_half_edges_with(seq, Cursor::new("0:0 0:1\n")).is_ok());
    let err = io::read_half_edges(Cursor::new("0:0 1:1\n")).unwrap_err();
    assert_eq!(err.kind(), "OddTotalDegree");
}

#[test]
fn edge_list_keeps_the_multigraph() {
    let g = sample(&fig1(), 11);
    let mut buf = Vec::new();
    io::write_edges(&g, &mut buf).unwrap();
    let back = io::read_edges(Cursor::new(&buf)).unwrap();
    assert_eq!(back.seq().degrees(), g.seq().degrees());
    assert_eq!(sorted_edges(&back), sorted_edges(&g));
    assert_eq!(analyze(&back), analyze(&g));
}

#[test]
fn dot_output() {
    let seq = DegreeSequence::from_degrees(vec![2]).unwrap();
    let mut buf = Vec::new();
    io::write_dot(&sample(&seq, 0), &mut buf).unwrap();
    assert_eq!(
        String::from_utf8(buf).unwrap(),
        "graph G {\n  0 [degree=2];\n  0 -- 0;\n}\n"
    );
}

#[test]
fn back_map_sidecar() {
    let g = sample(&fig1(), 3);
    let k = contract(&g);
    let mut buf = Vec::new();
    io::write_back_map(&k.back_map, &mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert_eq!(text.lines().count(), 30);
    assert!(text.lines().all(|l| l.split(' ').count() == 2));
    assert_eq!(io::read_back_map(Cursor::new(buf)).unwrap(), k.back_map);
    assert!(io::read_back_map(Cursor::new("1 5\n")).is_err());
}

#[test]
fn report_kv_round_trip() {
    for (seq, seed) in [
        (fig1(), 1),
        (DegreeSequence::build_lower(40, 6).unwrap(), 2),
    ] {
        let r = analyze(&sample(&seq, seed));
        let mut buf = Vec::new();
        io::write_report_kv(&r, &mut buf).unwrap();
        assert_eq!(io::read_report_kv(Cursor::new(buf)).unwrap(), r);
    }
}

#[test]
fn report_kv_hand_example() {
    let seq = DegreeSequence::from_degrees(vec![2]).unwrap();
    let r = analyze(&sample(&seq, 0));
    let mut buf = Vec::new();
    io::write_report_kv(&r, &mut buf).unwrap();
    assert_eq!(
        String::from_utf8(buf).unwrap(),
        "sizes_desc=1\ntopo=Cycle\ncyclic_vertices=1\ncycle_hist=1:1\nline_sizes_desc=\n\
         largest_cycle=1\nnon2_outside_giant=0\n"
    );
}

#[test]
fn report_json_field_names() {
    let r = analyze(&sample(&fig1(), 5));
    let mut buf = Vec::new();
    io::write_report_json(&r, &mut buf).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
    let keys: BTreeMap<_, _> = v.as_object().unwrap().iter().collect();
    let names: Vec<&str> = keys.keys().map(|k| k.as_str()).collect();
    assert_eq!(
        names,
        [
            "cycle_hist",
            "cyclic_vertices",
            "largest_cycle",
            "line_sizes_desc",
            "non2_outside_giant",
            "sizes_desc",
            "topo"
        ]
    );
}

#[test]
fn traces_jsonl_round_trip() {
    let seq = DegreeSequence::build_lower(50, 4).unwrap();
    let mut traces = vec![explore(&sample(&seq, 1), 0).unwrap()];
    traces.extend((0..5).map(|s| explore_lazy(&seq, 50, s, 20).unwrap()));
    let mut buf = Vec::new();
    io::write_traces_jsonl(&traces, &mut buf).unwrap();
    assert_eq!(
        String::from_utf8(buf.clone()).unwrap().lines().count(),
        traces.len()
    );
    assert_eq!(io::read_traces_jsonl(Cursor::new(buf)).unwrap(), traces);
}

proptest! {
    #[test]
    fn half_edge_round_trip_any_sequence(
        degrees in proptest::collection::vec(1u32..5, 1..30),
        seed in any::<u64>(),
    ) {
        let mut degrees = degrees;
        if degrees.iter().map(|&d| d as u64).sum::<u64>() % 2 == 1 {
            degrees.push(1);
        }
        let seq = DegreeSequence::from_degrees(degrees).unwrap();
        let g = sample(&seq, seed);
        let mut buf = Vec::new();
        io::write_half_edges(&g, &mut buf).unwrap();
        let back = io::read_half_edges(Cursor::new(buf)).unwrap();
        prop_assert_eq!(back.mates(), g.mates());
        prop_assert_eq!(back.seq().degrees(), g.seq().degrees());
    }
}
