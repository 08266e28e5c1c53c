//! Text formats.
//!
//! * degree file: one positive integer per line, `#` starts a comment;
//! * edge list: `u v` per line (vertex ids);
//! * half-edge list: `u:slot v:slot` per line, an exact encoding of the
//!   matching;
//! * DOT for small graphs;
//! * kernel back-map sidecar: `kernel_id original_id` per line;
//! * component reports as flat `key=value` records or JSON;
//! * exploration traces as JSON, one record per line in batch mode.
//!
//! Readers skip blank lines and `#` comments in every line-oriented format.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::sync::Arc;

use almost2_core::{
    ComponentReport, DegreeSequence, ExplorationTrace, HalfEdge, MultiGraph, Topology,
};

use crate::error::{Error, Result};

fn content_lines<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(usize, String)>> {
    reader
        .lines()
        .enumerate()
        .filter_map(|(i, line)| match line {
            Err(e) => Some(Err(Error::Io(e))),
            Ok(l) => {
                let body = l.split('#').next().unwrap_or("").trim().to_string();
                (!body.is_empty()).then_some(Ok((i + 1, body)))
            }
        })
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, s: &str, what: &str) -> Result<T> {
    s.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} `{s}`")))
}

/// Reads a degree file, keeping the vertex order of the file.
pub fn read_degrees<R: BufRead>(reader: R) -> Result<DegreeSequence> {
    let mut degrees = Vec::new();
    for item in content_lines(reader) {
        let (line, body) = item?;
        degrees.push(parse_num::<u32>(line, &body, "degree")?);
    }
    Ok(DegreeSequence::from_degrees(degrees)?)
}

pub fn write_degrees<W: Write>(seq: &DegreeSequence, mut w: W) -> Result<()> {
    for d in seq.degrees() {
        writeln!(w, "{d}")?;
    }
    Ok(())
}

/// Parses the `j:count` shorthand, e.g. `3:30`.
pub fn parse_degree_count(s: &str) -> std::result::Result<(u32, u64), String> {
    let (d, c) = s
        .split_once(':')
        .ok_or_else(|| format!("expected DEGREE:COUNT, got `{s}`"))?;
    let d = d
        .trim()
        .parse()
        .map_err(|_| format!("invalid degree `{d}`"))?;
    let c = c
        .trim()
        .parse()
        .map_err(|_| format!("invalid count `{c}`"))?;
    Ok((d, c))
}

/// Canonical sequence from `n2` degree-2 vertices plus `degree:count` pairs.
/// Repeated degrees add up.
pub fn sequence_from_shorthand(n2: u64, extra: &[(u32, u64)]) -> Result<DegreeSequence> {
    let mut counts = BTreeMap::new();
    counts.insert(2, n2);
    for &(d, c) in extra {
        *counts.entry(d).or_insert(0) += c;
    }
    Ok(DegreeSequence::from_counts(&counts)?)
}

pub fn write_edges<W: Write>(g: &MultiGraph, mut w: W) -> Result<()> {
    for (u, v) in g.edges() {
        writeln!(w, "{u} {v}")?;
    }
    Ok(())
}

/// Reads an edge list. Degrees are the edge multiplicities (a self-loop
/// counts twice) and slots are assigned in order of appearance, so the result
/// has the same multigraph but not necessarily the same half-edge pairing as
/// the graph that was written.
pub fn read_edges<R: BufRead>(reader: R) -> Result<MultiGraph> {
    let mut edges = Vec::new();
    for item in content_lines(reader) {
        let (line, body) = item?;
        let mut it = body.split_whitespace();
        let (Some(u), Some(v), None) = (it.next(), it.next(), it.next()) else {
            return Err(parse_err(line, "expected `u v`"));
        };
        edges.push((
            parse_num::<u32>(line, u, "vertex")?,
            parse_num::<u32>(line, v, "vertex")?,
        ));
    }
    let n = edges
        .iter()
        .map(|&(u, v)| u.max(v) as usize + 1)
        .max()
        .unwrap_or(0);
    let mut degrees = vec![0u32; n];
    let mut pairs = Vec::with_capacity(edges.len());
    for &(u, v) in &edges {
        let a = HalfEdge {
            vertex: u,
            slot: degrees[u as usize],
        };
        degrees[u as usize] += 1;
        let b = HalfEdge {
            vertex: v,
            slot: degrees[v as usize],
        };
        degrees[v as usize] += 1;
        pairs.push((a, b));
    }
    let seq = Arc::new(DegreeSequence::from_degrees(degrees)?);
    Ok(MultiGraph::from_pairs(seq, pairs)?)
}

pub fn write_half_edges<W: Write>(g: &MultiGraph, mut w: W) -> Result<()> {
    for (a, b) in g.pairs() {
        writeln!(w, "{}:{} {}:{}", a.vertex, a.slot, b.vertex, b.slot)?;
    }
    Ok(())
}

fn parse_half_edge(line: usize, s: &str) -> Result<HalfEdge> {
    let (v, slot) = s
        .split_once(':')
        .ok_or_else(|| parse_err(line, format!("expected vertex:slot, got `{s}`")))?;
    Ok(HalfEdge {
        vertex: parse_num(line, v, "vertex")?,
        slot: parse_num(line, slot, "slot")?,
    })
}

fn read_half_edge_pairs<R: BufRead>(reader: R) -> Result<Vec<(HalfEdge, HalfEdge)>> {
    let mut pairs = Vec::new();
    for item in content_lines(reader) {
        let (line, body) = item?;
        let mut it = body.split_whitespace();
        let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
            return Err(parse_err(line, "expected `u:slot v:slot`"));
        };
        pairs.push((parse_half_edge(line, a)?, parse_half_edge(line, b)?));
    }
    Ok(pairs)
}

/// Reads a half-edge list; the degree of each vertex is its largest slot plus
/// one.
pub fn read_half_edges<R: BufRead>(reader: R) -> Result<MultiGraph> {
    let pairs = read_half_edge_pairs(reader)?;
    let mut degrees: Vec<u32> = Vec::new();
    for he in pairs.iter().flat_map(|(a, b)| [a, b]) {
        let v = he.vertex as usize;
        if v >= degrees.len() {
            degrees.resize(v + 1, 0);
        }
        degrees[v] = degrees[v].max(he.slot + 1);
    }
    let seq = Arc::new(DegreeSequence::from_degrees(degrees)?);
    Ok(MultiGraph::from_pairs(seq, pairs)?)
}

/// Reads a half-edge list against a known degree sequence.
pub fn read_half_edges_with<R: BufRead>(seq: Arc<DegreeSequence>, reader: R) -> Result<MultiGraph> {
    let pairs = read_half_edge_pairs(reader)?;
    Ok(MultiGraph::from_pairs(seq, pairs)?)
}

pub fn write_dot<W: Write>(g: &MultiGraph, mut w: W) -> Result<()> {
    writeln!(w, "graph G {{")?;
    for v in 0..g.n() {
        writeln!(w, "  {v} [degree={}];", g.seq().degree(v))?;
    }
    for (u, v) in g.edges() {
        writeln!(w, "  {u} -- {v};")?;
    }
    writeln!(w, "}}")?;
    Ok(())
}

pub fn write_back_map<W: Write>(back_map: &[u32], mut w: W) -> Result<()> {
    for (k, orig) in back_map.iter().enumerate() {
        writeln!(w, "{k} {orig}")?;
    }
    Ok(())
}

pub fn read_back_map<R: BufRead>(reader: R) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for item in content_lines(reader) {
        let (line, body) = item?;
        let mut it = body.split_whitespace();
        let (Some(k), Some(orig), None) = (it.next(), it.next(), it.next()) else {
            return Err(parse_err(line, "expected `kernel_id original_id`"));
        };
        if parse_num::<usize>(line, k, "kernel id")? != out.len() {
            return Err(parse_err(line, "kernel ids must be consecutive from 0"));
        }
        out.push(parse_num(line, orig, "vertex")?);
    }
    Ok(out)
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn topo_name(t: Topology) -> &'static str {
    match t {
        Topology::Cycle => "Cycle",
        Topology::Line => "Line",
        Topology::Complex => "Complex",
    }
}

/// Flat record: one `key=value` line per field, lists comma separated and the
/// cycle histogram as `k:count` items.
pub fn write_report_kv<W: Write>(r: &ComponentReport, mut w: W) -> Result<()> {
    writeln!(w, "sizes_desc={}", join(&r.sizes_desc))?;
    writeln!(w, "topo={}", join(r.topo.iter().map(|&t| topo_name(t))))?;
    writeln!(w, "cyclic_vertices={}", r.cyclic_vertices)?;
    writeln!(
        w,
        "cycle_hist={}",
        join(r.cycle_hist.iter().map(|(k, c)| format!("{k}:{c}")))
    )?;
    writeln!(w, "line_sizes_desc={}", join(&r.line_sizes_desc))?;
    writeln!(w, "largest_cycle={}", r.largest_cycle)?;
    writeln!(w, "non2_outside_giant={}", r.non2_outside_giant)?;
    Ok(())
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').filter(|x| !x.is_empty())
}

pub fn read_report_kv<R: BufRead>(reader: R) -> Result<ComponentReport> {
    let mut fields: BTreeMap<String, (usize, String)> = BTreeMap::new();
    for item in content_lines(reader) {
        let (line, body) = item?;
        let (k, v) = body
            .split_once('=')
            .ok_or_else(|| parse_err(line, "expected key=value"))?;
        fields.insert(k.to_string(), (line, v.to_string()));
    }
    let get = |key: &str| {
        fields
            .get(key)
            .cloned()
            .ok_or_else(|| parse_err(0, format!("missing field `{key}`")))
    };
    let u64_list = |key: &str| -> Result<Vec<u64>> {
        let (line, v) = get(key)?;
        split_list(&v).map(|x| parse_num(line, x, key)).collect()
    };
    let scalar = |key: &str| -> Result<u64> {
        let (line, v) = get(key)?;
        parse_num(line, &v, key)
    };
    let (tline, tv) = get("topo")?;
    let topo = split_list(&tv)
        .map(|x| match x {
            "Cycle" => Ok(Topology::Cycle),
            "Line" => Ok(Topology::Line),
            "Complex" => Ok(Topology::Complex),
            other => Err(parse_err(tline, format!("unknown topology `{other}`"))),
        })
        .collect::<Result<Vec<_>>>()?;
    let (hline, hv) = get("cycle_hist")?;
    let cycle_hist = split_list(&hv)
        .map(|item| {
            let (k, c) = item
                .split_once(':')
                .ok_or_else(|| parse_err(hline, "expected k:count"))?;
            Ok((parse_num(hline, k, "k")?, parse_num(hline, c, "count")?))
        })
        .collect::<Result<BTreeMap<u64, u64>>>()?;
    Ok(ComponentReport {
        sizes_desc: u64_list("sizes_desc")?,
        topo,
        cyclic_vertices: scalar("cyclic_vertices")?,
        cycle_hist,
        line_sizes_desc: u64_list("line_sizes_desc")?,
        largest_cycle: scalar("largest_cycle")?,
        non2_outside_giant: scalar("non2_outside_giant")?,
    })
}

pub fn write_report_json<W: Write>(r: &ComponentReport, mut w: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, r)?;
    writeln!(w)?;
    Ok(())
}

pub fn write_trace_json<W: Write>(t: &ExplorationTrace, mut w: W) -> Result<()> {
    serde_json::to_writer(&mut w, t)?;
    writeln!(w)?;
    Ok(())
}

/// One JSON record per line.
pub fn write_traces_jsonl<'a, W: Write>(
    traces: impl IntoIterator<Item = &'a ExplorationTrace>,
    mut w: W,
) -> Result<()> {
    for t in traces {
        write_trace_json(t, &mut w)?;
    }
    Ok(())
}

pub fn read_traces_jsonl<R: BufRead>(reader: R) -> Result<Vec<ExplorationTrace>> {
    content_lines(reader)
        .map(|item| {
            let (_, body) = item?;
            Ok(serde_json::from_str(&body)?)
        })
        .collect()
}
