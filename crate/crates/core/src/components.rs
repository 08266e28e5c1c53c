//! Connected components of a configuration-model multigraph and the
//! statistics computed from them.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::degree_seq::DegreeSequence;
use crate::error::{Error, Result};
use crate::sampler::MultiGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Topology {
    /// Only degree-2 vertices; a self-loop is a cycle of length 1 and a double
    /// edge a cycle of length 2.
    Cycle,
    /// A path: two degree-1 endpoints, every other vertex of degree 2.
    Line,
    /// Anything else, i.e. any component holding a vertex of degree >= 3.
    Complex,
}

/// Component structure of one graph. Components are ordered by size,
/// descending, ties broken by the smallest vertex id they contain.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ComponentReport {
    pub sizes_desc: Vec<u64>,
    pub topo: Vec<Topology>,
    pub cyclic_vertices: u64,
    pub cycle_hist: BTreeMap<u64, u64>,
    pub line_sizes_desc: Vec<u64>,
    pub largest_cycle: u64,
    pub non2_outside_giant: u64,
}

/// Per-vertex component labels. Labels are assigned in order of the smallest
/// vertex of each component, starting at 0. Returns `(labels, count)`.
pub fn component_labels(g: &MultiGraph) -> (Vec<u32>, usize) {
    const UNSEEN: u32 = u32::MAX;
    let n = g.n();
    let mut label = vec![UNSEEN; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut next = 0u32;
    for root in 0..n {
        if label[root] != UNSEEN {
            continue;
        }
        label[root] = next;
        stack.push(root as u32);
        while let Some(v) = stack.pop() {
            for w in g.neighbors(v as usize) {
                if label[w as usize] == UNSEEN {
                    label[w as usize] = next;
                    stack.push(w);
                }
            }
        }
        next += 1;
    }
    (label, next as usize)
}

#[derive(Default, Clone, Copy)]
struct Tally {
    size: u64,
    deg1: u64,
    deg2: u64,
    other: u64,
    min_vertex: u32,
}

impl Tally {
    fn topology(&self) -> Topology {
        if self.deg1 == 0 && self.other == 0 {
            Topology::Cycle
        } else if self.deg1 == 2 && self.other == 0 {
            Topology::Line
        } else {
            Topology::Complex
        }
    }
}

pub fn analyze(g: &MultiGraph) -> ComponentReport {
    let (label, count) = component_labels(g);
    let seq = g.seq();
    let mut tallies = vec![
        Tally {
            min_vertex: u32::MAX,
            ..Tally::default()
        };
        count
    ];
    for (v, &c) in label.iter().enumerate() {
        let t = &mut tallies[c as usize];
        t.size += 1;
        t.min_vertex = t.min_vertex.min(v as u32);
        match seq.degree(v) {
            1 => t.deg1 += 1,
            2 => t.deg2 += 1,
            _ => t.other += 1,
        }
    }

    let mut order: Vec<usize> = (0..count).collect();
    order.sort_by(|&a, &b| {
        tallies[b]
            .size
            .cmp(&tallies[a].size)
            .then(tallies[a].min_vertex.cmp(&tallies[b].min_vertex))
    });

    let mut cycle_hist = BTreeMap::new();
    let mut line_sizes_desc = Vec::new();
    let mut cyclic_vertices = 0;
    let mut largest_cycle = 0;
    let mut topo = Vec::with_capacity(count);
    let mut sizes_desc = Vec::with_capacity(count);
    for &c in &order {
        let t = &tallies[c];
        let class = t.topology();
        match class {
            Topology::Cycle => {
                *cycle_hist.entry(t.size).or_insert(0) += 1;
                cyclic_vertices += t.size;
                largest_cycle = largest_cycle.max(t.size);
            }
            Topology::Line => line_sizes_desc.push(t.size),
            Topology::Complex => {}
        }
        topo.push(class);
        sizes_desc.push(t.size);
    }
    let non2_outside_giant = order
        .iter()
        .skip(1)
        .map(|&c| tallies[c].deg1 + tallies[c].other)
        .sum();

    ComponentReport {
        sizes_desc,
        topo,
        cyclic_vertices,
        cycle_hist,
        line_sizes_desc,
        largest_cycle,
        non2_outside_giant,
    }
}

impl ComponentReport {
    pub fn n(&self) -> u64 {
        self.sizes_desc.iter().sum()
    }

    /// Size of the `j`-th largest component (1-based), 0 if there are fewer.
    pub fn size_of_rank(&self, j: usize) -> u64 {
        j.checked_sub(1)
            .and_then(|i| self.sizes_desc.get(i))
            .copied()
            .unwrap_or(0)
    }

    /// C(n) recomputed from the histogram as the sum of k * C_n(k).
    pub fn cyclic_vertices_from_hist(&self) -> u64 {
        self.cycle_hist.iter().map(|(&k, &c)| k * c).sum()
    }
}

/// n - |C_max|.
pub fn deficiency(report: &ComponentReport) -> u64 {
    report.n() - report.size_of_rank(1)
}

/// Snaps values within a relative 1e-9 of an integer onto it, so that window
/// bounds like 0.4 * 100 do not round the wrong way.
fn snap(x: f64) -> f64 {
    let r = libm::round(x);
    if libm::fabs(x - r) <= 1e-9 * x.abs().max(1.0) {
        r
    } else {
        x
    }
}

/// Inclusive size window `[ceil(a * n2 / ell_ne2), floor(t * n2 / ell_ne2)]`
/// counted by [`s_process`]. The window may be empty (`lo > hi`).
pub fn s_window(seq: &DegreeSequence, a: f64, t: f64) -> Result<(u64, u64)> {
    if seq.ell_ne2() == 0 {
        return Err(Error::NoKernelHalfEdges);
    }
    if !(a > 0.0 && t > a) || !t.is_finite() {
        return Err(Error::BadInterval { lo: a, hi: t });
    }
    let scale = seq.n2() as f64 / seq.ell_ne2() as f64;
    let lo = libm::ceil(snap(a * scale)) as u64;
    let hi = libm::floor(snap(t * scale)) as u64;
    Ok((lo, hi))
}

/// Number of cycle components whose size falls into [`s_window`].
pub fn s_process(report: &ComponentReport, seq: &DegreeSequence, a: f64, t: f64) -> Result<u64> {
    let (lo, hi) = s_window(seq, a, t)?;
    if lo > hi {
        return Ok(0);
    }
    Ok(report.cycle_hist.range(lo..=hi).map(|(_, &c)| c).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::{enumerate_matchings, sample, HalfEdge};
    use alloc::sync::Arc;

    fn he(vertex: u32, slot: u32) -> HalfEdge {
        HalfEdge { vertex, slot }
    }

    fn report_with_hist(hist: &[(u64, u64)]) -> ComponentReport {
        ComponentReport {
            sizes_desc: vec![],
            topo: vec![],
            cyclic_vertices: 0,
            cycle_hist: hist.iter().copied().collect(),
            line_sizes_desc: vec![],
            largest_cycle: 0,
            non2_outside_giant: 0,
        }
    }

    #[test]
    fn self_loop_is_a_cycle() {
        let seq = DegreeSequence::build_upper(1, &BTreeMap::new()).unwrap();
        let r = analyze(&sample(&seq, 0));
        assert_eq!(r.sizes_desc, vec![1]);
        assert_eq!(r.topo, vec![Topology::Cycle]);
        assert_eq!(r.cyclic_vertices, 1);
        assert_eq!(r.cycle_hist, [(1, 1)].into_iter().collect());
    }

    #[test]
    fn hand_built_line() {
        // a=0, b=1 have degree 2; c=2, d=3 have degree 1
        let seq = Arc::new(DegreeSequence::build_lower(2, 2).unwrap());
        let g = MultiGraph::from_pairs(
            seq,
            [
                (he(2, 0), he(0, 0)),
                (he(0, 1), he(1, 0)),
                (he(1, 1), he(3, 0)),
            ],
        )
        .unwrap();
        let r = analyze(&g);
        assert_eq!(r.sizes_desc, vec![4]);
        assert_eq!(r.topo, vec![Topology::Line]);
        assert_eq!(r.line_sizes_desc, vec![4]);
        assert_eq!(r.cyclic_vertices, 0);
        assert!(r.cycle_hist.is_empty());
        assert_eq!(deficiency(&r), 0);
    }

    #[test]
    fn enumeration_average_of_small_cycles() {
        let seq = DegreeSequence::build_upper(2, &BTreeMap::new()).unwrap();
        let (mut ones, mut twos, mut total) = (0, 0, 0);
        for g in enumerate_matchings(&seq).unwrap() {
            let r = analyze(&g);
            ones += r.cycle_hist.get(&1).copied().unwrap_or(0);
            twos += r.cycle_hist.get(&2).copied().unwrap_or(0);
            total += 1;
        }
        // E[C_n(1)] = 2/3 and E[C_n(2)] = 2/3
        assert_eq!((ones, twos, total), (2, 2, 3));
    }

    #[test]
    fn deficiency_from_sizes() {
        let mut r = report_with_hist(&[]);
        r.sizes_desc = vec![90, 7, 3];
        assert_eq!(deficiency(&r), 10);
    }

    #[test]
    fn s_process_window() {
        // n2 / ell_ne2 = 100
        let seq = DegreeSequence::build_upper(400, &[(4, 1)].into_iter().collect()).unwrap();
        assert_eq!(s_window(&seq, 0.4, 1.0).unwrap(), (40, 100));
        let r = report_with_hist(&[(50, 2), (200, 1)]);
        assert_eq!(s_process(&r, &seq, 0.4, 1.0).unwrap(), 2);
        assert_eq!(
            s_process(&report_with_hist(&[]), &seq, 0.4, 1.0).unwrap(),
            0
        );
        assert_eq!(s_process(&r, &seq, 0.4, 2.0).unwrap(), 3);
    }

    #[test]
    fn s_process_errors() {
        let pure = DegreeSequence::build_upper(5, &BTreeMap::new()).unwrap();
        let r = report_with_hist(&[]);
        assert_eq!(
            s_process(&r, &pure, 0.1, 1.0),
            Err(Error::NoKernelHalfEdges)
        );
        let seq = DegreeSequence::build_upper(5, &[(4, 1)].into_iter().collect()).unwrap();
        assert!(matches!(
            s_process(&r, &seq, 1.0, 0.5),
            Err(Error::BadInterval { .. })
        ));
        assert!(matches!(
            s_process(&r, &seq, 0.0, 0.5),
            Err(Error::BadInterval { .. })
        ));
    }

    fn check_invariants(g: &MultiGraph, r: &ComponentReport) {
        assert_eq!(r.n(), g.n() as u64);
        assert_eq!(r.cyclic_vertices, r.cyclic_vertices_from_hist());
        assert!(r.sizes_desc.windows(2).all(|w| w[0] >= w[1]));
        assert!(r.line_sizes_desc.windows(2).all(|w| w[0] >= w[1]));
        assert_eq!(r.topo.len(), r.sizes_desc.len());
        if g.seq().max_degree() <= 2 {
            assert!(r.topo.iter().all(|t| *t != Topology::Complex));
        }
        // edge count per component: cycles have as many edges as vertices,
        // lines one fewer
        let (label, count) = component_labels(g);
        let mut verts = vec![0u64; count];
        let mut edges = vec![0u64; count];
        for (v, &c) in label.iter().enumerate() {
            verts[c as usize] += 1;
            edges[c as usize] += g.seq().degree(v) as u64;
        }
        for c in 0..count {
            let all2 = label
                .iter()
                .enumerate()
                .filter(|(_, &l)| l as usize == c)
                .all(|(v, _)| g.seq().degree(v) == 2);
            if all2 {
                assert_eq!(edges[c] / 2, verts[c]);
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn partition_and_two_routes(n2 in 1u64..300, n1 in 0u64..8, n3 in 0u64..6, seed: u64) {
            let mut counts = BTreeMap::new();
            counts.insert(2, n2);
            counts.insert(1, n1 * 2);
            counts.insert(3, n3 * 2);
            let seq = DegreeSequence::from_counts(&counts).unwrap();
            let g = sample(&seq, seed);
            let r = analyze(&g);
            check_invariants(&g, &r);
        }
    }
}
