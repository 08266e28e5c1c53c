//! Kernel of a configuration-model multigraph: every degree-2 vertex is
//! removed and the two half-edges it was paired with are paired directly.
//! Pure degree-2 cycles vanish (they end as a self-loop on a single vertex,
//! which is dropped).

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::components::component_labels;
use crate::degree_seq::DegreeSequence;
use crate::sampler::MultiGraph;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelGraph {
    /// Multigraph on the vertices of degree other than 2, relabelled in
    /// ascending order of their original ids.
    pub graph: MultiGraph,
    /// `back_map[kernel_id]` is the original vertex id.
    pub back_map: Vec<u32>,
    /// Pure degree-2 cycles erased by the contraction.
    pub dropped_cycles: u64,
}

/// Kernel by walking every degree-2 chain once from each of its endpoints.
///
/// A half-edge on a vertex of degree other than 2 is followed through the
/// degree-2 vertices it leads to until the walk lands on another such
/// half-edge; the two endpoints form a kernel edge. Degree-2 vertices not
/// reached by any walk lie on pure cycles, which are then counted.
pub fn contract(g: &MultiGraph) -> KernelGraph {
    let seq = g.seq();
    let ell = seq.ell() as usize;
    let mut kmate = vec![NONE; ell];
    let mut on_chain = vec![false; seq.n()];

    for v in 0..seq.n() {
        if seq.degree(v) == 2 {
            continue;
        }
        for h in seq.half_edges(v) {
            if kmate[h as usize] != NONE {
                continue;
            }
            let mut x = g.mate(h);
            loop {
                let w = g.owner(x) as usize;
                if seq.degree(w) != 2 {
                    break;
                }
                on_chain[w] = true;
                x = g.mate(other_half(seq, w, x));
            }
            kmate[h as usize] = x;
            kmate[x as usize] = h;
        }
    }

    let mut dropped_cycles = 0;
    for v in 0..seq.n() {
        if seq.degree(v) != 2 || on_chain[v] {
            continue;
        }
        dropped_cycles += 1;
        let mut w = v;
        let mut x = seq.offset(v);
        loop {
            on_chain[w] = true;
            let y = g.mate(x);
            w = g.owner(y) as usize;
            if on_chain[w] {
                break;
            }
            x = other_half(seq, w, y);
        }
    }
    assemble(g, &kmate, dropped_cycles)
}

/// Literal contraction: removes the degree-2 vertices one at a time in the
/// given order (which must list every degree-2 vertex exactly once), splicing
/// their neighbours or dropping them when they carry a self-loop.
pub fn contract_in_order(g: &MultiGraph, order: impl IntoIterator<Item = usize>) -> KernelGraph {
    let seq = g.seq();
    let mut mate = g.mates().to_vec();
    let mut dropped_cycles = 0;
    let mut removed = 0u64;
    for v in order {
        assert_eq!(seq.degree(v), 2, "only degree-2 vertices can be removed");
        removed += 1;
        let a = seq.offset(v);
        let b = a + 1;
        if mate[a as usize] == b {
            dropped_cycles += 1;
            continue;
        }
        let (x, y) = (mate[a as usize], mate[b as usize]);
        mate[x as usize] = y;
        mate[y as usize] = x;
    }
    assert_eq!(removed, seq.n2(), "order must cover every degree-2 vertex");
    let mut kmate = vec![NONE; mate.len()];
    for v in 0..seq.n() {
        if seq.degree(v) != 2 {
            for h in seq.half_edges(v) {
                kmate[h as usize] = mate[h as usize];
            }
        }
    }
    assemble(g, &kmate, dropped_cycles)
}

#[inline]
fn other_half(seq: &DegreeSequence, w: usize, x: u32) -> u32 {
    let base = seq.offset(w);
    base + (1 - (x - base))
}

/// Relabels a matching on the half-edges of degree-!=2 vertices.
fn assemble(g: &MultiGraph, kmate: &[u32], dropped_cycles: u64) -> KernelGraph {
    let seq = g.seq();
    let back_map: Vec<u32> = (0..seq.n() as u32)
        .filter(|&v| seq.degree(v as usize) != 2)
        .collect();
    let kseq =
        DegreeSequence::from_degrees(back_map.iter().map(|&v| seq.degree(v as usize)).collect())
            .expect("kernel total degree is ell_ne2, which is even");
    let mut kernel_index = vec![NONE; seq.n()];
    for (k, &v) in back_map.iter().enumerate() {
        kernel_index[v as usize] = k as u32;
    }
    let to_kernel = |h: u32| {
        let v = g.owner(h) as usize;
        kseq.offset(kernel_index[v] as usize) + (h - seq.offset(v))
    };
    let mut mates = vec![NONE; kseq.ell() as usize];
    for &v in &back_map {
        for h in seq.half_edges(v as usize) {
            mates[to_kernel(h) as usize] = to_kernel(kmate[h as usize]);
        }
    }
    let graph = MultiGraph::from_mate(Arc::new(kseq), mates)
        .expect("splicing preserves a perfect matching");
    KernelGraph {
        graph,
        back_map,
        dropped_cycles,
    }
}

/// Checks that two vertices of degree other than 2 share a component of `g`
/// exactly when they share a component of its kernel.
pub fn kernel_edge_identity(g: &MultiGraph) -> bool {
    let kernel = contract(g);
    let (glabel, gcount) = component_labels(g);
    let (klabel, kcount) = component_labels(&kernel.graph);
    let mut g_to_k = vec![NONE; gcount];
    let mut k_to_g = vec![NONE; kcount];
    for (k, &v) in kernel.back_map.iter().enumerate() {
        let (a, b) = (glabel[v as usize], klabel[k]);
        if g_to_k[a as usize] == NONE && k_to_g[b as usize] == NONE {
            g_to_k[a as usize] = b;
            k_to_g[b as usize] = a;
        } else if g_to_k[a as usize] != b || k_to_g[b as usize] != a {
            return false;
        }
    }
    true
}
