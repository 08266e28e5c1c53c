//! The active/dead/neutral exploration process on half-edges.
//!
//! Starting from one vertex whose half-edges are all active, every step takes
//! an active half-edge `e1`, pairs it with `e2` and kills both. If `e2` was
//! neutral its vertex is discovered and the rest of that vertex's half-edges
//! become active. The process stops when no active half-edge remains.
//!
//! Two stopping times are recorded (steps are numbered from 1):
//! * `t_ne2`: first step whose `e2` is a neutral half-edge on a vertex of
//!   degree other than 2;
//! * `t_cycle`: first step whose `e2` is itself active (a cycle closes).
//!
//! The two events are disjoint by construction, so the times never coincide.
//!
//! [`explore`] reads the pairing from a materialized graph. [`explore_lazy`]
//! samples it on demand from per-degree counters of neutral vertices, which is
//! possible because neutral half-edges of the same degree class are
//! exchangeable under the uniform matching.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::degree_seq::DegreeSequence;
use crate::error::{Error, Result};
use crate::rng;
use crate::sampler::MultiGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Outcome {
    /// `t_ne2` came first.
    HitNonTwo,
    /// `t_cycle` came first.
    ClosedCycle,
    /// Ran to completion with neither event.
    Exhausted,
    /// Stopped by the step cap before either event.
    CapReached,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExplorationTrace {
    pub start: u32,
    pub start_degree: u32,
    /// Pairing steps executed.
    pub steps: u64,
    /// `None` stands for "never happened" (infinity).
    pub t_ne2: Option<u64>,
    pub t_cycle: Option<u64>,
    pub outcome: Outcome,
    /// Vertices discovered, including the start. Equals the component size
    /// unless the run was truncated by the cap.
    pub component_size: u64,
    /// Largest number of simultaneously active half-edges.
    pub max_active: u64,
    /// True when the cap stopped the process with active half-edges left.
    pub truncated: bool,
}

impl ExplorationTrace {
    fn finish(mut self, truncated: bool) -> Self {
        self.truncated = truncated;
        self.outcome = match (self.t_ne2, self.t_cycle) {
            (Some(a), Some(b)) if a < b => Outcome::HitNonTwo,
            (Some(_), Some(_)) => Outcome::ClosedCycle,
            (Some(_), None) => Outcome::HitNonTwo,
            (None, Some(_)) => Outcome::ClosedCycle,
            (None, None) if truncated => Outcome::CapReached,
            (None, None) => Outcome::Exhausted,
        };
        debug_assert!(match (self.t_ne2, self.t_cycle) {
            (Some(a), Some(b)) => a != b,
            _ => true,
        });
        self
    }

    fn new(start: u32, start_degree: u32) -> Self {
        ExplorationTrace {
            start,
            start_degree,
            steps: 0,
            t_ne2: None,
            t_cycle: None,
            outcome: Outcome::Exhausted,
            component_size: 1,
            max_active: start_degree as u64,
            truncated: false,
        }
    }

    /// The first `k` steps were executed and none of them paired into a
    /// vertex of degree other than 2.
    pub fn survived(&self, k: u64) -> bool {
        self.steps >= k && self.t_ne2.is_none_or(|t| t > k)
    }
}

fn check_start(seq: &DegreeSequence, start: usize) -> Result<()> {
    if start >= seq.n() {
        return Err(Error::VertexOutOfRange {
            vertex: start as u64,
            n: seq.n() as u64,
        });
    }
    Ok(())
}

/// Runs the exploration on `g` from `start` until no active half-edge is
/// left. The active half-edge taken at each step is the most recently
/// activated one.
pub fn explore(g: &MultiGraph, start: usize) -> Result<ExplorationTrace> {
    const NEUTRAL: u8 = 0;
    const ACTIVE: u8 = 1;
    const DEAD: u8 = 2;

    let seq = g.seq();
    check_start(seq, start)?;
    let mut state = vec![NEUTRAL; seq.ell() as usize];
    let mut pos = vec![u32::MAX; seq.ell() as usize];
    let mut active: Vec<u32> = Vec::new();
    let mut trace = ExplorationTrace::new(start as u32, seq.degree(start));

    let activate = |h: u32, active: &mut Vec<u32>, state: &mut [u8], pos: &mut [u32]| {
        state[h as usize] = ACTIVE;
        pos[h as usize] = active.len() as u32;
        active.push(h);
    };
    for h in seq.half_edges(start) {
        activate(h, &mut active, &mut state, &mut pos);
    }

    while let Some(e1) = active.pop() {
        trace.steps += 1;
        state[e1 as usize] = DEAD;
        let e2 = g.mate(e1);
        if state[e2 as usize] == ACTIVE {
            let i = pos[e2 as usize] as usize;
            let last = active.pop().expect("e2 is active");
            if last != e2 {
                active[i] = last;
                pos[last as usize] = i as u32;
            }
            state[e2 as usize] = DEAD;
            trace.t_cycle.get_or_insert(trace.steps);
        } else {
            debug_assert_eq!(state[e2 as usize], NEUTRAL);
            state[e2 as usize] = DEAD;
            let v = g.owner(e2) as usize;
            trace.component_size += 1;
            if seq.degree(v) != 2 {
                trace.t_ne2.get_or_insert(trace.steps);
            }
            for h in seq.half_edges(v).filter(|&h| h != e2) {
                activate(h, &mut active, &mut state, &mut pos);
            }
        }
        trace.max_active = trace.max_active.max(active.len() as u64);
    }
    Ok(trace.finish(false))
}

/// Exploration with the matching sampled on the fly.
///
/// State is the number of active half-edges plus, per degree class, the
/// number of undiscovered vertices. At each step the partner of the chosen
/// active half-edge is uniform among the other active half-edges and all
/// neutral half-edges. Runs at most `cap` steps.
pub fn explore_lazy(
    seq: &DegreeSequence,
    start: usize,
    seed: u64,
    cap: u64,
) -> Result<ExplorationTrace> {
    check_start(seq, start)?;
    if cap == 0 {
        return Err(Error::OutOfRange {
            what: "cap",
            value: 0,
            range: ">= 1",
        });
    }
    let mut rng = rng::generator(seed);
    let start_degree = seq.degree(start);
    let mut classes: Vec<(u64, u64)> = seq
        .counts()
        .iter()
        .map(|(&d, &c)| (d as u64, c - u64::from(d == start_degree)))
        .collect();
    let mut neutral_half: u64 = classes.iter().map(|&(d, c)| d * c).sum();
    let mut active = start_degree as u64;
    let mut trace = ExplorationTrace::new(start as u32, start_degree);

    while active > 0 {
        if trace.steps == cap {
            return Ok(trace.finish(true));
        }
        trace.steps += 1;
        let others = active - 1;
        let total = others + neutral_half;
        debug_assert!(total > 0, "parity guarantees a partner");
        let u = rng.random_range(0..total);
        if u < others {
            active -= 2;
            trace.t_cycle.get_or_insert(trace.steps);
        } else {
            let mut r = u - others;
            let class = classes
                .iter_mut()
                .find(|(d, c)| {
                    let w = *d * *c;
                    if r < w {
                        true
                    } else {
                        r -= w;
                        false
                    }
                })
                .expect("r indexes a neutral half-edge");
            let d = class.0;
            class.1 -= 1;
            neutral_half -= d;
            active = active - 1 + (d - 1);
            trace.component_size += 1;
            if d != 2 {
                trace.t_ne2.get_or_insert(trace.steps);
            }
        }
        trace.max_active = trace.max_active.max(active);
    }
    Ok(trace.finish(false))
}

/// A uniformly chosen vertex of degree `degree`, if any.
pub fn uniform_start(seq: &DegreeSequence, degree: u32, seed: u64) -> Option<usize> {
    let count = seq.count(degree);
    if count == 0 {
        return None;
    }
    let k = rng::generator(seed).random_range(0..count);
    seq.vertices_of_degree(degree).nth(k as usize)
}
