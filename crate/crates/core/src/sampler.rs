//! Configuration-model multigraphs: uniform sampling and exhaustive enumeration
//! of perfect matchings of the half-edge set.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use rand::Rng;

use crate::degree_seq::DegreeSequence;
use crate::error::{Error, Result};
use crate::rng;

/// Marker for a half-edge that has not been paired yet.
const UNMATCHED: u32 = u32::MAX;

/// Largest `ell` accepted by [`enumerate_matchings`] (13!! = 135135 outcomes).
pub const ENUMERATION_LIMIT: u64 = 14;

/// A half-edge addressed by its vertex and its slot on that vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HalfEdge {
    pub vertex: u32,
    pub slot: u32,
}

/// A perfect matching of the half-edges of a degree sequence. Self-loops and
/// multi-edges are allowed.
///
/// Half-edges are numbered globally in `(vertex, slot)` order; `mate[h]` is the
/// half-edge paired with `h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    seq: Arc<DegreeSequence>,
    mate: Vec<u32>,
}

impl MultiGraph {
    /// Builds a graph from an explicit list of half-edge pairs, checking that
    /// they form a perfect matching.
    pub fn from_pairs(
        seq: Arc<DegreeSequence>,
        pairs: impl IntoIterator<Item = (HalfEdge, HalfEdge)>,
    ) -> Result<Self> {
        let mut mate = vec![UNMATCHED; seq.ell() as usize];
        for (a, b) in pairs {
            let (ha, hb) = (index_of(&seq, a)?, index_of(&seq, b)?);
            if ha == hb {
                return Err(Error::MalformedMatching("half-edge paired with itself"));
            }
            if mate[ha as usize] != UNMATCHED || mate[hb as usize] != UNMATCHED {
                return Err(Error::MalformedMatching("half-edge used twice"));
            }
            mate[ha as usize] = hb;
            mate[hb as usize] = ha;
        }
        if mate.contains(&UNMATCHED) {
            return Err(Error::MalformedMatching("unmatched half-edge"));
        }
        Ok(MultiGraph { seq, mate })
    }

    /// Wraps a mate array; `mate` must be a fixed-point-free involution.
    pub fn from_mate(seq: Arc<DegreeSequence>, mate: Vec<u32>) -> Result<Self> {
        if mate.len() as u64 != seq.ell() {
            return Err(Error::MalformedMatching(
                "mate array length differs from ell",
            ));
        }
        for (h, &m) in mate.iter().enumerate() {
            if m as usize >= mate.len() || m as usize == h || mate[m as usize] as usize != h {
                return Err(Error::MalformedMatching(
                    "mate array is not a perfect matching",
                ));
            }
        }
        Ok(MultiGraph { seq, mate })
    }

    pub fn seq(&self) -> &DegreeSequence {
        &self.seq
    }

    pub fn seq_arc(&self) -> &Arc<DegreeSequence> {
        &self.seq
    }

    pub fn n(&self) -> usize {
        self.seq.n()
    }

    pub fn ell(&self) -> u64 {
        self.seq.ell()
    }

    #[inline]
    pub fn mate(&self, h: u32) -> u32 {
        self.mate[h as usize]
    }

    /// The whole mate array; doubles as a canonical encoding of the matching.
    pub fn mates(&self) -> &[u32] {
        &self.mate
    }

    #[inline]
    pub fn owner(&self, h: u32) -> u32 {
        self.seq.owner(h)
    }

    pub fn half_edge(&self, h: u32) -> HalfEdge {
        let vertex = self.seq.owner(h);
        HalfEdge {
            vertex,
            slot: h - self.seq.offset(vertex as usize),
        }
    }

    /// Each edge once, as half-edge indices with the smaller index first.
    pub fn pair_indices(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.mate
            .iter()
            .enumerate()
            .filter(|(h, &m)| (*h as u32) < m)
            .map(|(h, &m)| (h as u32, m))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (HalfEdge, HalfEdge)> + '_ {
        self.pair_indices()
            .map(|(a, b)| (self.half_edge(a), self.half_edge(b)))
    }

    /// Each edge once as a vertex pair (`u <= v` is not enforced; the order
    /// follows the half-edge order).
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.pair_indices()
            .map(|(a, b)| (self.owner(a), self.owner(b)))
    }

    /// Neighbours of `v`, one entry per incident half-edge (a self-loop shows
    /// up twice).
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = u32> + '_ {
        self.seq
            .half_edges(v)
            .map(move |h| self.owner(self.mate(h)))
    }
}

/// Global index of a `(vertex, slot)` half-edge.
pub fn index_of(seq: &DegreeSequence, he: HalfEdge) -> Result<u32> {
    let v = he.vertex as usize;
    if v >= seq.n() {
        return Err(Error::VertexOutOfRange {
            vertex: he.vertex as u64,
            n: seq.n() as u64,
        });
    }
    if he.slot >= seq.degree(v) {
        return Err(Error::MalformedMatching("slot exceeds vertex degree"));
    }
    Ok(seq.offset(v) + he.slot)
}

/// Uniform random perfect matching of the half-edges of `seq`.
///
/// The smallest unmatched half-edge is paired with a uniformly chosen partner
/// among the remaining unmatched half-edges. The unmatched set lives in a
/// compact array with a position index, so removal is a swap and the whole
/// sample costs O(ell).
pub fn sample(seq: &DegreeSequence, seed: u64) -> MultiGraph {
    sample_shared(Arc::new(seq.clone()), seed)
}

/// Like [`sample`] but reuses an already shared sequence.
pub fn sample_shared(seq: Arc<DegreeSequence>, seed: u64) -> MultiGraph {
    let mut rng = rng::generator(seed);
    let mate = sample_mates(seq.ell() as usize, &mut rng);
    MultiGraph { seq, mate }
}

/// Uniform perfect matching of `0..ell` as a mate array.
pub fn sample_mates<R: Rng + ?Sized>(ell: usize, rng: &mut R) -> Vec<u32> {
    debug_assert!(ell.is_multiple_of(2));
    let mut mate = vec![UNMATCHED; ell];
    let mut pool: Vec<u32> = (0..ell as u32).collect();
    let mut pos: Vec<u32> = (0..ell as u32).collect();

    let remove = |pool: &mut Vec<u32>, pos: &mut [u32], h: u32| {
        let i = pos[h as usize];
        let last = pool.pop().expect("pool is non-empty");
        if last != h {
            pool[i as usize] = last;
            pos[last as usize] = i;
        }
    };

    for h in 0..ell as u32 {
        if mate[h as usize] != UNMATCHED {
            continue;
        }
        remove(&mut pool, &mut pos, h);
        let r = rng.random_range(0..pool.len() as u32);
        let partner = pool[r as usize];
        remove(&mut pool, &mut pos, partner);
        mate[h as usize] = partner;
        mate[partner as usize] = h;
    }
    mate
}

/// (ell - 1)!!, the number of perfect matchings of `ell` labelled half-edges.
pub fn matching_count(ell: u64) -> Result<BigUint> {
    if ell % 2 == 1 {
        return Err(Error::OddTotalDegree { ell });
    }
    let mut acc = BigUint::from(1u32);
    let mut k = 1u64;
    while k < ell {
        acc *= k;
        k += 2;
    }
    Ok(acc)
}

/// Every perfect matching of `seq`, each exactly once.
///
/// Canonical order: the smallest unmatched half-edge is paired with each larger
/// unmatched candidate in increasing order, recursively.
pub fn enumerate_matchings(seq: &DegreeSequence) -> Result<MatchingEnumerator> {
    let ell = seq.ell();
    if ell > ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            what: "ell for enumeration",
            value: ell,
            limit: ENUMERATION_LIMIT,
        });
    }
    Ok(MatchingEnumerator {
        seq: Arc::new(seq.clone()),
        mate: vec![UNMATCHED; ell as usize],
        stack: Vec::with_capacity(ell as usize / 2),
        started: false,
        done: false,
    })
}

/// Backtracking stream over all perfect matchings, see [`enumerate_matchings`].
#[derive(Debug, Clone)]
pub struct MatchingEnumerator {
    seq: Arc<DegreeSequence>,
    mate: Vec<u32>,
    stack: Vec<(u32, u32)>,
    started: bool,
    done: bool,
}

impl MatchingEnumerator {
    fn next_unmatched(&self, from: u32) -> Option<u32> {
        (from..self.mate.len() as u32).find(|&h| self.mate[h as usize] == UNMATCHED)
    }

    fn link(&mut self, a: u32, b: u32) {
        self.mate[a as usize] = b;
        self.mate[b as usize] = a;
        self.stack.push((a, b));
    }

    /// Completes the partial matching with the first choice at every level.
    fn descend(&mut self) {
        while let Some(h) = self.next_unmatched(0) {
            let p = self
                .next_unmatched(h + 1)
                .expect("even number of unmatched half-edges");
            self.link(h, p);
        }
    }

    /// Moves to the next matching in canonical order.
    fn advance(&mut self) -> bool {
        while let Some((h, p)) = self.stack.pop() {
            self.mate[h as usize] = UNMATCHED;
            self.mate[p as usize] = UNMATCHED;
            if let Some(q) = self.next_unmatched(p + 1) {
                self.link(h, q);
                self.descend();
                return true;
            }
        }
        false
    }
}

impl Iterator for MatchingEnumerator {
    type Item = MultiGraph;

    fn next(&mut self) -> Option<MultiGraph> {
        if self.done {
            return None;
        }
        let more = if self.started {
            self.advance()
        } else {
            self.started = true;
            self.descend();
            true
        };
        if !more {
            self.done = true;
            return None;
        }
        Some(MultiGraph {
            seq: self.seq.clone(),
            mate: self.mate.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::{BTreeMap, BTreeSet};

    fn upper(n2: u64, higher: &[(u32, u64)]) -> DegreeSequence {
        DegreeSequence::build_upper(n2, &higher.iter().copied().collect()).unwrap()
    }

    #[test]
    fn single_self_loop() {
        let seq = upper(1, &[]);
        for seed in 0..20 {
            let g = sample(&seq, seed);
            assert_eq!(g.mates(), &[1, 0]);
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let seq = upper(50, &[(3, 4)]);
        assert_eq!(sample(&seq, 11), sample(&seq, 11));
        assert_ne!(sample(&seq, 11), sample(&seq, 12));
    }

    #[test]
    fn degrees_are_preserved() {
        let seq = upper(200, &[(3, 6), (5, 2)]);
        let g = sample(&seq, 3);
        let mut touch = vec![0u32; g.n()];
        for (u, v) in g.edges() {
            touch[u as usize] += 1;
            touch[v as usize] += 1;
        }
        assert_eq!(touch.as_slice(), seq.degrees());
    }

    #[test]
    fn double_factorial_values() {
        assert_eq!(matching_count(0).unwrap(), BigUint::from(1u32));
        assert_eq!(matching_count(6).unwrap(), BigUint::from(15u32));
        assert_eq!(
            matching_count(14).unwrap(),
            BigUint::from(13u32 * 11 * 9 * 7 * 5 * 3)
        );
        assert!(matches!(
            matching_count(5),
            Err(Error::OddTotalDegree { .. })
        ));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_matchings(&upper(2, &[])).unwrap().count(), 3);
        assert_eq!(enumerate_matchings(&upper(3, &[])).unwrap().count(), 15);
        let empty = DegreeSequence::from_counts(&BTreeMap::new()).unwrap();
        assert_eq!(enumerate_matchings(&empty).unwrap().count(), 1);
    }

    #[test]
    fn enumeration_guard() {
        assert!(matches!(
            enumerate_matchings(&upper(8, &[])),
            Err(Error::TooLarge { value: 16, .. })
        ));
    }

    #[test]
    fn two_vertex_outcomes() {
        // half-edges 0,1 on vertex 0 and 2,3 on vertex 1
        let all: Vec<Vec<u32>> = enumerate_matchings(&upper(2, &[]))
            .unwrap()
            .map(|g| g.mates().to_vec())
            .collect();
        assert_eq!(
            all,
            vec![vec![1, 0, 3, 2], vec![2, 3, 0, 1], vec![3, 2, 1, 0]]
        );
    }

    #[test]
    fn enumeration_has_no_duplicates() {
        for seq in [
            upper(7, &[]),
            upper(2, &[(3, 2)]),
            upper(1, &[(4, 1), (3, 2)]),
        ] {
            let all: BTreeSet<Vec<u32>> = enumerate_matchings(&seq)
                .unwrap()
                .map(|g| g.mates().to_vec())
                .collect();
            let expected = matching_count(seq.ell()).unwrap();
            assert_eq!(BigUint::from(all.len()), expected);
        }
    }

    #[test]
    fn from_pairs_validates() {
        let seq = Arc::new(upper(2, &[]));
        let he = |vertex, slot| HalfEdge { vertex, slot };
        let ok = MultiGraph::from_pairs(seq.clone(), [(he(0, 0), he(1, 0)), (he(0, 1), he(1, 1))]);
        assert_eq!(ok.unwrap().mates(), &[2, 3, 0, 1]);
        let dup = MultiGraph::from_pairs(seq.clone(), [(he(0, 0), he(1, 0)), (he(0, 0), he(1, 1))]);
        assert!(dup.is_err());
        let short = MultiGraph::from_pairs(seq.clone(), [(he(0, 0), he(1, 0))]);
        assert!(short.is_err());
        let bad_slot = MultiGraph::from_pairs(seq, [(he(0, 2), he(1, 0))]);
        assert!(bad_slot.is_err());
    }

    proptest::proptest! {
        #[test]
        fn sample_is_perfect_matching(n2 in 0u64..60, n3 in 0u64..10, seed: u64) {
            let n3 = n3 & !1;
            let g = sample(&upper(n2, &[(3, n3)]), seed);
            let rebuilt = MultiGraph::from_mate(g.seq_arc().clone(), g.mates().to_vec());
            proptest::prop_assert!(rebuilt.is_ok());
        }
    }
}
