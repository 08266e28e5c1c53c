//! Degree sequences for the almost 2-regular regimes.
//!
//! A [`DegreeSequence`] stores one degree per vertex together with the derived
//! counts used everywhere else: `n_j` (vertices of degree `j`), the total
//! number of half-edges `ell` and the number of half-edges sitting on vertices
//! of degree other than two, `ell_ne2`.
//!
//! The canonical layout used by [`DegreeSequence::build_upper`],
//! [`DegreeSequence::build_lower`] and [`DegreeSequence::from_counts`] puts the
//! degree-2 block first (vertex ids `0..n2`) followed by the remaining degrees
//! in ascending order. Half-edges are numbered by `(vertex, slot)`, so the
//! layout fixes the half-edge indexing and therefore the sampled matching for a
//! given seed.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Largest supported number of half-edges; half-edge ids are stored as `u32`.
pub const MAX_HALF_EDGES: u64 = u32::MAX as u64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSequence {
    degrees: Vec<u32>,
    offsets: Vec<u32>,
    owner: Vec<u32>,
    counts: BTreeMap<u32, u64>,
    ell: u64,
    ell_ne2: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Regime {
    /// No degree-0 or degree-1 vertices and at least one vertex of degree >= 3.
    UpperCandidate,
    /// Degree-1 vertices present, maximum degree at most 2.
    LowerCandidate,
    /// Degree-1 vertices together with vertices of degree >= 3.
    Mixed,
    /// Every vertex has degree 2.
    PureTwoRegular,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RegimeDiagnostics {
    pub regime: Regime,
    pub ratio_ell_n: f64,
    pub ratio_lne2_n: f64,
}

impl DegreeSequence {
    /// `n2` vertices of degree 2 followed by the vertices in `higher`
    /// (degree -> count, every degree at least 3).
    pub fn build_upper(n2: u64, higher: &BTreeMap<u32, u64>) -> Result<Self> {
        if let Some((&d, _)) = higher.iter().find(|(&d, _)| d < 3) {
            return Err(Error::InvalidDegree {
                degree: d as u64,
                reason: "upper regime degrees must be at least 3",
            });
        }
        let mut counts = higher.clone();
        counts.insert(2, n2);
        Self::from_counts(&counts)
    }

    /// `n2` vertices of degree 2 followed by `n1` vertices of degree 1.
    pub fn build_lower(n2: u64, n1: u64) -> Result<Self> {
        let mut counts = BTreeMap::new();
        counts.insert(2, n2);
        counts.insert(1, n1);
        Self::from_counts(&counts)
    }

    /// Canonical layout from a degree -> count map. Zero counts are ignored.
    pub fn from_counts(counts: &BTreeMap<u32, u64>) -> Result<Self> {
        if counts.get(&0).copied().unwrap_or(0) > 0 {
            return Err(Error::InvalidDegree {
                degree: 0,
                reason: "degree-0 vertices are excluded",
            });
        }
        let ell = counts.iter().try_fold(0u64, |acc, (&d, &c)| {
            (d as u64)
                .checked_mul(c)
                .and_then(|x| x.checked_add(acc))
                .ok_or(Error::TooLarge {
                    what: "total degree",
                    value: u64::MAX,
                    limit: MAX_HALF_EDGES,
                })
        })?;
        check_ell(ell)?;
        let n: u64 = counts.values().sum();
        let mut degrees = Vec::with_capacity(n as usize);
        let n2 = counts.get(&2).copied().unwrap_or(0);
        degrees.resize(n2 as usize, 2);
        for (&d, &c) in counts.iter().filter(|(&d, _)| d != 2) {
            degrees.extend(core::iter::repeat_n(d, c as usize));
        }
        Self::from_degrees(degrees)
    }

    /// Keeps the given vertex order.
    pub fn from_degrees(degrees: Vec<u32>) -> Result<Self> {
        let mut counts = BTreeMap::new();
        let mut ell = 0u64;
        for &d in &degrees {
            if d == 0 {
                return Err(Error::InvalidDegree {
                    degree: 0,
                    reason: "degree-0 vertices are excluded",
                });
            }
            *counts.entry(d).or_insert(0u64) += 1;
            ell += d as u64;
        }
        check_ell(ell)?;
        let mut offsets = Vec::with_capacity(degrees.len() + 1);
        let mut owner = Vec::with_capacity(ell as usize);
        let mut acc = 0u32;
        offsets.push(0);
        for (v, &d) in degrees.iter().enumerate() {
            acc += d;
            offsets.push(acc);
            owner.extend(core::iter::repeat_n(v as u32, d as usize));
        }
        let n2 = counts.get(&2).copied().unwrap_or(0);
        let ell_ne2 = ell - 2 * n2;
        debug_assert_eq!(ell_ne2 % 2, 0);
        Ok(DegreeSequence {
            degrees,
            offsets,
            owner,
            counts,
            ell,
            ell_ne2,
        })
    }

    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn ell_ne2(&self) -> u64 {
        self.ell_ne2
    }

    pub fn n2(&self) -> u64 {
        self.count(2)
    }

    /// Number of vertices of degree `j`.
    pub fn count(&self, j: u32) -> u64 {
        self.counts.get(&j).copied().unwrap_or(0)
    }

    /// Degree -> count for every degree present.
    pub fn counts(&self) -> &BTreeMap<u32, u64> {
        &self.counts
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn degree(&self, v: usize) -> u32 {
        self.degrees[v]
    }

    pub fn max_degree(&self) -> u32 {
        self.counts.keys().next_back().copied().unwrap_or(0)
    }

    /// Index of the first half-edge of vertex `v`; `offset(n)` equals `ell`.
    pub fn offset(&self, v: usize) -> u32 {
        self.offsets[v]
    }

    /// Vertex carrying half-edge `h`.
    #[inline]
    pub fn owner(&self, h: u32) -> u32 {
        self.owner[h as usize]
    }

    /// Half-edge index range of vertex `v`.
    #[inline]
    pub fn half_edges(&self, v: usize) -> core::ops::Range<u32> {
        self.offsets[v]..self.offsets[v + 1]
    }

    /// Vertex ids carrying the given degree, in ascending order.
    pub fn vertices_of_degree(&self, j: u32) -> impl Iterator<Item = usize> + '_ {
        self.degrees
            .iter()
            .enumerate()
            .filter(move |(_, &d)| d == j)
            .map(|(v, _)| v)
    }

    pub fn diagnose(&self) -> RegimeDiagnostics {
        let n1 = self.count(1);
        let regime = if self.counts.keys().all(|&d| d == 2) {
            Regime::PureTwoRegular
        } else if n1 == 0 {
            Regime::UpperCandidate
        } else if self.max_degree() <= 2 {
            Regime::LowerCandidate
        } else {
            Regime::Mixed
        };
        let n = self.n() as f64;
        let (ratio_ell_n, ratio_lne2_n) = if self.n() == 0 {
            (0.0, 0.0)
        } else {
            (self.ell as f64 / n, self.ell_ne2 as f64 / n)
        };
        RegimeDiagnostics {
            regime,
            ratio_ell_n,
            ratio_lne2_n,
        }
    }
}

fn check_ell(ell: u64) -> Result<()> {
    if ell % 2 == 1 {
        return Err(Error::OddTotalDegree { ell });
    }
    if ell > MAX_HALF_EDGES {
        return Err(Error::TooLarge {
            what: "total degree",
            value: ell,
            limit: MAX_HALF_EDGES,
        });
    }
    Ok(())
}
