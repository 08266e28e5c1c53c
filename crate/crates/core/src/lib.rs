#![no_std]
//! Configuration-model random multigraphs with almost 2-regular degree
//! sequences: sampling, component structure, kernel contraction, the
//! exploration process and exact/numerical evaluation of the limit laws.
//!
//! Everything here is pure computation on `alloc`; file formats, the CLI and
//! the parallel experiment runner live in the `almost2` crate.

extern crate alloc;

pub mod components;
pub mod degree_seq;
pub mod error;
pub mod exploration;
pub mod kernel;
pub mod rng;
pub mod sampler;
pub mod stats;
pub mod theory;

pub use components::{analyze, deficiency, s_process, ComponentReport, Topology};
pub use degree_seq::{DegreeSequence, Regime, RegimeDiagnostics};
pub use error::{Error, Result};
pub use exploration::{explore, explore_lazy, ExplorationTrace, Outcome};
pub use kernel::{contract, kernel_edge_identity, KernelGraph};
pub use sampler::{enumerate_matchings, matching_count, sample, HalfEdge, MultiGraph};
