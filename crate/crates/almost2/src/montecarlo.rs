//! Replicated experiments over degree-sequence families.
//!
//! Replicate `i` of grid point `g` is sampled with
//! `replicate_seed(master_seed, g, i)`; records are folded in `(g, i)` order,
//! so results do not depend on the number of workers.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use almost2_core::components::{analyze, deficiency, s_process, s_window, ComponentReport};
use almost2_core::rng::{replicate_seed, GENERATOR_NAME};
use almost2_core::sampler::sample_shared;
use almost2_core::stats::{jackknife_se_of_mean, ks_distance_jackknife, mean_and_se};
use almost2_core::theory;
use almost2_core::DegreeSequence;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

pub use almost2_core::stats::{
    factorial_moment, falling_factorial, ks_distance, Ecdf, ReferenceCdf,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub family: Family,
    pub replicates: u64,
    /// Index of the first replicate; disjoint ranges of one experiment can be
    /// run separately and merged.
    #[serde(default)]
    pub replicate_offset: u64,
    pub master_seed: u64,
    #[serde(default)]
    pub statistics: Statistics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Family {
    pub regime: RegimeSpec,
    pub n_grid: Vec<u64>,
    /// Number of vertices of the special degree at each `n`; the rest have
    /// degree 2.
    pub count: CountRule,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RegimeSpec {
    /// Degree-2 vertices plus `count(n)` vertices of `degree` (at least 3).
    Upper { degree: u32 },
    /// Degree-2 vertices plus `count(n)` vertices of degree 1.
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CountRule {
    Fixed {
        value: u64,
    },
    /// `round(coefficient * n^exponent)`.
    Power {
        coefficient: f64,
        exponent: f64,
    },
}

impl CountRule {
    pub fn count(&self, n: u64) -> u64 {
        match *self {
            CountRule::Fixed { value } => value,
            CountRule::Power {
                coefficient,
                exponent,
            } => (coefficient * (n as f64).powf(exponent)).round().max(0.0) as u64,
        }
    }
}

impl Family {
    pub fn sequence(&self, n: u64) -> Result<DegreeSequence> {
        let c = self.count.count(n);
        if c > n {
            return Err(Error::Config(format!("count {c} exceeds n = {n}")));
        }
        let seq = match self.regime {
            RegimeSpec::Upper { degree } => {
                DegreeSequence::build_upper(n - c, &[(degree, c)].into_iter().collect())?
            }
            RegimeSpec::Lower => DegreeSequence::build_lower(n - c, c)?,
        };
        Ok(seq)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Window {
    pub a: f64,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Statistics {
    /// `n - |C_max|` and the number of degree != 2 vertices outside the giant.
    pub deficiency: bool,
    /// `|C_2| * ell_ne2 / n`.
    pub second_component: bool,
    /// Vertices on cycle components.
    pub cyclic_vertices: bool,
    /// Cycle-count windows, see `s_process`.
    pub s_windows: Vec<Window>,
    /// Factorial-moment orders evaluated for every window.
    pub factorial_orders: Vec<u32>,
    /// Per-replicate quantiles of the line-component sizes.
    pub line_quantiles: Vec<f64>,
    /// Record the sizes of this many largest components.
    pub top_components: usize,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::Config("replicates must be at least 1".into()));
        }
        if self.family.n_grid.is_empty() {
            return Err(Error::Config("n_grid is empty".into()));
        }
        for w in &self.statistics.s_windows {
            if !(w.a > 0.0 && w.t > w.a && w.t.is_finite()) {
                return Err(Error::Config(format!("bad window [{}, {}]", w.a, w.t)));
            }
        }
        if self.statistics.factorial_orders.contains(&0) {
            return Err(Error::Config("factorial orders start at 1".into()));
        }
        if let Some(q) = self
            .statistics
            .line_quantiles
            .iter()
            .find(|q| !(0.0..=1.0).contains(*q))
        {
            return Err(Error::Config(format!("quantile {q} outside [0, 1]")));
        }
        Ok(())
    }

    /// SHA-256 of the JSON encoding.
    pub fn hash(&self) -> String {
        hex_digest(&serde_json::to_vec(self).expect("config serializes"))
    }

    /// Hash with the replicate range blanked out; equal for runs that can be
    /// merged.
    fn family_hash(&self) -> String {
        let mut c = self.clone();
        c.replicates = 0;
        c.replicate_offset = 0;
        c.hash()
    }
}

fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicateRecord {
    pub grid_index: usize,
    pub n: u64,
    pub replicate: u64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub deficiency: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub non2_outside_giant: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub second_rescaled: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cyclic_vertices: Option<u64>,
    #[serde(default)]
    pub s_counts: Vec<u64>,
    #[serde(default)]
    pub line_quantiles: Vec<u64>,
    #[serde(default)]
    pub top_sizes: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
}

impl Estimate {
    fn of(values: &[f64]) -> Self {
        let (mean, se) = mean_and_se(values);
        Estimate { mean, se }
    }

    /// `(mean - target) / se`.
    pub fn z(&self, target: f64) -> f64 {
        (self.mean - target) / self.se
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeficiencyAggregate {
    pub estimate: Estimate,
    /// `n2 / (ell_ne2 + 1)`.
    pub expected: f64,
    /// Fraction of replicates with a degree != 2 vertex outside the largest
    /// component.
    pub non2_outside_fraction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub distance: f64,
    pub jackknife_se: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecondComponentAggregate {
    pub estimate: Estimate,
    /// `(p, value)` pairs.
    pub quantiles: Vec<(f64, f64)>,
    /// The sorted sample.
    pub ecdf: Vec<f64>,
    /// Against `exp(-E1(2a)/2)`.
    pub ks_cdf_y2: KsResult,
    /// Against `exp(-E1(a/2)/2)`.
    pub ks_cycle_count_cdf: KsResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CyclicAggregate {
    pub estimate: Estimate,
    pub expected: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorialMomentAggregate {
    pub order: u32,
    pub estimate: f64,
    pub jackknife_se: f64,
    /// `poisson_mean(a, t)^h`.
    pub poisson: f64,
    /// `cycle_count_poisson_mean(a, t)^h`.
    pub cycle_count_poisson: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowAggregate {
    pub a: f64,
    pub t: f64,
    /// Inclusive size range counted.
    pub k_lo: u64,
    pub k_hi: u64,
    pub estimate: Estimate,
    pub poisson_mean: f64,
    pub cycle_count_poisson_mean: f64,
    pub factorial_moments: Vec<FactorialMomentAggregate>,
    pub p_zero: Estimate,
    pub p_zero_poisson: f64,
    pub p_zero_cycle_count: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankAggregate {
    pub rank: usize,
    pub estimate: Estimate,
    pub median: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantileAggregate {
    pub p: f64,
    pub estimate: Estimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridAggregate {
    pub grid_index: usize,
    pub n: u64,
    pub n2: u64,
    pub ell_ne2: u64,
    pub replicates: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub deficiency: Option<DeficiencyAggregate>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub second_component: Option<SecondComponentAggregate>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cyclic_vertices: Option<CyclicAggregate>,
    #[serde(default)]
    pub s_windows: Vec<WindowAggregate>,
    #[serde(default)]
    pub line_quantiles: Vec<QuantileAggregate>,
    #[serde(default)]
    pub top_components: Vec<RankAggregate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub version: String,
    pub generator: String,
    pub config_hash: String,
    pub config: ExperimentConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub metadata: Metadata,
    pub aggregates: Vec<GridAggregate>,
    pub records: Vec<ReplicateRecord>,
}

/// Linear interpolation between order statistics of a sorted sample.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let h = p * (sorted.len() - 1) as f64;
    let (lo, hi) = (h.floor() as usize, h.ceil() as usize);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Upper tail probability of a chi-square statistic.
pub fn chi_square_p_value(statistic: f64, dof: usize) -> f64 {
    if dof == 0 {
        return 1.0;
    }
    let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
    1.0 - dist.cdf(statistic)
}

fn record_for(
    seq: &Arc<DegreeSequence>,
    stats: &Statistics,
    grid_index: usize,
    replicate: u64,
    seed: u64,
) -> Result<ReplicateRecord> {
    let g = sample_shared(Arc::clone(seq), seed);
    let report = analyze(&g);
    drop(g);
    reduce(&report, seq, stats, grid_index, replicate, seed)
}

fn reduce(
    report: &ComponentReport,
    seq: &DegreeSequence,
    stats: &Statistics,
    grid_index: usize,
    replicate: u64,
    seed: u64,
) -> Result<ReplicateRecord> {
    let n = seq.n() as u64;
    let s_counts = stats
        .s_windows
        .iter()
        .map(|w| s_process(report, seq, w.a, w.t))
        .collect::<almost2_core::Result<Vec<_>>>()?;
    let line_quantiles = stats
        .line_quantiles
        .iter()
        .map(|&p| {
            let mut asc: Vec<f64> = report
                .line_sizes_desc
                .iter()
                .rev()
                .map(|&s| s as f64)
                .collect();
            if asc.is_empty() {
                asc.push(0.0);
            }
            quantile(&asc, p).round() as u64
        })
        .collect();
    Ok(ReplicateRecord {
        grid_index,
        n,
        replicate,
        seed,
        deficiency: stats.deficiency.then(|| deficiency(report)),
        non2_outside_giant: stats.deficiency.then_some(report.non2_outside_giant),
        second_rescaled: stats
            .second_component
            .then(|| report.size_of_rank(2) as f64 * seq.ell_ne2() as f64 / n as f64),
        cyclic_vertices: stats.cyclic_vertices.then_some(report.cyclic_vertices),
        s_counts,
        line_quantiles,
        top_sizes: (1..=stats.top_components)
            .map(|j| report.size_of_rank(j))
            .collect(),
    })
}

fn sequences(config: &ExperimentConfig) -> Result<Vec<Arc<DegreeSequence>>> {
    config
        .family
        .n_grid
        .iter()
        .map(|&n| config.family.sequence(n).map(Arc::new))
        .collect()
}

/// Runs every replicate of every grid point. `workers = None` uses the global
/// thread pool.
pub fn run(config: &ExperimentConfig, workers: Option<usize>) -> Result<ExperimentResult> {
    config.validate()?;
    let seqs = sequences(config)?;
    for seq in &seqs {
        let needs_kernel =
            !config.statistics.s_windows.is_empty() || config.statistics.second_component;
        if needs_kernel && seq.ell_ne2() == 0 {
            return Err(almost2_core::Error::NoKernelHalfEdges.into());
        }
    }
    let items: Vec<(usize, u64)> = (0..seqs.len())
        .flat_map(|g| {
            (config.replicate_offset..config.replicate_offset + config.replicates)
                .map(move |i| (g, i))
        })
        .collect();
    let work = || {
        items
            .par_iter()
            .map(|&(g, i)| {
                let seed = replicate_seed(config.master_seed, g as u64, i);
                record_for(&seqs[g], &config.statistics, g, i, seed)
            })
            .collect::<Result<Vec<_>>>()
    };
    let records = match workers {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(work)?,
        None => work()?,
    };
    assemble(config.clone(), &seqs, records)
}

fn assemble(
    config: ExperimentConfig,
    seqs: &[Arc<DegreeSequence>],
    records: Vec<ReplicateRecord>,
) -> Result<ExperimentResult> {
    let aggregates = seqs
        .iter()
        .enumerate()
        .map(|(g, seq)| {
            let recs: Vec<&ReplicateRecord> =
                records.iter().filter(|r| r.grid_index == g).collect();
            aggregate(&config, g, seq, &recs)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExperimentResult {
        metadata: Metadata {
            version: VERSION.to_string(),
            generator: GENERATOR_NAME.to_string(),
            config_hash: config.hash(),
            config,
        },
        aggregates,
        records,
    })
}

fn aggregate(
    config: &ExperimentConfig,
    grid_index: usize,
    seq: &DegreeSequence,
    recs: &[&ReplicateRecord],
) -> Result<GridAggregate> {
    let stats = &config.statistics;
    let r = recs.len();
    let column =
        |f: &dyn Fn(&ReplicateRecord) -> f64| -> Vec<f64> { recs.iter().map(|x| f(x)).collect() };

    let deficiency = stats.deficiency.then(|| {
        let values = column(&|x| x.deficiency.unwrap_or(0) as f64);
        let outside = recs
            .iter()
            .filter(|x| x.non2_outside_giant.unwrap_or(0) > 0)
            .count();
        DeficiencyAggregate {
            estimate: Estimate::of(&values),
            expected: seq.n2() as f64 / (seq.ell_ne2() + 1) as f64,
            non2_outside_fraction: outside as f64 / r as f64,
        }
    });

    let second_component = if stats.second_component {
        let mut sample = column(&|x| x.second_rescaled.unwrap_or(0.0));
        sample.sort_by(f64::total_cmp);
        let y2 = |a: f64| {
            if a > 0.0 {
                theory::cdf_y2(a).unwrap_or(0.0)
            } else {
                0.0
            }
        };
        let cc = |a: f64| {
            if a > 0.0 {
                theory::cycle_count_cdf(a).unwrap_or(0.0)
            } else {
                0.0
            }
        };
        let (d1, se1) = ks_distance_jackknife(&sample, &y2)?;
        let (d2, se2) = ks_distance_jackknife(&sample, &cc)?;
        Some(SecondComponentAggregate {
            estimate: Estimate::of(&sample),
            quantiles: [0.1, 0.25, 0.5, 0.75, 0.9]
                .iter()
                .map(|&p| (p, quantile(&sample, p)))
                .collect(),
            ks_cdf_y2: KsResult {
                distance: d1,
                jackknife_se: se1,
            },
            ks_cycle_count_cdf: KsResult {
                distance: d2,
                jackknife_se: se2,
            },
            ecdf: sample,
        })
    } else {
        None
    };

    let cyclic_vertices = stats.cyclic_vertices.then(|| CyclicAggregate {
        estimate: Estimate::of(&column(&|x| x.cyclic_vertices.unwrap_or(0) as f64)),
        expected: seq.n2() as f64 / (seq.ell_ne2() + 1) as f64,
    });

    let s_windows = stats
        .s_windows
        .iter()
        .enumerate()
        .map(|(wi, w)| {
            let (k_lo, k_hi) = s_window(seq, w.a, w.t)?;
            let counts: Vec<u64> = recs.iter().map(|x| x.s_counts[wi]).collect();
            let mu = theory::poisson_mean(w.a, w.t)?;
            let mu_cc = theory::cycle_count_poisson_mean(w.a, w.t)?;
            let factorial_moments = stats
                .factorial_orders
                .iter()
                .map(|&h| {
                    let values: Vec<f64> =
                        counts.iter().map(|&c| falling_factorial(c, h)).collect();
                    FactorialMomentAggregate {
                        order: h,
                        estimate: factorial_moment(&counts, h),
                        jackknife_se: jackknife_se_of_mean(&values),
                        poisson: mu.powi(h as i32),
                        cycle_count_poisson: mu_cc.powi(h as i32),
                    }
                })
                .collect();
            let p0 = counts.iter().filter(|&&c| c == 0).count() as f64 / r as f64;
            Ok(WindowAggregate {
                a: w.a,
                t: w.t,
                k_lo,
                k_hi,
                estimate: Estimate::of(&counts.iter().map(|&c| c as f64).collect::<Vec<_>>()),
                poisson_mean: mu,
                cycle_count_poisson_mean: mu_cc,
                factorial_moments,
                p_zero: Estimate {
                    mean: p0,
                    se: (p0 * (1.0 - p0) / r as f64).sqrt(),
                },
                p_zero_poisson: (-mu).exp(),
                p_zero_cycle_count: (-mu_cc).exp(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let line_quantiles = stats
        .line_quantiles
        .iter()
        .enumerate()
        .map(|(qi, &p)| QuantileAggregate {
            p,
            estimate: Estimate::of(&column(&|x| x.line_quantiles[qi] as f64)),
        })
        .collect();

    let top_components = (0..stats.top_components)
        .map(|j| {
            let mut values = column(&|x| x.top_sizes[j] as f64);
            let estimate = Estimate::of(&values);
            values.sort_by(f64::total_cmp);
            RankAggregate {
                rank: j + 1,
                estimate,
                median: quantile(&values, 0.5),
            }
        })
        .collect();

    Ok(GridAggregate {
        grid_index,
        n: seq.n() as u64,
        n2: seq.n2(),
        ell_ne2: seq.ell_ne2(),
        replicates: r as u64,
        deficiency,
        second_component,
        cyclic_vertices,
        s_windows,
        line_quantiles,
        top_components,
    })
}

/// Combines two runs of the same experiment over adjacent replicate ranges.
/// Aggregates, including jackknife errors, are recomputed from the merged
/// records, so the result equals a single run over the union.
pub fn merge(a: &ExperimentResult, b: &ExperimentResult) -> Result<ExperimentResult> {
    let (ca, cb) = (&a.metadata.config, &b.metadata.config);
    if ca.family_hash() != cb.family_hash() {
        return Err(Error::Merge("configurations differ".into()));
    }
    let (first, second) = if ca.replicate_offset <= cb.replicate_offset {
        (a, b)
    } else {
        (b, a)
    };
    let (c1, c2) = (&first.metadata.config, &second.metadata.config);
    if c1.replicate_offset + c1.replicates != c2.replicate_offset {
        return Err(Error::Merge(format!(
            "replicate ranges [{}, {}) and [{}, {}) are not adjacent",
            c1.replicate_offset,
            c1.replicate_offset + c1.replicates,
            c2.replicate_offset,
            c2.replicate_offset + c2.replicates
        )));
    }
    let mut config = c1.clone();
    config.replicates = c1.replicates + c2.replicates;
    let mut records: Vec<ReplicateRecord> = first
        .records
        .iter()
        .chain(&second.records)
        .cloned()
        .collect();
    records.sort_by_key(|r| (r.grid_index, r.replicate));
    let seqs = sequences(&config)?;
    assemble(config, &seqs, records)
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn write_records_csv<W: Write>(result: &ExperimentResult, w: W) -> Result<()> {
    let stats = &result.metadata.config.statistics;
    let mut out = csv::Writer::from_writer(w);
    let mut header: Vec<String> = [
        "grid_index",
        "n",
        "replicate",
        "seed",
        "deficiency",
        "non2_outside_giant",
        "second_rescaled",
        "cyclic_vertices",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    header.extend(stats.s_windows.iter().map(|w| format!("s_{}_{}", w.a, w.t)));
    header.extend(stats.line_quantiles.iter().map(|p| format!("line_q{p}")));
    header.extend((1..=stats.top_components).map(|j| format!("size_rank_{j}")));
    out.write_record(&header)?;
    for r in &result.records {
        let mut row = vec![
            r.grid_index.to_string(),
            r.n.to_string(),
            r.replicate.to_string(),
            r.seed.to_string(),
            opt(r.deficiency),
            opt(r.non2_outside_giant),
            opt(r.second_rescaled),
            opt(r.cyclic_vertices),
        ];
        row.extend(r.s_counts.iter().map(u64::to_string));
        row.extend(r.line_quantiles.iter().map(u64::to_string));
        row.extend(r.top_sizes.iter().map(u64::to_string));
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

/// Overlay of the empirical distribution of a sorted sample and a reference
/// distribution function: one row per distinct sample value.
pub fn write_cdf_overlay<W: Write>(
    sorted: &[f64],
    reference: &dyn Fn(f64) -> f64,
    w: W,
) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["a", "empirical", "theoretical"])?;
    let n = sorted.len() as f64;
    for (i, &x) in sorted.iter().enumerate() {
        if i + 1 < sorted.len() && sorted[i + 1] == x {
            continue;
        }
        out.write_record([
            x.to_string(),
            ((i + 1) as f64 / n).to_string(),
            reference(x).to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Writes `result.json`, `records.csv` and, for every grid point with the
/// second-component statistic, two overlay CSVs. Returns the paths written.
pub fn write_outputs(result: &ExperimentResult, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let path = dir.join("result.json");
    let mut w = BufWriter::new(File::create(&path)?);
    serde_json::to_writer_pretty(&mut w, result)?;
    writeln!(w)?;
    w.flush()?;
    written.push(path);

    let path = dir.join("records.csv");
    write_records_csv(result, BufWriter::new(File::create(&path)?))?;
    written.push(path);

    for agg in &result.aggregates {
        let Some(sc) = &agg.second_component else {
            continue;
        };
        let overlays: [(&str, &dyn Fn(f64) -> f64); 2] = [
            ("cdf_y2", &|a| theory::cdf_y2(a).unwrap_or(0.0)),
            ("cycle_count_cdf", &|a| {
                theory::cycle_count_cdf(a).unwrap_or(0.0)
            }),
        ];
        for (name, f) in overlays {
            let path = dir.join(format!("overlay_{name}_n{}.csv", agg.n));
            write_cdf_overlay(&sc.ecdf, f, BufWriter::new(File::create(&path)?))?;
            written.push(path);
        }
    }
    Ok(written)
}
