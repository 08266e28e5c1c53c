use std::collections::hash_map::RandomState;
use std::fs::File;
use std::hash::BuildHasher;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use almost2::core::components::analyze;
use almost2::core::exploration::{explore, explore_lazy, uniform_start, ExplorationTrace};
use almost2::core::kernel::contract;
use almost2::core::rng::{replicate_seed, splitmix64};
use almost2::core::sampler::{enumerate_matchings, sample_shared, MultiGraph};
use almost2::core::theory::{self, E1Method, TheoryConfig};
use almost2::core::DegreeSequence;
use almost2::io;
use almost2::montecarlo::{self, ExperimentConfig, VERSION};
use almost2::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational_display::Rational;
use serde_json::json;

/// Random multigraphs with almost 2-regular degree sequences.
#[derive(Parser)]
#[command(name = "almost2", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample one configuration-model graph.
    Sample {
        #[command(flatten)]
        seq: SeqArgs,
        /// Drawn from system entropy and echoed in the output when absent.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "edges")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List every matching of a small sequence and average the cycle counts.
    Enumerate {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long, value_enum, default_value = "kv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Contract the degree-2 vertices of a sampled or loaded graph.
    Kernel {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum, default_value = "edges")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Sidecar file with `kernel_id original_id` lines.
        #[arg(long)]
        backmap: Option<PathBuf>,
    },
    /// Run the exploration process.
    Explore {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long)]
        seed: Option<u64>,
        /// Start vertex.
        #[arg(long, conflicts_with = "start_degree")]
        start: Option<u32>,
        /// Start from a uniformly chosen vertex of this degree.
        #[arg(long)]
        start_degree: Option<u32>,
        /// Sample the matching on the fly instead of building the graph.
        #[arg(long)]
        lazy: bool,
        /// Step limit for the lazy mode.
        #[arg(long, requires = "lazy")]
        cap: Option<u64>,
        /// Number of traces; trace `i` uses a seed derived from `--seed` and `i`.
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate closed forms.
    Theory {
        #[command(subcommand)]
        what: TheoryCommand,
        #[arg(long, value_enum, default_value = "kv", global = true)]
        format: Format,
    },
    /// Run a replicated experiment described by a JSON config.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Master seed; overrides the config value.
        #[arg(long)]
        seed: u64,
        /// Output directory.
        #[arg(long, env = "ALMOST2_OUT_DIR")]
        out: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        replicates: Option<u64>,
        #[arg(long)]
        replicate_offset: Option<u64>,
    },
    /// Component report of a sampled or loaded graph.
    Report {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum, default_value = "kv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum TheoryCommand {
    /// e^{-2t} / (2t)
    Lambda {
        #[arg(long)]
        t: f64,
    },
    /// Integral of e^{-2r} / (2r) over [a, t]
    PoissonMean {
        #[arg(long)]
        a: f64,
        /// Upper end; `inf` is accepted.
        #[arg(long)]
        t: f64,
        #[arg(long)]
        quadrature: bool,
    },
    /// exp(-E1(2a) / 2)
    CdfY2 {
        #[arg(long)]
        a: f64,
        #[arg(long, value_enum, default_value = "auto")]
        e1: E1Choice,
    },
    /// exp(-E1(a/2) / 2)
    CycleCountCdf {
        #[arg(long)]
        a: f64,
    },
    /// Integral of e^{-r/2} / (2r) over [a, t]
    CycleCountPoissonMean {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        t: f64,
    },
    /// Exact expected number of vertices on cycles
    ExpectedCyclic {
        #[command(flatten)]
        seq: SeqArgs,
    },
    /// Exact expected number of k-cycles
    ExpectedCycleCount {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long)]
        k: u64,
    },
    /// Exact probability a walk from a degree-1 vertex meets only degree-2 vertices for k steps
    LineSurvival {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long)]
        k: u64,
    },
    /// 2 n ln(n1) / n1, the first-order size of the largest lines
    LowerPrediction {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        n1: u64,
    },
    /// CSV grid of a function of `a`.
    Table {
        #[arg(long, value_enum)]
        function: TableFunction,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long, default_value_t = 100)]
        steps: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum E1Choice {
    Series,
    ContinuedFraction,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFunction {
    Lambda,
    CdfY2,
    CycleCountCdf,
    /// poisson_mean(a, inf)
    PoissonTail,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
    Edges,
    Halfedges,
    Dot,
    Kv,
}

#[derive(Args)]
struct SeqArgs {
    /// Number of degree-2 vertices.
    #[arg(long)]
    n2: Option<u64>,
    /// Extra vertices as DEGREE:COUNT, repeatable.
    #[arg(long = "deg", value_parser = io::parse_degree_count)]
    deg: Vec<(u32, u64)>,
    /// Degree file, one degree per line.
    #[arg(long, conflicts_with_all = ["n2", "deg"])]
    degrees: Option<PathBuf>,
}

#[derive(Args)]
struct GraphArgs {
    #[command(flatten)]
    seq: SeqArgs,
    #[arg(long, conflicts_with = "graph")]
    seed: Option<u64>,
    /// Half-edge file (`u:slot v:slot` per line).
    #[arg(long)]
    graph: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl<E: Into<Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Domain(e.into())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn check_format(cmd: &str, format: Format, allowed: &[Format]) -> CliResult<()> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        let names: Vec<String> = allowed
            .iter()
            .map(|f| format!("{f:?}").to_lowercase())
            .collect();
        Err(usage(format!(
            "--format {} is not supported by `{cmd}` (expected one of: {})",
            format!("{format:?}").to_lowercase(),
            names.join(", ")
        )))
    }
}

impl SeqArgs {
    fn resolve(&self) -> CliResult<DegreeSequence> {
        if let Some(path) = &self.degrees {
            return Ok(io::read_degrees(BufReader::new(
                File::open(path).map_err(Error::Io)?,
            ))?);
        }
        if self.n2.is_none() && self.deg.is_empty() {
            return Err(usage(
                "a degree sequence is required: --n2/--deg or --degrees",
            ));
        }
        Ok(io::sequence_from_shorthand(
            self.n2.unwrap_or(0),
            &self.deg,
        )?)
    }

    fn provided(&self) -> bool {
        self.degrees.is_some() || self.n2.is_some() || !self.deg.is_empty()
    }
}

fn counts_label(seq: &DegreeSequence) -> String {
    seq.counts()
        .iter()
        .map(|(d, c)| format!("{d}:{c}"))
        .collect::<Vec<_>>()
        .join(",")
}

fn entropy_seed() -> u64 {
    splitmix64(RandomState::new().hash_one(std::time::SystemTime::now()))
}

fn output(out: &Option<PathBuf>) -> CliResult<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(Error::Io)?)),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

fn header(w: &mut dyn Write, format: Format, fields: &str) -> CliResult<()> {
    let prefix = if format == Format::Dot { "//" } else { "#" };
    writeln!(w, "{prefix} almost2 {VERSION} {fields}").map_err(Error::Io)?;
    Ok(())
}

fn write_graph(w: &mut dyn Write, g: &MultiGraph, format: Format) -> CliResult<()> {
    match format {
        Format::Edges => io::write_edges(g, w)?,
        Format::Halfedges => io::write_half_edges(g, w)?,
        Format::Dot => io::write_dot(g, w)?,
        _ => unreachable!("format checked by caller"),
    }
    Ok(())
}

fn graph_json(g: &MultiGraph) -> serde_json::Value {
    json!({
        "n": g.n(),
        "degrees": g.seq().degrees(),
        "pairs": g.pairs().map(|(a, b)| [a, b]).collect::<Vec<_>>(),
    })
}

fn cmd_sample(
    seq: &SeqArgs,
    seed: Option<u64>,
    format: Format,
    out: &Option<PathBuf>,
) -> CliResult<()> {
    check_format(
        "sample",
        format,
        &[Format::Edges, Format::Halfedges, Format::Dot, Format::Json],
    )?;
    let seq = Arc::new(seq.resolve()?);
    let seed = seed.unwrap_or_else(entropy_seed);
    let g = sample_shared(Arc::clone(&seq), seed);
    let mut w = output(out)?;
    if format == Format::Json {
        let doc = json!({
            "version": VERSION,
            "command": "sample",
            "config": { "counts": seq.counts(), "seed": seed },
            "graph": graph_json(&g),
        });
        serde_json::to_writer(&mut w, &doc).map_err(Error::Json)?;
        writeln!(w).map_err(Error::Io)?;
    } else {
        header(
            &mut *w,
            format,
            &format!("sample seed={seed} degrees={}", counts_label(&seq)),
        )?;
        write_graph(&mut *w, &g, format)?;
    }
    w.flush().map_err(Error::Io)?;
    Ok(())
}

mod num_rational_display {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::ToPrimitive;

    /// Exact value plus its decimal approximation.
    pub struct Rational(pub BigRational);

    impl Rational {
        pub fn exact(&self) -> String {
            if self.0.denom() == &BigInt::from(1) {
                self.0.numer().to_string()
            } else {
                format!("{}/{}", self.0.numer(), self.0.denom())
            }
        }

        pub fn approx(&self) -> f64 {
            self.0.to_f64().unwrap_or(f64::NAN)
        }
    }
}

fn cmd_enumerate(seq: &SeqArgs, format: Format, out: &Option<PathBuf>) -> CliResult<()> {
    check_format("enumerate", format, &[Format::Kv, Format::Json])?;
    let seq = seq.resolve()?;
    let mut matchings = Vec::new();
    let mut cyclic = 0u64;
    let mut by_k = vec![0u64; seq.n2() as usize + 1];
    for g in enumerate_matchings(&seq)? {
        let r = analyze(&g);
        cyclic += r.cyclic_vertices;
        for (&k, &c) in &r.cycle_hist {
            by_k[k as usize] += c;
        }
        matchings.push(
            g.pairs()
                .map(|(a, b)| format!("{}:{}-{}:{}", a.vertex, a.slot, b.vertex, b.slot))
                .collect::<Vec<_>>()
                .join(" "),
        );
    }
    let total = matchings.len() as u64;
    let avg = |x: u64| Rational(num_rational::BigRational::new(x.into(), total.into()));
    let cyclic_avg = avg(cyclic);
    let cyclic_exact = Rational(theory::expected_cyclic_vertices(&seq));
    let per_k: Vec<(u64, Rational, Rational)> = (1..=seq.n2())
        .map(|k| {
            Ok((
                k,
                avg(by_k[k as usize]),
                Rational(theory::expected_cycle_count(&seq, k)?),
            ))
        })
        .collect::<CliResult<_>>()?;
    let mut w = output(out)?;
    if format == Format::Json {
        let doc = json!({
            "version": VERSION,
            "command": "enumerate",
            "config": { "counts": seq.counts() },
            "matchings": matchings,
            "count": total,
            "cyclic_vertices": { "enumerated": cyclic_avg.exact(), "exact": cyclic_exact.exact() },
            "cycle_counts": per_k.iter().map(|(k, e, x)| json!({
                "k": k, "enumerated": e.exact(), "exact": x.exact(),
            })).collect::<Vec<_>>(),
        });
        serde_json::to_writer_pretty(&mut w, &doc).map_err(Error::Json)?;
        writeln!(w).map_err(Error::Io)?;
    } else {
        header(
            &mut *w,
            format,
            &format!("enumerate degrees={}", counts_label(&seq)),
        )?;
        let io_err = |e| Failure::from(Error::Io(e));
        for m in &matchings {
            writeln!(w, "{m}").map_err(io_err)?;
        }
        writeln!(w, "matchings={total}").map_err(io_err)?;
        writeln!(
            w,
            "E[C(n)]={} exact={}",
            cyclic_avg.exact(),
            cyclic_exact.exact()
        )
        .map_err(io_err)?;
        for (k, e, x) in &per_k {
            writeln!(w, "E[C_n({k})]={} exact={}", e.exact(), x.exact()).map_err(io_err)?;
        }
    }
    w.flush().map_err(Error::Io)?;
    Ok(())
}

/// Loads `--graph` or samples from the sequence flags; returns the seed used.
fn resolve_graph(args: &GraphArgs) -> CliResult<(MultiGraph, Option<u64>)> {
    if let Some(path) = &args.graph {
        let reader = BufReader::new(File::open(path).map_err(Error::Io)?);
        let g = if args.seq.provided() {
            io::read_half_edges_with(Arc::new(args.seq.resolve()?), reader)?
        } else {
            io::read_half_edges(reader)?
        };
        return Ok((g, None));
    }
    let seq = Arc::new(args.seq.resolve()?);
    let seed = args.seed.unwrap_or_else(entropy_seed);
    Ok((sample_shared(seq, seed), Some(seed)))
}

fn source_label(g: &MultiGraph, seed: Option<u64>) -> String {
    match seed {
        Some(s) => format!("seed={s} degrees={}", counts_label(g.seq())),
        None => format!("degrees={}", counts_label(g.seq())),
    }
}

fn cmd_kernel(
    args: &GraphArgs,
    format: Format,
    out: &Option<PathBuf>,
    backmap: &Option<PathBuf>,
) -> CliResult<()> {
    check_format(
        "kernel",
        format,
        &[Format::Edges, Format::Halfedges, Format::Dot, Format::Json],
    )?;
    let (g, seed) = resolve_graph(args)?;
    let k = contract(&g);
    let mut w = output(out)?;
    if format == Format::Json {
        let doc = json!({
            "version": VERSION,
            "command": "kernel",
            "config": { "counts": g.seq().counts(), "seed": seed },
            "kernel": graph_json(&k.graph),
            "back_map": k.back_map,
            "dropped_cycles": k.dropped_cycles,
        });
        serde_json::to_writer(&mut w, &doc).map_err(Error::Json)?;
        writeln!(w).map_err(Error::Io)?;
    } else {
        header(
            &mut *w,
            format,
            &format!(
                "kernel {} dropped_cycles={}",
                source_label(&g, seed),
                k.dropped_cycles
            ),
        )?;
        write_graph(&mut *w, &k.graph, format)?;
    }
    w.flush().map_err(Error::Io)?;
    if let Some(path) = backmap {
        let mut b = BufWriter::new(File::create(path).map_err(Error::Io)?);
        io::write_back_map(&k.back_map, &mut b)?;
        b.flush().map_err(Error::Io)?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_explore(
    seq: &SeqArgs,
    seed: Option<u64>,
    start: Option<u32>,
    start_degree: Option<u32>,
    lazy: bool,
    cap: Option<u64>,
    count: u64,
    format: Format,
    out: &Option<PathBuf>,
) -> CliResult<()> {
    check_format("explore", format, &[Format::Json, Format::Csv])?;
    if start.is_none() && start_degree.is_none() {
        return Err(usage("one of --start or --start-degree is required"));
    }
    if count == 0 {
        return Err(usage("--count must be at least 1"));
    }
    let seq = Arc::new(seq.resolve()?);
    let seed = seed.unwrap_or_else(entropy_seed);
    let traces = (0..count)
        .map(|i| {
            let s = if count == 1 {
                seed
            } else {
                replicate_seed(seed, 0, i)
            };
            let v = match (start, start_degree) {
                (Some(v), _) => v as usize,
                (None, Some(d)) => uniform_start(&seq, d, splitmix64(s)).ok_or(Error::Domain(
                    almost2::core::Error::InvalidDegree {
                        degree: d as u64,
                        reason: "no vertex of this degree",
                    },
                ))?,
                (None, None) => unreachable!(),
            };
            let t = if lazy {
                explore_lazy(&seq, v, s, cap.unwrap_or(u64::MAX))?
            } else {
                explore(&sample_shared(Arc::clone(&seq), s), v)?
            };
            Ok((s, t))
        })
        .collect::<CliResult<Vec<(u64, ExplorationTrace)>>>()?;
    let mode = if lazy { "lazy" } else { "eager" };
    let mut w = output(out)?;
    match format {
        Format::Json => {
            // one record per line, each carrying its own seed
            for (s, t) in &traces {
                let mut record = serde_json::to_value(t).map_err(Error::Json)?;
                let obj = record.as_object_mut().expect("trace is an object");
                obj.insert("version".into(), json!(VERSION));
                obj.insert("seed".into(), json!(s));
                obj.insert("mode".into(), json!(mode));
                obj.insert("counts".into(), json!(seq.counts()));
                writeln!(w, "{record}").map_err(Error::Io)?;
            }
        }
        _ => {
            header(
                &mut *w,
                format,
                &format!(
                    "explore seed={seed} degrees={} mode={mode} count={count}",
                    counts_label(&seq)
                ),
            )?;
            let mut c = csv::Writer::from_writer(&mut w);
            c.write_record([
                "seed",
                "start",
                "start_degree",
                "steps",
                "t_ne2",
                "t_cycle",
                "outcome",
                "component_size",
                "max_active",
                "truncated",
            ])
            .map_err(Error::Csv)?;
            let opt = |x: Option<u64>| x.map(|v| v.to_string()).unwrap_or_default();
            for (s, t) in &traces {
                c.write_record([
                    s.to_string(),
                    t.start.to_string(),
                    t.start_degree.to_string(),
                    t.steps.to_string(),
                    opt(t.t_ne2),
                    opt(t.t_cycle),
                    format!("{:?}", t.outcome),
                    t.component_size.to_string(),
                    t.max_active.to_string(),
                    t.truncated.to_string(),
                ])
                .map_err(Error::Csv)?;
            }
            c.flush().map_err(Error::Io)?;
        }
    }
    w.flush().map_err(Error::Io)?;
    Ok(())
}

enum Value {
    Real(f64),
    Exact(Rational),
}

fn cmd_theory(what: &TheoryCommand, format: Format) -> CliResult<()> {
    let mut w = output(&None)?;
    if let TheoryCommand::Table {
        function,
        from,
        to,
        steps,
    } = what
    {
        check_format("theory table", format, &[Format::Csv, Format::Kv])?;
        if !(*from > 0.0 && to > from) || *steps == 0 {
            return Err(
                Error::Domain(almost2::core::Error::BadInterval { lo: *from, hi: *to }).into(),
            );
        }
        let name = match function {
            TableFunction::Lambda => "lambda",
            TableFunction::CdfY2 => "cdf_y2",
            TableFunction::CycleCountCdf => "cycle_count_cdf",
            TableFunction::PoissonTail => "poisson_mean_tail",
        };
        let mut c = csv::Writer::from_writer(&mut w);
        c.write_record(["a", name]).map_err(Error::Csv)?;
        for i in 0..=*steps {
            let a = from + (to - from) * i as f64 / *steps as f64;
            let v = match function {
                TableFunction::Lambda => theory::lambda_intensity(a)?,
                TableFunction::CdfY2 => theory::cdf_y2(a)?,
                TableFunction::CycleCountCdf => theory::cycle_count_cdf(a)?,
                TableFunction::PoissonTail => theory::poisson_mean(a, f64::INFINITY)?,
            };
            c.write_record([a.to_string(), v.to_string()])
                .map_err(Error::Csv)?;
        }
        c.flush().map_err(Error::Io)?;
        drop(c);
        w.flush().map_err(Error::Io)?;
        return Ok(());
    }
    check_format("theory", format, &[Format::Kv, Format::Json])?;
    let (name, value) = match what {
        TheoryCommand::Lambda { t } => ("lambda", Value::Real(theory::lambda_intensity(*t)?)),
        TheoryCommand::PoissonMean { a, t, quadrature } => {
            let v = if *quadrature {
                theory::poisson_mean_quadrature(*a, *t, &TheoryConfig::default())?
            } else {
                theory::poisson_mean(*a, *t)?
            };
            ("poisson_mean", Value::Real(v))
        }
        TheoryCommand::CdfY2 { a, e1 } => {
            let m = match e1 {
                E1Choice::Series => E1Method::Series,
                E1Choice::ContinuedFraction => E1Method::ContinuedFraction,
                E1Choice::Auto => E1Method::Auto,
            };
            ("cdf_y2", Value::Real(theory::cdf_y2_with(*a, m)?))
        }
        TheoryCommand::CycleCountCdf { a } => {
            ("cycle_count_cdf", Value::Real(theory::cycle_count_cdf(*a)?))
        }
        TheoryCommand::CycleCountPoissonMean { a, t } => (
            "cycle_count_poisson_mean",
            Value::Real(theory::cycle_count_poisson_mean(*a, *t)?),
        ),
        TheoryCommand::ExpectedCyclic { seq } => (
            "expected_cyclic_vertices",
            Value::Exact(Rational(theory::expected_cyclic_vertices(&seq.resolve()?))),
        ),
        TheoryCommand::ExpectedCycleCount { seq, k } => (
            "expected_cycle_count",
            Value::Exact(Rational(theory::expected_cycle_count(&seq.resolve()?, *k)?)),
        ),
        TheoryCommand::LineSurvival { seq, k } => (
            "line_survival",
            Value::Exact(Rational(theory::line_survival(&seq.resolve()?, *k)?)),
        ),
        TheoryCommand::LowerPrediction { n, n1 } => (
            "lower_prediction",
            Value::Real(theory::lower_regime_prediction(*n, *n1)?),
        ),
        TheoryCommand::Table { .. } => unreachable!(),
    };
    let io_err = |e| Failure::from(Error::Io(e));
    match (format, &value) {
        (Format::Json, Value::Real(v)) => writeln!(
            w,
            "{}",
            json!({ "version": VERSION, "quantity": name, "value": v })
        )
        .map_err(io_err)?,
        (Format::Json, Value::Exact(r)) => writeln!(
            w,
            "{}",
            json!({ "version": VERSION, "quantity": name, "exact": r.exact(), "value": r.approx() })
        )
        .map_err(io_err)?,
        (_, Value::Real(v)) => writeln!(w, "{v}").map_err(io_err)?,
        (_, Value::Exact(r)) => writeln!(w, "{} {}", r.exact(), r.approx()).map_err(io_err)?,
    }
    w.flush().map_err(Error::Io)?;
    Ok(())
}

fn cmd_experiment(
    config: &Path,
    seed: u64,
    out: &Path,
    workers: Option<usize>,
    replicates: Option<u64>,
    replicate_offset: Option<u64>,
) -> CliResult<()> {
    let text = std::fs::read_to_string(config).map_err(Error::Io)?;
    let mut value: serde_json::Value = serde_json::from_str(&text).map_err(Error::Json)?;
    let obj = value
        .as_object_mut()
        .ok_or_else(|| Error::Config("config must be a JSON object".into()))?;
    obj.insert("master_seed".into(), json!(seed));
    if let Some(r) = replicates {
        obj.insert("replicates".into(), json!(r));
    }
    if let Some(o) = replicate_offset {
        obj.insert("replicate_offset".into(), json!(o));
    }
    let cfg: ExperimentConfig = serde_json::from_value(value).map_err(Error::Json)?;
    if workers == Some(0) {
        return Err(usage("--workers must be at least 1"));
    }
    let result = montecarlo::run(&cfg, workers)?;
    let written = montecarlo::write_outputs(&result, out)?;
    let mut w = output(&None)?;
    for p in written {
        writeln!(w, "{}", p.display()).map_err(Error::Io)?;
    }
    w.flush().map_err(Error::Io)?;
    Ok(())
}

fn cmd_report(args: &GraphArgs, format: Format, out: &Option<PathBuf>) -> CliResult<()> {
    check_format("report", format, &[Format::Kv, Format::Json])?;
    let (g, seed) = resolve_graph(args)?;
    let report = analyze(&g);
    let mut w = output(out)?;
    if format == Format::Json {
        let doc = json!({
            "version": VERSION,
            "command": "report",
            "config": { "counts": g.seq().counts(), "seed": seed },
            "report": report,
        });
        serde_json::to_writer_pretty(&mut w, &doc).map_err(Error::Json)?;
        writeln!(w).map_err(Error::Io)?;
    } else {
        header(
            &mut *w,
            format,
            &format!("report {}", source_label(&g, seed)),
        )?;
        io::write_report_kv(&report, &mut w)?;
    }
    w.flush().map_err(Error::Io)?;
    Ok(())
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match &cli.command {
        Command::Sample {
            seq,
            seed,
            format,
            out,
        } => cmd_sample(seq, *seed, *format, out),
        Command::Enumerate { seq, format, out } => cmd_enumerate(seq, *format, out),
        Command::Kernel {
            graph,
            format,
            out,
            backmap,
        } => cmd_kernel(graph, *format, out, backmap),
        Command::Explore {
            seq,
            seed,
            start,
            start_degree,
            lazy,
            cap,
            count,
            format,
            out,
        } => cmd_explore(
            seq,
            *seed,
            *start,
            *start_degree,
            *lazy,
            *cap,
            *count,
            *format,
            out,
        ),
        Command::Theory { what, format } => cmd_theory(what, *format),
        Command::Experiment {
            config,
            seed,
            out,
            workers,
            replicates,
            replicate_offset,
        } => cmd_experiment(config, *seed, out, *workers, *replicates, *replicate_offset),
        Command::Report { graph, format, out } => cmd_report(graph, *format, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(Error::Io(e))) if e.kind() == std::io::ErrorKind::BrokenPipe => {
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("{}", json!({ "error": e.kind(), "message": e.to_string() }));
            ExitCode::from(1)
        }
    }
}
