use almost2::core::components::{analyze, deficiency};
use almost2::core::rng::replicate_seed;
use almost2::core::sampler::sample;
use almost2::core::DegreeSequence;
use almost2::montecarlo::{self, ExperimentConfig, RegimeSpec};
use serde_json::json;

fn config(value: serde_json::Value) -> ExperimentConfig {
    serde_json::from_value(value).unwrap()
}

fn small_upper(replicates: u64, offset: u64) -> ExperimentConfig {
    config(json!({
        "family": {
            "regime": { "kind": "upper", "degree": 3 },
            "n_grid": [1600, 3600],
            "count": { "kind": "power", "coefficient": 1.0, "exponent": 0.5 }
        },
        "replicates": replicates,
        "replicate_offset": offset,
        "master_seed": 99,
        "statistics": {
            "deficiency": true,
            "second_component": true,
            "cyclic_vertices": true,
            "s_windows": [{ "a": 0.2, "t": 2.0 }, { "a": 0.5, "t": 1.0 }],
            "factorial_orders": [1, 2, 3],
            "line_quantiles": [0.5],
            "top_components": 3
        }
    }))
}

#[test]
fn single_replicate_deficiency() {
    let cfg = config(json!({
        "family": {
            "regime": { "kind": "upper", "degree": 3 },
            "n_grid": [4],
            "count": { "kind": "fixed", "value": 2 }
        },
        "replicates": 1,
        "master_seed": 5,
        "statistics": { "deficiency": true }
    }));
    let res = montecarlo::run(&cfg, None).unwrap();
    assert_eq!(res.records.len(), 1);
    let rec = &res.records[0];
    let seq = DegreeSequence::build_upper(2, &[(3, 2)].into_iter().collect()).unwrap();
    assert_eq!(rec.seed, replicate_seed(5, 0, 0));
    let direct = deficiency(&analyze(&sample(&seq, rec.seed)));
    assert_eq!(rec.deficiency, Some(direct));
    let agg = res.aggregates[0].deficiency.as_ref().unwrap();
    assert_eq!(agg.estimate.mean, direct as f64);
    assert!((agg.expected - 2.0 / 7.0).abs() < 1e-15);
}

#[test]
fn worker_count_does_not_change_results() {
    let cfg = small_upper(40, 0);
    let one = montecarlo::run(&cfg, Some(1)).unwrap();
    let four = montecarlo::run(&cfg, Some(4)).unwrap();
    let pool = montecarlo::run(&cfg, None).unwrap();
    let a = serde_json::to_string(&one).unwrap();
    assert_eq!(a, serde_json::to_string(&four).unwrap());
    assert_eq!(a, serde_json::to_string(&pool).unwrap());
}

#[test]
fn output_files_are_byte_identical() {
    let cfg = small_upper(25, 0);
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let f1 =
        montecarlo::write_outputs(&montecarlo::run(&cfg, Some(2)).unwrap(), d1.path()).unwrap();
    let f2 =
        montecarlo::write_outputs(&montecarlo::run(&cfg, Some(3)).unwrap(), d2.path()).unwrap();
    assert_eq!(f1.len(), 2 + 2 * 2);
    for (p, q) in f1.iter().zip(&f2) {
        assert_eq!(p.file_name(), q.file_name());
        assert_eq!(
            std::fs::read(p).unwrap(),
            std::fs::read(q).unwrap(),
            "{p:?}"
        );
    }
    let overlay = f1
        .iter()
        .find(|p| p.to_string_lossy().contains("overlay_cdf_y2_n1600"))
        .unwrap();
    let text = std::fs::read_to_string(overlay).unwrap();
    assert_eq!(text.lines().next(), Some("a,empirical,theoretical"));
    let last = text.lines().last().unwrap();
    assert_eq!(last.split(',').nth(1), Some("1"));
}

#[test]
fn record_and_sample_sizes() {
    let cfg = small_upper(30, 0);
    let res = montecarlo::run(&cfg, None).unwrap();
    assert_eq!(res.records.len(), 60);
    for agg in &res.aggregates {
        assert_eq!(agg.replicates, 30);
        assert_eq!(agg.second_component.as_ref().unwrap().ecdf.len(), 30);
        assert_eq!(agg.s_windows.len(), 2);
        assert_eq!(agg.s_windows[0].factorial_moments.len(), 3);
        assert_eq!(agg.top_components.len(), 3);
    }
    assert_eq!(res.aggregates[0].ell_ne2, 3 * 40);
    assert_eq!(res.metadata.config_hash, cfg.hash());
    assert_eq!(res.metadata.generator, almost2::core::rng::GENERATOR_NAME);
    let order: Vec<(usize, u64)> = res
        .records
        .iter()
        .map(|r| (r.grid_index, r.replicate))
        .collect();
    let mut sorted = order.clone();
    sorted.sort_unstable();
    assert_eq!(order, sorted);
}

#[test]
fn merge_equals_single_run() {
    let whole = montecarlo::run(&small_upper(30, 0), None).unwrap();
    let head = montecarlo::run(&small_upper(12, 0), None).unwrap();
    let tail = montecarlo::run(&small_upper(18, 12), None).unwrap();
    let merged = montecarlo::merge(&tail, &head).unwrap();
    assert_eq!(
        serde_json::to_string(&merged).unwrap(),
        serde_json::to_string(&whole).unwrap()
    );
}

#[test]
fn merge_rejects_mismatches() {
    let a = montecarlo::run(&small_upper(5, 0), None).unwrap();
    let gap = montecarlo::run(&small_upper(5, 6), None).unwrap();
    assert_eq!(montecarlo::merge(&a, &gap).unwrap_err().kind(), "Merge");
    let overlap = montecarlo::run(&small_upper(5, 3), None).unwrap();
    assert!(montecarlo::merge(&a, &overlap).is_err());
    let mut other = small_upper(5, 5);
    other.master_seed = 1;
    let b = montecarlo::run(&other, None).unwrap();
    assert!(montecarlo::merge(&a, &b).is_err());
}

#[test]
fn invalid_configs() {
    let mut cfg = small_upper(0, 0);
    assert_eq!(montecarlo::run(&cfg, None).unwrap_err().kind(), "Config");
    cfg.replicates = 1;
    cfg.family.n_grid.clear();
    assert!(montecarlo::run(&cfg, None).is_err());
    let mut cfg = small_upper(1, 0);
    cfg.family.regime = RegimeSpec::Upper { degree: 2 };
    assert_eq!(
        montecarlo::run(&cfg, None).unwrap_err().kind(),
        "InvalidDegree"
    );
    let odd = config(json!({
        "family": {
            "regime": { "kind": "upper", "degree": 3 },
            "n_grid": [100],
            "count": { "kind": "fixed", "value": 3 }
        },
        "replicates": 1,
        "master_seed": 0
    }));
    assert_eq!(
        montecarlo::run(&odd, None).unwrap_err().kind(),
        "OddTotalDegree"
    );
    let unknown = serde_json::from_value::<ExperimentConfig>(json!({
        "family": { "regime": { "kind": "lower" }, "n_grid": [10], "count": { "kind": "fixed", "value": 2 } },
        "replicates": 1, "master_seed": 0, "bogus": 1
    }));
    assert!(unknown.is_err());
}

#[test]
fn fig1_shape() {
    let cfg = config(json!({
        "family": {
            "regime": { "kind": "upper", "degree": 3 },
            "n_grid": [10000],
            "count": { "kind": "fixed", "value": 30 }
        },
        "replicates": 20,
        "master_seed": 7,
        "statistics": { "deficiency": true, "cyclic_vertices": true, "top_components": 2 }
    }));
    let res = montecarlo::run(&cfg, None).unwrap();
    for r in &res.records {
        assert!(r.top_sizes[0] > 5 * r.top_sizes[1], "{:?}", r.top_sizes);
        assert!(r.deficiency.unwrap() < 3000);
    }
    let agg = &res.aggregates[0];
    assert!((agg.cyclic_vertices.as_ref().unwrap().expected - 9970.0 / 91.0).abs() < 1e-9);
}

#[test]
fn lower_family_records_lines() {
    let cfg = config(json!({
        "family": {
            "regime": { "kind": "lower" },
            "n_grid": [3000],
            "count": { "kind": "fixed", "value": 20 }
        },
        "replicates": 10,
        "master_seed": 3,
        "statistics": { "line_quantiles": [0.0, 1.0], "top_components": 1 }
    }));
    let res = montecarlo::run(&cfg, None).unwrap();
    for r in &res.records {
        assert!(r.line_quantiles[0] <= r.line_quantiles[1]);
        assert!(r.line_quantiles[1] <= r.top_sizes[0]);
    }
}

#[test]
fn quantiles_and_p_values() {
    let v = [1.0, 2.0, 3.0, 4.0];
    assert_eq!(montecarlo::quantile(&v, 0.0), 1.0);
    assert_eq!(montecarlo::quantile(&v, 0.5), 2.5);
    assert_eq!(montecarlo::quantile(&v, 1.0), 4.0);
    assert!((montecarlo::chi_square_p_value(3.841_458_820_694_124, 1) - 0.05).abs() < 1e-9);
    assert_eq!(montecarlo::chi_square_p_value(0.0, 3), 1.0);
}

#[test]
fn ks_reexports() {
    assert_eq!(montecarlo::ks_distance(&[0.5], &|x: f64| x).unwrap(), 0.5);
    assert_eq!(montecarlo::factorial_moment(&[2, 2], 2), 2.0);
    let e = montecarlo::Ecdf::new(vec![0.3, 0.1, 0.1]);
    assert_eq!(montecarlo::ks_distance(e.sample(), &e).unwrap(), 0.0);
}
