//! Acceptance suite: one test per published criterion, each printing a
//! PASS line (run with `--nocapture` to see them all).
//!
//! Criteria that depend on wall-clock time or heavy parallel work take a
//! global lock so they never contend with each other.

mod common;

use std::path::PathBuf;
use std::sync::Mutex;

use ndarray::Array2;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use ditec_core::descriptor::{
    assemble_descriptor, compress_channel, dct2, diagonal_bins, mu_kurtosis, n_bins,
};
use ditec_core::learn::{
    cross_validate, greedy_fss, kfold_plan, ClassifierSpec, Dataset,
};
use ditec_core::pipeline::{
    analyze_mask, bench, extract_features, ingest, run_evaluation, with_thread_budget,
    PipelineConfig, REFERENCE_MASK_SWEEP,
};
use ditec_core::preproc::{gaussian_kernel, hsv_stats, lowpass, rgb_to_hsv, rgb_to_ycbcr};
use ditec_core::trace::{
    chord, sample_plane, trace_transform, Channel, Functional, Interpolation, PhiRange,
    TraceParams,
};

static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> std::sync::MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

fn pass(id: &str, detail: String) {
    println!("ACCEPTANCE {id}: PASS - {detail}");
}

fn params(
    n_phi: usize,
    n_rho: usize,
    n_xi: usize,
    functional: Functional,
) -> TraceParams {
    TraceParams::new(n_phi, n_rho, n_xi, PhiRange::Full, functional, 2.0, 0.5).unwrap()
}

#[test]
fn criterion_01_dimensionality_arithmetic() {
    let _guard = serial();
    let start = std::time::Instant::now();
    let mut config = PipelineConfig::default();
    config.trace = params(71, 71, 16, Functional::If2);
    let rgb = common::natural_image(32, 32, 1);

    let kernel = gaussian_kernel(config.kernel_size, config.kernel_sigma).unwrap();
    let filtered = lowpass(&rgb_to_ycbcr(&rgb).unwrap(), &kernel).unwrap();
    let mut cells = 0usize;
    let mut channels: [Vec<f64>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for (idx, channel) in Channel::ALL.into_iter().enumerate() {
        let sino = trace_transform(filtered.plane(idx), &config.trace, channel);
        cells += sino.values.len();
        channels[idx] = compress_channel(&dct2(&sino.values));
    }
    assert_eq!(cells, 15_123);

    let hsv = hsv_stats(&rgb_to_hsv(&rgb).unwrap()).unwrap();
    assert_eq!(n_bins(71, 71), 101);
    let full = assemble_descriptor(&channels, &hsv, [202, 202, 202]).unwrap();
    assert_eq!(full.len(), 606);
    let truncated = assemble_descriptor(&channels, &hsv, [104, 60, 60]).unwrap();
    assert_eq!(truncated.len(), 224);

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    pass(
        "01 dimensionality",
        format!("15123 cells, 606 full, 224 truncated ({elapsed:?})"),
    );
}

#[test]
fn criterion_02_if2_amplitude_invariance() {
    let _guard = serial();
    let p = params(16, 16, 32, Functional::If2);
    let gamma_exp = p.q() * p.r();
    let mut checked = 0usize;
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let plane = Array2::from_shape_fn((64, 64), |_| rng.random::<f64>());
        let base = trace_transform(&plane, &p, Channel::Y);
        for c in [0.5, 2.0, 10.0] {
            let scaled = trace_transform(&plane.mapv(|v| c * v), &p, Channel::Y);
            let gamma = f64::powf(c, gamma_exp);
            for (a, b) in base.values.iter().zip(scaled.values.iter()) {
                if *a == 0.0 {
                    assert!(b.abs() < 1e-12);
                } else {
                    let rel = ((b - gamma * a) / (gamma * a)).abs();
                    assert!(rel < 1e-6, "c={c} rel={rel}");
                }
                checked += 1;
            }
        }
    }
    pass(
        "02 if2-invariance",
        format!("{checked} entries across 20 planes and c in {{0.5, 2, 10}} within 1e-6"),
    );
}

#[test]
fn criterion_03_dct_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    for case in 0..50 {
        let n1 = rng.random_range(1..=16);
        let n2 = rng.random_range(1..=16);
        let x = Array2::from_shape_fn((n1, n2), |_| rng.random::<f64>() * 2.0 - 1.0);
        let got = dct2(&x).coeffs;
        let want = common::dct2_direct(&x);
        let norm = want.iter().map(|v| v * v).sum::<f64>().sqrt();
        for (a, b) in got.iter().zip(want.iter()) {
            assert!(
                (a - b).abs() <= 1e-9 * norm.max(1e-12),
                "case {case} ({n1}x{n2}): {a} vs {b}"
            );
        }
    }
    pass("03 dct-oracle", "50 matrices up to 16x16 within 1e-9".into());
}

#[test]
fn criterion_04_radon_micro_oracle() {
    let _guard = serial();
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut checked = 0usize;
    let mut worst: f64 = 0.0;
    for (n, p) in [
        (4usize, params(8, 4, 64, Functional::Radon)),
        (8, params(12, 8, 128, Functional::Radon)),
    ] {
        let bright = {
            let mut plane = Array2::zeros((n, n));
            plane[[n / 2, n / 2 - 1]] = 1.0;
            plane
        };
        let smooth = Array2::from_shape_fn((n, n), |_| 0.2 + 0.8 * rng.random::<f64>());
        for plane in [bright, smooth] {
            let sino = trace_transform(&plane, &p, Channel::Y);
            let rhos = p.rho_values(n, n);
            for (i, &phi) in p.phi_values().iter().enumerate() {
                for (j, &rho) in rhos.iter().enumerate() {
                    let Some((t0, t1)) = chord(phi, rho, n, n) else {
                        continue;
                    };
                    let len = t1 - t0;
                    if len <= 2.0 {
                        continue;
                    }
                    // Dense midpoint-rule integration of the interpolated
                    // field along the same chord.
                    let oracle_n = 4096usize;
                    let dt = len / oracle_n as f64;
                    let (sin, cos) = phi.sin_cos();
                    let (px, py) = (rho * cos, rho * sin);
                    let mut acc = 0.0;
                    for k in 0..oracle_n {
                        let t = t0 + (k as f64 + 0.5) * dt;
                        acc += sample_plane(
                            &plane,
                            px - t * sin,
                            py + t * cos,
                            Interpolation::Bilinear,
                        );
                    }
                    let oracle = acc * dt;
                    let got = sino.values[[i, j]];
                    // Entries below 1e-3 are grazing lines whose relative
                    // error is meaningless; they must still agree absolutely.
                    if oracle.abs() > 1e-3 {
                        let rel = ((got - oracle) / oracle).abs();
                        worst = worst.max(rel);
                        assert!(rel <= 0.02, "{n}x{n} phi={phi} rho={rho}: rel {rel}");
                        checked += 1;
                    } else {
                        assert!((got - oracle).abs() < 1e-3);
                    }
                }
            }
        }
    }
    pass(
        "04 radon-oracle",
        format!("{checked} chords > 2 px within 2% (worst {worst:.4})"),
    );
}

#[test]
fn criterion_05_mask_regime_and_monotonicity() {
    let _guard = serial();
    let start = std::time::Instant::now();
    let results = analyze_mask(&REFERENCE_MASK_SWEEP, 384, 256).unwrap();

    let expectations = [(64usize, 64usize, 185usize, 93.40, 7.71), (5, 300, 251, 99.18, 3.83)];
    for (n_phi, n_rho, n_xi, cov, mean) in expectations {
        let (_, _, _, m) = results
            .iter()
            .find(|(a, b, c, _)| (*a, *b, *c) == (n_phi, n_rho, n_xi))
            .expect("row in sweep");
        assert!(
            (m.coverage_pct - cov).abs() <= 3.0,
            "({n_phi},{n_rho},{n_xi}) coverage {} vs {cov}",
            m.coverage_pct
        );
        assert!(
            (m.mean_repetition - mean).abs() <= 0.15 * mean,
            "({n_phi},{n_rho},{n_xi}) mean {} vs {mean}",
            m.mean_repetition
        );
    }

    // Coverage never decreases as n_xi grows within a (n_phi, n_rho) group.
    let mut groups: std::collections::BTreeMap<(usize, usize), Vec<(usize, f64)>> =
        Default::default();
    for (n_phi, n_rho, n_xi, m) in &results {
        groups
            .entry((*n_phi, *n_rho))
            .or_default()
            .push((*n_xi, m.coverage_pct));
    }
    for ((n_phi, n_rho), mut rows) in groups {
        rows.sort_by_key(|r| r.0);
        for w in rows.windows(2) {
            assert!(
                w[1].1 >= w[0].1,
                "coverage dropped for ({n_phi},{n_rho}): {:?}",
                w
            );
        }
    }
    pass(
        "05 mask-regime",
        format!(
            "coverage within 3 pts, mean within 15%, coverage monotone in n_xi ({:?})",
            start.elapsed()
        ),
    );
}

#[test]
fn criterion_06_kurtosis_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    for _ in 0..1000 {
        let len = rng.random_range(2..64);
        let values: Vec<f64> = (0..len).map(|_| rng.random::<f64>() * 10.0 - 5.0).collect();
        let (mu, k) = mu_kurtosis(&values).unwrap();
        let (mu_ref, k_ref) = common::kurtosis_direct(&values);
        assert!((mu - mu_ref).abs() <= 1e-9 * mu_ref.abs().max(1.0));
        assert!((k - k_ref).abs() <= 1e-9 * k_ref.abs().max(1.0));
    }
    let (_, k) = mu_kurtosis(&[0.0, 0.0, 0.0, 1.0]).unwrap();
    assert!((k - 7.0 / 3.0).abs() < 1e-12);
    pass("06 kurtosis", "1000 vectors within 1e-9; [0,0,0,1] -> 7/3".into());
}

#[test]
fn criterion_07_leptokurtic_bins() {
    let _guard = serial();
    let start = std::time::Instant::now();
    let p = params(71, 71, 64, Functional::If2);
    let kernel = gaussian_kernel(3, 1.0).unwrap();
    let mut kurtoses = Vec::new();
    for seed in 0..50u64 {
        let img = common::natural_image(96, 96, seed);
        let filtered = lowpass(&rgb_to_ycbcr(&img).unwrap(), &kernel).unwrap();
        for (idx, channel) in Channel::ALL.into_iter().enumerate() {
            let sino = trace_transform(filtered.plane(idx), &p, channel);
            for bin in &diagonal_bins(&dct2(&sino.values)).bins {
                if bin.len() >= 8 {
                    kurtoses.push(mu_kurtosis(bin).unwrap().1);
                }
            }
        }
    }
    kurtoses.sort_by(f64::total_cmp);
    let median = kurtoses[kurtoses.len() / 2];
    assert!(median > 3.0, "median bin kurtosis {median}");
    pass(
        "07 leptokurtosis",
        format!(
            "median kurtosis {median:.2} over {} bins from 50 images ({:?})",
            kurtoses.len(),
            start.elapsed()
        ),
    );
}

#[test]
fn criterion_08_learning_sanity() {
    let _guard = serial();
    // Separable ten-class clusters reach perfect 10-fold accuracy.
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let n_classes = 10usize;
    let per_class = 20usize;
    let mut features = Vec::new();
    let mut labels = Vec::new();
    for class in 0..n_classes {
        let angle = std::f64::consts::TAU * class as f64 / n_classes as f64;
        let (cx, cy) = (20.0 * angle.cos(), 20.0 * angle.sin());
        for _ in 0..per_class {
            features.push(cx + rng.random::<f64>() - 0.5);
            features.push(cy + rng.random::<f64>() - 0.5);
            labels.push(class);
        }
    }
    let separable = Dataset::new(
        Array2::from_shape_vec((n_classes * per_class, 2), features).unwrap(),
        labels,
        (0..n_classes).map(|c| format!("c{c}")).collect(),
        vec!["x".into(), "y".into()],
    )
    .unwrap();
    let plan = kfold_plan(separable.n_instances(), 10, 1).unwrap();
    for spec in [ClassifierSpec::GaussianNb, ClassifierSpec::DEFAULT_SVM] {
        let cm = cross_validate(&separable, &plan, spec).unwrap();
        assert_eq!(cm.accuracy(), 1.0, "{spec:?}");
    }

    // Labels shuffled uniformly over 10 balanced classes: chance level.
    let mut rng = ChaCha8Rng::seed_from_u64(809);
    let n = 500;
    let shuffled = Dataset::new(
        Array2::from_shape_fn((n, 4), |_| rng.random::<f64>()),
        (0..n).map(|i| i % 10).collect(),
        (0..10).map(|c| format!("c{c}")).collect(),
        (0..4).map(|a| format!("x{a}")).collect(),
    )
    .unwrap();
    let plan = kfold_plan(n, 10, 2).unwrap();
    let acc = cross_validate(&shuffled, &plan, ClassifierSpec::GaussianNb)
        .unwrap()
        .accuracy();
    assert!((0.05..=0.17).contains(&acc), "chance accuracy {acc}");

    // An oracle attribute is picked first and reaches accuracy 1.
    let mut rng = ChaCha8Rng::seed_from_u64(810);
    let n = 60;
    let labels: Vec<usize> = (0..n).map(|i| i % 3).collect();
    let oracle = Dataset::new(
        Array2::from_shape_fn((n, 5), |(i, j)| {
            if j == 2 {
                labels[i] as f64
            } else {
                rng.random::<f64>()
            }
        }),
        labels,
        vec!["a".into(), "b".into(), "c".into()],
        (0..5).map(|a| format!("x{a}")).collect(),
    )
    .unwrap();
    let plan = kfold_plan(n, 10, 3).unwrap();
    let trace = greedy_fss(&oracle, ClassifierSpec::GaussianNb, &plan, 1).unwrap();
    assert_eq!(trace.steps[0].attribute, 2);
    assert_eq!(trace.steps[0].accuracy, 1.0);
    assert_eq!(trace.best_accuracy(), 1.0);

    pass(
        "08 learning-sanity",
        format!("separable 1.0, shuffled {acc:.3}, oracle attribute first"),
    );
}

#[test]
fn criterion_09_corel_end_to_end() {
    let _guard = serial();
    let root = match corel_root() {
        Some(root) => root,
        None => {
            println!(
                "ACCEPTANCE 09 corel-end-to-end: SKIPPED - dataset not present \
                 (set DITEC_COREL_DIR or place it at data/corel-1000; see README)"
            );
            return;
        }
    };
    let start = std::time::Instant::now();
    let report = ingest(&root).unwrap();
    assert!(
        report.manifest.len() >= 900,
        "expected ~1000 images, found {}",
        report.manifest.len()
    );
    let dir = tempfile::tempdir().unwrap();
    let mut config = PipelineConfig::default();
    config.cache_path = dir.path().join("corel_features.csv");
    let summary = extract_features(&report.manifest, &config, false).unwrap();
    assert!(summary.failures.is_empty(), "{:?}", summary.failures);

    let outputs = run_evaluation(&config, &dir.path().join("reports"), None).unwrap();
    assert!(
        outputs.accuracy >= 0.70,
        "10-fold accuracy {}",
        outputs.accuracy
    );

    let cm = &outputs.confusion;
    for target in ["dinosaur", "flower", "horse"] {
        let class = cm
            .class_names
            .iter()
            .position(|name| name.to_lowercase().contains(target))
            .or(match (cm.class_names.len(), target) {
                (10, "dinosaur") => Some(4),
                (10, "flower") => Some(6),
                (10, "horse") => Some(7),
                _ => None,
            })
            .unwrap_or_else(|| panic!("cannot locate the {target} class"));
        let f = cm.f_measure(class);
        assert!(f >= 0.85, "{target} f-measure {f}");
    }
    pass(
        "09 corel-end-to-end",
        format!("accuracy {:.3} ({:?})", outputs.accuracy, start.elapsed()),
    );
}

fn corel_root() -> Option<PathBuf> {
    if let Ok(dir) = std::env::var("DITEC_COREL_DIR") {
        let path = PathBuf::from(dir);
        if path.is_dir() {
            return Some(path);
        }
    }
    let fallback = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/corel-1000");
    fallback.is_dir().then_some(fallback)
}

#[test]
fn criterion_10_scaling_behavior() {
    let _guard = serial();
    let base = params(48, 48, 64, Functional::If2);
    let mut details = Vec::new();
    for (axis, values) in [
        (bench::SweepAxis::NXi, vec![50usize, 100, 150, 200, 250]),
        (bench::SweepAxis::Grid, vec![16usize, 24, 32, 40, 48]),
    ] {
        let points = with_thread_budget(1, || {
            bench::bench_sweep(&base, 128, 128, axis, &values, 9)
        })
        .unwrap();
        let fit: Vec<(f64, f64)> = points
            .iter()
            .map(|p| (p.work as f64, p.median_ms))
            .collect();
        let (_, _, r2) = bench::linear_fit(&fit);
        assert!(r2 > 0.95, "{axis:?} r2 = {r2}");
        details.push(format!("{axis:?} r2={r2:.4}"));
    }
    pass("10 scaling", details.join(", "));
}

#[test]
fn criterion_11_determinism() {
    let _guard = serial();
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    common::build_corpus(&corpus, 6);

    let run = |tag: &str, threads: usize| {
        let mut config = PipelineConfig::default();
        config.trace = params(8, 8, 16, Functional::If2);
        config.keep = [8, 4, 4];
        config.folds = 3;
        config.seed = 99;
        config.threads = threads;
        config.cache_path = dir.path().join(format!("cache_{tag}.csv"));
        let manifest = ingest(&corpus).unwrap().manifest;
        extract_features(&manifest, &config, true).unwrap();
        let out_dir = dir.path().join(format!("reports_{tag}"));
        run_evaluation(&config, &out_dir, None).unwrap();
        let mut bytes = std::fs::read(&config.cache_path).unwrap();
        for file in ["confusion.csv", "metrics.csv", "graph.dot", "graph_edges.csv"] {
            bytes.extend(std::fs::read(out_dir.join(file)).unwrap());
        }
        bytes
    };

    let a = run("a", 0);
    let b = run("b", 0);
    assert_eq!(a, b, "repeated runs must be byte-identical");
    let c = run("c", 1);
    let d = run("d", 4);
    assert_eq!(c, d, "outputs must not depend on the thread budget");
    assert_eq!(a, c);

    // Re-running on an unchanged corpus rewrites nothing.
    let mut config = PipelineConfig::default();
    config.trace = params(8, 8, 16, Functional::If2);
    config.keep = [8, 4, 4];
    config.folds = 3;
    config.seed = 99;
    config.cache_path = dir.path().join("cache_a.csv");
    let manifest = ingest(&corpus).unwrap().manifest;
    let summary = extract_features(&manifest, &config, true).unwrap();
    assert_eq!(summary.computed, 0);
    assert!(!summary.wrote);

    pass(
        "11 determinism",
        "caches and reports byte-identical across runs and thread budgets".into(),
    );
}
