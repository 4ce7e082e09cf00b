//! End-to-end runs of the `ditec` binary.

use std::path::Path;
use std::process::{Command, Output};

fn ditec(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ditec"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn build_corpus(root: &Path) {
    for (class, base) in [("dark", 20u8), ("light", 200)] {
        let dir = root.join(class);
        std::fs::create_dir_all(&dir).unwrap();
        for i in 0..6u32 {
            let img = image::RgbImage::from_fn(16, 16, |x, y| {
                let v = base.saturating_add(((x * 3 + y * 5 + i) % 16) as u8);
                image::Rgb([v, v / 2 + 10, 255 - v])
            });
            img.save(dir.join(format!("img{i}.png"))).unwrap();
        }
    }
}

const SMALL_PARAMS: &[&str] = &[
    "--nphi", "8", "--nrho", "8", "--nxi", "16", "--keep", "8,4,4", "--folds", "3",
    "--seed", "5", "--classifier", "gnb",
];

#[test]
fn full_workflow_ingest_extract_evaluate_graph() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    build_corpus(&corpus);

    let out = ditec(&["ingest", "corpus"], dir.path());
    assert!(out.status.success());
    assert!(stdout(&out).contains("12 images in 2 classes"));

    let mut extract_args = vec!["extract", "corpus"];
    extract_args.extend_from_slice(SMALL_PARAMS);
    let out = ditec(&extract_args, dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("12 computed"));
    assert!(dir.path().join("features.csv").exists());

    // Second extraction run reuses everything.
    let out = ditec(&extract_args, dir.path());
    assert!(stdout(&out).contains("0 computed, 12 reused"));

    let mut eval_args = vec!["evaluate", "--out-dir", "reports"];
    eval_args.extend_from_slice(SMALL_PARAMS);
    let out = ditec(&eval_args, dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("accuracy: 1.0000"));
    for file in ["confusion.csv", "metrics.csv", "graph.dot", "graph_edges.csv"] {
        assert!(dir.path().join("reports").join(file).exists(), "{file}");
    }

    let out = ditec(
        &["export-graph", "reports/confusion.csv", "--dot", "g.dot", "--edges", "g.csv"],
        dir.path(),
    );
    assert!(out.status.success());
    assert!(dir.path().join("g.dot").exists());

    let mut fss_args = vec!["fss", "--out-dir", "reports"];
    fss_args.extend_from_slice(SMALL_PARAMS);
    let out = ditec(&fss_args, dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("reports/fss_trace.csv").exists());
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.toml"),
        "n_phi = 8\nn_rho = 8\nn_xi = 16\nkeep = [4, 4, 4]\nseed = 1\n",
    )
    .unwrap();
    let corpus = dir.path().join("corpus");
    build_corpus(&corpus);
    let out = ditec(
        &["--config", "run.toml", "--nxi", "24", "extract", "corpus"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let cache = std::fs::read_to_string(dir.path().join("features.csv")).unwrap();
    assert!(cache.starts_with("# ditec feature cache v1\n# config_hash = "));
}

#[test]
fn exit_codes_distinguish_usage_and_data_errors() {
    let dir = tempfile::tempdir().unwrap();

    // Unknown flag: usage error.
    let out = ditec(&["--definitely-not-a-flag"], dir.path());
    assert_eq!(out.status.code(), Some(1));

    // Invalid parameter combination: usage error.
    let out = ditec(&["--nphi", "2", "mask"], dir.path());
    assert_eq!(out.status.code(), Some(1));

    // Missing corpus: data error.
    let out = ditec(&["ingest", "nonexistent"], dir.path());
    assert_eq!(out.status.code(), Some(2));

    // Missing cache: data error.
    let out = ditec(&["evaluate"], dir.path());
    assert_eq!(out.status.code(), Some(2));

    // Help exits cleanly.
    let out = ditec(&["--help"], dir.path());
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn mask_and_bench_subcommands_print_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = ditec(
        &["mask", "--width", "32", "--height", "32", "--rows", "5,8,16"],
        dir.path(),
    );
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("% pixels used"));

    let out = ditec(
        &[
            "bench", "--width", "32", "--height", "32", "--nphi", "8", "--nrho", "8",
            "--nxi", "8", "--keep", "4,4,4", "--runs", "21",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("full_descriptor"));

    let out = ditec(
        &[
            "bench", "--sweep", "nxi", "--points", "8,16,24", "--width", "32", "--height",
            "32", "--nphi", "8", "--nrho", "8", "--runs", "5",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("r2"));
}
