//! Subcommand implementations.

use std::path::Path;

use ditec_core::learn::{greedy_fss, kfold_plan};
use ditec_core::pipeline::{
    analyze_mask, bench, extract_features, ingest, load_dataset, read_cache, run_evaluation,
    with_thread_budget, FssOptions, PipelineConfig, REFERENCE_MASK_SWEEP,
};
use ditec_core::preproc::ImagePlanes;
use ditec_core::trace::render_mask_table;
use ditec_core::Error;

use crate::options::{Cli, Command};

/// Maps library errors onto the documented exit codes.
pub trait ExitMapping {
    fn exit_code(&self) -> u8;
}

impl ExitMapping for Error {
    fn exit_code(&self) -> u8 {
        match self {
            Error::Contract(_) => 1,
            Error::Data(_) | Error::Io(_) => 2,
        }
    }
}

pub fn run(cli: Cli) -> Result<(), Error> {
    let config = cli.overrides.resolve()?;
    match cli.command {
        Command::Ingest { root, out } => cmd_ingest(&root, out.as_deref()),
        Command::Extract { root, strict } => cmd_extract(&config, &root, strict),
        Command::Evaluate {
            out_dir,
            fss,
            patience,
        } => cmd_evaluate(&config, &out_dir, fss.then_some(FssOptions { patience })),
        Command::Fss { out_dir, patience } => cmd_fss(&config, &out_dir, patience),
        Command::Mask {
            width,
            height,
            rows,
        } => cmd_mask(width, height, rows.as_deref()),
        Command::Bench {
            image,
            width,
            height,
            sweep,
            points,
            runs,
        } => cmd_bench(&config, image.as_deref(), width, height, sweep.as_deref(), points.as_deref(), runs),
        Command::ExportGraph {
            confusion,
            dot,
            edges,
        } => cmd_export_graph(&confusion, &dot, &edges),
    }
}

fn cmd_ingest(root: &Path, out: Option<&Path>) -> Result<(), Error> {
    let report = ingest(root)?;
    for warning in &report.warnings {
        eprintln!("warning: {warning}");
    }
    println!("{} images in {} classes", report.manifest.len(), report.manifest.class_counts().len());
    for (class, count) in report.manifest.class_counts() {
        println!("{count:>8}  {class}");
    }
    if let Some(path) = out {
        let mut w = String::from("image,class\n");
        for entry in &report.manifest.entries {
            w.push_str(&format!("{},{}\n", entry.path.display(), entry.class));
        }
        std::fs::write(path, w)?;
        println!("manifest written to {}", path.display());
    }
    Ok(())
}

fn cmd_extract(config: &PipelineConfig, root: &Path, strict: bool) -> Result<(), Error> {
    let report = ingest(root)?;
    for warning in &report.warnings {
        eprintln!("warning: {warning}");
    }
    let summary = extract_features(&report.manifest, config, strict)?;
    for failure in &summary.failures {
        eprintln!("warning: {failure}");
    }
    println!(
        "{} computed, {} reused, {} failed -> {}",
        summary.computed,
        summary.reused,
        summary.failures.len(),
        config.cache_path.display()
    );
    Ok(())
}

fn cmd_evaluate(
    config: &PipelineConfig,
    out_dir: &Path,
    fss: Option<FssOptions>,
) -> Result<(), Error> {
    let outputs = run_evaluation(config, out_dir, fss)?;
    println!("accuracy: {:.4}", outputs.accuracy);
    println!("confusion matrix: {}", outputs.confusion_csv.display());
    println!("per-class metrics: {}", outputs.metrics_csv.display());
    println!("graph: {} / {}", outputs.graph_dot.display(), outputs.edges_csv.display());
    if let Some(path) = outputs.fss_csv {
        println!("fss trace: {}", path.display());
    }
    Ok(())
}

fn cmd_fss(config: &PipelineConfig, out_dir: &Path, patience: usize) -> Result<(), Error> {
    let cache = read_cache(&config.cache_path)?;
    let data = load_dataset(&cache)?;
    let plan = kfold_plan(data.n_instances(), config.folds, config.seed)?;
    let trace = with_thread_budget(config.threads, || {
        greedy_fss(&data, config.classifier, &plan, patience)
    })?;
    std::fs::create_dir_all(out_dir)?;
    let path = out_dir.join("fss_trace.csv");
    trace.write_csv(&data.attribute_names, std::fs::File::create(&path)?)?;
    for (i, step) in trace.steps.iter().enumerate() {
        println!(
            "step {:>3}: + {} -> accuracy {:.4}{}",
            i + 1,
            data.attribute_names[step.attribute],
            step.accuracy,
            if step.improved { "" } else { "  (no improvement)" }
        );
    }
    println!(
        "selected {} attributes, best accuracy {:.4} -> {}",
        trace.best_subset().len(),
        trace.best_accuracy(),
        path.display()
    );
    Ok(())
}

fn cmd_mask(width: usize, height: usize, rows: Option<&str>) -> Result<(), Error> {
    let triples: Vec<(usize, usize, usize)> = match rows {
        None => REFERENCE_MASK_SWEEP.to_vec(),
        Some(text) => text
            .split(';')
            .map(|row| {
                let parts: Vec<usize> = row
                    .split(',')
                    .map(|p| p.trim().parse::<usize>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| Error::Contract(format!("bad --rows triple `{row}`")))?;
                match parts[..] {
                    [a, b, c] => Ok((a, b, c)),
                    _ => Err(Error::Contract(format!("bad --rows triple `{row}`"))),
                }
            })
            .collect::<Result<_, Error>>()?,
    };
    let results = analyze_mask(&triples, width, height)?;
    print!("{}", render_mask_table(&results));
    Ok(())
}

fn cmd_bench(
    config: &PipelineConfig,
    image: Option<&Path>,
    width: usize,
    height: usize,
    sweep: Option<&str>,
    points: Option<&str>,
    runs: usize,
) -> Result<(), Error> {
    match sweep {
        Some(axis) => {
            let axis = bench::SweepAxis::parse(axis)?;
            let values: Vec<usize> = match points {
                Some(text) => text
                    .split(',')
                    .map(|p| p.trim().parse::<usize>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| Error::Contract(format!("bad --points `{text}`")))?,
                None => match axis {
                    bench::SweepAxis::NXi => vec![50, 100, 150, 200, 250],
                    _ => vec![16, 32, 48, 64, 80],
                },
            };
            let points = with_thread_budget(config.threads, || {
                bench::bench_sweep(&config.trace, width, height, axis, &values, runs)
            })?;
            print!("{}", bench::render_sweep_table(axis, &points));
            let fit_points: Vec<(f64, f64)> = points
                .iter()
                .map(|p| (p.work as f64, p.median_ms))
                .collect();
            let (slope, intercept, r2) = bench::linear_fit(&fit_points);
            println!(
                "time vs work: {:.3e} ms/sample + {:.3} ms, r2 = {:.4}",
                slope, intercept, r2
            );
        }
        None => {
            let rgb = match image {
                Some(path) => {
                    let decoded = image::open(path)
                        .map_err(|e| Error::Data(format!("decode `{}`: {e}", path.display())))?
                        .to_rgb8();
                    ImagePlanes::from_rgb8(
                        decoded.width() as usize,
                        decoded.height() as usize,
                        decoded.as_raw(),
                    )?
                }
                None => bench::synthetic_image(width, height),
            };
            let timings = with_thread_budget(config.threads, || {
                bench::bench_stages(config, &rgb, runs)
            })?;
            print!("{}", bench::render_timing_table(&timings));
        }
    }
    Ok(())
}

fn cmd_export_graph(confusion: &Path, dot: &Path, edges: &Path) -> Result<(), Error> {
    let cm = ditec_core::learn::ConfusionMatrix::read_csv(
        std::fs::File::open(confusion)
            .map_err(|e| Error::Data(format!("open `{}`: {e}", confusion.display())))?,
    )?;
    std::fs::write(dot, ditec_core::learn::metrics::graph_to_dot(&cm))?;
    ditec_core::learn::metrics::write_edge_list(&cm, std::fs::File::create(edges)?)?;
    println!(
        "{} nodes, {} edges -> {} / {}",
        cm.class_names.len(),
        ditec_core::learn::metrics::misclassification_graph(&cm).len(),
        dot.display(),
        edges.display()
    );
    Ok(())
}
