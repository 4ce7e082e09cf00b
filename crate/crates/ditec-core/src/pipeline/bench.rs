//! Wall-time measurement of the pipeline stages and resolution sweeps of
//! the transform kernel.

use std::time::Instant;

use ndarray::Array2;

use super::{extract::compute_descriptor, PipelineConfig};
use crate::error::Result;
use crate::preproc::ImagePlanes;
use crate::trace::{trace_transform, Channel, TraceParams};

/// Median/min/max wall time of one stage over repeated runs.
#[derive(Debug, Clone)]
pub struct StageTiming {
    pub stage: &'static str,
    pub median_ms: f64,
    pub min_ms: f64,
    pub max_ms: f64,
    pub runs: usize,
}

/// One point of a resolution sweep.
#[derive(Debug, Clone, Copy)]
pub struct SweepPoint {
    /// The varied resolution value.
    pub value: usize,
    /// Total grid work `n_phi * n_rho * n_xi` at this point.
    pub work: usize,
    pub median_ms: f64,
}

/// Which resolution a sweep varies, holding the others fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    NXi,
    NPhi,
    NRho,
    /// Square grid: n_phi = n_rho = value.
    Grid,
}

impl SweepAxis {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nxi" => Ok(SweepAxis::NXi),
            "nphi" => Ok(SweepAxis::NPhi),
            "nrho" => Ok(SweepAxis::NRho),
            "grid" => Ok(SweepAxis::Grid),
            other => Err(crate::error::Error::contract(format!(
                "unknown sweep axis `{other}` (nxi, nphi, nrho, grid)"
            ))),
        }
    }
}

/// Deterministic synthetic test plane with mixed smooth and sharp content.
pub fn synthetic_plane(width: usize, height: usize) -> Array2<f64> {
    Array2::from_shape_fn((height, width), |(j, i)| {
        let x = i as f64 / width as f64;
        let y = j as f64 / height as f64;
        let ripple = (12.0 * x).sin() * (9.0 * y).cos();
        let blob = (-((x - 0.4).powi(2) + (y - 0.6).powi(2)) / 0.02).exp();
        (0.5 + 0.25 * ripple + 0.5 * blob).clamp(0.0, 1.0)
    })
}

/// Deterministic synthetic RGB image for full-pipeline timing.
pub fn synthetic_image(width: usize, height: usize) -> ImagePlanes {
    let plane = synthetic_plane(width, height);
    let g = plane.mapv(|v| (v * 0.8 + 0.1).clamp(0.0, 1.0));
    let b = plane.mapv(|v| (1.0 - v).clamp(0.0, 1.0));
    ImagePlanes::new([plane, g, b], crate::preproc::ColorSpace::Rgb).expect("valid synthetic")
}

fn time_ms(f: &mut dyn FnMut()) -> f64 {
    let start = Instant::now();
    f();
    start.elapsed().as_secs_f64() * 1e3
}

fn stage(name: &'static str, runs: usize, mut f: impl FnMut()) -> StageTiming {
    let mut samples: Vec<f64> = (0..runs).map(|_| time_ms(&mut f)).collect();
    samples.sort_by(f64::total_cmp);
    StageTiming {
        stage: name,
        median_ms: samples[runs / 2],
        min_ms: samples[0],
        max_ms: samples[runs - 1],
        runs,
    }
}

/// Times each pipeline stage on the given image (see [`synthetic_image`]
/// when no real input is at hand).
pub fn bench_stages(
    config: &PipelineConfig,
    rgb: &ImagePlanes,
    runs: usize,
) -> Result<Vec<StageTiming>> {
    let runs = runs.max(21);
    let kernel = crate::preproc::gaussian_kernel(config.kernel_size, config.kernel_sigma)?;
    let ycbcr = crate::preproc::rgb_to_ycbcr(rgb)?;
    let filtered = crate::preproc::lowpass(&ycbcr, &kernel)?;
    let sino = trace_transform(filtered.plane(0), &config.trace, Channel::Y);

    let mut out = Vec::new();
    out.push(stage("preproc", runs, || {
        let ycbcr = crate::preproc::rgb_to_ycbcr(rgb).unwrap();
        let filtered = crate::preproc::lowpass(&ycbcr, &kernel).unwrap();
        std::hint::black_box(&filtered);
        let hsv = crate::preproc::rgb_to_hsv(rgb).unwrap();
        std::hint::black_box(crate::preproc::hsv_stats(&hsv).unwrap());
    }));
    out.push(stage("trace_per_channel", runs, || {
        std::hint::black_box(trace_transform(
            filtered.plane(0),
            &config.trace,
            Channel::Y,
        ));
    }));
    out.push(stage("dct_compress", runs, || {
        let dct = crate::descriptor::dct2(&sino.values);
        std::hint::black_box(crate::descriptor::compress_channel(&dct));
    }));
    out.push(stage("full_descriptor", runs, || {
        std::hint::black_box(compute_descriptor(rgb, config).unwrap());
    }));
    Ok(out)
}

/// Times the single-channel transform while varying one resolution axis.
/// Runs on the current thread pool; medians over `runs` repetitions.
pub fn bench_sweep(
    base: &TraceParams,
    width: usize,
    height: usize,
    axis: SweepAxis,
    values: &[usize],
    runs: usize,
) -> Result<Vec<SweepPoint>> {
    let runs = runs.max(5);
    let plane = synthetic_plane(width, height);
    let mut points = Vec::with_capacity(values.len());
    for &value in values {
        let (n_phi, n_rho, n_xi) = match axis {
            SweepAxis::NXi => (base.n_phi(), base.n_rho(), value),
            SweepAxis::NPhi => (value, base.n_rho(), base.n_xi()),
            SweepAxis::NRho => (base.n_phi(), value, base.n_xi()),
            SweepAxis::Grid => (value, value, base.n_xi()),
        };
        let params = TraceParams::new(
            n_phi,
            n_rho,
            n_xi,
            base.phi_range(),
            base.functional(),
            base.q(),
            base.r(),
        )?;
        // Warm up once so allocation and cache effects settle.
        std::hint::black_box(trace_transform(&plane, &params, Channel::Y));
        let mut samples: Vec<f64> = (0..runs)
            .map(|_| {
                let start = Instant::now();
                std::hint::black_box(trace_transform(&plane, &params, Channel::Y));
                start.elapsed().as_secs_f64() * 1e3
            })
            .collect();
        samples.sort_by(f64::total_cmp);
        points.push(SweepPoint {
            value,
            work: n_phi * n_rho * n_xi,
            median_ms: samples[runs / 2],
        });
    }
    Ok(points)
}

/// Least-squares line through `(x, y)` points: `(slope, intercept, r²)`.
pub fn linear_fit(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    (slope, intercept, r2)
}

/// Renders stage timings as an aligned text table.
pub fn render_timing_table(timings: &[StageTiming]) -> String {
    let mut out = String::from("stage                median_ms      min_ms      max_ms   runs\n");
    for t in timings {
        out.push_str(&format!(
            "{:<20} {:>9.3} {:>11.3} {:>11.3} {:>6}\n",
            t.stage, t.median_ms, t.min_ms, t.max_ms, t.runs
        ));
    }
    out
}

/// Renders sweep points as an aligned text table.
pub fn render_sweep_table(axis: SweepAxis, points: &[SweepPoint]) -> String {
    let axis_name = match axis {
        SweepAxis::NXi => "n_xi",
        SweepAxis::NPhi => "n_phi",
        SweepAxis::NRho => "n_rho",
        SweepAxis::Grid => "n_phi=n_rho",
    };
    let mut out = format!("{axis_name:>12}        work   median_ms\n");
    for p in points {
        out.push_str(&format!(
            "{:>12} {:>11} {:>11.3}\n",
            p.value, p.work, p.median_ms
        ));
    }
    out
}
