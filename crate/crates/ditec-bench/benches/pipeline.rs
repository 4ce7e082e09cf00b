//! Whole-image benchmarks: preprocessing through the assembled descriptor.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use ditec_core::pipeline::bench::synthetic_image;
use ditec_core::pipeline::{compute_descriptor, PipelineConfig};
use ditec_core::preproc::{gaussian_kernel, lowpass, rgb_to_hsv, rgb_to_ycbcr};

fn bench_full_descriptor(c: &mut Criterion) {
    let rgb = synthetic_image(384, 256);
    let config = PipelineConfig::default();
    c.bench_function("descriptor_384x256_71x71x251", |b| {
        b.iter(|| black_box(compute_descriptor(black_box(&rgb), &config).unwrap()))
    });
}

fn bench_preproc(c: &mut Criterion) {
    let rgb = synthetic_image(384, 256);
    let kernel = gaussian_kernel(3, 1.0).unwrap();
    c.bench_function("preproc_384x256", |b| {
        b.iter(|| {
            let ycbcr = rgb_to_ycbcr(black_box(&rgb)).unwrap();
            let filtered = lowpass(&ycbcr, &kernel).unwrap();
            let hsv = rgb_to_hsv(&rgb).unwrap();
            black_box((filtered, hsv))
        })
    });
}

criterion_group!(benches, bench_full_descriptor, bench_preproc);
criterion_main!(benches);
