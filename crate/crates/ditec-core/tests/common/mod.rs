//! Shared fixtures for the integration suites: synthetic natural images,
//! independent numeric oracles, and tiny PNG corpora.
//!
//! Each test binary compiles this module separately; not every binary uses
//! every fixture.
#![allow(dead_code)]

use std::path::Path;

use ndarray::Array2;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use ditec_core::preproc::{ColorSpace, ImagePlanes};

/// Smooth random field with natural-image statistics: a handful of Gaussian
/// blobs over a gentle gradient, normalized to `[0, 1]`.
pub fn natural_plane(w: usize, h: usize, rng: &mut ChaCha8Rng) -> Array2<f64> {
    let blobs: Vec<(f64, f64, f64, f64)> = (0..8)
        .map(|_| {
            (
                rng.random::<f64>() * w as f64,
                rng.random::<f64>() * h as f64,
                0.05 + 0.25 * rng.random::<f64>(),
                (w.min(h) as f64) * (0.08 + 0.3 * rng.random::<f64>()),
            )
        })
        .collect();
    let gx = rng.random::<f64>() * 0.4 - 0.2;
    let gy = rng.random::<f64>() * 0.4 - 0.2;
    let base = 0.3 + 0.3 * rng.random::<f64>();
    let mut plane = Array2::from_shape_fn((h, w), |(j, i)| {
        let mut v = base + gx * (i as f64 / w as f64 - 0.5) + gy * (j as f64 / h as f64 - 0.5);
        for (cx, cy, amp, sigma) in &blobs {
            let d2 = (i as f64 - cx).powi(2) + (j as f64 - cy).powi(2);
            v += amp * (-d2 / (2.0 * sigma * sigma)).exp();
        }
        v
    });
    let max = plane.iter().cloned().fold(f64::MIN, f64::max);
    let min = plane.iter().cloned().fold(f64::MAX, f64::min);
    plane.mapv_inplace(|v| (v - min) / (max - min + 1e-12));
    plane
}

/// Three correlated natural planes as an RGB image.
pub fn natural_image(w: usize, h: usize, seed: u64) -> ImagePlanes {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = natural_plane(w, h, &mut rng);
    let b = natural_plane(w, h, &mut rng);
    let r = a.clone();
    let g = a.mapv(|v| (0.7 * v + 0.3).clamp(0.0, 1.0));
    let bl = Array2::from_shape_fn(a.dim(), |ix| (0.5 * a[ix] + 0.5 * b[ix]).clamp(0.0, 1.0));
    ImagePlanes::new([r, g, bl], ColorSpace::Rgb).unwrap()
}

/// Four-loop evaluation of the DCT-II definition, independent of the
/// separable implementation.
pub fn dct2_direct(x: &Array2<f64>) -> Array2<f64> {
    let (n1, n2) = x.dim();
    let alpha = |k: usize, n: usize| {
        if k == 0 {
            (1.0 / n as f64).sqrt()
        } else {
            (2.0 / n as f64).sqrt()
        }
    };
    Array2::from_shape_fn((n1, n2), |(k1, k2)| {
        let mut acc = 0.0;
        for i1 in 0..n1 {
            for i2 in 0..n2 {
                acc += x[[i1, i2]]
                    * (std::f64::consts::PI * k1 as f64 * (2 * i1 + 1) as f64 / (2.0 * n1 as f64))
                        .cos()
                    * (std::f64::consts::PI * k2 as f64 * (2 * i2 + 1) as f64 / (2.0 * n2 as f64))
                        .cos();
            }
        }
        alpha(k1, n1) * alpha(k2, n2) * acc
    })
}

/// Two-pass evaluation of the discrete kurtosis definition.
pub fn kurtosis_direct(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let m2 = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let m4 = values
        .iter()
        .map(|v| {
            let d = v - mean;
            d * d * d * d
        })
        .sum::<f64>()
        / n;
    (mean, if m2 > 0.0 { m4 / (m2 * m2) } else { 0.0 })
}

/// Writes a tiny two-class PNG corpus whose classes differ in brightness.
pub fn build_corpus(root: &Path, per_class: usize) {
    for (class, base) in [("dark", 25u8), ("light", 210)] {
        let dir = root.join(class);
        std::fs::create_dir_all(&dir).unwrap();
        for i in 0..per_class {
            let img = image::RgbImage::from_fn(20, 20, |x, y| {
                let v = base.saturating_add(((x * 3 + y * 5 + i as u32) % 24) as u8);
                image::Rgb([v, v / 2 + 20, 255 - v])
            });
            img.save(dir.join(format!("img{i:02}.png"))).unwrap();
        }
    }
}
