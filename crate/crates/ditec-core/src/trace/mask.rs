//! Contribution-mask analysis of the transform's sampling pattern.
//!
//! The mask counts, per raster cell, how many (φ, ρ, t) sample points fall
//! there over the whole grid. Coverage, mean repetition, and variance of the
//! mask quantify how evenly a parameter choice uses the image.

use ndarray::Array2;
use rayon::prelude::*;

use super::geometry::{chord, phi_grid, rho_grid};
use super::TraceParams;

/// Per-cell sample counts for a full (φ, ρ) grid.
#[derive(Debug, Clone)]
pub struct ContributionMask {
    pub counts: Array2<u32>,
}

/// Coverage, mean repetition, and homogeneity summary of a mask.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaskMetrics {
    /// Percentage of cells hit at least once.
    pub coverage_pct: f64,
    /// Mean sample count over all cells.
    pub mean_repetition: f64,
    /// Population variance of the counts over all cells.
    pub variance: f64,
}

/// Maps a centered continuous coordinate to the raster cell containing it,
/// clamping boundary points into the nearest edge cell.
#[inline]
pub fn nearest_cell(x: f64, y: f64, width: usize, height: usize) -> (usize, usize) {
    let i = (x + 0.5 * width as f64).floor().max(0.0) as usize;
    let j = (y + 0.5 * height as f64).floor().max(0.0) as usize;
    (i.min(width - 1), j.min(height - 1))
}

/// Tallies the nearest cell of every sample point of the grid implied by
/// `params` on a `width` × `height` raster.
pub fn contribution_mask(params: &TraceParams, width: usize, height: usize) -> ContributionMask {
    let phis = phi_grid(params.n_phi(), params.phi_range() == super::PhiRange::Full);
    let rhos = rho_grid(
        params.n_rho(),
        width,
        height,
        params.phi_range() == super::PhiRange::Full,
    );
    let n_xi = params.n_xi();

    let counts = phis
        .par_iter()
        .fold(
            || vec![0u32; width * height],
            |mut acc, &phi| {
                let (sin, cos) = phi.sin_cos();
                for &rho in &rhos {
                    let Some((t0, t1)) = chord(phi, rho, width, height) else {
                        continue;
                    };
                    let px = rho * cos;
                    let py = rho * sin;
                    let step = (t1 - t0) / (n_xi - 1) as f64;
                    for k in 0..n_xi {
                        let t = t0 + k as f64 * step;
                        let (i, j) = nearest_cell(px - t * sin, py + t * cos, width, height);
                        acc[j * width + i] += 1;
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![0u32; width * height],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );

    ContributionMask {
        counts: Array2::from_shape_vec((height, width), counts).expect("raster shape"),
    }
}

/// Coverage percentage, mean, and population variance over all mask cells.
pub fn mask_metrics(mask: &ContributionMask) -> MaskMetrics {
    let total = mask.counts.len() as f64;
    let used = mask.counts.iter().filter(|c| **c > 0).count() as f64;
    let mean = mask.counts.iter().map(|c| f64::from(*c)).sum::<f64>() / total;
    let variance = mask
        .counts
        .iter()
        .map(|c| {
            let d = f64::from(*c) - mean;
            d * d
        })
        .sum::<f64>()
        / total;
    MaskMetrics {
        coverage_pct: 100.0 * used / total,
        mean_repetition: mean,
        variance,
    }
}

/// Renders sweep results as an aligned text table with one row per
/// resolution triple.
pub fn render_mask_table(rows: &[(usize, usize, usize, MaskMetrics)]) -> String {
    let mut out = String::from(
        "  n_phi   n_rho    n_xi   % pixels used        mean         var\n",
    );
    for (n_phi, n_rho, n_xi, m) in rows {
        out.push_str(&format!(
            "{n_phi:>7} {n_rho:>7} {n_xi:>7} {:>15.2} {:>11.2} {:>11.2}\n",
            m.coverage_pct, m.mean_repetition, m.variance
        ));
    }
    out
}
