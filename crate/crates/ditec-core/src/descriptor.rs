//! Statistical descriptors of sinograms: 2D DCT, diagonal binning, and
//! (mean, kurtosis) compression.
//!
//! Each n_phi × n_rho sinogram is transformed with an orthonormal DCT-II,
//! its coefficients are grouped into `ceil(sqrt(n_phi² + n_rho²))` bins along
//! unit-spaced lines perpendicular to the matrix's main diagonal (similar
//! frequency bands), and each bin collapses to a (μ, k) pair. The DC pair of
//! every channel is replaced by HSV image statistics before truncation.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::preproc::HsvStats;
use crate::trace::Channel;

/// Orthonormal 2D DCT-II coefficients of a sinogram.
#[derive(Debug, Clone)]
pub struct DctMatrix {
    pub coeffs: Array2<f64>,
}

/// DCT coefficients grouped by distance along the main-diagonal direction.
#[derive(Debug, Clone)]
pub struct DiagonalBins {
    pub bins: Vec<Vec<f64>>,
}

/// The classifier's feature vector: interleaved (μ, k) pairs per channel,
/// DC pairs substituted by HSV statistics, truncated to the kept prefix.
#[derive(Debug, Clone)]
pub struct DescriptorVector {
    pub values: Vec<f64>,
    /// Kept value count per channel, in concatenation order.
    pub layout: [(Channel, usize); 3],
    pub label: Option<String>,
}

impl DescriptorVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn dct_basis(n: usize) -> Array2<f64> {
    let nf = n as f64;
    Array2::from_shape_fn((n, n), |(k, i)| {
        let alpha = if k == 0 {
            (1.0 / nf).sqrt()
        } else {
            (2.0 / nf).sqrt()
        };
        alpha * (std::f64::consts::PI * k as f64 * (2 * i + 1) as f64 / (2.0 * nf)).cos()
    })
}

/// Orthonormal 2D DCT-II, computed separably as `B1 · X · B2ᵀ`.
pub fn dct2(matrix: &Array2<f64>) -> DctMatrix {
    let (n1, n2) = matrix.dim();
    let b1 = dct_basis(n1);
    let b2 = dct_basis(n2);
    let coeffs = b1.dot(matrix).dot(&b2.t());
    DctMatrix { coeffs }
}

/// Number of diagonal bins for an `n_phi` × `n_rho` coefficient matrix.
pub fn n_bins(n_phi: usize, n_rho: usize) -> usize {
    ((n_phi * n_phi + n_rho * n_rho) as f64).sqrt().ceil() as usize
}

/// Bin index of coefficient `(k1, k2)`: its position along the main-diagonal
/// direction, quantized at unit spacing.
pub fn bin_index(k1: usize, k2: usize, n_phi: usize, n_rho: usize) -> usize {
    let hyp = ((n_phi * n_phi + n_rho * n_rho) as f64).sqrt();
    ((k1 * n_phi + k2 * n_rho) as f64 / hyp).floor() as usize
}

/// Groups every DCT coefficient into its diagonal bin. Trailing bins may be
/// empty; the bin count depends only on the matrix shape.
pub fn diagonal_bins(dct: &DctMatrix) -> DiagonalBins {
    let (n1, n2) = dct.coeffs.dim();
    let mut bins = vec![Vec::new(); n_bins(n1, n2)];
    for ((k1, k2), v) in dct.coeffs.indexed_iter() {
        bins[bin_index(k1, k2, n1, n2)].push(*v);
    }
    DiagonalBins { bins }
}

/// Mean and population kurtosis of a value list. Zero-variance lists take
/// k = 0 to keep descriptors finite.
pub fn mu_kurtosis(values: &[f64]) -> Result<(f64, f64)> {
    if values.is_empty() {
        return Err(Error::contract("kurtosis of an empty list"));
    }
    let n = values.len() as f64;
    let mu = values.iter().sum::<f64>() / n;
    let m2 = values.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / n;
    let m4 = values.iter().map(|v| (v - mu).powi(4)).sum::<f64>() / n;
    // Constant lists carry only rounding noise in m2; treat variance below
    // 1e-24 of the mean square as degenerate.
    let scale = values.iter().map(|v| v * v).sum::<f64>() / n;
    let k = if m2 > scale * 1e-24 { m4 / (m2 * m2) } else { 0.0 };
    Ok((mu, k))
}

/// Collapses each bin to its (μ, k) pair, interleaved in ascending bin
/// order. Empty bins contribute (0, 0).
pub fn compress_channel(dct: &DctMatrix) -> Vec<f64> {
    let bins = diagonal_bins(dct);
    let mut out = Vec::with_capacity(2 * bins.bins.len());
    for bin in &bins.bins {
        let (mu, k) = if bin.is_empty() {
            (0.0, 0.0)
        } else {
            mu_kurtosis(bin).expect("non-empty bin")
        };
        out.push(mu);
        out.push(k);
    }
    out
}

/// Joins the per-channel compressed lists into one descriptor: the first
/// (DC) pair of each channel is replaced by HSV statistics — Y gets
/// (μ_v, σ_v), Cb gets (μ_h, σ_h), Cr gets (μ_s, σ_s) — then each channel is
/// truncated to its kept prefix and Y‖Cb‖Cr concatenated.
pub fn assemble_descriptor(
    channels: &[Vec<f64>; 3],
    hsv: &HsvStats,
    keep: [usize; 3],
) -> Result<DescriptorVector> {
    let substitutes = [
        (hsv.mu_v, hsv.sigma_v),
        (hsv.mu_h, hsv.sigma_h),
        (hsv.mu_s, hsv.sigma_s),
    ];
    let mut values = Vec::new();
    let mut layout = [(Channel::Y, 0), (Channel::Cb, 0), (Channel::Cr, 0)];
    for (c, channel) in channels.iter().enumerate() {
        let kept = keep[c];
        if kept % 2 != 0 {
            return Err(Error::contract("keep counts must be even"));
        }
        if kept > channel.len() {
            return Err(Error::contract(format!(
                "keep count {kept} exceeds {} available values",
                channel.len()
            )));
        }
        layout[c] = (Channel::ALL[c], kept);
        if kept == 0 {
            continue;
        }
        values.push(substitutes[c].0);
        values.push(substitutes[c].1);
        values.extend_from_slice(&channel[2..kept]);
    }
    Ok(DescriptorVector {
        values,
        layout,
        label: None,
    })
}

/// Dimensionality-reduction ratio of the (μ, k) compression.
pub fn reduction_factor(n_phi: usize, n_rho: usize, n_f: usize) -> f64 {
    let hyp = ((n_phi * n_phi + n_rho * n_rho) as f64).sqrt();
    (n_phi * n_rho) as f64 / (hyp * n_f as f64)
}
