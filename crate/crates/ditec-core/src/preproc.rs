//! Sensor modeling: color-space conversion, low-pass filtering, and HSV
//! distribution statistics.
//!
//! Images are three planes of normalized `[0, 1]` intensities. The trace
//! transform consumes the YCbCr planes; the HSV planes are summarized to
//! six (mean, std) statistics that later replace the DC slots of the
//! descriptor.

use ndarray::Array2;

use crate::error::{Error, Result};

/// Color space tag carried by [`ImagePlanes`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColorSpace {
    Rgb,
    YCbCr,
    Hsv,
}

/// A three-plane raster with a color-space tag. All planes share the same
/// shape and every stored intensity lies in `[0, 1]`.
#[derive(Debug, Clone)]
pub struct ImagePlanes {
    width: usize,
    height: usize,
    planes: [Array2<f64>; 3],
    space: ColorSpace,
}

impl ImagePlanes {
    /// Builds an image from three equally-shaped planes of `[0, 1]` values.
    pub fn new(planes: [Array2<f64>; 3], space: ColorSpace) -> Result<Self> {
        let (height, width) = planes[0].dim();
        if width == 0 || height == 0 {
            return Err(Error::contract("image must be at least 1x1"));
        }
        for plane in &planes {
            if plane.dim() != (height, width) {
                return Err(Error::contract("all planes must share one shape"));
            }
            if plane.iter().any(|v| !(0.0..=1.0).contains(v)) {
                return Err(Error::contract("intensities must lie in [0, 1]"));
            }
        }
        Ok(Self {
            width,
            height,
            planes,
            space,
        })
    }

    /// Decodes an interleaved 8-bit RGB buffer into normalized planes.
    /// Quantization is undone exactly once, here.
    pub fn from_rgb8(width: usize, height: usize, data: &[u8]) -> Result<Self> {
        if data.len() != width * height * 3 {
            return Err(Error::contract(format!(
                "rgb8 buffer length {} does not match {}x{}x3",
                data.len(),
                width,
                height
            )));
        }
        let mut planes = [
            Array2::zeros((height, width)),
            Array2::zeros((height, width)),
            Array2::zeros((height, width)),
        ];
        for y in 0..height {
            for x in 0..width {
                let base = (y * width + x) * 3;
                for c in 0..3 {
                    planes[c][[y, x]] = f64::from(data[base + c]) / 255.0;
                }
            }
        }
        ImagePlanes::new(planes, ColorSpace::Rgb)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn space(&self) -> ColorSpace {
        self.space
    }

    pub fn plane(&self, idx: usize) -> &Array2<f64> {
        &self.planes[idx]
    }

    pub fn planes(&self) -> &[Array2<f64>; 3] {
        &self.planes
    }

    fn require_space(&self, space: ColorSpace, op: &str) -> Result<()> {
        if self.space != space {
            return Err(Error::contract(format!(
                "{op} expects {space:?} input, got {:?}",
                self.space
            )));
        }
        Ok(())
    }

    fn map_pixels(&self, space: ColorSpace, f: impl Fn(f64, f64, f64) -> [f64; 3]) -> ImagePlanes {
        let mut out = [
            Array2::zeros((self.height, self.width)),
            Array2::zeros((self.height, self.width)),
            Array2::zeros((self.height, self.width)),
        ];
        for y in 0..self.height {
            for x in 0..self.width {
                let v = f(
                    self.planes[0][[y, x]],
                    self.planes[1][[y, x]],
                    self.planes[2][[y, x]],
                );
                for c in 0..3 {
                    out[c][[y, x]] = v[c];
                }
            }
        }
        ImagePlanes {
            width: self.width,
            height: self.height,
            planes: out,
            space,
        }
    }
}

/// Per-channel mean and population standard deviation of an HSV image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HsvStats {
    pub mu_h: f64,
    pub sigma_h: f64,
    pub mu_s: f64,
    pub sigma_s: f64,
    pub mu_v: f64,
    pub sigma_v: f64,
}

/// Full-range BT.601 conversion on normalized values, clamped to `[0, 1]`.
pub fn rgb_to_ycbcr(img: &ImagePlanes) -> Result<ImagePlanes> {
    img.require_space(ColorSpace::Rgb, "rgb_to_ycbcr")?;
    Ok(img.map_pixels(ColorSpace::YCbCr, |r, g, b| {
        let y = 0.299 * r + 0.587 * g + 0.114 * b;
        let cb = 0.5 - 0.168736 * r - 0.331264 * g + 0.5 * b;
        let cr = 0.5 + 0.5 * r - 0.418688 * g - 0.081312 * b;
        [y.clamp(0.0, 1.0), cb.clamp(0.0, 1.0), cr.clamp(0.0, 1.0)]
    }))
}

/// Hexcone HSV with hue normalized to `[0, 1)`. Achromatic pixels take H = 0.
pub fn rgb_to_hsv(img: &ImagePlanes) -> Result<ImagePlanes> {
    img.require_space(ColorSpace::Rgb, "rgb_to_hsv")?;
    Ok(img.map_pixels(ColorSpace::Hsv, |r, g, b| {
        let max = r.max(g).max(b);
        let min = r.min(g).min(b);
        let delta = max - min;
        let v = max;
        let s = if max > 0.0 { delta / max } else { 0.0 };
        let h = if delta > 0.0 {
            let h6 = if max == r {
                ((g - b) / delta).rem_euclid(6.0)
            } else if max == g {
                (b - r) / delta + 2.0
            } else {
                (r - g) / delta + 4.0
            };
            (h6 / 6.0).rem_euclid(1.0)
        } else {
            0.0
        };
        [h, s, v]
    }))
}

/// Inverse hexcone map; exact inverse of [`rgb_to_hsv`] for chromatic pixels.
pub fn hsv_to_rgb(img: &ImagePlanes) -> Result<ImagePlanes> {
    img.require_space(ColorSpace::Hsv, "hsv_to_rgb")?;
    Ok(img.map_pixels(ColorSpace::Rgb, |h, s, v| {
        let h6 = (h * 6.0).rem_euclid(6.0);
        let sector = h6.floor() as i64 % 6;
        let f = h6 - h6.floor();
        let p = v * (1.0 - s);
        let q = v * (1.0 - s * f);
        let t = v * (1.0 - s * (1.0 - f));
        match sector {
            0 => [v, t, p],
            1 => [q, v, p],
            2 => [p, v, t],
            3 => [p, q, v],
            4 => [t, p, v],
            _ => [v, p, q],
        }
    }))
}

/// Builds a normalized `side`x`side` Gaussian kernel.
pub fn gaussian_kernel(side: usize, sigma: f64) -> Result<Array2<f64>> {
    if side % 2 == 0 || side == 0 {
        return Err(Error::contract("kernel side must be odd"));
    }
    if sigma <= 0.0 {
        return Err(Error::contract("sigma must be positive"));
    }
    let half = (side / 2) as isize;
    let mut kernel = Array2::zeros((side, side));
    for dy in -half..=half {
        for dx in -half..=half {
            let w = (-((dx * dx + dy * dy) as f64) / (2.0 * sigma * sigma)).exp();
            kernel[[(dy + half) as usize, (dx + half) as usize]] = w;
        }
    }
    let sum = kernel.sum();
    kernel.mapv_inplace(|w| w / sum);
    Ok(kernel)
}

/// Per-plane 2D convolution with edge-replicate border handling. The kernel
/// must be odd-sided and sum to 1 so constants are preserved.
pub fn lowpass(img: &ImagePlanes, kernel: &Array2<f64>) -> Result<ImagePlanes> {
    let (kh, kw) = kernel.dim();
    if kh % 2 == 0 || kw % 2 == 0 {
        return Err(Error::contract("kernel sides must be odd"));
    }
    if (kernel.sum() - 1.0).abs() > 1e-9 {
        return Err(Error::contract("kernel weights must sum to 1"));
    }
    let (h, w) = (img.height as isize, img.width as isize);
    let (ch, cw) = ((kh / 2) as isize, (kw / 2) as isize);
    let mut planes = [
        Array2::zeros((img.height, img.width)),
        Array2::zeros((img.height, img.width)),
        Array2::zeros((img.height, img.width)),
    ];
    for (c, out) in planes.iter_mut().enumerate() {
        let src = &img.planes[c];
        for y in 0..h {
            for x in 0..w {
                let mut acc = 0.0;
                for ky in 0..kh as isize {
                    for kx in 0..kw as isize {
                        // True convolution: the kernel is flipped relative
                        // to the source window.
                        let sy = (y + ch - ky).clamp(0, h - 1) as usize;
                        let sx = (x + cw - kx).clamp(0, w - 1) as usize;
                        acc += kernel[[ky as usize, kx as usize]] * src[[sy, sx]];
                    }
                }
                out[[y as usize, x as usize]] = acc.clamp(0.0, 1.0);
            }
        }
    }
    Ok(ImagePlanes {
        width: img.width,
        height: img.height,
        planes,
        space: img.space,
    })
}

/// Mean and population standard deviation of each H, S, V plane.
pub fn hsv_stats(img: &ImagePlanes) -> Result<HsvStats> {
    img.require_space(ColorSpace::Hsv, "hsv_stats")?;
    let stat = |plane: &Array2<f64>| {
        let n = plane.len() as f64;
        let mu = plane.sum() / n;
        let var = plane.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() / n;
        (mu, var.sqrt())
    };
    let (mu_h, sigma_h) = stat(&img.planes[0]);
    let (mu_s, sigma_s) = stat(&img.planes[1]);
    let (mu_v, sigma_v) = stat(&img.planes[2]);
    Ok(HsvStats {
        mu_h,
        sigma_h,
        mu_s,
        sigma_s,
        mu_v,
        sigma_v,
    })
}
