//! Line geometry for the discrete trace transform.
//!
//! The image is the rectangle `[-W/2, W/2] x [-H/2, H/2]` with the origin at
//! its center. A scan line is the normal form `x cos(phi) + y sin(phi) = rho`,
//! parametrized along its direction as
//!
//! ```text
//! p(t) = (rho cos(phi) - t sin(phi), rho sin(phi) + t cos(phi))
//! ```
//!
//! which reduces to the vertical lines `x = rho` at `phi = 0` and `x = -rho`
//! at `phi = pi` without a special case.

use crate::error::{Error, Result};

/// Derives `(n_phi, n_rho, n_xi)` from the sampling step sizes: each count is
/// the floor of the corresponding range/step ratio, with a minimum of 1.
pub fn resolutions_from_steps(
    delta_phi: f64,
    delta_rho: f64,
    delta_l: f64,
    width: usize,
    height: usize,
) -> Result<(usize, usize, usize)> {
    if delta_phi <= 0.0 || delta_rho <= 0.0 || delta_l <= 0.0 {
        return Err(Error::contract("sampling steps must be positive"));
    }
    // Nudge before flooring so exact quotients survive fp division.
    let floor1 = |x: f64| (x + 1e-9).floor().max(1.0) as usize;
    let n_phi = floor1(std::f64::consts::TAU / delta_phi);
    let n_rho = floor1(width.min(height) as f64 / delta_rho);
    let n_xi = floor1(1.0 / delta_l);
    Ok((n_phi, n_rho, n_xi))
}

/// Parameter interval of a line clipped against one coordinate slab
/// `|p0 + t*d| <= half`, or `None` when a parallel line lies outside it.
fn clip_slab(d: f64, p0: f64, half: f64) -> Option<(f64, f64)> {
    if d.abs() < 1e-12 {
        return if p0.abs() <= half + 1e-12 {
            Some((f64::NEG_INFINITY, f64::INFINITY))
        } else {
            None
        };
    }
    let ta = (-half - p0) / d;
    let tb = (half - p0) / d;
    Some(if d > 0.0 { (ta, tb) } else { (tb, ta) })
}

/// Parameter interval `[t0, t1]` of the line clipped to the image rectangle,
/// or `None` when the line misses it. Corner-tangent lines yield a
/// degenerate zero-length chord rather than disappearing.
pub fn chord(phi: f64, rho: f64, width: usize, height: usize) -> Option<(f64, f64)> {
    let (sin, cos) = phi.sin_cos();
    let px = rho * cos;
    let py = rho * sin;
    let (ax, bx) = clip_slab(-sin, px, width as f64 / 2.0)?;
    let (ay, by) = clip_slab(cos, py, height as f64 / 2.0)?;
    let t0 = ax.max(ay);
    let t1 = bx.min(by);
    if t0 > t1 {
        if t0 - t1 > 1e-9 {
            return None;
        }
        let mid = 0.5 * (t0 + t1);
        return Some((mid, mid));
    }
    Some((t0, t1))
}

/// A point on a scan line in centered continuous coordinates.
pub type Point = (f64, f64);

/// `n_xi` points uniformly spaced along the clipped chord, endpoints
/// included. Empty when the line misses the image rectangle.
pub fn line_points(phi: f64, rho: f64, n_xi: usize, width: usize, height: usize) -> Vec<Point> {
    let Some((t0, t1)) = chord(phi, rho, width, height) else {
        return Vec::new();
    };
    let (sin, cos) = phi.sin_cos();
    let px = rho * cos;
    let py = rho * sin;
    let at = |t: f64| (px - t * sin, py + t * cos);
    match n_xi {
        0 => Vec::new(),
        1 => vec![at(0.5 * (t0 + t1))],
        n => {
            let step = (t1 - t0) / (n - 1) as f64;
            (0..n).map(|k| at(t0 + k as f64 * step)).collect()
        }
    }
}

/// Uniform angle grid: `[0, 2pi)` for the full range, `[0, pi)` for half.
pub fn phi_grid(n_phi: usize, full_range: bool) -> Vec<f64> {
    let span = if full_range {
        std::f64::consts::TAU
    } else {
        std::f64::consts::PI
    };
    (0..n_phi).map(|i| span * i as f64 / n_phi as f64).collect()
}

/// Uniform radius grid over `[-r, r]` (full range) or `[0, r]` (half range),
/// endpoints included, with `r = min(W, H) / 2`.
pub fn rho_grid(n_rho: usize, width: usize, height: usize, full_range: bool) -> Vec<f64> {
    let r = width.min(height) as f64 / 2.0;
    let (lo, hi) = if full_range { (-r, r) } else { (0.0, r) };
    if n_rho == 1 {
        return vec![0.5 * (lo + hi)];
    }
    let step = (hi - lo) / (n_rho - 1) as f64;
    (0..n_rho).map(|j| lo + j as f64 * step).collect()
}
