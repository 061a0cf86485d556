//! Gaussian kernel density estimation over the joint (position, color)
//! space, plus the deterministic weight machinery and the two closed-form
//! approximations of the estimate (main term and projection onto single
//! pixels).
//!
//! The estimate at `(i, j)` sums, over the Chebyshev window of radius
//! `window_radius`, `exp((-(i-u)^2 - (j-v)^2 - ||ratio*(x_ij - x_uv)||^2) /
//! (2 ks^2))`, then adds the tie-break noise. The direct O(H W k_w^2) sum is
//! the contract; there is no approximate fast path.

use crate::field::DensityField;
use crate::image::Image;
use crate::math;
use crate::noise::NoiseModel;
use crate::params::Hyperparams;
use alloc::vec::Vec;

/// In-bounds lattice points of the Chebyshev ball of radius `k_w` around
/// `(i, j)`, in row-major order. Always contains `(i, j)`.
pub fn window(i: usize, j: usize, height: usize, width: usize, k_w: u32) -> Vec<(usize, usize)> {
    let (r0, r1) = axis_range(i, height, k_w);
    let (c0, c1) = axis_range(j, width, k_w);
    let mut out = Vec::with_capacity((r1 - r0 + 1) * (c1 - c0 + 1));
    for u in r0..=r1 {
        for v in c0..=c1 {
            out.push((u, v));
        }
    }
    out
}

#[inline]
pub(crate) fn axis_range(x: usize, len: usize, k_w: u32) -> (usize, usize) {
    let k = k_w as usize;
    (x.saturating_sub(k), (x + k).min(len - 1))
}

/// Spatial Gaussian weight between `(i, j)` and `(u, v)`:
/// `exp((-(i-u)^2 - (j-v)^2) / (2 ks^2))`. Equals 1 iff the points coincide.
pub fn spatial_weight(i: usize, j: usize, u: usize, v: usize, kernel_size: f64) -> f64 {
    let di = i as f64 - u as f64;
    let dj = j as f64 - v as f64;
    math::exp(-(di * di + dj * dj) / (2.0 * kernel_size * kernel_size))
}

/// One-dimensional slice of the window sum: sum of `exp(-(x-y)^2 / (2
/// ks^2))` over in-bounds `y` with `|x - y| <= k_w`.
pub fn axis_weight_sum(x: usize, len: usize, kernel_size: f64, k_w: u32) -> f64 {
    let inv = 1.0 / (2.0 * kernel_size * kernel_size);
    let (lo, hi) = axis_range(x, len, k_w);
    // Summed small-to-large in offset so the result does not depend on which
    // side clips.
    let mut acc = 1.0;
    let left = x - lo;
    let right = hi - x;
    for d in 1..=left.max(right) {
        let w = math::exp(-((d * d) as f64) * inv);
        if d <= left {
            acc += w;
        }
        if d <= right {
            acc += w;
        }
    }
    acc
}

/// Window weight total `sum_{(u,v) in C_ij} spatial_weight(i, j, u, v)`.
///
/// The window is a product of axis intervals, so the double sum factorizes
/// into the two axis sums.
pub fn delta_sum(i: usize, j: usize, height: usize, width: usize, kernel_size: f64, k_w: u32) -> f64 {
    axis_weight_sum(i, height, kernel_size, k_w) * axis_weight_sum(j, width, kernel_size, k_w)
}

/// Normalization constant `C_p = (ks^2 / (ks^2 + p sigma^2))^{3/2}`.
pub fn norm_constant(p: f64, kernel_size: f64, sigma: f64) -> f64 {
    let ks2 = kernel_size * kernel_size;
    math::powf(ks2 / (ks2 + p * sigma * sigma), 1.5)
}

#[inline]
fn color_dist2(a: [f64; 3], b: [f64; 3]) -> f64 {
    let d0 = a[0] - b[0];
    let d1 = a[1] - b[1];
    let d2 = a[2] - b[2];
    d0 * d0 + d1 * d1 + d2 * d2
}

/// Density estimate at a single pixel, without the tie-break noise term.
fn density_p_raw(image: &Image, hp: &Hyperparams, i: usize, j: usize) -> f64 {
    let (h, w) = image.dims();
    let inv = 1.0 / (2.0 * hp.kernel_size() * hp.kernel_size());
    let ratio2 = hp.color_ratio() * hp.color_ratio();
    let center = image.get(i, j);
    let (r0, r1) = axis_range(i, h, hp.window_radius());
    let (c0, c1) = axis_range(j, w, hp.window_radius());
    let mut acc = 0.0;
    for u in r0..=r1 {
        let di = i as f64 - u as f64;
        for v in c0..=c1 {
            let dj = j as f64 - v as f64;
            let d2 = di * di + dj * dj + ratio2 * color_dist2(center, image.get(u, v));
            acc += math::exp(-d2 * inv);
        }
    }
    acc
}

/// Density estimate at one pixel, including tie-break noise.
pub fn density_p_at(image: &Image, hp: &Hyperparams, noise: &NoiseModel, i: usize, j: usize) -> f64 {
    density_p_raw(image, hp, i, j) + noise.draw(i, j)
}

/// Fills `out` with the density estimate for the given row range.
/// `out.len()` must equal `rows.len() * width`. Rows can be computed in any
/// partition; values depend only on (image, hyperparams, noise).
pub fn density_p_rows(
    image: &Image,
    hp: &Hyperparams,
    noise: &NoiseModel,
    rows: core::ops::Range<usize>,
    out: &mut [f64],
) {
    let w = image.width();
    debug_assert_eq!(out.len(), rows.len() * w);
    let mut idx = 0;
    for i in rows {
        for j in 0..w {
            out[idx] = density_p_raw(image, hp, i, j) + noise.draw(i, j);
            idx += 1;
        }
    }
}

/// Full density field (sequential driver over [`density_p_rows`]).
pub fn density_p(image: &Image, hp: &Hyperparams, noise: &NoiseModel) -> DensityField {
    let (h, w) = image.dims();
    let mut field = DensityField::zeroed(h, w);
    density_p_rows(image, hp, noise, 0..h, field.values_mut());
    field
}

/// Main-term field `Q_ij = C_1 exp(-||x_ij - c||^2 / (2 (ks^2 + sigma^2)))
/// Delta_ij` for a flat patch of color `c`.
pub fn density_q(image: &Image, kernel_size: f64, sigma: f64, c: [f64; 3]) -> DensityField {
    let (h, w) = image.dims();
    let k_w = math::ceil(3.0 * kernel_size) as u32;
    let c1 = norm_constant(1.0, kernel_size, sigma);
    let inv = 1.0 / (2.0 * (kernel_size * kernel_size + sigma * sigma));
    let row_sums: Vec<f64> = (0..h).map(|i| axis_weight_sum(i, h, kernel_size, k_w)).collect();
    let col_sums: Vec<f64> = (0..w).map(|j| axis_weight_sum(j, w, kernel_size, k_w)).collect();
    let mut field = DensityField::zeroed(h, w);
    let values = field.values_mut();
    let mut idx = 0;
    for i in 0..h {
        for j in 0..w {
            let g = math::exp(-color_dist2(image.get(i, j), c) * inv);
            values[idx] = c1 * g * row_sums[i] * col_sums[j];
            idx += 1;
        }
    }
    field
}

/// Main-term value at one pixel.
pub fn density_q_at(
    image: &Image,
    kernel_size: f64,
    sigma: f64,
    c: [f64; 3],
    i: usize,
    j: usize,
) -> f64 {
    let (h, w) = image.dims();
    let k_w = math::ceil(3.0 * kernel_size) as u32;
    let c1 = norm_constant(1.0, kernel_size, sigma);
    let inv = 1.0 / (2.0 * (kernel_size * kernel_size + sigma * sigma));
    let g = math::exp(-color_dist2(image.get(i, j), c) * inv);
    c1 * g * delta_sum(i, j, h, w, kernel_size, k_w)
}

/// Projection of the density estimate onto sums of single-pixel functions,
/// for a flat patch of color `c`:
///
/// `Pi_ij = Q_ij + C_1 sum_{(u,v) != (i,j)} [exp(-||x_uv - c||^2 / (2 (ks^2
/// + sigma^2))) - ((ks^2 + sigma^2)/(ks^2 + 2 sigma^2))^{3/2}] delta_uv`.
pub fn hajek_projection(image: &Image, kernel_size: f64, sigma: f64, c: [f64; 3]) -> DensityField {
    let (h, w) = image.dims();
    let k_w = math::ceil(3.0 * kernel_size) as u32;
    let ks2 = kernel_size * kernel_size;
    let s2 = sigma * sigma;
    let c1 = norm_constant(1.0, kernel_size, sigma);
    let bias = math::powf((ks2 + s2) / (ks2 + 2.0 * s2), 1.5);
    let inv_color = 1.0 / (2.0 * (ks2 + s2));

    // Per-pixel color factor, then an O(k_w^2) pass with table lookups for
    // the spatial weights.
    let g: Vec<f64> = image
        .pixels()
        .iter()
        .map(|&px| math::exp(-color_dist2(px, c) * inv_color))
        .collect();
    let kernel: Vec<f64> = (0..=k_w as usize)
        .map(|d| math::exp(-((d * d) as f64) / (2.0 * ks2)))
        .collect();

    let row_sums: Vec<f64> = (0..h).map(|i| axis_weight_sum(i, h, kernel_size, k_w)).collect();
    let col_sums: Vec<f64> = (0..w).map(|j| axis_weight_sum(j, w, kernel_size, k_w)).collect();

    let mut field = DensityField::zeroed(h, w);
    let values = field.values_mut();
    let mut idx = 0;
    for i in 0..h {
        let (r0, r1) = axis_range(i, h, k_w);
        for j in 0..w {
            let (c0, c1r) = axis_range(j, w, k_w);
            let mut rest = 0.0;
            for u in r0..=r1 {
                let ku = kernel[i.abs_diff(u)];
                for v in c0..=c1r {
                    if u == i && v == j {
                        continue;
                    }
                    let delta = ku * kernel[j.abs_diff(v)];
                    rest += (g[u * w + v] - bias) * delta;
                }
            }
            let q = c1 * g[i * w + j] * row_sums[i] * col_sums[j];
            values[idx] = q + c1 * rest;
            idx += 1;
        }
    }
    field
}
