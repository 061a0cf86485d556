//! Closed-form quantities behind the superpixel-count predictions: the psi
//! variance functions, lookout-set areas and lattice counts, the exact and
//! asymptotic expected numbers of local maxima for i.i.d. fields, and the
//! expected density formulas for the flat and bicolor noise models.

use crate::density::{axis_range, delta_sum, norm_constant};
use crate::image::Region;
use crate::math;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TheoryError {
    /// `circle_segment_area` needs `0 < s <= d`.
    SegmentDomain,
    /// `rounded_square_area` needs `s <= d <= sqrt(2) s`.
    RoundedSquareDomain,
    /// The bicolor expectation is stated for pixels on the left patch.
    NotOnLeftPatch,
}

impl fmt::Display for TheoryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            TheoryError::SegmentDomain => "circle segment needs 0 < s <= d",
            TheoryError::RoundedSquareDomain => {
                "rounded square needs s <= d <= sqrt(2) * s"
            }
            TheoryError::NotOnLeftPatch => "pixel must lie on the left patch",
        };
        f.write_str(msg)
    }
}

impl core::error::Error for TheoryError {}

/// Shape of the lookout set, decided by `max_dist` against the window
/// radius: disk when the cutoff fits inside the window, square when it
/// clears the diagonal, rounded square between.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapeCase {
    Disk,
    RoundedSquare,
    Square,
}

impl ShapeCase {
    pub fn classify(k_w: f64, max_dist: f64) -> Self {
        if max_dist <= k_w {
            ShapeCase::Disk
        } else if max_dist <= math::SQRT_2 * k_w {
            ShapeCase::RoundedSquare
        } else {
            ShapeCase::Square
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ShapeCase::Disk => "disk",
            ShapeCase::RoundedSquare => "rounded-square",
            ShapeCase::Square => "square",
        }
    }
}

impl fmt::Display for ShapeCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `psi_1(t) = (1+4t)^{-3/2} - (1+2t)^{-3}`, the variance factor of a
/// single window term.
pub fn psi1(t: f64) -> f64 {
    let a = 1.0 + 2.0 * t;
    math::powf(1.0 + 4.0 * t, -1.5) - 1.0 / (a * a * a)
}

/// `psi_2(t) = ((1+t)(1+3t))^{-3/2} - (1+2t)^{-3}`, the covariance factor
/// between two distinct window terms.
pub fn psi2(t: f64) -> f64 {
    let a = 1.0 + 2.0 * t;
    math::powf((1.0 + t) * (1.0 + 3.0 * t), -1.5) - 1.0 / (a * a * a)
}

/// Area of the circle segment cut from a disk of radius `d` by the vertical
/// line at distance `s` from the center:
/// `gamma(s, d) = d^2 arctan(sqrt(d^2-s^2)/s) - s sqrt(d^2-s^2)`.
pub fn circle_segment_area(s: f64, d: f64) -> Result<f64, TheoryError> {
    if !(s > 0.0 && s <= d) || !d.is_finite() {
        return Err(TheoryError::SegmentDomain);
    }
    let c = math::sqrt((d * d - s * s).max(0.0));
    Ok(d * d * math::atan(c / s) - s * c)
}

/// Area of the rounded square: a disk of radius `d` minus the four segments
/// that poke past the square of half-side `s`. Defined for
/// `s <= d <= sqrt(2) s`; equals `pi s^2` at `d = s` and `4 s^2` at
/// `d = sqrt(2) s`.
pub fn rounded_square_area(s: f64, d: f64) -> Result<f64, TheoryError> {
    if !(s > 0.0 && d >= s && d <= math::SQRT_2 * s) {
        return Err(TheoryError::RoundedSquareDomain);
    }
    Ok(math::PI * d * d - 4.0 * circle_segment_area(s, d)?)
}

/// Exact area of the lookout set for real parameters, in all three cases.
pub fn lookout_area(k_w: f64, d_m: f64) -> f64 {
    match ShapeCase::classify(k_w, d_m) {
        ShapeCase::Disk => math::PI * d_m * d_m,
        ShapeCase::RoundedSquare => {
            rounded_square_area(k_w, d_m).expect("classified as rounded square")
        }
        ShapeCase::Square => 4.0 * k_w * k_w,
    }
}

/// Number of integer offsets `(a, b)` with `max(|a|,|b|) <= k_w` and
/// `a^2 + b^2 <= d_m^2`, including `(0, 0)`.
pub fn lattice_count(k_w: u32, d_m: f64) -> usize {
    let k = k_w as i64;
    let dm2 = d_m * d_m;
    let mut count = 0;
    for a in -k..=k {
        for b in -k..=k {
            if ((a * a + b * b) as f64) <= dm2 {
                count += 1;
            }
        }
    }
    count
}

/// Border-aware lattice count: the size of the lookout set of pixel
/// `(i, j)` in an `height x width` image.
pub fn lookout_count(
    i: usize,
    j: usize,
    height: usize,
    width: usize,
    k_w: u32,
    d_m: f64,
) -> usize {
    let (r0, r1) = axis_range(i, height, k_w);
    let (c0, c1) = axis_range(j, width, k_w);
    let dm2 = d_m * d_m;
    let mut count = 0;
    for u in r0..=r1 {
        let a = i as i64 - u as i64;
        for v in c0..=c1 {
            let b = j as i64 - v as i64;
            if ((a * a + b * b) as f64) <= dm2 {
                count += 1;
            }
        }
    }
    count
}

/// Expected number of local maxima of an i.i.d. continuous field inside
/// `region`: the sum of `1 / |E_ij|` with exact, border-clipped lookout
/// counts. Empty regions give 0.
pub fn expected_local_maxima_exact(
    region: Region,
    height: usize,
    width: usize,
    k_w: u32,
    d_m: f64,
) -> f64 {
    if region.is_empty() {
        return 0.0;
    }
    region.validate(height, width).expect("region inside image");
    let mut acc = 0.0;
    // Counts repeat away from the borders; cache by clip pattern.
    let mut last_row = usize::MAX;
    let mut row_cache: alloc::vec::Vec<(usize, f64)> = alloc::vec::Vec::new();
    for (i, j) in region.iter() {
        if i != last_row {
            row_cache.clear();
            last_row = i;
        }
        let key = {
            let (c0, c1) = axis_range(j, width, k_w);
            (j - c0, c1 - j)
        };
        let cached = row_cache.iter().find(|(k, _)| {
            let (c0, c1) = axis_range(*k, width, k_w);
            (*k - c0, c1 - *k) == key
        });
        let inv = match cached {
            Some((_, inv)) => *inv,
            None => {
                let inv = 1.0 / lookout_count(i, j, height, width, k_w, d_m) as f64;
                row_cache.push((j, inv));
                inv
            }
        };
        acc += inv;
    }
    acc
}

/// Which route produced a prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredictionMethod {
    ExactLattice,
    Asymptotic,
}

impl PredictionMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            PredictionMethod::ExactLattice => "exact-lattice",
            PredictionMethod::Asymptotic => "asymptotic",
        }
    }
}

/// Expected local maxima count with the formula that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub expected: f64,
    pub method: PredictionMethod,
    pub case: ShapeCase,
    pub k_w: f64,
    pub d_m: f64,
    pub height: usize,
    pub width: usize,
}

/// Leading-term prediction for an interior `h x w` rectangle:
/// `hw / (pi d_m^2)`, `hw / (pi (3 k_w d_m - k_w^2 - d_m^2))`, or
/// `hw / (4 k_w^2)` depending on the case.
///
/// Evaluated in the scale-free form `hw / (k_w^2 g(d_m/k_w))` so that
/// scaling both parameters by a power of two changes the result by exactly
/// the inverse square.
pub fn expected_local_maxima_asymptotic(
    height: usize,
    width: usize,
    k_w: f64,
    d_m: f64,
) -> Prediction {
    let case = ShapeCase::classify(k_w, d_m);
    let r = d_m / k_w;
    let unit = match case {
        ShapeCase::Disk => math::PI * r * r,
        ShapeCase::RoundedSquare => math::PI * (3.0 * r - 1.0 - r * r),
        ShapeCase::Square => 4.0,
    };
    Prediction {
        expected: (height * width) as f64 / (k_w * k_w * unit),
        method: PredictionMethod::Asymptotic,
        case,
        k_w,
        d_m,
        height,
        width,
    }
}

/// Exact-lattice prediction wrapped with its metadata.
pub fn predict_exact(
    region: Region,
    height: usize,
    width: usize,
    k_w: u32,
    d_m: f64,
) -> Prediction {
    Prediction {
        expected: expected_local_maxima_exact(region, height, width, k_w, d_m),
        method: PredictionMethod::ExactLattice,
        case: ShapeCase::classify(k_w as f64, d_m),
        k_w: k_w as f64,
        d_m,
        height: region.height,
        width: region.width,
    }
}

/// Expected density estimate on a flat patch: `C_2 Delta_ij` (border-aware
/// through the clipped window sum).
pub fn expected_density_flat(
    i: usize,
    j: usize,
    height: usize,
    width: usize,
    kernel_size: f64,
    sigma: f64,
) -> f64 {
    let k_w = math::ceil(3.0 * kernel_size) as u32;
    norm_constant(2.0, kernel_size, sigma) * delta_sum(i, j, height, width, kernel_size, k_w)
}

/// Variance of the density estimate on a flat patch:
/// `psi_2(t) (Delta^2 - S_2) + psi_1(t) S_2 + sigma_0^2` with
/// `t = sigma^2 / ks^2` and `S_2` the sum of squared spatial weights.
pub fn variance_density_flat(
    i: usize,
    j: usize,
    height: usize,
    width: usize,
    kernel_size: f64,
    sigma: f64,
    noise_scale: f64,
) -> f64 {
    let k_w = math::ceil(3.0 * kernel_size) as u32;
    let t = sigma * sigma / (kernel_size * kernel_size);
    let delta = delta_sum(i, j, height, width, kernel_size, k_w);
    // delta_uv^2 is the spatial weight at kernel size ks / sqrt(2), with the
    // same window radius.
    let s2 = delta_sum(i, j, height, width, kernel_size / math::SQRT_2, k_w);
    psi2(t) * (delta * delta - s2) + psi1(t) * s2 + noise_scale * noise_scale
}

/// Expected density estimate in the bicolor model, for a pixel on the left
/// patch (columns `0..boundary_col`):
/// `C_2 [ S_left + exp(-gap^2 / (2 (ks^2 + 2 sigma^2))) S_right ]` where the
/// `S` are window sums of spatial weights over each patch.
pub fn expected_density_bicolor(
    i: usize,
    j: usize,
    boundary_col: usize,
    height: usize,
    width: usize,
    kernel_size: f64,
    sigma: f64,
    color_gap: f64,
) -> Result<f64, TheoryError> {
    if j >= boundary_col {
        return Err(TheoryError::NotOnLeftPatch);
    }
    let k_w = math::ceil(3.0 * kernel_size) as u32;
    let ks2 = kernel_size * kernel_size;
    let row_sum = crate::density::axis_weight_sum(i, height, kernel_size, k_w);
    let (c0, c1) = axis_range(j, width, k_w);
    let inv = 1.0 / (2.0 * ks2);
    let mut left = 0.0;
    let mut right = 0.0;
    for v in c0..=c1 {
        let dj = j as f64 - v as f64;
        let wgt = math::exp(-dj * dj * inv);
        if v < boundary_col {
            left += wgt;
        } else {
            right += wgt;
        }
    }
    let cross = math::exp(-color_gap * color_gap / (2.0 * (ks2 + 2.0 * sigma * sigma)));
    Ok(norm_constant(2.0, kernel_size, sigma) * row_sum * (left + cross * right))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn psi_at_zero() {
        assert_eq!(psi1(0.0), 0.0);
        assert_eq!(psi2(0.0), 0.0);
    }

    #[test]
    fn psi_frozen_values_and_paper_brackets() {
        let p1 = psi1(0.04);
        assert!(close(p1, 0.006578699398157473, 1e-12), "psi1 = {p1}");
        assert!((0.0064..=0.0096).contains(&p1));
        let p2 = psi2(0.04);
        assert!(close(p2, 0.0016362049159365233, 1e-12), "psi2 = {p2}");
        assert!((0.0016..=0.0024).contains(&p2));
    }

    #[test]
    fn circle_segment_values() {
        assert_eq!(circle_segment_area(4.0, 4.0).unwrap(), 0.0);
        let g = circle_segment_area(1.0, 2f64.sqrt()).unwrap();
        assert!(close(g, core::f64::consts::FRAC_PI_2 - 1.0, 1e-12), "gamma = {g}");
        let g34 = circle_segment_area(3.0, 4.0).unwrap();
        assert!(close(g34, 3.6264940318208785, 1e-12), "gamma(3,4) = {g34}");
        assert!(circle_segment_area(4.0, 3.0).is_err());
        assert!(circle_segment_area(0.0, 3.0).is_err());
    }

    #[test]
    fn rounded_square_limits_and_value() {
        for &s in &[1.0, 5.5, 15.0, 30.0] {
            let disk_limit = rounded_square_area(s, s).unwrap();
            assert!((disk_limit - math::PI * s * s).abs() < 1e-9);
            let square_limit = rounded_square_area(s, math::SQRT_2 * s).unwrap();
            assert!((square_limit - 4.0 * s * s).abs() < 1e-9);
        }
        let b = rounded_square_area(3.0, 4.0).unwrap();
        assert!(close(b, 35.75950633015317, 1e-12), "B(3,4) = {b}");
        assert!(rounded_square_area(3.0, 5.0).is_err());
        assert!(rounded_square_area(3.0, 2.0).is_err());
    }

    #[test]
    fn lattice_count_examples() {
        assert_eq!(lattice_count(3, 1.0), 5);
        assert_eq!(lattice_count(3, 2.0), 13);
        assert_eq!(lattice_count(3, f64::INFINITY), 49);
        assert_eq!(lattice_count(3, 4.0), 45);
    }

    #[test]
    fn lookout_count_clips_at_borders() {
        assert_eq!(lookout_count(0, 0, 10, 10, 3, f64::INFINITY), 16);
        assert_eq!(lookout_count(5, 5, 11, 11, 3, 2.0), 13);
        assert_eq!(lookout_count(0, 0, 1, 1, 3, f64::INFINITY), 1);
    }

    #[test]
    fn exact_expectation_examples() {
        // Interior 10x10 region with constant N = 13.
        let e = expected_local_maxima_exact(Region::new(10, 10, 10, 10), 40, 40, 3, 2.0);
        assert!(close(e, 100.0 / 13.0, 1e-12), "E = {e}");
        // Single interior pixel, full square window.
        let e = expected_local_maxima_exact(Region::new(10, 10, 1, 1), 40, 40, 3, f64::INFINITY);
        assert!(close(e, 1.0 / 49.0, 1e-14));
        // Whole 1x1 image.
        let e = expected_local_maxima_exact(Region::full(1, 1), 1, 1, 3, f64::INFINITY);
        assert_eq!(e, 1.0);
        // Empty region.
        let e = expected_local_maxima_exact(Region::new(0, 0, 0, 5), 10, 10, 3, 2.0);
        assert_eq!(e, 0.0);
    }

    #[test]
    fn exact_expectation_cache_agrees_with_direct_sum() {
        // Region touching all border clip patterns.
        let (h, w, kw, dm) = (12usize, 17usize, 4u32, 3.5f64);
        let region = Region::full(h, w);
        let direct: f64 = region
            .iter()
            .map(|(i, j)| 1.0 / lookout_count(i, j, h, w, kw, dm) as f64)
            .sum();
        let cached = expected_local_maxima_exact(region, h, w, kw, dm);
        assert!(close(cached, direct, 1e-12));
    }

    #[test]
    fn asymptotic_examples() {
        let disk = expected_local_maxima_asymptotic(100, 100, 15.0, 10.0);
        assert_eq!(disk.case, ShapeCase::Disk);
        assert!(close(disk.expected, 10000.0 / (100.0 * math::PI), 1e-12));

        let square = expected_local_maxima_asymptotic(100, 100, 15.0, 30.0);
        assert_eq!(square.case, ShapeCase::Square);
        assert!(close(square.expected, 10000.0 / 900.0, 1e-12));

        let rounded = expected_local_maxima_asymptotic(100, 100, 15.0, 18.0);
        assert_eq!(rounded.case, ShapeCase::RoundedSquare);
    }

    #[test]
    fn asymptotic_homogeneity_power_of_two_is_exact() {
        for &(kw, dm) in &[(15.0, 10.0), (15.0, 18.0), (15.0, 40.0)] {
            let base = expected_local_maxima_asymptotic(128, 256, kw, dm).expected;
            for &k in &[0.5, 2.0] {
                let scaled = expected_local_maxima_asymptotic(128, 256, k * kw, k * dm).expected;
                assert_eq!(scaled * k * k, base);
            }
        }
    }

    #[test]
    fn flat_density_moments_examples() {
        // sigma = 0: mean = Delta, variance = 0.
        let m = expected_density_flat(20, 20, 41, 41, 5.0, 0.0);
        let d = delta_sum(20, 20, 41, 41, 5.0, 15);
        assert_eq!(m, d);
        assert_eq!(variance_density_flat(20, 20, 41, 41, 5.0, 0.0, 0.0), 0.0);

        // ks = 5, sigma = 1: mean = (25/27)^{3/2} Delta.
        let m = expected_density_flat(20, 20, 41, 41, 5.0, 1.0);
        assert!(close(m, 0.8909726376383114 * d, 1e-12));

        // Variance bracket for ks >= 5, sigma <= ks/5.
        for &(ks, sigma) in &[(5.0, 1.0), (5.0, 0.5), (10.0, 2.0), (20.0, 1.0)] {
            let kw = math::ceil(3.0 * ks) as u32;
            let side = 2 * kw as usize + 1;
            let c = kw as usize;
            let v = variance_density_flat(c, c, side, side, ks, sigma, 0.0);
            let delta = delta_sum(c, c, side, side, ks, kw);
            let lo = sigma.powi(4) * delta * delta / ks.powi(4);
            let hi = 107.0 * sigma.powi(4);
            assert!(v >= lo && v <= hi, "ks={ks} sigma={sigma}: {lo} <= {v} <= {hi}");
        }
    }

    #[test]
    fn bicolor_expectation_limits() {
        let (h, w, bc) = (41usize, 62usize, 31usize);
        let (ks, sigma) = (5.0, 0.5);
        let i = 20;
        let j = 25;
        let zero_gap = expected_density_bicolor(i, j, bc, h, w, ks, sigma, 0.0).unwrap();
        let flat = expected_density_flat(i, j, h, w, ks, sigma);
        assert!(close(zero_gap, flat, 1e-12));

        let huge_gap = expected_density_bicolor(i, j, bc, h, w, ks, sigma, 1e9).unwrap();
        // Only the left-patch sum survives.
        let k_w = 15u32;
        let row = crate::density::axis_weight_sum(i, h, ks, k_w);
        let mut left = 0.0;
        for v in 10..bc {
            let dj = j as f64 - v as f64;
            left += math::exp(-dj * dj / 50.0);
        }
        let expect = norm_constant(2.0, ks, sigma) * row * left;
        assert!(close(huge_gap, expect, 1e-12), "{huge_gap} vs {expect}");

        assert!(expected_density_bicolor(i, bc, bc, h, w, ks, sigma, 1.0).is_err());
    }

    #[test]
    fn bicolor_boundary_gap_near_the_boundary() {
        // ks = 5, gap 15 (= 3 ks), sigma <= 1: the expected density drops by
        // at least 3 ks / 2 per step toward the boundary, for comparisons
        // with both pixels on the left patch and within a few columns of it.
        // Past |j - j0| ~ 4 the horizontal attenuation e^{-d^2/(2 ks^2)}
        // pushes the step below that level, and the straddling comparison
        // (last left vs first right) has gap exactly 0 by patch symmetry.
        let (h, w, bc) = (41usize, 93usize, 62usize);
        let ks = 5.0;
        for &sigma in &[0.0, 0.5, 1.0] {
            for dist in 1..=4usize {
                let j = bc - 1 - dist;
                let ej = expected_density_bicolor(20, j, bc, h, w, ks, sigma, 15.0).unwrap();
                let ej1 = expected_density_bicolor(20, j + 1, bc, h, w, ks, sigma, 15.0).unwrap();
                assert!(
                    ej - ej1 >= 1.5 * ks,
                    "sigma={sigma} dist={dist}: gap = {}",
                    ej - ej1
                );
            }
            // Straddling pair: equal expectations, by left-right symmetry.
            let last_left =
                expected_density_bicolor(20, bc - 1, bc, h, w, ks, sigma, 15.0).unwrap();
            let first_right = {
                let mirrored = w - 1 - bc;
                let mirrored_bc = w - bc;
                expected_density_bicolor(20, mirrored, mirrored_bc, h, w, ks, sigma, 15.0).unwrap()
            };
            assert!((last_left - first_right).abs() < 1e-9);
        }
    }
}
