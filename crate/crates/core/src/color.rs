//! sRGB (D65) to CIELAB conversion and its clamped inverse.
//!
//! The forward path is the standard pipeline: 8-bit sRGB, piecewise gamma
//! decode, linear RGB -> XYZ with the sRGB primaries, XYZ -> CIELAB against
//! the D65 white point. L lands in [0, 100] and the gray axis maps to
//! a = b = 0 up to the usual 7-digit matrix truncation.

use crate::image::{Image, RgbImage};
use crate::math;

const WHITE: [f64; 3] = [0.95047, 1.0, 1.08883];

const RGB_TO_XYZ: [[f64; 3]; 3] = [
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
];

const XYZ_TO_RGB: [[f64; 3]; 3] = [
    [3.2404542, -1.5371385, -0.4985314],
    [-0.9692660, 1.8760108, 0.0415560],
    [0.0556434, -0.2040259, 1.0572252],
];

// (6/29)^3, the linear/cubic split of the CIELAB companding function.
const LAB_EPS: f64 = 216.0 / 24389.0;
const LAB_KAPPA: f64 = 24389.0 / 27.0;

fn srgb_decode(v: f64) -> f64 {
    if v <= 0.04045 {
        v / 12.92
    } else {
        math::powf((v + 0.055) / 1.055, 2.4)
    }
}

fn srgb_encode(v: f64) -> f64 {
    if v <= 0.0031308 {
        12.92 * v
    } else {
        1.055 * math::powf(v, 1.0 / 2.4) - 0.055
    }
}

fn lab_f(t: f64) -> f64 {
    if t > LAB_EPS {
        math::cbrt(t)
    } else {
        (LAB_KAPPA * t + 16.0) / 116.0
    }
}

fn lab_f_inv(f: f64) -> f64 {
    let f3 = f * f * f;
    if f3 > LAB_EPS {
        f3
    } else {
        (116.0 * f - 16.0) / LAB_KAPPA
    }
}

/// Converts one 8-bit sRGB pixel to CIELAB.
pub fn srgb8_to_lab(rgb: [u8; 3]) -> [f64; 3] {
    let lin = [
        srgb_decode(rgb[0] as f64 / 255.0),
        srgb_decode(rgb[1] as f64 / 255.0),
        srgb_decode(rgb[2] as f64 / 255.0),
    ];
    let mut xyz = [0.0; 3];
    for (k, row) in RGB_TO_XYZ.iter().enumerate() {
        xyz[k] = row[0] * lin[0] + row[1] * lin[1] + row[2] * lin[2];
    }
    let fx = lab_f(xyz[0] / WHITE[0]);
    let fy = lab_f(xyz[1] / WHITE[1]);
    let fz = lab_f(xyz[2] / WHITE[2]);
    [116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)]
}

/// Converts one CIELAB pixel back to 8-bit sRGB, clamping out-of-gamut
/// values to the displayable range.
pub fn lab_to_srgb8(lab: [f64; 3]) -> [u8; 3] {
    let fy = (lab[0] + 16.0) / 116.0;
    let fx = fy + lab[1] / 500.0;
    let fz = fy - lab[2] / 200.0;
    let xyz = [
        lab_f_inv(fx) * WHITE[0],
        lab_f_inv(fy) * WHITE[1],
        lab_f_inv(fz) * WHITE[2],
    ];
    let mut out = [0u8; 3];
    for (k, row) in XYZ_TO_RGB.iter().enumerate() {
        let lin = row[0] * xyz[0] + row[1] * xyz[1] + row[2] * xyz[2];
        let v = srgb_encode(lin.clamp(0.0, 1.0)) * 255.0;
        out[k] = libm::round(v.clamp(0.0, 255.0)) as u8;
    }
    out
}

/// Per-pixel sRGB -> CIELAB over a whole image.
pub fn rgb_to_cielab(rgb: &RgbImage) -> Image {
    Image::from_fn(rgb.height(), rgb.width(), |i, j| srgb8_to_lab(rgb.get(i, j)))
        .expect("conversion output is finite")
}

/// Clamped CIELAB -> sRGB over a whole image.
pub fn cielab_to_rgb(lab: &Image) -> RgbImage {
    let mut data = alloc::vec::Vec::with_capacity(lab.height() * lab.width());
    for px in lab.pixels() {
        data.push(lab_to_srgb8(*px));
    }
    RgbImage::from_pixels(lab.height(), lab.width(), data).expect("dims preserved")
}
