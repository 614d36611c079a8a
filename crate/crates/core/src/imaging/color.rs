use crate::image::{GrayImage, Hsv, HsvImage, Rgb, RgbImage};

/// BT.601 luma conversion: `round(0.299 R + 0.587 G + 0.114 B)`.
pub fn to_grayscale(img: &RgbImage) -> GrayImage {
    img.map(|p| {
        let luma = 0.299 * p.r as f64 + 0.587 * p.g as f64 + 0.114 * p.b as f64;
        luma.round().clamp(0.0, 255.0) as u8
    })
}

/// Hexcone RGB -> HSV. Hue is in degrees `[0, 360)` and defined as 0 for
/// achromatic pixels; saturation and value are fractions in `[0, 1]`.
pub fn rgb_to_hsv(img: &RgbImage) -> HsvImage {
    img.map(pixel_to_hsv)
}

pub fn pixel_to_hsv(p: Rgb) -> Hsv {
    let r = p.r as f32 / 255.0;
    let g = p.g as f32 / 255.0;
    let b = p.b as f32 / 255.0;
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let delta = max - min;

    let mut h = if delta == 0.0 {
        0.0
    } else if max == r {
        60.0 * ((g - b) / delta)
    } else if max == g {
        60.0 * ((b - r) / delta) + 120.0
    } else {
        60.0 * ((r - g) / delta) + 240.0
    };
    if h < 0.0 {
        h += 360.0;
    }
    if h >= 360.0 {
        h -= 360.0;
    }
    let s = if max == 0.0 { 0.0 } else { delta / max };
    Hsv { h, s, v: max }
}

/// Inverse hexcone conversion; exact on pure primaries and within one count
/// per channel elsewhere (used by round-trip checks and annotation).
pub fn hsv_to_rgb(p: Hsv) -> Rgb {
    let c = p.v * p.s;
    let sector = p.h / 60.0;
    let x = c * (1.0 - (sector % 2.0 - 1.0).abs());
    let m = p.v - c;
    let (r, g, b) = match sector as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    Rgb::new(
        ((r + m) * 255.0).round() as u8,
        ((g + m) * 255.0).round() as u8,
        ((b + m) * 255.0).round() as u8,
    )
}
