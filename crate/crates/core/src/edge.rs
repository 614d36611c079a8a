//! Sobel gradients and Canny edge detection.
//!
//! The input is expected to be median-blurred upstream, so Canny applies no
//! internal smoothing of its own.

use crate::error::{Error, Result};
use crate::image::{GrayImage, Mask};
use serde::{Deserialize, Serialize};

/// Per-pixel signed Sobel responses with L1 magnitude.
#[derive(Debug, Clone)]
pub struct GradientField {
    width: usize,
    height: usize,
    gx: Vec<i32>,
    gy: Vec<i32>,
    magnitude: Vec<u32>,
}

impl GradientField {
    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn gx(&self, x: usize, y: usize) -> i32 {
        self.gx[y * self.width + x]
    }

    #[inline]
    pub fn gy(&self, x: usize, y: usize) -> i32 {
        self.gy[y * self.width + x]
    }

    /// L1 magnitude `|gx| + |gy|`.
    #[inline]
    pub fn magnitude(&self, x: usize, y: usize) -> u32 {
        self.magnitude[y * self.width + x]
    }

    /// Gradient direction `atan2(gy, gx)` in radians.
    pub fn direction(&self, x: usize, y: usize) -> f64 {
        (self.gy(x, y) as f64).atan2(self.gx(x, y) as f64)
    }

    #[inline]
    fn mag_at(&self, x: isize, y: isize) -> u32 {
        if x < 0 || y < 0 || x as usize >= self.width || y as usize >= self.height {
            0
        } else {
            self.magnitude[y as usize * self.width + x as usize]
        }
    }
}

/// 3x3 Sobel with replicated borders.
pub fn sobel(img: &GrayImage) -> GradientField {
    let (w, h) = (img.width(), img.height());
    let mut gx = vec![0i32; w * h];
    let mut gy = vec![0i32; w * h];
    let mut magnitude = vec![0u32; w * h];
    for y in 0..h as isize {
        for x in 0..w as isize {
            let p = |dx: isize, dy: isize| img.get_clamped(x + dx, y + dy) as i32;
            let dx = (p(1, -1) + 2 * p(1, 0) + p(1, 1)) - (p(-1, -1) + 2 * p(-1, 0) + p(-1, 1));
            let dy = (p(-1, 1) + 2 * p(0, 1) + p(1, 1)) - (p(-1, -1) + 2 * p(0, -1) + p(1, -1));
            let i = y as usize * w + x as usize;
            gx[i] = dx;
            gy[i] = dy;
            magnitude[i] = (dx.abs() + dy.abs()) as u32;
        }
    }
    GradientField {
        width: w,
        height: h,
        gx,
        gy,
        magnitude,
    }
}

/// Hysteresis thresholds for Canny.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CannyParams {
    pub low_threshold: u32,
    pub high_threshold: u32,
}

impl Default for CannyParams {
    fn default() -> Self {
        CannyParams {
            low_threshold: 20,
            high_threshold: 120,
        }
    }
}

impl CannyParams {
    pub fn validate(&self) -> Result<()> {
        if self.low_threshold >= self.high_threshold {
            return Err(Error::param(format!(
                "canny thresholds must satisfy low < high, got {} >= {}",
                self.low_threshold, self.high_threshold
            )));
        }
        Ok(())
    }
}

/// Canny over a precomputed gradient field: non-maximum suppression with
/// the direction quantized to four bins, then two-threshold hysteresis with
/// 8-connected weak-edge propagation.
pub fn canny_from_gradient(grad: &GradientField, params: &CannyParams) -> Mask {
    assert!(
        params.low_threshold < params.high_threshold,
        "canny thresholds must satisfy low < high"
    );
    let (w, h) = (grad.width, grad.height);

    // tan(22.5 deg) and tan(67.5 deg) split the four direction bins
    const TAN_22_5: f64 = 0.414_213_562_373_095_1;
    const TAN_67_5: f64 = 2.414_213_562_373_095;

    // 0 = none, 1 = weak, 2 = strong
    let mut class = vec![0u8; w * h];
    for y in 0..h as isize {
        for x in 0..w as isize {
            let mag = grad.mag_at(x, y);
            if mag < params.low_threshold || mag == 0 {
                continue;
            }
            let gx = grad.gx(x as usize, y as usize);
            let gy = grad.gy(x as usize, y as usize);
            let (ax, ay) = (gx.abs() as f64, gy.abs() as f64);
            // Canonical neighbor offset along the quantized gradient.
            let (dx, dy) = if ay <= ax * TAN_22_5 {
                (1isize, 0isize)
            } else if ay >= ax * TAN_67_5 {
                (0, 1)
            } else if (gx > 0) == (gy > 0) {
                (1, 1)
            } else {
                (1, -1)
            };
            // Survives when it beats the forward neighbor strictly and the
            // backward neighbor at least ties; the asymmetry keeps ideal
            // two-pixel plateaus one pixel wide.
            if mag > grad.mag_at(x + dx, y + dy) && mag >= grad.mag_at(x - dx, y - dy) {
                let i = y as usize * w + x as usize;
                class[i] = if mag >= params.high_threshold { 2 } else { 1 };
            }
        }
    }

    // Hysteresis: flood from strong pixels through 8-connected weak pixels.
    let mut out = Mask::new(w, h);
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if class[y * w + x] == 2 && !out.get(x, y) {
                out.set(x, y, true);
                stack.push((x, y));
                while let Some((cx, cy)) = stack.pop() {
                    for dy in -1isize..=1 {
                        for dx in -1isize..=1 {
                            let (nx, ny) = (cx as isize + dx, cy as isize + dy);
                            if !out.in_bounds(nx, ny) {
                                continue;
                            }
                            let (nx, ny) = (nx as usize, ny as usize);
                            if class[ny * w + nx] != 0 && !out.get(nx, ny) {
                                out.set(nx, ny, true);
                                stack.push((nx, ny));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Canny edge detection on a grayscale image.
pub fn canny(img: &GrayImage, params: &CannyParams) -> Mask {
    canny_from_gradient(&sobel(img), params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detmath::SplitMix64;
    use crate::image::Image;

    #[test]
    fn sobel_constant_image_is_flat() {
        let img = Image::from_fn(12, 9, |_, _| 55u8);
        let grad = sobel(&img);
        for y in 0..9 {
            for x in 0..12 {
                assert_eq!(grad.magnitude(x, y), 0);
            }
        }
    }

    #[test]
    fn sobel_vertical_step_response() {
        // 0 left of column 8, 255 from column 8 on.
        let img = Image::from_fn(16, 8, |x, _| if x < 8 { 0u8 } else { 255 });
        let grad = sobel(&img);
        // (1+2+1) * 255 on both columns adjacent to the step
        assert_eq!(grad.gx(8, 4), 1020);
        assert_eq!(grad.gx(7, 4), 1020);
        assert_eq!(grad.gy(8, 4), 0);
        assert_eq!(grad.gx(3, 4), 0);
    }

    #[test]
    fn sobel_transpose_swaps_components() {
        let mut rng = SplitMix64::new(41);
        let img = Image::from_fn(13, 9, |_, _| rng.next_u64() as u8);
        let transposed = Image::from_fn(9, 13, |x, y| img.get(y, x));
        let g = sobel(&img);
        let gt = sobel(&transposed);
        for y in 0..9 {
            for x in 0..13 {
                assert_eq!(g.gx(x, y), gt.gy(y, x));
                assert_eq!(g.gy(x, y), gt.gx(y, x));
            }
        }
    }

    #[test]
    fn canny_constant_image_has_no_edges() {
        let img = Image::from_fn(20, 20, |_, _| 128u8);
        let edges = canny(&img, &CannyParams::default());
        assert_eq!(edges.count_set(), 0);
    }

    #[test]
    fn canny_ideal_step_yields_one_pixel_line() {
        let img = Image::from_fn(24, 16, |x, _| if x < 10 { 0u8 } else { 255 });
        let edges = canny(&img, &CannyParams::default());
        for y in 0..16 {
            let edge_cols: Vec<usize> = (0..24).filter(|&x| edges.get(x, y)).collect();
            assert_eq!(edge_cols, vec![10], "row {y}");
        }
    }

    #[test]
    fn canny_weak_ramp_without_strong_seed_vanishes() {
        // Per-column increment of 5 gives interior L1 magnitudes of 40:
        // above the low threshold, below the high one everywhere.
        let img = Image::from_fn(16, 10, |x, _| (x * 5) as u8);
        let params = CannyParams::default();
        let grad = sobel(&img);
        let mut any_strong = false;
        for y in 0..10 {
            for x in 0..16 {
                assert!(grad.magnitude(x, y) < params.high_threshold);
                any_strong |= grad.magnitude(x, y) >= params.high_threshold;
            }
        }
        assert!(!any_strong);
        let edges = canny(&img, &params);
        assert_eq!(edges.count_set(), 0, "no strong seed, nothing survives");
    }

    #[test]
    fn canny_output_subset_of_low_threshold_pixels() {
        let mut rng = SplitMix64::new(42);
        for _ in 0..10 {
            let img = Image::from_fn(32, 32, |_, _| rng.next_u64() as u8);
            let params = CannyParams::default();
            let grad = sobel(&img);
            let edges = canny(&img, &params);
            for y in 0..32 {
                for x in 0..32 {
                    if edges.get(x, y) {
                        assert!(grad.magnitude(x, y) >= params.low_threshold);
                    }
                }
            }
        }
    }

    #[test]
    fn weak_edges_survive_only_when_connected_to_strong() {
        // A strong vertical step on the left half and an isolated weak
        // blob far away on the right; the blob must be discarded.
        let mut img = Image::from_fn(40, 20, |x, _| if x < 10 { 0u8 } else { 200 });
        for y in 8..12 {
            for x in 30..34 {
                img.set(x, y, 210); // small contrast against 200
            }
        }
        let edges = canny(&img, &CannyParams::default());
        for y in 0..20 {
            for x in 25..40 {
                assert!(!edges.get(x, y), "isolated weak region at ({x},{y})");
            }
        }
        assert!(edges.get(10, 10), "strong step remains");
    }

    #[test]
    fn params_validate() {
        assert!(CannyParams {
            low_threshold: 120,
            high_threshold: 20
        }
        .validate()
        .is_err());
        assert!(CannyParams::default().validate().is_ok());
    }
}
