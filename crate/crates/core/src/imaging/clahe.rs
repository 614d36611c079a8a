use crate::error::{Error, Result};
use crate::image::GrayImage;
use serde::{Deserialize, Serialize};

/// Contrast-limited adaptive histogram equalization parameters.
///
/// `clip_limit` is a multiple of the mean histogram bin height
/// (`tile_pixels / 256`); `f64::INFINITY` disables clipping entirely.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ClaheParams {
    pub clip_limit: f64,
    pub grid: (usize, usize),
}

impl Default for ClaheParams {
    fn default() -> Self {
        ClaheParams {
            clip_limit: 5.0,
            grid: (8, 8),
        }
    }
}

/// CLAHE: per-tile clipped histogram equalization with bilinear blending of
/// the four surrounding tile mappings (edge regions clamp to the nearest
/// tile).
pub fn clahe(img: &GrayImage, params: &ClaheParams) -> Result<GrayImage> {
    let (gx, gy) = params.grid;
    let (w, h) = (img.width(), img.height());
    if !(params.clip_limit > 0.0) {
        return Err(Error::param("clip_limit must be > 0"));
    }
    if gx < 1 || gy < 1 {
        return Err(Error::param("grid dims must be >= 1"));
    }
    if gx > w || gy > h {
        return Err(Error::param(format!(
            "grid {gx}x{gy} exceeds image {w}x{h}"
        )));
    }

    // Tile t spans [bound[t], bound[t+1]); tiles differ by at most one pixel.
    let x_bounds: Vec<usize> = (0..=gx).map(|t| t * w / gx).collect();
    let y_bounds: Vec<usize> = (0..=gy).map(|t| t * h / gy).collect();

    let mut luts = vec![[0u8; 256]; gx * gy];
    for ty in 0..gy {
        for tx in 0..gx {
            let mut hist = [0u32; 256];
            for y in y_bounds[ty]..y_bounds[ty + 1] {
                for x in x_bounds[tx]..x_bounds[tx + 1] {
                    hist[img.get(x, y) as usize] += 1;
                }
            }
            let tile_pixels = (x_bounds[tx + 1] - x_bounds[tx]) * (y_bounds[ty + 1] - y_bounds[ty]);
            luts[ty * gx + tx] = tile_mapping(&hist, tile_pixels, params.clip_limit);
        }
    }

    // Tile centers for interpolation weights.
    let centers = |bounds: &[usize]| -> Vec<f64> {
        bounds
            .windows(2)
            .map(|b| (b[0] + b[1] - 1) as f64 / 2.0)
            .collect()
    };
    let cx = centers(&x_bounds);
    let cy = centers(&y_bounds);

    let mut out = GrayImage::new(w, h);
    for y in 0..h {
        let (ty0, ty1, wy) = interp_coords(y as f64, &cy);
        for x in 0..w {
            let (tx0, tx1, wx) = interp_coords(x as f64, &cx);
            let v = img.get(x, y) as usize;
            let m00 = luts[ty0 * gx + tx0][v] as f64;
            let m10 = luts[ty0 * gx + tx1][v] as f64;
            let m01 = luts[ty1 * gx + tx0][v] as f64;
            let m11 = luts[ty1 * gx + tx1][v] as f64;
            let top = m00 * (1.0 - wx) + m10 * wx;
            let bottom = m01 * (1.0 - wx) + m11 * wx;
            let blended = top * (1.0 - wy) + bottom * wy;
            out.set(x, y, blended.round().clamp(0.0, 255.0) as u8);
        }
    }
    Ok(out)
}

/// Neighboring tile indices along one axis and the blend weight toward the
/// second one. Coordinates outside the first/last tile centers clamp.
fn interp_coords(pos: f64, centers: &[f64]) -> (usize, usize, f64) {
    if pos <= centers[0] {
        return (0, 0, 0.0);
    }
    let last = centers.len() - 1;
    if pos >= centers[last] {
        return (last, last, 0.0);
    }
    let hi = centers.partition_point(|&c| c < pos).min(last);
    let lo = hi - 1;
    let w = (pos - centers[lo]) / (centers[hi] - centers[lo]);
    (lo, hi, w)
}

/// Clipped-histogram equalization mapping for one tile.
///
/// Excess above `clip_limit * tile_pixels / 256` is trimmed and spread
/// uniformly over all bins (remainder goes to the lowest bins), then the
/// CDF is scaled onto `[0, 255]`.
fn tile_mapping(hist: &[u32; 256], tile_pixels: usize, clip_limit: f64) -> [u8; 256] {
    let mut hist = *hist;
    if clip_limit.is_finite() {
        let limit = ((clip_limit * tile_pixels as f64 / 256.0).floor() as u32).max(1);
        let mut excess = 0u64;
        for bin in hist.iter_mut() {
            if *bin > limit {
                excess += (*bin - limit) as u64;
                *bin = limit;
            }
        }
        let add = (excess / 256) as u32;
        let rem = (excess % 256) as usize;
        for (i, bin) in hist.iter_mut().enumerate() {
            *bin += add + u32::from(i < rem);
        }
    }
    let mut lut = [0u8; 256];
    let mut cdf = 0u64;
    let total: u64 = hist.iter().map(|&c| c as u64).sum();
    for i in 0..256 {
        cdf += hist[i] as u64;
        lut[i] = ((cdf as f64 / total as f64) * 255.0).round() as u8;
    }
    lut
}
