use crate::error::{Error, Result};
use crate::image::{GrayImage, Mask};

/// Median filter with a `k x k` window and replicated borders.
///
/// Uses a sliding 256-bin histogram per row, so cost is `O(w h k)` instead
/// of `O(w h k^2 log k)` for sort-based medians.
pub fn median_blur(img: &GrayImage, k: usize) -> Result<GrayImage> {
    if k == 0 || k % 2 == 0 {
        return Err(Error::param(format!(
            "median kernel must be odd and positive, got {k}"
        )));
    }
    if k == 1 {
        return Ok(img.clone());
    }
    let (w, h) = (img.width(), img.height());
    let half = (k / 2) as isize;
    let median_rank = (k * k) / 2; // 0-based middle of k^2 (odd) values
    let mut out = GrayImage::new(w, h);

    let column = |x: isize, y0: isize, hist: &mut [u32; 256], sign: i32| {
        for dy in -half..=half {
            let v = img.get_clamped(x, y0 + dy) as usize;
            if sign > 0 {
                hist[v] += 1;
            } else {
                hist[v] -= 1;
            }
        }
    };

    for y in 0..h as isize {
        let mut hist = [0u32; 256];
        for dx in -half..=half {
            column(dx, y, &mut hist, 1);
        }
        out.set(0, y as usize, histogram_median(&hist, median_rank));
        for x in 1..w as isize {
            column(x - half - 1, y, &mut hist, -1);
            column(x + half, y, &mut hist, 1);
            out.set(x as usize, y as usize, histogram_median(&hist, median_rank));
        }
    }
    Ok(out)
}

fn histogram_median(hist: &[u32; 256], rank: usize) -> u8 {
    let mut seen = 0u32;
    for (value, &count) in hist.iter().enumerate() {
        seen += count;
        if seen as usize > rank {
            return value as u8;
        }
    }
    255
}

/// Binary dilation by a square `k x k` structuring element: an output pixel
/// is set iff any input pixel in its (border-clamped) neighborhood is set.
pub fn dilate(mask: &Mask, k: usize) -> Result<Mask> {
    if k == 0 || k % 2 == 0 {
        return Err(Error::param(format!(
            "dilation kernel must be odd and positive, got {k}"
        )));
    }
    if k == 1 {
        return Ok(mask.clone());
    }
    let (w, h) = (mask.width(), mask.height());
    let half = (k / 2) as isize;

    // separable: horizontal running OR, then vertical
    let mut horiz = Mask::new(w, h);
    for y in 0..h {
        for x in 0..w as isize {
            let lo = (x - half).max(0) as usize;
            let hi = ((x + half) as usize).min(w - 1);
            let any = (lo..=hi).any(|sx| mask.get(sx, y));
            horiz.set(x as usize, y, any);
        }
    }
    let mut out = Mask::new(w, h);
    for y in 0..h as isize {
        let lo = (y - half).max(0) as usize;
        let hi = ((y + half) as usize).min(h - 1);
        for x in 0..w {
            let any = (lo..=hi).any(|sy| horiz.get(x, sy));
            out.set(x, y as usize, any);
        }
    }
    Ok(out)
}
