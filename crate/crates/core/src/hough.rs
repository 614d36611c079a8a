//! Gradient-method circular Hough Transform.
//!
//! Edge pixels vote for circle centers along their gradient direction (both
//! ways, since a bucket hole may be darker or lighter than its
//! surroundings) into a downscaled 2D accumulator. Accepted peaks get their
//! radius from the mode of supporting edge-pixel distances.

use crate::edge::{canny_from_gradient, sobel, CannyParams};
use crate::error::{Error, Result};
use crate::image::{GrayImage, Image};
use serde::{Deserialize, Serialize};

/// Hough detection parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HoughParams {
    /// Accumulator downscale ratio; cells are `dp x dp` pixels.
    pub dp: f64,
    /// Minimum distance between accepted circle centers, full-resolution px.
    pub min_dist: f64,
    pub r_min: u32,
    pub r_max: u32,
    /// Minimum center votes for a candidate cell.
    pub acc_threshold: u32,
    pub canny: CannyParams,
}

impl Default for HoughParams {
    fn default() -> Self {
        HoughParams {
            dp: 1.5,
            min_dist: 200.0,
            r_min: 30,
            r_max: 35,
            acc_threshold: 25,
            canny: CannyParams::default(),
        }
    }
}

impl HoughParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.dp >= 1.0) {
            return Err(Error::param(format!("dp must be >= 1, got {}", self.dp)));
        }
        if self.r_min == 0 || self.r_min > self.r_max {
            return Err(Error::param(format!(
                "radii must satisfy 0 < r_min <= r_max, got {}..{}",
                self.r_min, self.r_max
            )));
        }
        if !(self.min_dist > 0.0) {
            return Err(Error::param("min_dist must be > 0"));
        }
        if self.acc_threshold == 0 {
            return Err(Error::param("acc_threshold must be >= 1"));
        }
        self.canny.validate()
    }
}

/// A detected circle in full-resolution image coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: (f64, f64),
    pub radius: f64,
    /// Center votes in the winning accumulator cell.
    pub score: u32,
}

/// Detected circles sorted by descending vote score.
pub fn hough_circles(img: &GrayImage, params: &HoughParams) -> Vec<Circle> {
    hough_circles_with_accumulator(img, params).0
}

/// As [`hough_circles`], also returning the center accumulator for debug
/// dumps.
pub fn hough_circles_with_accumulator(
    img: &GrayImage,
    params: &HoughParams,
) -> (Vec<Circle>, Image<u32>) {
    params.validate().expect("invalid hough params");
    let (w, h) = (img.width(), img.height());
    let dp = params.dp;
    let acc_w = (w as f64 / dp).ceil() as usize;
    let acc_h = (h as f64 / dp).ceil() as usize;

    let grad = sobel(img);
    let edges = canny_from_gradient(&grad, &params.canny);

    let mut edge_pixels: Vec<(usize, usize)> = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if edges.get(x, y) {
                edge_pixels.push((x, y));
            }
        }
    }

    let mut acc = vec![0u32; acc_w * acc_h];
    for &(x, y) in &edge_pixels {
        let gx = grad.gx(x, y) as f64;
        let gy = grad.gy(x, y) as f64;
        let norm = (gx * gx + gy * gy).sqrt();
        if norm == 0.0 {
            continue;
        }
        let (ux, uy) = (gx / norm, gy / norm);
        for sign in [1.0f64, -1.0] {
            let mut last_cell = usize::MAX;
            for r in params.r_min..=params.r_max {
                let cx = x as f64 + sign * ux * r as f64;
                let cy = y as f64 + sign * uy * r as f64;
                if cx < 0.0 || cy < 0.0 {
                    continue;
                }
                let (cu, cv) = ((cx / dp) as usize, (cy / dp) as usize);
                if cu >= acc_w || cv >= acc_h {
                    continue;
                }
                let cell = cv * acc_w + cu;
                if cell != last_cell {
                    acc[cell] += 1;
                    last_cell = cell;
                }
            }
        }
    }

    // Candidate cells: above threshold and local maxima. Equal-vote
    // neighbors are resolved toward the lexicographically smaller (v, u)
    // so plateau cells yield exactly one candidate.
    let mut candidates: Vec<(u32, usize, usize)> = Vec::new();
    for cv in 0..acc_h {
        for cu in 0..acc_w {
            let votes = acc[cv * acc_w + cu];
            if votes < params.acc_threshold {
                continue;
            }
            let mut is_peak = true;
            'nbrs: for dy in -1isize..=1 {
                for dx in -1isize..=1 {
                    if dx == 0 && dy == 0 {
                        continue;
                    }
                    let (nu, nv) = (cu as isize + dx, cv as isize + dy);
                    if nu < 0 || nv < 0 || nu as usize >= acc_w || nv as usize >= acc_h {
                        continue;
                    }
                    let nvotes = acc[nv as usize * acc_w + nu as usize];
                    if nvotes > votes
                        || (nvotes == votes && (nv as usize, nu as usize) < (cv, cu))
                    {
                        is_peak = false;
                        break 'nbrs;
                    }
                }
            }
            if is_peak {
                candidates.push((votes, cv, cu));
            }
        }
    }
    candidates.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut circles: Vec<Circle> = Vec::new();
    for (votes, cv, cu) in candidates {
        let center = ((cu as f64 + 0.5) * dp, (cv as f64 + 0.5) * dp);
        if center.0 >= w as f64 || center.1 >= h as f64 {
            continue;
        }
        let far_enough = circles.iter().all(|c| {
            let d2 = (c.center.0 - center.0).powi(2) + (c.center.1 - center.1).powi(2);
            d2 >= params.min_dist * params.min_dist
        });
        if !far_enough {
            continue;
        }
        let radius = estimate_radius(&edge_pixels, center, params.r_min, params.r_max);
        circles.push(Circle {
            center,
            radius,
            score: votes,
        });
    }

    let acc_img = Image::from_vec(acc_w.max(1), acc_h.max(1), acc).expect("accumulator dims");
    (circles, acc_img)
}

/// Mode of rounded edge-pixel distances within `[r_min, r_max]`, 1 px bins,
/// ties broken toward the smaller radius.
fn estimate_radius(edges: &[(usize, usize)], center: (f64, f64), r_min: u32, r_max: u32) -> f64 {
    let mut bins = vec![0u32; (r_max - r_min + 1) as usize];
    for &(x, y) in edges {
        let d = ((x as f64 - center.0).powi(2) + (y as f64 - center.1).powi(2)).sqrt();
        let r = d.round();
        if r >= r_min as f64 && r <= r_max as f64 {
            bins[(r as u32 - r_min) as usize] += 1;
        }
    }
    let mut best = 0usize;
    for (i, &count) in bins.iter().enumerate() {
        if count > bins[best] {
            best = i;
        }
    }
    (r_min + best as u32) as f64
}
