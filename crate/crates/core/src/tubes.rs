//! Empty-vs-occupied decisions for detected buckets: HSV color masks,
//! contour extraction, an area gate, and the center-in-circle test.

use crate::contour::Contour;
use crate::error::{Error, Result};
use crate::hough::Circle;
use crate::image::{Hsv, HsvImage, Mask};
use crate::imaging::{apply_annular_mask, dilate, AnnularMask};
use serde::{Deserialize, Serialize};

/// Inclusive HSV band. Hue is in degrees and wraps when `h_lo > h_hi`,
/// e.g. `[345, 70]` covers red through yellow across the 0 mark.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HsvRange {
    pub label: String,
    pub h_lo: f32,
    pub h_hi: f32,
    pub s_lo: f32,
    pub s_hi: f32,
    pub v_lo: f32,
    pub v_hi: f32,
}

impl HsvRange {
    pub fn validate(&self) -> Result<()> {
        if self.s_lo > self.s_hi || self.v_lo > self.v_hi {
            return Err(Error::param(format!(
                "range {}: saturation/value bounds out of order",
                self.label
            )));
        }
        Ok(())
    }

    pub fn contains(&self, p: Hsv) -> bool {
        let hue_ok = if self.h_lo <= self.h_hi {
            p.h >= self.h_lo && p.h <= self.h_hi
        } else {
            p.h >= self.h_lo || p.h <= self.h_hi
        };
        hue_ok
            && p.s >= self.s_lo
            && p.s <= self.s_hi
            && p.v >= self.v_lo
            && p.v <= self.v_hi
    }
}

/// Default bands for standard tube colors: warm (red/orange/yellow), green,
/// and magenta (pink/purple). Blue hues and low-saturation grays fall
/// outside all three on purpose; they match the centrifuge base too
/// closely.
pub fn default_ranges() -> Vec<HsvRange> {
    vec![
        HsvRange {
            label: "warm".into(),
            h_lo: 345.0,
            h_hi: 70.0,
            s_lo: 0.35,
            s_hi: 1.0,
            v_lo: 0.2,
            v_hi: 1.0,
        },
        HsvRange {
            label: "green".into(),
            h_lo: 70.0,
            h_hi: 165.0,
            s_lo: 0.35,
            s_hi: 1.0,
            v_lo: 0.2,
            v_hi: 1.0,
        },
        HsvRange {
            label: "magenta".into(),
            h_lo: 270.0,
            h_hi: 345.0,
            s_lo: 0.25,
            s_hi: 1.0,
            v_lo: 0.2,
            v_hi: 1.0,
        },
    ]
}

/// One binary mask per range: a pixel is set iff it lies inside the annulus
/// and within the band. Each mask is dilated with a `dilate_k` square
/// element to grow the object area before contour tracing.
pub fn build_color_masks(
    hsv: &HsvImage,
    ranges: &[HsvRange],
    annulus: &AnnularMask,
    dilate_k: usize,
) -> Result<Vec<Mask>> {
    if ranges.is_empty() {
        return Err(Error::param("at least one HSV range required"));
    }
    let masked = apply_annular_mask(hsv, annulus);
    let mut masks = Vec::with_capacity(ranges.len());
    for range in ranges {
        range.validate()?;
        let raw = Mask::from_fn(hsv.width(), hsv.height(), |x, y| {
            annulus.contains(x as f64, y as f64) && range.contains(masked.get(x, y))
        });
        masks.push(dilate(&raw, dilate_k)?);
    }
    Ok(masks)
}

/// Occupancy of one detected bucket.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Occupancy {
    Empty,
    Occupied { color_label: String },
}

/// A bucket circle together with its occupancy decision.
#[derive(Debug, Clone, PartialEq)]
pub struct BucketObservation {
    pub circle: Circle,
    pub occupancy: Occupancy,
    pub matched_contour: Option<Contour>,
}

/// Matches area-gated contours to circles by the bounding-box-center-in-
/// circle rule. The area gate is strict on both ends; the inclusion test
/// counts the boundary as inside. When several contours land in one circle
/// the largest area wins.
///
/// A contour whose center falls inside two circles violates the geometry
/// guaranteed by `min_dist >= 2 r_max + 1` and reports an internal
/// consistency error.
pub fn classify_buckets(
    circles: &[Circle],
    contours: &[Contour],
    area_lo: f64,
    area_hi: f64,
) -> Result<Vec<BucketObservation>> {
    let accepted: Vec<&Contour> = contours
        .iter()
        .filter(|c| c.area > area_lo && c.area < area_hi)
        .collect();

    for contour in &accepted {
        let (cx, cy) = contour.bbox.center();
        let hits = circles
            .iter()
            .filter(|c| inside_circle(cx, cy, c))
            .count();
        if hits > 1 {
            return Err(Error::Inconsistency(format!(
                "contour at ({cx:.1},{cy:.1}) center lies inside {hits} circles"
            )));
        }
    }

    Ok(circles
        .iter()
        .map(|circle| {
            let best = accepted
                .iter()
                .filter(|c| {
                    let (cx, cy) = c.bbox.center();
                    inside_circle(cx, cy, circle)
                })
                .max_by(|a, b| {
                    a.area
                        .total_cmp(&b.area)
                        // order-independent tie-break: prefer the contour
                        // closer to the raster origin, then by label
                        .then_with(|| {
                            (b.bbox.min.1, b.bbox.min.0).cmp(&(a.bbox.min.1, a.bbox.min.0))
                        })
                        .then_with(|| b.color_label.cmp(&a.color_label))
                });
            match best {
                Some(contour) => BucketObservation {
                    circle: *circle,
                    occupancy: Occupancy::Occupied {
                        color_label: contour.color_label.clone(),
                    },
                    matched_contour: Some((*contour).clone()),
                },
                None => BucketObservation {
                    circle: *circle,
                    occupancy: Occupancy::Empty,
                    matched_contour: None,
                },
            }
        })
        .collect())
}

fn inside_circle(cx: f64, cy: f64, circle: &Circle) -> bool {
    let d2 = (cx - circle.center.0).powi(2) + (cy - circle.center.1).powi(2);
    d2 <= circle.radius * circle.radius
}
