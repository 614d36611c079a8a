//! Drawing helpers for the annotated inspection image: detected circles
//! with center dots, contour bounding rectangles, and rectangle centers.

use crate::contour::BoundingBox;
use crate::image::{Rgb, RgbImage};
use crate::tubes::BucketObservation;

pub const CIRCLE_COLOR: Rgb = Rgb::new(40, 220, 40);
pub const BBOX_COLOR: Rgb = Rgb::new(230, 40, 40);
pub const CENTER_COLOR: Rgb = Rgb::new(40, 80, 230);

pub fn draw_circle_outline(img: &mut RgbImage, center: (f64, f64), radius: f64, color: Rgb) {
    let (w, h) = (img.width() as isize, img.height() as isize);
    let x0 = ((center.0 - radius - 2.0).floor() as isize).max(0);
    let x1 = ((center.0 + radius + 2.0).ceil() as isize).min(w - 1);
    let y0 = ((center.1 - radius - 2.0).floor() as isize).max(0);
    let y1 = ((center.1 + radius + 2.0).ceil() as isize).min(h - 1);
    for y in y0..=y1 {
        for x in x0..=x1 {
            let d = ((x as f64 - center.0).powi(2) + (y as f64 - center.1).powi(2)).sqrt();
            if (d - radius).abs() <= 1.0 {
                img.set(x as usize, y as usize, color);
            }
        }
    }
}

pub fn draw_rect(img: &mut RgbImage, bbox: &BoundingBox, color: Rgb) {
    let (w, h) = (img.width(), img.height());
    let (x0, y0) = (bbox.min.0 as usize, bbox.min.1 as usize);
    let (x1, y1) = ((bbox.max.0 as usize).min(w - 1), (bbox.max.1 as usize).min(h - 1));
    for x in x0..=x1 {
        img.set(x, y0, color);
        img.set(x, y1, color);
    }
    for y in y0..=y1 {
        img.set(x0, y, color);
        img.set(x1, y, color);
    }
}

pub fn draw_dot(img: &mut RgbImage, center: (f64, f64), color: Rgb) {
    let (cx, cy) = (center.0.round() as isize, center.1.round() as isize);
    for dy in -1isize..=1 {
        for dx in -1isize..=1 {
            if img.in_bounds(cx + dx, cy + dy) {
                img.set((cx + dx) as usize, (cy + dy) as usize, color);
            }
        }
    }
}

/// Overlay in the style of the sample CV output figures: green hole
/// circles with their centers, red boxes around matched contours, blue
/// box-center dots.
pub fn annotate_observations(base: &RgbImage, observations: &[BucketObservation]) -> RgbImage {
    let mut img = base.clone();
    for obs in observations {
        draw_circle_outline(&mut img, obs.circle.center, obs.circle.radius, CIRCLE_COLOR);
        draw_dot(&mut img, obs.circle.center, CIRCLE_COLOR);
        if let Some(contour) = &obs.matched_contour {
            draw_rect(&mut img, &contour.bbox, BBOX_COLOR);
            draw_dot(&mut img, contour.bbox.center(), CENTER_COLOR);
        }
    }
    img
}
