//! Suzuki-Abe border following on binary masks.
//!
//! Traces both outer and hole borders so marker bookkeeping stays correct,
//! but only outer borders are returned. Components are discovered in raster
//! order, which fixes the output order.

use crate::image::Mask;

/// Axis-aligned bounding box in pixel coordinates, both corners inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundingBox {
    pub min: (u32, u32),
    pub max: (u32, u32),
}

impl BoundingBox {
    pub fn center(&self) -> (f64, f64) {
        (
            (self.min.0 + self.max.0) as f64 / 2.0,
            (self.min.1 + self.max.1) as f64 / 2.0,
        )
    }

    pub fn contains(&self, p: (u32, u32)) -> bool {
        p.0 >= self.min.0 && p.0 <= self.max.0 && p.1 >= self.min.1 && p.1 <= self.max.1
    }
}

/// Closed outer border of one connected component.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    /// Border pixels `(u, v)` in traversal order; the first is 8-adjacent
    /// to the last.
    pub boundary: Vec<(u32, u32)>,
    /// Shoelace polygon area over the boundary pixel centers, px^2.
    pub area: f64,
    pub bbox: BoundingBox,
    /// Label of the color mask this contour was traced from.
    pub color_label: String,
}

// Neighbor offsets (di, dj) clockwise starting west, with i = row.
const CW: [(i32, i32); 8] = [
    (0, -1),
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
    (1, 0),
    (1, -1),
];

fn dir_index(from: (i32, i32), to: (i32, i32)) -> usize {
    let d = (to.0 - from.0, to.1 - from.1);
    CW.iter().position(|&o| o == d).expect("not a neighbor")
}

/// Outer borders of all 8-connected components, in raster order of their
/// top-left border pixel. `label` is attached to every returned contour.
pub fn find_contours(mask: &Mask, label: &str) -> Vec<Contour> {
    let (w, h) = (mask.width() as i32, mask.height() as i32);
    let mut f: Vec<i32> = mask.pixels().iter().map(|&p| i32::from(p)).collect();
    let at = |f: &Vec<i32>, p: (i32, i32)| -> i32 {
        if p.0 < 0 || p.1 < 0 || p.0 >= h || p.1 >= w {
            0
        } else {
            f[(p.0 * w + p.1) as usize]
        }
    };

    let mut contours = Vec::new();
    let mut nbd = 1i32;

    for i in 0..h {
        for j in 0..w {
            let fij = f[(i * w + j) as usize];
            if fij == 0 {
                continue;
            }
            let start_neighbor = if fij == 1 && at(&f, (i, j - 1)) == 0 {
                Some((i, j - 1)) // outer border
            } else if fij >= 1 && at(&f, (i, j + 1)) == 0 {
                Some((i, j + 1)) // hole border
            } else {
                None
            };
            let Some(neighbor) = start_neighbor else {
                continue;
            };
            let is_outer = neighbor.1 < j;
            nbd += 1;

            // Step 3.1: clockwise scan around the start pixel.
            let mut first = None;
            let d0 = dir_index((i, j), neighbor);
            for k in 0..8 {
                let d = CW[(d0 + k) % 8];
                let p = (i + d.0, j + d.1);
                if at(&f, p) != 0 {
                    first = Some(p);
                    break;
                }
            }
            let Some(first) = first else {
                // isolated pixel
                f[(i * w + j) as usize] = -nbd;
                if is_outer {
                    contours.push(build_contour(vec![(j as u32, i as u32)], label));
                }
                continue;
            };

            let mut prev = first;
            let mut cur = (i, j);
            let mut boundary: Vec<(u32, u32)> = Vec::new();
            loop {
                // Step 3.3: counterclockwise from the next slot after prev.
                let d_prev = dir_index(cur, prev);
                let mut next = None;
                let mut examined_east_zero = false;
                for k in 1..=8 {
                    let d = CW[(d_prev + 8 - (k % 8)) % 8];
                    let p = (cur.0 + d.0, cur.1 + d.1);
                    if at(&f, p) != 0 {
                        next = Some(p);
                        break;
                    }
                    if d == (0, 1) {
                        examined_east_zero = true;
                    }
                }
                let next = next.expect("trace always returns to prev");
                boundary.push((cur.1 as u32, cur.0 as u32));
                // Step 3.4: marking.
                let idx = (cur.0 * w + cur.1) as usize;
                if examined_east_zero {
                    f[idx] = -nbd;
                } else if f[idx] == 1 {
                    f[idx] = nbd;
                }
                // Step 3.5: termination.
                if next == (i, j) && cur == first {
                    break;
                }
                prev = cur;
                cur = next;
            }
            if is_outer {
                contours.push(build_contour(boundary, label));
            }
        }
    }
    contours
}

fn build_contour(boundary: Vec<(u32, u32)>, label: &str) -> Contour {
    let area = shoelace_area(&boundary);
    let mut min = boundary[0];
    let mut max = boundary[0];
    for &(u, v) in &boundary {
        min.0 = min.0.min(u);
        min.1 = min.1.min(v);
        max.0 = max.0.max(u);
        max.1 = max.1.max(v);
    }
    Contour {
        boundary,
        area,
        bbox: BoundingBox { min, max },
        color_label: label.to_string(),
    }
}

/// Shoelace area of the closed polygon through the boundary pixel centers.
fn shoelace_area(boundary: &[(u32, u32)]) -> f64 {
    if boundary.len() < 3 {
        return 0.0;
    }
    let mut twice_area = 0i64;
    for k in 0..boundary.len() {
        let (x0, y0) = boundary[k];
        let (x1, y1) = boundary[(k + 1) % boundary.len()];
        twice_area += x0 as i64 * y1 as i64 - x1 as i64 * y0 as i64;
    }
    twice_area.abs() as f64 / 2.0
}
