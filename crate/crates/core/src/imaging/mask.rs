use crate::error::{Error, Result};
use crate::image::{Image, Pixel};
use serde::{Deserialize, Serialize};

/// Annulus around the rotor center: one mask standing in for the pair of
/// center-block and background-block masks, which compose to exactly this
/// shape.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AnnularMask {
    pub center: (f64, f64),
    pub r_inner: f64,
    pub r_outer: f64,
}

impl AnnularMask {
    pub fn new(center: (f64, f64), r_inner: f64, r_outer: f64) -> Result<Self> {
        if !(0.0 <= r_inner && r_inner < r_outer) {
            return Err(Error::param(format!(
                "annulus radii must satisfy 0 <= r_inner < r_outer, got {r_inner}, {r_outer}"
            )));
        }
        Ok(AnnularMask {
            center,
            r_inner,
            r_outer,
        })
    }

    #[inline]
    pub fn contains(&self, x: f64, y: f64) -> bool {
        let d2 = (x - self.center.0).powi(2) + (y - self.center.1).powi(2);
        d2 >= self.r_inner * self.r_inner && d2 <= self.r_outer * self.r_outer
    }
}

/// Keeps pixels whose distance `d` from the mask center satisfies
/// `r_inner <= d <= r_outer`; all others become the format's zero value.
pub fn apply_annular_mask<P: Pixel>(img: &Image<P>, mask: &AnnularMask) -> Image<P> {
    Image::from_fn(img.width(), img.height(), |x, y| {
        if mask.contains(x as f64, y as f64) {
            img.get(x, y)
        } else {
            P::ZERO
        }
    })
}
