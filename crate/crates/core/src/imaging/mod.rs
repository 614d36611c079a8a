//! Pixel-level pre-processing primitives: color conversion, median blur,
//! CLAHE, binary dilation, and annular masking.
//!
//! All operations are pure functions of their inputs and never mutate in
//! place.

mod clahe;
mod color;
mod filter;
mod mask;

pub use clahe::{clahe, ClaheParams};
pub use color::{hsv_to_rgb, rgb_to_hsv, to_grayscale};
pub use filter::{dilate, median_blur};
pub use mask::{apply_annular_mask, AnnularMask};
