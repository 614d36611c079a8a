//! Vision, localization, and motion primitives for automating a bench-top
//! centrifuge with a camera-carrying gantry.
//!
//! The pipeline runs in two branches over one top-down rotor image:
//!
//! * grayscale -> median blur -> CLAHE -> annular mask -> circular Hough
//!   Transform, which finds the swing-bucket holes, and
//! * HSV conversion -> color masks -> contour tracing -> occupancy
//!   classification, which decides whether each hole holds a test tube.
//!
//! Detected holes are mapped to gantry coordinates through the rotor-angle
//! construction in [`localization`], and [`motion`] turns target poses into
//! G-code plans executed against the simulated controller in [`controller`].
//! [`scenegen`] renders deterministic synthetic rotor scenes with exact
//! ground truth so the whole chain can be validated end to end without
//! hardware.

pub mod annotate;
pub mod contour;
pub mod controller;
pub mod detmath;
pub mod edge;
pub mod error;
pub mod gcode;
pub mod hough;
pub mod image;
pub mod imaging;
pub mod localization;
pub mod motion;
pub mod pnm;
pub mod scenegen;
pub mod tubes;

pub use crate::error::{Error, Result};
pub use crate::image::{GrayImage, HsvImage, Image, Mask, RgbImage};
