//! Row-major pixel grids in the four formats the pipeline uses.

use crate::error::{Error, Result};

/// 8-bit RGB pixel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rgb {
    pub r: u8,
    pub g: u8,
    pub b: u8,
}

impl Rgb {
    pub const fn new(r: u8, g: u8, b: u8) -> Self {
        Rgb { r, g, b }
    }
}

impl From<[u8; 3]> for Rgb {
    fn from(c: [u8; 3]) -> Self {
        Rgb::new(c[0], c[1], c[2])
    }
}

/// HSV pixel: hue in degrees `[0, 360)`, saturation and value in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hsv {
    pub h: f32,
    pub s: f32,
    pub v: f32,
}

/// Pixel formats storable in an [`Image`].
pub trait Pixel: Copy {
    const ZERO: Self;
}

impl Pixel for u8 {
    const ZERO: Self = 0;
}

impl Pixel for bool {
    const ZERO: Self = false;
}

impl Pixel for Rgb {
    const ZERO: Self = Rgb::new(0, 0, 0);
}

impl Pixel for Hsv {
    const ZERO: Self = Hsv {
        h: 0.0,
        s: 0.0,
        v: 0.0,
    };
}

impl Pixel for u32 {
    const ZERO: Self = 0;
}

/// Rectangular pixel grid, row major. `(x, y)` indexes column then row,
/// matching image coordinates `(u, v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Image<P: Pixel> {
    width: usize,
    height: usize,
    pixels: Vec<P>,
}

pub type GrayImage = Image<u8>;
pub type RgbImage = Image<Rgb>;
pub type HsvImage = Image<Hsv>;
/// Binary image; `true` marks a set pixel.
pub type Mask = Image<bool>;

impl<P: Pixel> Image<P> {
    /// Zero-filled image. Panics if either dimension is zero.
    pub fn new(width: usize, height: usize) -> Self {
        assert!(width >= 1 && height >= 1, "image dimensions must be >= 1");
        Image {
            width,
            height,
            pixels: vec![P::ZERO; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> P) -> Self {
        let mut img = Image::new(width, height);
        for y in 0..height {
            for x in 0..width {
                img.pixels[y * width + x] = f(x, y);
            }
        }
        img
    }

    pub fn from_vec(width: usize, height: usize, pixels: Vec<P>) -> Result<Self> {
        if width < 1 || height < 1 {
            return Err(Error::param("image dimensions must be >= 1"));
        }
        if pixels.len() != width * height {
            return Err(Error::param(format!(
                "pixel count {} does not match {}x{}",
                pixels.len(),
                width,
                height
            )));
        }
        Ok(Image {
            width,
            height,
            pixels,
        })
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> P {
        debug_assert!(x < self.width && y < self.height);
        self.pixels[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, p: P) {
        debug_assert!(x < self.width && y < self.height);
        self.pixels[y * self.width + x] = p;
    }

    /// Read with edge replication: out-of-range coordinates clamp to the
    /// nearest edge pixel.
    #[inline]
    pub fn get_clamped(&self, x: isize, y: isize) -> P {
        let cx = x.clamp(0, self.width as isize - 1) as usize;
        let cy = y.clamp(0, self.height as isize - 1) as usize;
        self.pixels[cy * self.width + cx]
    }

    #[inline]
    pub fn in_bounds(&self, x: isize, y: isize) -> bool {
        x >= 0 && y >= 0 && (x as usize) < self.width && (y as usize) < self.height
    }

    pub fn pixels(&self) -> &[P] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [P] {
        &mut self.pixels
    }

    pub fn row(&self, y: usize) -> &[P] {
        &self.pixels[y * self.width..(y + 1) * self.width]
    }

    pub fn map<Q: Pixel>(&self, f: impl Fn(P) -> Q) -> Image<Q> {
        Image {
            width: self.width,
            height: self.height,
            pixels: self.pixels.iter().map(|&p| f(p)).collect(),
        }
    }

    pub fn same_dims<Q: Pixel>(&self, other: &Image<Q>) -> bool {
        self.width == other.width && self.height == other.height
    }
}

impl Mask {
    pub fn count_set(&self) -> usize {
        self.pixels().iter().filter(|&&p| p).count()
    }
}
