//! Binary PPM (P6) and PGM (P5) image I/O, maxval 255.
//!
//! The writer never emits comments; the reader skips `#` comment lines in
//! headers so externally produced files load fine.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::image::{GrayImage, Rgb, RgbImage};

pub fn write_ppm(img: &RgbImage, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write!(w, "P6\n{} {}\n255\n", img.width(), img.height())?;
    let mut buf = Vec::with_capacity(img.width() * img.height() * 3);
    for p in img.pixels() {
        buf.extend_from_slice(&[p.r, p.g, p.b]);
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn write_pgm(img: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write!(w, "P5\n{} {}\n255\n", img.width(), img.height())?;
    w.write_all(img.pixels())?;
    Ok(())
}

pub fn read_ppm(path: impl AsRef<Path>) -> Result<RgbImage> {
    let mut bytes = Vec::new();
    BufReader::new(File::open(path)?).read_to_end(&mut bytes)?;
    let (w, h, data) = parse_header(&bytes, b"P6", 3)?;
    let pixels = data
        .chunks_exact(3)
        .map(|c| Rgb::new(c[0], c[1], c[2]))
        .collect();
    RgbImage::from_vec(w, h, pixels)
}

pub fn read_pgm(path: impl AsRef<Path>) -> Result<GrayImage> {
    let mut bytes = Vec::new();
    BufReader::new(File::open(path)?).read_to_end(&mut bytes)?;
    let (w, h, data) = parse_header(&bytes, b"P5", 1)?;
    GrayImage::from_vec(w, h, data.to_vec())
}

/// Parses magic, width, height, and maxval, returning the raster slice.
/// Header tokens are whitespace separated; `#` starts a comment running to
/// end of line.
fn parse_header<'a>(
    bytes: &'a [u8],
    magic: &[u8],
    bytes_per_pixel: usize,
) -> Result<(usize, usize, &'a [u8])> {
    let mut pos = 0;
    let token = |pos: &mut usize| -> Result<&[u8]> {
        // skip whitespace and comments
        loop {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
            if *pos < bytes.len() && bytes[*pos] == b'#' {
                while *pos < bytes.len() && bytes[*pos] != b'\n' {
                    *pos += 1;
                }
            } else {
                break;
            }
        }
        let start = *pos;
        while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if start == *pos {
            return Err(Error::Decode("truncated header".into()));
        }
        Ok(&bytes[start..*pos])
    };

    if token(&mut pos)? != magic {
        return Err(Error::Decode(format!(
            "expected {} magic",
            String::from_utf8_lossy(magic)
        )));
    }
    let parse_num = |t: &[u8]| -> Result<usize> {
        std::str::from_utf8(t)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Decode("bad header number".into()))
    };
    let w = parse_num(token(&mut pos)?)?;
    let h = parse_num(token(&mut pos)?)?;
    let maxval = parse_num(token(&mut pos)?)?;
    if maxval != 255 {
        return Err(Error::Decode(format!("unsupported maxval {maxval}")));
    }
    // exactly one whitespace byte separates the header from the raster
    pos += 1;
    let need = w * h * bytes_per_pixel;
    if pos + need > bytes.len() {
        return Err(Error::Decode("truncated raster".into()));
    }
    Ok((w, h, &bytes[pos..pos + need]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detmath::SplitMix64;
    use crate::image::Image;

    #[test]
    fn ppm_round_trip() {
        let dir = std::env::temp_dir().join("centrifuge_core_pnm_test");
        std::fs::create_dir_all(&dir).unwrap();
        let mut rng = SplitMix64::new(3);
        let img = Image::from_fn(37, 21, |_, _| {
            Rgb::new(
                rng.next_u64() as u8,
                rng.next_u64() as u8,
                rng.next_u64() as u8,
            )
        });
        let path = dir.join("rt.ppm");
        write_ppm(&img, &path).unwrap();
        let back = read_ppm(&path).unwrap();
        assert_eq!(img, back);
    }

    #[test]
    fn pgm_round_trip_and_comments() {
        let dir = std::env::temp_dir().join("centrifuge_core_pnm_test");
        std::fs::create_dir_all(&dir).unwrap();
        let img = Image::from_fn(5, 4, |x, y| (x * 7 + y * 13) as u8);
        let path = dir.join("rt.pgm");
        write_pgm(&img, &path).unwrap();
        assert_eq!(read_pgm(&path).unwrap(), img);

        // hand-built file with comment lines in the header
        let mut bytes = b"P5\n# a comment\n5 4\n# another\n255\n".to_vec();
        bytes.extend_from_slice(img.pixels());
        let path2 = dir.join("commented.pgm");
        std::fs::write(&path2, &bytes).unwrap();
        assert_eq!(read_pgm(&path2).unwrap(), img);
    }

    #[test]
    fn rejects_bad_files() {
        let dir = std::env::temp_dir().join("centrifuge_core_pnm_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.pgm");
        std::fs::write(&path, b"P5\n3 3\n255\nxx").unwrap();
        assert!(read_pgm(&path).is_err());
        std::fs::write(&path, b"P4\n3 3\n255\n").unwrap();
        assert!(read_pgm(&path).is_err());
    }
}
