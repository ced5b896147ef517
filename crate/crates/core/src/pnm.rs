//! Netpbm grayscale (PGM) and color (PPM) codec, 8-bit only.
//!
//! Reading accepts the ASCII (`P2`/`P3`) and binary (`P5`/`P6`) variants and
//! skips `#` comments. Writing always emits the canonical layout
//!
//! ```text
//! <magic>\n<width> <height>\n255\n<payload>
//! ```
//!
//! with no comments. ASCII payloads put one image row per line with samples
//! separated by single spaces.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, PnmError, Result};
use crate::image::{GrayImage, Image, RgbImage};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Gray,
    Rgb,
}

impl Kind {
    fn channels(self) -> usize {
        match self {
            Kind::Gray => 1,
            Kind::Rgb => 3,
        }
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    /// Next decimal token, saturating at `u64::MAX`. `None` when the next
    /// token is missing or not a number.
    fn number(&mut self) -> Option<u64> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(&b) = self.bytes.get(self.pos) {
            if !b.is_ascii_digit() {
                break;
            }
            value = value.saturating_mul(10).saturating_add(u64::from(b - b'0'));
            self.pos += 1;
        }
        if self.pos == start {
            return None;
        }
        // a token must end at whitespace, a comment, or end of input
        match self.bytes.get(self.pos) {
            None => Some(value),
            Some(&b) if b.is_ascii_whitespace() || b == b'#' => Some(value),
            Some(_) => None,
        }
    }
}

/// Decodes a PGM or PPM byte stream.
pub fn read_pnm(bytes: &[u8]) -> Result<Image, PnmError> {
    let (kind, ascii) = match bytes.get(..2) {
        Some(b"P2") => (Kind::Gray, true),
        Some(b"P5") => (Kind::Gray, false),
        Some(b"P3") => (Kind::Rgb, true),
        Some(b"P6") => (Kind::Rgb, false),
        _ => return Err(PnmError::BadMagic),
    };
    let mut cur = Cursor { bytes, pos: 2 };
    if !matches!(bytes.get(2), Some(b) if b.is_ascii_whitespace() || *b == b'#') {
        return Err(PnmError::BadMagic);
    }

    let width = cur.number().ok_or(PnmError::BadHeaderField { field: "width" })?;
    let height = cur.number().ok_or(PnmError::BadHeaderField { field: "height" })?;
    let maxval = cur.number().ok_or(PnmError::BadHeaderField { field: "maxval" })?;
    if width == 0 {
        return Err(PnmError::ZeroDimension { field: "width" });
    }
    if height == 0 {
        return Err(PnmError::ZeroDimension { field: "height" });
    }
    if maxval != 255 {
        return Err(PnmError::UnsupportedMaxval(maxval.min(u64::from(u32::MAX)) as u32));
    }
    let overflow = PnmError::DimensionOverflow {
        width: width.min(usize::MAX as u64) as usize,
        height: height.min(usize::MAX as u64) as usize,
    };
    let w = usize::try_from(width).map_err(|_| overflow.clone())?;
    let h = usize::try_from(height).map_err(|_| overflow.clone())?;
    let expected = w
        .checked_mul(h)
        .and_then(|n| n.checked_mul(kind.channels()))
        .filter(|&n| n <= isize::MAX as usize)
        .ok_or(overflow)?;

    let samples = if ascii {
        let mut samples = Vec::with_capacity(expected.min(bytes.len()));
        while samples.len() < expected {
            match cur.number() {
                Some(v) if v <= 255 => samples.push(v as u8),
                Some(v) => {
                    return Err(PnmError::SampleOutOfRange {
                        index: samples.len(),
                        value: v.min(u64::from(u32::MAX)) as u32,
                    })
                }
                None => {
                    return Err(PnmError::Truncated {
                        expected,
                        found: samples.len(),
                    })
                }
            }
        }
        samples
    } else {
        // exactly one whitespace byte separates maxval from the raster
        match bytes.get(cur.pos) {
            Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
            _ => return Err(PnmError::BadHeaderField { field: "maxval" }),
        }
        let payload = &bytes[cur.pos..];
        if payload.len() < expected {
            return Err(PnmError::Truncated {
                expected,
                found: payload.len(),
            });
        }
        payload[..expected].to_vec()
    };

    Ok(match kind {
        Kind::Gray => Image::Gray(GrayImage::from_vec(w, h, samples).expect("validated dimensions")),
        Kind::Rgb => Image::Rgb(RgbImage::from_interleaved(w, h, &samples).expect("validated dimensions")),
    })
}

/// Encodes an image in the canonical layout. `ascii` selects `P2`/`P3`,
/// otherwise `P5`/`P6`.
pub fn write_pnm(img: &Image, ascii: bool) -> Vec<u8> {
    let (magic, channels, samples) = match img {
        Image::Gray(g) => (if ascii { "P2" } else { "P5" }, 1, g.pixels().to_vec()),
        Image::Rgb(c) => (if ascii { "P3" } else { "P6" }, 3, c.interleaved()),
    };
    let (width, height) = img.dimensions();
    let mut out = format!("{magic}\n{width} {height}\n255\n").into_bytes();
    if ascii {
        let mut text = String::with_capacity(samples.len() * 4);
        for row in samples.chunks(width * channels) {
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    text.push(' ');
                }
                write!(text, "{v}").expect("writing to a String cannot fail");
            }
            text.push('\n');
        }
        out.extend_from_slice(text.as_bytes());
    } else {
        out.extend_from_slice(&samples);
    }
    out
}

pub fn read_pnm_file(path: impl AsRef<Path>) -> Result<Image> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(read_pnm(&bytes)?)
}

pub fn write_pnm_file(path: impl AsRef<Path>, img: &Image, ascii: bool) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, write_pnm(img, ascii)).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gray(img: Image) -> GrayImage {
        match img {
            Image::Gray(g) => g,
            Image::Rgb(_) => panic!("expected gray"),
        }
    }

    #[test]
    fn minimal_ascii_pgm() {
        let img = gray(read_pnm(b"P2\n1 1\n255\n7\n").unwrap());
        assert_eq!(img.dimensions(), (1, 1));
        assert_eq!(img.pixels(), &[7]);
        assert_eq!(write_pnm(&Image::Gray(img), true), b"P2\n1 1\n255\n7\n");
    }

    #[test]
    fn minimal_binary_pgm() {
        let bytes = b"P5\n2 1\n255\n\x00\xff";
        let img = gray(read_pnm(bytes).unwrap());
        assert_eq!(img.pixels(), &[0, 255]);
        assert_eq!(write_pnm(&Image::Gray(img), false), bytes.to_vec());
    }

    #[test]
    fn comments_are_skipped() {
        let bytes = b"P2 # made by hand\n# another\n2 # w\n1\n255\n# in raster\n3 4\n";
        assert_eq!(gray(read_pnm(bytes).unwrap()).pixels(), &[3, 4]);
        let bytes = b"P5\n#c\n1 1 255\n\x09";
        assert_eq!(gray(read_pnm(bytes).unwrap()).pixels(), &[9]);
    }

    #[test]
    fn ppm_variants() {
        let ascii = b"P3\n2 1\n255\n1 2 3 4 5 6\n";
        let img = read_pnm(ascii).unwrap();
        let Image::Rgb(c) = &img else { panic!() };
        assert_eq!(c.planes()[0].pixels(), &[1, 4]);
        assert_eq!(c.planes()[2].pixels(), &[3, 6]);
        assert_eq!(write_pnm(&img, true), ascii.to_vec());
        let binary = write_pnm(&img, false);
        assert_eq!(&binary[..11], b"P6\n2 1\n255\n");
        assert_eq!(read_pnm(&binary).unwrap(), img);
    }

    #[test]
    fn rejects_bad_magic() {
        assert_eq!(read_pnm(b"P7\n1 1\n255\n0"), Err(PnmError::BadMagic));
        assert_eq!(read_pnm(b"P"), Err(PnmError::BadMagic));
        assert_eq!(read_pnm(b"P55\n1 1\n255\n0"), Err(PnmError::BadMagic));
    }

    #[test]
    fn rejects_other_maxval() {
        assert_eq!(
            read_pnm(b"P2\n1 1\n65535\n7\n"),
            Err(PnmError::UnsupportedMaxval(65535))
        );
        assert!(read_pnm(b"P2\n1 1\n65535\n7\n")
            .unwrap_err()
            .to_string()
            .contains("unsupported maxval"));
    }

    #[test]
    fn header_field_errors_name_the_field() {
        assert_eq!(
            read_pnm(b"P2\nx 1\n255\n"),
            Err(PnmError::BadHeaderField { field: "width" })
        );
        assert_eq!(read_pnm(b"P2\n1\n"), Err(PnmError::BadHeaderField { field: "height" }));
        assert_eq!(
            read_pnm(b"P2\n1 1\n"),
            Err(PnmError::BadHeaderField { field: "maxval" })
        );
        assert_eq!(
            read_pnm(b"P5\n0 1\n255\n"),
            Err(PnmError::ZeroDimension { field: "width" })
        );
    }

    #[test]
    fn truncation_and_overflow() {
        assert_eq!(
            read_pnm(b"P5\n2 2\n255\n\x00\x01\x02"),
            Err(PnmError::Truncated { expected: 4, found: 3 })
        );
        assert_eq!(
            read_pnm(b"P2\n2 1\n255\n5\n"),
            Err(PnmError::Truncated { expected: 2, found: 1 })
        );
        assert!(matches!(
            read_pnm(b"P5\n99999999999999999999 99999999999 255\n"),
            Err(PnmError::DimensionOverflow { .. })
        ));
        assert!(matches!(
            read_pnm(b"P2\n1 1\n255\n300\n"),
            Err(PnmError::SampleOutOfRange { value: 300, .. })
        ));
    }
}
