//! Raster value types and border extension.
//!
//! All images are row-major with the origin at the top-left corner and are
//! addressed as `(row, col)`. Samples are 8-bit.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// An 8-bit single-channel raster.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

/// A coordinate that may lie outside the image until a [`BorderPolicy`]
/// maps it back in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PixelCoord {
    pub row: isize,
    pub col: isize,
}

impl PixelCoord {
    pub fn new(row: isize, col: isize) -> Self {
        PixelCoord { row, col }
    }
}

/// How samples outside the image are synthesized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum BorderPolicy {
    /// Clamp each axis to the nearest valid index.
    #[default]
    Replicate,
    /// Reflect about the edge pixel without repeating it (`-1 -> 1`).
    Mirror,
    /// Every outside sample takes this value.
    Constant(u8),
    /// No extension: the output shrinks so windows never leave the image.
    /// Only operations that define output shrinkage accept this.
    Crop,
}

impl BorderPolicy {
    /// Maps a possibly out-of-range index onto `0..len`. Returns `None` when
    /// the policy supplies a constant instead of a stored sample.
    ///
    /// `Crop` resolves like `Replicate`; operations honouring `Crop` never
    /// ask for an outside index.
    #[inline]
    pub fn resolve(self, index: isize, len: usize) -> Option<usize> {
        debug_assert!(len > 0);
        if index >= 0 && (index as usize) < len {
            return Some(index as usize);
        }
        match self {
            BorderPolicy::Replicate | BorderPolicy::Crop => Some(index.clamp(0, len as isize - 1) as usize),
            BorderPolicy::Mirror => Some(reflect(index, len)),
            BorderPolicy::Constant(_) => None,
        }
    }

    /// The fill value used when [`resolve`](Self::resolve) returns `None`.
    pub(crate) fn fill(self) -> u8 {
        match self {
            BorderPolicy::Constant(v) => v,
            _ => 0,
        }
    }

    pub fn name(self) -> String {
        match self {
            BorderPolicy::Replicate => "replicate".into(),
            BorderPolicy::Mirror => "mirror".into(),
            BorderPolicy::Constant(v) => format!("constant:{v}"),
            BorderPolicy::Crop => "crop".into(),
        }
    }

    /// Parses `replicate`, `mirror`, `crop` or `constant:<0-255>`.
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "replicate" => Some(BorderPolicy::Replicate),
            "mirror" => Some(BorderPolicy::Mirror),
            "crop" => Some(BorderPolicy::Crop),
            _ => s
                .strip_prefix("constant:")
                .and_then(|v| v.parse::<u8>().ok())
                .map(BorderPolicy::Constant),
        }
    }
}

/// Whole-sample symmetric reflection (`dcb|abcd|cba`), periodic for offsets
/// larger than the image.
fn reflect(index: isize, len: usize) -> usize {
    if len == 1 {
        return 0;
    }
    let period = 2 * (len as isize - 1);
    let m = index.rem_euclid(period);
    if m < len as isize {
        m as usize
    } else {
        (period - m) as usize
    }
}

impl GrayImage {
    /// An image of the given size with every pixel set to `value`.
    pub fn new_filled(width: usize, height: usize, value: u8) -> Result<Self> {
        check_dims(width, height)?;
        Ok(GrayImage {
            width,
            height,
            pixels: vec![value; width * height],
        })
    }

    pub fn from_vec(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        check_dims(width, height)?;
        if pixels.len() != width * height {
            return Err(Error::invalid(format!(
                "pixel buffer has {} samples, expected {}x{}={}",
                pixels.len(),
                width,
                height,
                width * height
            )));
        }
        Ok(GrayImage { width, height, pixels })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Result<Self> {
        check_dims(width, height)?;
        let mut pixels = Vec::with_capacity(width * height);
        for row in 0..height {
            for col in 0..width {
                pixels.push(f(row, col));
            }
        }
        Ok(GrayImage { width, height, pixels })
    }

    /// Builds an image by computing each output row independently, possibly
    /// in parallel. `f(row, out)` must fill `out` completely.
    pub(crate) fn from_rows(width: usize, height: usize, f: impl Fn(usize, &mut [u8]) + Sync + Send) -> Self {
        let mut pixels = vec![0u8; width * height];
        pixels
            .par_chunks_mut(width)
            .enumerate()
            .for_each(|(row, out)| f(row, out));
        GrayImage { width, height, pixels }
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
    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    #[inline]
    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: u8) {
        self.pixels[row * self.width + col] = value;
    }

    #[inline]
    pub fn row(&self, row: usize) -> &[u8] {
        &self.pixels[row * self.width..(row + 1) * self.width]
    }

    /// Reads a sample at any integer coordinate, extending the image with
    /// `policy` outside its bounds.
    #[inline]
    pub fn pixel_extended(&self, at: PixelCoord, policy: BorderPolicy) -> u8 {
        match (policy.resolve(at.row, self.height), policy.resolve(at.col, self.width)) {
            (Some(r), Some(c)) => self.get(r, c),
            _ => policy.fill(),
        }
    }

    pub fn min_max(&self) -> (u8, u8) {
        self.pixels
            .iter()
            .fold((u8::MAX, u8::MIN), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }

    /// Horizontally mirrored copy.
    pub fn flip_horizontal(&self) -> Self {
        GrayImage::from_fn(self.width, self.height, |r, c| self.get(r, self.width - 1 - c))
            .expect("dimensions already valid")
    }

    pub(crate) fn same_dims(&self, other: &GrayImage) -> Result<()> {
        if self.dimensions() != other.dimensions() {
            return Err(mismatch(self.dimensions(), other.dimensions()));
        }
        Ok(())
    }
}

pub(crate) fn mismatch(left: (usize, usize), right: (usize, usize)) -> Error {
    Error::DimensionMismatch {
        left_width: left.0,
        left_height: left.1,
        right_width: right.0,
        right_height: right.1,
    }
}

fn check_dims(width: usize, height: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::invalid(format!(
            "image dimensions must be positive, got {width}x{height}"
        )));
    }
    if width.checked_mul(height).is_none() {
        return Err(Error::invalid(format!("image dimensions {width}x{height} overflow")));
    }
    Ok(())
}

/// Three co-dimensioned 8-bit planes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RgbImage {
    red: GrayImage,
    green: GrayImage,
    blue: GrayImage,
}

impl RgbImage {
    /// Interleaved `RGBRGB...` samples.
    pub fn from_interleaved(width: usize, height: usize, samples: &[u8]) -> Result<Self> {
        check_dims(width, height)?;
        if samples.len() != 3 * width * height {
            return Err(Error::invalid(format!(
                "rgb buffer has {} samples, expected {}",
                samples.len(),
                3 * width * height
            )));
        }
        let plane = |k: usize| samples.iter().skip(k).step_by(3).copied().collect::<Vec<_>>();
        merge_channels(
            GrayImage::from_vec(width, height, plane(0))?,
            GrayImage::from_vec(width, height, plane(1))?,
            GrayImage::from_vec(width, height, plane(2))?,
        )
    }

    pub fn width(&self) -> usize {
        self.red.width()
    }

    pub fn height(&self) -> usize {
        self.red.height()
    }

    pub fn dimensions(&self) -> (usize, usize) {
        self.red.dimensions()
    }

    pub fn planes(&self) -> [&GrayImage; 3] {
        [&self.red, &self.green, &self.blue]
    }

    pub fn interleaved(&self) -> Vec<u8> {
        self.red
            .pixels()
            .iter()
            .zip(self.green.pixels())
            .zip(self.blue.pixels())
            .flat_map(|((&r, &g), &b)| [r, g, b])
            .collect()
    }
}

pub fn split_channels(img: &RgbImage) -> (GrayImage, GrayImage, GrayImage) {
    (img.red.clone(), img.green.clone(), img.blue.clone())
}

pub fn merge_channels(red: GrayImage, green: GrayImage, blue: GrayImage) -> Result<RgbImage> {
    red.same_dims(&green)?;
    red.same_dims(&blue)?;
    Ok(RgbImage { red, green, blue })
}

/// Either kind of decoded raster.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Image {
    Gray(GrayImage),
    Rgb(RgbImage),
}

impl Image {
    pub fn dimensions(&self) -> (usize, usize) {
        match self {
            Image::Gray(g) => g.dimensions(),
            Image::Rgb(c) => c.dimensions(),
        }
    }

    /// Applies a grayscale operation to every plane independently.
    pub fn try_map_planes(&self, mut f: impl FnMut(&GrayImage) -> Result<GrayImage>) -> Result<Image> {
        Ok(match self {
            Image::Gray(g) => Image::Gray(f(g)?),
            Image::Rgb(c) => {
                let [r, g, b] = c.planes();
                Image::Rgb(merge_channels(f(r)?, f(g)?, f(b)?)?)
            }
        })
    }

    pub fn as_gray(&self) -> Option<&GrayImage> {
        match self {
            Image::Gray(g) => Some(g),
            Image::Rgb(_) => None,
        }
    }
}

impl From<GrayImage> for Image {
    fn from(g: GrayImage) -> Self {
        Image::Gray(g)
    }
}

impl From<RgbImage> for Image {
    fn from(c: RgbImage) -> Self {
        Image::Rgb(c)
    }
}

/// A binary per-pixel raster.
///
/// Used both for impulse-noise flags produced by the switching median filter
/// and for the ground-truth corruption mask produced by noise injection.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

/// Pixels judged noisy by the switching median detector.
pub type FlagImage = Mask;
/// Pixels actually corrupted by noise injection.
pub type NoiseMask = Mask;

impl Mask {
    pub fn zeros(width: usize, height: usize) -> Self {
        Mask {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    pub fn from_bits(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != width * height {
            return Err(Error::invalid("mask length does not match dimensions"));
        }
        Ok(Mask { width, height, bits })
    }

    /// Any nonzero sample is a set mark.
    pub fn from_gray(img: &GrayImage) -> Self {
        Mask {
            width: img.width(),
            height: img.height(),
            bits: img.pixels().iter().map(|&v| v != 0).collect(),
        }
    }

    /// Set marks become 255, clear marks 0.
    pub fn to_gray(&self) -> GrayImage {
        GrayImage::from_vec(
            self.width,
            self.height,
            self.bits.iter().map(|&b| if b { 255 } else { 0 }).collect(),
        )
        .expect("mask dimensions are valid")
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.bits[row * self.width + col] = value;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}
