//! Median filtering and the iterative switching median impulse detector.
//!
//! The switching filter keeps two sequences, the image iterates `x⁽ⁿ⁾` and
//! the binary flag images `f⁽ⁿ⁾`, starting from the noisy input and an
//! all-clear flag image. Each iteration, for every pixel:
//!
//! 1. take the `(2W+1)²` window of `x⁽ⁿ⁻¹⁾` centred on it,
//! 2. compute the window median `m`,
//! 3. keep the previous flag if `|x⁽ⁿ⁻¹⁾ − m| < T`, otherwise set it,
//! 4. replace the pixel by `m` if its flag changed this iteration, otherwise
//!    keep `x⁽ⁿ⁻¹⁾`.
//!
//! Iterations are Jacobi-style: every pixel reads only the previous iterate.

use crate::error::{Error, Result};
use crate::image::{mismatch, BorderPolicy, FlagImage, GrayImage, Mask, PixelCoord};
use crate::linear::MAX_RADIUS;

pub const DEFAULT_HALF_WINDOW: usize = 1;
pub const DEFAULT_THRESHOLD: u8 = 40;
pub const DEFAULT_ITERATIONS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MedianParams {
    /// Half-window; the window side is `2 * half_window + 1`.
    pub half_window: usize,
    pub border: BorderPolicy,
}

impl MedianParams {
    pub fn new(half_window: usize) -> Self {
        MedianParams {
            half_window,
            border: BorderPolicy::Replicate,
        }
    }

    pub fn side(&self) -> usize {
        2 * self.half_window + 1
    }

    pub fn validate(&self) -> Result<()> {
        check_half_window(self.half_window)?;
        if self.border == BorderPolicy::Crop {
            return Err(Error::param("border", "median filtering does not support crop"));
        }
        Ok(())
    }
}

fn check_half_window(w: usize) -> Result<()> {
    if w == 0 || w > MAX_RADIUS {
        return Err(Error::param(
            "w",
            format!("half-window must be in 1..={MAX_RADIUS}, got {w}"),
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SwitchingMedianParams {
    pub half_window: usize,
    /// Detection threshold, `1..=255`.
    pub threshold: u8,
    /// Maximum number of iterations.
    pub iterations: usize,
}

impl Default for SwitchingMedianParams {
    fn default() -> Self {
        SwitchingMedianParams {
            half_window: DEFAULT_HALF_WINDOW,
            threshold: DEFAULT_THRESHOLD,
            iterations: DEFAULT_ITERATIONS,
        }
    }
}

impl SwitchingMedianParams {
    pub fn side(&self) -> usize {
        2 * self.half_window + 1
    }

    pub fn validate(&self) -> Result<()> {
        check_half_window(self.half_window)?;
        if self.threshold == 0 {
            return Err(Error::param("t", "threshold must be in 1..=255"));
        }
        if self.iterations == 0 {
            return Err(Error::param("p", "iteration count must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchingMedianResult {
    /// Final iterate.
    pub restored: GrayImage,
    /// Final flag image.
    pub flags: FlagImage,
    /// Flag transitions per iteration actually run. A trailing zero means the
    /// iteration converged early.
    pub change_counts: Vec<usize>,
}

/// One detection/correction pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectionStep {
    pub image: GrayImage,
    pub flags: FlagImage,
    /// Number of pixels whose flag went from clear to set in this pass.
    pub changed: usize,
}

/// Median of the `(2W+1)²` extended neighbourhood around `center`, centre
/// included.
pub fn window_median(img: &GrayImage, center: PixelCoord, half_window: usize, border: BorderPolicy) -> u8 {
    let w = half_window as isize;
    let mut values: Vec<u8> = Vec::with_capacity((2 * half_window + 1).pow(2));
    for dy in -w..=w {
        for dx in -w..=w {
            values.push(img.pixel_extended(PixelCoord::new(center.row + dy, center.col + dx), border));
        }
    }
    let mid = values.len() / 2;
    *values.select_nth_unstable(mid).1
}

/// Plain median filter. Each output pixel is the window median over the
/// original input.
///
/// Uses a sliding 256-bin histogram along each row, so the per-pixel cost is
/// proportional to the window side rather than its area.
pub fn median_filter(img: &GrayImage, p: &MedianParams) -> Result<GrayImage> {
    p.validate()?;
    Ok(median_unchecked(img, p.half_window, p.border))
}

fn median_unchecked(img: &GrayImage, half_window: usize, border: BorderPolicy) -> GrayImage {
    let (width, height) = img.dimensions();
    let r = half_window;
    let side = 2 * r + 1;
    let rank = (side * side / 2) as u32;
    let fill = border.fill();
    // column index in extended space -> source column
    let cols: Vec<Option<usize>> = (0..width + 2 * r)
        .map(|j| border.resolve(j as isize - r as isize, width))
        .collect();

    GrayImage::from_rows(width, height, |y, out| {
        let rows: Vec<Option<&[u8]>> = (0..side)
            .map(|t| {
                border
                    .resolve(y as isize + t as isize - r as isize, height)
                    .map(|sr| img.row(sr))
            })
            .collect();
        let sample = |row: Option<&[u8]>, j: usize| match (row, cols[j]) {
            (Some(row), Some(c)) => row[c],
            _ => fill,
        };
        let mut hist = [0u32; 256];
        for j in 0..side {
            for &row in &rows {
                hist[sample(row, j) as usize] += 1;
            }
        }
        for x in 0..width {
            if x > 0 {
                for &row in &rows {
                    hist[sample(row, x - 1) as usize] -= 1;
                    hist[sample(row, x + side - 1) as usize] += 1;
                }
            }
            let mut seen = 0u32;
            for (v, &count) in hist.iter().enumerate() {
                seen += count;
                if seen > rank {
                    out[x] = v as u8;
                    break;
                }
            }
        }
    })
}

/// One pass of steps 1–4 over every pixel, reading only `prev_image` and
/// `prev_flags`. Windows use replicate borders.
pub fn detect_and_correct_once(
    prev_image: &GrayImage,
    prev_flags: &FlagImage,
    half_window: usize,
    threshold: u8,
) -> Result<DetectionStep> {
    check_half_window(half_window)?;
    if prev_flags.dimensions() != prev_image.dimensions() {
        return Err(mismatch(prev_image.dimensions(), prev_flags.dimensions()));
    }
    let medians = median_unchecked(prev_image, half_window, BorderPolicy::Replicate);
    let (w, h) = prev_image.dimensions();
    let mut pixels = Vec::with_capacity(w * h);
    let mut bits = Vec::with_capacity(w * h);
    let mut changed = 0;
    for ((&x, &m), &f_prev) in prev_image.pixels().iter().zip(medians.pixels()).zip(prev_flags.bits()) {
        let flag = if x.abs_diff(m) < threshold { f_prev } else { true };
        if flag != f_prev {
            changed += 1;
            pixels.push(m);
        } else {
            pixels.push(x);
        }
        bits.push(flag);
    }
    Ok(DetectionStep {
        image: GrayImage::from_vec(w, h, pixels)?,
        flags: Mask::from_bits(w, h, bits)?,
        changed,
    })
}

/// Runs detection/correction up to `iterations` times from an all-clear flag
/// image, stopping early once a pass changes nothing.
pub fn switching_median(img: &GrayImage, p: &SwitchingMedianParams) -> Result<SwitchingMedianResult> {
    p.validate()?;
    let (w, h) = img.dimensions();
    let mut image = img.clone();
    let mut flags = Mask::zeros(w, h);
    let mut change_counts = Vec::with_capacity(p.iterations);
    for _ in 0..p.iterations {
        let step = detect_and_correct_once(&image, &flags, p.half_window, p.threshold)?;
        image = step.image;
        flags = step.flags;
        change_counts.push(step.changed);
        if step.changed == 0 {
            break;
        }
    }
    Ok(SwitchingMedianResult {
        restored: image,
        flags,
        change_counts,
    })
}
