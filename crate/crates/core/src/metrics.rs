//! Image quality and detection metrics.

use crate::error::Result;
use crate::image::{mismatch, FlagImage, GrayImage, Image, NoiseMask};

/// Peak intensity for 8-bit samples.
pub const PEAK: f64 = 255.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsReport {
    pub mse: f64,
    /// `f64::INFINITY` when the images are identical.
    pub psnr_db: f64,
    pub max_abs_error: u8,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionReport {
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
    /// `TP / (TP + FP)`, or 1 when nothing was flagged.
    pub precision: f64,
    /// `TP / (TP + FN)`, or 1 when nothing was corrupted.
    pub recall: f64,
}

fn samples(img: &Image) -> Vec<u8> {
    match img {
        Image::Gray(g) => g.pixels().to_vec(),
        Image::Rgb(c) => c.interleaved(),
    }
}

fn squared_error(a: &[u8], b: &[u8]) -> (f64, u8) {
    let mut sum = 0u64;
    let mut max = 0u8;
    for (&x, &y) in a.iter().zip(b) {
        let d = x.abs_diff(y);
        sum += u64::from(d) * u64::from(d);
        max = max.max(d);
    }
    (sum as f64 / a.len() as f64, max)
}

/// Mean squared intensity difference.
pub fn mse(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    a.same_dims(b)?;
    Ok(squared_error(a.pixels(), b.pixels()).0)
}

/// `10 · log10(255² / mse)`, infinite for `mse == 0`.
pub fn psnr_from_mse(mse: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (PEAK * PEAK / mse).log10()
    }
}

pub fn psnr(a: &GrayImage, b: &GrayImage) -> Result<MetricsReport> {
    a.same_dims(b)?;
    Ok(report(a.pixels(), b.pixels()))
}

/// Like [`psnr`], over every sample of either image kind (all three planes
/// for color).
pub fn compare(a: &Image, b: &Image) -> Result<MetricsReport> {
    let same_kind = matches!(
        (a, b),
        (Image::Gray(_), Image::Gray(_)) | (Image::Rgb(_), Image::Rgb(_))
    );
    if a.dimensions() != b.dimensions() || !same_kind {
        return Err(mismatch(a.dimensions(), b.dimensions()));
    }
    Ok(report(&samples(a), &samples(b)))
}

fn report(a: &[u8], b: &[u8]) -> MetricsReport {
    let (mse, max_abs_error) = squared_error(a, b);
    MetricsReport {
        mse,
        psnr_db: psnr_from_mse(mse),
        max_abs_error,
    }
}

/// Confusion counts of a flag image scored against the true corruption mask.
pub fn detection_confusion(flags: &FlagImage, truth: &NoiseMask) -> Result<DetectionReport> {
    if flags.dimensions() != truth.dimensions() {
        return Err(mismatch(flags.dimensions(), truth.dimensions()));
    }
    let (mut tp, mut fp, mut fne) = (0, 0, 0);
    for (&f, &t) in flags.bits().iter().zip(truth.bits()) {
        match (f, t) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fne += 1,
            (false, false) => {}
        }
    }
    let ratio = |num: usize, den: usize| if den == 0 { 1.0 } else { num as f64 / den as f64 };
    Ok(DetectionReport {
        true_positives: tp,
        false_positives: fp,
        false_negatives: fne,
        precision: ratio(tp, tp + fp),
        recall: ratio(tp, tp + fne),
    })
}

/// Formats a PSNR for CSV output; the infinite sentinel is spelled `inf`.
pub fn format_db(v: f64) -> String {
    if v.is_infinite() {
        "inf".to_string()
    } else {
        format!("{v}")
    }
}
