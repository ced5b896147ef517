//! Seeded noise injection.
//!
//! All randomness comes from a ChaCha8 stream seeded with
//! `ChaCha8Rng::seed_from_u64(seed)`, which is platform independent. Stream
//! discipline:
//!
//! * salt-and-pepper: a partial Fisher–Yates shuffle of all pixel indices
//!   picks `floor(density · N)` positions; the chosen positions are then
//!   visited in raster order, each consuming one boolean draw (true = salt,
//!   255; false = pepper, 0).
//! * additive Gaussian: one normal draw per pixel in raster order.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::image::{GrayImage, Mask, NoiseMask};
use crate::linear::round_clamp;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseKind {
    SaltPepper { density: f64 },
    GaussianAdditive { sd: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub seed: u64,
}

impl NoiseSpec {
    /// Applies the noise. The mask is `None` for additive Gaussian noise,
    /// which touches every pixel.
    pub fn apply(&self, img: &GrayImage) -> Result<(GrayImage, Option<NoiseMask>)> {
        match self.kind {
            NoiseKind::SaltPepper { density } => add_salt_pepper(img, density, self.seed).map(|(i, m)| (i, Some(m))),
            NoiseKind::GaussianAdditive { sd } => Ok((add_gaussian_noise(img, sd, self.seed)?, None)),
        }
    }
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Number of pixels corrupted at `density`.
pub fn corrupted_count(density: f64, pixels: usize) -> usize {
    (density * pixels as f64).floor() as usize
}

/// Corrupts exactly `floor(density · N)` distinct pixels with 0 or 255.
pub fn add_salt_pepper(img: &GrayImage, density: f64, seed: u64) -> Result<(GrayImage, NoiseMask)> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::param("density", format!("must be in [0, 1], got {density}")));
    }
    let (w, h) = img.dimensions();
    let n = w * h;
    let k = corrupted_count(density, n);
    let mut rng = rng_from_seed(seed);
    let mut order: Vec<usize> = (0..n).collect();
    let (chosen, _) = order.partial_shuffle(&mut rng, k);
    let mut chosen = chosen.to_vec();
    chosen.sort_unstable();

    let mut pixels = img.pixels().to_vec();
    let mut bits = vec![false; n];
    for idx in chosen {
        pixels[idx] = if rng.random::<bool>() { 255 } else { 0 };
        bits[idx] = true;
    }
    Ok((GrayImage::from_vec(w, h, pixels)?, Mask::from_bits(w, h, bits)?))
}

/// Adds an independent `N(0, sd²)` draw to every pixel, then rounds and
/// clamps.
pub fn add_gaussian_noise(img: &GrayImage, sd: f64, seed: u64) -> Result<GrayImage> {
    if !(sd.is_finite() && sd > 0.0) {
        return Err(Error::param("sd", format!("must be positive and finite, got {sd}")));
    }
    let normal = Normal::new(0.0, sd).map_err(|e| Error::param("sd", e.to_string()))?;
    let mut rng = rng_from_seed(seed);
    let pixels = img
        .pixels()
        .iter()
        .map(|&v| round_clamp(f64::from(v) + normal.sample(&mut rng)))
        .collect();
    GrayImage::from_vec(img.width(), img.height(), pixels)
}
