//! Linear filters: direct 2-D convolution, the integer box blur and the
//! separable Gaussian blur.
//!
//! Every path rounds exactly once per output pixel, half away from zero, and
//! clamps to `[0, 255]`. [`convolve_naive`] is the reference that the faster
//! paths are tested against.

use crate::error::{Error, Result};
use crate::image::{BorderPolicy, GrayImage};

/// Window sides above this get a size warning from the command line tool.
pub const RECOMMENDED_MAX_SIDE: usize = 7;

/// Returns the guidance warning for windows wider than
/// [`RECOMMENDED_MAX_SIDE`], or `None` when the side is within it.
pub fn window_guidance(side: usize) -> Option<String> {
    (side > RECOMMENDED_MAX_SIDE).then(|| format!("kernel side {side} exceeds 7; see guidance"))
}

/// Square kernel with an odd side, weights stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    side: usize,
    weights: Vec<f64>,
}

impl Kernel {
    pub fn new(side: usize, weights: Vec<f64>) -> Result<Self> {
        if side == 0 || side.is_multiple_of(2) {
            return Err(Error::invalid(format!("kernel side must be odd, got {side}")));
        }
        if weights.len() != side * side {
            return Err(Error::invalid(format!(
                "kernel of side {side} needs {} weights, got {}",
                side * side,
                weights.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::invalid("kernel weights must be finite"));
        }
        Ok(Kernel { side, weights })
    }

    /// Uniform averaging kernel, every weight `1 / side²`.
    pub fn uniform(side: usize) -> Result<Self> {
        let n = (side * side) as f64;
        Kernel::new(side, vec![1.0 / n; side * side])
    }

    pub fn identity(side: usize) -> Result<Self> {
        let mut w = vec![0.0; side * side];
        if let Some(c) = w.get_mut(side * side / 2) {
            *c = 1.0;
        }
        Kernel::new(side, w)
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn radius(&self) -> usize {
        self.side / 2
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    #[inline]
    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.weights[row * self.side + col]
    }

    pub fn sum(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Odd-length, symmetric 1-D factor applied along rows and then columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableKernel {
    taps: Vec<f64>,
}

impl SeparableKernel {
    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    pub fn radius(&self) -> usize {
        self.taps.len() / 2
    }

    pub fn side(&self) -> usize {
        self.taps.len()
    }

    /// The equivalent 2-D kernel, `taps[i] * taps[j]`.
    pub fn outer(&self) -> Kernel {
        let side = self.side();
        let mut w = Vec::with_capacity(side * side);
        for a in &self.taps {
            for b in &self.taps {
                w.push(a * b);
            }
        }
        Kernel { side, weights: w }
    }
}

/// Window half-width: either given or derived from the scale parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Radius {
    /// `ceil(3 * sigma)`, at least 1.
    #[default]
    Auto,
    Fixed(usize),
}

impl Radius {
    pub fn resolve(self, sigma: f64) -> usize {
        match self {
            Radius::Fixed(r) => r,
            Radius::Auto => ((3.0 * sigma).ceil() as usize).max(1),
        }
    }
}

// Upper bound on any resolved radius, far beyond useful sizes.
pub(crate) const MAX_RADIUS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoxParams {
    pub radius: usize,
    pub border: BorderPolicy,
}

impl BoxParams {
    pub fn new(radius: usize) -> Self {
        BoxParams {
            radius,
            border: BorderPolicy::Replicate,
        }
    }

    pub fn side(&self) -> usize {
        2 * self.radius + 1
    }

    pub fn validate(&self) -> Result<()> {
        if self.radius == 0 || self.radius > MAX_RADIUS {
            return Err(Error::param(
                "radius",
                format!("must be in 1..={MAX_RADIUS}, got {}", self.radius),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianParams {
    pub sigma: f64,
    pub radius: Radius,
    pub border: BorderPolicy,
}

impl GaussianParams {
    pub fn new(sigma: f64) -> Self {
        GaussianParams {
            sigma,
            radius: Radius::Auto,
            border: BorderPolicy::Replicate,
        }
    }

    pub fn with_radius(mut self, radius: usize) -> Self {
        self.radius = Radius::Fixed(radius);
        self
    }

    pub fn resolved_radius(&self) -> usize {
        self.radius.resolve(self.sigma)
    }

    pub fn side(&self) -> usize {
        2 * self.resolved_radius() + 1
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::param(
                "sigma",
                format!("must be positive and finite, got {}", self.sigma),
            ));
        }
        let r = self.resolved_radius();
        if r == 0 || r > MAX_RADIUS {
            return Err(Error::param("radius", format!("must be in 1..={MAX_RADIUS}, got {r}")));
        }
        let exponent = (r * r) as f64 / (2.0 * self.sigma * self.sigma);
        if exponent > MAX_TAIL_EXPONENT {
            return Err(Error::param(
                "radius",
                format!(
                    "radius {r} is too wide for sigma {}: outer taps underflow to zero",
                    self.sigma
                ),
            ));
        }
        Ok(())
    }
}

/// Keeps the outermost tap `exp(-r²/2σ²)` a positive normal `f64`.
const MAX_TAIL_EXPONENT: f64 = 700.0;

#[inline]
pub(crate) fn round_clamp(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

/// Output geometry shared by all linear paths.
///
/// `offset` shifts output coordinates into input coordinates: zero for the
/// extending policies, `radius` for `Crop`.
struct Geometry {
    out_width: usize,
    out_height: usize,
    offset: usize,
}

fn geometry(img: &GrayImage, side: usize, border: BorderPolicy) -> Result<Geometry> {
    let (w, h) = img.dimensions();
    if border == BorderPolicy::Crop {
        if side > w || side > h {
            return Err(Error::invalid(format!(
                "crop border needs the {side}x{side} window to fit inside the {w}x{h} image"
            )));
        }
        Ok(Geometry {
            out_width: w - side + 1,
            out_height: h - side + 1,
            offset: side / 2,
        })
    } else {
        Ok(Geometry {
            out_width: w,
            out_height: h,
            offset: 0,
        })
    }
}

/// Direct 2-D convolution with border extension. Reference for every linear
/// fast path.
pub fn convolve_naive(img: &GrayImage, kernel: &Kernel, border: BorderPolicy) -> Result<GrayImage> {
    let side = kernel.side();
    let r = kernel.radius() as isize;
    let g = geometry(img, side, border)?;
    let off = g.offset as isize;
    Ok(GrayImage::from_rows(g.out_width, g.out_height, |y, out| {
        for (x, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for ky in 0..side {
                for kx in 0..side {
                    let sy = y as isize + off + ky as isize - r;
                    let sx = x as isize + off + kx as isize - r;
                    let v = img.pixel_extended(crate::image::PixelCoord::new(sy, sx), border);
                    // convolution flips the kernel
                    acc += kernel.at(side - 1 - ky, side - 1 - kx) * f64::from(v);
                }
            }
            *o = round_clamp(acc);
        }
    }))
}

/// Row `y` of the image laid out in extended column space: entry `j` is the
/// sample at column `j - radius` (or `j` for `Crop`, which needs no
/// extension).
fn extended_row(img: &GrayImage, y: usize, radius: usize, border: BorderPolicy, buf: &mut Vec<u8>) {
    let row = img.row(y);
    buf.clear();
    if border == BorderPolicy::Crop {
        buf.extend_from_slice(row);
        return;
    }
    let w = img.width();
    buf.extend((0..w + 2 * radius).map(|j| {
        border
            .resolve(j as isize - radius as isize, w)
            .map_or(border.fill(), |c| row[c])
    }));
}

// rows per parallel band in the vertical passes
const BAND: usize = 32;

/// Box blur over a `(2r+1)²` window using exact integer running sums.
///
/// Bit-identical to [`convolve_naive`] with [`Kernel::uniform`]: the window
/// size is odd, so a true half never occurs and one integer rounding step
/// reproduces the floating-point result.
pub fn box_blur(img: &GrayImage, p: &BoxParams) -> Result<GrayImage> {
    p.validate()?;
    let side = p.side();
    let r = p.radius;
    let border = p.border;
    let g = geometry(img, side, border)?;
    let (ow, oh) = (g.out_width, g.out_height);

    // horizontal running sums for every input row
    let mut hsums = vec![0u32; img.height() * ow];
    {
        use rayon::prelude::*;
        hsums
            .par_chunks_mut(ow)
            .enumerate()
            .for_each_init(Vec::new, |buf, (y, out)| {
                extended_row(img, y, r, border, buf);
                let mut acc: u32 = buf[..side].iter().map(|&v| u32::from(v)).sum();
                out[0] = acc;
                for x in 1..ow {
                    acc = acc + u32::from(buf[x + side - 1]) - u32::from(buf[x - 1]);
                    out[x] = acc;
                }
            });
    }

    let n = (side * side) as u64;
    let constant_row = u64::from(border.fill()) * side as u64;
    let h = img.height();
    let add = |acc: &mut [u64], src: isize, sign_add: bool| match border.resolve(src, h) {
        Some(sr) => {
            let row = &hsums[sr * ow..(sr + 1) * ow];
            for (a, &v) in acc.iter_mut().zip(row) {
                if sign_add {
                    *a += u64::from(v);
                } else {
                    *a -= u64::from(v);
                }
            }
        }
        None => {
            for a in acc.iter_mut() {
                if sign_add {
                    *a += constant_row;
                } else {
                    *a -= constant_row;
                }
            }
        }
    };

    let mut pixels = vec![0u8; ow * oh];
    {
        use rayon::prelude::*;
        pixels.par_chunks_mut(ow * BAND).enumerate().for_each(|(band, chunk)| {
            let y0 = band * BAND;
            let mut acc = vec![0u64; ow];
            let top = (y0 + g.offset) as isize - r as isize;
            for t in 0..side as isize {
                add(&mut acc, top + t, true);
            }
            for (i, out) in chunk.chunks_mut(ow).enumerate() {
                if i > 0 {
                    let y = (y0 + i + g.offset) as isize;
                    add(&mut acc, y - r as isize - 1, false);
                    add(&mut acc, y + r as isize, true);
                }
                for (o, &s) in out.iter_mut().zip(&acc) {
                    // round half away from zero on a non-negative quotient
                    *o = ((2 * s + n) / (2 * n)) as u8;
                }
            }
        });
    }
    GrayImage::from_vec(ow, oh, pixels)
}

/// Sampled and normalized 1-D Gaussian, `taps[i] ∝ exp(-(i-r)² / 2σ²)`.
///
/// Normalization divides by the sum of the sampled taps, so a truncated
/// kernel still sums to one.
pub fn gaussian_kernel_1d(p: &GaussianParams) -> Result<SeparableKernel> {
    p.validate()?;
    let r = p.resolved_radius();
    let denom = 2.0 * p.sigma * p.sigma;
    let half: Vec<f64> = (0..=r).map(|d| (-((d * d) as f64) / denom).exp()).collect();
    let mut taps: Vec<f64> = half.iter().rev().chain(&half[1..]).copied().collect();
    // sum from the tails inward so mirrored taps add symmetrically
    let sum = half[0] + half[1..].iter().rev().map(|v| 2.0 * v).sum::<f64>();
    for t in &mut taps {
        *t /= sum;
    }
    Ok(SeparableKernel { taps })
}

/// Separable Gaussian blur: a row pass then a column pass in `f64`, with a
/// single rounding per pixel.
pub fn gaussian_blur(img: &GrayImage, p: &GaussianParams) -> Result<GrayImage> {
    let kernel = gaussian_kernel_1d(p)?;
    separable_blur(img, &kernel, p.border)
}

/// Applies a 1-D kernel along rows then columns.
pub fn separable_blur(img: &GrayImage, kernel: &SeparableKernel, border: BorderPolicy) -> Result<GrayImage> {
    let taps = kernel.taps();
    let side = taps.len();
    let r = side / 2;
    let g = geometry(img, side, border)?;
    let (ow, oh) = (g.out_width, g.out_height);

    let mut hpass = vec![0f64; img.height() * ow];
    {
        use rayon::prelude::*;
        hpass
            .par_chunks_mut(ow)
            .enumerate()
            .for_each_init(Vec::new, |buf, (y, out)| {
                extended_row(img, y, r, border, buf);
                for (x, o) in out.iter_mut().enumerate() {
                    *o = taps.iter().zip(&buf[x..x + side]).map(|(t, &v)| t * f64::from(v)).sum();
                }
            });
    }
    // a row entirely outside the image under Constant: the row pass of a
    // constant line
    let fill = f64::from(border.fill());
    let constant_row: f64 = taps.iter().map(|t| t * fill).sum();

    let h = img.height();
    Ok(GrayImage::from_rows(ow, oh, |y, out| {
        let top = (y + g.offset) as isize - r as isize;
        for (x, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (t, tap) in taps.iter().enumerate() {
                let v = match border.resolve(top + t as isize, h) {
                    Some(sr) => hpass[sr * ow + x],
                    None => constant_row,
                };
                acc += tap * v;
            }
            *o = round_clamp(acc);
        }
    }))
}
