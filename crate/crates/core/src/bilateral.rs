//! Bilateral filter: a normalized weighted mean whose weights multiply a
//! spatial term (geometric closeness) and a range term (photometric
//! similarity).
//!
//! For a centre `c` and each `q` in the `(2r+1)²` window:
//!
//! ```text
//! weight(q) = S(‖q − c‖) · R(|I(q) − I(c)|)
//! out(c)    = round(Σ weight·I(q) / Σ weight)
//! ```
//!
//! `S(0) · R(0) = 1`, so the denominator is never zero.

use crate::error::{Error, Result};
use crate::image::{BorderPolicy, GrayImage, PixelCoord};
use crate::linear::{round_clamp, Radius, MAX_RADIUS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpatialKind {
    /// `exp(-d² / 2σs²)`, `d` the Euclidean pixel distance.
    #[default]
    Gaussian,
    /// 1 everywhere inside the window.
    Box,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RangeKind {
    /// `exp(-δ² / 2σr²)`.
    #[default]
    Gaussian,
    /// `max(0, 1 − δ/σr)`; differences of `σr` or more get no weight.
    Tent,
}

impl SpatialKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "gaussian" => Some(SpatialKind::Gaussian),
            "box" => Some(SpatialKind::Box),
            _ => None,
        }
    }
}

impl RangeKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "gaussian" => Some(RangeKind::Gaussian),
            "tent" => Some(RangeKind::Tent),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BilateralParams {
    pub sigma_s: f64,
    pub sigma_r: f64,
    pub radius: Radius,
    pub spatial: SpatialKind,
    pub range: RangeKind,
    pub border: BorderPolicy,
}

impl BilateralParams {
    /// Gaussian spatial and range weights, automatic radius.
    pub fn new(sigma_s: f64, sigma_r: f64) -> Self {
        BilateralParams {
            sigma_s,
            sigma_r,
            radius: Radius::Auto,
            spatial: SpatialKind::Gaussian,
            range: RangeKind::Gaussian,
            border: BorderPolicy::Replicate,
        }
    }

    /// "Surface blur": square box spatial weight with a tent range weight.
    pub fn surface_blur(radius: usize, sigma_r: f64) -> Self {
        BilateralParams {
            sigma_s: radius as f64 / 3.0,
            sigma_r,
            radius: Radius::Fixed(radius),
            spatial: SpatialKind::Box,
            range: RangeKind::Tent,
            border: BorderPolicy::Replicate,
        }
    }

    pub fn with_radius(mut self, radius: usize) -> Self {
        self.radius = Radius::Fixed(radius);
        self
    }

    pub fn resolved_radius(&self) -> usize {
        self.radius.resolve(self.sigma_s)
    }

    pub fn side(&self) -> usize {
        2 * self.resolved_radius() + 1
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_s.is_finite() && self.sigma_s > 0.0) {
            return Err(Error::param(
                "sigma-s",
                format!("must be positive and finite, got {}", self.sigma_s),
            ));
        }
        if !(self.sigma_r.is_finite() && self.sigma_r > 0.0) {
            return Err(Error::param(
                "sigma-r",
                format!("must be positive and finite, got {}", self.sigma_r),
            ));
        }
        let r = self.resolved_radius();
        if r == 0 || r > MAX_RADIUS {
            return Err(Error::param("radius", format!("must be in 1..={MAX_RADIUS}, got {r}")));
        }
        if self.border == BorderPolicy::Crop {
            return Err(Error::param("border", "bilateral filtering does not support crop"));
        }
        Ok(())
    }
}

/// Bilateral filter with a precomputed spatial mask and a 256-entry range
/// table. Bit-identical to [`bilateral_reference`].
pub fn bilateral_filter(img: &GrayImage, p: &BilateralParams) -> Result<GrayImage> {
    p.validate()?;
    let r = p.resolved_radius() as isize;
    let side = 2 * r as usize + 1;

    let mut spatial = Vec::with_capacity(side * side);
    for dy in -r..=r {
        for dx in -r..=r {
            spatial.push(match p.spatial {
                SpatialKind::Gaussian => {
                    let d2 = (dy * dy + dx * dx) as f64;
                    (-d2 / (2.0 * p.sigma_s * p.sigma_s)).exp()
                }
                SpatialKind::Box => 1.0,
            });
        }
    }
    let mut range = [0f64; 256];
    for (delta, w) in range.iter_mut().enumerate() {
        *w = match p.range {
            RangeKind::Gaussian => {
                let d2 = (delta * delta) as f64;
                (-d2 / (2.0 * p.sigma_r * p.sigma_r)).exp()
            }
            RangeKind::Tent => (1.0 - delta as f64 / p.sigma_r).max(0.0),
        };
    }

    let (width, height) = img.dimensions();
    let border = p.border;
    let fill = border.fill();
    let cols: Vec<Option<usize>> = (0..width + side - 1)
        .map(|j| border.resolve(j as isize - r, width))
        .collect();

    Ok(GrayImage::from_rows(width, height, |y, out| {
        let rows: Vec<Option<&[u8]>> = (-r..=r)
            .map(|dy| border.resolve(y as isize + dy, height).map(|sr| img.row(sr)))
            .collect();
        for (x, o) in out.iter_mut().enumerate() {
            let center = img.get(y, x);
            let mut num = 0.0;
            let mut den = 0.0;
            let mut k = 0;
            for row in &rows {
                for col in &cols[x..x + side] {
                    let v = match (row, col) {
                        (Some(row), Some(c)) => row[*c],
                        _ => fill,
                    };
                    let w = spatial[k] * range[v.abs_diff(center) as usize];
                    num += w * f64::from(v);
                    den += w;
                    k += 1;
                }
            }
            *o = round_clamp(num / den);
        }
    }))
}

/// Direct transcription of the weighted-average definition: every weight is
/// evaluated in place with no tables and no parallelism.
pub fn bilateral_reference(img: &GrayImage, p: &BilateralParams) -> Result<GrayImage> {
    p.validate()?;
    let r = p.resolved_radius() as isize;
    let (width, height) = img.dimensions();
    let mut out = GrayImage::new_filled(width, height, 0)?;
    for y in 0..height {
        for x in 0..width {
            let ic = img.get(y, x);
            let mut num = 0.0;
            let mut den = 0.0;
            for dy in -r..=r {
                for dx in -r..=r {
                    let iq = img.pixel_extended(PixelCoord::new(y as isize + dy, x as isize + dx), p.border);
                    let s = match p.spatial {
                        SpatialKind::Gaussian => {
                            let d2 = (dy * dy + dx * dx) as f64;
                            (-d2 / (2.0 * p.sigma_s * p.sigma_s)).exp()
                        }
                        SpatialKind::Box => 1.0,
                    };
                    let delta = (i32::from(iq) - i32::from(ic)).unsigned_abs();
                    let rw = match p.range {
                        RangeKind::Gaussian => {
                            let d2 = (delta * delta) as f64;
                            (-d2 / (2.0 * p.sigma_r * p.sigma_r)).exp()
                        }
                        RangeKind::Tent => (1.0 - delta as f64 / p.sigma_r).max(0.0),
                    };
                    let w = s * rw;
                    num += w * f64::from(iq);
                    den += w;
                }
            }
            out.set(y, x, round_clamp(num / den));
        }
    }
    Ok(out)
}

/// Contrast across a vertical edge: the absolute difference between the mean
/// of the `strip` columns starting at `edge_col` and the mean of the `strip`
/// columns just left of it.
pub fn edge_contrast(img: &GrayImage, edge_col: usize, strip: usize) -> Result<f64> {
    if strip == 0 || edge_col < strip || edge_col + strip > img.width() {
        return Err(Error::invalid(format!(
            "strips of width {strip} around column {edge_col} do not fit in width {}",
            img.width()
        )));
    }
    let mean = |cols: std::ops::Range<usize>| {
        let n = (cols.len() * img.height()) as f64;
        let sum: u64 = (0..img.height())
            .flat_map(|r| cols.clone().map(move |c| (r, c)))
            .map(|(r, c)| u64::from(img.get(r, c)))
            .sum();
        sum as f64 / n
    };
    Ok((mean(edge_col..edge_col + strip) - mean(edge_col - strip..edge_col)).abs())
}
