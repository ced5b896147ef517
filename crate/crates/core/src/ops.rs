//! Named operations built from key/value parameters.
//!
//! This is the single place where operation names and parameter keys are
//! interpreted; the command line flags, pipeline stages and benchmark presets
//! all go through [`Operation::from_params`].
//!
//! | op                 | keys (defaults)                                                           |
//! |--------------------|---------------------------------------------------------------------------|
//! | `box`              | `radius` (1), `border`                                                    |
//! | `gaussian`         | `sigma` (1.0), `radius` (auto), `border`                                  |
//! | `median`           | `w` (1), `border`                                                         |
//! | `switching-median` | `w` (1), `t` (40), `p` (3)                                                |
//! | `bilateral`        | `sigma-s` (2.0), `sigma-r` (30.0), `radius` (auto), `spatial`, `range`, `border` |
//! | `surface-blur`     | as `bilateral`, with `spatial = box`, `range = tent`, `radius = 2`        |
//! | `salt-pepper`      | `density` (required), `seed`                                              |
//! | `gaussian-noise`   | `sd` (required), `seed`                                                   |

use std::collections::BTreeSet;

use toml::{Table, Value};

use crate::bilateral::{bilateral_filter, BilateralParams, RangeKind, SpatialKind};
use crate::error::{Error, Result};
use crate::image::{BorderPolicy, FlagImage, Image, NoiseMask};
use crate::linear::{box_blur, gaussian_blur, BoxParams, GaussianParams, Radius};
use crate::median::{median_filter, switching_median, MedianParams, SwitchingMedianParams};
use crate::noise::{NoiseKind, NoiseSpec};

pub const FILTER_OPS: [&str; 6] = [
    "box",
    "gaussian",
    "median",
    "switching-median",
    "bilateral",
    "surface-blur",
];
pub const NOISE_OPS: [&str; 2] = ["salt-pepper", "gaussian-noise"];

#[derive(Debug, Clone, PartialEq)]
pub enum Operation {
    Box(BoxParams),
    Gaussian(GaussianParams),
    Median(MedianParams),
    SwitchingMedian(SwitchingMedianParams),
    Bilateral(BilateralParams),
    Noise(NoiseSpec),
}

/// Result of applying an [`Operation`].
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub image: Image,
    /// Detector flags (switching median only).
    pub flags: Option<FlagImage>,
    /// True corruption mask (salt-and-pepper only).
    pub mask: Option<NoiseMask>,
}

/// Typed access to a parameter table that remembers which keys were read.
struct Params<'a> {
    table: &'a Table,
    used: BTreeSet<&'static str>,
}

impl<'a> Params<'a> {
    fn new(table: &'a Table) -> Self {
        Params {
            table,
            used: BTreeSet::new(),
        }
    }

    fn raw(&mut self, key: &'static str) -> Option<&'a Value> {
        self.used.insert(key);
        self.table.get(key)
    }

    fn uint(&mut self, key: &'static str, default: usize) -> Result<usize> {
        match self.raw(key) {
            None => Ok(default),
            Some(Value::Integer(i)) if *i >= 0 => Ok(*i as usize),
            Some(v) => Err(Error::param(key, format!("expected a non-negative integer, got {v}"))),
        }
    }

    fn real(&mut self, key: &'static str, default: Option<f64>) -> Result<f64> {
        match self.raw(key) {
            None => default.ok_or_else(|| Error::param(key, "required")),
            Some(Value::Float(f)) => Ok(*f),
            Some(Value::Integer(i)) => Ok(*i as f64),
            Some(v) => Err(Error::param(key, format!("expected a number, got {v}"))),
        }
    }

    fn text(&mut self, key: &'static str) -> Result<Option<&'a str>> {
        match self.raw(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s)),
            Some(v) => Err(Error::param(key, format!("expected a string, got {v}"))),
        }
    }

    fn radius(&mut self, default: Radius) -> Result<Radius> {
        match self.raw("radius") {
            None => Ok(default),
            Some(Value::String(s)) if s == "auto" => Ok(Radius::Auto),
            Some(Value::Integer(i)) if *i >= 0 => Ok(Radius::Fixed(*i as usize)),
            Some(v) => Err(Error::param(
                "radius",
                format!("expected an integer or \"auto\", got {v}"),
            )),
        }
    }

    fn border(&mut self) -> Result<BorderPolicy> {
        match self.text("border")? {
            None => Ok(BorderPolicy::Replicate),
            Some(s) => BorderPolicy::parse(s).ok_or_else(|| {
                Error::param(
                    "border",
                    format!("expected replicate, mirror, crop or constant:<0-255>, got `{s}`"),
                )
            }),
        }
    }

    fn seed(&mut self, default: Option<u64>) -> Result<u64> {
        match self.raw("seed") {
            None => Ok(default.unwrap_or(0)),
            Some(Value::Integer(i)) if *i >= 0 => Ok(*i as u64),
            Some(v) => Err(Error::param(
                "seed",
                format!("expected a non-negative integer, got {v}"),
            )),
        }
    }

    /// Fails on the first key that was never read.
    fn finish(self) -> Result<()> {
        match self.table.keys().find(|k| !self.used.contains(k.as_str())) {
            Some(k) => Err(Error::param(k, "unknown parameter")),
            None => Ok(()),
        }
    }
}

impl Operation {
    /// Builds and validates an operation. `default_seed` applies to noise
    /// operations whose table has no `seed`.
    pub fn from_params(op: &str, table: &Table, default_seed: Option<u64>) -> Result<Self> {
        let mut p = Params::new(table);
        let operation = match op {
            "box" => Operation::Box(BoxParams {
                radius: p.uint("radius", 1)?,
                border: p.border()?,
            }),
            "gaussian" => Operation::Gaussian(GaussianParams {
                sigma: p.real("sigma", Some(1.0))?,
                radius: p.radius(Radius::Auto)?,
                border: p.border()?,
            }),
            "median" => Operation::Median(MedianParams {
                half_window: p.uint("w", 1)?,
                border: p.border()?,
            }),
            "switching-median" => {
                let t = p.uint("t", usize::from(crate::median::DEFAULT_THRESHOLD))?;
                let threshold =
                    u8::try_from(t).map_err(|_| Error::param("t", format!("must be in 1..=255, got {t}")))?;
                Operation::SwitchingMedian(SwitchingMedianParams {
                    half_window: p.uint("w", crate::median::DEFAULT_HALF_WINDOW)?,
                    threshold,
                    iterations: p.uint("p", crate::median::DEFAULT_ITERATIONS)?,
                })
            }
            "bilateral" | "surface-blur" => {
                let surface = op == "surface-blur";
                let spatial = match p.text("spatial")? {
                    None if surface => SpatialKind::Box,
                    None => SpatialKind::Gaussian,
                    Some(s) => SpatialKind::parse(s)
                        .ok_or_else(|| Error::param("spatial", format!("expected gaussian or box, got `{s}`")))?,
                };
                let range = match p.text("range")? {
                    None if surface => RangeKind::Tent,
                    None => RangeKind::Gaussian,
                    Some(s) => RangeKind::parse(s)
                        .ok_or_else(|| Error::param("range", format!("expected gaussian or tent, got `{s}`")))?,
                };
                Operation::Bilateral(BilateralParams {
                    sigma_s: p.real("sigma-s", Some(2.0))?,
                    sigma_r: p.real("sigma-r", Some(30.0))?,
                    radius: p.radius(if surface { Radius::Fixed(2) } else { Radius::Auto })?,
                    spatial,
                    range,
                    border: p.border()?,
                })
            }
            "salt-pepper" | "sp" => Operation::Noise(NoiseSpec {
                kind: NoiseKind::SaltPepper {
                    density: p.real("density", None)?,
                },
                seed: p.seed(default_seed)?,
            }),
            "gaussian-noise" => Operation::Noise(NoiseSpec {
                kind: NoiseKind::GaussianAdditive {
                    sd: p.real("sd", None)?,
                },
                seed: p.seed(default_seed)?,
            }),
            other => return Err(Error::UnknownOp(other.to_string())),
        };
        p.finish()?;
        operation.validate()?;
        Ok(operation)
    }

    /// An operation with all-default parameters.
    pub fn preset(name: &str) -> Result<Self> {
        Operation::from_params(name, &Table::new(), None)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Operation::Box(p) => p.validate(),
            Operation::Gaussian(p) => p.validate(),
            Operation::Median(p) => p.validate(),
            Operation::SwitchingMedian(p) => p.validate(),
            Operation::Bilateral(p) => p.validate(),
            Operation::Noise(spec) => match spec.kind {
                NoiseKind::SaltPepper { density } if !(0.0..=1.0).contains(&density) => {
                    Err(Error::param("density", format!("must be in [0, 1], got {density}")))
                }
                NoiseKind::GaussianAdditive { sd } if !(sd.is_finite() && sd > 0.0) => {
                    Err(Error::param("sd", format!("must be positive and finite, got {sd}")))
                }
                _ => Ok(()),
            },
        }
    }

    /// Side of the filter window, `None` for noise operations.
    pub fn window_side(&self) -> Option<usize> {
        match self {
            Operation::Box(p) => Some(p.side()),
            Operation::Gaussian(p) => Some(p.side()),
            Operation::Median(p) => Some(p.side()),
            Operation::SwitchingMedian(p) => Some(p.side()),
            Operation::Bilateral(p) => Some(p.side()),
            Operation::Noise(_) => None,
        }
    }

    /// One-line human readable parameter summary.
    pub fn describe(&self) -> String {
        match self {
            Operation::Box(p) => format!("box radius={} border={}", p.radius, p.border.name()),
            Operation::Gaussian(p) => format!(
                "gaussian sigma={} radius={} border={}",
                p.sigma,
                p.resolved_radius(),
                p.border.name()
            ),
            Operation::Median(p) => format!("median w={} border={}", p.half_window, p.border.name()),
            Operation::SwitchingMedian(p) => format!(
                "switching-median w={} t={} p={}",
                p.half_window, p.threshold, p.iterations
            ),
            Operation::Bilateral(p) => format!(
                "bilateral sigma-s={} sigma-r={} radius={} spatial={} range={} border={}",
                p.sigma_s,
                p.sigma_r,
                p.resolved_radius(),
                match p.spatial {
                    SpatialKind::Gaussian => "gaussian",
                    SpatialKind::Box => "box",
                },
                match p.range {
                    RangeKind::Gaussian => "gaussian",
                    RangeKind::Tent => "tent",
                },
                p.border.name()
            ),
            Operation::Noise(NoiseSpec {
                kind: NoiseKind::SaltPepper { density },
                seed,
            }) => format!("salt-pepper density={density} seed={seed}"),
            Operation::Noise(NoiseSpec {
                kind: NoiseKind::GaussianAdditive { sd },
                seed,
            }) => format!("gaussian-noise sd={sd} seed={seed}"),
        }
    }

    /// Applies the operation. Filters run per plane on color images; noise
    /// injection requires a grayscale image.
    pub fn apply(&self, img: &Image) -> Result<Outcome> {
        let plain = |image| Outcome {
            image,
            flags: None,
            mask: None,
        };
        Ok(match self {
            Operation::Box(p) => plain(img.try_map_planes(|g| box_blur(g, p))?),
            Operation::Gaussian(p) => plain(img.try_map_planes(|g| gaussian_blur(g, p))?),
            Operation::Median(p) => plain(img.try_map_planes(|g| median_filter(g, p))?),
            Operation::Bilateral(p) => plain(img.try_map_planes(|g| bilateral_filter(g, p))?),
            Operation::SwitchingMedian(p) => match img {
                Image::Gray(g) => {
                    let res = switching_median(g, p)?;
                    Outcome {
                        image: Image::Gray(res.restored),
                        flags: Some(res.flags),
                        mask: None,
                    }
                }
                Image::Rgb(_) => plain(img.try_map_planes(|g| Ok(switching_median(g, p)?.restored))?),
            },
            Operation::Noise(spec) => {
                let gray = img
                    .as_gray()
                    .ok_or_else(|| Error::invalid("noise injection needs a grayscale image"))?;
                let (image, mask) = spec.apply(gray)?;
                Outcome {
                    image: Image::Gray(image),
                    flags: None,
                    mask,
                }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(src: &str) -> Table {
        src.parse::<Table>().unwrap()
    }

    #[test]
    fn defaults() {
        assert_eq!(Operation::preset("box").unwrap(), Operation::Box(BoxParams::new(1)));
        assert_eq!(
            Operation::preset("switching-median").unwrap(),
            Operation::SwitchingMedian(SwitchingMedianParams::default())
        );
        let Operation::Bilateral(p) = Operation::preset("surface-blur").unwrap() else {
            panic!()
        };
        assert_eq!(
            (p.spatial, p.range, p.resolved_radius()),
            (SpatialKind::Box, RangeKind::Tent, 2)
        );
        assert!(Operation::preset("salt-pepper").is_err());
    }

    #[test]
    fn typed_values() {
        let op =
            Operation::from_params("gaussian", &table("sigma = 2\nradius = 3\nborder = \"mirror\""), None).unwrap();
        let Operation::Gaussian(p) = op else { panic!() };
        assert_eq!(p.sigma, 2.0);
        assert_eq!(p.radius, Radius::Fixed(3));
        assert_eq!(p.border, BorderPolicy::Mirror);
        assert_eq!(op.window_side(), Some(7));
    }

    #[test]
    fn unknown_key_and_op() {
        let err = Operation::from_params("box", &table("radius = 1\nsigma = 2"), None).unwrap_err();
        assert!(matches!(err, Error::Param { ref key, .. } if key == "sigma"));
        assert!(matches!(
            Operation::from_params("blur", &Table::new(), None),
            Err(Error::UnknownOp(_))
        ));
    }

    #[test]
    fn invalid_values() {
        for (op, src) in [
            ("box", "radius = 0"),
            ("box", "radius = -1"),
            ("box", "radius = \"two\""),
            ("switching-median", "t = 300"),
            ("switching-median", "t = 0"),
            ("median", "border = \"crop\""),
            ("bilateral", "spatial = \"cone\""),
            ("salt-pepper", "density = 1.5"),
            ("gaussian-noise", "sd = 0"),
        ] {
            assert!(Operation::from_params(op, &table(src), None).is_err(), "{op} {src}");
        }
    }

    #[test]
    fn seed_resolution() {
        let op = Operation::from_params("sp", &table("density = 0.1"), Some(9)).unwrap();
        assert!(matches!(op, Operation::Noise(NoiseSpec { seed: 9, .. })));
        let op = Operation::from_params("sp", &table("density = 0.1\nseed = 3"), Some(9)).unwrap();
        assert!(matches!(op, Operation::Noise(NoiseSpec { seed: 3, .. })));
    }
}
