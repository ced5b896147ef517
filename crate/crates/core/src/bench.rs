//! Parameter-sweep benchmark: salt-and-pepper density × filter preset ×
//! repetition, scored against the clean reference.
//!
//! Cells run in parallel but rows always come back in grid order (density,
//! then algorithm, then repetition). Apart from the `ms` column the CSV is a
//! pure function of the grid.

use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::image::{GrayImage, Image};
use crate::metrics::{detection_confusion, format_db, psnr, DetectionReport, MetricsReport};
use crate::noise::add_salt_pepper;
use crate::ops::{Operation, FILTER_OPS};

pub const CSV_HEADER: &str = "algorithm,density,rep,seed,mse,psnr_db,precision,recall,ms";

/// Scores the noisy image itself, unfiltered.
pub const NO_FILTER: &str = "none";

#[derive(Debug, Clone, PartialEq)]
pub struct BenchGrid {
    pub densities: Vec<f64>,
    pub algorithms: Vec<String>,
    pub repetitions: usize,
    pub base_seed: u64,
    /// `builtin:<name>` or a path to a grayscale PNM.
    pub reference: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub algorithm: String,
    pub density: f64,
    pub rep: usize,
    pub seed: u64,
    pub metrics: MetricsReport,
    pub detection: Option<DetectionReport>,
    pub ms: f64,
}

impl BenchRow {
    pub fn to_csv(&self) -> String {
        let (precision, recall) = match &self.detection {
            Some(d) => (d.precision.to_string(), d.recall.to_string()),
            None => (String::new(), String::new()),
        };
        format!(
            "{},{},{},{},{},{},{},{},{:.3}",
            self.algorithm,
            self.density,
            self.rep,
            self.seed,
            self.metrics.mse,
            format_db(self.metrics.psnr_db),
            precision,
            recall,
            self.ms
        )
    }
}

impl BenchGrid {
    /// Checks the grid and resolves each algorithm name to a preset
    /// (`None` for [`NO_FILTER`]).
    pub fn validate(&self) -> Result<Vec<(String, Option<Operation>)>> {
        if self.densities.is_empty() {
            return Err(Error::invalid("bench grid needs at least one density"));
        }
        if self.algorithms.is_empty() {
            return Err(Error::invalid("bench grid needs at least one algorithm"));
        }
        if self.repetitions == 0 {
            return Err(Error::invalid("bench grid needs at least one repetition"));
        }
        if let Some(d) = self.densities.iter().find(|d| !(0.0..=1.0).contains(*d)) {
            return Err(Error::param("densities", format!("{d} is outside [0, 1]")));
        }
        self.algorithms
            .iter()
            .map(|name| {
                if name == NO_FILTER {
                    Ok((name.clone(), None))
                } else if FILTER_OPS.contains(&name.as_str()) {
                    Ok((name.clone(), Some(Operation::preset(name)?)))
                } else {
                    Err(Error::param(
                        "algorithms",
                        format!(
                            "unknown algorithm `{name}` (expected none or one of {})",
                            FILTER_OPS.join(", ")
                        ),
                    ))
                }
            })
            .collect()
    }

    /// Runs every cell against `clean`.
    pub fn run(&self, clean: &GrayImage) -> Result<Vec<BenchRow>> {
        let algorithms = self.validate()?;
        let mut cells = Vec::new();
        for &density in &self.densities {
            for (name, op) in &algorithms {
                for rep in 0..self.repetitions {
                    cells.push((density, name, op, rep));
                }
            }
        }
        cells
            .into_par_iter()
            .map(|(density, name, op, rep)| {
                let seed = self.base_seed.wrapping_add(rep as u64);
                let (noisy, mask) = add_salt_pepper(clean, density, seed)?;
                let start = Instant::now();
                let (restored, flags) = match op {
                    None => (noisy, None),
                    Some(op) => {
                        let out = op.apply(&Image::Gray(noisy))?;
                        let Image::Gray(g) = out.image else {
                            unreachable!("grayscale in, grayscale out")
                        };
                        (g, out.flags)
                    }
                };
                let ms = start.elapsed().as_secs_f64() * 1e3;
                Ok(BenchRow {
                    algorithm: name.clone(),
                    density,
                    rep,
                    seed,
                    metrics: psnr(&restored, clean)?,
                    detection: flags.map(|f| detection_confusion(&f, &mask)).transpose()?,
                    ms,
                })
            })
            .collect()
    }
}

/// Header plus one line per row, newline terminated.
pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv());
        out.push('\n');
    }
    out
}
