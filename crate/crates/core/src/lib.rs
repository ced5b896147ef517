//! Deterministic image filtering.
//!
//! * [`linear`]: direct convolution, exact integer box blur, separable
//!   Gaussian blur.
//! * [`median`]: median filter and the iterative switching median impulse
//!   detector.
//! * [`bilateral`]: edge-preserving bilateral filter with Gaussian or box
//!   spatial weights and Gaussian or tent range weights.
//! * [`noise`] and [`metrics`]: seeded salt-and-pepper / Gaussian noise,
//!   MSE, PSNR and detection precision/recall.
//! * [`pnm`]: 8-bit PGM/PPM codec.
//! * [`ops`], [`pipeline`], [`bench`], [`cli`]: named operations, TOML
//!   pipelines, the parameter sweep harness and the `imfilter` tool.
//!
//! Every filter rounds once per output pixel, half away from zero, and is
//! row-parallel with output identical to a serial run.
//!
//! ```
//! use imfilter::{box_blur, synth, BoxParams};
//!
//! let img = synth::paper9();
//! let out = box_blur(&img, &BoxParams::new(1)).unwrap();
//! assert_eq!(out.get(2, 3), 40);
//! ```

pub mod bench;
pub mod bilateral;
pub mod cli;
pub mod error;
pub mod image;
pub mod linear;
pub mod median;
pub mod metrics;
pub mod noise;
pub mod ops;
pub mod pipeline;
pub mod pnm;
pub mod synth;

pub use bilateral::{bilateral_filter, bilateral_reference, edge_contrast, BilateralParams, RangeKind, SpatialKind};
pub use error::{Error, PnmError, Result};
pub use image::{
    merge_channels, split_channels, BorderPolicy, FlagImage, GrayImage, Image, Mask, NoiseMask, PixelCoord, RgbImage,
};
pub use linear::{
    box_blur, convolve_naive, gaussian_blur, gaussian_kernel_1d, BoxParams, GaussianParams, Kernel, Radius,
    SeparableKernel,
};
pub use median::{
    detect_and_correct_once, median_filter, switching_median, window_median, MedianParams, SwitchingMedianParams,
    SwitchingMedianResult,
};
pub use metrics::{detection_confusion, mse, psnr, DetectionReport, MetricsReport};
pub use noise::{add_gaussian_noise, add_salt_pepper, NoiseKind, NoiseSpec};
pub use pnm::{read_pnm, write_pnm};
