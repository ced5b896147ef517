//! Builtin synthetic images, addressable from the command line as
//! `builtin:<name>`.

use crate::error::{Error, Result};
use crate::image::{GrayImage, Image};
use crate::pnm;

pub const BUILTIN_PREFIX: &str = "builtin:";
pub const BUILTIN_NAMES: [&str; 3] = ["paper9", "step128", "flat128"];

/// `paper9`: position whose 3x3 neighbourhood sums to 360.
pub const PAPER9_SUM360: (usize, usize) = (2, 3);
/// `paper9`: a lone 90 with an all-zero neighbourhood.
pub const PAPER9_ISOLATED: (usize, usize) = (7, 2);
/// `paper9`: a 0 hole surrounded by 90s.
pub const PAPER9_HOLE: (usize, usize) = (4, 4);

/// Low and high levels of `step128`. Both sit away from 0 and 255 so every
/// injected impulse changes the pixel it lands on.
pub const STEP_LOW: u8 = 64;
pub const STEP_HIGH: u8 = 192;
/// First column of the bright half of `step128`.
pub const STEP_EDGE_COL: usize = 64;

/// The 9x9 box-blur worked example: a 90-valued block on a zero background
/// with one hole inside the block and one isolated 90 outside it.
///
/// ```text
/// 0 0 0  0  0  0  0  0 0
/// 0 0 0  0  0  0  0  0 0
/// 0 0 0 90 90 90 90 90 0
/// 0 0 0 90 90 90 90 90 0
/// 0 0 0 90  0 90 90 90 0
/// 0 0 0 90 90 90 90 90 0
/// 0 0 0  0  0  0  0  0 0
/// 0 0 90 0  0  0  0  0 0
/// 0 0 0  0  0  0  0  0 0
/// ```
pub fn paper9() -> GrayImage {
    GrayImage::from_fn(9, 9, |r, c| {
        let in_block = (2..=5).contains(&r) && (3..=7).contains(&c);
        if (r, c) == PAPER9_HOLE {
            0
        } else if in_block || (r, c) == PAPER9_ISOLATED {
            90
        } else {
            0
        }
    })
    .expect("fixed size")
}

/// 128x128 vertical two-level step: columns `< 64` are [`STEP_LOW`], the rest
/// [`STEP_HIGH`].
pub fn step128() -> GrayImage {
    GrayImage::from_fn(128, 128, |_, c| if c < STEP_EDGE_COL { STEP_LOW } else { STEP_HIGH }).expect("fixed size")
}

pub fn flat128() -> GrayImage {
    GrayImage::new_filled(128, 128, 128).expect("fixed size")
}

pub fn builtin(name: &str) -> Option<GrayImage> {
    match name {
        "paper9" => Some(paper9()),
        "step128" => Some(step128()),
        "flat128" => Some(flat128()),
        _ => None,
    }
}

/// Loads `builtin:<name>` or reads a Netpbm file from the given path.
pub fn open_input(spec: &str) -> Result<Image> {
    match spec.strip_prefix(BUILTIN_PREFIX) {
        Some(name) => builtin(name).map(Image::Gray).ok_or_else(|| {
            Error::invalid(format!(
                "unknown builtin image `{name}` (expected one of {})",
                BUILTIN_NAMES.join(", ")
            ))
        }),
        None => pnm::read_pnm_file(spec),
    }
}
