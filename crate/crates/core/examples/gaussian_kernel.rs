//! Sampled Gaussian taps for a few sigmas, and the guidance warning for wide
//! windows.

use imfilter::linear::window_guidance;
use imfilter::{gaussian_kernel_1d, GaussianParams};

fn main() -> imfilter::Result<()> {
    for sigma in [0.5, 1.0, 2.0, 3.0] {
        let p = GaussianParams::new(sigma);
        let k = gaussian_kernel_1d(&p)?;
        let taps: Vec<String> = k.taps().iter().map(|t| format!("{t:.4}")).collect();
        println!("sigma {sigma}: radius {} [{}]", k.radius(), taps.join(", "));
        if let Some(w) = window_guidance(k.side()) {
            println!("  warning: {w}");
        }
    }
    Ok(())
}
