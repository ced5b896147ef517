//! Bilateral filter against Gaussian blur on a noisy step edge.

use imfilter::{add_gaussian_noise, bilateral_filter, edge_contrast, gaussian_blur, psnr, synth};
use imfilter::{BilateralParams, GaussianParams};

fn main() -> imfilter::Result<()> {
    let clean = synth::step128();
    let noisy = add_gaussian_noise(&clean, 10.0, 7)?;
    let candidates = [
        ("noisy", noisy.clone()),
        ("gaussian s=2", gaussian_blur(&noisy, &GaussianParams::new(2.0))?),
        (
            "bilateral 2/30",
            bilateral_filter(&noisy, &BilateralParams::new(2.0, 30.0))?,
        ),
        (
            "surface blur r=2",
            bilateral_filter(&noisy, &BilateralParams::surface_blur(2, 30.0))?,
        ),
    ];
    for (name, img) in &candidates {
        let contrast = edge_contrast(img, synth::STEP_EDGE_COL, 2)?;
        let db = psnr(img, &clean)?.psnr_db;
        println!("{name:<18} edge contrast {contrast:6.1}  psnr {db:5.2} dB");
    }
    Ok(())
}
