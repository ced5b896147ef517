//! Seeded noise generation and the MSE / PSNR metrics.

use imfilter::metrics::format_db;
use imfilter::{add_gaussian_noise, add_salt_pepper, psnr, synth};

fn main() -> imfilter::Result<()> {
    let clean = synth::flat128();
    for sd in [2.0, 5.0, 10.0, 20.0] {
        let noisy = add_gaussian_noise(&clean, sd, 1)?;
        let m = psnr(&noisy, &clean)?;
        println!("gaussian sd {sd:>4}: mse {:8.3} psnr {:.2} dB", m.mse, m.psnr_db);
    }
    let (a, mask) = add_salt_pepper(&clean, 0.1, 42)?;
    let (b, _) = add_salt_pepper(&clean, 0.1, 42)?;
    println!(
        "salt-and-pepper 0.1: {} pixels corrupted, same seed identical: {}",
        mask.count(),
        a == b
    );
    println!("identical images: psnr {}", format_db(psnr(&clean, &clean)?.psnr_db));
    Ok(())
}
