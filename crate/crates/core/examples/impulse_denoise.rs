//! Salt-and-pepper noise removed by a plain median and by the switching
//! median, with detection precision and recall.

use imfilter::{add_salt_pepper, detection_confusion, median_filter, psnr, switching_median, synth};
use imfilter::{MedianParams, SwitchingMedianParams};

fn main() -> imfilter::Result<()> {
    let clean = synth::step128();
    println!("density  noisy    median   switching  precision recall");
    for density in [0.05, 0.2, 0.4, 0.6] {
        let (noisy, mask) = add_salt_pepper(&clean, density, 7)?;
        let plain = median_filter(&noisy, &MedianParams::new(1))?;
        let sw = switching_median(&noisy, &SwitchingMedianParams::default())?;
        let det = detection_confusion(&sw.flags, &mask)?;
        println!(
            "{density:<8} {:<8} {:<8} {:<10} {:<9.3} {:.3}",
            format!("{:.2}", psnr(&noisy, &clean)?.psnr_db),
            format!("{:.2}", psnr(&plain, &clean)?.psnr_db),
            format!("{:.2}", psnr(&sw.restored, &clean)?.psnr_db),
            det.precision,
            det.recall
        );
        println!("         changes per pass: {:?}", sw.change_counts);
    }
    Ok(())
}
