//! Writes a color image as ASCII and binary PPM, reads both back, and blurs
//! each channel.

use imfilter::{box_blur, merge_channels, read_pnm, synth, write_pnm, BoxParams, Image};

fn main() -> imfilter::Result<()> {
    let g = synth::paper9();
    let rgb = merge_channels(g.clone(), g.flip_horizontal(), g)?;
    let img = Image::Rgb(rgb);
    for ascii in [true, false] {
        let bytes = write_pnm(&img, ascii);
        let back = read_pnm(&bytes)?;
        println!(
            "{} bytes ({}), roundtrip exact: {}",
            bytes.len(),
            if ascii { "P3" } else { "P6" },
            back == img
        );
    }
    let blurred = img.try_map_planes(|p| box_blur(p, &BoxParams::new(1)))?;
    print!("{}", String::from_utf8_lossy(&write_pnm(&blurred, true)));
    Ok(())
}
