//! Box blur on the 9×9 worked example, printed before and after.

use imfilter::{box_blur, synth, BoxParams, GrayImage};

fn print(label: &str, img: &GrayImage) {
    println!("{label}:");
    for r in 0..img.height() {
        let row: Vec<String> = img.row(r).iter().map(|v| format!("{v:3}")).collect();
        println!("  {}", row.join(" "));
    }
}

fn main() -> imfilter::Result<()> {
    let img = synth::paper9();
    print("input", &img);
    let out = box_blur(&img, &BoxParams::new(1))?;
    print("3x3 box blur", &out);
    let (r, c) = synth::PAPER9_SUM360;
    println!("pixel ({r},{c}) = {}", out.get(r, c));
    Ok(())
}
