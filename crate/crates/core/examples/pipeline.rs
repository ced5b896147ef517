//! Parses a TOML pipeline and runs it on an in-memory image.

use std::path::Path;

use imfilter::metrics::compare;
use imfilter::pipeline::PipelineConfig;
use imfilter::{synth, Image};

const CONFIG: &str = r#"
input = "builtin:step128"
output = "restored.pgm"
seed = 7

[[stages]]
op = "salt-pepper"
params = { density = 0.25 }

[[stages]]
op = "switching-median"
params = { w = 1, t = 40, p = 3 }
"#;

fn main() -> imfilter::Result<()> {
    let pipeline = PipelineConfig::parse(CONFIG)?.validate(Path::new("."))?;
    for (i, op) in pipeline.stages.iter().enumerate() {
        println!("stage {i}: {}", op.describe());
    }
    let clean = Image::Gray(synth::step128());
    let out = pipeline.run_on(clean.clone())?;
    let m = compare(&out, &clean)?;
    println!("mse {:.3}, psnr {:.2} dB", m.mse, m.psnr_db);
    Ok(())
}
