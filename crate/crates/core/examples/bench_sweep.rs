//! A small density × algorithm sweep printed as CSV.

use imfilter::bench::{to_csv, BenchGrid};
use imfilter::synth;

fn main() -> imfilter::Result<()> {
    let grid = BenchGrid {
        densities: vec![0.1, 0.3, 0.5],
        algorithms: ["none", "median", "switching-median", "bilateral"]
            .map(String::from)
            .to_vec(),
        repetitions: 2,
        base_seed: 7,
        reference: "builtin:step128".into(),
    };
    let rows = grid.run(&synth::step128())?;
    print!("{}", to_csv(&rows));
    Ok(())
}
