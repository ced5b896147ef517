//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any criterion fails.

use std::fs;
use std::path::Path;
use std::process::Command;

use imfilter::bench::{self, BenchGrid};
use imfilter::linear::window_guidance;
use imfilter::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    };
}

fn random_gray(rng: &mut ChaCha8Rng, w: usize, h: usize) -> GrayImage {
    GrayImage::from_fn(w, h, |_, _| rng.random()).unwrap()
}

fn random_border(rng: &mut ChaCha8Rng) -> BorderPolicy {
    match rng.random_range(0..3) {
        0 => BorderPolicy::Replicate,
        1 => BorderPolicy::Mirror,
        _ => BorderPolicy::Constant(rng.random()),
    }
}

fn max_abs_diff(a: &GrayImage, b: &GrayImage) -> u8 {
    a.pixels()
        .iter()
        .zip(b.pixels())
        .map(|(x, y)| x.abs_diff(*y))
        .max()
        .unwrap_or(0)
}

// 1
fn worked_example() -> Outcome {
    let out = box_blur(&synth::paper9(), &BoxParams::new(1)).map_err(|e| e.to_string())?;
    let (r, c) = synth::PAPER9_SUM360;
    let a = out.get(r, c);
    let (r2, c2) = synth::PAPER9_ISOLATED;
    let b = out.get(r2, c2);
    ensure!(a == 40, "sum-360 pixel gave {a}, expected 40");
    ensure!(b == 10, "isolated-90 pixel gave {b}, expected 10");
    Ok(format!("box r=1 on paper9: ({r},{c}) = 40, ({r2},{c2}) = 10"))
}

// 2
fn box_oracle() -> Outcome {
    let mut cases = 0;
    for bits in 0u8..16 {
        let px = (0..4).map(|i| if bits >> i & 1 == 1 { 255 } else { 0 }).collect();
        let img = GrayImage::from_vec(2, 2, px).unwrap();
        for radius in 1..=3 {
            for border in [BorderPolicy::Replicate, BorderPolicy::Mirror, BorderPolicy::Constant(0)] {
                let p = BoxParams { radius, border };
                let naive = convolve_naive(&img, &Kernel::uniform(p.side()).unwrap(), border).unwrap();
                ensure!(
                    box_blur(&img, &p).unwrap() == naive,
                    "2x2 pattern {bits:04b} r={radius} {border:?}"
                );
                cases += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..1000 {
        let w = rng.random_range(1..=64);
        let h = rng.random_range(1..=64);
        let img = random_gray(&mut rng, w, h);
        let radius = 1 + i % 3;
        let border = random_border(&mut rng);
        let p = BoxParams { radius, border };
        let naive = convolve_naive(&img, &Kernel::uniform(p.side()).unwrap(), border).unwrap();
        ensure!(
            box_blur(&img, &p).unwrap() == naive,
            "random image {i} ({w}x{h}) r={radius} {border:?}"
        );
        cases += 1;
    }
    Ok(format!(
        "{cases} cases bit-exact (48 exhaustive 2x2 + 1000 random up to 64x64)"
    ))
}

// 3
fn bilateral_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for i in 0..20 {
        let img = random_gray(&mut rng, 16, 16);
        let mut p = BilateralParams::new(rng.random_range(0.5..3.0), rng.random_range(5.0..100.0));
        if rng.random() {
            p.radius = Radius::Fixed(rng.random_range(1..=4));
        }
        if rng.random() {
            p.spatial = SpatialKind::Box;
        }
        if rng.random() {
            p.range = RangeKind::Tent;
        }
        p.border = random_border(&mut rng);
        let fast = bilateral_filter(&img, &p).unwrap();
        let reference = bilateral_reference(&img, &p).unwrap();
        ensure!(fast == reference, "draw {i} differs: {p:?}");
    }
    Ok("20 draws at 16x16 bit-exact".into())
}

// 4: steps 1-4 written out directly on plain integers
fn transcription(x: &[i32; 9], t: i32) -> ([i32; 9], [u8; 9]) {
    let mut out = *x;
    let mut flags = [0u8; 9];
    for i in 0..3i32 {
        for j in 0..3i32 {
            let mut window = Vec::with_capacity(9);
            for k in -1..=1 {
                for l in -1..=1 {
                    let a = (i + k).clamp(0, 2);
                    let b = (j + l).clamp(0, 2);
                    window.push(x[(a * 3 + b) as usize]);
                }
            }
            window.sort();
            let m = window[4];
            let idx = (i * 3 + j) as usize;
            let f_prev = 0u8;
            let f = if (x[idx] - m).abs() < t { f_prev } else { 1 };
            flags[idx] = f;
            out[idx] = if f != f_prev { m } else { x[idx] };
        }
    }
    (out, flags)
}

fn switching_transcription() -> Outcome {
    const LEVELS: [i32; 3] = [0, 128, 255];
    let mut cases = 0;
    for t in [40u8, 128] {
        let p = SwitchingMedianParams {
            half_window: 1,
            threshold: t,
            iterations: 1,
        };
        for code in 0..3usize.pow(9) {
            let mut x = [0i32; 9];
            let mut c = code;
            for v in x.iter_mut() {
                *v = LEVELS[c % 3];
                c /= 3;
            }
            let img = GrayImage::from_vec(3, 3, x.iter().map(|&v| v as u8).collect()).unwrap();
            let res = switching_median(&img, &p).unwrap();
            let (want_x, want_f) = transcription(&x, i32::from(t));
            for k in 0..9 {
                ensure!(
                    i32::from(res.restored.pixels()[k]) == want_x[k] && res.flags.bits()[k] == (want_f[k] == 1),
                    "case {code} t={t} pixel {k}"
                );
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} exhaustive 3x3 cases (T=40 and T=128) match"))
}

// 5
fn denoising_improvement() -> Outcome {
    let clean = synth::step128();
    let p = SwitchingMedianParams {
        half_window: 1,
        threshold: 40,
        iterations: 3,
    };
    let mut notes = Vec::new();
    for density in [0.05, 0.2, 0.4, 0.6] {
        let (noisy, mask) = add_salt_pepper(&clean, density, 7).unwrap();
        let before = psnr(&noisy, &clean).unwrap().psnr_db;
        let res = switching_median(&noisy, &p).unwrap();
        let after = psnr(&res.restored, &clean).unwrap().psnr_db;
        ensure!(
            after > before,
            "density {density}: {after:.2} dB not above noisy {before:.2} dB"
        );
        let det = detection_confusion(&res.flags, &mask).unwrap();
        if density == 0.2 {
            ensure!(after - before >= 10.0, "density 0.2 gain {:.2} dB < 10", after - before);
            ensure!(det.precision >= 0.9, "density 0.2 precision {:.4} < 0.9", det.precision);
            ensure!(det.recall >= 0.9, "density 0.2 recall {:.4} < 0.9", det.recall);
        }
        notes.push(format!(
            "{density}: {before:.1}->{after:.1} dB (P {:.3} R {:.3})",
            det.precision, det.recall
        ));
    }
    Ok(notes.join("; "))
}

// 6
fn edge_preservation() -> Outcome {
    let step = synth::step128();
    let m = median_filter(&step, &MedianParams::new(1)).unwrap();
    ensure!(m == step, "median W=1 altered the clean step");
    let g = gaussian_blur(&step, &GaussianParams::new(2.0)).unwrap();
    ensure!(g != step, "gaussian sigma=2 left the step unchanged");
    Ok(format!(
        "median identity; gaussian max change {}",
        max_abs_diff(&g, &step)
    ))
}

// 7
const STRIP: usize = 2;

fn bilateral_vs_gaussian() -> Outcome {
    let clean = synth::step128();
    let noisy = add_gaussian_noise(&clean, 10.0, 7).unwrap();
    let b = bilateral_filter(&noisy, &BilateralParams::new(2.0, 30.0)).unwrap();
    let g = gaussian_blur(&noisy, &GaussianParams::new(2.0)).unwrap();
    let cb = edge_contrast(&b, synth::STEP_EDGE_COL, STRIP).unwrap();
    let cg = edge_contrast(&g, synth::STEP_EDGE_COL, STRIP).unwrap();
    let pb = psnr(&b, &clean).unwrap().psnr_db;
    let pg = psnr(&g, &clean).unwrap().psnr_db;
    ensure!(cb > cg, "bilateral contrast {cb:.2} not above gaussian {cg:.2}");
    ensure!(pb > pg, "bilateral psnr {pb:.2} not above gaussian {pg:.2}");
    Ok(format!("contrast {cb:.1} vs {cg:.1}; psnr {pb:.2} vs {pg:.2} dB"))
}

// 8
fn gaussian_limit() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let inputs = [
        add_gaussian_noise(&synth::step128(), 10.0, 7).unwrap(),
        random_gray(&mut rng, 48, 40),
    ];
    let mut worst = 0;
    for img in &inputs {
        for (sigma, radius, border) in [
            (2.0, None, BorderPolicy::Replicate),
            (1.0, Some(2), BorderPolicy::Mirror),
            (1.5, Some(4), BorderPolicy::Constant(50)),
        ] {
            let mut bp = BilateralParams::new(sigma, 1e9);
            let mut gp = GaussianParams::new(sigma);
            if let Some(r) = radius {
                bp = bp.with_radius(r);
                gp = gp.with_radius(r);
            }
            bp.border = border;
            gp.border = border;
            let d = max_abs_diff(&bilateral_filter(img, &bp).unwrap(), &gaussian_blur(img, &gp).unwrap());
            ensure!(d <= 1, "deviation {d} for sigma {sigma} radius {radius:?} {border:?}");
            worst = worst.max(d);
        }
    }
    Ok(format!("max deviation {worst} across 6 configurations"))
}

// 9
fn kernel_hygiene() -> Outcome {
    let mut checked = 0;
    let mut rejected = 0;
    let sigmas = (1..=200).map(|i| f64::from(i) * 0.05).chain([1e-3, 25.0, 1e6]);
    for sigma in sigmas {
        for radius in [None, Some(1), Some(3), Some(7)] {
            let mut p = GaussianParams::new(sigma);
            if let Some(r) = radius {
                p = p.with_radius(r);
            }
            // a kernel that cannot keep every tap positive must be refused
            let r = p.resolved_radius() as f64;
            let unrepresentable = r * r / (2.0 * sigma * sigma) > 700.0 || r > 4096.0;
            let built = gaussian_kernel_1d(&p);
            ensure!(
                built.is_err() == unrepresentable,
                "sigma {sigma} radius {radius:?}: refused={}",
                built.is_err()
            );
            let Ok(k) = built else {
                rejected += 1;
                continue;
            };
            let taps = k.taps();
            let sum: f64 = taps.iter().sum();
            ensure!((sum - 1.0).abs() <= 1e-12, "sigma {sigma} radius {radius:?}: sum {sum}");
            ensure!(taps.iter().all(|&t| t > 0.0), "sigma {sigma}: non-positive tap");
            ensure!(
                taps.iter().eq(taps.iter().rev()),
                "sigma {sigma} radius {radius:?}: asymmetric"
            );
            checked += 1;
        }
    }

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut cli_checks = 0;
    let runs: Vec<(Vec<String>, usize)> = (1..=5)
        .map(|r| (vec!["box".into(), "--radius".into(), r.to_string()], 2 * r + 1))
        .chain((1..=4).map(|w| (vec!["median".into(), "--w".into(), w.to_string()], 2 * w + 1)))
        .chain([0.5, 1.0, 1.4, 3.0].map(|s: f64| {
            let side = 2 * ((3.0 * s).ceil() as usize).max(1) + 1;
            (vec!["gaussian".into(), "--sigma".into(), s.to_string()], side)
        }))
        .chain([(vec!["bilateral".into(), "--radius".into(), "3".into()], 7)])
        .chain([(vec!["bilateral".into()], 13)])
        .collect();
    for (args, side) in runs {
        let mut full = vec!["filter".to_string()];
        full.extend(args.iter().cloned());
        full.extend(["builtin:paper9".to_string(), "o.pgm".to_string()]);
        let out = Command::new(env!("CARGO_BIN_EXE_imfilter"))
            .args(&full)
            .current_dir(dir.path())
            .output()
            .map_err(|e| e.to_string())?;
        ensure!(out.status.success(), "{full:?} failed");
        let err = String::from_utf8_lossy(&out.stderr);
        let warned = err.contains("exceeds 7; see guidance");
        ensure!(warned == (side > 7), "{args:?} (side {side}) warned={warned}");
        if let Some(w) = window_guidance(side) {
            ensure!(err.contains(&w), "{args:?}: wrong warning text");
        }
        cli_checks += 1;
    }
    Ok(format!("{checked} kernels normalized/symmetric/positive ({rejected} unrepresentable configs refused); {cli_checks} CLI warning checks"))
}

// 10
fn run_cli(dir: &Path, args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_imfilter"))
        .args(args)
        .current_dir(dir)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

fn strip_ms(csv: &[u8]) -> String {
    String::from_utf8_lossy(csv)
        .lines()
        .map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head).to_string())
        .collect::<Vec<_>>()
        .join("\n")
}

fn determinism_and_codec() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for i in 0..100 {
        let w = rng.random_range(1..=40);
        let h = rng.random_range(1..=40);
        let g = random_gray(&mut rng, w, h);
        let rgb = merge_channels(
            random_gray(&mut rng, w, h),
            random_gray(&mut rng, w, h),
            random_gray(&mut rng, w, h),
        )
        .unwrap();
        for img in [Image::Gray(g), Image::Rgb(rgb)] {
            for ascii in [true, false] {
                let back = read_pnm(&write_pnm(&img, ascii)).map_err(|e| e.to_string())?;
                ensure!(back == img, "image {i} ascii={ascii} did not roundtrip");
            }
        }
    }

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path();
    fs::write(
        d.join("p.toml"),
        "input = \"builtin:step128\"\noutput = \"OUT\"\nseed = 7\n\
         [[stages]]\nop = \"gaussian-noise\"\nparams = { sd = 10 }\n\
         [[stages]]\nop = \"salt-pepper\"\nparams = { density = 0.1, seed = 3 }\n\
         [[stages]]\nop = \"switching-median\"\n[[stages]]\nop = \"bilateral\"\n",
    )
    .map_err(|e| e.to_string())?;
    for tag in ["a", "b"] {
        run_cli(
            d,
            &[
                "noise",
                "sp",
                "--density",
                "0.3",
                "--seed",
                "7",
                "builtin:step128",
                &format!("sp_{tag}.pgm"),
                "--mask-out",
                &format!("mask_{tag}.pgm"),
            ],
        )?;
        run_cli(
            d,
            &[
                "noise",
                "gaussian",
                "--sd",
                "10",
                "--seed",
                "7",
                "builtin:step128",
                &format!("gn_{tag}.pgm"),
            ],
        )?;
        let cfg = fs::read_to_string(d.join("p.toml"))
            .unwrap()
            .replace("OUT", &format!("pipe_{tag}.pgm"));
        fs::write(d.join(format!("p_{tag}.toml")), cfg).unwrap();
        run_cli(d, &["pipeline", &format!("p_{tag}.toml")])?;
    }
    for stem in ["sp", "mask", "gn", "pipe"] {
        let a = fs::read(d.join(format!("{stem}_a.pgm"))).unwrap();
        let b = fs::read(d.join(format!("{stem}_b.pgm"))).unwrap();
        ensure!(a == b, "{stem} output differs between runs");
    }
    let bench_args = ["bench", "--densities", "0.1,0.4", "--reps", "2", "--seed", "11"];
    let b1 = strip_ms(&run_cli(d, &bench_args)?);
    let b2 = strip_ms(&run_cli(d, &bench_args)?);
    ensure!(b1 == b2, "bench CSV differs between runs outside the ms column");

    // serial vs parallel
    let serial = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let parallel = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let img = add_gaussian_noise(&synth::step128(), 20.0, 1).unwrap();
    let (sp, _) = add_salt_pepper(&img, 0.2, 2).unwrap();
    let work = || -> Vec<Vec<u8>> {
        let k = gaussian_kernel_1d(&GaussianParams::new(1.0)).unwrap().outer();
        vec![
            box_blur(&img, &BoxParams::new(3)).unwrap().into_pixels(),
            gaussian_blur(&img, &GaussianParams::new(2.0)).unwrap().into_pixels(),
            convolve_naive(&img, &k, BorderPolicy::Mirror).unwrap().into_pixels(),
            median_filter(&sp, &MedianParams::new(2)).unwrap().into_pixels(),
            switching_median(&sp, &SwitchingMedianParams::default())
                .unwrap()
                .restored
                .into_pixels(),
            bilateral_filter(&img, &BilateralParams::new(2.0, 30.0))
                .unwrap()
                .into_pixels(),
            strip_ms(
                bench::to_csv(
                    &BenchGrid {
                        densities: vec![0.1, 0.3],
                        algorithms: vec!["median".into(), "switching-median".into()],
                        repetitions: 2,
                        base_seed: 5,
                        reference: String::new(),
                    }
                    .run(&synth::step128())
                    .unwrap(),
                )
                .as_bytes(),
            )
            .into_bytes(),
        ]
    };
    let a = serial.install(work);
    let b = parallel.install(work);
    ensure!(a == b, "serial and parallel outputs differ");
    Ok("200 images x 2 encodings roundtrip; noise/mask/pipeline/bench reproducible; 1 vs 4 threads identical".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("worked example", worked_example),
        ("box oracle equivalence", box_oracle),
        ("bilateral oracle", bilateral_oracle),
        ("switching-median transcription", switching_transcription),
        ("denoising improvement", denoising_improvement),
        ("edge preservation", edge_preservation),
        ("bilateral beats gaussian on edges", bilateral_vs_gaussian),
        ("gaussian limit", gaussian_limit),
        ("kernel hygiene", kernel_hygiene),
        ("determinism and codec", determinism_and_codec),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS  {:>2}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  {:>2}. {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
