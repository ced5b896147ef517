//! The `imfilter` command line tool.
//!
//! Exit codes: 0 success, 1 usage error, 2 I/O error, 3 parse or validation
//! error. Errors are written to the diagnostic stream as a single line
//! `error[<kind>]: <message>` with kind `usage`, `io` or `validation`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use toml::{Table, Value};

use crate::bench::{self, BenchGrid};
use crate::error::{Error, Result};
use crate::image::{Image, Mask};
use crate::linear::window_guidance;
use crate::metrics::{compare, detection_confusion, format_db};
use crate::ops::Operation;
use crate::pipeline::Pipeline;
use crate::pnm::write_pnm_file;
use crate::synth::open_input;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "imfilter",
    version,
    about = "Deterministic image filtering, noise injection and metrics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Apply one filter to a PGM/PPM image.
    Filter(FilterArgs),
    /// Inject seeded noise into a PGM image.
    Noise(NoiseArgs),
    /// Compare two images; prints `mse,psnr_db[,precision,recall]`.
    Metric(MetricArgs),
    /// Run a density × algorithm × repetition sweep and print CSV.
    Bench(BenchArgs),
    /// Run a multi-stage TOML pipeline.
    Pipeline(PipelineArgs),
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct FilterArgs {
    /// box, gaussian, median, switching-median, bilateral or surface-blur
    op: String,
    /// Input PNM path or builtin:<name>
    input: String,
    output: PathBuf,
    /// Window radius (integer or "auto")
    #[arg(long)]
    radius: Option<String>,
    #[arg(long)]
    sigma: Option<f64>,
    /// Median half-window
    #[arg(long = "w")]
    w: Option<i64>,
    /// Switching median threshold
    #[arg(long = "t")]
    t: Option<i64>,
    /// Switching median iteration count
    #[arg(long = "p")]
    p: Option<i64>,
    #[arg(long = "sigma-s")]
    sigma_s: Option<f64>,
    #[arg(long = "sigma-r")]
    sigma_r: Option<f64>,
    /// gaussian or box
    #[arg(long)]
    spatial: Option<String>,
    /// gaussian or tent
    #[arg(long)]
    range: Option<String>,
    /// replicate, mirror, crop or constant:<v>
    #[arg(long)]
    border: Option<String>,
    /// Write the switching median flag image (0/255 PGM) here
    #[arg(long = "flags-out")]
    flags_out: Option<PathBuf>,
    /// Write ASCII (P2/P3) instead of binary
    #[arg(long)]
    ascii: bool,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct NoiseArgs {
    /// sp (salt-and-pepper) or gaussian
    kind: String,
    input: String,
    output: PathBuf,
    #[arg(long)]
    density: Option<f64>,
    #[arg(long)]
    sd: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the corruption mask (0/255 PGM) here
    #[arg(long = "mask-out")]
    mask_out: Option<PathBuf>,
    #[arg(long)]
    ascii: bool,
}

#[derive(Debug, Args)]
struct MetricArgs {
    a: String,
    b: String,
    /// Detector flag image, scored against --mask
    #[arg(long, requires = "mask")]
    flags: Option<String>,
    /// Ground-truth corruption mask
    #[arg(long, requires = "flags")]
    mask: Option<String>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [0.05, 0.2, 0.4, 0.6])]
    densities: Vec<f64>,
    #[arg(
        long,
        value_delimiter = ',',
        default_values_t = ["none", "box", "gaussian", "median", "switching-median", "bilateral"].map(String::from)
    )]
    algorithms: Vec<String>,
    #[arg(long, default_value_t = 3)]
    reps: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Clean reference: PGM path or builtin:<name>
    #[arg(long, default_value = "builtin:step128")]
    image: String,
}

#[derive(Debug, Args)]
struct PipelineArgs {
    config: PathBuf,
}

/// Runs the tool with explicit streams; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let msg = e.to_string();
                    let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
                    let _ = writeln!(stderr, "error[usage]: {first}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Filter(a) => cmd_filter(a, stderr),
        Command::Noise(a) => cmd_noise(a, stderr),
        Command::Metric(a) => cmd_metric(a, stdout),
        Command::Bench(a) => cmd_bench(a, stdout),
        Command::Pipeline(a) => cmd_pipeline(a, stderr),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let (kind, code) = if e.is_io() {
                ("io", EXIT_IO)
            } else {
                ("validation", EXIT_VALIDATION)
            };
            let _ = writeln!(stderr, "error[{kind}]: {e}");
            code
        }
    }
}

/// Entry point for the binary.
pub fn main() -> ! {
    let code = run(
        std::env::args_os(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code)
}

fn filter_table(a: &FilterArgs) -> Table {
    let mut t = Table::new();
    if let Some(r) = &a.radius {
        let v = r
            .parse::<i64>()
            .map(Value::Integer)
            .unwrap_or_else(|_| Value::String(r.clone()));
        t.insert("radius".into(), v);
    }
    let mut put = |k: &str, v: Option<Value>| {
        if let Some(v) = v {
            t.insert(k.into(), v);
        }
    };
    put("sigma", a.sigma.map(Value::Float));
    put("w", a.w.map(Value::Integer));
    put("t", a.t.map(Value::Integer));
    put("p", a.p.map(Value::Integer));
    put("sigma-s", a.sigma_s.map(Value::Float));
    put("sigma-r", a.sigma_r.map(Value::Float));
    put("spatial", a.spatial.clone().map(Value::String));
    put("range", a.range.clone().map(Value::String));
    put("border", a.border.clone().map(Value::String));
    t
}

fn warn_window(op: &Operation, stderr: &mut dyn Write) {
    if let Some(w) = op.window_side().and_then(window_guidance) {
        let _ = writeln!(stderr, "warning: {w}");
    }
}

fn cmd_filter(a: FilterArgs, stderr: &mut dyn Write) -> Result<()> {
    if !crate::ops::FILTER_OPS.contains(&a.op.as_str()) {
        return Err(Error::UnknownOp(a.op));
    }
    let op = Operation::from_params(&a.op, &filter_table(&a), None)?;
    if a.flags_out.is_some() && !matches!(op, Operation::SwitchingMedian(_)) {
        return Err(Error::param("flags-out", "only switching-median produces a flag image"));
    }
    warn_window(&op, stderr);
    let input = open_input(&a.input)?;
    let start = Instant::now();
    let out = op.apply(&input)?;
    let ms = start.elapsed().as_secs_f64() * 1e3;
    write_pnm_file(&a.output, &out.image, a.ascii)?;
    if let (Some(path), Some(flags)) = (&a.flags_out, &out.flags) {
        write_pnm_file(path, &Image::Gray(flags.to_gray()), a.ascii)?;
    }
    let _ = writeln!(stderr, "filter: {} {ms:.3} ms", op.describe());
    Ok(())
}

fn cmd_noise(a: NoiseArgs, stderr: &mut dyn Write) -> Result<()> {
    let mut t = Table::new();
    let op_name = match a.kind.as_str() {
        "sp" | "salt-pepper" => {
            if a.sd.is_some() {
                return Err(Error::param("sd", "not used by salt-and-pepper noise"));
            }
            t.insert(
                "density".into(),
                Value::Float(a.density.ok_or_else(|| Error::param("density", "required"))?),
            );
            "salt-pepper"
        }
        "gaussian" | "gaussian-noise" => {
            if a.density.is_some() {
                return Err(Error::param("density", "not used by gaussian noise"));
            }
            t.insert(
                "sd".into(),
                Value::Float(a.sd.ok_or_else(|| Error::param("sd", "required"))?),
            );
            "gaussian-noise"
        }
        other => return Err(Error::UnknownOp(other.to_string())),
    };
    if a.mask_out.is_some() && op_name != "salt-pepper" {
        return Err(Error::param("mask-out", "only salt-and-pepper noise produces a mask"));
    }
    let op = Operation::from_params(op_name, &t, Some(a.seed))?;
    let input = open_input(&a.input)?;
    let out = op.apply(&input)?;
    write_pnm_file(&a.output, &out.image, a.ascii)?;
    if let (Some(path), Some(mask)) = (&a.mask_out, &out.mask) {
        write_pnm_file(path, &Image::Gray(mask.to_gray()), a.ascii)?;
    }
    let _ = writeln!(stderr, "noise: {}", op.describe());
    Ok(())
}

fn read_mask(spec: &str) -> Result<Mask> {
    match open_input(spec)? {
        Image::Gray(g) => Ok(Mask::from_gray(&g)),
        Image::Rgb(_) => Err(Error::invalid(format!("{spec}: mask must be a grayscale image"))),
    }
}

fn cmd_metric(a: MetricArgs, stdout: &mut dyn Write) -> Result<()> {
    let x = open_input(&a.a)?;
    let y = open_input(&a.b)?;
    let report = compare(&x, &y)?;
    let mut line = format!("{},{}", report.mse, format_db(report.psnr_db));
    if let (Some(f), Some(m)) = (&a.flags, &a.mask) {
        let d = detection_confusion(&read_mask(f)?, &read_mask(m)?)?;
        line.push_str(&format!(",{},{}", d.precision, d.recall));
    }
    writeln!(stdout, "{line}").map_err(|source| Error::Io {
        path: "<stdout>".into(),
        source,
    })
}

fn cmd_bench(a: BenchArgs, stdout: &mut dyn Write) -> Result<()> {
    let grid = BenchGrid {
        densities: a.densities,
        algorithms: a.algorithms,
        repetitions: a.reps,
        base_seed: a.seed,
        reference: a.image,
    };
    grid.validate()?;
    let clean = match open_input(&grid.reference)? {
        Image::Gray(g) => g,
        Image::Rgb(_) => return Err(Error::invalid("bench reference must be a grayscale image")),
    };
    let rows = grid.run(&clean)?;
    stdout
        .write_all(bench::to_csv(&rows).as_bytes())
        .map_err(|source| Error::Io {
            path: "<stdout>".into(),
            source,
        })
}

fn cmd_pipeline(a: PipelineArgs, stderr: &mut dyn Write) -> Result<()> {
    let pipeline = Pipeline::load(&a.config)?;
    for op in &pipeline.stages {
        warn_window(op, stderr);
    }
    let image = pipeline.run()?;
    write_pnm_file(&pipeline.output, &image, pipeline.ascii)?;
    let _ = writeln!(
        stderr,
        "pipeline: {} stage(s) -> {}",
        pipeline.stages.len(),
        pipeline.output.display()
    );
    Ok(())
}
