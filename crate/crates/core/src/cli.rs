//! Command-line front end.
//!
//! Exit codes: 0 success, 2 input error, 3 numeric precondition,
//! 4 contour or region of convergence, 5 scale mismatch.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use crate::calculus::{antiderivative, derivative, Signal};
use crate::error::{Error, Result};
use crate::exponential;
use crate::fractional::{fractional_derivative, fractional_kernel};
use crate::io;
use crate::systems::rational::Roc;
use crate::systems::{
    convolve, correlate, resample_uniform, simulate, ConvolutionPath, KernelMethod, ResampleOptions, SimulationRule,
};
use crate::timescale::{Direction, TimeScale};
use crate::transform::{contour_inverse, direct_transform, invert_rational, reciprocal_graininess, Contour};

const S_GRID_HELP: &str = "Complex s samples: comma-separated `re+imj` tokens (e.g. `0.5,1+2j,-3j`) \
or a linear range `re0:re1:count,im` with `count` points from re0 to re1 at fixed imaginary part";

#[derive(Debug, Parser)]
#[command(name = "chronoscale", version, about = "Signals and systems on nonuniform time scales")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Nabla or delta derivative of a signal
    Deriv(DerivArgs),
    /// Nabla or delta anti-derivative of a signal
    Antideriv(AntiderivArgs),
    /// Direct transform sampled on an s grid
    Transform(TransformArgs),
    /// Inverse nabla transform of a rational transfer function
    Invert(InvertArgs),
    /// March a dynamic equation driven by a signal
    Simulate(SimulateArgs),
    /// Convolution of two signals
    Convolve(PairArgs),
    /// Cross-correlation of two signals
    Correlate(PairArgs),
    /// Fractional nabla derivative
    Fracderiv(FracArgs),
    /// Resample onto a uniform grid
    Resample(ResampleArgs),
    /// Sample the generalized exponential over the window
    Exp(ExpArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Time scale JSON: {"instants": [...], "t0_index": k}
    #[arg(long)]
    scale: PathBuf,
    /// Output file; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DerivArgs {
    #[command(flatten)]
    common: Common,
    /// Signal CSV with columns t,re,im
    #[arg(long)]
    signal: PathBuf,
    #[arg(long, default_value = "nabla")]
    dir: Direction,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    order: i64,
}

#[derive(Debug, Args)]
struct AntiderivArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    signal: PathBuf,
    #[arg(long, default_value = "nabla")]
    dir: Direction,
}

#[derive(Debug, Args)]
struct TransformArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    signal: PathBuf,
    #[arg(long, default_value = "nabla")]
    dir: Direction,
    #[arg(long = "s-grid", help = S_GRID_HELP, allow_hyphen_values = true)]
    s_grid: String,
}

#[derive(Debug, Args)]
struct InvertArgs {
    #[command(flatten)]
    common: Common,
    /// Rational JSON {"num", "den", "poles"} or equation JSON {"a", "b"}
    #[arg(long)]
    system: PathBuf,
    /// Region of convergence applied to every pole
    #[arg(long)]
    roc: Option<Roc>,
    /// Invert by contour quadrature with this many nodes instead of the catalog
    #[arg(long)]
    nodes: Option<usize>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    system: PathBuf,
    /// Input signal CSV
    #[arg(long)]
    signal: PathBuf,
    /// `matched` divides by the forward step μ_n, `nabla` by the backward step ν_n
    #[arg(long, default_value = "matched")]
    rule: SimulationRule,
}

#[derive(Debug, Args)]
struct PairArgs {
    #[command(flatten)]
    common: Common,
    /// Two signal CSV files
    #[arg(long, num_args = 1, required = true)]
    signal: Vec<PathBuf>,
    /// Allow the interpolating kernel on scales not closed under the shifts
    #[arg(long)]
    general: bool,
    /// Evaluate kernels by contour quadrature with this many nodes
    #[arg(long)]
    nodes: Option<usize>,
}

#[derive(Debug, Args)]
struct FracArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    signal: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long)]
    general: bool,
    #[arg(long)]
    nodes: Option<usize>,
    /// Also write the kernel weights to this file
    #[arg(long = "kernel-out")]
    kernel_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ResampleArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    signal: PathBuf,
    /// Uniform step
    #[arg(long, allow_negative_numbers = true)]
    h: f64,
    /// Permit targets that are not differences of two instants
    #[arg(long = "allow-off-scale")]
    allow_off_scale: bool,
    #[arg(long)]
    nodes: Option<usize>,
}

#[derive(Debug, Args)]
struct ExpArgs {
    #[command(flatten)]
    common: Common,
    /// Exponent parameter, e.g. `0.5` or `-1+2j`
    #[arg(long, allow_hyphen_values = true)]
    s: String,
    #[arg(long, default_value = "nabla")]
    dir: Direction,
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    use Error::*;
    match e {
        Parse(_)
        | Io(_)
        | OrderZeroOrNegative { .. }
        | NonMonotone { .. }
        | TooShort { .. }
        | IndexOutOfRange { .. }
        | InvalidSignal(_)
        | InvalidStep { .. }
        | ReversedInterval { .. }
        | DegenerateDenominator(_)
        | ImproperRational { .. } => 2,
        BoundaryIndex { .. }
        | WindowTooSmall(_)
        | SupportTouchesBoundary { .. }
        | PoleHit { .. }
        | SingularStep { .. }
        | RepeatedGraininess { .. }
        | PoleOnScale { .. }
        | IncompatibleStep(_)
        | TargetOffSuperScale { .. } => 3,
        ContourInvalid(_) | UntaggedPole { .. } => 4,
        ScaleMismatch(_) | NotShiftClosed(_) | ReflectionOffGrid(_) => 5,
    }
}

/// Parses a single complex number: `1.5`, `-2j`, `0.3+0.4j`, `1-2i`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    s.trim().parse::<Complex64>().map_err(|_| Error::Parse(format!("`{s}` is not a complex number")))
}

/// Parses an s grid; see the `--s-grid` help text.
pub fn parse_s_grid(spec: &str) -> Result<Vec<Complex64>> {
    let spec = spec.trim();
    let grid = if spec.contains(':') {
        let (range, im) = spec.split_once(',').unwrap_or((spec, "0"));
        let parts: Vec<&str> = range.split(':').collect();
        let [a, b, count] = parts[..] else {
            return Err(Error::Parse(format!("range `{range}` must be re0:re1:count")));
        };
        let num = |x: &str| x.trim().parse::<f64>().map_err(|_| Error::Parse(format!("`{x}` is not a number")));
        let (a, b, im) = (num(a)?, num(b)?, num(im)?);
        let count: usize = count.trim().parse().map_err(|_| Error::Parse(format!("`{count}` is not a count")))?;
        match count {
            0 => Vec::new(),
            1 => vec![Complex64::new(a, im)],
            _ => (0..count).map(|k| Complex64::new(a + (b - a) * k as f64 / (count - 1) as f64, im)).collect(),
        }
    } else {
        spec.split(',').filter(|t| !t.trim().is_empty()).map(parse_complex).collect::<Result<Vec<_>>>()?
    };
    if grid.is_empty() {
        return Err(Error::Parse("the s grid is empty".into()));
    }
    Ok(grid)
}

fn kernel_method(nodes: Option<usize>) -> KernelMethod {
    nodes.map_or(KernelMethod::Exact, |nodes| KernelMethod::Quadrature { nodes })
}

fn path(general: bool, nodes: Option<usize>) -> ConvolutionPath {
    if general {
        ConvolutionPath::General(kernel_method(nodes))
    } else {
        ConvolutionPath::Fast
    }
}

fn emit(out: &Option<PathBuf>, write: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match out {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            write(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            write(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn emit_signal(out: &Option<PathBuf>, f: &Signal) -> Result<()> {
    emit(out, |mut w| io::write_signal(&mut w, f))
}

fn load(scale: &Path, signal: &Path) -> Result<(Arc<TimeScale>, Signal)> {
    let ts = io::read_scale(scale)?;
    let f = io::read_signal(signal, &ts)?;
    Ok((ts, f))
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Deriv(a) => {
            let (_, f) = load(&a.common.scale, &a.signal)?;
            emit_signal(&a.common.out, &derivative(&f, a.dir, a.order)?)
        }
        Command::Antideriv(a) => {
            let (_, f) = load(&a.common.scale, &a.signal)?;
            emit_signal(&a.common.out, &antiderivative(&f, a.dir)?)
        }
        Command::Transform(a) => {
            let grid = parse_s_grid(&a.s_grid)?;
            let (_, f) = load(&a.common.scale, &a.signal)?;
            let rows =
                grid.into_iter().map(|s| Ok((s, direct_transform(&f, s, a.dir)?))).collect::<Result<Vec<_>>>()?;
            emit(&a.common.out, |mut w| io::write_transform(&mut w, &rows))
        }
        Command::Invert(a) => {
            let ts = io::read_scale(&a.common.scale)?;
            let mut h = io::read_system(&a.system)?.transfer;
            if let Some(roc) = a.roc {
                h.set_roc(roc);
            }
            let f = match a.nodes {
                None => invert_rational(&h, &ts)?,
                Some(nodes) => invert_by_quadrature(&h, &ts, nodes)?,
            };
            emit_signal(&a.common.out, &f)
        }
        Command::Simulate(a) => {
            let (_, x) = load(&a.common.scale, &a.signal)?;
            let sys = io::read_system(&a.system)?;
            let sim = simulate(&sys.a, &sys.b, &x, a.rule)?;
            eprintln!("steps={} min_guard={:.6e}", sim.steps, sim.min_guard);
            emit_signal(&a.common.out, &sim.output)
        }
        Command::Convolve(a) | Command::Correlate(a) if a.signal.len() != 2 => {
            Err(Error::Parse(format!("expected two --signal files, got {}", a.signal.len())))
        }
        Command::Convolve(a) => {
            let ts = io::read_scale(&a.common.scale)?;
            let (f, g) = (io::read_signal(&a.signal[0], &ts)?, io::read_signal(&a.signal[1], &ts)?);
            emit_signal(&a.common.out, &convolve(&f, &g, path(a.general, a.nodes))?)
        }
        Command::Correlate(a) => {
            let ts = io::read_scale(&a.common.scale)?;
            let (f, g) = (io::read_signal(&a.signal[0], &ts)?, io::read_signal(&a.signal[1], &ts)?);
            emit_signal(&a.common.out, &correlate(&f, &g, path(a.general, a.nodes))?)
        }
        Command::Fracderiv(a) => {
            let (ts, f) = load(&a.common.scale, &a.signal)?;
            let d = fractional_derivative(&f, a.alpha, path(a.general, a.nodes))?;
            if let Some(p) = &a.kernel_out {
                let k = fractional_kernel(&ts, a.alpha)?;
                emit(&Some(p.clone()), |mut w| io::write_kernel(&mut w, &k))?;
            }
            emit_signal(&a.common.out, &d)
        }
        Command::Resample(a) => {
            let (_, f) = load(&a.common.scale, &a.signal)?;
            let opts = ResampleOptions { allow_off_scale: a.allow_off_scale, method: kernel_method(a.nodes) };
            emit_signal(&a.common.out, &resample_uniform(&f, a.h, opts)?)
        }
        Command::Exp(a) => {
            let ts = io::read_scale(&a.common.scale)?;
            let s = parse_complex(&a.s)?;
            emit_signal(&a.common.out, &exponential::sample(&ts, ts.t0_index(), s, a.dir)?)
        }
    }
}

/// Quadrature inversion: causal poles stay outside the circle, anti-causal
/// poles are enclosed together with the reciprocal graininess points.
fn invert_by_quadrature(h: &crate::systems::RationalTransform, ts: &Arc<TimeScale>, nodes: usize) -> Result<Signal> {
    let mut inside = reciprocal_graininess(ts, Direction::Nabla);
    let mut outside = Vec::new();
    for p in h.poles() {
        match p.roc {
            Some(Roc::Causal) => outside.push(p.location),
            Some(Roc::Anticausal) => inside.push(p.location),
            None => return Err(Error::UntaggedPole { pole: p.location }),
        }
    }
    let contour = Contour::auto(&inside, &outside, false, nodes)?;
    contour.validate(&inside, &outside)?;
    let len = ts.len();
    let mut values = vec![Complex64::new(0.0, 0.0); len];
    for (n, v) in values.iter_mut().enumerate().take(len - 1) {
        *v = contour_inverse(|s| Ok(h.eval(s)), ts, n, &contour, Direction::Nabla, &outside)?;
    }
    Signal::new(ts.clone(), values)
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
