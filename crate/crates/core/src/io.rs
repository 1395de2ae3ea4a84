//! File formats: time scale JSON, signal CSV, rational and system JSON.
//!
//! Signal and kernel CSV files have a `t,re,im` header and one row per
//! instant; numbers are written with 17 significant digits.

use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Deserialize;

use crate::calculus::Signal;
use crate::error::{Error, Result};
use crate::fractional::FractionalKernel;
use crate::systems::rational::{Pole, RationalTransform, Roc};
use crate::timescale::TimeScale;

pub fn read_scale(path: impl AsRef<Path>) -> Result<Arc<TimeScale>> {
    Ok(Arc::new(TimeScale::load(path)?))
}

#[derive(Debug, Deserialize)]
struct SampleRow {
    t: f64,
    re: f64,
    #[serde(default)]
    im: f64,
}

/// Reads `t,re,im` rows onto `ts`. Instants missing from the file are zero.
pub fn parse_signal(text: &str, ts: &Arc<TimeScale>) -> Result<Signal> {
    let mut values = vec![Complex64::new(0.0, 0.0); ts.len()];
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).comment(Some(b'#')).from_reader(text.as_bytes());
    for row in reader.deserialize() {
        let row: SampleRow = row?;
        let Some(n) = ts.index_of(row.t) else {
            return Err(Error::ScaleMismatch(format!("sample time {} is not an instant of the scale", row.t)));
        };
        values[n] = Complex64::new(row.re, row.im);
    }
    Signal::new(ts.clone(), values)
}

pub fn read_signal(path: impl AsRef<Path>, ts: &Arc<TimeScale>) -> Result<Signal> {
    parse_signal(&std::fs::read_to_string(path)?, ts)
}

fn write_rows(out: &mut impl Write, ts: &TimeScale, values: &[Complex64]) -> Result<()> {
    writeln!(out, "t,re,im")?;
    for (t, v) in ts.instants().iter().zip(values) {
        writeln!(out, "{t:.16e},{:.16e},{:.16e}", v.re, v.im)?;
    }
    Ok(())
}

pub fn write_signal(out: &mut impl Write, f: &Signal) -> Result<()> {
    write_rows(out, f.scale(), f.values())
}

pub fn write_kernel(out: &mut impl Write, k: &FractionalKernel) -> Result<()> {
    writeln!(out, "# alpha={}, method={}", k.alpha, k.method.name())?;
    write_rows(out, &k.scale, &k.weights)
}

/// `s_re,s_im,F_re,F_im` rows.
pub fn write_transform(out: &mut impl Write, rows: &[(Complex64, Complex64)]) -> Result<()> {
    writeln!(out, "s_re,s_im,F_re,F_im")?;
    for (s, f) in rows {
        writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e}", s.re, s.im, f.re, f.im)?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
enum Coefficient {
    Real(f64),
    Pair([f64; 2]),
}

impl From<Coefficient> for Complex64 {
    fn from(c: Coefficient) -> Self {
        match c {
            Coefficient::Real(x) => Complex64::new(x, 0.0),
            Coefficient::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

fn coefficients(c: &[Coefficient]) -> Vec<Complex64> {
    c.iter().map(|&x| x.into()).collect()
}

#[derive(Debug, Deserialize)]
struct PoleEntry {
    re: f64,
    #[serde(default)]
    im: f64,
    #[serde(default = "one")]
    mult: usize,
    roc: Option<String>,
}

fn one() -> usize {
    1
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum SystemFile {
    Rational { num: Vec<Coefficient>, den: Vec<Coefficient>, poles: Option<Vec<PoleEntry>> },
    Equation { a: Vec<Coefficient>, b: Vec<Coefficient> },
}

/// A rational transfer function with ascending coefficients
/// (`{"num": [...], "den": [...], "poles": [...]}`) or a dynamic equation
/// `Σ a_k y^{∇^k} = Σ b_k x^{∇^k}` (`{"a": [...], "b": [...]}`).
/// Coefficients are numbers or `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    pub transfer: RationalTransform,
    /// Equation coefficients: `a` is the denominator, `b` the numerator.
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
}

pub fn parse_system(text: &str) -> Result<SystemSpec> {
    let file: SystemFile = serde_json::from_str(text)?;
    match file {
        SystemFile::Rational { num, den, poles } => {
            let (num, den) = (coefficients(&num), coefficients(&den));
            let transfer = match poles {
                None => RationalTransform::new(&num, &den)?,
                Some(entries) => {
                    let poles = entries
                        .into_iter()
                        .map(|p| {
                            let roc = p.roc.as_deref().map(str::parse::<Roc>).transpose()?;
                            Ok(Pole { location: Complex64::new(p.re, p.im), multiplicity: p.mult, roc })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    RationalTransform::with_poles(&num, &den, poles)?
                }
            };
            Ok(SystemSpec { transfer, a: den, b: num })
        }
        SystemFile::Equation { a, b } => {
            let (a, b) = (coefficients(&a), coefficients(&b));
            Ok(SystemSpec { transfer: RationalTransform::new(&b, &a)?, a, b })
        }
    }
}

pub fn read_system(path: impl AsRef<Path>) -> Result<SystemSpec> {
    parse_system(&std::fs::read_to_string(path)?)
}
