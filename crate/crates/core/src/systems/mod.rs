//! Transfer functions, simulation, shifts, convolution and resampling.

pub mod convolve;
pub mod rational;
pub mod resample;
pub mod simulate;

use std::sync::Arc;

pub use crate::transform::shifted_transform_factor;
pub use convolve::{convolve, correlate, interpolate, reflect, ConvolutionPath, KernelMethod};
pub use rational::{transfer_function, Pole, RationalTransform, Roc};
pub use resample::{resample_uniform, ResampleOptions};
pub use simulate::{simulate, Simulation, SimulationRule};

use crate::calculus::Signal;
use crate::error::Result;
use crate::timescale::TimeScale;

/// Inverse nabla transform of `h` on `ts`.
pub fn impulse_response(h: &RationalTransform, ts: &Arc<TimeScale>) -> Result<Signal> {
    crate::transform::invert_rational(h, ts)
}
