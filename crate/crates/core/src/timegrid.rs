//! Alignment of real times onto the uniform Wiener grid.
//!
//! Every operation in the crate works on integer step indices so that time
//! shifts compose exactly; this module is the single place where floating
//! times are converted.

use crate::error::{Error, Result};

/// Relative tolerance for declaring a time grid-aligned.
pub const ALIGN_TOL: f64 = 1e-9;

/// Convert a time to an integer number of steps of size `dt`.
///
/// Rejects times that are not integer multiples of `dt` within [`ALIGN_TOL`].
pub fn to_steps(t: f64, dt: f64) -> Result<i64> {
    let raw = t / dt;
    let rounded = raw.round();
    let offset = raw - rounded;
    if offset.abs() > ALIGN_TOL * raw.abs().max(1.0) {
        return Err(Error::GridMisaligned { t, dt, offset });
    }
    Ok(rounded as i64)
}

/// `steps * dt` as a time; inverse of [`to_steps`] on aligned inputs.
pub fn to_time(steps: i64, dt: f64) -> f64 {
    steps as f64 * dt
}
