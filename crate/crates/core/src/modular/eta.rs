use num_complex::Complex64;

use super::{two_pi_i, UpperHalfPoint, MAX_TERMS};
use crate::error::{Error, Result};

/// Below this imaginary part the direct product is not used.
pub const Y_FLOOR: f64 = 0.02;

const TAIL_CUTOFF: f64 = 1e-18;

/// `log(1 - w)` for `|w| < 1`, accurate for small `w`.
fn ln_one_minus(w: Complex64) -> Complex64 {
    if w.norm() < 1e-4 {
        -(w + w * w / 2.0 + w * w * w / 3.0)
    } else {
        (Complex64::new(1.0, 0.0) - w).ln()
    }
}

/// `Σ_{n≥1} log(1 - e(nz))`, the product part of `log η`.
fn product_tail(z: Complex64) -> Result<Complex64> {
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 1..=MAX_TERMS {
        let q = (two_pi_i() * z * n as f64).exp();
        if q.norm() < TAIL_CUTOFF {
            return Ok(sum);
        }
        sum += ln_one_minus(q);
    }
    Err(Error::TruncationCap(MAX_TERMS))
}

/// `log η(z) - 2πiz/24`, i.e. `log ∏ (1 - e(nz))`, on the supported region.
fn eta_log_tail(z: UpperHalfPoint) -> Result<Complex64> {
    if z.y() >= Y_FLOOR {
        product_tail(z.z())
    } else {
        Ok(eta_log(z)? - two_pi_i() * z.z() / 24.0)
    }
}

/// `log η(z)` with `η(z) = e(z/24) ∏ (1 - e(nz))`.
///
/// For `y >= Y_FLOOR` the product is summed directly. Below the floor only
/// the imaginary axis is supported, through
/// `log η(iy) = -½ log y + log η(i/y)`.
pub fn eta_log(z: UpperHalfPoint) -> Result<Complex64> {
    if z.y() >= Y_FLOOR {
        return Ok(two_pi_i() * z.z() / 24.0 + product_tail(z.z())?);
    }
    if z.x() != 0.0 {
        return Err(Error::OutsideRegion {
            x: z.x(),
            y: z.y(),
            reason: "log η below the direct-product floor is only supported on the imaginary axis",
        });
    }
    let inv = UpperHalfPoint::imaginary(1.0 / z.y())?;
    Ok(Complex64::new(-0.5 * z.y().ln(), 0.0) + eta_log(inv)?)
}

fn check_t(t: u32) -> Result<()> {
    if t == 0 {
        return Err(Error::invalid("t must be at least 1"));
    }
    Ok(())
}

/// `log f_t(z) = t log η(tz) - log η(z)`.
pub fn f_t_log(z: UpperHalfPoint, t: u32) -> Result<Complex64> {
    check_t(t)?;
    Ok(eta_log(z.scaled(t as f64)?)? * t as f64 - eta_log(z)?)
}

/// `log(e(-(2t+1)z/24) f_{t+1}(z) / f_t(z))`.
///
/// The `e(·/24)` factors cancel exactly, leaving
/// `(t+1) log∏(1 - e(n(t+1)z)) - t log∏(1 - e(ntz))`, which is summed
/// directly to avoid cancellation between two large logarithms.
pub fn log_ratio_ft(z: UpperHalfPoint, t: u32) -> Result<Complex64> {
    check_t(t)?;
    let upper = eta_log_tail(z.scaled(t as f64 + 1.0)?)?;
    let lower = eta_log_tail(z.scaled(t as f64)?)?;
    Ok(upper * (t as f64 + 1.0) - lower * t as f64)
}
