use num_complex::Complex64;

use super::polynomials::cached_tables;
use super::sigma::sigma_table;
use super::{two_pi_i, UpperHalfPoint};
use crate::error::{Error, Result};

/// Hard cap on the number of series terms summed in any expansion.
pub const MAX_TERMS: usize = 100_000;

/// Terms below this fraction of `|partial sum| + 1` end the summation.
const CUTOFF: f64 = 1e-18;

const MAX_K: usize = 4;

/// Which convergent expansion of `φ_k` to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expansion {
    /// Powers of `e(z)`; fast for `y >= 1`.
    Q,
    /// Powers of `e(-1/z)`; fast for small `y` with `|x| < y/3`.
    Inverted,
}

impl Expansion {
    /// `Q` for `y >= 1`, `Inverted` below.
    pub fn for_point(z: UpperHalfPoint) -> Self {
        if z.y() >= 1.0 {
            Expansion::Q
        } else {
            Expansion::Inverted
        }
    }
}

fn sum_series(mut term: impl FnMut(usize) -> Complex64) -> Result<Complex64> {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut quiet = 0;
    for n in 1..=MAX_TERMS {
        let t = term(n);
        sum += t;
        if t.norm() < CUTOFF * (sum.norm() + 1.0) {
            quiet += 1;
            if quiet == 2 {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::TruncationCap(MAX_TERMS))
}

fn check(k: usize, z: UpperHalfPoint, expansion: Expansion) -> Result<()> {
    if k > MAX_K {
        return Err(Error::invalid(format!(
            "φ_k is only available for k <= {MAX_K}, got {k}"
        )));
    }
    if expansion == Expansion::Inverted && !z.in_inversion_cone() {
        return Err(Error::OutsideRegion {
            x: z.x(),
            y: z.y(),
            reason: "inverted expansion needs |x| < y/3",
        });
    }
    Ok(())
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|j| j as f64).product()
}

fn sign(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `φ_k(z) = -(z^{k+1}/2πi) (d/dz)^k log η(z)` for `k = 0..=4`, choosing
/// the expansion from `y`.
pub fn phi(k: usize, z: UpperHalfPoint) -> Result<Complex64> {
    phi_with(k, z, Expansion::for_point(z))
}

/// `φ_k(z)` from a forced expansion.
pub fn phi_with(k: usize, z: UpperHalfPoint, expansion: Expansion) -> Result<Complex64> {
    check(k, z, expansion)?;
    let w = z.z();
    let sigma = sigma_table();
    match expansion {
        Expansion::Q => {
            let lead = w.powi(k as i32 + 1);
            let series = sum_series(|n| {
                let nn = n as f64;
                lead * (two_pi_i() * nn).powi(k as i32 - 1)
                    * sigma[n] as f64
                    * (two_pi_i() * w * nn).exp()
            })?;
            Ok(if k <= 1 {
                series - w * w / 24.0
            } else {
                series
            })
        }
        Expansion::Inverted => {
            let p = &cached_tables()[k].p;
            let series = sum_series(|n| {
                let r = two_pi_i() * n as f64 / w;
                p.eval(r) * sigma[n] as f64 * (-r).exp()
            })?;
            let tail = if k == 0 {
                (-Complex64::i() * w).ln()
            } else {
                Complex64::new(sign(k - 1) * factorial(k - 1), 0.0)
            };
            let four_pi_i = two_pi_i() * 2.0;
            Ok(series + sign(k) * factorial(k) / 24.0 + w / four_pi_i * tail)
        }
    }
}

/// `φ_k'(z)` for `k = 0..=4`, choosing the expansion from `y`.
pub fn phi_prime(k: usize, z: UpperHalfPoint) -> Result<Complex64> {
    phi_prime_with(k, z, Expansion::for_point(z))
}

/// `φ_k'(z)` from a forced expansion.
pub fn phi_prime_with(k: usize, z: UpperHalfPoint, expansion: Expansion) -> Result<Complex64> {
    check(k, z, expansion)?;
    let w = z.z();
    let sigma = sigma_table();
    let ki = k as i32;
    match expansion {
        Expansion::Q => {
            let series = sum_series(|n| {
                let a = two_pi_i() * n as f64;
                let s = a * w;
                (s.powi(ki + 1) + s.powi(ki) * (k as f64 + 1.0)) * sigma[n] as f64 / a * s.exp()
            })?;
            Ok(if k <= 1 { series - w / 12.0 } else { series })
        }
        Expansion::Inverted => {
            let q = &cached_tables()[k].q;
            let series = sum_series(|n| {
                let a = two_pi_i() * n as f64;
                let r = a / w;
                q.eval(r) * sigma[n] as f64 / a * (-r).exp()
            })?;
            let tail = if k == 0 {
                1.0 + (-Complex64::i() * w).ln()
            } else {
                Complex64::new(sign(k - 1) * factorial(k - 1), 0.0)
            };
            Ok(series + tail / (two_pi_i() * 2.0))
        }
    }
}
