//! Double-precision modular functions on the upper half plane.
//!
//! Everything here is evaluated from convergent expansions: the product
//! for `η`, and for `φ_k` either the `q`-expansion (`y >= 1`) or the
//! expansion in `e(-n/z)` obtained from `η(z) = (-iz)^{-1/2} η(-1/z)`
//! (`y < 1`, with `|x| < y/3`).

mod eta;
mod phi;
mod polynomials;
mod sigma;

pub use eta::{eta_log, f_t_log, log_ratio_ft, Y_FLOOR};
pub use phi::{phi, phi_prime, phi_prime_with, phi_with, Expansion, MAX_TERMS};
pub use polynomials::{pq_polynomials, LaurentPoly, PolynomialTable};
pub use sigma::{sigma, sigma_exp_sum, SIGMA_TABLE_LEN};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A point `z = x + iy` with `y > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperHalfPoint {
    x: f64,
    y: f64,
}

impl UpperHalfPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::OutsideRegion {
                x,
                y,
                reason: "imaginary part must be positive and finite",
            });
        }
        Ok(Self { x, y })
    }

    /// The point `iy` on the imaginary axis.
    pub fn imaginary(y: f64) -> Result<Self> {
        Self::new(0.0, y)
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    /// `s·z` for a positive real scale.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(self.x * s, self.y * s)
    }

    /// `-1/z`, which is again in the upper half plane.
    pub fn inverted(&self) -> Self {
        let w = -self.z().inv();
        Self { x: w.re, y: w.im }
    }

    /// Whether the inverted expansions converge comfortably here.
    pub fn in_inversion_cone(&self) -> bool {
        self.x == 0.0 || self.x.abs() < self.y / 3.0
    }
}

pub(crate) const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// `2πi`.
pub(crate) fn two_pi_i() -> Complex64 {
    Complex64::new(0.0, TWO_PI)
}
