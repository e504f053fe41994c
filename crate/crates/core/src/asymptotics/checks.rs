//! Numerical checks of the Gaussian integral bound, the minor-arc bound
//! and the central `|f_t|` integral bound.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::quadrature::integrate;
use crate::error::{Error, Result};
use crate::modular::{f_t_log, UpperHalfPoint, Y_FLOOR};
use crate::saddle::phi2_gap;

/// Absolute tolerance for the Gaussian integrals.
pub const GAUSSIAN_TOL: f64 = 1e-14;

/// Relative tolerance for the `|f_t|` integrals.
pub const ARC_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianCheck {
    pub i_value: Complex64,
    pub j_value: Complex64,
    /// `|I - α^{-1/2}| / α^{-3/2}`, to be compared with `3.45`.
    pub i_excess: f64,
    /// `|J| / α^{-3/2}`, to be compared with `2`.
    pub j_excess: f64,
    pub bounds_ok: bool,
}

/// Integrate `∫ e(βx) e^{-παx²(1 + 2iεx + 3w x²)} dx` and
/// `∫ x e^{-παx²(1 + 2iεx + 3w x²)} dx` over `|x| ≤ 1/3`, with the unit-disc
/// factor instantiated as the constant `w`, and test the stated bounds.
pub fn gaussian_integral_check(
    alpha: f64,
    beta: f64,
    eps: f64,
    w: Complex64,
) -> Result<GaussianCheck> {
    if !(alpha > 38.0 && alpha.is_finite()) {
        return Err(Error::invalid(format!("α must exceed 38, got {alpha}")));
    }
    if !(beta.abs() < 2.0 / 25.0) {
        return Err(Error::invalid(format!(
            "β must lie in (-2/25, 2/25), got {beta}"
        )));
    }
    if !(eps.abs() < 1.0) {
        return Err(Error::invalid(format!("ε must lie in (-1, 1), got {eps}")));
    }
    if !(w.norm() <= 1.0) {
        return Err(Error::invalid(format!(
            "|w| must be at most 1, got {}",
            w.norm()
        )));
    }
    let gaussian = move |x: f64| {
        let shape = Complex64::new(1.0, 2.0 * eps * x) + w * (3.0 * x * x);
        (-PI * alpha * x * x * shape).exp()
    };
    let third = 1.0 / 3.0;
    let i = integrate(
        |x| Ok(Complex64::new(0.0, 2.0 * PI * beta * x).exp() * gaussian(x)),
        -third,
        third,
        GAUSSIAN_TOL,
        0.0,
    )?;
    let j = integrate(|x| Ok(x * gaussian(x)), -third, third, GAUSSIAN_TOL, 0.0)?;
    let scale = alpha.powf(-1.5);
    let i_dev = (i.value - alpha.powf(-0.5)).norm();
    let j_abs = j.value.norm();
    Ok(GaussianCheck {
        i_value: i.value,
        j_value: j.value,
        i_excess: i_dev / scale,
        j_excess: j_abs / scale,
        bounds_ok: i_dev <= 3.45 * scale + GAUSSIAN_TOL && j_abs <= 2.0 * scale + GAUSSIAN_TOL,
    })
}

fn ft_ratio(t: u32, y: f64, base: f64) -> impl Fn(f64) -> Result<Complex64> {
    move |x| {
        let z = UpperHalfPoint::new(x, y)?;
        Ok(Complex64::new((f_t_log(z, t)?.re - base).exp(), 0.0))
    }
}

fn check_band(t: u32, y: f64) -> Result<()> {
    if t < 2 {
        return Err(Error::invalid("t must be at least 2"));
    }
    if !(Y_FLOOR..=0.1).contains(&y) {
        return Err(Error::OutsideRegion {
            x: 0.0,
            y,
            reason: "minor-arc checks need 0.02 <= y <= 0.1",
        });
    }
    Ok(())
}

/// `∫_{y/3 ≤ |x| ≤ 1/2} |f_t(x + iy)| dx / (y f_t(iy))`.
pub fn minor_arc_ratio(t: u32, y: f64) -> Result<f64> {
    check_band(t, y)?;
    let base = f_t_log(UpperHalfPoint::imaginary(y)?, t)?.re;
    // |f_t(-x + iy)| = |f_t(x + iy)|.
    let q = integrate(ft_ratio(t, y, base), y / 3.0, 0.5, 0.0, ARC_TOL)?;
    Ok(2.0 * q.value.re / y)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CentralIntegral {
    /// `∫_{|x| ≤ y/3} |f_t(x + iy)| dx / (y f_t(iy))`.
    pub ratio: f64,
    /// `√(3/(2α))` with `α = (φ₂(iy) - φ₂(ity))/y`.
    pub bound: f64,
}

/// The central `|f_t|` integral against its Gaussian bound.
pub fn central_abs_integral(t: u32, y: f64) -> Result<CentralIntegral> {
    check_band(t, y)?;
    let base = f_t_log(UpperHalfPoint::imaginary(y)?, t)?.re;
    let q = integrate(ft_ratio(t, y, base), 0.0, y / 3.0, 0.0, ARC_TOL)?;
    let alpha = phi2_gap(t, y)? / y;
    Ok(CentralIntegral {
        ratio: 2.0 * q.value.re / y,
        bound: (1.5 / alpha).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_gaussian() {
        let c = gaussian_integral_check(39.0, 0.0, 0.0, Complex64::new(0.0, 0.0)).unwrap();
        assert!(c.i_value.im.abs() < 1e-15);
        assert!(c.j_value.norm() < 1e-15);
        assert!(c.bounds_ok);
        // Tail outside |x| ≤ 1/3 is e^{-39π/9}-small.
        assert!((c.i_value.re - 39f64.powf(-0.5)).abs() < 1e-6);
    }

    #[test]
    fn sweep_stays_within_bounds() {
        let units = [
            Complex64::new(1.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, -1.0),
        ];
        for alpha in [39.0, 100.0, 1000.0] {
            for beta in [-0.079, 0.079] {
                for eps in [-0.9, 0.9] {
                    for w in units {
                        let c = gaussian_integral_check(alpha, beta, eps, w).unwrap();
                        assert!(c.bounds_ok, "α={alpha} β={beta} ε={eps} w={w}: {c:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_outside_hypotheses() {
        let zero = Complex64::new(0.0, 0.0);
        assert!(gaussian_integral_check(38.0, 0.0, 0.0, zero).is_err());
        assert!(gaussian_integral_check(39.0, 0.08, 0.0, zero).is_err());
        assert!(gaussian_integral_check(39.0, 0.0, 1.0, zero).is_err());
        assert!(gaussian_integral_check(39.0, 0.0, 0.0, Complex64::new(1.0, 1.0)).is_err());
    }

    #[test]
    fn minor_arc_example() {
        let r = minor_arc_ratio(100, 0.05).unwrap();
        assert!(r > 0.0);
        assert!(r <= (-20.0f64 / 70.0).exp(), "ratio = {r}");
    }

    #[test]
    fn minor_arc_shrinks_with_y() {
        let mut previous = f64::INFINITY;
        for y in [0.1, 0.08, 0.06, 0.04, 0.02] {
            let r = minor_arc_ratio(200, y).unwrap();
            assert!(r < previous, "y = {y}: {r} vs {previous}");
            previous = r;
        }
    }

    #[test]
    fn central_integral_bound() {
        let c = central_abs_integral(100, 0.05).unwrap();
        assert!(c.ratio > 0.0 && c.ratio <= c.bound, "{c:?}");
    }

    #[test]
    fn rejects_outside_band() {
        assert!(minor_arc_ratio(100, 0.01).is_err());
        assert!(minor_arc_ratio(100, 0.2).is_err());
        assert!(minor_arc_ratio(1, 0.05).is_err());
    }
}
