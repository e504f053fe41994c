//! The saddle-point equation `(φ₁(ity) - φ₁(iy))/y² = M` and the
//! middle-regime constants.
//!
//! Both equations have a strictly decreasing left-hand side, so plain
//! bisection on a sign-changing bracket finds the unique root.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use std::f64::consts::PI;

use crate::modular::{phi, sigma_exp_sum, UpperHalfPoint};

const TWO_PI: f64 = 2.0 * PI;

/// Relative tolerance on the solved abscissa.
pub const REL_TOL: f64 = 1e-12;

/// Iteration budget for every bisection.
pub const MAX_ITER: usize = 200;

/// Solved saddle ordinate and its diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaddleResult {
    pub t: u32,
    pub n: u64,
    /// `M = N + (t² - 1)/24`.
    pub m: f64,
    pub y: f64,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    /// `g(y) = (φ₁(ity) - φ₁(iy))/y² - M` at the returned `y`.
    pub residual: f64,
    /// `(φ₂(iy) - φ₂(ity))/y`.
    pub alpha: f64,
    /// `y (φ₁(iy) - φ₁(ity))/(iy)² - y M`, i.e. `y · g(y)`.
    pub beta: f64,
    pub iterations: usize,
    /// Set when `t < 6`, where the range statement is not claimed.
    pub outside_hypotheses: bool,
}

impl SaddleResult {
    pub fn ty(&self) -> f64 {
        self.t as f64 * self.y
    }

    /// `min(t, 1/y)`, the scale that controls every error bound.
    pub fn scale(&self) -> f64 {
        (self.t as f64).min(1.0 / self.y)
    }
}

/// `M = N + (t² - 1)/24`.
pub fn shifted_index(t: u32, n: u64) -> f64 {
    let t = t as f64;
    n as f64 + (t * t - 1.0) / 24.0
}

fn phi_axis(k: usize, y: f64) -> Result<f64> {
    Ok(phi(k, UpperHalfPoint::imaginary(y)?)?.re)
}

/// `φ₁(iy) = -1/24 + y/4π + S(2π/y) = y²/24 - y² S(2πy)` with
/// `S(r) = Σ σ(n) e^{-rn}`; the polynomial parts are combined by hand so
/// that the residual keeps full relative accuracy even where the root sits
/// within `e^{-2π/(ty)}` of the lower bracket end.
fn s_inverted(y: f64) -> Result<f64> {
    sigma_exp_sum(TWO_PI / y)
}

fn s_direct(y: f64) -> Result<f64> {
    sigma_exp_sum(TWO_PI * y)
}

/// `g(y) = (φ₁(ity) - φ₁(iy))/y² - M`; strictly decreasing in `y`.
pub fn saddle_residual(t: u32, n: u64, y: f64) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::invalid("saddle residual needs y > 0"));
    }
    let tf = t as f64;
    let m = shifted_index(t, n);
    let u = tf * y;
    if u < 1.0 {
        let linear = ((tf - 1.0) - 4.0 * PI * m * y) / (4.0 * PI * y);
        Ok(linear + (s_inverted(u)? - s_inverted(y)?) / (y * y))
    } else if y >= 1.0 {
        Ok(s_direct(y)? - tf * tf * s_direct(u)? - n as f64)
    } else {
        let small = (1.0 / 24.0 - y / (4.0 * PI) - s_inverted(y)?) / (y * y);
        Ok(small + 1.0 / 24.0 - n as f64 - tf * tf * s_direct(u)?)
    }
}

/// `g` at the analytic lower bracket end, where `(t-1)/(4πy) - M`
/// vanishes identically.
fn residual_at_lower(t: u32, n: u64, lo: f64) -> Result<f64> {
    let u = t as f64 * lo;
    if u < 1.0 {
        Ok((s_inverted(u)? - s_inverted(lo)?) / (lo * lo))
    } else {
        saddle_residual(t, n, lo)
    }
}

/// `g` at the analytic upper bracket end, where `1/(24y²) - 1/(4πy) + 1/24 - N`
/// vanishes identically.
fn residual_at_upper(t: u32, n: u64, hi: f64) -> Result<f64> {
    let u = t as f64 * hi;
    if u >= 1.0 && hi < 1.0 {
        Ok(-s_inverted(hi)? / (hi * hi) - (t as f64).powi(2) * s_direct(u)?)
    } else {
        saddle_residual(t, n, hi)
    }
}

/// `g(y)` straight from the `φ₁` evaluator, without the hand-combined
/// polynomial parts.
pub fn saddle_residual_from_phi(t: u32, n: u64, y: f64) -> Result<f64> {
    let lhs = (phi_axis(1, t as f64 * y)? - phi_axis(1, y)?) / (y * y);
    Ok(lhs - shifted_index(t, n))
}

/// `φ₂(iy) - φ₂(ity)`.
pub fn phi2_gap(t: u32, y: f64) -> Result<f64> {
    Ok(phi_axis(2, y)? - phi_axis(2, t as f64 * y)?)
}

/// The analytic bracket `(t-1)/(4πM) < y < 1/(3/π + √(24N - 1 + 9/π²))`.
pub fn saddle_bracket(t: u32, n: u64) -> Result<(f64, f64)> {
    if t < 2 {
        return Err(Error::invalid("saddle equation needs t >= 2"));
    }
    if n == 0 {
        return Err(Error::invalid(
            "saddle equation has no root for N = 0: the left-hand side decreases to M itself",
        ));
    }
    let m = shifted_index(t, n);
    let lo = (t as f64 - 1.0) / (4.0 * PI * m);
    let hi = 1.0 / (3.0 / PI + (24.0 * n as f64 - 1.0 + 9.0 / (PI * PI)).sqrt());
    Ok((lo, hi))
}

/// Bisection for a decreasing `f` with `f(lo) > 0 > f(hi)`.
fn bisect_decreasing(
    mut f: impl FnMut(f64) -> Result<f64>,
    mut lo: f64,
    mut hi: f64,
) -> Result<(f64, usize)> {
    for iter in 1..=MAX_ITER {
        let mid = 0.5 * (lo + hi);
        let value = f(mid)?;
        if value == 0.0 {
            return Ok((mid, iter));
        }
        if value > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        // Run to adjacent doubles; this is far inside REL_TOL.
        if hi - lo <= 4.0 * f64::EPSILON * lo {
            return Ok((0.5 * (lo + hi), iter));
        }
    }
    Err(Error::NoConvergence(MAX_ITER))
}

/// Solve the saddle-point equation for `y(t, N)`.
pub fn solve_y(t: u32, n: u64) -> Result<SaddleResult> {
    let (lo, hi) = saddle_bracket(t, n)?;
    // For small ty the root is within e^{-2π/(ty)} of `lo`, for large ty
    // within t² e^{-2πty} of `hi`; both ends are evaluated exactly.
    let g_lo = residual_at_lower(t, n, lo)?;
    let g_hi = residual_at_upper(t, n, hi)?;
    if !(g_lo >= 0.0 && g_hi <= 0.0) {
        return Err(Error::BracketSign { lo, hi, g_lo, g_hi });
    }
    let (y, iterations) = if g_lo == 0.0 {
        (lo, 0)
    } else if g_hi == 0.0 {
        (hi, 0)
    } else {
        bisect_decreasing(|y| saddle_residual(t, n, y), lo, hi)?
    };
    let residual = saddle_residual(t, n, y)?;
    Ok(SaddleResult {
        t,
        n,
        m: shifted_index(t, n),
        y,
        bracket_lo: lo,
        bracket_hi: hi,
        residual,
        alpha: phi2_gap(t, y)? / y,
        beta: y * residual,
        iterations,
        outside_hypotheses: t < 6,
    })
}

/// `h(v) = 1/(24v²) - 1/24 + φ₁(iv)/v² - 1/κ`; strictly decreasing in `v`.
pub fn kappa_residual(kappa: f64, v: f64) -> Result<f64> {
    if !(v > 0.0) {
        return Err(Error::invalid("κ residual needs v > 0"));
    }
    let shape = if v < 1.0 {
        1.0 / (4.0 * PI * v) - 1.0 / 24.0 + s_inverted(v)? / (v * v)
    } else {
        1.0 / (24.0 * v * v) - s_direct(v)?
    };
    Ok(shape - 1.0 / kappa)
}

fn check_kappa(kappa: f64) -> Result<()> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::invalid(format!(
            "κ must be positive and finite, got {kappa}"
        )));
    }
    Ok(())
}

/// Solve `h(v) = 0`, expanding the bracket geometrically from `[1/2, 2]`.
pub fn solve_v(kappa: f64) -> Result<f64> {
    check_kappa(kappa)?;
    let h = |v: f64| kappa_residual(kappa, v);
    let (mut lo, mut hi) = (0.5, 2.0);
    let mut expansions = 0;
    while h(hi)? >= 0.0 {
        hi *= 2.0;
        expansions += 1;
        if expansions > MAX_ITER {
            return Err(Error::NoConvergence(MAX_ITER));
        }
    }
    while h(lo)? <= 0.0 {
        lo *= 0.5;
        expansions += 1;
        if expansions > MAX_ITER {
            return Err(Error::NoConvergence(MAX_ITER));
        }
    }
    Ok(bisect_decreasing(h, lo, hi)?.0)
}

/// `(κ, v, A(κ), B(κ))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaConstants {
    pub kappa: f64,
    pub v: f64,
    pub a: f64,
    pub b: f64,
}

/// `A = (κ/v²)(1/12 - φ₀(iv) + φ₁(iv))²` and `B = (κ/v²)√(1/12 - φ₂(iv))`.
pub fn kappa_constants(kappa: f64) -> Result<KappaConstants> {
    let v = solve_v(kappa)?;
    let scale = kappa / (v * v);
    let inner = 1.0 / 12.0 - phi_axis(0, v)? + phi_axis(1, v)?;
    let a = scale * inner * inner;
    let b = scale * (1.0 / 12.0 - phi_axis(2, v)?).sqrt();
    Ok(KappaConstants { kappa, v, a, b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::f_t_log;
    use std::f64::consts::PI;

    fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
        (0..count)
            .map(|i| lo * (hi / lo).powf((i as f64 + 0.5) / count as f64))
            .collect()
    }

    #[test]
    fn bracket_changes_sign_on_grid() {
        for t in [6u32, 50, 1000] {
            for n in [100u64, 10_000, 100_000] {
                let (lo, hi) = saddle_bracket(t, n).unwrap();
                assert!(lo < hi);
                let g_lo = residual_at_lower(t, n, lo).unwrap();
                // The excess at `lo` is about e^{-2π/(t lo)}; below
                // t lo ≈ 0.0087 it underflows to zero.
                if t as f64 * lo > 0.01 {
                    assert!(g_lo > 0.0, "t = {t}, N = {n}");
                } else {
                    assert!(g_lo >= 0.0, "t = {t}, N = {n}");
                }
                assert!(
                    residual_at_upper(t, n, hi).unwrap() <= 0.0,
                    "t = {t}, N = {n}"
                );
            }
        }
    }

    #[test]
    fn residual_forms_agree() {
        for (t, n, y) in [
            (6u32, 100u64, 0.05),
            (50, 10_000, 0.003),
            (1000, 60_000, 7.9e-4),
            (1000, 100, 0.02),
            (10, 5, 0.5),
            (3, 2, 1.5),
        ] {
            let a = saddle_residual(t, n, y).unwrap();
            let b = saddle_residual_from_phi(t, n, y).unwrap();
            let scale = shifted_index(t, n);
            assert!(
                (a - b).abs() < 1e-10 * scale,
                "t = {t}, N = {n}, y = {y}: {a} vs {b}"
            );
        }
    }

    #[test]
    fn residual_strictly_decreasing_inside_bracket() {
        for t in [6u32, 50, 1000] {
            for n in [100u64, 10_000, 100_000] {
                let (lo, hi) = saddle_bracket(t, n).unwrap();
                let values: Vec<f64> = log_spaced(lo, hi, 20)
                    .into_iter()
                    .map(|y| saddle_residual(t, n, y).unwrap())
                    .collect();
                assert!(values.windows(2).all(|w| w[1] < w[0]), "t = {t}, N = {n}");
            }
        }
    }

    #[test]
    fn alpha_bound_for_small_y() {
        for t in [6u32, 50, 1000, 5000] {
            for n in [100u64, 10_000, 100_000] {
                let s = solve_y(t, n).unwrap();
                if s.y <= 0.1 {
                    let ratio = s.alpha / s.scale();
                    assert!(
                        (1.0 / 26.0..=1.0 / 12.0).contains(&ratio),
                        "t = {t}, N = {n}: {ratio}"
                    );
                }
            }
        }
    }

    #[test]
    fn solves_reference_point() {
        let s = solve_y(1000, 60_000).unwrap();
        assert!(s.bracket_lo < s.y && s.y < s.bracket_hi);
        assert!(s.residual.abs() < 1e-9 * s.m);
        assert!(s.beta.abs() < 10.0 * REL_TOL, "beta = {}", s.beta);
        assert!(!s.outside_hypotheses);
        // Independent 40-digit evaluation of the same equation.
        assert!(
            (s.y / 7.861_817_492_807_072e-4 - 1.0).abs() < 1e-10,
            "y = {}",
            s.y
        );
    }

    #[test]
    fn saddle_minimises_exponent() {
        // d/dy [2πMy + log f_t(iy)] = -2π g(y): golden-section search on the
        // exponent, evaluated through η alone, lands on the same y.
        let (t, n) = (1000u32, 60_000u64);
        let m = shifted_index(t, n);
        let exponent = |y: f64| {
            2.0 * PI * m * y
                + f_t_log(UpperHalfPoint::imaginary(y).unwrap(), t)
                    .unwrap()
                    .re
        };
        let (mut a, mut b) = saddle_bracket(t, n).unwrap();
        let ratio = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..80 {
            let c = b - ratio * (b - a);
            let d = a + ratio * (b - a);
            if exponent(c) < exponent(d) {
                b = d;
            } else {
                a = c;
            }
        }
        let golden = 0.5 * (a + b);
        let s = solve_y(t, n).unwrap();
        assert!((golden / s.y - 1.0).abs() < 1e-6, "{golden} vs {}", s.y);
    }

    #[test]
    fn zero_n_has_no_root_but_residual_is_monotone() {
        let t = 20;
        assert!(solve_y(t, 0).is_err());
        let values: Vec<f64> = log_spaced(1e-3, 10.0, 30)
            .into_iter()
            .map(|y| saddle_residual(t, 0, y).unwrap())
            .collect();
        assert!(values.windows(2).all(|w| w[1] < w[0]));
        assert!(values.iter().all(|&g| g > 0.0));
    }

    #[test]
    fn small_t_is_flagged() {
        let s = solve_y(3, 50).unwrap();
        assert!(s.outside_hypotheses);
        assert!(s.residual.abs() < 1e-9 * s.m);
        assert!(solve_y(1, 50).is_err());
    }

    #[test]
    fn solve_v_contract() {
        let mut previous = 0.0;
        for kappa in [1.0, 24.0, 1000.0, 1e6] {
            let v = solve_v(kappa).unwrap();
            assert!(kappa_residual(kappa, v).unwrap().abs() < 1e-10);
            assert!(v > previous);
            previous = v;
        }
        assert!(solve_v(0.0).is_err());
        assert!(solve_v(f64::NAN).is_err());
    }

    #[test]
    fn kappa_constants_reference_values() {
        // Independent 40-digit evaluation.
        let c = kappa_constants(24.0).unwrap();
        assert!((c.v / 0.974_535_881_931_428_7 - 1.0).abs() < 1e-10);
        assert!((c.a / 0.165_380_333_685_989_23 - 1.0).abs() < 1e-10);
        assert!((c.b / 6.706_049_208_700_296 - 1.0).abs() < 1e-10);
        let c = kappa_constants(1.0).unwrap();
        assert!((c.v / 0.076_394_372_684_109_76 - 1.0).abs() < 1e-10);
        assert!((c.a / 0.080_791_520_703_167_83 - 1.0).abs() < 1e-10);
        assert!((c.b / 13.359_894_064_186_084 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn kappa_constants_limits() {
        let c = kappa_constants(1e6).unwrap();
        assert!((c.a - 1.0 / 6.0).abs() < 1e-2);
        assert!((c.b - 4.0 * 3f64.sqrt()).abs() < 1e-1);
        for kappa in [0.1, 1.0, 10.0, 100.0] {
            let c = kappa_constants(kappa).unwrap();
            assert!(c.a > 0.0 && c.b > 0.0);
        }
    }
}
