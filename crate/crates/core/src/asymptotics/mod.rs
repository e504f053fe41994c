//! Log-space estimates of `c_t(N)` with explicit relative error bounds, one
//! per regime of `(t, N)`, plus numerical checks of the Gaussian integral
//! bound and the minor-arc bound.

mod checks;
mod gamma;
mod quadrature;

pub use checks::{
    central_abs_integral, gaussian_integral_check, minor_arc_ratio, CentralIntegral, GaussianCheck,
};
pub use gamma::ln_gamma;
pub use quadrature::{integrate, Quadrature, MAX_SEGMENTS};

use std::f64::consts::PI;

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{log_of_bigint, log_of_integer, partition_numbers, PartitionSeries};
use crate::modular::{f_t_log, UpperHalfPoint};
use crate::saddle::{kappa_constants, phi2_gap, shifted_index, solve_y, SaddleResult};

/// Absolute inflation added to every certified relative error bound.
pub const PADDING: f64 = 1e-9;

/// Relative safety margin applied to every floating hypothesis check.
pub const MARGIN: f64 = 1e-9;

/// Default `ε` in the large-`t` hypothesis.
pub const BIG_T_EPSILON: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Main,
    Difference,
    SmallT,
    BigTHybrid,
    KappaHeuristic,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Main => "main",
            Regime::Difference => "difference",
            Regime::SmallT => "small_t",
            Regime::BigTHybrid => "big_t_hybrid",
            Regime::KappaHeuristic => "kappa_heuristic",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub y: f64,
    pub alpha: f64,
    pub beta: f64,
    pub m: f64,
}

impl From<&SaddleResult> for Diagnostics {
    fn from(s: &SaddleResult) -> Self {
        Self {
            y: s.y,
            alpha: s.alpha,
            beta: s.beta,
            m: s.m,
        }
    }
}

/// `center ± half_width`, the factor multiplying `c_t(N)` in the
/// difference estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Multiplier {
    pub center: f64,
    pub half_width: f64,
}

impl Multiplier {
    pub fn lower(&self) -> f64 {
        self.center - self.half_width
    }

    pub fn upper(&self) -> f64 {
        self.center + self.half_width
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifiedEstimate {
    pub regime: Regime,
    pub t: u32,
    pub n: u64,
    /// Natural log of the main term; for the difference regime, the log of
    /// the multiplier center (NaN when the center is not positive).
    pub log_value: f64,
    pub rel_error_bound: Option<f64>,
    /// Whether `rel_error_bound` comes with a proof.
    pub rigorous: bool,
    pub hypotheses_ok: bool,
    /// Hypotheses that failed, in words.
    pub failed: Vec<String>,
    pub diagnostics: Option<Diagnostics>,
    pub multiplier: Option<Multiplier>,
    /// `log(t² p(N - 2t))`, reported by the large-`t` estimate.
    pub residual_scale_log: Option<f64>,
}

impl CertifiedEstimate {
    fn new(regime: Regime, t: u32, n: u64, log_value: f64) -> Self {
        Self {
            regime,
            t,
            n,
            log_value,
            rel_error_bound: None,
            rigorous: false,
            hypotheses_ok: false,
            failed: Vec::new(),
            diagnostics: None,
            multiplier: None,
            residual_scale_log: None,
        }
    }

    /// `true` when the estimate carries a proven bound whose hypotheses hold.
    pub fn certified(&self) -> bool {
        self.rigorous && self.hypotheses_ok && self.rel_error_bound.is_some()
    }

    /// `[log_value + log(1 - ρ), log_value + log(1 + ρ)]`; the lower end is
    /// `-∞` once `ρ ≥ 1`.
    pub fn log_interval(&self) -> Option<(f64, f64)> {
        let rho = self.rel_error_bound?;
        let lo = if rho < 1.0 {
            self.log_value + (-rho).ln_1p()
        } else {
            f64::NEG_INFINITY
        };
        Some((lo, self.log_value + rho.ln_1p()))
    }

    /// Whether `log_count` lies in [`Self::log_interval`].
    pub fn contains_log(&self, log_count: f64) -> bool {
        self.log_interval()
            .is_some_and(|(lo, hi)| lo <= log_count && log_count <= hi)
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failed.push(what.into());
        }
    }

    fn settle(mut self) -> Self {
        self.hypotheses_ok = self.failed.is_empty();
        self
    }
}

/// `lhs < rhs` with a relative margin.
fn lt(lhs: f64, rhs: f64) -> bool {
    lhs < rhs - MARGIN * rhs.abs().max(1.0)
}

/// `lhs ≥ rhs` with a relative margin.
fn ge(lhs: f64, rhs: f64) -> bool {
    lhs >= rhs + MARGIN * rhs.abs().max(1.0)
}

/// `min(t, 1/y) ≥ 1000`; the integer side is compared exactly.
fn scale_at_least_1000(t: u32, y: f64) -> bool {
    t >= 1000 && ge(1.0 / y, 1000.0)
}

/// Main-term estimate `y^{3/2} e^{2πMy} f_t(iy) / √(φ₂(iy) - φ₂(ity))`.
pub fn estimate_main(t: u32, n: u64) -> Result<CertifiedEstimate> {
    let s = solve_y(t, n)?;
    estimate_main_at(&s)
}

fn estimate_main_at(s: &SaddleResult) -> Result<CertifiedEstimate> {
    let gap = phi2_gap(s.t, s.y)?;
    let log_ft = f_t_log(UpperHalfPoint::imaginary(s.y)?, s.t)?.re;
    let log_value = 1.5 * s.y.ln() + 2.0 * PI * s.m * s.y + log_ft - 0.5 * gap.ln();
    let mut e = CertifiedEstimate::new(Regime::Main, s.t, s.n, log_value);
    e.rel_error_bound = Some(3.5 * s.y / gap + PADDING);
    e.rigorous = true;
    e.diagnostics = Some(s.into());
    e.require(scale_at_least_1000(s.t, s.y), "min(t, 1/y) >= 1000");
    e.require(lt(s.beta.abs(), 2.0 / 25.0), "|beta| < 2/25");
    Ok(e.settle())
}

/// Multiplier `2πty - 1 ± ty(705y + 120ty e^{-2πty})` relating
/// `c_{t+1}(N+t) - c_t(N+t)` to `c_t(N)`.
pub fn estimate_difference(t: u32, n: u64) -> Result<CertifiedEstimate> {
    let s = solve_y(t, n)?;
    let ty = s.ty();
    let center = 2.0 * PI * ty - 1.0;
    let half_width = ty * (705.0 * s.y + 120.0 * ty * (-2.0 * PI * ty).exp());
    let log_value = if center > 0.0 { center.ln() } else { f64::NAN };
    let mut e = CertifiedEstimate::new(Regime::Difference, t, n, log_value);
    e.rel_error_bound = Some(half_width / center.abs() + PADDING);
    e.rigorous = true;
    e.diagnostics = Some((&s).into());
    // The padding goes on the half width so the interval itself is honest.
    e.multiplier = Some(Multiplier {
        center,
        half_width: half_width + PADDING * center.abs(),
    });
    e.require(scale_at_least_1000(t, s.y), "min(t, 1/y) >= 1000");
    e.require(ge(ty, 0.5), "ty >= 1/2");
    Ok(e.settle())
}

/// `log` of `(2π)^{(t-1)/2} M^{(t-3)/2} / (t^{t/2} Γ((t-1)/2))`.
pub fn small_t_log_main_term(t: u32, n: u64) -> Result<f64> {
    let tf = t as f64;
    let m = shifted_index(t, n);
    Ok(
        0.5 * (tf - 1.0) * (2.0 * PI).ln() - 0.5 * tf * tf.ln() - ln_gamma(0.5 * (tf - 1.0))?
            + 0.5 * (tf - 3.0) * m.ln(),
    )
}

/// `2.5 e^{-t/8} + 20 t^{-4}`.
pub fn small_t_error(t: u32) -> f64 {
    let tf = t as f64;
    2.5 * (-tf / 8.0).exp() + 20.0 / tf.powi(4)
}

/// Fixed-`t` estimate, valid for `t ≥ 8` and `M ≥ 100 000`.
pub fn estimate_small_t(t: u32, n: u64) -> Result<CertifiedEstimate> {
    if t < 8 {
        return Err(Error::HypothesesNotSatisfied(format!(
            "small-t estimate needs t >= 8, got {t}"
        )));
    }
    let mut e = CertifiedEstimate::new(Regime::SmallT, t, n, small_t_log_main_term(t, n)?);
    e.rel_error_bound = Some(small_t_error(t) + PADDING);
    e.rigorous = true;
    let tf = t as f64;
    let m = shifted_index(t, n);
    // 24M = 24N + t² - 1 is an integer, so M ≥ 100 000 is decided exactly.
    let twenty_four_m = 24u128 * n as u128 + (t as u128).pow(2) - 1;
    e.require(twenty_four_m >= 2_400_000, "M >= 100000");
    let window = 0.2 * (2.0 / 3f64.sqrt()).min(2.0 * PI / tf.ln());
    e.require(
        lt(tf * (tf - 1.0) / (4.0 * PI * m), window),
        "t(t-1)/(4πM) < min(2/√3, 2π/log t)/5",
    );
    Ok(e.settle())
}

/// `t > (1 + ε)(√6/2π) √N log N`.
pub fn big_t_hypothesis(t: u32, n: u64, epsilon: f64) -> bool {
    let nf = n as f64;
    if n < 2 {
        return true;
    }
    let threshold = (1.0 + epsilon) * 6f64.sqrt() / (2.0 * PI) * nf.sqrt() * nf.ln();
    (t as f64) > threshold * (1.0 + MARGIN)
}

/// Large-`t` estimate `p(N) - t p(N-t)` from exact partition numbers; the
/// error term `O(t² p(N-2t))` has no explicit constant.
pub fn estimate_big_t(t: u32, n: u64) -> Result<CertifiedEstimate> {
    let p = partition_numbers(usize::try_from(n).map_err(|_| Error::invalid("N too large"))?)?;
    estimate_big_t_with(&p, t, n, BIG_T_EPSILON)
}

/// As [`estimate_big_t`], reusing a partition series that reaches `N`.
pub fn estimate_big_t_with(
    p: &PartitionSeries,
    t: u32,
    n: u64,
    epsilon: f64,
) -> Result<CertifiedEstimate> {
    if t < 1 {
        return Err(Error::invalid("t must be positive"));
    }
    if (p.limit() as u64) < n {
        return Err(Error::invalid(format!(
            "partition series reaches {}, need {n}",
            p.limit()
        )));
    }
    let (n_i, t_i) = (n as i64, t as i64);
    let head = BigInt::from(p.at(n_i)) - BigInt::from(t) * BigInt::from(p.at(n_i - t_i));
    if head <= BigInt::from(0) {
        return Err(Error::invalid(format!(
            "p(N) - t p(N-t) is not positive at (t, N) = ({t}, {n}); far outside the large-t regime"
        )));
    }
    let mut e = CertifiedEstimate::new(Regime::BigTHybrid, t, n, log_of_bigint(&head)?);
    let tail: BigUint = p.at(n_i - 2 * t_i);
    if tail == BigUint::from(0u32) {
        e.rel_error_bound = Some(0.0);
        e.residual_scale_log = Some(f64::NEG_INFINITY);
    } else {
        let scale = 2.0 * (t as f64).ln() + log_of_integer(&tail)?;
        e.residual_scale_log = Some(scale);
        e.rel_error_bound = Some((scale - e.log_value).exp());
    }
    e.require(
        big_t_hypothesis(t, n, epsilon),
        format!("t > (1+{epsilon})(√6/2π)√N log N"),
    );
    e.rigorous = false;
    Ok(e.settle())
}

/// `|p(N) - t p(N-t) - c_t(N)| / (t² p(N-2t))`, or `None` when `N < 2t`.
pub fn big_t_normalized_residual(p: &PartitionSeries, c: &BigUint, t: u32, n: u64) -> Option<f64> {
    let (n_i, t_i) = (n as i64, t as i64);
    let tail = p.at(n_i - 2 * t_i);
    if tail == BigUint::from(0u32) {
        return None;
    }
    let head = BigInt::from(p.at(n_i)) - BigInt::from(t) * BigInt::from(p.at(n_i - t_i));
    let diff = head - BigInt::from(c.clone());
    if diff == BigInt::from(0) {
        return Some(0.0);
    }
    let log_diff = log_of_integer(diff.magnitude()).ok()?;
    let log_scale = 2.0 * (t as f64).ln() + log_of_integer(&tail).ok()?;
    Some((log_diff - log_scale).exp())
}

/// `e^{2π√(A(κ)N)} / (B(κ)N)` with `κ = t²/N`; no error bound.
pub fn estimate_kappa(t: u32, n: u64) -> Result<CertifiedEstimate> {
    if t < 2 || n < 1 {
        return Err(Error::invalid("κ estimate needs t >= 2 and N >= 1"));
    }
    let nf = n as f64;
    let kappa = (t as f64).powi(2) / nf;
    let c = kappa_constants(kappa)?;
    let log_value = 2.0 * PI * (c.a * nf).sqrt() - (c.b * nf).ln();
    let mut e = CertifiedEstimate::new(Regime::KappaHeuristic, t, n, log_value);
    e.failed
        .push("uncertified: error is o(1) without an explicit constant".into());
    Ok(e.settle())
}

/// Outcome of [`select_regime`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegimeChoice {
    pub regime: Regime,
    pub certified: bool,
}

/// The certified estimator whose hypotheses hold, preferring the small-`t`
/// one; otherwise an uncertified fallback.
pub fn select_regime(t: u32, n: u64) -> RegimeChoice {
    if t >= 8 && estimate_small_t(t, n).is_ok_and(|e| e.hypotheses_ok) {
        return RegimeChoice {
            regime: Regime::SmallT,
            certified: true,
        };
    }
    if t >= 1000 && estimate_main(t, n).is_ok_and(|e| e.hypotheses_ok) {
        return RegimeChoice {
            regime: Regime::Main,
            certified: true,
        };
    }
    let regime = if big_t_hypothesis(t, n, BIG_T_EPSILON) {
        Regime::BigTHybrid
    } else {
        Regime::KappaHeuristic
    };
    RegimeChoice {
        regime,
        certified: false,
    }
}

/// Run the estimator for `regime`.
pub fn estimate(regime: Regime, t: u32, n: u64) -> Result<CertifiedEstimate> {
    match regime {
        Regime::Main => estimate_main(t, n),
        Regime::Difference => estimate_difference(t, n),
        Regime::SmallT => estimate_small_t(t, n),
        Regime::BigTHybrid => estimate_big_t(t, n),
        Regime::KappaHeuristic => estimate_kappa(t, n),
    }
}
