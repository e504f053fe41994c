//! Property suites over the special functions, the integral bounds and the
//! certified estimates. `tcore selftest` runs these.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{central_abs_integral, gaussian_integral_check, minor_arc_ratio, Regime};
use crate::error::Result;
use crate::exact::{partition_numbers, tcore_count_bruteforce, tcore_count_from};
use crate::modular::{
    eta_log, log_ratio_ft, phi, phi_prime, phi_prime_with, phi_with, pq_polynomials, Expansion,
    UpperHalfPoint,
};
use crate::saddle::{kappa_constants, saddle_bracket, saddle_residual, solve_y};
use crate::stanton::{
    certify_difference_containment_with, certify_interval_containment_with, verify_exact, Pair,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Quick,
    Full,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub level: Level,
    pub checks: Vec<CheckOutcome>,
    pub elapsed_ms: f64,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// A check returns whether it held and a short account of the worst case.
type Check = fn() -> Result<(bool, String)>;

const QUICK: &[(&str, Check)] = &[
    ("gaussian_integral_sweep", gaussian_integral_sweep),
    ("phi2_prime_increasing", phi2_prime_increasing),
    ("phi2_decreasing", phi2_decreasing),
    ("phi2_gap_slope", phi2_gap_slope),
    ("phi2_gap_range", phi2_gap_range),
    ("phi3_prime_range", phi3_prime_range),
    ("phi3_increasing", phi3_increasing),
    ("phi3_ratio", phi3_ratio),
    ("phi4_ratio", phi4_ratio),
    ("log_ratio_bounds", log_ratio_bounds),
    ("phi2_functional_equation", phi2_functional_equation),
    ("eta_functional_equation", eta_functional_equation),
    ("dual_expansion_agreement", dual_expansion_agreement),
    ("pq_identity", pq_identity),
    ("saddle_bracket_grid", saddle_bracket_grid),
    ("alpha_window", alpha_window),
    ("kappa_limits", kappa_limits),
    ("bruteforce_agreement", bruteforce_agreement),
];

const FULL: &[(&str, Check)] = &[
    ("minor_arc_bound", minor_arc_bound),
    ("central_integral_bound", central_integral_bound),
    ("stanton_exhaustive_2000", stanton_exhaustive),
    ("interval_containment", interval_containment),
];

/// Run the suites for `level`; `full` adds the heavier checks.
pub fn run_selftest(level: Level) -> SelftestReport {
    let start = Instant::now();
    let mut checks: Vec<CheckOutcome> = QUICK.iter().map(|&(name, f)| run_check(name, f)).collect();
    if level == Level::Full {
        checks.extend(FULL.iter().map(|&(name, f)| run_check(name, f)));
    }
    SelftestReport {
        level,
        checks,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

/// Names of the checks run at `level`, in order.
pub fn check_names(level: Level) -> Vec<&'static str> {
    let mut names: Vec<_> = QUICK.iter().map(|c| c.0).collect();
    if level == Level::Full {
        names.extend(FULL.iter().map(|c| c.0));
    }
    names
}

fn run_check(name: &str, f: Check) -> CheckOutcome {
    let start = Instant::now();
    let (passed, detail) = match f() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    CheckOutcome {
        name: name.to_string(),
        passed,
        detail,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

fn axis(k: usize, y: f64) -> Result<f64> {
    Ok(phi(k, UpperHalfPoint::imaginary(y)?)?.re)
}

fn axis_prime(k: usize, y: f64) -> Result<f64> {
    // i φ_k'(iy)
    Ok((Complex64::i() * phi_prime(k, UpperHalfPoint::imaginary(y)?)?).re)
}

fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp())
        .collect()
}

/// `y ≤ 1/10` grid shared by the gap bounds.
fn small_y_grid() -> Vec<f64> {
    log_grid(1e-4, 0.1, 25)
}

const T_GRID: [f64; 9] = [1.5, 2.0, 3.0, 6.0, 10.0, 50.0, 200.0, 1000.0, 1e4];

fn gap(y: f64, t: f64) -> Result<f64> {
    Ok(axis(2, y)? - axis(2, t * y)?)
}

fn gaussian_integral_sweep() -> Result<(bool, String)> {
    let units = [
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::i(),
        -Complex64::i(),
    ];
    let (mut ok, mut worst_i, mut worst_j) = (true, 0f64, 0f64);
    for alpha in [39.0, 100.0, 1000.0] {
        for beta in [-0.079, 0.079] {
            for eps in [-0.9, 0.9] {
                for w in units {
                    let c = gaussian_integral_check(alpha, beta, eps, w)?;
                    ok &= c.bounds_ok;
                    worst_i = worst_i.max(c.i_excess);
                    worst_j = worst_j.max(c.j_excess);
                }
            }
        }
    }
    Ok((
        ok,
        format!(
            "max |I - α^-1/2| α^3/2 = {worst_i:.4} (≤ 3.45), max |J| α^3/2 = {worst_j:.4} (≤ 2)"
        ),
    ))
}

/// Strictness is only visible where the exponentially small parts do not
/// underflow; outside this window the values are checked weakly.
const STRICT: (f64, f64) = (1e-3, 100.0);

/// `i φ₂'(iy) + 1/(4π)` is `O(e^{-2π/y})`, below rounding once `y < 0.16`.
const STRICT_PRIME: (f64, f64) = (0.2, 100.0);

const STRICT_Y_MAX: f64 = STRICT.1;

fn monotone_check(
    values: &[(f64, f64)],
    increasing: bool,
    range: (f64, f64),
    strict: (f64, f64),
) -> (bool, String) {
    let in_strict = |y: f64| strict.0 <= y && y <= strict.1;
    let mut ok = true;
    let mut note = String::new();
    for w in values.windows(2) {
        let (y0, v0) = w[0];
        let (y1, v1) = w[1];
        let step_ok = match (increasing, in_strict(y0) && in_strict(y1)) {
            (true, true) => v1 > v0,
            (true, false) => v1 >= v0,
            (false, true) => v1 < v0,
            (false, false) => v1 <= v0,
        };
        if !step_ok && ok {
            note = format!("not monotone between y = {y0:e} and {y1:e}");
            ok = false;
        }
    }
    for &(y, v) in values {
        let inside = if in_strict(y) {
            range.0 < v && v < range.1
        } else {
            range.0 <= v && v <= range.1
        };
        if !inside && ok {
            note = format!(
                "value {v:e} at y = {y:e} outside ({:e}, {:e})",
                range.0, range.1
            );
            ok = false;
        }
    }
    if ok {
        let first = values.first().map_or(f64::NAN, |v| v.1);
        let last = values.last().map_or(f64::NAN, |v| v.1);
        note = format!("{} points from {first:.6e} to {last:.6e}", values.len());
    }
    (ok, note)
}

fn sample(f: impl Fn(f64) -> Result<f64>, ys: &[f64]) -> Result<Vec<(f64, f64)>> {
    ys.iter().map(|&y| Ok((y, f(y)?))).collect()
}

fn phi2_prime_increasing() -> Result<(bool, String)> {
    let values = sample(|y| axis_prime(2, y), &log_grid(1e-3, 1e3, 61))?;
    Ok(monotone_check(
        &values,
        true,
        (-1.0 / (4.0 * PI), 0.0),
        STRICT_PRIME,
    ))
}

fn phi2_decreasing() -> Result<(bool, String)> {
    let values = sample(|y| axis(2, y), &log_grid(1e-3, 1e3, 61))?;
    Ok(monotone_check(&values, false, (0.0, 1.0 / 12.0), STRICT))
}

fn phi3_prime_range() -> Result<(bool, String)> {
    let values = sample(|y| axis_prime(3, y), &log_grid(1e-3, STRICT_Y_MAX, 51))?;
    let bound = 3.0 / (4.0 * PI);
    let worst = values.iter().map(|v| v.1).fold(f64::NEG_INFINITY, f64::max);
    let ok = values.iter().all(|&(_, v)| 0.0 < v && v < bound);
    Ok((ok, format!("max i φ₃'(iy) = {worst:.6} (< {bound:.6})")))
}

fn phi3_increasing() -> Result<(bool, String)> {
    let values = sample(|y| axis(3, y), &log_grid(1e-3, 1e3, 61))?;
    Ok(monotone_check(&values, true, (-0.25, 0.0), STRICT))
}

fn phi2_gap_slope() -> Result<(bool, String)> {
    let (lo, hi) = (1.0 / (8.0 * PI), 1.0 / (4.0 * PI));
    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut ok = true;
    for y in small_y_grid() {
        for t in T_GRID {
            if t * y <= 1.0 {
                let slope = gap(y, t)? / (t * y - y);
                min = min.min(slope);
                max = max.max(slope);
                // The slope is 1/(4π) minus O(e^{-2π/(ty)}), which rounds
                // away when ty < 0.16; the gap itself carries ε/12 of
                // cancellation error.
                let rounding = 4.0 * f64::EPSILON / (12.0 * (t * y - y));
                let below = if t * y >= STRICT_PRIME.0 {
                    slope < hi
                } else {
                    slope <= hi + rounding
                };
                ok &= lo < slope && below;
            }
        }
    }
    Ok((
        ok,
        format!("slope in [{min:.6}, {max:.6}] within ({lo:.6}, {hi:.6})"),
    ))
}

fn phi2_gap_range() -> Result<(bool, String)> {
    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    for y in small_y_grid() {
        for t in T_GRID {
            if t * y >= 1.0 {
                let g = gap(y, t)?;
                min = min.min(g);
                max = max.max(g);
            }
        }
    }
    let reference = axis(2, 0.1)? - axis(2, 1.0)?;
    let ok = 1.0 / 16.0 < min && max < 1.0 / 12.0 && (reference - 0.0635).abs() <= 0.0005;
    Ok((
        ok,
        format!("gap in [{min:.6}, {max:.6}], φ₂(i/10) - φ₂(i) = {reference:.6}"),
    ))
}

fn phi3_ratio() -> Result<(bool, String)> {
    let mut worst = 0f64;
    for y in small_y_grid() {
        for t in T_GRID {
            let r = ((axis(3, y)? - axis(3, t * y)?) / gap(y, t)?).abs();
            worst = worst.max(r);
        }
    }
    Ok((worst < 6.0, format!("max ratio {worst:.4} (< 6)")))
}

fn phi4_ratio() -> Result<(bool, String)> {
    let mut worst = 0f64;
    for y in small_y_grid() {
        for frac in [0.0, 0.1, -0.2, 0.3, -0.333] {
            let z = UpperHalfPoint::new(frac * y, y)?;
            for t in T_GRID {
                let r = (phi(4, z)? - phi(4, z.scaled(t)?)?).norm() / gap(y, t)?;
                worst = worst.max(r);
            }
        }
    }
    Ok((worst < 36.0, format!("max ratio {worst:.4} (< 36)")))
}

fn log_ratio_bounds() -> Result<(bool, String)> {
    let (t, y) = (1000u32, 0.001);
    let tf = t as f64;
    let mut ok = true;
    let (mut worst_a, mut worst_b) = (0f64, 0f64);
    for frac in [0.0, 0.2, -0.3] {
        let z = UpperHalfPoint::new(frac * y, y)?;
        let tz = z.z() * tf;
        let decay = (-2.0 * PI * tf * y).exp();
        let value = log_ratio_ft(z, t)?;
        let first = 7.5 * tz.norm() * decay;
        let e_tz = (Complex64::new(0.0, 2.0 * PI) * tz).exp();
        let corrected = value + e_tz * (Complex64::new(0.0, 2.0 * PI) * tz + 1.0);
        let second = (40.0 * z.z().norm() + 22.0 * decay) * tz.norm() * decay;
        ok &= value.norm() <= first && corrected.norm() <= second;
        worst_a = worst_a.max(value.norm() / first);
        worst_b = worst_b.max(corrected.norm() / second);
    }
    Ok((
        ok,
        format!("at (t, y) = (1000, 0.001): ratios to bounds {worst_a:.4}, {worst_b:.4}"),
    ))
}

fn phi2_functional_equation() -> Result<(bool, String)> {
    let target = -1.0 / Complex64::new(0.0, 4.0 * PI);
    let mut worst = 0f64;
    for (x, y) in [(0.1, 0.7), (0.0, 0.5), (0.05, 0.3), (-0.2, 1.3), (0.0, 2.0)] {
        let z = UpperHalfPoint::new(x, y)?;
        let w = z.inverted();
        if !w.in_inversion_cone() && w.y() < 1.0 {
            continue;
        }
        let r = (phi_prime(2, z)? + phi_prime(2, w)? - target).norm();
        worst = worst.max(r);
    }
    Ok((worst < 1e-10, format!("max residual {worst:.3e} (< 1e-10)")))
}

fn eta_functional_equation() -> Result<(bool, String)> {
    let mut worst = 0f64;
    for y in [0.5, 1.0, 2.0, 3.0] {
        let lhs = eta_log(UpperHalfPoint::imaginary(y)?)?;
        let rhs = -0.5 * y.ln() + eta_log(UpperHalfPoint::imaginary(1.0 / y)?)?;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok((worst < 1e-12, format!("max residual {worst:.3e} (< 1e-12)")))
}

fn dual_expansion_agreement() -> Result<(bool, String)> {
    let mut worst = 0f64;
    for k in 0..=4 {
        for y in [0.9, 1.0, 1.1] {
            for x in [0.0, 0.2] {
                let z = UpperHalfPoint::new(x, y)?;
                for (a, b) in [
                    (
                        phi_with(k, z, Expansion::Q)?,
                        phi_with(k, z, Expansion::Inverted)?,
                    ),
                    (
                        phi_prime_with(k, z, Expansion::Q)?,
                        phi_prime_with(k, z, Expansion::Inverted)?,
                    ),
                ] {
                    worst = worst.max((a - b).norm() / a.norm().max(b.norm()));
                }
            }
        }
    }
    Ok((
        worst < 1e-10,
        format!("max relative disagreement {worst:.3e} (< 1e-10)"),
    ))
}

fn pq_identity() -> Result<(bool, String)> {
    for k in 0..=8 {
        let table = pq_polynomials(k);
        let rhs = table.p.sub(&table.p.derivative()).shift(2);
        if table.q != rhs {
            return Ok((
                false,
                format!("Q_{k} = {} but r²(P_{k} - P_{k}') = {rhs}", table.q),
            ));
        }
    }
    Ok((true, "Q_k = r²(P_k - P_k') for k ≤ 8".into()))
}

fn saddle_bracket_grid() -> Result<(bool, String)> {
    for t in [6u32, 50, 1000] {
        for n in [100u64, 10_000, 100_000] {
            let (lo, hi) = saddle_bracket(t, n)?;
            let s = solve_y(t, n)?;
            if !(lo <= s.y && s.y <= hi && saddle_residual(t, n, hi)? <= 0.0) {
                return Ok((false, format!("bracket fails at (t, N) = ({t}, {n})")));
            }
        }
    }
    Ok((
        true,
        "solved y inside the bracket on t ∈ {6, 50, 1000}, N ∈ {1e2, 1e4, 1e5}".into(),
    ))
}

fn alpha_window() -> Result<(bool, String)> {
    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    for t in [6u32, 50, 1000, 5000] {
        for n in [100u64, 10_000, 100_000, 1_000_000] {
            let s = solve_y(t, n)?;
            if s.y <= 0.1 {
                let r = s.alpha / s.scale();
                min = min.min(r);
                max = max.max(r);
            }
        }
    }
    let ok = 1.0 / 26.0 <= min && max <= 1.0 / 12.0;
    Ok((
        ok,
        format!("α/min(t, 1/y) in [{min:.5}, {max:.5}] ⊂ [1/26, 1/12]"),
    ))
}

fn kappa_limits() -> Result<(bool, String)> {
    let c = kappa_constants(1e6)?;
    let b_limit = 4.0 * 3f64.sqrt();
    let ok = (c.a - 1.0 / 6.0).abs() < 1e-2 && (c.b - b_limit).abs() < 1e-1;
    Ok((ok, format!("A(1e6) = {:.6}, B(1e6) = {:.6}", c.a, c.b)))
}

fn bruteforce_agreement() -> Result<(bool, String)> {
    let max_n = 20usize;
    let p = partition_numbers(max_n)?;
    for n in 1..=max_n {
        for t in 1..=n as u32 {
            if tcore_count_from(&p, t, n)? != tcore_count_bruteforce(t, n)? {
                return Ok((false, format!("mismatch at (t, N) = ({t}, {n})")));
            }
        }
    }
    Ok((
        true,
        format!("generating function matches enumeration for 1 ≤ t ≤ N ≤ {max_n}"),
    ))
}

fn minor_arc_bound() -> Result<(bool, String)> {
    let r = minor_arc_ratio(100, 0.05)?;
    let bound = (-20.0f64 / 70.0).exp();
    Ok((
        0.0 < r && r <= bound,
        format!("ratio {r:.6} (≤ {bound:.6}) at (t, y) = (100, 0.05)"),
    ))
}

fn central_integral_bound() -> Result<(bool, String)> {
    let c = central_abs_integral(100, 0.05)?;
    Ok((
        c.ratio <= c.bound,
        format!(
            "ratio {:.6} (≤ {:.6}) at (t, y) = (100, 0.05)",
            c.ratio, c.bound
        ),
    ))
}

fn stanton_exhaustive() -> Result<(bool, String)> {
    let r = verify_exact(2000, None)?;
    let ok = r.violations.is_empty() && r.equalities == [Pair { t: 5, n: 10 }];
    Ok((
        ok,
        format!(
            "{} comparisons, {} violations, equalities {:?}",
            r.comparisons,
            r.violations.len(),
            r.equalities
        ),
    ))
}

fn interval_containment() -> Result<(bool, String)> {
    let p = partition_numbers(101_000)?;
    let main = certify_interval_containment_with(&p, 1000, 60_000, Regime::Main)?;
    let small = certify_interval_containment_with(&p, 50, 100_000, Regime::SmallT)?;
    let diff = certify_difference_containment_with(&p, 1000, 100_000)?;
    let ok = main.contained && small.contained && diff.contained;
    Ok((
        ok,
        format!(
            "margins: main {:.3e}, small_t {:.3e}, difference {:.3e}",
            main.margin, small.margin, diff.margin
        ),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        let r = run_selftest(Level::Quick);
        for c in &r.checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
        assert_eq!(r.checks.len(), QUICK.len());
    }

    #[test]
    fn full_lists_more_checks() {
        assert!(check_names(Level::Full).len() > check_names(Level::Quick).len());
        assert!(check_names(Level::Full).contains(&"interval_containment"));
    }
}
