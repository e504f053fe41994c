use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Length of the shared divisor-sum table; series are capped below this.
pub const SIGMA_TABLE_LEN: usize = 100_001;

static TABLE: OnceLock<Vec<u64>> = OnceLock::new();

/// Divisor sums `σ(0..SIGMA_TABLE_LEN)` by a sieve, built once and then
/// shared read-only.
pub(crate) fn sigma_table() -> &'static [u64] {
    TABLE.get_or_init(|| {
        let mut s = vec![0u64; SIGMA_TABLE_LEN];
        for d in 1..SIGMA_TABLE_LEN {
            for m in (d..SIGMA_TABLE_LEN).step_by(d) {
                s[m] += d as u64;
            }
        }
        s
    })
}

/// `σ(n) = Σ_{d | n} d`.
pub fn sigma(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::invalid("σ(n) needs n >= 1"));
    }
    if (n as usize) < SIGMA_TABLE_LEN {
        return Ok(sigma_table()[n as usize]);
    }
    // Multiplicative: σ(p^a) = (p^{a+1} - 1)/(p - 1).
    let mut rest = n;
    let mut total = 1u64;
    let mut p = 2u64;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            let mut power_sum = 1u64;
            let mut power = 1u64;
            while rest.is_multiple_of(p) {
                rest /= p;
                power *= p;
                power_sum += power;
            }
            total *= power_sum;
        }
        p += 1;
    }
    if rest > 1 {
        total *= rest + 1;
    }
    Ok(total)
}

/// `Σ_{n≥1} σ(n) e^{-decay·n}` for `decay > 0`.
///
/// On the imaginary axis this is the whole non-polynomial part of `φ₁`:
/// `φ₁(iy) = y²/24 - y² S(2πy) = -1/24 + y/4π + S(2π/y)`.
pub fn sigma_exp_sum(decay: f64) -> Result<f64> {
    if !(decay > 0.0) {
        return Err(Error::invalid(
            "σ-exponential sum needs a positive decay rate",
        ));
    }
    let table = sigma_table();
    let mut sum = 0.0;
    for (n, &s) in table.iter().enumerate().skip(1) {
        let term = s as f64 * (-decay * n as f64).exp();
        sum += term;
        // Terms decay geometrically once n·decay exceeds log σ(n).
        if (term <= 1e-18 * sum || term == 0.0) && n as f64 * decay > (s as f64).ln() + 1.0 {
            return Ok(sum);
        }
    }
    Err(Error::TruncationCap(table.len() - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(n: u64) -> u64 {
        (1..=n).filter(|d| n.is_multiple_of(*d)).sum()
    }

    #[test]
    fn small_values() {
        assert_eq!(sigma(1).unwrap(), 1);
        assert_eq!(sigma(6).unwrap(), 12);
        for q in [2u64, 3, 5, 7, 97, 7919, 1_000_003] {
            assert_eq!(sigma(q).unwrap(), q + 1);
        }
        assert!(sigma(0).is_err());
    }

    #[test]
    fn exp_sum_matches_direct_series() {
        for decay in [0.5, 2.0 * std::f64::consts::PI, 40.0] {
            let direct: f64 = (1..5000u64)
                .map(|n| naive(n) as f64 * (-decay * n as f64).exp())
                .sum();
            let got = sigma_exp_sum(decay).unwrap();
            assert!((got - direct).abs() <= 1e-14 * direct, "{got} vs {direct}");
        }
        assert_eq!(sigma_exp_sum(800.0).unwrap(), 0.0);
        assert!(sigma_exp_sum(0.0).is_err());
    }

    #[test]
    fn table_and_factorisation_agree() {
        for n in 1..2000 {
            assert_eq!(sigma(n).unwrap(), naive(n));
        }
        for n in [100_000u64, 100_001, 123_456, 999_999] {
            assert_eq!(sigma(n).unwrap(), naive(n), "n = {n}");
        }
    }
}
