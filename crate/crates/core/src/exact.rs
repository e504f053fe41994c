//! Exact arbitrary-precision partition counts.
//!
//! `p(N)` comes from Euler's pentagonal recurrence. The t-core counts use
//! the product identity
//!
//! ```text
//! Σ c_t(N) q^N = ∏ (1 - q^{nt})^t / (1 - q^n)
//! ```
//!
//! so `c_t` is the convolution of the dense `p` series with the sparse
//! (stride-`t`) series of `(∏ (1 - x^n))^t` at `x = q^t`.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest series length accepted by the exact routines.
pub const MAX_LIMIT: usize = 100_000_000;

/// Largest `N` the hook-length enumeration oracle accepts.
pub const BRUTE_FORCE_MAX_N: usize = 40;

/// Exact counts indexed by `N = 0..=limit`.
///
/// `t == None` holds the plain partition numbers `p(N)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionSeries {
    t: Option<u32>,
    values: Vec<BigUint>,
}

impl PartitionSeries {
    pub fn t(&self) -> Option<u32> {
        self.t
    }

    pub fn limit(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    pub fn into_values(self) -> Vec<BigUint> {
        self.values
    }

    /// The count at `n`, or `None` past the end of the series.
    pub fn get(&self, n: usize) -> Option<&BigUint> {
        self.values.get(n)
    }

    /// The count at a possibly negative index; negative indices are zero.
    ///
    /// # Panics
    ///
    /// Panics if `n` exceeds the series limit.
    pub fn at(&self, n: i64) -> BigUint {
        if n < 0 {
            BigUint::zero()
        } else {
            self.values[n as usize].clone()
        }
    }

    fn require_partitions(&self, limit: usize) -> Result<()> {
        if self.t.is_some() {
            return Err(Error::invalid("expected a plain partition series"));
        }
        if limit > self.limit() {
            return Err(Error::invalid(format!(
                "partition series covers N <= {}, but N = {limit} was requested",
                self.limit()
            )));
        }
        Ok(())
    }
}

fn check_limit(limit: usize) -> Result<()> {
    if limit > MAX_LIMIT {
        return Err(Error::ResourceCap {
            what: "limit",
            value: limit as u64,
            limit: MAX_LIMIT as u64,
        });
    }
    Ok(())
}

/// Generalized pentagonal numbers `k(3k∓1)/2` up to `limit`, with the sign
/// `(-1)^{k+1}` they carry in the recurrence for `p`.
fn pentagonal_offsets(limit: usize) -> Vec<(usize, bool)> {
    let mut out = Vec::new();
    for k in 1usize.. {
        let g1 = k * (3 * k - 1) / 2;
        if g1 > limit {
            break;
        }
        let positive = k % 2 == 1;
        out.push((g1, positive));
        let g2 = k * (3 * k + 1) / 2;
        if g2 <= limit {
            out.push((g2, positive));
        }
    }
    out
}

/// `p(0..=limit)` by Euler's pentagonal recurrence.
pub fn partition_numbers(limit: usize) -> Result<PartitionSeries> {
    check_limit(limit)?;
    let offsets = pentagonal_offsets(limit);
    let mut values: Vec<BigUint> = Vec::with_capacity(limit + 1);
    values.push(BigUint::one());
    for n in 1..=limit {
        let mut pos = BigUint::zero();
        let mut neg = BigUint::zero();
        for &(g, positive) in offsets.iter().take_while(|(g, _)| *g <= n) {
            if positive {
                pos += &values[n - g];
            } else {
                neg += &values[n - g];
            }
        }
        values.push(pos - neg);
    }
    Ok(PartitionSeries { t: None, values })
}

/// `∏_{n≥1} (1 - x^n)` truncated at `degree`, from the pentagonal number
/// theorem.
fn euler_product(degree: usize) -> Vec<BigInt> {
    let mut coeffs = vec![BigInt::zero(); degree + 1];
    coeffs[0] = BigInt::one();
    for (g, positive) in pentagonal_offsets(degree) {
        // (-1)^k at both k(3k-1)/2 and k(3k+1)/2; `positive` is (-1)^{k+1}.
        coeffs[g] = if positive {
            -BigInt::one()
        } else {
            BigInt::one()
        };
    }
    coeffs
}

/// Product of two truncated power series, skipping zero coefficients of `a`.
fn mul_truncated(a: &[BigInt], b: &[BigInt], degree: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); degree + 1];
    for (i, ai) in a.iter().enumerate().take(degree + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(degree + 1 - i) {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

/// Coefficients of `(∏ (1 - x^n))^t` up to `x^degree`, by binary
/// exponentiation with truncation after every product.
pub fn eta_power_coefficients(t: u32, degree: usize) -> Vec<BigInt> {
    let mut result: Option<Vec<BigInt>> = None;
    let mut base = euler_product(degree);
    let mut e = t;
    while e > 0 {
        if e & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => mul_truncated(&base, &r, degree),
            });
        }
        e >>= 1;
        if e > 0 {
            base = mul_truncated(&base, &base, degree);
        }
    }
    result.unwrap_or_else(|| {
        let mut one = vec![BigInt::zero(); degree + 1];
        one[0] = BigInt::one();
        one
    })
}

/// `Σ_k a_k p(n - k t)` over the stride-`t` inner factor.
fn convolve_at(inner: &[BigInt], p: &[BigUint], t: usize, n: usize) -> BigUint {
    let mut pos = BigUint::zero();
    let mut neg = BigUint::zero();
    for (k, a) in inner.iter().enumerate().take(n / t + 1) {
        let term = a.magnitude() * &p[n - k * t];
        match a.sign() {
            Sign::Plus => pos += term,
            Sign::Minus => neg += term,
            Sign::NoSign => {}
        }
    }
    debug_assert!(pos >= neg, "negative t-core count");
    pos - neg
}

fn check_t(t: u32) -> Result<()> {
    if t == 0 {
        return Err(Error::invalid("t must be at least 1"));
    }
    Ok(())
}

/// `c_t(0..=limit)` exactly.
pub fn tcore_counts(t: u32, limit: usize) -> Result<PartitionSeries> {
    check_t(t)?;
    let p = partition_numbers(limit)?;
    tcore_counts_from(&p, t, limit)
}

/// `c_t(0..=limit)` reusing an already computed `p` series.
pub fn tcore_counts_from(
    partitions: &PartitionSeries,
    t: u32,
    limit: usize,
) -> Result<PartitionSeries> {
    check_t(t)?;
    partitions.require_partitions(limit)?;
    let stride = t as usize;
    let inner = eta_power_coefficients(t, limit / stride);
    let values = (0..=limit)
        .map(|n| convolve_at(&inner, &partitions.values, stride, n))
        .collect();
    Ok(PartitionSeries { t: Some(t), values })
}

/// The single value `c_t(n)` from an already computed `p` series.
///
/// Costs `O(n/t)` big-integer products once the inner factor is known.
pub fn tcore_count_from(partitions: &PartitionSeries, t: u32, n: usize) -> Result<BigUint> {
    check_t(t)?;
    partitions.require_partitions(n)?;
    let stride = t as usize;
    let inner = eta_power_coefficients(t, n / stride);
    Ok(convolve_at(&inner, &partitions.values, stride, n))
}

/// Hook lengths of every cell of `partition`, row by row.
///
/// `partition` must be weakly decreasing; zero parts are ignored.
pub fn hook_lengths(partition: &[usize]) -> Vec<usize> {
    let rows: Vec<usize> = partition.iter().copied().filter(|&r| r > 0).collect();
    let width = rows.first().copied().unwrap_or(0);
    let columns: Vec<usize> = (0..width)
        .map(|j| rows.iter().take_while(|&&r| r > j).count())
        .collect();
    let mut hooks = Vec::with_capacity(rows.iter().sum());
    for (i, &row) in rows.iter().enumerate() {
        for (j, &col) in columns.iter().enumerate().take(row) {
            hooks.push((row - j - 1) + (col - i - 1) + 1);
        }
    }
    hooks
}

/// Calls `visit` with every partition of `n` in reverse lexicographic order.
pub fn for_each_partition(n: usize, mut visit: impl FnMut(&[usize])) {
    fn recurse(
        remaining: usize,
        max_part: usize,
        parts: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if remaining == 0 {
            visit(parts);
            return;
        }
        for part in (1..=max_part.min(remaining)).rev() {
            parts.push(part);
            recurse(remaining - part, part, parts, visit);
            parts.pop();
        }
    }
    let mut parts = Vec::with_capacity(n);
    recurse(n, n, &mut parts, &mut visit);
}

/// `c_t(n)` by enumerating all partitions of `n` and their hook lengths.
pub fn tcore_count_bruteforce(t: u32, n: usize) -> Result<BigUint> {
    check_t(t)?;
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::ResourceCap {
            what: "N (brute force)",
            value: n as u64,
            limit: BRUTE_FORCE_MAX_N as u64,
        });
    }
    let t = t as usize;
    let mut count = 0u64;
    for_each_partition(n, |parts| {
        if !hook_lengths(parts).contains(&t) {
            count += 1;
        }
    });
    Ok(BigUint::from(count))
}

/// `c_t(n) = p(n) - t p(n-t) + ½(t² - 3t) p(n-2t)`, valid for `n < 3t`.
pub fn tcore_count_closed_small_range(t: u32, n: usize) -> Result<BigUint> {
    check_t(t)?;
    let p = partition_numbers(n)?;
    closed_small_range_from(&p, t, n)
}

/// As [`tcore_count_closed_small_range`], reusing a `p` series.
pub fn closed_small_range_from(partitions: &PartitionSeries, t: u32, n: usize) -> Result<BigUint> {
    check_t(t)?;
    if n >= 3 * t as usize {
        return Err(Error::invalid(format!(
            "closed form needs N < 3t, got t = {t}, N = {n}"
        )));
    }
    partitions.require_partitions(n)?;
    let tt = BigInt::from(t);
    let n = n as i64;
    let step = t as i64;
    let p = |k: i64| BigInt::from(partitions.at(k));
    let half_coeff = BigInt::from(t as i64 * (t as i64 - 3) / 2);
    let value = p(n) - &tt * p(n - step) + half_coeff * p(n - 2 * step);
    value
        .to_biguint()
        .ok_or_else(|| Error::invalid("closed form produced a negative count"))
}

/// Natural logarithm of a positive big integer, to about 1e-16 relative.
pub fn log_of_integer(n: &BigUint) -> Result<f64> {
    if n.is_zero() {
        return Err(Error::invalid("logarithm of zero"));
    }
    let bits = n.bits();
    if bits <= 64 {
        return Ok(n.to_u64().expect("fits in 64 bits").to_f64().unwrap().ln());
    }
    let shift = bits - 64;
    let top = (n >> shift).to_u64().expect("64 leading bits");
    Ok((top as f64).ln() + shift as f64 * std::f64::consts::LN_2)
}

/// As [`log_of_integer`] for signed integers; rejects `n <= 0`.
pub fn log_of_bigint(n: &BigInt) -> Result<f64> {
    if !n.is_positive() {
        return Err(Error::invalid("logarithm of a non-positive integer"));
    }
    log_of_integer(n.magnitude())
}
