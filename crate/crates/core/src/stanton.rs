//! Stanton's inequality `c_t(N) ≤ c_{t+1}(N)`: an exhaustive exact check on
//! small ranges and certificates for single pairs at large parameters.

use std::cmp::Ordering;
use std::time::Instant;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{estimate, estimate_difference, CertifiedEstimate, Regime};
use crate::error::{Error, Result};
use crate::exact::{
    log_of_integer, partition_numbers, tcore_count_from, tcore_counts_from, PartitionSeries,
};

/// Default cap on `max_N` for the exhaustive check.
pub const DEFAULT_MAX_N_CAP: usize = 10_000;

/// Default largest `N` for which [`certify_pair`] counts exactly.
pub const DEFAULT_EXACT_MAX_N: u64 = 10_000;

/// Smallest `t` the inequality is claimed for.
pub const MIN_T: u32 = 4;

/// Values of `t` handled by one worker.
const CHUNK: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pair {
    pub t: u32,
    pub n: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    Difference,
    Ratio,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairCertificate {
    pub t: u32,
    pub n: u64,
    pub method: Method,
    /// `Less` when `c_t(N) < c_{t+1}(N)` is established.
    #[serde(with = "ordering_serde")]
    pub relation: Option<Ordering>,
    /// Exact: `log c_{t+1}(N) - log c_t(N)`. Difference: lower end of the
    /// multiplier interval. Ratio: gap between the log intervals.
    pub margin: Option<f64>,
    pub detail: String,
}

mod ordering_serde {
    use std::cmp::Ordering;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(o: &Option<Ordering>, s: S) -> Result<S::Ok, S::Error> {
        match o {
            Some(Ordering::Less) => s.serialize_some("less"),
            Some(Ordering::Equal) => s.serialize_some("equal"),
            Some(Ordering::Greater) => s.serialize_some("greater"),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Ordering>, D::Error> {
        let v: Option<String> = Option::deserialize(d)?;
        match v.as_deref() {
            None => Ok(None),
            Some("less") => Ok(Some(Ordering::Less)),
            Some("equal") => Ok(Some(Ordering::Equal)),
            Some("greater") => Ok(Some(Ordering::Greater)),
            Some(other) => Err(serde::de::Error::custom(format!(
                "unknown relation {other}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub max_n: u64,
    pub max_t: Option<u32>,
    /// Pairs with `c_t(N) > c_{t+1}(N)`.
    pub violations: Vec<Pair>,
    /// Pairs with `c_t(N) = c_{t+1}(N)`.
    pub equalities: Vec<Pair>,
    pub comparisons: u64,
    pub certified_pairs: Vec<PairCertificate>,
    pub elapsed_ms: f64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Options for [`verify_exact_with`].
#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    /// Overrides [`DEFAULT_MAX_N_CAP`].
    pub max_n_cap: Option<usize>,
    /// Replaces `c_t(N)` by `c_t(N) + c_{t+1}(N) + 1` at one pair.
    #[doc(hidden)]
    pub inject_fault: Option<Pair>,
}

/// Compare `c_t(N)` with `c_{t+1}(N)` for all `4 ≤ t < N - 1`, `N ≤ max_n`
/// (and `t ≤ max_t` if given).
pub fn verify_exact(max_n: usize, max_t: Option<u32>) -> Result<VerificationReport> {
    verify_exact_with(max_n, max_t, &VerifyOptions::default())
}

pub fn verify_exact_with(
    max_n: usize,
    max_t: Option<u32>,
    options: &VerifyOptions,
) -> Result<VerificationReport> {
    let cap = options.max_n_cap.unwrap_or(DEFAULT_MAX_N_CAP);
    if max_n > cap {
        return Err(Error::ResourceCap {
            what: "max_n",
            value: max_n as u64,
            limit: cap as u64,
        });
    }
    let start = Instant::now();
    let p = partition_numbers(max_n)?;
    // t < N - 1 ≤ max_n - 1.
    let t_hi = (max_n.saturating_sub(2) as u64).min(max_t.map_or(u64::MAX, u64::from));
    let chunks: Vec<(u32, u32)> = if t_hi < MIN_T as u64 {
        Vec::new()
    } else {
        let t_hi = t_hi as u32;
        (MIN_T..=t_hi)
            .step_by(CHUNK as usize)
            .map(|a| (a, (a + CHUNK - 1).min(t_hi)))
            .collect()
    };
    let results: Vec<ChunkOutcome> = chunks
        .par_iter()
        .map(|&(a, b)| compare_chunk(&p, max_n, a, b, options.inject_fault))
        .collect::<Result<_>>()?;
    let mut report = VerificationReport {
        max_n: max_n as u64,
        max_t,
        violations: Vec::new(),
        equalities: Vec::new(),
        comparisons: 0,
        certified_pairs: Vec::new(),
        elapsed_ms: 0.0,
    };
    // Chunks come back in t order, and each lists its pairs by (t, N).
    for r in results {
        report.violations.extend(r.violations);
        report.equalities.extend(r.equalities);
        report.comparisons += r.comparisons;
    }
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

#[derive(Default)]
struct ChunkOutcome {
    violations: Vec<Pair>,
    equalities: Vec<Pair>,
    comparisons: u64,
}

/// Stream `c_a, c_{a+1}, …, c_{b+1}`, holding two series at a time.
fn compare_chunk(
    p: &PartitionSeries,
    max_n: usize,
    a: u32,
    b: u32,
    fault: Option<Pair>,
) -> Result<ChunkOutcome> {
    let mut out = ChunkOutcome::default();
    let mut current = tcore_counts_from(p, a, max_n)?;
    for t in a..=b {
        let next = tcore_counts_from(p, t + 1, max_n)?;
        for n in (t as usize + 2)..=max_n {
            let left = current.values()[n].clone();
            let right = &next.values()[n];
            let left = if fault == Some(Pair { t, n: n as u64 }) {
                left + right + 1u32
            } else {
                left
            };
            out.comparisons += 1;
            match left.cmp(right) {
                Ordering::Less => {}
                Ordering::Equal => out.equalities.push(Pair { t, n: n as u64 }),
                Ordering::Greater => out.violations.push(Pair { t, n: n as u64 }),
            }
        }
        current = next;
    }
    Ok(out)
}

/// Options for [`certify_pair_with`].
#[derive(Debug, Clone, Copy)]
pub struct CertifyOptions {
    /// Largest `N` compared exactly.
    pub exact_max_n: u64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            exact_max_n: DEFAULT_EXACT_MAX_N,
        }
    }
}

pub fn certify_pair(t: u32, n: u64) -> PairCertificate {
    certify_pair_with(t, n, CertifyOptions::default())
}

/// Try an exact comparison, then the difference estimate, then separated
/// certified intervals.
pub fn certify_pair_with(t: u32, n: u64, options: CertifyOptions) -> PairCertificate {
    let mut notes = Vec::new();
    if n <= options.exact_max_n {
        match exact_certificate(t, n) {
            Ok(c) => return c,
            Err(e) => notes.push(format!("exact: {e}")),
        }
    } else {
        notes.push(format!("exact: N above budget {}", options.exact_max_n));
    }
    if t < 6 {
        notes.push("analytic certificates need t >= 6".into());
        return inconclusive(t, n, notes);
    }
    match difference_certificate(t, n) {
        Ok(Some(c)) => return c,
        Ok(None) => notes.push("difference: not applicable".into()),
        Err(e) => notes.push(format!("difference: {e}")),
    }
    match ratio_certificate(t, n) {
        Ok(Some(c)) => return c,
        Ok(None) => notes.push("ratio: no separated certified intervals".into()),
        Err(e) => notes.push(format!("ratio: {e}")),
    }
    inconclusive(t, n, notes)
}

fn inconclusive(t: u32, n: u64, notes: Vec<String>) -> PairCertificate {
    PairCertificate {
        t,
        n,
        method: Method::Inconclusive,
        relation: None,
        margin: None,
        detail: notes.join("; "),
    }
}

fn to_usize(n: u64) -> Result<usize> {
    usize::try_from(n).map_err(|_| Error::invalid("N does not fit in memory indices"))
}

fn exact_certificate(t: u32, n: u64) -> Result<PairCertificate> {
    let p = partition_numbers(to_usize(n)?)?;
    let a = tcore_count_from(&p, t, n as usize)?;
    let b = tcore_count_from(&p, t + 1, n as usize)?;
    let margin = if a.bits() == 0 || b.bits() == 0 {
        None
    } else {
        Some(log_of_integer(&b)? - log_of_integer(&a)?)
    };
    Ok(PairCertificate {
        t,
        n,
        method: Method::Exact,
        relation: Some(a.cmp(&b)),
        margin,
        detail: format!("c_t(N) = {a}, c_(t+1)(N) = {b}"),
    })
}

/// `c_{t+1}(N) - c_t(N) = c_t(N - t) · multiplier`, positive when the
/// multiplier interval lies above zero.
fn difference_certificate(t: u32, n: u64) -> Result<Option<PairCertificate>> {
    let Some(base) = n.checked_sub(t as u64).filter(|&m| m > 0) else {
        return Ok(None);
    };
    let e = estimate_difference(t, base)?;
    let (Some(m), Some(d)) = (e.multiplier, e.diagnostics) else {
        return Ok(None);
    };
    if !e.hypotheses_ok || d.y * (t as f64) < 0.5 || m.lower() <= 0.0 {
        return Ok(None);
    }
    // c_t(N - t) > 0 for t ≥ 4, so the sign of the difference is the sign
    // of the multiplier.
    Ok(Some(PairCertificate {
        t,
        n,
        method: Method::Difference,
        relation: Some(Ordering::Less),
        margin: Some(m.lower()),
        detail: format!(
            "multiplier [{:.15e}, {:.15e}] at (t, N - t) = ({t}, {base}), ty = {:.15e}",
            m.lower(),
            m.upper(),
            d.y * t as f64
        ),
    }))
}

/// The certified estimate for `(t, N)` if one of the rigorous regimes
/// applies, preferring the small-`t` one.
pub fn certified_estimate(t: u32, n: u64) -> Option<CertifiedEstimate> {
    [Regime::SmallT, Regime::Main]
        .into_iter()
        .filter_map(|r| estimate(r, t, n).ok())
        .find(CertifiedEstimate::certified)
}

fn ratio_certificate(t: u32, n: u64) -> Result<Option<PairCertificate>> {
    let (Some(a), Some(b)) = (certified_estimate(t, n), certified_estimate(t + 1, n)) else {
        return Ok(None);
    };
    let (Some((_, a_hi)), Some((b_lo, _))) = (a.log_interval(), b.log_interval()) else {
        return Ok(None);
    };
    let margin = b_lo - a_hi;
    if !(margin > 0.0) {
        return Ok(None);
    }
    Ok(Some(PairCertificate {
        t,
        n,
        method: Method::Ratio,
        relation: Some(Ordering::Less),
        margin: Some(margin),
        detail: format!("{} for t, {} for t + 1", a.regime, b.regime),
    }))
}

/// Outcome of checking an exact count against a certified interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Containment {
    pub t: u32,
    pub n: u64,
    pub regime: Regime,
    /// Log of the exact quantity being bracketed.
    pub log_exact: f64,
    pub interval: (f64, f64),
    pub contained: bool,
    /// Distance from `log_exact` to the nearer endpoint, in log units.
    pub margin: f64,
}

fn containment(estimate: &CertifiedEstimate, log_exact: f64, interval: (f64, f64)) -> Containment {
    let (lo, hi) = interval;
    Containment {
        t: estimate.t,
        n: estimate.n,
        regime: estimate.regime,
        log_exact,
        interval,
        contained: lo <= log_exact && log_exact <= hi,
        margin: (log_exact - lo).min(hi - log_exact),
    }
}

fn require_certified(e: &CertifiedEstimate) -> Result<()> {
    if !e.hypotheses_ok || !e.rigorous {
        return Err(Error::HypothesesNotSatisfied(format!(
            "{} estimate at (t, N) = ({}, {}): {}",
            e.regime,
            e.t,
            e.n,
            e.failed.join(", ")
        )));
    }
    Ok(())
}

/// Whether exact `log c_t(N)` lies in the certified interval of `regime`.
pub fn certify_interval_containment(t: u32, n: u64, regime: Regime) -> Result<Containment> {
    let e = estimate(regime, t, n)?;
    require_certified(&e)?;
    let p = partition_numbers(to_usize(n)?)?;
    containment_from_estimate(&p, &e)
}

/// As [`certify_interval_containment`], reusing a partition series.
pub fn certify_interval_containment_with(
    p: &PartitionSeries,
    t: u32,
    n: u64,
    regime: Regime,
) -> Result<Containment> {
    let e = estimate(regime, t, n)?;
    require_certified(&e)?;
    containment_from_estimate(p, &e)
}

fn containment_from_estimate(p: &PartitionSeries, e: &CertifiedEstimate) -> Result<Containment> {
    if e.regime == Regime::Difference {
        return difference_containment_from(p, e);
    }
    let interval = e
        .log_interval()
        .ok_or_else(|| Error::HypothesesNotSatisfied("estimate carries no error bound".into()))?;
    let c = tcore_count_from(p, e.t, to_usize(e.n)?)?;
    Ok(containment(e, log_of_integer(&c)?, interval))
}

/// Whether `c_{t+1}(N+t) - c_t(N+t)` lies in `c_t(N)` times the multiplier
/// interval; compared in log space, so it needs a positive lower end.
pub fn certify_difference_containment_with(
    p: &PartitionSeries,
    t: u32,
    n: u64,
) -> Result<Containment> {
    let e = estimate_difference(t, n)?;
    require_certified(&e)?;
    difference_containment_from(p, &e)
}

fn difference_containment_from(p: &PartitionSeries, e: &CertifiedEstimate) -> Result<Containment> {
    let (t, n) = (e.t, to_usize(e.n)?);
    let m = e
        .multiplier
        .ok_or_else(|| Error::invalid("difference estimate without multiplier"))?;
    if !(m.lower() > 0.0) {
        return Err(Error::HypothesesNotSatisfied(
            "multiplier interval is not positive".into(),
        ));
    }
    let shifted = n + t as usize;
    let upper = tcore_count_from(p, t + 1, shifted)?;
    let lower = tcore_count_from(p, t, shifted)?;
    let base = tcore_count_from(p, t, n)?;
    let log_base = log_of_integer(&base)?;
    let interval = (log_base + m.lower().ln(), log_base + m.upper().ln());
    let log_exact = if upper > lower {
        log_of_integer(&(upper - lower))?
    } else {
        f64::NEG_INFINITY
    };
    Ok(containment(e, log_exact, interval))
}

/// Exact `(c_{t+1}(N+t), c_t(N+t), c_t(N))`.
pub fn difference_exact(
    p: &PartitionSeries,
    t: u32,
    n: usize,
) -> Result<(BigUint, BigUint, BigUint)> {
    let shifted = n + t as usize;
    Ok((
        tcore_count_from(p, t + 1, shifted)?,
        tcore_count_from(p, t, shifted)?,
        tcore_count_from(p, t, n)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_range_is_clean() {
        let r = verify_exact(2000, None).unwrap();
        assert!(r.violations.is_empty());
        assert_eq!(r.equalities, vec![Pair { t: 5, n: 10 }]);
        let r = verify_exact(9, None).unwrap();
        assert!(r.passed());
        assert!(r.equalities.is_empty());
    }

    #[test]
    fn equality_only_found_when_in_range() {
        assert!(verify_exact(9, None).unwrap().equalities.is_empty());
        assert!(verify_exact(300, Some(4)).unwrap().equalities.is_empty());
        assert_eq!(
            verify_exact(10, None).unwrap().equalities,
            vec![Pair { t: 5, n: 10 }]
        );
    }

    #[test]
    fn last_column_excluded() {
        // c_9(10) = 33 > c_10(10) = 32, but t = N - 1 is not compared.
        let p = partition_numbers(10).unwrap();
        assert_eq!(tcore_count_from(&p, 9, 10).unwrap(), BigUint::from(33u32));
        assert_eq!(tcore_count_from(&p, 10, 10).unwrap(), BigUint::from(32u32));
        let r = verify_exact(10, None).unwrap();
        assert!(r.passed());
        // Pairs (t, 10) for t = 4..=8.
        let r10 = r.comparisons - verify_exact(9, None).unwrap().comparisons;
        assert_eq!(r10, 5);
    }

    #[test]
    fn fault_injection_is_reported() {
        let options = VerifyOptions {
            max_n_cap: None,
            inject_fault: Some(Pair { t: 7, n: 30 }),
        };
        let r = verify_exact_with(50, None, &options).unwrap();
        assert_eq!(r.violations, vec![Pair { t: 7, n: 30 }]);
    }

    #[test]
    fn resource_cap() {
        assert!(matches!(
            verify_exact(10_001, None),
            Err(Error::ResourceCap { .. })
        ));
        let options = VerifyOptions {
            max_n_cap: Some(100),
            inject_fault: None,
        };
        assert!(verify_exact_with(101, None, &options).is_err());
    }

    #[test]
    fn deterministic_ordering() {
        let a = verify_exact(400, None).unwrap();
        let b = verify_exact(400, None).unwrap();
        assert_eq!(a.violations, b.violations);
        assert_eq!(a.equalities, b.equalities);
        assert_eq!(a.comparisons, b.comparisons);
    }

    #[test]
    fn exact_pair_equality() {
        let c = certify_pair(5, 10);
        assert_eq!(c.method, Method::Exact);
        assert_eq!(c.relation, Some(Ordering::Equal));
        assert_eq!(c.margin, Some(0.0));
    }

    #[test]
    fn difference_pair() {
        let c = certify_pair(1000, 101_000);
        assert_eq!(c.method, Method::Difference, "{}", c.detail);
        assert!(c.margin.unwrap() > 0.0);
    }

    #[test]
    fn ratio_pair() {
        let c = certify_pair_with(50, 100_000, CertifyOptions { exact_max_n: 0 });
        assert_eq!(c.method, Method::Ratio, "{}", c.detail);
        assert!(c.margin.unwrap() > 0.0);
        assert_eq!(
            c,
            certify_pair_with(50, 100_000, CertifyOptions { exact_max_n: 0 })
        );
    }

    #[test]
    fn inconclusive_is_a_value() {
        let c = certify_pair_with(6, 20_000, CertifyOptions { exact_max_n: 0 });
        assert_eq!(c.method, Method::Inconclusive);
        assert!(c.relation.is_none());
    }

    #[test]
    fn containment_rejects_uncertified() {
        assert!(matches!(
            certify_interval_containment(8, 50, Regime::SmallT),
            Err(Error::HypothesesNotSatisfied(_))
        ));
    }

    #[test]
    fn report_round_trips() {
        let mut r = verify_exact(50, None).unwrap();
        r.certified_pairs.push(certify_pair(5, 10));
        let s = serde_json::to_string(&r).unwrap();
        let back: VerificationReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
}
