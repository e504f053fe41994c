use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;

/// A Laurent polynomial `Σ c_i r^{low + i}` with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    low: i32,
    coeffs: Vec<i64>,
}

impl LaurentPoly {
    /// Coefficients listed from exponent `low` upwards.
    pub fn new(low: i32, coeffs: Vec<i64>) -> Self {
        let mut p = Self { low, coeffs };
        p.normalize();
        p
    }

    pub fn zero() -> Self {
        Self {
            low: 0,
            coeffs: Vec::new(),
        }
    }

    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|&&c| c == 0).count();
        if lead == self.coeffs.len() {
            *self = Self::zero();
            return;
        }
        self.coeffs.drain(..lead);
        self.low += lead as i32;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient (0 for the zero polynomial).
    pub fn low(&self) -> i32 {
        self.low
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn degree(&self) -> Option<i32> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i32 - 1)
    }

    /// Coefficient of `r^e`.
    pub fn coeff(&self, e: i32) -> i64 {
        let i = e - self.low;
        if i < 0 {
            return 0;
        }
        self.coeffs.get(i as usize).copied().unwrap_or(0)
    }

    fn from_fn(low: i32, high: i32, f: impl Fn(i32) -> i64) -> Self {
        if high < low {
            return Self::zero();
        }
        Self::new(low, (low..=high).map(f).collect())
    }

    fn span(&self, other: &Self) -> (i32, i32) {
        match (self.degree(), other.degree()) {
            (None, None) => (0, -1),
            (Some(d), None) => (self.low, d),
            (None, Some(d)) => (other.low, d),
            (Some(a), Some(b)) => (self.low.min(other.low), a.max(b)),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (lo, hi) = self.span(other);
        Self::from_fn(lo, hi, |e| self.coeff(e) + other.coeff(e))
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (lo, hi) = self.span(other);
        Self::from_fn(lo, hi, |e| self.coeff(e) - other.coeff(e))
    }

    pub fn scale(&self, c: i64) -> Self {
        Self::new(self.low, self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// `r^k · self`.
    pub fn shift(&self, k: i32) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self {
            low: self.low + k,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn derivative(&self) -> Self {
        match self.degree() {
            None => Self::zero(),
            Some(d) => Self::from_fn(self.low - 1, d - 1, |e| (e as i64 + 1) * self.coeff(e + 1)),
        }
    }

    pub fn eval(&self, r: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * r + c as f64;
        }
        acc * r.powi(self.low)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let e = self.low + i as i32;
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.unsigned_abs();
            match e {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != 1 {
                        write!(f, "{a}")?;
                    }
                    match e {
                        1 => write!(f, "r")?,
                        _ => write!(f, "r^{e}")?,
                    }
                }
            }
        }
        Ok(())
    }
}

/// `P_k` and `Q_k` for one `k`.
///
/// `P_0 = r^{-1}`, `P_k = (r - k) P_{k-1} - r P_{k-1}'`;
/// `Q_0 = r + 1`, `Q_k = (r - k + 1) Q_{k-1} - r Q_{k-1}'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialTable {
    pub k: usize,
    pub p: LaurentPoly,
    pub q: LaurentPoly,
}

/// `(r - c) f - r f'`.
fn step(f: &LaurentPoly, c: i64) -> LaurentPoly {
    f.shift(1).sub(&f.scale(c)).sub(&f.derivative().shift(1))
}

pub fn pq_polynomials(k: usize) -> PolynomialTable {
    let mut p = LaurentPoly::new(-1, vec![1]);
    let mut q = LaurentPoly::new(0, vec![1, 1]);
    for j in 1..=k as i64 {
        p = step(&p, j);
        q = step(&q, j - 1);
    }
    PolynomialTable { k, p, q }
}

/// Tables for `k = 0..=4`, shared by the `φ_k` evaluators.
pub(crate) fn cached_tables() -> &'static [PolynomialTable] {
    static TABLES: OnceLock<Vec<PolynomialTable>> = OnceLock::new();
    TABLES.get_or_init(|| (0..=4).map(pq_polynomials).collect())
}
