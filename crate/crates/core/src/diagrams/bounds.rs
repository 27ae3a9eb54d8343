use num_bigint::BigUint;
use num_rational::Rational64;
use serde::Serialize;

use crate::{Error, Result};

/// Exponent `α(q)`: `(q+2)/(3q+2)` for even `q`, `(q²-q-1)/(q(3q-5))` for
/// odd `q`.
pub fn alpha(q: usize) -> Result<Rational64> {
    if q < 2 {
        return Err(Error::domain(format!("alpha needs q >= 2, got {q}")));
    }
    let q = q as i64;
    Ok(if q % 2 == 0 {
        Rational64::new(q + 2, 3 * q + 2)
    } else {
        Rational64::new(q * q - q - 1, q * (3 * q - 5))
    })
}

/// Lower bound `L(q, m)` on the matching number of every `G_σ`,
/// `σ ∈ Π(q[m])`.
pub fn matching_lower_bound(q: usize, m: usize) -> Result<usize> {
    if q < 2 || m < 3 {
        return Err(Error::domain(format!("L(q, m) needs q >= 2 and m >= 3, got ({q}, {m})")));
    }
    Ok(if q % 2 == 1 {
        ((q * q - q - 1) * m - (q - 1)).div_ceil(q * (3 * q - 5))
    } else {
        (m / 2).min(((q + 2) * m).div_ceil(3 * q + 2))
    })
}

/// Bounds `lower ≤ |Π(q[m])| ≤ upper` with
/// `upper = (m!)^{q/2} (q^{q/2})^m` and `lower = (m!)^{q/2} (√2)^m / 8`.
///
/// Both bounds can be irrational, so exact comparisons go through their
/// squares, which are integers (or integers over 64).
#[derive(Debug, Clone)]
pub struct CountBounds {
    pub q: usize,
    pub m: usize,
    pub ln_lower: f64,
    pub ln_upper: f64,
    upper_sq: BigUint,
    lower_sq_times_64: BigUint,
}

impl CountBounds {
    pub fn lower(&self) -> f64 {
        let (q, m) = (self.q as f64, self.m as i32);
        let direct = m_factorial(self.m).powf(q / 2.0) * 2f64.sqrt().powi(m) / 8.0;
        if direct.is_finite() { direct } else { self.ln_lower.exp() }
    }

    pub fn upper(&self) -> f64 {
        let (q, m) = (self.q as f64, self.m as i32);
        let direct = m_factorial(self.m).powf(q / 2.0) * q.powf(q / 2.0).powi(m);
        if direct.is_finite() { direct } else { self.ln_upper.exp() }
    }

    pub fn upper_holds(&self, count: u128) -> bool {
        let c = BigUint::from(count);
        &c * &c <= self.upper_sq
    }

    pub fn lower_holds(&self, count: u128) -> bool {
        let c = BigUint::from(count);
        self.lower_sq_times_64 <= BigUint::from(64u32) * &c * &c
    }

    pub fn record(&self, count: u128) -> CountRecord {
        CountRecord { q: self.q, m: self.m, count, lower: self.lower(), upper: self.upper() }
    }
}

/// JSON row `{q, m, count, lower, upper}`.
#[derive(Debug, Clone, Serialize, serde::Deserialize, PartialEq)]
pub struct CountRecord {
    pub q: usize,
    pub m: usize,
    pub count: u128,
    pub lower: f64,
    pub upper: f64,
}

fn m_factorial(m: usize) -> f64 {
    (2..=m).map(|k| k as f64).product()
}

fn ln_factorial(m: usize) -> f64 {
    (2..=m).map(|k| (k as f64).ln()).sum()
}

pub fn count_bounds(q: usize, m: usize) -> Result<CountBounds> {
    if q < 2 || m < 3 {
        return Err(Error::domain(format!("count bounds need q >= 2 and m >= 3, got ({q}, {m})")));
    }
    let m_fact: BigUint = (1..=m as u64).map(BigUint::from).product();
    let m_fact_q = m_fact.pow(q as u32);
    let upper_sq = &m_fact_q * BigUint::from(q as u64).pow((q * m) as u32);
    let lower_sq_times_64 = &m_fact_q * BigUint::from(2u32).pow(m as u32);
    let half_q = q as f64 / 2.0;
    Ok(CountBounds {
        q,
        m,
        ln_upper: half_q * ln_factorial(m) + m as f64 * half_q * (q as f64).ln(),
        ln_lower: half_q * ln_factorial(m) + m as f64 * 0.5 * 2f64.ln() - 8f64.ln(),
        upper_sq,
        lower_sq_times_64,
    })
}
