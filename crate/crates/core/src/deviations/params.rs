use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::diagrams::alpha;
use crate::{Error, Result};

/// `Δ = (q^{3q/2} K^{α(q)})^{-1}`, which is unbounded when the contraction
/// norm vanishes (the sequence is then exactly Gaussian).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Delta {
    Finite(f64),
    Unbounded,
}

impl Delta {
    /// `f64::INFINITY` for the unbounded marker.
    pub fn value(&self) -> f64 {
        match self {
            Delta::Finite(d) => *d,
            Delta::Unbounded => f64::INFINITY,
        }
    }
}

fn delta_from(q: usize, x: f64) -> Result<Delta> {
    let a = alpha(q)?.to_f64().unwrap();
    if x == 0.0 {
        return Ok(Delta::Unbounded);
    }
    let qf = q as f64;
    Ok(Delta::Finite((-(1.5 * qf * qf.ln() + a * x.ln())).exp()))
}

pub fn delta_from_k(q: usize, k: f64) -> Result<Delta> {
    if !(0.0..=1.0).contains(&k) {
        return Err(Error::domain(format!("K must lie in [0, 1], got {k}")));
    }
    delta_from(q, k)
}

/// As [`delta_from_k`] with the fourth-cumulant proxy `L`, which may
/// exceed 1.
pub fn delta_from_l(q: usize, l: f64) -> Result<Delta> {
    if !(l.is_finite() && l >= 0.0) {
        return Err(Error::domain(format!("L must be finite and non-negative, got {l}")));
    }
    delta_from(q, l)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviationParams {
    pub q: usize,
    pub gamma: f64,
    /// `K`, or an upper bound on it for the worked models.
    pub k: Option<f64>,
    pub l: Option<f64>,
    #[serde(serialize_with = "ser_rational")]
    pub alpha: Rational64,
    pub delta: Delta,
}

fn ser_rational<S: serde::Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl DeviationParams {
    pub fn from_k(q: usize, k: f64) -> Result<Self> {
        Ok(Self { q, gamma: q as f64 / 2.0 - 1.0, k: Some(k), l: None, alpha: alpha(q)?, delta: delta_from_k(q, k)? })
    }

    /// Parameters from an upper bound on `K` that may exceed 1, as the
    /// worked models supply; `Δ` then follows the same formula.
    pub fn from_k_bound(q: usize, k_bound: f64) -> Result<Self> {
        Ok(Self { q, gamma: q as f64 / 2.0 - 1.0, k: Some(k_bound), l: None, alpha: alpha(q)?, delta: delta_from_l(q, k_bound)? })
    }

    /// Parameters driven by `L` alone.
    pub fn from_l(q: usize, l: f64) -> Result<Self> {
        Ok(Self { q, gamma: q as f64 / 2.0 - 1.0, k: None, l: Some(l), alpha: alpha(q)?, delta: delta_from_l(q, l)? })
    }

    /// Attaches `L` (from the fourth cumulant) without changing `Δ`.
    pub fn with_l(mut self, l: f64) -> Self {
        self.l = Some(l);
        self
    }

    /// `1 / (1 + 2γ)`, which equals `1 / (q − 1)`.
    pub fn window_exponent(&self) -> f64 {
        1.0 / (1.0 + 2.0 * self.gamma)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Growth {
    /// `coeff · n^exponent`.
    Power { coeff: f64, exponent: f64 },
    Tabulated,
}

/// Values of a positive sequence on a finite grid of indices `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleSequence {
    pub points: Vec<(f64, f64)>,
    pub growth: Growth,
}

impl ScaleSequence {
    pub fn power(coeff: f64, exponent: f64, grid: &[f64]) -> Result<Self> {
        Self::validate(Self {
            points: grid.iter().map(|&n| (n, coeff * n.powf(exponent))).collect(),
            growth: Growth::Power { coeff, exponent },
        })
    }

    pub fn tabulated(points: Vec<(f64, f64)>) -> Result<Self> {
        Self::validate(Self { points, growth: Growth::Tabulated })
    }

    fn validate(s: Self) -> Result<Self> {
        if s.points.iter().any(|&(n, v)| !(n > 0.0 && v > 0.0 && n.is_finite() && v.is_finite())) {
            return Err(Error::domain("scale sequences need positive finite indices and values"));
        }
        if s.points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::domain("scale sequence grid must be strictly increasing"));
        }
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `true` when the tail after some index is non-decreasing.
    pub fn eventually_increasing(&self) -> bool {
        let n = self.points.len();
        n < 2 || self.points[n - 2].1 <= self.points[n - 1].1
    }
}
