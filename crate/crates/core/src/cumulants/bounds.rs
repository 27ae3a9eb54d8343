use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::diagram::{diagram_value, CumulantOptions};
use crate::diagrams::{alpha, count_partitions, diagram_classes, matching_lower_bound, matching_number, GroupedIndexSet};
use crate::kernels::{compute_k, SymmetricKernel};
use crate::{Error, Real, Result};

/// A positive quantity carried as its natural log so that factorial-sized
/// bounds do not overflow.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogValue {
    pub ln: f64,
}

impl LogValue {
    pub fn value(&self) -> f64 {
        self.ln.exp()
    }

    /// `true` when `x ≤ self` up to a relative slack.
    pub fn dominates(&self, x: f64, rel_tol: f64) -> bool {
        let x = x.abs();
        x == 0.0 || x.ln() <= self.ln + rel_tol.ln_1p()
    }
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

fn check_k(k: f64) -> Result<()> {
    if !(k.is_finite() && k >= 0.0) {
        return Err(Error::domain(format!("K must be finite and non-negative, got {k}")));
    }
    Ok(())
}

/// `(m!)^{q/2} (q^{3q/2})^{m−2} K^{α(m−2)}`.
pub fn cumulant_bound(q: usize, m: usize, k: f64) -> Result<LogValue> {
    if m < 2 {
        return Err(Error::domain("aggregate bound needs m >= 2"));
    }
    check_k(k)?;
    let a = alpha(q)?.to_f64().unwrap();
    let qf = q as f64;
    let mm = (m - 2) as f64;
    let k_term = if mm == 0.0 { 0.0 } else { a * mm * k.ln() };
    Ok(LogValue { ln: 0.5 * qf * ln_factorial(m) + mm * 1.5 * qf * qf.ln() + k_term })
}

/// The middle link `|Π(q[m])| · K^{L(q,m)}`.
pub fn term_chain_bound(q: usize, m: usize, k: f64) -> Result<LogValue> {
    check_k(k)?;
    let count = count_partitions(q, m)?;
    if count == 0 {
        return Ok(LogValue { ln: f64::NEG_INFINITY });
    }
    let l = matching_lower_bound(q, m)? as f64;
    let k_term = if l == 0.0 { 0.0 } else { l * k.ln() };
    Ok(LogValue { ln: (count as f64).ln() + k_term })
}

/// Outcome of checking one diagram class against `K^{L(q,m)}`.
#[derive(Debug, Clone, Serialize)]
pub struct TermCheck {
    /// A partition realising the class, e.g. `(1,4)(2,5)(3,6)`.
    pub representative: String,
    /// Number of partitions sharing this class's term.
    pub count: u128,
    pub matching_number: usize,
    pub term: f64,
    pub bound: f64,
    pub within: bool,
}

/// Checks `|M_σ(h)| ≤ K^{L(q,m)}` for every `σ ∈ Π(q[m])`, one entry per
/// diagram class (all partitions in a class have the same term).
/// `h` must be normalised.
pub fn per_term_bound_check<T: Real>(h: &SymmetricKernel<T>, m: usize, opts: &CumulantOptions) -> Result<Vec<TermCheck>> {
    if !h.is_normalized(T::from_f64(1e-9).unwrap()) {
        return Err(Error::domain("per-term check needs a normalised kernel"));
    }
    let q = h.order();
    let k = compute_k(h)?.to_f64_lossy();
    let l = matching_lower_bound(q, m)?;
    let bound = k.powi(l as i32);
    let classes = diagram_classes(&GroupedIndexSet::uniform(q, m)?)?;
    classes
        .iter()
        .map(|c| {
            let term = diagram_value(h, &c.graph, opts)?.to_f64_lossy();
            Ok(TermCheck {
                representative: c.representative.to_string(),
                count: c.count,
                matching_number: matching_number(&c.graph),
                term,
                bound,
                within: term.abs() <= bound * (1.0 + 1e-9) + 1e-12,
            })
        })
        .collect()
}

/// `L_n = (q · q!)^{-1} √cum_4`.
///
/// The fourth cumulant of a chaos element is non-negative; values in
/// `[-1e-9, 0)` are treated as round-off and clamped to zero.
pub fn l_from_cum4(q: usize, cum4: f64) -> Result<f64> {
    if q < 2 {
        return Err(Error::domain("L_n is defined for q >= 2"));
    }
    let c = if cum4 < 0.0 {
        if cum4 < -1e-9 || cum4.is_nan() {
            return Err(Error::domain(format!("fourth cumulant {cum4} is negative")));
        }
        log::warn!("clamping fourth cumulant {cum4} to 0");
        0.0
    } else {
        cum4
    };
    let qfact: f64 = (1..=q).map(|k| k as f64).product();
    Ok(c.sqrt() / (q as f64 * qfact))
}
