use crate::{Error, Result};

/// Highest degree evaluated; the recurrence loses relative accuracy beyond.
pub const HERMITE_MAX_DEGREE: usize = 30;

/// Probabilists' Hermite polynomial `H_k(x)` by the three-term recurrence.
pub fn hermite(k: usize, x: f64) -> Result<f64> {
    if k > HERMITE_MAX_DEGREE {
        return Err(Error::CapExceeded { what: "Hermite degree", requested: k as u128, cap: HERMITE_MAX_DEGREE as u128 });
    }
    let mut out = [0.0; HERMITE_MAX_DEGREE + 1];
    fill_table(x, &mut out[..=k]);
    Ok(out[k])
}

/// Writes `H_0(x), …, H_{len−1}(x)` into `out`.
pub(crate) fn fill_table(x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() > 1 {
        out[1] = x;
    }
    for k in 1..out.len().saturating_sub(1) {
        out[k + 1] = x * out[k] - k as f64 * out[k - 1];
    }
}
