use serde::Serialize;

use super::params::ScaleSequence;
use crate::{Error, Result};

/// Slope differences within this band are treated as ties.
pub const SLOPE_DEAD_BAND: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MdpClass {
    /// `a_n / Δ_n^{1/(q−1)}` trends to zero on the grid.
    MdpWindow,
    /// `a_n` outgrows `n^{1/(2q−2)}` on the grid.
    NoMdpWindow,
    /// Neither trend is resolved.
    Indeterminate,
}

/// Trend evidence from log-log slopes; never a statement about limits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MdpVerdict {
    pub class: MdpClass,
    pub slope_a: f64,
    /// Slope of `Δ_n^{1/(q−1)}`.
    pub slope_window: f64,
    /// Exponent above which the grid counts as outside any MDP scale.
    pub no_mdp_exponent: f64,
}

fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Classifies the scale `a_n` against the window set by `Δ_n`.
///
/// `no_mdp_exponent` defaults to `1/(2q−2)`, the exponent beyond which
/// Hermite-sum sequences are known to lose the moderate deviation
/// principle.
pub fn mdp_scale_check(a: &ScaleSequence, delta: &ScaleSequence, q: usize, no_mdp_exponent: Option<f64>) -> Result<MdpVerdict> {
    if q < 2 {
        return Err(Error::domain("q must be >= 2"));
    }
    if a.len() < 4 || delta.len() < 4 {
        return Err(Error::InsufficientSamples { needed: 4, got: a.len().min(delta.len()) });
    }
    if a.points.iter().map(|p| p.0).ne(delta.points.iter().map(|p| p.0)) {
        return Err(Error::domain("scale and Δ sequences must share the index grid"));
    }
    let slope_a = log_log_slope(&a.points);
    let slope_window = log_log_slope(&delta.points) / (q as f64 - 1.0);
    let no_mdp = no_mdp_exponent.unwrap_or(1.0 / (2.0 * q as f64 - 2.0));
    let class = if slope_a - slope_window < -SLOPE_DEAD_BAND {
        MdpClass::MdpWindow
    } else if slope_a - no_mdp > SLOPE_DEAD_BAND {
        MdpClass::NoMdpWindow
    } else {
        MdpClass::Indeterminate
    };
    Ok(MdpVerdict { class, slope_a, slope_window, no_mdp_exponent: no_mdp })
}
