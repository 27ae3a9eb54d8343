use serde::Serialize;

use super::quadrature::{geometric_breaks, merge_breaks, Panels};
use crate::deviations::{Delta, DeviationParams};
use crate::diagrams::alpha;
use crate::kernels::{compute_k, SymmetricKernel};
use crate::{Error, Result};

/// `G_n^{(d)} = ∫_{[1/n,1]^d} W(t)² / (t_1² ⋯ t_d²) dt` for a standard
/// Brownian sheet `W`, centred and scaled to variance 2.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BrownianSheetModel {
    pub d: u32,
    pub n: u64,
    pub mean: f64,
    pub variance: f64,
    pub k_bound: f64,
    pub delta: f64,
}

impl BrownianSheetModel {
    pub fn new(d: u32, n: u64) -> Result<Self> {
        let (mean, variance) = sheet_moments(d, n)?;
        let p = sheet_deviation(d, n)?;
        Ok(Self { d, n, mean, variance, k_bound: p.k.unwrap(), delta: p.delta.value() })
    }
}

fn check(d: u32, n: u64) -> Result<()> {
    if d == 0 {
        return Err(Error::domain("sheet dimension must be >= 1"));
    }
    if n < 2 {
        return Err(Error::domain(format!("cutoff n must be >= 2, got {n}")));
    }
    Ok(())
}

/// One-dimensional factor `max(t, s, 1/n)^{-1} − 1`.
fn factor(t: f64, s: f64, n: f64) -> f64 {
    1.0 / t.max(s).max(1.0 / n) - 1.0
}

/// `h_n^{(d)}(t, s) = Π_i (max(t_i, s_i, 1/n)^{-1} − 1)`.
pub fn sheet_kernel_value(d: u32, n: u64, t: &[f64], s: &[f64]) -> Result<f64> {
    check(d, n)?;
    if t.len() != d as usize || s.len() != d as usize {
        return Err(Error::DimensionMismatch(d as usize, t.len().max(s.len())));
    }
    if t.iter().chain(s).any(|x| !(0.0..=1.0).contains(x)) {
        return Err(Error::domain("sheet coordinates must lie in [0, 1]"));
    }
    Ok(t.iter().zip(s).map(|(&a, &b)| factor(a, b, n as f64)).product())
}

/// Mean `(log n)^d` and variance `2 (2 log n − 2(1 − 1/n))^d` of `G_n^{(d)}`.
pub fn sheet_moments(d: u32, n: u64) -> Result<(f64, f64)> {
    check(d, n)?;
    let ln = (n as f64).ln();
    let v1 = 2.0 * ln - 2.0 * (1.0 - 1.0 / n as f64);
    Ok((ln.powi(d as i32), 2.0 * v1.powi(d as i32)))
}

/// `2 (120 / log n)^{d/2}`, an upper bound on `K_n`.
pub fn sheet_k_bound(d: u32, n: u64) -> Result<f64> {
    check(d, n)?;
    Ok(2.0 * (120.0 / (n as f64).ln()).powf(d as f64 / 2.0))
}

/// `q = 2` parameters with `Δ = (8√2)^{-1} (log n / 120)^{d/4}`.
pub fn sheet_deviation(d: u32, n: u64) -> Result<DeviationParams> {
    check(d, n)?;
    deviation_from_log(d, (n as f64).ln())
}

fn deviation_from_log(d: u32, ln_n: f64) -> Result<DeviationParams> {
    let k_bound = 2.0 * (120.0 / ln_n).powf(d as f64 / 2.0);
    let delta = (ln_n / 120.0).powf(d as f64 / 4.0) / (8.0 * 2f64.sqrt());
    Ok(DeviationParams { q: 2, gamma: 0.0, k: Some(k_bound), l: None, alpha: alpha(2)?, delta: Delta::Finite(delta) })
}

fn outer_breaks(n: f64, panels: usize) -> Vec<f64> {
    let mut b = vec![0.0];
    b.extend(geometric_breaks(1.0 / n, 1.0, panels));
    b
}

/// Graded breaks on `[lo, hi]` with `0 < 1/n ≤ lo`, panel count scaled to
/// the log-length of the interval.
fn graded(lo: f64, hi: f64, n: f64, panels: usize) -> Vec<f64> {
    if hi <= lo {
        return vec![lo];
    }
    let share = ((hi / lo).ln() / n.ln() * panels as f64).ceil().max(1.0) as usize;
    geometric_breaks(lo, hi, share)
}

/// `∫∫_{[0,1]^2} h_n^{(1)}(t, s)² dt ds`, by a tensor-product rule over the
/// triangles either side of the diagonal.
fn one_dim_norm_sq(n: f64, rule: &Panels, panels: usize) -> f64 {
    let inner = |t: f64| {
        let b = merge_breaks(0.0, t, &[1.0 / n]);
        rule.integrate(&b, |s| factor(t, s, n).powi(2))
    };
    2.0 * rule.integrate(&outer_breaks(n, panels), inner)
}

/// `2 ‖h_n^{(d)}‖²` by quadrature. The `d`-dimensional integrand is a
/// product of identical one-dimensional factors, so the tensor-product
/// rule over `[0,1]^{2d}` equals the `d`-th power of the one-dimensional
/// rule.
pub fn sheet_variance_quadrature(d: u32, n: u64, points: usize, panels: usize) -> Result<f64> {
    check(d, n)?;
    Ok(2.0 * one_dim_norm_sq(n as f64, &Panels::new(points), panels).powi(d as i32))
}

/// `∫_0^1 h(x, z) h(y, z) dz` in one dimension.
fn contraction_kernel(x: f64, y: f64, n: f64, rule: &Panels, panels: usize) -> f64 {
    let mut extra = graded(1.0 / n, 1.0, n, panels);
    extra.extend([x, y]);
    let b = merge_breaks(0.0, 1.0, &extra);
    rule.integrate(&b, |z| factor(x, z, n) * factor(y, z, n))
}

/// `K_n = 2 / Var(G_n^{(d)}) · ‖h_n^{(d)} ⊗_1 h_n^{(d)}‖` by nested
/// kink-aware quadrature.
pub fn sheet_k_quadrature(d: u32, n: u64, points: usize, panels: usize) -> Result<f64> {
    check(d, n)?;
    let nf = n as f64;
    let rule = Panels::new(points);
    let inner = |y: f64| {
        let mut b = vec![0.0];
        if y > 1.0 / nf {
            b.extend(graded(1.0 / nf, y, nf, panels));
        } else {
            b.push(y);
        }
        rule.integrate(&b, |x| contraction_kernel(x, y, nf, &rule, panels).powi(2))
    };
    let norm_sq = 2.0 * rule.integrate(&outer_breaks(nf, panels), inner);
    let (_, var) = sheet_moments(d, n)?;
    Ok(2.0 / var * norm_sq.powf(d as f64 / 2.0))
}

/// `K` of the projection of `h_n^{(1)}` onto indicator functions of
/// `cells + 1` intervals: `[0, 1/n]` and a geometric grid on `[1/n, 1]`.
pub fn sheet_k_discretized(n: u64, cells: usize, points: usize) -> Result<f64> {
    check(1, n)?;
    let nf = n as f64;
    let rule = Panels::new(points);
    let mut edges = vec![0.0];
    edges.extend(geometric_breaks(1.0 / nf, 1.0, cells.max(1)));
    let m = edges.len() - 1;
    let width: Vec<f64> = edges.windows(2).map(|w| w[1] - w[0]).collect();
    // on cell j the kernel depends only on the larger coordinate
    let phi = |u: f64| 1.0 / u.max(1.0 / nf) - 1.0;
    let col: Vec<f64> = edges.windows(2).map(|w| rule.integrate(w, phi)).collect();
    let diag: Vec<f64> = edges.windows(2).map(|w| 2.0 * rule.integrate(w, |s| phi(s) * (s - w[0]))).collect();
    let mut a = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in 0..m {
            let mass = match i.cmp(&j) {
                std::cmp::Ordering::Less => width[i] * col[j],
                std::cmp::Ordering::Greater => width[j] * col[i],
                std::cmp::Ordering::Equal => diag[i],
            };
            a[i][j] = mass / (width[i] * width[j]).sqrt();
        }
    }
    let h = SymmetricKernel::from_matrix(&a)?.normalize()?;
    compute_k(&h)
}
