use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

/// Composite Gauss–Legendre rule applied panel by panel.
///
/// The integrands here have kinks along `max` boundaries; placing panel
/// breaks on those kinks keeps each panel smooth.
#[derive(Debug, Clone)]
pub struct Panels {
    rule: GaussLegendre,
}

impl Panels {
    pub fn new(points: usize) -> Self {
        Self { rule: GaussLegendre::new(NonZeroUsize::new(points.max(1)).unwrap()) }
    }

    /// `∫ f` over `[breaks[0], breaks[last]]`, one rule per panel. Breaks
    /// must be sorted; empty panels are skipped.
    pub fn integrate(&self, breaks: &[f64], mut f: impl FnMut(f64) -> f64) -> f64 {
        breaks.windows(2).filter(|w| w[1] > w[0]).map(|w| self.rule.integrate(w[0], w[1], &mut f)).sum()
    }
}

/// `count` geometrically spaced panels on `[a, b]` with `0 < a < b`.
pub(crate) fn geometric_breaks(a: f64, b: f64, count: usize) -> Vec<f64> {
    let ratio = (b / a).ln() / count as f64;
    let mut v: Vec<f64> = (0..=count).map(|k| a * (ratio * k as f64).exp()).collect();
    v[0] = a;
    v[count] = b;
    v
}

/// Sorted, deduplicated union of break points clipped to `[lo, hi]`.
pub(crate) fn merge_breaks(lo: f64, hi: f64, extra: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = extra.iter().copied().filter(|&x| x > lo && x < hi).collect();
    v.push(lo);
    v.push(hi);
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_kinked_function() {
        let p = Panels::new(8);
        let got = p.integrate(&[0.0, 0.3, 1.0], |x| (x - 0.3).abs());
        assert!((got - (0.045 + 0.245)).abs() < 1e-14);
        let got = p.integrate(&geometric_breaks(1e-3, 1.0, 30), |x| 1.0 / x);
        assert!((got - 1e3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn merged_breaks_sorted() {
        assert_eq!(merge_breaks(0.0, 1.0, &[0.5, 0.2, 0.5, 1.5]), vec![0.0, 0.2, 0.5, 1.0]);
    }
}
