//! Estimators for `limsup |a_n|^{1/n}` from a finite prefix of term norms.

use std::sync::OnceLock;

use crate::registry::Registry;

pub const DEFAULT_ESTIMATOR: &str = "envelope-slope";

/// An estimate that shrinks below this fraction of the estimate from half
/// the probe is read as tending to zero.
const VANISHING_RATIO: f64 = 0.75;
/// Smallest probe on which the half-probe comparison is attempted.
const MIN_HALF_PROBE: usize = 16;

pub trait LimsupEstimator: Send + Sync {
    fn describe(&self) -> &'static str;

    /// Raw estimate from `norms[n] = |a_n|`, `n = 0..=P`.
    fn raw(&self, norms: &[f64]) -> f64;

    /// Estimate with the vanishing rule applied: if halving the probe makes
    /// the estimate grow noticeably, the sequence is taken to have limsup 0.
    fn alpha(&self, norms: &[f64]) -> f64 {
        let full = self.raw(norms);
        let p = norms.len().saturating_sub(1);
        if p / 2 >= MIN_HALF_PROBE {
            let half = self.raw(&norms[..=p / 2]);
            return vanishing_adjust(full, half);
        }
        full
    }
}

pub(crate) fn vanishing_adjust(full: f64, half: f64) -> f64 {
    if full < VANISHING_RATIO * half {
        0.0
    } else {
        full
    }
}

/// `max |a_n|^{1/n}` over the trailing half of the probe.
pub struct TrailingMax;

impl LimsupEstimator for TrailingMax {
    fn describe(&self) -> &'static str {
        "maximum n-th root over the trailing half of the probe"
    }

    fn raw(&self, norms: &[f64]) -> f64 {
        let p = norms.len().saturating_sub(1);
        (p.div_ceil(2).max(1)..=p)
            .map(|n| norms[n].powf(1.0 / n as f64))
            .fold(0.0, f64::max)
    }
}

/// Growth rate of the upper envelope of `log |a_n|`.
///
/// Takes the largest `log |a_n|` in `[P/2, 3P/4)` and in `[3P/4, P]` and
/// returns `exp` of the slope between the two maxima. The n-th root form
/// carries an `O(log n / n)` bias from polynomial factors (e.g. `3^n / n`
/// reads as `3 * 0.974` at `P = 200`); the slope cancels most of it.
pub struct EnvelopeSlope;

impl LimsupEstimator for EnvelopeSlope {
    fn describe(&self) -> &'static str {
        "exp of the slope between upper-envelope maxima of log|a_n| on the trailing half"
    }

    fn raw(&self, norms: &[f64]) -> f64 {
        let p = norms.len().saturating_sub(1);
        let (lo, mid) = (p / 2, 3 * p / 4);
        let peak = |range: std::ops::Range<usize>| {
            range
                .filter(|&n| norms[n] > 0.0)
                .map(|n| (n, norms[n].ln()))
                .max_by(|a, b| a.1.total_cmp(&b.1))
        };
        match (peak(lo.max(1)..mid), peak(mid..p + 1)) {
            (_, None) => 0.0,
            (Some((n1, m1)), Some((n2, m2))) if n1 != n2 => ((m2 - m1) / (n2 as f64 - n1 as f64)).exp(),
            _ => TrailingMax.raw(norms),
        }
    }
}

fn build_registry() -> Registry<dyn LimsupEstimator> {
    let mut r: Registry<dyn LimsupEstimator> = Registry::new();
    r.register("trailing-max", Box::new(TrailingMax))
        .register("envelope-slope", Box::new(EnvelopeSlope));
    r
}

pub fn estimator_registry() -> &'static Registry<dyn LimsupEstimator> {
    static REG: OnceLock<Registry<dyn LimsupEstimator>> = OnceLock::new();
    REG.get_or_init(build_registry)
}

pub fn default_estimator() -> &'static dyn LimsupEstimator {
    estimator_registry()
        .get(DEFAULT_ESTIMATOR)
        .expect("default estimator registered")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn norms(f: impl Fn(usize) -> f64, p: usize) -> Vec<f64> {
        (0..=p).map(f).collect()
    }

    #[test]
    fn pure_geometric_is_exact_for_both() {
        let v = norms(|n| 2f64.powi(n as i32), 64);
        assert!((TrailingMax.alpha(&v) - 2.0).abs() < 1e-12);
        assert!((EnvelopeSlope.alpha(&v) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn polynomial_factor_bias() {
        let v = norms(|n| if n == 0 { 0.0 } else { 3f64.powi(n as i32) / n as f64 }, 200);
        let slope = EnvelopeSlope.alpha(&v);
        let trail = TrailingMax.alpha(&v);
        assert!((slope - 3.0).abs() / 3.0 < 0.01, "{slope}");
        assert!(trail < slope);
    }

    #[test]
    fn factorial_decay_vanishes() {
        let mut f = vec![1.0];
        for n in 1..=200 {
            let last: f64 = f[n - 1];
            f.push(last / n as f64);
        }
        assert_eq!(EnvelopeSlope.alpha(&f), 0.0);
        assert_eq!(TrailingMax.alpha(&f), 0.0);
    }

    #[test]
    fn eventually_zero_terms() {
        let v = norms(|n| if n < 3 { 1.0 } else { 0.0 }, 64);
        assert_eq!(EnvelopeSlope.alpha(&v), 0.0);
        assert_eq!(TrailingMax.alpha(&v), 0.0);
    }

    #[test]
    fn constant_terms() {
        let v = norms(|_| 1.0, 64);
        assert_eq!(EnvelopeSlope.alpha(&v), 1.0);
        assert_eq!(TrailingMax.alpha(&v), 1.0);
    }

    #[test]
    fn interleaved_zeros() {
        let v = norms(|n| if n % 2 == 1 { 0.5f64.powi(n as i32) } else { 0.0 }, 100);
        assert!((EnvelopeSlope.alpha(&v) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn registry_has_both() {
        let names: Vec<_> = estimator_registry().names().collect();
        assert_eq!(names, ["envelope-slope", "trailing-max"]);
        assert!(default_estimator().describe().contains("slope"));
    }
}
