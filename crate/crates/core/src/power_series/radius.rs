use serde::{Serialize, Serializer};

use super::{is_unit_direction, representable_horizon, PowerSeries};
use crate::error::{Error, Result};
use crate::series::{estimator_registry, ratio_limsup, DEFAULT_ESTIMATOR};

/// A radius of convergence; `Infinite` serialises as the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Radius {
    Finite(f64),
    Infinite,
}

impl Radius {
    /// `1 / (scale * alpha)`, infinite for `alpha == 0`.
    pub fn from_alpha(alpha: f64, scale: f64) -> Radius {
        if alpha <= 0.0 {
            Radius::Infinite
        } else {
            Radius::Finite(1.0 / (scale * alpha))
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Radius::Finite(r) => r,
            Radius::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Radius::Infinite
    }
}

impl std::fmt::Display for Radius {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Radius::Finite(r) => write!(f, "{r}"),
            Radius::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Radius {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Radius::Finite(r) => s.serialize_f64(*r),
            Radius::Infinite => s.serialize_str("inf"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RadiusOptions {
    /// Use `m_theoretical` instead of `m_empirical` for the reported radii.
    pub use_theoretical_m: bool,
    /// Name of a registered limsup estimator.
    pub estimator: String,
}

impl Default for RadiusOptions {
    fn default() -> Self {
        Self {
            use_theoretical_m: false,
            estimator: DEFAULT_ESTIMATOR.to_string(),
        }
    }
}

/// Guaranteed radii from the root test and the two ratio-test variants.
///
/// `r_ratio_unit` needs every probed coefficient to be a unit and only
/// speaks about unit arguments. `r_ratio_real` needs nonzero real
/// coefficients. Both are `None` when their hypotheses fail on the probe.
#[derive(Debug, Clone, Serialize)]
pub struct RadiusReport {
    pub alpha_root: f64,
    pub alpha_ratio_real: Option<f64>,
    pub alpha_ratio_unit: Option<f64>,
    pub r_root: Radius,
    /// Root-test radius with `m_theoretical`, whichever constant is in use.
    pub r_root_theoretical: Radius,
    pub r_ratio_unit: Option<Radius>,
    pub r_ratio_real: Option<Radius>,
    pub m_used: f64,
    pub m_empirical: f64,
    pub m_theoretical: f64,
    pub probe: usize,
    /// Probe actually used by the ratio estimates; shorter than `probe` when
    /// coefficients approach double-precision underflow.
    pub ratio_probe: usize,
    pub real_coeffs: bool,
    pub unit_coeffs: bool,
    pub estimator: String,
}

pub fn estimate_radii(p: &PowerSeries, probe: usize) -> Result<RadiusReport> {
    estimate_radii_with(p, probe, &RadiusOptions::default())
}

pub fn estimate_radii_with(p: &PowerSeries, probe: usize, opts: &RadiusOptions) -> Result<RadiusReport> {
    if probe < 32 {
        return Err(Error::InvalidArgument(format!("probe must be at least 32, got {probe}")));
    }
    let estimator = estimator_registry()
        .get(&opts.estimator)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown limsup estimator `{}`", opts.estimator)))?;
    let alg = p.algebra();
    let (m_emp, m_th) = (alg.m_empirical(), alg.m_theoretical());
    let m = if opts.use_theoretical_m { m_th } else { m_emp };

    let coeffs: Vec<_> = (0..=probe).map(|n| p.coeff(n)).collect();
    if let Some(n) = coeffs.iter().position(|c| !c.is_finite()) {
        return Err(Error::NonFiniteTerm(n));
    }
    let norms: Vec<f64> = coeffs.iter().map(|c| c.norm()).collect();
    let alpha_root = estimator.alpha(&norms);

    let real_coeffs = p.real_coeffs();
    let unit_coeffs = p.unit_coeffs();
    // ratio estimates stop where coefficients approach underflow
    let ratio_probe = representable_horizon(&norms);
    let usable = ratio_probe >= 32;
    let tail_nonzero = usable && norms[ratio_probe / 4..=ratio_probe].iter().all(|&x| x > 0.0);

    let alpha_ratio_real =
        (real_coeffs && tail_nonzero).then(|| ratio_limsup(|n| norms[n + 1] / norms[n], ratio_probe));

    let alpha_ratio_unit = if unit_coeffs && usable {
        let mut q = vec![0.0; ratio_probe];
        for n in ratio_probe / 4..ratio_probe {
            if !is_unit_direction(&coeffs[n]) {
                return Err(Error::NotInvertible);
            }
            q[n] = (&coeffs[n + 1] * &coeffs[n].inverse()?).norm();
        }
        Some(ratio_limsup(|n| q[n], ratio_probe))
    } else {
        None
    };

    Ok(RadiusReport {
        alpha_root,
        alpha_ratio_real,
        alpha_ratio_unit,
        r_root: Radius::from_alpha(alpha_root, m),
        r_root_theoretical: Radius::from_alpha(alpha_root, m_th),
        r_ratio_unit: alpha_ratio_unit.map(|a| Radius::from_alpha(a, m * m)),
        r_ratio_real: alpha_ratio_real.map(|a| Radius::from_alpha(a, m)),
        m_used: m,
        m_empirical: m_emp,
        m_theoretical: m_th,
        probe,
        ratio_probe,
        real_coeffs,
        unit_coeffs,
        estimator: opts.estimator.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{preset, Element};
    use crate::power_series::inv_factorial;

    #[test]
    fn band_series_root_radius() {
        let h = preset("hyperbolic").unwrap();
        let band = PowerSeries::scaled(&Element::new(&h, vec![1.0, 1.0]).unwrap(), |_| 1.0);
        let r = estimate_radii(&band, 200).unwrap();
        assert!((r.alpha_root - 1.0).abs() < 1e-12);
        assert!((r.r_root.value() - 0.5f64.sqrt()).abs() < 1e-6);
        assert!(r.r_ratio_unit.is_none() && r.r_ratio_real.is_none());
    }

    #[test]
    fn exp_radii_are_infinite() {
        for name in ["hyperbolic", "complex", "H_N:3"] {
            let a = preset(name).unwrap();
            let r = estimate_radii(&PowerSeries::real(&a, inv_factorial), 200).unwrap();
            assert_eq!(r.r_root, Radius::Infinite, "{name}");
            assert_eq!(r.r_ratio_real, Some(Radius::Infinite));
            assert_eq!(r.r_ratio_unit, Some(Radius::Infinite));
        }
    }

    #[test]
    fn theoretical_m_option_and_estimator_lookup() {
        let h = preset("hyperbolic").unwrap();
        let g = PowerSeries::real(&h, |_| 1.0);
        let opts = RadiusOptions {
            use_theoretical_m: true,
            ..Default::default()
        };
        let r = estimate_radii_with(&g, 64, &opts).unwrap();
        assert_eq!(r.m_used, h.m_theoretical());
        assert!((r.r_root.value() - 1.0 / (3.0 * 2f64.sqrt())).abs() < 1e-12);
        let bad = RadiusOptions {
            estimator: "nope".into(),
            ..Default::default()
        };
        assert!(estimate_radii_with(&g, 64, &bad).is_err());
        assert!(estimate_radii(&g, 8).is_err());
    }

    #[test]
    fn radius_serialises_infinity_as_string() {
        assert_eq!(serde_json::to_string(&Radius::Infinite).unwrap(), "\"inf\"");
        assert_eq!(serde_json::to_string(&Radius::Finite(0.5)).unwrap(), "0.5");
    }
}
