//! Power series `sum c_n (z - z0)^n` over an algebra.

mod builtins;
mod ops;
mod radius;
mod region;

use std::sync::{Arc, OnceLock};

use crate::algebra::{Algebra, Classification, Element};
use crate::error::{Error, Result};
use crate::series::{sum, SumResult, TermStream, DEFAULT_WINDOW};

pub use builtins::{builtin_registry, builtin_series, inv_factorial, SeriesBuiltin};
pub(crate) use ops::majorant_cutoff;
pub use ops::{entire_extension, geometric, geometric_series, product_series, uniform_tail_bound, GeometricEval};
pub use radius::{estimate_radii, estimate_radii_with, Radius, RadiusOptions, RadiusReport};
pub use region::{region_scan, Grid, RegionScan, Slice};

/// Number of leading coefficients inspected when certifying the
/// `real_coeffs` / `unit_coeffs` flags, and the default radius probe.
pub const DEFAULT_PROBE: usize = 200;

/// Coefficient norms below this are treated as the edge of what double
/// precision can resolve (ratios of such numbers lose all accuracy soon after).
const UNDERFLOW_EDGE: f64 = 1e-250;

/// Last index before the first nonzero norm below [`UNDERFLOW_EDGE`]
/// (the whole slice if there is none). Ratio estimates and the unit flag
/// stop here: `1/n!`, for instance, reaches zero in `f64` near `n = 178`
/// although no coefficient is zero.
pub(crate) fn representable_horizon(norms: &[f64]) -> usize {
    norms
        .iter()
        .position(|&x| x > 0.0 && x < UNDERFLOW_EDGE)
        .map_or(norms.len() - 1, |k| k.saturating_sub(1))
}

/// Whether `c / |c|` is a unit.
pub(crate) fn is_unit_direction(c: &Element) -> bool {
    let n = c.norm();
    n > 0.0 && n.is_finite() && c.scale(1.0 / n).classify() == Classification::Unit
}

type ScaleFn = Arc<dyn Fn(usize) -> f64 + Send + Sync>;
type CoeffFn = Arc<dyn Fn(usize) -> Element + Send + Sync>;

#[derive(Clone)]
pub enum Coefficients {
    /// `c_n = scale(n) * base`.
    Scaled { base: Element, scale: ScaleFn },
    General(CoeffFn),
}

#[derive(Clone)]
pub struct PowerSeries {
    algebra: Algebra,
    center: Element,
    coeffs: Coefficients,
    flags: OnceLock<(bool, bool)>,
    warnings: Vec<String>,
}

impl std::fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PowerSeries")
            .field("center", &self.center)
            .field("c0", &self.coeff(0))
            .finish_non_exhaustive()
    }
}

impl PowerSeries {
    /// Real coefficients `c_n = a(n) * 1`, centred at 0.
    pub fn real(algebra: &Algebra, a: impl Fn(usize) -> f64 + Send + Sync + 'static) -> Self {
        Self::scaled(&Element::one(algebra), a)
    }

    /// Coefficients `c_n = a(n) * base`, centred at 0.
    pub fn scaled(base: &Element, a: impl Fn(usize) -> f64 + Send + Sync + 'static) -> Self {
        Self::from_coeffs(
            base.algebra(),
            Coefficients::Scaled {
                base: base.clone(),
                scale: Arc::new(a),
            },
        )
    }

    /// Arbitrary coefficients, centred at 0. `c` must return elements of `algebra`.
    pub fn general(algebra: &Algebra, c: impl Fn(usize) -> Element + Send + Sync + 'static) -> Self {
        Self::from_coeffs(algebra, Coefficients::General(Arc::new(c)))
    }

    fn from_coeffs(algebra: &Algebra, coeffs: Coefficients) -> Self {
        Self {
            algebra: algebra.clone(),
            center: Element::zero(algebra),
            coeffs,
            flags: OnceLock::new(),
            warnings: Vec::new(),
        }
    }

    pub fn centered_at(mut self, center: &Element) -> Result<Self> {
        if !center.belongs_to(&self.algebra) {
            return Err(Error::AlgebraMismatch);
        }
        self.center = center.clone();
        Ok(self)
    }

    pub(crate) fn with_warning(mut self, w: String) -> Self {
        self.warnings.push(w);
        self
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn center(&self) -> &Element {
        &self.center
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.coeffs
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn coeff(&self, n: usize) -> Element {
        match &self.coeffs {
            Coefficients::Scaled { base, scale } => base.scale(scale(n)),
            Coefficients::General(c) => c(n),
        }
    }

    fn flags(&self) -> (bool, bool) {
        *self.flags.get_or_init(|| {
            let coeffs: Vec<Element> = (0..=DEFAULT_PROBE).map(|n| self.coeff(n)).collect();
            let norms: Vec<f64> = coeffs.iter().map(Element::norm).collect();
            let horizon = representable_horizon(&norms);
            let real = coeffs.iter().all(|c| c.as_real(1e-12 * c.norm().max(1.0)).is_some());
            // leading zeros only shift the series by a power of z
            let first = norms.iter().position(|&x| x > 0.0).unwrap_or(horizon + 1);
            let unit = first <= horizon
                && match &self.coeffs {
                    Coefficients::Scaled { base, .. } => {
                        is_unit_direction(base) && norms[first..=horizon].iter().all(|&x| x > 0.0 && x.is_finite())
                    }
                    Coefficients::General(_) => coeffs[first..=horizon].iter().all(is_unit_direction),
                };
            (real, unit)
        })
    }

    /// Every probed coefficient is a real multiple of unity.
    pub fn real_coeffs(&self) -> bool {
        self.flags().0
    }

    /// Every probed coefficient after any leading zeros is invertible.
    pub fn unit_coeffs(&self) -> bool {
        self.flags().1
    }

    /// The term stream `c_n * (z - center)^n`.
    ///
    /// Powers are built by iterated multiplication. For `Scaled` series the
    /// running product `base * w^n` is carried instead of `w^n`.
    pub fn terms_at(&self, z: &Element) -> Result<TermStream> {
        let w = z.checked_sub(&self.center)?;
        let alg = &self.algebra;
        let stream = match &self.coeffs {
            Coefficients::Scaled { base, scale } => {
                let scale = scale.clone();
                TermStream::recurrence(
                    alg,
                    base.clone(),
                    move |_, b: &Element| b * &w,
                    move |n, b| b.scale(scale(n)),
                    Element::is_exact_zero,
                )
            }
            Coefficients::General(c) => {
                let c = c.clone();
                TermStream::recurrence(
                    alg,
                    Element::one(alg),
                    move |_, p: &Element| p * &w,
                    move |n, p| &c(n) * p,
                    Element::is_exact_zero,
                )
            }
        };
        Ok(stream)
    }

    pub fn eval(&self, z: &Element, tol: f64) -> Result<SumResult> {
        sum(&self.terms_at(z)?, tol, DEFAULT_WINDOW)
    }

    /// Same coefficients about a new centre.
    pub fn shift_center(&self, new_center: &Element) -> Result<PowerSeries> {
        let mut p = self.clone();
        p = p.centered_at(new_center)?;
        Ok(p)
    }

    /// The k-th term-wise derivative: `c'_n = (n+1)...(n+k) c_{n+k}`.
    pub fn derivative_series(&self, k: usize) -> Result<PowerSeries> {
        if k == 0 {
            return Err(Error::InvalidArgument("derivative order must be at least 1".into()));
        }
        let ff = move |n: usize| ((n + 1)..=(n + k)).map(|i| i as f64).product::<f64>();
        let coeffs = match &self.coeffs {
            Coefficients::Scaled { base, scale } => {
                let scale = scale.clone();
                Coefficients::Scaled {
                    base: base.clone(),
                    scale: Arc::new(move |n| ff(n) * scale(n + k)),
                }
            }
            Coefficients::General(c) => {
                let c = c.clone();
                Coefficients::General(Arc::new(move |n| c(n + k).scale(ff(n))))
            }
        };
        let mut p = Self::from_coeffs(&self.algebra, coeffs);
        p.center = self.center.clone();
        Ok(p)
    }
}
