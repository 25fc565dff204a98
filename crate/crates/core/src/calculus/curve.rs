use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use super::AFunction;
use crate::algebra::{Algebra, Element};
use crate::error::{Error, Result};

type PathFn = Arc<dyn Fn(f64) -> Element + Send + Sync>;

const CONTINUITY_SAMPLES: usize = 256;
const MAX_PANELS: usize = 1 << 14;
const REFINE_TOL: f64 = 1e-10;

/// A piecewise-smooth parametrised curve `[t0, t1] -> A`.
///
/// Breakpoints mark the joins between smooth pieces; quadrature panels
/// never straddle one.
#[derive(Clone)]
pub struct Curve {
    algebra: Algebra,
    path: PathFn,
    velocity: PathFn,
    breaks: Vec<f64>,
}

impl std::fmt::Debug for Curve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Curve")
            .field("start", &self.start())
            .field("end", &self.end())
            .field("breaks", &self.breaks)
            .finish()
    }
}

impl Curve {
    /// A curve from a parametrisation and an optional analytic derivative
    /// (central differences otherwise). Continuity is checked on a sample.
    pub fn new(
        algebra: &Algebra,
        t0: f64,
        t1: f64,
        path: impl Fn(f64) -> Element + Send + Sync + 'static,
        velocity: Option<PathFn>,
    ) -> Result<Curve> {
        if !t0.is_finite() || !t1.is_finite() || t0 >= t1 {
            return Err(Error::BadCurve(format!("need finite t0 < t1, got [{t0}, {t1}]")));
        }
        let path: PathFn = Arc::new(path);
        let velocity = velocity.unwrap_or_else(|| {
            let p = path.clone();
            Arc::new(move |t: f64| {
                let h = f64::EPSILON.cbrt() * t.abs().max(1.0);
                (&p(t + h) - &p(t - h)).scale(0.5 / h)
            })
        });
        let c = Curve {
            algebra: algebra.clone(),
            path,
            velocity,
            breaks: vec![t0, t1],
        };
        c.check_continuity()?;
        Ok(c)
    }

    /// Straight segment from `a` to `b`, `t in [0, 1]`.
    pub fn segment(a: &Element, b: &Element) -> Result<Curve> {
        let d = b.checked_sub(a)?;
        let (a0, d0) = (a.clone(), d.clone());
        Curve::new(a.algebra(), 0.0, 1.0, move |t| &a0 + &d0.scale(t), Some(Arc::new(move |_| d.clone())))
    }

    /// Positively oriented circle `center + r (cos t v_a + sin t v_b)`,
    /// `t in [0, 2 pi]`, in the coordinate plane of basis vectors `a`, `b`.
    pub fn circle(center: &Element, r: f64, a: usize, b: usize) -> Result<Curve> {
        let alg = center.algebra().clone();
        if a >= alg.dim() || b >= alg.dim() || a == b {
            return Err(Error::BadCurve(format!("invalid coordinate plane ({a}, {b})")));
        }
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::BadCurve(format!("radius must be positive, got {r}")));
        }
        let (va, vb) = (Element::basis(&alg, a), Element::basis(&alg, b));
        let (va2, vb2) = (va.clone(), vb.clone());
        let c0 = center.clone();
        Curve::new(
            &alg,
            0.0,
            2.0 * PI,
            move |t| &(&c0 + &va.scale(r * t.cos())) + &vb.scale(r * t.sin()),
            Some(Arc::new(move |t| &va2.scale(-r * t.sin()) + &vb2.scale(r * t.cos()))),
        )
    }

    /// Polyline through `vertices`; `closed` adds the edge back to the start.
    pub fn polygon(vertices: &[Element], closed: bool) -> Result<Curve> {
        if vertices.len() < 2 {
            return Err(Error::BadCurve("a polygon needs at least two vertices".into()));
        }
        let mut pts = vertices.to_vec();
        if closed {
            pts.push(vertices[0].clone());
        }
        let mut curve = Curve::segment(&pts[0], &pts[1])?;
        for w in pts[1..].windows(2) {
            curve = curve.concat(&Curve::segment(&w[0], &w[1])?)?;
        }
        Ok(curve)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn t0(&self) -> f64 {
        self.breaks[0]
    }

    pub fn t1(&self) -> f64 {
        *self.breaks.last().expect("curve has breakpoints")
    }

    pub fn point(&self, t: f64) -> Element {
        (self.path)(t)
    }

    pub fn velocity(&self, t: f64) -> Element {
        (self.velocity)(t)
    }

    pub fn start(&self) -> Element {
        self.point(self.t0())
    }

    pub fn end(&self) -> Element {
        self.point(self.t1())
    }

    /// Start and end agree within `1e-12 * (1 + |start|)`.
    pub fn is_closed(&self) -> bool {
        let s = self.start();
        s.distance(&self.end()) <= 1e-12 * (1.0 + s.norm())
    }

    /// The same trace traversed backwards over the same parameter interval.
    pub fn reversed(&self) -> Curve {
        let (t0, t1) = (self.t0(), self.t1());
        let (p, v) = (self.path.clone(), self.velocity.clone());
        Curve {
            algebra: self.algebra.clone(),
            path: Arc::new(move |t| p(t0 + t1 - t)),
            velocity: Arc::new(move |t| -v(t0 + t1 - t)),
            breaks: self.breaks.iter().rev().map(|b| t0 + t1 - b).collect(),
        }
    }

    /// `self` followed by `other`, whose parameter is shifted to start at
    /// `self.t1()`. The end of `self` must meet the start of `other`.
    pub fn concat(&self, other: &Curve) -> Result<Curve> {
        if !self.start().same_algebra(&other.start()) {
            return Err(Error::AlgebraMismatch);
        }
        let (e, s) = (self.end(), other.start());
        if e.distance(&s) > 1e-9 * (1.0 + e.norm()) {
            return Err(Error::BadCurve(format!("curves do not join: {e} vs {s}")));
        }
        let mid = self.t1();
        let shift = other.t0() - mid;
        let (p1, v1, p2, v2) = (self.path.clone(), self.velocity.clone(), other.path.clone(), other.velocity.clone());
        let mut breaks = self.breaks.clone();
        breaks.extend(other.breaks[1..].iter().map(|b| b - shift));
        Ok(Curve {
            algebra: self.algebra.clone(),
            path: Arc::new(move |t| if t <= mid { p1(t) } else { p2(t + shift) }),
            velocity: Arc::new(move |t| if t <= mid { v1(t) } else { v2(t + shift) }),
            breaks,
        })
    }

    fn check_continuity(&self) -> Result<()> {
        let (t0, t1) = (self.t0(), self.t1());
        let dt = (t1 - t0) / CONTINUITY_SAMPLES as f64;
        let mut prev = self.point(t0);
        let mut prev_speed = self.velocity(t0).norm();
        for i in 1..=CONTINUITY_SAMPLES {
            let t = t0 + dt * i as f64;
            let (p, speed) = (self.point(t), self.velocity(t).norm());
            if !p.belongs_to(&self.algebra) {
                return Err(Error::BadCurve("parametrisation leaves the algebra".into()));
            }
            if !p.is_finite() || !speed.is_finite() {
                return Err(Error::BadCurve(format!("non-finite point at t = {t}")));
            }
            let allowed = 4.0 * prev_speed.max(speed) * dt + 1e-9 * (1.0 + p.norm());
            if p.distance(&prev) > allowed {
                return Err(Error::BadCurve(format!("jump near t = {t}")));
            }
            prev = p;
            prev_speed = speed;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveIntegral {
    pub value: Element,
    pub panels: usize,
    /// Successive panel doublings agreed within tolerance before the cap.
    pub converged: bool,
    /// Largest `|f|` over the quadrature nodes.
    pub max_norm: f64,
    pub length: f64,
    /// `m_empirical * max_norm * length`.
    pub ml_bound: f64,
}

const GL_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_08,
    0.478_628_670_499_366_47,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_47,
    0.236_926_885_056_189_08,
];

struct Pass {
    value: Vec<f64>,
    max_norm: f64,
    length: f64,
}

fn gauss_pass(f: &AFunction, c: &Curve, per_piece: usize) -> Result<Pass> {
    let n = c.algebra.dim();
    let mut value = vec![0.0; n];
    let (mut max_norm, mut length) = (0.0f64, 0.0);
    for piece in c.breaks.windows(2) {
        // reversed curves have descending breakpoints
        let (a, b) = (piece[0].min(piece[1]), piece[0].max(piece[1]));
        let h = (b - a) / per_piece as f64;
        for k in 0..per_piece {
            let mid = a + h * (k as f64 + 0.5);
            for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
                let t = mid + 0.5 * h * x;
                let fz = f.eval(&c.point(t)).map_err(|e| match e {
                    Error::EvaluationFailure(m) if m.starts_with("non-finite") => Error::NonFiniteIntegrand(t),
                    other => other,
                })?;
                let v = c.velocity(t);
                let integrand = &fz * &v;
                if !integrand.is_finite() {
                    return Err(Error::NonFiniteIntegrand(t));
                }
                let wt = 0.5 * h * w;
                for (acc, y) in value.iter_mut().zip(integrand.coords()) {
                    *acc += wt * y;
                }
                max_norm = max_norm.max(fz.norm());
                length += wt * v.norm();
            }
        }
    }
    Ok(Pass { value, max_norm, length })
}

/// `integral_C f(zeta) * dzeta` by composite five-point Gauss–Legendre
/// quadrature, doubling the panels until two passes agree within `1e-10`
/// (relative to `max(1, |value|)`) or `2^14` panels are reached.
pub fn curve_integral(f: &AFunction, c: &Curve) -> Result<CurveIntegral> {
    if !c.start().belongs_to(f.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    let pieces = c.breaks.len() - 1;
    let mut per_piece = 2;
    let mut prev = gauss_pass(f, c, per_piece)?;
    let mut converged = false;
    while pieces * per_piece * 2 <= MAX_PANELS {
        per_piece *= 2;
        let next = gauss_pass(f, c, per_piece)?;
        let diff = next.value.iter().zip(&prev.value).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        let scale = next.value.iter().map(|a| a * a).sum::<f64>().sqrt().max(1.0);
        prev = next;
        if diff < REFINE_TOL * scale {
            converged = true;
            break;
        }
    }
    let value = Element::new(f.algebra(), prev.value)?;
    Ok(CurveIntegral {
        value,
        panels: pieces * per_piece,
        converged,
        max_norm: prev.max_norm,
        length: prev.length,
        ml_bound: f.algebra().m_empirical() * prev.max_norm * prev.length,
    })
}
