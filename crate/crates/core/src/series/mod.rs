//! Series of algebra elements: summation with a Cauchy-criterion stopping
//! rule, convergence tests, and the Cauchy product.

mod cauchy;
mod convergence;
mod limsup;

use std::collections::VecDeque;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::algebra::{Algebra, Element};
use crate::error::{Error, Result};

pub use cauchy::cauchy_product;
pub use convergence::{
    comparison_test, convergence_test_registry, ratio_test, root_test, ConvergenceTest, TestOutcome, Verdict,
    DEFAULT_MARGIN,
};
pub(crate) use convergence::ratio_limsup;
pub use limsup::{
    default_estimator, estimator_registry, EnvelopeSlope, LimsupEstimator, TrailingMax, DEFAULT_ESTIMATOR,
};

/// Partial sums or terms above this norm count as divergence.
pub const DIVERGENCE_GUARD: f64 = 1e12;
pub const DEFAULT_WINDOW: usize = 8;
pub const DEFAULT_MAX_TERMS: usize = 10_000;
/// Environment variable that overrides [`DEFAULT_MAX_TERMS`].
pub const MAX_TERMS_ENV: &str = "ACALC_MAX_TERMS";

/// The global truncation cap: `ACALC_MAX_TERMS` if set to a positive integer,
/// else [`DEFAULT_MAX_TERMS`].
pub fn default_max_terms() -> usize {
    std::env::var(MAX_TERMS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(DEFAULT_MAX_TERMS)
}

type TermFn = Arc<dyn Fn(usize) -> Element + Send + Sync>;
type VanishFn = Arc<dyn Fn(usize) -> bool + Send + Sync>;

/// A lazily evaluated sequence `a_0, a_1, ...` of elements.
#[derive(Clone)]
pub struct TermStream {
    algebra: Algebra,
    term: TermFn,
    /// `vanishes_from(n)` promises `a_k == 0` exactly for every `k >= n`.
    vanishes_from: Option<VanishFn>,
    max_terms: usize,
}

impl std::fmt::Debug for TermStream {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TermStream")
            .field("dim", &self.algebra.dim())
            .field("max_terms", &self.max_terms)
            .finish_non_exhaustive()
    }
}

impl TermStream {
    pub fn new(algebra: &Algebra, term: impl Fn(usize) -> Element + Send + Sync + 'static) -> Self {
        Self {
            algebra: algebra.clone(),
            term: Arc::new(term),
            vanishes_from: None,
            max_terms: default_max_terms(),
        }
    }

    /// A stream driven by a state recurrence `s_0 = init`, `s_n = step(n, s_{n-1})`,
    /// emitting `emit(n, s_n)`. States are cached, so sequential access costs
    /// one `step` per term. When `dead(s_n)` holds, every later term is taken
    /// to be exactly zero.
    pub fn recurrence<S>(
        algebra: &Algebra,
        init: S,
        step: impl Fn(usize, &S) -> S + Send + Sync + 'static,
        emit: impl Fn(usize, &S) -> Element + Send + Sync + 'static,
        dead: impl Fn(&S) -> bool + Send + Sync + 'static,
    ) -> Self
    where
        S: Clone + Send + Sync + 'static,
    {
        let states = Arc::new(Mutex::new(vec![init]));
        let step = Arc::new(step);
        let state_at = {
            let states = states.clone();
            move |n: usize| -> S {
                let mut st = states.lock().expect("term cache poisoned");
                while st.len() <= n {
                    let k = st.len();
                    let next = step(k, &st[k - 1]);
                    st.push(next);
                }
                st[n].clone()
            }
        };
        let state_at = Arc::new(state_at);
        let s1 = state_at.clone();
        let term = move |n: usize| emit(n, &s1(n));
        let vanish = move |n: usize| dead(&state_at(n));
        Self {
            algebra: algebra.clone(),
            term: Arc::new(term),
            vanishes_from: Some(Arc::new(vanish)),
            max_terms: default_max_terms(),
        }
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Self {
        self.max_terms = max_terms.max(1);
        self
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    pub fn term(&self, n: usize) -> Element {
        (self.term)(n)
    }

    pub fn vanishes_from(&self, n: usize) -> bool {
        self.vanishes_from.as_ref().is_some_and(|f| f(n))
    }

    /// Same stream with each term computed at most once.
    pub fn memoized(&self) -> TermStream {
        let inner = self.term.clone();
        let cache: Arc<Mutex<Vec<Element>>> = Arc::new(Mutex::new(Vec::new()));
        let term = move |n: usize| {
            let mut c = cache.lock().expect("term cache poisoned");
            while c.len() <= n {
                let k = c.len();
                c.push(inner(k));
            }
            c[n].clone()
        };
        TermStream {
            algebra: self.algebra.clone(),
            term: Arc::new(term),
            vanishes_from: self.vanishes_from.clone(),
            max_terms: self.max_terms,
        }
    }

    /// The stream `c * a_n`.
    pub fn left_scaled(&self, c: &Element) -> Result<TermStream> {
        if !c.belongs_to(&self.algebra) {
            return Err(Error::AlgebraMismatch);
        }
        let inner = self.term.clone();
        let c = c.clone();
        Ok(TermStream {
            algebra: self.algebra.clone(),
            term: Arc::new(move |n| &c * &inner(n)),
            vanishes_from: self.vanishes_from.clone(),
            max_terms: self.max_terms,
        })
    }

    /// The stream `a_n + b_n`.
    pub fn plus(&self, other: &TermStream) -> Result<TermStream> {
        if !Element::zero(&self.algebra).belongs_to(&other.algebra) {
            return Err(Error::AlgebraMismatch);
        }
        let (a, b) = (self.term.clone(), other.term.clone());
        let vanish = match (&self.vanishes_from, &other.vanishes_from) {
            (Some(x), Some(y)) => {
                let (x, y) = (x.clone(), y.clone());
                Some(Arc::new(move |n| x(n) && y(n)) as VanishFn)
            }
            _ => None,
        };
        Ok(TermStream {
            algebra: self.algebra.clone(),
            term: Arc::new(move |n| a(n) + b(n)),
            vanishes_from: vanish,
            max_terms: self.max_terms.min(other.max_terms),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SumStatus {
    Converged,
    Diverged,
    Inconclusive,
}

impl SumStatus {
    /// One-letter code used in CSV output.
    pub fn code(self) -> char {
        match self {
            SumStatus::Converged => 'C',
            SumStatus::Diverged => 'D',
            SumStatus::Inconclusive => 'I',
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SumResult {
    pub value: Element,
    pub status: SumStatus,
    pub terms_used: usize,
    /// Largest trailing block-sum norm at the stopping point.
    pub tail_estimate: f64,
}

impl SumResult {
    pub fn converged(&self) -> bool {
        self.status == SumStatus::Converged
    }
}

/// Sums `s` until the Cauchy criterion holds on a trailing window.
///
/// Stops with `Converged` once `n >= window` and every block sum
/// `a_k + ... + a_{n-1}` with `n - window <= k < n` has norm below `tol`.
/// Block sums are accumulated from the terms, not as differences of partial sums.
pub fn sum(s: &TermStream, tol: f64, window: usize) -> Result<SumResult> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    if window == 0 {
        return Err(Error::InvalidArgument("window must be at least 1".into()));
    }
    let alg = s.algebra();
    let mut value = Element::zero(alg);
    let mut recent: VecDeque<Element> = VecDeque::with_capacity(window + 1);
    let mut tail = f64::INFINITY;

    for n in 0..s.max_terms() {
        let a = s.term(n);
        if !a.is_finite() {
            return Err(Error::NonFiniteTerm(n));
        }
        value += &a;
        let a_norm = a.norm();
        if a_norm > DIVERGENCE_GUARD || value.norm() > DIVERGENCE_GUARD {
            return Ok(SumResult {
                value,
                status: SumStatus::Diverged,
                terms_used: n + 1,
                tail_estimate: a_norm,
            });
        }
        if s.vanishes_from(n + 1) {
            return Ok(SumResult {
                value,
                status: SumStatus::Converged,
                terms_used: n + 1,
                tail_estimate: 0.0,
            });
        }
        recent.push_back(a);
        if recent.len() > window {
            recent.pop_front();
        }
        if recent.len() == window {
            let mut block = Element::zero(alg);
            let mut worst = 0.0_f64;
            for t in recent.iter().rev() {
                block += t;
                worst = worst.max(block.norm());
                if worst >= tol {
                    break;
                }
            }
            tail = worst;
            if worst < tol {
                return Ok(SumResult {
                    value,
                    status: SumStatus::Converged,
                    terms_used: n + 1,
                    tail_estimate: worst,
                });
            }
        }
    }
    Ok(SumResult {
        value,
        status: SumStatus::Inconclusive,
        terms_used: s.max_terms(),
        tail_estimate: if tail.is_finite() { tail } else { 0.0 },
    })
}

/// Norms `|a_0|, ..., |a_probe|`, failing on the first non-finite term.
pub(crate) fn probe_norms(s: &TermStream, probe: usize) -> Result<Vec<f64>> {
    (0..=probe)
        .map(|n| {
            let a = s.term(n);
            if a.is_finite() {
                Ok(a.norm())
            } else {
                Err(Error::NonFiniteTerm(n))
            }
        })
        .collect()
}
