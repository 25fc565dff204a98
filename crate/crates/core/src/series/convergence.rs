use std::sync::OnceLock;

use serde::Serialize;

use super::limsup::{default_estimator, vanishing_adjust, LimsupEstimator};
use super::{probe_norms, TermStream};
use crate::error::{Error, Result};
use crate::registry::Registry;

pub const DEFAULT_MARGIN: f64 = 0.02;
const MIN_PROBE: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Converges,
    Diverges,
    /// `sum |a_n|` diverges; says nothing about `sum a_n` itself.
    DivergesInNorm,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct TestOutcome {
    /// The limsup estimate the verdict was read from.
    pub statistic: f64,
    pub verdict: Verdict,
    pub probe: usize,
    /// The verdict rests on a finite probe standing in for "all n".
    pub probe_limited: bool,
    /// A zero term made the test inapplicable.
    pub zero_terms: bool,
    pub note: Option<String>,
}

impl TestOutcome {
    fn new(statistic: f64, verdict: Verdict, probe: usize) -> Self {
        Self {
            statistic,
            verdict,
            probe,
            probe_limited: false,
            zero_terms: false,
            note: None,
        }
    }
}

pub trait ConvergenceTest: Send + Sync {
    fn describe(&self) -> &'static str;
    fn run(&self, s: &TermStream, probe: usize) -> Result<TestOutcome>;
}

fn check_probe(probe: usize) -> Result<()> {
    if probe < MIN_PROBE {
        return Err(Error::InvalidArgument(format!("probe must be at least {MIN_PROBE}, got {probe}")));
    }
    Ok(())
}

fn threshold(stat: f64, margin: f64) -> Verdict {
    if stat < 1.0 - margin {
        Verdict::Converges
    } else if stat > 1.0 + margin {
        Verdict::Diverges
    } else {
        Verdict::Inconclusive
    }
}

pub struct RootTest {
    pub margin: f64,
    pub estimator: &'static dyn LimsupEstimator,
}

impl Default for RootTest {
    fn default() -> Self {
        Self {
            margin: DEFAULT_MARGIN,
            estimator: default_estimator(),
        }
    }
}

impl ConvergenceTest for RootTest {
    fn describe(&self) -> &'static str {
        "root test on limsup |a_n|^(1/n)"
    }

    fn run(&self, s: &TermStream, probe: usize) -> Result<TestOutcome> {
        check_probe(probe)?;
        let norms = probe_norms(s, probe)?;
        let alpha = self.estimator.alpha(&norms);
        Ok(TestOutcome::new(alpha, threshold(alpha, self.margin), probe))
    }
}

pub struct RatioTest {
    pub margin: f64,
}

impl Default for RatioTest {
    fn default() -> Self {
        Self { margin: DEFAULT_MARGIN }
    }
}

impl ConvergenceTest for RatioTest {
    fn describe(&self) -> &'static str {
        "ratio test on limsup |a_{n+1}| / |a_n|"
    }

    fn run(&self, s: &TermStream, probe: usize) -> Result<TestOutcome> {
        check_probe(probe)?;
        let norms = probe_norms(s, probe)?;
        let start = probe / 2;
        if let Some(n) = (start..=probe).find(|&n| norms[n] == 0.0) {
            let mut out = TestOutcome::new(f64::NAN, Verdict::Inconclusive, probe);
            out.zero_terms = true;
            out.note = Some(format!("term {n} is zero"));
            out.statistic = 0.0;
            return Ok(out);
        }
        let ratios: Vec<f64> = (start..probe).map(|n| norms[n + 1] / norms[n]).collect();
        let stat = ratio_limsup(
            |n| if norms[n] > 0.0 { norms[n + 1] / norms[n] } else { 0.0 },
            probe,
        );

        let all_at_least_one = ratios.iter().all(|&r| r >= 1.0);
        let mut out = if stat < 1.0 - self.margin {
            TestOutcome::new(stat, Verdict::Converges, probe)
        } else if all_at_least_one {
            let mut o = TestOutcome::new(stat, Verdict::Diverges, probe);
            o.probe_limited = true;
            o.note = Some(format!("ratios >= 1 for all n in [{start}, {probe})"));
            o
        } else {
            TestOutcome::new(stat, Verdict::Inconclusive, probe)
        };
        if out.verdict == Verdict::Inconclusive && stat > 1.0 + self.margin {
            out.note = Some("limsup above 1 but some ratios fall below 1".into());
        }
        Ok(out)
    }
}

/// Trailing-half maximum of `q(n)`, `n in [P/2, P)`, set to zero when it
/// falls well below the maximum over `[P/4, P/2)` (the ratios are tending
/// to zero).
pub(crate) fn ratio_limsup(q: impl Fn(usize) -> f64, probe: usize) -> f64 {
    let max_on = |r: std::ops::Range<usize>| r.map(&q).fold(0.0, f64::max);
    let stat = max_on(probe / 2..probe);
    if probe / 2 < 16 {
        return stat;
    }
    vanishing_adjust(stat, max_on(probe / 4..probe / 2))
}

fn build_registry() -> Registry<dyn ConvergenceTest> {
    let mut r: Registry<dyn ConvergenceTest> = Registry::new();
    r.register("root", Box::new(RootTest::default()))
        .register("ratio", Box::new(RatioTest::default()));
    r
}

pub fn convergence_test_registry() -> &'static Registry<dyn ConvergenceTest> {
    static REG: OnceLock<Registry<dyn ConvergenceTest>> = OnceLock::new();
    REG.get_or_init(build_registry)
}

pub fn root_test(s: &TermStream, probe: usize) -> Result<TestOutcome> {
    RootTest::default().run(s, probe)
}

pub fn ratio_test(s: &TermStream, probe: usize) -> Result<TestOutcome> {
    RatioTest::default().run(s, probe)
}

/// Comparison against a real majorant (`bound_converges = true`) or minorant
/// (`false`) over `probe` terms. A violated inequality yields `Inconclusive`
/// with the offending index in the note.
pub fn comparison_test(
    s: &TermStream,
    bound: impl Fn(usize) -> f64,
    bound_converges: bool,
    probe: usize,
) -> Result<TestOutcome> {
    let norms = probe_norms(s, probe)?;
    let slack = |b: f64| 1e-12 * b.abs().max(1.0);
    for (n, &a) in norms.iter().enumerate() {
        let b = bound(n);
        let violated = if bound_converges { a > b + slack(b) } else { b > a + slack(b) };
        if violated || b.is_nan() || b < 0.0 {
            let mut out = TestOutcome::new(f64::NAN, Verdict::Inconclusive, probe);
            out.statistic = 0.0;
            out.note = Some(format!("comparison fails at n = {n}: |a_n| = {a:e}, bound = {b:e}"));
            return Ok(out);
        }
    }
    let verdict = if bound_converges { Verdict::Converges } else { Verdict::DivergesInNorm };
    let mut out = TestOutcome::new(0.0, verdict, probe);
    out.probe_limited = true;
    Ok(out)
}
