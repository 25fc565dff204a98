use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{residue_series, DEFAULT_TOL};
use crate::algebra::{Element, GeneratedAlgebra};
use crate::error::{Error, Result};

/// Largest dimension for the `N!`-term Leibniz determinant.
pub const MAX_LEIBNIZ_DIM: usize = 8;

/// The operations a division-free determinant needs. `zero` and `one` take
/// a sample value so elements can carry their algebra.
pub trait Ring: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl Ring for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn one_like(&self) -> Self {
        1.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Ring for Element {
    fn zero_like(&self) -> Self {
        Element::zero(self.algebra())
    }
    fn one_like(&self) -> Self {
        Element::one(self.algebra())
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
}

/// `sum_sigma sgn(sigma) prod_i m[i][sigma(i)]`, enumerating permutations
/// with Heap's algorithm. Only meaningful over a commutative ring.
///
/// # Panics
/// If `m` is empty or not square.
pub fn leibniz_det<T: Ring>(m: &[Vec<T>]) -> T {
    let n = m.len();
    assert!(n > 0 && m.iter().all(|r| r.len() == n), "determinant needs a non-empty square matrix");
    let mut perm: Vec<usize> = (0..n).collect();
    let mut counters = vec![0usize; n];
    let mut sign = 1.0;
    let zero = m[0][0].zero_like();
    let one = m[0][0].one_like();

    let term = |perm: &[usize], sign: f64| {
        let p = perm.iter().enumerate().fold(one.clone(), |acc, (i, &j)| acc.mul(&m[i][j]));
        if sign > 0.0 {
            p
        } else {
            p.neg()
        }
    };

    let mut det = zero.add(&term(&perm, sign));
    let mut i = 1;
    while i < n {
        if counters[i] < i {
            let k = if i % 2 == 0 { 0 } else { counters[i] };
            perm.swap(k, i);
            sign = -sign;
            det = det.add(&term(&perm, sign));
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    det
}

#[derive(Debug, Clone, Serialize)]
pub struct PythagoreanEvaluation {
    pub dim: usize,
    pub power_value: f64,
    pub argument: Element,
    /// `matrix[r][p]` is coordinate `r` of `e^p * exp(e z)`, with the
    /// components extended to the algebra-valued argument.
    pub matrix: Vec<Vec<Element>>,
    pub value: Element,
    /// `|value - 1|`
    pub residual: f64,
}

/// Determinant over the algebra of `[exp(e z) | e exp(e z) | ... ]`.
///
/// With `exp(e z) = sum_k f_k(z) e^{k-1}` and `M(e^{k-1})` the regular
/// representation of the basis vectors, entry `(r, p)` is
/// `sum_k f_k(z) M(e^{k-1})[r][p]`; on the real axis this is the real
/// matrix `M(exp(e t))`.
pub fn pythagorean(g: &GeneratedAlgebra, z: &Element) -> Result<PythagoreanEvaluation> {
    let alg = g.algebra();
    if !z.belongs_to(alg) {
        return Err(Error::AlgebraMismatch);
    }
    if !alg.is_commutative() {
        return Err(Error::NotCommutative);
    }
    let n = g.dim();
    if n > MAX_LEIBNIZ_DIM {
        return Err(Error::DimensionTooLarge(n));
    }
    let c = g.power_value();
    let components: Vec<Element> = (0..n).map(|k| residue_series(z, n, k, c, DEFAULT_TOL)).collect();
    let reps: Vec<_> = (0..n).map(|k| Element::basis(alg, k).regular_rep()).collect();
    let matrix: Vec<Vec<Element>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|p| {
                    components
                        .iter()
                        .zip(&reps)
                        .fold(Element::zero(alg), |acc, (f, m)| &acc + &f.scale(m[(r, p)]))
                })
                .collect()
        })
        .collect();
    let value = leibniz_det(&matrix);
    let residual = value.distance(&Element::one(alg));
    Ok(PythagoreanEvaluation {
        dim: n,
        power_value: c,
        argument: z.clone(),
        matrix,
        value,
        residual,
    })
}

/// Summary of [`pythagorean`] over seeded random arguments.
#[derive(Debug, Clone, Serialize)]
pub struct PythagoreanReport {
    #[serde(rename = "N")]
    pub dim: usize,
    pub c: f64,
    pub max_residual: f64,
    pub trials: usize,
}

/// Largest `|P(z) - 1|` over `trials` arguments with coordinates uniform in `[-1, 1]`.
pub fn pythagorean_report(g: &GeneratedAlgebra, trials: usize, seed: u64) -> Result<PythagoreanReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_residual = 0.0f64;
    for _ in 0..trials {
        let c = (0..g.dim()).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let z = Element::new(g.algebra(), c)?;
        max_residual = max_residual.max(pythagorean(g, &z)?.residual);
    }
    Ok(PythagoreanReport {
        dim: g.dim(),
        c: g.power_value(),
        max_residual,
        trials,
    })
}
