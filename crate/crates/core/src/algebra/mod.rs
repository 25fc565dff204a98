//! Finite-dimensional real unital associative algebras given by structure
//! constants `v_i * v_j = sum_k C[i][j][k] v_k`.

mod census;
mod element;
mod generated;
mod isomorphism;
mod norm;
pub mod presets;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use census::{classify_census, Census};
pub use element::{Classification, Element, TOL_SING, TOL_ZERO};
pub use generated::GeneratedAlgebra;
pub use isomorphism::{hyperbolic_isomorphism, IsoDirection};
pub use norm::{norm_constants, NormConstants};
pub use presets::{preset, preset_registry, AlgebraPreset};

/// Shared handle to a validated algebra. Elements hold one of these.
pub type Algebra = Arc<AlgebraSpec>;

/// Absolute tolerance for the associativity and unity axioms on basis triples.
pub const AXIOM_TOL: f64 = 1e-12;

/// Default number of random unit pairs used for the empirical norm constant.
pub const DEFAULT_NORM_SAMPLES: usize = 256;

#[derive(Debug, Clone)]
pub struct AlgebraSpec {
    dim: usize,
    // row-major [i][j][k]
    constants: Vec<f64>,
    // nonzero structure constants, sorted by (i, j, k)
    products: Vec<(usize, usize, usize, f64)>,
    unity: Vec<f64>,
    labels: Vec<String>,
    commutative: bool,
    norm: NormConstants,
    warnings: Vec<String>,
}

/// On-disk algebra description (UTF-8 JSON).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AlgebraFile {
    pub dim: usize,
    pub unity: Vec<f64>,
    pub constants: Vec<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl PartialEq for AlgebraSpec {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.constants == other.constants && self.unity == other.unity
    }
}

/// Validates structure constants and unity and returns the algebra with its
/// derived flags and norm constants populated.
pub fn build_algebra(constants: &[Vec<Vec<f64>>], unity: &[f64]) -> Result<Algebra> {
    AlgebraSpec::builder(constants, unity).build()
}

pub struct AlgebraBuilder<'a> {
    constants: &'a [Vec<Vec<f64>>],
    unity: &'a [f64],
    labels: Option<Vec<String>>,
    samples: usize,
}

impl<'a> AlgebraBuilder<'a> {
    pub fn labels(mut self, labels: Vec<String>) -> Self {
        self.labels = Some(labels);
        self
    }

    pub fn norm_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn build(self) -> Result<Algebra> {
        let n = self.constants.len();
        if n == 0 {
            return Err(Error::DimensionMismatch("dimension must be at least 1".into()));
        }
        if self.unity.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "unity has {} coordinates, expected {n}",
                self.unity.len()
            )));
        }
        let mut flat = Vec::with_capacity(n * n * n);
        for (i, plane) in self.constants.iter().enumerate() {
            if plane.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "constants[{i}] has {} rows, expected {n}",
                    plane.len()
                )));
            }
            for (j, row) in plane.iter().enumerate() {
                if row.len() != n {
                    return Err(Error::DimensionMismatch(format!(
                        "constants[{i}][{j}] has {} entries, expected {n}",
                        row.len()
                    )));
                }
                flat.extend_from_slice(row);
            }
        }
        if flat.iter().chain(self.unity.iter()).any(|c| !c.is_finite()) {
            return Err(Error::DimensionMismatch("non-finite constant".into()));
        }
        let labels = match self.labels {
            Some(l) if l.len() == n => l,
            Some(l) => {
                return Err(Error::DimensionMismatch(format!(
                    "{} labels for dimension {n}",
                    l.len()
                )))
            }
            None => (1..=n).map(|i| format!("v{i}")).collect(),
        };
        AlgebraSpec::from_flat(n, flat, self.unity.to_vec(), labels, self.samples)
    }
}

impl AlgebraSpec {
    pub fn builder<'a>(constants: &'a [Vec<Vec<f64>>], unity: &'a [f64]) -> AlgebraBuilder<'a> {
        AlgebraBuilder {
            constants,
            unity,
            labels: None,
            samples: DEFAULT_NORM_SAMPLES,
        }
    }

    pub fn from_file(file: &AlgebraFile) -> Result<Algebra> {
        if file.dim != file.constants.len() {
            return Err(Error::DimensionMismatch(format!(
                "dim = {} but constants has {} planes",
                file.dim,
                file.constants.len()
            )));
        }
        let mut b = Self::builder(&file.constants, &file.unity);
        if let Some(labels) = &file.labels {
            b = b.labels(labels.clone());
        }
        b.build()
    }

    pub fn to_file(&self) -> AlgebraFile {
        let n = self.dim;
        let constants = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| self.c(i, j, k)).collect()).collect())
            .collect();
        AlgebraFile {
            dim: n,
            unity: self.unity.clone(),
            constants,
            labels: Some(self.labels.clone()),
        }
    }

    fn from_flat(
        n: usize,
        constants: Vec<f64>,
        unity: Vec<f64>,
        labels: Vec<String>,
        samples: usize,
    ) -> Result<Algebra> {
        let products = constants
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0.0)
            .map(|(idx, &c)| (idx / (n * n), (idx / n) % n, idx % n, c))
            .collect();
        let mut spec = AlgebraSpec {
            dim: n,
            constants,
            products,
            unity,
            labels,
            commutative: false,
            norm: NormConstants {
                m_theoretical: 0.0,
                m_empirical: 0.0,
            },
            warnings: Vec::new(),
        };
        spec.check_associativity()?;
        spec.check_unity()?;
        spec.commutative = (0..n).all(|i| {
            (0..n).all(|j| (0..n).all(|k| (spec.c(i, j, k) - spec.c(j, i, k)).abs() <= AXIOM_TOL))
        });
        spec.norm = norm_constants(&spec, samples);
        let unity_norm = spec.unity.iter().map(|u| u * u).sum::<f64>().sqrt();
        if (unity_norm - 1.0).abs() > 1e-12 {
            spec.warnings.push(format!(
                "unity has Euclidean norm {unity_norm}; bounds involving |1| use this value"
            ));
        }
        Ok(Arc::new(spec))
    }

    #[inline]
    pub fn c(&self, i: usize, j: usize, k: usize) -> f64 {
        self.constants[(i * self.dim + j) * self.dim + k]
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unity(&self) -> &[f64] {
        &self.unity
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn is_commutative(&self) -> bool {
        self.commutative
    }

    pub fn norm_constants(&self) -> NormConstants {
        self.norm
    }

    pub fn m_empirical(&self) -> f64 {
        self.norm.m_empirical
    }

    pub fn m_theoretical(&self) -> f64 {
        self.norm.m_theoretical
    }

    /// Non-fatal observations made during validation.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Largest absolute structure constant.
    pub fn max_abs_constant(&self) -> f64 {
        self.constants.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    /// True when the first basis vector is the unity.
    pub fn unity_first(&self) -> bool {
        self.unity[0] == 1.0 && self.unity[1..].iter().all(|&u| u == 0.0)
    }

    /// `out = x * y` in coordinates.
    #[inline]
    pub(crate) fn mul_into(&self, x: &[f64], y: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for &(i, j, k, c) in &self.products {
            out[k] += x[i] * y[j] * c;
        }
    }

    pub(crate) fn mul_coords(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.mul_into(x, y, &mut out);
        out
    }

    fn basis_coords(&self, i: usize) -> Vec<f64> {
        let mut v = vec![0.0; self.dim];
        v[i] = 1.0;
        v
    }

    /// Largest absolute coordinate difference between `(v_i v_j) v_k` and
    /// `v_i (v_j v_k)` over all basis triples.
    pub fn associativity_residual(&self) -> (f64, (usize, usize, usize)) {
        let n = self.dim;
        let mut worst = (0.0, (0, 0, 0));
        for i in 0..n {
            let vi = self.basis_coords(i);
            for j in 0..n {
                let vj = self.basis_coords(j);
                let ij = self.mul_coords(&vi, &vj);
                for k in 0..n {
                    let vk = self.basis_coords(k);
                    let left = self.mul_coords(&ij, &vk);
                    let jk = self.mul_coords(&vj, &vk);
                    let right = self.mul_coords(&vi, &jk);
                    let r = left
                        .iter()
                        .zip(&right)
                        .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
                    if r > worst.0 {
                        worst = (r, (i, j, k));
                    }
                }
            }
        }
        worst
    }

    fn check_associativity(&self) -> Result<()> {
        let (residual, (i, j, k)) = self.associativity_residual();
        if residual > AXIOM_TOL {
            return Err(Error::AssociativityViolation {
                residual,
                i: i + 1,
                j: j + 1,
                k: k + 1,
            });
        }
        Ok(())
    }

    fn check_unity(&self) -> Result<()> {
        let mut worst = (0.0_f64, 0);
        for i in 0..self.dim {
            let vi = self.basis_coords(i);
            let left = self.mul_coords(&self.unity, &vi);
            let right = self.mul_coords(&vi, &self.unity);
            for (p, (l, r)) in left.iter().zip(&right).enumerate() {
                let r_ = (l - vi[p]).abs().max((r - vi[p]).abs());
                if r_ > worst.0 {
                    worst = (r_, i);
                }
            }
        }
        if worst.0 > AXIOM_TOL {
            return Err(Error::UnityViolation {
                residual: worst.0,
                index: worst.1 + 1,
            });
        }
        Ok(())
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "algebra(dim={}, basis=[{}])", self.dim, self.labels.join(", "))
    }
}
