use super::{Algebra, Element};
use crate::error::{Error, Result};

const GEN_TOL: f64 = 1e-12;

/// An algebra whose basis is `1, e, e^2, ..., e^{N-1}` for a single
/// generator `e` with `e^N = c * 1`.
#[derive(Debug, Clone)]
pub struct GeneratedAlgebra {
    base: Algebra,
    generator_index: usize,
    power_value: f64,
}

impl GeneratedAlgebra {
    /// Checks that basis vector 1 generates the basis in order and that its
    /// `N`-th power is a real multiple of unity.
    pub fn from_algebra(base: &Algebra) -> Result<Self> {
        let n = base.dim();
        if n < 2 {
            return Err(Error::NotGenerated("dimension must be at least 2".into()));
        }
        if !base.unity_first() {
            return Err(Error::NotGenerated("unity is not the first basis vector".into()));
        }
        let gen = Element::basis(base, 1);
        let mut power = Element::one(base);
        for k in 0..n {
            let expected = Element::basis(base, k);
            if power.distance(&expected) > GEN_TOL {
                return Err(Error::NotGenerated(format!("v{} is not the {k}-th generator power", k + 1)));
            }
            power = power * &gen;
        }
        let c = power.coords()[0];
        if power.distance(&Element::scalar(base, c)) > GEN_TOL {
            return Err(Error::NotGenerated(format!("generator^{n} is not a multiple of unity")));
        }
        Ok(Self {
            base: base.clone(),
            generator_index: 1,
            power_value: c,
        })
    }

    pub fn algebra(&self) -> &Algebra {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn generator_index(&self) -> usize {
        self.generator_index
    }

    pub fn generator(&self) -> Element {
        Element::basis(&self.base, self.generator_index)
    }

    /// `c` in `e^N = c`.
    pub fn power_value(&self) -> f64 {
        self.power_value
    }
}
