use serde::Serialize;

use super::{exp, DEFAULT_TOL};
use crate::algebra::{Element, GeneratedAlgebra};
use crate::error::Result;
use crate::power_series::inv_factorial;

/// Components `f_1..f_N` of `t -> exp(e t)` for an algebra generated by `e`
/// with `e^N = c`, tabulated on a grid.
#[derive(Debug, Clone, Serialize)]
pub struct SpecialFunctionTable {
    pub dim: usize,
    pub power_value: f64,
    pub grid: Vec<f64>,
    /// `values[k][i] = f_{i+1}(grid[k])` from the real component series.
    pub values: Vec<Vec<f64>>,
    /// Largest `|sum_i e^{i-1} f_i(t) - exp(e t)|` over the grid, with the
    /// exponential evaluated in the algebra.
    pub reconstruction_residual: f64,
}

impl SpecialFunctionTable {
    /// Coefficient of `t^n` in `f_{i+1}`: `c^{n div N} / n!` when `n mod N == i`.
    pub fn coefficient(&self, i: usize, n: usize) -> f64 {
        component_coefficient(self.dim, self.power_value, i, n)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for i in 1..=self.dim {
            out.push_str(&format!(",f_{i}"));
        }
        out.push('\n');
        for (t, row) in self.grid.iter().zip(&self.values) {
            out.push_str(&t.to_string());
            for v in row {
                out.push(',');
                out.push_str(&v.to_string());
            }
            out.push('\n');
        }
        out
    }
}

fn component_coefficient(n_dim: usize, c: f64, i: usize, n: usize) -> f64 {
    if n % n_dim == i {
        c.powi((n / n_dim) as i32) * inv_factorial(n)
    } else {
        0.0
    }
}

/// Real series `sum_k c^k t^{Nk+i} / (Nk+i)!`.
pub(crate) fn component_value(n_dim: usize, c: f64, i: usize, t: f64) -> f64 {
    let step = c * t.powi(n_dim as i32);
    let mut term = t.powi(i as i32) * inv_factorial(i);
    let mut acc = term;
    let mut n = i;
    let reach = 2.0 * t.abs() * c.abs().max(1.0);
    for _ in 0..10_000 {
        let denom: f64 = (n + 1..=n + n_dim).map(|k| k as f64).product();
        term *= step / denom;
        n += n_dim;
        acc += term;
        if term == 0.0 || (n as f64 > reach && term.abs() <= 1e-18 * (1.0 + acc.abs())) {
            break;
        }
    }
    acc
}

pub fn special_functions(g: &GeneratedAlgebra, grid: &[f64]) -> Result<SpecialFunctionTable> {
    let (n, c) = (g.dim(), g.power_value());
    let alg = g.algebra();
    let e = g.generator();
    let mut values = Vec::with_capacity(grid.len());
    let mut worst = 0.0f64;
    for &t in grid {
        let row: Vec<f64> = (0..n).map(|i| component_value(n, c, i, t)).collect();
        // basis vectors are the generator powers, so coordinates are components
        let rebuilt = Element::new(alg, row.clone())?;
        let direct = exp(&e.scale(t), DEFAULT_TOL);
        worst = worst.max(rebuilt.distance(&direct));
        values.push(row);
    }
    Ok(SpecialFunctionTable {
        dim: n,
        power_value: c,
        grid: grid.to_vec(),
        values,
        reconstruction_residual: worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::preset;

    fn table(name: &str, grid: &[f64]) -> SpecialFunctionTable {
        special_functions(&GeneratedAlgebra::from_algebra(&preset(name).unwrap()).unwrap(), grid).unwrap()
    }

    fn grid() -> Vec<f64> {
        (0..=40).map(|k| -2.0 + 0.1 * k as f64).collect()
    }

    #[test]
    fn nilpotent_generator_gives_polynomials() {
        let t = table("Gamma_N:3", &grid());
        for (x, row) in t.grid.iter().zip(&t.values) {
            assert!((row[0] - 1.0).abs() < 1e-15);
            assert!((row[1] - x).abs() < 1e-15);
            assert!((row[2] - x * x / 2.0).abs() < 1e-15);
        }
        assert!(t.reconstruction_residual < 1e-14);
    }

    #[test]
    fn complex_gives_cos_and_sin() {
        let t = table("complex", &grid());
        for (x, row) in t.grid.iter().zip(&t.values) {
            assert!((row[0] - x.cos()).abs() < 1e-14);
            assert!((row[1] - x.sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn coefficients_and_csv() {
        let t = table("H_N:3", &[0.0, 1.0]);
        assert_eq!(t.coefficient(1, 4), 1.0 / 24.0);
        assert_eq!(t.coefficient(1, 3), 0.0);
        let csv = t.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("t,f_1,f_2,f_3"));
        assert_eq!(lines.next(), Some("0,1,0,0"));
        assert_eq!(csv.lines().count(), 3);
    }
}
