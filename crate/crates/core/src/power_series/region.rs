use std::fmt::Write as _;

use rayon::prelude::*;

use super::PowerSeries;
use crate::algebra::Element;
use crate::error::{Error, Result};
use crate::series::SumStatus;

/// The affine plane `origin + u * axis_u + v * axis_v`.
#[derive(Debug, Clone)]
pub struct Slice {
    pub origin: Element,
    pub axis_u: Element,
    pub axis_v: Element,
}

impl Slice {
    pub fn point(&self, u: f64, v: f64) -> Element {
        &(&self.origin + &self.axis_u.scale(u)) + &self.axis_v.scale(v)
    }

    fn check(&self) -> Result<()> {
        if !self.origin.same_algebra(&self.axis_u) || !self.origin.same_algebra(&self.axis_v) {
            return Err(Error::AlgebraMismatch);
        }
        let (a, b) = (self.axis_u.coords(), self.axis_v.coords());
        let aa: f64 = a.iter().map(|x| x * x).sum();
        let bb: f64 = b.iter().map(|x| x * x).sum();
        let ab: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
        if aa * bb - ab * ab <= 1e-12 * aa * bb || aa == 0.0 || bb == 0.0 {
            return Err(Error::DegenerateSlice);
        }
        Ok(())
    }
}

/// Sample points: `nu` values spanning `[u_min, u_max]` inclusive (the
/// midpoint when `nu == 1`), likewise for `v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub u_min: f64,
    pub u_max: f64,
    pub v_min: f64,
    pub v_max: f64,
    pub nu: usize,
    pub nv: usize,
}

fn sample(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if n == 1 {
        0.5 * (lo + hi)
    } else {
        lo + (hi - lo) * i as f64 / (n - 1) as f64
    }
}

impl Grid {
    pub fn square(lo: f64, hi: f64, n: usize) -> Grid {
        Grid {
            u_min: lo,
            u_max: hi,
            v_min: lo,
            v_max: hi,
            nu: n,
            nv: n,
        }
    }

    pub fn u(&self, i: usize) -> f64 {
        sample(self.u_min, self.u_max, self.nu, i)
    }

    pub fn v(&self, j: usize) -> f64 {
        sample(self.v_min, self.v_max, self.nv, j)
    }

    fn check(&self) -> Result<()> {
        let finite = [self.u_min, self.u_max, self.v_min, self.v_max].iter().all(|x| x.is_finite());
        if !finite || self.u_min > self.u_max || self.v_min > self.v_max || self.nu == 0 || self.nv == 0 {
            return Err(Error::InvalidArgument(format!("bad grid {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct RegionScan {
    pub slice: Slice,
    pub grid: Grid,
    /// `verdicts[j][i]` is the cell at `(grid.u(i), grid.v(j))`.
    pub verdicts: Vec<Vec<SumStatus>>,
    /// Converged values; `None` elsewhere.
    pub values: Vec<Vec<Option<Element>>>,
}

impl RegionScan {
    pub fn count(&self, status: SumStatus) -> usize {
        self.verdicts.iter().flatten().filter(|&&s| s == status).count()
    }

    /// CSV with header `u,v,verdict,comp_0,...`; `v` is the outer loop.
    pub fn to_csv(&self) -> String {
        let dim = self.slice.origin.dim();
        let mut out = String::from("u,v,verdict");
        for k in 0..dim {
            let _ = write!(out, ",comp_{k}");
        }
        out.push('\n');
        for (j, row) in self.verdicts.iter().enumerate() {
            for (i, status) in row.iter().enumerate() {
                let _ = write!(out, "{},{},{}", self.grid.u(i), self.grid.v(j), status.code());
                match &self.values[j][i] {
                    Some(v) => v.coords().iter().for_each(|c| {
                        let _ = write!(out, ",{c}");
                    }),
                    None => (0..dim).for_each(|_| out.push(',')),
                }
                out.push('\n');
            }
        }
        out
    }
}

/// Evaluates `p` at every grid point of the slice, in parallel.
pub fn region_scan(p: &PowerSeries, slice: &Slice, grid: &Grid, tol: f64) -> Result<RegionScan> {
    slice.check()?;
    grid.check()?;
    if !slice.origin.belongs_to(p.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    let cells: Vec<(SumStatus, Option<Element>)> = (0..grid.nu * grid.nv)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx % grid.nu, idx / grid.nu);
            let z = slice.point(grid.u(i), grid.v(j));
            match p.eval(&z, tol) {
                Ok(r) if r.converged() => Ok((SumStatus::Converged, Some(r.value))),
                Ok(r) => Ok((r.status, None)),
                Err(Error::NonFiniteTerm(_)) => Ok((SumStatus::Inconclusive, None)),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;

    let mut verdicts = Vec::with_capacity(grid.nv);
    let mut values = Vec::with_capacity(grid.nv);
    for row in cells.chunks(grid.nu) {
        verdicts.push(row.iter().map(|c| c.0).collect());
        values.push(row.iter().map(|c| c.1.clone()).collect());
    }
    Ok(RegionScan {
        slice: slice.clone(),
        grid: *grid,
        verdicts,
        values,
    })
}
