//! Sup-min convolution.
//!
//! For fuzzy numbers `sup_y min(u(y), v(x - y))` is alpha-cut addition, so
//! [`nabla`] simply adds. [`sup_min_grid`] evaluates the supremum by brute
//! force on a grid and serves as an independent check.

use std::io::Write;

use crate::arith;
use crate::error::{Error, Result};
use crate::fuzzy::FuzzyNumber;
use crate::TOL_X;

/// Membership samples `values[i]` at `x0 + i * h`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub x0: f64,
    pub h: f64,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.h
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Two-column `x,value` CSV with 17 significant digits.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "x,value")?;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(out, "{:.16e},{:.16e}", self.x(i), v)?;
        }
        Ok(())
    }
}

/// Sup-min convolution of two fuzzy numbers.
pub fn nabla(u: &FuzzyNumber, v: &FuzzyNumber) -> FuzzyNumber {
    arith::add(u, v)
}

fn grid_count(width: f64, h: f64) -> usize {
    (width / h * (1.0 + 1e-12)).floor() as usize + 1
}

/// Brute-force convolution on the grid `s_lo(u) + s_lo(v) + i h`.
///
/// The `y` grid starts at `s_lo(u)` with the same step, so `x - y` falls on
/// a precomputed grid for `v`. Piece boundaries of `u`, and the `y` placing
/// `x - y` on a piece boundary of `v`, are added as extra candidates.
pub fn sup_min_grid(u: &FuzzyNumber, v: &FuzzyNumber, h: f64) -> Result<GridFunction> {
    let [ul, uh] = u.support();
    let [vl, vh] = v.support();
    let width = (uh - ul) + (vh - vl);
    if !(h > 0.0) || h > width / 8.0 {
        return Err(Error::StepTooCoarse { h, max: width / 8.0 });
    }
    let nu = grid_count(uh - ul, h);
    let nv = grid_count(vh - vl, h);
    let nx = grid_count(width, h);
    let us: Vec<f64> = (0..nu).map(|j| u.membership(ul + j as f64 * h)).collect();
    let vs: Vec<f64> = (0..nv).map(|k| v.membership(vl + k as f64 * h)).collect();
    let mut u_extra: Vec<(f64, f64)> = Vec::new();
    for y in u.breakpoints().into_iter().chain(u.support()) {
        u_extra.push((y, u.membership(y)));
    }
    let mut v_extra: Vec<(f64, f64)> = Vec::new();
    for z in v.breakpoints().into_iter().chain(v.support()) {
        v_extra.push((z, v.membership(z)));
    }

    let x0 = ul + vl;
    let values = (0..nx)
        .map(|i| {
            // x - y = vl + (i - j) h must lie in [0, nv)
            let j_lo = i.saturating_sub(nv - 1);
            let j_hi = i.min(nu - 1);
            let mut best = 0.0_f64;
            for j in j_lo..=j_hi {
                let m = us[j].min(vs[i - j]);
                if m > best {
                    best = m;
                }
            }
            let x = x0 + i as f64 * h;
            for &(y, uy) in &u_extra {
                best = best.max(uy.min(v.membership(x - y)));
            }
            for &(z, vz) in &v_extra {
                best = best.max(u.membership(x - z).min(vz));
            }
            best
        })
        .collect();
    Ok(GridFunction { x0, h, values })
}

/// Largest deviation between the grid oracle and [`nabla`] at grid points,
/// skipping a `TOL_X` neighborhood of every jump of the exact result.
pub fn oracle_gap(u: &FuzzyNumber, v: &FuzzyNumber, h: f64) -> Result<f64> {
    let grid = sup_min_grid(u, v, h)?;
    let exact = nabla(u, v);
    let jumps = exact.jump_abscissae();
    let mut gap = 0.0_f64;
    for (i, &g) in grid.values.iter().enumerate() {
        let x = grid.x(i);
        if jumps.iter().any(|j| (x - j).abs() <= TOL_X) {
            continue;
        }
        gap = gap.max((g - exact.membership(x)).abs());
    }
    Ok(gap)
}
