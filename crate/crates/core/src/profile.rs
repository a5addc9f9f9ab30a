//! Discrete profile curves on a uniform grid over `[-h, h]`.
//!
//! A profile is the piecewise-linear interpolant of its nodal values. All
//! shape operations (convex envelope, maximum with a catenary,
//! symmetrization) act on nodal values and are exact for that interpolant.

use std::io::{BufRead, Write};

use serde::Serialize;

use crate::catenary::CatenaryProfile;
use crate::error::{domain, Error, Result};
use crate::format::sig;

/// Relative tolerance on the boundary values of an admissible profile.
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;
/// Sup-norm tolerance for evenness.
pub const EVEN_TOLERANCE: f64 = 1e-9;
/// Slack on consecutive slope differences for convexity.
pub const CONVEX_TOLERANCE: f64 = 1e-10;

/// Uniform grid `x_i = -h + i·(2h/n_cells)`, `i = 0..=n_cells`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    h: f64,
    n_cells: usize,
}

impl Grid {
    /// `n_cells` must be even so that `x = 0` is a node.
    pub fn new(h: f64, n_cells: usize) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(domain("grid", format!("half-length must be positive, got {h}")));
        }
        if n_cells < 2 || !n_cells.is_multiple_of(2) {
            return Err(domain(
                "grid",
                format!("cell count must be even and at least 2, got {n_cells}"),
            ));
        }
        Ok(Self { h, n_cells })
    }

    /// Grid with `n_nodes` nodes (odd, at least 3).
    pub fn with_nodes(h: f64, n_nodes: usize) -> Result<Self> {
        Self::new(h, n_nodes.saturating_sub(1))
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn n_nodes(&self) -> usize {
        self.n_cells + 1
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.h / self.n_cells as f64
    }

    /// Index of the node at `x = 0`.
    pub fn center(&self) -> usize {
        self.n_cells / 2
    }

    pub fn x(&self, i: usize) -> f64 {
        // symmetric about the center so that x(i) = -x(n - i) exactly
        let c = self.center() as f64;
        (i as f64 - c) * self.h / c
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_nodes()).map(move |i| self.x(i))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileCurve {
    grid: Grid,
    values: Vec<f64>,
    /// `Some(r)` when both endpoint values equal `r`.
    boundary: Option<f64>,
}

impl ProfileCurve {
    /// A valid profile: one finite, positive value per node.
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_nodes() {
            return Err(Error::Mismatch(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.n_nodes()
            )));
        }
        if let Some((index, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v > 0.0 && v.is_finite()))
        {
            return Err(Error::Positivity { index, value });
        }
        Ok(Self {
            grid,
            values,
            boundary: None,
        })
    }

    /// A profile meeting `ρ(±h) = r`. Endpoints within the boundary
    /// tolerance are snapped to `r`.
    pub fn admissible(grid: Grid, mut values: Vec<f64>, r: f64) -> Result<Self> {
        let n = values.len();
        if n != grid.n_nodes() {
            return Self::new(grid, values);
        }
        for end in [0, n - 1] {
            if (values[end] - r).abs() > BOUNDARY_TOLERANCE * r {
                return Err(Error::Mismatch(format!(
                    "endpoint value {} differs from r = {r}",
                    values[end]
                )));
            }
            values[end] = r;
        }
        let mut p = Self::new(grid, values)?;
        p.boundary = Some(r);
        Ok(p)
    }

    /// Samples `f` at the nodes.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.nodes().map(f).collect())
    }

    pub fn constant(grid: Grid, r: f64) -> Result<Self> {
        Self::admissible(grid, vec![r; grid.n_nodes()], r)
    }

    /// Stable catenary sampled on `grid`, with endpoints snapped to `r`.
    pub fn from_catenary(grid: Grid, cat: &CatenaryProfile, r: f64) -> Result<Self> {
        Self::admissible(grid, grid.nodes().map(|x| cat.value(x)).collect(), r)
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn boundary(&self) -> Option<f64> {
        self.boundary
    }

    pub fn is_admissible(&self) -> bool {
        self.boundary.is_some()
    }

    /// Boundary radius if admissible, otherwise the mean endpoint value.
    pub fn reference_radius(&self) -> f64 {
        self.boundary
            .unwrap_or_else(|| 0.5 * (self.values[0] + self.values[self.values.len() - 1]))
    }

    pub fn apex(&self) -> f64 {
        self.values[self.grid.center()]
    }

    /// Slope of cell `i` (between nodes `i` and `i + 1`).
    pub fn cell_slope(&self, i: usize) -> f64 {
        (self.values[i + 1] - self.values[i]) / self.grid.dx()
    }

    pub fn cell_slopes(&self) -> Vec<f64> {
        (0..self.grid.n_cells()).map(|i| self.cell_slope(i)).collect()
    }

    /// Nodal derivative: mean of the adjacent cell slopes, one-sided at the
    /// endpoints.
    pub fn nodal_slope(&self, i: usize) -> f64 {
        let n = self.grid.n_cells();
        match i {
            0 => self.cell_slope(0),
            _ if i == n => self.cell_slope(n - 1),
            _ => 0.5 * (self.cell_slope(i - 1) + self.cell_slope(i)),
        }
    }

    /// Piecewise-linear evaluation; `x` is clamped to `[-h, h]`.
    pub fn eval(&self, x: f64) -> f64 {
        let g = self.grid;
        let t = ((x + g.h()) / g.dx()).clamp(0.0, g.n_cells() as f64);
        let i = (t.floor() as usize).min(g.n_cells() - 1);
        let w = t - i as f64;
        self.values[i] * (1.0 - w) + self.values[i + 1] * w
    }

    fn with_values(&self, values: Vec<f64>) -> Self {
        Self {
            grid: self.grid,
            values,
            boundary: self.boundary,
        }
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "x,rho")?;
        for (x, v) in self.grid.nodes().zip(&self.values) {
            writeln!(w, "{},{}", sig(x), sig(*v))?;
        }
        Ok(())
    }

    /// Reads an `x,rho` CSV on a uniform grid symmetric about `x = 0`.
    pub fn read_csv<R: BufRead>(reader: R) -> Result<Self> {
        let mut xs = Vec::new();
        let mut vs = Vec::new();
        for (n, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if n == 0 {
                if line.replace(' ', "") != "x,rho" {
                    return Err(Error::Parse {
                        line: 1,
                        message: format!("expected header `x,rho`, got `{line}`"),
                    });
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let parse = |s: Option<&str>| -> Result<f64> {
                s.and_then(|s| s.trim().parse::<f64>().ok())
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::Parse {
                        line: n + 1,
                        message: format!("expected two numbers, got `{line}`"),
                    })
            };
            let mut fields = line.split(',');
            xs.push(parse(fields.next())?);
            vs.push(parse(fields.next())?);
            if fields.next().is_some() {
                return Err(Error::Parse {
                    line: n + 1,
                    message: "too many fields".into(),
                });
            }
        }
        if xs.len() < 3 {
            return Err(Error::Parse {
                line: xs.len() + 1,
                message: "need at least three rows".into(),
            });
        }
        let h = xs[xs.len() - 1];
        let grid = Grid::new(h, xs.len() - 1).map_err(|e| Error::Parse {
            line: 0,
            message: e.to_string(),
        })?;
        let tol = 1e-9 * grid.dx();
        if (xs[0] + h).abs() > tol {
            return Err(Error::Parse {
                line: 2,
                message: "grid must be symmetric about x = 0".into(),
            });
        }
        for (i, &x) in xs.iter().enumerate() {
            if (x - grid.x(i)).abs() > tol {
                return Err(Error::Parse {
                    line: i + 2,
                    message: format!("non-uniform grid at x = {x}"),
                });
            }
        }
        let r = vs[0];
        if (vs[vs.len() - 1] - r).abs() <= BOUNDARY_TOLERANCE * r.abs() {
            ProfileCurve::admissible(grid, vs, r)
        } else {
            ProfileCurve::new(grid, vs)
        }
    }
}

// Slope between index-points a < b.
fn index_slope(v: &[f64], a: usize, b: usize) -> f64 {
    (v[b] - v[a]) / (b - a) as f64
}

/// Nodal values of the greatest convex function below the piecewise-linear
/// profile.
///
/// Lower hull by monotone chain over `(i, v_i)`; nodes strictly between two
/// hull vertices are interpolated linearly. Nearly collinear vertices (slope
/// change below a few ulps of the data) are dropped so that the result is a
/// fixed point of the operation.
pub fn convex_envelope(p: &ProfileCurve) -> ProfileCurve {
    let v = &p.values;
    let scale = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let tol = 64.0 * f64::EPSILON * scale;
    let mut hull: Vec<usize> = Vec::with_capacity(v.len());
    for i in 0..v.len() {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            if index_slope(v, a, b) >= index_slope(v, b, i) - tol {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    let mut out = v.clone();
    for seg in hull.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let span = (b - a) as f64;
        for (k, slot) in out.iter_mut().enumerate().take(b).skip(a + 1) {
            *slot = v[a] + (v[b] - v[a]) * ((k - a) as f64 / span);
        }
    }
    p.with_values(out)
}

/// Nodal maximum `p ∨ cat`. The catenary must pass through `(±h, r)`.
pub fn max_with(p: &ProfileCurve, cat: &CatenaryProfile) -> Result<ProfileCurve> {
    let r = p
        .boundary
        .ok_or_else(|| Error::Mismatch("max_with needs an admissible profile".into()))?;
    let h = p.grid.h();
    for end in [-h, h] {
        if (cat.value(end) - r).abs() > 1e-9 * r {
            return Err(Error::Mismatch(format!(
                "catenary reaches {} at x = {end}, profile boundary is {r}",
                cat.value(end)
            )));
        }
    }
    let n = p.values.len();
    let values = p
        .values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            if i == 0 || i == n - 1 {
                v
            } else {
                v.max(cat.value(p.grid.x(i)))
            }
        })
        .collect();
    Ok(p.with_values(values))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    Left,
    Right,
}

/// Reflects the chosen half across `x = 0`.
pub fn symmetrize(p: &ProfileCurve, side: Side) -> ProfileCurve {
    let n = p.grid.n_cells();
    let values = (0..=n)
        .map(|i| {
            let j = match side {
                Side::Left => i.min(n - i),
                Side::Right => i.max(n - i),
            };
            p.values[j]
        })
        .collect();
    p.with_values(values)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShapeReport {
    pub is_even: bool,
    pub is_convex: bool,
    pub min_value: f64,
    pub max_slope: f64,
    /// `max |ρ(x) − ρ(−x)|`.
    pub evenness_defect: f64,
    /// Most negative consecutive slope difference (0 when convex).
    pub convexity_defect: f64,
}

pub fn shape_report(p: &ProfileCurve) -> ShapeReport {
    let n = p.grid.n_cells();
    let evenness_defect = (0..=n)
        .map(|i| (p.values[i] - p.values[n - i]).abs())
        .fold(0.0, f64::max);
    let slopes = p.cell_slopes();
    let convexity_defect = slopes
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(0.0, f64::min);
    ShapeReport {
        is_even: evenness_defect <= EVEN_TOLERANCE,
        is_convex: convexity_defect >= -CONVEX_TOLERANCE,
        min_value: p.values.iter().copied().fold(f64::INFINITY, f64::min),
        max_slope: slopes.iter().fold(0.0, |m, s| m.max(s.abs())),
        evenness_defect,
        convexity_defect,
    }
}
