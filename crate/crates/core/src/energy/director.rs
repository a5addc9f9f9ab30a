//! Full elastic energy of a tangent director field on the revolution
//! surface, written through the angle `α(x, φ)` the director makes with
//! the meridian direction.
//!
//! With `Z(φ, x) = (ρ cos φ, ρ sin φ, x)` the energy splits as
//!
//! ```text
//! I1 = 2πγ ∫ ρ√(1+ρ'²) + (κ/2γ) ρ'²/(ρ√(1+ρ'²)) dx
//! I2 = (κ/2) ∬ ρ/√(1+ρ'²) α_x² dx dφ
//! I3 = (κ/2) ∬ √(1+ρ'²)/ρ α_φ² dx dφ
//! I4 = −(κ/2) ∬ 2ρ'/ρ α_φ dx dφ
//! ```
//!
//! `α` is sampled on the profile's axial nodes times `n_phi` azimuthal
//! samples covering `[0, 2π]` inclusive. In `x` the weights are integrated
//! exactly per cell for the linear profile; in `φ` the periodic trapezoid
//! rule is used, so `I4` telescopes to `α(x, 2π) − α(x, 0)`.

use std::f64::consts::PI;

use serde::Serialize;

use super::{evaluate, inverse_integral};
use crate::error::{Error, Result};
use crate::profile::{Grid, ProfileCurve};

use super::PhysicalParams;

pub const DEFAULT_AZIMUTHAL_SAMPLES: usize = 129;

/// Largest allowed `|α(x, 2π) − α(x, 0)|`.
pub const PERIODICITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct DirectorField {
    grid: Grid,
    n_phi: usize,
    /// Axial-major: `alpha[i * n_phi + j]` at `(x_i, φ_j)`.
    alpha: Vec<f64>,
}

impl DirectorField {
    pub fn new(grid: Grid, n_phi: usize, alpha: Vec<f64>) -> Result<Self> {
        if n_phi < 3 {
            return Err(Error::Resolution {
                needed: 3,
                got: n_phi,
            });
        }
        if alpha.len() != grid.n_nodes() * n_phi {
            return Err(Error::Mismatch(format!(
                "{} angle samples for a {}×{} grid",
                alpha.len(),
                grid.n_nodes(),
                n_phi
            )));
        }
        if let Some(bad) = alpha.iter().find(|a| !a.is_finite()) {
            return Err(Error::Mismatch(format!("non-finite angle sample {bad}")));
        }
        let max_gap = (0..grid.n_nodes())
            .map(|i| (alpha[i * n_phi + n_phi - 1] - alpha[i * n_phi]).abs())
            .fold(0.0, f64::max);
        if max_gap > PERIODICITY_TOLERANCE {
            return Err(Error::Periodicity { max_gap });
        }
        Ok(Self { grid, n_phi, alpha })
    }

    pub fn from_fn(grid: Grid, n_phi: usize, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if n_phi < 2 {
            return Err(Error::Resolution {
                needed: 3,
                got: n_phi,
            });
        }
        let dphi = 2.0 * PI / (n_phi - 1) as f64;
        let mut alpha = Vec::with_capacity(grid.n_nodes() * n_phi);
        for x in grid.nodes() {
            for j in 0..n_phi {
                alpha.push(f(x, j as f64 * dphi));
            }
        }
        Self::new(grid, n_phi, alpha)
    }

    pub fn constant(grid: Grid, n_phi: usize, value: f64) -> Result<Self> {
        Self::from_fn(grid, n_phi, |_, _| value)
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.alpha[i * self.n_phi + j]
    }

    fn dphi(&self) -> f64 {
        2.0 * PI / (self.n_phi - 1) as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirectorEnergy {
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub i4: f64,
    pub total: f64,
}

pub fn director_energy(
    p: &ProfileCurve,
    field: &DirectorField,
    phys: &PhysicalParams,
) -> Result<DirectorEnergy> {
    let grid = p.grid();
    if field.grid != grid {
        return Err(Error::Mismatch(format!(
            "director grid ({} nodes on h = {}) differs from profile grid ({} nodes on h = {})",
            field.grid.n_nodes(),
            field.grid.h(),
            grid.n_nodes(),
            grid.h()
        )));
    }
    let e = evaluate(p, phys.c())?;
    let i1 = 2.0 * PI * phys.gamma * e.total;

    let (dx, dphi, m) = (grid.dx(), field.dphi(), field.n_phi);
    let v = p.values();
    // ∫ α_φ² dφ and ∫ α_φ dφ at axial node i
    let azimuthal = |i: usize| {
        let (mut sq, mut lin) = (0.0, 0.0);
        for j in 0..m - 1 {
            let d = field.at(i, j + 1) - field.at(i, j);
            sq += d * d / dphi;
            lin += d;
        }
        (sq, lin)
    };

    let (mut s2, mut s3, mut s4) = (0.0, 0.0, 0.0);
    let mut left = azimuthal(0);
    for i in 0..grid.n_cells() {
        let (a, b) = (v[i], v[i + 1]);
        let s = (b - a) / dx;
        let q = (1.0 + s * s).sqrt();
        let w_x = 0.5 * (a + b) * dx / q;
        let w_inv = inverse_integral(a, b, dx);
        let ax2: f64 = (0..m - 1)
            .map(|j| {
                let d = (field.at(i + 1, j) - field.at(i, j)) / dx;
                d * d * dphi
            })
            .sum();
        let right = azimuthal(i + 1);
        s2 += w_x * ax2;
        s3 += q * w_inv * 0.5 * (left.0 + right.0);
        s4 += 2.0 * s * w_inv * 0.5 * (left.1 + right.1);
        left = right;
    }
    let half_kappa = 0.5 * phys.kappa;
    let (i2, i3, i4) = (half_kappa * s2, half_kappa * s3, -half_kappa * s4);
    Ok(DirectorEnergy {
        i1,
        i2,
        i3,
        i4,
        total: i1 + i2 + i3 + i4,
    })
}
