//! The energy `E_c` of a piecewise-linear profile, its exact gradient, the
//! relaxed area functional, and the full director energy.
//!
//! Each cell has constant slope `s` and linear `ρ` from `a` to `b`, so
//! both terms integrate in closed form:
//!
//! ```text
//! area    = √(1 + s²) · Δx · (a + b)/2
//! nematic = s²/√(1 + s²) · ∫ dx/ρ,   ∫ dx/ρ = Δx · ln(b/a)/(b − a)
//! ```
//!
//! The discrete functional is therefore the continuum functional restricted
//! to piecewise-linear profiles, and inequalities such as the decrease
//! under convexification hold for it up to rounding.

mod director;

pub use director::{director_energy, DirectorEnergy, DirectorField, DEFAULT_AZIMUTHAL_SAMPLES};

use serde::{Deserialize, Serialize};

use crate::catenary::{slope_density, slope_density_derivative};
use crate::error::{domain, Error, Result};
use crate::profile::{Grid, ProfileCurve};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyBreakdown {
    /// `∫ ρ √(1 + ρ'²)`
    pub area: f64,
    /// `∫ ρ'² / (ρ √(1 + ρ'²))`
    pub nematic: f64,
    /// `area + c · nematic`
    pub total: f64,
    pub c: f64,
}

/// Surface tension `γ` and nematic constant `κ`; `c = κ / (2γ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub gamma: f64,
    pub kappa: f64,
}

impl PhysicalParams {
    pub fn new(gamma: f64, kappa: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) || !(kappa >= 0.0 && kappa.is_finite()) {
            return Err(Error::InvalidParameters(format!(
                "need γ > 0 and κ ≥ 0, got γ = {gamma}, κ = {kappa}"
            )));
        }
        Ok(Self { gamma, kappa })
    }

    pub fn c(&self) -> f64 {
        self.kappa / (2.0 * self.gamma)
    }
}

/// `ln(1 + t) / t`, continuous at `t = 0`.
fn log_ratio(t: f64) -> f64 {
    if t == 0.0 {
        1.0
    } else {
        t.ln_1p() / t
    }
}

/// `(ln(1 + t)/t − 1) / t`, continuous at `t = 0`.
fn log_ratio_slope(t: f64) -> f64 {
    if t.abs() < 1e-3 {
        // -1/2 + t/3 - t²/4 + t³/5 - t⁴/6 + t⁵/7
        let mut acc = 0.0;
        for k in (0..6).rev() {
            let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
            acc = acc * t + sign / (k + 2) as f64;
        }
        acc
    } else {
        (t.ln_1p() / t - 1.0) / t
    }
}

/// `∫_cell dx/ρ` for linear `ρ` from `a` to `b` over a cell of width `dx`.
pub(crate) fn inverse_integral(a: f64, b: f64, dx: f64) -> f64 {
    dx / a * log_ratio((b - a) / a)
}

/// Partial derivative of `inverse_integral` with respect to `a`.
fn inverse_integral_da(a: f64, b: f64, dx: f64) -> f64 {
    dx * log_ratio_slope((b - a) / a) / (a * a)
}

pub(crate) fn check_values(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !(*v > 0.0 && v.is_finite())) {
        Some(index) => Err(Error::Positivity {
            index,
            value: values[index],
        }),
        None => Ok(()),
    }
}

fn check_c(c: f64) -> Result<()> {
    if !(c >= 0.0 && c.is_finite()) {
        return Err(domain("energy", format!("c must be ≥ 0, got {c}")));
    }
    Ok(())
}

/// Per-cell contributions `(area, nematic)`.
fn cell_terms(a: f64, b: f64, dx: f64) -> (f64, f64) {
    let s = (b - a) / dx;
    let q = (1.0 + s * s).sqrt();
    (q * dx * 0.5 * (a + b), slope_density(s) * inverse_integral(a, b, dx))
}

/// Energy of raw nodal values on `grid`.
pub fn evaluate_values(grid: &Grid, values: &[f64], c: f64) -> Result<EnergyBreakdown> {
    check_c(c)?;
    if values.len() != grid.n_nodes() {
        return Err(Error::Mismatch(format!(
            "{} values for {} nodes",
            values.len(),
            grid.n_nodes()
        )));
    }
    check_values(values)?;
    let dx = grid.dx();
    let (mut area, mut nematic) = (0.0, 0.0);
    for w in values.windows(2) {
        let (a, n) = cell_terms(w[0], w[1], dx);
        area += a;
        nematic += n;
    }
    Ok(EnergyBreakdown {
        area,
        nematic,
        total: area + c * nematic,
        c,
    })
}

/// `E_c` of the piecewise-linear profile, integrated exactly per cell.
pub fn evaluate(p: &ProfileCurve, c: f64) -> Result<EnergyBreakdown> {
    evaluate_values(&p.grid(), p.values(), c)
}

/// Exact partial derivatives of the discrete total with respect to every
/// nodal value; the two boundary entries are zero.
pub fn gradient_values(grid: &Grid, values: &[f64], c: f64) -> Result<Vec<f64>> {
    check_c(c)?;
    check_values(values)?;
    let dx = grid.dx();
    let n = values.len();
    let mut g = vec![0.0; n];
    for i in 0..n - 1 {
        let (a, b) = (values[i], values[i + 1]);
        let s = (b - a) / dx;
        let q = (1.0 + s * s).sqrt();
        // area: √(1+s²) dx (a+b)/2
        let da_slope = s / q * 0.5 * (a + b);
        let area_a = -da_slope + 0.5 * q * dx;
        let area_b = da_slope + 0.5 * q * dx;
        // nematic: f(s) J(a, b)
        let (fs, dfs) = (slope_density(s), slope_density_derivative(s));
        let j = inverse_integral(a, b, dx);
        let nem_a = -dfs * j / dx + fs * inverse_integral_da(a, b, dx);
        let nem_b = dfs * j / dx + fs * inverse_integral_da(b, a, dx);
        g[i] += area_a + c * nem_a;
        g[i + 1] += area_b + c * nem_b;
    }
    g[0] = 0.0;
    g[n - 1] = 0.0;
    Ok(g)
}

pub fn gradient(p: &ProfileCurve, c: f64) -> Result<Vec<f64>> {
    gradient_values(&p.grid(), p.values(), c)
}

/// Relaxed area functional `∫ ρ √(1 + ρ'²) + r² − (ρ(−h)² + ρ(h)²)/2` for
/// profiles whose endpoint values do not exceed `r`.
pub fn relaxed_e0(p: &ProfileCurve, r: f64) -> Result<f64> {
    let v = p.values();
    let (left, right) = (v[0], v[v.len() - 1]);
    let slack = 1e-12 * r;
    if left > r + slack || right > r + slack {
        return Err(domain(
            "relaxed_e0",
            format!("endpoint values {left}, {right} exceed r = {r}"),
        ));
    }
    let e = evaluate(p, 0.0)?;
    Ok(e.area + r * r - 0.5 * (left * left + right * right))
}
