//! Direct minimization of the discrete functional over admissible nodal
//! profiles, independent of the Euler-Lagrange equation.
//!
//! Each iteration takes a projected descent step on the interior values
//! with Armijo backtracking. By default the step direction is the gradient
//! preconditioned by the weighted Laplacian of the per-cell integrand's
//! second slope derivative, which keeps the iteration count independent of
//! the grid. The convex envelope is applied periodically and the result is
//! symmetrized at the end; both moves are kept only if they do not raise
//! the energy. Once energy changes drop below the resolution of the totals
//! the line search measures them by integrating the gradient along the
//! step, so recorded totals are nonincreasing up to rounding of order `ε·E`.

use serde::Serialize;

use crate::catenary::{catenary_profile, solve_pi, Branch};
use crate::elsolver::{el_residual, first_integral_residual};
use crate::energy::{evaluate, evaluate_values, gradient_values, EnergyBreakdown};
use crate::error::{Error, Result};
use crate::params::Parameters;
use crate::profile::{convex_envelope, shape_report, symmetrize, Grid, ProfileCurve, ShapeReport, Side};

const ARMIJO_FACTOR: f64 = 0.5;
const ARMIJO_SLOPE: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 60;
/// Positivity clamp as a fraction of `r`.
const FLOOR: f64 = 1e-9;
/// Relative energy change below which totals are compared through the
/// gradient instead.
const RESOLVABLE: f64 = 1e-11;

#[derive(Debug, Clone, PartialEq)]
pub enum Init {
    /// Stable catenary when it exists, otherwise the chord.
    Catenary,
    /// The constant profile `ρ ≡ r`.
    Chord,
    /// Explicit nodal values; endpoints must equal `r`.
    Custom(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimizeOptions {
    pub grid: Grid,
    pub max_iters: usize,
    /// Stop once `max |∂E/∂ρ_i| / (Δx·(r + c/r))` falls below this; the
    /// denominator is the size of the area and nematic forces.
    pub grad_tol: f64,
    pub envelope_every: usize,
    pub init: Init,
    /// Use the weighted-Laplacian preconditioner; plain gradient steps
    /// otherwise.
    pub preconditioned: bool,
}

impl MinimizeOptions {
    pub fn new(grid: Grid) -> Self {
        Self {
            grid,
            max_iters: 20_000,
            grad_tol: 1e-9,
            envelope_every: 25,
            init: Init::Catenary,
            preconditioned: true,
        }
    }

    pub fn with_nodes(h: f64, n_nodes: usize) -> Result<Self> {
        Ok(Self::new(Grid::with_nodes(h, n_nodes)?))
    }

    fn validate(&self, params: &Parameters) -> Result<()> {
        if self.max_iters < 1 || !(self.grad_tol > 0.0) || self.envelope_every < 1 {
            return Err(Error::InvalidParameters(format!(
                "need max_iters ≥ 1, grad_tol > 0, envelope_every ≥ 1; got {}, {}, {}",
                self.max_iters, self.grad_tol, self.envelope_every
            )));
        }
        if (self.grid.h() - params.h).abs() > 1e-12 * params.h {
            return Err(Error::Mismatch(format!(
                "grid half-width {} differs from h = {}",
                self.grid.h(),
                params.h
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimizeResult {
    pub profile: ProfileCurve,
    pub energy: EnergyBreakdown,
    pub iterations: usize,
    pub converged: bool,
    pub shape: ShapeReport,
    /// Scaled gradient norm at exit.
    pub grad_norm: f64,
    /// Energy after every accepted move.
    pub history: Vec<f64>,
}

impl MinimizeResult {
    /// Largest `(E_{k+1} − E_k) / E_k` over the history; positive values
    /// are rounding in the totals.
    pub fn max_relative_increase(&self) -> f64 {
        self.history
            .windows(2)
            .map(|w| (w[1] - w[0]) / w[0].abs())
            .fold(0.0, f64::max)
    }
}

fn initial_values(params: &Parameters, opts: &MinimizeOptions) -> Result<Vec<f64>> {
    let Parameters { h, r, .. } = *params;
    let grid = opts.grid;
    match &opts.init {
        Init::Chord => Ok(vec![r; grid.n_nodes()]),
        Init::Catenary => match solve_pi(h, r, 1e-12).ok().filter(|s| s.pi0.is_some()) {
            Some(sol) => {
                let cat = catenary_profile(&sol, Branch::Stable)?;
                Ok(ProfileCurve::from_catenary(grid, &cat, r)?.into_values())
            }
            None => Ok(vec![r; grid.n_nodes()]),
        },
        Init::Custom(v) => Ok(ProfileCurve::admissible(grid, v.clone(), r)?.into_values()),
    }
}

/// Solves `P d = g` for the interior nodes, `P` the tridiagonal matrix of
/// `Σ_cells w (d_{i+1} − d_i)² / Δx` with zero boundary values.
fn precondition(values: &[f64], g: &[f64], dx: f64, c: f64) -> Vec<f64> {
    let n = values.len();
    let w: Vec<f64> = values
        .windows(2)
        .map(|p| {
            let s = (p[1] - p[0]) / dx;
            let q2 = 1.0 + s * s;
            let mean = 0.5 * (p[0] + p[1]);
            let area = mean / (q2 * q2.sqrt());
            let nematic = c * (2.0 - s * s).max(0.1) / (mean * q2 * q2 * q2.sqrt());
            (area + nematic) / dx
        })
        .collect();
    // Thomas algorithm over unknowns 1..n-1
    let m = n - 2;
    let mut cp = vec![0.0; m];
    let mut dp = vec![0.0; m];
    for k in 0..m {
        let i = k + 1;
        let diag = w[i - 1] + w[i];
        let lower = if k > 0 { -w[i - 1] } else { 0.0 };
        let upper = -w[i];
        let denom = diag - lower * if k > 0 { cp[k - 1] } else { 0.0 };
        cp[k] = upper / denom;
        dp[k] = (g[i] - lower * if k > 0 { dp[k - 1] } else { 0.0 }) / denom;
    }
    let mut out = vec![0.0; n];
    for k in (0..m).rev() {
        out[k + 1] = dp[k] - if k + 1 < m { cp[k] * out[k + 2] } else { 0.0 };
    }
    out
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `E(v + step) − E(v)` as `∫₀¹ ∇E(v + τ·step)·step dτ` by Simpson's rule.
/// Differences of the totals lose everything below `ε·E`; the gradient
/// route resolves them down to the gradient's own rounding.
fn simpson_change(grid: &Grid, v: &[f64], step: &[f64], c: f64, slope0: f64) -> Result<f64> {
    let at = |tau: f64| -> Result<f64> {
        let point: Vec<f64> = v.iter().zip(step).map(|(x, d)| x + tau * d).collect();
        Ok(dot(&gradient_values(grid, &point, c)?, step))
    };
    Ok((slope0 + 4.0 * at(0.5)? + at(1.0)?) / 6.0)
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Projected (preconditioned) gradient descent on `E_c`.
pub fn minimize(params: &Parameters, opts: &MinimizeOptions) -> Result<MinimizeResult> {
    opts.validate(params)?;
    let Parameters { r, c, .. } = *params;
    let grid = opts.grid;
    let dx = grid.dx();
    let floor = FLOOR * r;
    let energy = |v: &[f64]| evaluate_values(&grid, v, c).map(|e| e.total);

    let mut v = initial_values(params, opts)?;
    let mut e = energy(&v)?;
    let mut history = vec![e];
    let mut converged = false;
    let mut iterations = 0;
    let mut grad_norm = f64::INFINITY;

    while iterations < opts.max_iters {
        let g = gradient_values(&grid, &v, c)?;
        grad_norm = sup(&g) / (dx * (r + c / r));
        if grad_norm <= opts.grad_tol {
            converged = true;
            break;
        }
        iterations += 1;
        let (dir, mut t) = if opts.preconditioned {
            (precondition(&v, &g, dx, c), 1.0)
        } else {
            (g.clone(), r / sup(&g))
        };
        let mut accepted = false;
        for _ in 0..MAX_BACKTRACKS {
            let trial: Vec<f64> = v
                .iter()
                .zip(&dir)
                .map(|(x, d)| (x - t * d).max(floor))
                .collect();
            let step: Vec<f64> = trial.iter().zip(&v).map(|(a, b)| a - b).collect();
            if step.iter().all(|d| *d == 0.0) {
                break;
            }
            let slope = dot(&g, &step);
            let et = energy(&trial)?;
            let change = if (et - e).abs() > RESOLVABLE * e.abs() {
                et - e
            } else {
                simpson_change(&grid, &v, &step, c, slope)?
            };
            if change <= ARMIJO_SLOPE * slope && change <= 0.0 {
                v = trial;
                e = et;
                history.push(e);
                accepted = true;
                break;
            }
            t *= ARMIJO_FACTOR;
        }
        if !accepted {
            // no representable step lowers the energy
            break;
        }
        if iterations % opts.envelope_every == 0 {
            let env = convex_envelope(&ProfileCurve::admissible(grid, v.clone(), r)?).into_values();
            let ee = energy(&env)?;
            if ee <= e {
                v = env;
                e = ee;
                history.push(e);
            }
        }
    }

    let mut p = ProfileCurve::admissible(grid, v, r)?;
    for step in 0..3 {
        let candidate = if step == 1 {
            let left = symmetrize(&p, Side::Left);
            let right = symmetrize(&p, Side::Right);
            if evaluate(&left, c)?.total <= evaluate(&right, c)?.total {
                left
            } else {
                right
            }
        } else {
            convex_envelope(&p)
        };
        let ec = evaluate(&candidate, c)?.total;
        if ec <= e {
            p = candidate;
            e = ec;
            history.push(e);
        }
    }
    let energy = evaluate(&p, c)?;
    Ok(MinimizeResult {
        shape: shape_report(&p),
        profile: p,
        energy,
        iterations,
        converged,
        grad_norm,
        history,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepEntry {
    pub c: f64,
    pub apex: f64,
    /// `max |ρ_c − r|`
    pub sup_distance: f64,
    pub energy: Option<EnergyBreakdown>,
    pub converged: bool,
    pub error: Option<String>,
}

/// Runs [`minimize`] for each `c`, warm-starting from the previous profile.
/// A failed entry is reported with `error` set and the next entry restarts
/// from the default initialization.
pub fn sweep_c(base: &Parameters, c_values: &[f64], opts: &MinimizeOptions) -> Result<Vec<SweepEntry>> {
    if c_values.iter().any(|c| !(*c >= 0.0 && c.is_finite())) || c_values.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameters(format!(
            "c values must be nonnegative and ascending, got {c_values:?}"
        )));
    }
    let mut out = Vec::with_capacity(c_values.len());
    let mut warm: Option<Vec<f64>> = None;
    for &c in c_values {
        let mut run = opts.clone();
        if let Some(v) = warm.take() {
            run.init = Init::Custom(v);
        }
        match base.with_c(c).and_then(|p| minimize(&p, &run)) {
            Ok(res) => {
                let sup_distance = res
                    .profile
                    .values()
                    .iter()
                    .map(|v| (v - base.r).abs())
                    .fold(0.0, f64::max);
                out.push(SweepEntry {
                    c,
                    apex: res.profile.apex(),
                    sup_distance,
                    energy: Some(res.energy),
                    converged: res.converged,
                    error: None,
                });
                warm = Some(res.profile.into_values());
            }
            Err(err) => out.push(SweepEntry {
                c,
                apex: f64::NAN,
                sup_distance: f64::NAN,
                energy: None,
                converged: false,
                error: Some(err.to_string()),
            }),
        }
    }
    Ok(out)
}

/// Whether the apex values of the successful entries increase with `c`.
pub fn apex_monotone(entries: &[SweepEntry]) -> bool {
    let apexes: Vec<f64> = entries.iter().filter(|e| e.error.is_none()).map(|e| e.apex).collect();
    apexes.windows(2).all(|w| w[1] > w[0])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub value: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Checklist {
    pub checks: Vec<Check>,
    /// `min(ρ − ρ₀, r − ρ)` over interior nodes; `ρ₀ ≡ 0` when no catenary
    /// spans the rings.
    pub barrier_margin: f64,
}

impl Checklist {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub const EVEN_BOUND: f64 = 1e-6;
pub const CONVEX_BOUND: f64 = -1e-10;
pub const EL_BOUND: f64 = 1e-3;
pub const DRIFT_CHECK_BOUND: f64 = 1e-3;

/// Evenness, convexity, the strict barrier `ρ₀ < ρ < r` and the
/// Euler-Lagrange residual / first-integral drift of a profile.
pub fn verify_profile(p: &ProfileCurve, params: &Parameters) -> Result<Checklist> {
    let Parameters { h, r, c } = *params;
    let v = p.values();
    let grid = p.grid();
    let n = grid.n_cells();
    let dx = grid.dx();

    let evenness = (0..=n).map(|i| (v[i] - v[n - i]).abs()).fold(0.0, f64::max);
    let min_second = v
        .windows(3)
        .map(|w| w[0] - 2.0 * w[1] + w[2])
        .fold(f64::INFINITY, f64::min);

    let lower = solve_pi(h, r, 1e-12)
        .ok()
        .filter(|s| s.pi0.is_some())
        .map(|s| catenary_profile(&s, Branch::Stable))
        .transpose()?;
    let barrier_margin = (1..n)
        .map(|i| {
            let x = grid.x(i);
            let below = lower.map_or(0.0, |cat| cat.value(x));
            (v[i] - below).min(r - v[i])
        })
        .fold(f64::INFINITY, f64::min);

    let el = el_residual(p, c)?;
    let apex = v[grid.center()];
    let drift = (1..n)
        .map(|i| {
            let slope = (v[i + 1] - v[i - 1]) / (2.0 * dx);
            first_integral_residual(v[i], slope, c, apex).map(f64::abs)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);

    Ok(Checklist {
        checks: vec![
            Check {
                name: "even",
                passed: evenness <= EVEN_BOUND,
                value: evenness,
                bound: EVEN_BOUND,
            },
            Check {
                name: "convex",
                passed: min_second > CONVEX_BOUND,
                value: min_second,
                bound: CONVEX_BOUND,
            },
            Check {
                name: "barrier",
                passed: barrier_margin > 0.0,
                value: barrier_margin,
                bound: 0.0,
            },
            Check {
                name: "euler_lagrange",
                passed: el <= EL_BOUND,
                value: el,
                bound: EL_BOUND,
            },
            Check {
                name: "first_integral",
                passed: drift <= DRIFT_CHECK_BOUND * r,
                value: drift,
                bound: DRIFT_CHECK_BOUND * r,
            },
        ],
        barrier_margin,
    })
}

/// [`verify_profile`] on a minimizer result, plus its convergence flag.
pub fn verify_theorem_properties(result: &MinimizeResult, params: &Parameters) -> Result<Checklist> {
    let mut list = verify_profile(&result.profile, params)?;
    list.checks.insert(
        0,
        Check {
            name: "converged",
            passed: result.converged,
            value: result.grad_norm,
            bound: f64::NAN,
        },
    );
    Ok(list)
}
