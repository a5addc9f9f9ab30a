//! Shooting solutions of the Euler-Lagrange equation
//!
//! ```text
//! ρ'' = (1+ρ'²)((c+ρ²)ρ'² + ρ²) / (ρ(ρ²ρ'² + c(2−ρ'²) + ρ²))
//! ```
//!
//! with `ρ(±h) = r`. Minimizers are even, so the equation is integrated
//! from the apex `ρ(0) = a`, `ρ'(0) = 0` out to `x = h` and `a` is tuned
//! until `ρ(h) = r`. Solutions are certified with the first integral
//!
//! ```text
//! c ρ'²/(ρ(1+ρ'²)^{3/2}) − ρ/√(1+ρ'²) = −a
//! ```
//!
//! and with the finite-difference residual of the equation itself.

use serde::Serialize;

use crate::catenary::{constants, solve_pi};
use crate::error::{domain, Error, Result};
use crate::params::Parameters;
use crate::profile::{Grid, ProfileCurve};
use crate::roots::bisect;

/// Number of RK4 steps per unit `2h` used when no step is given.
pub const DEFAULT_STEPS_PER_SPAN: usize = 8000;
pub const DEFAULT_SCAN_POINTS: usize = 256;
/// Cells of the uniform grid on which certificates evaluate the EL residual.
pub const CERTIFICATION_CELLS: usize = 2000;

pub const DRIFT_BOUND: f64 = 1e-8;
pub const EL_RESIDUAL_BOUND: f64 = 1e-5;

/// Right-hand side `ρ''` of the Euler-Lagrange equation.
pub fn el_rhs(rho: f64, rho_prime: f64, c: f64) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(domain("el_rhs", format!("ρ must be positive, got {rho}")));
    }
    let p2 = rho_prime * rho_prime;
    if c > 0.0 && p2 >= 2.0 {
        return Err(domain(
            "el_rhs",
            format!("|ρ'| = {} is outside the band |ρ'| < √2", rho_prime.abs()),
        ));
    }
    let r2 = rho * rho;
    let den = rho * (r2 * p2 + c * (2.0 - p2) + r2);
    if !(den > 0.0) {
        return Err(domain("el_rhs", format!("denominator {den} not positive")));
    }
    Ok((1.0 + p2) * ((c + r2) * p2 + r2) / den)
}

/// `c ρ'²/(ρ(1+ρ'²)^{3/2}) − ρ/√(1+ρ'²) + apex`, zero along exact solutions.
pub fn first_integral_residual(rho: f64, rho_prime: f64, c: f64, apex: f64) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(domain(
            "first_integral_residual",
            format!("ρ must be positive, got {rho}"),
        ));
    }
    let q = (1.0 + rho_prime * rho_prime).sqrt();
    Ok(c * rho_prime * rho_prime / (rho * q * q * q) - rho / q + apex)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Stop {
    Completed,
    /// `|ρ'|` reached the admissible slope bound at `x`.
    SlopeGuard { x: f64 },
    /// `ρ` left `(0, 2r)` at `x`.
    LeftBand { x: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub apex: f64,
    pub c: f64,
    pub x: Vec<f64>,
    pub rho: Vec<f64>,
    pub rho_prime: Vec<f64>,
    pub stop: Stop,
}

impl Trajectory {
    pub fn completed(&self) -> bool {
        self.stop == Stop::Completed
    }

    pub fn end_value(&self) -> f64 {
        self.rho[self.rho.len() - 1]
    }

    /// Largest `|first_integral_residual|` over the samples.
    pub fn drift(&self) -> f64 {
        self.rho
            .iter()
            .zip(&self.rho_prime)
            .map(|(&y, &p)| {
                first_integral_residual(y, p, self.c, self.apex)
                    .map(f64::abs)
                    .unwrap_or(f64::INFINITY)
            })
            .fold(0.0, f64::max)
    }
}

/// Slope bound enforced during integration: `z0` under the standing
/// assumption `h/r ≤ ω`, otherwise the edge `√2` of the equation's domain.
pub fn slope_guard(params: &Parameters) -> f64 {
    if params.outside_standing_assumption() {
        std::f64::consts::SQRT_2
    } else {
        constants().z0
    }
}

fn default_step(h: f64) -> f64 {
    2.0 * h / DEFAULT_STEPS_PER_SPAN as f64
}

/// Classical RK4 for `(ρ, ρ')' = (ρ', el_rhs)` on `[0, h]` from `(apex, 0)`.
///
/// Uses `ceil(h/step)` equal steps. Integration stops early, with a flag,
/// when `|ρ'|` reaches [`slope_guard`] or `ρ` leaves `(0, 2r)`.
pub fn integrate_from_apex(apex: f64, params: &Parameters, step: f64) -> Result<Trajectory> {
    if !(apex > 0.0 && apex.is_finite()) {
        return Err(domain("integrate_from_apex", format!("apex must be positive, got {apex}")));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(domain("integrate_from_apex", format!("step must be positive, got {step}")));
    }
    let Parameters { h, r, c } = *params;
    let n = (h / step).ceil().max(1.0) as usize;
    let dt = h / n as f64;
    let guard = slope_guard(params);
    let f = |y: f64, p: f64| el_rhs(y, p, c);

    let mut traj = Trajectory {
        apex,
        c,
        x: Vec::with_capacity(n + 1),
        rho: Vec::with_capacity(n + 1),
        rho_prime: Vec::with_capacity(n + 1),
        stop: Stop::Completed,
    };
    let (mut y, mut p) = (apex, 0.0);
    traj.x.push(0.0);
    traj.rho.push(y);
    traj.rho_prime.push(p);
    for k in 0..n {
        let x = h * (k as f64 / n as f64);
        let stage = || -> Result<(f64, f64)> {
            let k1 = (p, f(y, p)?);
            let k2 = (p + 0.5 * dt * k1.1, f(y + 0.5 * dt * k1.0, p + 0.5 * dt * k1.1)?);
            let k3 = (p + 0.5 * dt * k2.1, f(y + 0.5 * dt * k2.0, p + 0.5 * dt * k2.1)?);
            let k4 = (p + dt * k3.1, f(y + dt * k3.0, p + dt * k3.1)?);
            Ok((
                y + dt / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
                p + dt / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
            ))
        };
        let (ny, np) = match stage() {
            Ok(next) => next,
            Err(_) => {
                traj.stop = if y <= 0.0 {
                    Stop::LeftBand { x }
                } else {
                    Stop::SlopeGuard { x }
                };
                return Ok(traj);
            }
        };
        let nx = h * ((k + 1) as f64 / n as f64);
        if !(ny > 0.0 && ny < 2.0 * r) {
            traj.stop = Stop::LeftBand { x: nx };
            return Ok(traj);
        }
        if np.abs() >= guard {
            traj.stop = Stop::SlopeGuard { x: nx };
            return Ok(traj);
        }
        y = ny;
        p = np;
        traj.x.push(nx);
        traj.rho.push(y);
        traj.rho_prime.push(p);
    }
    Ok(traj)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootOptions {
    /// RK4 step; `None` means `2h/8000`.
    pub step: Option<f64>,
    /// Required `|ρ(h) − r| / r`.
    pub tolerance: f64,
    pub scan_points: usize,
}

impl Default for ShootOptions {
    fn default() -> Self {
        Self {
            step: None,
            tolerance: 1e-10,
            scan_points: DEFAULT_SCAN_POINTS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub x: f64,
    pub rho: f64,
    pub rho_prime: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShootingSolution {
    pub params: Parameters,
    pub apex: f64,
    /// `(x, ρ, ρ')` on `[0, h]` at the RK4 nodes.
    pub samples: Vec<Sample>,
    /// `|ρ(h) − r|`
    pub boundary_residual: f64,
    /// Every apex root found, ascending; `apex` is the largest.
    pub roots: Vec<f64>,
    pub outside_standing_assumption: bool,
}

/// Scan `g(a) = ρ(h; a) − r` over `a ∈ [lo, r]`, bisect every sign change
/// and keep the roots that meet the tolerance.
pub fn shoot(params: &Parameters, opts: &ShootOptions) -> Result<ShootingSolution> {
    let Parameters { h, r, .. } = *params;
    if !(opts.tolerance > 0.0) || opts.scan_points < 2 {
        return Err(Error::InvalidParameters(format!(
            "need tolerance > 0 and at least 2 scan points, got {} and {}",
            opts.tolerance, opts.scan_points
        )));
    }
    let step = opts.step.unwrap_or_else(|| default_step(h));
    let g = |a: f64| match integrate_from_apex(a, params, step) {
        Ok(t) if t.completed() => t.end_value() - r,
        _ => f64::INFINITY,
    };

    let pi1 = solve_pi(h, r, 1e-12).ok().and_then(|s| s.pi1);
    let lo = pi1.unwrap_or(0.0).max(1e-6 * r);
    let m = opts.scan_points;
    let scan: Vec<(f64, f64)> = (0..=m)
        .map(|k| {
            let a = if k == m { r } else { lo + (r - lo) * (k as f64 / m as f64) };
            (a, g(a))
        })
        .collect();

    let mut roots = Vec::new();
    for w in scan.windows(2) {
        let ((a0, g0), (a1, g1)) = (w[0], w[1]);
        if g0 == 0.0 {
            roots.push(a0);
            continue;
        }
        if g0.is_nan() || g1.is_nan() || g0.signum() == g1.signum() || g1 == 0.0 {
            continue;
        }
        let a = bisect(g, a0, a1, f64::EPSILON)?;
        if g(a).abs() <= opts.tolerance * r {
            roots.push(a);
        }
    }
    if let Some(&(a, g_end)) = scan.last() {
        if g_end == 0.0 {
            roots.push(a);
        }
    }
    let apex = match roots.iter().copied().reduce(f64::max) {
        Some(a) => a,
        None => {
            let finite = scan.iter().filter(|(_, v)| v.is_finite()).count();
            let best = scan
                .iter()
                .filter(|(_, v)| v.is_finite())
                .min_by(|x, y| x.1.abs().total_cmp(&y.1.abs()));
            return Err(Error::NoSolution(match best {
                Some((a, v)) => format!(
                    "no sign change of ρ(h; a) − r over {} apex values in [{lo}, {r}] \
                     ({finite} trajectories reached x = h; closest a = {a}, residual {v})",
                    m + 1
                ),
                None => format!(
                    "every trajectory from {} apex values in [{lo}, {r}] left the admissible band",
                    m + 1
                ),
            }));
        }
    };
    let traj = integrate_from_apex(apex, params, step)?;
    let samples = traj
        .x
        .iter()
        .zip(&traj.rho)
        .zip(&traj.rho_prime)
        .map(|((&x, &rho), &rho_prime)| Sample { x, rho, rho_prime })
        .collect();
    Ok(ShootingSolution {
        params: *params,
        apex,
        samples,
        boundary_residual: (traj.end_value() - r).abs(),
        roots,
        outside_standing_assumption: params.outside_standing_assumption(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Certificate {
    pub drift: f64,
    pub el_residual: f64,
    pub max_slope: f64,
    pub slope_bound: f64,
    pub boundary_residual: f64,
    /// Smallest second difference of the reflected samples.
    pub min_second_difference: f64,
    pub even: bool,
    pub strictly_convex: bool,
    pub passed: bool,
}

impl ShootingSolution {
    fn step(&self) -> f64 {
        self.samples[1].x - self.samples[0].x
    }

    /// Samples on `[−h, h]` by even reflection.
    pub fn full(&self) -> Vec<Sample> {
        let mut out: Vec<Sample> = self
            .samples
            .iter()
            .skip(1)
            .rev()
            .map(|s| Sample {
                x: -s.x,
                rho: s.rho,
                rho_prime: -s.rho_prime,
            })
            .collect();
        out.extend_from_slice(&self.samples);
        out
    }

    pub fn max_slope(&self) -> f64 {
        self.samples.iter().map(|s| s.rho_prime.abs()).fold(0.0, f64::max)
    }

    pub fn drift(&self) -> f64 {
        let (c, a) = (self.params.c, self.apex);
        self.samples
            .iter()
            .map(|s| {
                first_integral_residual(s.rho, s.rho_prime, c, a)
                    .map(f64::abs)
                    .unwrap_or(f64::INFINITY)
            })
            .fold(0.0, f64::max)
    }

    /// `(ρ(x), ρ'(x))` by cubic Hermite interpolation of the samples.
    pub fn eval(&self, x: f64) -> (f64, f64) {
        let n = self.samples.len() - 1;
        let dt = self.step();
        let t = (x.abs() / dt).min(n as f64);
        let k = (t.floor() as usize).min(n - 1);
        let s = t - k as f64;
        let (a, b) = (self.samples[k], self.samples[k + 1]);
        let (s2, s3) = (s * s, s * s * s);
        let (h00, h10, h01, h11) = (2.0 * s3 - 3.0 * s2 + 1.0, s3 - 2.0 * s2 + s, -2.0 * s3 + 3.0 * s2, s3 - s2);
        let rho = h00 * a.rho + h10 * dt * a.rho_prime + h01 * b.rho + h11 * dt * b.rho_prime;
        let (d00, d10, d01, d11) = (6.0 * s2 - 6.0 * s, 3.0 * s2 - 4.0 * s + 1.0, -6.0 * s2 + 6.0 * s, 3.0 * s2 - 2.0 * s);
        let slope = (d00 * a.rho + d01 * b.rho) / dt + d10 * a.rho_prime + d11 * b.rho_prime;
        (rho, if x < 0.0 { -slope } else { slope })
    }

    /// Resample onto `grid`, which must span `[−h, h]`; endpoints are set to `r`.
    pub fn to_profile(&self, grid: Grid) -> Result<ProfileCurve> {
        let Parameters { h, r, .. } = self.params;
        if (grid.h() - h).abs() > 1e-12 * h {
            return Err(Error::Mismatch(format!(
                "grid half-width {} differs from h = {h}",
                grid.h()
            )));
        }
        let mut values: Vec<f64> = grid.nodes().map(|x| self.eval(x).0).collect();
        let last = values.len() - 1;
        values[0] = r;
        values[last] = r;
        ProfileCurve::admissible(grid, values, r)
    }

    pub fn certify(&self) -> Result<Certificate> {
        let Parameters { h, r, c } = self.params;
        let drift = self.drift();
        let profile = self.to_profile(Grid::new(h, CERTIFICATION_CELLS)?)?;
        let el = el_residual(&profile, c)?;
        let max_slope = self.max_slope();
        let slope_bound = constants().z0;
        let full = self.full();
        let min_second_difference = full
            .windows(3)
            .map(|w| w[0].rho - 2.0 * w[1].rho + w[2].rho)
            .fold(f64::INFINITY, f64::min);
        let strictly_convex = min_second_difference > 0.0;
        let even = self.samples[0].rho_prime == 0.0;
        let passed = drift <= DRIFT_BOUND * r
            && el <= EL_RESIDUAL_BOUND
            && max_slope < slope_bound
            && self.boundary_residual <= 1e-8 * r
            && even
            && strictly_convex;
        Ok(Certificate {
            drift,
            el_residual: el,
            max_slope,
            slope_bound,
            boundary_residual: self.boundary_residual,
            min_second_difference,
            even,
            strictly_convex,
            passed,
        })
    }
}

/// Largest interior value of
/// `(1+ρ'²)((c+ρ²)ρ'² + ρ²) − ρρ''(ρ²ρ'² + c(2−ρ'²) + ρ²)`
/// with central differences, divided by `r²` (`r` the profile's reference
/// radius).
pub fn el_residual(p: &ProfileCurve, c: f64) -> Result<f64> {
    let v = p.values();
    if v.len() < 5 {
        return Err(Error::Resolution {
            needed: 5,
            got: v.len(),
        });
    }
    if !(c >= 0.0 && c.is_finite()) {
        return Err(domain("el_residual", format!("c must be ≥ 0, got {c}")));
    }
    let dx = p.grid().dx();
    let r = p.reference_radius();
    let mut worst = 0.0_f64;
    for i in 1..v.len() - 1 {
        let y = v[i];
        let d1 = (v[i + 1] - v[i - 1]) / (2.0 * dx);
        let d2 = (v[i + 1] - 2.0 * y + v[i - 1]) / (dx * dx);
        let (p2, y2) = (d1 * d1, y * y);
        let res = (1.0 + p2) * ((c + y2) * p2 + y2) - y * d2 * (y2 * p2 + c * (2.0 - p2) + y2);
        worst = worst.max(res.abs());
    }
    Ok(worst / (r * r))
}
