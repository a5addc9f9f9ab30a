//! Catenaries spanning two coaxial rings and the constants that organise them.
//!
//! With `c = 0` the energy is the area functional and its critical profiles
//! are the catenaries `Π cosh(x / Π)`. Writing `ξ = Π / h`, the boundary
//! condition `Π cosh(h / Π) = r` becomes `h / r = μ(ξ)` with
//! `μ(ξ) = 1 / (ξ cosh(1 / ξ))`. `μ` rises from 0 to its maximum `1/m`
//! (where `m = min cosh(x)/x`) and decays back to 0, so there are two
//! catenaries below `1/m`, one at it and none above. The ratio `ω` marks
//! where the stable catenoid and the two-disk Goldschmidt configuration
//! have equal relaxed energy `r²`.

use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::roots::bisect;

/// Half-width of the band around `ω` that is classified as the crossover.
pub const CROSSOVER_BAND: f64 = 1e-9;

/// Relative distance to `1/m` below which the two roots are merged.
const DOUBLE_ROOT_BAND: f64 = 1e-12;

/// `Φ(x) = cosh(x) / x` on `x > 0`.
pub fn phi(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain("phi", format!("requires x > 0, got {x}")));
    }
    Ok(x.cosh() / x)
}

/// `μ(ξ) = 1 / (ξ cosh(1/ξ)) = 1 / Φ(1/ξ)`, the aspect ratio `h/r` reached
/// by the catenary of scale `Π = ξ h`.
pub fn mu(xi: f64) -> f64 {
    1.0 / (xi * (1.0 / xi).cosh())
}

/// `u(s) = sech²(1/s)/s + tanh(1/s)`.
pub fn u(s: f64) -> f64 {
    u_minus_one(s) + 1.0
}

// u(s) - 1 without cancelling tanh against 1.
fn u_minus_one(s: f64) -> f64 {
    let y = 1.0 / s;
    let sech = 1.0 / y.cosh();
    sech * sech / s - 2.0 / ((2.0 * y).exp() + 1.0)
}

/// `f(x) = x² / √(1 + x²)`, the slope density of the nematic term.
pub fn slope_density(x: f64) -> f64 {
    x * x / (1.0 + x * x).sqrt()
}

/// `f'(x) = x (x² + 2) / (1 + x²)^{3/2}`.
pub fn slope_density_derivative(x: f64) -> f64 {
    let q = 1.0 + x * x;
    x * (x * x + 2.0) / (q * q.sqrt())
}

/// `v(y) = sinh y (1 + cosh² y) / cosh⁴ y`; along the catenary of scale `Π`,
/// `f'(ρ₀') / ρ₀ = v(x/Π) / Π`.
pub fn barrier_weight(y: f64) -> f64 {
    let ch = y.cosh();
    y.sinh() * (1.0 + ch * ch) / ch.powi(4)
}

/// `v'(y) = (4 - cosh² y - cosh⁴ y) / cosh⁵ y`.
pub fn barrier_weight_derivative(y: f64) -> f64 {
    let c2 = y.cosh().powi(2);
    (4.0 - c2 - c2 * c2) / (c2 * c2 * y.cosh())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelConstants {
    /// Ξ, the unique positive root of `u(s) = 1`.
    pub xi_star: f64,
    /// ω = 1 / (Ξ cosh(1/Ξ)).
    pub omega: f64,
    /// m = min Φ.
    pub phi_min: f64,
    /// argmin Φ, the root of `x tanh x = 1`.
    pub phi_argmin: f64,
    /// z₀ = √((√5 − 1)/2), where `f'(z₀) = 1`.
    pub z0: f64,
    /// β with `cosh β = √((√17 − 1)/2)`, the end of the interval where `v' ≥ 0`.
    pub beta: f64,
}

impl ModelConstants {
    /// `1/m`, the largest aspect ratio spanned by a catenary.
    pub fn inv_phi_min(&self) -> f64 {
        1.0 / self.phi_min
    }

    /// Scale `ξ = 1/argmin Φ` at which `μ` peaks.
    pub fn xi_peak(&self) -> f64 {
        1.0 / self.phi_argmin
    }
}

/// Computes all model constants with bisection refined to `tolerance`.
///
/// Brackets: `Ξ ∈ (0.1, 10)` and `argmin Φ ∈ (0.5, 2)`.
pub fn compute_constants(tolerance: f64) -> Result<ModelConstants> {
    if !(tolerance > 0.0 && tolerance <= 1e-6) {
        return Err(domain(
            "compute_constants",
            format!("tolerance must lie in (0, 1e-6], got {tolerance}"),
        ));
    }
    let xi_star = bisect(u_minus_one, 0.1, 10.0, tolerance)?;
    let omega = mu(xi_star);
    let phi_argmin = bisect(|x| x * x.tanh() - 1.0, 0.5, 2.0, tolerance)?;
    let phi_min = phi(phi_argmin)?;
    let z0 = ((5f64.sqrt() - 1.0) / 2.0).sqrt();
    let beta = ((17f64.sqrt() - 1.0) / 2.0).sqrt().acosh();
    Ok(ModelConstants {
        xi_star,
        omega,
        phi_min,
        phi_argmin,
        z0,
        beta,
    })
}

/// Constants at full double precision, computed on first use.
pub fn constants() -> &'static ModelConstants {
    static CONSTANTS: OnceLock<ModelConstants> = OnceLock::new();
    CONSTANTS.get_or_init(|| {
        compute_constants(f64::EPSILON).expect("constant brackets are valid by construction")
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    /// `h/r < ω`: the stable catenoid is the unique area minimizer.
    UniqueCatenoid,
    /// `h/r = ω`: catenoid and Goldschmidt disks tie.
    Crossover,
    /// `ω < h/r ≤ 1/m`: the catenoid is only a local minimizer.
    LocalCatenoid,
    /// `h/r > 1/m`: no catenary spans the rings.
    GoldschmidtOnly,
}

impl Regime {
    pub fn classify(ratio: f64) -> Regime {
        let k = constants();
        if (ratio - k.omega).abs() <= CROSSOVER_BAND {
            Regime::Crossover
        } else if ratio < k.omega {
            Regime::UniqueCatenoid
        } else if ratio <= k.inv_phi_min() * (1.0 + DOUBLE_ROOT_BAND) {
            Regime::LocalCatenoid
        } else {
            Regime::GoldschmidtOnly
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CatenarySolution {
    pub h: f64,
    pub r: f64,
    /// Largest root of `Π cosh(h/Π) = r` (stable catenary).
    pub pi0: Option<f64>,
    /// Smallest root (unstable catenary); equals `pi0` at the double root.
    pub pi1: Option<f64>,
    pub ratio: f64,
    pub regime: Regime,
}

impl CatenarySolution {
    /// `|Π cosh(h/Π) - r|` for a root.
    pub fn residual(&self, pi: f64) -> f64 {
        (pi * (self.h / pi).cosh() - self.r).abs()
    }

    pub fn is_double_root(&self) -> bool {
        matches!((self.pi0, self.pi1), (Some(a), Some(b)) if a == b)
    }
}

fn check_ring(h: f64, r: f64) -> Result<()> {
    if !(h > 0.0 && h.is_finite()) || !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameters(format!(
            "need h > 0 and r > 0, got h = {h}, r = {r}"
        )));
    }
    Ok(())
}

/// Finds every catenary `Π cosh(x/Π)` with `Π cosh(h/Π) = r` and classifies
/// the aspect ratio.
///
/// The two branches of `μ` are bracketed separately on either side of its
/// peak and refined by bisection. Roots are refined to floating-point
/// resolution; `tolerance` is the relative certificate
/// `|Π cosh(h/Π) - r| ≤ tolerance · r` that every returned root satisfies.
pub fn solve_pi(h: f64, r: f64, tolerance: f64) -> Result<CatenarySolution> {
    check_ring(h, r)?;
    if !(tolerance > 0.0) {
        return Err(domain("solve_pi", "tolerance must be positive"));
    }
    let k = constants();
    let ratio = h / r;
    let regime = Regime::classify(ratio);
    let peak = k.xi_peak();
    let (pi0, pi1) = if ratio > k.inv_phi_min() * (1.0 + DOUBLE_ROOT_BAND) {
        (None, None)
    } else if (ratio - k.inv_phi_min()).abs() <= DOUBLE_ROOT_BAND * k.inv_phi_min() {
        let pi = h / k.phi_argmin;
        (Some(pi), Some(pi))
    } else {
        let g = |xi: f64| mu(xi) - ratio;
        let mut lo = peak;
        while g(lo) >= 0.0 {
            lo *= 0.5;
        }
        let mut hi = peak;
        while g(hi) >= 0.0 {
            hi *= 2.0;
        }
        let xi1 = bisect(g, lo, peak, f64::EPSILON)?;
        let xi0 = bisect(g, peak, hi, f64::EPSILON)?;
        (Some(xi0 * h), Some(xi1 * h))
    };
    let sol = CatenarySolution {
        h,
        r,
        pi0,
        pi1,
        ratio,
        regime,
    };
    for pi in [pi0, pi1].into_iter().flatten() {
        let res = sol.residual(pi);
        if res > tolerance * r {
            return Err(Error::MissingSolution(format!(
                "root Π = {pi} has residual {res:e} above {tolerance:e}·r"
            )));
        }
    }
    Ok(sol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    Stable,
    Unstable,
}

/// `ρ(x) = Π cosh((x - x0) / Π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CatenaryProfile {
    pub pi: f64,
    pub x0: f64,
}

impl CatenaryProfile {
    pub fn new(pi: f64, x0: f64) -> Result<Self> {
        if !(pi > 0.0 && pi.is_finite()) {
            return Err(domain("catenary_profile", format!("Π must be positive, got {pi}")));
        }
        Ok(Self { pi, x0 })
    }

    pub fn value(&self, x: f64) -> f64 {
        self.pi * ((x - self.x0) / self.pi).cosh()
    }

    pub fn slope(&self, x: f64) -> f64 {
        ((x - self.x0) / self.pi).sinh()
    }

    pub fn curvature(&self, x: f64) -> f64 {
        ((x - self.x0) / self.pi).cosh() / self.pi
    }
}

/// Symmetric catenary for the requested branch (`Stable ↦ Π₀`, `Unstable ↦ Π₁`).
pub fn catenary_profile(sol: &CatenarySolution, which: Branch) -> Result<CatenaryProfile> {
    let pi = match which {
        Branch::Stable => sol.pi0,
        Branch::Unstable => sol.pi1,
    };
    let pi = pi.ok_or_else(|| {
        Error::MissingSolution(format!(
            "no {which:?} catenary at h/r = {:.6} ({:?})",
            sol.ratio, sol.regime
        ))
    })?;
    CatenaryProfile::new(pi, 0.0)
}

/// Closed-form area energy `Π h + r √(r² − Π²)` of the catenary of scale `Π`.
pub fn e0_closed_form(h: f64, r: f64, pi: f64) -> Result<f64> {
    check_ring(h, r)?;
    if !(pi > 0.0) || pi > r {
        return Err(domain(
            "e0_closed_form",
            format!("need 0 < Π ≤ r, got Π = {pi}, r = {r}"),
        ));
    }
    Ok(pi * h + r * (r * r - pi * pi).sqrt())
}

/// Relaxed energy of the Goldschmidt configuration (two disks).
pub fn goldschmidt_energy(r: f64) -> f64 {
    r * r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Competitor {
    StableCatenoid,
    UnstableCatenoid,
    Goldschmidt,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatenaryComparison {
    pub e_stable: f64,
    pub e_unstable: f64,
    pub goldschmidt: f64,
    pub stable_below_unstable: bool,
    /// Competitors sorted by increasing energy.
    pub ordering: Vec<Competitor>,
}

/// Compares the two catenaries with each other and with the Goldschmidt
/// disks.
pub fn compare_catenaries(h: f64, r: f64) -> Result<CatenaryComparison> {
    let sol = solve_pi(h, r, 1e-12)?;
    let (pi0, pi1) = match (sol.pi0, sol.pi1) {
        (Some(a), Some(b)) if a > b => (a, b),
        _ => {
            return Err(Error::MissingSolution(format!(
                "two distinct catenaries need h/r < 1/m, got h/r = {:.6}",
                sol.ratio
            )))
        }
    };
    let e_stable = e0_closed_form(h, r, pi0)?;
    let e_unstable = e0_closed_form(h, r, pi1)?;
    let goldschmidt = goldschmidt_energy(r);
    let mut ordering = vec![
        (e_stable, Competitor::StableCatenoid),
        (e_unstable, Competitor::UnstableCatenoid),
        (goldschmidt, Competitor::Goldschmidt),
    ];
    ordering.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(CatenaryComparison {
        e_stable,
        e_unstable,
        goldschmidt,
        stable_below_unstable: e_stable < e_unstable,
        ordering: ordering.into_iter().map(|(_, c)| c).collect(),
    })
}

/// `f(x) − f(y) − f'(y)(x − y)`, nonnegative for `x ≥ 0` and `0 ≤ y ≤ z₀`.
pub fn tangent_residual(x: f64, y: f64) -> Result<f64> {
    let z0 = constants().z0;
    if !(x >= 0.0) || !(y >= 0.0) || y > z0 {
        return Err(domain(
            "tangent_residual",
            format!("need x ≥ 0 and 0 ≤ y ≤ z0 = {z0}, got x = {x}, y = {y}"),
        ));
    }
    Ok(slope_density(x) - slope_density(y) - slope_density_derivative(y) * (x - y))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KeyInequalityReport {
    /// Minimum over `[0, h]` of `d/dx (f'(ρ₀') / ρ₀)`.
    pub min_derivative: f64,
    pub argmin_x: f64,
    pub h_over_pi0: f64,
    pub beta: f64,
    /// `h / Π₀ ≤ β`; when false the sign of the derivative is not guaranteed.
    pub hypothesis_holds: bool,
}

/// Samples `d/dx (f'(ρ₀')/ρ₀) = v'(x/Π₀) / Π₀²` on 10001 points of `[0, h]`.
pub fn key_inequality_check(pi0: f64, h: f64) -> Result<KeyInequalityReport> {
    if !(pi0 > 0.0) || !(h > 0.0) {
        return Err(domain(
            "key_inequality_check",
            format!("need Π₀ > 0 and h > 0, got Π₀ = {pi0}, h = {h}"),
        ));
    }
    const SAMPLES: usize = 10_001;
    let (mut min_derivative, mut argmin_x) = (f64::INFINITY, 0.0);
    for i in 0..SAMPLES {
        let x = h * i as f64 / (SAMPLES - 1) as f64;
        let d = barrier_weight_derivative(x / pi0) / (pi0 * pi0);
        if d < min_derivative {
            min_derivative = d;
            argmin_x = x;
        }
    }
    let beta = constants().beta;
    Ok(KeyInequalityReport {
        min_derivative,
        argmin_x,
        h_over_pi0: h / pi0,
        beta,
        hypothesis_holds: h / pi0 <= beta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from an independent bracketed solver run in extended
    // precision tooling; see the acceptance suite for the rounded checks.
    const XI_STAR_REF: f64 = 1.5643765885603997;
    const OMEGA_REF: f64 = 0.5276973969625715;
    const ARGMIN_REF: f64 = 1.1996786402577337;
    const INV_M_REF: f64 = 0.6627434193491816;

    #[test]
    fn phi_at_one_is_cosh_one() {
        // cosh(1) by its Taylor series.
        let mut series = 0.0;
        let mut term = 1.0;
        for k in 0..20 {
            series += term;
            term /= ((2 * k + 1) * (2 * k + 2)) as f64;
        }
        assert!((phi(1.0).unwrap() - series).abs() < 1e-15);
        assert!((series - 1.5430806348).abs() < 1e-10);
    }

    #[test]
    fn phi_blows_up_at_zero_and_rejects_nonpositive() {
        // cosh(1e-8)/1e-8 exceeds 1e8 by 5e-9, below the f64 spacing there
        assert!(phi(1e-8).unwrap() >= 1e8);
        assert!(phi(1e-4).unwrap() > 1e4);
        assert!(phi(0.0).is_err());
        assert!(phi(-1.0).is_err());
    }

    #[test]
    fn constants_match_reference_and_invariants() {
        let k = compute_constants(1e-12).unwrap();
        assert!((k.xi_star - XI_STAR_REF).abs() < 1e-10);
        assert!((k.omega - OMEGA_REF).abs() < 1e-10);
        assert!((k.phi_argmin - ARGMIN_REF).abs() < 1e-10);
        assert!((k.inv_phi_min() - INV_M_REF).abs() < 1e-10);
        assert!(k.omega > 0.52 && k.omega < 0.53);
        assert!((u(k.xi_star) - 1.0).abs() < 1e-12);
        assert!((k.omega * k.xi_star * (1.0 / k.xi_star).cosh() - 1.0).abs() < 1e-10);
        assert!((k.phi_argmin * k.phi_argmin.tanh() - 1.0).abs() < 1e-11);
        assert!((slope_density_derivative(k.z0) - 1.0).abs() < 1e-12);
        let target = ((17f64.sqrt() - 1.0) / 2.0).sqrt();
        assert!((k.beta.cosh() - target).abs() < 1e-14);
        assert!(barrier_weight_derivative(k.beta).abs() < 1e-12);
    }

    #[test]
    fn rounded_constants() {
        let k = constants();
        assert_eq!(format!("{:.3}", k.omega), "0.528");
        assert_eq!(format!("{:.3}", k.inv_phi_min()), "0.663");
    }

    #[test]
    fn constants_reject_loose_tolerance() {
        assert!(compute_constants(1e-3).is_err());
        assert!(compute_constants(0.0).is_err());
    }

    #[test]
    fn u_crosses_one_only_at_xi_star() {
        let k = constants();
        for i in 1..2000 {
            let s = 0.05 + 10.0 * i as f64 / 2000.0;
            if s < k.xi_star * (1.0 - 1e-9) {
                assert!(u(s) >= 1.0, "u({s}) = {}", u(s));
            } else if s > k.xi_star * (1.0 + 1e-9) {
                assert!(u(s) < 1.0, "u({s}) = {}", u(s));
            }
        }
    }

    #[test]
    fn mu_is_unimodal_about_the_peak() {
        let peak = constants().xi_peak();
        let mut prev = mu(0.01);
        for i in 1..=1000 {
            let xi = 0.01 + (peak - 0.01) * i as f64 / 1000.0;
            assert!(mu(xi) >= prev);
            prev = mu(xi);
        }
        for i in 1..=1000 {
            let xi = peak + 20.0 * i as f64 / 1000.0;
            assert!(mu(xi) <= prev);
            prev = mu(xi);
        }
    }

    #[test]
    fn unit_rings_have_no_catenary() {
        let sol = solve_pi(1.0, 1.0, 1e-12).unwrap();
        assert_eq!(sol.regime, Regime::GoldschmidtOnly);
        assert!(sol.pi0.is_none() && sol.pi1.is_none());
        assert!(catenary_profile(&sol, Branch::Stable).is_err());
    }

    #[test]
    fn two_roots_for_wide_rings() {
        let sol = solve_pi(1.0, 3.5, 1e-12).unwrap();
        assert_eq!(sol.regime, Regime::UniqueCatenoid);
        let (p0, p1) = (sol.pi0.unwrap(), sol.pi1.unwrap());
        assert!(p0 > p1);
        for p in [p0, p1] {
            assert!((p * (1.0 / p).cosh() - 3.5).abs() < 1e-12);
        }
        let prof = catenary_profile(&sol, Branch::Stable).unwrap();
        assert!((prof.value(1.0) - 3.5).abs() < 1e-10);
        assert!((prof.value(-1.0) - 3.5).abs() < 1e-10);
        assert_eq!(prof.value(0.0), p0);
        assert!(prof.slope(1.0) < constants().z0);
    }

    #[test]
    fn double_root_at_inverse_phi_min() {
        let k = constants();
        let h = 1.0;
        let sol = solve_pi(h, h * k.phi_min, 1e-10).unwrap();
        assert!(sol.is_double_root());
        assert_eq!(sol.pi0.unwrap(), h / k.phi_argmin);
        assert_eq!(sol.regime, Regime::LocalCatenoid);
    }

    #[test]
    fn regime_boundaries() {
        let k = constants();
        assert_eq!(Regime::classify(0.3), Regime::UniqueCatenoid);
        assert_eq!(Regime::classify(k.omega + 1e-10), Regime::Crossover);
        assert_eq!(Regime::classify(0.55 / 0.9), Regime::LocalCatenoid);
        assert_eq!(Regime::classify(0.7), Regime::GoldschmidtOnly);
    }

    #[test]
    fn rejects_degenerate_rings() {
        assert!(solve_pi(0.0, 1.0, 1e-12).is_err());
        assert!(solve_pi(1.0, -1.0, 1e-12).is_err());
    }

    #[test]
    fn closed_form_energy_and_goldschmidt() {
        assert!(e0_closed_form(1.0, 3.5, 3.6).is_err());
        // Π → 0 recovers the Goldschmidt value r².
        let e = e0_closed_form(1.0, 2.0, 1e-14).unwrap();
        assert!((e - goldschmidt_energy(2.0)).abs() < 1e-12);
    }

    #[test]
    fn crossover_energy_ties_goldschmidt() {
        let k = constants();
        let r = 1.0 / k.omega;
        let sol = solve_pi(1.0, r, 1e-12).unwrap();
        assert_eq!(sol.regime, Regime::Crossover);
        let e = e0_closed_form(1.0, r, sol.pi0.unwrap()).unwrap();
        assert!((e - r * r).abs() <= 1e-8 * r * r);
        // ξ₀ = Ξ at the crossover.
        assert!((sol.pi0.unwrap() - k.xi_star).abs() < 1e-9);
    }

    #[test]
    fn comparison_orders_competitors() {
        let cmp = compare_catenaries(1.0, 3.5).unwrap();
        assert!(cmp.stable_below_unstable);
        assert!(cmp.e_stable < cmp.goldschmidt);
        assert_eq!(cmp.ordering[0], Competitor::StableCatenoid);

        let k = constants();
        let ratio = 0.5 * (k.omega + k.inv_phi_min());
        let cmp = compare_catenaries(ratio, 1.0).unwrap();
        assert!(cmp.e_stable > cmp.goldschmidt);
        assert_eq!(cmp.ordering[0], Competitor::Goldschmidt);

        assert!(compare_catenaries(1.0, 1.0).is_err());
    }

    #[test]
    fn xi_ordering_around_xi_star() {
        let k = constants();
        for i in 1..50 {
            let ratio = k.omega * i as f64 / 50.0;
            let sol = solve_pi(ratio, 1.0, 1e-12).unwrap();
            let xi0 = sol.pi0.unwrap() / ratio;
            let xi1 = sol.pi1.unwrap() / ratio;
            assert!(xi1 < k.xi_star && k.xi_star < xi0);
        }
    }

    #[test]
    fn stable_slope_stays_below_z0() {
        let k = constants();
        let mut sup: f64 = 0.0;
        for i in 1..=2000 {
            let ratio = k.omega * i as f64 / 2000.0;
            let sol = solve_pi(ratio, 1.0, 1e-12).unwrap();
            sup = sup.max((ratio / sol.pi0.unwrap()).sinh());
        }
        assert!(sup < k.z0, "sup = {sup}");
    }

    #[test]
    fn tangent_residual_cases() {
        let k = constants();
        assert_eq!(tangent_residual(0.5, 0.5).unwrap(), 0.0);
        let at_zero = tangent_residual(0.0, k.z0).unwrap();
        assert!((at_zero - (k.z0 - slope_density(k.z0))).abs() < 1e-15);
        assert!(at_zero > 0.0);
        assert!(tangent_residual(1.0, k.z0 + 1e-6).is_err());
        assert!(tangent_residual(-1.0, 0.1).is_err());
    }

    #[test]
    fn tangent_residual_grid_scan() {
        let z0 = constants().z0;
        let mut min = f64::INFINITY;
        for i in 0..1000 {
            let x = 10.0 * i as f64 / 999.0;
            for j in 0..1000 {
                let y = z0 * j as f64 / 999.0;
                min = min.min(tangent_residual(x, y).unwrap());
            }
        }
        assert!(min >= -1e-14, "min = {min}");
    }

    #[test]
    fn key_inequality_at_apex_and_wide_rings() {
        // v'(0) = 2 by direct differentiation.
        assert!((barrier_weight_derivative(0.0) - 2.0).abs() < 1e-15);
        let sol = solve_pi(1.0, 3.5, 1e-12).unwrap();
        let pi0 = sol.pi0.unwrap();
        let rep = key_inequality_check(pi0, 1.0).unwrap();
        assert!(rep.hypothesis_holds);
        assert!(rep.min_derivative >= 0.0);

        // finite-difference oracle for d/dx (f'(ρ₀')/ρ₀) at a few points
        let prof = CatenaryProfile::new(pi0, 0.0).unwrap();
        let w = |x: f64| slope_density_derivative(prof.slope(x)) / prof.value(x);
        let d = 1e-5;
        for &x in &[0.0, 0.3, 0.7, 1.0] {
            let fd = (w(x + d) - w(x - d)) / (2.0 * d);
            let closed = barrier_weight_derivative(x / pi0) / (pi0 * pi0);
            assert!((fd - closed).abs() < 1e-8, "x = {x}: {fd} vs {closed}");
        }
        assert!((barrier_weight_derivative(0.0) / (pi0 * pi0) - 2.0 / (pi0 * pi0)).abs() < 1e-15);
    }

    #[test]
    fn key_inequality_hypothesis_under_standing_assumption() {
        let k = constants();
        for i in 1..=200 {
            let ratio = k.omega * i as f64 / 200.0;
            let sol = solve_pi(ratio, 1.0, 1e-12).unwrap();
            let rep = key_inequality_check(sol.pi0.unwrap(), ratio).unwrap();
            assert!(rep.hypothesis_holds, "ratio {ratio}");
            assert!(rep.min_derivative >= 0.0);
        }
    }
}
