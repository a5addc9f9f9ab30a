use std::fmt::Write as _;
use std::f64::consts::PI;
use std::fs;
use std::io::BufReader;
use std::path::Path;

use serde::Serialize;

use nematic_core::catenary::{
    catenary_profile, constants, e0_closed_form, goldschmidt_energy, solve_pi, Branch, CatenarySolution, Regime,
};
use nematic_core::elsolver::{first_integral_residual, shoot, Certificate, ShootOptions, ShootingSolution};
use nematic_core::energy::{
    director_energy, evaluate, DirectorField, EnergyBreakdown, PhysicalParams, DEFAULT_AZIMUTHAL_SAMPLES,
};
use nematic_core::format::sig;
use nematic_core::geometry::{build_mesh, curvatures, write_obj, CurvatureSummary};
use nematic_core::minimizer::{
    apex_monotone, minimize, sweep_c, verify_theorem_properties, Checklist, Init, MinimizeOptions,
};
use nematic_core::profile::{convex_envelope, Grid, ProfileCurve};
use nematic_core::Parameters;

use crate::config::RunConfig;
use crate::output::{json, write_atomic};
use crate::{BranchArg, Failure};

const CATENARY_NODES: usize = 8001;
const MINIMIZE_NODES: usize = 401;
const MESH_NODES: usize = 201;
const MESH_AZIMUTHAL: usize = 64;
const DIRECTOR_NODES: usize = 201;
const ROOT_TOLERANCE: f64 = 1e-12;

fn write_profile(path: &Path, p: &ProfileCurve) -> Result<(), Failure> {
    let mut buf = Vec::new();
    p.write_csv(&mut buf)?;
    write_atomic(path, &buf)
}

fn warn_if_outside(params: &Parameters) {
    if params.outside_standing_assumption() {
        eprintln!(
            "warning: h/r = {} exceeds ω = {}; existence and the shape properties of minimizers are only guaranteed for h/r ≤ ω",
            sig(params.ratio()),
            sig(constants().omega)
        );
    }
}

fn nodes(cfg: &RunConfig, default: usize) -> usize {
    cfg.nodes.unwrap_or(default)
}

pub fn constants_cmd() -> Result<(), Failure> {
    #[derive(Serialize)]
    struct Out {
        xi_star: f64,
        omega: f64,
        phi_min: f64,
        inv_phi_min: f64,
        z0: f64,
        beta: f64,
    }
    let k = constants();
    print!(
        "{}",
        json(&Out {
            xi_star: k.xi_star,
            omega: k.omega,
            phi_min: k.phi_min,
            inv_phi_min: k.inv_phi_min(),
            z0: k.z0,
            beta: k.beta,
        })
    );
    Ok(())
}

#[derive(Serialize)]
struct Classification {
    h: f64,
    r: f64,
    ratio: f64,
    regime: Regime,
    pi0: Option<f64>,
    pi1: Option<f64>,
    energy_stable: Option<f64>,
    energy_unstable: Option<f64>,
    goldschmidt: f64,
}

fn classification(sol: &CatenarySolution) -> Classification {
    let e = |pi: Option<f64>| pi.and_then(|p| e0_closed_form(sol.h, sol.r, p).ok());
    Classification {
        h: sol.h,
        r: sol.r,
        ratio: sol.ratio,
        regime: sol.regime,
        pi0: sol.pi0,
        pi1: sol.pi1,
        energy_stable: e(sol.pi0),
        energy_unstable: e(sol.pi1),
        goldschmidt: goldschmidt_energy(sol.r),
    }
}

pub fn classify(cfg: &RunConfig) -> Result<(), Failure> {
    let params = cfg.params(Some(0.0))?;
    let sol = solve_pi(params.h, params.r, ROOT_TOLERANCE)?;
    print!("{}", json(&classification(&sol)));
    Ok(())
}

pub fn catenary(cfg: &RunConfig, branch: BranchArg) -> Result<(), Failure> {
    let params = cfg.params(Some(0.0))?;
    let sol = solve_pi(params.h, params.r, ROOT_TOLERANCE)?;
    let which = match branch {
        BranchArg::Stable => Branch::Stable,
        BranchArg::Unstable => Branch::Unstable,
    };
    let cat = catenary_profile(&sol, which)?;
    let grid = Grid::with_nodes(params.h, nodes(cfg, CATENARY_NODES))?;
    let p = ProfileCurve::from_catenary(grid, &cat, params.r)?;
    let path = cfg.out_dir().join("catenary.csv");
    write_profile(&path, &p)?;
    println!("Π = {} written to {}", sig(cat.pi), path.display());
    Ok(())
}

fn shoot_with(cfg: &RunConfig, params: &Parameters) -> Result<ShootingSolution, Failure> {
    let mut opts = ShootOptions {
        step: cfg.step,
        ..ShootOptions::default()
    };
    if let Some(t) = cfg.tol {
        opts.tolerance = t;
    }
    Ok(shoot(params, &opts)?)
}

/// Profile on the RK4 nodes reflected to `[-h, h]`.
fn shooting_profile(sol: &ShootingSolution) -> Result<ProfileCurve, Failure> {
    let grid = Grid::new(sol.params.h, 2 * (sol.samples.len() - 1))?;
    Ok(sol.to_profile(grid)?)
}

#[derive(Serialize)]
struct SolveSummary {
    h: f64,
    r: f64,
    c: f64,
    apex: f64,
    boundary_residual: f64,
    max_slope: f64,
    drift: f64,
    el_residual: f64,
    roots: Vec<f64>,
    outside_standing_assumption: bool,
    certified: bool,
    certificate: Certificate,
}

pub fn solve(cfg: &RunConfig) -> Result<(), Failure> {
    let params = cfg.params(None)?;
    warn_if_outside(&params);
    let sol = shoot_with(cfg, &params)?;
    let cert = sol.certify()?;
    let out = cfg.out_dir();

    write_profile(&out.join("profile.csv"), &shooting_profile(&sol)?)?;

    let mut traj = String::from("x,rho,rho_prime,first_integral_residual\n");
    for s in sol.full() {
        let res = first_integral_residual(s.rho, s.rho_prime, params.c, sol.apex)?;
        writeln!(traj, "{},{},{},{}", sig(s.x), sig(s.rho), sig(s.rho_prime), sig(res)).expect("string write");
    }
    write_atomic(&out.join("trajectory.csv"), traj.as_bytes())?;

    let summary = SolveSummary {
        h: params.h,
        r: params.r,
        c: params.c,
        apex: sol.apex,
        boundary_residual: sol.boundary_residual,
        max_slope: cert.max_slope,
        drift: cert.drift,
        el_residual: cert.el_residual,
        roots: sol.roots.clone(),
        outside_standing_assumption: sol.outside_standing_assumption,
        certified: cert.passed,
        certificate: cert,
    };
    write_atomic(&out.join("summary.json"), json(&summary).as_bytes())?;
    println!("apex = {} (certified: {})", sig(sol.apex), cert.passed);
    if cert.passed {
        Ok(())
    } else {
        Err(Failure::Certification(format!(
            "solution with apex {} failed certification",
            sig(sol.apex)
        )))
    }
}

fn minimize_options(cfg: &RunConfig, params: &Parameters) -> Result<MinimizeOptions, Failure> {
    let mut opts = MinimizeOptions::with_nodes(params.h, nodes(cfg, MINIMIZE_NODES))?;
    if let Some(t) = cfg.tol {
        opts.grad_tol = t;
    }
    opts.init = match cfg.init.as_deref() {
        None | Some("catenary") => Init::Catenary,
        Some("chord") => Init::Chord,
        Some(other) => return Err(Failure::Usage(format!("unknown init {other:?} (catenary or chord)"))),
    };
    Ok(opts)
}

#[derive(Serialize)]
struct MinimizeSummary {
    h: f64,
    r: f64,
    c: f64,
    apex: f64,
    energy: EnergyBreakdown,
    iterations: usize,
    converged: bool,
    grad_norm: f64,
    max_relative_increase: f64,
    all_passed: bool,
    checklist: Checklist,
}

pub fn minimize_cmd(cfg: &RunConfig) -> Result<(), Failure> {
    let params = cfg.params(None)?;
    warn_if_outside(&params);
    let opts = minimize_options(cfg, &params)?;
    let res = minimize(&params, &opts)?;
    let checklist = verify_theorem_properties(&res, &params)?;
    let out = cfg.out_dir();
    write_profile(&out.join("profile.csv"), &res.profile)?;
    let summary = MinimizeSummary {
        h: params.h,
        r: params.r,
        c: params.c,
        apex: res.profile.apex(),
        energy: res.energy,
        iterations: res.iterations,
        converged: res.converged,
        grad_norm: res.grad_norm,
        max_relative_increase: res.max_relative_increase(),
        all_passed: checklist.all_passed(),
        checklist,
    };
    write_atomic(&out.join("summary.json"), json(&summary).as_bytes())?;
    println!(
        "apex = {}, energy = {}, iterations = {}",
        sig(summary.apex),
        sig(res.energy.total),
        res.iterations
    );
    if res.converged {
        Ok(())
    } else {
        Err(Failure::Certification(format!(
            "minimizer stopped after {} iterations at gradient norm {}",
            res.iterations,
            sig(res.grad_norm)
        )))
    }
}


pub fn sweep(cfg: &RunConfig) -> Result<(), Failure> {
    let (h, r) = (cfg.h()?, cfg.r()?);
    let cs = cfg.c_list()?;
    let base = Parameters::new(h, r, 0.0)?;
    warn_if_outside(&base);
    let opts = minimize_options(cfg, &base)?;
    let entries = sweep_c(&base, &cs, &opts)?;
    let mut csv = String::from("c,apex,sup_dist,energy_area,energy_nematic\n");
    for e in &entries {
        let (area, nematic) = e.energy.map_or((f64::NAN, f64::NAN), |b| (b.area, b.nematic));
        let cell = |v: f64| if v.is_finite() { sig(v) } else { "nan".to_string() };
        writeln!(
            csv,
            "{},{},{},{},{}",
            sig(e.c),
            cell(e.apex),
            cell(e.sup_distance),
            cell(area),
            cell(nematic)
        )
        .expect("string write");
        if let Some(err) = &e.error {
            eprintln!("warning: c = {} failed: {err}", sig(e.c));
        } else if !e.converged {
            eprintln!("warning: c = {} did not converge", sig(e.c));
        }
    }
    if !apex_monotone(&entries) {
        eprintln!("warning: apex is not increasing in c along this sweep");
    }
    let path = cfg.out_dir().join("sweep.csv");
    write_atomic(&path, csv.as_bytes())?;
    println!("{} entries written to {}", entries.len(), path.display());
    Ok(())
}

#[derive(Serialize)]
struct MeshReport {
    source: String,
    vertices: usize,
    faces: usize,
    n_axial: usize,
    n_azimuthal: usize,
    curvature: CurvatureSummary,
}

pub fn mesh(cfg: &RunConfig) -> Result<(), Failure> {
    let source = cfg.source.as_deref().unwrap_or("solve");
    let c_default = matches!(source, "catenary" | "chord").then_some(0.0);
    let params = cfg.params(c_default)?;
    warn_if_outside(&params);
    let grid = Grid::with_nodes(params.h, nodes(cfg, MESH_NODES))?;
    let profile = match source {
        "solve" => shoot_with(cfg, &params)?.to_profile(grid)?,
        "minimize" => {
            let mut opts = minimize_options(cfg, &params)?;
            opts.grid = grid;
            minimize(&params, &opts)?.profile
        }
        "catenary" => {
            let sol = solve_pi(params.h, params.r, ROOT_TOLERANCE)?;
            ProfileCurve::from_catenary(grid, &catenary_profile(&sol, Branch::Stable)?, params.r)?
        }
        "chord" => ProfileCurve::constant(grid, params.r)?,
        other => {
            return Err(Failure::Usage(format!(
                "unknown source {other:?} (solve, minimize, catenary or chord)"
            )))
        }
    };
    let mesh = build_mesh(&profile, cfg.azimuthal.unwrap_or(MESH_AZIMUTHAL))?;
    let field = curvatures(&profile)?;
    let out = cfg.out_dir();

    let mut obj = Vec::new();
    write_obj(&mesh, &mut obj)?;
    write_atomic(&out.join("mesh.obj"), &obj)?;
    let mut csv = Vec::new();
    field.write_csv(&mut csv)?;
    write_atomic(&out.join("curvature.csv"), &csv)?;

    let report = MeshReport {
        source: source.to_string(),
        vertices: mesh.vertices.len(),
        faces: mesh.faces.len(),
        n_axial: mesh.n_axial,
        n_azimuthal: mesh.n_azimuthal,
        curvature: field.summary(),
    };
    print!("{}", json(&report));
    Ok(())
}

#[derive(Serialize)]
struct EnvelopeEnergies {
    c: f64,
    energy_before: f64,
    energy_after: f64,
}

pub fn envelope(cfg: &RunConfig) -> Result<(), Failure> {
    let input = cfg
        .input
        .as_ref()
        .ok_or_else(|| Failure::Usage("missing input CSV".into()))?;
    let c = cfg.c_single(None)?;
    if !(c >= 0.0 && c.is_finite()) {
        return Err(Failure::Usage(format!("need c ≥ 0, got {c}")));
    }
    let file = fs::File::open(input).map_err(|e| Failure::Usage(format!("{}: {e}", input.display())))?;
    let p = ProfileCurve::read_csv(BufReader::new(file))?;
    let env = convex_envelope(&p);
    let before = evaluate(&p, c)?;
    let after = evaluate(&env, c)?;
    let out = cfg.out_dir();
    write_profile(&out.join("envelope.csv"), &env)?;
    let report = EnvelopeEnergies {
        c,
        energy_before: before.total,
        energy_after: after.total,
    };
    let text = json(&report);
    write_atomic(&out.join("energies.json"), text.as_bytes())?;
    print!("{text}");
    Ok(())
}

#[derive(Serialize)]
struct DirectorReport {
    field: String,
    gamma: f64,
    kappa: f64,
    c: f64,
    apex: f64,
    i1: f64,
    i2: f64,
    i3: f64,
    i4: f64,
    total: f64,
}

pub fn director_check(cfg: &RunConfig) -> Result<(), Failure> {
    let gamma = cfg.gamma.unwrap_or(1.0);
    let kappa = match (cfg.kappa, &cfg.c) {
        (Some(k), _) => k,
        (None, Some(_)) => 2.0 * gamma * cfg.c_single(None)?,
        (None, None) => return Err(Failure::Usage("need --kappa or --c".into())),
    };
    let phys = PhysicalParams::new(gamma, kappa)?;
    let params = Parameters::new(cfg.h()?, cfg.r()?, phys.c())?;
    warn_if_outside(&params);
    let grid = Grid::with_nodes(params.h, nodes(cfg, DIRECTOR_NODES))?;
    let profile = shoot_with(cfg, &params)?.to_profile(grid)?;
    let n_phi = cfg.azimuthal.unwrap_or(DEFAULT_AZIMUTHAL_SAMPLES);
    let name = cfg.field.as_deref().unwrap_or("constant");
    let h = params.h;
    let field = match name {
        "constant" => DirectorField::constant(grid, n_phi, 0.3)?,
        "sin" => DirectorField::from_fn(grid, n_phi, |_, phi| 0.3 * phi.sin())?,
        "mixed" => DirectorField::from_fn(grid, n_phi, |x, phi| {
            0.2 * x / h + 0.3 * phi.sin() * (0.5 * PI * x / h).cos()
        })?,
        other => {
            return Err(Failure::Usage(format!(
                "unknown field {other:?} (constant, sin or mixed)"
            )))
        }
    };
    let d = director_energy(&profile, &field, &phys)?;
    print!(
        "{}",
        json(&DirectorReport {
            field: name.to_string(),
            gamma,
            kappa,
            c: phys.c(),
            apex: profile.apex(),
            i1: d.i1,
            i2: d.i2,
            i3: d.i3,
            i4: d.i4,
            total: d.total,
        })
    );
    Ok(())
}
