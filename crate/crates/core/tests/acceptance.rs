//! End-to-end acceptance criteria. Prints one PASS/FAIL line per criterion
//! and exits nonzero if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nematic_core::catenary::{
    catenary_profile, compare_catenaries, compute_constants, constants, e0_closed_form, goldschmidt_energy,
    solve_pi, Branch, Regime,
};
use nematic_core::elsolver::{shoot, ShootOptions, ShootingSolution};
use nematic_core::energy::{
    director_energy, evaluate, evaluate_values, gradient_values, DirectorField, PhysicalParams,
};
use nematic_core::format::round_sig;
use nematic_core::geometry::curvatures;
use nematic_core::minimizer::{minimize, sweep_c, MinimizeOptions};
use nematic_core::profile::{convex_envelope, max_with, Grid, ProfileCurve};
use nematic_core::Parameters;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// (h, r) instances and c multipliers (times r²) of the certification suite.
const INSTANCES: [(f64, f64); 3] = [(1.0, 3.5), (1.0, 5.0), (0.5, 1.0)];
const C_FACTORS: [f64; 5] = [0.01, 0.1, 1.0, 10.0, 100.0];

fn certification_params() -> Vec<Parameters> {
    INSTANCES
        .iter()
        .flat_map(|&(h, r)| C_FACTORS.iter().map(move |k| Parameters::new(h, r, k * r * r).unwrap()))
        .collect()
}

fn constants_check() -> Outcome {
    let start = Instant::now();
    let k = compute_constants(1e-12).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(k.omega > 0.52 && k.omega < 0.53, || format!("ω = {}", k.omega))?;
    ensure((k.omega * 1e3).round() / 1e3 == 0.528, || format!("ω = {} does not round to 0.528", k.omega))?;
    let inv_m = k.inv_phi_min();
    ensure((inv_m * 1e3).round() / 1e3 == 0.663, || format!("1/m = {inv_m} does not round to 0.663"))?;
    within(elapsed, Duration::from_millis(1))?;
    Ok(format!("ω = {:.12}, 1/m = {:.12} in {elapsed:?}", k.omega, inv_m))
}

fn closed_form_check() -> Outcome {
    let start = Instant::now();
    let (h, r) = (1.0, 3.5);
    let sol = solve_pi(h, r, 1e-12).map_err(|e| e.to_string())?;
    let cat = catenary_profile(&sol, Branch::Stable).map_err(|e| e.to_string())?;
    let p = ProfileCurve::from_catenary(Grid::with_nodes(h, 4001).unwrap(), &cat, r).map_err(|e| e.to_string())?;
    let quad = evaluate(&p, 0.0).map_err(|e| e.to_string())?.total;
    let closed = e0_closed_form(h, r, sol.pi0.unwrap()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let rel = (quad - closed).abs() / closed;
    ensure(rel <= 1e-6, || format!("relative error {rel:e}"))?;
    within(elapsed, Duration::from_millis(10))?;
    Ok(format!("relative error {rel:.2e} in {elapsed:?}"))
}

fn crossover_check() -> Outcome {
    let h = 1.0;
    let r = h / constants().omega;
    let sol = solve_pi(h, r, 1e-12).map_err(|e| e.to_string())?;
    ensure(sol.regime == Regime::Crossover, || format!("regime {:?}", sol.regime))?;
    let e0 = e0_closed_form(h, r, sol.pi0.unwrap()).map_err(|e| e.to_string())?;
    let gap = (e0 - goldschmidt_energy(r)).abs();
    ensure(gap <= 1e-8 * r * r, || format!("|E0 − r²| = {gap:e}"))?;
    Ok(format!("|E0 − r²| / r² = {:.2e}", gap / (r * r)))
}

fn ordering_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let inv_m = constants().inv_phi_min();
    let mut worst_gap = f64::INFINITY;
    for _ in 0..100 {
        let r = rng.gen_range(0.5..5.0);
        let ratio = rng.gen_range(0.05..0.995) * inv_m;
        let cmp = compare_catenaries(ratio * r, r).map_err(|e| e.to_string())?;
        ensure(cmp.stable_below_unstable, || format!("h/r = {ratio}, r = {r}: {cmp:?}"))?;
        worst_gap = worst_gap.min((cmp.e_unstable - cmp.e_stable) / (r * r));
    }
    Ok(format!("100 instances, smallest gap (E1 − E0)/r² = {worst_gap:.3e}"))
}

fn random_piecewise_affine(rng: &mut ChaCha8Rng) -> (ProfileCurve, f64) {
    let h = rng.gen_range(0.2..2.0);
    let r = rng.gen_range(0.3..5.0);
    let n_cells = 2 * rng.gen_range(1..100);
    let grid = Grid::new(h, n_cells).unwrap();
    let values = if rng.gen_bool(0.5) {
        // independent nodal values
        let mut v: Vec<f64> = (0..=n_cells).map(|_| rng.gen_range(0.05..2.5) * r).collect();
        v[0] = r;
        v[n_cells] = r;
        v
    } else {
        // a few random affine pieces sampled on the grid
        let knots = rng.gen_range(1..8);
        let mut xs: Vec<f64> = (0..knots).map(|_| rng.gen_range(-h..h)).collect();
        xs.sort_by(f64::total_cmp);
        let mut pts = vec![(-h, r)];
        pts.extend(xs.iter().map(|&x| (x, rng.gen_range(0.05..2.5) * r)));
        pts.push((h, r));
        grid.nodes()
            .map(|x| {
                let k = pts.partition_point(|p| p.0 <= x).clamp(1, pts.len() - 1);
                let ((x0, y0), (x1, y1)) = (pts[k - 1], pts[k]);
                if x1 > x0 {
                    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
                } else {
                    y1
                }
            })
            .collect()
    };
    (ProfileCurve::admissible(grid, values, r).unwrap(), r)
}

fn convexification_check() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let (p, _) = random_piecewise_affine(&mut rng);
        let env = convex_envelope(&p);
        for c in [0.0, 0.1, 1.0, 10.0] {
            let before = evaluate(&p, c).map_err(|e| e.to_string())?.total;
            let after = evaluate(&env, c).map_err(|e| e.to_string())?.total;
            worst = worst.max(after - before);
            ensure(after <= before + 1e-10, || format!("c = {c}: {after} > {before}"))?;
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(5))?;
    Ok(format!("4000 comparisons, max E(env) − E(p) = {worst:.2e}, in {elapsed:?}"))
}

fn random_convex(rng: &mut ChaCha8Rng, grid: Grid, r: f64) -> ProfileCurve {
    let n = grid.n_cells();
    let mut slopes: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    slopes.sort_by(f64::total_cmp);
    let mut raw = vec![0.0];
    for s in &slopes {
        raw.push(raw.last().unwrap() + s);
    }
    let chord = |i: usize| raw[0] + (raw[n] - raw[0]) * i as f64 / n as f64;
    let dip: Vec<f64> = (0..=n).map(|i| chord(i) - raw[i]).collect();
    let depth = dip.iter().fold(0.0_f64, |m, d| m.max(*d));
    let scale = rng.gen_range(0.02..0.95) * r / depth;
    let values = dip.iter().map(|d| r - scale * d).collect();
    ProfileCurve::admissible(grid, values, r).unwrap()
}

fn barrier_decrease_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let omega = constants().omega;
    let mut worst = f64::NEG_INFINITY;
    let mut lifted = 0;
    for _ in 0..200 {
        let r = rng.gen_range(0.5..5.0);
        let h = rng.gen_range(0.05..1.0) * omega * r;
        let grid = Grid::new(h, 2 * rng.gen_range(2..200)).unwrap();
        let p = random_convex(&mut rng, grid, r);
        let sol = solve_pi(h, r, 1e-12).map_err(|e| e.to_string())?;
        let cat = catenary_profile(&sol, Branch::Stable).map_err(|e| e.to_string())?;
        let q = max_with(&p, &cat).map_err(|e| e.to_string())?;
        if q.values() != p.values() {
            lifted += 1;
        }
        for c in [0.1, 1.0, 10.0] {
            let before = evaluate(&p, c).map_err(|e| e.to_string())?.total;
            let after = evaluate(&q, c).map_err(|e| e.to_string())?.total;
            worst = worst.max(after - before);
            ensure(after <= before + 1e-10, || {
                format!("h = {h}, r = {r}, c = {c}, {} cells: {after} > {before}", grid.n_cells())
            })?;
        }
    }
    Ok(format!("600 comparisons ({lifted} profiles dipped below ρ₀), max E(p∨ρ₀) − E(p) = {worst:.2e}"))
}

fn shooting_catenary_check() -> Outcome {
    let start = Instant::now();
    let (h, r) = (1.0, 3.5);
    let prm = Parameters::new(h, r, 0.0).unwrap();
    let s = shoot(&prm, &ShootOptions { step: Some(2.0 * h / 8000.0), ..Default::default() })
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let pi0 = solve_pi(h, r, 1e-12).unwrap().pi0.unwrap();
    let apex_rel = (s.apex - pi0).abs() / pi0;
    let sup = s
        .full()
        .iter()
        .map(|q| (q.rho - pi0 * (q.x / pi0).cosh()).abs())
        .fold(0.0, f64::max);
    ensure(sup <= 1e-8, || format!("sup-norm {sup:e}"))?;
    ensure(apex_rel <= 1e-10, || format!("apex error {apex_rel:e}"))?;
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("sup-norm {sup:.2e}, apex error {apex_rel:.2e}, in {elapsed:?}"))
}

fn solve_all() -> Result<Vec<ShootingSolution>, String> {
    certification_params()
        .iter()
        .map(|p| shoot(p, &ShootOptions::default()).map_err(|e| format!("{p:?}: {e}")))
        .collect()
}

fn certification_check(sols: &[ShootingSolution]) -> Outcome {
    let (mut drift, mut el, mut slope) = (0.0_f64, 0.0_f64, 0.0_f64);
    for s in sols {
        let cert = s.certify().map_err(|e| e.to_string())?;
        let r = s.params.r;
        ensure(cert.drift <= 1e-8 * r, || format!("{:?}: drift {:e}", s.params, cert.drift))?;
        ensure(cert.el_residual <= 1e-5, || format!("{:?}: EL residual {:e}", s.params, cert.el_residual))?;
        ensure(cert.max_slope < constants().z0, || format!("{:?}: max slope {}", s.params, cert.max_slope))?;
        ensure(cert.even, || format!("{:?}: ρ'(0) ≠ 0", s.params))?;
        let mirrored = s.full();
        let n = mirrored.len();
        ensure((0..n).all(|i| mirrored[i].rho == mirrored[n - 1 - i].rho), || {
            format!("{:?}: reflected samples differ", s.params)
        })?;
        ensure(cert.strictly_convex, || {
            format!("{:?}: second difference {:e}", s.params, cert.min_second_difference)
        })?;
        ensure(cert.passed, || format!("{:?}: {cert:?}", s.params))?;
        drift = drift.max(cert.drift / r);
        el = el.max(cert.el_residual);
        slope = slope.max(cert.max_slope);
    }
    Ok(format!(
        "{} solutions, max drift/r {drift:.2e}, max EL residual {el:.2e}, max |ρ'| {slope:.4}",
        sols.len()
    ))
}

fn strict_barrier_check(sols: &[ShootingSolution]) -> Outcome {
    let mut margin = f64::INFINITY;
    for s in sols {
        let Parameters { h, r, .. } = s.params;
        let cat = catenary_profile(&solve_pi(h, r, 1e-12).unwrap(), Branch::Stable).unwrap();
        for q in &s.samples[..s.samples.len() - 1] {
            let (lo, hi) = (q.rho - cat.value(q.x), r - q.rho);
            ensure(lo > 0.0 && hi > 0.0, || format!("{:?} at x = {}: ρ₀ = {}, ρ = {}", s.params, q.x, cat.value(q.x), q.rho))?;
            margin = margin.min(lo.min(hi) / r);
        }
    }
    Ok(format!("{} solutions, smallest interior margin / r = {margin:.2e}", sols.len()))
}

fn flattening_check() -> Outcome {
    let start = Instant::now();
    let (h, r) = (1.0, 5.0);
    let cs = [0.0, 1.0, 2.0, 10.0, 30.0, 100.0];
    let base = Parameters::new(h, r, 0.0).unwrap();
    let mut shot = Vec::new();
    for &c in &cs {
        let s = shoot(&base.with_c(c).unwrap(), &ShootOptions::default()).map_err(|e| e.to_string())?;
        shot.push(r - s.apex);
    }
    let opts = MinimizeOptions::with_nodes(h, 401).unwrap();
    let swept = sweep_c(&base, &cs, &opts).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    for e in &swept {
        ensure(e.error.is_none() && e.converged, || format!("sweep entry {e:?}"))?;
    }
    let minimized: Vec<f64> = swept.iter().map(|e| e.sup_distance).collect();
    for (name, d) in [("shooting", &shot), ("minimizer", &minimized)] {
        ensure(d.windows(2).all(|w| w[1] < w[0]), || format!("{name} distances not decreasing: {d:?}"))?;
        ensure(d[d.len() - 1] < 0.05 * r, || format!("{name} distance at c = 100: {}", d[d.len() - 1]))?;
    }
    within(elapsed, Duration::from_secs(30))?;
    Ok(format!(
        "‖ρ_c − r‖∞ = {} (shooting), last {:.4e} (minimizer), in {elapsed:?}",
        shot.iter().map(|d| format!("{d:.4}")).collect::<Vec<_>>().join(" > "),
        minimized[minimized.len() - 1]
    ))
}

fn oracle_check(sols: &[ShootingSolution]) -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for s in sols {
        let opts = MinimizeOptions::with_nodes(s.params.h, 401).unwrap();
        let res = minimize(&s.params, &opts).map_err(|e| e.to_string())?;
        ensure(res.converged, || format!("{:?}: not converged, gradient {:e}", s.params, res.grad_norm))?;
        let reference = s.to_profile(opts.grid).map_err(|e| e.to_string())?;
        let d = sup_diff(res.profile.values(), reference.values());
        ensure(d <= 1e-3, || format!("{:?}: sup-norm gap {d:e}", s.params))?;
        worst = worst.max(d);
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(60))?;
    Ok(format!("{} instances, max sup-norm gap {worst:.2e}, in {elapsed:?}", sols.len()))
}

fn director_check() -> Outcome {
    let prm = Parameters::new(1.0, 3.5, 1.0).unwrap();
    let s = shoot(&prm, &ShootOptions::default()).map_err(|e| e.to_string())?;
    let p = s.to_profile(Grid::new(1.0, 400).unwrap()).map_err(|e| e.to_string())?;
    let phys = PhysicalParams::new(1.5, 2.0 * 1.5 * prm.c).unwrap();
    let e = evaluate(&p, phys.c()).map_err(|e| e.to_string())?;

    let flat = DirectorField::constant(p.grid(), 129, 0.3).unwrap();
    let d = director_energy(&p, &flat, &phys).map_err(|e| e.to_string())?;
    let target = 2.0 * PI * phys.gamma * e.total;
    let rel = (d.total - target).abs() / target;
    ensure(rel <= 1e-9, || format!("constant α: relative gap {rel:e}"))?;

    let wave = DirectorField::from_fn(p.grid(), 129, |_, phi| phi.sin()).unwrap();
    let d = director_energy(&p, &wave, &phys).map_err(|e| e.to_string())?;
    ensure(d.i4.abs() <= 1e-9 * d.i1, || format!("α = sin φ: I4 = {:e}", d.i4))?;
    let i4 = d.i4;

    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut smallest = f64::INFINITY;
    for _ in 0..20 {
        let (a, b, k) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(1..5) as f64);
        let shift = rng.gen_range(0.0..2.0 * PI);
        let field = DirectorField::from_fn(p.grid(), 129, |x, phi| a * x + b * (k * phi + shift).cos()).unwrap();
        let d = director_energy(&p, &field, &phys).map_err(|e| e.to_string())?;
        ensure(d.i2 + d.i3 > 0.0, || format!("I2 + I3 = {}", d.i2 + d.i3))?;
        smallest = smallest.min((d.i2 + d.i3) / d.i1);
    }
    Ok(format!(
        "constant α gap {rel:.2e}, I4(sin φ) = {i4:.2e}, min (I2 + I3)/I1 = {smallest:.3e} over 20 fields"
    ))
}

fn curvature_check() -> Outcome {
    let (h, r) = (0.55, 0.9);
    let prm = Parameters::new(h, r, 0.1).unwrap();
    let s = shoot(&prm, &ShootOptions::default()).map_err(|e| e.to_string())?;
    let cert = s.certify().map_err(|e| e.to_string())?;
    ensure(cert.passed, || format!("not certified: {cert:?}"))?;
    let p = s.to_profile(Grid::new(h, 2000).unwrap()).map_err(|e| e.to_string())?;
    let k = curvatures(&p).map_err(|e| e.to_string())?.summary();
    ensure(k.max_abs_mean > 1e-2 / r, || format!("max |H| = {}", k.max_abs_mean))?;
    ensure(k.gaussian_spread > 0.01, || format!("std(K)/|mean K| = {}", k.gaussian_spread))?;
    Ok(format!(
        "apex {}, max |H|·r = {:.4}, std(K)/|mean K| = {:.4}",
        round_sig(s.apex),
        k.max_abs_mean * r,
        k.gaussian_spread
    ))
}

fn gradient_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let (p, r) = random_piecewise_affine(&mut rng);
        let c = [0.0, 0.1, 1.0, 10.0][rng.gen_range(0..4)] * r * r;
        let grid = p.grid();
        let v = p.values();
        let g = gradient_values(&grid, v, c).map_err(|e| e.to_string())?;
        let scale = g.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        let step = 1e-6 * r;
        let total = |w: &[f64]| evaluate_values(&grid, w, c).unwrap().total;
        for i in 1..v.len() - 1 {
            let (mut up, mut dn) = (v.to_vec(), v.to_vec());
            up[i] += step;
            dn[i] -= step;
            let fd = (total(&up) - total(&dn)) / (2.0 * step);
            let rel = (g[i] - fd).abs() / scale;
            ensure(rel <= 1e-6, || format!("node {i}: {} vs {fd} (scale {scale})", g[i]))?;
            worst = worst.max(rel);
        }
    }
    Ok(format!("100 profiles, max |g − fd| / ‖g‖∞ = {worst:.2e}"))
}

fn main() -> ExitCode {
    let sols = solve_all();
    let with_sols = |f: fn(&[ShootingSolution]) -> Outcome| -> Outcome {
        match &sols {
            Ok(s) => f(s),
            Err(e) => Err(e.clone()),
        }
    };
    let results: Vec<(&str, Outcome)> = vec![
        ("constants", constants_check()),
        ("catenary closed form", closed_form_check()),
        ("Goldschmidt crossover", crossover_check()),
        ("stable below unstable", ordering_check()),
        ("convexification", convexification_check()),
        ("barrier decrease", barrier_decrease_check()),
        ("shooting at c = 0", shooting_catenary_check()),
        ("certification suite", with_sols(certification_check)),
        ("strict barrier", with_sols(strict_barrier_check)),
        ("flattening", flattening_check()),
        ("minimizer vs shooting", with_sols(oracle_check)),
        ("director reduction", director_check()),
        ("curvature", curvature_check()),
        ("gradient", gradient_check()),
    ];
    let mut failed = 0;
    for (i, (name, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
