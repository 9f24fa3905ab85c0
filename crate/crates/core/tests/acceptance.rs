//! Acceptance checks. Prints one PASS/FAIL line per criterion with the
//! measured values; a FAIL is reported, not hidden, and does not abort the
//! remaining checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sheetpile::config::RunConfig;
use sheetpile::constitutive::{drained_compression, mc_return_map, mc_yield, GaussState, MohrCoulombParams};
use sheetpile::fem::QuadratureRule;
use sheetpile::mesh::{build_site_mesh, wave_resolution_check, wave_size_limit, SiteConfig, Stage};
use sheetpile::pipeline::*;
use sheetpile::pressure_models::{mo_coefficient, wedge_oracle_coefficient, PressureMode, SeismicCoefficients, WallSoilParams};
use sheetpile::solvers::benchmarks::*;
use sheetpile::solvers::*;
use sheetpile::Error;
use std::time::{Duration, Instant};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn run(id: usize, title: &str, limit: Duration, check: impl FnOnce() -> Result<Outcome, Error>) -> bool {
    let t = Instant::now();
    let result = check();
    let elapsed = t.elapsed();
    let (pass, detail) = match result {
        Ok(o) => (o.pass && elapsed <= limit, o.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    let slow = if elapsed > limit { " (over time limit)" } else { "" };
    println!(
        "criterion {id:>2} {}: {title}: {detail} [{:.1} s{slow}]",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    pass
}

fn mo_against_oracle() -> Result<Outcome, Error> {
    let mut worst = 0.0f64;
    let mut cases = 0;
    let mut skipped = 0;
    for phi in [25.0f64, 30.0, 35.0, 40.0] {
        for delta in [0.0, phi / 2.0] {
            let p = WallSoilParams::from_degrees(phi, delta, 0.0, 0.0, 19.6, 6.0)?;
            for kh in [0.0, 0.1, 0.2, 0.3] {
                for mode in [PressureMode::Active, PressureMode::Passive] {
                    let c = SeismicCoefficients::horizontal(kh);
                    match mo_coefficient(&p, c, mode) {
                        Ok(k) => {
                            worst = worst.max((k - wedge_oracle_coefficient(&p, c, mode, 20_000)?).abs());
                            cases += 1;
                        }
                        Err(Error::ValidityDomainExceeded { .. }) => skipped += 1,
                        Err(e) => return Err(e),
                    }
                }
            }
        }
    }
    Ok(outcome(worst <= 1e-4, format!("max |dK| = {worst:.2e} over {cases} cases ({skipped} outside validity)")))
}

fn coulomb_limit() -> Result<Outcome, Error> {
    let cfg = RunConfig::default();
    let material = cfg.materials()?[0];
    let mut model = smooth_wall_box(6.0, 12.0, 10, 20, material, cfg.soil.k0, &QuadratureRule::full())?;
    let settings = StaticSolveSettings {
        load_substeps: 1,
        ..cfg.static_solve.settings()
    };
    let path = translate_wall(&mut model, 0.002, 100, &settings)?;
    let limit = active_limit(&path).ok_or_else(|| Error::InvalidParameter("empty path".into()))?;
    let ka = 0.2174;
    let err = (limit.k - ka).abs() / ka;
    Ok(outcome(
        err <= 0.15,
        format!(
            "{} elements, active limit K = {:.4} at {:.2} mm (K_a = {ka}, error {:.1}%), K at 2 mm = {:.4}",
            model.mesh.elements.len(),
            limit.k,
            limit.displacement * 1e3,
            err * 100.0,
            path.last().unwrap().k
        ),
    ))
}

fn geostatic_equilibrium() -> Result<Outcome, Error> {
    let cfg = RunConfig::default();
    let (mut model, _) = cfg.build_model()?;
    let stage = Stage {
        label: "check".into(),
        deactivate: Vec::new(),
    };
    let report = newton_static_solve(&mut model, &stage, &cfg.static_solve.settings())?;
    let rows = static_rows(&cfg, &static_profiles(&model, &cfg)?, "geostatic")?;
    let k = rows.iter().find(|r| r.side == WallSide::Active).map(|r| r.k_fe).unwrap_or(f64::NAN);
    let err = (k - 0.36).abs() / 0.36;
    Ok(outcome(
        report.max_displacement <= 1e-6 && err <= 0.03,
        format!("max displacement {:.2e} m, active K = {k:.4} ({:.2}% from 0.36)", report.max_displacement, err * 100.0),
    ))
}

fn modal_estimate() -> Result<Outcome, Error> {
    let cfg = RunConfig::default();
    let (model, _) = cfg.build_model()?;
    let f_site = lowest_frequency(&model)?.frequency;
    let soil = cfg.soil.elastic()?;
    let h = soil.shear_wave_velocity() / 12.0;
    let column = shear_column(h, 1.0, 15, 1, Material::Elastic(soil))?;
    let f_col = lowest_frequency(&column)?.frequency;
    let col_err = (f_col / 3.0 - 1.0).abs();
    Ok(outcome(
        (3.6..=6.0).contains(&f_site) && col_err <= 0.03,
        format!("site f1 = {f_site:.3} Hz, shear column f1 = {f_col:.4} Hz ({:.2}% from 3.0)", col_err * 100.0),
    ))
}

fn wave_rule() -> Result<Outcome, Error> {
    let cfg = RunConfig::default();
    let soil = cfg.soil.elastic()?;
    let limit = wave_size_limit(&soil, 15.0);
    let mesh = build_site_mesh(&cfg.site)?;
    let report = wave_resolution_check(&mesh, &[soil, cfg.wall.elastic()?], 15.0);
    Ok(outcome(
        (limit - 1.499).abs() < 5e-4 && report.passes(),
        format!("limit {limit:.4} m, {} elements, {} failures", report.checked, report.failures.len()),
    ))
}

fn constitutive_strength() -> Result<Outcome, Error> {
    let cfg = RunConfig::default();
    let ep = cfg.soil.elastic()?;
    let cohesionless = MohrCoulombParams::new(40f64.to_radians(), 0.0, 0.0)?;
    let sigma1 = *drained_compression(&cohesionless, &ep, 100.0, 2e-5, 400)?.last().unwrap();
    let err = (sigma1 - 460.0).abs() / 460.0;

    let mp = cfg.soil.strength()?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..10_000 {
        let p = rng.gen_range(-300.0..50.0);
        let trial = [
            p + rng.gen_range(-200.0..200.0),
            p + rng.gen_range(-200.0..200.0),
            p + rng.gen_range(-200.0..200.0),
            rng.gen_range(-150.0..150.0),
        ];
        let r = mc_return_map(&trial, &GaussState::default(), &mp, &ep)?;
        let reference = r.state.mean_stress().abs().max(1.0);
        worst = worst.max(mc_yield(&r.state.stress, &mp) / reference);
    }
    Ok(outcome(
        err <= 0.005 && worst <= 1e-8,
        format!("sigma1 = {sigma1:.2} kPa ({:.3}% from 460), max f/ref over 1e4 returns = {worst:.1e}", err * 100.0),
    ))
}

fn dynamics_fidelity() -> Result<Outcome, Error> {
    let soil = RunConfig::default().soil.elastic()?;
    let h = soil.shear_wave_velocity() / 12.0;
    let mut column = shear_column(h, 1.0, 10, 1, Material::Elastic(soil))?;
    let (measured, modal) = free_vibration_period(&mut column, 1e-3, 5, 100)?;
    let period_err = (measured / modal - 1.0).abs();

    let mut column = shear_column(h, 1.0, 15, 1, Material::Elastic(soil))?;
    let f1 = lowest_frequency(&column)?.frequency;
    let (a0, a1) = rayleigh_coefficients(0.05, f1, 3.0 * f1)?;
    let drive = 0.8 * f1;
    let amp = harmonic_amplification(&mut column, drive, a0, a1, 12.0, 2.0, 0.002)?;
    let exact = shear_beam_amplification(&soil, h, drive, a0, a1);
    let amp_err = (amp / exact - 1.0).abs();
    Ok(outcome(
        period_err <= 0.01 && amp_err <= 0.05,
        format!(
            "period error {:.3}%, amplification {amp:.3} vs {exact:.3} ({:.2}%)",
            period_err * 100.0,
            amp_err * 100.0
        ),
    ))
}

fn rayleigh_exactness() -> Result<Outcome, Error> {
    let mut worst = 0.0f64;
    for (f1, f2) in [(4.8, 2.0), (4.9, 4.9), (1.0, 15.0), (4.44, 7.3)] {
        let (a0, a1) = rayleigh_coefficients(0.01, f1, f2)?;
        for f in [f1, f2] {
            worst = worst.max((rayleigh_ratio(a0, a1, f) - 0.01).abs());
        }
    }
    Ok(outcome(worst <= 1e-12, format!("max |zeta - 0.01| = {worst:.1e}")))
}

fn end_to_end() -> Result<Outcome, Error> {
    let cfg = RunConfig {
        site: SiteConfig::coarse(),
        ..RunConfig::default()
    };
    let (model, _) = run_static(&cfg)?;
    let pgas = [0.05, 0.15, 0.30];
    let motions = pgas
        .iter()
        .map(|&a| synthesize_motion(&SynthSpec::harmonic(a, 2.0, 3.0, 0.005), cfg.dynamic.f_cutoff))
        .collect::<Result<Vec<_>, _>>()?;
    let results = shake_all(&cfg, &model, &motions)?;
    let t = |i: usize| &results[i].table;

    let a = t(1).flags.a_close_to_mo;
    let b = t(2).flags.b_below_mo;
    let c: Vec<Option<bool>> = results.iter().map(|r| r.table.flags.c_away_exceeds_toward).collect();
    let c_all = c.iter().all(|x| *x != Some(false)) && c.iter().any(|x| x.is_some());
    let e = t(0).flags.e_passive_below_mo;
    let tables: Vec<&ComparisonTable> = results.iter().map(|r| &r.table).collect();
    let f = passive_increases_with_shaking(&tables);
    let static_yh = t(0)
        .rows
        .iter()
        .find(|r| r.is_static && r.side == WallSide::Active)
        .and_then(|r| r.y_over_h);
    let static_ok = static_yh.is_some_and(|v| (0.20..=0.33).contains(&v));
    let dyn_yh = t(0).active.mean_y_over_h;
    let dyn_ok = dyn_yh.is_some_and(|v| (0.20..=0.30).contains(&v));

    // diagnostic only: deviation over peaks with inertia away from the backfill
    let away_dev: Vec<f64> = t(1)
        .rows
        .iter()
        .filter(|r| !r.is_static && r.side == WallSide::Active && r.k_h > 0.0)
        .filter_map(|r| r.relative_deviation())
        .map(f64::abs)
        .collect();
    let away_mean = away_dev.iter().sum::<f64>() / away_dev.len().max(1) as f64;

    let show = |v: Option<bool>| match v {
        Some(true) => "pass",
        Some(false) => "FAIL",
        None => "n/a",
    };
    let fmt = |v: Option<f64>| v.map_or("NA".into(), |v| format!("{v:.3}"));
    let pass = a == Some(true) && b == Some(true) && c_all && e == Some(true) && f == Some(true) && static_ok && dyn_ok;
    Ok(outcome(
        pass,
        format!(
            "{} elements; (a) {} mean |dev| {} [k_h>0 peaks {away_mean:.3}]; (b) {} below {}; (c) {} {:?}; (e) {}; (f) {} max passive K {:?}; static Y/H {} {}; dynamic Y/H at 0.05 g {} {}",
            model.mesh.elements.len(),
            show(a),
            fmt(t(1).active.mean_abs_deviation),
            show(b),
            fmt(t(2).active.fraction_below_mo),
            if c_all { "pass" } else { "FAIL" },
            c.iter().map(|x| show(*x)).collect::<Vec<_>>(),
            show(e),
            show(f),
            results.iter().map(|r| r.table.passive.max_k_fe.map(|v| (v * 1000.0).round() / 1000.0)).collect::<Vec<_>>(),
            fmt(static_yh),
            if static_ok { "pass" } else { "FAIL" },
            fmt(dyn_yh),
            if dyn_ok { "pass" } else { "FAIL" },
        ),
    ))
}

fn post_processing_arithmetic() -> Result<Outcome, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..100_000 {
        let p = rng.gen_range(0.0..500.0);
        let gamma = rng.gen_range(10.0..25.0);
        let h = rng.gen_range(0.5..20.0);
        let kv = rng.gen_range(-0.3..0.3);
        let k = back_calculate_k(p, gamma, h, kv)?;
        let direct = 2.0 * p / (gamma * h * h * (1.0 - kv));
        worst = worst.max((k - direct).abs() / direct.abs().max(1e-300));

        let n = rng.gen_range(1..12);
        let sigma: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..200.0)).collect();
        let hs: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..1.0)).collect();
        let ys: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..h)).collect();
        let profile = PressureProfile::new(WallSide::Active, sigma.clone(), hs.clone(), ys.clone(), h)?;
        let (y, ratio) = application_height(&profile)?;
        let num: f64 = (0..n).map(|i| hs[i] * sigma[i] * ys[i]).sum();
        let den: f64 = (0..n).map(|i| hs[i] * sigma[i]).sum();
        worst = worst.max((y - num / den).abs() / (num / den).abs().max(1e-300));
        worst = worst.max((ratio - num / den / h).abs() / (num / den / h).abs().max(1e-300));
    }
    Ok(outcome(worst <= 1e-12, format!("max relative difference {worst:.1e} over 1e5 cases")))
}

fn main() {
    let s = Duration::from_secs;
    let results = [
        run(1, "M-O against the wedge oracle", s(10), mo_against_oracle),
        run(2, "static Coulomb limit by wall translation", s(120), coulomb_limit),
        run(3, "geostatic self-equilibrium", s(60), geostatic_equilibrium),
        run(4, "modal estimate", s(60), modal_estimate),
        run(5, "wave-resolution rule", s(1), wave_rule),
        run(6, "constitutive strength and return map", s(10), constitutive_strength),
        run(7, "dynamics fidelity", s(300), dynamics_fidelity),
        run(8, "Rayleigh exactness", s(1), rayleigh_exactness),
        run(9, "end-to-end directional reproduction", s(1800), end_to_end),
        run(10, "resultant and application-height arithmetic", s(5), post_processing_arithmetic),
    ];
    let passed = results.iter().filter(|p| **p).count();
    println!("acceptance: {passed}/{} criteria pass", results.len());
}
