use sheetpile::config::RunConfig;
use sheetpile::constitutive::{ElasticParams, K0Profile};
use sheetpile::fem::QuadratureRule;
use sheetpile::mesh::Stage;
use sheetpile::pipeline::{AccelUnits, GroundMotion};
use sheetpile::solvers::benchmarks::*;
use sheetpile::solvers::static_solve::geostatic_initialize;
use sheetpile::solvers::*;

fn soil() -> ElasticParams {
    RunConfig::default().soil.elastic().unwrap()
}

/// Column height giving a 3 Hz fundamental frequency.
fn three_hertz_height() -> f64 {
    soil().shear_wave_velocity() / 12.0
}

fn no_stage() -> Stage {
    Stage {
        label: "load".into(),
        deactivate: Vec::new(),
    }
}

#[test]
fn shear_column_fundamental_frequency() {
    let h = three_hertz_height();
    let model = shear_column(h, 1.0, 15, 1, Material::Elastic(soil())).unwrap();
    let f = lowest_frequency(&model).unwrap().frequency;
    assert!((f / 3.0 - 1.0).abs() < 0.03, "f1 = {f}");
}

#[test]
fn free_vibration_period_matches_mode() {
    let mut model = shear_column(three_hertz_height(), 1.0, 10, 1, Material::Elastic(soil())).unwrap();
    let (measured, modal) = free_vibration_period(&mut model, 1e-3, 5, 100).unwrap();
    assert!((measured / modal - 1.0).abs() <= 0.01, "{measured} vs {modal}");
}

#[test]
fn harmonic_amplification_matches_shear_beam() {
    let ep = soil();
    let h = three_hertz_height();
    let mut model = shear_column(h, 1.0, 15, 1, Material::Elastic(ep)).unwrap();
    let f1 = lowest_frequency(&model).unwrap().frequency;
    let (a0, a1) = rayleigh_coefficients(0.05, f1, 3.0 * f1).unwrap();
    let drive = 0.8 * f1;
    let measured = harmonic_amplification(&mut model, drive, a0, a1, 12.0, 2.0, 0.002).unwrap();
    let exact = shear_beam_amplification(&ep, h, drive, a0, a1);
    assert!((measured / exact - 1.0).abs() <= 0.05, "{measured} vs {exact}");
}

#[test]
fn linear_newmark_balances_energy() {
    let ep = soil();
    let mut model = shear_column(three_hertz_height(), 1.0, 10, 1, Material::Elastic(ep)).unwrap();
    model.gravity = 0.0;
    let (a0, a1) = rayleigh_coefficients(0.02, 3.0, 9.0).unwrap();
    let dt = 0.002;
    let samples: Vec<f64> = (0..1500).map(|i| 0.1 * (2.0 * std::f64::consts::PI * 2.0 * i as f64 * dt).sin()).collect();
    let motion = GroundMotion::new(dt, samples, AccelUnits::G, "sine").unwrap();
    let settings = DynamicSolveSettings {
        dt,
        dt_min: dt / 64.0,
        rayleigh_a0: a0,
        rayleigh_a1: a1,
        boundary: LateralBoundary::AsSupported,
        force_tolerance: 1e-10,
        ..Default::default()
    };
    let summary = newmark_dynamic_solve(&mut model, &motion, &settings, |_| {}).unwrap();
    assert!(summary.energy.relative_residual() <= 1e-6, "{:?}", summary.energy);
}

#[test]
fn zero_motion_keeps_the_static_state() {
    let cfg = RunConfig::default();
    let material = cfg.materials().unwrap()[0];
    let mut model = smooth_wall_box(6.0, 12.0, 6, 12, material, cfg.soil.k0, &QuadratureRule::full()).unwrap();
    let u0 = model.u.clone();
    let motion = GroundMotion::new(0.005, vec![0.0; 101], AccelUnits::G, "quiet").unwrap();
    let settings = DynamicSolveSettings {
        boundary: LateralBoundary::FreeField,
        ..Default::default()
    };
    let mut worst = 0.0f64;
    newmark_dynamic_solve(&mut model, &motion, &settings, |view| {
        for (a, b) in view.u.iter().zip(&u0) {
            worst = worst.max((a - b).abs());
        }
    })
    .unwrap();
    assert!(worst <= 1e-10, "drift {worst}");
}

#[test]
fn elastic_element_under_gravity_takes_one_iteration() {
    let mut model = soil_block(1.0, 1.0, 1, 1, Material::Elastic(soil()), &QuadratureRule::full()).unwrap();
    model.apply_standard_supports();
    let settings = StaticSolveSettings {
        load_substeps: 1,
        ..Default::default()
    };
    let report = newton_static_solve(&mut model, &no_stage(), &settings).unwrap();
    assert_eq!(report.iterations, 1, "{:?}", report.residual_history);
}

fn excavated_box(material: Material, substeps: usize) -> Vec<f64> {
    let cfg = RunConfig::default();
    let gamma = material.unit_weight(GRAVITY);
    let mut model = soil_block(4.0, 8.0, 4, 8, material, &QuadratureRule::full()).unwrap();
    model.apply_standard_supports();
    geostatic_initialize(&mut model, &K0Profile::new(cfg.soil.k0, gamma, 4.0).unwrap()).unwrap();
    let grid = model.mesh.grid.clone();
    let stage = Stage {
        label: "cut".into(),
        deactivate: (0..2).map(|c| grid.element_at(c, 3)).collect(),
    };
    let settings = StaticSolveSettings {
        load_substeps: substeps,
        force_tolerance: 1e-9,
        ..Default::default()
    };
    newton_static_solve(&mut model, &stage, &settings).unwrap();
    model.u
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

#[test]
fn halving_substeps_keeps_the_converged_state() {
    let cfg = RunConfig::default();
    let elastic = Material::Elastic(soil());
    let a = excavated_box(elastic, 2);
    let b = excavated_box(elastic, 4);
    let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    assert!(max_diff(&a, &b) <= 1e-8 * scale, "elastic diff {}", max_diff(&a, &b));

    // plastic answers depend on the path; the spread stays local to the
    // unconfined corner of the cut
    let plastic = cfg.materials().unwrap()[0];
    let runs: Vec<Vec<f64>> = [2, 4, 8, 16].iter().map(|&n| excavated_box(plastic, n)).collect();
    let scale = runs[0].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    for w in runs.windows(2) {
        assert!(max_diff(&w[0], &w[1]) <= 0.05 * scale, "plastic diff {}", max_diff(&w[0], &w[1]));
    }
}
