//! Small reference models with closed-form answers.

use super::dynamic::{newmark_dynamic_solve, DynamicSolveSettings, LateralBoundary};
use super::model::{Material, Model};
use super::modal::lowest_frequency;
use super::static_solve::{geostatic_initialize, prescribed_displacement_solve, StaticSolveSettings};
use crate::constitutive::{ElasticParams, K0Profile};
use crate::error::{Error, Result};
use crate::fem::{QuadratureRule, RegionTag};
use crate::mesh::{build_grid_mesh, uniform_sizes};
use crate::pipeline::motion::{synthesize_motion, AccelUnits, GroundMotion, SynthSpec};
use rustfft::num_complex::Complex;
use std::f64::consts::PI;

fn lines(length: f64, n: usize) -> Result<Vec<f64>> {
    if n == 0 || !(length > 0.0) {
        return Err(Error::InvalidParameter("need a positive length and at least one element".into()));
    }
    let mut out = vec![0.0];
    for s in uniform_sizes(length, length / n as f64) {
        out.push(out.last().unwrap() + s);
    }
    Ok(out)
}

/// Uniform rectangular block of one material, no supports.
pub fn soil_block(height: f64, width: f64, rows: usize, cols: usize, material: Material, rule: &QuadratureRule) -> Result<Model> {
    let mesh = build_grid_mesh(&lines(width, cols)?, &lines(height, rows)?, |_| (RegionTag::Backfill, 0))?;
    Model::with_rule(mesh, vec![material], rule)
}

/// Uniform soil column on a rigid base whose sides share displacements at
/// equal elevation, so it deforms as a 1D shear beam.
pub fn shear_column(height: f64, width: f64, rows: usize, cols: usize, material: Material) -> Result<Model> {
    let mut model = soil_block(height, width, rows, cols, material, &QuadratureRule::full())?;
    for &n in &model.mesh.base {
        model.fixed[2 * n] = true;
        model.fixed[2 * n + 1] = true;
    }
    let base = model.mesh.base.clone();
    let pairs: Vec<(usize, usize)> = model
        .mesh
        .left_side
        .iter()
        .zip(&model.mesh.right_side)
        .filter(|(l, _)| !base.contains(l))
        .map(|(&l, &r)| (r, l))
        .collect();
    for (r, l) in pairs {
        model.ties.push((2 * r, 2 * l));
        model.ties.push((2 * r + 1, 2 * l + 1));
    }
    Ok(model)
}

/// Fundamental frequency `V_s / 4H` of a uniform shear beam (Hz).
pub fn shear_beam_frequency(soil: &ElasticParams, height: f64) -> f64 {
    soil.shear_wave_velocity() / (4.0 * height)
}

/// Steady-state ratio of top to base absolute acceleration for a uniform
/// shear beam with Rayleigh damping `a0 M + a1 K`, driven at `freq` (Hz).
///
/// Mass damping acts on the relative motion, giving an effective density
/// `ρ* = ρ (1 − i a0/ω)` and modulus `G* = G (1 + i ω a1)`.
pub fn shear_beam_amplification(soil: &ElasticParams, height: f64, freq: f64, a0: f64, a1: f64) -> f64 {
    let w = 2.0 * PI * freq;
    let rho = soil.mass_density();
    let rho_star = Complex::new(rho, -rho * a0 / w);
    let g_star = Complex::new(soil.shear_modulus(), soil.shear_modulus() * w * a1);
    let k = (rho_star * w * w / g_star).sqrt();
    let ratio = Complex::new(rho, 0.0) / rho_star;
    (Complex::new(1.0, 0.0) + ratio * (Complex::new(1.0, 0.0) / (k * height).cos() - 1.0)).norm()
}

/// Soil box at rest behind a smooth rigid wall on its left face: base fixed,
/// both sides on vertical rollers, at-rest stresses installed.
pub fn smooth_wall_box(
    height: f64,
    width: f64,
    rows: usize,
    cols: usize,
    material: Material,
    k0: f64,
    rule: &QuadratureRule,
) -> Result<Model> {
    let mut model = soil_block(height, width, rows, cols, material, rule)?;
    model.apply_standard_supports();
    let gamma = material.unit_weight(model.gravity);
    geostatic_initialize(&mut model, &K0Profile::new(k0, gamma, height)?)?;
    Ok(model)
}

/// Horizontal dofs of the wall face, base node excluded.
pub fn wall_face_dofs(model: &Model) -> Vec<usize> {
    model
        .mesh
        .left_side
        .iter()
        .filter(|n| !model.mesh.base.contains(n))
        .map(|&n| 2 * n)
        .collect()
}

/// `K = 2P / γH²` from the mean horizontal stress of the element column
/// touching the wall face.
pub fn wall_face_coefficient(model: &Model) -> f64 {
    let grid = &model.mesh.grid;
    let height = grid.y_lines.last().copied().unwrap_or(0.0) - grid.y_lines[0];
    let p: f64 = (0..grid.n_rows())
        .map(|r| -model.element_mean_stress(grid.element_at(0, r))[0] * (grid.y_lines[r + 1] - grid.y_lines[r]))
        .sum();
    let gamma = model.material_of(0).unit_weight(model.gravity);
    2.0 * p / (gamma * height * height)
}

/// One point of a wall translation path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TranslationPoint {
    /// Wall movement away from the soil (m).
    pub displacement: f64,
    pub k: f64,
    pub iterations: usize,
}

/// Moves the wall face away from the soil in `steps` equal increments and
/// records the face coefficient after each one.
///
/// Increments should stay near 0.1 mm: larger jumps push many points onto
/// the tension apex at once and Newton loses its way.
pub fn translate_wall(model: &mut Model, total: f64, steps: usize, settings: &StaticSolveSettings) -> Result<Vec<TranslationPoint>> {
    if steps == 0 || !(total > 0.0) {
        return Err(Error::InvalidParameter("need a positive translation and at least one step".into()));
    }
    let dofs = wall_face_dofs(model);
    let step = total / steps as f64;
    let mut out = Vec::with_capacity(steps);
    for i in 1..=steps {
        let r = prescribed_displacement_solve(model, &dofs, -step, settings)?;
        out.push(TranslationPoint {
            displacement: step * i as f64,
            k: wall_face_coefficient(model),
            iterations: r.iterations,
        });
    }
    Ok(out)
}

/// Minimum coefficient along a translation path: the active limit before
/// the boundary constraints start to stiffen the box again.
pub fn active_limit(path: &[TranslationPoint]) -> Option<TranslationPoint> {
    path.iter().copied().min_by(|a, b| a.k.total_cmp(&b.k))
}

fn quiet_motion(dt: f64, duration: f64) -> Result<GroundMotion> {
    let n = (duration / dt).ceil() as usize + 1;
    GroundMotion::new(dt, vec![0.0; n], AccelUnits::G, "quiet")
}

/// Releases an elastic model, without gravity, from its lowest mode shape
/// and measures the period of the top-left node's horizontal motion from
/// its upward zero crossings. Returns `(measured, modal)` periods (s).
pub fn free_vibration_period(model: &mut Model, amplitude: f64, cycles: usize, steps_per_period: usize) -> Result<(f64, f64)> {
    model.gravity = 0.0;
    let modal = lowest_frequency(model)?;
    let period = 1.0 / modal.frequency;
    let probe = *model
        .mesh
        .left_side
        .iter()
        .max_by(|a, b| model.mesh.nodes[**a][1].total_cmp(&model.mesh.nodes[**b][1]))
        .ok_or_else(|| Error::Mesh("empty side".into()))?;
    let scale = amplitude / modal.mode[2 * probe].abs().max(1e-300);
    let u: Vec<f64> = modal.mode.iter().map(|m| m * scale).collect();
    let ev = model.evaluate(&u, false)?;
    model.commit(u, ev.states);

    let dt = period / steps_per_period as f64;
    let settings = DynamicSolveSettings {
        dt,
        dt_min: dt / 64.0,
        boundary: LateralBoundary::AsSupported,
        end_time: Some(cycles as f64 * period),
        ..Default::default()
    };
    let motion = quiet_motion(dt, cycles as f64 * period + dt)?;
    let mut trace = vec![(0.0, model.u[2 * probe])];
    newmark_dynamic_solve(model, &motion, &settings, |view| trace.push((view.time, view.u[2 * probe])))?;
    let crossings: Vec<f64> = trace
        .windows(2)
        .filter(|w| w[0].1 < 0.0 && w[1].1 >= 0.0)
        .map(|w| w[0].0 + (w[1].0 - w[0].0) * (-w[0].1) / (w[1].1 - w[0].1))
        .collect();
    if crossings.len() < 2 {
        return Err(Error::InvalidParameter("too few cycles to measure a period".into()));
    }
    let measured = (crossings[crossings.len() - 1] - crossings[0]) / (crossings.len() - 1) as f64;
    Ok((measured, period))
}

/// Steady-state ratio of top to base absolute acceleration of a shear
/// column under a harmonic base motion, measured over the last
/// `window` seconds of a `duration` second record.
pub fn harmonic_amplification(
    model: &mut Model,
    freq: f64,
    a0: f64,
    a1: f64,
    duration: f64,
    window: f64,
    dt: f64,
) -> Result<f64> {
    model.gravity = 0.0;
    let amplitude_g = 0.01;
    let mut spec = SynthSpec::harmonic(amplitude_g, freq, duration, dt);
    spec.taper = 0.0;
    let motion = synthesize_motion(&spec, f64::INFINITY)?;
    let probe = *model
        .mesh
        .left_side
        .iter()
        .max_by(|a, b| model.mesh.nodes[**a][1].total_cmp(&model.mesh.nodes[**b][1]))
        .ok_or_else(|| Error::Mesh("empty side".into()))?;
    let settings = DynamicSolveSettings {
        dt,
        dt_min: dt / 64.0,
        rayleigh_a0: a0,
        rayleigh_a1: a1,
        boundary: LateralBoundary::AsSupported,
        ..Default::default()
    };
    let start = duration - window;
    let (mut top, mut base) = (0.0f64, 0.0f64);
    newmark_dynamic_solve(model, &motion, &settings, |view| {
        if view.time >= start {
            top = top.max((view.a[2 * probe] + view.a_g).abs());
            base = base.max(view.a_g.abs());
        }
    })?;
    if base == 0.0 {
        return Err(Error::InvalidParameter("window holds no base motion".into()));
    }
    Ok(top / base)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn undamped_transfer_matches_cosine() {
        let soil = ElasticParams::new(100.0, 0.3, 2000.0).unwrap();
        let h = 10.0;
        let f = 0.5 * shear_beam_frequency(&soil, h);
        let expect = 1.0 / (2.0 * PI * f * h / soil.shear_wave_velocity()).cos();
        assert!((shear_beam_amplification(&soil, h, f, 0.0, 0.0) - expect).abs() < 1e-12);
        // quasi-static limit
        assert!((shear_beam_amplification(&soil, h, 1e-6, 0.1, 1e-3) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn column_frequency_converges() {
        let soil = ElasticParams::new(163.13, 0.26, 2000.0).unwrap();
        let h = 15.0;
        let model = shear_column(h, 1.0, 15, 1, Material::Elastic(soil)).unwrap();
        let f = super::super::lowest_frequency(&model).unwrap().frequency;
        let exact = shear_beam_frequency(&soil, h);
        assert!((f / exact - 1.0).abs() < 0.005, "{f} vs {exact}");
    }
}
