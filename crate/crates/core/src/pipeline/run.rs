//! Staged-static then dynamic runs, recording probe coefficients and wall
//! pressure profiles at every step.

use super::filter::{filtfilt_lowpass, lowpass_filter};
use super::comparison::comparison_table;
use super::motion::{load_ground_motion, synthesize_motion, GroundMotion};
use super::report::MotionResult;
use super::pressure::{kh_from_acceleration, wall_pressure_profile, wedge_probe_point, PressureProfile, WallSide};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use rayon::prelude::*;
use crate::solvers::{
    lowest_frequency, newmark_dynamic_solve, rayleigh_coefficients, run_stages, DynamicSolveSettings, DynamicSummary, Model,
    StageReport, GRAVITY,
};

/// Builds the model and runs every construction stage.
pub fn run_static(cfg: &RunConfig) -> Result<(Model, Vec<StageReport>)> {
    let (mut model, stages) = cfg.build_model()?;
    let reports = run_stages(&mut model, &stages, &cfg.static_solve.settings())?;
    Ok((model, reports))
}

/// Static profiles on both sides of the wall.
pub fn static_profiles(model: &Model, cfg: &RunConfig) -> Result<Vec<PressureProfile>> {
    WallSide::BOTH
        .iter()
        .map(|&s| wall_pressure_profile(model, &cfg.site, s))
        .collect()
}

/// Applies the configured scale and optional low-pass filter.
pub fn prepare_motion(cfg: &RunConfig, motion: &GroundMotion) -> Result<GroundMotion> {
    let scaled = motion.scaled(cfg.dynamic.scale);
    if cfg.dynamic.filter {
        lowpass_filter(&scaled, cfg.dynamic.f_cutoff)
    } else {
        Ok(scaled)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampingChoice {
    pub zeta: f64,
    pub f1: f64,
    pub f2: f64,
    pub a0: f64,
    pub a1: f64,
    /// Whether `f1` came from the modal estimate.
    pub f1_from_modal: bool,
    /// Whether `f2` came from the motion spectrum.
    pub f2_from_motion: bool,
}

/// Rayleigh targets: the configured frequencies, or the lowest mode of the
/// post-construction model and the motion's predominant frequency.
pub fn calibrate_damping(cfg: &RunConfig, model: &Model, motion: &GroundMotion) -> Result<DampingChoice> {
    let (f1, f1_from_modal) = match cfg.damping.f1 {
        Some(f) => (f, false),
        None => (lowest_frequency(model)?.frequency, true),
    };
    let (f2, f2_from_motion) = match cfg.damping.f2 {
        Some(f) => (f, false),
        None => match motion.predominant_frequency(cfg.dynamic.f_cutoff) {
            Some(f) => (f, true),
            // a silent record has no spectrum peak
            None => (f1, false),
        },
    };
    let (a0, a1) = rayleigh_coefficients(cfg.damping.zeta, f1, f2)?;
    Ok(DampingChoice {
        zeta: cfg.damping.zeta,
        f1,
        f2,
        a0,
        a1,
        f1_from_modal,
        f2_from_motion,
    })
}

/// Time history on one side of the wall.
#[derive(Debug, Clone, PartialEq)]
pub struct SideHistory {
    pub side: WallSide,
    pub probe_node: usize,
    pub probe_point: [f64; 2],
    /// Probe coefficient low-passed at the mesh cutoff; peaks are picked here.
    pub k_h: Vec<f64>,
    /// Unfiltered probe coefficient.
    pub k_h_raw: Vec<f64>,
    pub profiles: Vec<PressureProfile>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DynamicRecord {
    pub label: String,
    pub times: Vec<f64>,
    /// Base acceleration (g).
    pub base_accel: Vec<f64>,
    pub sides: Vec<SideHistory>,
    pub static_profiles: Vec<PressureProfile>,
    pub summary: DynamicSummary,
    pub damping: DampingChoice,
    pub dt: f64,
}

impl DynamicRecord {
    pub fn side(&self, side: WallSide) -> &SideHistory {
        self.sides.iter().find(|s| s.side == side).expect("both sides recorded")
    }
}

pub fn dynamic_settings(cfg: &RunConfig, damping: &DampingChoice) -> DynamicSolveSettings {
    DynamicSolveSettings {
        newmark_beta: cfg.dynamic.newmark_beta,
        newmark_gamma: cfg.dynamic.newmark_gamma,
        dt: cfg.dynamic.dt,
        dt_min: cfg.dynamic.dt / 64.0,
        rayleigh_a0: damping.a0,
        rayleigh_a1: damping.a1,
        boundary: cfg.dynamic.boundary,
        max_newton_iters: cfg.dynamic.max_newton_iters,
        force_tolerance: cfg.dynamic.force_tolerance,
        end_time: None,
    }
}

/// Shakes a constructed model with an already prepared motion.
pub fn record_dynamic(model: &mut Model, cfg: &RunConfig, motion: &GroundMotion) -> Result<DynamicRecord> {
    let damping = calibrate_damping(cfg, model, motion)?;
    let settings = dynamic_settings(cfg, &damping);
    let static_profiles = static_profiles(model, cfg)?;
    let phi = cfg.soil.friction_angle_deg.to_radians();
    let delta = cfg.analysis.wall_friction_deg.to_radians();
    let mut sides = Vec::new();
    for side in WallSide::BOTH {
        let point = wedge_probe_point(&cfg.site, phi, delta, cfg.analysis.gamma, side)?;
        sides.push(SideHistory {
            side,
            probe_node: model.mesh.nearest_node(point),
            probe_point: point,
            k_h: Vec::new(),
            k_h_raw: Vec::new(),
            profiles: Vec::new(),
        });
    }
    let mut times = Vec::new();
    let mut base_accel = Vec::new();
    let mut failure: Option<Error> = None;
    let site = cfg.site.clone();
    let summary = newmark_dynamic_solve(model, motion, &settings, |view| {
        times.push(view.time);
        base_accel.push(view.a_g / GRAVITY);
        for s in sides.iter_mut() {
            let a_abs = view.a[2 * s.probe_node] + view.a_g;
            s.k_h_raw.push(kh_from_acceleration(a_abs, s.side, GRAVITY));
            match wall_pressure_profile(view.model, &site, s.side) {
                Ok(p) => s.profiles.push(p),
                Err(e) => {
                    failure.get_or_insert(e);
                }
            }
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    // content above the cutoff is not resolved by the mesh
    for s in sides.iter_mut() {
        s.k_h = if cfg.dynamic.filter {
            filtfilt_lowpass(&s.k_h_raw, cfg.dynamic.f_cutoff, settings.dt)?
        } else {
            s.k_h_raw.clone()
        };
    }
    Ok(DynamicRecord {
        label: motion.label.clone(),
        times,
        base_accel,
        sides,
        static_profiles,
        summary,
        damping,
        dt: settings.dt,
    })
}

/// Motion files first, then synthetic motions, in config order.
pub fn configured_motions(cfg: &RunConfig) -> Result<Vec<GroundMotion>> {
    let mut out = Vec::new();
    for f in &cfg.motion_files {
        out.push(load_ground_motion(&f.path, f.units)?);
    }
    for s in &cfg.synthetic_motions {
        out.push(synthesize_motion(s, cfg.dynamic.f_cutoff)?);
    }
    Ok(out)
}

/// Shakes a copy of the constructed model with every motion, in parallel.
/// Results keep the input order.
pub fn shake_all(cfg: &RunConfig, constructed: &Model, motions: &[GroundMotion]) -> Result<Vec<MotionResult>> {
    motions
        .par_iter()
        .map(|m| {
            let mut model = constructed.clone();
            let prepared = prepare_motion(cfg, m)?;
            let record = record_dynamic(&mut model, cfg, &prepared)?;
            let table = comparison_table(cfg, &record)?;
            Ok(MotionResult { record, table })
        })
        .collect()
}
