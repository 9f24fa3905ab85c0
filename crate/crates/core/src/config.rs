//! Run configuration (TOML). Angles are in degrees here and converted to
//! radians once when the model is built.

use crate::constitutive::{ElasticParams, K0Profile, MohrCoulombParams};
use crate::error::{Error, Result};
use crate::mesh::{build_site_mesh, stage_plan, SiteConfig, Stage};
use crate::pipeline::motion::{AccelUnits, SynthSpec};
use crate::solvers::{geostatic_initialize, LateralBoundary, Material, Model, StaticSolveSettings, GRAVITY};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SoilConfig {
    pub youngs_modulus_mpa: f64,
    pub poisson_ratio: f64,
    pub density: f64,
    pub friction_angle_deg: f64,
    pub dilation_angle_deg: f64,
    pub cohesion_kpa: f64,
    pub k0: f64,
}

impl Default for SoilConfig {
    fn default() -> Self {
        Self {
            youngs_modulus_mpa: 163.13,
            poisson_ratio: 0.26,
            density: 2000.0,
            friction_angle_deg: 40.0,
            dilation_angle_deg: 0.0,
            cohesion_kpa: 0.2,
            k0: 0.36,
        }
    }
}

impl SoilConfig {
    pub fn elastic(&self) -> Result<ElasticParams> {
        ElasticParams::new(self.youngs_modulus_mpa, self.poisson_ratio, self.density)
    }

    pub fn strength(&self) -> Result<MohrCoulombParams> {
        MohrCoulombParams::new(
            self.friction_angle_deg.to_radians(),
            self.cohesion_kpa,
            self.dilation_angle_deg.to_radians(),
        )
    }

    /// Unit weight `ρ g` (kN/m³).
    pub fn unit_weight(&self) -> f64 {
        self.density / 1000.0 * GRAVITY
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WallConfig {
    pub youngs_modulus_mpa: f64,
    pub poisson_ratio: f64,
    pub density: f64,
    pub concrete_strength_mpa: f64,
    /// Derive the modulus from the concrete strength instead.
    pub ec_from_fc: bool,
    /// Reinforcement properties; echoed, not used by the elastic wall.
    pub steel_yield_mpa: f64,
    pub steel_modulus_gpa: f64,
}

impl Default for WallConfig {
    fn default() -> Self {
        Self {
            youngs_modulus_mpa: 30000.0,
            poisson_ratio: 0.2,
            density: 2400.0,
            concrete_strength_mpa: 27.6,
            ec_from_fc: false,
            steel_yield_mpa: 413.4,
            steel_modulus_gpa: 200.0,
        }
    }
}

/// Concrete modulus `5000 √f'c` (MPa).
pub fn ec_from_fc(fc_mpa: f64) -> f64 {
    5000.0 * fc_mpa.sqrt()
}

impl WallConfig {
    pub fn modulus(&self) -> f64 {
        if self.ec_from_fc {
            ec_from_fc(self.concrete_strength_mpa)
        } else {
            self.youngs_modulus_mpa
        }
    }

    pub fn elastic(&self) -> Result<ElasticParams> {
        ElasticParams::new(self.modulus(), self.poisson_ratio, self.density)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DampingConfig {
    pub zeta: f64,
    /// First target frequency (Hz); computed from the modal estimate if absent.
    pub f1: Option<f64>,
    /// Second target frequency (Hz); the motion's predominant frequency if absent.
    pub f2: Option<f64>,
}

impl Default for DampingConfig {
    fn default() -> Self {
        Self {
            zeta: 0.01,
            f1: None,
            f2: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StaticConfig {
    pub load_substeps: usize,
    pub max_newton_iters: usize,
    pub force_tolerance: f64,
    pub displacement_tolerance: f64,
}

impl Default for StaticConfig {
    fn default() -> Self {
        let s = StaticSolveSettings::default();
        Self {
            load_substeps: s.load_substeps,
            max_newton_iters: s.max_newton_iters,
            force_tolerance: s.force_tolerance,
            displacement_tolerance: s.displacement_tolerance,
        }
    }
}

impl StaticConfig {
    pub fn settings(&self) -> StaticSolveSettings {
        StaticSolveSettings {
            load_substeps: self.load_substeps,
            max_newton_iters: self.max_newton_iters,
            force_tolerance: self.force_tolerance,
            displacement_tolerance: self.displacement_tolerance,
            ..StaticSolveSettings::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DynamicConfig {
    pub dt: f64,
    pub newmark_beta: f64,
    pub newmark_gamma: f64,
    pub boundary: LateralBoundary,
    pub f_cutoff: f64,
    /// Low-pass the input motion at `f_cutoff` before use.
    pub filter: bool,
    /// Multiplier applied to every motion.
    pub scale: f64,
    pub max_newton_iters: usize,
    pub force_tolerance: f64,
}

impl Default for DynamicConfig {
    fn default() -> Self {
        Self {
            dt: 0.005,
            newmark_beta: 0.25,
            newmark_gamma: 0.5,
            boundary: LateralBoundary::FreeField,
            f_cutoff: 15.0,
            filter: true,
            scale: 1.0,
            max_newton_iters: 25,
            force_tolerance: 1e-7,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    /// Wall friction used by the analytical comparisons.
    pub wall_friction_deg: f64,
    /// Unit weight for the analytical models (kN/m³).
    pub gamma: f64,
    pub wood_factor: f64,
    pub wood_height_ratio: f64,
    /// Smallest |k_h| retained when picking peaks.
    pub noise_floor: f64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            wall_friction_deg: 0.0,
            gamma: 19.6,
            wood_factor: 1.0,
            wood_height_ratio: 0.63,
            noise_floor: 0.01,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MotionFile {
    pub path: PathBuf,
    pub units: Option<AccelUnits>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub site: SiteConfig,
    pub soil: SoilConfig,
    pub wall: WallConfig,
    pub damping: DampingConfig,
    #[serde(rename = "static")]
    pub static_solve: StaticConfig,
    pub dynamic: DynamicConfig,
    pub analysis: AnalysisConfig,
    pub motion_files: Vec<MotionFile>,
    pub synthetic_motions: Vec<SynthSpec>,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            site: SiteConfig::default(),
            soil: SoilConfig::default(),
            wall: WallConfig::default(),
            damping: DampingConfig::default(),
            static_solve: StaticConfig::default(),
            dynamic: DynamicConfig::default(),
            analysis: AnalysisConfig::default(),
            motion_files: Vec::new(),
            synthetic_motions: Vec::new(),
            output_dir: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration is always serializable")
    }

    pub fn validate(&self) -> Result<()> {
        self.site.validate()?;
        self.soil.elastic()?;
        self.soil.strength()?;
        K0Profile::new(self.soil.k0, self.soil.unit_weight(), self.site.total_height())?;
        self.wall.elastic()?;
        if !(self.damping.zeta > 0.0) {
            return Err(Error::InvalidParameter("damping ratio must be positive".into()));
        }
        self.static_solve.settings().validate()?;
        if !(self.dynamic.dt > 0.0 && self.dynamic.f_cutoff > 0.0) {
            return Err(Error::InvalidParameter("dynamic dt and cutoff must be positive".into()));
        }
        if self.analysis.wall_friction_deg.abs() > self.soil.friction_angle_deg {
            return Err(Error::InvalidParameter("wall friction exceeds soil friction".into()));
        }
        Ok(())
    }

    pub fn materials(&self) -> Result<Vec<Material>> {
        Ok(vec![
            Material::MohrCoulomb {
                elastic: self.soil.elastic()?,
                strength: self.soil.strength()?,
            },
            Material::Elastic(self.wall.elastic()?),
        ])
    }

    pub fn k0_profile(&self) -> Result<K0Profile> {
        K0Profile::new(self.soil.k0, self.soil.unit_weight(), self.site.total_height())
    }

    /// Meshed model with standard supports and at-rest stresses, plus the
    /// construction stages.
    pub fn build_model(&self) -> Result<(Model, Vec<Stage>)> {
        self.validate()?;
        let mesh = build_site_mesh(&self.site)?;
        let stages = stage_plan(&self.site, &mesh)?;
        let mut model = Model::new(mesh, self.materials()?)?;
        model.apply_standard_supports();
        geostatic_initialize(&mut model, &self.k0_profile()?)?;
        Ok((model, stages))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_reference_properties() {
        let c = RunConfig::default();
        assert_eq!(c.soil.youngs_modulus_mpa, 163.13);
        assert_eq!(c.soil.poisson_ratio, 0.26);
        assert_eq!(c.soil.k0, 0.36);
        assert_eq!(c.soil.friction_angle_deg, 40.0);
        assert_eq!(c.soil.density, 2000.0);
        assert_eq!(c.wall.youngs_modulus_mpa, 30000.0);
        assert_eq!(c.wall.density, 2400.0);
        assert_eq!(c.wall.modulus(), 30000.0);
    }

    #[test]
    fn concrete_modulus_helper() {
        assert!((ec_from_fc(27.6) - 26267.8).abs() < 0.1);
        let w = WallConfig {
            ec_from_fc: true,
            ..WallConfig::default()
        };
        assert!((w.modulus() - 26267.8).abs() < 0.1);
    }

    #[test]
    fn echo_round_trip() {
        let mut c = RunConfig::default();
        c.synthetic_motions.push(SynthSpec::harmonic(0.15, 2.0, 6.0, 0.01));
        c.motion_files.push(MotionFile {
            path: "rec.txt".into(),
            units: Some(AccelUnits::G),
        });
        c.damping.f1 = Some(4.8);
        let back = RunConfig::from_toml(&c.to_toml()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn partial_file_uses_defaults() {
        let c = RunConfig::from_toml("[soil]\nfriction_angle_deg = 35.0\n").unwrap();
        assert_eq!(c.soil.friction_angle_deg, 35.0);
        assert_eq!(c.site, SiteConfig::default());
        assert!(RunConfig::from_toml("[soil]\nfriction = 35.0\n").is_err());
    }
}
