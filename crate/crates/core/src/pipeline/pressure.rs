//! Wall-adjacent stress extraction and back-calculated earth-pressure
//! quantities.
//!
//! Pressures are reported compression-positive. Heights are measured from
//! the base of each side's soil column: the dredge level on the backfill
//! side and the wall toe on the excavated side.

use crate::error::{Error, Result};
use crate::mesh::SiteConfig;
use crate::pressure_models::{wedge_oracle, PressureMode, SeismicCoefficients, WallSoilParams};
use crate::solvers::Model;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WallSide {
    /// Retained backfill behind the wall.
    Active,
    /// Soil in front of the wall below the dredge level.
    Passive,
}

impl WallSide {
    pub const BOTH: [WallSide; 2] = [WallSide::Active, WallSide::Passive];

    pub fn label(self) -> &'static str {
        match self {
            WallSide::Active => "active",
            WallSide::Passive => "passive",
        }
    }

    pub fn mode(self) -> PressureMode {
        match self {
            WallSide::Active => PressureMode::Active,
            WallSide::Passive => PressureMode::Passive,
        }
    }

    /// Height of the side's soil column against the wall (m).
    pub fn height(self, site: &SiteConfig) -> f64 {
        match self {
            WallSide::Active => site.retained_height,
            WallSide::Passive => site.embedment,
        }
    }

    /// Elevation the side's heights are measured from.
    pub fn base_y(self, site: &SiteConfig) -> f64 {
        match self {
            WallSide::Active => site.dredge_y(),
            WallSide::Passive => site.toe_y(),
        }
    }

    /// +1 when the wall lies in the +x direction from this side's soil.
    pub fn toward_wall(self) -> f64 {
        match self {
            WallSide::Active => -1.0,
            WallSide::Passive => 1.0,
        }
    }
}

/// Element-wise horizontal stresses against one face of the wall.
#[derive(Debug, Clone, PartialEq)]
pub struct PressureProfile {
    pub side: WallSide,
    /// Compression-positive horizontal stress per element (kPa).
    pub sigma: Vec<f64>,
    /// Element heights (m).
    pub h: Vec<f64>,
    /// Centroid heights above the side's base (m).
    pub y: Vec<f64>,
    /// Column height H (m).
    pub height: f64,
}

impl PressureProfile {
    pub fn new(side: WallSide, sigma: Vec<f64>, h: Vec<f64>, y: Vec<f64>, height: f64) -> Result<Self> {
        if sigma.len() != h.len() || sigma.len() != y.len() {
            return Err(Error::InvalidParameter("profile arrays differ in length".into()));
        }
        if !(height > 0.0) {
            return Err(Error::InvalidParameter("profile height must be positive".into()));
        }
        Ok(Self {
            side,
            sigma,
            h,
            y,
            height,
        })
    }

    /// Resultant `Σ h_i σ_i` (kN/m).
    pub fn resultant(&self) -> f64 {
        self.h.iter().zip(&self.sigma).map(|(h, s)| h * s).sum()
    }
}

/// Element ids of the soil column touching the wall on `side`, bottom to top.
pub fn wall_adjacent_elements(model: &Model, site: &SiteConfig, side: WallSide) -> Result<Vec<usize>> {
    let grid = &model.mesh.grid;
    let wc = grid
        .wall_column
        .ok_or_else(|| Error::Mesh("mesh has no wall column".into()))?;
    let col = match side {
        WallSide::Active => wc + 1,
        WallSide::Passive => wc.checked_sub(1).ok_or_else(|| Error::Mesh("no soil in front of the wall".into()))?,
    };
    if col >= grid.n_cols() {
        return Err(Error::Mesh("no soil behind the wall".into()));
    }
    let (lo, hi) = (side.base_y(site), side.base_y(site) + side.height(site));
    Ok((0..grid.n_rows())
        .filter(|&r| {
            let yc = 0.5 * (grid.y_lines[r] + grid.y_lines[r + 1]);
            yc > lo && yc < hi
        })
        .map(|r| grid.element_at(col, r))
        .filter(|&e| model.active[e])
        .collect())
}

/// Average horizontal stress of each wall-adjacent soil element.
pub fn wall_pressure_profile(model: &Model, site: &SiteConfig, side: WallSide) -> Result<PressureProfile> {
    let grid = &model.mesh.grid;
    let base = side.base_y(site);
    let rows = model.mesh.grid.n_rows();
    let mut sigma = Vec::new();
    let mut h = Vec::new();
    let mut y = Vec::new();
    for e in wall_adjacent_elements(model, site, side)? {
        let r = e % rows;
        sigma.push(-model.element_mean_stress(e)[0]);
        h.push(grid.y_lines[r + 1] - grid.y_lines[r]);
        y.push(0.5 * (grid.y_lines[r] + grid.y_lines[r + 1]) - base);
    }
    PressureProfile::new(side, sigma, h, y, side.height(site))
}

/// `K = 2P / (γ H² (1 − k_v))`.
pub fn back_calculate_k(p: f64, gamma: f64, height: f64, k_v: f64) -> Result<f64> {
    if !(height > 0.0) {
        return Err(Error::InvalidParameter(format!("height {height} must be positive")));
    }
    if !(gamma > 0.0) {
        return Err(Error::InvalidParameter(format!("unit weight {gamma} must be positive")));
    }
    if !(k_v < 1.0) {
        return Err(Error::InvalidParameter(format!("k_v = {k_v} must be below 1")));
    }
    Ok(2.0 * p / (gamma * height * height * (1.0 - k_v)))
}

/// Stress-weighted centroid `Y = Σ h σ y / Σ h σ` and `Y / H`.
pub fn application_height(profile: &PressureProfile) -> Result<(f64, f64)> {
    let p = profile.resultant();
    if p.abs() < 1e-12 {
        return Err(Error::ZeroResultant);
    }
    let m: f64 = profile
        .h
        .iter()
        .zip(&profile.sigma)
        .zip(&profile.y)
        .map(|((h, s), y)| h * s * y)
        .sum();
    let y = m / p;
    Ok((y, y / profile.height))
}

/// Point at the centroid of the static planar failure wedge on `side`.
pub fn wedge_probe_point(site: &SiteConfig, phi: f64, delta: f64, gamma: f64, side: WallSide) -> Result<[f64; 2]> {
    let h = side.height(site);
    let params = WallSoilParams::new(phi, delta, 0.0, 0.0, gamma, h)?;
    let w = wedge_oracle(&params, SeismicCoefficients::default(), side.mode(), 4000)?;
    let base = side.base_y(site);
    Ok(match side {
        WallSide::Active => [site.wall_back_x() + w.centroid.0, base + w.centroid.1],
        WallSide::Passive => [site.wall_front_x() - w.centroid.0, base + w.centroid.1],
    })
}

/// Signed seismic coefficient at a probe with absolute horizontal
/// acceleration `a_x` (m/s²): positive when the inertia force points at
/// the wall.
pub fn kh_from_acceleration(a_x: f64, side: WallSide, g: f64) -> f64 {
    -a_x / g * side.toward_wall()
}

/// Indices of strict local extrema with `|x| ≥ floor`, in order.
pub fn select_peaks(x: &[f64], floor: f64) -> Vec<usize> {
    if x.len() < 3 {
        return Vec::new();
    }
    (1..x.len() - 1)
        .filter(|&i| {
            let (a, b, c) = (x[i - 1], x[i], x[i + 1]);
            ((b > a && b > c) || (b < a && b < c)) && b.abs() >= floor
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_from_force() {
        assert!((back_calculate_k(141.12, 19.6, 6.0, 0.0).unwrap() - 0.4).abs() < 1e-12);
        assert_eq!(back_calculate_k(0.0, 19.6, 6.0, 0.0).unwrap(), 0.0);
        assert!(back_calculate_k(1.0, 19.6, 0.0, 0.0).is_err());
        let p = crate::pressure_models::force_from_coefficient(19.6, 6.0, 0.0, 0.36);
        assert!((back_calculate_k(p, 19.6, 6.0, 0.0).unwrap() - 0.36).abs() < 1e-12);
    }

    #[test]
    fn heights() {
        let p = PressureProfile::new(WallSide::Active, vec![10.0, 20.0], vec![1.0, 1.0], vec![0.5, 1.5], 2.0).unwrap();
        let (y, _) = application_height(&p).unwrap();
        assert!((y - 35.0 / 30.0).abs() < 1e-12);
        let uni = PressureProfile::new(WallSide::Active, vec![5.0; 4], vec![0.5; 4], vec![0.25, 0.75, 1.25, 1.75], 2.0).unwrap();
        assert_eq!(application_height(&uni).unwrap().0, 1.0);
        let zero = PressureProfile::new(WallSide::Active, vec![0.0; 2], vec![1.0; 2], vec![0.5, 1.5], 2.0).unwrap();
        assert_eq!(zero.resultant(), 0.0);
        assert!(matches!(application_height(&zero), Err(Error::ZeroResultant)));
    }

    #[test]
    fn triangular_profile_centroid() {
        let n = 12;
        let hh = 6.0;
        let h = hh / n as f64;
        let y: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) * h).collect();
        let sigma: Vec<f64> = y.iter().map(|y| 19.6 * 0.36 * (hh - y)).collect();
        let p = PressureProfile::new(WallSide::Active, sigma, vec![h; n], y, hh).unwrap();
        let (_, ratio) = application_height(&p).unwrap();
        assert!((ratio - 1.0 / 3.0).abs() < 0.01 / 3.0);
        // two equal elements reproduce the midpoint sum exactly
        let two = PressureProfile::new(WallSide::Active, vec![30.0, 10.0], vec![3.0, 3.0], vec![1.5, 4.5], 6.0).unwrap();
        assert_eq!(two.resultant(), 120.0);
    }

    #[test]
    fn peaks() {
        let sine: Vec<f64> = (0..=100).map(|i| 0.3 * (std::f64::consts::TAU * i as f64 / 100.0).sin()).collect();
        let pk = select_peaks(&sine, 0.01);
        assert_eq!(pk, vec![25, 75]);
        assert!((sine[25] - 0.3).abs() < 1e-12 && (sine[75] + 0.3).abs() < 1e-12);
        let ramp: Vec<f64> = (0..50).map(|i| i as f64).collect();
        assert!(select_peaks(&ramp, 0.01).is_empty());
        assert!(select_peaks(&[0.0, 0.005, 0.0], 0.01).is_empty());
    }

    #[test]
    fn probe_points_sit_in_the_wedges() {
        let site = SiteConfig::default();
        let phi = 40f64.to_radians();
        let a = wedge_probe_point(&site, phi, 0.0, 19.6, WallSide::Active).unwrap();
        assert!((a[0] - 13.43).abs() < 0.02 && (a[1] - 13.0).abs() < 0.02, "{a:?}");
        let p = wedge_probe_point(&site, phi, 0.0, 19.6, WallSide::Passive).unwrap();
        assert!((p[0] - 8.43).abs() < 0.02 && (p[1] - 7.333).abs() < 0.02, "{p:?}");
    }

    #[test]
    fn kh_sign_points_at_the_wall() {
        // base accelerating toward +x: inertia toward -x, which is toward the wall for the backfill
        assert!(kh_from_acceleration(1.962, WallSide::Active, 9.81) > 0.0);
        assert!(kh_from_acceleration(1.962, WallSide::Passive, 9.81) < 0.0);
        assert!((kh_from_acceleration(1.962, WallSide::Active, 9.81) - 0.2).abs() < 1e-12);
    }
}
