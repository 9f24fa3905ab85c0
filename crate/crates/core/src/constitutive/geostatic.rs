//! At-rest initial stresses.

use super::elastic::Voigt4;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct K0Profile {
    pub k0: f64,
    /// Unit weight of the retained soil (kN/m³).
    pub gamma: f64,
    /// Elevation of the level ground surface (m).
    pub surface_y: f64,
}

impl K0Profile {
    pub fn new(k0: f64, gamma: f64, surface_y: f64) -> Result<Self> {
        if !(k0 > 0.0 && k0 < 1.0) {
            return Err(Error::InvalidParameter(format!("K0 = {k0} outside (0, 1)")));
        }
        if !(gamma > 0.0) {
            return Err(Error::InvalidParameter("unit weight must be positive".into()));
        }
        Ok(Self { k0, gamma, surface_y })
    }

    pub fn depth(&self, y: f64) -> f64 {
        (self.surface_y - y).max(0.0)
    }

    /// Stress at elevation `y` when the overburden is the soil itself.
    pub fn stress_at(&self, y: f64) -> Voigt4 {
        let sv = -self.gamma * self.depth(y);
        self.stress_with_vertical(y, sv)
    }

    /// Stress given an independently integrated vertical stress. Lateral
    /// stresses follow the soil column so they are uniform across any
    /// horizontal line.
    pub fn stress_with_vertical(&self, y: f64, sigma_v: f64) -> Voigt4 {
        let sh = -self.k0 * self.gamma * self.depth(y);
        [sh, sigma_v, sh, 0.0]
    }
}
