//! Isotropic linear elasticity in plane strain.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Stress components are `[σ_xx, σ_yy, σ_zz, τ_xy]` (kPa); strains are
/// `[ε_xx, ε_yy, ε_zz, γ_xy]` with engineering shear.
pub type Voigt4 = [f64; 4];
pub type Mat4 = [[f64; 4]; 4];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElasticParams {
    /// Young's modulus (MPa).
    pub e: f64,
    pub nu: f64,
    /// Density (kg/m³).
    pub rho: f64,
}

impl ElasticParams {
    pub fn new(e: f64, nu: f64, rho: f64) -> Result<Self> {
        let p = Self { e, nu, rho };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.e > 0.0) {
            return Err(Error::InvalidParameter("Young's modulus must be positive".into()));
        }
        if !(self.nu >= 0.0 && self.nu < 0.5) {
            return Err(Error::InvalidParameter(format!("Poisson's ratio {} outside [0, 0.5)", self.nu)));
        }
        if !(self.rho > 0.0) {
            return Err(Error::InvalidParameter("density must be positive".into()));
        }
        Ok(())
    }

    /// Young's modulus in kPa, the stress unit used throughout.
    pub fn e_kpa(&self) -> f64 {
        self.e * 1000.0
    }

    /// Shear modulus (kPa).
    pub fn shear_modulus(&self) -> f64 {
        self.e_kpa() / (2.0 * (1.0 + self.nu))
    }

    /// Bulk modulus (kPa).
    pub fn bulk_modulus(&self) -> f64 {
        self.e_kpa() / (3.0 * (1.0 - 2.0 * self.nu))
    }

    pub fn lame_lambda(&self) -> f64 {
        self.e_kpa() * self.nu / ((1.0 + self.nu) * (1.0 - 2.0 * self.nu))
    }

    /// Mass density in t/m³, consistent with kN and metres.
    pub fn mass_density(&self) -> f64 {
        self.rho / 1000.0
    }

    /// Shear-wave velocity (m/s).
    pub fn shear_wave_velocity(&self) -> f64 {
        (self.shear_modulus() / self.mass_density()).sqrt()
    }

    /// Compression-wave velocity (m/s).
    pub fn p_wave_velocity(&self) -> f64 {
        let m = self.bulk_modulus() + 4.0 / 3.0 * self.shear_modulus();
        (m / self.mass_density()).sqrt()
    }
}

/// Plane-strain elastic matrix acting on `[ε_xx, ε_yy, ε_zz, γ_xy]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElasticTangent {
    pub d: Mat4,
}

impl ElasticTangent {
    /// In-plane 3×3 block acting on `(ε_xx, ε_yy, γ_xy)` with ε_zz = 0.
    pub fn in_plane(&self) -> [[f64; 3]; 3] {
        in_plane_block(&self.d)
    }

    /// `σ_xx / ε_xx` under uniaxial in-plane strain (kPa).
    pub fn constrained_modulus(&self) -> f64 {
        self.d[0][0]
    }

    pub fn stress(&self, strain: &Voigt4) -> Voigt4 {
        mat4_vec(&self.d, strain)
    }
}

pub fn elastic_tangent(ep: &ElasticParams) -> Result<ElasticTangent> {
    ep.validate()?;
    Ok(ElasticTangent {
        d: elastic_matrix(ep.shear_modulus(), ep.lame_lambda()),
    })
}

pub(crate) fn elastic_matrix(g: f64, lambda: f64) -> Mat4 {
    let a = lambda + 2.0 * g;
    [
        [a, lambda, lambda, 0.0],
        [lambda, a, lambda, 0.0],
        [lambda, lambda, a, 0.0],
        [0.0, 0.0, 0.0, g],
    ]
}

/// Compliance of the full 4-component matrix (shear stays engineering).
pub(crate) fn elastic_compliance(g: f64, lambda: f64) -> Mat4 {
    let e = g * (3.0 * lambda + 2.0 * g) / (lambda + g);
    let nu = lambda / (2.0 * (lambda + g));
    [
        [1.0 / e, -nu / e, -nu / e, 0.0],
        [-nu / e, 1.0 / e, -nu / e, 0.0],
        [-nu / e, -nu / e, 1.0 / e, 0.0],
        [0.0, 0.0, 0.0, 1.0 / g],
    ]
}

pub fn in_plane_block(d: &Mat4) -> [[f64; 3]; 3] {
    const IDX: [usize; 3] = [0, 1, 3];
    let mut out = [[0.0; 3]; 3];
    for (r, &i) in IDX.iter().enumerate() {
        for (c, &j) in IDX.iter().enumerate() {
            out[r][c] = d[i][j];
        }
    }
    out
}

pub fn mat4_vec(d: &Mat4, v: &Voigt4) -> Voigt4 {
    let mut out = [0.0; 4];
    for i in 0..4 {
        out[i] = (0..4).map(|j| d[i][j] * v[j]).sum();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent 3D Hooke's law: σ_ij = λ tr(ε) δ_ij + 2G ε_ij.
    fn hooke_3d(e: f64, nu: f64, eps: [[f64; 3]; 3]) -> [[f64; 3]; 3] {
        let g = e / (2.0 * (1.0 + nu));
        let l = e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
        let tr = eps[0][0] + eps[1][1] + eps[2][2];
        let mut s = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                s[i][j] = 2.0 * g * eps[i][j] + if i == j { l * tr } else { 0.0 };
            }
        }
        s
    }

    #[test]
    fn constrained_modulus_of_default_sand() {
        let ep = ElasticParams::new(163.13, 0.26, 2000.0).unwrap();
        let t = elastic_tangent(&ep).unwrap();
        let m_mpa = t.constrained_modulus() / 1000.0;
        assert!((m_mpa - 163.13 * 0.74 / (1.26 * 0.48)).abs() < 1e-9);
        assert!((m_mpa - 199.6).abs() < 0.05);
        let s = hooke_3d(163.13e3, 0.26, [[1e-4, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]);
        assert!((t.constrained_modulus() * 1e-4 - s[0][0]).abs() < 1e-9);
    }

    #[test]
    fn zero_poisson_is_uncoupled() {
        let t = elastic_tangent(&ElasticParams::new(10.0, 0.0, 1000.0).unwrap()).unwrap();
        let d = t.in_plane();
        assert_eq!(d, [[1e4, 0.0, 0.0], [0.0, 1e4, 0.0], [0.0, 0.0, 5e3]]);
    }

    #[test]
    fn out_of_plane_stress_matches_hooke() {
        let ep = ElasticParams::new(163.13, 0.26, 2000.0).unwrap();
        let t = elastic_tangent(&ep).unwrap();
        let eps = [2e-4, 2e-4, 0.0, 0.0];
        let s = t.stress(&eps);
        let h = hooke_3d(ep.e_kpa(), ep.nu, [[2e-4, 0.0, 0.0], [0.0, 2e-4, 0.0], [0.0, 0.0, 0.0]]);
        assert!((s[2] - h[2][2]).abs() < 1e-9);
        assert!((s[2] - ep.nu * (s[0] + s[1])).abs() < 1e-9);
    }

    #[test]
    fn rejects_incompressible() {
        assert!(ElasticParams::new(10.0, 0.5, 1000.0).is_err());
    }

    #[test]
    fn wave_speeds_of_default_sand() {
        let ep = ElasticParams::new(163.13, 0.26, 2000.0).unwrap();
        assert!((ep.shear_modulus() / 1000.0 - 64.73).abs() < 0.01);
        assert!((ep.shear_wave_velocity() - 179.9).abs() < 0.05);
    }
}
