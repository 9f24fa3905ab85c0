//! Plane-strain Q8 element kernels (unit thickness).

use super::shape::{shape_q8, QuadratureRule};
use crate::error::{Error, Result};

pub type Mat16 = [[f64; 16]; 16];
pub type Mat3 = [[f64; 3]; 3];
/// Strain-displacement matrix rows: ε_xx, ε_yy, γ_xy.
pub type BMatrix = [[f64; 16]; 3];

/// Plane-strain thickness (m).
pub const THICKNESS: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegionTag {
    Backfill,
    Foundation,
    Wall,
    /// Soil removed by the k-th excavation lift (1-based).
    ExcavationLift(usize),
}

impl RegionTag {
    pub fn is_soil(self) -> bool {
        !matches!(self, RegionTag::Wall)
    }

    pub fn label(self) -> String {
        match self {
            RegionTag::Backfill => "backfill".into(),
            RegionTag::Foundation => "foundation".into(),
            RegionTag::Wall => "wall".into(),
            RegionTag::ExcavationLift(k) => format!("lift{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElementQ8 {
    pub node_ids: [usize; 8],
    pub region_tag: RegionTag,
    pub material_id: usize,
}

/// Geometry of one integration point.
#[derive(Debug, Clone)]
pub struct PointGeometry {
    pub n: [f64; 8],
    pub b: BMatrix,
    /// `det J · weight · thickness`
    pub dv: f64,
    pub x: [f64; 2],
}

/// Precomputed integration-point data for one element.
#[derive(Debug, Clone)]
pub struct ElementGeometry {
    pub points: Vec<PointGeometry>,
}

impl ElementGeometry {
    pub fn new(element_id: usize, coords: &[[f64; 2]; 8], rule: &QuadratureRule) -> Result<Self> {
        let mut points = Vec::with_capacity(rule.len());
        for &(xi, eta, w) in &rule.points {
            let (n, dn) = shape_q8(xi, eta);
            let mut j = [[0.0; 2]; 2];
            let mut x = [0.0; 2];
            for a in 0..8 {
                for r in 0..2 {
                    x[r] += n[a] * coords[a][r];
                    for c in 0..2 {
                        j[r][c] += dn[a][c] * coords[a][r];
                    }
                }
            }
            // j[r][c] = d x_r / d ξ_c
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            if !(det > 0.0) {
                return Err(Error::NonPositiveJacobian { element: element_id, det });
            }
            let inv = [[j[1][1] / det, -j[0][1] / det], [-j[1][0] / det, j[0][0] / det]];
            let mut b = [[0.0; 16]; 3];
            for a in 0..8 {
                let dx = dn[a][0] * inv[0][0] + dn[a][1] * inv[1][0];
                let dy = dn[a][0] * inv[0][1] + dn[a][1] * inv[1][1];
                b[0][2 * a] = dx;
                b[1][2 * a + 1] = dy;
                b[2][2 * a] = dy;
                b[2][2 * a + 1] = dx;
            }
            points.push(PointGeometry {
                n,
                b,
                dv: det * w * THICKNESS,
                x,
            });
        }
        Ok(Self { points })
    }

    pub fn area(&self) -> f64 {
        self.points.iter().map(|p| p.dv).sum::<f64>() / THICKNESS
    }

    pub fn centroid(&self) -> [f64; 2] {
        let a: f64 = self.points.iter().map(|p| p.dv).sum();
        let mut c = [0.0; 2];
        for p in &self.points {
            c[0] += p.x[0] * p.dv / a;
            c[1] += p.x[1] * p.dv / a;
        }
        c
    }
}

/// Stiffness `∫ Bᵀ D B dV` with a per-point constitutive matrix.
pub fn element_stiffness<F>(geom: &ElementGeometry, mut d_at: F) -> Mat16
where
    F: FnMut(usize) -> Mat3,
{
    let mut k = [[0.0; 16]; 16];
    for (g, p) in geom.points.iter().enumerate() {
        let d = d_at(g);
        // db = D B (3x16)
        let mut db = [[0.0; 16]; 3];
        for r in 0..3 {
            for c in 0..16 {
                db[r][c] = d[r][0] * p.b[0][c] + d[r][1] * p.b[1][c] + d[r][2] * p.b[2][c];
            }
        }
        for i in 0..16 {
            let (b0, b1, b2) = (p.b[0][i], p.b[1][i], p.b[2][i]);
            if b0 == 0.0 && b1 == 0.0 && b2 == 0.0 {
                continue;
            }
            for j in 0..16 {
                k[i][j] += (b0 * db[0][j] + b1 * db[1][j] + b2 * db[2][j]) * p.dv;
            }
        }
    }
    k
}

/// Consistent mass `ρ ∫ Nᵀ N dV`.
pub fn element_mass(geom: &ElementGeometry, rho: f64) -> Mat16 {
    let mut m = [[0.0; 16]; 16];
    for p in &geom.points {
        for a in 0..8 {
            for b in 0..8 {
                let v = rho * p.n[a] * p.n[b] * p.dv;
                m[2 * a][2 * b] += v;
                m[2 * a + 1][2 * b + 1] += v;
            }
        }
    }
    m
}

/// Row-sum lumping of a consistent mass matrix. Q8 corner entries come out
/// negative; the total is preserved.
pub fn lump_row_sum(m: &Mat16) -> [f64; 16] {
    let mut d = [0.0; 16];
    for (i, row) in m.iter().enumerate() {
        d[i] = row.iter().sum();
    }
    d
}

/// Equivalent nodal forces of a uniform body force `(bx, by)` per unit volume.
pub fn body_force(geom: &ElementGeometry, bx: f64, by: f64) -> [f64; 16] {
    let mut f = [0.0; 16];
    for p in &geom.points {
        for a in 0..8 {
            f[2 * a] += p.n[a] * bx * p.dv;
            f[2 * a + 1] += p.n[a] * by * p.dv;
        }
    }
    f
}

/// Strain `(ε_xx, ε_yy, γ_xy)` at each integration point.
pub fn gauss_point_strain(geom: &ElementGeometry, u_el: &[f64; 16]) -> Vec<[f64; 3]> {
    geom.points.iter().map(|p| strain_at(p, u_el)).collect()
}

pub fn strain_at(p: &PointGeometry, u_el: &[f64; 16]) -> [f64; 3] {
    let mut e = [0.0; 3];
    for r in 0..3 {
        e[r] = p.b[r].iter().zip(u_el).map(|(b, u)| b * u).sum();
    }
    e
}

/// Internal force `∫ Bᵀ σ dV` from in-plane stresses `(σ_xx, σ_yy, τ_xy)`.
pub fn internal_force<'a, I>(geom: &ElementGeometry, stresses: I) -> [f64; 16]
where
    I: IntoIterator<Item = &'a [f64; 3]>,
{
    let mut f = [0.0; 16];
    for (p, s) in geom.points.iter().zip(stresses) {
        for i in 0..16 {
            f[i] += (p.b[0][i] * s[0] + p.b[1][i] * s[1] + p.b[2][i] * s[2]) * p.dv;
        }
    }
    f
}

/// Corner nodes at the four corners of an axis-aligned rectangle plus midsides.
pub fn rect_coords(x0: f64, y0: f64, x1: f64, y1: f64) -> [[f64; 2]; 8] {
    let (xm, ym) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
    [[x0, y0], [x1, y0], [x1, y1], [x0, y1], [xm, y0], [x1, ym], [xm, y1], [x0, ym]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constitutive::elastic::{elastic_tangent, ElasticParams};

    fn elastic_d() -> Mat3 {
        elastic_tangent(&ElasticParams::new(163.13, 0.26, 2000.0).unwrap()).unwrap().in_plane()
    }

    fn distorted() -> [[f64; 2]; 8] {
        let mut c = rect_coords(0.0, 0.0, 2.0, 1.5);
        c[2] = [2.3, 1.8];
        c[5] = [2.12, 0.85];
        c[6] = [1.1, 1.7];
        c
    }

    fn mat_vec(k: &Mat16, u: &[f64; 16]) -> [f64; 16] {
        let mut r = [0.0; 16];
        for i in 0..16 {
            r[i] = (0..16).map(|j| k[i][j] * u[j]).sum();
        }
        r
    }

    #[test]
    fn rigid_body_modes_are_in_null_space() {
        let c = distorted();
        let g = ElementGeometry::new(0, &c, &QuadratureRule::full()).unwrap();
        let d = elastic_d();
        let k = element_stiffness(&g, |_| d);
        let kmax = k.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut tx = [0.0; 16];
        let mut ty = [0.0; 16];
        let mut rot = [0.0; 16];
        for a in 0..8 {
            tx[2 * a] = 1.0;
            ty[2 * a + 1] = 1.0;
            rot[2 * a] = -c[a][1];
            rot[2 * a + 1] = c[a][0];
        }
        for u in [tx, ty, rot] {
            let r = mat_vec(&k, &u);
            assert!(r.iter().all(|v| v.abs() <= 1e-9 * kmax), "{r:?}");
        }
        for i in 0..16 {
            for j in 0..16 {
                assert!((k[i][j] - k[j][i]).abs() <= 1e-12 * kmax);
            }
        }
    }

    #[test]
    fn unit_square_mass_totals() {
        let g = ElementGeometry::new(0, &rect_coords(0.0, 0.0, 1.0, 1.0), &QuadratureRule::full()).unwrap();
        let m = element_mass(&g, 2000.0);
        let mut tx = [0.0; 16];
        for a in 0..8 {
            tx[2 * a] = 1.0;
        }
        let total: f64 = mat_vec(&m, &tx).iter().zip(&tx).map(|(a, b)| a * b).sum();
        assert!((total - 2000.0).abs() < 1e-10 * 2000.0);
        let lumped = lump_row_sum(&m);
        let lt: f64 = (0..8).map(|a| lumped[2 * a]).sum();
        assert!((lt - 2000.0).abs() < 1e-9);
    }

    #[test]
    fn strain_of_linear_and_quadratic_fields() {
        let c = distorted();
        let g = ElementGeometry::new(0, &c, &QuadratureRule::full()).unwrap();
        let mut u = [0.0; 16];
        for a in 0..8 {
            u[2 * a] = 0.001 * c[a][0];
        }
        for e in gauss_point_strain(&g, &u) {
            assert!((e[0] - 0.001).abs() < 1e-14 && e[1].abs() < 1e-14 && e[2].abs() < 1e-14);
        }
        // small rigid rotation
        let w = 1e-6;
        for a in 0..8 {
            u[2 * a] = -w * c[a][1];
            u[2 * a + 1] = w * c[a][0];
        }
        for e in gauss_point_strain(&g, &u) {
            assert!(e.iter().all(|v| v.abs() <= 1e-12));
        }
        // quadratic field on an undistorted (affine) element is reproduced exactly
        let c = rect_coords(0.5, -0.25, 2.0, 1.0);
        let g = ElementGeometry::new(0, &c, &QuadratureRule::full()).unwrap();
        for a in 0..8 {
            let (x, y) = (c[a][0], c[a][1]);
            u[2 * a] = 0.002 * x * x + 0.001 * x * y;
            u[2 * a + 1] = -0.003 * y * y + 0.0005 * x;
        }
        for (p, e) in g.points.iter().zip(gauss_point_strain(&g, &u)) {
            let (x, y) = (p.x[0], p.x[1]);
            assert!((e[0] - (0.004 * x + 0.001 * y)).abs() < 1e-10);
            assert!((e[1] - (-0.006 * y)).abs() < 1e-10);
            assert!((e[2] - (0.001 * x + 0.0005)).abs() < 1e-10);
        }
    }

    #[test]
    fn non_positive_jacobian_is_reported() {
        let mut c = rect_coords(0.0, 0.0, 1.0, 1.0);
        c.swap(1, 3);
        let err = ElementGeometry::new(7, &c, &QuadratureRule::full()).unwrap_err();
        assert!(matches!(err, Error::NonPositiveJacobian { element: 7, .. }));
    }

    #[test]
    fn full_integration_has_exactly_three_zero_energy_modes() {
        use nalgebra::DMatrix;
        let g = ElementGeometry::new(0, &distorted(), &QuadratureRule::full()).unwrap();
        let d = elastic_d();
        let k = element_stiffness(&g, |_| d);
        let m = DMatrix::from_fn(16, 16, |i, j| k[i][j]);
        let ev = m.symmetric_eigen().eigenvalues;
        let max = ev.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let zeros = ev.iter().filter(|v| v.abs() < 1e-10 * max).count();
        assert_eq!(zeros, 3);
        assert!(ev.iter().all(|v| *v > -1e-10 * max));
    }
}
