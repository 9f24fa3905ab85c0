//! Pseudo-static seismic earth-pressure models.
//!
//! Closed-form Mononobe-Okabe coefficients for active and passive thrust,
//! the Wood rigid-wall increment, a Seed-Whitman style combined resultant
//! height, and a brute-force planar wedge search used as an independent
//! check on the closed form.
//!
//! Sign conventions:
//! - `beta > 0` tilts the back face so its top leans away from the backfill
//!   (the soil overhangs the wall face).
//! - `k_h > 0` is inertia acting in the direction of wedge failure: toward
//!   the wall for the active wedge, away from it for the passive wedge.
//!   Both cases point away from the retained backfill.

use crate::error::{Error, Result};
use std::f64::consts::FRAC_PI_2;

/// Geometry and strength of the wall-backfill system. Angles in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WallSoilParams {
    pub phi: f64,
    pub delta: f64,
    pub beta: f64,
    pub ground_slope_i: f64,
    /// Unit weight (kN/m³).
    pub gamma: f64,
    /// Vertical wall height (m).
    pub height_h: f64,
}

impl WallSoilParams {
    pub fn new(phi: f64, delta: f64, beta: f64, ground_slope_i: f64, gamma: f64, height_h: f64) -> Result<Self> {
        let p = Self {
            phi,
            delta,
            beta,
            ground_slope_i,
            gamma,
            height_h,
        };
        p.validate()?;
        Ok(p)
    }

    /// Builds parameters from angles given in degrees.
    pub fn from_degrees(phi: f64, delta: f64, beta: f64, i: f64, gamma: f64, height_h: f64) -> Result<Self> {
        Self::new(
            phi.to_radians(),
            delta.to_radians(),
            beta.to_radians(),
            i.to_radians(),
            gamma,
            height_h,
        )
    }

    /// Level backfill, vertical smooth wall.
    pub fn simple(phi_deg: f64, gamma: f64, height_h: f64) -> Result<Self> {
        Self::from_degrees(phi_deg, 0.0, 0.0, 0.0, gamma, height_h)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.phi > 0.0 && self.phi < FRAC_PI_2) {
            return Err(Error::InvalidParameter(format!("phi = {} rad outside (0, pi/2)", self.phi)));
        }
        if self.delta.abs() > self.phi + 1e-12 {
            return Err(Error::InvalidParameter("|delta| must not exceed phi".into()));
        }
        if !(self.gamma > 0.0) {
            return Err(Error::InvalidParameter("unit weight must be positive".into()));
        }
        if !(self.height_h > 0.0) {
            return Err(Error::InvalidParameter("wall height must be positive".into()));
        }
        if self.beta.abs() >= FRAC_PI_2 || self.ground_slope_i.abs() >= FRAC_PI_2 {
            return Err(Error::InvalidParameter("wall and ground inclinations must lie in (-pi/2, pi/2)".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SeismicCoefficients {
    pub k_h: f64,
    pub k_v: f64,
}

impl SeismicCoefficients {
    pub fn new(k_h: f64, k_v: f64) -> Self {
        Self { k_h, k_v }
    }

    pub fn horizontal(k_h: f64) -> Self {
        Self { k_h, k_v: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PressureMode {
    Active,
    Passive,
}

impl PressureMode {
    pub fn label(self) -> &'static str {
        match self {
            PressureMode::Active => "active",
            PressureMode::Passive => "passive",
        }
    }
}

/// Seismic inertia angle `atan(k_h / (1 - k_v))`.
pub fn seismic_angle(c: SeismicCoefficients) -> Result<f64> {
    if !(c.k_v < 1.0) {
        return Err(Error::InvalidParameter(format!("k_v = {} must be below 1", c.k_v)));
    }
    Ok((c.k_h / (1.0 - c.k_v)).atan())
}

/// Horizontal coefficient at which the seismic angle reaches `theta`.
fn kh_for_angle(theta: f64, k_v: f64) -> f64 {
    theta.tan() * (1.0 - k_v)
}

/// Checks the equilibrium-wedge domain shared by the closed form and the oracle.
fn check_domain(p: &WallSoilParams, c: SeismicCoefficients, m: PressureMode) -> Result<f64> {
    p.validate()?;
    let theta = seismic_angle(c)?;
    match m {
        PressureMode::Active => {
            if p.phi - p.ground_slope_i - theta < 0.0 {
                return Err(Error::ValidityDomainExceeded {
                    limiting_kh: kh_for_angle(p.phi - p.ground_slope_i, c.k_v),
                });
            }
        }
        PressureMode::Passive => {
            if p.phi + p.ground_slope_i - theta < 0.0 {
                return Err(Error::ValidityDomainExceeded {
                    limiting_kh: kh_for_angle(p.phi + p.ground_slope_i, c.k_v),
                });
            }
        }
    }
    Ok(theta)
}

/// Mononobe-Okabe seismic earth-pressure coefficient.
///
/// With `k_h = k_v = 0` this is the Coulomb coefficient.
pub fn mo_coefficient(p: &WallSoilParams, c: SeismicCoefficients, m: PressureMode) -> Result<f64> {
    let theta = check_domain(p, c, m)?;
    let (phi, delta, beta, i) = (p.phi, p.delta, p.beta, p.ground_slope_i);
    // upper signs for active, lower for passive
    let s = match m {
        PressureMode::Active => 1.0,
        PressureMode::Passive => -1.0,
    };
    let wall_term = (delta + s * beta + theta).cos();
    let slope_term = (i - beta).cos();
    let den_base = theta.cos() * beta.cos().powi(2) * wall_term;
    if wall_term.abs() < 1e-12 || slope_term.abs() < 1e-12 || den_base.abs() < 1e-12 {
        return Err(Error::DegenerateGeometry("zero cosine in Mononobe-Okabe denominator".into()));
    }
    let arg = (phi + delta).sin() * (phi - s * i - theta).sin() / (wall_term * slope_term);
    // the sine factor is exactly zero at the domain edge; clip roundoff
    let arg = if arg < 0.0 && arg > -1e-14 { 0.0 } else { arg };
    if arg < 0.0 {
        return Err(Error::ValidityDomainExceeded {
            limiting_kh: kh_for_angle(phi - s * i, c.k_v),
        });
    }
    let bracket = 1.0 + s * arg.sqrt();
    if bracket <= 1e-12 {
        return Err(Error::DegenerateGeometry(
            "passive bracket vanishes: wall friction too large for a planar wedge".into(),
        ));
    }
    let k = (phi - s * beta - theta).cos().powi(2) / (den_base * bracket * bracket);
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::DegenerateGeometry(format!("non-positive coefficient {k}")));
    }
    Ok(k)
}

/// Resultant seismic thrust per metre of wall, `½ γ H² (1 − k_v) K`.
pub fn mo_force(p: &WallSoilParams, c: SeismicCoefficients, m: PressureMode) -> Result<f64> {
    let k = mo_coefficient(p, c, m)?;
    Ok(force_from_coefficient(p.gamma, p.height_h, c.k_v, k))
}

pub fn force_from_coefficient(gamma: f64, height_h: f64, k_v: f64, k: f64) -> f64 {
    0.5 * gamma * height_h * height_h * (1.0 - k_v) * k
}

/// Wood rigid-wall pressure factor and application height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WoodFactor {
    pub f_p: f64,
    /// Height of the dynamic increment above the base as a fraction of H.
    pub height_ratio: f64,
}

impl Default for WoodFactor {
    fn default() -> Self {
        Self {
            f_p: 1.0,
            height_ratio: 0.63,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WoodIncrement {
    /// Dynamic force increment (kN/m).
    pub delta_p: f64,
    /// Equivalent coefficient increment `2 ΔP / (γ H²)`.
    pub delta_k: f64,
    /// Application height above the base (m).
    pub height: f64,
}

/// Dynamic thrust increment on a rigid, non-yielding wall.
pub fn wood_rigid_increment(p: &WallSoilParams, k_h: f64, wood: WoodFactor) -> Result<WoodIncrement> {
    p.validate()?;
    if !(k_h >= 0.0) {
        return Err(Error::InvalidParameter(format!("k_h = {k_h} must be non-negative")));
    }
    if !(wood.f_p > 0.0) {
        return Err(Error::InvalidParameter("Wood factor must be positive".into()));
    }
    let h2 = p.height_h * p.height_h;
    let delta_p = wood.f_p * p.gamma * h2 * k_h;
    Ok(WoodIncrement {
        delta_p,
        delta_k: 2.0 * delta_p / (p.gamma * h2),
        height: wood.height_ratio * p.height_h,
    })
}

/// Height of the combined resultant when the static part acts at H/3 and
/// the dynamic increment at 0.6H.
pub fn resultant_height_decomposed(p_static: f64, dp_dyn: f64, height_h: f64) -> Result<f64> {
    if p_static < 0.0 {
        return Err(Error::InvalidParameter("static force must be non-negative".into()));
    }
    let total = p_static + dp_dyn;
    if !(total > 0.0) {
        return Err(Error::ZeroResultant);
    }
    Ok((p_static * height_h / 3.0 + dp_dyn * 0.6 * height_h) / total)
}

/// Result of the trial-wedge search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WedgeSolution {
    pub k: f64,
    /// Failure-plane angle above horizontal (radians), measured at the heel.
    pub plane_angle: f64,
    /// Centroid of the critical wedge relative to the heel, x pointing into
    /// the retained soil (m).
    pub centroid: (f64, f64),
}

/// Brute-force wedge search: force equilibrium of a rigid planar wedge,
/// scanning the failure-plane angle and refining with golden section.
pub fn wedge_oracle_coefficient(
    p: &WallSoilParams,
    c: SeismicCoefficients,
    m: PressureMode,
    n_angles: usize,
) -> Result<f64> {
    Ok(wedge_oracle(p, c, m, n_angles)?.k)
}

pub fn wedge_oracle(p: &WallSoilParams, c: SeismicCoefficients, m: PressureMode, n_angles: usize) -> Result<WedgeSolution> {
    if n_angles < 1000 {
        return Err(Error::InvalidParameter("wedge scan needs at least 1000 trial angles".into()));
    }
    check_domain(p, c, m)?;
    let wedge = Wedge::new(p, c, m);
    let lo = p.ground_slope_i;
    let hi = FRAC_PI_2 + p.beta;
    let step = (hi - lo) / (n_angles as f64 + 1.0);
    // maximize the active thrust, minimize the passive one
    let sign = match m {
        PressureMode::Active => 1.0,
        PressureMode::Passive => -1.0,
    };
    let score = |rho: f64| wedge.thrust(rho).map(|t| sign * t).unwrap_or(f64::NEG_INFINITY);
    let mut best_rho = f64::NAN;
    let mut best = f64::NEG_INFINITY;
    for k in 1..=n_angles {
        let rho = lo + step * k as f64;
        let s = score(rho);
        if s > best {
            best = s;
            best_rho = rho;
        }
    }
    if !best.is_finite() {
        return Err(Error::DegenerateGeometry("no admissible trial wedge".into()));
    }
    let (mut a, mut b) = ((best_rho - step).max(lo + 1e-12), (best_rho + step).min(hi - 1e-12));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (score(x1), score(x2));
    for _ in 0..200 {
        if (b - a).abs() < 1e-14 {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = score(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = score(x1);
        }
    }
    let rho_c = 0.5 * (a + b);
    let (rho, thrust) = if score(rho_c) >= best { (rho_c, score(rho_c)) } else { (best_rho, best) };
    let thrust = sign * thrust;
    let k = 2.0 * thrust / (p.gamma * p.height_h * p.height_h * (1.0 - c.k_v));
    Ok(WedgeSolution {
        k,
        plane_angle: rho,
        centroid: wedge.centroid(rho),
    })
}

/// Trial wedge with heel at the origin and the retained soil on +x.
struct Wedge {
    p: WallSoilParams,
    body: (f64, f64),
    mode: PressureMode,
    top: (f64, f64),
}

impl Wedge {
    fn new(p: &WallSoilParams, c: SeismicCoefficients, m: PressureMode) -> Self {
        // inertia toward the wall (-x) for active, away from it (+x) for passive
        let body = match m {
            PressureMode::Active => (-c.k_h, -(1.0 - c.k_v)),
            PressureMode::Passive => (c.k_h, -(1.0 - c.k_v)),
        };
        Self {
            p: *p,
            body,
            mode: m,
            top: (-p.height_h * p.beta.tan(), p.height_h),
        }
    }

    /// Intersection of the failure plane with the ground surface.
    fn apex(&self, rho: f64) -> Option<(f64, f64)> {
        let (bx, by) = self.top;
        let (ci, si) = (self.p.ground_slope_i.cos(), self.p.ground_slope_i.sin());
        let (cr, sr) = (rho.cos(), rho.sin());
        // v (cr, sr) = B + u (ci, si)
        let det = cr * (-si) - sr * (-ci);
        if det.abs() < 1e-15 {
            return None;
        }
        let v = (bx * (-si) - by * (-ci)) / det;
        let u = (cr * by - sr * bx) / det;
        if v <= 0.0 || u <= 0.0 {
            return None;
        }
        Some((v * cr, v * sr))
    }

    fn polygon(&self, rho: f64) -> Option<[(f64, f64); 3]> {
        let c = self.apex(rho)?;
        Some([(0.0, 0.0), c, self.top])
    }

    fn area(&self, rho: f64) -> Option<f64> {
        let [a, b, c] = self.polygon(rho)?;
        let area = 0.5 * ((b.0 - a.0) * (c.1 - a.1) - (c.0 - a.0) * (b.1 - a.1));
        (area > 0.0).then_some(area)
    }

    fn centroid(&self, rho: f64) -> (f64, f64) {
        match self.polygon(rho) {
            Some([a, b, c]) => ((a.0 + b.0 + c.0) / 3.0, (a.1 + b.1 + c.1) / 3.0),
            None => (f64::NAN, f64::NAN),
        }
    }

    /// Wall thrust required for equilibrium of the trial wedge.
    fn thrust(&self, rho: f64) -> Option<f64> {
        let weight = self.p.gamma * self.area(rho)?;
        let (phi, delta, beta) = (self.p.phi, self.p.delta, self.p.beta);
        let s = (rho.cos(), rho.sin());
        let n_plane = (-rho.sin(), rho.cos());
        let (fric_plane, fric_wall) = match self.mode {
            PressureMode::Active => (1.0, 1.0),
            PressureMode::Passive => (-1.0, -1.0),
        };
        let r_dir = (
            n_plane.0 * phi.cos() + fric_plane * s.0 * phi.sin(),
            n_plane.1 * phi.cos() + fric_plane * s.1 * phi.sin(),
        );
        let n_wall = (beta.cos(), beta.sin());
        let t_wall = (-beta.sin(), beta.cos());
        let p_dir = (
            n_wall.0 * delta.cos() + fric_wall * t_wall.0 * delta.sin(),
            n_wall.1 * delta.cos() + fric_wall * t_wall.1 * delta.sin(),
        );
        // P p_dir + R r_dir = -W body
        let rhs = (-weight * self.body.0, -weight * self.body.1);
        let det = p_dir.0 * r_dir.1 - p_dir.1 * r_dir.0;
        if det.abs() < 1e-14 {
            return None;
        }
        let thrust = (rhs.0 * r_dir.1 - rhs.1 * r_dir.0) / det;
        let reaction = (p_dir.0 * rhs.1 - p_dir.1 * rhs.0) / det;
        if reaction < 0.0 {
            return None;
        }
        Some(thrust)
    }
}
