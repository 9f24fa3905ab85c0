//! Perfectly plastic Mohr-Coulomb with non-associated flow.
//!
//! The return map works on principal stresses of the full plane-strain
//! tensor, including σ_zz, and selects between the main plane, the two
//! edges and the apex. Tension is positive.

use super::elastic::{elastic_compliance, elastic_matrix, in_plane_block, mat4_vec, ElasticParams, Mat4, Voigt4};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Fraction of the elastic matrix kept in the apex tangent so fully
/// yielded patches stay invertible.
const APEX_TANGENT_FRACTION: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MohrCoulombParams {
    /// Friction angle (radians).
    pub phi: f64,
    /// Cohesion (kPa).
    pub cohesion_c: f64,
    /// Dilation angle (radians).
    pub psi: f64,
    /// Largest admissible mean tension (kPa); the apex governs when larger.
    pub tension_cap: f64,
}

impl MohrCoulombParams {
    pub fn new(phi: f64, cohesion_c: f64, psi: f64) -> Result<Self> {
        let p = Self {
            phi,
            cohesion_c,
            psi,
            tension_cap: f64::INFINITY,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.phi > 0.0 && self.phi < std::f64::consts::FRAC_PI_2) {
            return Err(Error::InvalidParameter("friction angle outside (0, 90°)".into()));
        }
        if !(self.psi >= 0.0 && self.psi <= self.phi) {
            return Err(Error::InvalidParameter("dilation angle must lie in [0, phi]".into()));
        }
        if !(self.cohesion_c >= 0.0) {
            return Err(Error::InvalidParameter("cohesion must be non-negative".into()));
        }
        if self.tension_cap.is_nan() {
            return Err(Error::InvalidParameter("tension cap is NaN".into()));
        }
        Ok(())
    }

    /// Hydrostatic stress at the apex of the surface (kPa, tension positive).
    pub fn apex_stress(&self) -> f64 {
        (self.cohesion_c / self.phi.tan()).min(self.tension_cap)
    }
}

/// Constitutive memory of one integration point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GaussState {
    /// `[σ_xx, σ_yy, σ_zz, τ_xy]` (kPa, tension positive).
    pub stress: Voigt4,
    /// Total strain `[ε_xx, ε_yy, ε_zz, γ_xy]`.
    pub strain: Voigt4,
    pub plastic_strain: Voigt4,
    pub yielded: bool,
}

impl GaussState {
    pub fn with_stress(stress: Voigt4) -> Self {
        Self {
            stress,
            ..Self::default()
        }
    }

    pub fn mean_stress(&self) -> f64 {
        (self.stress[0] + self.stress[1] + self.stress[2]) / 3.0
    }

    pub fn in_plane_stress(&self) -> [f64; 3] {
        [self.stress[0], self.stress[1], self.stress[3]]
    }
}

/// Which part of the surface the stress was returned to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReturnRegion {
    Elastic,
    MainPlane,
    RightEdge,
    LeftEdge,
    Apex,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReturnResult {
    pub state: GaussState,
    /// Algorithmic tangent on `[ε_xx, ε_yy, ε_zz, γ_xy]`.
    pub tangent: Mat4,
    pub region: ReturnRegion,
    /// `σ : Δε_p` for this step.
    pub plastic_work: f64,
}

impl ReturnResult {
    pub fn tangent_in_plane(&self) -> [[f64; 3]; 3] {
        in_plane_block(&self.tangent)
    }
}

/// In-plane principal decomposition plus the out-of-plane stress.
#[derive(Debug, Clone, Copy)]
struct Spectral {
    /// `[major in-plane, minor in-plane, zz]`
    values: [f64; 3],
    cos: f64,
    sin: f64,
}

fn spectral(s: &Voigt4) -> Spectral {
    let c = 0.5 * (s[0] + s[1]);
    let d = 0.5 * (s[0] - s[1]);
    let r = d.hypot(s[3]);
    let theta = 0.5 * s[3].atan2(d);
    Spectral {
        values: [c + r, c - r, s[2]],
        cos: theta.cos(),
        sin: theta.sin(),
    }
}

/// Indices into `values` ordered σ₁ ≥ σ₂ ≥ σ₃.
fn ordering(v: &[f64; 3]) -> [usize; 3] {
    let mut idx = [0, 1, 2];
    idx.sort_by(|&a, &b| v[b].partial_cmp(&v[a]).unwrap_or(std::cmp::Ordering::Equal));
    idx
}

/// Principal stresses σ₁ ≥ σ₂ ≥ σ₃ of the plane-strain tensor.
pub fn principal_stresses(s: &Voigt4) -> [f64; 3] {
    let sp = spectral(s);
    let o = ordering(&sp.values);
    [sp.values[o[0]], sp.values[o[1]], sp.values[o[2]]]
}

/// Yield value `(σ₁ − σ₃)/2 + (σ₁ + σ₃)/2 · sin φ − c cos φ` (kPa).
pub fn mc_yield(s: &Voigt4, mp: &MohrCoulombParams) -> f64 {
    let p = principal_stresses(s);
    yield_principal(&p, mp)
}

fn yield_principal(p: &[f64; 3], mp: &MohrCoulombParams) -> f64 {
    0.5 * (p[0] - p[2]) + 0.5 * (p[0] + p[2]) * mp.phi.sin() - mp.cohesion_c * mp.phi.cos()
}

fn yield_tolerance(mean: f64) -> f64 {
    1e-10 * mean.abs().max(1.0)
}

/// Stress update for a strain increment from a committed state.
pub fn mc_update(
    previous: &GaussState,
    d_strain: &[f64; 3],
    mp: &MohrCoulombParams,
    ep: &ElasticParams,
) -> Result<ReturnResult> {
    let de = [d_strain[0], d_strain[1], 0.0, d_strain[2]];
    let d = elastic_matrix(ep.shear_modulus(), ep.lame_lambda());
    let ds = mat4_vec(&d, &de);
    let trial = [
        previous.stress[0] + ds[0],
        previous.stress[1] + ds[1],
        previous.stress[2] + ds[2],
        previous.stress[3] + ds[3],
    ];
    let mut prev = *previous;
    for k in 0..4 {
        prev.strain[k] += de[k];
    }
    mc_return_map(&trial, &prev, mp, ep)
}

/// Single-point drained compression: isotropic start at `sigma3` (kPa,
/// compression positive), then vertical strain steps of `-strain_step`
/// while the horizontal in-plane stress is held at `sigma3`. Returns the
/// vertical stress (compression positive) after every step.
pub fn drained_compression(
    mp: &MohrCoulombParams,
    ep: &ElasticParams,
    sigma3: f64,
    strain_step: f64,
    steps: usize,
) -> Result<Vec<f64>> {
    let mut st = GaussState::with_stress([-sigma3, -sigma3, -sigma3, 0.0]);
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        let mut d = [0.0, -strain_step, 0.0];
        // Newton on the lateral strain increment
        for _ in 0..30 {
            let r = mc_update(&st, &d, mp, ep)?;
            let res = r.state.stress[0] + sigma3;
            if res.abs() < 1e-9 * sigma3.abs().max(1.0) {
                break;
            }
            d[0] -= res / r.tangent_in_plane()[0][0].max(1.0);
        }
        st = mc_update(&st, &d, mp, ep)?.state;
        out.push(-st.stress[1]);
    }
    Ok(out)
}

/// Projects a trial stress onto the yield surface.
///
/// `previous` carries the history (total strain already incremented).
pub fn mc_return_map(
    trial: &Voigt4,
    previous: &GaussState,
    mp: &MohrCoulombParams,
    ep: &ElasticParams,
) -> Result<ReturnResult> {
    let g = ep.shear_modulus();
    let lambda = ep.lame_lambda();
    let d_el = elastic_matrix(g, lambda);
    if trial.iter().any(|v| !v.is_finite()) {
        return Err(Error::ReturnMapFailure(format!("non-finite trial stress {trial:?}")));
    }
    let sp = spectral(trial);
    let order = ordering(&sp.values);
    let tr = [sp.values[order[0]], sp.values[order[1]], sp.values[order[2]]];
    let mean_tr = (tr[0] + tr[1] + tr[2]) / 3.0;

    let over_cap = mean_tr > mp.tension_cap;
    let f_trial = yield_principal(&tr, mp);
    if f_trial <= yield_tolerance(mean_tr) && !over_cap {
        return Ok(ReturnResult {
            state: GaussState {
                stress: *trial,
                yielded: false,
                ..*previous
            },
            tangent: d_el,
            region: ReturnRegion::Elastic,
            plastic_work: 0.0,
        });
    }

    let (sphi, cphi) = (mp.phi.sin(), mp.phi.cos());
    let spsi = mp.psi.sin();
    let dp = principal_elastic(g, lambda);
    let two_c = 2.0 * mp.cohesion_c * cphi;
    // plane 1-3 (main), 2-3 (right edge partner), 1-2 (left edge partner)
    let a13 = [1.0 + sphi, 0.0, -(1.0 - sphi)];
    let n13 = [1.0 + spsi, 0.0, -(1.0 - spsi)];
    let a23 = [0.0, 1.0 + sphi, -(1.0 - sphi)];
    let n23 = [0.0, 1.0 + spsi, -(1.0 - spsi)];
    let a12 = [1.0 + sphi, -(1.0 - sphi), 0.0];
    let n12 = [1.0 + spsi, -(1.0 - spsi), 0.0];
    let phi_of = |a: &[f64; 3], s: &[f64; 3]| dot3(a, s) - two_c;

    let mut result: Option<([f64; 3], [[f64; 3]; 3], ReturnRegion)> = None;
    let tol = 1e-12 * tr.iter().fold(1.0f64, |m, v| m.max(v.abs()));

    if !over_cap {
        // main plane
        let dn = mat3_vec(&dp, &n13);
        let denom = dot3(&a13, &dn);
        let dgam = phi_of(&a13, &tr) / denom;
        let s = sub3(&tr, &scale3(&dn, dgam));
        if s[0] + tol >= s[1] && s[1] + tol >= s[2] {
            let da = mat3_vec_t(&dp, &a13);
            let tan = sub_outer(&dp, &[dn], &[[1.0 / denom]], &[da]);
            result = Some((s, tan, ReturnRegion::MainPlane));
        } else {
            let (ab, nb, region) = if s[1] > s[0] {
                (a23, n23, ReturnRegion::RightEdge)
            } else {
                (a12, n12, ReturnRegion::LeftEdge)
            };
            let dna = mat3_vec(&dp, &n13);
            let dnb = mat3_vec(&dp, &nb);
            let m = [[dot3(&a13, &dna), dot3(&a13, &dnb)], [dot3(&ab, &dna), dot3(&ab, &dnb)]];
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            if det.abs() > 1e-14 * m[0][0].abs() {
                let inv = [[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]];
                let (fa, fb) = (phi_of(&a13, &tr), phi_of(&ab, &tr));
                let ga = inv[0][0] * fa + inv[0][1] * fb;
                let gb = inv[1][0] * fa + inv[1][1] * fb;
                let s = sub3(&sub3(&tr, &scale3(&dna, ga)), &scale3(&dnb, gb));
                let ordered = s[0] + tol >= s[1] && s[1] + tol >= s[2];
                if ga >= -tol && gb >= -tol && ordered {
                    let daa = mat3_vec_t(&dp, &a13);
                    let dab = mat3_vec_t(&dp, &ab);
                    let tan = sub_outer(&dp, &[dna, dnb], &inv, &[daa, dab]);
                    result = Some((s, tan, region));
                }
            }
        }
    }

    let (sorted, tan_sorted, region) = match result {
        Some(r) => r,
        None => {
            let p = mp.apex_stress();
            let mut tan = [[0.0; 3]; 3];
            for (i, row) in tan.iter_mut().enumerate() {
                for (j, v) in row.iter_mut().enumerate() {
                    *v = APEX_TANGENT_FRACTION * dp[i][j];
                }
            }
            ([p, p, p], tan, ReturnRegion::Apex)
        }
    };

    // back to slots (major in-plane, minor in-plane, zz)
    let mut values = [0.0; 3];
    let mut dslot = [[0.0; 3]; 3];
    for i in 0..3 {
        values[order[i]] = sorted[i];
        for j in 0..3 {
            dslot[order[i]][order[j]] = tan_sorted[i][j];
        }
    }
    let stress = assemble_stress(&values, sp.cos, sp.sin);
    let tangent = assemble_tangent(&dslot, &values, &sp, g);

    let dsig = [trial[0] - stress[0], trial[1] - stress[1], trial[2] - stress[2], trial[3] - stress[3]];
    let dep = mat4_vec(&elastic_compliance(g, lambda), &dsig);
    let plastic_work: f64 = (0..4).map(|k| stress[k] * dep[k]).sum();
    let mut plastic_strain = previous.plastic_strain;
    for k in 0..4 {
        plastic_strain[k] += dep[k];
    }
    let state = GaussState {
        stress,
        strain: previous.strain,
        plastic_strain,
        yielded: true,
    };
    let f = mc_yield(&stress, mp);
    let mean = (stress[0] + stress[1] + stress[2]) / 3.0;
    if !(f <= 1e-8 * mean.abs().max(1.0)) || stress.iter().any(|v| !v.is_finite()) {
        return Err(Error::ReturnMapFailure(format!(
            "returned stress violates the surface: f = {f:e}, region {region:?}"
        )));
    }
    Ok(ReturnResult {
        state,
        tangent,
        region,
        plastic_work,
    })
}

fn principal_elastic(g: f64, lambda: f64) -> [[f64; 3]; 3] {
    let mut d = [[lambda; 3]; 3];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] += 2.0 * g;
    }
    d
}

fn assemble_stress(v: &[f64; 3], c: f64, s: f64) -> Voigt4 {
    [
        v[0] * c * c + v[1] * s * s,
        v[0] * s * s + v[1] * c * c,
        v[2],
        (v[0] - v[1]) * c * s,
    ]
}

/// Cartesian tangent from the principal-space tangent plus the eigenvector
/// rotation term of the in-plane pair.
fn assemble_tangent(dp: &[[f64; 3]; 3], values: &[f64; 3], trial: &Spectral, g: f64) -> Mat4 {
    let (c, s) = (trial.cos, trial.sin);
    let proj = [[c * c, s * s, 0.0, c * s], [s * s, c * c, 0.0, -c * s], [0.0, 0.0, 1.0, 0.0]];
    let mut t = [[0.0; 4]; 4];
    for i in 0..3 {
        for j in 0..3 {
            if dp[i][j] == 0.0 {
                continue;
            }
            for r in 0..4 {
                for q in 0..4 {
                    t[r][q] += dp[i][j] * proj[i][r] * proj[j][q];
                }
            }
        }
    }
    let gap_trial = trial.values[0] - trial.values[1];
    let coef = if gap_trial.abs() > 1e-10 * trial.values.iter().fold(1.0f64, |m, v| m.max(v.abs())) {
        2.0 * g * (values[0] - values[1]) / gap_trial
    } else {
        dp[0][0] - dp[0][1]
    };
    let m = [-c * s, c * s, 0.0, 0.5 * (c * c - s * s)];
    for r in 0..4 {
        for q in 0..4 {
            t[r][q] += 2.0 * coef * m[r] * m[q];
        }
    }
    t
}

fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn sub3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn scale3(a: &[f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn mat3_vec(m: &[[f64; 3]; 3], v: &[f64; 3]) -> [f64; 3] {
    [dot3(&m[0], v), dot3(&m[1], v), dot3(&m[2], v)]
}

fn mat3_vec_t(m: &[[f64; 3]; 3], v: &[f64; 3]) -> [f64; 3] {
    [
        m[0][0] * v[0] + m[1][0] * v[1] + m[2][0] * v[2],
        m[0][1] * v[0] + m[1][1] * v[1] + m[2][1] * v[2],
        m[0][2] * v[0] + m[1][2] * v[1] + m[2][2] * v[2],
    ]
}

/// `D − Σ_αβ u_α (M⁻¹)_αβ w_βᵀ`
fn sub_outer<const K: usize>(d: &[[f64; 3]; 3], u: &[[f64; 3]; K], minv: &[[f64; K]; K], w: &[[f64; 3]; K]) -> [[f64; 3]; 3] {
    let mut out = *d;
    for a in 0..K {
        for b in 0..K {
            for i in 0..3 {
                for j in 0..3 {
                    out[i][j] -= u[a][i] * minv[a][b] * w[b][j];
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn soil() -> (MohrCoulombParams, ElasticParams) {
        (
            MohrCoulombParams::new(40f64.to_radians(), 0.0, 0.0).unwrap(),
            ElasticParams::new(163.13, 0.26, 2000.0).unwrap(),
        )
    }

    #[test]
    fn yield_examples() {
        let (mut mp, _) = soil();
        let p = 50.0;
        assert!((mc_yield(&[-p, -p, -p, 0.0], &mp) + p * mp.phi.sin()).abs() < 1e-12);
        let ratio = (45f64 + 20.0).to_radians().tan().powi(2);
        let s3 = -100.0;
        let s1 = s3 * ratio;
        // σ₁ here is the least compressive: -100; σ₃ = -100·tan²(65°)
        assert!(mc_yield(&[s1, s3, s3, 0.0], &mp).abs() < 1e-10);
        mp.cohesion_c = 5.0;
        assert!((mc_yield(&[0.0; 4], &mp) + 5.0 * mp.phi.cos()).abs() < 1e-12);
    }

    #[test]
    fn elastic_trial_is_bit_identical() {
        let (mp, ep) = soil();
        let prev = GaussState::with_stress([-40.0, -100.0, -40.0, 3.0]);
        let trial = [-41.0, -101.0, -40.5, 2.0];
        let r = mc_return_map(&trial, &prev, &mp, &ep).unwrap();
        assert_eq!(r.region, ReturnRegion::Elastic);
        assert_eq!(r.state.stress, trial);
        assert_eq!(r.state.plastic_strain, prev.plastic_strain);
    }

    #[test]
    fn hydrostatic_tension_returns_to_apex() {
        let (mp, ep) = soil();
        let r = mc_return_map(&[10.0, 10.0, 10.0, 0.0], &GaussState::default(), &mp, &ep).unwrap();
        assert_eq!(r.region, ReturnRegion::Apex);
        assert!(r.state.stress.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn drained_compression_plateau() {
        let (mp, ep) = soil();
        let sigma1 = *drained_compression(&mp, &ep, 100.0, 2e-5, 400).unwrap().last().unwrap();
        // σ₃ is the held lateral 100 kPa; the out-of-plane stress evolves freely
        let expect = 100.0 * 65f64.to_radians().tan().powi(2);
        assert!((expect - 460.0).abs() < 0.2);
        assert!((sigma1 - expect).abs() / expect < 5e-3, "σ1 = {sigma1}");
    }

    fn random_trial(rng: &mut ChaCha8Rng) -> Voigt4 {
        let p = rng.gen_range(-300.0..50.0);
        [
            p + rng.gen_range(-200.0..200.0),
            p + rng.gen_range(-200.0..200.0),
            p + rng.gen_range(-200.0..200.0),
            rng.gen_range(-150.0..150.0),
        ]
    }

    #[test]
    fn random_returns_land_on_surface() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (mut mp, ep) = soil();
        mp.cohesion_c = 0.2;
        mp.psi = 10f64.to_radians();
        for _ in 0..10_000 {
            let trial = random_trial(&mut rng);
            let r = mc_return_map(&trial, &GaussState::default(), &mp, &ep).unwrap();
            let f = mc_yield(&r.state.stress, &mp);
            assert!(f <= 1e-8 * r.state.mean_stress().abs().max(1.0));
            assert!(r.plastic_work >= -1e-9);
        }
    }

    #[test]
    fn main_plane_return_follows_plastic_potential() {
        // Δσ must be parallel to D·∂g/∂σ with g evaluated by finite differences
        let (mut mp, ep) = soil();
        mp.psi = 15f64.to_radians();
        let trial = [-50.0, -300.0, -120.0, 40.0];
        let r = mc_return_map(&trial, &GaussState::default(), &mp, &ep).unwrap();
        assert_eq!(r.region, ReturnRegion::MainPlane);
        let potential = |s: &Voigt4| {
            let p = principal_stresses(s);
            0.5 * (p[0] - p[2]) + 0.5 * (p[0] + p[2]) * mp.psi.sin()
        };
        let h = 1e-6;
        let mut grad = [0.0; 4];
        for k in 0..4 {
            let mut a = r.state.stress;
            let mut b = r.state.stress;
            a[k] += h;
            b[k] -= h;
            grad[k] = (potential(&a) - potential(&b)) / (2.0 * h);
        }
        // engineering shear: ∂g/∂τ counts both off-diagonal slots
        let flow = [grad[0], grad[1], grad[2], grad[3]];
        let d = elastic_matrix(ep.shear_modulus(), ep.lame_lambda());
        let dn = mat4_vec(&d, &flow);
        let ds: Vec<f64> = (0..4).map(|k| trial[k] - r.state.stress[k]).collect();
        let scale = ds[1] / dn[1];
        for k in 0..4 {
            assert!((ds[k] - scale * dn[k]).abs() < 1e-5 * ds[1].abs(), "{k}: {ds:?} vs {dn:?}");
        }
    }

    #[test]
    fn consistent_tangent_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (mut mp, ep) = soil();
        mp.cohesion_c = 1.0;
        let mut checked = 0;
        while checked < 200 {
            let prev = GaussState::with_stress(random_trial(&mut rng));
            if mc_yield(&prev.stress, &mp) > 0.0 {
                continue;
            }
            let de = [rng.gen_range(-1e-3..1e-3), rng.gen_range(-1e-3..1e-3), rng.gen_range(-1e-3..1e-3)];
            let r = mc_update(&prev, &de, &mp, &ep).unwrap();
            if r.region != ReturnRegion::MainPlane {
                continue;
            }
            // stay away from corners: the principal gaps must be clear
            let p = principal_stresses(&r.state.stress);
            if (p[0] - p[1]).abs() < 5.0 || (p[1] - p[2]).abs() < 5.0 {
                continue;
            }
            let t = r.tangent_in_plane();
            let h = 1e-9;
            for j in 0..3 {
                let mut a = de;
                let mut b = de;
                a[j] += h;
                b[j] -= h;
                let sa = mc_update(&prev, &a, &mp, &ep).unwrap().state.in_plane_stress();
                let sb = mc_update(&prev, &b, &mp, &ep).unwrap().state.in_plane_stress();
                for i in 0..3 {
                    let fd = (sa[i] - sb[i]) / (2.0 * h);
                    let scale = t.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
                    assert!((fd - t[i][j]).abs() <= 1e-5 * scale, "({i},{j}) fd {fd} vs {}", t[i][j]);
                }
            }
            checked += 1;
        }
    }

    #[test]
    fn yielding_cycle_dissipates_and_elastic_cycle_does_not() {
        let (mp, ep) = soil();
        let start = GaussState::with_stress([-36.0, -100.0, -36.0, 0.0]);
        let cycle = |amp: f64| {
            let mut st = start;
            let mut work = 0.0;
            let n = 400;
            let path: Vec<f64> = (0..=n)
                .map(|k| amp * (2.0 * std::f64::consts::PI * k as f64 / n as f64).sin())
                .collect();
            for w in path.windows(2) {
                let dg = w[1] - w[0];
                let next = mc_update(&st, &[0.0, 0.0, dg], &mp, &ep).unwrap().state;
                work += 0.5 * (st.stress[3] + next.stress[3]) * dg;
                st = next;
            }
            work
        };
        assert!(cycle(1e-6).abs() < 1e-12);
        assert!(cycle(2e-3) > 0.0);
    }
}
