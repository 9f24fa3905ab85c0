//! Implicit Newmark integration under horizontal base excitation.
//!
//! Displacements are relative to the rigid base, so the excitation enters
//! as the effective load `−M ι a_g(t)`. Damping is Rayleigh on the soil
//! elements, built once from the post-construction elastic stiffness.

use super::model::{dot, norm, Model};
use super::static_solve::reactions;
use crate::constitutive::ElasticParams;
use crate::error::{Error, Result};
use crate::fem::{shape_line3, Assembler, SkylineFactor, SkylineMatrix};
use crate::pipeline::motion::GroundMotion;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LateralBoundary {
    /// Viscous dashpots on both sides driven by 1D free-field columns.
    FreeField,
    /// Side nodes at equal elevation share their displacements.
    Tied,
    /// Keep the model's current supports unchanged.
    AsSupported,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DynamicSolveSettings {
    pub newmark_beta: f64,
    pub newmark_gamma: f64,
    pub dt: f64,
    pub dt_min: f64,
    pub rayleigh_a0: f64,
    pub rayleigh_a1: f64,
    pub boundary: LateralBoundary,
    pub max_newton_iters: usize,
    /// Residual norm relative to the norm of the applied static load.
    pub force_tolerance: f64,
    /// Integrate up to this time; defaults to the motion duration.
    pub end_time: Option<f64>,
}

impl Default for DynamicSolveSettings {
    fn default() -> Self {
        Self {
            newmark_beta: 0.25,
            newmark_gamma: 0.5,
            dt: 0.005,
            dt_min: 0.005 / 64.0,
            rayleigh_a0: 0.0,
            rayleigh_a1: 0.0,
            boundary: LateralBoundary::FreeField,
            max_newton_iters: 25,
            force_tolerance: 1e-7,
            end_time: None,
        }
    }
}

impl DynamicSolveSettings {
    pub fn validate(&self) -> Result<()> {
        let (b, g) = (self.newmark_beta, self.newmark_gamma);
        if !(g >= 0.5 && b >= 0.25 * (g + 0.5).powi(2) - 1e-12) {
            return Err(Error::InvalidParameter(format!(
                "Newmark parameters beta = {b}, gamma = {g} are not unconditionally stable"
            )));
        }
        if !(self.dt > 0.0 && self.dt_min > 0.0 && self.dt_min <= self.dt) {
            return Err(Error::InvalidParameter("need 0 < dt_min <= dt".into()));
        }
        if !(self.rayleigh_a0 >= 0.0 && self.rayleigh_a1 >= 0.0) {
            return Err(Error::InvalidParameter("Rayleigh factors must be non-negative".into()));
        }
        if !(self.force_tolerance > 0.0 && self.force_tolerance <= 1e-2) {
            return Err(Error::InvalidParameter("force_tolerance must lie in (0, 1e-2]".into()));
        }
        Ok(())
    }
}

/// Running work terms (kJ per metre).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnergyBalance {
    pub external: f64,
    pub kinetic: f64,
    pub internal: f64,
    pub damping: f64,
}

impl EnergyBalance {
    pub fn residual(&self) -> f64 {
        self.external - self.kinetic - self.internal - self.damping
    }

    pub fn relative_residual(&self) -> f64 {
        let scale = self.external.abs().max(self.kinetic).max(self.internal.abs()).max(1e-300);
        self.residual().abs() / scale
    }
}

/// Committed state handed to the observer after every nominal step.
pub struct StepView<'a> {
    pub step: usize,
    pub time: f64,
    /// Total displacement, relative velocity and acceleration on all dofs.
    pub u: &'a [f64],
    pub v: &'a [f64],
    pub a: &'a [f64],
    /// Base acceleration (m/s²).
    pub a_g: f64,
    pub model: &'a Model,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DynamicSummary {
    pub steps: usize,
    pub end_time: f64,
    pub min_dt: f64,
    pub total_iterations: usize,
    pub max_iterations: usize,
    pub energy: EnergyBalance,
    pub plastic_work: f64,
}

/// Horizontal 1D shear column mirroring one lateral boundary.
#[derive(Debug, Clone)]
struct FreeFieldColumn {
    /// Mesh nodes along the side, bottom to top (odd count, quadratic edges).
    nodes: Vec<usize>,
    y: Vec<f64>,
    g: f64,
    k: SkylineMatrix,
    m: SkylineMatrix,
    c: SkylineMatrix,
    /// `M ι` on the free equations.
    m_iota: Vec<f64>,
    u: Vec<f64>,
    v: Vec<f64>,
    a: Vec<f64>,
    factor: Option<(f64, SkylineFactor)>,
    a1: f64,
}

impl FreeFieldColumn {
    fn new(nodes: Vec<usize>, y: Vec<f64>, soil: &ElasticParams, a0: f64, a1: f64) -> Result<Self> {
        if nodes.len() < 3 || nodes.len() % 2 == 0 {
            return Err(Error::Mesh("free-field column needs whole quadratic edges".into()));
        }
        let n = nodes.len();
        // node 0 is on the base and carries no equation
        let neq = n - 1;
        // equation i is node i + 1; a corner couples back two nodes, a midside one
        let first: Vec<usize> = (0..neq)
            .map(|i| {
                let node = i + 1;
                let low = if node % 2 == 0 { node - 2 } else { node - 1 };
                low.max(1) - 1
            })
            .collect();
        let mut k = SkylineMatrix::with_envelope(first.clone());
        let mut m = SkylineMatrix::with_envelope(first);
        let g = soil.shear_modulus();
        let rho = soil.mass_density();
        let mut m_iota_full = vec![0.0; n];
        for el in 0..(n - 1) / 2 {
            let ids = [2 * el, 2 * el + 1, 2 * el + 2];
            let l = y[ids[2]] - y[ids[0]];
            let ke = [[7.0, -8.0, 1.0], [-8.0, 16.0, -8.0], [1.0, -8.0, 7.0]].map(|r| r.map(|v| v * g / (3.0 * l)));
            let me = [[4.0, 2.0, -1.0], [2.0, 16.0, 2.0], [-1.0, 2.0, 4.0]].map(|r| r.map(|v| v * rho * l / 30.0));
            for i in 0..3 {
                m_iota_full[ids[i]] += me[i].iter().sum::<f64>();
                for j in 0..3 {
                    if ids[i] == 0 || ids[j] == 0 {
                        continue;
                    }
                    k.add(ids[i] - 1, ids[j] - 1, ke[i][j]);
                    m.add(ids[i] - 1, ids[j] - 1, me[i][j]);
                }
            }
        }
        let mut c = m.clone();
        c.zero();
        c.add_scaled(a0, &m);
        c.add_scaled(a1, &k);
        Ok(Self {
            nodes,
            y,
            g,
            k,
            m,
            c,
            m_iota: m_iota_full[1..].to_vec(),
            u: vec![0.0; neq],
            v: vec![0.0; neq],
            a: vec![0.0; neq],
            factor: None,
            a1,
        })
    }

    /// Advances the column by `dt`; returns the new `(u, v, a)` without
    /// committing.
    fn trial_step(&mut self, dt: f64, a_g: f64, beta: f64, gamma: f64) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
        let c2 = 1.0 / (beta * dt * dt);
        let c1 = gamma / (beta * dt);
        if self.factor.as_ref().map_or(true, |(d, _)| *d != dt) {
            let mut keff = self.k.clone();
            keff.add_scaled(c1, &self.c);
            keff.add_scaled(c2, &self.m);
            self.factor = Some((dt, keff.factorize()?));
        }
        let n = self.u.len();
        // u_{n+1} from the linear effective system
        let am: Vec<f64> = (0..n)
            .map(|i| c2 * self.u[i] + self.v[i] / (beta * dt) + (0.5 / beta - 1.0) * self.a[i])
            .collect();
        let vm: Vec<f64> = (0..n)
            .map(|i| c1 * self.u[i] + (gamma / beta - 1.0) * self.v[i] + dt * (0.5 * gamma / beta - 1.0) * self.a[i])
            .collect();
        let mam = self.m.mul_vec(&am);
        let cvm = self.c.mul_vec(&vm);
        let rhs: Vec<f64> = (0..n).map(|i| -self.m_iota[i] * a_g + mam[i] + cvm[i]).collect();
        let u1 = self.factor.as_ref().expect("factorized").1.solve(&rhs);
        let a1: Vec<f64> = (0..n).map(|i| c2 * (u1[i] - self.u[i]) - self.v[i] / (beta * dt) - (0.5 / beta - 1.0) * self.a[i]).collect();
        let v1: Vec<f64> = (0..n).map(|i| self.v[i] + dt * ((1.0 - gamma) * self.a[i] + gamma * a1[i])).collect();
        Ok((u1, v1, a1))
    }

    fn nodal(vals: &[f64], i: usize) -> f64 {
        if i == 0 {
            0.0
        } else {
            vals[i - 1]
        }
    }

    /// Shear stress `G (u' + a1 u̇')` in edge `el` at parent coordinate `s`.
    fn shear_stress(&self, u: &[f64], v: &[f64], el: usize, s: f64) -> f64 {
        let ids = [2 * el, 2 * el + 1, 2 * el + 2];
        let l = self.y[ids[2]] - self.y[ids[0]];
        let dn = [s - 0.5, -2.0 * s, s + 0.5].map(|d| d * 2.0 / l);
        let du: f64 = (0..3).map(|a| dn[a] * (Self::nodal(u, ids[a]) + self.a1 * Self::nodal(v, ids[a]))).sum();
        self.g * du
    }
}

struct Boundary {
    /// Free-field columns with the sign of the side's outward normal.
    columns: Vec<(FreeFieldColumn, f64)>,
    /// `(node, c_normal, c_shear)` dashpot constants (kN·s/m).
    dashpots: Vec<(usize, f64, f64)>,
}

impl Boundary {
    /// Boundary forces on all dofs for main-grid velocity `v` and free-field
    /// states `ff[k] = (u, v)`.
    fn forces(&self, v: &[f64], ff: &[(Vec<f64>, Vec<f64>)], n_dofs: usize) -> Vec<f64> {
        let mut f = vec![0.0; n_dofs];
        let mut v_ff = vec![0.0; n_dofs / 2];
        for ((col, sign), (fu, fv)) in self.columns.iter().zip(ff) {
            for (i, &node) in col.nodes.iter().enumerate() {
                v_ff[node] = FreeFieldColumn::nodal(fv, i);
            }
            // traction t_y = sign · τ on the side face
            let gp = crate::fem::gauss_legendre(3);
            for el in 0..(col.nodes.len() - 1) / 2 {
                let ids = [2 * el, 2 * el + 1, 2 * el + 2];
                let half = 0.5 * (col.y[ids[2]] - col.y[ids[0]]);
                for &(s, w) in &gp {
                    let tau = col.shear_stress(fu, fv, el, s);
                    let n = shape_line3(s);
                    for a in 0..3 {
                        f[2 * col.nodes[ids[a]] + 1] += sign * tau * n[a] * w * half;
                    }
                }
            }
        }
        for &(node, cn, cs) in &self.dashpots {
            f[2 * node] -= cn * (v[2 * node] - v_ff[node]);
            f[2 * node + 1] -= cs * v[2 * node + 1];
        }
        f
    }
}

fn side_nodes_active(model: &Model, side: &[usize]) -> Vec<usize> {
    let active = model.node_active();
    side.iter().copied().filter(|&n| active[n]).collect()
}

/// Consistent edge weights `∫ N_a ds` along a side (Simpson per quadratic edge).
fn tributary(model: &Model, nodes: &[usize]) -> Vec<f64> {
    let mut w = vec![0.0; nodes.len()];
    for el in 0..(nodes.len().saturating_sub(1)) / 2 {
        let l = model.mesh.nodes[nodes[2 * el + 2]][1] - model.mesh.nodes[nodes[2 * el]][1];
        w[2 * el] += l / 6.0;
        w[2 * el + 1] += 4.0 * l / 6.0;
        w[2 * el + 2] += l / 6.0;
    }
    w
}

/// Residual ratio between iterations above which the cached effective
/// matrix is refactored with the current tangent.
const STALL_RATIO: f64 = 0.7;

/// Soil elastic parameters used by the free-field columns.
fn soil_params(model: &Model) -> Result<ElasticParams> {
    model
        .mesh
        .elements
        .iter()
        .enumerate()
        .find(|(e, el)| model.active[*e] && el.region_tag.is_soil())
        .map(|(e, _)| *model.material_of(e).elastic())
        .ok_or_else(|| Error::Mesh("no active soil elements".into()))
}

/// Integrates the model through `motion` from its committed static state.
///
/// The observer sees the committed state after every nominal step. On
/// step failure the step is halved down to `dt_min`.
pub fn newmark_dynamic_solve<F>(
    model: &mut Model,
    motion: &GroundMotion,
    settings: &DynamicSolveSettings,
    mut observer: F,
) -> Result<DynamicSummary>
where
    F: FnMut(&StepView),
{
    settings.validate()?;
    let (beta, gamma) = (settings.newmark_beta, settings.newmark_gamma);
    let n_dofs = model.n_dofs();

    // lateral supports for shaking; static reactions become constant loads
    let mut f_const = model.gravity_load();
    let mut boundary = Boundary {
        columns: Vec::new(),
        dashpots: Vec::new(),
    };
    if settings.boundary != LateralBoundary::AsSupported {
        let r = reactions(model);
        let left = side_nodes_active(model, &model.mesh.left_side);
        let right = side_nodes_active(model, &model.mesh.right_side);
        let base: std::collections::HashSet<usize> = model.mesh.base.iter().copied().collect();
        for &n in left.iter().chain(&right) {
            if !base.contains(&n) && model.fixed[2 * n] {
                model.fixed[2 * n] = false;
                f_const[2 * n] += r[2 * n];
            }
        }
        match settings.boundary {
            LateralBoundary::Tied => {
                for &ln in &left {
                    if base.contains(&ln) {
                        continue;
                    }
                    let y = model.mesh.nodes[ln][1];
                    if let Some(&rn) = right.iter().find(|&&rn| (model.mesh.nodes[rn][1] - y).abs() < 1e-9) {
                        model.ties.push((2 * rn, 2 * ln));
                        model.ties.push((2 * rn + 1, 2 * ln + 1));
                    }
                }
            }
            LateralBoundary::FreeField => {
                let soil = soil_params(model)?;
                let (rho, vp, vs) = (soil.mass_density(), soil.p_wave_velocity(), soil.shear_wave_velocity());
                for (nodes, sign) in [(left, -1.0), (right, 1.0)] {
                    let w = tributary(model, &nodes);
                    for (i, &n) in nodes.iter().enumerate() {
                        if !base.contains(&n) {
                            boundary.dashpots.push((n, rho * vp * w[i], rho * vs * w[i]));
                        }
                    }
                    let y: Vec<f64> = nodes.iter().map(|&n| model.mesh.nodes[n][1]).collect();
                    let col = FreeFieldColumn::new(nodes, y, &soil, settings.rayleigh_a0, settings.rayleigh_a1)?;
                    boundary.columns.push((col, sign));
                }
            }
            LateralBoundary::AsSupported => unreachable!(),
        }
    }

    let asm: Assembler = model.assembler();
    let saved_apex = std::mem::replace(&mut model.exact_apex_tangent, true);
    let dm = asm.dofmap.clone();
    let soil_filter = |e: usize| model.mesh.elements[e].region_tag.is_soil();
    let m = model.mass_matrix(&asm, |_| true);
    let k_el = model.elastic_stiffness(&asm, |_| true);
    let mut c = model.mass_matrix(&asm, soil_filter);
    {
        let ks = model.elastic_stiffness(&asm, soil_filter);
        let ms = c.clone();
        c.zero();
        c.add_scaled(settings.rayleigh_a0, &ms);
        c.add_scaled(settings.rayleigh_a1, &ks);
    }
    let mut c_diag = vec![0.0; dm.n_equations()];
    for &(n, cn, cs) in &boundary.dashpots {
        if let Some(e) = dm.eq(2 * n) {
            c_diag[e] += cn;
        }
        if let Some(e) = dm.eq(2 * n + 1) {
            c_diag[e] += cs;
        }
    }
    let iota: Vec<f64> = (0..n_dofs).map(|d| if d % 2 == 0 { 1.0 } else { 0.0 }).collect();
    let m_iota_full = model.mass_times(&iota);
    let load_ref = norm(&dm.gather(&f_const)).max(norm(&dm.gather(&m_iota_full)) * 9.81).max(1e-12);

    let mut u = model.u.clone();
    let mut v = vec![0.0; n_dofs];
    let mut a = vec![0.0; n_dofs];
    let ff_state: Vec<(Vec<f64>, Vec<f64>)> =
        boundary.columns.iter().map(|(c, _)| (c.u.clone(), c.v.clone())).collect();

    let external = |t: f64, v_full: &[f64], ff: &[(Vec<f64>, Vec<f64>)], boundary: &Boundary| -> Vec<f64> {
        let ag = motion.acceleration_at(t);
        let fb = boundary.forces(v_full, ff, n_dofs);
        (0..n_dofs).map(|d| f_const[d] - m_iota_full[d] * ag + fb[d]).collect()
    };

    // initial acceleration from M a0 = F(0) − f_int − C v0
    {
        let ev = model.evaluate(&u, false)?;
        let f0 = external(0.0, &v, &ff_state, &boundary);
        let r: Vec<f64> = dm.gather(&f0.iter().zip(&ev.f_int).map(|(x, y)| x - y).collect::<Vec<_>>());
        if norm(&r) > 1e-14 * load_ref {
            let a0 = m.factorize()?.solve(&r);
            a = dm.expand(&a0);
        }
    }

    let end = settings.end_time.unwrap_or(motion.duration());
    let n_steps = (end / settings.dt - 1e-9).ceil().max(0.0) as usize;
    let mut energy = EnergyBalance::default();
    let ke = |v: &[f64]| {
        let vr = dm.restrict(v);
        0.5 * dot(&vr, &m.mul_vec(&vr))
    };
    let ke0 = ke(&v);
    let mut f_int_prev = model.evaluate(&u, false)?.f_int;
    let mut f_ext_prev = external(0.0, &v, &ff_state, &boundary);
    let mut summary = DynamicSummary {
        steps: 0,
        end_time: 0.0,
        min_dt: settings.dt,
        total_iterations: 0,
        max_iterations: 0,
        energy,
        plastic_work: 0.0,
    };
    let mut factor: Option<(f64, SkylineFactor)> = None;
    let mut t = 0.0;

    for step in 1..=n_steps {
        let t_target = (step as f64 * settings.dt).min(end);
        let mut h = t_target - t;
        let mut step_iters = 0;
        while t < t_target - 1e-12 {
            let dt = h.min(t_target - t);
            let t1 = t + dt;
            let ag1 = motion.acceleration_at(t1);
            // free field first: it does not feel the main grid
            let mut ff_trial = Vec::with_capacity(boundary.columns.len());
            for (col, _) in boundary.columns.iter_mut() {
                ff_trial.push(col.trial_step(dt, ag1, beta, gamma)?);
            }
            let ff_uv: Vec<(Vec<f64>, Vec<f64>)> = ff_trial.iter().map(|(fu, fv, _)| (fu.clone(), fv.clone())).collect();
            let c1 = gamma / (beta * dt);
            let c2 = 1.0 / (beta * dt * dt);
            let kin = |u1: &[f64]| -> (Vec<f64>, Vec<f64>) {
                let a1: Vec<f64> = (0..n_dofs)
                    .map(|d| c2 * (u1[d] - u[d]) - v[d] / (beta * dt) - (0.5 / beta - 1.0) * a[d])
                    .collect();
                let v1: Vec<f64> = (0..n_dofs).map(|d| v[d] + dt * ((1.0 - gamma) * a[d] + gamma * a1[d])).collect();
                (v1, a1)
            };
            // constant-acceleration predictor
            let mut u1: Vec<f64> = (0..n_dofs).map(|d| u[d] + dt * v[d] + 0.5 * dt * dt * a[d]).collect();
            let mut converged = None;
            let mut history = Vec::new();
            let mut fresh = false;
            for it in 0..=settings.max_newton_iters {
                let (v1, a1) = kin(&u1);
                let ev = model.evaluate(&u1, true)?;
                let fx = external(t1, &v1, &ff_uv, &boundary);
                let rf: Vec<f64> = fx.iter().zip(&ev.f_int).map(|(x, y)| x - y).collect();
                let mut r = dm.gather(&rf);
                let ma = m.mul_vec(&dm.restrict(&a1));
                let cv = c.mul_vec(&dm.restrict(&v1));
                for i in 0..r.len() {
                    r[i] -= ma[i] + cv[i];
                }
                let rel = norm(&r) / load_ref;
                history.push(rel);
                if !rel.is_finite() {
                    break;
                }
                if rel <= settings.force_tolerance {
                    converged = Some((it, v1, a1, ev, fx));
                    break;
                }
                if it == settings.max_newton_iters {
                    break;
                }
                // modified Newton: the cached factor is reused across iterations
                // and steps and refreshed with the consistent tangent on a stall
                let stalled = it > 0 && !fresh && rel > STALL_RATIO * history[it - 1];
                if stalled || factor.as_ref().map_or(true, |(d, _)| *d != dt) {
                    let mut keff = if stalled || factor.is_some() {
                        model.assemble_tangent(&asm, &ev.tangents)
                    } else {
                        k_el.clone()
                    };
                    keff.add_scaled(c1, &c);
                    keff.add_scaled(c2, &m);
                    for (i, cd) in c_diag.iter().enumerate() {
                        keff.add(i, i, c1 * cd);
                    }
                    match keff.factorize() {
                        Ok(f) => factor = Some((dt, f)),
                        Err(_) => {
                            factor = None;
                            break;
                        }
                    }
                    fresh = true;
                } else {
                    fresh = false;
                }
                let delta = factor.as_ref().expect("factor present").1.solve(&r);
                dm.scatter_add(&delta, &mut u1);
            }
            match converged {
                Some((its, v1, a1, ev, fx)) => {
                    let du: Vec<f64> = u1.iter().zip(&u).map(|(x, y)| x - y).collect();
                    energy.external += 0.5 * dot(&du, &fx.iter().zip(&f_ext_prev).map(|(x, y)| x + y).collect::<Vec<_>>());
                    energy.internal += 0.5 * dot(&du, &ev.f_int.iter().zip(&f_int_prev).map(|(x, y)| x + y).collect::<Vec<_>>());
                    let dur = dm.restrict(&du);
                    let cv0 = c.mul_vec(&dm.restrict(&v));
                    let cv1 = c.mul_vec(&dm.restrict(&v1));
                    energy.damping += 0.5 * dot(&dur, &cv0.iter().zip(&cv1).map(|(x, y)| x + y).collect::<Vec<_>>());
                    // dashpot work is part of the boundary load and thus of `external`
                    summary.plastic_work += ev.plastic_work;
                    f_int_prev = ev.f_int.clone();
                    f_ext_prev = fx;
                    model.commit(u1.clone(), ev.states);
                    u = u1;
                    v = v1;
                    a = a1;
                    for ((col, _), (fu, fv, fa)) in boundary.columns.iter_mut().zip(ff_trial) {
                        col.u = fu;
                        col.v = fv;
                        col.a = fa;
                    }
                    t = t1;
                    step_iters += its;
                    summary.min_dt = summary.min_dt.min(dt);
                }
                None => {
                    h *= 0.5;
                    if h < settings.dt_min * (1.0 - 1e-9) {
                        return Err(Error::NonConvergence {
                            what: format!("dynamic step at t = {t:.4} s"),
                            iterations: settings.max_newton_iters,
                            history,
                        });
                    }
                }
            }
        }
        energy.kinetic = ke(&v) - ke0;
        summary.steps = step;
        summary.end_time = t;
        summary.total_iterations += step_iters;
        summary.max_iterations = summary.max_iterations.max(step_iters);
        summary.energy = energy;
        observer(&StepView {
            step,
            time: t,
            u: &u,
            v: &v,
            a: &a,
            a_g: motion.acceleration_at(t),
            model,
            iterations: step_iters,
        });
    }
    model.exact_apex_tangent = saved_apex;
    Ok(summary)
}
