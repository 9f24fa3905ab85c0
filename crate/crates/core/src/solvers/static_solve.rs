//! Geostatic initialization and Newton-Raphson static equilibrium with
//! staged excavation.

use super::model::{norm, Evaluation, Material, Model};
use crate::constitutive::{GaussState, K0Profile};
use crate::error::{Error, Result};
use crate::fem::Assembler;
use crate::mesh::Stage;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaticSolveSettings {
    pub max_newton_iters: usize,
    /// Residual norm relative to the applied load norm.
    pub force_tolerance: f64,
    /// Correction norm relative to the step displacement norm.
    pub displacement_tolerance: f64,
    pub load_substeps: usize,
    /// How many times a failed substep may be halved.
    pub max_cutbacks: usize,
}

impl Default for StaticSolveSettings {
    fn default() -> Self {
        Self {
            max_newton_iters: 100,
            force_tolerance: 1e-6,
            displacement_tolerance: 1e-3,
            load_substeps: 5,
            max_cutbacks: 4,
        }
    }
}

impl StaticSolveSettings {
    pub fn validate(&self) -> Result<()> {
        for (name, t) in [("force_tolerance", self.force_tolerance), ("displacement_tolerance", self.displacement_tolerance)] {
            if !(t > 0.0 && t <= 1e-2) {
                return Err(Error::InvalidParameter(format!("{name} must lie in (0, 1e-2]")));
            }
        }
        if self.load_substeps == 0 || self.max_newton_iters == 0 {
            return Err(Error::InvalidParameter("substeps and iteration limit must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageReport {
    pub label: String,
    pub substeps: usize,
    pub iterations: usize,
    /// Relative residual at the end of every Newton iteration, all substeps.
    pub residual_history: Vec<f64>,
    pub max_displacement: f64,
}

/// Sets at-rest stresses at every integration point of the active elements.
///
/// Vertical stress integrates the actual unit weights down each element
/// column, lateral stress is `k0 γ depth` so it is uniform along every
/// horizontal line and the field is self-equilibrated.
pub fn geostatic_initialize(model: &mut Model, k0: &K0Profile) -> Result<()> {
    let grid = &model.mesh.grid;
    let (nc, nr) = (grid.n_cols(), grid.n_rows());
    if nc * nr != model.mesh.elements.len() {
        return Err(Error::Mesh("geostatic initialization needs a structured mesh".into()));
    }
    let top = *grid.y_lines.last().expect("grid rows");
    if (top - k0.surface_y).abs() > 1e-9 {
        return Err(Error::Mesh(format!("ground surface at {top} m, profile expects {} m", k0.surface_y)));
    }
    for c in 0..nc {
        let col_top = (0..nr).rev().find(|&r| model.active[grid.element_at(c, r)]);
        match col_top {
            Some(r) if r == nr - 1 => {}
            Some(_) => return Err(Error::Mesh(format!("surface is not level above element column {c}"))),
            None => continue,
        }
        let mut overburden = 0.0;
        for r in (0..nr).rev() {
            let e = grid.element_at(c, r);
            let y_top = grid.y_lines[r + 1];
            let w = model.materials[model.mesh.elements[e].material_id].unit_weight(model.gravity);
            let states: Vec<GaussState> = model.geoms[e]
                .points
                .iter()
                .map(|p| {
                    let sv = -(overburden + w * (y_top - p.x[1]));
                    GaussState::with_stress(k0.stress_with_vertical(p.x[1], sv))
                })
                .collect();
            model.states[e] = states;
            overburden += w * (grid.y_lines[r + 1] - grid.y_lines[r]);
        }
    }
    Ok(())
}

/// Step halvings tried when a full Newton step increases the residual.
const LINE_SEARCH_HALVINGS: usize = 4;

/// Relative residual treated as exact equilibrium.
const EXACT_RESIDUAL: f64 = 1e-12;

/// Newton iteration from `u_start` towards `f_int(u) = target` on the free
/// dofs, committing the converged state. Returns iterations and the
/// relative residual history.
pub fn equilibrate(
    model: &mut Model,
    asm: &Assembler,
    target: &[f64],
    u_start: Vec<f64>,
    settings: &StaticSolveSettings,
) -> Result<(usize, Vec<f64>)> {
    let dm = &asm.dofmap;
    let mut u = u_start;
    let mut ev = model.evaluate(&u, true)?;
    let residual = |f_int: &[f64]| -> Vec<f64> {
        let r: Vec<f64> = target.iter().zip(f_int).map(|(t, f)| t - f).collect();
        dm.gather(&r)
    };
    let reference = norm(&dm.gather(target)).max(norm(&ev.f_int)).max(1e-12);
    let mut r = residual(&ev.f_int);
    let mut history = vec![norm(&r) / reference];
    if history[0] <= settings.force_tolerance && !u.iter().zip(&model.u).any(|(a, b)| a != b) {
        model.commit(u, ev.states);
        return Ok((0, history));
    }
    for it in 1..=settings.max_newton_iters {
        let k = model.assemble_tangent(asm, &ev.tangents);
        let full = k.factorize()?.solve(&r);
        // backtracking on the residual norm; trial evaluations are cheap next to a factorization
        let r0 = norm(&r);
        let mut best: Option<(f64, Vec<f64>, Evaluation, Vec<f64>)> = None;
        let mut alpha = 1.0;
        for _ in 0..=LINE_SEARCH_HALVINGS {
            let delta: Vec<f64> = full.iter().map(|d| alpha * d).collect();
            let mut trial_u = u.clone();
            dm.scatter_add(&delta, &mut trial_u);
            if let Ok(trial) = model.evaluate(&trial_u, true) {
                let tr = residual(&trial.f_int);
                let tn = norm(&tr);
                let better = best.as_ref().map_or(true, |b| tn < norm(&b.3));
                if better {
                    best = Some((alpha, trial_u, trial, tr));
                }
                if tn <= (1.0 - 1e-4 * alpha) * r0 {
                    break;
                }
            }
            alpha *= 0.5;
        }
        let Some((alpha, new_u, new_ev, new_r)) = best else {
            break;
        };
        let delta: Vec<f64> = full.iter().map(|d| alpha * d).collect();
        u = new_u;
        ev = new_ev;
        r = new_r;
        let rel = norm(&r) / reference;
        history.push(rel);
        let step: f64 = u.iter().zip(&model.u).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        let dn = norm(&delta);
        if !rel.is_finite() {
            break;
        }
        // a residual at round-off level needs no further correction check
        let exact = rel <= EXACT_RESIDUAL;
        if rel <= settings.force_tolerance && (exact || dn <= settings.displacement_tolerance * step || dn <= 1e-12) {
            model.commit(u, ev.states);
            return Ok((it, history));
        }
    }
    Err(Error::NonConvergence {
        what: "static Newton iteration".into(),
        iterations: settings.max_newton_iters,
        history,
    })
}

/// Runs one construction stage: deactivates its elements and releases the
/// resulting out-of-balance force over `load_substeps` equal increments.
pub fn newton_static_solve(model: &mut Model, stage: &Stage, settings: &StaticSolveSettings) -> Result<StageReport> {
    settings.validate()?;
    for &e in &stage.deactivate {
        model.active[e] = false;
    }
    let asm = model.assembler();
    let f0 = model.committed_internal_force();
    let f_ext = model.gravity_load();
    let u0 = model.u.clone();
    let mut report = StageReport {
        label: stage.label.clone(),
        substeps: 0,
        iterations: 0,
        residual_history: Vec::new(),
        max_displacement: 0.0,
    };
    let n = settings.load_substeps;
    let mut lambda = 0.0;
    let mut step = 1.0 / n as f64;
    let mut cutbacks = 0;
    while lambda < 1.0 - 1e-12 {
        let next = (lambda + step).min(1.0);
        let target: Vec<f64> = f0.iter().zip(&f_ext).map(|(a, b)| a + next * (b - a)).collect();
        let saved = (model.u.clone(), model.states.clone());
        match equilibrate(model, &asm, &target, model.u.clone(), settings) {
            Ok((its, hist)) => {
                report.substeps += 1;
                report.iterations += its;
                report.residual_history.extend(hist);
                lambda = next;
            }
            Err(err) => {
                (model.u, model.states) = saved;
                if cutbacks >= settings.max_cutbacks {
                    return Err(err);
                }
                cutbacks += 1;
                step *= 0.5;
            }
        }
    }
    report.max_displacement = model
        .u
        .chunks(2)
        .zip(u0.chunks(2))
        .map(|(a, b)| (a[0] - b[0]).hypot(a[1] - b[1]))
        .fold(0.0, f64::max);
    Ok(report)
}

/// Moves the constrained dofs `dofs` by `delta` in equal increments under
/// the full gravity load, committing after each increment. Increments are
/// halved on failure as in [`newton_static_solve`].
pub fn prescribed_displacement_solve(
    model: &mut Model,
    dofs: &[usize],
    delta: f64,
    settings: &StaticSolveSettings,
) -> Result<StageReport> {
    settings.validate()?;
    if let Some(&d) = dofs.iter().find(|&&d| d >= model.n_dofs() || !model.fixed[d]) {
        return Err(Error::InvalidParameter(format!("dof {d} is not a constrained dof")));
    }
    let asm = model.assembler();
    let f_ext = model.gravity_load();
    let u0 = model.u.clone();
    let mut elastic_twin = model.clone();
    for m in elastic_twin.materials.iter_mut() {
        *m = Material::Elastic(*m.elastic());
    }
    let k_el = model.elastic_stiffness(&asm, |_| true).factorize()?;
    let mut report = StageReport {
        label: "prescribed displacement".into(),
        substeps: 0,
        iterations: 0,
        residual_history: Vec::new(),
        max_displacement: 0.0,
    };
    let mut lambda = 0.0;
    let mut step = 1.0 / settings.load_substeps as f64;
    let mut cutbacks = 0;
    while lambda < 1.0 - 1e-12 {
        let next = (lambda + step).min(1.0);
        let mut start = model.u.clone();
        for &d in dofs {
            start[d] = u0[d] + next * delta;
        }
        // elastic predictor spreads the imposed motion over the free dofs
        elastic_twin.u.clone_from(&model.u);
        elastic_twin.states.clone_from(&model.states);
        let f_a = elastic_twin.evaluate(&model.u, false)?.f_int;
        let f_b = elastic_twin.evaluate(&start, false)?.f_int;
        let r: Vec<f64> = f_a.iter().zip(&f_b).map(|(a, b)| a - b).collect();
        let du = k_el.solve(&asm.dofmap.gather(&r));
        asm.dofmap.scatter_add(&du, &mut start);
        let saved = (model.u.clone(), model.states.clone());
        match equilibrate(model, &asm, &f_ext, start, settings) {
            Ok((its, hist)) => {
                report.substeps += 1;
                report.iterations += its;
                report.residual_history.extend(hist);
                lambda = next;
            }
            Err(err) => {
                (model.u, model.states) = saved;
                if cutbacks >= settings.max_cutbacks {
                    return Err(err);
                }
                cutbacks += 1;
                step *= 0.5;
            }
        }
    }
    report.max_displacement = model
        .u
        .chunks(2)
        .zip(u0.chunks(2))
        .map(|(a, b)| (a[0] - b[0]).hypot(a[1] - b[1]))
        .fold(0.0, f64::max);
    Ok(report)
}

/// Runs all stages in order, wrapping failures with the stage index.
pub fn run_stages(model: &mut Model, stages: &[Stage], settings: &StaticSolveSettings) -> Result<Vec<StageReport>> {
    stages
        .iter()
        .enumerate()
        .map(|(i, s)| {
            newton_static_solve(model, s, settings).map_err(|e| Error::StageFailure {
                stage: i,
                source: Box::new(e),
            })
        })
        .collect()
}

/// Support reactions `f_int − f_ext` of the committed state (zero on free dofs).
pub fn reactions(model: &Model) -> Vec<f64> {
    let f_int = model.committed_internal_force();
    let f_ext = model.gravity_load();
    let dm = model.dofmap();
    (0..model.n_dofs())
        .map(|d| if dm.eq(d).is_none() { f_int[d] - f_ext[d] } else { 0.0 })
        .collect()
}
