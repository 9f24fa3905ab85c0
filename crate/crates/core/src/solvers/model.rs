//! Finite-element model state: mesh, materials, constraints and the
//! committed constitutive history, plus element-level evaluation.

use crate::constitutive::elastic::{elastic_matrix, mat4_vec};
use crate::constitutive::{mc_update, ElasticParams, GaussState, MohrCoulombParams, ReturnRegion};
use crate::error::{Error, Result};
use crate::fem::{
    body_force, element_dofs, element_mass, element_stiffness, internal_force, strain_at, Assembler, DofMap,
    ElementGeometry, Mat16, Mat3, QuadratureRule, SkylineMatrix,
};
use crate::mesh::Mesh;
use rayon::prelude::*;

pub const GRAVITY: f64 = 9.81;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Material {
    MohrCoulomb { elastic: ElasticParams, strength: MohrCoulombParams },
    Elastic(ElasticParams),
}

impl Material {
    pub fn elastic(&self) -> &ElasticParams {
        match self {
            Material::MohrCoulomb { elastic, .. } => elastic,
            Material::Elastic(e) => e,
        }
    }

    /// Unit weight (kN/m³).
    pub fn unit_weight(&self, g: f64) -> f64 {
        self.elastic().mass_density() * g
    }
}

/// Result of evaluating every active element at a trial displacement.
#[derive(Debug, Clone)]
pub struct Evaluation {
    /// Internal force on all dofs.
    pub f_int: Vec<f64>,
    pub states: Vec<Vec<GaussState>>,
    /// Element tangents (empty when not requested).
    pub tangents: Vec<Option<Mat16>>,
    /// True when no integration point left the elastic domain.
    pub all_elastic: bool,
    pub plastic_work: f64,
}

#[derive(Debug, Clone)]
pub struct Model {
    pub mesh: Mesh,
    /// Indexed by element `material_id`.
    pub materials: Vec<Material>,
    /// Stiffness and stress integration.
    pub geoms: Vec<ElementGeometry>,
    /// Full 3×3 integration for mass and body force.
    pub mass_geoms: Vec<ElementGeometry>,
    pub active: Vec<bool>,
    /// Committed integration-point states.
    pub states: Vec<Vec<GaussState>>,
    /// Committed total displacement on all dofs.
    pub u: Vec<f64>,
    /// Per-dof constraint flags.
    pub fixed: Vec<bool>,
    /// Tied dof pairs `(slave, master)`.
    pub ties: Vec<(usize, usize)>,
    pub gravity: f64,
    /// Use the elastic matrix in place of the return-mapping tangent.
    pub elastic_only: bool,
    /// Use the exact zero tangent at the apex. Only safe when mass terms
    /// keep the system matrix regular.
    pub exact_apex_tangent: bool,
}

impl Model {
    /// Model with full 3×3 integration everywhere.
    pub fn new(mesh: Mesh, materials: Vec<Material>) -> Result<Self> {
        Self::with_rule(mesh, materials, &QuadratureRule::full())
    }

    /// Model with `rule` for stiffness and stress; mass and body force keep
    /// the full rule so the mass matrix stays regular.
    pub fn with_rule(mesh: Mesh, materials: Vec<Material>, rule: &QuadratureRule) -> Result<Self> {
        for el in &mesh.elements {
            if el.material_id >= materials.len() {
                return Err(Error::InvalidParameter(format!("unknown material id {}", el.material_id)));
            }
        }
        for m in &materials {
            m.elastic().validate()?;
            if let Material::MohrCoulomb { strength, .. } = m {
                strength.validate()?;
            }
        }
        let geoms = (0..mesh.elements.len()).map(|e| mesh.geometry(e, rule)).collect::<Result<Vec<_>>>()?;
        let full = QuadratureRule::full();
        let mass_geoms = if rule.len() == full.len() {
            geoms.clone()
        } else {
            (0..mesh.elements.len()).map(|e| mesh.geometry(e, &full)).collect::<Result<Vec<_>>>()?
        };
        let states = geoms.iter().map(|g| vec![GaussState::default(); g.points.len()]).collect();
        let n = mesh.nodes.len();
        Ok(Self {
            active: vec![true; mesh.elements.len()],
            states,
            u: vec![0.0; 2 * n],
            fixed: vec![false; 2 * n],
            ties: Vec::new(),
            geoms,
            mass_geoms,
            materials,
            mesh,
            gravity: GRAVITY,
            elastic_only: false,
            exact_apex_tangent: false,
        })
    }

    pub fn n_dofs(&self) -> usize {
        2 * self.mesh.nodes.len()
    }

    /// Base fixed in both directions, sides on vertical rollers.
    pub fn apply_standard_supports(&mut self) {
        self.fixed.iter_mut().for_each(|f| *f = false);
        for &n in &self.mesh.base {
            self.fixed[2 * n] = true;
            self.fixed[2 * n + 1] = true;
        }
        for &n in self.mesh.left_side.iter().chain(&self.mesh.right_side) {
            self.fixed[2 * n] = true;
        }
    }

    pub fn material_of(&self, e: usize) -> &Material {
        &self.materials[self.mesh.elements[e].material_id]
    }

    pub fn node_active(&self) -> Vec<bool> {
        let mut a = vec![false; self.mesh.nodes.len()];
        for (e, el) in self.mesh.elements.iter().enumerate() {
            if self.active[e] {
                for &n in &el.node_ids {
                    a[n] = true;
                }
            }
        }
        a
    }

    pub fn dofmap(&self) -> DofMap {
        let ties: Vec<(usize, usize)> = self.ties.clone();
        DofMap::build(self.mesh.nodes.len(), &self.node_active(), &self.fixed, &ties)
    }

    pub fn assembler(&self) -> Assembler {
        let dm = self.dofmap();
        let conn: Vec<&[usize; 8]> = self.active_elements().map(|e| &self.mesh.elements[e].node_ids).collect();
        Assembler::new(dm, conn)
    }

    pub fn active_elements(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.active.len()).filter(|&e| self.active[e])
    }

    pub fn element_displacement(&self, e: usize, u: &[f64]) -> [f64; 16] {
        let d = element_dofs(&self.mesh.elements[e].node_ids);
        std::array::from_fn(|i| u[d[i]])
    }

    /// Gravity load of the active elements on all dofs.
    pub fn gravity_load(&self) -> Vec<f64> {
        let mut f = vec![0.0; self.n_dofs()];
        for e in self.active_elements() {
            let w = self.material_of(e).unit_weight(self.gravity);
            let fe = body_force(&self.mass_geoms[e], 0.0, -w);
            for (i, d) in element_dofs(&self.mesh.elements[e].node_ids).iter().enumerate() {
                f[*d] += fe[i];
            }
        }
        f
    }

    /// Internal force from the committed stresses.
    pub fn committed_internal_force(&self) -> Vec<f64> {
        let mut f = vec![0.0; self.n_dofs()];
        for e in self.active_elements() {
            let s: Vec<[f64; 3]> = self.states[e].iter().map(|g| g.in_plane_stress()).collect();
            let fe = internal_force(&self.geoms[e], s.iter());
            for (i, d) in element_dofs(&self.mesh.elements[e].node_ids).iter().enumerate() {
                f[*d] += fe[i];
            }
        }
        f
    }

    /// Updates every active element from the committed state to the trial
    /// displacement `u`.
    pub fn evaluate(&self, u: &[f64], want_tangent: bool) -> Result<Evaluation> {
        let results: Vec<Result<Option<ElementEval>>> = (0..self.active.len())
            .into_par_iter()
            .map(|e| {
                if !self.active[e] {
                    return Ok(None);
                }
                self.evaluate_element(e, u, want_tangent).map(Some)
            })
            .collect();
        let mut f_int = vec![0.0; self.n_dofs()];
        let mut states = self.states.clone();
        let mut tangents = Vec::with_capacity(self.active.len());
        let mut all_elastic = true;
        let mut plastic_work = 0.0;
        for (e, r) in results.into_iter().enumerate() {
            match r? {
                None => tangents.push(None),
                Some(ev) => {
                    for (i, d) in element_dofs(&self.mesh.elements[e].node_ids).iter().enumerate() {
                        f_int[*d] += ev.f[i];
                    }
                    all_elastic &= ev.elastic;
                    plastic_work += ev.plastic_work;
                    states[e] = ev.states;
                    tangents.push(ev.k);
                }
            }
        }
        Ok(Evaluation {
            f_int,
            states,
            tangents,
            all_elastic,
            plastic_work,
        })
    }

    fn evaluate_element(&self, e: usize, u: &[f64], want_tangent: bool) -> Result<ElementEval> {
        let geom = &self.geoms[e];
        let du = {
            let a = self.element_displacement(e, u);
            let b = self.element_displacement(e, &self.u);
            std::array::from_fn::<f64, 16, _>(|i| a[i] - b[i])
        };
        let mat = *self.material_of(e);
        let ep = *mat.elastic();
        let d_el = elastic_matrix(ep.shear_modulus(), ep.lame_lambda());
        let mut states = Vec::with_capacity(geom.points.len());
        let mut d_pts: Vec<Mat3> = Vec::with_capacity(geom.points.len());
        let mut elastic = true;
        let mut work = 0.0;
        for (g, p) in geom.points.iter().enumerate() {
            let de = strain_at(p, &du);
            let prev = &self.states[e][g];
            match mat {
                Material::Elastic(_) => {
                    let de4 = [de[0], de[1], 0.0, de[2]];
                    let ds = mat4_vec(&d_el, &de4);
                    let mut s = *prev;
                    for k in 0..4 {
                        s.stress[k] += ds[k];
                        s.strain[k] += de4[k];
                    }
                    states.push(s);
                    d_pts.push(crate::constitutive::elastic::in_plane_block(&d_el));
                }
                Material::MohrCoulomb { strength, .. } => {
                    let r = mc_update(prev, &de, &strength, &ep)
                        .map_err(|err| Error::ReturnMapFailure(format!("element {e} point {g}: {err}")))?;
                    if r.region != ReturnRegion::Elastic {
                        elastic = false;
                        work += r.plastic_work * p.dv;
                    }
                    states.push(r.state);
                    if self.elastic_only {
                        d_pts.push(crate::constitutive::elastic::in_plane_block(&d_el));
                    } else if self.exact_apex_tangent && r.region == ReturnRegion::Apex {
                        d_pts.push([[0.0; 3]; 3]);
                    } else {
                        d_pts.push(r.tangent_in_plane());
                    }
                }
            }
        }
        let s3: Vec<[f64; 3]> = states.iter().map(|s| s.in_plane_stress()).collect();
        let f = internal_force(geom, s3.iter());
        let k = want_tangent.then(|| element_stiffness(geom, |g| d_pts[g]));
        Ok(ElementEval {
            f,
            states,
            k,
            elastic,
            plastic_work: work,
        })
    }

    /// Adopts an evaluation as the new committed state.
    pub fn commit(&mut self, u: Vec<f64>, states: Vec<Vec<GaussState>>) {
        self.u = u;
        self.states = states;
    }

    pub fn assemble_tangent(&self, asm: &Assembler, tangents: &[Option<Mat16>]) -> SkylineMatrix {
        let mut k = asm.empty_matrix();
        for (e, t) in tangents.iter().enumerate() {
            if let Some(t) = t {
                asm.add_element(&mut k, &self.mesh.elements[e].node_ids, t);
            }
        }
        k
    }

    /// Elastic stiffness of the active elements selected by `filter`.
    pub fn elastic_stiffness<F>(&self, asm: &Assembler, filter: F) -> SkylineMatrix
    where
        F: Fn(usize) -> bool + Sync,
    {
        let kes: Vec<Option<Mat16>> = (0..self.active.len())
            .into_par_iter()
            .map(|e| {
                (self.active[e] && filter(e)).then(|| {
                    let d = self.material_of(e).elastic();
                    let dm = crate::constitutive::elastic::in_plane_block(&elastic_matrix(d.shear_modulus(), d.lame_lambda()));
                    element_stiffness(&self.geoms[e], |_| dm)
                })
            })
            .collect();
        self.assemble_tangent(asm, &kes)
    }

    /// Consistent mass (t) of the active elements selected by `filter`.
    pub fn mass_matrix<F>(&self, asm: &Assembler, filter: F) -> SkylineMatrix
    where
        F: Fn(usize) -> bool + Sync,
    {
        let mes: Vec<Option<Mat16>> = (0..self.active.len())
            .into_par_iter()
            .map(|e| {
                (self.active[e] && filter(e)).then(|| element_mass(&self.mass_geoms[e], self.material_of(e).elastic().mass_density()))
            })
            .collect();
        self.assemble_tangent(asm, &mes)
    }

    /// Full-dof product of the consistent mass with `v`, over active elements.
    pub fn mass_times(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n_dofs()];
        for e in self.active_elements() {
            let m = element_mass(&self.mass_geoms[e], self.material_of(e).elastic().mass_density());
            let d = element_dofs(&self.mesh.elements[e].node_ids);
            for i in 0..16 {
                out[d[i]] += (0..16).map(|j| m[i][j] * v[d[j]]).sum::<f64>();
            }
        }
        out
    }

    /// Mean in-plane stress over an element's integration points.
    pub fn element_mean_stress(&self, e: usize) -> [f64; 4] {
        let n = self.states[e].len() as f64;
        let mut s = [0.0; 4];
        for g in &self.states[e] {
            for k in 0..4 {
                s[k] += g.stress[k] / n;
            }
        }
        s
    }
}

struct ElementEval {
    f: [f64; 16],
    states: Vec<GaussState>,
    k: Option<Mat16>,
    elastic: bool,
    plastic_work: f64,
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
