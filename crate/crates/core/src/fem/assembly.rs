//! Degree-of-freedom numbering and global assembly.

use super::element::Mat16;
use super::skyline::SkylineMatrix;

/// Equation numbers for the two displacement components of every node.
///
/// Constrained and orphaned dofs have no equation. Tied dofs share the
/// equation of their master.
#[derive(Debug, Clone, PartialEq)]
pub struct DofMap {
    eq: Vec<Option<usize>>,
    n_eq: usize,
}

impl DofMap {
    /// `fixed[d]` removes dof `d`; `ties` map a slave dof onto a master dof.
    pub fn build(n_nodes: usize, node_active: &[bool], fixed: &[bool], ties: &[(usize, usize)]) -> Self {
        assert_eq!(node_active.len(), n_nodes);
        assert_eq!(fixed.len(), 2 * n_nodes);
        let mut master: Vec<usize> = (0..2 * n_nodes).collect();
        for &(s, m) in ties {
            master[s] = m;
        }
        let mut eq = vec![None; 2 * n_nodes];
        let mut n_eq = 0;
        for d in 0..2 * n_nodes {
            let m = master[d];
            if m != d {
                continue;
            }
            if node_active[d / 2] && !fixed[d] {
                eq[d] = Some(n_eq);
                n_eq += 1;
            }
        }
        for d in 0..2 * n_nodes {
            let m = master[d];
            if m != d && node_active[d / 2] {
                eq[d] = eq[m];
            }
        }
        Self { eq, n_eq }
    }

    pub fn n_equations(&self) -> usize {
        self.n_eq
    }

    pub fn n_dofs(&self) -> usize {
        self.eq.len()
    }

    pub fn eq(&self, dof: usize) -> Option<usize> {
        self.eq[dof]
    }

    pub fn element_eqs(&self, nodes: &[usize; 8]) -> [Option<usize>; 16] {
        let mut out = [None; 16];
        for (a, &n) in nodes.iter().enumerate() {
            out[2 * a] = self.eq[2 * n];
            out[2 * a + 1] = self.eq[2 * n + 1];
        }
        out
    }

    /// Gathers a full dof vector into equation space, summing tied dofs.
    pub fn gather(&self, full: &[f64]) -> Vec<f64> {
        let mut r = vec![0.0; self.n_eq];
        for (d, e) in self.eq.iter().enumerate() {
            if let Some(e) = e {
                r[*e] += full[d];
            }
        }
        r
    }

    /// Picks the value of each equation's dof from a full vector (the
    /// counterpart of `expand` for kinematic quantities).
    pub fn restrict(&self, full: &[f64]) -> Vec<f64> {
        let mut r = vec![0.0; self.n_eq];
        for (d, e) in self.eq.iter().enumerate() {
            if let Some(e) = e {
                r[*e] = full[d];
            }
        }
        r
    }

    /// Adds an equation-space increment onto a full dof vector.
    pub fn scatter_add(&self, reduced: &[f64], full: &mut [f64]) {
        for (d, e) in self.eq.iter().enumerate() {
            if let Some(e) = e {
                full[d] += reduced[*e];
            }
        }
    }

    /// Expands an equation-space vector onto all dofs (zero where constrained).
    pub fn expand(&self, reduced: &[f64]) -> Vec<f64> {
        let mut full = vec![0.0; self.eq.len()];
        self.scatter_add(reduced, &mut full);
        full
    }
}

pub fn element_dofs(nodes: &[usize; 8]) -> [usize; 16] {
    let mut d = [0; 16];
    for (a, &n) in nodes.iter().enumerate() {
        d[2 * a] = 2 * n;
        d[2 * a + 1] = 2 * n + 1;
    }
    d
}

/// Assembles element matrices into skyline storage.
#[derive(Debug, Clone)]
pub struct Assembler {
    pub dofmap: DofMap,
    template: SkylineMatrix,
}

impl Assembler {
    /// `connectivity` lists the node ids of every element that will contribute.
    pub fn new<'a, I>(dofmap: DofMap, connectivity: I) -> Self
    where
        I: IntoIterator<Item = &'a [usize; 8]>,
    {
        let eq_lists: Vec<Vec<usize>> = connectivity
            .into_iter()
            .map(|nodes| dofmap.element_eqs(nodes).iter().flatten().copied().collect())
            .collect();
        let template = SkylineMatrix::from_connectivity(dofmap.n_equations(), eq_lists.iter().map(|v| v.as_slice()));
        Self { dofmap, template }
    }

    pub fn empty_matrix(&self) -> SkylineMatrix {
        self.template.clone()
    }

    pub fn add_element(&self, k: &mut SkylineMatrix, nodes: &[usize; 8], ke: &Mat16) {
        let eqs = self.dofmap.element_eqs(nodes);
        for (i, ei) in eqs.iter().enumerate() {
            let Some(ei) = ei else { continue };
            for (j, ej) in eqs.iter().enumerate() {
                if let Some(ej) = ej {
                    k.add(*ei, *ej, ke[i][j]);
                }
            }
        }
    }

    pub fn matrix<'a, I>(&self, contributions: I) -> SkylineMatrix
    where
        I: IntoIterator<Item = (&'a [usize; 8], Mat16)>,
    {
        let mut k = self.empty_matrix();
        for (nodes, ke) in contributions {
            self.add_element(&mut k, nodes, &ke);
        }
        k
    }

    /// Assembles element vectors onto the full dof vector.
    pub fn full_vector<'a, I>(&self, contributions: I) -> Vec<f64>
    where
        I: IntoIterator<Item = (&'a [usize; 8], [f64; 16])>,
    {
        let mut f = vec![0.0; self.dofmap.n_dofs()];
        for (nodes, fe) in contributions {
            for (i, d) in element_dofs(nodes).iter().enumerate() {
                f[*d] += fe[i];
            }
        }
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::element::{element_stiffness, rect_coords, ElementGeometry};
    use crate::fem::shape::QuadratureRule;

    fn unit_d() -> [[f64; 3]; 3] {
        [[2.0, 0.5, 0.0], [0.5, 2.0, 0.0], [0.0, 0.0, 0.75]]
    }

    #[test]
    fn single_element_identity_map() {
        let nodes = [0, 1, 2, 3, 4, 5, 6, 7];
        let g = ElementGeometry::new(0, &rect_coords(0.0, 0.0, 1.0, 1.0), &QuadratureRule::full()).unwrap();
        let ke = element_stiffness(&g, |_| unit_d());
        let map = DofMap::build(8, &[true; 8], &[false; 16], &[]);
        let asm = Assembler::new(map, [&nodes]);
        let k = asm.matrix([(&nodes, ke)]);
        for i in 0..16 {
            for j in 0..16 {
                assert_eq!(k.get(i, j), ke[i][j]);
            }
        }
    }

    #[test]
    fn empty_assembly_is_zero() {
        let nodes = [0, 1, 2, 3, 4, 5, 6, 7];
        let map = DofMap::build(8, &[true; 8], &[false; 16], &[]);
        let asm = Assembler::new(map, [&nodes]);
        let k = asm.matrix(std::iter::empty());
        assert_eq!(k.max_abs_diag(), 0.0);
        assert_eq!(asm.full_vector(std::iter::empty()), vec![0.0; 16]);
    }

    #[test]
    fn two_elements_match_dense_hand_assembly() {
        // two unit squares side by side sharing the edge x = 1
        let c0 = rect_coords(0.0, 0.0, 1.0, 1.0);
        let c1 = rect_coords(1.0, 0.0, 2.0, 1.0);
        let e0 = [0, 1, 2, 3, 4, 5, 6, 7];
        let e1 = [1, 8, 9, 2, 10, 11, 12, 5];
        let rule = QuadratureRule::full();
        let k0 = element_stiffness(&ElementGeometry::new(0, &c0, &rule).unwrap(), |_| unit_d());
        let k1 = element_stiffness(&ElementGeometry::new(1, &c1, &rule).unwrap(), |_| unit_d());
        let n = 13;
        let mut dense = vec![vec![0.0; 2 * n]; 2 * n];
        for (nodes, ke) in [(&e0, &k0), (&e1, &k1)] {
            let d = element_dofs(nodes);
            for i in 0..16 {
                for j in 0..16 {
                    dense[d[i]][d[j]] += ke[i][j];
                }
            }
        }
        let map = DofMap::build(n, &vec![true; n], &vec![false; 2 * n], &[]);
        let asm = Assembler::new(map, [&e0, &e1]);
        let k = asm.matrix([(&e0, k0), (&e1, k1)]);
        for i in 0..2 * n {
            for j in 0..2 * n {
                assert!((k.get(i, j) - dense[i][j]).abs() < 1e-14);
            }
        }
        // shared node 5 carries both contributions
        assert!((k.get(10, 10) - (k0[10][10] + k1[14][14])).abs() < 1e-14);
    }

    #[test]
    fn ties_share_equations_and_fixed_dofs_drop() {
        let mut fixed = vec![false; 6];
        fixed[0] = true;
        let map = DofMap::build(3, &[true, true, false], &fixed, &[(4, 2)]);
        assert_eq!(map.eq(0), None);
        assert_eq!(map.eq(1), Some(0));
        assert_eq!(map.eq(2), Some(1));
        assert_eq!(map.eq(3), Some(2));
        // node 2 is inactive: neither its own nor the tied dof gets an equation
        assert_eq!(map.eq(4), None);
        assert_eq!(map.n_equations(), 3);
        let g = map.gather(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(g, vec![2.0, 3.0, 4.0]);
    }
}
