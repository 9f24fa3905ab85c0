//! Plane-strain finite-element kernels: Q8 isoparametric elements with
//! Gauss integration, global assembly and a skyline direct solver.

pub mod assembly;
pub mod element;
pub mod shape;
pub mod skyline;

pub use assembly::{element_dofs, Assembler, DofMap};
pub use element::{
    body_force, element_mass, element_stiffness, gauss_point_strain, internal_force, lump_row_sum, rect_coords, strain_at,
    ElementGeometry, ElementQ8, Mat16, Mat3, RegionTag, THICKNESS,
};
pub use shape::{gauss_legendre, shape_line3, shape_q8, QuadratureRule};
pub use skyline::{solve_linear_system, SkylineFactor, SkylineMatrix};
