//! Material point drivers.

pub mod elastic;
pub mod geostatic;
pub mod mohr_coulomb;

pub use elastic::{elastic_tangent, ElasticParams, ElasticTangent, Mat4, Voigt4};
pub use geostatic::K0Profile;
pub use mohr_coulomb::{drained_compression, mc_return_map, mc_update, mc_yield, principal_stresses, GaussState, MohrCoulombParams, ReturnRegion, ReturnResult};
