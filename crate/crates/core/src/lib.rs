pub mod config;
pub mod constitutive;
pub mod error;
pub mod fem;
pub mod mesh;
pub mod pipeline;
pub mod pressure_models;
pub mod solvers;

pub use error::{Error, Result};
