//! Exact and numerical kernels for the delta method applied to diagonal
//! cubic forms `F = Σ F_i x_i³`.

pub mod cache;
pub mod delta;
pub mod dirichlet;
pub mod error;
pub mod exactnum;
pub mod expsums;
pub mod forms;
pub mod lab;
pub mod par;
pub mod zeta;

pub use error::{Error, Result};
