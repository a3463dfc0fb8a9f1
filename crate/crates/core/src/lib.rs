//! Symmetric-power L-functions of the generalized Airy family over finite
//! fields, computed exactly from point counts and checked against closed-form
//! predictions for degree, trivial factor and functional equation.

pub mod cache;
pub mod config;
pub mod cyclo;
pub mod error;
pub mod ff;
pub mod fiber;
pub mod global;
pub mod monodromy;
pub mod numeric;
pub mod polyser;
pub mod report;
pub mod ring;
pub mod selfcheck;
pub mod swan;

pub use error::{Error, Result};
