//! Verification and computation engine for SU(2)-structures on
//! five-dimensional Lie algebras and the SU(3)-holonomy metrics they generate.

pub mod catalog;
pub mod classifier;
pub mod curvature;
pub mod error;
pub mod exterior;
pub mod flow;
pub mod linalg;
pub mod pencil;
pub mod polar;
pub mod scalar;
pub mod su2;

pub use error::{HypoError, Result};
pub use exterior::{Form, LieAlgebra, MultiIndex, Subspace};
pub use scalar::{Scalar, Q};
