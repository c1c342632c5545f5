//! Exterior algebra over a finite-dimensional Lie algebra.

mod algebra;
mod form;
mod parse;
mod subspace;

pub use algebra::{JacobiReport, LieAlgebra};
pub use form::{Form, MultiIndex, MAX_DIM};
pub use parse::parse_form;
pub use subspace::{annihilator, annihilator_tol, Subspace};
