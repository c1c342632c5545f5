use super::form::Form;
use crate::linalg::{Mat, FLOAT_PIVOT_TOL};
use crate::scalar::Scalar;

/// A linear subspace of the tangent space, given by a basis of vectors in the
/// dual frame `e_1..e_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<C> {
    ambient: usize,
    basis: Vec<Vec<C>>,
}

impl<C: Scalar> Subspace<C> {
    /// Span of the given vectors; dependent vectors are discarded.
    pub fn span(ambient: usize, vectors: Vec<Vec<C>>, tol: f64) -> Self {
        if vectors.is_empty() {
            return Self {
                ambient,
                basis: Vec::new(),
            };
        }
        let (r, pivots) = Mat::from_rows(vectors).rref(tol);
        Self {
            ambient,
            basis: (0..pivots.len()).map(|i| r.row(i).to_vec()).collect(),
        }
    }

    pub fn whole(ambient: usize) -> Self {
        Self {
            ambient,
            basis: Mat::<C>::identity(ambient).to_rows(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<C>] {
        &self.basis
    }

    pub fn contains(&self, v: &[C], tol: f64) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Mat::from_rows(rows).rank(tol) == self.dim()
    }

    /// Equality as subspaces (not as bases).
    pub fn same_as(&self, other: &Self, tol: f64) -> bool {
        self.dim() == other.dim() && other.basis.iter().all(|v| self.contains(v, tol))
    }
}

/// `{X : X ⌟ a = 0}`, the kernel of the contraction map.
pub fn annihilator<C: Scalar>(a: &Form<C>) -> Subspace<C> {
    annihilator_tol(a, FLOAT_PIVOT_TOL)
}

pub fn annihilator_tol<C: Scalar>(a: &Form<C>, tol: f64) -> Subspace<C> {
    let n = a.dim();
    if a.is_zero() || a.degree() == 0 {
        return if a.is_zero() {
            Subspace::whole(n)
        } else {
            Subspace::span(n, Vec::new(), tol)
        };
    }
    let images: Vec<Vec<C>> = (1..=n)
        .map(|i| a.contract_basis(i).coeff_vector())
        .collect();
    let m = Mat::from_fn(images[0].len(), n, |r, c| images[c][r].clone());
    Subspace::span(n, m.kernel(tol), tol)
}
