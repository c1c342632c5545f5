//! Almost contact metric invariants of a hypo structure in terms of its
//! Weingarten tensor `A`, all evaluated in the adapted frame.

use super::{form_is_zero, SU2Structure, WeingartenA, DIM};
use crate::exterior::LieAlgebra;
use crate::linalg::Mat;
use crate::scalar::Scalar;

/// `J` in the adapted frame: `g(JX, ·) = X ⌟ ω1`.
fn j_matrix<C: Scalar>() -> Mat<C> {
    let mut j = Mat::zeros(DIM, DIM);
    j[(1, 0)] = C::one();
    j[(0, 1)] = -C::one();
    j[(3, 2)] = C::one();
    j[(2, 3)] = -C::one();
    j
}

/// `ω1(e_i, e_j)` in the adapted frame.
fn omega1_matrix<C: Scalar>() -> Mat<C> {
    let r = super::reference_structure::<C>();
    Mat::from_fn(DIM, DIM, |i, j| {
        r.omega1.eval(&[&super::unit(DIM, i), &super::unit(DIM, j)])
    })
}

/// `N(e_x, e_y)` as a vector, for
/// `N(X,Y) = α(X)(J A Y - A J Y) - α(Y)(J A X - A J X)`.
pub fn nijenhuis<C: Scalar>(a: &WeingartenA<C>) -> Vec<Vec<Vec<C>>> {
    let j = j_matrix::<C>();
    let c = j.mul(&a.matrix).sub(&a.matrix.mul(&j));
    let alpha = |k: usize| if k == DIM - 1 { C::one() } else { C::zero() };
    (0..DIM)
        .map(|x| {
            (0..DIM)
                .map(|y| {
                    (0..DIM)
                        .map(|r| alpha(x) * c[(r, y)].clone() - alpha(y) * c[(r, x)].clone())
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// `ω1(X, AY) + ω1(AX, Y) = -2 ω1(X, Y)` for all frame pairs.
pub fn contact_check<C: Scalar>(a: &WeingartenA<C>, tol: f64) -> bool {
    let w = omega1_matrix::<C>();
    let lhs = w.mul(&a.matrix).add(&a.matrix.transpose().mul(&w));
    let rhs = w.scale(&C::from_i64(-2));
    lhs.sub(&rhs).max_abs() <= tol
}

#[derive(Clone, Debug, PartialEq)]
pub struct SasakiReport<C> {
    /// `[A, J] = 0` and `dω1 = 0`.
    pub quasi_sasakian: bool,
    /// `A = -id + a α⊗ξ`; the constancy of `a` holds trivially for invariant structures.
    pub sasaki_candidate: bool,
    pub commutator_norm: f64,
    pub a: Option<C>,
}

pub fn sasaki_classify<C: Scalar>(
    s: &SU2Structure<C>,
    alg: &LieAlgebra<C>,
    a: &WeingartenA<C>,
    tol: f64,
) -> SasakiReport<C> {
    let j = j_matrix::<C>();
    let commutator = a.matrix.mul(&j).sub(&j.mul(&a.matrix));
    let commutator_norm = commutator.max_abs();
    let closed = form_is_zero(&alg.d(&s.omega1), tol);
    let shifted = a.matrix.add(&Mat::identity(DIM));
    let last = DIM - 1;
    let only_corner = (0..DIM)
        .all(|r| (0..DIM).all(|c| (r == last && c == last) || shifted[(r, c)].is_zero_tol(tol)));
    SasakiReport {
        quasi_sasakian: commutator_norm <= tol && closed,
        sasaki_candidate: only_corner,
        commutator_norm,
        a: only_corner.then(|| shifted[(last, last)].clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Q};

    fn diag(v: [i64; 5]) -> WeingartenA<Q> {
        let mut m = Mat::zeros(5, 5);
        for (i, x) in v.iter().enumerate() {
            m[(i, i)] = q(*x);
        }
        WeingartenA { matrix: m }
    }

    fn max_entry(n: &[Vec<Vec<Q>>]) -> f64 {
        n.iter()
            .flatten()
            .flatten()
            .map(|x| x.to_f64().abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn nijenhuis_vanishes_when_a_commutes_with_j() {
        assert_eq!(max_entry(&nijenhuis(&diag([-1; 5]))), 0.0);
        assert_eq!(max_entry(&nijenhuis(&diag([-1, -1, -1, -1, 4]))), 0.0);
        let n = nijenhuis(&diag([1, -1, 0, 0, 0]));
        assert!(max_entry(&n) > 0.0);
        // N(ξ, e1) = J A e1 - A J e1 = e2 + e2
        assert_eq!(n[4][0], vec![q(0), q(2), q(0), q(0), q(0)]);
    }

    #[test]
    fn contact_condition() {
        assert!(contact_check(&diag([-1; 5]), 0.0));
        assert!(contact_check(&diag([-1, -1, -1, -1, 7]), 0.0));
        assert!(!contact_check(&diag([0; 5]), 0.0));
    }

    #[test]
    fn sasaki_classification() {
        let s = SU2Structure::reference();
        let alg = LieAlgebra::abelian(5);
        let r = sasaki_classify(&s, &alg, &diag([-1; 5]), 0.0);
        assert!(r.quasi_sasakian && r.sasaki_candidate);
        assert_eq!(r.a, Some(q(0)));
        let r = sasaki_classify(&s, &alg, &diag([-2; 5]), 0.0);
        assert!(r.quasi_sasakian && !r.sasaki_candidate);
    }
}
