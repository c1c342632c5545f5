//! Levi-Civita connection and curvature of an orthonormal coframe.
//!
//! A [`CoframePoint`] records `dE^i` at one point as 2-forms in the coframe
//! itself. Left-invariant coframes on a Lie group have constant structure
//! coefficients; coframes on `G × (a, b)` built from a flow have coefficients
//! depending on `t`, and their `t`-derivatives are supplied separately so the
//! curvature can be formed without numerical differentiation.

mod codazzi;
mod holonomy;

pub use codazzi::{codazzi_check, nabla_theta, NablaTheta};
pub use holonomy::{
    holonomy_span, j_matrix, HolonomySpan, COMMUTATOR_TOL, SPAN_THRESHOLD, TRACE_TOL,
};

use crate::error::{HypoError, Result};
use crate::exterior::{Form, LieAlgebra};
use crate::linalg::Mat;
use crate::scalar::Scalar;

/// Differentials of an orthonormal coframe at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct CoframePoint<C> {
    pub de: Vec<Form<C>>,
    /// `(k, ∂t dE^i)` when the coefficients of `dE^i` depend on a time
    /// coordinate with `dt = E^k` (1-based).
    pub time: Option<(usize, Vec<Form<C>>)>,
    /// Gram matrix of the coframe; must be the identity.
    pub gram: Mat<C>,
}

impl<C: Scalar> CoframePoint<C> {
    pub fn new(de: Vec<Form<C>>) -> Self {
        let n = de.len();
        Self {
            de,
            time: None,
            gram: Mat::identity(n),
        }
    }

    pub fn from_algebra(alg: &LieAlgebra<C>) -> Self {
        Self::new(alg.differentials().to_vec())
    }

    pub fn with_time(mut self, k: usize, de_dt: Vec<Form<C>>) -> Self {
        self.time = Some((k, de_dt));
        self
    }

    pub fn dim(&self) -> usize {
        self.de.len()
    }

    fn check(&self) -> Result<()> {
        let n = self.dim();
        for f in &self.de {
            if f.dim() != n || f.degree() != 2 {
                return Err(HypoError::InvalidArgument(format!(
                    "dE must be 2-forms on {n} generators"
                )));
            }
        }
        if let Some((k, d)) = &self.time {
            if *k == 0 || *k > n || d.len() != n {
                return Err(HypoError::InvalidArgument(
                    "bad time derivative data".into(),
                ));
            }
        }
        if self.gram.nrows() != n || self.gram.sub(&Mat::identity(n)).max_abs() > 1e-12 {
            return Err(HypoError::InvalidArgument(
                "coframe is not orthonormal".into(),
            ));
        }
        Ok(())
    }
}

/// `c[i][j][k]` with `dE^i = ½ Σ c_ijk E^j∧E^k`, antisymmetric in `j, k`.
fn structure_coeffs<C: Scalar>(de: &[Form<C>]) -> Vec<Vec<Vec<C>>> {
    let n = de.len();
    let mut c = vec![vec![vec![C::zero(); n]; n]; n];
    for (i, f) in de.iter().enumerate() {
        for (m, v) in f.terms() {
            let idx = m.indices();
            let (j, k) = (idx[0] - 1, idx[1] - 1);
            c[i][j][k] = v.clone();
            c[i][k][j] = -v.clone();
        }
    }
    c
}

/// `Γ_ijk = ½(c_ijk + c_jki − c_kij)`, so that `ω^i_j = Σ_k Γ_ijk E^k`.
fn christoffel<C: Scalar>(c: &[Vec<Vec<C>>]) -> Vec<Vec<Vec<C>>> {
    let n = c.len();
    let half = C::from_ratio(1, 2);
    let mut g = vec![vec![vec![C::zero(); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                g[i][j][k] =
                    half.clone() * (c[i][j][k].clone() + c[j][k][i].clone() - c[k][i][j].clone());
            }
        }
    }
    g
}

/// Connection 1-forms `ω^i_j` of the Levi-Civita connection.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionForms<C> {
    pub omega: Vec<Vec<Form<C>>>,
    /// `Γ_ijk = ω^i_j(E_k)`.
    pub gamma: Vec<Vec<Vec<C>>>,
}

impl<C: Scalar> ConnectionForms<C> {
    pub fn dim(&self) -> usize {
        self.omega.len()
    }

    /// Largest coefficient of `dE^i + ω^i_j∧E^j`.
    pub fn structure_residual(&self, point: &CoframePoint<C>) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut r = point.de[i].clone();
                for j in 0..n {
                    r = r.add(&self.omega[i][j].wedge(&Form::generator(n, j + 1)));
                }
                r.max_abs()
            })
            .fold(0.0, f64::max)
    }

    /// The connection as a matrix of 1-forms, entry `(i, j)` = `ω^i_j`.
    pub fn matrix(&self) -> &[Vec<Form<C>>] {
        &self.omega
    }
}

pub fn levi_civita<C: Scalar>(point: &CoframePoint<C>) -> Result<ConnectionForms<C>> {
    point.check()?;
    let n = point.dim();
    let gamma = christoffel(&structure_coeffs(&point.de));
    let omega = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Form::from_coeffs(n, 1, &gamma[i][j]))
                .collect()
        })
        .collect();
    Ok(ConnectionForms { omega, gamma })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureData<C> {
    /// `Ω^i_j = dω^i_j + ω^i_k∧ω^k_j`.
    pub omega: Vec<Vec<Form<C>>>,
    /// `ric_jl = Σ_i Ω^i_j(E_i, E_l)`.
    pub ricci: Mat<C>,
    pub scalar: C,
}

impl<C: Scalar> CurvatureData<C> {
    pub fn dim(&self) -> usize {
        self.omega.len()
    }

    /// Largest coefficient of `Ω^i_j∧E^j` (first Bianchi identity).
    pub fn bianchi_residual(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut r = Form::zero(n, 3);
                for j in 0..n {
                    r = r.add(&self.omega[i][j].wedge(&Form::generator(n, j + 1)));
                }
                r.max_abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn ricci_sup_norm(&self) -> f64 {
        self.ricci.max_abs()
    }

    /// The endomorphism `Ω(E_a, E_b)` (0-based `a`, `b`).
    pub fn endomorphism(&self, a: usize, b: usize) -> Mat<C> {
        let n = self.dim();
        Mat::from_fn(n, n, |i, j| self.omega[i][j].coeff_of(&[a + 1, b + 1]))
    }
}

pub fn curvature<C: Scalar>(
    conn: &ConnectionForms<C>,
    point: &CoframePoint<C>,
) -> Result<CurvatureData<C>> {
    point.check()?;
    let n = point.dim();
    if conn.dim() != n {
        return Err(HypoError::DimensionMismatch {
            left: conn.dim(),
            right: n,
        });
    }
    let dgamma = point
        .time
        .as_ref()
        .map(|(k, d)| (*k, christoffel(&structure_coeffs(d))));
    let mut omega = vec![vec![Form::zero(n, 2); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut f = Form::zero(n, 2);
            for k in 0..n {
                let g = &conn.gamma[i][j][k];
                if !g.is_zero_tol(0.0) {
                    f = f.add(&point.de[k].scale(g));
                }
                f = f.add(&conn.omega[i][k].wedge(&conn.omega[k][j]));
            }
            if let Some((t, dg)) = &dgamma {
                let dt = Form::generator(n, *t);
                f = f.add(&dt.wedge(&Form::from_coeffs(n, 1, &dg[i][j])));
            }
            omega[i][j] = f;
        }
    }
    let ricci = Mat::from_fn(n, n, |j, l| {
        (0..n).fold(C::zero(), |acc, i| {
            acc + omega[i][j].coeff_of(&[i + 1, l + 1])
        })
    });
    let scalar = (0..n).fold(C::zero(), |acc, i| acc + ricci[(i, i)].clone());
    Ok(CurvatureData {
        omega,
        ricci,
        scalar,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{qr, Q};

    #[test]
    fn flat_torus() {
        let p = CoframePoint::from_algebra(&LieAlgebra::<Q>::abelian(4));
        let conn = levi_civita(&p).unwrap();
        assert!(conn.omega.iter().flatten().all(Form::is_zero));
        let curv = curvature(&conn, &p).unwrap();
        assert!(curv.omega.iter().flatten().all(Form::is_zero));
        assert_eq!(curv.ricci.max_abs(), 0.0);
    }

    #[test]
    fn round_three_sphere() {
        let alg = LieAlgebra::parse_salamon("(23,31,12)").unwrap();
        let p = CoframePoint::from_algebra(&alg);
        let conn = levi_civita(&p).unwrap();
        assert_eq!(conn.structure_residual(&p), 0.0);
        let curv = curvature(&conn, &p).unwrap();
        assert_eq!(curv.ricci, Mat::identity(3).scale(&qr(1, 2)));
        assert_eq!(curv.scalar, qr(3, 2));
        assert_eq!(curv.bianchi_residual(), 0.0);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(conn.omega[i][j], conn.omega[j][i].neg());
                assert_eq!(curv.omega[i][j], curv.omega[j][i].neg());
            }
        }
    }

    #[test]
    fn heisenberg_ricci() {
        // Milnor: ric = diag(-1/2, -1/2, 1/2) for de3 = e12.
        let alg = LieAlgebra::parse_salamon("(0,0,12)").unwrap();
        let p = CoframePoint::from_algebra(&alg);
        let curv = curvature(&levi_civita(&p).unwrap(), &p).unwrap();
        let diag: Vec<Q> = (0..3).map(|i| curv.ricci[(i, i)].clone()).collect();
        assert_eq!(diag, vec![qr(-1, 2), qr(-1, 2), qr(1, 2)]);
    }

    #[test]
    fn rejects_non_orthonormal() {
        let mut p = CoframePoint::from_algebra(&LieAlgebra::<Q>::abelian(2));
        p.gram = Mat::identity(2).scale(&qr(2, 1));
        assert!(levi_civita(&p).is_err());
    }
}
