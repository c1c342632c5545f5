use super::{form_is_zero, unit, SU2Structure, DIM};
use crate::error::{HypoError, Result};
use crate::exterior::{Form, LieAlgebra};
use crate::scalar::Scalar;

/// `(ω, ψ₊, ψ₋)` over a six-dimensional coframe, with `Ψ = ψ₊ + iψ₋`.
#[derive(Clone, Debug, PartialEq)]
pub struct SU3Structure<C> {
    pub omega: Form<C>,
    pub psi_plus: Form<C>,
    pub psi_minus: Form<C>,
}

/// Residuals of the algebraic identities `ω∧ψ± = 0` and `ψ₊∧ψ₋ = (2/3)ω³`.
#[derive(Clone, Debug, PartialEq)]
pub struct SU3Residuals {
    pub omega_psi_plus: f64,
    pub omega_psi_minus: f64,
    pub normalization: f64,
}

impl<C: Scalar> SU3Structure<C> {
    pub fn residuals(&self) -> SU3Residuals {
        let w3 = self.omega.wedge(&self.omega).wedge(&self.omega);
        let two_thirds = C::from_ratio(2, 3);
        SU3Residuals {
            omega_psi_plus: self.omega.wedge(&self.psi_plus).max_abs(),
            omega_psi_minus: self.omega.wedge(&self.psi_minus).max_abs(),
            normalization: self
                .psi_plus
                .wedge(&self.psi_minus)
                .sub(&w3.scale(&two_thirds))
                .max_abs(),
        }
    }

    /// `dω = 0 = dΨ` for constant-coefficient forms over `alg`.
    pub fn is_integrable(&self, alg: &LieAlgebra<C>, tol: f64) -> bool {
        [&self.omega, &self.psi_plus, &self.psi_minus]
            .iter()
            .all(|f| form_is_zero(&alg.d(f), tol))
    }
}

/// `ω = ω1 + α∧e^6`, `Ψ = (ω2 + iω3)∧(α + ie^6)`.
pub fn su3_lift<C: Scalar>(s: &SU2Structure<C>) -> SU3Structure<C> {
    conical_parts(s, C::one(), C::one(), C::one())
}

/// The conical structure at radius `t`: `ω = t²ω1 + tα∧dt`, `Ψ = t²Φ∧(tα + i dt)`.
pub fn conical_lift<C: Scalar>(s: &SU2Structure<C>, t: &C) -> SU3Structure<C> {
    let t2 = t.clone() * t.clone();
    conical_parts(s, t2.clone(), t.clone(), t2)
}

/// `ω = a ω1 + b α∧e^6`, `Ψ = c Φ∧(b α + i e^6)`.
fn conical_parts<C: Scalar>(s: &SU2Structure<C>, a: C, b: C, c: C) -> SU3Structure<C> {
    let n = DIM + 1;
    let ext = |f: &Form<C>| f.extend_dim(n);
    let (alpha, w1, w2, w3) = (
        ext(&s.alpha),
        ext(&s.omega1),
        ext(&s.omega2),
        ext(&s.omega3),
    );
    let e6 = Form::generator(n, n);
    let ba = alpha.scale(&b);
    SU3Structure {
        omega: w1.scale(&a).add(&ba.wedge(&e6)),
        psi_plus: w2.wedge(&ba).sub(&w3.wedge(&e6)).scale(&c),
        psi_minus: w3.wedge(&ba).add(&w2.wedge(&e6)).scale(&c),
    }
}

/// The SU(2)-structure induced on the hyperplane orthogonal to the coframe
/// direction `normal_index`: `α = -V⌟ω`, `Φ = -iV⌟Ψ`, `ω1 = ω` restricted.
pub fn su2_restrict<C: Scalar>(
    n: &SU3Structure<C>,
    normal_index: usize,
) -> Result<SU2Structure<C>> {
    let dim = n.omega.dim();
    if dim != DIM + 1 || normal_index == 0 || normal_index > dim {
        return Err(HypoError::InvalidArgument(format!(
            "normal index {normal_index} invalid for a {dim}-dimensional coframe"
        )));
    }
    let v: Vec<C> = unit(dim, normal_index - 1);
    let cut = |f: Form<C>| f.delete_generator(normal_index);
    SU2Structure::new(
        cut(n.omega.interior(&v).neg()),
        cut(n.omega.clone()),
        cut(n.psi_minus.interior(&v)),
        cut(n.psi_plus.interior(&v).neg()),
    )
}
