//! SU(2)-structures on five-dimensional coframes, given as quadruplets
//! `(α, ω1, ω2, ω3)`.

mod sasaki;
mod su3;
mod torsion;

pub use sasaki::{contact_check, nijenhuis, sasaki_classify, SasakiReport};
pub use su3::SU3Residuals;
pub use su3::{conical_lift, su2_restrict, su3_lift, SU3Structure};
pub use torsion::{
    hypo_torsion_pattern, torsion_decompose, torsion_from_derivatives, weingarten,
    weingarten_in_frame, TorsionComponents, WeingartenA,
};

use crate::error::{HypoError, Result};
use crate::exterior::{annihilator_tol, parse_form, Form, LieAlgebra};
use crate::linalg::Mat;
use crate::scalar::{Scalar, Q};

/// Dimension of the manifolds carrying SU(2)-structures.
pub const DIM: usize = 5;

#[derive(Clone, Debug, PartialEq)]
pub struct SU2Structure<C = Q> {
    pub alpha: Form<C>,
    pub omega1: Form<C>,
    pub omega2: Form<C>,
    pub omega3: Form<C>,
}

/// Outcome of [`SU2Structure::validate`].
#[derive(Clone, Debug)]
pub struct Validation<C> {
    /// `υ = ω1 ∧ ω1`.
    pub upsilon: Form<C>,
    /// `ωi ∧ ωj = δij υ` for all pairs.
    pub orthogonal: bool,
    pub upsilon_nonzero: bool,
    pub alpha_upsilon_nonzero: bool,
    /// `ω3(X, Y) > 0` for the witness pair with `X ⌟ ω1 = Y ⌟ ω2`.
    pub oriented: bool,
    pub orientation_value: C,
    /// Largest coefficient of `ωi∧ωj - δij υ`.
    pub orthogonality_residual: f64,
}

impl<C: Scalar> Validation<C> {
    pub fn is_valid(&self) -> bool {
        self.orthogonal && self.upsilon_nonzero && self.alpha_upsilon_nonzero && self.oriented
    }

    /// First violated condition, for diagnostics.
    pub fn failure(&self) -> Option<&'static str> {
        if !self.upsilon_nonzero {
            Some("degenerate: ω1∧ω1 = 0")
        } else if !self.orthogonal {
            Some("ωi∧ωj ≠ δij υ")
        } else if !self.alpha_upsilon_nonzero {
            Some("α∧υ = 0")
        } else if !self.oriented {
            Some("orientation: ω3(X,Y) ≤ 0 for X⌟ω1 = Y⌟ω2")
        } else {
            None
        }
    }
}

/// Residual norms of the three hypo conditions.
#[derive(Clone, Debug, PartialEq)]
pub struct HypoCheck {
    pub hypo: bool,
    /// `|dω1|`, `|d(α∧ω2)|`, `|d(α∧ω3)|`.
    pub residuals: [f64; 3],
}

pub(crate) fn unit<C: Scalar>(n: usize, k: usize) -> Vec<C> {
    (0..n)
        .map(|i| if i == k { C::one() } else { C::zero() })
        .collect()
}

pub(crate) fn form_is_zero<C: Scalar>(f: &Form<C>, tol: f64) -> bool {
    if C::EXACT {
        f.is_zero()
    } else {
        f.max_abs() <= tol
    }
}

impl SU2Structure<Q> {
    /// The standard quadruplet `α = e^5`, `ω1 = e^{12}+e^{34}`,
    /// `ω2 = e^{13}+e^{42}`, `ω3 = e^{14}+e^{23}`.
    pub fn reference() -> Self {
        Self::parse("5", "12+34", "13+42", "14+23").expect("reference forms parse")
    }

    pub fn parse(alpha: &str, omega1: &str, omega2: &str, omega3: &str) -> Result<Self> {
        Ok(Self {
            alpha: parse_form(alpha, DIM, 1)?,
            omega1: parse_form(omega1, DIM, 2)?,
            omega2: parse_form(omega2, DIM, 2)?,
            omega3: parse_form(omega3, DIM, 2)?,
        })
    }

    pub fn to_f64(&self) -> SU2Structure<f64> {
        self.map(Scalar::to_f64)
    }
}

impl<C: Scalar> SU2Structure<C> {
    pub fn new(alpha: Form<C>, omega1: Form<C>, omega2: Form<C>, omega3: Form<C>) -> Result<Self> {
        let shapes = [(&alpha, 1), (&omega1, 2), (&omega2, 2), (&omega3, 2)];
        for (f, deg) in shapes {
            if f.dim() != DIM || f.degree() != deg {
                return Err(HypoError::InvalidStructure(format!(
                    "expected a {deg}-form over {DIM} generators, got degree {} over {}",
                    f.degree(),
                    f.dim()
                )));
            }
        }
        Ok(Self {
            alpha,
            omega1,
            omega2,
            omega3,
        })
    }

    pub fn omega(&self, i: usize) -> &Form<C> {
        match i {
            1 => &self.omega1,
            2 => &self.omega2,
            3 => &self.omega3,
            _ => panic!("ω index must be 1, 2 or 3"),
        }
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D + Copy) -> SU2Structure<D> {
        SU2Structure {
            alpha: self.alpha.map(f),
            omega1: self.omega1.map(f),
            omega2: self.omega2.map(f),
            omega3: self.omega3.map(f),
        }
    }

    /// Pull back along the coframe change `e'^a = Σ_i b[a][i] e^i`:
    /// every `e^a` in the forms is replaced by row `a` of `b`.
    pub fn pullback(&self, b: &Mat<C>) -> Self {
        let images: Vec<Form<C>> = (0..DIM)
            .map(|a| Form::from_coeffs(DIM, 1, b.row(a)))
            .collect();
        self.map_forms(|f| f.substitute(&images))
    }

    pub(crate) fn map_forms(&self, f: impl Fn(&Form<C>) -> Form<C>) -> Self {
        Self {
            alpha: f(&self.alpha),
            omega1: f(&self.omega1),
            omega2: f(&self.omega2),
            omega3: f(&self.omega3),
        }
    }

    /// Rotate `(ω2, ω3)` by the angle with the given cosine and sine.
    pub fn rotate_phase(&self, cos: &C, sin: &C) -> Self {
        Self {
            alpha: self.alpha.clone(),
            omega1: self.omega1.clone(),
            omega2: self.omega2.scale(cos).sub(&self.omega3.scale(sin)),
            omega3: self.omega2.scale(sin).add(&self.omega3.scale(cos)),
        }
    }

    pub fn upsilon(&self) -> Form<C> {
        self.omega1.wedge(&self.omega1)
    }

    pub fn validate(&self, tol: f64) -> Validation<C> {
        let upsilon = self.upsilon();
        let mut residual = 0.0f64;
        for i in 1..=3 {
            for j in i..=3 {
                let w = self.omega(i).wedge(self.omega(j));
                let r = if i == j { w.sub(&upsilon) } else { w };
                residual = residual.max(r.max_abs());
            }
        }
        let orthogonal = if C::EXACT {
            residual == 0.0
        } else {
            residual <= tol
        };
        let upsilon_nonzero = !form_is_zero(&upsilon, tol);
        let alpha_upsilon_nonzero = !form_is_zero(&self.alpha.wedge(&upsilon), tol);
        let orientation_value = if orthogonal && upsilon_nonzero {
            self.orientation_witness(tol).unwrap_or_else(C::zero)
        } else {
            C::zero()
        };
        let oriented = orientation_value.to_f64() > tol;
        Validation {
            upsilon,
            orthogonal,
            upsilon_nonzero,
            alpha_upsilon_nonzero,
            oriented,
            orientation_value,
            orthogonality_residual: residual,
        }
    }

    /// Pick `X = e_k` with `X⌟ω1 ≠ 0`, solve `Y⌟ω2 = X⌟ω1` and return `ω3(X, Y)`.
    fn orientation_witness(&self, tol: f64) -> Option<C> {
        let contraction2 = Mat::from_fn(DIM, DIM, |r, c| {
            self.omega2.contract_basis(c + 1).coeff_vector()[r].clone()
        });
        for k in 0..DIM {
            let x: Vec<C> = unit(DIM, k);
            let target = self.omega1.interior(&x);
            if form_is_zero(&target, tol) {
                continue;
            }
            let y = contraction2.solve(&target.coeff_vector(), tol)?;
            return Some(self.omega3.eval(&[&x, &y]));
        }
        None
    }

    pub fn require_valid(&self, tol: f64) -> Result<Validation<C>> {
        let v = self.validate(tol);
        match v.failure() {
            None => Ok(v),
            Some(reason) => Err(HypoError::InvalidStructure(reason.to_string())),
        }
    }

    /// The Reeb vector: spans `υ^o` and satisfies `α(ξ) = 1`.
    pub fn reeb(&self, tol: f64) -> Result<Vec<C>> {
        let ann = annihilator_tol(&self.upsilon(), tol);
        if ann.dim() != 1 {
            return Err(HypoError::InvalidStructure(format!(
                "annihilator of υ has dimension {}",
                ann.dim()
            )));
        }
        let v = ann.basis()[0].clone();
        let a = self.alpha.eval(&[&v]);
        if a.is_zero_tol(tol) {
            return Err(HypoError::InvalidStructure("α vanishes on υ^o".into()));
        }
        Ok(v.into_iter().map(|x| x / a.clone()).collect())
    }

    /// Gram matrix `g(e_k, e_l)` of the induced metric in the dual frame.
    ///
    /// On `α^o` the metric is `g(X,Y) vol = 2 (X⌟ω1)∧(Y⌟ω2)∧ω3∧α`
    /// with `vol = υ∧α`; `ξ` is unit and orthogonal to `α^o`.
    pub fn metric(&self, tol: f64) -> Result<Mat<C>> {
        let vol = self.upsilon().wedge(&self.alpha);
        let top = crate::exterior::MultiIndex::all(DIM, DIM)[0];
        let vol_c = vol.coeff(top);
        if vol_c.is_zero_tol(tol) {
            return Err(HypoError::InvalidStructure("α∧υ = 0".into()));
        }
        let two = C::from_i64(2);
        let w3a = self.omega3.wedge(&self.alpha);
        let c1: Vec<Form<C>> = (1..=DIM).map(|k| self.omega1.contract_basis(k)).collect();
        let c2: Vec<Form<C>> = (1..=DIM).map(|k| self.omega2.contract_basis(k)).collect();
        let a: Vec<C> = (1..=DIM).map(|k| self.alpha.coeff_of(&[k])).collect();
        Ok(Mat::from_fn(DIM, DIM, |k, l| {
            let t = c1[k].wedge(&c2[l]).wedge(&w3a).coeff(top);
            two.clone() * t / vol_c.clone() + a[k].clone() * a[l].clone()
        }))
    }

    /// Matrix of `J_i`, defined by `g(J_i X, ·) = X ⌟ ω_i`, acting on column vectors.
    pub fn complex_structure(&self, i: usize, tol: f64) -> Result<Mat<C>> {
        let g = self.metric(tol)?;
        let ginv = g
            .inverse(tol)
            .ok_or_else(|| HypoError::InvalidStructure("degenerate metric".into()))?;
        let w = Mat::from_fn(DIM, DIM, |r, c| {
            self.omega(i).contract_basis(c + 1).coeff_vector()[r].clone()
        });
        Ok(ginv.mul(&w))
    }

    /// Coframe change `B` (rows are the new coframe in old coordinates) with
    /// `B^*(reference forms) = (α, ωi)`.
    ///
    /// In exact mode the first frame vector is normalized by a rational square
    /// root, so a candidate with square norm must exist among the projected
    /// basis vectors and their pairwise sums and differences.
    pub fn adapted_coframe(&self, tol: f64) -> Result<Mat<C>> {
        self.require_valid(tol)?;
        let g = self.metric(tol)?;
        let xi = self.reeb(tol)?;
        let j: Vec<Mat<C>> = (1..=3)
            .map(|i| self.complex_structure(i, tol))
            .collect::<Result<_>>()?;
        for x in self.frame_candidates(&xi) {
            let norm2 = quad(&g, &x, &x);
            if norm2.to_f64() <= tol {
                continue;
            }
            let Some(norm) = norm2.sqrt_checked() else {
                continue;
            };
            let e1: Vec<C> = x.iter().map(|v| v.clone() / norm.clone()).collect();
            let mut cols = vec![e1.clone()];
            cols.extend(j.iter().map(|m| m.mul_vec(&e1)));
            cols.push(xi.clone());
            let frame = Mat::from_fn(DIM, DIM, |r, c| cols[c][r].clone());
            let Some(b) = frame.inverse(tol) else {
                continue;
            };
            let back = reference_structure::<C>().pullback(&b);
            if back.approx_eq(self, tol) {
                return Ok(b);
            }
        }
        Err(HypoError::InvalidStructure(
            "no frame vector with rational norm; use floating-point mode".into(),
        ))
    }

    fn frame_candidates(&self, xi: &[C]) -> Vec<Vec<C>> {
        let project = |v: Vec<C>| -> Vec<C> {
            let a = self.alpha.eval(&[&v]);
            v.iter()
                .zip(xi)
                .map(|(x, r)| x.clone() - a.clone() * r.clone())
                .collect()
        };
        let mut out = Vec::new();
        for k in 0..DIM {
            out.push(project(unit(DIM, k)));
        }
        for k in 0..DIM {
            for l in k + 1..DIM {
                for s in [C::one(), -C::one()] {
                    let mut v: Vec<C> = unit(DIM, k);
                    v[l] = s;
                    out.push(project(v));
                }
            }
        }
        out
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        [
            self.alpha.sub(&other.alpha),
            self.omega1.sub(&other.omega1),
            self.omega2.sub(&other.omega2),
            self.omega3.sub(&other.omega3),
        ]
        .iter()
        .all(|f| form_is_zero(f, tol))
    }

    /// `dω1 = 0`, `d(α∧ω2) = 0`, `d(α∧ω3) = 0`.
    pub fn is_hypo(&self, alg: &LieAlgebra<C>, tol: f64) -> HypoCheck {
        let forms = [
            alg.d(&self.omega1),
            alg.d(&self.alpha.wedge(&self.omega2)),
            alg.d(&self.alpha.wedge(&self.omega3)),
        ];
        HypoCheck {
            hypo: forms.iter().all(|f| form_is_zero(f, tol)),
            residuals: [forms[0].norm(), forms[1].norm(), forms[2].norm()],
        }
    }

    /// The `(α, ω1, Φ)` description: `α∧ω1² ≠ 0`, `ω1∧Φ = 0`, `Φ² = 0`,
    /// `2ω1² = Φ∧Φ̄`, with `Φ = ω2 + iω3` expanded into real and imaginary parts.
    pub fn complex_description_holds(&self, tol: f64) -> bool {
        let (re, im) = (&self.omega2, &self.omega3);
        let w2 = self.upsilon();
        let phi_sq_re = re.wedge(re).sub(&im.wedge(im));
        let phi_sq_im = re.wedge(im).scale(&C::from_i64(2));
        let phi_phibar = re.wedge(re).add(&im.wedge(im));
        !form_is_zero(&self.alpha.wedge(&w2), tol)
            && form_is_zero(&self.omega1.wedge(re), tol)
            && form_is_zero(&self.omega1.wedge(im), tol)
            && form_is_zero(&phi_sq_re, tol)
            && form_is_zero(&phi_sq_im, tol)
            && form_is_zero(&w2.scale(&C::from_i64(2)).sub(&phi_phibar), tol)
    }
}

/// The reference quadruplet with coefficients in `C`.
pub fn reference_structure<C: Scalar>() -> SU2Structure<C> {
    SU2Structure::reference().map(C::from_q)
}

pub(crate) fn quad<C: Scalar>(g: &Mat<C>, x: &[C], y: &[C]) -> C {
    let gy = g.mul_vec(y);
    x.iter()
        .zip(&gy)
        .fold(C::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
}
