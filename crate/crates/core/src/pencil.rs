//! The circle action on the orthonormal coframe of the first flow metric and
//! the pencil of closed simple 3-forms `u·E^{326}` it generates.

use crate::error::{HypoError, Result};
use crate::exterior::{annihilator_tol, Form, LieAlgebra, Subspace};
use crate::flow::{closed_form_solution_1, coframe_point, CoframeSample, DiagonalAnsatz};
use crate::linalg::{least_squares, Mat};

const N: usize = 6;
/// Rotation planes `(E^a, E^b)` with `u·(E^a + iE^b) = e^{iθ}(E^a + iE^b)`.
pub const PLANES: [(usize, usize); 3] = [(3, 5), (2, 4), (1, 6)];
/// Pivot tolerance for annihilators of floating-point forms.
const SUBSPACE_TOL: f64 = 1e-9;

/// `u = e^{iθ}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CircleElement {
    pub theta: f64,
}

impl CircleElement {
    pub fn new(theta: f64) -> Self {
        Self { theta }
    }

    /// `ε = e^{2πi/3}`.
    pub fn eisenstein() -> Self {
        Self::new(2.0 * std::f64::consts::FRAC_PI_3)
    }

    /// `R` with `u·E^i = Σ_j R[i][j] E^j`.
    pub fn matrix(&self) -> Mat<f64> {
        let (s, c) = self.theta.sin_cos();
        let mut r = Mat::zeros(N, N);
        for (a, b) in PLANES {
            let (a, b) = (a - 1, b - 1);
            r[(a, a)] = c;
            r[(a, b)] = -s;
            r[(b, a)] = s;
            r[(b, b)] = c;
        }
        r
    }
}

/// Rotate a coframe given by rows (each row a 1-form in some fixed basis).
pub fn rotate_coframe(u: CircleElement, coframe: &Mat<f64>) -> Mat<f64> {
    u.matrix().mul(coframe)
}

/// `u·E^{jk⋯} = (u·E^j)∧(u·E^k)∧⋯`, extended linearly.
pub fn rotate_form(u: CircleElement, a: &Form<f64>) -> Form<f64> {
    let r = u.matrix();
    let images: Vec<Form<f64>> = (0..N).map(|i| Form::from_coeffs(N, 1, r.row(i))).collect();
    a.substitute(&images)
}

/// `E^{326}`.
pub fn base_form() -> Form<f64> {
    Form::monomial(N, &[3, 2, 6], 1.0)
}

/// `−E^{321} + E^{346} + E^{526}`.
pub fn pencil_alpha() -> Form<f64> {
    Form::monomial(N, &[3, 2, 1], -1.0)
        .add(&Form::monomial(N, &[3, 4, 6], 1.0))
        .add(&Form::monomial(N, &[5, 2, 6], 1.0))
}

/// `−E^{341} − E^{521} + E^{546}`.
pub fn pencil_beta() -> Form<f64> {
    Form::monomial(N, &[3, 4, 1], -1.0)
        .add(&Form::monomial(N, &[5, 2, 1], -1.0))
        .add(&Form::monomial(N, &[5, 4, 6], 1.0))
}

/// The coframe of the first flow metric at time `t` (closed-form solution
/// with `g(0) = f(0) = 1`).
pub fn flow_sample(t: f64) -> Result<CoframeSample> {
    let cf = closed_form_solution_1(-2.0, 1.0, 1.0)?;
    Ok(coframe_point(&DiagonalAnsatz::example_one(), &cf.jet(t)?))
}

/// The real and imaginary parts of the complex volume form of a sample.
fn psi(sample: &CoframeSample) -> (&Form<f64>, &Form<f64>) {
    (&sample.su3.psi_plus, &sample.su3.psi_minus)
}

/// Residuals at one `(t, θ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PencilRow {
    pub t: f64,
    pub theta: f64,
    /// `‖d(u·E^{326})‖`.
    pub closedness: f64,
    /// Distance of `u·E^{326}` from `span{E^{326}, E^{541}, ReΨ, ImΨ}`.
    pub span: f64,
    /// `‖(u·E^{326}) ∧ Im[e^{3iθ}Ψ]‖`.
    pub phase: f64,
    /// `‖u·ω − ω‖`.
    pub kahler: f64,
    /// `‖u·Ψ − e^{3iθ}Ψ‖` over real and imaginary parts.
    pub equivariance: f64,
    /// Largest `|ω(v, w)|` on the annihilator of `u·E^{326}`.
    pub lagrangian: f64,
}

impl PencilRow {
    pub fn max_residual(&self) -> f64 {
        [
            self.closedness,
            self.span,
            self.phase,
            self.kahler,
            self.equivariance,
            self.lagrangian,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Distance of `a` from the span of `basis`, by least squares on coefficients.
fn span_residual(a: &Form<f64>, basis: &[Form<f64>]) -> f64 {
    let cols: Vec<Vec<f64>> = basis.iter().map(Form::coeff_vector).collect();
    let m = Mat::from_fn(cols[0].len(), cols.len(), |r, c| cols[c][r]);
    least_squares(&m, &a.coeff_vector()).map_or(f64::INFINITY, |(_, res)| res)
}

pub fn pencil_row(sample: &CoframeSample, u: CircleElement) -> Result<PencilRow> {
    let d = LieAlgebra::from_differentials(sample.point.de.clone());
    let (re, im) = psi(sample);
    let rotated = rotate_form(u, &base_form());
    let (s3, c3) = (3.0 * u.theta).sin_cos();
    let phase_form = re.scale(&s3).add(&im.scale(&c3));
    let span = span_residual(
        &rotated,
        &[
            base_form(),
            Form::monomial(N, &[5, 4, 1], 1.0),
            re.clone(),
            im.clone(),
        ],
    );
    let omega = &sample.su3.omega;
    let equivariance = rotate_form(u, re)
        .sub(&re.scale(&c3).sub(&im.scale(&s3)))
        .max_abs()
        .max(
            rotate_form(u, im)
                .sub(&re.scale(&s3).add(&im.scale(&c3)))
                .max_abs(),
        );
    let v = annihilator_subspace(&rotated)?;
    Ok(PencilRow {
        t: sample.t,
        theta: u.theta,
        closedness: d.d(&rotated).max_abs(),
        span,
        phase: rotated.wedge(&phase_form).max_abs(),
        kahler: rotate_form(u, omega).sub(omega).max_abs(),
        equivariance,
        lagrangian: restriction_norm(omega, &v),
    })
}

/// Twelve equispaced angles plus `π/7`.
pub fn theta_samples() -> Vec<f64> {
    let mut out: Vec<f64> = (0..12)
        .map(|k| k as f64 * std::f64::consts::PI / 6.0)
        .collect();
    out.push(std::f64::consts::PI / 7.0);
    out
}

pub fn pencil_closedness(sample: &CoframeSample, thetas: &[f64]) -> Result<Vec<PencilRow>> {
    thetas
        .iter()
        .map(|&th| pencil_row(sample, CircleElement::new(th)))
        .collect()
}

/// Special-Lagrangian phase check for `u·V`, `V = (E^{326})°`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseCheck {
    pub theta: f64,
    /// `‖(u·E^{326}) ∧ Im[e^{3iθ}Ψ]‖`.
    pub residual: f64,
    /// `‖(u·E^{326}) ∧ ImΨ‖`: zero when `u·V` has the phase of `V`.
    pub same_phase_as_v: f64,
}

impl PhaseCheck {
    pub fn holds(&self, tol: f64) -> bool {
        self.residual <= tol
    }

    pub fn shares_phase_with_v(&self, tol: f64) -> bool {
        self.same_phase_as_v <= tol
    }
}

pub fn slag_phase_check(sample: &CoframeSample, theta: f64) -> PhaseCheck {
    let (re, im) = psi(sample);
    let rotated = rotate_form(CircleElement::new(theta), &base_form());
    let (s3, c3) = (3.0 * theta).sin_cos();
    PhaseCheck {
        theta,
        residual: rotated.wedge(&re.scale(&s3).add(&im.scale(&c3))).max_abs(),
        same_phase_as_v: rotated.wedge(im).max_abs(),
    }
}

/// `{v : v⌟γ = 0}` for a simple 3-form `γ`.
pub fn annihilator_subspace(gamma: &Form<f64>) -> Result<Subspace<f64>> {
    let v = annihilator_tol(gamma, SUBSPACE_TOL);
    if gamma.degree() != 3 || v.dim() != 3 {
        return Err(HypoError::NonSimple(v.dim()));
    }
    Ok(v)
}

/// The rotated subspace `u·V`. Coefficient vectors of 1-forms transform by
/// `Rᵀ`, so tangent vectors transform by `R^{-1} = Rᵀ` as well.
pub fn rotate_subspace(u: CircleElement, v: &Subspace<f64>) -> Subspace<f64> {
    let r = u.matrix().transpose();
    Subspace::span(
        N,
        v.basis().iter().map(|x| r.mul_vec(x)).collect(),
        SUBSPACE_TOL,
    )
}

/// Largest `|a(v_i, v_j)|` over a basis of `v`.
pub fn restriction_norm(a: &Form<f64>, v: &Subspace<f64>) -> f64 {
    let b = v.basis();
    let mut worst: f64 = 0.0;
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            worst = worst.max(a.eval(&[&b[i], &b[j]]).abs());
        }
    }
    worst
}

/// Both sides of `ε·8E^{326} = g²e^{23}∧dt − √3α − 3β − 3√3 e^{145}`, with the
/// right side built from the `e`-coframe expressions of `α` and `β`.
pub fn eisenstein_expansion(sample: &CoframeSample) -> (Form<f64>, Form<f64>) {
    let lhs = rotate_form(CircleElement::eisenstein(), &base_form()).scale(&8.0);
    // e^i = E^i / w_i, dt = E^6
    let w = &sample.weights;
    let g = w[1];
    let e = |ix: &[usize]| {
        let scale: f64 = ix
            .iter()
            .map(|&i| if i == N { 1.0 } else { 1.0 / w[i - 1] })
            .product();
        Form::monomial(N, ix, scale)
    };
    let alpha = e(&[1, 2, 3])
        .scale(&g.powi(4))
        .add(&e(&[3, 4, 6]))
        .sub(&e(&[2, 5, 6]));
    let beta = e(&[1, 3, 4])
        .scale(&-(g * g))
        .add(&e(&[1, 2, 5]).scale(&(g * g)))
        .sub(&e(&[4, 5, 6]).scale(&g.powi(-2)));
    let s3 = 3f64.sqrt();
    let rhs = e(&[2, 3, 6])
        .scale(&(g * g))
        .sub(&alpha.scale(&s3))
        .sub(&beta.scale(&3.0))
        .sub(&e(&[1, 4, 5]).scale(&(3.0 * s3)));
    (lhs, rhs)
}
