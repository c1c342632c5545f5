//! Intrinsic torsion of an SU(2)-structure, split into the components
//! `(f^i, λ, g_i^j, β, γ_i, ω⁻, σ_i⁻)`:
//!
//! ```text
//! dα  = α∧β + Σ f^i ω_i + ω⁻
//! dω_i = γ_i∧ω_i + Σ_j f_i^j α∧ω_j + α∧σ_i⁻,   f_i^j = λ δ_ij + g_i^j
//! ```

use super::{form_is_zero, SU2Structure, DIM};
use crate::error::{HypoError, Result};
use crate::exterior::{Form, LieAlgebra, MultiIndex};
use crate::linalg::Mat;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct TorsionComponents<C> {
    /// The structure the components were computed for.
    pub structure: SU2Structure<C>,
    pub f: [C; 3],
    pub lambda: C,
    /// Antisymmetric: `g[i][j] = g_{i+1}^{j+1}`.
    pub g: [[C; 3]; 3],
    pub beta: Form<C>,
    pub gamma: [Form<C>; 3],
    pub omega_minus: Form<C>,
    pub sigma_minus: [Form<C>; 3],
    /// Largest entry of the symmetric traceless part of `f_i^j`, which vanishes
    /// for a genuine SU(2)-structure.
    pub symmetric_residual: f64,
}

impl<C: Scalar> TorsionComponents<C> {
    /// `f_i^j` for 1-based indices.
    pub fn f_matrix(&self, i: usize, j: usize) -> C {
        let l = if i == j {
            self.lambda.clone()
        } else {
            C::zero()
        };
        l + self.g[i - 1][j - 1].clone()
    }

    /// The scalar block in the compact form `(f^1, f^2, f^3, g_2^3)`.
    pub fn scalar_tuple(&self) -> [C; 4] {
        [
            self.f[0].clone(),
            self.f[1].clone(),
            self.f[2].clone(),
            self.g[1][2].clone(),
        ]
    }

    /// Re-assemble `(dα, dω1, dω2, dω3)` from the components.
    pub fn reassemble(&self) -> (Form<C>, [Form<C>; 3]) {
        let s = &self.structure;
        let mut da = s.alpha.wedge(&self.beta).add(&self.omega_minus);
        for i in 1..=3 {
            da = da.add(&s.omega(i).scale(&self.f[i - 1]));
        }
        let dw = [1, 2, 3].map(|i| {
            let mut inner = self.sigma_minus[i - 1].clone();
            for j in 1..=3 {
                inner = inner.add(&s.omega(j).scale(&self.f_matrix(i, j)));
            }
            self.gamma[i - 1]
                .wedge(s.omega(i))
                .add(&s.alpha.wedge(&inner))
        });
        (da, dw)
    }
}

/// Decompose the torsion of `s` using the differential of `alg`.
pub fn torsion_decompose<C: Scalar>(
    s: &SU2Structure<C>,
    alg: &LieAlgebra<C>,
    tol: f64,
) -> Result<TorsionComponents<C>> {
    let da = alg.d(&s.alpha);
    let dw = [alg.d(&s.omega1), alg.d(&s.omega2), alg.d(&s.omega3)];
    torsion_from_derivatives(s, &da, &dw, tol)
}

/// Decompose given `dα` and `dω_i` directly, for inputs that do not come from
/// a single Lie algebra.
pub fn torsion_from_derivatives<C: Scalar>(
    s: &SU2Structure<C>,
    dalpha: &Form<C>,
    domega: &[Form<C>; 3],
    tol: f64,
) -> Result<TorsionComponents<C>> {
    s.require_valid(tol)?;
    let top = MultiIndex::all(DIM, DIM)[0];
    let vol = s.upsilon().wedge(&s.alpha).coeff(top);
    let ratio = |f: &Form<C>| f.coeff(top) / vol.clone();
    let xi = s.reeb(tol)?;

    let f = [1, 2, 3].map(|i| ratio(&dalpha.wedge(s.omega(i)).wedge(&s.alpha)));
    let beta = dalpha.interior(&xi);
    let mut omega_minus = dalpha.sub(&s.alpha.wedge(&beta));
    for i in 1..=3 {
        omega_minus = omega_minus.sub(&s.omega(i).scale(&f[i - 1]));
    }

    let ann_xi = annihilator_basis(&xi, tol);
    let mut fm: [[C; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| C::zero()));
    let mut gamma: Vec<Form<C>> = Vec::with_capacity(3);
    let mut sigma: Vec<Form<C>> = Vec::with_capacity(3);
    for i in 1..=3 {
        let qi = domega[i - 1].interior(&xi);
        let pi = domega[i - 1].sub(&s.alpha.wedge(&qi));
        gamma.push(solve_gamma(&pi, s.omega(i), &ann_xi, tol)?);
        let mut sig = qi.clone();
        for j in 1..=3 {
            let fij = ratio(&qi.wedge(s.omega(j)).wedge(&s.alpha));
            sig = sig.sub(&s.omega(j).scale(&fij));
            fm[i - 1][j - 1] = fij;
        }
        sigma.push(sig);
    }

    let three = C::from_i64(3);
    let lambda = (fm[0][0].clone() + fm[1][1].clone() + fm[2][2].clone()) / three;
    let half = C::one() / C::from_i64(2);
    let mut g: [[C; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| C::zero()));
    let mut symmetric_residual = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            g[i][j] = (fm[i][j].clone() - fm[j][i].clone()) * half.clone();
            let mut sym = (fm[i][j].clone() + fm[j][i].clone()) * half.clone();
            if i == j {
                sym = sym - lambda.clone();
            }
            symmetric_residual = symmetric_residual.max(sym.to_f64().abs());
        }
    }

    let t = TorsionComponents {
        structure: s.clone(),
        f,
        lambda,
        g,
        beta,
        gamma: [gamma[0].clone(), gamma[1].clone(), gamma[2].clone()],
        omega_minus,
        sigma_minus: [sigma[0].clone(), sigma[1].clone(), sigma[2].clone()],
        symmetric_residual,
    };

    let (ra, rw) = t.reassemble();
    let residual = [
        ra.sub(dalpha),
        rw[0].sub(&domega[0]),
        rw[1].sub(&domega[1]),
        rw[2].sub(&domega[2]),
    ]
    .iter()
    .map(Form::max_abs)
    .fold(symmetric_residual, f64::max);
    let ok = if C::EXACT {
        residual == 0.0
    } else {
        residual <= tol
    };
    if !ok {
        return Err(HypoError::Residual {
            what: "torsion reconstruction".into(),
            value: residual,
            tol,
        });
    }
    Ok(t)
}

/// Basis of the 1-forms vanishing on `xi`.
fn annihilator_basis<C: Scalar>(xi: &[C], tol: f64) -> Vec<Form<C>> {
    let row = Mat::from_rows(vec![xi.to_vec()]);
    row.kernel(tol)
        .into_iter()
        .map(|v| Form::from_coeffs(DIM, 1, &v))
        .collect()
}

/// Solve `γ ∧ ω = p` for `γ` in the span of `basis`.
fn solve_gamma<C: Scalar>(
    p: &Form<C>,
    omega: &Form<C>,
    basis: &[Form<C>],
    tol: f64,
) -> Result<Form<C>> {
    let images: Vec<Vec<C>> = basis
        .iter()
        .map(|b| b.wedge(omega).coeff_vector())
        .collect();
    let rows = images[0].len();
    let m = Mat::from_fn(rows, basis.len(), |r, c| images[c][r].clone());
    let rhs = p.coeff_vector();
    let x = if C::EXACT {
        m.solve(&rhs, tol)
    } else {
        let mf = m.to_f64();
        let bf: Vec<f64> = rhs.iter().map(Scalar::to_f64).collect();
        crate::linalg::least_squares(&mf, &bf)
            .map(|(x, _)| x.into_iter().map(C::from_f64_lossy).collect())
    }
    .ok_or_else(|| HypoError::Residual {
        what: "γ∧ω_i component".into(),
        value: f64::INFINITY,
        tol,
    })?;
    let mut g = Form::zero(DIM, 1);
    for (b, c) in basis.iter().zip(&x) {
        g = g.add(&b.scale(c));
    }
    Ok(g)
}

/// Whether the torsion has the hypo pattern: `f² = f³ = λ = 0`,
/// `g_1² = g_1³ = 0`, `γ_1 = 0`, `σ_1⁻ = 0` and `γ_2 = β = γ_3`.
pub fn hypo_torsion_pattern<C: Scalar>(t: &TorsionComponents<C>, tol: f64) -> bool {
    let z = |c: &C| c.is_zero_tol(tol);
    z(&t.f[1])
        && z(&t.f[2])
        && z(&t.lambda)
        && z(&t.g[0][1])
        && z(&t.g[0][2])
        && form_is_zero(&t.gamma[0], tol)
        && form_is_zero(&t.sigma_minus[0], tol)
        && form_is_zero(&t.gamma[1].sub(&t.beta), tol)
        && form_is_zero(&t.gamma[2].sub(&t.beta), tol)
}

/// Symmetric endomorphism `A` in an adapted frame.
#[derive(Clone, Debug, PartialEq)]
pub struct WeingartenA<C> {
    pub matrix: Mat<C>,
}

impl<C: Scalar> WeingartenA<C> {
    pub fn minus_identity() -> Self {
        Self {
            matrix: Mat::identity(DIM).scale(&-C::one()),
        }
    }
}

/// Index pairs `(k, l)`, `k ≤ l`, of the 15 independent entries of a symmetric 5×5 matrix.
fn symmetric_slots() -> Vec<(usize, usize)> {
    (0..DIM)
        .flat_map(|k| (k..DIM).map(move |l| (k, l)))
        .collect()
}

/// `(dα, dω1, dω2, dω3)` in the reference coframe produced by the connection
/// whose `A`-part is `a` (the su(2)-part does not act on invariant forms).
pub(crate) fn derivatives_from_a<C: Scalar>(a: &Mat<C>) -> (Form<C>, [Form<C>; 3]) {
    let n = DIM;
    let ak = |k: usize| Form::from_coeffs(n, 1, a.row(k - 1));
    let z = || Form::zero(n, 1);
    // connection matrix θ with de^i = -θ^i_j ∧ e^j
    let theta: [[Form<C>; 5]; 5] = [
        [z(), z(), z(), z(), ak(2).neg()],
        [z(), z(), z(), z(), ak(1)],
        [z(), z(), z(), ak(5), ak(4).neg()],
        [z(), z(), ak(5).neg(), z(), ak(3)],
        [ak(2), ak(1).neg(), ak(4), ak(3).neg(), z()],
    ];
    let de: Vec<Form<C>> = (0..n)
        .map(|i| {
            let mut acc = Form::zero(n, 2);
            for j in 0..n {
                acc = acc.sub(&theta[i][j].wedge(&Form::generator(n, j + 1)));
            }
            acc
        })
        .collect();
    let alg = LieAlgebra::from_differentials(de);
    let r = super::reference_structure::<C>();
    (
        alg.d(&r.alpha),
        [alg.d(&r.omega1), alg.d(&r.omega2), alg.d(&r.omega3)],
    )
}

/// `A` from the torsion, in the adapted coframe computed by
/// [`SU2Structure::adapted_coframe`].
pub fn weingarten<C: Scalar>(t: &TorsionComponents<C>, tol: f64) -> Result<WeingartenA<C>> {
    let b = t.structure.adapted_coframe(tol)?;
    weingarten_in_frame(t, &b, tol)
}

/// `A` in the adapted coframe `b` (rows: adapted covectors in the original coframe).
pub fn weingarten_in_frame<C: Scalar>(
    t: &TorsionComponents<C>,
    b: &Mat<C>,
    tol: f64,
) -> Result<WeingartenA<C>> {
    if !hypo_torsion_pattern(t, tol) {
        return Err(HypoError::NotHypo(
            "Weingarten tensor is defined for hypo torsion only".into(),
        ));
    }
    let back = super::reference_structure::<C>().pullback(b);
    if !back.approx_eq(&t.structure, tol) {
        return Err(HypoError::InvalidArgument(
            "frame is not adapted to the structure".into(),
        ));
    }
    let binv = b
        .inverse(tol)
        .ok_or_else(|| HypoError::Singular("adapted coframe".into()))?;
    // old e^i = Σ_a binv[i][a] e'^a
    let images: Vec<Form<C>> = (0..DIM)
        .map(|i| Form::from_coeffs(DIM, 1, binv.row(i)))
        .collect();
    let (da, dw) = t.reassemble();
    let target: Vec<C> = [da, dw[0].clone(), dw[1].clone(), dw[2].clone()]
        .iter()
        .flat_map(|f| f.substitute(&images).coeff_vector())
        .collect();

    let slots = symmetric_slots();
    let columns: Vec<Vec<C>> = slots
        .iter()
        .map(|&(k, l)| {
            let mut e = Mat::zeros(DIM, DIM);
            e[(k, l)] = C::one();
            e[(l, k)] = C::one();
            let (da, dw) = derivatives_from_a(&e);
            [da, dw[0].clone(), dw[1].clone(), dw[2].clone()]
                .iter()
                .flat_map(Form::coeff_vector)
                .collect()
        })
        .collect();
    let m = Mat::from_fn(target.len(), slots.len(), |r, c| columns[c][r].clone());
    let x = if C::EXACT {
        m.solve(&target, tol)
    } else {
        let mf = m.to_f64();
        let bf: Vec<f64> = target.iter().map(Scalar::to_f64).collect();
        crate::linalg::least_squares(&mf, &bf).and_then(|(x, r)| {
            (r <= tol.max(1e-9)).then(|| x.into_iter().map(C::from_f64_lossy).collect())
        })
    }
    .ok_or_else(|| HypoError::NotHypo("torsion not realized by a symmetric A".into()))?;
    let mut a = Mat::zeros(DIM, DIM);
    for (&(k, l), v) in slots.iter().zip(x) {
        a[(k, l)] = v.clone();
        a[(l, k)] = v;
    }
    Ok(WeingartenA { matrix: a })
}
